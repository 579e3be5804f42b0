//! Whitespace-separated plot series. Lines starting with `#` are headers;
//! numbers use the same formatting as the CSV reports, so a capped radius
//! shows up as `inf`.

use std::fmt::Write as _;
use std::path::Path;

use gns_core::diagnostics::{fmt_num, BoundReport};

pub const RATIO_FILE: &str = "ratio.dat";
pub const RADII_FILE: &str = "radii.dat";
pub const ETA_FILE: &str = "eta.dat";

pub fn ratio_series(report: &BoundReport) -> String {
    let mut s = String::from(
        "# t ratio\n# ratio = measured_radius / (lambda(t) sqrt(t)); inf marks a capped radius\n",
    );
    for (t, r) in report.times.iter().zip(&report.ratio) {
        let _ = writeln!(s, "{} {}", fmt_num(*t), fmt_num(*r));
    }
    s
}

pub fn radii_series(report: &BoundReport) -> String {
    let mut s = String::from(
        "# t measured_radius predictor\n# predictor = lambda(t) sqrt(t); a capped measured radius is the window cap\n",
    );
    for i in 0..report.len() {
        let _ = writeln!(
            s,
            "{} {} {}",
            fmt_num(report.times[i]),
            fmt_num(report.measured_radius[i]),
            fmt_num(report.predictor[i])
        );
    }
    s
}

/// `J` against the tail functional at time `t`.
pub fn tail_series(label: &str, t: f64, tails: &[(f64, f64)]) -> String {
    let mut s = format!("# J {label}\n# sup over s <= {} of the tail above the cutoff\n", fmt_num(t));
    for (j, v) in tails {
        let _ = writeln!(s, "{} {}", fmt_num(*j), fmt_num(*v));
    }
    s
}

/// Writes the three series into `dir`, returning the file names.
pub fn emit_plot_data(
    dir: &Path,
    report: &BoundReport,
    tail_label: &str,
    tail_time: f64,
    tails: &[(f64, f64)],
) -> std::io::Result<Vec<String>> {
    std::fs::write(dir.join(RATIO_FILE), ratio_series(report))?;
    std::fs::write(dir.join(RADII_FILE), radii_series(report))?;
    std::fs::write(dir.join(ETA_FILE), tail_series(tail_label, tail_time, tails))?;
    Ok(vec![RATIO_FILE.into(), RADII_FILE.into(), ETA_FILE.into()])
}
