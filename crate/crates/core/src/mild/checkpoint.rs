//! Trajectory checkpoints: one binary file of spectral records plus a JSON
//! manifest.
//!
//! State `i` occupies records `3i, 3i+1, 3i+2` (components in order), each in
//! the [`crate::spectral::io`] record format.

use serde::{Deserialize, Serialize};
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use super::{MildError, Trajectory};
use crate::operator::VelocityField;
use crate::spectral::io::{read_field, record_bytes, write_field, HEADER_BYTES};
use crate::spectral::Grid;

pub const TRAJECTORY_FORMAT: &str = "gns-trajectory/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridInfo {
    pub n_per_axis: usize,
    pub period: f64,
    pub dealias_fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryManifest {
    pub format: String,
    /// File name of the binary records, relative to the manifest.
    pub data_file: String,
    pub grid: GridInfo,
    pub times: Vec<f64>,
    pub config_hash: String,
    pub records: usize,
    pub header_bytes: usize,
    pub record_bytes: usize,
}

impl TrajectoryManifest {
    pub fn grid(&self) -> Result<Grid, MildError> {
        Ok(Grid::new(self.grid.n_per_axis, self.grid.period)?
            .with_dealias_fraction(self.grid.dealias_fraction)?)
    }
}

/// Writes `<dir>/<stem>.bin` and `<dir>/<stem>.json`, returning the manifest path.
pub fn write_trajectory(
    dir: &Path,
    stem: &str,
    traj: &Trajectory,
    config_hash: &str,
) -> Result<PathBuf, MildError> {
    let data_file = format!("{stem}.bin");
    let mut w = BufWriter::new(File::create(dir.join(&data_file))?);
    for s in traj.states() {
        for c in s.components() {
            write_field(&mut w, c)?;
        }
    }
    w.flush()?;
    let g = traj.grid();
    let manifest = TrajectoryManifest {
        format: TRAJECTORY_FORMAT.into(),
        data_file,
        grid: GridInfo {
            n_per_axis: g.n(),
            period: g.period(),
            dealias_fraction: g.dealias_fraction(),
        },
        times: traj.times().to_vec(),
        config_hash: config_hash.into(),
        records: 3 * traj.len(),
        header_bytes: HEADER_BYTES,
        record_bytes: record_bytes(g),
    };
    let path = dir.join(format!("{stem}.json"));
    std::fs::write(&path, serde_json::to_vec_pretty(&manifest)?)?;
    Ok(path)
}

pub fn read_manifest(path: &Path) -> Result<TrajectoryManifest, MildError> {
    let m: TrajectoryManifest = serde_json::from_slice(&std::fs::read(path)?)?;
    if m.format != TRAJECTORY_FORMAT {
        return Err(MildError::InvalidTrajectory(format!(
            "unsupported format {:?}",
            m.format
        )));
    }
    if m.records != 3 * m.times.len() {
        return Err(MildError::InvalidTrajectory(
            "record count does not match the time list".into(),
        ));
    }
    Ok(m)
}

/// Loads the trajectory described by the manifest at `path`.
pub fn read_trajectory(path: &Path) -> Result<(Trajectory, TrajectoryManifest), MildError> {
    let m = read_manifest(path)?;
    let grid = m.grid()?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    let mut r = BufReader::new(File::open(base.join(&m.data_file))?);
    let mut states = Vec::with_capacity(m.times.len());
    for _ in 0..m.times.len() {
        let mut comps = Vec::with_capacity(3);
        for _ in 0..3 {
            let f = read_field(&mut r, grid.dealias_fraction())?;
            if *f.grid() != grid {
                return Err(MildError::GridMismatch);
            }
            comps.push(f);
        }
        let [a, b, c]: [_; 3] = comps.try_into().expect("three components");
        states.push(VelocityField::new([a, b, c])?);
    }
    Ok((Trajectory::new(m.times.clone(), states)?, m))
}
