//! Binary record format for [`SpectralField`] plus a JSON sidecar.
//!
//! Record layout (all little-endian):
//!
//! | offset | size | content                                   |
//! |--------|------|-------------------------------------------|
//! | 0      | 4    | magic `b"GNSF"`                           |
//! | 4      | 4    | `n_per_axis` as `u32`                     |
//! | 8      | 8    | `period` as `f64`                         |
//! | 16     | 16·n³| `(re, im)` `f64` pairs, row-major modes   |

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use super::{Grid, SpectralError, SpectralField};

pub const MAGIC: &[u8; 4] = b"GNSF";
pub const HEADER_BYTES: usize = 16;

/// Metadata written next to each binary record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldSidecar {
    pub format: String,
    pub n_per_axis: usize,
    pub period: f64,
    pub dealias_fraction: f64,
    pub records: usize,
    pub header_bytes: usize,
    pub record_bytes: usize,
    pub layout: String,
}

impl FieldSidecar {
    pub fn for_grid(grid: &Grid, records: usize) -> Self {
        Self {
            format: "gns-spectral-field/1".into(),
            n_per_axis: grid.n(),
            period: grid.period(),
            dealias_fraction: grid.dealias_fraction(),
            records,
            header_bytes: HEADER_BYTES,
            record_bytes: record_bytes(grid),
            layout: "row-major (i1,i2,i3), i3 fastest; interleaved re,im f64 little-endian".into(),
        }
    }

    pub fn grid(&self) -> Result<Grid, SpectralError> {
        Grid::new(self.n_per_axis, self.period)?.with_dealias_fraction(self.dealias_fraction)
    }
}

pub fn record_bytes(grid: &Grid) -> usize {
    HEADER_BYTES + 16 * grid.len()
}

pub fn write_field<W: Write>(w: &mut W, field: &SpectralField) -> Result<(), SpectralError> {
    let g = field.grid();
    w.write_all(MAGIC)?;
    w.write_all(&(g.n() as u32).to_le_bytes())?;
    w.write_all(&g.period().to_le_bytes())?;
    let mut buf = Vec::with_capacity(16 * g.len());
    for z in field.coeffs() {
        buf.extend_from_slice(&z.re.to_le_bytes());
        buf.extend_from_slice(&z.im.to_le_bytes());
    }
    w.write_all(&buf)?;
    Ok(())
}

/// Reads one record. The dealias fraction is not part of the record; it is
/// taken from `dealias_fraction` (normally the sidecar value).
pub fn read_field<R: Read>(r: &mut R, dealias_fraction: f64) -> Result<SpectralField, SpectralError> {
    let mut head = [0u8; HEADER_BYTES];
    r.read_exact(&mut head)?;
    if &head[0..4] != MAGIC {
        return Err(SpectralError::Format("bad magic".into()));
    }
    let n = u32::from_le_bytes(head[4..8].try_into().unwrap()) as usize;
    let period = f64::from_le_bytes(head[8..16].try_into().unwrap());
    let grid = Grid::new(n, period)?.with_dealias_fraction(dealias_fraction)?;
    let mut body = vec![0u8; 16 * grid.len()];
    r.read_exact(&mut body)?;
    let coeffs = body
        .chunks_exact(16)
        .map(|c| {
            Complex64::new(
                f64::from_le_bytes(c[0..8].try_into().unwrap()),
                f64::from_le_bytes(c[8..16].try_into().unwrap()),
            )
        })
        .collect();
    SpectralField::from_coeffs(grid, coeffs)
}

pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

/// Writes `fields` as consecutive records to `path` and the sidecar to
/// `path.json`.
pub fn save_fields(path: &Path, fields: &[&SpectralField]) -> Result<(), SpectralError> {
    let first = fields
        .first()
        .ok_or_else(|| SpectralError::Format("no records to write".into()))?;
    let grid = *first.grid();
    let mut w = BufWriter::new(File::create(path)?);
    for f in fields {
        if *f.grid() != grid {
            return Err(SpectralError::GridMismatch);
        }
        write_field(&mut w, f)?;
    }
    w.flush()?;
    let side = FieldSidecar::for_grid(&grid, fields.len());
    std::fs::write(sidecar_path(path), serde_json::to_vec_pretty(&side)?)?;
    Ok(())
}

pub fn load_fields(path: &Path) -> Result<Vec<SpectralField>, SpectralError> {
    let side: FieldSidecar = serde_json::from_slice(&std::fs::read(sidecar_path(path))?)?;
    let mut r = BufReader::new(File::open(path)?);
    let mut out = Vec::with_capacity(side.records);
    for _ in 0..side.records {
        let f = read_field(&mut r, side.dealias_fraction)?;
        if f.grid().n() != side.n_per_axis || f.grid().period() != side.period {
            return Err(SpectralError::Format("record header disagrees with sidecar".into()));
        }
        out.push(f);
    }
    Ok(out)
}
