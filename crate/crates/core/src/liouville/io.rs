use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use super::density::PhaseGrid;
use crate::error::{Error, Result};

/// One JSON header line `{"d","bounds","N","p"}` followed by little-endian
/// float64 samples.
pub fn write_density(path: impl AsRef<Path>, grid: &PhaseGrid) -> Result<()> {
    grid.validate()?;
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    serde_json::to_writer(&mut f, grid)?;
    f.write_all(b"\n")?;
    for v in &grid.values {
        f.write_all(&v.to_le_bytes())?;
    }
    f.flush()?;
    Ok(())
}

pub fn read_density(path: impl AsRef<Path>) -> Result<PhaseGrid> {
    let mut r = BufReader::new(std::fs::File::open(path)?);
    let mut header = String::new();
    r.read_line(&mut header)?;
    let mut grid: PhaseGrid = serde_json::from_str(header.trim_end())?;
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes)?;
    let count = grid.n[0] * grid.n[1];
    if bytes.len() != count * 8 {
        return Err(Error::GridMismatch(format!("expected {} bytes of samples, found {}", count * 8, bytes.len())));
    }
    grid.values = bytes.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes"))).collect();
    grid.validate()?;
    Ok(grid)
}
