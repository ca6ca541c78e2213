use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use num_complex::Complex64;

use super::grid::{GridShape, WaveGrid};
use crate::error::{Error, Result};

/// One JSON header line `{"d","L","N"}` followed by little-endian complex128 samples.
pub fn write_wave(path: impl AsRef<Path>, psi: &WaveGrid) -> Result<()> {
    psi.validate()?;
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    serde_json::to_writer(&mut f, &psi.shape())?;
    f.write_all(b"\n")?;
    for z in &psi.values {
        f.write_all(&z.re.to_le_bytes())?;
        f.write_all(&z.im.to_le_bytes())?;
    }
    f.flush()?;
    Ok(())
}

pub fn read_wave(path: impl AsRef<Path>) -> Result<WaveGrid> {
    let mut r = BufReader::new(std::fs::File::open(path)?);
    let mut header = String::new();
    r.read_line(&mut header)?;
    let shape: GridShape = serde_json::from_str(header.trim_end())?;
    let shape = GridShape::new(shape.d, shape.l, shape.n)?;
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes)?;
    if bytes.len() != shape.len() * 16 {
        return Err(Error::GridMismatch(format!(
            "expected {} bytes of samples, found {}",
            shape.len() * 16,
            bytes.len()
        )));
    }
    let values = bytes
        .chunks_exact(16)
        .map(|c| {
            let re = f64::from_le_bytes(c[..8].try_into().expect("8 bytes"));
            let im = f64::from_le_bytes(c[8..].try_into().expect("8 bytes"));
            Complex64::new(re, im)
        })
        .collect();
    let psi = WaveGrid { d: shape.d, l: shape.l, n: shape.n, values };
    psi.validate()?;
    Ok(psi)
}
