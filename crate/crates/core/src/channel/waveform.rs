use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Sampled dual-polarization complex baseband field, amplitudes in sqrt(W).
#[derive(Debug, Clone, PartialEq)]
pub struct FieldWaveform {
    pub x: Vec<Complex64>,
    pub y: Vec<Complex64>,
    pub sample_rate_ghz: f64,
}

impl FieldWaveform {
    pub fn new(x: Vec<Complex64>, y: Vec<Complex64>, sample_rate_ghz: f64) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::LengthMismatch {
                what: "y-polarization samples",
                expected: x.len(),
                actual: y.len(),
            });
        }
        Ok(Self {
            x,
            y,
            sample_rate_ghz,
        })
    }

    pub fn zeros(len: usize, sample_rate_ghz: f64) -> Self {
        Self {
            x: vec![Complex64::default(); len],
            y: vec![Complex64::default(); len],
            sample_rate_ghz,
        }
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    /// Sample spacing in ps.
    pub fn dt_ps(&self) -> f64 {
        1e3 / self.sample_rate_ghz
    }

    /// Mean of `|x|^2 + |y|^2` over samples.
    pub fn mean_power(&self) -> f64 {
        let s: f64 = self
            .x
            .iter()
            .zip(&self.y)
            .map(|(a, b)| a.norm_sqr() + b.norm_sqr())
            .sum();
        s / self.len() as f64
    }

    pub fn peak_power(&self) -> f64 {
        self.x
            .iter()
            .zip(&self.y)
            .map(|(a, b)| a.norm_sqr() + b.norm_sqr())
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.x
            .iter()
            .chain(&self.y)
            .all(|v| v.re.is_finite() && v.im.is_finite())
    }

    pub fn scale(&mut self, s: f64) {
        self.x.iter_mut().chain(self.y.iter_mut()).for_each(|v| *v *= s);
    }

    pub(crate) fn pols_mut(&mut self) -> [&mut Vec<Complex64>; 2] {
        [&mut self.x, &mut self.y]
    }
}

const MAGIC: &[u8; 8] = b"SQSLFLD1";

/// Writes a debug dump: a 32-byte header (magic, sample rate as f64,
/// sample count as u64, 8 reserved bytes) followed by the x then y samples
/// as little-endian complex64 (two f32 each).
pub fn write_dump(field: &FieldWaveform, path: &Path) -> Result<()> {
    let io = |e| Error::io(path, e);
    let mut w = BufWriter::new(File::create(path).map_err(io)?);
    let mut header = [0u8; 32];
    header[..8].copy_from_slice(MAGIC);
    header[8..16].copy_from_slice(&field.sample_rate_ghz.to_le_bytes());
    header[16..24].copy_from_slice(&(field.len() as u64).to_le_bytes());
    w.write_all(&header).map_err(io)?;
    for v in field.x.iter().chain(&field.y) {
        w.write_all(&(v.re as f32).to_le_bytes()).map_err(io)?;
        w.write_all(&(v.im as f32).to_le_bytes()).map_err(io)?;
    }
    w.flush().map_err(io)
}

pub fn read_dump(path: &Path) -> Result<FieldWaveform> {
    let io = |e| Error::io(path, e);
    let mut r = BufReader::new(File::open(path).map_err(io)?);
    let mut header = [0u8; 32];
    r.read_exact(&mut header).map_err(io)?;
    if &header[..8] != MAGIC {
        return Err(Error::Parse(format!("{}: not a waveform dump", path.display())));
    }
    let sample_rate = f64::from_le_bytes(header[8..16].try_into().unwrap());
    let len = u64::from_le_bytes(header[16..24].try_into().unwrap()) as usize;
    let mut raw = vec![0u8; 16 * len];
    r.read_exact(&mut raw).map_err(io)?;
    let samples: Vec<Complex64> = raw
        .chunks_exact(8)
        .map(|c| {
            Complex64::new(
                f32::from_le_bytes(c[..4].try_into().unwrap()) as f64,
                f32::from_le_bytes(c[4..].try_into().unwrap()) as f64,
            )
        })
        .collect();
    let (x, y) = samples.split_at(len);
    FieldWaveform::new(x.to_vec(), y.to_vec(), sample_rate)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dump_roundtrip() {
        let x: Vec<Complex64> = (0..5).map(|i| Complex64::new(i as f64, 0.5)).collect();
        let y: Vec<Complex64> = (0..5).map(|i| Complex64::new(-0.25, i as f64)).collect();
        let f = FieldWaveform::new(x, y, 372.0).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("f.bin");
        write_dump(&f, &path).unwrap();
        assert_eq!(std::fs::metadata(&path).unwrap().len(), 32 + 5 * 16);
        assert_eq!(read_dump(&path).unwrap(), f);
    }

    #[test]
    fn powers() {
        let f = FieldWaveform::new(
            vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 2.0)],
            vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
            10.0,
        )
        .unwrap();
        assert_eq!(f.mean_power(), 3.0);
        assert_eq!(f.peak_power(), 5.0);
        assert!(FieldWaveform::new(vec![], vec![Complex64::default()], 1.0).is_err());
    }
}
