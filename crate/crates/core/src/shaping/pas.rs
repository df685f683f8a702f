use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::alphabet::AmplitudeAlphabet;
use crate::error::{Error, Result};

/// One dual-polarization QAM symbol.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Symbol4D {
    pub x: Complex64,
    pub y: Complex64,
}

impl Symbol4D {
    pub fn new(x: Complex64, y: Complex64) -> Self {
        Self { x, y }
    }

    /// `|x|^2 + |y|^2`.
    pub fn energy(&self) -> f64 {
        self.x.norm_sqr() + self.y.norm_sqr()
    }

    /// Real rails in PAS order `(xI, xQ, yI, yQ)`.
    pub fn rails(&self) -> [f64; 4] {
        [self.x.re, self.x.im, self.y.re, self.y.im]
    }

    pub fn from_rails(r: [f64; 4]) -> Self {
        Self {
            x: Complex64::new(r[0], r[1]),
            y: Complex64::new(r[2], r[3]),
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            x: self.x * s,
            y: self.y * s,
        }
    }
}

/// Combines amplitudes and sign bits into 4D symbols.
///
/// Rails are filled in the order `(xI, xQ, yI, yQ)`; a sign bit of 1 makes
/// the rail negative.
pub fn pas_map(amps: &[u32], signs: &[bool]) -> Result<Vec<Symbol4D>> {
    if amps.len() != signs.len() {
        return Err(Error::LengthMismatch {
            what: "sign bits",
            expected: amps.len(),
            actual: signs.len(),
        });
    }
    if amps.len() % 4 != 0 {
        return Err(Error::LengthMismatch {
            what: "amplitudes (multiple of 4)",
            expected: amps.len().next_multiple_of(4),
            actual: amps.len(),
        });
    }
    Ok(amps
        .chunks_exact(4)
        .zip(signs.chunks_exact(4))
        .map(|(a, s)| {
            let rail = |i: usize| if s[i] { -(a[i] as f64) } else { a[i] as f64 };
            Symbol4D::from_rails([rail(0), rail(1), rail(2), rail(3)])
        })
        .collect())
}

/// Per-rail minimum-distance decisions back to amplitudes and sign bits.
pub fn pas_demap_hard(
    symbols: &[Symbol4D],
    alphabet: &AmplitudeAlphabet,
) -> (Vec<u32>, Vec<bool>) {
    let mut amps = Vec::with_capacity(4 * symbols.len());
    let mut signs = Vec::with_capacity(4 * symbols.len());
    for s in symbols {
        for r in s.rails() {
            signs.push(r < 0.0);
            amps.push(alphabet.levels()[alphabet.nearest(r.abs())]);
        }
    }
    (amps, signs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mapping_convention() {
        let s = pas_map(&[1, 3, 5, 7], &[false, true, false, true]).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].x, Complex64::new(1.0, -3.0));
        assert_eq!(s[0].y, Complex64::new(5.0, -7.0));
        assert_eq!(pas_map(&[1; 8], &[false; 8]).unwrap().len(), 2);
    }

    #[test]
    fn mapping_errors() {
        assert!(pas_map(&[1, 3, 5, 7], &[false; 3]).is_err());
        assert!(pas_map(&[1, 3, 5], &[false; 3]).is_err());
    }

    #[test]
    fn hard_decisions() {
        let a = AmplitudeAlphabet::qam64();
        let s = [Symbol4D::from_rails([1.9, -2.1, 6.5, -100.0])];
        let (amps, signs) = pas_demap_hard(&s, &a);
        assert_eq!(amps, vec![1, 3, 7, 7]);
        assert_eq!(signs, vec![false, true, false, true]);
    }

    #[test]
    fn demap_inverts_map() {
        let a = AmplitudeAlphabet::qam64();
        let amps = vec![1, 3, 5, 7, 7, 5, 3, 1];
        let signs = vec![true, false, false, true, true, true, false, false];
        let (ra, rs) = pas_demap_hard(&pas_map(&amps, &signs).unwrap(), &a);
        assert_eq!((ra, rs), (amps, signs));
    }
}
