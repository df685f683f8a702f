use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::shaping::{AmplitudeAlphabet, Symbol4D};

/// Pilot bits for `n_t` test sequences, `ceil(log2 n_t)`.
pub fn pilot_bits(n_t: usize) -> usize {
    n_t.next_power_of_two().trailing_zeros() as usize
}

/// Pilot symbols for `n_t` test sequences: each carries 4 bits.
pub fn pilot_symbols(n_t: usize) -> usize {
    pilot_bits(n_t).div_ceil(4)
}

/// Dual-polarization QPSK carved from the outer corners of the QAM
/// constellation. Label bits `b3 b2` pick the x quadrant and `b1 b0` the y
/// quadrant; within a quadrant label, bit 0 negates the real part and bit 1
/// the imaginary part (Gray around the quadrants).
#[derive(Debug, Clone, PartialEq)]
pub struct PilotBook {
    corner: f64,
    points: [Symbol4D; 16],
}

fn quadrant(q: usize, a: f64) -> Complex64 {
    Complex64::new(if q & 1 == 1 { -a } else { a }, if q & 2 == 2 { -a } else { a })
}

impl PilotBook {
    pub fn new(alphabet: &AmplitudeAlphabet) -> Self {
        let a = alphabet.max_level() as f64;
        let points = std::array::from_fn(|l| Symbol4D::new(quadrant(l >> 2, a), quadrant(l & 3, a)));
        Self { corner: a, points }
    }

    pub fn points(&self) -> &[Symbol4D; 16] {
        &self.points
    }

    pub fn corner(&self) -> f64 {
        self.corner
    }

    /// Minimum-distance decision over the 16 pilot points.
    pub fn detect(&self, s: &Symbol4D) -> usize {
        let mut best = 0;
        let mut best_d = f64::INFINITY;
        for (l, p) in self.points.iter().enumerate() {
            let d = (s.x - p.x).norm_sqr() + (s.y - p.y).norm_sqr();
            if d < best_d {
                best_d = d;
                best = l;
            }
        }
        best
    }

    /// Pilot symbols carrying `index`, most significant 4-bit group first.
    pub fn encode_index(&self, index: usize, count: usize) -> Vec<Symbol4D> {
        (0..count)
            .rev()
            .map(|g| self.points[(index >> (4 * g)) & 0xf])
            .collect()
    }

    pub fn decode_index(&self, pilots: &[Symbol4D]) -> usize {
        pilots.iter().fold(0, |acc, s| (acc << 4) | self.detect(s))
    }

    /// Detected index, checked against the number of test sequences.
    pub fn decode_checked(&self, pilots: &[Symbol4D], n_t: usize) -> Result<usize> {
        let index = self.decode_index(pilots);
        if index >= n_t {
            return Err(Error::PilotIndex { index, n_t });
        }
        Ok(index)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overhead_counts() {
        assert_eq!(pilot_bits(1), 0);
        assert_eq!(pilot_bits(2), 1);
        assert_eq!(pilot_bits(4), 2);
        assert_eq!(pilot_bits(5), 3);
        assert_eq!(pilot_bits(256), 8);
        assert_eq!(pilot_symbols(1), 0);
        assert_eq!(pilot_symbols(2), 1);
        assert_eq!(pilot_symbols(16), 1);
        assert_eq!(pilot_symbols(17), 2);
        assert_eq!(pilot_symbols(256), 2);
    }

    #[test]
    fn corners_and_detection() {
        let b = PilotBook::new(&AmplitudeAlphabet::qam64());
        for (l, p) in b.points().iter().enumerate() {
            for r in p.rails() {
                assert_eq!(r.abs(), 7.0);
            }
            assert_eq!(b.detect(p), l);
        }
        assert_eq!(b.detect(&b.points()[5]), 5);
        for i in [0, 1, 15, 16, 200, 255] {
            let s = b.encode_index(i, 2);
            assert_eq!(b.decode_index(&s), i);
        }
        assert!(matches!(b.decode_checked(&b.encode_index(3, 1), 2), Err(Error::PilotIndex { .. })));
    }

    #[test]
    fn corners_maximize_minimum_distance() {
        // the 16-point book is a product of two 4-point sets, so it suffices
        // to search all 4-point subsets of one polarization's 64QAM
        let pts: Vec<(f64, f64)> = (-7..=7)
            .step_by(2)
            .flat_map(|i| (-7..=7).step_by(2).map(move |q| (i as f64, q as f64)))
            .collect();
        let d = |a: (f64, f64), b: (f64, f64)| ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt();
        let mut best = 0.0f64;
        let n = pts.len();
        for a in 0..n {
            for b in a + 1..n {
                let dab = d(pts[a], pts[b]);
                if dab <= best {
                    continue;
                }
                for c in b + 1..n {
                    let m3 = dab.min(d(pts[a], pts[c])).min(d(pts[b], pts[c]));
                    if m3 <= best {
                        continue;
                    }
                    for e in c + 1..n {
                        let m = m3.min(d(pts[a], pts[e])).min(d(pts[b], pts[e])).min(d(pts[c], pts[e]));
                        best = best.max(m);
                    }
                }
            }
        }
        assert_eq!(best, 14.0);
        let book = PilotBook::new(&AmplitudeAlphabet::qam64());
        let mut min = f64::INFINITY;
        for i in 0..16 {
            for j in 0..i {
                let (p, q) = (book.points()[i], book.points()[j]);
                min = min.min(((p.x - q.x).norm_sqr() + (p.y - q.y).norm_sqr()).sqrt());
            }
        }
        assert_eq!(min, 14.0);
    }
}
