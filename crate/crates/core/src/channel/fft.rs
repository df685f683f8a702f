use std::cell::RefCell;
use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// Forward/inverse FFT pair of a fixed length. The inverse is normalized.
#[derive(Clone)]
pub struct Spectrum {
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
    len: usize,
}

impl std::fmt::Debug for Spectrum {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Spectrum").field("len", &self.len).finish()
    }
}

impl Spectrum {
    pub fn new(len: usize) -> Self {
        let (fwd, inv) = PLANNER.with(|p| {
            let mut p = p.borrow_mut();
            (p.plan_fft_forward(len), p.plan_fft_inverse(len))
        });
        Self { fwd, inv, len }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn forward(&self, buf: &mut [Complex64]) {
        self.fwd.process(buf);
    }

    pub fn inverse(&self, buf: &mut [Complex64]) {
        self.inv.process(buf);
        let s = 1.0 / self.len as f64;
        buf.iter_mut().for_each(|v| *v *= s);
    }

    /// Multiplies the spectrum of `buf` by `response` (in FFT bin order).
    pub fn filter(&self, buf: &mut [Complex64], response: impl Fn(usize) -> Complex64) {
        self.forward(buf);
        for (k, v) in buf.iter_mut().enumerate() {
            *v *= response(k);
        }
        self.inverse(buf);
    }
}

/// Signed frequency of FFT bin `k` in GHz.
pub fn bin_frequency_ghz(k: usize, len: usize, sample_rate_ghz: f64) -> f64 {
    let k = k as i64;
    let n = len as i64;
    let signed = if 2 * k < n { k } else { k - n };
    signed as f64 * sample_rate_ghz / len as f64
}

/// Angular frequencies of the FFT bins in rad/ps.
pub fn angular_frequencies(len: usize, sample_rate_ghz: f64) -> Vec<f64> {
    (0..len)
        .map(|k| 2.0 * PI * bin_frequency_ghz(k, len, sample_rate_ghz) * 1e-3)
        .collect()
}
