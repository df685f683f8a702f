//! Symmetric split-step Fourier solver for the Manakov equation
//!
//! `dA/dz = -(alpha/2) A - i (beta2/2) d2A/dt2 + i (8/9) gamma |A|^2 A`.
//!
//! Linear half-steps are fused between consecutive nonlinear steps. The
//! nonlinear step at the midpoint of a step of length `h` uses the length
//! `2 sinh(alpha h / 2) / alpha`, which makes the accumulated phase of a
//! constant-envelope field equal to `(8/9) gamma P L_eff` exactly.

use num_complex::Complex64;
use rand::Rng;

use super::edfa::{edfa, span_gain_db};
use super::fft::{angular_frequencies, Spectrum};
use super::params::{AmplifierParams, FiberParams, StepPolicy};
use super::waveform::FieldWaveform;
use crate::error::{Error, Result};

const MANAKOV: f64 = 8.0 / 9.0;

struct Linear {
    spectrum: Spectrum,
    omega: Vec<f64>,
    beta2: f64,
    alpha: f64,
    cached_len: f64,
    cached: Vec<Complex64>,
}

impl Linear {
    fn apply(&mut self, field: &mut FieldWaveform, length: f64) {
        if length == 0.0 {
            return;
        }
        if length != self.cached_len {
            let loss = (-self.alpha * length / 2.0).exp();
            self.cached = self
                .omega
                .iter()
                .map(|w| Complex64::from_polar(loss, 0.5 * self.beta2 * w * w * length))
                .collect();
            self.cached_len = length;
        }
        for pol in field.pols_mut() {
            let op = &self.cached;
            self.spectrum.filter(pol, |k| op[k]);
        }
    }
}

fn effective_length(alpha: f64, h: f64) -> f64 {
    if alpha == 0.0 {
        h
    } else {
        -(-alpha * h).exp_m1() / alpha
    }
}

/// Propagates `field` over one span.
pub fn ssfm_span(
    mut field: FieldWaveform,
    fiber: &FiberParams,
    policy: StepPolicy,
) -> Result<FieldWaveform> {
    fiber.validate()?;
    let len_km = fiber.span_length_km;
    let alpha = fiber.alpha_linear();
    let c_nl = MANAKOV * fiber.gamma_per_w_per_km;
    let mut linear = Linear {
        spectrum: Spectrum::new(field.len()),
        omega: angular_frequencies(field.len(), field.sample_rate_ghz),
        beta2: fiber.beta2_ps2_per_km,
        alpha,
        cached_len: f64::NAN,
        cached: Vec::new(),
    };

    if c_nl == 0.0 {
        linear.apply(&mut field, len_km);
        return Ok(field);
    }

    let mut z = 0.0;
    let mut pending = 0.0;
    // peak power at the start of the next step
    let mut peak = field.peak_power();
    while z < len_km * (1.0 - 1e-12) {
        let remaining = len_km - z;
        let h = match policy {
            StepPolicy::Fixed { steps_per_span } => {
                let h = len_km / steps_per_span.max(1) as f64;
                let phase = c_nl * peak * effective_length(alpha, h);
                if phase > StepPolicy::MAX_FIXED_PHASE {
                    return Err(Error::StepSize {
                        phase,
                        bound: StepPolicy::MAX_FIXED_PHASE,
                    });
                }
                h.min(remaining)
            }
            StepPolicy::Adaptive { max_phase_rad } => {
                let target = max_phase_rad / (c_nl * peak.max(f64::MIN_POSITIVE));
                let h = if alpha == 0.0 {
                    target
                } else if alpha * target >= 1.0 {
                    remaining
                } else {
                    -(-alpha * target).ln_1p() / alpha
                };
                h.min(remaining)
            }
        };
        let h = if remaining - h < 1e-9 * len_km { remaining } else { h };

        linear.apply(&mut field, pending + h / 2.0);
        let leff = if alpha == 0.0 {
            h
        } else {
            2.0 * (alpha * h / 2.0).sinh() / alpha
        };
        let mut mid_peak = 0.0f64;
        for (a, b) in field.x.iter_mut().zip(field.y.iter_mut()) {
            let p = a.norm_sqr() + b.norm_sqr();
            mid_peak = mid_peak.max(p);
            let rot = Complex64::from_polar(1.0, c_nl * p * leff);
            *a *= rot;
            *b *= rot;
        }
        peak = mid_peak * (-alpha * h / 2.0).exp();
        pending = h / 2.0;
        z += h;
    }
    linear.apply(&mut field, pending);
    if !field.is_finite() {
        return Err(Error::StepSize {
            phase: f64::INFINITY,
            bound: StepPolicy::MAX_FIXED_PHASE,
        });
    }
    Ok(field)
}

/// `n_spans` x (fiber span, EDFA compensating the span loss).
///
/// `span_rng(i)` supplies the ASE stream of span `i`.
pub fn propagate_link<R: Rng>(
    mut field: FieldWaveform,
    fiber: &FiberParams,
    amp: &AmplifierParams,
    policy: StepPolicy,
    mut span_rng: impl FnMut(usize) -> R,
) -> Result<FieldWaveform> {
    amp.validate()?;
    let gain = span_gain_db(fiber);
    for span in 0..fiber.n_spans {
        field = ssfm_span(field, fiber, policy)?;
        field = edfa(field, gain, amp, &mut span_rng(span));
    }
    Ok(field)
}
