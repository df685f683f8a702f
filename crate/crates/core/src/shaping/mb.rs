use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;

use super::alphabet::AmplitudeAlphabet;
use crate::error::{Error, Result};

/// Maxwell-Boltzmann distribution over the amplitude levels,
/// `p(a) ∝ exp(-lambda * a^2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MbDistribution {
    pub lambda: f64,
    pub probs: Vec<f64>,
    levels: Vec<u32>,
}

impl MbDistribution {
    pub fn with_lambda(lambda: f64, alphabet: &AmplitudeAlphabet) -> Self {
        let levels = alphabet.levels().to_vec();
        let e0 = (levels[0] as f64).powi(2);
        // shift by the smallest energy so large lambda does not underflow
        let w: Vec<f64> = levels
            .iter()
            .map(|&l| (-lambda * ((l as f64).powi(2) - e0)).exp())
            .collect();
        let z: f64 = w.iter().sum();
        Self {
            lambda,
            probs: w.into_iter().map(|x| x / z).collect(),
            levels,
        }
    }

    pub fn levels(&self) -> &[u32] {
        &self.levels
    }

    pub fn entropy(&self) -> f64 {
        entropy_bits(&self.probs)
    }

    /// Mean squared amplitude per rail.
    pub fn mean_energy(&self) -> f64 {
        self.probs
            .iter()
            .zip(&self.levels)
            .map(|(p, &l)| p * (l as f64).powi(2))
            .sum()
    }
}

/// Shannon entropy in bits.
pub fn entropy_bits(probs: &[f64]) -> f64 {
    probs
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum()
}

/// Finds the MB distribution with the given entropy by bisection on lambda.
pub fn mb_fit(target_entropy: f64, alphabet: &AmplitudeAlphabet) -> Result<MbDistribution> {
    let max = (alphabet.len() as f64).log2();
    if !(target_entropy > 0.0 && target_entropy <= max + 1e-12) {
        return Err(Error::config(format!(
            "target entropy {target_entropy} outside (0, {max}] bits"
        )));
    }
    if target_entropy >= max - 1e-12 {
        return Ok(MbDistribution::with_lambda(0.0, alphabet));
    }
    let h = |lambda: f64| MbDistribution::with_lambda(lambda, alphabet).entropy();
    let mut hi = 1e-3;
    while h(hi) > target_entropy {
        hi *= 2.0;
        if hi > 1e6 {
            return Err(Error::config("target entropy too small to fit"));
        }
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if h(mid) > target_entropy {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= f64::EPSILON * hi {
            break;
        }
    }
    Ok(MbDistribution::with_lambda(0.5 * (lo + hi), alphabet))
}

/// Draws `count` i.i.d. amplitudes.
pub fn mb_sample<R: Rng + ?Sized>(dist: &MbDistribution, rng: &mut R, count: usize) -> Vec<u32> {
    if count == 0 {
        return Vec::new();
    }
    let index = WeightedIndex::new(&dist.probs).expect("valid MB probabilities");
    (0..count)
        .map(|_| dist.levels[index.sample(rng)])
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn uniform_at_max_entropy() {
        let d = mb_fit(2.0, &AmplitudeAlphabet::qam64()).unwrap();
        assert_eq!(d.lambda, 0.0);
        for p in &d.probs {
            assert!((p - 0.25).abs() < 1e-15);
        }
    }

    #[test]
    fn fits_target_entropy() {
        let a = AmplitudeAlphabet::qam64();
        for target in [0.05, 0.5, 1.0, 1.3, 1.7, 1.99] {
            let d = mb_fit(target, &a).unwrap();
            assert!((d.entropy() - target).abs() < 1e-9, "{target}");
            let s: f64 = d.probs.iter().sum();
            assert!((s - 1.0).abs() < 1e-12);
            // log-linear in the squared level
            let e0 = 1.0_f64;
            for (p, &l) in d.probs.iter().zip(a.levels()) {
                let expected = (d.probs[0].ln() - d.lambda * ((l as f64).powi(2) - e0)).exp();
                assert!((p - expected).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn low_entropy_concentrates_on_smallest_level() {
        let d = mb_fit(1e-4, &AmplitudeAlphabet::qam64()).unwrap();
        assert!(d.probs[0] > 0.9999);
    }

    #[test]
    fn rejects_entropy_above_max() {
        assert!(mb_fit(2.1, &AmplitudeAlphabet::qam64()).is_err());
        assert!(mb_fit(0.0, &AmplitudeAlphabet::qam64()).is_err());
    }

    #[test]
    fn uniform_sampling_frequencies() {
        let d = MbDistribution::with_lambda(0.0, &AmplitudeAlphabet::qam64());
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let samples = mb_sample(&d, &mut rng, 1_000_000);
        for l in [1, 3, 5, 7] {
            let f = samples.iter().filter(|&&a| a == l).count() as f64 / 1e6;
            assert!((f - 0.25).abs() < 0.002, "{l}: {f}");
        }
    }

    #[test]
    fn sampling_is_deterministic() {
        let d = mb_fit(1.3, &AmplitudeAlphabet::qam64()).unwrap();
        let a = mb_sample(&d, &mut ChaCha8Rng::seed_from_u64(9), 1000);
        let b = mb_sample(&d, &mut ChaCha8Rng::seed_from_u64(9), 1000);
        assert_eq!(a, b);
        assert!(mb_sample(&d, &mut ChaCha8Rng::seed_from_u64(9), 0).is_empty());
    }
}
