//! Enumerative sphere shaping.
//!
//! Sequences of `N` amplitudes whose energy `sum(a^2)` stays within a sphere
//! of radius `sqrt(emax)` are indexed in lexicographic order (levels
//! ascending) through a counting trellis. Only the first `2^k` sequences are
//! used as the codebook.
//!
//! Energies live on the lattice `N * l0^2 + g * w`, where `l0` is the
//! smallest level and `g` the gcd of the squared-level gaps, so the trellis
//! energy axis is the reduced energy `w`.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::alphabet::ShapingConfig;
use crate::error::{Error, Result};

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Reduced energy lattice of an alphabet: `(l0^2, g, weights)`.
fn lattice(levels: &[u32]) -> (u64, u64, Vec<usize>) {
    let base = (levels[0] as u64).pow(2);
    let gap = levels[1..]
        .iter()
        .map(|&l| (l as u64).pow(2) - base)
        .fold(0, gcd)
        .max(1);
    let weights = levels
        .iter()
        .map(|&l| (((l as u64).pow(2) - base) / gap) as usize)
        .collect();
    (base, gap, weights)
}

/// Smallest energy bound whose sphere holds at least `2^k` sequences.
pub fn ess_choose_emax(cfg: &ShapingConfig) -> Result<u64> {
    let n = cfg.blocklength;
    let k = cfg.input_bits();
    let levels = cfg.alphabet.levels();
    let available = n as f64 * (levels.len() as f64).log2();
    if k as f64 > available + 1e-12 {
        return Err(Error::RateInfeasible { bits: k, available });
    }
    let (base, gap, weights) = lattice(levels);
    let wtop = *weights.last().unwrap();

    // exact distribution of reduced block energies
    let mut dist = vec![BigUint::zero(); n * wtop + 1];
    dist[0] = BigUint::one();
    for pos in 0..n {
        let reach = pos * wtop;
        for w in (0..=reach).rev() {
            if dist[w].is_zero() {
                continue;
            }
            let v = std::mem::take(&mut dist[w]);
            for &wj in weights.iter().skip(1) {
                dist[w + wj] += &v;
            }
            dist[w] = v;
        }
    }

    let target = BigUint::one() << k;
    let mut cumulative = BigUint::zero();
    for (w, c) in dist.iter().enumerate() {
        cumulative += c;
        if cumulative >= target {
            return Ok(n as u64 * base + gap * w as u64);
        }
    }
    unreachable!("total count |A|^N is at least 2^k")
}

/// Counting trellis for ESS with bounded block energy.
#[derive(Debug, Clone)]
pub struct EssTrellis {
    levels: Vec<u32>,
    blocklength: usize,
    k: usize,
    emax: u64,
    base: u64,
    gap: u64,
    weights: Vec<usize>,
    wmax: usize,
    /// `counts[p][w]`: admissible suffixes of length `N - p` with reduced
    /// energy at most `w`.
    counts: Vec<Vec<BigUint>>,
}

/// Builds the counting trellis for `cfg` under energy bound `emax`.
pub fn ess_build_trellis(cfg: &ShapingConfig, emax: u64) -> Result<EssTrellis> {
    let n = cfg.blocklength;
    let levels = cfg.alphabet.levels().to_vec();
    let (base, gap, weights) = lattice(&levels);
    let floor = n as u64 * base;
    if emax < floor {
        return Err(Error::config(format!(
            "emax {emax} below the minimum block energy {floor}"
        )));
    }
    let wmax = ((emax - floor) / gap) as usize;

    let mut counts = vec![Vec::new(); n + 1];
    counts[n] = vec![BigUint::one(); wmax + 1];
    for p in (0..n).rev() {
        let next = &counts[p + 1];
        let row: Vec<BigUint> = (0..=wmax)
            .map(|w| {
                weights
                    .iter()
                    .take_while(|&&wj| wj <= w)
                    .fold(BigUint::zero(), |acc, &wj| acc + &next[w - wj])
            })
            .collect();
        counts[p] = row;
    }

    let trellis = EssTrellis {
        levels,
        blocklength: n,
        k: cfg.input_bits(),
        emax,
        base,
        gap,
        weights,
        wmax,
        counts,
    };
    if trellis.total() < &(BigUint::one() << trellis.k) {
        return Err(Error::RateInfeasible {
            bits: trellis.k,
            available: trellis.total().bits() as f64 - 1.0,
        });
    }
    Ok(trellis)
}

impl EssTrellis {
    /// Convenience: choose the minimal bound and build the trellis.
    pub fn for_config(cfg: &ShapingConfig) -> Result<Self> {
        let emax = ess_choose_emax(cfg)?;
        ess_build_trellis(cfg, emax)
    }

    pub fn blocklength(&self) -> usize {
        self.blocklength
    }

    /// Input bits per block.
    pub fn input_bits(&self) -> usize {
        self.k
    }

    pub fn emax(&self) -> u64 {
        self.emax
    }

    pub fn levels(&self) -> &[u32] {
        &self.levels
    }

    /// Number of sequences inside the sphere, `T[0][emax]`.
    pub fn total(&self) -> &BigUint {
        &self.counts[0][self.wmax]
    }

    /// `T[p][e]`: number of admissible suffixes of length `N - p` with energy
    /// at most `energy`. `None` when `energy` exceeds `emax` for `p < N`.
    pub fn count(&self, position: usize, energy: u64) -> Option<BigUint> {
        assert!(position <= self.blocklength);
        let remaining = (self.blocklength - position) as u64;
        if remaining == 0 {
            return Some(BigUint::one());
        }
        let floor = remaining * self.base;
        if energy < floor {
            return Some(BigUint::zero());
        }
        let w = ((energy - floor) / self.gap) as usize;
        self.counts[position].get(w).cloned()
    }

    fn energy_of(&self, amps: &[u32]) -> u64 {
        amps.iter().map(|&a| (a as u64).pow(2)).sum()
    }

    /// Maps a `k`-bit block (MSB first) to its amplitude sequence.
    pub fn encode(&self, bits: &[bool]) -> Result<Vec<u32>> {
        if bits.len() != self.k {
            return Err(Error::LengthMismatch {
                what: "ESS input bits",
                expected: self.k,
                actual: bits.len(),
            });
        }
        Ok(self.encode_index(bits_to_index(bits)))
    }

    /// Returns the `index`-th admissible sequence in lexicographic order.
    pub fn encode_index(&self, mut index: BigUint) -> Vec<u32> {
        assert!(&index < self.total(), "index outside the ESS codebook");
        let mut w = self.wmax;
        let mut out = Vec::with_capacity(self.blocklength);
        for p in 0..self.blocklength {
            let next = &self.counts[p + 1];
            let mut chosen = None;
            for (j, &wj) in self.weights.iter().enumerate() {
                if wj > w {
                    break;
                }
                let c = &next[w - wj];
                if &index < c {
                    chosen = Some(j);
                    break;
                }
                index -= c;
            }
            let j = chosen.expect("index bounded by trellis count");
            w -= self.weights[j];
            out.push(self.levels[j]);
        }
        out
    }

    /// Lexicographic index of an admissible sequence.
    pub fn decode_index(&self, amps: &[u32]) -> Result<BigUint> {
        if amps.len() != self.blocklength {
            return Err(Error::LengthMismatch {
                what: "ESS amplitude block",
                expected: self.blocklength,
                actual: amps.len(),
            });
        }
        let energy = self.energy_of(amps);
        if energy > self.emax {
            return Err(Error::Inadmissible(format!(
                "block energy {energy} exceeds emax {}",
                self.emax
            )));
        }
        let mut w = self.wmax;
        let mut index = BigUint::zero();
        for (p, &a) in amps.iter().enumerate() {
            let j = self
                .levels
                .binary_search(&a)
                .map_err(|_| Error::Inadmissible(format!("amplitude {a} not in alphabet")))?;
            let next = &self.counts[p + 1];
            for &wj in &self.weights[..j] {
                index += &next[w - wj];
            }
            w -= self.weights[j];
        }
        Ok(index)
    }

    /// Inverse of [`EssTrellis::encode`].
    pub fn decode(&self, amps: &[u32]) -> Result<Vec<bool>> {
        let index = self.decode_index(amps)?;
        if index.bits() as usize > self.k {
            return Err(Error::Inadmissible(
                "sequence lies outside the 2^k codebook".into(),
            ));
        }
        Ok(index_to_bits(&index, self.k))
    }
}

/// Interprets bits MSB first as an unsigned integer.
pub fn bits_to_index(bits: &[bool]) -> BigUint {
    if bits.is_empty() {
        return BigUint::zero();
    }
    let digits: Vec<u8> = bits.iter().map(|&b| b as u8).collect();
    BigUint::from_radix_be(&digits, 2).expect("binary digits")
}

/// `width`-bit MSB-first representation of `index`.
pub fn index_to_bits(index: &BigUint, width: usize) -> Vec<bool> {
    let mut out = vec![false; width];
    if index.is_zero() {
        return out;
    }
    let digits = index.to_radix_be(2);
    assert!(digits.len() <= width, "index wider than {width} bits");
    let offset = width - digits.len();
    for (slot, d) in out[offset..].iter_mut().zip(digits) {
        *slot = d == 1;
    }
    out
}
