//! Receiver-known transform books. Entry `i` is drawn from its own ChaCha
//! stream of the book seed, so the book for `N_t` is a prefix of the book
//! for any larger `N_t`.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{SchemeKind, SelectionConfig};
use crate::error::{Error, Result};

fn entry_rng(seed: u64, i: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(i as u64);
    rng
}

/// XOR masks `t_0 = 0, t_1, ..., t_{N_t - 1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScramblerBook {
    seed: u64,
    len: usize,
    masks: Vec<Vec<bool>>,
}

impl ScramblerBook {
    pub fn generate(seed: u64, n_t: usize, len: usize) -> Result<Self> {
        if n_t > 1 && (len as u32) < usize::BITS && (1usize << len) < n_t {
            return Err(Error::config(format!("{n_t} distinct masks do not exist for {len} bits")));
        }
        let mut masks = vec![vec![false; len]];
        for i in 1..n_t {
            let mut rng = entry_rng(seed, i);
            loop {
                let m: Vec<bool> = (0..len).map(|_| rng.random()).collect();
                if !masks.contains(&m) {
                    masks.push(m);
                    break;
                }
            }
        }
        Ok(Self { seed, len, masks })
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn n_t(&self) -> usize {
        self.masks.len()
    }

    /// Length of each mask (information bits per selection block).
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn mask(&self, i: usize) -> &[bool] {
        &self.masks[i]
    }
}

/// Interleaver tables over the payload positions; entry 0 is the identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermutationBook {
    seed: u64,
    n: usize,
    perms: Vec<Vec<usize>>,
    inverses: Vec<Vec<usize>>,
}

impl PermutationBook {
    pub fn generate(seed: u64, n_t: usize, n: usize) -> Result<Self> {
        let factorial_small = (1..=n).try_fold(1usize, |acc, k| acc.checked_mul(k));
        if matches!(factorial_small, Some(f) if f < n_t) {
            return Err(Error::config(format!("{n_t} distinct permutations do not exist over {n} positions")));
        }
        let identity: Vec<usize> = (0..n).collect();
        let mut perms = vec![identity.clone()];
        for i in 1..n_t {
            let mut rng = entry_rng(seed, i);
            loop {
                let mut p = identity.clone();
                p.shuffle(&mut rng);
                if !perms.contains(&p) {
                    perms.push(p);
                    break;
                }
            }
        }
        let inverses = perms
            .iter()
            .map(|p| {
                let mut inv = vec![0; n];
                for (j, &src) in p.iter().enumerate() {
                    inv[src] = j;
                }
                inv
            })
            .collect();
        Ok(Self {
            seed,
            n,
            perms,
            inverses,
        })
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn n_t(&self) -> usize {
        self.perms.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn table(&self, i: usize) -> &[usize] {
        &self.perms[i]
    }

    /// `out[j] = s[perm_i[j]]`.
    pub fn interleave<T: Copy>(&self, i: usize, s: &[T]) -> Vec<T> {
        self.perms[i].iter().map(|&src| s[src]).collect()
    }

    pub fn deinterleave<T: Copy>(&self, i: usize, r: &[T]) -> Vec<T> {
        self.inverses[i].iter().map(|&j| r[j]).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Book {
    Scrambler(ScramblerBook),
    Permutation(PermutationBook),
}

/// Book for the configured scheme. `block_len` is the number of information
/// bits (BSSS) or payload symbols (SISS) per selection block.
pub fn generate_books(seed: u64, cfg: &SelectionConfig, block_len: usize) -> Result<Book> {
    cfg.validate()?;
    Ok(match cfg.scheme {
        SchemeKind::Bsss => Book::Scrambler(ScramblerBook::generate(seed, cfg.n_t, block_len)?),
        SchemeKind::Siss => Book::Permutation(PermutationBook::generate(seed, cfg.n_t, block_len)?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::selection::MetricKind;

    #[test]
    fn deterministic_and_nested() {
        let a = ScramblerBook::generate(11, 16, 100).unwrap();
        assert_eq!(a, ScramblerBook::generate(11, 16, 100).unwrap());
        let b = ScramblerBook::generate(11, 4, 100).unwrap();
        for i in 0..4 {
            assert_eq!(a.mask(i), b.mask(i));
        }
        assert!(a.mask(0).iter().all(|&x| !x));
        for i in 0..16 {
            for j in 0..i {
                assert_ne!(a.mask(i), a.mask(j));
            }
        }
        let p = PermutationBook::generate(5, 16, 64).unwrap();
        let q = PermutationBook::generate(5, 2, 64).unwrap();
        assert_eq!(p.table(1), q.table(1));
        assert_eq!(q.n_t(), 2);
    }

    #[test]
    fn permutations_are_bijections() {
        let p = PermutationBook::generate(3, 32, 50).unwrap();
        let s: Vec<u32> = (100..150).collect();
        for i in 0..32 {
            let mut sorted = p.table(i).to_vec();
            sorted.sort_unstable();
            assert_eq!(sorted, (0..50).collect::<Vec<_>>());
            assert_eq!(p.deinterleave(i, &p.interleave(i, &s)), s);
        }
    }

    #[test]
    fn small_books_collide_or_fail() {
        assert!(ScramblerBook::generate(1, 5, 2).is_err());
        assert!(PermutationBook::generate(1, 7, 3).is_err());
        let p = PermutationBook::generate(1, 6, 3).unwrap();
        assert_eq!(p.n_t(), 6);
    }

    #[test]
    fn book_for_scheme() {
        let cfg = SelectionConfig {
            scheme: SchemeKind::Bsss,
            n_t: 2,
            metric: MetricKind::Wk,
            n: 8,
        };
        match generate_books(1, &cfg, 40).unwrap() {
            Book::Scrambler(b) => assert_eq!(b.n_t(), 2),
            _ => panic!(),
        }
        let cfg = SelectionConfig { scheme: SchemeKind::Siss, ..cfg };
        assert!(matches!(generate_books(1, &cfg, 8).unwrap(), Book::Permutation(_)));
    }
}
