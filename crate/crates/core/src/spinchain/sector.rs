use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::hamiltonian::MAX_SITES;
use crate::{Error, Result};

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// All `n_sites`-bit patterns with `n_sites/2` set bits, ascending, with
/// constant-time rank lookup.
///
/// Rank lookup splits a pattern into high and low halves:
/// `rank = hi_offset[hi] + lo_index[lo]`, where `hi_offset` is the position of
/// the first state with that high half and `lo_index` is the position of the
/// low half among low halves with the same popcount.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectorBasis {
    n_sites: usize,
    states: Vec<u32>,
    low_bits: u32,
    hi_offset: Vec<u32>,
    lo_index: Vec<u32>,
}

impl SectorBasis {
    pub fn new(n_sites: usize) -> Result<Self> {
        if !(4..=MAX_SITES).contains(&n_sites) || n_sites % 2 != 0 {
            return Err(Error::InvalidChain(format!(
                "sector enumeration needs an even site count in 4..={MAX_SITES}, got {n_sites}"
            )));
        }
        let k = n_sites / 2;
        let dim = binomial(n_sites, k);
        let mut states = Vec::with_capacity(dim);
        // Gosper's hack walks fixed-popcount patterns in increasing order.
        let mut s: u32 = (1u32 << k) - 1;
        let limit: u64 = 1u64 << n_sites;
        while (s as u64) < limit {
            states.push(s);
            let c = s & s.wrapping_neg();
            let r = s + c;
            if r == 0 {
                break;
            }
            s = (((r ^ s) >> 2) / c) | r;
        }
        debug_assert_eq!(states.len(), dim);

        let low_bits = (n_sites / 2) as u32;
        let high_bits = n_sites as u32 - low_bits;
        let mut hi_offset = vec![u32::MAX; 1 << high_bits];
        for (pos, &st) in states.iter().enumerate() {
            let hi = (st >> low_bits) as usize;
            if hi_offset[hi] == u32::MAX {
                hi_offset[hi] = pos as u32;
            }
        }
        let mut lo_index = vec![0u32; 1 << low_bits];
        let mut seen = vec![0u32; low_bits as usize + 1];
        for (lo, slot) in lo_index.iter_mut().enumerate() {
            let pc = (lo as u32).count_ones() as usize;
            *slot = seen[pc];
            seen[pc] += 1;
        }
        Ok(SectorBasis {
            n_sites,
            states,
            low_bits,
            hi_offset,
            lo_index,
        })
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[u32] {
        &self.states
    }

    pub fn state(&self, rank: usize) -> u32 {
        self.states[rank]
    }

    /// Position of `pattern`, which must belong to the sector.
    #[inline]
    pub fn rank(&self, pattern: u32) -> usize {
        let hi = (pattern >> self.low_bits) as usize;
        let lo = (pattern & ((1u32 << self.low_bits) - 1)) as usize;
        self.hi_offset[hi] as usize + self.lo_index[lo] as usize
    }

    /// Like [`rank`](Self::rank) but returns `None` for patterns outside the
    /// sector.
    pub fn rank_checked(&self, pattern: u32) -> Option<usize> {
        if pattern.count_ones() as usize != self.n_sites / 2
            || (pattern as u64) >= (1u64 << self.n_sites)
        {
            return None;
        }
        Some(self.rank(pattern))
    }

    /// Néel pattern `…0101`: sites 0, 2, 4, … carry a set bit.
    pub fn neel_pattern(&self) -> u32 {
        (0..self.n_sites)
            .step_by(2)
            .fold(0u32, |acc, k| acc | (1 << k))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_sectors() {
        let b = SectorBasis::new(4).unwrap();
        assert_eq!(
            b.states(),
            &[0b0011, 0b0101, 0b0110, 0b1001, 0b1010, 0b1100]
        );
        assert_eq!(SectorBasis::new(8).unwrap().dim(), 70);
        assert_eq!(binomial(24, 12), 2_704_156);
    }

    #[test]
    fn rank_inverts_enumeration() {
        for n in [4, 6, 10, 14] {
            let b = SectorBasis::new(n).unwrap();
            assert_eq!(b.dim(), binomial(n, n / 2));
            assert!(b.states().windows(2).all(|w| w[0] < w[1]));
            for (pos, &s) in b.states().iter().enumerate() {
                assert_eq!(b.rank(s), pos);
            }
            assert_eq!(b.rank_checked(0b1), None);
        }
    }

    #[test]
    fn rejects_bad_sizes() {
        for n in [2, 5, 26] {
            assert!(matches!(SectorBasis::new(n), Err(Error::InvalidChain(_))));
        }
    }

    #[test]
    fn largest_sector() {
        assert_eq!(SectorBasis::new(24).unwrap().dim(), 2_704_156);
    }
}
