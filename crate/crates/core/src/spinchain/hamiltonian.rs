use alloc::format;

use super::sector::SectorBasis;
use crate::exec::RowOperator;
use crate::{Error, Result};

pub const MAX_SITES: usize = 24;

/// Ring of `n_sites` spins with alternating couplings `j1` (bonds `(2k, 2k+1)`)
/// and `j2` (bonds `(2k+1, 2k+2 mod N)`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainSpec {
    n_sites: usize,
    j1: f64,
    j2: f64,
}

impl ChainSpec {
    pub fn new(n_sites: usize, j1: f64, j2: f64) -> Result<Self> {
        if n_sites % 2 != 0 || !(4..=MAX_SITES).contains(&n_sites) {
            return Err(Error::InvalidChain(format!(
                "site count must be even and in 4..={MAX_SITES}, got {n_sites}"
            )));
        }
        if !(j1 > 0.0) || !j1.is_finite() {
            return Err(Error::InvalidChain(format!(
                "J1 must be positive and finite, got {j1}"
            )));
        }
        if !j2.is_finite() {
            return Err(Error::InvalidChain(format!("J2 must be finite, got {j2}")));
        }
        Ok(ChainSpec { n_sites, j1, j2 })
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn j1(&self) -> f64 {
        self.j1
    }

    pub fn j2(&self) -> f64 {
        self.j2
    }

    pub fn is_uniform(&self) -> bool {
        (self.j1 - self.j2).abs() < 1e-12
    }

    /// `3·(N/2)·(|J1| + |J2|)`, an upper bound on `‖H‖` (each bond term has
    /// norm 3).
    pub fn spectral_shift(&self) -> f64 {
        3.0 * (self.n_sites / 2) as f64 * (self.j1.abs() + self.j2.abs())
    }

    /// Coupling of the bond between site `m` and `m + 1 mod N`.
    #[inline]
    pub fn bond_coupling(&self, m: usize) -> f64 {
        if m % 2 == 0 {
            self.j1
        } else {
            self.j2
        }
    }

    fn even_mask(&self) -> u32 {
        (0..self.n_sites)
            .step_by(2)
            .fold(0u32, |acc, k| acc | (1 << k))
    }

    /// Bit `m` of the result is set when sites `m` and `m + 1 mod N` differ.
    #[inline]
    fn bond_differences(&self, s: u32) -> u32 {
        let n = self.n_sites as u32;
        let rotated = (s >> 1) | ((s & 1) << (n - 1));
        s ^ rotated
    }

    /// Diagonal `Σ_bonds J s_a s_b` for a basis pattern.
    #[inline]
    fn diagonal(&self, diff: u32, even: u32) -> f64 {
        let half = (self.n_sites / 2) as f64;
        let anti1 = (diff & even).count_ones() as f64;
        let anti2 = (diff & !even).count_ones() as f64;
        self.j1 * (half - 2.0 * anti1) + self.j2 * (half - 2.0 * anti2)
    }
}

/// Matrix-free `H` restricted to the zero-magnetization sector.
///
/// `σ⃗·σ⃗` on a bond gives `+1` on parallel spins and, on antiparallel spins,
/// `−1` plus an amplitude `2` transferred to the swapped pattern.
#[derive(Debug, Clone, Copy)]
pub struct DimerizedHamiltonian<'a> {
    spec: ChainSpec,
    basis: &'a SectorBasis,
}

impl<'a> DimerizedHamiltonian<'a> {
    pub fn new(spec: ChainSpec, basis: &'a SectorBasis) -> Result<Self> {
        if basis.n_sites() != spec.n_sites() {
            return Err(Error::InvalidChain(format!(
                "basis has {} sites but chain has {}",
                basis.n_sites(),
                spec.n_sites()
            )));
        }
        Ok(DimerizedHamiltonian { spec, basis })
    }

    pub fn spec(&self) -> &ChainSpec {
        &self.spec
    }

    pub fn basis(&self) -> &'a SectorBasis {
        self.basis
    }

    /// Serial `Hv` with dimension checks.
    pub fn apply(&self, v: &[f64]) -> Result<alloc::vec::Vec<f64>> {
        if v.len() != self.basis.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.basis.dim(),
                got: v.len(),
            });
        }
        let mut out = alloc::vec![0.0; v.len()];
        self.apply_rows(v, 0, &mut out);
        Ok(out)
    }
}

impl RowOperator for DimerizedHamiltonian<'_> {
    fn dim(&self) -> usize {
        self.basis.dim()
    }

    fn apply_rows(&self, x: &[f64], first_row: usize, y: &mut [f64]) {
        let n = self.spec.n_sites;
        let even = self.spec.even_mask();
        let states = &self.basis.states()[first_row..first_row + y.len()];
        for (k, (out, &s)) in y.iter_mut().zip(states).enumerate() {
            let diff = self.spec.bond_differences(s);
            let mut acc = self.spec.diagonal(diff, even) * x[first_row + k];
            let mut rest = diff;
            while rest != 0 {
                let m = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                let partner = (m + 1) % n;
                let flipped = s ^ (1 << m) ^ (1 << partner);
                acc += 2.0 * self.spec.bond_coupling(m) * x[self.basis.rank(flipped)];
            }
            *out = acc;
        }
    }
}

/// Matrix-free `H` on the full `2^N` space, without any sector restriction.
#[derive(Debug, Clone, Copy)]
pub struct FullSpaceHamiltonian {
    spec: ChainSpec,
}

impl FullSpaceHamiltonian {
    pub fn new(spec: ChainSpec) -> Self {
        FullSpaceHamiltonian { spec }
    }
}

impl RowOperator for FullSpaceHamiltonian {
    fn dim(&self) -> usize {
        1usize << self.spec.n_sites
    }

    fn apply_rows(&self, x: &[f64], first_row: usize, y: &mut [f64]) {
        let n = self.spec.n_sites;
        for (k, out) in y.iter_mut().enumerate() {
            let s = (first_row + k) as u32;
            let mut acc = 0.0;
            for m in 0..n {
                let partner = (m + 1) % n;
                let j = self.spec.bond_coupling(m);
                let same = ((s >> m) & 1) == ((s >> partner) & 1);
                if same {
                    acc += j * x[s as usize];
                } else {
                    acc -= j * x[s as usize];
                    acc += 2.0 * j * x[(s ^ (1 << m) ^ (1 << partner)) as usize];
                }
            }
            *out = acc;
        }
    }
}
