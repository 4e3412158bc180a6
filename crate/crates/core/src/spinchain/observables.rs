use alloc::vec::Vec;

use super::solver::GroundState;
use crate::chsh::{concurrence, heisenberg_bell, horodecki_max, BellValue};
use crate::qstate::{correlation_matrix, Axis, TwoQubitState};
use crate::{Complex64, Error, Result, BOUND_TOL};

/// Largest tolerated gap between `2√2|⟨σᶻσᶻ⟩|` and the general closed form.
pub const CLOSED_FORM_TOL: f64 = 1e-8;

/// Both routes to the maximal Bell value of one chain pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairBell {
    /// From `⟨σᶻᵢσᶻⱼ⟩` alone.
    pub closed: BellValue,
    /// From the explicitly assembled reduced density operator.
    pub general: BellValue,
    pub concurrence: f64,
}

impl PairBell {
    pub fn discrepancy(&self) -> f64 {
        (self.closed.value - self.general.value).abs()
    }
}

impl GroundState {
    fn check_sites(&self, i: usize, j: usize) -> Result<()> {
        let n = self.spec.n_sites();
        for s in [i, j] {
            if s >= n {
                return Err(Error::IndexOutOfRange {
                    index: s,
                    n_qubits: n,
                });
            }
        }
        if i == j {
            return Err(Error::SameIndex(i));
        }
        Ok(())
    }

    /// `⟨σᵘᵢ σᵘⱼ⟩`. Within the sector σˣσˣ and σʸσʸ both reduce to the
    /// exchange amplitude between patterns with swapped sites.
    pub fn correlator(&self, axis: Axis, i: usize, j: usize) -> Result<f64> {
        self.check_sites(i, j)?;
        let (mi, mj) = (1u32 << i, 1u32 << j);
        let states = self.basis.states();
        let v = &self.vector;
        let value = match axis {
            Axis::Z => states
                .iter()
                .zip(v)
                .map(|(&s, &a)| {
                    let same = ((s & mi) != 0) == ((s & mj) != 0);
                    if same {
                        a * a
                    } else {
                        -a * a
                    }
                })
                .sum(),
            Axis::X | Axis::Y => states
                .iter()
                .zip(v)
                .filter(|(&s, _)| ((s & mi) != 0) != ((s & mj) != 0))
                .map(|(&s, &a)| a * v[self.basis.rank(s ^ mi ^ mj)])
                .sum(),
        };
        Ok(value)
    }

    /// `⟨σᶻᵢ⟩` (the x and y components vanish in the sector).
    pub fn magnetization(&self, i: usize) -> Result<f64> {
        let n = self.spec.n_sites();
        if i >= n {
            return Err(Error::IndexOutOfRange {
                index: i,
                n_qubits: n,
            });
        }
        let m = 1u32 << i;
        Ok(self
            .basis
            .states()
            .iter()
            .zip(&self.vector)
            .map(|(&s, &a)| if s & m != 0 { -a * a } else { a * a })
            .sum())
    }

    /// Reduced density operator of sites `i`, `j` (site `i` first), traced
    /// directly over the sector amplitudes.
    pub fn reduced_pair(&self, i: usize, j: usize) -> Result<TwoQubitState> {
        self.check_sites(i, j)?;
        let (mi, mj) = (1u32 << i, 1u32 << j);
        let mut rho = [[Complex64::new(0.0, 0.0); 4]; 4];
        for (&s, &a) in self.basis.states().iter().zip(&self.vector) {
            let r = 2 * usize::from(s & mi != 0) + usize::from(s & mj != 0);
            let env = s & !(mi | mj);
            for c in 0..4 {
                let bit_i = if c & 2 != 0 { mi } else { 0 };
                let bit_j = if c & 1 != 0 { mj } else { 0 };
                let partner = env | bit_i | bit_j;
                if let Some(k) = self.basis.rank_checked(partner) {
                    rho[r][c] += Complex64::new(a * self.vector[k], 0.0);
                }
            }
        }
        TwoQubitState::with_pair(rho, (i, j))
    }

    /// Both Bell routes plus the concurrence of the pair.
    pub fn pair_bell_checked(&self, i: usize, j: usize) -> Result<PairBell> {
        let tzz = self.correlator(Axis::Z, i, j)?;
        let closed = heisenberg_bell(tzz.clamp(-1.0, 1.0))?;
        let rdm = self.reduced_pair(i, j)?;
        let general = horodecki_max(&correlation_matrix(&rdm)?);
        Ok(PairBell {
            closed,
            general,
            concurrence: concurrence(&rdm),
        })
    }

    /// Maximal Bell value of sites `i`, `j`, cross-checked against the
    /// general closed form.
    pub fn pair_bell(&self, i: usize, j: usize) -> Result<BellValue> {
        pair_bell(self, i, j)
    }

    /// Bell values between site 0 and every ring distance `1..=N/2` of a
    /// translation-invariant (uniform) ring.
    ///
    /// With `exclude_antipodal` the distance-`N/2` pair is reported but not
    /// held to the classical bound: on an even ring it has no second partner
    /// at the same distance.
    pub fn distance_scan(&self, exclude_antipodal: bool) -> Result<DistanceScan> {
        if !self.spec.is_uniform() {
            return Err(Error::NotUniform {
                j1: self.spec.j1(),
                j2: self.spec.j2(),
            });
        }
        let n = self.spec.n_sites();
        let entries = (1..=n / 2)
            .map(|d| {
                let pb = self.pair_bell_checked(0, d)?;
                if pb.discrepancy() > CLOSED_FORM_TOL {
                    return Err(mismatch(&pb));
                }
                Ok(DistanceEntry {
                    distance: d,
                    value: pb.closed.value,
                    concurrence: pb.concurrence,
                    asserted: !(exclude_antipodal && d == n / 2),
                    within_bound: pb.closed.value <= 2.0 + BOUND_TOL,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(DistanceScan {
            n_sites: n,
            entries,
        })
    }
}

fn mismatch(pb: &PairBell) -> Error {
    Error::ClosedFormMismatch {
        closed: pb.closed.value,
        general: pb.general.value,
        diff: pb.discrepancy(),
    }
}

/// `2√2|⟨σᶻᵢσᶻⱼ⟩|`, failing when it disagrees with the general closed form
/// by more than [`CLOSED_FORM_TOL`].
pub fn pair_bell(state: &GroundState, i: usize, j: usize) -> Result<BellValue> {
    let pb = state.pair_bell_checked(i, j)?;
    if pb.discrepancy() > CLOSED_FORM_TOL {
        return Err(mismatch(&pb));
    }
    Ok(pb.closed)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistanceEntry {
    pub distance: usize,
    pub value: f64,
    pub concurrence: f64,
    /// Whether this distance is held to the classical bound.
    pub asserted: bool,
    pub within_bound: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistanceScan {
    pub n_sites: usize,
    pub entries: Vec<DistanceEntry>,
}

impl DistanceScan {
    /// True when every asserted distance stays within `2 + 1e-9`.
    pub fn passed(&self) -> bool {
        self.entries
            .iter()
            .filter(|e| e.asserted)
            .all(|e| e.within_bound)
    }

    pub fn antipodal(&self) -> Option<&DistanceEntry> {
        self.entries.iter().find(|e| e.distance == self.n_sites / 2)
    }
}
