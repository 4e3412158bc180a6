//! Maximal CHSH correlations of qubit pairs and their monogamy.
//!
//! For a two-qubit state with Pauli correlation matrix `T` the CHSH operator
//! `a·σ ⊗ (b + b′)·σ + a′·σ ⊗ (b − b′)·σ` has expectation
//! `aᵀT(b + b′) + a′ᵀT(b − b′)`. Its maximum over unit directions is
//! `2√(u + u′)`, with `u ≥ u′` the two largest eigenvalues of `TᵀT`.
//! [`oracle_max`] reaches the same number by direct optimization over the
//! directions and never looks at `TᵀT`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use libm::sqrt;
use num_complex::Complex64;
use rand_distr::{Distribution, StandardNormal};

use crate::linalg::{hermitian4_eigenvalues, hermitian4_sqrt, matmul4, sym3_eigenvalues};
use crate::qstate::{correlation_matrix, Axis, CorrelationMatrix, StateVector, TwoQubitState};
use crate::random::{EnsembleKind, RandomEnsemble};
use crate::{Error, Result, BOUND_TOL, TSIRELSON};

pub type Vec3 = [f64; 3];

const UNIT_TOL: f64 = 1e-12;
const RADICAND_TOL: f64 = 1e-10;
const REAL_AMPLITUDE_TOL: f64 = 1e-12;

pub const ORACLE_RESTARTS: usize = 16;
pub const ORACLE_TOL: f64 = 1e-9;
pub const ORACLE_MAX_ITER: usize = 500;

/// Measurement directions `â, â′` for the first qubit and `b̂, b̂′` for the
/// second.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BellSetting {
    a: Vec3,
    a_prime: Vec3,
    b: Vec3,
    b_prime: Vec3,
}

impl BellSetting {
    pub fn new(a: Vec3, a_prime: Vec3, b: Vec3, b_prime: Vec3) -> Result<Self> {
        for (name, v) in [
            ("a", a),
            ("a_prime", a_prime),
            ("b", b),
            ("b_prime", b_prime),
        ] {
            let norm = norm3(&v);
            if (norm - 1.0).abs() > UNIT_TOL {
                return Err(Error::NonUnitDirection { name, norm });
            }
        }
        Ok(BellSetting {
            a,
            a_prime,
            b,
            b_prime,
        })
    }

    pub fn a(&self) -> Vec3 {
        self.a
    }
    pub fn a_prime(&self) -> Vec3 {
        self.a_prime
    }
    pub fn b(&self) -> Vec3 {
        self.b
    }
    pub fn b_prime(&self) -> Vec3 {
        self.b_prime
    }
}

/// Maximal CHSH value of a pair together with the eigenvalue pair it came
/// from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BellValue {
    pub value: f64,
    pub u: f64,
    pub u_prime: f64,
    pub setting: Option<BellSetting>,
}

impl BellValue {
    /// `value²` computed as `4(u + u′)`.
    pub fn squared(&self) -> f64 {
        4.0 * (self.u + self.u_prime)
    }

    pub fn violates_chsh(&self) -> bool {
        self.value > 2.0 + BOUND_TOL
    }
}

#[inline]
fn dot3(x: &Vec3, y: &Vec3) -> f64 {
    x[0] * y[0] + x[1] * y[1] + x[2] * y[2]
}

#[inline]
fn norm3(x: &Vec3) -> f64 {
    sqrt(dot3(x, x))
}

#[inline]
fn add3(x: &Vec3, y: &Vec3) -> Vec3 {
    [x[0] + y[0], x[1] + y[1], x[2] + y[2]]
}

#[inline]
fn sub3(x: &Vec3, y: &Vec3) -> Vec3 {
    [x[0] - y[0], x[1] - y[1], x[2] - y[2]]
}

/// Normalized copy of `x`, or `fallback` when `x` vanishes.
fn unit_or(x: Vec3, fallback: Vec3) -> Vec3 {
    let n = norm3(&x);
    if n > 1e-300 {
        [x[0] / n, x[1] / n, x[2] / n]
    } else {
        fallback
    }
}

/// Square root with rounding residue tolerated: radicands in
/// `[-1e-10, 0)` are clamped, more negative ones are reported.
fn checked_sqrt(x: f64) -> Result<f64> {
    if x < -RADICAND_TOL || x.is_nan() {
        return Err(Error::NegativeRadicand(x));
    }
    Ok(sqrt(x.max(0.0)))
}

/// Closed-form maximal CHSH value `2√(u + u′)`.
pub fn horodecki_max(t: &CorrelationMatrix) -> BellValue {
    let ev = sym3_eigenvalues(&t.gram());
    let u = ev[0].max(0.0);
    let u_prime = ev[1].max(0.0);
    BellValue {
        value: 2.0 * sqrt(u + u_prime),
        u,
        u_prime,
        setting: None,
    }
}

/// Maximal CHSH value when every direction is restricted to the x–z plane,
/// i.e. to real observables. Equals `2‖T_xz‖_F`.
pub fn horodecki_max_real(t: &CorrelationMatrix) -> BellValue {
    let e = t.entries();
    // 2×2 Gram of the x–z block.
    let g00 = e[0][0] * e[0][0] + e[2][0] * e[2][0];
    let g11 = e[0][2] * e[0][2] + e[2][2] * e[2][2];
    let g01 = e[0][0] * e[0][2] + e[2][0] * e[2][2];
    let mean = 0.5 * (g00 + g11);
    let half = sqrt(0.25 * (g00 - g11) * (g00 - g11) + g01 * g01);
    let u = (mean + half).max(0.0);
    let u_prime = (g00 + g11 - u).max(0.0);
    BellValue {
        value: 2.0 * sqrt(g00 + g11),
        u,
        u_prime,
        setting: None,
    }
}

/// `⟨B⟩ = aᵀT(b + b′) + a′ᵀT(b − b′)`.
pub fn bell_expectation(t: &CorrelationMatrix, s: &BellSetting) -> f64 {
    dot3(&s.a, &t.apply(&add3(&s.b, &s.b_prime)))
        + dot3(&s.a_prime, &t.apply(&sub3(&s.b, &s.b_prime)))
}

/// Result of [`oracle_max`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleOutcome {
    pub bell: BellValue,
    /// False when the best restart hit the iteration cap.
    pub converged: bool,
    pub iterations: usize,
}

fn random_unit(rng: &mut rand_chacha::ChaCha8Rng) -> Vec3 {
    loop {
        let v: Vec3 = [
            StandardNormal.sample(rng),
            StandardNormal.sample(rng),
            StandardNormal.sample(rng),
        ];
        let n = norm3(&v);
        if n > 1e-6 {
            return [v[0] / n, v[1] / n, v[2] / n];
        }
    }
}

/// Maximizes [`bell_expectation`] over all four directions by alternating
/// exact half-steps from `restarts` random starts.
///
/// With `b, b′` fixed the optimal first-qubit directions are the normalized
/// `T(b ± b′)`; with `a, a′` fixed the optimal `b, b′` are the normalized
/// `Tᵀ(a ± a′)`. Each restart runs until the value changes by less than
/// `tol` or [`ORACLE_MAX_ITER`] iterations elapse.
pub fn oracle_max(
    t: &CorrelationMatrix,
    restarts: usize,
    tol: f64,
    seed: u64,
) -> Result<OracleOutcome> {
    if restarts == 0 {
        return Err(Error::InvalidParameter {
            name: "restarts",
            detail: String::from("must be at least 1"),
        });
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter {
            name: "tol",
            detail: format!("must be positive (got {tol})"),
        });
    }
    let ens = RandomEnsemble::new(EnsembleKind::RealOrthogonal, seed);
    let mut best: Option<(f64, [Vec3; 4], bool, usize)> = None;
    for restart in 0..restarts {
        let mut rng = ens.rng(restart as u64);
        let mut a = random_unit(&mut rng);
        let mut ap = random_unit(&mut rng);
        let mut b = random_unit(&mut rng);
        let mut bp = random_unit(&mut rng);
        let mut value = f64::NEG_INFINITY;
        let mut converged = false;
        let mut iterations = 0;
        for it in 1..=ORACLE_MAX_ITER {
            iterations = it;
            a = unit_or(t.apply(&add3(&b, &bp)), a);
            ap = unit_or(t.apply(&sub3(&b, &bp)), ap);
            b = unit_or(t.apply_transpose(&add3(&a, &ap)), b);
            bp = unit_or(t.apply_transpose(&sub3(&a, &ap)), bp);
            let next = dot3(&a, &t.apply(&add3(&b, &bp))) + dot3(&ap, &t.apply(&sub3(&b, &bp)));
            let change = (next - value).abs();
            value = next;
            if change < tol {
                converged = true;
                break;
            }
        }
        if best.as_ref().map_or(true, |(v, ..)| value > *v) {
            best = Some((value, [a, ap, b, bp], converged, iterations));
        }
    }
    let (value, [a, ap, b, bp], converged, iterations) = best.expect("at least one restart");
    // The optimal b ± b′ point along the top two singular directions of T;
    // their images give u and u′ without forming TᵀT.
    let c = unit_or(add3(&b, &bp), [1.0, 0.0, 0.0]);
    let cp = unit_or(sub3(&b, &bp), [0.0, 1.0, 0.0]);
    let tc = t.apply(&c);
    let tcp = t.apply(&cp);
    let (mut u, mut u_prime) = (dot3(&tc, &tc), dot3(&tcp, &tcp));
    if u < u_prime {
        core::mem::swap(&mut u, &mut u_prime);
    }
    let setting = BellSetting::new(a, ap, b, bp).ok();
    Ok(OracleOutcome {
        bell: BellValue {
            value,
            u,
            u_prime,
            setting,
        },
        converged,
        iterations,
    })
}

/// Maximal CHSH value of an SU(2)-invariant pair, whose correlation matrix is
/// `tzz·I`: `2√2 |tzz|`.
pub fn heisenberg_bell(tzz: f64) -> Result<BellValue> {
    if !(tzz.abs() <= 1.0 + 1e-12) {
        return Err(Error::CorrelatorRange(tzz));
    }
    let sq = tzz * tzz;
    Ok(BellValue {
        value: TSIRELSON * tzz.abs(),
        u: sq,
        u_prime: sq,
        setting: None,
    })
}

/// Squared maximal Bell values of a pivot qubit with every other qubit,
/// against a monogamy bound.
#[derive(Debug, Clone, PartialEq)]
pub struct MonogamyReport {
    /// `((pivot, other), 𝓑²)` with 0-based indices.
    pub pair_values: Vec<((usize, usize), f64)>,
    pub sum: f64,
    pub bound: f64,
    pub satisfied: bool,
    pub slack: f64,
}

impl MonogamyReport {
    fn new(pair_values: Vec<((usize, usize), f64)>, bound: f64) -> Self {
        let sum: f64 = pair_values.iter().map(|(_, v)| v).sum();
        MonogamyReport {
            pair_values,
            sum,
            bound,
            satisfied: sum <= bound + BOUND_TOL,
            slack: bound - sum,
        }
    }

    /// Pair labels in 1-based `"i-j"` form.
    pub fn labels(&self) -> Vec<String> {
        self.pair_values
            .iter()
            .map(|((i, j), _)| format!("{}-{}", i + 1, j + 1))
            .collect()
    }
}

fn pivot_pairs(state: &StateVector, pivot: usize) -> Result<Vec<((usize, usize), f64)>> {
    if pivot >= state.n_qubits() {
        return Err(Error::IndexOutOfRange {
            index: pivot,
            n_qubits: state.n_qubits(),
        });
    }
    (0..state.n_qubits())
        .filter(|&k| k != pivot)
        .map(|k| {
            let rdm = state.partial_trace_pair(pivot, k)?;
            let t = correlation_matrix(&rdm)?;
            Ok(((pivot, k), horodecki_max(&t).squared()))
        })
        .collect()
}

/// Tripartite trade-off `𝓑²(p,q) + 𝓑²(p,r) ≤ 8`.
pub fn monogamy_triple(state: &StateVector, pivot: usize) -> Result<MonogamyReport> {
    if state.n_qubits() != 3 {
        return Err(Error::QubitCount(state.n_qubits()));
    }
    Ok(MonogamyReport::new(pivot_pairs(state, pivot)?, 8.0))
}

/// N-party sum `Σ_M 𝓑²(pivot, M) ≤ 4(N − 1)`.
pub fn bell_sum(state: &StateVector, pivot: usize) -> Result<MonogamyReport> {
    let n = state.n_qubits();
    if n < 3 {
        return Err(Error::QubitCount(n));
    }
    Ok(MonogamyReport::new(
        pivot_pairs(state, pivot)?,
        4.0 * (n - 1) as f64,
    ))
}

/// Allocation-free `Σ_M 4(u + u′)` over the partners of `pivot`, for the
/// sampling hot loop. `amps` must be a normalized state of `n` qubits.
pub fn bell_sum_squared(amps: &[Complex64], n: usize, pivot: usize) -> f64 {
    let mut total = 0.0;
    for other in (0..n).filter(|&k| k != pivot) {
        let t = pair_correlations_unchecked(amps, pivot, other);
        let ev = sym3_eigenvalues(&gram(&t));
        total += 4.0 * (ev[0].max(0.0) + ev[1].max(0.0));
    }
    total
}

fn gram(t: &[[f64; 3]; 3]) -> [[f64; 3]; 3] {
    let mut u = [[0.0; 3]; 3];
    for a in 0..3 {
        for b in 0..3 {
            u[a][b] = t[0][a] * t[0][b] + t[1][a] * t[1][b] + t[2][a] * t[2][b];
        }
    }
    u
}

/// Pauli correlations of qubits `i`, `j` straight from the amplitudes.
///
/// Uses `σᵘ ⊗ σᵛ` acting on the pair bits: x flips, y flips with phase
/// `±i`, z is diagonal with sign `(−1)^bit`.
fn pair_correlations_unchecked(amps: &[Complex64], i: usize, j: usize) -> [[f64; 3]; 3] {
    let (mi, mj) = (1usize << i, 1usize << j);
    // Reduced-matrix accumulation restricted to the entries the Pauli
    // products need: rho[r][c] with r, c in {00, 01, 10, 11} = 2·bit_i + bit_j.
    let mut rho = [[Complex64::new(0.0, 0.0); 4]; 4];
    for s in 0..amps.len() {
        if s & (mi | mj) != 0 {
            continue;
        }
        let v = [amps[s], amps[s | mj], amps[s | mi], amps[s | mi | mj]];
        for r in 0..4 {
            let vr = v[r];
            for c in r..4 {
                rho[r][c] += vr * v[c].conj();
            }
        }
    }
    for r in 0..4 {
        for c in 0..r {
            rho[r][c] = rho[c][r].conj();
        }
    }
    let mut t = [[0.0; 3]; 3];
    for u in Axis::ALL {
        let pu = u.matrix();
        for v in Axis::ALL {
            let pv = v.matrix();
            let mut acc = Complex64::new(0.0, 0.0);
            for r in 0..4 {
                for c in 0..4 {
                    let op = pu[c >> 1][r >> 1] * pv[c & 1][r & 1];
                    if op.re != 0.0 || op.im != 0.0 {
                        acc += rho[r][c] * op;
                    }
                }
            }
            t[u.index()][v.index()] = acc.re;
        }
    }
    t
}

/// Closed form `2√(1 + ⟨σʸᵢσʸⱼ⟩² − ⟨σʸᵢσʸₖ⟩² − ⟨σʸⱼσʸₖ⟩²)` for a real
/// three-qubit pure state, `k` being the remaining qubit.
///
/// The y–y correlators are evaluated directly on the amplitudes. The
/// expression equals the CHSH maximum over real observables (directions in
/// the x–z plane), see [`horodecki_max_real`].
pub fn real_tripartite_max(state: &StateVector, i: usize, j: usize) -> Result<f64> {
    if state.n_qubits() != 3 {
        return Err(Error::QubitCount(state.n_qubits()));
    }
    let imag = state.max_imag();
    if imag > REAL_AMPLITUDE_TOL {
        return Err(Error::ComplexAmplitudes(imag));
    }
    for idx in [i, j] {
        if idx >= 3 {
            return Err(Error::IndexOutOfRange {
                index: idx,
                n_qubits: 3,
            });
        }
    }
    if i == j {
        return Err(Error::SameIndex(i));
    }
    let k = 3 - i - j;
    let yij = state.pauli_pair_expectation(Axis::Y, i, j)?;
    let yik = state.pauli_pair_expectation(Axis::Y, i, k)?;
    let yjk = state.pauli_pair_expectation(Axis::Y, j, k)?;
    let radicand = 1.0 + yij * yij - yik * yik - yjk * yjk;
    Ok(2.0 * checked_sqrt(radicand)?)
}

/// Wootters concurrence `max(0, λ₁ − λ₂ − λ₃ − λ₄)`, with `λ` the square roots
/// (descending) of the eigenvalues of `ρ (σʸ⊗σʸ) ρ* (σʸ⊗σʸ)`.
///
/// The spectrum is taken from the Hermitian similar matrix
/// `√ρ ρ̃ √ρ`, where `ρ̃ = (σʸ⊗σʸ) ρ* (σʸ⊗σʸ)`.
pub fn concurrence(rdm: &TwoQubitState) -> f64 {
    let rho = rdm.matrix();
    // σʸ⊗σʸ is the real anti-diagonal (−1, 1, 1, −1).
    let flip_sign = [-1.0, 1.0, 1.0, -1.0];
    let mut tilde = [[Complex64::new(0.0, 0.0); 4]; 4];
    for r in 0..4 {
        for c in 0..4 {
            tilde[r][c] = rho[3 - r][3 - c].conj() * (flip_sign[r] * flip_sign[c]);
        }
    }
    let root = hermitian4_sqrt(rho);
    let mut r = matmul4(&matmul4(&root, &tilde), &root);
    // Symmetrize away rounding.
    for a in 0..4 {
        for b in a..4 {
            let avg = (r[a][b] + r[b][a].conj()) * 0.5;
            r[a][b] = avg;
            r[b][a] = avg.conj();
        }
    }
    let ev = hermitian4_eigenvalues(&r);
    let l: Vec<f64> = ev.iter().map(|&x| sqrt(x.max(0.0))).collect();
    (l[0] - l[1] - l[2] - l[3]).max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::random_pure_state;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    const S2: f64 = core::f64::consts::SQRT_2;

    fn diag(x: f64, y: f64, z: f64) -> CorrelationMatrix {
        CorrelationMatrix::diagonal(x, y, z).unwrap()
    }

    fn random_mixed(seed: u64, k: u64) -> TwoQubitState {
        let ens = RandomEnsemble::new(EnsembleKind::ComplexHaar, seed);
        let parts: Vec<TwoQubitState> = (0..3)
            .map(|m| {
                let s = random_pure_state(2, &ens, 10 * k + m).unwrap();
                s.partial_trace_pair(0, 1).unwrap()
            })
            .collect();
        let w = [0.5, 0.3, 0.2];
        TwoQubitState::mixture(&[(w[0], &parts[0]), (w[1], &parts[1]), (w[2], &parts[2])]).unwrap()
    }

    #[test]
    fn horodecki_reference_values() {
        assert_abs_diff_eq!(
            horodecki_max(&diag(-1.0, -1.0, -1.0)).value,
            2.0 * S2,
            epsilon = 1e-15
        );
        let prod = horodecki_max(&diag(0.0, 0.0, 1.0));
        assert_abs_diff_eq!(prod.value, 2.0, epsilon = 1e-15);
        assert_eq!((prod.u, prod.u_prime), (1.0, 0.0));
        let werner = horodecki_max(&diag(-0.8, -0.8, -0.8));
        assert_abs_diff_eq!(werner.value, 1.6 * S2, epsilon = 1e-14);
    }

    #[test]
    fn werner_oracle_confirms_closed_form() {
        let rho = TwoQubitState::werner(0.8).unwrap();
        let t = correlation_matrix(&rho).unwrap();
        for u in 0..3 {
            assert_abs_diff_eq!(t.entries()[u][u], -0.8, epsilon = 1e-14);
        }
        let oracle = oracle_max(&t, ORACLE_RESTARTS, ORACLE_TOL, 1).unwrap();
        assert_abs_diff_eq!(oracle.bell.value, 1.6 * S2, epsilon = 1e-6);
    }

    #[test]
    fn bell_expectation_examples() {
        let singlet = diag(-1.0, -1.0, -1.0);
        let setting = BellSetting::new(
            [1.0, 0.0, 0.0],
            [0.0, 1.0, 0.0],
            [-1.0 / S2, -1.0 / S2, 0.0],
            [-1.0 / S2, 1.0 / S2, 0.0],
        )
        .unwrap();
        assert_abs_diff_eq!(
            bell_expectation(&singlet, &setting),
            2.0 * S2,
            epsilon = 1e-14
        );

        let b = [0.6, 0.0, 0.8];
        let t = diag(0.3, -0.7, 0.9);
        let s = BellSetting::new([0.0, 0.0, 1.0], [1.0, 0.0, 0.0], b, b).unwrap();
        let expect = 2.0 * dot3(&[0.0, 0.0, 1.0], &t.apply(&b));
        let got = bell_expectation(&t, &s);
        assert_abs_diff_eq!(got, expect, epsilon = 1e-15);
        assert!(got.abs() <= 2.0);

        let zero = diag(0.0, 0.0, 0.0);
        assert_eq!(bell_expectation(&zero, &setting), 0.0);
    }

    #[test]
    fn non_unit_direction_rejected() {
        let err = BellSetting::new(
            [1.0, 0.0, 0.0],
            [0.0, 2.0, 0.0],
            [1.0, 0.0, 0.0],
            [1.0, 0.0, 0.0],
        );
        assert!(matches!(
            err,
            Err(Error::NonUnitDirection {
                name: "a_prime",
                ..
            })
        ));
    }

    #[test]
    fn oracle_reference_values() {
        let singlet = oracle_max(&diag(-1.0, -1.0, -1.0), ORACLE_RESTARTS, ORACLE_TOL, 7).unwrap();
        assert!(singlet.converged);
        assert_abs_diff_eq!(singlet.bell.value, 2.0 * S2, epsilon = 1e-6);
        let s = singlet.bell.setting.unwrap();
        assert_abs_diff_eq!(
            bell_expectation(&diag(-1.0, -1.0, -1.0), &s),
            2.0 * S2,
            epsilon = 1e-6
        );
        let prod = oracle_max(&diag(0.0, 0.0, 1.0), ORACLE_RESTARTS, ORACLE_TOL, 7).unwrap();
        assert_abs_diff_eq!(prod.bell.value, 2.0, epsilon = 1e-6);
        assert!(oracle_max(&diag(0.0, 0.0, 1.0), 0, 1e-9, 0).is_err());
        assert!(oracle_max(&diag(0.0, 0.0, 1.0), 1, 0.0, 0).is_err());
    }

    #[test]
    fn oracle_matches_closed_form_on_random_mixed_states() {
        for k in 0..100 {
            let t = correlation_matrix(&random_mixed(11, k)).unwrap();
            let closed = horodecki_max(&t);
            let oracle = oracle_max(&t, ORACLE_RESTARTS, ORACLE_TOL, k).unwrap();
            assert!(
                (closed.value - oracle.bell.value).abs() <= 1e-5,
                "instance {k}"
            );
            assert!(closed.value <= TSIRELSON + BOUND_TOL);
        }
    }

    #[test]
    fn heisenberg_bell_examples() {
        assert_abs_diff_eq!(
            heisenberg_bell(-1.0).unwrap().value,
            2.0 * S2,
            epsilon = 1e-15
        );
        assert_eq!(heisenberg_bell(0.0).unwrap().value, 0.0);
        assert_abs_diff_eq!(
            heisenberg_bell(-2.0 / 3.0).unwrap().value,
            4.0 * S2 / 3.0,
            epsilon = 1e-15
        );
        let closed = heisenberg_bell(-0.37).unwrap();
        let general = horodecki_max(&diag(-0.37, -0.37, -0.37));
        assert_abs_diff_eq!(closed.value, general.value, epsilon = 1e-14);
        assert!(heisenberg_bell(1.5).is_err());
    }

    #[test]
    fn triple_reports() {
        let ghz = monogamy_triple(&StateVector::ghz(3).unwrap(), 0).unwrap();
        for (_, v) in &ghz.pair_values {
            assert_abs_diff_eq!(*v, 4.0, epsilon = 1e-12);
        }
        assert!(ghz.satisfied);
        assert_abs_diff_eq!(ghz.slack, 0.0, epsilon = 1e-12);
        assert_eq!(ghz.labels(), ["1-2", "1-3"]);

        let w = monogamy_triple(&StateVector::w(3).unwrap(), 0).unwrap();
        for (_, v) in &w.pair_values {
            assert_abs_diff_eq!(*v, 32.0 / 9.0, epsilon = 1e-12);
        }
        assert_abs_diff_eq!(w.sum, 64.0 / 9.0, epsilon = 1e-12);
        assert!(w.satisfied);

        let prod = monogamy_triple(&StateVector::basis(3, 0).unwrap(), 0).unwrap();
        assert_abs_diff_eq!(prod.sum, 8.0, epsilon = 1e-12);
        assert!(prod.satisfied);

        assert_eq!(
            monogamy_triple(&StateVector::ghz(4).unwrap(), 0).unwrap_err(),
            Error::QubitCount(4)
        );
    }

    #[test]
    fn w_pair_correlations() {
        let rho = StateVector::w(3).unwrap().partial_trace_pair(0, 1).unwrap();
        let t = correlation_matrix(&rho).unwrap();
        assert_abs_diff_eq!(t.entries()[0][0], 2.0 / 3.0, epsilon = 1e-14);
        assert_abs_diff_eq!(t.entries()[1][1], 2.0 / 3.0, epsilon = 1e-14);
        assert_abs_diff_eq!(t.entries()[2][2], -1.0 / 3.0, epsilon = 1e-14);
    }

    #[test]
    fn bell_sum_reports() {
        for n in 3..=7 {
            let up = bell_sum(&StateVector::basis(n, 0).unwrap(), 0).unwrap();
            assert_abs_diff_eq!(up.sum, 4.0 * (n - 1) as f64, epsilon = 1e-12);
            assert_abs_diff_eq!(up.slack, 0.0, epsilon = 1e-12);
            let ghz = bell_sum(&StateVector::ghz(n).unwrap(), 0).unwrap();
            assert_abs_diff_eq!(ghz.sum, 4.0 * (n - 1) as f64, epsilon = 1e-12);
            assert!(ghz.satisfied);
        }
        let s = StateVector::singlet()
            .tensor(&StateVector::basis(1, 0).unwrap())
            .unwrap();
        let r = bell_sum(&s, 0).unwrap();
        assert_abs_diff_eq!(r.pair_values[0].1, 8.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r.pair_values[1].1, 0.0, epsilon = 1e-12);
        assert!(r.satisfied);
        assert_eq!(
            bell_sum(&StateVector::singlet(), 0).unwrap_err(),
            Error::QubitCount(2)
        );
    }

    #[test]
    fn hot_path_sum_matches_report() {
        let ens = RandomEnsemble::new(EnsembleKind::ComplexHaar, 5);
        for k in 0..50 {
            let s = random_pure_state(5, &ens, k).unwrap();
            let report = bell_sum(&s, 0).unwrap();
            assert_abs_diff_eq!(
                bell_sum_squared(s.amplitudes(), 5, 0),
                report.sum,
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn real_tripartite_examples() {
        let ghz = StateVector::ghz(3).unwrap();
        // y–y correlators of GHZ: ⟨σʸσʸ⟩ vanishes on every pair of a 3-qubit GHZ.
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            assert_abs_diff_eq!(
                ghz.pauli_pair_expectation(Axis::Y, i, j).unwrap(),
                0.0,
                epsilon = 1e-15
            );
        }
        assert_abs_diff_eq!(
            real_tripartite_max(&ghz, 0, 1).unwrap(),
            2.0,
            epsilon = 1e-12
        );
        let t = correlation_matrix(&ghz.partial_trace_pair(0, 1).unwrap()).unwrap();
        assert_abs_diff_eq!(horodecki_max(&t).value, 2.0, epsilon = 1e-12);

        let s = StateVector::singlet()
            .tensor(&StateVector::basis(1, 0).unwrap())
            .unwrap();
        assert_abs_diff_eq!(
            s.pauli_pair_expectation(Axis::Y, 0, 1).unwrap(),
            -1.0,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            real_tripartite_max(&s, 0, 1).unwrap(),
            2.0 * S2,
            epsilon = 1e-12
        );

        let complex =
            StateVector::new(3, (0..8).map(|k| Complex64::new(1.0, k as f64)).collect()).unwrap();
        assert!(matches!(
            real_tripartite_max(&complex, 0, 1),
            Err(Error::ComplexAmplitudes(_))
        ));
        assert_eq!(
            real_tripartite_max(&ghz, 2, 2).unwrap_err(),
            Error::SameIndex(2)
        );
    }

    #[test]
    fn real_tripartite_is_real_observable_maximum() {
        let ens = RandomEnsemble::new(EnsembleKind::RealOrthogonal, 77);
        let mut strictly_below = 0;
        for k in 0..2_000 {
            let s = random_pure_state(3, &ens, k).unwrap();
            for (i, j) in [(0, 1), (0, 2), (1, 2)] {
                let formula = real_tripartite_max(&s, i, j).unwrap();
                let t = correlation_matrix(&s.partial_trace_pair(i, j).unwrap()).unwrap();
                let real = horodecki_max_real(&t).value;
                let full = horodecki_max(&t).value;
                assert!(
                    (formula - real).abs() <= 1e-9,
                    "sample {k} pair ({i},{j}): {formula} vs {real}"
                );
                assert!(formula <= full + 1e-9);
                if full - formula > 1e-6 {
                    strictly_below += 1;
                }
            }
        }
        // Unrestricted directions can use σʸ and beat the real-observable value.
        assert!(strictly_below > 0);
    }

    #[test]
    fn concurrence_examples() {
        let singlet = StateVector::singlet().partial_trace_pair(0, 1).unwrap();
        assert_abs_diff_eq!(concurrence(&singlet), 1.0, epsilon = 1e-10);
        let zero = StateVector::basis(2, 0)
            .unwrap()
            .partial_trace_pair(0, 1)
            .unwrap();
        assert_abs_diff_eq!(concurrence(&zero), 0.0, epsilon = 1e-10);
        for p in [0.2, 1.0 / 3.0, 0.6, 0.8, 1.0] {
            let expect = ((3.0 * p - 1.0) / 2.0f64).max(0.0);
            assert_abs_diff_eq!(
                concurrence(&TwoQubitState::werner(p).unwrap()),
                expect,
                epsilon = 1e-7
            );
        }
    }

    #[test]
    fn entangled_but_local_witness() {
        let rho = TwoQubitState::werner(0.6).unwrap();
        let t = correlation_matrix(&rho).unwrap();
        assert!(concurrence(&rho) > 0.3);
        assert!(horodecki_max(&t).value <= 2.0);
    }

    #[test]
    fn pure_state_concurrence_is_two_abs_det() {
        // For |ψ⟩ = Σ c_ab |ab⟩, C = 2|c00 c11 − c01 c10|.
        let ens = RandomEnsemble::new(EnsembleKind::ComplexHaar, 3);
        for k in 0..20 {
            let s = random_pure_state(2, &ens, k).unwrap();
            let c = s.amplitudes();
            let expect = 2.0 * (c[0] * c[3] - c[1] * c[2]).norm();
            let rho = s.partial_trace_pair(0, 1).unwrap();
            assert_abs_diff_eq!(concurrence(&rho), expect, epsilon = 1e-7);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn expectation_never_exceeds_closed_form(seed in 0u64..10_000, dirs in proptest::array::uniform12(-1.0f64..1.0)) {
            let t = correlation_matrix(&random_mixed(seed, 0)).unwrap();
            let v = |k: usize| unit_or([dirs[k], dirs[k + 1], dirs[k + 2]], [0.0, 0.0, 1.0]);
            let s = BellSetting::new(v(0), v(3), v(6), v(9)).unwrap();
            prop_assert!(bell_expectation(&t, &s) <= horodecki_max(&t).value + BOUND_TOL);
        }

        #[test]
        fn closed_form_symmetric_under_transpose(seed in 0u64..10_000) {
            let t = correlation_matrix(&random_mixed(seed, 1)).unwrap();
            let a = horodecki_max(&t).value;
            let b = horodecki_max(&t.transpose()).value;
            prop_assert!((a - b).abs() <= 1e-12);
            prop_assert!(a <= TSIRELSON + BOUND_TOL);
        }

        #[test]
        fn closed_form_value_matches_eigenvalues(seed in 0u64..10_000) {
            let t = correlation_matrix(&random_mixed(seed, 2)).unwrap();
            let b = horodecki_max(&t);
            prop_assert!((b.value - 2.0 * sqrt(b.u + b.u_prime)).abs() <= 1e-12);
            prop_assert!(0.0 <= b.u_prime && b.u_prime <= b.u && b.u <= 1.0 + 1e-12);
        }
    }
}
