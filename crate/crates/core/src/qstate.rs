//! Pure N-qubit states, two-qubit reduced density operators and Pauli
//! correlation matrices.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use libm::sqrt;
use num_complex::Complex64;

use crate::linalg::hermitian4_eigenvalues;
use crate::{Error, Result};

const HERMITIAN_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-12;
const PSD_TOL: f64 = -1e-10;
const NORM_TOL: f64 = 1e-10;
const CORRELATION_IMAG_TOL: f64 = 1e-9;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Pauli axis label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        self as usize
    }

    /// 2×2 Pauli matrix in the computational basis.
    pub fn matrix(self) -> [[Complex64; 2]; 2] {
        match self {
            Axis::X => [[ZERO, ONE], [ONE, ZERO]],
            Axis::Y => [[ZERO, -I], [I, ZERO]],
            Axis::Z => [[ONE, ZERO], [ZERO, -ONE]],
        }
    }
}

/// Normalized pure state of `n_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

/// Normalizes `amplitudes` into a state. Returns the state together with the
/// factor `1/‖amplitudes‖` that was applied.
pub fn make_state(n_qubits: usize, amplitudes: Vec<Complex64>) -> Result<(StateVector, f64)> {
    if n_qubits == 0 || n_qubits >= usize::BITS as usize {
        return Err(Error::QubitCount(n_qubits));
    }
    let expected = 1usize << n_qubits;
    if amplitudes.len() != expected {
        return Err(Error::LengthMismatch {
            n_qubits,
            expected,
            got: amplitudes.len(),
        });
    }
    let norm_sq: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
    if norm_sq == 0.0 || !norm_sq.is_finite() {
        return Err(Error::ZeroVector);
    }
    let factor = 1.0 / sqrt(norm_sq);
    let amplitudes = amplitudes.into_iter().map(|z| z * factor).collect();
    Ok((
        StateVector {
            n_qubits,
            amplitudes,
        },
        factor,
    ))
}

impl StateVector {
    /// Builds a state from amplitudes, normalizing them.
    pub fn new(n_qubits: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        make_state(n_qubits, amplitudes).map(|(s, _)| s)
    }

    pub fn from_real(n_qubits: usize, amplitudes: &[f64]) -> Result<Self> {
        Self::new(
            n_qubits,
            amplitudes.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        )
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        let mut amps = vec![ZERO; 1usize << n_qubits.min(usize::BITS as usize - 1)];
        if index >= amps.len() {
            return Err(Error::IndexOutOfRange { index, n_qubits });
        }
        amps[index] = ONE;
        Self::new(n_qubits, amps)
    }

    /// (|0…0⟩ + |1…1⟩)/√2.
    pub fn ghz(n_qubits: usize) -> Result<Self> {
        let dim = 1usize << n_qubits;
        let mut amps = vec![ZERO; dim];
        amps[0] = ONE;
        amps[dim - 1] = ONE;
        Self::new(n_qubits, amps)
    }

    /// Equal superposition of all single-excitation basis states.
    pub fn w(n_qubits: usize) -> Result<Self> {
        let mut amps = vec![ZERO; 1usize << n_qubits];
        for k in 0..n_qubits {
            amps[1 << k] = ONE;
        }
        Self::new(n_qubits, amps)
    }

    /// Two-qubit singlet (|01⟩ − |10⟩)/√2.
    pub fn singlet() -> Self {
        Self::from_real(2, &[0.0, 1.0, -1.0, 0.0]).expect("singlet is well formed")
    }

    /// Tensor product with `self` on the low qubits and `other` above them.
    pub fn tensor(&self, other: &StateVector) -> Result<Self> {
        let n = self.n_qubits + other.n_qubits;
        let mut amps = Vec::with_capacity(1usize << n);
        for b in &other.amplitudes {
            for a in &self.amplitudes {
                amps.push(a * b);
            }
        }
        Self::new(n, amps)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        sqrt(self.amplitudes.iter().map(|z| z.norm_sqr()).sum())
    }

    /// Largest |imaginary part| among the amplitudes.
    pub fn max_imag(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|z| z.im.abs())
            .fold(0.0, f64::max)
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm() - 1.0).abs() <= NORM_TOL
    }

    fn check_index(&self, index: usize) -> Result<()> {
        if index >= self.n_qubits {
            return Err(Error::IndexOutOfRange {
                index,
                n_qubits: self.n_qubits,
            });
        }
        Ok(())
    }

    /// ⟨σᵘᵢ σᵘⱼ⟩ evaluated directly on the amplitudes (no reduced state).
    pub fn pauli_pair_expectation(&self, axis: Axis, i: usize, j: usize) -> Result<f64> {
        self.check_index(i)?;
        self.check_index(j)?;
        if i == j {
            return Err(Error::SameIndex(i));
        }
        let (mi, mj) = (1usize << i, 1usize << j);
        let mut acc = Complex64::new(0.0, 0.0);
        for (s, amp) in self.amplitudes.iter().enumerate() {
            let bi = s & mi != 0;
            let bj = s & mj != 0;
            let (target, phase) = match axis {
                Axis::Z => {
                    let sign = if bi == bj { 1.0 } else { -1.0 };
                    (s, Complex64::new(sign, 0.0))
                }
                Axis::X => (s ^ mi ^ mj, ONE),
                Axis::Y => {
                    // σʸ|0⟩ = i|1⟩, σʸ|1⟩ = −i|0⟩
                    let sign = if bi == bj { -1.0 } else { 1.0 };
                    (s ^ mi ^ mj, Complex64::new(sign, 0.0))
                }
            };
            acc += self.amplitudes[target].conj() * phase * amp;
        }
        Ok(acc.re)
    }

    /// Reduced density operator of qubits `i` and `j`, with `i` as the first
    /// tensor factor (row index `2·bit_i + bit_j`).
    pub fn partial_trace_pair(&self, i: usize, j: usize) -> Result<TwoQubitState> {
        self.check_index(i)?;
        self.check_index(j)?;
        if i == j {
            return Err(Error::SameIndex(i));
        }
        let (mi, mj) = (1usize << i, 1usize << j);
        let mut rho = [[ZERO; 4]; 4];
        // Enumerate environment configurations: basis indices with bits i, j cleared.
        for s in 0..self.dim() {
            if s & (mi | mj) != 0 {
                continue;
            }
            let idx = [s, s | mj, s | mi, s | mi | mj];
            let amps = [
                self.amplitudes[idx[0]],
                self.amplitudes[idx[1]],
                self.amplitudes[idx[2]],
                self.amplitudes[idx[3]],
            ];
            for r in 0..4 {
                for c in 0..4 {
                    rho[r][c] += amps[r] * amps[c].conj();
                }
            }
        }
        TwoQubitState::with_pair(rho, (i, j))
    }
}

/// Convenience wrapper for [`StateVector::partial_trace_pair`].
pub fn partial_trace_pair(state: &StateVector, i: usize, j: usize) -> Result<TwoQubitState> {
    state.partial_trace_pair(i, j)
}

/// Validated 4×4 two-qubit density operator.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoQubitState {
    matrix: [[Complex64; 4]; 4],
    source_pair: Option<(usize, usize)>,
}

impl TwoQubitState {
    /// Validates Hermiticity, unit trace and positive semidefiniteness.
    pub fn new(matrix: [[Complex64; 4]; 4]) -> Result<Self> {
        validate_density(&matrix)?;
        Ok(TwoQubitState {
            matrix,
            source_pair: None,
        })
    }

    pub fn with_pair(matrix: [[Complex64; 4]; 4], pair: (usize, usize)) -> Result<Self> {
        let mut s = Self::new(matrix)?;
        s.source_pair = Some(pair);
        Ok(s)
    }

    /// Projector onto a (normalized here) two-qubit pure state.
    pub fn pure(psi: [Complex64; 4]) -> Result<Self> {
        let state = StateVector::new(2, psi.to_vec())?;
        state.partial_trace_pair(1, 0).map(|mut s| {
            // Qubit 1 is the first tensor factor, so the matrix is |ψ⟩⟨ψ| in
            // the big-endian order of `psi`; nothing was traced out.
            s.source_pair = None;
            s
        })
    }

    /// p|Ψ⁻⟩⟨Ψ⁻| + (1 − p)·I/4.
    pub fn werner(p: f64) -> Result<Self> {
        let singlet = Self::pure([ZERO, ONE, -ONE, ZERO])?;
        let mut m = [[ZERO; 4]; 4];
        for r in 0..4 {
            for c in 0..4 {
                m[r][c] = singlet.matrix[r][c] * p;
            }
            m[r][r] += Complex64::new((1.0 - p) / 4.0, 0.0);
        }
        Self::new(m)
    }

    /// Convex combination `Σ wₖ ρₖ` (weights must sum to 1).
    pub fn mixture(parts: &[(f64, &TwoQubitState)]) -> Result<Self> {
        let mut m = [[ZERO; 4]; 4];
        for (w, s) in parts {
            for r in 0..4 {
                for c in 0..4 {
                    m[r][c] += s.matrix[r][c] * *w;
                }
            }
        }
        Self::new(m)
    }

    pub fn matrix(&self) -> &[[Complex64; 4]; 4] {
        &self.matrix
    }

    pub fn source_pair(&self) -> Option<(usize, usize)> {
        self.source_pair
    }

    /// Eigenvalues sorted descending.
    pub fn eigenvalues(&self) -> [f64; 4] {
        hermitian4_eigenvalues(&self.matrix)
    }

    /// Single-qubit state of the first (`first = true`) or second factor.
    pub fn marginal(&self, first: bool) -> [[Complex64; 2]; 2] {
        let mut out = [[ZERO; 2]; 2];
        for a in 0..2 {
            for b in 0..2 {
                for k in 0..2 {
                    let (r, c) = if first {
                        (2 * a + k, 2 * b + k)
                    } else {
                        (2 * k + a, 2 * k + b)
                    };
                    out[a][b] += self.matrix[r][c];
                }
            }
        }
        out
    }

    /// Tr(ρ σᵘ ⊗ σᵛ) as a complex number (imaginary part is rounding only for
    /// valid states).
    pub fn pauli_expectation(&self, u: Axis, v: Axis) -> Complex64 {
        let (pu, pv) = (u.matrix(), v.matrix());
        let mut acc = ZERO;
        for r in 0..4 {
            for c in 0..4 {
                let op = pu[c >> 1][r >> 1] * pv[c & 1][r & 1];
                if op != ZERO {
                    acc += self.matrix[r][c] * op;
                }
            }
        }
        acc
    }
}

fn validate_density(m: &[[Complex64; 4]; 4]) -> Result<()> {
    for r in 0..4 {
        for c in 0..4 {
            let x = m[r][c];
            if !x.re.is_finite() || !x.im.is_finite() {
                return Err(Error::InvalidDensity {
                    invariant: "finite",
                    detail: format!("entry ({r},{c}) = {x}"),
                });
            }
            let d = (x - m[c][r].conj()).norm();
            if d > HERMITIAN_TOL {
                return Err(Error::InvalidDensity {
                    invariant: "hermitian",
                    detail: format!("entry ({r},{c}) deviates by {d:e}"),
                });
            }
        }
    }
    let tr: Complex64 = (0..4).map(|k| m[k][k]).sum();
    if (tr - ONE).norm() > TRACE_TOL {
        return Err(Error::InvalidDensity {
            invariant: "unit-trace",
            detail: format!("trace = {tr}"),
        });
    }
    let min_ev = hermitian4_eigenvalues(m)[3];
    if min_ev < PSD_TOL {
        return Err(Error::InvalidDensity {
            invariant: "positive-semidefinite",
            detail: format!("minimum eigenvalue {min_ev:e}"),
        });
    }
    Ok(())
}

/// Real 3×3 Pauli correlation matrix `t[u][v] = Tr(ρ σᵤ ⊗ σᵥ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationMatrix {
    t: [[f64; 3]; 3],
}

impl CorrelationMatrix {
    /// Wraps `t` after checking every entry lies in [−1, 1].
    pub fn new(t: [[f64; 3]; 3]) -> Result<Self> {
        for row in &t {
            for &x in row {
                if !(x.abs() <= 1.0 + HERMITIAN_TOL) {
                    return Err(Error::CorrelatorRange(x));
                }
            }
        }
        Ok(CorrelationMatrix { t })
    }

    pub fn diagonal(x: f64, y: f64, z: f64) -> Result<Self> {
        Self::new([[x, 0.0, 0.0], [0.0, y, 0.0], [0.0, 0.0, z]])
    }

    pub fn entries(&self) -> &[[f64; 3]; 3] {
        &self.t
    }

    pub fn get(&self, u: Axis, v: Axis) -> f64 {
        self.t[u.index()][v.index()]
    }

    /// Correlation matrix with the roles of the two qubits exchanged.
    pub fn transpose(&self) -> Self {
        let mut t = [[0.0; 3]; 3];
        for (u, row) in t.iter_mut().enumerate() {
            for (v, x) in row.iter_mut().enumerate() {
                *x = self.t[v][u];
            }
        }
        CorrelationMatrix { t }
    }

    /// `T x` for a 3-vector `x`.
    pub fn apply(&self, x: &[f64; 3]) -> [f64; 3] {
        let mut out = [0.0; 3];
        for (u, o) in out.iter_mut().enumerate() {
            *o = self.t[u][0] * x[0] + self.t[u][1] * x[1] + self.t[u][2] * x[2];
        }
        out
    }

    /// `Tᵀ x` for a 3-vector `x`.
    pub fn apply_transpose(&self, x: &[f64; 3]) -> [f64; 3] {
        let mut out = [0.0; 3];
        for (v, o) in out.iter_mut().enumerate() {
            *o = self.t[0][v] * x[0] + self.t[1][v] * x[1] + self.t[2][v] * x[2];
        }
        out
    }

    /// Symmetric Gram matrix `TᵀT`.
    pub fn gram(&self) -> [[f64; 3]; 3] {
        let mut u = [[0.0; 3]; 3];
        for a in 0..3 {
            for b in a..3 {
                let s = self.t[0][a] * self.t[0][b]
                    + self.t[1][a] * self.t[1][b]
                    + self.t[2][a] * self.t[2][b];
                u[a][b] = s;
                u[b][a] = s;
            }
        }
        u
    }
}

/// Extracts the Pauli correlation matrix of a two-qubit state.
pub fn correlation_matrix(rdm: &TwoQubitState) -> Result<CorrelationMatrix> {
    let mut t = [[0.0; 3]; 3];
    for u in Axis::ALL {
        for v in Axis::ALL {
            let z = rdm.pauli_expectation(u, v);
            if z.im.abs() > CORRELATION_IMAG_TOL {
                return Err(Error::NonHermitian {
                    row: u.index(),
                    col: v.index(),
                    imag: z.im,
                });
            }
            t[u.index()][v.index()] = z.re;
        }
    }
    CorrelationMatrix::new(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn assert_matrix(m: &[[Complex64; 4]; 4], expect: &[[f64; 4]; 4]) {
        for r in 0..4 {
            for col in 0..4 {
                assert_abs_diff_eq!(m[r][col].re, expect[r][col], epsilon = 1e-14);
                assert_abs_diff_eq!(m[r][col].im, 0.0, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn make_state_normalizes() {
        let (s, f) = make_state(1, vec![c(1.0), c(0.0)]).unwrap();
        assert_eq!(f, 1.0);
        assert_eq!(s.amplitudes(), &[c(1.0), c(0.0)]);

        let (s, f) = make_state(1, vec![c(2.0), c(0.0)]).unwrap();
        assert_eq!(f, 0.5);
        assert_eq!(s.amplitudes()[0], c(1.0));

        let (s, _) = make_state(2, vec![c(1.0), c(0.0), c(0.0), c(-1.0)]).unwrap();
        let h = core::f64::consts::FRAC_1_SQRT_2;
        assert_abs_diff_eq!(s.amplitudes()[0].re, h, epsilon = 1e-15);
        assert_abs_diff_eq!(s.amplitudes()[3].re, -h, epsilon = 1e-15);
    }

    #[test]
    fn make_state_errors() {
        assert!(matches!(
            make_state(2, vec![c(1.0); 3]),
            Err(Error::LengthMismatch {
                expected: 4,
                got: 3,
                ..
            })
        ));
        assert_eq!(
            make_state(1, vec![c(0.0); 2]).unwrap_err(),
            Error::ZeroVector
        );
    }

    #[test]
    fn ghz_pair_is_classical_mixture() {
        let ghz = StateVector::ghz(3).unwrap();
        let rho = ghz.partial_trace_pair(0, 1).unwrap();
        let mut expect = [[0.0; 4]; 4];
        expect[0][0] = 0.5;
        expect[3][3] = 0.5;
        assert_matrix(rho.matrix(), &expect);
        assert_eq!(rho.source_pair(), Some((0, 1)));
    }

    #[test]
    fn singlet_pair_is_pure_projector() {
        let rho = StateVector::singlet().partial_trace_pair(0, 1).unwrap();
        let mut expect = [[0.0; 4]; 4];
        expect[1][1] = 0.5;
        expect[2][2] = 0.5;
        expect[1][2] = -0.5;
        expect[2][1] = -0.5;
        assert_matrix(rho.matrix(), &expect);
    }

    #[test]
    fn w_pair_matches_brute_force() {
        // Brute force: build the 8×8 projector and sum out qubit 2 explicitly.
        let w = StateVector::w(3).unwrap();
        let amps = w.amplitudes();
        let mut brute = [[0.0; 4]; 4];
        for row in 0..8usize {
            for col in 0..8usize {
                if (row >> 2) != (col >> 2) {
                    continue;
                }
                let r = 2 * (row & 1) + ((row >> 1) & 1);
                let cc = 2 * (col & 1) + ((col >> 1) & 1);
                brute[r][cc] += (amps[row] * amps[col].conj()).re;
            }
        }
        // (1/3)|00⟩⟨00| + (2/3)|Ψ⁺⟩⟨Ψ⁺|
        let mut expect = [[0.0; 4]; 4];
        expect[0][0] = 1.0 / 3.0;
        for (r, cc) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
            expect[r][cc] = 1.0 / 3.0;
        }
        for r in 0..4 {
            for cc in 0..4 {
                assert_abs_diff_eq!(brute[r][cc], expect[r][cc], epsilon = 1e-14);
            }
        }
        assert_matrix(w.partial_trace_pair(0, 1).unwrap().matrix(), &expect);
    }

    #[test]
    fn partial_trace_errors() {
        let ghz = StateVector::ghz(3).unwrap();
        assert_eq!(
            ghz.partial_trace_pair(1, 1).unwrap_err(),
            Error::SameIndex(1)
        );
        assert!(matches!(
            ghz.partial_trace_pair(0, 3),
            Err(Error::IndexOutOfRange { index: 3, .. })
        ));
    }

    #[test]
    fn correlation_matrices_of_reference_states() {
        let singlet = StateVector::singlet().partial_trace_pair(0, 1).unwrap();
        let t = correlation_matrix(&singlet).unwrap();
        for u in 0..3 {
            for v in 0..3 {
                let expect = if u == v { -1.0 } else { 0.0 };
                assert_abs_diff_eq!(t.entries()[u][v], expect, epsilon = 1e-15);
            }
        }

        let zero = StateVector::basis(2, 0)
            .unwrap()
            .partial_trace_pair(0, 1)
            .unwrap();
        let t = correlation_matrix(&zero).unwrap();
        assert_eq!(
            *CorrelationMatrix::diagonal(0.0, 0.0, 1.0)
                .unwrap()
                .entries(),
            *t.entries()
        );

        let ghz = StateVector::ghz(3)
            .unwrap()
            .partial_trace_pair(0, 1)
            .unwrap();
        let t = correlation_matrix(&ghz).unwrap();
        for u in 0..3 {
            for v in 0..3 {
                let expect = if u == 2 && v == 2 { 1.0 } else { 0.0 };
                assert_abs_diff_eq!(t.entries()[u][v], expect, epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn density_validation_rejects_bad_input() {
        let mut m = [[ZERO; 4]; 4];
        m[0][0] = c(1.0);
        m[0][1] = Complex64::new(0.0, 0.1);
        assert!(matches!(
            TwoQubitState::new(m),
            Err(Error::InvalidDensity {
                invariant: "hermitian",
                ..
            })
        ));
        let mut m = [[ZERO; 4]; 4];
        m[0][0] = c(0.5);
        assert!(matches!(
            TwoQubitState::new(m),
            Err(Error::InvalidDensity {
                invariant: "unit-trace",
                ..
            })
        ));
        let mut m = [[ZERO; 4]; 4];
        m[0][0] = c(1.2);
        m[1][1] = c(-0.2);
        assert!(matches!(
            TwoQubitState::new(m),
            Err(Error::InvalidDensity {
                invariant: "positive-semidefinite",
                ..
            })
        ));
    }

    #[test]
    fn pauli_pair_expectation_agrees_with_reduced_state() {
        let w = StateVector::w(3).unwrap();
        let rho = w.partial_trace_pair(0, 2).unwrap();
        for axis in Axis::ALL {
            let direct = w.pauli_pair_expectation(axis, 0, 2).unwrap();
            let reduced = rho.pauli_expectation(axis, axis).re;
            assert_abs_diff_eq!(direct, reduced, epsilon = 1e-14);
        }
    }

    #[test]
    fn correlation_matrix_rejects_imaginary_residue() {
        // Hermitian but not a density operator in the strict sense cannot reach
        // correlation_matrix, so check the tolerance on a raw expectation.
        let werner = TwoQubitState::werner(0.8).unwrap();
        let z = werner.pauli_expectation(Axis::X, Axis::Y);
        assert!(z.im.abs() < CORRELATION_IMAG_TOL);
    }
}
