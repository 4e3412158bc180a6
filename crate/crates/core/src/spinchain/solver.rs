//! Ground-state solvers for symmetric operators given as [`RowOperator`]s.
//!
//! The shifted power method is the reference solver. Restarted Lanczos
//! reaches the same eigenpair in far fewer products and is what
//! [`SolverKind::Auto`] falls back to once power iteration stalls. The
//! Lanczos basis is never stored: each restart cycle runs the three-term
//! recurrence twice, once for the tridiagonal coefficients and once to
//! assemble the Ritz vector, so memory stays at a handful of vectors.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use libm::sqrt;
use rand_chacha::ChaCha8Rng;
use rand_core::SeedableRng;
use rand_distr::{Distribution, StandardNormal};

use super::hamiltonian::{ChainSpec, DimerizedHamiltonian};
use super::sector::SectorBasis;
use crate::exec::{Executor, RowOperator};
use crate::linalg::tridiagonal_eigen;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverKind {
    /// Shifted power iteration only.
    Power,
    /// Restarted Lanczos only.
    Lanczos,
    /// Power iteration, handing over to Lanczos after
    /// [`SolverOptions::power_switch`] products.
    Auto,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub kind: SolverKind,
    /// Stop when the energy changes by less than `tol·|E|` ...
    pub tol: f64,
    /// ... and `‖Hv − Ev‖` is below this.
    pub residual_tol: f64,
    /// Budget of operator applications.
    pub max_iter: usize,
    pub power_switch: usize,
    /// Krylov dimension per Lanczos restart cycle.
    pub lanczos_steps: usize,
    /// Lanczos steps for the gap estimate; 0 skips it.
    pub gap_steps: usize,
    /// Flag the state as possibly degenerate when `gap < ratio·|E|`.
    pub degeneracy_ratio: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            kind: SolverKind::Auto,
            tol: 1e-12,
            residual_tol: 1e-8,
            max_iter: 200_000,
            power_switch: 1_000,
            lanczos_steps: 40,
            gap_steps: 60,
            degeneracy_ratio: 1e-6,
        }
    }
}

impl SolverOptions {
    pub fn validate(&self) -> Result<()> {
        let bad = |name, detail: &str| {
            Err(Error::InvalidParameter {
                name,
                detail: alloc::string::String::from(detail),
            })
        };
        if !(self.tol > 0.0) {
            return bad("tol", "must be positive");
        }
        if !(self.residual_tol > 0.0) {
            return bad("residual_tol", "must be positive");
        }
        if self.max_iter == 0 {
            return bad("max_iter", "must be at least 1");
        }
        if self.lanczos_steps < 2 {
            return bad("lanczos_steps", "must be at least 2");
        }
        Ok(())
    }
}

/// Approximate lowest eigenpair of a symmetric operator.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigenpair {
    pub vector: Vec<f64>,
    pub energy: f64,
    pub residual: f64,
    /// Operator applications spent.
    pub iterations: usize,
    pub converged: bool,
}

fn normalize<E: Executor>(exec: &E, v: &mut [f64]) -> f64 {
    let n = sqrt(exec.dot(v, v));
    if n > 0.0 {
        v.iter_mut().for_each(|x| *x /= n);
    }
    n
}

/// Returns `(E, ‖w − E x‖)` for `w = A x` with unit `x`, reusing `scratch`.
fn rayleigh_residual<E: Executor>(
    exec: &E,
    x: &[f64],
    w: &[f64],
    scratch: &mut [f64],
) -> (f64, f64) {
    let e = exec.dot(x, w);
    for ((s, &wi), &xi) in scratch.iter_mut().zip(w).zip(x) {
        *s = wi - e * xi;
    }
    (e, sqrt(exec.dot(scratch, scratch)))
}

/// Shifted power method on `shift·I − A`, converging to the lowest
/// eigenvector of `A` provided `shift ≥ ‖A‖`.
pub fn power_iteration<O: RowOperator, E: Executor>(
    op: &O,
    exec: &E,
    shift: f64,
    start: Vec<f64>,
    opts: &SolverOptions,
    budget: usize,
) -> Eigenpair {
    let dim = op.dim();
    let mut x = start;
    normalize(exec, &mut x);
    let mut w = vec![0.0; dim];
    let mut scratch = vec![0.0; dim];
    let mut previous = f64::INFINITY;
    let (mut energy, mut residual) = (f64::NAN, f64::INFINITY);
    let mut iterations = 0;
    let mut converged = false;
    while iterations < budget {
        exec.apply(op, &x, &mut w);
        iterations += 1;
        (energy, residual) = rayleigh_residual(exec, &x, &w, &mut scratch);
        if (energy - previous).abs() < opts.tol * energy.abs() && residual < opts.residual_tol {
            converged = true;
            break;
        }
        previous = energy;
        for (xi, &wi) in x.iter_mut().zip(&w) {
            *xi = shift * *xi - wi;
        }
        normalize(exec, &mut x);
    }
    Eigenpair {
        vector: x,
        energy,
        residual,
        iterations,
        converged,
    }
}

/// Runs up to `m` Lanczos steps from the unit vector `start`. When `project`
/// is given every Krylov vector is kept orthogonal to it. When `ritz` is
/// given, `out` accumulates `Σₖ ritz[k]·qₖ`.
///
/// Returns the tridiagonal coefficients `(α, β)` and the number of operator
/// applications.
fn lanczos_pass<O: RowOperator, E: Executor>(
    op: &O,
    exec: &E,
    start: &[f64],
    m: usize,
    project: Option<&[f64]>,
    ritz: Option<(&[f64], &mut [f64])>,
) -> (Vec<f64>, Vec<f64>, usize) {
    let dim = op.dim();
    let mut q = start.to_vec();
    let mut q_prev = vec![0.0; dim];
    let mut w = vec![0.0; dim];
    let mut alphas = Vec::with_capacity(m);
    let mut betas = Vec::with_capacity(m);
    let mut beta_prev = 0.0;
    let (coeffs, mut out) = match ritz {
        Some((c, o)) => (Some(c), Some(o)),
        None => (None, None),
    };
    let mut applications = 0;
    for k in 0..m {
        if let (Some(c), Some(o)) = (coeffs, out.as_deref_mut()) {
            if k < c.len() {
                for (oi, &qi) in o.iter_mut().zip(&q) {
                    *oi += c[k] * qi;
                }
            }
        }
        exec.apply(op, &q, &mut w);
        applications += 1;
        let alpha = exec.dot(&q, &w);
        for ((wi, &qi), &pi) in w.iter_mut().zip(&q).zip(&q_prev) {
            *wi -= alpha * qi + beta_prev * pi;
        }
        // Local re-orthogonalization against q only.
        let c = exec.dot(&q, &w);
        for (wi, &qi) in w.iter_mut().zip(&q) {
            *wi -= c * qi;
        }
        if let Some(p) = project {
            let c = exec.dot(p, &w);
            for (wi, &pi) in w.iter_mut().zip(p) {
                *wi -= c * pi;
            }
        }
        alphas.push(alpha + c);
        if k + 1 == m {
            break;
        }
        let beta = sqrt(exec.dot(&w, &w));
        if beta <= 1e-12 * (alpha.abs() + 1.0) {
            break;
        }
        betas.push(beta);
        core::mem::swap(&mut q_prev, &mut q);
        for (qi, &wi) in q.iter_mut().zip(&w) {
            *qi = wi / beta;
        }
        beta_prev = beta;
    }
    (alphas, betas, applications)
}

/// Restarted Lanczos for the lowest eigenpair.
pub fn lanczos_lowest<O: RowOperator, E: Executor>(
    op: &O,
    exec: &E,
    start: Vec<f64>,
    opts: &SolverOptions,
    budget: usize,
) -> Eigenpair {
    let dim = op.dim();
    let m = opts.lanczos_steps.min(dim).max(1);
    let mut x = start;
    normalize(exec, &mut x);
    let mut w = vec![0.0; dim];
    let mut scratch = vec![0.0; dim];
    let mut previous = f64::INFINITY;
    let mut iterations = 0;
    exec.apply(op, &x, &mut w);
    iterations += 1;
    let (mut energy, mut residual) = rayleigh_residual(exec, &x, &w, &mut scratch);
    let mut converged = false;
    while iterations < budget {
        let (alphas, betas, used) = lanczos_pass(op, exec, &x, m, None, None);
        iterations += used;
        let (_, vectors) = tridiagonal_eigen(&alphas, &betas);
        let mut next = vec![0.0; dim];
        let (_, _, used) = lanczos_pass(
            op,
            exec,
            &x,
            alphas.len(),
            None,
            Some((&vectors[0], &mut next)),
        );
        iterations += used;
        normalize(exec, &mut next);
        x = next;
        exec.apply(op, &x, &mut w);
        iterations += 1;
        (energy, residual) = rayleigh_residual(exec, &x, &w, &mut scratch);
        if (energy - previous).abs() < opts.tol * energy.abs() && residual < opts.residual_tol {
            converged = true;
            break;
        }
        // Exact invariant subspace: nothing more to gain.
        if residual < opts.residual_tol && alphas.len() < m {
            converged = true;
            break;
        }
        previous = energy;
    }
    Eigenpair {
        vector: x,
        energy,
        residual,
        iterations,
        converged,
    }
}

/// Lowest Ritz value of `op` on the orthogonal complement of `ground`, from a
/// fixed pseudo-random start. An upper estimate of the first excited level.
fn second_level<O: RowOperator, E: Executor>(
    op: &O,
    exec: &E,
    ground: &[f64],
    steps: usize,
) -> Option<f64> {
    let dim = op.dim();
    if dim < 2 || steps == 0 {
        return None;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x9e37_79b9_7f4a_7c15);
    let mut start: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(&mut rng)).collect();
    let c = exec.dot(ground, &start);
    for (s, &g) in start.iter_mut().zip(ground) {
        *s -= c * g;
    }
    if normalize(exec, &mut start) == 0.0 {
        return None;
    }
    let (alphas, betas, _) = lanczos_pass(op, exec, &start, steps.min(dim - 1), Some(ground), None);
    let (values, _) = tridiagonal_eigen(&alphas, &betas);
    values.first().copied()
}

/// Néel pattern plus a `1e-3` uniform admixture, normalized.
pub fn neel_start(basis: &SectorBasis) -> Vec<f64> {
    let mut v = vec![1e-3; basis.dim()];
    v[basis.rank(basis.neel_pattern())] += 1.0;
    let n = sqrt(v.iter().map(|x| x * x).sum::<f64>());
    v.iter_mut().for_each(|x| *x /= n);
    v
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct GroundFlags {
    pub max_iter_exceeded: bool,
    pub possibly_degenerate: bool,
}

impl GroundFlags {
    pub fn any(&self) -> bool {
        self.max_iter_exceeded || self.possibly_degenerate
    }
}

/// Ground state of a dimerized ring in the zero-magnetization sector.
#[derive(Debug, Clone)]
pub struct GroundState {
    pub spec: ChainSpec,
    pub basis: Arc<SectorBasis>,
    /// Real amplitudes over `basis`, unit norm.
    pub vector: Vec<f64>,
    pub energy: f64,
    pub residual: f64,
    pub iterations: usize,
    pub gap_estimate: Option<f64>,
    pub flags: GroundFlags,
}

/// Solves for the ground state, starting from `warm_start` when given and
/// from [`neel_start`] otherwise. Exhausting the iteration budget is reported
/// through [`GroundFlags`], not as an error.
pub fn ground_state<E: Executor>(
    spec: ChainSpec,
    basis: Arc<SectorBasis>,
    opts: &SolverOptions,
    exec: &E,
    warm_start: Option<&[f64]>,
) -> Result<GroundState> {
    opts.validate()?;
    let h = DimerizedHamiltonian::new(spec, &basis)?;
    let start = match warm_start {
        Some(v) if v.len() == basis.dim() => v.to_vec(),
        Some(v) => {
            return Err(Error::DimensionMismatch {
                expected: basis.dim(),
                got: v.len(),
            })
        }
        None => neel_start(&basis),
    };
    let shift = spec.spectral_shift();
    let pair = match opts.kind {
        SolverKind::Power => power_iteration(&h, exec, shift, start, opts, opts.max_iter),
        SolverKind::Lanczos => lanczos_lowest(&h, exec, start, opts, opts.max_iter),
        SolverKind::Auto => {
            let first = power_iteration(
                &h,
                exec,
                shift,
                start,
                opts,
                opts.power_switch.min(opts.max_iter),
            );
            if first.converged || first.iterations >= opts.max_iter {
                first
            } else {
                let mut second = lanczos_lowest(
                    &h,
                    exec,
                    first.vector,
                    opts,
                    opts.max_iter - first.iterations,
                );
                second.iterations += first.iterations;
                second
            }
        }
    };
    let gap_estimate =
        second_level(&h, exec, &pair.vector, opts.gap_steps).map(|e1| e1 - pair.energy);
    let flags = GroundFlags {
        max_iter_exceeded: !pair.converged,
        possibly_degenerate: gap_estimate
            .is_some_and(|g| g < opts.degeneracy_ratio * pair.energy.abs()),
    };
    Ok(GroundState {
        spec,
        basis,
        vector: pair.vector,
        energy: pair.energy,
        residual: pair.residual,
        iterations: pair.iterations,
        gap_estimate,
        flags,
    })
}
