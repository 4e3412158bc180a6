use std::sync::Arc;

use approx::assert_abs_diff_eq;
use bellmono_core::exec::Serial;
use bellmono_core::qstate::Axis;
use bellmono_core::spinchain::{
    default_grid, ground_state, neel_start, sweep, ChainSpec, DimerizedHamiltonian, SectorBasis,
    SolverKind, SolverOptions, SweepOptions,
};
use bellmono_core::TSIRELSON;

fn rayleigh(spec: ChainSpec, basis: &SectorBasis, v: &[f64]) -> f64 {
    let hv = DimerizedHamiltonian::new(spec, basis)
        .unwrap()
        .apply(v)
        .unwrap();
    v.iter().zip(&hv).map(|(a, b)| a * b).sum::<f64>() / v.iter().map(|a| a * a).sum::<f64>()
}

#[test]
fn ground_state_invariants() {
    for (n, j2) in [(8, -0.7), (10, 0.5), (12, 1.0), (12, 2.4)] {
        let spec = ChainSpec::new(n, 1.0, j2).unwrap();
        let basis = Arc::new(SectorBasis::new(n).unwrap());
        let gs = ground_state(
            spec,
            basis.clone(),
            &SolverOptions::default(),
            &Serial,
            None,
        )
        .unwrap();
        let norm: f64 = gs.vector.iter().map(|a| a * a).sum::<f64>().sqrt();
        assert_abs_diff_eq!(norm, 1.0, epsilon = 1e-10);
        assert!(gs.residual <= 1e-8);
        assert!(gs.energy <= rayleigh(spec, &basis, &neel_start(&basis)));
        for (i, j) in [(0, 1), (1, 2), (0, n / 2)] {
            let z = gs.correlator(Axis::Z, i, j).unwrap();
            assert_abs_diff_eq!(gs.correlator(Axis::X, i, j).unwrap(), z, epsilon = 1e-7);
            assert_abs_diff_eq!(gs.correlator(Axis::Y, i, j).unwrap(), z, epsilon = 1e-7);
        }
    }
}

#[test]
fn power_method_is_selectable() {
    let spec = ChainSpec::new(8, 1.0, 0.6).unwrap();
    let basis = Arc::new(SectorBasis::new(8).unwrap());
    let power = SolverOptions {
        kind: SolverKind::Power,
        ..SolverOptions::default()
    };
    let a = ground_state(spec, basis.clone(), &power, &Serial, None).unwrap();
    let b = ground_state(spec, basis, &SolverOptions::default(), &Serial, None).unwrap();
    assert!(!a.flags.max_iter_exceeded);
    assert_abs_diff_eq!(a.energy, b.energy, epsilon = 1e-9);
}

#[test]
fn uniform_point_of_twelve_site_sweep() {
    let r = sweep(12, &[0.9, 1.0, 1.1], &SweepOptions::default(), &Serial).unwrap();
    let p = r.point_at(1.0).unwrap();
    assert_abs_diff_eq!(p.b12, p.b23, epsilon = 1e-6);
    assert!(p.b12 <= 2.0);
}

#[test]
fn dimerized_limits_approach_saturation() {
    let r = sweep(8, &default_grid(), &SweepOptions::default(), &Serial).unwrap();
    assert!(r.monogamy_holds());
    let grid = r.grid();
    // Approaching 0 from above: B12 rises toward 2√2, B23 falls toward 0.
    let right: Vec<_> = r
        .points
        .iter()
        .filter(|p| p.ratio >= 0.0 && p.ratio <= 0.5)
        .collect();
    for w in right.windows(2) {
        assert!(w[0].b12 >= w[1].b12 - 1e-9 && w[0].b23 <= w[1].b23 + 1e-9);
    }
    // Beyond 1: the roles swap as the ratio grows.
    let beyond: Vec<_> = r.points.iter().filter(|p| p.ratio >= 1.0).collect();
    for w in beyond.windows(2) {
        assert!(w[1].b23 >= w[0].b23 - 1e-9 && w[1].b12 <= w[0].b12 + 1e-9);
    }
    let last = r.points.last().unwrap();
    assert!(last.b23 > 0.95 * TSIRELSON);
    assert_eq!(grid.len(), 161);
}

#[test]
fn finite_size_convergence() {
    let grid = default_grid();
    let a = sweep(12, &grid, &SweepOptions::default(), &Serial).unwrap();
    let b = sweep(16, &grid, &SweepOptions::default(), &Serial).unwrap();
    let (worst, at) = a
        .points
        .iter()
        .zip(&b.points)
        .map(|(p, q)| ((p.b12 - q.b12).abs(), p.ratio))
        .fold((0.0, f64::NAN), |acc, x| if x.0 > acc.0 { x } else { acc });
    assert!(
        worst <= 0.05,
        "|B12(12) - B12(16)| = {worst} at J2/J1 = {at}"
    );
}
