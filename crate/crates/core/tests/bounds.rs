use canonical_growth::bounds::{
    bound_part1, bound_row, prepare_for_sweep, verify_theorem_12, verify_theorem_3,
};
use canonical_growth::measures::{split_measure, synthesize_power_zeros};
use canonical_growth::{
    AngleRule, Atom, CanonicalIntegral, ComplexPoint, DiscreteMeasure, GeometricGrid, KernelContext,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::{PI, TAU};
use std::sync::OnceLock;

fn random_measure(rng: &mut ChaCha8Rng, max_atoms: usize) -> DiscreteMeasure {
    let n = rng.gen_range(1..=max_atoms);
    let atoms = (0..n)
        .map(|_| {
            let r = rng.gen_range(0.5f64.ln()..50f64.ln()).exp();
            let th = rng.gen_range(0.0..TAU);
            Atom::new(ComplexPoint::from_polar(r, th), rng.gen_range(0.5..2.0))
        })
        .collect();
    DiscreteMeasure::new(atoms).unwrap()
}

fn arb_measure() -> impl Strategy<Value = DiscreteMeasure> {
    prop::collection::vec((0.5..20.0f64, 0.0..TAU, 0.5..2.0f64), 1..8).prop_map(|v| {
        DiscreteMeasure::new(
            v.into_iter()
                .map(|(r, th, m)| Atom::new(ComplexPoint::from_polar(r, th), m))
                .collect(),
        )
        .unwrap()
    })
}

fn tabled(q: u32) -> KernelContext {
    static CTX: OnceLock<Vec<KernelContext>> = OnceLock::new();
    CTX.get_or_init(|| {
        (0..3)
            .map(|q| KernelContext::new(q).with_default_table().unwrap())
            .collect()
    })[q as usize]
        .clone()
}

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|k| lo * (hi / lo).powf(k as f64 / (n - 1) as f64))
        .collect()
}

#[test]
fn random_sweeps_satisfy_bounds() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let grid = log_grid(0.1, 1000.0, 16);
    for q in 0..3 {
        for _ in 0..4 {
            let u = CanonicalIntegral::new(random_measure(&mut rng, 50), tabled(q));
            let report = verify_theorem_12(&u, &grid).unwrap();
            let bad: Vec<_> = report.failed_rows().collect();
            assert!(bad.is_empty(), "q={q}: {bad:?}");
        }
    }
}

#[test]
fn single_atom_attains_the_bound() {
    let u = CanonicalIntegral::with_genus(DiscreteMeasure::unit_atoms([ComplexPoint::ONE]).unwrap(), 0);
    let report = verify_theorem_12(&u, &log_grid(0.01, 1e4, 25)).unwrap();
    for row in &report.rows {
        assert!((row.lhs - (1.0 + row.r).ln()).abs() < 1e-12);
        for rhs in row.rhs() {
            assert!((rhs - row.lhs).abs() < 1e-8, "{row:?}");
        }
    }
}

#[test]
fn type_bound_for_power_zeros() {
    let m = synthesize_power_zeros(1.0, 0.5, 10_000, AngleRule::Fixed(0.0)).unwrap();
    let grid = GeometricGrid::spanning(1.0, 1e6, 41).unwrap();
    let report = verify_theorem_3(&m, 0.5, &grid).unwrap();
    assert!((report.s_rho - PI).abs() < 1e-6);
    assert!((report.type_mu - 1.0).abs() < 0.02, "{report:?}");
    assert!((report.type_n - 2.0).abs() < 0.1, "{report:?}");
    assert!(report.type_u <= PI * 1.05, "{report:?}");
    assert!(report.passes(), "{report:?}");
}

#[test]
fn type_bound_for_single_atom() {
    let m = DiscreteMeasure::unit_atoms([ComplexPoint::ONE]).unwrap();
    let grid = GeometricGrid::spanning(1.0, 1e12, 40).unwrap();
    let report = verify_theorem_3(&m, 0.5, &grid).unwrap();
    assert_eq!(report.type_mu, 0.0);
    assert_eq!(report.type_u, 0.0);
    assert!(report.passes());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn splitting_is_additive(m in arb_measure(), q in 0u32..3, split in 0.5..20.0f64, lr in -1.0..2.0f64) {
        let r = 10f64.powf(lr);
        let (inner, outer) = split_measure(&m, split);
        let part = |d: DiscreteMeasure| bound_part1(&CanonicalIntegral::with_genus(d, q), r).unwrap().0;
        let whole = part(m.clone());
        let sum = part(inner) + part(outer);
        prop_assert!((whole - sum).abs() <= 1e-13 * (1.0 + whole.abs()), "{} vs {}", whole, sum);
    }

    #[test]
    fn columns_are_nondecreasing(m in arb_measure(), q in 0u32..3) {
        let grid = log_grid(0.05, 500.0, 12);
        let u = prepare_for_sweep(&CanonicalIntegral::new(m, tabled(q)), &grid).unwrap();
        let rows: Vec<_> = grid.iter().map(|&r| bound_row(&u, r)).collect();
        for w in rows.windows(2) {
            for (a, b) in w[0].rhs().iter().zip(w[1].rhs()) {
                prop_assert!(b >= a - 1e-9 * (1.0 + a.abs()));
            }
        }
    }

    #[test]
    fn scale_covariance(m in arb_measure(), q in 0u32..3, c in 0.2..5.0f64, lr in -1.0..2.0f64) {
        let r = 10f64.powf(lr);
        let u = CanonicalIntegral::new(m.clone(), tabled(q));
        let us = CanonicalIntegral::new(m.scaled(c).unwrap(), tabled(q));
        let a = verify_theorem_12(&u, &[r]).unwrap();
        let b = verify_theorem_12(&us, &[c * r]).unwrap();
        let (ra, rb) = (&a.rows[0], &b.rows[0]);
        prop_assert!((ra.lhs - rb.lhs).abs() <= 1e-9 * (1.0 + ra.lhs.abs()));
        for (x, y) in ra.rhs().iter().zip(rb.rhs()) {
            prop_assert!((x - y).abs() <= 1e-5 * (1.0 + x.abs()), "{} vs {}", x, y);
        }
    }
}
