mod common;

use common::{random_su_algebra, rng, taylor_exp};
use holonomy_core::groups::*;
use holonomy_core::linalg::c64;
use holonomy_core::{CMatrix, C64};
use proptest::prelude::*;
use rand::Rng;

/// Determinant by cofactor expansion along the first row.
fn cofactor_det(m: &CMatrix) -> C64 {
    let n = m.dim();
    if n == 1 {
        return m[(0, 0)];
    }
    let mut total = c64(0.0, 0.0);
    for j in 0..n {
        let mut minor = CMatrix::zeros(n - 1);
        for r in 1..n {
            let mut c2 = 0;
            for c in 0..n {
                if c != j {
                    minor[(r - 1, c2)] = m[(r, c)];
                    c2 += 1;
                }
            }
        }
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        total += m[(0, j)] * cofactor_det(&minor) * sign;
    }
    total
}

fn all_groups() -> Vec<Group> {
    vec![
        Group::unitary(3),
        Group::special_unitary(2),
        Group::special_unitary(3),
        Group::torus(3),
        Group::new(GroupDescriptor::Product(vec![GroupDescriptor::Torus(1), GroupDescriptor::SpecialUnitary(2)])).unwrap(),
        Group::unitary_as_quotient(2),
    ]
}

#[test]
fn products_and_inverses() {
    for group in all_groups() {
        let id = group.identity();
        for seed in 0..20 {
            let a = group.haar_sample(seed);
            let b = group.haar_sample(seed + 100);
            assert!(a.mul(&a.inv()).unwrap().distance(&id) <= 1e-12);
            assert_eq!(id.mul(&b).unwrap().distance(&b), 0.0);
            assert!(group.contains(a.mul(&b).unwrap().matrix()));
        }
    }
}

#[test]
fn special_unitary_products_have_unit_determinant() {
    let su2 = Group::special_unitary(2);
    let su3 = Group::special_unitary(3);
    for seed in 0..200 {
        let p = su2.haar_sample(seed).mul(&su2.haar_sample(seed + 7)).unwrap();
        assert!((cofactor_det(p.matrix()) - 1.0).norm() <= 1e-12);
        let q = su3.haar_sample(seed).mul(&su3.haar_sample(seed + 7)).unwrap();
        assert!((cofactor_det(q.matrix()) - 1.0).norm() <= 1e-12);
    }
}

#[test]
fn library_determinant_matches_cofactors() {
    let mut r = rng(1);
    for n in 1..=5 {
        let data = (0..n * n).map(|_| c64(r.random::<f64>() - 0.5, r.random::<f64>() - 0.5)).collect();
        let m = CMatrix::from_row_major(n, data).unwrap();
        assert!((m.det() - cofactor_det(&m)).norm() < 1e-12);
    }
}

#[test]
fn mixing_groups_is_an_error() {
    let a = Group::special_unitary(2).haar_sample(1);
    let b = Group::unitary(2).haar_sample(1);
    assert_eq!(a.mul(&b), Err(GroupError::DescriptorMismatch));
    assert_eq!(a.conjugate(&b).unwrap_err(), GroupError::DescriptorMismatch);
}

#[test]
fn membership_is_enforced() {
    let su2 = Group::special_unitary(2);
    let diag = CMatrix::from_diagonal(&[c64(0.0, 1.0), c64(0.0, 1.0)]);
    assert!(matches!(su2.element(diag.clone()), Err(GroupError::NotMember(_))));
    assert!(Group::unitary(2).element(diag).is_ok());
    let t2 = Group::torus(2);
    let g = Group::unitary(2).haar_sample(3);
    assert!(matches!(t2.element(g.matrix().clone()), Err(GroupError::NotMember(_))));
    let almost = CMatrix::identity(2).scale_real(1.0 + 1e-6);
    assert!(matches!(Group::unitary(2).element(almost), Err(GroupError::NotMember(_))));
    assert!(matches!(su2.element(CMatrix::identity(3)), Err(GroupError::DimensionMismatch { .. })));
}

#[test]
fn conjugation_examples() {
    for group in all_groups() {
        let h = group.haar_sample(5);
        let a = group.haar_sample(6);
        assert!(h.conjugate(&group.identity()).unwrap().distance(&h) < 1e-14);
        let c = h.conjugate(&a).unwrap();
        assert!((c.matrix().trace() - h.matrix().trace()).norm() <= 1e-12 || group.kernel().is_some());
        let expected = a.inv().mul(&h).unwrap().mul(&a).unwrap();
        assert!(c.distance(&expected) < 1e-12);
    }
    let t3 = Group::torus(3);
    let (h, a) = (t3.haar_sample(1), t3.haar_sample(2));
    assert!(h.conjugate(&a).unwrap().distance(&h) < 1e-15);
}

#[test]
fn normalized_traces() {
    assert_eq!(Group::unitary(3).identity().trace_normalized(), c64(1.0, 0.0));
    let d = Group::unitary(2).element(CMatrix::from_diagonal(&[c64(0.0, 1.0), c64(0.0, -1.0)])).unwrap();
    assert_eq!(d.trace_normalized(), c64(0.0, 0.0));
}

/// Mean and 3σ half-width of real samples.
fn mean_3sigma(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0);
    (m, 3.0 * (var / n).sqrt())
}

#[test]
fn su2_character_moments() {
    let su2 = Group::special_unitary(2);
    let mut r = rng(2024);
    let samples: Vec<CMatrix> = (0..1_000_000).map(|_| su2.sample_matrix(&mut r)).collect();
    let sq: Vec<f64> = samples.iter().map(|g| (g.trace() / 2.0).norm_sqr()).collect();
    let (m, w) = mean_3sigma(&sq);
    assert!((m - 0.25).abs() <= w, "{m} ± {w}");
    let re: Vec<f64> = samples.iter().map(|g| g.trace().re).collect();
    let (m, w) = mean_3sigma(&re);
    assert!(m.abs() <= w);
}

#[test]
fn torus_phases_are_uniform() {
    let t1 = Group::torus(1);
    let mut r = rng(9);
    let phases: Vec<f64> = (0..100_000).map(|_| t1.sample_matrix(&mut r)[(0, 0)].arg()).collect();
    let (m, w) = mean_3sigma(&phases);
    assert!(m.abs() <= w);
    let cos: Vec<f64> = phases.iter().map(|p| p.cos()).collect();
    let (m, w) = mean_3sigma(&cos);
    assert!(m.abs() <= w);
}

#[test]
fn haar_measure_is_translation_invariant() {
    let su2 = Group::special_unitary(2);
    let a = su2.haar_sample(77);
    let mut r = rng(5);
    let plain: Vec<CMatrix> = (0..100_000).map(|_| su2.sample_matrix(&mut r)).collect();
    let moved: Vec<CMatrix> = plain.iter().map(|g| a.matrix() * g).collect();
    for f in [|g: &CMatrix| g.trace().re, |g: &CMatrix| g.trace().norm_sqr(), |g: &CMatrix| g[(0, 1)].im] {
        let (m1, w1) = mean_3sigma(&plain.iter().map(f).collect::<Vec<_>>());
        let (m2, w2) = mean_3sigma(&moved.iter().map(f).collect::<Vec<_>>());
        assert!((m1 - m2).abs() <= w1 + w2, "{m1} vs {m2}");
    }
}

#[test]
fn sampling_is_deterministic_in_the_seed() {
    for group in all_groups() {
        assert_eq!(group.haar_sample(42), group.haar_sample(42));
        assert_ne!(group.haar_sample(42), group.haar_sample(43));
    }
}

#[test]
fn exponential_matches_taylor_oracle() {
    let mut r = rng(3);
    for n in [2, 3, 4] {
        let su = Group::special_unitary(n);
        let u = Group::unitary(n);
        for _ in 0..50 {
            let x = random_su_algebra(n, r.random::<f64>(), &mut r);
            let e = su.algebra_element(x.clone()).unwrap().exp_map();
            assert!(e.matrix().distance(&taylor_exp(&x)) <= 1e-10);
            let y = &x + &CMatrix::identity(n).scale(c64(0.0, r.random::<f64>() - 0.5));
            let e = u.algebra_element(y.clone()).unwrap().exp_map();
            assert!(e.matrix().distance(&taylor_exp(&y)) <= 1e-10);
        }
    }
    let t2 = Group::torus(2);
    let x = CMatrix::from_diagonal(&[c64(0.0, 0.4), c64(0.0, -2.5)]);
    let e = t2.algebra_element(x).unwrap().exp_map();
    assert!(e.matrix().distance(&CMatrix::from_diagonal(&[common::cis(0.4), common::cis(-2.5)])) < 1e-15);
    assert_eq!(LieAlgebraElement::zero(&t2).exp_map(), t2.identity());
}

#[test]
fn algebra_membership_is_enforced() {
    let su2 = Group::special_unitary(2);
    assert!(su2.algebra_element(CMatrix::identity(2)).is_err());
    assert!(su2.algebra_element(CMatrix::identity(2).scale(c64(0.0, 1.0))).is_err());
    assert!(Group::unitary(2).algebra_element(CMatrix::identity(2).scale(c64(0.0, 1.0))).is_ok());
    let off = CMatrix::from_row_major(2, vec![c64(0.0, 0.0), c64(1.0, 0.0), c64(-1.0, 0.0), c64(0.0, 0.0)]).unwrap();
    assert!(Group::torus(2).algebra_element(off).is_err());
}

#[test]
fn log_inverts_exp_away_from_the_branch_cut() {
    for group in [Group::special_unitary(2), Group::special_unitary(3), Group::unitary(3), Group::torus(2)] {
        for seed in 0..100 {
            let g = group.haar_sample(seed);
            let x = g.log_map().unwrap();
            assert!(x.exp_map().distance(&g) <= 1e-10);
        }
    }
    let minus = Group::special_unitary(2).element(CMatrix::identity(2).scale_real(-1.0)).unwrap();
    assert!(matches!(minus.log_map(), Err(GroupError::BranchCut { .. })));
    let x = minus.log_map_shifted(0.5).unwrap();
    assert!(x.exp_map().distance(&minus) < 1e-10);
    assert!(x.matrix().trace().norm() < 1e-12);
}

#[test]
fn unitarity_survives_long_compositions() {
    for group in all_groups() {
        let mut acc = group.identity();
        let mut r = rng(8);
        for k in 0..1000 {
            let g = group.sample(&mut r);
            acc = if k % 3 == 0 { acc.mul(&g.inv()).unwrap() } else { acc.mul(&g).unwrap() };
            assert!(acc.matrix().unitarity_defect() <= 1e-8);
        }
        assert!(group.contains(acc.matrix()));
        let once = acc.reunitarized();
        assert!(once.reunitarized().distance(&once) < 1e-14);
    }
}

#[test]
fn unitary_conjugation_is_special_unitary_conjugation() {
    // s = δ⁻¹ U with δⁿ = det U lies in SU(n) and conjugates like U.
    let mut r = rng(6);
    for n in [2, 3, 4] {
        let su = Group::special_unitary(n);
        let u = Group::unitary(n);
        for _ in 0..50 {
            let h = su.sample(&mut r);
            let big = u.sample(&mut r);
            let delta = C64::from_polar(1.0, big.matrix().det().arg() / n as f64);
            let s = su.element(big.matrix().scale(delta.inv())).unwrap();
            let by_u = &(&big.matrix().adjoint() * h.matrix()) * big.matrix();
            let by_s = h.conjugate(&s).unwrap();
            assert!(by_s.matrix().distance(&by_u) <= 1e-10);
        }
    }
}

#[test]
fn quotient_representatives_ignore_kernel_translates() {
    let u2 = Group::unitary_as_quotient(2);
    let base = u2.base();
    let kernel = u2.kernel().unwrap().to_vec();
    assert_eq!(kernel.len(), 2);
    for seed in 0..100 {
        let g = base.haar_sample(seed);
        let p = quotient_project(&u2, &g).unwrap();
        for k in &kernel {
            let moved = base.element(g.matrix() * k).unwrap();
            assert_eq!(quotient_project(&u2, &moved).unwrap().matrix(), p.matrix());
        }
    }
    let id = quotient_project(&u2, &base.identity()).unwrap();
    assert!(id.distance(&u2.identity()) < 1e-15);
    assert!(quotient_project(&u2, &Group::special_unitary(2).identity()).is_err());
}

#[test]
fn invalid_quotients_are_rejected() {
    let base = GroupDescriptor::Product(vec![GroupDescriptor::Torus(1), GroupDescriptor::SpecialUnitary(2)]);
    let not_central = Group::special_unitary(3).haar_sample(1).into_matrix();
    let bad = GroupDescriptor::Quotient { base: Box::new(base.clone()), kernel: vec![not_central] };
    assert!(Group::new(bad).is_err());
    let i = CMatrix::from_diagonal(&[c64(0.0, 1.0), c64(0.0, -1.0), c64(0.0, -1.0)]);
    // {1, i·(1, −1)} is not closed under multiplication.
    let bad = GroupDescriptor::Quotient { base: Box::new(base), kernel: vec![CMatrix::identity(3), i] };
    assert!(Group::new(bad).is_err());
}

proptest! {
    #[test]
    fn exp_log_roundtrip(seed in 0u64..1_000_000, n in 2usize..5) {
        let g = Group::unitary(n).haar_sample(seed);
        if let Ok(x) = g.log_map() {
            prop_assert!(x.exp_map().distance(&g) <= 1e-10);
        }
    }

    #[test]
    fn conjugation_preserves_traces(seed in 0u64..1_000_000) {
        let su3 = Group::special_unitary(3);
        let h = su3.haar_sample(seed);
        let a = su3.haar_sample(seed.wrapping_mul(31).wrapping_add(1));
        let c = h.conjugate(&a).unwrap();
        prop_assert!((c.matrix().trace() - h.matrix().trace()).norm() <= 1e-12);
    }
}
