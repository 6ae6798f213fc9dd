//! Randomized invariants.

mod common;

use nalgebra::DVector;
use proptest::prelude::*;

use polarlift_core::algebra::{build_classical, Family};
use polarlift_core::bundle::{build_bar_model, metric_gs};
use polarlift_core::holonomy::lambda_operator;
use polarlift_core::linalg::{self, Form};
use polarlift_core::polar::{check_section_hypothesis, real_section};
use polarlift_core::subspace::{orthogonal_complement, span_closure, Subspace};

fn config() -> ProptestConfig {
    ProptestConfig { cases: 24, ..ProptestConfig::default() }
}

fn vectors(dim: usize, count: std::ops::Range<usize>) -> impl Strategy<Value = Vec<DVector<f64>>> {
    prop::collection::vec(prop::collection::vec(-1.0f64..1.0, dim).prop_map(DVector::from_vec), count)
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn closure_is_idempotent(seed in vectors(8, 1..3)) {
        let g = build_classical(Family::Su, 3).unwrap();
        let mul = |x: &DVector<f64>, y: &DVector<f64>| g.bracket_coords(x, y);
        let once = span_closure(&seed, g.form(), mul);
        let twice = span_closure(&once.vectors(), g.form(), mul);
        prop_assert_eq!(once.dim(), twice.dim());
        prop_assert!(once.equality_residual(&twice) < 1e-10);
    }

    #[test]
    fn complement_of_complement_has_original_dimension(seed in vectors(10, 0..6)) {
        let g = build_classical(Family::So, 5).unwrap();
        let full = g.full();
        let u = Subspace::from_spanning(&seed, g.form().clone());
        let c = orthogonal_complement(&u, &full).unwrap();
        prop_assert_eq!(u.dim() + c.dim(), full.dim());
        let cc = orthogonal_complement(&c, &full).unwrap();
        prop_assert_eq!(cc.dim(), u.dim());
        prop_assert!(cc.equality_residual(&u) < 1e-10);
    }

    #[test]
    fn matrix_and_constant_brackets_agree(x in vectors(10, 2..3)) {
        let g = build_classical(Family::Sp, 2).unwrap();
        let a = g.element(x[0].clone()).unwrap();
        let b = g.element(x[1].clone()).unwrap();
        let direct = polarlift_core::algebra::bracket(&a, &b).unwrap();
        prop_assert!((direct.coords() - g.bracket_coords(&x[0], &x[1])).amax() < 1e-12);
    }

    #[test]
    fn lambda_is_linear(s in 0.3f64..2.5, a in -2.0f64..2.0, b in -2.0f64..2.0, xy in vectors(9, 2..3)) {
        let bar = build_bar_model(&common::cp2(), s).unwrap();
        let (x, y) = (&xy[0], &xy[1]);
        let lhs = lambda_operator(&bar, &(x * a + y * b)).unwrap();
        let rhs = lambda_operator(&bar, x).unwrap().matrix() * a + lambda_operator(&bar, y).unwrap().matrix() * b;
        prop_assert!((lhs.matrix() - rhs).amax() < 1e-10);
    }

    #[test]
    fn hypothesis_is_scale_invariant(scales in prop::collection::vec(0.01f64..100.0, 2)) {
        let sp = common::cp2();
        let m = real_section(sp.pair()).unwrap();
        let scaled: Vec<_> = m.vectors().iter().zip(&scales).map(|(v, c)| v * *c).collect();
        let rescaled = Subspace::from_spanning(&scaled, sp.g().form().clone());
        let base = check_section_hypothesis(&sp, &m).unwrap();
        let other = check_section_hypothesis(&sp, &rescaled).unwrap();
        prop_assert_eq!(base.holds, other.holds);
    }

    #[test]
    fn metric_is_monotone_in_s(s in 0.1f64..3.0, ds in 0.01f64..2.0) {
        let sp = common::sp2();
        let lo = metric_gs(&sp, s).unwrap();
        let hi = metric_gs(&sp, s + ds).unwrap();
        let diff = hi.gram_q() - lo.gram_q();
        let (vals, _) = linalg::symmetric_eigen(&((&diff + diff.transpose()) * 0.5));
        prop_assert!(vals.min() > -1e-12);
        let d1 = sp.pair().p1().dim();
        prop_assert!(diff.view((0, 0), (d1, d1)).amax() < 1e-12);
        prop_assert!(lo.is_positive_definite());
    }
}

#[test]
fn closure_of_cp2_p1_is_everything() {
    let sp = common::cp2();
    let g = sp.g();
    let c = span_closure(&sp.pair().p1().vectors(), g.form(), |x, y| g.bracket_coords(x, y));
    assert_eq!(c.dim(), 8);
    let e = Form::Euclidean(3);
    assert_eq!(span_closure(&[DVector::from_vec(vec![1.0, 2.0, 0.0])], &e, |_, _| DVector::zeros(3)).dim(), 1);
}
