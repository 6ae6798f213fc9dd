//! Checks against independently computed reference values.

mod common;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use polarlift_core::algebra::{bracket, build_classical, Family, LieAlgebra};
use polarlift_core::bundle::{bracket_formula_check, build_bar_model, metric_gs};
use polarlift_core::holonomy::{
    center_check, fixed_set_adk, holonomy_algebra, irreducibility_check, lambda_operator, natural_reductivity_check,
    transvection_algebra,
};
use polarlift_core::isotropy::{IsotropyKind, KChoice};
use polarlift_core::linalg;
use polarlift_core::polar::{
    check_section_hypothesis, maximal_abelian_in_p1, orbit_tangent, real_section, section_algebra, section_tangent,
    vertical_space, ActionSpec, SamplePoint,
};

fn gaussian(rng: &mut ChaCha8Rng, n: usize) -> DVector<f64> {
    DVector::from_fn(n, |_, _| rng.sample(StandardNormal))
}

fn contracted_bracket(g: &LieAlgebra, x: &DVector<f64>, y: &DVector<f64>) -> DVector<f64> {
    let d = g.dim();
    DVector::from_fn(d, |k, _| {
        let mut acc = 0.0;
        for i in 0..d {
            for j in 0..d {
                acc += x[i] * y[j] * g.structure_constant(i, j, k);
            }
        }
        acc
    })
}

#[test]
fn matrix_commutator_matches_structure_constants() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for (family, n) in [(Family::So, 4), (Family::Su, 3), (Family::Sp, 2)] {
        let g = build_classical(family, n).unwrap();
        for _ in 0..100 {
            let x = g.element(gaussian(&mut rng, g.dim())).unwrap();
            let y = g.element(gaussian(&mut rng, g.dim())).unwrap();
            let via_matrices = bracket(&x, &y).unwrap();
            let via_constants = contracted_bracket(&g, x.coords(), y.coords());
            assert!((via_matrices.coords() - via_constants).amax() < 1e-12, "{}", g.label());
        }
    }
}

#[test]
fn berger_commutant_by_kronecker_solve() {
    let sp = common::berger();
    let bar = build_bar_model(&sp, 0.5).unwrap();
    let hol = holonomy_algebra(&bar);
    let n = hol.carrier_dim();
    // Unknown M (column-major, n² entries): M A − A M = 0 for every
    // generator, and M = Mᵀ (the onb is orthonormal for g_s).
    let mut rows: Vec<DVector<f64>> = Vec::new();
    let id = DMatrix::<f64>::identity(n, n);
    for a in hol.generators() {
        let a = a.matrix();
        let op = a.transpose().kronecker(&id) - id.kronecker(a);
        rows.extend(op.row_iter().map(|r| r.transpose()));
    }
    for i in 0..n {
        for j in i + 1..n {
            let mut r = DVector::zeros(n * n);
            r[i + j * n] = 1.0;
            r[j + i * n] = -1.0;
            rows.push(r);
        }
    }
    let system = DMatrix::from_rows(&rows.iter().map(|r| r.transpose()).collect::<Vec<_>>());
    assert_eq!(linalg::null_space(&system).ncols(), 1);
    let irr = irreducibility_check(&hol, &mut ChaCha8Rng::seed_from_u64(0)).unwrap();
    assert_eq!(irr.commutant_dim, 1);
}

#[test]
fn berger_holonomy_fills_so3() {
    let bar = build_bar_model(&common::berger(), 0.5).unwrap();
    let hol = holonomy_algebra(&bar);
    assert_eq!(hol.dim(), 3);
    let n = hol.carrier_dim();
    assert!(hol.dim() <= n * (n - 1) / 2);
    assert!(hol.skew_residual() < 1e-10);
}

#[test]
fn round_sphere_is_irreducible() {
    let bar = build_bar_model(&common::berger(), 1.0).unwrap();
    let irr = irreducibility_check(&holonomy_algebra(&bar), &mut ChaCha8Rng::seed_from_u64(0)).unwrap();
    assert!(irr.irreducible);
}

#[test]
fn lambda_on_p1_matches_closed_form_half_bracket() {
    let sp = common::berger();
    let s = 0.5;
    let bar = build_bar_model(&sp, s).unwrap();
    let g = sp.g();
    let x1 = sp.pair().p1().vector(0);
    let y2 = sp.p2().vector(0);
    let lam = lambda_operator(&bar, &bar.lift_g(&x1)).unwrap();
    let applied = bar.qbar().point(&lam.apply(&bar.qbar().coords(&bar.embed2(&y2))));
    // [X1, embed2(Y2)]_q̄ = s²[X1, Y2] since [X1, 0]_p2 = 0.
    let closed = bar.lift_g(&(g.bracket_coords(&x1, &y2) * (0.5 * s * s)));
    assert!((applied - closed).amax() < 1e-10);
}

#[test]
fn product_control_splits() {
    let bar = build_bar_model(&common::product_control(), 0.5).unwrap();
    let hol = holonomy_algebra(&bar);
    let irr = irreducibility_check(&hol, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
    assert!(irr.commutant_dim >= 2);
    assert!(!irr.irreducible);
    assert!(irr.projectors.len() >= 2);
    assert_eq!(irr.invariant_dims.iter().sum::<usize>(), 6);
    assert!(irr.invariance_residual < 1e-8);
}

#[test]
fn maximal_abelian_matches_generic_centralizer_rank() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let cases = [
        (common::cp2(), 1),
        (common::su4_so4(), 3),
        (common::sp2(), 1),
        (common::split(Family::So, 5, IsotropyKind::SoBlock { p: 3, q: 2 }, KChoice::First), 2),
    ];
    for (sp, rank) in cases {
        let pair = sp.pair();
        let g = pair.g();
        // Oracle: the centralizer in p1 of a generic element of p1 is a
        // maximal abelian subspace, so its dimension is the rank.
        let x = pair.p1().random_vector(&mut rng);
        let restricted = g.ad(&x) * pair.p1().onb();
        assert_eq!(linalg::null_space(&restricted).ncols(), rank);
        let m = maximal_abelian_in_p1(pair, &mut rng);
        assert_eq!(m.dim(), rank);
        for a in m.vectors() {
            for b in m.vectors() {
                assert!(g.bracket_coords(&a, &b).amax() < 1e-10);
            }
        }
    }
}

#[test]
fn su4_so4_full_p1_violates_hypothesis() {
    let sp = common::su4_so4();
    let r = check_section_hypothesis(&sp, sp.pair().p1()).unwrap();
    assert!(!r.holds);
    assert!(r.residual > 1e-2);
}

#[test]
fn transvections_center_and_fixed_set_on_sp2() {
    let sp = common::sp2();
    let bar = build_bar_model(&sp, 2.0).unwrap();
    assert_eq!(transvection_algebra(&bar).dim(), 13);
    assert_eq!(transvection_algebra(&build_bar_model(&sp, 1.0).unwrap()).dim(), 10);
    assert_eq!(center_check(&bar).unwrap().dim_center, 0);
    let f = fixed_set_adk(&sp).unwrap();
    assert_eq!(f.dim(), 3);
    assert!(f.p2_residual < 1e-10);
}

#[test]
fn natural_reductivity_on_sp2_and_cp2() {
    assert!(natural_reductivity_check(&build_bar_model(&common::sp2(), 2.0).unwrap()).max() < 1e-10);
    assert!(natural_reductivity_check(&build_bar_model(&common::cp2(), 0.5).unwrap()).max() < 1e-10);
}

#[test]
fn bracket_identities_on_sp2() {
    let bar = build_bar_model(&common::sp2(), 0.7).unwrap();
    let r = bracket_formula_check(&bar, 100, &mut ChaCha8Rng::seed_from_u64(5));
    assert!(r.max() < 1e-10, "{r:?}");
}

#[test]
fn bar_dimensions_add_up() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let splits = [common::berger(), common::cp2(), common::sp2(), common::su4_so4()];
    for _ in 0..10 {
        let sp = &splits[rng.random_range(0..splits.len())];
        let s = rng.random_range(0.2..3.0);
        let bar = build_bar_model(sp, s).unwrap();
        assert_eq!(bar.kbar().dim() + bar.qbar().dim(), bar.gbar().dim());
    }
}

#[test]
fn embedded_p2_inner_products_scale_by_s_squared() {
    let sp = common::sp2();
    let s = 1.3;
    let bar = build_bar_model(&sp, s).unwrap();
    let g = sp.g();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (y, w) = (sp.p2().random_vector(&mut rng), sp.p2().random_vector(&mut rng));
    let lhs = bar.form().inner(&bar.embed2(&y), &bar.embed2(&w));
    assert!((lhs - s * s * g.inner(&y, &w)).abs() < 1e-10);
    let x1 = sp.pair().p1().random_vector(&mut rng);
    assert!(bar.form().inner(&bar.lift_g(&x1), &bar.embed2(&y)).abs() < 1e-10);
}

#[test]
fn real_section_tangent_at_identity_is_m() {
    let sp = common::cp2();
    let metric = metric_gs(&sp, 0.5).unwrap();
    let m = real_section(sp.pair()).unwrap();
    let sc = section_algebra(&sp, &m).unwrap();
    let at = SamplePoint::identity(sp.g());
    let tangent = section_tangent(&sp, &metric, &sc, &at);
    let m_q: Vec<_> = m.vectors().iter().map(|v| sp.q_coords(v)).collect();
    let m_q = polarlift_core::Subspace::from_spanning(&m_q, metric.form_q());
    assert_eq!(tangent.dim(), 2);
    assert!(tangent.equality_residual(&m_q) < 1e-10);
    let orbit = orbit_tangent(&sp, &metric, &ActionSpec::isotropy(sp.pair(), false), &at);
    assert!(orbit.equality_residual(&vertical_space(&sp, &metric)) < 1e-10);
}
