//! Canonical-connection operators on `q̄`, holonomy closure and
//! irreducibility, transvections, fixed sets and centers.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::bundle::{BarModel, BundleSplit};
use crate::error::{Error, Result};
use crate::linalg::{self, Form};
use crate::subspace::{joint_kernel, span_closure, spectral_projectors, symmetric_commutant, LinearEndo, Subspace};

/// Eigenvalue gap separating invariant blocks of a commutant element.
pub const EIGEN_GAP: f64 = 1e-6;

/// Gram matrix of `Q_s` in the `q̄` onb (identity up to rounding).
pub fn qbar_gram(bar: &BarModel) -> DMatrix<f64> {
    let onb = bar.qbar().onb();
    onb.transpose() * bar.form().apply_mat(onb)
}

/// `Λ(X) = ad(X_k̄)|q̄ + ½ [X_q̄, ·]_q̄`, in `q̄` onb coordinates.
pub fn lambda_operator(bar: &BarModel, x: &DVector<f64>) -> Result<LinearEndo> {
    if x.len() != bar.gbar().dim() {
        return Err(Error::DimensionMismatch { expected: bar.gbar().dim(), got: x.len() });
    }
    let (xk, xq) = bar.decompose(x);
    let qbar = bar.qbar();
    let cols: Vec<_> = qbar
        .vectors()
        .iter()
        .map(|y| qbar.coords(&(bar.bracket(&xk, y) + bar.bracket(&xq, y) * 0.5)))
        .collect();
    LinearEndo::new(linalg::columns_matrix(qbar.dim(), &cols))
}

/// Skewness of the canonical-connection operators with respect to `g_s`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct NaturalReductivity {
    /// Worst `|g_s(Λ(X)Y, Z) + g_s(Y, Λ(X)Z)|` over `X` in the `q̄` onb.
    pub lambda_qbar: f64,
    /// Same for `X` in the `k̄` onb, where `Λ(X) = ad(X)`.
    pub ad_kbar: f64,
}

impl NaturalReductivity {
    pub fn max(&self) -> f64 {
        self.lambda_qbar.max(self.ad_kbar)
    }
}

pub fn natural_reductivity_check(bar: &BarModel) -> NaturalReductivity {
    let gram = qbar_gram(bar);
    let worst = |vs: Vec<DVector<f64>>| {
        vs.iter()
            .map(|x| lambda_operator(bar, x).map(|l| linalg::skew_residual(l.matrix(), &gram)).unwrap_or(f64::INFINITY))
            .fold(0.0, f64::max)
    };
    NaturalReductivity { lambda_qbar: worst(bar.qbar().vectors()), ad_kbar: worst(bar.kbar().vectors()) }
}

fn flatten(m: &DMatrix<f64>) -> DVector<f64> {
    DVector::from_column_slice(m.as_slice())
}

fn unflatten(v: &DVector<f64>, n: usize) -> DMatrix<f64> {
    DMatrix::from_column_slice(n, n, v.as_slice())
}

/// The Lie algebra of operators on `q̄` generated by `Λ(ḡ)`.
#[derive(Clone, Debug)]
pub struct HolonomySet<'a> {
    bar: &'a BarModel,
    generators: Vec<LinearEndo>,
    /// Flattened (column-major) operators, Euclidean form.
    closure: Subspace,
    skew_residual: f64,
}

impl<'a> HolonomySet<'a> {
    pub fn bar(&self) -> &'a BarModel {
        self.bar
    }

    pub fn generators(&self) -> &[LinearEndo] {
        &self.generators
    }

    pub fn closure(&self) -> &Subspace {
        &self.closure
    }

    pub fn dim(&self) -> usize {
        self.closure.dim()
    }

    pub fn carrier_dim(&self) -> usize {
        self.bar.qbar().dim()
    }

    /// Basis of the closure as operators on `q̄`.
    pub fn closure_operators(&self) -> Vec<LinearEndo> {
        let n = self.carrier_dim();
        self.closure
            .vectors()
            .iter()
            .map(|v| LinearEndo::new(unflatten(v, n)).expect("square by construction"))
            .collect()
    }

    /// Worst skewness, for `g_s`, of the closure basis.
    pub fn skew_residual(&self) -> f64 {
        self.skew_residual
    }

    /// Worst failure of the closure to contain commutators of its basis.
    pub fn closure_residual(&self) -> f64 {
        let ops = self.closure_operators();
        let mut worst: f64 = 0.0;
        for a in &ops {
            for b in &ops {
                let c = flatten(&linalg::commutator(a.matrix(), b.matrix()));
                worst = worst.max(self.closure.distance(&c));
            }
        }
        worst
    }
}

pub fn holonomy_algebra(bar: &BarModel) -> HolonomySet<'_> {
    let gbar = bar.gbar();
    let n = bar.qbar().dim();
    let generators: Vec<_> = (0..gbar.dim())
        .map(|i| lambda_operator(bar, &gbar.unit_vector(i)).expect("basis vector of gbar"))
        .collect();
    let seed: Vec<_> = generators.iter().map(|g| flatten(g.matrix())).collect();
    let closure = span_closure(&seed, &Form::Euclidean(n * n), |a, b| {
        flatten(&linalg::commutator(&unflatten(a, n), &unflatten(b, n)))
    });
    let gram = qbar_gram(bar);
    let skew_residual =
        closure.vectors().iter().map(|v| linalg::skew_residual(&unflatten(v, n), &gram)).fold(0.0, f64::max);
    HolonomySet { bar, generators, closure, skew_residual }
}

/// Outcome of the irreducibility test on the holonomy representation.
#[derive(Clone, Debug)]
pub struct Irreducibility {
    pub commutant_dim: usize,
    pub irreducible: bool,
    /// Spectral projectors (in `q̄` onb coordinates) of one generic
    /// commutant element; empty when irreducible.
    pub projectors: Vec<DMatrix<f64>>,
    /// Ranks of the projectors.
    pub invariant_dims: Vec<usize>,
    /// Worst `‖(1 − P) A P‖` (Frobenius) over generators `A` and projectors `P`.
    pub invariance_residual: f64,
}

pub fn irreducibility_check<R: Rng + ?Sized>(hol: &HolonomySet<'_>, rng: &mut R) -> Result<Irreducibility> {
    let gram = qbar_gram(hol.bar());
    let commutant = symmetric_commutant(&hol.closure_operators(), &gram)?;
    let commutant_dim = commutant.dim();
    if commutant_dim <= 1 {
        return Ok(Irreducibility {
            commutant_dim,
            irreducible: commutant_dim == 1,
            projectors: Vec::new(),
            invariant_dims: Vec::new(),
            invariance_residual: 0.0,
        });
    }
    let n = hol.carrier_dim();
    let generic = commutant.basis.iter().fold(DMatrix::zeros(n, n), |acc, b| {
        let w: f64 = rng.sample(StandardNormal);
        acc + b * (w / b.norm())
    });
    let projectors = spectral_projectors(&generic, &gram, EIGEN_GAP);
    let invariant_dims = projectors.iter().map(|p| p.trace().round() as usize).collect();
    let id = DMatrix::<f64>::identity(n, n);
    let mut invariance_residual: f64 = 0.0;
    for a in hol.generators() {
        for p in &projectors {
            invariance_residual = invariance_residual.max(((&id - p) * a.matrix() * p).norm());
        }
    }
    Ok(Irreducibility { commutant_dim, irreducible: false, projectors, invariant_dims, invariance_residual })
}

/// The transvection algebra `q̄ + [q̄, q̄]` and its bracket closure.
#[derive(Clone, Debug)]
pub struct Transvections {
    /// Bracket closure, in `ḡ` coordinates with the invariant form.
    pub algebra: Subspace,
    /// Dimension of `q̄ + [q̄, q̄]` before closing.
    pub span_dim: usize,
}

impl Transvections {
    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }
}

pub fn transvection_algebra(bar: &BarModel) -> Transvections {
    let gbar = bar.gbar();
    let qs = bar.qbar().vectors();
    let mut seed = qs.clone();
    for (i, x) in qs.iter().enumerate() {
        for y in &qs[i + 1..] {
            seed.push(gbar.bracket_coords(x, y));
        }
    }
    let span_dim = Subspace::from_spanning(&seed, gbar.form().clone()).dim();
    let algebra = span_closure(&seed, gbar.form(), |x, y| gbar.bracket_coords(x, y));
    Transvections { algebra, span_dim }
}

/// Vectors of `q` annihilated by `ad(k)`.
#[derive(Clone, Debug)]
pub struct FixedSet {
    /// In `g` coordinates with the invariant form.
    pub subspace: Subspace,
    /// Set when `k = 0`, so the condition is vacuous.
    pub vacuous: bool,
    /// Mutual containment residual against `p2`.
    pub p2_residual: f64,
}

impl FixedSet {
    pub fn dim(&self) -> usize {
        self.subspace.dim()
    }

    pub fn equals_p2(&self, dim_p2: usize, tol: f64) -> bool {
        self.dim() == dim_p2 && self.p2_residual <= tol
    }
}

pub fn fixed_set_adk(split: &BundleSplit) -> Result<FixedSet> {
    let q = split.q();
    let ops = split.k().vectors().iter().map(|x| LinearEndo::new(split.ad_on_q(x))).collect::<Result<Vec<_>>>()?;
    let kernel = joint_kernel(&ops, q.dim())?;
    let vectors: Vec<_> = kernel.subspace.vectors().iter().map(|c| q.point(c)).collect();
    let subspace = Subspace::from_spanning(&vectors, split.g().form().clone());
    let p2_residual = subspace.equality_residual(split.p2());
    Ok(FixedSet { subspace, vacuous: kernel.vacuous, p2_residual })
}

/// Centers of `ḡ` and of its `h/k` factor.
#[derive(Clone, Debug, PartialEq)]
pub struct CenterReport {
    pub dim_center: usize,
    pub dim_center_quotient: usize,
    /// Largest `g`-component of a unit central vector of `ḡ`.
    pub g_part: f64,
}

impl CenterReport {
    pub fn contained_in_quotient(&self, tol: f64) -> bool {
        self.g_part <= tol
    }
}

pub fn center_check(bar: &BarModel) -> Result<CenterReport> {
    let gbar = bar.gbar();
    let dg = bar.split().g().dim();
    let d = gbar.dim();
    let ops = (0..d).map(|i| LinearEndo::new(gbar.ad_basis(i).clone())).collect::<Result<Vec<_>>>()?;
    let center = joint_kernel(&ops, d)?.subspace;
    let g_part = center.vectors().iter().map(|v| v.rows(0, dg).norm()).fold(0.0, f64::max);
    let dc = d - dg;
    let quotient_ops = (dg..d)
        .map(|i| LinearEndo::new(gbar.ad_basis(i).view((dg, dg), (dc, dc)).into_owned()))
        .collect::<Result<Vec<_>>>()?;
    let dim_center_quotient = if dc == 0 { 0 } else { joint_kernel(&quotient_ops, dc)?.subspace.dim() };
    Ok(CenterReport { dim_center: center.dim(), dim_center_quotient, g_part })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::algebra::{build_classical, Family};
    use crate::bundle::{build_bar_model, make_symmetric_pair, split_isotropy};
    use crate::isotropy::{isotropy_generators, IsotropyKind, KChoice};

    fn split(family: Family, n: usize, kind: IsotropyKind, choice: KChoice) -> BundleSplit {
        let g = Arc::new(build_classical(family, n).unwrap());
        let gens = isotropy_generators(&g, kind).unwrap();
        let pair = make_symmetric_pair(Arc::clone(&g), &gens.h).unwrap();
        split_isotropy(&pair, gens.k(choice)).unwrap()
    }

    fn berger() -> BundleSplit {
        split(Family::Su, 2, IsotropyKind::Torus, KChoice::Trivial)
    }

    fn cp2() -> BundleSplit {
        split(Family::Su, 3, IsotropyKind::SuBlock { p: 2, q: 1 }, KChoice::First)
    }

    #[test]
    fn lambda_on_kbar_is_ad() {
        let bar = build_bar_model(&cp2(), 0.5).unwrap();
        let x = bar.kbar().vector(0);
        let l = lambda_operator(&bar, &x).unwrap();
        for (j, y) in bar.qbar().vectors().iter().enumerate() {
            let want = bar.qbar().coords(&bar.bracket(&x, y));
            assert!((l.matrix().column(j) - want).amax() < 1e-12);
        }
    }

    #[test]
    fn lambda_kills_its_argument_on_qbar() {
        let bar = build_bar_model(&cp2(), 0.5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let x = bar.qbar().random_vector(&mut rng);
        let l = lambda_operator(&bar, &x).unwrap();
        assert!(l.apply(&bar.qbar().coords(&x)).amax() < 1e-12);
    }

    #[test]
    fn lambda_rejects_foreign_vectors() {
        let bar = build_bar_model(&berger(), 0.5).unwrap();
        assert!(lambda_operator(&bar, &DVector::zeros(3)).is_err());
    }

    #[test]
    fn natural_reductivity_on_cp2() {
        for s in [0.5, 1.0, 2.0] {
            let bar = build_bar_model(&cp2(), s).unwrap();
            assert!(natural_reductivity_check(&bar).max() < 1e-10);
        }
    }

    #[test]
    fn berger_holonomy_is_full_so3() {
        let bar = build_bar_model(&berger(), 0.5).unwrap();
        let hol = holonomy_algebra(&bar);
        assert_eq!(hol.dim(), 3);
        assert!(hol.skew_residual() < 1e-10);
        assert!(hol.closure_residual() < 1e-10);
        let irr = irreducibility_check(&hol, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
        assert!(irr.irreducible);
    }

    #[test]
    fn transvection_dichotomy_on_cp2() {
        let sp = cp2();
        assert_eq!(transvection_algebra(&build_bar_model(&sp, 0.5).unwrap()).dim(), 9);
        assert_eq!(transvection_algebra(&build_bar_model(&sp, 1.0).unwrap()).dim(), 8);
    }

    #[test]
    fn fixed_set_and_center_on_cp2() {
        let sp = cp2();
        let f = fixed_set_adk(&sp).unwrap();
        assert!(f.equals_p2(1, 1e-10));
        let c = center_check(&build_bar_model(&sp, 0.5).unwrap()).unwrap();
        assert_eq!((c.dim_center, c.dim_center_quotient), (1, 1));
        assert!(c.contained_in_quotient(1e-10));
    }

    #[test]
    fn trivial_k_fixes_everything() {
        let sp = berger();
        let f = fixed_set_adk(&sp).unwrap();
        assert!(f.vacuous);
        assert_eq!(f.dim(), sp.q().dim());
    }
}
