//! Sampled verification of polarity for natural liftings `L × H/K` acting
//! on `(G/K, g_s)`.
//!
//! Tangent spaces at `σK` are identified with `q` by left translation, so
//! the left-invariant metric `g_s` is the same Gram matrix at every point.
//! The orbit of `exp(tZ)` through `σK` has tangent `proj_q(Ad(σ⁻¹)Z)`; the
//! gauge `hK` acting by `σ h⁻¹` contributes `−Y` for `Y ∈ p2`.

use nalgebra::{DMatrix, DVector};
use rand::Rng;

use crate::algebra::LieAlgebra;
use crate::bundle::{bracket_containment, BundleSplit, MetricGs, SymmetricPair};
use crate::error::{Error, Result};
use crate::isotropy;
use crate::linalg::{self, TOL_ALG, TOL_LIN};
use crate::subspace::{intersection, orthogonal_complement, span_closure, Subspace};

/// Number of exponential factors in a sampled section point.
pub const SECTION_FACTORS: usize = 2;

/// The acting algebra `l ⊆ g`, optionally together with the gauge `h/k`.
#[derive(Clone, Debug)]
pub struct ActionSpec {
    l: Subspace,
    with_gauge: bool,
}

impl ActionSpec {
    pub fn new(g: &LieAlgebra, l: Subspace, with_gauge: bool) -> Result<Self> {
        let residual = bracket_containment(g, &l, &l, &l);
        if residual > TOL_ALG {
            return Err(Error::NotSubalgebra { residual });
        }
        Ok(ActionSpec { l, with_gauge })
    }

    /// The isotropy action `l = h`.
    pub fn isotropy(pair: &SymmetricPair, with_gauge: bool) -> Self {
        ActionSpec { l: pair.h().clone(), with_gauge }
    }

    pub fn l(&self) -> &Subspace {
        &self.l
    }

    pub fn with_gauge(&self) -> bool {
        self.with_gauge
    }
}

/// `m ⊆ p1` together with `s = m + [m, m]`.
#[derive(Clone, Debug)]
pub struct SectionCandidate {
    m: Subspace,
    s_alg: Subspace,
    flat: bool,
}

impl SectionCandidate {
    pub fn m(&self) -> &Subspace {
        &self.m
    }

    pub fn s_alg(&self) -> &Subspace {
        &self.s_alg
    }

    pub fn flat(&self) -> bool {
        self.flat
    }
}

/// A group element `σ` with `Ad(σ⁻¹)` cached in algebra coordinates.
#[derive(Clone, Debug)]
pub struct SamplePoint {
    group_element: DMatrix<f64>,
    ad_inv: DMatrix<f64>,
}

impl SamplePoint {
    pub fn new(g: &LieAlgebra, sigma: DMatrix<f64>) -> Result<Self> {
        let n = g.matrix_size();
        if sigma.nrows() != n || sigma.ncols() != n {
            return Err(Error::DimensionMismatch { expected: n, got: sigma.nrows() });
        }
        let defect = (sigma.transpose() * &sigma - DMatrix::<f64>::identity(n, n)).amax();
        if defect > TOL_LIN {
            return Err(Error::NotOrthogonal { residual: defect });
        }
        let cols = (0..g.dim())
            .map(|i| g.expand(&(sigma.transpose() * g.basis_matrix(i) * &sigma)))
            .collect::<Result<Vec<_>>>()?;
        Ok(SamplePoint { ad_inv: linalg::columns_matrix(g.dim(), &cols), group_element: sigma })
    }

    pub fn identity(g: &LieAlgebra) -> Self {
        let n = g.matrix_size();
        SamplePoint { group_element: DMatrix::identity(n, n), ad_inv: DMatrix::identity(g.dim(), g.dim()) }
    }

    /// `exp(A_1) ⋯ exp(A_j)` with each `A_i` a standard-normal element of `m`.
    pub fn sample<R: Rng + ?Sized>(g: &LieAlgebra, m: &Subspace, factors: usize, rng: &mut R) -> Result<Self> {
        let n = g.matrix_size();
        let mut sigma = DMatrix::identity(n, n);
        for _ in 0..factors {
            sigma *= g.realize(&m.random_vector(rng)).exp();
        }
        Self::new(g, sigma)
    }

    pub fn group_element(&self) -> &DMatrix<f64> {
        &self.group_element
    }

    /// `Ad(σ⁻¹)` in algebra coordinates.
    pub fn ad_inv(&self) -> &DMatrix<f64> {
        &self.ad_inv
    }
}

fn require_in_p1(split: &BundleSplit, m: &Subspace) -> Result<()> {
    let residual = split.pair().p1().containment_residual(m);
    if residual > TOL_ALG {
        return Err(Error::NotInP1 { residual });
    }
    Ok(())
}

/// Verdict and residual of `[m, m] ⊆ k`.
#[derive(Clone, Debug, PartialEq)]
pub struct HypothesisCheck {
    pub holds: bool,
    /// Largest component outside `k` of `[m_i, m_j]` over onb pairs.
    pub residual: f64,
}

pub fn check_section_hypothesis(split: &BundleSplit, m: &Subspace) -> Result<HypothesisCheck> {
    require_in_p1(split, m)?;
    let residual = bracket_containment(split.g(), m, m, split.k());
    Ok(HypothesisCheck { holds: residual <= TOL_ALG, residual })
}

fn bracket_span(g: &LieAlgebra, m: &Subspace) -> (Subspace, Subspace) {
    let ms = m.vectors();
    let mut brackets = Vec::new();
    for (i, x) in ms.iter().enumerate() {
        for y in &ms[i + 1..] {
            brackets.push(g.bracket_coords(x, y));
        }
    }
    let mm = Subspace::from_spanning(&brackets, g.form().clone());
    let mut all = ms;
    all.extend(brackets);
    (mm, Subspace::from_spanning(&all, g.form().clone()))
}

/// `s = m + [m, m]`, verified to be closed under the bracket.
pub fn section_algebra(split: &BundleSplit, m: &Subspace) -> Result<SectionCandidate> {
    require_in_p1(split, m)?;
    let g = split.g();
    let (mm, span) = bracket_span(g, m);
    let closed = span_closure(&span.vectors(), g.form(), |x, y| g.bracket_coords(x, y));
    if closed.dim() != span.dim() {
        return Err(Error::SectionNotClosed { expected: span.dim(), got: closed.dim() });
    }
    Ok(SectionCandidate { m: m.clone(), s_alg: span, flat: mm.dim() == 0 })
}

/// `m + [m, m]` without the closure requirement, for probing arbitrary
/// subspaces of `p1`.
pub fn section_span(split: &BundleSplit, m: &Subspace) -> Result<SectionCandidate> {
    require_in_p1(split, m)?;
    let (mm, span) = bracket_span(split.g(), m);
    Ok(SectionCandidate { m: m.clone(), s_alg: span, flat: mm.dim() == 0 })
}

/// Vectors of `p1` commuting with every element of `m`.
pub fn centralizer_in_p1(pair: &SymmetricPair, m: &Subspace) -> Subspace {
    let g = pair.g();
    let p1 = pair.p1();
    if m.dim() == 0 {
        return p1.clone();
    }
    let d = g.dim();
    let mut stacked = DMatrix::zeros(m.dim() * d, p1.dim());
    for (i, x) in m.vectors().iter().enumerate() {
        stacked.rows_mut(i * d, d).copy_from(&(g.ad(x) * p1.onb()));
    }
    let kernel = linalg::null_space(&stacked);
    Subspace::from_onb(p1.onb() * kernel, g.form().clone())
}

/// Greedy maximal abelian subspace of `p1`: start from a random vector and
/// extend by random commuting vectors until none remain.
pub fn maximal_abelian_in_p1<R: Rng + ?Sized>(pair: &SymmetricPair, rng: &mut R) -> Subspace {
    let g = pair.g();
    let mut vectors = vec![pair.p1().random_vector(rng)];
    loop {
        let m = Subspace::gram_schmidt(&vectors, g.form().clone());
        let cent = centralizer_in_p1(pair, &m);
        let rest = match orthogonal_complement(&m, &cent) {
            Ok(rest) => rest,
            Err(_) => return m,
        };
        if rest.dim() == 0 {
            return m;
        }
        vectors.push(rest.random_vector(rng));
    }
}

/// `m` rotated by `angle` toward random `p1` directions orthogonal to it.
pub fn perturbed_subspace<R: Rng + ?Sized>(pair: &SymmetricPair, m: &Subspace, angle: f64, rng: &mut R) -> Result<Subspace> {
    let g = pair.g();
    let rest = orthogonal_complement(m, pair.p1())?;
    let vectors: Vec<_> = m
        .vectors()
        .iter()
        .map(|v| {
            let w = rest.random_vector(rng);
            let w = &w / g.form().norm(&w);
            v * angle.cos() + w * angle.sin()
        })
        .collect();
    Ok(Subspace::from_spanning(&vectors, g.form().clone()))
}

/// `p1` intersected with the real points of a simple `su(n)`.
pub fn real_section(pair: &SymmetricPair) -> Result<Subspace> {
    let g = pair.g();
    let real = g.span(&isotropy::real_points(g)?);
    intersection(pair.p1(), &real)
}

/// Diagonal torus of a simple `su(n)` as an acting algebra.
pub fn torus_action(g: &LieAlgebra, with_gauge: bool) -> Result<ActionSpec> {
    ActionSpec::new(g, g.span(&isotropy::diagonal_torus(g)?), with_gauge)
}

fn tangent(metric: &MetricGs, vectors: Vec<DVector<f64>>) -> Subspace {
    Subspace::from_spanning(&vectors, metric.form_q())
}

fn translated(split: &BundleSplit, at: &SamplePoint, v: &DVector<f64>) -> DVector<f64> {
    split.q_coords(&(at.ad_inv() * v))
}

/// The gauge directions `−Y`, `Y ∈ p2`, in `q` coordinates.
fn vertical_vectors(split: &BundleSplit) -> Vec<DVector<f64>> {
    split.p2().vectors().iter().map(|y| -split.q_coords(y)).collect()
}

/// Tangent space at `σK` of the orbit of `L` (and the gauge), in `q`
/// coordinates with the form `g_s`.
pub fn orbit_tangent(split: &BundleSplit, metric: &MetricGs, action: &ActionSpec, at: &SamplePoint) -> Subspace {
    let mut vectors: Vec<_> = action.l().vectors().iter().map(|z| translated(split, at, z)).collect();
    if action.with_gauge() {
        vectors.extend(vertical_vectors(split));
    }
    tangent(metric, vectors)
}

/// Tangent space at `σK` of the section `S·K`.
pub fn section_tangent(split: &BundleSplit, metric: &MetricGs, sc: &SectionCandidate, at: &SamplePoint) -> Subspace {
    let vectors = sc.s_alg().vectors().iter().map(|w| translated(split, at, w)).collect();
    tangent(metric, vectors)
}

/// Vertical space `p2` in `q` coordinates with the form `g_s`.
pub fn vertical_space(split: &BundleSplit, metric: &MetricGs) -> Subspace {
    tangent(metric, vertical_vectors(split))
}

/// Largest `|g_s(u, v)|` over onb vectors of two subspaces of `q`.
pub fn cross_inner(a: &Subspace, b: &Subspace) -> f64 {
    if a.dim() == 0 || b.dim() == 0 {
        return 0.0;
    }
    (a.onb().transpose() * a.form().apply_mat(b.onb())).amax()
}

/// Measurements at one sampled section point.
#[derive(Clone, Debug, PartialEq)]
pub struct PointRecord {
    pub orbit_dim: usize,
    pub section_dim: usize,
    pub orthogonality: f64,
}

/// Sampled orthogonality and transversality of orbits and a candidate section.
#[derive(Clone, Debug, PartialEq)]
pub struct PolarityReport {
    pub points: Vec<PointRecord>,
    pub dim_q: usize,
    pub dim_m: usize,
    /// Largest sampled orbit dimension, the regular-point proxy.
    pub regular_orbit_dim: usize,
    pub regular_samples: usize,
    /// Regular samples where `dim orbit + dim m ≠ dim q`.
    pub transversality_failures: usize,
    /// Regular samples where the section tangent dimension differs from `dim m`.
    pub section_dim_failures: usize,
}

impl PolarityReport {
    pub fn orthogonality(&self) -> f64 {
        self.points.iter().map(|p| p.orthogonality).fold(0.0, f64::max)
    }

    pub fn transversal(&self) -> bool {
        self.regular_samples > 0 && self.transversality_failures == 0 && self.section_dim_failures == 0
    }
}

fn sample_points<R: Rng + ?Sized>(g: &LieAlgebra, m: &Subspace, n: usize, rng: &mut R) -> Result<Vec<SamplePoint>> {
    (0..n).map(|_| SamplePoint::sample(g, m, SECTION_FACTORS, rng)).collect()
}

/// Orthogonality of orbits to a candidate section at sampled points,
/// without checking any hypothesis on `m`.
pub fn orthogonality_probe<R: Rng + ?Sized>(
    split: &BundleSplit,
    metric: &MetricGs,
    action: &ActionSpec,
    sc: &SectionCandidate,
    n_samples: usize,
    rng: &mut R,
) -> Result<PolarityReport> {
    let points = sample_points(split.g(), sc.m(), n_samples, rng)?;
    let records: Vec<_> = points
        .iter()
        .map(|at| {
            let orbit = orbit_tangent(split, metric, action, at);
            let section = section_tangent(split, metric, sc, at);
            PointRecord { orbit_dim: orbit.dim(), section_dim: section.dim(), orthogonality: cross_inner(&orbit, &section) }
        })
        .collect();
    let dim_q = split.q().dim();
    let dim_m = sc.m().dim();
    let regular_orbit_dim = records.iter().map(|r| r.orbit_dim).max().unwrap_or(0);
    let regular: Vec<_> = records.iter().filter(|r| r.orbit_dim == regular_orbit_dim).collect();
    Ok(PolarityReport {
        dim_q,
        dim_m,
        regular_orbit_dim,
        regular_samples: regular.len(),
        transversality_failures: regular.iter().filter(|r| r.orbit_dim + dim_m != dim_q).count(),
        section_dim_failures: regular.iter().filter(|r| r.section_dim != dim_m).count(),
        points: records,
    })
}

/// [`orthogonality_probe`] guarded by `[m, m] ⊆ k`.
pub fn polarity_check<R: Rng + ?Sized>(
    split: &BundleSplit,
    metric: &MetricGs,
    action: &ActionSpec,
    sc: &SectionCandidate,
    n_samples: usize,
    rng: &mut R,
) -> Result<PolarityReport> {
    let hyp = check_section_hypothesis(split, sc.m())?;
    if !hyp.holds {
        return Err(Error::HypothesisNotVerified { residual: hyp.residual });
    }
    orthogonality_probe(split, metric, action, sc, n_samples, rng)
}

/// Largest `|g_s(u, v)|` between section tangents and the vertical space.
#[derive(Clone, Debug, PartialEq)]
pub struct HorizontalityReport {
    pub residuals: Vec<f64>,
}

impl HorizontalityReport {
    pub fn max(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }
}

pub fn horizontality_check<R: Rng + ?Sized>(
    split: &BundleSplit,
    metric: &MetricGs,
    sc: &SectionCandidate,
    n_samples: usize,
    rng: &mut R,
) -> Result<HorizontalityReport> {
    let vertical = vertical_space(split, metric);
    let mut residuals = vec![cross_inner(&section_tangent(split, metric, sc, &SamplePoint::identity(split.g())), &vertical)];
    for at in sample_points(split.g(), sc.m(), n_samples, rng)? {
        residuals.push(cross_inner(&section_tangent(split, metric, sc, &at), &vertical));
    }
    Ok(HorizontalityReport { residuals })
}

/// Distance of unit vertical vectors from the orbit tangent at sampled points.
#[derive(Clone, Debug, PartialEq)]
pub struct VerticalityReport {
    pub with_gauge: bool,
    pub orbit_dims: Vec<usize>,
    pub residuals: Vec<f64>,
    pub regular_orbit_dim: usize,
}

impl VerticalityReport {
    /// Worst residual over regular samples.
    pub fn max_regular(&self) -> f64 {
        self.orbit_dims
            .iter()
            .zip(&self.residuals)
            .filter(|(d, _)| **d == self.regular_orbit_dim)
            .map(|(_, r)| *r)
            .fold(0.0, f64::max)
    }

    pub fn regular_samples(&self) -> usize {
        self.orbit_dims.iter().filter(|d| **d == self.regular_orbit_dim).count()
    }
}

pub fn verticality_claim_check<R: Rng + ?Sized>(
    split: &BundleSplit,
    metric: &MetricGs,
    action: &ActionSpec,
    sc: &SectionCandidate,
    n_samples: usize,
    rng: &mut R,
) -> Result<VerticalityReport> {
    let vertical = vertical_space(split, metric);
    let mut orbit_dims = Vec::with_capacity(n_samples);
    let mut residuals = Vec::with_capacity(n_samples);
    for at in sample_points(split.g(), sc.m(), n_samples, rng)? {
        let orbit = orbit_tangent(split, metric, action, &at);
        orbit_dims.push(orbit.dim());
        residuals.push(vertical.vectors().iter().map(|v| orbit.distance(v)).fold(0.0, f64::max));
    }
    let regular_orbit_dim = orbit_dims.iter().copied().max().unwrap_or(0);
    Ok(VerticalityReport { with_gauge: action.with_gauge(), orbit_dims, residuals, regular_orbit_dim })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::algebra::{build_classical, Family};
    use crate::bundle::{make_symmetric_pair, metric_gs, split_isotropy};
    use crate::isotropy::{isotropy_generators, IsotropyKind, KChoice};

    fn split(family: Family, n: usize, kind: IsotropyKind, choice: KChoice) -> BundleSplit {
        let g = Arc::new(build_classical(family, n).unwrap());
        let gens = isotropy_generators(&g, kind).unwrap();
        let pair = make_symmetric_pair(Arc::clone(&g), &gens.h).unwrap();
        split_isotropy(&pair, gens.k(choice)).unwrap()
    }

    fn cp2() -> BundleSplit {
        split(Family::Su, 3, IsotropyKind::SuBlock { p: 2, q: 1 }, KChoice::First)
    }

    #[test]
    fn maximal_abelian_ranks() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        assert_eq!(maximal_abelian_in_p1(cp2().pair(), &mut rng).dim(), 1);
        let so4 = split(Family::Su, 4, IsotropyKind::SuReal, KChoice::First);
        let m = maximal_abelian_in_p1(so4.pair(), &mut rng);
        assert_eq!(m.dim(), 3);
        assert_eq!(centralizer_in_p1(so4.pair(), &m).dim(), 3);
    }

    #[test]
    fn flat_section_algebra_is_m() {
        let sp = cp2();
        let m = maximal_abelian_in_p1(sp.pair(), &mut ChaCha8Rng::seed_from_u64(2));
        let sc = section_algebra(&sp, &m).unwrap();
        assert!(sc.flat());
        assert!(sc.s_alg().equality_residual(&m) < 1e-10);
    }

    #[test]
    fn real_section_of_cp2() {
        let sp = cp2();
        let m = real_section(sp.pair()).unwrap();
        assert_eq!(m.dim(), 2);
        assert!(check_section_hypothesis(&sp, &m).unwrap().holds);
        let sc = section_algebra(&sp, &m).unwrap();
        assert_eq!(sc.s_alg().dim(), 3);
        assert!(!sc.flat());
    }

    #[test]
    fn hypothesis_fails_for_all_of_p1() {
        let sp = split(Family::Su, 4, IsotropyKind::SuReal, KChoice::First);
        let r = check_section_hypothesis(&sp, sp.pair().p1()).unwrap();
        assert!(!r.holds);
    }

    #[test]
    fn hypothesis_requires_p1() {
        let sp = cp2();
        assert!(matches!(check_section_hypothesis(&sp, sp.k()), Err(Error::NotInP1 { .. })));
    }

    #[test]
    fn isotropy_orbit_at_identity_is_p2() {
        let sp = cp2();
        let metric = metric_gs(&sp, 0.5).unwrap();
        let at = SamplePoint::identity(sp.g());
        for gauge in [false, true] {
            let orbit = orbit_tangent(&sp, &metric, &ActionSpec::isotropy(sp.pair(), gauge), &at);
            assert_eq!(orbit.dim(), 1);
            assert!(orbit.equality_residual(&vertical_space(&sp, &metric)) < 1e-10);
        }
    }

    #[test]
    fn lifted_isotropy_action_is_polar_on_cp2_bundle() {
        let sp = cp2();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let metric = metric_gs(&sp, 0.5).unwrap();
        let m = maximal_abelian_in_p1(sp.pair(), &mut rng);
        let sc = section_algebra(&sp, &m).unwrap();
        let action = ActionSpec::isotropy(sp.pair(), true);
        let r = polarity_check(&sp, &metric, &action, &sc, 20, &mut rng).unwrap();
        assert!(r.orthogonality() < 1e-8, "{r:?}");
        assert!(r.transversal(), "{r:?}");
        assert_eq!(r.regular_orbit_dim + 1, 5);
        let v = verticality_claim_check(&sp, &metric, &action, &sc, 20, &mut rng).unwrap();
        assert!(v.max_regular() < 1e-10, "{v:?}");
        assert!(horizontality_check(&sp, &metric, &sc, 20, &mut rng).unwrap().max() < 1e-8);
    }

    #[test]
    fn torus_action_with_real_section() {
        let sp = cp2();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for s in [0.5, 2.0] {
            let metric = metric_gs(&sp, s).unwrap();
            let sc = section_algebra(&sp, &real_section(sp.pair()).unwrap()).unwrap();
            let action = torus_action(sp.g(), true).unwrap();
            let r = polarity_check(&sp, &metric, &action, &sc, 20, &mut rng).unwrap();
            assert!(r.orthogonality() < 1e-8, "{r:?}");
            assert!(r.transversal(), "{r:?}");
        }
    }

    #[test]
    fn perturbed_section_is_not_orthogonal() {
        let sp = split(Family::Su, 4, IsotropyKind::SuReal, KChoice::First);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let metric = metric_gs(&sp, 0.5).unwrap();
        let m = maximal_abelian_in_p1(sp.pair(), &mut rng);
        let bad = perturbed_subspace(sp.pair(), &m, 0.6, &mut rng).unwrap();
        let sc = section_span(&sp, &bad).unwrap();
        let action = ActionSpec::isotropy(sp.pair(), true);
        assert!(polarity_check(&sp, &metric, &action, &sc, 5, &mut rng).is_err());
        let r = orthogonality_probe(&sp, &metric, &action, &sc, 5, &mut rng).unwrap();
        assert!(r.orthogonality() > 1e-2, "{r:?}");
    }
}
