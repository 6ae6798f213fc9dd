//! Symmetric pairs `g = h ⊕ p1`, ideal splits `h = k ⊕ p2`, the deformed
//! metric `g_s` on `q = p1 ⊕ p2` and the enlarged model `ḡ = g ⊕ h/k`.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use rand::Rng;

use crate::algebra::LieAlgebra;
use crate::error::{Error, Result};
use crate::linalg::{self, Form, TOL_ALG, TOL_LIN};
use crate::subspace::{orthogonal_complement, span_closure, Subspace};

/// Largest distance from `target` of `[a_i, b_j]` over onb pairs.
pub fn bracket_containment(g: &LieAlgebra, a: &Subspace, b: &Subspace, target: &Subspace) -> f64 {
    let mut worst: f64 = 0.0;
    for x in a.vectors() {
        for y in b.vectors() {
            worst = worst.max(target.distance(&g.bracket_coords(&x, &y)));
        }
    }
    worst
}

/// Largest norm of `[a_i, b_j]` over onb pairs.
pub fn bracket_norm(g: &LieAlgebra, a: &Subspace, b: &Subspace) -> f64 {
    let mut worst: f64 = 0.0;
    for x in a.vectors() {
        for y in b.vectors() {
            worst = worst.max(g.form().norm(&g.bracket_coords(&x, &y)));
        }
    }
    worst
}

fn check_generators(g: &LieAlgebra, gens: &[DVector<f64>]) -> Result<()> {
    match gens.iter().find(|v| v.len() != g.dim()) {
        Some(v) => Err(Error::DimensionMismatch { expected: g.dim(), got: v.len() }),
        None => Ok(()),
    }
}

fn closure(g: &LieAlgebra, gens: &[DVector<f64>]) -> Subspace {
    if gens.is_empty() {
        return Subspace::zero(g.form().clone());
    }
    span_closure(gens, g.form(), |x, y| g.bracket_coords(x, y))
}

/// Residuals of the Cartan relations.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PairResiduals {
    pub h_h: f64,
    pub h_p1: f64,
    pub p1_p1: f64,
    pub orthogonality: f64,
}

impl PairResiduals {
    pub fn max(&self) -> f64 {
        self.h_h.max(self.h_p1).max(self.p1_p1).max(self.orthogonality)
    }
}

/// `g = h ⊕ p1` with `[h,h] ⊆ h`, `[h,p1] ⊆ p1`, `[p1,p1] ⊆ h`.
#[derive(Clone, Debug)]
pub struct SymmetricPair {
    g: Arc<LieAlgebra>,
    h: Subspace,
    p1: Subspace,
    residuals: PairResiduals,
}

impl SymmetricPair {
    pub fn g(&self) -> &LieAlgebra {
        &self.g
    }

    pub fn algebra(&self) -> Arc<LieAlgebra> {
        Arc::clone(&self.g)
    }

    pub fn h(&self) -> &Subspace {
        &self.h
    }

    pub fn p1(&self) -> &Subspace {
        &self.p1
    }

    pub fn residuals(&self) -> &PairResiduals {
        &self.residuals
    }
}

pub fn make_symmetric_pair(g: Arc<LieAlgebra>, h_generators: &[DVector<f64>]) -> Result<SymmetricPair> {
    check_generators(&g, h_generators)?;
    let h = closure(&g, h_generators);
    let p1 = orthogonal_complement(&h, &g.full())?;
    let cross = (h.onb().transpose() * g.form().apply_mat(p1.onb())).amax();
    let residuals = PairResiduals {
        h_h: bracket_containment(&g, &h, &h, &h),
        h_p1: bracket_containment(&g, &h, &p1, &p1),
        p1_p1: bracket_containment(&g, &p1, &p1, &h),
        orthogonality: if cross.is_finite() { cross } else { f64::INFINITY },
    };
    if residuals.max() > TOL_ALG {
        return Err(Error::NotSymmetric { residual: residuals.max() });
    }
    Ok(SymmetricPair { g, h, p1, residuals })
}

/// Residuals of the ideal conditions on `h = k ⊕ p2`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SplitResiduals {
    pub k_in_h: f64,
    pub k_k: f64,
    pub p2_p2: f64,
    pub k_p2: f64,
}

impl SplitResiduals {
    pub fn max(&self) -> f64 {
        self.k_in_h.max(self.k_k).max(self.p2_p2).max(self.k_p2)
    }
}

/// `h = k ⊕ p2` as ideals, with `q = p1 ⊕ p2`.
#[derive(Clone, Debug)]
pub struct BundleSplit {
    pair: SymmetricPair,
    k: Subspace,
    p2: Subspace,
    q: Subspace,
    residuals: SplitResiduals,
}

impl BundleSplit {
    pub fn pair(&self) -> &SymmetricPair {
        &self.pair
    }

    pub fn g(&self) -> &LieAlgebra {
        self.pair.g()
    }

    pub fn k(&self) -> &Subspace {
        &self.k
    }

    pub fn p2(&self) -> &Subspace {
        &self.p2
    }

    /// Onb columns are those of `p1` followed by those of `p2`.
    pub fn q(&self) -> &Subspace {
        &self.q
    }

    pub fn residuals(&self) -> &SplitResiduals {
        &self.residuals
    }

    /// Projection to `q` along `k`, in `q` onb coordinates.
    pub fn q_coords(&self, v: &DVector<f64>) -> DVector<f64> {
        self.q.coords(v)
    }

    /// `ad(x)` restricted to `q` and projected back to `q`.
    pub fn ad_on_q(&self, x: &DVector<f64>) -> DMatrix<f64> {
        let g = self.g();
        let cols: Vec<_> = self.q.vectors().iter().map(|y| self.q.coords(&g.bracket_coords(x, y))).collect();
        linalg::columns_matrix(self.q.dim(), &cols)
    }
}

pub fn split_isotropy(pair: &SymmetricPair, k_generators: &[DVector<f64>]) -> Result<BundleSplit> {
    let g = pair.g();
    check_generators(g, k_generators)?;
    let k = closure(g, k_generators);
    let k_in_h = pair.h.containment_residual(&k);
    if k_in_h > TOL_ALG {
        return Err(Error::NotContained { residual: k_in_h });
    }
    let p2 = orthogonal_complement(&k, &pair.h)?;
    let residuals = SplitResiduals {
        k_in_h,
        k_k: bracket_containment(g, &k, &k, &k),
        p2_p2: bracket_containment(g, &p2, &p2, &p2),
        k_p2: bracket_norm(g, &k, &p2),
    };
    if residuals.max() > TOL_ALG {
        return Err(Error::NotIdeal { residual: residuals.max() });
    }
    let q = pair.p1.orthogonal_sum(&p2)?;
    Ok(BundleSplit { pair: pair.clone(), k, p2, q, residuals })
}

fn check_s(s: f64) -> Result<()> {
    if s.is_finite() && s > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidDeformation(s))
    }
}

/// `g_s = g|p1 + s² g|p2` on `q`, and its transport to `q̄`.
#[derive(Clone, Debug)]
pub struct MetricGs {
    s: f64,
    /// In `q` onb coordinates (`p1` block first).
    gram_q: DMatrix<f64>,
    /// In the model basis of `q̄`: `p1` onb, then `embed2` of the `p2` onb.
    gram_qbar: DMatrix<f64>,
    pullback_residual: f64,
}

impl MetricGs {
    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn gram_q(&self) -> &DMatrix<f64> {
        &self.gram_q
    }

    pub fn gram_qbar(&self) -> &DMatrix<f64> {
        &self.gram_qbar
    }

    pub fn form_q(&self) -> Form {
        Form::gram(self.gram_q.clone())
    }

    /// Max-abs discrepancy between `gram_qbar` and `gram_q` under the model
    /// isomorphism.
    pub fn pullback_residual(&self) -> f64 {
        self.pullback_residual
    }

    pub fn is_positive_definite(&self) -> bool {
        self.gram_q.clone().cholesky().is_some() && self.gram_qbar.clone().cholesky().is_some()
    }
}

pub fn metric_gs(split: &BundleSplit, s: f64) -> Result<MetricGs> {
    check_s(s)?;
    let g = split.g();
    let (p1, p2) = (split.pair.p1(), split.p2());
    let q = split.q();
    let s2 = s * s;
    let gram_q = DMatrix::from_fn(q.dim(), q.dim(), |i, j| {
        let (u, v) = (q.vector(i), q.vector(j));
        g.inner(&p1.project(&u), &p1.project(&v)) + s2 * g.inner(&p2.project(&u), &p2.project(&v))
    });
    let (d1, d2) = (p1.dim(), p2.dim());
    let mut gram_qbar = DMatrix::zeros(d1 + d2, d1 + d2);
    for i in 0..d1 {
        for j in 0..d1 {
            gram_qbar[(i, j)] = g.inner(&p1.vector(i), &p1.vector(j));
        }
    }
    for i in 0..d2 {
        for j in 0..d2 {
            gram_qbar[(d1 + i, d1 + j)] = s2 * g.inner(&p2.vector(i), &p2.vector(j));
        }
    }
    let pullback_residual = (&gram_qbar - &gram_q).amax();
    if pullback_residual > TOL_LIN {
        return Err(Error::FormMismatch);
    }
    Ok(MetricGs { s, gram_q, gram_qbar, pullback_residual })
}

/// Residuals of the reductive structure of `ḡ = k̄ ⊕ q̄`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct BarResiduals {
    pub kbar_closed: f64,
    pub reductive: f64,
}

/// The model `ḡ = g ⊕ p2ᶜ`, where `p2ᶜ` is a copy of `p2` carrying `h/k`.
///
/// Coordinates on `ḡ` are the coordinates of `g` followed by the `p2` onb
/// coordinates of the copy. The designated form `Q_s` makes `k̄ ⟂ q̄`,
/// restricts to the invariant form on `k̄` and to `g_s` on `q̄`.
#[derive(Clone, Debug)]
pub struct BarModel {
    split: BundleSplit,
    s: f64,
    metric: MetricGs,
    gbar: LieAlgebra,
    kbar: Subspace,
    qbar: Subspace,
    /// `q̄` model basis: lifted `p1` onb, then `embed2` of the `p2` onb.
    qbar_model: DMatrix<f64>,
    form: Form,
    residuals: BarResiduals,
}

impl BarModel {
    pub fn split(&self) -> &BundleSplit {
        &self.split
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn metric(&self) -> &MetricGs {
        &self.metric
    }

    pub fn gbar(&self) -> &LieAlgebra {
        &self.gbar
    }

    pub fn kbar(&self) -> &Subspace {
        &self.kbar
    }

    /// Onb for `Q_s`; the `p2` part is `embed2 / s` of the `p2` onb.
    pub fn qbar(&self) -> &Subspace {
        &self.qbar
    }

    pub fn qbar_model(&self) -> &DMatrix<f64> {
        &self.qbar_model
    }

    pub fn form(&self) -> &Form {
        &self.form
    }

    pub fn residuals(&self) -> &BarResiduals {
        &self.residuals
    }

    fn dim_g(&self) -> usize {
        self.split.g().dim()
    }

    /// `(x, 0)`.
    pub fn lift_g(&self, x: &DVector<f64>) -> DVector<f64> {
        let mut v = DVector::zeros(self.gbar.dim());
        v.rows_mut(0, x.len()).copy_from(x);
        v
    }

    /// `(0, y)` with `y` in `p2` onb coordinates.
    pub fn lift_c(&self, y: &DVector<f64>) -> DVector<f64> {
        let mut v = DVector::zeros(self.gbar.dim());
        v.rows_mut(self.dim_g(), y.len()).copy_from(y);
        v
    }

    /// `X ↦ (s²X, (s²−1)X)` for `X ∈ p2` given in `g` coordinates.
    pub fn embed2(&self, x: &DVector<f64>) -> DVector<f64> {
        let s2 = self.s * self.s;
        let c = self.split.p2().coords(x);
        self.lift_g(&(x * s2)) + self.lift_c(&(c * (s2 - 1.0)))
    }

    /// `(X, X)` for `X ∈ p2`: the diagonal copy inside `k̄`.
    pub fn diagonal(&self, x: &DVector<f64>) -> DVector<f64> {
        let c = self.split.p2().coords(x);
        self.lift_g(x) + self.lift_c(&c)
    }

    /// Component in `q̄` along `k̄`.
    pub fn project_qbar(&self, v: &DVector<f64>) -> DVector<f64> {
        self.qbar.project(v)
    }

    /// `(X_k̄, X_q̄)` with `X = X_k̄ + X_q̄`.
    pub fn decompose(&self, v: &DVector<f64>) -> (DVector<f64>, DVector<f64>) {
        let xq = self.qbar.project(v);
        (v - &xq, xq)
    }

    pub fn bracket(&self, x: &DVector<f64>, y: &DVector<f64>) -> DVector<f64> {
        self.gbar.bracket_coords(x, y)
    }
}

pub fn build_bar_model(split: &BundleSplit, s: f64) -> Result<BarModel> {
    check_s(s)?;
    let metric = metric_gs(split, s)?;
    let g = split.g();
    let p2_alg = g.subalgebra(split.p2(), "h/k")?;
    let gbar = g.direct_sum(&p2_alg);
    let (dg, dbar) = (g.dim(), gbar.dim());
    let s2 = s * s;
    let pad = |x: &DVector<f64>, y: Option<(usize, f64)>| {
        let mut v = DVector::zeros(dbar);
        v.rows_mut(0, dg).copy_from(x);
        if let Some((j, c)) = y {
            v[dg + j] = c;
        }
        v
    };
    let mut kbar_vecs: Vec<_> = split.k().vectors().iter().map(|x| pad(x, None)).collect();
    kbar_vecs.extend(split.p2().vectors().iter().enumerate().map(|(j, x)| pad(x, Some((j, 1.0)))));
    let mut model: Vec<_> = split.pair().p1().vectors().iter().map(|x| pad(x, None)).collect();
    model.extend(split.p2().vectors().iter().enumerate().map(|(j, x)| pad(&(x * s2), Some((j, s2 - 1.0)))));

    let kb = linalg::columns_matrix(dbar, &kbar_vecs);
    let qm = linalg::columns_matrix(dbar, &model);
    let (dk, dq) = (kb.ncols(), qm.ncols());
    if dk + dq != dbar {
        return Err(Error::DimensionMismatch { expected: dbar, got: dk + dq });
    }
    let mut t = DMatrix::zeros(dbar, dbar);
    t.columns_mut(0, dk).copy_from(&kb);
    t.columns_mut(dk, dq).copy_from(&qm);
    let t_inv = t.try_inverse().ok_or(Error::DependentBasis)?;
    let mut blocks = DMatrix::zeros(dbar, dbar);
    blocks.view_mut((0, 0), (dk, dk)).copy_from(&(kb.transpose() * gbar.gram() * &kb));
    blocks.view_mut((dk, dk), (dq, dq)).copy_from(metric.gram_qbar());
    let q = t_inv.transpose() * blocks * &t_inv;
    let form = Form::gram((&q + q.transpose()) * 0.5);

    let kbar = Subspace::gram_schmidt(&kbar_vecs, form.clone());
    let qbar = Subspace::gram_schmidt(&model, form.clone());
    if kbar.dim() != dk || qbar.dim() != dq {
        return Err(Error::DependentBasis);
    }
    let residuals = BarResiduals {
        kbar_closed: bracket_containment(&gbar, &kbar, &kbar, &kbar),
        reductive: bracket_containment(&gbar, &kbar, &qbar, &qbar),
    };
    let worst = residuals.kbar_closed.max(residuals.reductive);
    if worst > TOL_ALG {
        return Err(Error::NotReductive { residual: worst });
    }
    Ok(BarModel { split: split.clone(), s, metric, gbar, kbar, qbar, qbar_model: qm, form, residuals })
}

/// Worst discrepancies between the closed-form brackets and the generic
/// `ḡ` bracket followed by projection to `q̄`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct BracketFormulaReport {
    /// `ad(X)Y` with `X = X0 + (X2, X2) ∈ k̄`, `Y ∈ q̄`.
    pub kbar_action: f64,
    /// `[X1, Y]_q̄`.
    pub p1_bracket: f64,
    /// `[Z, Y]_q̄` with `Z = embed2(X2)`.
    pub p2_bracket: f64,
    pub samples: usize,
}

impl BracketFormulaReport {
    pub fn max(&self) -> f64 {
        self.kbar_action.max(self.p1_bracket).max(self.p2_bracket)
    }
}

pub fn bracket_formula_check<R: Rng + ?Sized>(bar: &BarModel, samples: usize, rng: &mut R) -> BracketFormulaReport {
    let split = bar.split();
    let g = split.g();
    let (k, p1, p2) = (split.k(), split.pair().p1(), split.p2());
    let s2 = bar.s() * bar.s();
    let norm = |v: DVector<f64>| bar.form().norm(&v);
    let mut report = BracketFormulaReport { samples, ..Default::default() };
    for _ in 0..samples {
        let x0 = k.random_vector(rng);
        let (x1, y1) = (p1.random_vector(rng), p1.random_vector(rng));
        let (x2, y2) = (p2.random_vector(rng), p2.random_vector(rng));
        let y = bar.lift_g(&y1) + bar.embed2(&y2);

        let x = bar.lift_g(&x0) + bar.diagonal(&x2);
        let generic = bar.bracket(&x, &y);
        let x2y2 = g.bracket_coords(&x2, &y2);
        let closed = bar.lift_g(&(g.bracket_coords(&x0, &y1) + g.bracket_coords(&x2, &y1))) + bar.embed2(&x2y2);
        report.kbar_action = report.kbar_action.max(norm(generic - closed));

        let generic = bar.project_qbar(&bar.bracket(&bar.lift_g(&x1), &y));
        let closed = bar.lift_g(&(g.bracket_coords(&x1, &y2) * s2)) + bar.embed2(&p2.project(&g.bracket_coords(&x1, &y1)));
        report.p1_bracket = report.p1_bracket.max(norm(generic - closed));

        let z = bar.embed2(&x2);
        let generic = bar.project_qbar(&bar.bracket(&z, &y));
        let closed = bar.lift_g(&(g.bracket_coords(&x2, &y1) * s2)) + bar.embed2(&(x2y2 * (2.0 * s2 - 1.0)));
        report.p2_bracket = report.p2_bracket.max(norm(generic - closed));
    }
    report
}
