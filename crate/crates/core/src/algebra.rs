//! Compact classical Lie algebras as real matrix algebras.
//!
//! Complex matrices are encoded as real `2n×2n` blocks
//! `A + iB ↦ [[A, −B], [B, A]]`, so `su(n)` lives in `2n×2n` real matrices
//! and `sp(n) ⊂ su(2n)` in `4n×4n`. The invariant inner product is
//! `g(X, Y) = −c·tr(XY)` on the real encoding, with `c` fixed so that the
//! first raw generator has unit norm. Bases are orthonormalized for `g`.

use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg::{self, Form, TOL_LIN, TOL_RANK};
use crate::subspace::Subspace;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Su,
    So,
    Sp,
}

impl Family {
    pub fn min_n(self) -> usize {
        match self {
            Family::Su | Family::Sp => 2,
            Family::So => 3,
        }
    }

    pub fn dim(self, n: usize) -> usize {
        match self {
            Family::Su => n * n - 1,
            Family::So => n * (n - 1) / 2,
            Family::Sp => n * (2 * n + 1),
        }
    }

    /// Side length of the real matrices realizing the family.
    pub fn matrix_size(self, n: usize) -> usize {
        match self {
            Family::Su => 2 * n,
            Family::So => n,
            Family::Sp => 4 * n,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Su => "su",
            Family::So => "so",
            Family::Sp => "sp",
        })
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "su" => Ok(Family::Su),
            "so" => Ok(Family::So),
            "sp" => Ok(Family::Sp),
            other => Err(Error::UnsupportedFamily(other.to_string())),
        }
    }
}

/// A complex matrix as a pair of real matrices.
#[derive(Clone, Debug)]
pub(crate) struct CMat {
    pub re: DMatrix<f64>,
    pub im: DMatrix<f64>,
}

impl CMat {
    pub fn zeros(n: usize) -> Self {
        CMat { re: DMatrix::zeros(n, n), im: DMatrix::zeros(n, n) }
    }

    /// Real `2n×2n` encoding.
    pub fn encode(&self) -> DMatrix<f64> {
        let n = self.re.nrows();
        let mut m = DMatrix::zeros(2 * n, 2 * n);
        m.view_mut((0, 0), (n, n)).copy_from(&self.re);
        m.view_mut((0, n), (n, n)).copy_from(&(-&self.im));
        m.view_mut((n, 0), (n, n)).copy_from(&self.im);
        m.view_mut((n, n), (n, n)).copy_from(&self.re);
        m
    }

    /// Copies `self` into the square block starting at `offset` of an
    /// `n×n` zero matrix.
    pub fn placed(&self, n: usize, offset: usize) -> Self {
        let k = self.re.nrows();
        let mut out = CMat::zeros(n);
        out.re.view_mut((offset, offset), (k, k)).copy_from(&self.re);
        out.im.view_mut((offset, offset), (k, k)).copy_from(&self.im);
        out
    }
}

pub(crate) fn unit(n: usize, i: usize, j: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(n, n);
    m[(i, j)] = 1.0;
    m
}

/// `E_ij − E_ji`.
pub(crate) fn rotation(n: usize, i: usize, j: usize) -> DMatrix<f64> {
    unit(n, i, j) - unit(n, j, i)
}

pub(crate) fn so_raw(n: usize) -> Vec<DMatrix<f64>> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            out.push(rotation(n, i, j));
        }
    }
    out
}

/// Off-diagonal generators of `u(n)` shared by `su(n)` and `u(n)`.
fn u_offdiag_raw(n: usize) -> Vec<CMat> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            out.push(CMat { re: rotation(n, i, j), im: DMatrix::zeros(n, n) });
            out.push(CMat { re: DMatrix::zeros(n, n), im: unit(n, i, j) + unit(n, j, i) });
        }
    }
    out
}

pub(crate) fn su_raw(n: usize) -> Vec<CMat> {
    let mut out = u_offdiag_raw(n);
    out.extend(su_diagonal_raw(n));
    out
}

/// `i(E_jj − E_{j+1,j+1})`, spanning the diagonal torus of `su(n)`.
pub(crate) fn su_diagonal_raw(n: usize) -> Vec<CMat> {
    (0..n.saturating_sub(1))
        .map(|j| CMat { re: DMatrix::zeros(n, n), im: unit(n, j, j) - unit(n, j + 1, j + 1) })
        .collect()
}

pub(crate) fn u_raw(n: usize) -> Vec<CMat> {
    let mut out = u_offdiag_raw(n);
    out.extend((0..n).map(|j| CMat { re: DMatrix::zeros(n, n), im: unit(n, j, j) }));
    out
}

/// The quaternionic matrix `[[A, −B̄], [B, Ā]]` in `u(2n)`.
pub(crate) fn sp_element(a: &CMat, b: &CMat) -> CMat {
    let n = a.re.nrows();
    let mut z = CMat::zeros(2 * n);
    let blocks = [((0, 0), a.re.clone(), a.im.clone()), ((0, n), -&b.re, b.im.clone()), ((n, 0), b.re.clone(), b.im.clone()), ((n, n), a.re.clone(), -&a.im)];
    for ((r, c), re, im) in blocks {
        z.re.view_mut((r, c), (n, n)).copy_from(&re);
        z.im.view_mut((r, c), (n, n)).copy_from(&im);
    }
    z
}

/// Complex symmetric generators `S` and `iS`.
fn sym_raw(n: usize) -> Vec<CMat> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in i..n {
            let s = if i == j { unit(n, i, i) } else { unit(n, i, j) + unit(n, j, i) };
            out.push(CMat { re: s.clone(), im: DMatrix::zeros(n, n) });
            out.push(CMat { re: DMatrix::zeros(n, n), im: s });
        }
    }
    out
}

/// Raw `sp(n)` generators as complex `2n×2n` matrices. `support` restricts
/// the quaternionic indices used, which realizes `sp(p) ⊕ sp(q)` blocks.
pub(crate) fn sp_raw_on(n: usize, support: Range<usize>) -> Vec<CMat> {
    let k = support.len();
    let zero = CMat::zeros(k);
    let place = |m: &CMat| m.placed(n, support.start);
    let mut out: Vec<CMat> =
        u_raw(k).iter().map(|a| sp_element(&place(a), &place(&zero))).collect();
    out.extend(sym_raw(k).iter().map(|b| sp_element(&place(&zero), &place(b))));
    out
}

fn raw_generators(family: Family, n: usize) -> Vec<DMatrix<f64>> {
    match family {
        Family::So => so_raw(n),
        Family::Su => su_raw(n).iter().map(CMat::encode).collect(),
        Family::Sp => sp_raw_on(n, 0..n).iter().map(CMat::encode).collect(),
    }
}

/// One simple (or abelian) block of a direct sum.
#[derive(Clone, Debug)]
pub struct Summand {
    pub label: String,
    pub kind: Option<(Family, usize)>,
    pub coords: Range<usize>,
    pub matrix_offset: usize,
    pub matrix_size: usize,
    /// `c` in `g = −c·tr(XY)`, when the summand was built from raw matrices.
    pub trace_scale: Option<f64>,
}

/// A real matrix Lie algebra with structure constants and an invariant
/// inner product.
#[derive(Clone, Debug)]
pub struct LieAlgebra {
    label: String,
    matrix_size: usize,
    basis: Vec<DMatrix<f64>>,
    /// `ad[i]` is the matrix of `ad(e_i)` in coordinates:
    /// `ad[i][(k, j)] = c[i][j][k]`.
    ad: Vec<DMatrix<f64>>,
    form: Form,
    /// Inverse Frobenius Gram matrix of the basis, used for expansion.
    frob_inv: DMatrix<f64>,
    summands: Vec<Summand>,
}

fn neg_trace_product(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    -a.component_mul(&b.transpose()).sum()
}

fn frobenius_inverse(basis: &[DMatrix<f64>]) -> Result<DMatrix<f64>> {
    let d = basis.len();
    let f = DMatrix::from_fn(d, d, |i, j| basis[i].dot(&basis[j]));
    if d == 0 {
        return Ok(f);
    }
    f.cholesky().map(|c| c.inverse()).ok_or(Error::DependentBasis)
}

pub fn build_classical(family: Family, n: usize) -> Result<LieAlgebra> {
    if n < family.min_n() {
        return Err(Error::RankTooSmall { family: family.to_string(), n, min: family.min_n() });
    }
    let raw = raw_generators(family, n);
    let label = format!("{family}({n})");
    let mut alg = LieAlgebra::from_raw(&label, raw)?;
    alg.summands[0].kind = Some((family, n));
    Ok(alg)
}

impl LieAlgebra {
    /// Orthonormalizes `raw` for `g = −c·tr(XY)` and computes structure
    /// constants. Fails when the span is not closed under the commutator.
    pub fn from_raw(label: &str, raw: Vec<DMatrix<f64>>) -> Result<Self> {
        let first = raw.first().ok_or(Error::DependentBasis)?;
        let size = first.nrows();
        let scale = 1.0 / neg_trace_product(first, first);
        if !scale.is_finite() || scale <= 0.0 {
            return Err(Error::DependentBasis);
        }
        let inner = |a: &DMatrix<f64>, b: &DMatrix<f64>| scale * neg_trace_product(a, b);

        let mut basis: Vec<DMatrix<f64>> = Vec::with_capacity(raw.len());
        for r in raw {
            let norm0 = inner(&r, &r).sqrt();
            let mut v = r;
            for _ in 0..2 {
                for b in &basis {
                    let c = inner(b, &v);
                    v -= b * c;
                }
            }
            let norm = inner(&v, &v).max(0.0).sqrt();
            if norm <= TOL_RANK * norm0 {
                return Err(Error::DependentBasis);
            }
            basis.push(v / norm);
        }
        let d = basis.len();
        let gram = DMatrix::from_fn(d, d, |i, j| inner(&basis[i], &basis[j]));
        let frob_inv = frobenius_inverse(&basis)?;
        let summand = Summand {
            label: label.to_string(),
            kind: None,
            coords: 0..d,
            matrix_offset: 0,
            matrix_size: size,
            trace_scale: Some(scale),
        };
        let mut alg = LieAlgebra {
            label: label.to_string(),
            matrix_size: size,
            basis,
            ad: Vec::new(),
            form: Form::gram(gram),
            frob_inv,
            summands: vec![summand],
        };
        alg.ad = alg.structure_from_matrices()?;
        Ok(alg)
    }

    fn structure_from_matrices(&self) -> Result<Vec<DMatrix<f64>>> {
        let d = self.dim();
        let mut ad = vec![DMatrix::zeros(d, d); d];
        for i in 0..d {
            for j in i + 1..d {
                let c = self.expand(&linalg::commutator(&self.basis[i], &self.basis[j]))?;
                for k in 0..d {
                    ad[i][(k, j)] = c[k];
                    ad[j][(k, i)] = -c[k];
                }
            }
        }
        Ok(ad)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn matrix_size(&self) -> usize {
        self.matrix_size
    }

    pub fn basis_matrix(&self, i: usize) -> &DMatrix<f64> {
        &self.basis[i]
    }

    pub fn summands(&self) -> &[Summand] {
        &self.summands
    }

    /// The Ad-invariant inner product.
    pub fn form(&self) -> &Form {
        &self.form
    }

    pub fn gram(&self) -> DMatrix<f64> {
        self.form.matrix()
    }

    /// Structure constant `c_ij^k` with `[e_i, e_j] = Σ_k c_ij^k e_k`.
    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> f64 {
        self.ad[i][(k, j)]
    }

    pub fn unit_vector(&self, i: usize) -> DVector<f64> {
        DVector::from_fn(self.dim(), |j, _| if i == j { 1.0 } else { 0.0 })
    }

    pub fn realize(&self, coords: &DVector<f64>) -> DMatrix<f64> {
        assert_eq!(coords.len(), self.dim(), "coordinate vector length");
        coords
            .iter()
            .zip(&self.basis)
            .fold(DMatrix::zeros(self.matrix_size, self.matrix_size), |acc, (&c, b)| acc + b * c)
    }

    /// Coordinates of a matrix in the basis; fails if the matrix is not in
    /// the span (relative Frobenius residual above `TOL_LIN`).
    pub fn expand(&self, m: &DMatrix<f64>) -> Result<DVector<f64>> {
        if m.nrows() != self.matrix_size || m.ncols() != self.matrix_size {
            return Err(Error::DimensionMismatch { expected: self.matrix_size, got: m.nrows() });
        }
        let rhs = DVector::from_fn(self.dim(), |k, _| self.basis[k].dot(m));
        let coords = &self.frob_inv * rhs;
        let residual = (m - self.realize(&coords)).norm() / m.norm().max(1.0);
        if residual > TOL_LIN {
            return Err(Error::ExpansionResidual { residual });
        }
        Ok(coords)
    }

    /// `[x, y]` through the structure constants.
    pub fn bracket_coords(&self, x: &DVector<f64>, y: &DVector<f64>) -> DVector<f64> {
        let mut out = DVector::zeros(self.dim());
        for (i, &xi) in x.iter().enumerate() {
            if xi != 0.0 {
                out.gemv(xi, &self.ad[i], y, 1.0);
            }
        }
        out
    }

    /// Matrix of `ad(x)` in coordinates.
    pub fn ad(&self, x: &DVector<f64>) -> DMatrix<f64> {
        x.iter()
            .zip(&self.ad)
            .fold(DMatrix::zeros(self.dim(), self.dim()), |acc, (&c, a)| acc + a * c)
    }

    pub fn ad_basis(&self, i: usize) -> &DMatrix<f64> {
        &self.ad[i]
    }

    pub fn inner(&self, x: &DVector<f64>, y: &DVector<f64>) -> f64 {
        self.form.inner(x, y)
    }

    pub fn element(&self, coords: DVector<f64>) -> Result<AlgebraElement<'_>> {
        if coords.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: coords.len() });
        }
        Ok(AlgebraElement { coords, ambient: self })
    }

    pub fn element_from_matrix(&self, m: &DMatrix<f64>) -> Result<AlgebraElement<'_>> {
        self.element(self.expand(m)?)
    }

    pub fn full(&self) -> Subspace {
        Subspace::full(self.form.clone())
    }

    pub fn span(&self, vectors: &[DVector<f64>]) -> Subspace {
        Subspace::from_spanning(vectors, self.form.clone())
    }

    /// Max over basis triples of `‖[[X,Y],Z] + [[Y,Z],X] + [[Z,X],Y]‖`.
    pub fn jacobi_residual(&self) -> f64 {
        let d = self.dim();
        let e: Vec<_> = (0..d).map(|i| self.unit_vector(i)).collect();
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in i + 1..d {
                let xy = self.bracket_coords(&e[i], &e[j]);
                for k in j + 1..d {
                    let yz = self.bracket_coords(&e[j], &e[k]);
                    let zx = self.bracket_coords(&e[k], &e[i]);
                    let r = self.bracket_coords(&xy, &e[k])
                        + self.bracket_coords(&yz, &e[i])
                        + self.bracket_coords(&zx, &e[j]);
                    worst = worst.max(self.form.norm(&r));
                }
            }
        }
        worst
    }

    /// Max over basis triples of `|g([Z,X],Y) + g(X,[Z,Y])|`.
    pub fn ad_invariance_residual(&self) -> f64 {
        let g = self.gram();
        self.ad.iter().map(|a| linalg::skew_residual(a, &g)).fold(0.0, f64::max)
    }

    /// Block-diagonal direct sum with componentwise bracket.
    pub fn direct_sum(&self, other: &LieAlgebra) -> LieAlgebra {
        let (d1, d2) = (self.dim(), other.dim());
        let (n1, n2) = (self.matrix_size, other.matrix_size);
        let n = n1 + n2;
        let mut basis = Vec::with_capacity(d1 + d2);
        for b in &self.basis {
            let mut m = DMatrix::zeros(n, n);
            m.view_mut((0, 0), (n1, n1)).copy_from(b);
            basis.push(m);
        }
        for b in &other.basis {
            let mut m = DMatrix::zeros(n, n);
            m.view_mut((n1, n1), (n2, n2)).copy_from(b);
            basis.push(m);
        }
        let block = |a: &DMatrix<f64>, b: &DMatrix<f64>| {
            let mut m = DMatrix::zeros(d1 + d2, d1 + d2);
            m.view_mut((0, 0), (d1, d1)).copy_from(a);
            m.view_mut((d1, d1), (d2, d2)).copy_from(b);
            m
        };
        let mut ad = Vec::with_capacity(d1 + d2);
        for a in &self.ad {
            ad.push(block(a, &DMatrix::zeros(d2, d2)));
        }
        for a in &other.ad {
            ad.push(block(&DMatrix::zeros(d1, d1), a));
        }
        let mut summands = self.summands.clone();
        summands.extend(other.summands.iter().map(|s| Summand {
            coords: s.coords.start + d1..s.coords.end + d1,
            matrix_offset: s.matrix_offset + n1,
            ..s.clone()
        }));
        LieAlgebra {
            label: format!("{} + {}", self.label, other.label),
            matrix_size: n,
            basis,
            ad,
            form: Form::gram(block(&self.gram(), &other.gram())),
            frob_inv: block(&self.frob_inv, &other.frob_inv),
            summands,
        }
    }

    /// The subalgebra spanned by `sub` (given in this algebra's
    /// coordinates), with the restricted inner product.
    pub fn subalgebra(&self, sub: &Subspace, label: &str) -> Result<LieAlgebra> {
        let basis: Vec<_> = sub.vectors().iter().map(|v| self.realize(v)).collect();
        let d = basis.len();
        let restricted = Subspace::from_onb(sub.onb().clone(), sub.form().clone());
        let mut ad = vec![DMatrix::zeros(d, d); d];
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in i + 1..d {
                let b = self.bracket_coords(&sub.vector(i), &sub.vector(j));
                worst = worst.max(restricted.distance(&b));
                let c = restricted.coords(&b);
                for k in 0..d {
                    ad[i][(k, j)] = c[k];
                    ad[j][(k, i)] = -c[k];
                }
            }
        }
        if worst > crate::linalg::TOL_ALG {
            return Err(Error::NotSubalgebra { residual: worst });
        }
        let g = self.gram();
        let gram = sub.onb().transpose() * &g * sub.onb();
        Ok(LieAlgebra {
            label: label.to_string(),
            matrix_size: self.matrix_size,
            frob_inv: frobenius_inverse(&basis)?,
            basis,
            ad,
            form: Form::gram(gram),
            summands: vec![Summand {
                label: label.to_string(),
                kind: None,
                coords: 0..d,
                matrix_offset: 0,
                matrix_size: self.matrix_size,
                trace_scale: None,
            }],
        })
    }

    /// Zero-pads a summand-sized matrix into the full realization.
    pub fn embed_in_summand(&self, summand: usize, m: &DMatrix<f64>) -> DMatrix<f64> {
        let s = &self.summands[summand];
        let mut out = DMatrix::zeros(self.matrix_size, self.matrix_size);
        out.view_mut((s.matrix_offset, s.matrix_offset), (s.matrix_size, s.matrix_size)).copy_from(m);
        out
    }

    /// Human-readable record of the inner-product normalization.
    pub fn normalization(&self) -> String {
        self.summands
            .iter()
            .map(|s| match s.trace_scale {
                Some(c) => format!(
                    "{}: g(X,Y) = -{} tr(XY) on {}x{} real matrices",
                    s.label, c, s.matrix_size, s.matrix_size
                ),
                None => format!("{}: restricted form", s.label),
            })
            .collect::<Vec<_>>()
            .join("; ")
    }

    pub fn is_simple_classical(&self) -> bool {
        self.summands.len() == 1 && self.summands[0].kind.is_some()
    }
}

/// An element of a specific algebra.
#[derive(Clone, Debug)]
pub struct AlgebraElement<'a> {
    coords: DVector<f64>,
    ambient: &'a LieAlgebra,
}

impl<'a> AlgebraElement<'a> {
    pub fn coords(&self) -> &DVector<f64> {
        &self.coords
    }

    pub fn ambient(&self) -> &'a LieAlgebra {
        self.ambient
    }

    pub fn matrix(&self) -> DMatrix<f64> {
        self.ambient.realize(&self.coords)
    }
}

/// `[X, Y]` computed as the matrix commutator and re-expanded in the basis.
pub fn bracket<'a>(x: &AlgebraElement<'a>, y: &AlgebraElement<'a>) -> Result<AlgebraElement<'a>> {
    if !std::ptr::eq(x.ambient, y.ambient) {
        return Err(Error::AmbientMismatch);
    }
    let m = linalg::commutator(&x.matrix(), &y.matrix());
    x.ambient.element_from_matrix(&m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classical_dimensions() {
        assert_eq!(build_classical(Family::So, 5).unwrap().dim(), 10);
        assert_eq!(build_classical(Family::Su, 4).unwrap().dim(), 15);
        assert_eq!(build_classical(Family::Sp, 2).unwrap().dim(), 10);
        assert_eq!(build_classical(Family::Sp, 3).unwrap().dim(), 21);
    }

    #[test]
    fn rank_minimums_and_unknown_family() {
        assert!(matches!(build_classical(Family::So, 2), Err(Error::RankTooSmall { .. })));
        assert!(matches!(build_classical(Family::Su, 1), Err(Error::RankTooSmall { .. })));
        assert!(matches!("e6".parse::<Family>(), Err(Error::UnsupportedFamily(_))));
    }

    #[test]
    fn first_basis_vector_has_unit_norm_and_gram_is_identity() {
        for (f, n) in [(Family::Su, 3), (Family::So, 4), (Family::Sp, 2)] {
            let g = build_classical(f, n).unwrap();
            let gram = g.gram();
            assert!((gram[(0, 0)] - 1.0).abs() < 1e-14);
            assert!((gram - DMatrix::identity(g.dim(), g.dim())).amax() < 1e-12);
        }
    }

    #[test]
    fn basis_matrices_are_skew() {
        let g = build_classical(Family::Sp, 2).unwrap();
        for i in 0..g.dim() {
            let b = g.basis_matrix(i);
            assert!((b + b.transpose()).amax() < 1e-14);
        }
    }

    #[test]
    fn self_bracket_vanishes() {
        let g = build_classical(Family::So, 4).unwrap();
        let x = g.element(DVector::from_fn(6, |i, _| i as f64 - 2.5)).unwrap();
        let b = bracket(&x, &x).unwrap();
        assert!(b.coords().amax() < 1e-14);
    }

    #[test]
    fn diagonal_torus_commutes() {
        let g = build_classical(Family::Su, 3).unwrap();
        let t: Vec<_> = su_diagonal_raw(3).iter().map(|c| g.element_from_matrix(&c.encode()).unwrap()).collect();
        let b = bracket(&t[0], &t[1]).unwrap();
        assert!(b.coords().amax() < 1e-14);
    }

    #[test]
    fn bracket_rejects_foreign_ambient() {
        let a = build_classical(Family::So, 3).unwrap();
        let b = build_classical(Family::So, 3).unwrap();
        let x = a.element(a.unit_vector(0)).unwrap();
        let y = b.element(b.unit_vector(1)).unwrap();
        assert_eq!(bracket(&x, &y).unwrap_err(), Error::AmbientMismatch);
    }

    #[test]
    fn expansion_rejects_matrices_outside_the_algebra() {
        let g = build_classical(Family::So, 3).unwrap();
        assert!(matches!(g.expand(&DMatrix::identity(3, 3)), Err(Error::ExpansionResidual { .. })));
    }

    #[test]
    fn direct_sum_is_componentwise() {
        let a = build_classical(Family::Su, 2).unwrap();
        let s = a.direct_sum(&a);
        assert_eq!(s.dim(), 6);
        assert_eq!(s.summands().len(), 2);
        let x = s.unit_vector(0);
        let y = s.unit_vector(4);
        assert!(s.bracket_coords(&x, &y).amax() < 1e-15);
        assert!(s.jacobi_residual() < 1e-12);
    }

    #[test]
    fn normalization_records_trace_scale() {
        let g = build_classical(Family::So, 3).unwrap();
        assert!(g.normalization().contains("-0.5 tr(XY)"));
        let g = build_classical(Family::Su, 3).unwrap();
        assert!(g.normalization().contains("-0.25 tr(XY)"));
    }
}
