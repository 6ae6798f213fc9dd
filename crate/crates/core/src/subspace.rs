//! Subspaces with a designated inner product, bracket closures, joint
//! kernels and symmetric commutants.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{self, Form, TOL_ALG, TOL_RANK};

/// A subspace of coordinate space, stored as a basis orthonormal for `form`.
#[derive(Clone, Debug)]
pub struct Subspace {
    onb: DMatrix<f64>,
    form: Form,
}

impl Subspace {
    pub fn zero(form: Form) -> Self {
        let n = form.dim();
        Subspace { onb: DMatrix::zeros(n, 0), form }
    }

    pub fn full(form: Form) -> Self {
        let n = form.dim();
        let vectors: Vec<_> = (0..n).map(|i| DVector::from_fn(n, |j, _| (i == j) as u8 as f64)).collect();
        Self::gram_schmidt(&vectors, form)
    }

    /// Span of `vectors`, with the rank decided by singular values in
    /// form-orthonormal coordinates.
    pub fn from_spanning(vectors: &[DVector<f64>], form: Form) -> Self {
        let n = form.dim();
        if vectors.is_empty() {
            return Self::zero(form);
        }
        let v = linalg::columns_matrix(n, vectors);
        match &form {
            Form::Euclidean(_) => Subspace { onb: linalg::column_space(&v), form },
            Form::Gram(_) => {
                let l = form.cholesky_factor();
                let u = linalg::column_space(&(l.transpose() * v));
                let onb = l
                    .transpose()
                    .solve_upper_triangular(&u)
                    .expect("Cholesky factor is invertible");
                Subspace { onb, form }
            }
        }
    }

    /// Order-preserving modified Gram-Schmidt with re-orthogonalization.
    /// Vectors whose orthogonal part is negligible are dropped.
    pub fn gram_schmidt(vectors: &[DVector<f64>], form: Form) -> Self {
        let mut basis: Vec<DVector<f64>> = Vec::new();
        for v in vectors {
            let norm = form.norm(v);
            if norm == 0.0 {
                continue;
            }
            if let Some(u) = orthogonal_part(&basis, &form, v.clone(), TOL_RANK * norm) {
                basis.push(u);
            }
        }
        Subspace { onb: linalg::columns_matrix(form.dim(), &basis), form }
    }

    /// Wraps an already orthonormal basis; callers guarantee orthonormality.
    pub fn from_onb(onb: DMatrix<f64>, form: Form) -> Self {
        debug_assert_eq!(onb.nrows(), form.dim());
        Subspace { onb, form }
    }

    pub fn dim(&self) -> usize {
        self.onb.ncols()
    }

    pub fn ambient_dim(&self) -> usize {
        self.onb.nrows()
    }

    pub fn onb(&self) -> &DMatrix<f64> {
        &self.onb
    }

    pub fn form(&self) -> &Form {
        &self.form
    }

    pub fn vector(&self, i: usize) -> DVector<f64> {
        self.onb.column(i).into_owned()
    }

    pub fn vectors(&self) -> Vec<DVector<f64>> {
        (0..self.dim()).map(|i| self.vector(i)).collect()
    }

    /// Coordinates of the orthogonal projection of `v` in the onb.
    pub fn coords(&self, v: &DVector<f64>) -> DVector<f64> {
        self.onb.transpose() * self.form.apply(v)
    }

    /// Point with the given onb coordinates.
    pub fn point(&self, coords: &DVector<f64>) -> DVector<f64> {
        &self.onb * coords
    }

    pub fn project(&self, v: &DVector<f64>) -> DVector<f64> {
        self.point(&self.coords(v))
    }

    /// Form-norm of the component of `v` orthogonal to this subspace.
    pub fn distance(&self, v: &DVector<f64>) -> f64 {
        self.form.norm(&(v - self.project(v)))
    }

    /// Largest distance from `self` of a unit vector of `other`.
    pub fn containment_residual(&self, other: &Subspace) -> f64 {
        (0..other.dim()).map(|i| self.distance(&other.vector(i))).fold(0.0, f64::max)
    }

    pub fn contains(&self, other: &Subspace, tol: f64) -> bool {
        self.containment_residual(other) <= tol
    }

    /// Max-abs entry of `onbᵀ G onb − I`.
    pub fn orthonormality_residual(&self) -> f64 {
        let gram = self.onb.transpose() * self.form.apply_mat(&self.onb);
        (gram - DMatrix::identity(self.dim(), self.dim())).amax()
    }

    /// Mutual containment residual; zero iff the two subspaces coincide.
    pub fn equality_residual(&self, other: &Subspace) -> f64 {
        self.containment_residual(other).max(other.containment_residual(self))
    }

    /// Embeds a subspace given in this subspace's onb coordinates.
    pub fn lift(&self, inner: &Subspace) -> Subspace {
        Subspace { onb: &self.onb * inner.onb(), form: self.form.clone() }
    }

    /// Direct sum of mutually orthogonal subspaces (onb columns concatenated).
    pub fn orthogonal_sum(&self, other: &Subspace) -> Result<Subspace> {
        if !self.form.same(&other.form) {
            return Err(Error::FormMismatch);
        }
        let cross = (self.onb.transpose() * self.form.apply_mat(&other.onb)).amax();
        if cross > TOL_ALG {
            return Err(Error::NotContained { residual: cross });
        }
        let mut cols = self.vectors();
        cols.extend(other.vectors());
        Ok(Subspace { onb: linalg::columns_matrix(self.ambient_dim(), &cols), form: self.form.clone() })
    }

    /// Standard-normal combination of the onb vectors.
    pub fn random_vector<R: Rng + ?Sized>(&self, rng: &mut R) -> DVector<f64> {
        let c = DVector::from_fn(self.dim(), |_, _| rng.sample::<f64, _>(StandardNormal));
        self.point(&c)
    }

    /// Same subspace, re-orthonormalized for another form.
    pub fn with_form(&self, form: Form) -> Subspace {
        Subspace::gram_schmidt(&self.vectors(), form)
    }
}

fn orthogonal_part(
    basis: &[DVector<f64>],
    form: &Form,
    mut v: DVector<f64>,
    threshold: f64,
) -> Option<DVector<f64>> {
    for _ in 0..2 {
        for b in basis {
            let c = form.inner(b, &v);
            v.axpy(-c, b, 1.0);
        }
    }
    let r = form.norm(&v);
    if r > threshold {
        Some(v / r)
    } else {
        None
    }
}

/// Smallest subspace containing `seed` and closed under `mul`.
///
/// Products of basis elements are orthogonalized against the current span
/// and admitted when the orthogonal part exceeds `TOL_RANK` relative to the
/// larger of the product norm and the unit scale of the normalized seed.
/// Every pair is multiplied in both orders, so `mul` need not be
/// antisymmetric.
pub fn span_closure<F>(seed: &[DVector<f64>], form: &Form, mul: F) -> Subspace
where
    F: Fn(&DVector<f64>, &DVector<f64>) -> DVector<f64>,
{
    let mut basis: Vec<DVector<f64>> = Vec::new();
    let admit = |basis: &mut Vec<DVector<f64>>, v: DVector<f64>| {
        let norm = form.norm(&v);
        if let Some(u) = orthogonal_part(basis, form, v, TOL_RANK * norm.max(1.0)) {
            basis.push(u);
        }
    };
    for v in seed {
        let norm = form.norm(v);
        if norm > 0.0 {
            admit(&mut basis, v / norm);
        }
    }
    let mut i = 0;
    while i < basis.len() {
        let limit = form.dim();
        for j in 0..=i {
            if basis.len() >= limit {
                break;
            }
            let p = mul(&basis[i], &basis[j]);
            admit(&mut basis, p);
            if i != j && basis.len() < limit {
                let p = mul(&basis[j], &basis[i]);
                admit(&mut basis, p);
            }
        }
        i += 1;
    }
    Subspace { onb: linalg::columns_matrix(form.dim(), &basis), form: form.clone() }
}

/// Complement of `u` inside `within` with respect to their common form.
pub fn orthogonal_complement(u: &Subspace, within: &Subspace) -> Result<Subspace> {
    if !u.form.same(&within.form) {
        return Err(Error::FormMismatch);
    }
    let residual = within.containment_residual(u);
    if residual > TOL_ALG {
        return Err(Error::NotContained { residual });
    }
    if u.dim() == 0 {
        return Ok(within.clone());
    }
    // u in `within` coordinates; the complement is the kernel of its transpose.
    let c = within.onb.transpose() * within.form.apply_mat(&u.onb);
    let kernel = linalg::null_space(&c.transpose());
    Ok(Subspace { onb: &within.onb * kernel, form: within.form.clone() })
}

/// Intersection of two subspaces with a common form.
pub fn intersection(a: &Subspace, b: &Subspace) -> Result<Subspace> {
    if !a.form.same(&b.form) {
        return Err(Error::FormMismatch);
    }
    let n = a.ambient_dim();
    if a.dim() == 0 || b.dim() == 0 {
        return Ok(Subspace::zero(a.form.clone()));
    }
    // a·x = b·y  <=>  [A, −B] (x, y) = 0
    let mut stacked = DMatrix::zeros(n, a.dim() + b.dim());
    stacked.columns_mut(0, a.dim()).copy_from(&a.onb);
    stacked.columns_mut(a.dim(), b.dim()).copy_from(&(-&b.onb));
    let kernel = linalg::null_space(&stacked);
    let vectors: Vec<_> =
        (0..kernel.ncols()).map(|i| &a.onb * kernel.column(i).rows(0, a.dim())).collect();
    Ok(Subspace::from_spanning(&vectors, a.form.clone()))
}

/// A linear operator on a carrier, written in the carrier's onb coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearEndo {
    matrix: DMatrix<f64>,
}

impl LinearEndo {
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::DimensionMismatch { expected: matrix.nrows(), got: matrix.ncols() });
        }
        Ok(LinearEndo { matrix })
    }

    pub fn identity(n: usize) -> Self {
        LinearEndo { matrix: DMatrix::identity(n, n) }
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn carrier_dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn apply(&self, v: &DVector<f64>) -> DVector<f64> {
        &self.matrix * v
    }
}

/// Result of [`joint_kernel`].
#[derive(Clone, Debug)]
pub struct JointKernel {
    /// Kernel in carrier coordinates (Euclidean form).
    pub subspace: Subspace,
    /// Set when no operators were supplied and the kernel is the whole carrier.
    pub vacuous: bool,
}

/// Common null space of `ops` acting on a `carrier_dim`-dimensional carrier.
pub fn joint_kernel(ops: &[LinearEndo], carrier_dim: usize) -> Result<JointKernel> {
    let form = Form::Euclidean(carrier_dim);
    if ops.is_empty() {
        return Ok(JointKernel { subspace: Subspace::full(form), vacuous: true });
    }
    let mut stacked = DMatrix::zeros(ops.len() * carrier_dim, carrier_dim);
    for (i, op) in ops.iter().enumerate() {
        if op.carrier_dim() != carrier_dim {
            return Err(Error::DimensionMismatch { expected: carrier_dim, got: op.carrier_dim() });
        }
        stacked.rows_mut(i * carrier_dim, carrier_dim).copy_from(op.matrix());
    }
    let kernel = linalg::null_space(&stacked);
    Ok(JointKernel { subspace: Subspace::from_onb(kernel, form), vacuous: false })
}

/// Operators `M`, self-adjoint for `form`, commuting with every op.
#[derive(Clone, Debug)]
pub struct SymmetricCommutant {
    pub basis: Vec<DMatrix<f64>>,
}

impl SymmetricCommutant {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Solves `M A = A M` for all `A` in `ops` with `M = G⁻¹ S`, `S` symmetric.
pub fn symmetric_commutant(ops: &[LinearEndo], form: &DMatrix<f64>) -> Result<SymmetricCommutant> {
    let n = form.nrows();
    let g_inv = form
        .clone()
        .cholesky()
        .map(|c| c.inverse())
        .ok_or(Error::DimensionMismatch { expected: n, got: 0 })?;
    let sym_basis: Vec<DMatrix<f64>> = (0..n)
        .flat_map(|a| (a..n).map(move |b| (a, b)))
        .map(|(a, b)| {
            let mut s = DMatrix::zeros(n, n);
            s[(a, b)] = 1.0;
            s[(b, a)] = 1.0;
            s
        })
        .collect();
    let unknowns = sym_basis.len();
    if ops.is_empty() {
        return Ok(SymmetricCommutant { basis: sym_basis.iter().map(|s| &g_inv * s).collect() });
    }
    // S A − G A G⁻¹ S = 0 for every A.
    let mut system = DMatrix::zeros(ops.len() * n * n, unknowns);
    for (k, op) in ops.iter().enumerate() {
        if op.carrier_dim() != n {
            return Err(Error::DimensionMismatch { expected: n, got: op.carrier_dim() });
        }
        let a = op.matrix();
        let conj = form * a * &g_inv;
        for (col, s) in sym_basis.iter().enumerate() {
            let r = s * a - &conj * s;
            system.view_mut((k * n * n, col), (n * n, 1)).copy_from_slice(r.as_slice());
        }
    }
    let kernel = linalg::null_space(&system);
    let basis = (0..kernel.ncols())
        .map(|c| {
            let s = sym_basis
                .iter()
                .zip(kernel.column(c).iter())
                .fold(DMatrix::zeros(n, n), |acc, (b, &w)| acc + b * w);
            &g_inv * s
        })
        .collect();
    Ok(SymmetricCommutant { basis })
}

/// Spectral projectors of an operator `m` self-adjoint for `form`, grouping
/// eigenvalues closer than `gap`. Projectors are written in the same
/// coordinates as `m` and are `form`-orthogonal.
pub fn spectral_projectors(m: &DMatrix<f64>, form: &DMatrix<f64>, gap: f64) -> Vec<DMatrix<f64>> {
    let l = form.clone().cholesky().expect("positive definite form").l();
    let l_inv_t = l.transpose().try_inverse().expect("invertible factor");
    // In form-orthonormal coordinates y = Lᵀ x the operator is symmetric.
    let sym = l.transpose() * m * &l_inv_t;
    let sym = (&sym + sym.transpose()) * 0.5;
    let (eigenvalues, eigenvectors) = linalg::symmetric_eigen(&sym);
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for i in 0..eigenvalues.len() {
        match groups.last_mut() {
            Some(g) if (eigenvalues[i] - eigenvalues[*g.last().unwrap()]).abs() <= gap => g.push(i),
            _ => groups.push(vec![i]),
        }
    }
    groups
        .into_iter()
        .map(|g| {
            let n = m.nrows();
            let mut p = DMatrix::zeros(n, n);
            for i in g {
                let v = eigenvectors.column(i);
                p += v * v.transpose();
            }
            &l_inv_t * p * l.transpose()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(n: usize, i: usize) -> DVector<f64> {
        DVector::from_fn(n, |j, _| if i == j { 1.0 } else { 0.0 })
    }

    #[test]
    fn complement_of_everything_is_zero() {
        let f = Form::Euclidean(3);
        let full = Subspace::full(f.clone());
        assert_eq!(orthogonal_complement(&full, &full).unwrap().dim(), 0);
        let zero = Subspace::zero(f);
        assert_eq!(orthogonal_complement(&zero, &full).unwrap().dim(), 3);
    }

    #[test]
    fn complement_rejects_non_contained() {
        let f = Form::Euclidean(3);
        let line = Subspace::from_spanning(&[e(3, 0)], f.clone());
        let plane = Subspace::from_spanning(&[e(3, 1), e(3, 2)], f);
        assert!(matches!(orthogonal_complement(&line, &plane), Err(Error::NotContained { .. })));
    }

    #[test]
    fn complement_respects_gram_form() {
        let g = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 2.0]);
        let f = Form::gram(g);
        let full = Subspace::full(f.clone());
        let line = Subspace::from_spanning(&[e(2, 0)], f.clone());
        let comp = orthogonal_complement(&line, &full).unwrap();
        assert_eq!(comp.dim(), 1);
        assert!(f.inner(&line.vector(0), &comp.vector(0)).abs() < 1e-14);
        assert!(comp.orthonormality_residual() < 1e-14);
    }

    #[test]
    fn joint_kernel_edge_cases() {
        let k = joint_kernel(&[LinearEndo::identity(3)], 3).unwrap();
        assert_eq!(k.subspace.dim(), 0);
        assert!(!k.vacuous);
        let k = joint_kernel(&[], 3).unwrap();
        assert_eq!(k.subspace.dim(), 3);
        assert!(k.vacuous);
    }

    #[test]
    fn empty_commutant_is_all_symmetric_matrices() {
        let c = symmetric_commutant(&[], &DMatrix::identity(2, 2)).unwrap();
        assert_eq!(c.dim(), 3);
    }

    #[test]
    fn commutant_of_full_so_n_is_scalars() {
        let n = 4;
        let mut ops = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let mut m = DMatrix::zeros(n, n);
                m[(i, j)] = 1.0;
                m[(j, i)] = -1.0;
                ops.push(LinearEndo::new(m).unwrap());
            }
        }
        let c = symmetric_commutant(&ops, &DMatrix::identity(n, n)).unwrap();
        assert_eq!(c.dim(), 1);
        let m = &c.basis[0];
        assert!((m - DMatrix::identity(n, n) * m[(0, 0)]).amax() < 1e-12);
    }

    #[test]
    fn intersection_of_planes_is_a_line() {
        let f = Form::Euclidean(3);
        let a = Subspace::from_spanning(&[e(3, 0), e(3, 1)], f.clone());
        let b = Subspace::from_spanning(&[e(3, 1), e(3, 2)], f);
        let i = intersection(&a, &b).unwrap();
        assert_eq!(i.dim(), 1);
        assert!((i.vector(0)[1].abs() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn spectral_projectors_split_block_diagonal_operator() {
        let m = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 1.0, 3.0]));
        let ps = spectral_projectors(&m, &DMatrix::identity(3, 3), 1e-6);
        assert_eq!(ps.len(), 2);
        assert!((ps[0].trace() - 2.0).abs() < 1e-12);
        assert!((ps[1].trace() - 1.0).abs() < 1e-12);
    }
}
