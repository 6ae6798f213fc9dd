//! Inner-product forms and SVD-based rank decisions.
//!
//! Every rank decision in the crate goes through singular values with the
//! relative cut-off [`TOL_RANK`]; nothing relies on pivoted elimination.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

/// Tolerance for algebraic identities (Jacobi, invariance, containment).
pub const TOL_ALG: f64 = 1e-10;
/// Tolerance for orthonormality and expansion residuals.
pub const TOL_LIN: f64 = 1e-10;
/// Relative singular-value cut-off: `σ ≤ TOL_RANK · σ_max` counts as zero.
pub const TOL_RANK: f64 = 1e-8;

/// A symmetric positive-definite bilinear form on coordinate space.
#[derive(Clone, Debug)]
pub enum Form {
    Euclidean(usize),
    Gram(Arc<DMatrix<f64>>),
}

impl Form {
    pub fn gram(matrix: DMatrix<f64>) -> Self {
        Form::Gram(Arc::new(matrix))
    }

    pub fn dim(&self) -> usize {
        match self {
            Form::Euclidean(n) => *n,
            Form::Gram(g) => g.nrows(),
        }
    }

    pub fn inner(&self, a: &DVector<f64>, b: &DVector<f64>) -> f64 {
        match self {
            Form::Euclidean(_) => a.dot(b),
            Form::Gram(g) => a.dot(&(g.as_ref() * b)),
        }
    }

    pub fn norm(&self, a: &DVector<f64>) -> f64 {
        self.inner(a, a).max(0.0).sqrt()
    }

    /// `G v`.
    pub fn apply(&self, v: &DVector<f64>) -> DVector<f64> {
        match self {
            Form::Euclidean(_) => v.clone(),
            Form::Gram(g) => g.as_ref() * v,
        }
    }

    /// `G M`.
    pub fn apply_mat(&self, m: &DMatrix<f64>) -> DMatrix<f64> {
        match self {
            Form::Euclidean(_) => m.clone(),
            Form::Gram(g) => g.as_ref() * m,
        }
    }

    pub fn matrix(&self) -> DMatrix<f64> {
        match self {
            Form::Euclidean(n) => DMatrix::identity(*n, *n),
            Form::Gram(g) => g.as_ref().clone(),
        }
    }

    /// Same form, either by identity or by value.
    pub fn same(&self, other: &Form) -> bool {
        match (self, other) {
            (Form::Euclidean(a), Form::Euclidean(b)) => a == b,
            (Form::Gram(a), Form::Gram(b)) => Arc::ptr_eq(a, b) || a == b,
            (a, b) => a.dim() == b.dim() && a.matrix() == b.matrix(),
        }
    }

    /// Lower Cholesky factor `L` with `G = L Lᵀ`.
    pub fn cholesky_factor(&self) -> DMatrix<f64> {
        match self {
            Form::Euclidean(n) => DMatrix::identity(*n, *n),
            Form::Gram(g) => g
                .as_ref()
                .clone()
                .cholesky()
                .expect("inner-product form must be positive definite")
                .l(),
        }
    }
}

fn empty_columns(rows: usize) -> DMatrix<f64> {
    DMatrix::zeros(rows, 0)
}

/// Builds a matrix from columns, allowing an empty column list.
pub fn columns_matrix(rows: usize, cols: &[DVector<f64>]) -> DMatrix<f64> {
    if cols.is_empty() {
        empty_columns(rows)
    } else {
        DMatrix::from_columns(cols)
    }
}

fn to_faer(a: &DMatrix<f64>) -> faer::Mat<f64> {
    faer::Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)])
}

fn from_faer(a: faer::MatRef<'_, f64>) -> DMatrix<f64> {
    DMatrix::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)])
}

/// Singular value decomposition `A = U Σ Vᵀ`, singular values in
/// nonincreasing order. `V` is always square; `U` is `m×n` when `m ≥ n`.
#[derive(Clone, Debug)]
pub struct Svd {
    pub u: DMatrix<f64>,
    pub singular_values: DVector<f64>,
    pub v: DMatrix<f64>,
}

impl Svd {
    /// Number of singular values above `TOL_RANK` times the largest.
    pub fn rank(&self) -> usize {
        let smax = self.singular_values.iter().copied().fold(0.0, f64::max);
        if smax == 0.0 {
            return 0;
        }
        self.singular_values.iter().filter(|&&x| x > TOL_RANK * smax).count()
    }
}

pub fn svd(a: &DMatrix<f64>) -> Svd {
    let a = to_faer(a);
    let f = if a.nrows() >= a.ncols() { a.thin_svd() } else { a.svd() };
    let f = f.expect("singular value decomposition converges");
    let s = f.S().column_vector();
    Svd {
        u: from_faer(f.U()),
        singular_values: DVector::from_fn(s.nrows(), |i, _| s[i]),
        v: from_faer(f.V()),
    }
}

/// Eigen-decomposition of a symmetric matrix, eigenvalues nondecreasing.
pub fn symmetric_eigen(a: &DMatrix<f64>) -> (DVector<f64>, DMatrix<f64>) {
    let f = to_faer(a).self_adjoint_eigen(faer::Side::Lower).expect("symmetric eigensolver converges");
    let s = f.S().column_vector();
    (DVector::from_fn(s.nrows(), |i, _| s[i]), from_faer(f.U()))
}

/// Orthonormal basis (Euclidean) of the null space of `a`.
pub fn null_space(a: &DMatrix<f64>) -> DMatrix<f64> {
    let n = a.ncols();
    if n == 0 {
        return empty_columns(0);
    }
    if a.nrows() == 0 {
        return DMatrix::identity(n, n);
    }
    let f = svd(a);
    let r = f.rank();
    f.v.columns(r, n - r).into_owned()
}

/// Orthonormal basis (Euclidean) of the column space of `a`.
pub fn column_space(a: &DMatrix<f64>) -> DMatrix<f64> {
    let m = a.nrows();
    if a.ncols() == 0 || m == 0 {
        return empty_columns(m);
    }
    let f = svd(a);
    f.u.columns(0, f.rank()).into_owned()
}

/// Numerical rank by singular values.
pub fn rank(a: &DMatrix<f64>) -> usize {
    column_space(a).ncols()
}

/// Max-abs entry of `G M + Mᵀ G`: zero iff `M` is skew-adjoint for `G`.
pub fn skew_residual(m: &DMatrix<f64>, gram: &DMatrix<f64>) -> f64 {
    let gm = gram * m;
    (&gm + gm.transpose()).amax()
}

/// Matrix commutator `AB − BA`.
pub fn commutator(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    a * b - b * a
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn null_space_of_identity_is_empty() {
        let k = null_space(&DMatrix::identity(4, 4));
        assert_eq!(k.ncols(), 0);
        assert_eq!(k.nrows(), 4);
    }

    #[test]
    fn null_space_of_wide_matrix() {
        let a = DMatrix::from_row_slice(1, 3, &[1.0, 1.0, 0.0]);
        let k = null_space(&a);
        assert_eq!(k.ncols(), 2);
        assert!((a * k).amax() < 1e-14);
    }

    #[test]
    fn zero_matrix_has_full_kernel_and_empty_range() {
        let z = DMatrix::<f64>::zeros(3, 5);
        assert_eq!(null_space(&z).ncols(), 5);
        assert_eq!(column_space(&z).ncols(), 0);
    }

    #[test]
    fn svd_reconstructs_rank_deficient_input() {
        // Rank-4 input on which a reference implementation once lost accuracy.
        let a = DMatrix::from_column_slice(
            5,
            5,
            &[
                -0.19966757783321576, 0.3918287261285426, 0.09681967394950391, -0.4929682668684929,
                -0.2465890283804833, -0.22815742379443354, -0.44592059231723424, 0.29567791828795303,
                -0.5738066758696473, 0.13863684388105993, -0.39857743358752057, -0.5248295097776228,
                -0.3875374816869696, 0.13915525104431212, -0.176544246959275, -0.4569417970703908,
                0.34170665189610944, -0.4442852464583732, -0.09060137443159794, -0.07756608591575799,
                0.0, 0.0, 0.0, 4.996003610813208e-16, -0.5000000000000002,
            ],
        );
        let f = svd(&a);
        let rec = &f.u * DMatrix::from_diagonal(&f.singular_values) * f.v.transpose();
        assert!((rec - &a).amax() < 1e-14);
        assert_eq!(f.rank(), 4);
        let c = column_space(&a);
        assert!((&a - &c * c.transpose() * &a).amax() < 1e-14);
        assert!((&a * null_space(&a)).amax() < 1e-14);
    }

    #[test]
    fn gram_form_inner_product() {
        let f = Form::gram(DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 4.0])));
        let v = DVector::from_vec(vec![0.0, 1.0]);
        assert_eq!(f.inner(&v, &v), 4.0);
        assert_eq!(f.norm(&v), 2.0);
    }
}
