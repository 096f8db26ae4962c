//! Dense decompositions used by the rank decisions.

use nalgebra::{DMatrix, DVector};

use crate::scalar::Real;

/// Singular value decomposition with values sorted in decreasing order and a
/// complete set of right singular vectors.
///
/// The input is zero-padded to at least as many rows as columns, so `v` is
/// always square (`ncols x ncols`). `u` keeps only the original rows.
pub(crate) struct SortedSvd<T: Real> {
    pub u: DMatrix<T>,
    pub values: Vec<T>,
    pub v: DMatrix<T>,
}

impl<T: Real> SortedSvd<T> {
    pub fn new(matrix: &DMatrix<T>) -> Self {
        let (rows, cols) = matrix.shape();
        if rows == 0 || cols == 0 {
            return Self {
                u: DMatrix::zeros(rows, 0),
                values: Vec::new(),
                v: DMatrix::identity(cols, cols),
            };
        }
        let padded_rows = rows.max(cols);
        let padded = if padded_rows > rows {
            let mut p = DMatrix::zeros(padded_rows, cols);
            p.view_mut((0, 0), (rows, cols)).copy_from(matrix);
            p
        } else {
            matrix.clone()
        };
        let svd = padded.svd(true, true);
        let u_full = svd.u.expect("left vectors requested");
        let v_t = svd.v_t.expect("right vectors requested");
        let raw = svd.singular_values;

        let mut order: Vec<usize> = (0..raw.len()).collect();
        order.sort_by(|&a, &b| raw[b].partial_cmp(&raw[a]).unwrap_or(std::cmp::Ordering::Equal));

        let mut u = DMatrix::zeros(rows, order.len());
        let mut v = DMatrix::zeros(cols, order.len());
        let mut values = Vec::with_capacity(order.len());
        for (dst, &src) in order.iter().enumerate() {
            values.push(raw[src]);
            u.set_column(dst, &u_full.column(src).rows(0, rows));
            v.set_column(dst, &v_t.row(src).transpose());
        }
        Self { u, values, v }
    }

    pub fn sigma_max(&self) -> T {
        self.values.first().copied().unwrap_or_else(T::zero)
    }

    /// Number of singular values strictly above `threshold`.
    pub fn rank_above(&self, threshold: T) -> usize {
        self.values.iter().filter(|&&s| s > threshold).count()
    }

    /// Columns of `u` for the leading `count` singular values.
    pub fn leading_left(&self, count: usize) -> DMatrix<T> {
        self.u.columns(0, count).into_owned()
    }

    /// Right singular vectors beyond the first `rank` (a nullspace basis).
    pub fn trailing_right(&self, rank: usize) -> DMatrix<T> {
        let n = self.v.ncols();
        self.v.columns(rank, n - rank).into_owned()
    }

    /// Minimum-norm least squares solution using the leading `rank` triplets.
    pub fn solve(&self, rhs: &DVector<T>, rank: usize) -> DVector<T> {
        let mut x = DVector::zeros(self.v.nrows());
        for i in 0..rank {
            let coeff = self.u.column(i).dot(rhs) / self.values[i];
            x.axpy(coeff, &self.v.column(i), T::one());
        }
        x
    }
}

/// Orthonormal basis for the span of the leading `count` directions of
/// `columns`. Used when the dimension is already decided.
pub(crate) fn orthonormal_top<T: Real>(columns: &DMatrix<T>, count: usize) -> DMatrix<T> {
    if count == 0 {
        return DMatrix::zeros(columns.nrows(), 0);
    }
    SortedSvd::new(columns).leading_left(count)
}

pub(crate) fn hstack<T: Real>(a: &DMatrix<T>, b: &DMatrix<T>) -> DMatrix<T> {
    debug_assert_eq!(a.nrows(), b.nrows());
    let mut out = DMatrix::zeros(a.nrows(), a.ncols() + b.ncols());
    out.view_mut((0, 0), a.shape()).copy_from(a);
    out.view_mut((0, a.ncols()), b.shape()).copy_from(b);
    out
}

pub(crate) fn columns_to_matrix<T: Real>(rows: usize, cols: &[DVector<T>]) -> DMatrix<T> {
    let mut out = DMatrix::zeros(rows, cols.len());
    for (j, c) in cols.iter().enumerate() {
        out.set_column(j, c);
    }
    out
}
