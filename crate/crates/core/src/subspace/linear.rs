use nalgebra::{DMatrix, DVector};

use super::{SubspaceError, Tolerance};
use crate::linalg::{columns_to_matrix, hstack, orthonormal_top, SortedSvd};
use crate::scalar::Real;

/// A linear subspace of `R^m`, stored as an `m x k` matrix with orthonormal
/// columns. `k = 0` is the zero subspace.
#[derive(Debug, Clone, PartialEq)]
pub struct LinSubspace<T: Real> {
    basis: DMatrix<T>,
}

impl<T: Real> LinSubspace<T> {
    pub fn zero(ambient_dim: usize) -> Self {
        Self { basis: DMatrix::zeros(ambient_dim, 0) }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Self { basis: DMatrix::identity(ambient_dim, ambient_dim) }
    }

    /// Span of the standard basis vectors with the given indices.
    pub fn coordinate(ambient_dim: usize, axes: &[usize]) -> Self {
        let mut axes = axes.to_vec();
        axes.sort_unstable();
        axes.dedup();
        let mut basis = DMatrix::zeros(ambient_dim, axes.len());
        for (j, &axis) in axes.iter().enumerate() {
            basis[(axis, j)] = T::one();
        }
        Self { basis }
    }

    /// Wraps a matrix whose columns are already orthonormal.
    pub fn from_orthonormal(basis: DMatrix<T>, tol: &Tolerance<T>) -> Result<Self, SubspaceError> {
        if basis.nrows() == 0 {
            return Err(SubspaceError::ZeroAmbient);
        }
        if basis.iter().any(|x| !x.is_finite()) {
            return Err(SubspaceError::NonFinite);
        }
        if basis.ncols() > basis.nrows() {
            return Err(SubspaceError::NotOrthonormal);
        }
        let gram = basis.transpose() * &basis;
        let k = basis.ncols();
        let cut = tol.length_threshold(T::one()).max(T::lit(1e3) * T::default_epsilon());
        for i in 0..k {
            for j in 0..k {
                let target = if i == j { T::one() } else { T::zero() };
                if (gram[(i, j)] - target).abs() > cut {
                    return Err(SubspaceError::NotOrthonormal);
                }
            }
        }
        Ok(Self { basis })
    }

    /// Orthonormalized span of the columns of `matrix`.
    pub fn span_of_columns(matrix: &DMatrix<T>, tol: &Tolerance<T>) -> Result<Self, SubspaceError> {
        if matrix.nrows() == 0 {
            return Err(SubspaceError::ZeroAmbient);
        }
        if matrix.iter().any(|x| !x.is_finite()) {
            return Err(SubspaceError::NonFinite);
        }
        let rank = Self::rank_of(matrix, tol);
        Ok(Self { basis: orthonormal_top(matrix, rank) })
    }

    /// Decided rank of an arbitrary matrix.
    pub fn rank_of(matrix: &DMatrix<T>, tol: &Tolerance<T>) -> usize {
        if matrix.ncols() == 0 || matrix.nrows() == 0 {
            return 0;
        }
        let svd = SortedSvd::new(matrix);
        svd.rank_above(tol.threshold(svd.sigma_max()))
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn basis(&self) -> &DMatrix<T> {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<DVector<T>> {
        self.basis.column_iter().map(|c| c.into_owned()).collect()
    }

    /// Orthogonal projection onto the subspace.
    pub fn project(&self, v: &DVector<T>) -> DVector<T> {
        if self.is_zero() {
            return DVector::zeros(v.len());
        }
        &self.basis * (self.basis.transpose() * v)
    }

    /// Component of `v` orthogonal to the subspace.
    pub fn residual(&self, v: &DVector<T>) -> DVector<T> {
        v - self.project(v)
    }

    pub fn contains_vector(&self, v: &DVector<T>, tol: &Tolerance<T>) -> bool {
        self.residual(v).norm() <= tol.threshold(v.norm())
    }

    /// `other ⊆ self`, decided by rank: adding `other` does not raise the
    /// dimension.
    pub fn contains(&self, other: &Self, tol: &Tolerance<T>) -> bool {
        if other.is_zero() {
            return true;
        }
        let decomposition = PairDecomposition::new(self, other);
        decomposition.sum_dim(tol) == self.dim()
    }

    /// Cosines of the principal angles between the two subspaces, largest
    /// first. There are `min(dim self, dim other)` of them.
    pub fn principal_cosines(&self, other: &Self) -> Vec<T> {
        if self.is_zero() || other.is_zero() {
            return Vec::new();
        }
        let cross = self.basis.transpose() * &other.basis;
        let mut values: Vec<T> = cross.singular_values().iter().copied().collect();
        values.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
        values.truncate(self.dim().min(other.dim()));
        values
    }

    /// Largest principal angle in radians; `pi/2` when the dimensions differ.
    pub fn max_principal_angle(&self, other: &Self) -> T {
        if self.ambient_dim() != other.ambient_dim() || self.dim() != other.dim() {
            return T::frac_pi_2();
        }
        if self.is_zero() {
            return T::zero();
        }
        // sin of the largest angle is the norm of the residual of one basis
        // against the other; stable for tiny angles, unlike acos.
        let resid = &other.basis - &self.basis * (self.basis.transpose() * &other.basis);
        let sin = resid.singular_values().iter().fold(T::zero(), |a, &s| a.max(s));
        sin.min(T::one()).asin()
    }

    pub fn same_as(&self, other: &Self, tol: &Tolerance<T>) -> bool {
        self.dim() == other.dim()
            && self.ambient_dim() == other.ambient_dim()
            && self.max_principal_angle(other) <= tol.length_threshold(T::one()).max(T::lit(1e-8))
    }


    pub(crate) fn from_basis_unchecked(basis: DMatrix<T>) -> Self {
        Self { basis }
    }
}

/// One SVD of `[B_u | B_v]` from which both the sum and the intersection of a
/// pair are read off.
pub(crate) struct PairDecomposition<T: Real> {
    left_dim: usize,
    left_basis: DMatrix<T>,
    svd: SortedSvd<T>,
}

impl<T: Real> PairDecomposition<T> {
    pub fn new(u: &LinSubspace<T>, v: &LinSubspace<T>) -> Self {
        let stacked = hstack(&u.basis, &v.basis);
        Self { left_dim: u.dim(), left_basis: u.basis.clone(), svd: SortedSvd::new(&stacked) }
    }

    pub fn sum_dim(&self, tol: &Tolerance<T>) -> usize {
        self.svd.rank_above(tol.threshold(self.svd.sigma_max()))
    }

    pub fn sum(&self, tol: &Tolerance<T>) -> LinSubspace<T> {
        LinSubspace { basis: self.svd.leading_left(self.sum_dim(tol)) }
    }

    pub fn intersection(&self, tol: &Tolerance<T>) -> LinSubspace<T> {
        let rank = self.sum_dim(tol);
        let null = self.svd.trailing_right(rank);
        let count = null.ncols();
        if count == 0 {
            return LinSubspace::zero(self.left_basis.nrows());
        }
        // (x, y) with B_u x + B_v y = 0 gives B_u x in U ∩ V.
        let coeffs = null.rows(0, self.left_dim).into_owned();
        let vectors = &self.left_basis * coeffs;
        LinSubspace { basis: orthonormal_top(&vectors, count) }
    }

    /// Minimum-norm `(x, y)` with `B_u x + B_v y ≈ rhs`.
    pub fn solve(&self, rhs: &DVector<T>, tol: &Tolerance<T>) -> (DVector<T>, DVector<T>) {
        let sol = self.svd.solve(rhs, self.sum_dim(tol));
        let n = sol.len();
        (sol.rows(0, self.left_dim).into_owned(), sol.rows(self.left_dim, n - self.left_dim).into_owned())
    }
}

fn check_vectors<T: Real>(ambient_dim: usize, vectors: &[DVector<T>]) -> Result<(), SubspaceError> {
    if ambient_dim == 0 {
        return Err(SubspaceError::ZeroAmbient);
    }
    for v in vectors {
        if v.len() != ambient_dim {
            return Err(SubspaceError::AmbientMismatch { expected: ambient_dim, found: v.len() });
        }
        if v.iter().any(|x| !x.is_finite()) {
            return Err(SubspaceError::NonFinite);
        }
    }
    Ok(())
}

pub(crate) fn check_same_ambient<T: Real>(
    u: &LinSubspace<T>,
    v: &LinSubspace<T>,
) -> Result<(), SubspaceError> {
    if u.ambient_dim() != v.ambient_dim() {
        return Err(SubspaceError::AmbientMismatch { expected: u.ambient_dim(), found: v.ambient_dim() });
    }
    Ok(())
}

/// Orthonormalized span of `vectors` in `R^ambient_dim`.
pub fn span_of<T: Real>(
    ambient_dim: usize,
    vectors: &[DVector<T>],
    tol: &Tolerance<T>,
) -> Result<LinSubspace<T>, SubspaceError> {
    check_vectors(ambient_dim, vectors)?;
    if vectors.is_empty() {
        return Ok(LinSubspace::zero(ambient_dim));
    }
    LinSubspace::span_of_columns(&columns_to_matrix(ambient_dim, vectors), tol)
}

pub fn sum<T: Real>(
    u: &LinSubspace<T>,
    v: &LinSubspace<T>,
    tol: &Tolerance<T>,
) -> Result<LinSubspace<T>, SubspaceError> {
    check_same_ambient(u, v)?;
    Ok(PairDecomposition::new(u, v).sum(tol))
}

pub fn intersect_linear<T: Real>(
    u: &LinSubspace<T>,
    v: &LinSubspace<T>,
    tol: &Tolerance<T>,
) -> Result<LinSubspace<T>, SubspaceError> {
    check_same_ambient(u, v)?;
    if u.is_zero() || v.is_zero() {
        return Ok(LinSubspace::zero(u.ambient_dim()));
    }
    Ok(PairDecomposition::new(u, v).intersection(tol))
}

/// Orthogonal complement; always of dimension `m - dim U`.
pub fn orthogonal_complement<T: Real>(u: &LinSubspace<T>) -> LinSubspace<T> {
    let m = u.ambient_dim();
    let k = u.dim();
    if k == 0 {
        return LinSubspace::full(m);
    }
    if k == m {
        return LinSubspace::zero(m);
    }
    let mut square = DMatrix::zeros(m, m);
    square.view_mut((0, 0), (m, k)).copy_from(&u.basis);
    let svd = SortedSvd::new(&square);
    LinSubspace { basis: svd.u.columns(k, m - k).into_owned() }
}
