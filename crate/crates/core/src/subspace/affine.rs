use nalgebra::{DMatrix, DVector};

use super::linear::{check_same_ambient, PairDecomposition};
use super::{LinSubspace, SubspaceError, Tolerance};
use crate::linalg::orthonormal_top;
use crate::scalar::Real;

/// An affine flat `base + direction` in `R^m`, or the empty flat.
///
/// Nonempty flats are kept in canonical form: `base` is the point of the flat
/// nearest the origin, hence orthogonal to `direction`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineFlat<T: Real> {
    ambient_dim: usize,
    parts: Option<(DVector<T>, LinSubspace<T>)>,
}

impl<T: Real> AffineFlat<T> {
    pub fn empty(ambient_dim: usize) -> Self {
        Self { ambient_dim, parts: None }
    }

    /// The flat through `point` with the given direction space.
    pub fn through(point: DVector<T>, direction: LinSubspace<T>) -> Result<Self, SubspaceError> {
        if point.len() != direction.ambient_dim() {
            return Err(SubspaceError::AmbientMismatch { expected: direction.ambient_dim(), found: point.len() });
        }
        if point.iter().any(|x| !x.is_finite()) {
            return Err(SubspaceError::NonFinite);
        }
        let base = direction.residual(&point);
        Ok(Self { ambient_dim: point.len(), parts: Some((base, direction)) })
    }

    pub fn point(point: DVector<T>) -> Result<Self, SubspaceError> {
        let m = point.len();
        if m == 0 {
            return Err(SubspaceError::ZeroAmbient);
        }
        Self::through(point, LinSubspace::zero(m))
    }

    /// The line through `a` and `b`; a point when they coincide.
    pub fn line_through(a: &DVector<T>, b: &DVector<T>, tol: &Tolerance<T>) -> Result<Self, SubspaceError> {
        affine_hull(&[a.clone(), b.clone()], tol)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    /// Dimension, with `-1` for the empty flat.
    pub fn dim(&self) -> isize {
        match &self.parts {
            Some((_, dir)) => dir.dim() as isize,
            None => -1,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_none()
    }

    pub fn base(&self) -> Option<&DVector<T>> {
        self.parts.as_ref().map(|(b, _)| b)
    }

    pub fn direction(&self) -> Option<&LinSubspace<T>> {
        self.parts.as_ref().map(|(_, d)| d)
    }

    pub(crate) fn parts(&self) -> Result<(&DVector<T>, &LinSubspace<T>), SubspaceError> {
        self.parts.as_ref().map(|(b, d)| (b, d)).ok_or(SubspaceError::EmptyFlat)
    }

    /// Euclidean distance from `p` to the flat (`+inf` for the empty flat).
    pub fn distance_to_point(&self, p: &DVector<T>) -> T {
        match &self.parts {
            Some((base, dir)) => dir.residual(&(p - base)).norm(),
            None => T::max_value().unwrap_or_else(T::one),
        }
    }

    pub fn contains_point(&self, p: &DVector<T>, tol: &Tolerance<T>) -> bool {
        !self.is_empty() && self.distance_to_point(p) <= tol.length_threshold(p.norm())
    }

    /// Equal as point sets: same direction and same canonical base, within
    /// tolerance.
    pub fn same_as(&self, other: &Self, tol: &Tolerance<T>) -> bool {
        match (&self.parts, &other.parts) {
            (None, None) => self.ambient_dim == other.ambient_dim,
            (Some((b1, d1)), Some((b2, d2))) => {
                d1.same_as(d2, tol) && (b1 - b2).norm() <= tol.length_threshold(b1.norm()).max(T::lit(1e-8))
            }
            _ => false,
        }
    }
}

fn check_points<T: Real>(points: &[DVector<T>]) -> Result<usize, SubspaceError> {
    let first = points.first().ok_or(SubspaceError::EmptyInput)?;
    let m = first.len();
    if m == 0 {
        return Err(SubspaceError::ZeroAmbient);
    }
    for p in points {
        if p.len() != m {
            return Err(SubspaceError::AmbientMismatch { expected: m, found: p.len() });
        }
        if p.iter().any(|x| !x.is_finite()) {
            return Err(SubspaceError::NonFinite);
        }
    }
    Ok(m)
}

/// Smallest flat containing all `points`.
pub fn affine_hull<T: Real>(points: &[DVector<T>], tol: &Tolerance<T>) -> Result<AffineFlat<T>, SubspaceError> {
    let m = check_points(points)?;
    let origin = &points[0];
    let mut diffs = DMatrix::zeros(m, points.len() - 1);
    for (j, p) in points.iter().skip(1).enumerate() {
        diffs.set_column(j, &(p - origin));
    }
    let direction = LinSubspace::span_of_columns(&diffs, tol)?;
    AffineFlat::through(origin.clone(), direction)
}

/// Whether `offset` leaves the span of `basis`, decided at the scale of the
/// offset.
fn leaves_span<T: Real>(residual: &DVector<T>, offset: &DVector<T>, tol: &Tolerance<T>) -> bool {
    residual.norm() > tol.length_threshold(offset.norm())
}

pub fn intersect_affine<T: Real>(
    p: &AffineFlat<T>,
    q: &AffineFlat<T>,
    tol: &Tolerance<T>,
) -> Result<AffineFlat<T>, SubspaceError> {
    if p.ambient_dim() != q.ambient_dim() {
        return Err(SubspaceError::AmbientMismatch { expected: p.ambient_dim(), found: q.ambient_dim() });
    }
    let (Some((pb, pd)), Some((qb, qd))) = (&p.parts, &q.parts) else {
        return Ok(AffineFlat::empty(p.ambient_dim()));
    };
    check_same_ambient(pd, qd)?;
    let pair = PairDecomposition::new(pd, qd);
    let offset = qb - pb;
    let sum = pair.sum(tol);
    if leaves_span(&sum.residual(&offset), &offset, tol) {
        return Ok(AffineFlat::empty(p.ambient_dim()));
    }
    // pb + Dp x = qb - Dq y
    let (x, _) = pair.solve(&offset, tol);
    let meet = pb + pd.basis() * x;
    AffineFlat::through(meet, pair.intersection(tol))
}

/// Affine hull of a union of nonempty flats.
pub fn affine_hull_of_flats<T: Real>(
    flats: &[AffineFlat<T>],
    tol: &Tolerance<T>,
) -> Result<AffineFlat<T>, SubspaceError> {
    let first = flats.first().ok_or(SubspaceError::EmptyInput)?;
    let (origin, mut span) = {
        let (b, d) = first.parts()?;
        (b.clone(), d.clone())
    };
    for flat in &flats[1..] {
        let (b, d) = flat.parts()?;
        if b.len() != origin.len() {
            return Err(SubspaceError::AmbientMismatch { expected: origin.len(), found: b.len() });
        }
        let pair = PairDecomposition::new(&span, d);
        span = pair.sum(tol);
        let offset = b - &origin;
        let residual = span.residual(&offset);
        if leaves_span(&residual, &offset, tol) {
            let extended = crate::linalg::hstack(span.basis(), &DMatrix::from_column_slice(residual.len(), 1, residual.as_slice()));
            span = LinSubspace::from_basis_unchecked(orthonormal_top(&extended, span.dim() + 1));
        }
    }
    AffineFlat::through(origin, span)
}

/// Whether the flats are jointly skew: the hull of their union has dimension
/// `n_1 + ... + n_k + k - 1`.
pub fn jointly_skew<T: Real>(flats: &[AffineFlat<T>], tol: &Tolerance<T>) -> Result<bool, SubspaceError> {
    if flats.len() < 2 {
        return Err(SubspaceError::TooFewFlats(flats.len()));
    }
    let mut expected = -1isize;
    for f in flats {
        if f.is_empty() {
            return Err(SubspaceError::EmptyFlat);
        }
        expected += f.dim() + 1;
    }
    let hull = affine_hull_of_flats(flats, tol)?;
    Ok(hull.dim() == expected)
}
