use nalgebra::{DMatrix, DVector, Matrix3, Matrix4, SymmetricEigen, Vector3, Vector4};
use serde::{Deserialize, Serialize};

use super::{Line3, RuledQuadricError};
use crate::linalg::SortedSvd;
use crate::scalar::Real;
use crate::subspace::{jointly_skew, AffineFlat, Tolerance};

/// Number of monomials of a quadratic polynomial in three variables.
pub const COEFFICIENT_COUNT: usize = 10;

/// A quadric surface `{p : (p, 1)^T Q (p, 1) = 0}` in `R^3`.
///
/// `Q` is symmetric with Frobenius norm 1, and its first upper-triangular
/// entry of largest magnitude (in [`Quadric3::coefficients`] order) is
/// positive, so proportional inputs produce the same value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadric3<T: Real> {
    matrix: Matrix4<T>,
}

/// Surface types distinguished by [`classify_quadric`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuadricKind {
    OneSheetHyperboloid,
    HyperbolicParaboloid,
    Other,
}

impl QuadricKind {
    pub fn is_doubly_ruled(self) -> bool {
        !matches!(self, QuadricKind::Other)
    }
}

impl<T: Real> Quadric3<T> {
    /// Builds the quadric from the coefficients of
    /// `x², y², z², xy, xz, yz, x, y, z, 1`.
    pub fn from_coefficients(a: &[T; COEFFICIENT_COUNT]) -> Result<Self, RuledQuadricError> {
        let h = T::lit(0.5);
        #[rustfmt::skip]
        let m = Matrix4::new(
            a[0],     a[3] * h, a[4] * h, a[6] * h,
            a[3] * h, a[1],     a[5] * h, a[7] * h,
            a[4] * h, a[5] * h, a[2],     a[8] * h,
            a[6] * h, a[7] * h, a[8] * h, a[9],
        );
        Self::from_matrix(&m)
    }

    /// Symmetrizes and canonicalizes `m`.
    pub fn from_matrix(m: &Matrix4<T>) -> Result<Self, RuledQuadricError> {
        if m.iter().any(|x| !x.is_finite()) {
            return Err(RuledQuadricError::InvalidInput("non-finite quadric coefficient"));
        }
        let sym = (m + m.transpose()) * T::lit(0.5);
        let norm = sym.norm();
        if norm == T::zero() {
            return Err(RuledQuadricError::InvalidInput("zero quadric"));
        }
        let mut matrix = sym / norm;
        let entries = upper_entries(&matrix);
        let largest = entries.iter().fold(T::zero(), |acc, x| acc.max(x.abs()));
        let cut = largest * (T::one() - T::lit(1e-9));
        let lead = entries.iter().copied().find(|x| x.abs() >= cut).unwrap_or_else(T::one);
        if lead < T::zero() {
            matrix = -matrix;
        }
        Ok(Self { matrix })
    }

    pub fn matrix(&self) -> &Matrix4<T> {
        &self.matrix
    }

    /// Coefficients in the order `x², y², z², xy, xz, yz, x, y, z, 1`.
    pub fn coefficients(&self) -> [T; COEFFICIENT_COUNT] {
        let q = &self.matrix;
        let two = T::lit(2.0);
        [
            q[(0, 0)],
            q[(1, 1)],
            q[(2, 2)],
            q[(0, 1)] * two,
            q[(0, 2)] * two,
            q[(1, 2)] * two,
            q[(0, 3)] * two,
            q[(1, 3)] * two,
            q[(2, 3)] * two,
            q[(3, 3)],
        ]
    }

    /// Upper-left `3 x 3` block: the quadratic form part.
    pub fn form_matrix(&self) -> Matrix3<T> {
        self.matrix.fixed_view::<3, 3>(0, 0).into_owned()
    }

    pub fn eval(&self, p: &Vector3<T>) -> T {
        let h = Vector4::new(p.x, p.y, p.z, T::one());
        h.dot(&(self.matrix * h))
    }

    /// Value of the quadratic form part on a direction.
    pub fn form(&self, v: &Vector3<T>) -> T {
        v.dot(&(self.form_matrix() * v))
    }

    /// Half the gradient at `p`.
    pub fn half_gradient(&self, p: &Vector3<T>) -> Vector3<T> {
        let h = Vector4::new(p.x, p.y, p.z, T::one());
        (self.matrix * h).fixed_rows::<3>(0).into_owned()
    }

    /// `|Q(p)|` relative to the bound `|(p, 1)|^2` it can reach.
    pub fn relative_residual(&self, p: &Vector3<T>) -> T {
        self.eval(p).abs() / (T::one() + p.norm_squared())
    }

    /// `|q(v)| / |v|^2`.
    pub fn relative_form_residual(&self, v: &Vector3<T>) -> T {
        self.form(v).abs() / v.norm_squared()
    }
}

fn upper_entries<T: Real>(q: &Matrix4<T>) -> [T; COEFFICIENT_COUNT] {
    [
        q[(0, 0)],
        q[(1, 1)],
        q[(2, 2)],
        q[(0, 1)],
        q[(0, 2)],
        q[(1, 2)],
        q[(0, 3)],
        q[(1, 3)],
        q[(2, 3)],
        q[(3, 3)],
    ]
}

fn point_row<T: Real>(p: &Vector3<T>) -> [T; COEFFICIENT_COUNT] {
    let (x, y, z) = (p.x, p.y, p.z);
    [x * x, y * y, z * z, x * y, x * z, y * z, x, y, z, T::one()]
}

fn direction_row<T: Real>(v: &Vector3<T>) -> [T; COEFFICIENT_COUNT] {
    let (x, y, z) = (v.x, v.y, v.z);
    let o = T::zero();
    [x * x, y * y, z * z, x * y, x * z, y * z, o, o, o, o]
}

/// The three carrier lines `A1A2`, `A3A4`, `A5A6`.
pub(crate) fn carrier_lines<T: Real>(points: &[Vector3<T>; 6]) -> Result<[Line3<T>; 3], RuledQuadricError> {
    Ok([
        Line3::through(&points[0], &points[1])?,
        Line3::through(&points[2], &points[3])?,
        Line3::through(&points[4], &points[5])?,
    ])
}

/// Checks that the lines are pairwise skew, reporting the first failing pair.
pub(crate) fn require_pairwise_skew<T: Real>(lines: &[Line3<T>], tol: &Tolerance<T>) -> Result<(), RuledQuadricError> {
    let flats: Vec<AffineFlat<T>> = lines.iter().map(Line3::to_flat).collect::<Result<_, _>>()?;
    for i in 0..flats.len() {
        for j in (i + 1)..flats.len() {
            if !jointly_skew(&[flats[i].clone(), flats[j].clone()], tol)? {
                return Err(RuledQuadricError::NotSkew(i, j));
            }
        }
    }
    Ok(())
}

/// The quadric containing the three pairwise skew lines `A1A2`, `A3A4`,
/// `A5A6`.
///
/// Each line contributes two incidence rows and one asymptotic-direction row
/// to a `9 x 10` system in the coefficients; rows are normalized before the
/// singular value decomposition and the nullspace must be one-dimensional.
pub fn quadric_through_three_skew_lines<T: Real>(
    points: &[Vector3<T>; 6],
    tol: &Tolerance<T>,
) -> Result<Quadric3<T>, RuledQuadricError> {
    if points.iter().any(|p| p.iter().any(|x| !x.is_finite())) {
        return Err(RuledQuadricError::InvalidInput("non-finite point"));
    }
    let lines = carrier_lines(points)?;
    require_pairwise_skew(&lines, tol)?;

    let mut system = DMatrix::zeros(9, COEFFICIENT_COUNT);
    let mut put = |row: usize, values: [T; COEFFICIENT_COUNT]| {
        let norm = values.iter().fold(T::zero(), |acc, &x| acc + x * x).sqrt();
        for (j, &x) in values.iter().enumerate() {
            system[(row, j)] = x / norm;
        }
    };
    for (k, p) in points.iter().enumerate() {
        put(k, point_row(p));
    }
    for (k, line) in lines.iter().enumerate() {
        put(6 + k, direction_row(line.direction()));
    }

    let svd = SortedSvd::new(&system);
    let rank = tol.rank(&svd.values);
    let nullity = COEFFICIENT_COUNT - rank;
    if nullity != 1 {
        return Err(RuledQuadricError::Degenerate { nullity });
    }
    let null = svd.trailing_right(rank);
    let a: [T; COEFFICIENT_COUNT] = std::array::from_fn(|j| null[(j, 0)]);
    let quadric = Quadric3::from_coefficients(&a)?;
    for line in &lines {
        if !super::line_quadric_intersection(&quadric, line, tol).is_contained() {
            return Err(RuledQuadricError::Degenerate { nullity });
        }
    }
    Ok(quadric)
}

/// Largest relative incidence and asymptotic-direction residuals of the six
/// points and three directions on `q`.
pub fn construction_residuals<T: Real>(q: &Quadric3<T>, points: &[Vector3<T>; 6]) -> (T, T) {
    let incidence = points.iter().fold(T::zero(), |acc, p| acc.max(q.relative_residual(p)));
    let asymptotic = (0..3).fold(T::zero(), |acc, k| {
        let v = points[2 * k + 1] - points[2 * k];
        acc.max(q.relative_form_residual(&v))
    });
    (incidence, asymptotic)
}

/// Classification by the eigenvalue signature of `Q` and of its form block:
/// signature `(2, 2)` with an invertible block is a one-sheet hyperboloid,
/// with a rank-2 block a hyperbolic paraboloid.
pub fn classify_quadric<T: Real>(q: &Quadric3<T>, tol: &Tolerance<T>) -> QuadricKind {
    let (pos, neg) = signature(&SymmetricEigen::new(*q.matrix()).eigenvalues.as_slice().to_vec(), tol);
    if pos != 2 || neg != 2 {
        return QuadricKind::Other;
    }
    let (bp, bn) = signature(&SymmetricEigen::new(q.form_matrix()).eigenvalues.as_slice().to_vec(), tol);
    match bp + bn {
        3 => QuadricKind::OneSheetHyperboloid,
        2 => QuadricKind::HyperbolicParaboloid,
        _ => QuadricKind::Other,
    }
}

fn signature<T: Real>(values: &[T], tol: &Tolerance<T>) -> (usize, usize) {
    let largest = values.iter().fold(T::zero(), |acc, x| acc.max(x.abs()));
    let cut = tol.threshold(largest);
    let pos = values.iter().filter(|&&x| x > cut).count();
    let neg = values.iter().filter(|&&x| x < -cut).count();
    (pos, neg)
}

pub(crate) fn to_dvector<T: Real>(v: &Vector3<T>) -> DVector<T> {
    DVector::from_column_slice(v.as_slice())
}
