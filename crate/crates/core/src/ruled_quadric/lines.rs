use nalgebra::{DMatrix, Matrix2, SymmetricEigen, Vector3};
use serde::{Deserialize, Serialize};

use super::quadric::to_dvector;
use super::{Quadric3, RuledQuadricError};
use crate::scalar::Real;
use crate::subspace::{AffineFlat, LinSubspace, Tolerance};

/// A line `point + t * direction` with unit `direction`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real + Serialize + serde::de::DeserializeOwned")]
pub struct Line3<T: Real> {
    point: Vector3<T>,
    direction: Vector3<T>,
}

impl<T: Real> Line3<T> {
    pub fn new(point: Vector3<T>, direction: Vector3<T>) -> Result<Self, RuledQuadricError> {
        if point.iter().chain(direction.iter()).any(|x| !x.is_finite()) {
            return Err(RuledQuadricError::InvalidInput("non-finite line data"));
        }
        let len = direction.norm();
        if len == T::zero() {
            return Err(RuledQuadricError::InvalidInput("zero line direction"));
        }
        Ok(Self { point, direction: direction / len })
    }

    pub fn through(a: &Vector3<T>, b: &Vector3<T>) -> Result<Self, RuledQuadricError> {
        if a == b {
            return Err(RuledQuadricError::InvalidInput("coincident points do not span a line"));
        }
        Self::new(*a, b - a)
    }

    pub fn point(&self) -> &Vector3<T> {
        &self.point
    }

    pub fn direction(&self) -> &Vector3<T> {
        &self.direction
    }

    pub fn at(&self, t: T) -> Vector3<T> {
        self.point + self.direction * t
    }

    /// Plücker coordinates `(direction, point × direction)`.
    pub fn plucker(&self) -> [T; 6] {
        let m = self.point.cross(&self.direction);
        let d = self.direction;
        [d.x, d.y, d.z, m.x, m.y, m.z]
    }

    /// Reciprocal product of the Plücker coordinates; zero iff the lines are
    /// coplanar.
    pub fn reciprocal_product(&self, other: &Self) -> T {
        let m1 = self.point.cross(&self.direction);
        let m2 = other.point.cross(&other.direction);
        self.direction.dot(&m2) + other.direction.dot(&m1)
    }

    pub fn distance_to_point(&self, p: &Vector3<T>) -> T {
        let w = p - self.point;
        (w - self.direction * w.dot(&self.direction)).norm()
    }

    /// Parameters `(t, s)` of the mutually closest points `self.at(t)` and
    /// `other.at(s)`, or `None` for parallel lines.
    pub fn closest_parameters(&self, other: &Self) -> Option<(T, T)> {
        let b = self.direction.dot(&other.direction);
        let denom = T::one() - b * b;
        if denom <= T::lit(1e-15) {
            return None;
        }
        let w = self.point - other.point;
        let d = self.direction.dot(&w);
        let e = other.direction.dot(&w);
        Some(((b * e - d) / denom, (e - b * d) / denom))
    }

    pub fn distance_to_line(&self, other: &Self) -> T {
        match self.closest_parameters(other) {
            Some((t, s)) => (self.at(t) - other.at(s)).norm(),
            None => other.distance_to_point(&self.point),
        }
    }

    pub fn to_flat(&self) -> Result<AffineFlat<T>, RuledQuadricError> {
        let dir = LinSubspace::from_orthonormal(DMatrix::from_column_slice(3, 1, self.direction.as_slice()), &Tolerance::default())?;
        Ok(AffineFlat::through(to_dvector(&self.point), dir)?)
    }
}

/// A closed segment `[a, b]` with `a != b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real + Serialize + serde::de::DeserializeOwned")]
pub struct Segment3<T: Real> {
    a: Vector3<T>,
    b: Vector3<T>,
}

impl<T: Real> Segment3<T> {
    pub fn new(a: Vector3<T>, b: Vector3<T>) -> Result<Self, RuledQuadricError> {
        if a.iter().chain(b.iter()).any(|x| !x.is_finite()) {
            return Err(RuledQuadricError::InvalidInput("non-finite segment endpoint"));
        }
        if a == b {
            return Err(RuledQuadricError::InvalidInput("segment has zero length"));
        }
        Ok(Self { a, b })
    }

    pub fn a(&self) -> &Vector3<T> {
        &self.a
    }

    pub fn b(&self) -> &Vector3<T> {
        &self.b
    }

    /// `a + s (b - a)`.
    pub fn at(&self, s: T) -> Vector3<T> {
        self.a + (self.b - self.a) * s
    }

    pub fn length(&self) -> T {
        (self.b - self.a).norm()
    }

    pub fn carrier(&self) -> Line3<T> {
        Line3 { point: self.a, direction: (self.b - self.a) / self.length() }
    }

    /// Segment parameter of the orthogonal projection of `p` onto the carrier.
    pub fn parameter_of(&self, p: &Vector3<T>) -> T {
        let d = self.b - self.a;
        (p - self.a).dot(&d) / d.norm_squared()
    }
}

/// A real point of a line on a quadric, with its root multiplicity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinePoint<T: Real> {
    pub t: T,
    pub point: Vector3<T>,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LineIntersection<T: Real> {
    /// The line lies on the surface.
    Contained,
    /// Real intersection points in increasing parameter order.
    Points(Vec<LinePoint<T>>),
}

impl<T: Real> LineIntersection<T> {
    pub fn is_contained(&self) -> bool {
        matches!(self, LineIntersection::Contained)
    }

    /// Intersection points, empty for a contained line.
    pub fn points(&self) -> &[LinePoint<T>] {
        match self {
            LineIntersection::Contained => &[],
            LineIntersection::Points(p) => p,
        }
    }
}

/// Restricts `Q` to the line, `Q(p + t d) = a t² + b t + c`, and returns the
/// real roots; the line is contained when all three coefficients vanish.
///
/// A discriminant within tolerance of zero is reported as a double root.
pub fn line_quadric_intersection<T: Real>(q: &Quadric3<T>, line: &Line3<T>, tol: &Tolerance<T>) -> LineIntersection<T> {
    let p = line.point();
    let d = line.direction();
    let a = q.form(d);
    let b = q.half_gradient(p).dot(d) * T::lit(2.0);
    let c = q.eval(p);
    let pn = p.norm();
    let a_zero = a.abs() <= tol.length_threshold(T::one());
    let b_zero = b.abs() <= tol.length_threshold(T::one() + pn);
    let c_zero = c.abs() <= tol.length_threshold(T::one() + pn * pn);
    if a_zero && b_zero && c_zero {
        return LineIntersection::Contained;
    }
    let root = |t: T, multiplicity: usize| LinePoint { t, point: line.at(t), multiplicity };
    if a_zero {
        if b_zero {
            return LineIntersection::Points(Vec::new());
        }
        return LineIntersection::Points(vec![root(-c / b, 1)]);
    }
    let four_ac = T::lit(4.0) * a * c;
    let disc = b * b - four_ac;
    if disc.abs() <= tol.threshold(b * b + four_ac.abs()) {
        return LineIntersection::Points(vec![root(-b / (a + a), 2)]);
    }
    if disc < T::zero() {
        return LineIntersection::Points(Vec::new());
    }
    let sign = if b < T::zero() { -T::one() } else { T::one() };
    let half = -(b + sign * disc.sqrt()) * T::lit(0.5);
    let (mut t1, mut t2) = (half / a, c / half);
    if t2 < t1 {
        std::mem::swap(&mut t1, &mut t2);
    }
    LineIntersection::Points(vec![root(t1, 1), root(t2, 1)])
}

/// The two lines through `p` lying on `q`.
///
/// Their directions are the two isotropic directions of the quadratic form
/// restricted to the tangent plane at `p`.
pub fn rulings_through_point<T: Real>(
    q: &Quadric3<T>,
    p: &Vector3<T>,
    tol: &Tolerance<T>,
) -> Result<[Line3<T>; 2], RuledQuadricError> {
    let pn = p.norm();
    let residual = q.eval(p);
    if residual.abs() > tol.length_threshold(T::one() + pn * pn) {
        return Err(RuledQuadricError::NotOnSurface { residual: residual.as_f64() });
    }
    let g = q.half_gradient(p);
    if g.norm() <= tol.length_threshold(T::one() + pn) {
        return Err(RuledQuadricError::DegeneratePoint);
    }
    let [w1, w2] = tangent_basis(&g);
    let a = q.form_matrix();
    let m = Matrix2::new(w1.dot(&(a * w1)), w1.dot(&(a * w2)), w2.dot(&(a * w1)), w2.dot(&(a * w2)));
    let eig = SymmetricEigen::new((m + m.transpose()) * T::lit(0.5));
    let (hi, lo) = if eig.eigenvalues[0] >= eig.eigenvalues[1] { (0, 1) } else { (1, 0) };
    let (l_hi, l_lo) = (eig.eigenvalues[hi], eig.eigenvalues[lo]);
    let cut = tol.threshold(l_hi.abs().max(l_lo.abs()));
    if !(l_hi > cut && l_lo < -cut) {
        return Err(RuledQuadricError::DegeneratePoint);
    }
    let e_hi = w1 * eig.eigenvectors[(0, hi)] + w2 * eig.eigenvectors[(1, hi)];
    let e_lo = w1 * eig.eigenvectors[(0, lo)] + w2 * eig.eigenvectors[(1, lo)];
    let (s_hi, s_lo) = ((-l_lo).sqrt(), l_hi.sqrt());
    Ok([
        Line3::new(*p, e_hi * s_hi + e_lo * s_lo)?,
        Line3::new(*p, e_hi * s_hi - e_lo * s_lo)?,
    ])
}

/// Orthonormal basis of the plane orthogonal to `g`.
fn tangent_basis<T: Real>(g: &Vector3<T>) -> [Vector3<T>; 2] {
    let n = g.normalize();
    let axis = (0..3).min_by(|&i, &j| n[i].abs().partial_cmp(&n[j].abs()).unwrap()).unwrap_or(0);
    let mut e = Vector3::zeros();
    e[axis] = T::one();
    let w1 = n.cross(&e).normalize();
    let w2 = n.cross(&w1);
    [w1, w2]
}

/// Whether two lines on `q` belong to the same ruling family: identical or
/// skew lines do, lines meeting in one point (or parallel) do not.
pub fn same_family<T: Real>(
    q: &Quadric3<T>,
    l1: &Line3<T>,
    l2: &Line3<T>,
    tol: &Tolerance<T>,
) -> Result<bool, RuledQuadricError> {
    for l in [l1, l2] {
        if !line_quadric_intersection(q, l, tol).is_contained() {
            return Err(RuledQuadricError::LineNotOnSurface);
        }
    }
    let scale = T::one() + l1.point().norm() + l2.point().norm();
    let cut = tol.length_threshold(scale);
    let parallel = l1.direction().cross(l2.direction()).norm() <= tol.length_threshold(T::one());
    if parallel && l1.distance_to_point(l2.point()) <= cut {
        return Ok(true);
    }
    Ok(l1.reciprocal_product(l2).abs() > cut)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::{Matrix4, Vector4};

    fn tol() -> Tolerance<f64> {
        Tolerance::default()
    }

    fn standard() -> Quadric3<f64> {
        Quadric3::from_matrix(&Matrix4::from_diagonal(&Vector4::new(1.0, 1.0, -1.0, -1.0))).unwrap()
    }

    fn parallel(a: &Vector3<f64>, b: &Vector3<f64>) -> bool {
        a.normalize().cross(&b.normalize()).norm() < 1e-12
    }

    /// `x² + y² - z² - 1` evaluated along the line, at several parameters.
    fn vanishes_on_surface(l: &Line3<f64>) -> bool {
        [-3.0, -1.0, 0.0, 0.5, 2.0, 7.0].iter().all(|&t| {
            let p = l.at(t);
            (p.x * p.x + p.y * p.y - p.z * p.z - 1.0).abs() < 1e-9 * (1.0 + t * t)
        })
    }

    #[test]
    fn rulings_at_unit_circle_point() {
        let [a, b] = rulings_through_point(&standard(), &Vector3::new(1.0, 0.0, 0.0), &tol()).unwrap();
        let d1 = Vector3::new(0.0, 1.0, 1.0);
        let d2 = Vector3::new(0.0, 1.0, -1.0);
        let dirs = [a.direction(), b.direction()];
        assert!(
            (parallel(dirs[0], &d1) && parallel(dirs[1], &d2)) || (parallel(dirs[0], &d2) && parallel(dirs[1], &d1))
        );
        assert!(vanishes_on_surface(&a) && vanishes_on_surface(&b));
    }

    #[test]
    fn rulings_along_throat_circle() {
        for k in 0..20 {
            let th = k as f64 * 0.31416;
            let p = Vector3::new(th.cos(), th.sin(), 0.0);
            let lines = rulings_through_point(&standard(), &p, &tol()).unwrap();
            let up = Vector3::new(-th.sin(), th.cos(), 1.0);
            let down = Vector3::new(-th.sin(), th.cos(), -1.0);
            for l in &lines {
                assert!(vanishes_on_surface(l));
                assert!(parallel(l.direction(), &up) || parallel(l.direction(), &down));
                assert!(line_quadric_intersection(&standard(), l, &tol()).is_contained());
            }
        }
    }

    #[test]
    fn off_surface_point_is_rejected() {
        assert!(matches!(
            rulings_through_point(&standard(), &Vector3::new(0.0, 0.0, 0.0), &tol()),
            Err(RuledQuadricError::NotOnSurface { .. })
        ));
    }

    #[test]
    fn intersection_examples() {
        let q = standard();
        let z = Line3::new(Vector3::zeros(), Vector3::z()).unwrap();
        assert!(line_quadric_intersection(&q, &z, &tol()).points().is_empty());
        let x = Line3::new(Vector3::zeros(), Vector3::x()).unwrap();
        let hits = line_quadric_intersection(&q, &x, &tol());
        let pts = hits.points();
        assert_eq!(pts.len(), 2);
        assert!((pts[0].point - Vector3::new(-1.0, 0.0, 0.0)).norm() < 1e-12);
        assert!((pts[1].point - Vector3::new(1.0, 0.0, 0.0)).norm() < 1e-12);
        let ruling = Line3::new(Vector3::new(1.0, 0.0, 0.0), Vector3::new(0.0, 1.0, 1.0)).unwrap();
        assert!(line_quadric_intersection(&q, &ruling, &tol()).is_contained());
        let tangent = Line3::new(Vector3::new(1.0, 0.0, 0.0), Vector3::new(0.0, 1.0, 0.0)).unwrap();
        let t = line_quadric_intersection(&q, &tangent, &tol());
        assert_eq!(t.points().len(), 1);
        assert_eq!(t.points()[0].multiplicity, 2);
    }

    #[test]
    fn family_membership() {
        let q = standard();
        let ruling = |th: f64, s: f64| {
            Line3::new(Vector3::new(th.cos(), th.sin(), 0.0), Vector3::new(-th.sin(), th.cos(), s)).unwrap()
        };
        assert!(same_family(&q, &ruling(0.0, 1.0), &ruling(2.0, 1.0), &tol()).unwrap());
        assert!(!same_family(&q, &ruling(0.0, 1.0), &ruling(0.0, -1.0), &tol()).unwrap());
        assert!(same_family(&q, &ruling(0.7, 1.0), &ruling(0.7, 1.0), &tol()).unwrap());
        // Antipodal rulings of opposite families are parallel.
        assert!(!same_family(&q, &ruling(0.0, 1.0), &ruling(std::f64::consts::PI, -1.0), &tol()).unwrap());
        let off = Line3::new(Vector3::zeros(), Vector3::x()).unwrap();
        assert_eq!(same_family(&q, &off, &ruling(0.0, 1.0), &tol()).unwrap_err(), RuledQuadricError::LineNotOnSurface);
    }

    #[test]
    fn family_dichotomy_on_sampled_rulings() {
        let q = standard();
        let mut lines = Vec::new();
        for k in 0..6 {
            let th = 0.9 * k as f64 + 0.1;
            lines.extend(rulings_through_point(&q, &Vector3::new(th.cos(), th.sin(), 0.0), &tol()).unwrap());
        }
        for (i, a) in lines.iter().enumerate() {
            for b in &lines[i + 1..] {
                let skew = a.reciprocal_product(b).abs() > 1e-9;
                let meets = a.distance_to_line(b) < 1e-9;
                assert!(skew != meets || a.direction().cross(b.direction()).norm() < 1e-9);
                assert_eq!(same_family(&q, a, b, &tol()).unwrap(), skew);
            }
        }
    }

    #[test]
    fn closest_points_of_skew_lines() {
        let a = Line3::<f64>::new(Vector3::zeros(), Vector3::x()).unwrap();
        let b = Line3::new(Vector3::new(0.0, 1.0, 2.0), Vector3::z()).unwrap();
        let (t, s) = a.closest_parameters(&b).unwrap();
        assert!(t.abs() < 1e-15 && (s + 2.0).abs() < 1e-15);
        assert!((a.distance_to_line(&b) - 1.0).abs() < 1e-15);
        assert!((a.reciprocal_product(&b).abs() - 1.0).abs() < 1e-15);
    }
}
