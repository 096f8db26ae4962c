use nalgebra::Vector3;

use super::lines::{line_quadric_intersection, rulings_through_point, LineIntersection};
use super::quadric::quadric_through_three_skew_lines;
use super::{Line3, Quadric3, RuledQuadricError, Segment3};
use crate::scalar::Real;
use crate::subspace::Tolerance;

/// A line meeting all four segments.
#[derive(Debug, Clone, PartialEq)]
pub struct Transversal<T: Real> {
    pub line: Line3<T>,
    /// Segment parameters `s_i` of the hits, `S_i.at(s_i)`.
    pub segment_params: [T; 4],
    /// Hit points on the transversal.
    pub hits: [Vector3<T>; 4],
    /// Largest distance between the transversal and a segment carrier.
    pub max_distance: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransversalSet<T: Real> {
    pub quadric: Quadric3<T>,
    /// Real points of the fourth carrier on the quadric, each the foot of one
    /// line meeting all four carriers.
    pub carrier_hits: usize,
    /// The fourth carrier touches the quadric (a double root).
    pub tangent: bool,
    pub lines: Vec<Transversal<T>>,
}

impl<T: Real> TransversalSet<T> {
    pub fn count(&self) -> usize {
        self.lines.len()
    }
}

/// Lines meeting the four closed segments.
///
/// The quadric through the carriers of `S1, S2, S3` contains every line
/// meeting those carriers. Each such line passes through a point where the
/// carrier of `S4` meets the quadric, and is the ruling through that point
/// that meets the first three carriers. Candidates are kept when each hit
/// lies within its segment.
pub fn transversals_to_four_segments<T: Real>(
    segments: &[Segment3<T>; 4],
    tol: &Tolerance<T>,
) -> Result<TransversalSet<T>, RuledQuadricError> {
    let points = [
        *segments[0].a(),
        *segments[0].b(),
        *segments[1].a(),
        *segments[1].b(),
        *segments[2].a(),
        *segments[2].b(),
    ];
    let quadric = quadric_through_three_skew_lines(&points, tol)?;
    let carriers: [Line3<T>; 4] = std::array::from_fn(|i| segments[i].carrier());
    let roots = match line_quadric_intersection(&quadric, &carriers[3], tol) {
        LineIntersection::Contained => return Err(RuledQuadricError::InfiniteFamily),
        LineIntersection::Points(p) => p,
    };

    let scale = segments
        .iter()
        .flat_map(|s| [s.a().norm(), s.b().norm()])
        .fold(T::zero(), |acc, x| acc.max(x));
    let dist_cut = tol.length_threshold(scale);
    let param_cut = tol.threshold(T::one());
    let tangent = roots.iter().any(|r| r.multiplicity == 2);

    let mut lines = Vec::new();
    for root in &roots {
        let ruling = family_two_ruling(&quadric, &root.point, &carriers[..3], tol)?;
        let mut params = [T::zero(); 4];
        let mut hits = [Vector3::zeros(); 4];
        let mut max_distance = T::zero();
        let mut inside = true;
        for i in 0..3 {
            let Some((t, s)) = ruling.closest_parameters(&carriers[i]) else {
                inside = false;
                break;
            };
            let on_ruling = ruling.at(t);
            let on_carrier = carriers[i].at(s);
            max_distance = max_distance.max((on_ruling - on_carrier).norm());
            params[i] = s / segments[i].length();
            hits[i] = on_ruling;
        }
        if !inside {
            continue;
        }
        params[3] = segments[3].parameter_of(&root.point);
        hits[3] = root.point;
        let within = params.iter().all(|&s| s >= -param_cut && s <= T::one() + param_cut);
        if within && max_distance <= dist_cut {
            let line = Line3::new(root.point, *ruling.direction())?;
            lines.push(Transversal { line, segment_params: params, hits, max_distance });
        }
    }
    Ok(TransversalSet { quadric, carrier_hits: roots.len(), tangent, lines })
}

/// Of the two rulings through `p`, the one closer to meeting all `base` lines.
fn family_two_ruling<T: Real>(
    q: &Quadric3<T>,
    p: &Vector3<T>,
    base: &[Line3<T>],
    tol: &Tolerance<T>,
) -> Result<Line3<T>, RuledQuadricError> {
    let pair = rulings_through_point(q, p, tol)?;
    let miss = |l: &Line3<T>| base.iter().fold(T::zero(), |acc, b| acc.max(l.distance_to_line(b)));
    let [a, b] = pair;
    Ok(if miss(&a) <= miss(&b) { a } else { b })
}
