use nalgebra::{DMatrix, DVector, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::GenposError;
use crate::scalar::Real;
use crate::subspace::{affine_hull, jointly_skew, AffineFlat, LinSubspace, Tolerance};

/// Rank of the differences `p_i - p_0`.
fn affine_rank<T: Real>(points: &[&DVector<T>], tol: &Tolerance<T>) -> usize {
    let m = points[0].len();
    let mut diffs = DMatrix::zeros(m, points.len() - 1);
    for (j, p) in points.iter().skip(1).enumerate() {
        diffs.set_column(j, &(*p - points[0]));
    }
    LinSubspace::rank_of(&diffs, tol)
}

fn affinely_independent<T: Real>(points: &[&DVector<T>], tol: &Tolerance<T>) -> bool {
    points.len() <= 1 || affine_rank(points, tol) == points.len() - 1
}

/// Calls `f` on each `k`-subset of `0..n` in lexicographic order until it
/// returns false.
fn all_subsets(n: usize, k: usize, mut f: impl FnMut(&[usize]) -> bool) -> bool {
    if k > n {
        return true;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if !f(&idx) {
            return false;
        }
        let Some(i) = (0..k).rev().find(|&i| idx[i] < n - k + i) else {
            return true;
        };
        idx[i] += 1;
        for j in (i + 1)..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Whether every subset of at most `m + 1` of the points is affinely
/// independent, `m` being the ambient dimension.
///
/// Subsets of an independent set are independent, so only subsets of size
/// `min(N, m + 1)` are checked.
pub fn general_position<T: Real>(points: &[DVector<T>], tol: &Tolerance<T>) -> bool {
    let Some(first) = points.first() else {
        return true;
    };
    let k = points.len().min(first.len() + 1);
    all_subsets(points.len(), k, |s| {
        let sub: Vec<&DVector<T>> = s.iter().map(|&i| &points[i]).collect();
        affinely_independent(&sub, tol)
    })
}

/// No four of the six points lie in a common plane.
pub fn check_condition_6<T: Real>(points: &[Vector3<T>], tol: &Tolerance<T>) -> Result<bool, GenposError> {
    if points.len() != 6 {
        return Err(GenposError::InvalidParameter(format!("condition 6 needs six points, got {}", points.len())));
    }
    let pts: Vec<DVector<T>> = points.iter().map(|p| DVector::from_column_slice(p.as_slice())).collect();
    Ok(all_subsets(6, 4, |s| {
        let sub: Vec<&DVector<T>> = s.iter().map(|&i| &pts[i]).collect();
        affine_rank(&sub, tol) == 3
    }))
}

/// No plane is parallel to all three directions.
pub fn check_condition_7<T: Real>(directions: &[Vector3<T>; 3], tol: &Tolerance<T>) -> Result<bool, GenposError> {
    if directions.iter().any(|d| d.iter().all(|x| *x == T::zero())) {
        return Err(GenposError::InvalidParameter("condition 7 needs nonzero directions".into()));
    }
    let mut m = DMatrix::zeros(3, 3);
    for (j, d) in directions.iter().enumerate() {
        m.set_column(j, &DVector::from_column_slice(d.as_slice()));
    }
    Ok(LinSubspace::rank_of(&m, tol) == 3)
}

/// Predicates checked by [`generic_perturb`], phrased over point indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "predicate", rename_all = "snake_case")]
pub enum Predicate {
    /// [`general_position`] of the listed points, or of all points.
    GeneralPosition { indices: Option<Vec<usize>> },
    /// [`check_condition_6`] of six 3-points.
    Condition6 { indices: [usize; 6] },
    /// [`check_condition_7`] of the directions `p_b - p_a` of three pairs.
    Condition7 { segments: [[usize; 2]; 3] },
    /// The hulls of every two groups are skew.
    PairwiseSkew { groups: Vec<Vec<usize>> },
    /// The hulls of all groups are jointly skew.
    JointSkew { groups: Vec<Vec<usize>> },
}

impl Predicate {
    fn indices(&self) -> Vec<usize> {
        match self {
            Predicate::GeneralPosition { indices } => indices.clone().unwrap_or_default(),
            Predicate::Condition6 { indices } => indices.to_vec(),
            Predicate::Condition7 { segments } => segments.iter().flatten().copied().collect(),
            Predicate::PairwiseSkew { groups } | Predicate::JointSkew { groups } => {
                groups.iter().flatten().copied().collect()
            }
        }
    }

    /// Checks indices and group shapes against `points`.
    pub fn validate<T: Real>(&self, points: &[DVector<T>]) -> Result<(), GenposError> {
        let bad = |msg: String| Err(GenposError::InvalidParameter(msg));
        if let Some(i) = self.indices().into_iter().find(|&i| i >= points.len()) {
            return bad(format!("predicate index {i} out of range for {} points", points.len()));
        }
        let m = points.first().map_or(0, |p| p.len());
        match self {
            Predicate::Condition6 { .. } | Predicate::Condition7 { .. } if m != 3 => {
                bad("conditions 6 and 7 need points in R^3".into())
            }
            Predicate::PairwiseSkew { groups } | Predicate::JointSkew { groups }
                if groups.len() < 2 || groups.iter().any(|g| g.is_empty()) =>
            {
                bad("skewness predicates need at least two nonempty groups".into())
            }
            _ => Ok(()),
        }
    }

    pub fn holds<T: Real>(&self, points: &[DVector<T>], tol: &Tolerance<T>) -> Result<bool, GenposError> {
        self.validate(points)?;
        let pick = |ix: &[usize]| -> Vec<DVector<T>> { ix.iter().map(|&i| points[i].clone()).collect() };
        let v3 = |p: &DVector<T>| Vector3::new(p[0], p[1], p[2]);
        Ok(match self {
            Predicate::GeneralPosition { indices: None } => general_position(points, tol),
            Predicate::GeneralPosition { indices: Some(ix) } => general_position(&pick(ix), tol),
            Predicate::Condition6 { indices } => {
                let pts: Vec<Vector3<T>> = indices.iter().map(|&i| v3(&points[i])).collect();
                check_condition_6(&pts, tol)?
            }
            Predicate::Condition7 { segments } => {
                let dirs = segments.map(|[a, b]| v3(&points[b]) - v3(&points[a]));
                if dirs.iter().any(|d| d.iter().all(|x| *x == T::zero())) {
                    return Ok(false);
                }
                check_condition_7(&dirs, tol)?
            }
            Predicate::PairwiseSkew { groups } => {
                let hulls = hulls(points, groups, tol)?;
                let mut ok = true;
                for i in 0..hulls.len() {
                    for j in (i + 1)..hulls.len() {
                        ok &= jointly_skew(&[hulls[i].clone(), hulls[j].clone()], tol)?;
                    }
                }
                ok
            }
            Predicate::JointSkew { groups } => jointly_skew(&hulls(points, groups, tol)?, tol)?,
        })
    }
}

fn hulls<T: Real>(points: &[DVector<T>], groups: &[Vec<usize>], tol: &Tolerance<T>) -> Result<Vec<AffineFlat<T>>, GenposError> {
    groups
        .iter()
        .map(|g| {
            let pts: Vec<DVector<T>> = g.iter().map(|&i| points[i].clone()).collect();
            Ok(affine_hull(&pts, tol)?)
        })
        .collect()
}

/// Draws allowed per [`generic_perturb`] call.
pub const RETRY_BUDGET: usize = 64;

/// Output of [`generic_perturb`].
#[derive(Debug, Clone, PartialEq)]
pub struct Perturbation<T: Real> {
    pub points: Vec<DVector<T>>,
    /// 1-based index of the accepted draw.
    pub attempts: usize,
    pub max_displacement: T,
}

/// Moves every point by an independent uniform draw from the open
/// `ε`-ball until all predicates hold.
///
/// Draws come from a ChaCha8 stream seeded with `seed`, so results are
/// reproducible. Fails after [`RETRY_BUDGET`] rejected draws.
pub fn generic_perturb<T: Real>(
    points: &[DVector<T>],
    eps: T,
    predicates: &[Predicate],
    seed: u64,
    tol: &Tolerance<T>,
) -> Result<Perturbation<T>, GenposError> {
    if !(eps > T::zero()) || !eps.is_finite() {
        return Err(GenposError::InvalidParameter(format!("perturbation radius must be positive, got {}", eps.as_f64())));
    }
    let m = points.first().map_or(0, |p| p.len());
    if points.iter().any(|p| p.len() != m || p.iter().any(|x| !x.is_finite())) {
        return Err(GenposError::InvalidParameter("points must be finite and share one dimension".into()));
    }
    for p in predicates {
        p.validate(points)?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // Keeps rounding in `U^(1/m)` from reaching the boundary of the ball.
    let radius = eps * T::lit(1.0 - 1e-9);
    for attempt in 1..=RETRY_BUDGET {
        let mut max_displacement = T::zero();
        let moved: Vec<DVector<T>> = points
            .iter()
            .map(|p| {
                let offset = ball_sample(&mut rng, m, radius);
                max_displacement = max_displacement.max(offset.norm());
                p + offset
            })
            .collect();
        let mut accepted = true;
        for pred in predicates {
            if !pred.holds(&moved, tol)? {
                accepted = false;
                break;
            }
        }
        if accepted {
            return Ok(Perturbation { points: moved, attempts: attempt, max_displacement });
        }
    }
    Err(GenposError::RetryExhausted { attempts: RETRY_BUDGET })
}

/// Uniform sample of the ball of the given radius in `R^m`.
fn ball_sample<T: Real>(rng: &mut ChaCha8Rng, m: usize, radius: T) -> DVector<T> {
    loop {
        let g: DVector<f64> = DVector::from_fn(m, |_, _| rng.sample(StandardNormal));
        let norm = g.norm();
        if norm == 0.0 {
            continue;
        }
        let u: f64 = rng.random();
        let scale = u.powf(1.0 / m as f64) / norm;
        return g.map(|x| T::lit(x * scale) * radius);
    }
}
