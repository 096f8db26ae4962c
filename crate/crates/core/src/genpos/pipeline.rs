use nalgebra::{DVector, Vector3};
use serde::{Deserialize, Serialize};

use super::complex::{subdivide_until, PLMapSpec, Simplex};
use super::predicates::{generic_perturb, Predicate};
use super::GenposError;
use crate::grassmann::{affine_single_flag_bound, affine_three_flag_bound, affine_two_flag_bound};
use crate::ruled_quadric::{transversals_to_four_segments, Segment3};
use crate::scalar::Real;
use crate::subspace::{affine_hull, jointly_skew, AffineFlat, Tolerance};

/// The four certified cases and their parameters.
///
/// `a`: lines meeting three `n`-dimensional images in `R^m`. `b`: lines
/// meeting two. `c`: `d`-planes meeting one. `d`: lines meeting four
/// segment images in `R^3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "case", rename_all = "snake_case")]
pub enum CaseParams {
    A { n: usize, m: usize },
    B { n: usize, m: usize },
    C { n: usize, m: usize, d: usize },
    D,
}

impl CaseParams {
    pub fn marked_count(&self) -> usize {
        match self {
            CaseParams::A { .. } => 3,
            CaseParams::B { .. } => 2,
            CaseParams::C { .. } => 1,
            CaseParams::D => 4,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        match *self {
            CaseParams::A { m, .. } | CaseParams::B { m, .. } | CaseParams::C { m, .. } => m,
            CaseParams::D => 3,
        }
    }

    /// Bound on the largest complex dimension of a marked subcomplex.
    pub fn max_marked_dim(&self) -> usize {
        match *self {
            CaseParams::A { n, .. } | CaseParams::B { n, .. } | CaseParams::C { n, .. } => n,
            CaseParams::D => 1,
        }
    }

    /// `3n + 1 - m`, `2n`, `n + d(m - d)` and `0` for cases a to d.
    pub fn headline_bound(&self) -> i64 {
        match *self {
            CaseParams::A { n, m } => 3 * n as i64 + 1 - m as i64,
            CaseParams::B { n, .. } => 2 * n as i64,
            CaseParams::C { n, m, d } => n as i64 + d as i64 * (m as i64 - d as i64),
            CaseParams::D => 0,
        }
    }

    /// Numeric hypotheses on the parameters alone.
    pub fn check_parameters(&self) -> Result<(), GenposError> {
        let fail = |msg: String| Err(GenposError::Hypothesis(msg));
        match *self {
            CaseParams::A { n, m } | CaseParams::B { n, m } if m < 2 * n + 1 => {
                fail(format!("need m >= 2n + 1, got m={m}, n={n}"))
            }
            CaseParams::C { d: 0, .. } => fail("case c needs d >= 1".into()),
            CaseParams::C { n, m, d } if m < n + d => {
                if m > n {
                    Err(GenposError::OutsideCertifiedRegime(format!(
                        "m={m} lies in [n + 1, n + d) = [{}, {}); case c is certified for m >= n + d",
                        n + 1,
                        n + d
                    )))
                } else {
                    fail(format!("need m >= n + d, got m={m}, n={n}, d={d}"))
                }
            }
            _ => Ok(()),
        }
    }

    fn check<T: Real>(&self, spec: &PLMapSpec<T>) -> Result<(), GenposError> {
        self.check_parameters()?;
        let fail = |msg: String| Err(GenposError::Hypothesis(msg));
        if spec.ambient_dim() != self.ambient_dim() {
            return fail(format!("images live in R^{}, case needs R^{}", spec.ambient_dim(), self.ambient_dim()));
        }
        if spec.marked().len() != self.marked_count() {
            return fail(format!("case needs {} marked subcomplexes, got {}", self.marked_count(), spec.marked().len()));
        }
        for i in 0..spec.marked().len() {
            if spec.marked_dim(i) > self.max_marked_dim() {
                return fail(format!(
                    "marked subcomplex {i} has dimension {} > {}",
                    spec.marked_dim(i),
                    self.max_marked_dim()
                ));
            }
            if *self == CaseParams::D && spec.marked_top_simplices(i).iter().any(|s| s.len() != 2) {
                return fail(format!("marked subcomplex {i} must be a union of edges in case d"));
            }
        }
        Ok(())
    }
}

/// One choice of a top simplex from each marked subcomplex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CombinationReport {
    pub simplices: Vec<Simplex>,
    /// Decided dimension of each image hull.
    pub hull_dims: Vec<isize>,
    pub union_hull_dim: isize,
    /// Skewness of hull pairs `(0,1), (0,2), ...` in lexicographic order.
    pub pairwise_skew: Vec<bool>,
    /// Joint skewness of all hulls; absent for a single simplex.
    pub jointly_skew: Option<bool>,
    /// Lines meeting the four segments (case d only).
    pub transversal_count: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkewReport {
    pub pairs_checked: usize,
    pub pairs_skew: usize,
    pub jointly_skew_combinations: usize,
}

/// Checkable record of a [`perturb_pl_map`] run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GPCertificate {
    pub case: CaseParams,
    pub delta: f64,
    pub seed: u64,
    pub subdivisions: usize,
    pub perturbation_attempts: usize,
    /// Largest hull dimension over the top simplices of each marked
    /// subcomplex.
    pub hull_dims: Vec<isize>,
    pub skew_report: SkewReport,
    pub combinations: Vec<CombinationReport>,
    /// The case's headline formula.
    pub bound: i64,
    /// Worst case of the bound recomputed from the recorded hull dimensions.
    pub recomputed_bound: i64,
    /// Per-combination transversal counts (case d only).
    pub transversal_counts: Vec<usize>,
    /// Largest vertex displacement, which is also the sup distance between
    /// the perturbed and the original map.
    pub max_perturbation: f64,
    /// Largest image diameter of a simplex of the subdivision before
    /// perturbation.
    pub max_piece_diameter: f64,
}

impl GPCertificate {
    /// Internal consistency: every recorded skewness fact holds, the
    /// recomputed bound matches and stays below the headline, case-d counts
    /// are at most 2, and displacements stay below `δ / 2`.
    pub fn is_sound(&self) -> bool {
        let skew = self.combinations.iter().all(|c| c.pairwise_skew.iter().all(|&s| s))
            && self.skew_report.pairs_skew == self.skew_report.pairs_checked;
        let bound = bset_dim_bound(self).is_ok_and(|b| b == self.recomputed_bound);
        let counts = self.transversal_counts.iter().all(|&c| c <= 2);
        skew && bound && counts && self.max_perturbation < self.delta * 0.5
    }

    /// Re-derives every combination from `perturbed` and compares it with the
    /// recorded one.
    pub fn verify<T: Real>(&self, perturbed: &PLMapSpec<T>, tol: &Tolerance<T>) -> Result<(), GenposError> {
        let combinations = certify_combinations(perturbed, &self.case, tol)?;
        if combinations != self.combinations {
            return Err(GenposError::InconsistentCertificate(
                "recorded combinations differ from the perturbed map".into(),
            ));
        }
        if bset_dim_bound(self)? != self.recomputed_bound {
            return Err(GenposError::InconsistentCertificate("recomputed bound changed".into()));
        }
        Ok(())
    }
}

/// Subdivides until image diameters are below `δ / 2`, then perturbs all
/// vertex images within `δ / 2` so that the case's predicates hold, and
/// certifies the result.
pub fn perturb_pl_map<T: Real>(
    spec: &PLMapSpec<T>,
    case: CaseParams,
    delta: T,
    seed: u64,
    tol: &Tolerance<T>,
) -> Result<(PLMapSpec<T>, GPCertificate), GenposError> {
    case.check(spec)?;
    let (fine, subdivisions) = subdivide_until(spec, delta)?;
    let predicates = case_predicates(&fine, &case);
    let perturbation = generic_perturb(fine.images(), delta * T::lit(0.5), &predicates, seed, tol)?;
    let perturbed = fine.with_images(perturbation.points)?;

    let combinations = certify_combinations(&perturbed, &case, tol)?;
    let mut hull_dims = vec![-1isize; case.marked_count()];
    let mut skew_report = SkewReport { pairs_checked: 0, pairs_skew: 0, jointly_skew_combinations: 0 };
    for c in &combinations {
        for (slot, &d) in hull_dims.iter_mut().zip(&c.hull_dims) {
            *slot = (*slot).max(d);
        }
        skew_report.pairs_checked += c.pairwise_skew.len();
        skew_report.pairs_skew += c.pairwise_skew.iter().filter(|&&s| s).count();
        skew_report.jointly_skew_combinations += usize::from(c.jointly_skew == Some(true));
    }
    let transversal_counts = combinations.iter().filter_map(|c| c.transversal_count).collect();
    let mut cert = GPCertificate {
        case,
        delta: delta.as_f64(),
        seed,
        subdivisions,
        perturbation_attempts: perturbation.attempts,
        hull_dims,
        skew_report,
        combinations,
        bound: case.headline_bound(),
        recomputed_bound: 0,
        transversal_counts,
        max_perturbation: perturbation.max_displacement.as_f64(),
        max_piece_diameter: fine.max_image_diameter().as_f64(),
    };
    cert.recomputed_bound = bset_dim_bound(&cert)?;
    Ok((perturbed, cert))
}

fn case_predicates<T: Real>(spec: &PLMapSpec<T>, case: &CaseParams) -> Vec<Predicate> {
    let tops: Vec<Vec<Vec<usize>>> = (0..spec.marked().len())
        .map(|i| spec.marked_top_simplices(i).iter().map(|s| spec.indices(s)).collect())
        .collect();
    let mut preds: Vec<Predicate> =
        tops.iter().flatten().map(|ix| Predicate::GeneralPosition { indices: Some(ix.clone()) }).collect();
    match case {
        CaseParams::A { .. } | CaseParams::B { .. } => {
            for i in 0..tops.len() {
                for j in (i + 1)..tops.len() {
                    for a in &tops[i] {
                        for b in &tops[j] {
                            preds.push(Predicate::PairwiseSkew { groups: vec![a.clone(), b.clone()] });
                        }
                    }
                }
            }
        }
        CaseParams::C { .. } => {}
        CaseParams::D => {
            for combo in product(&tops) {
                let endpoints: Vec<usize> = combo.iter().flat_map(|s| s.iter().copied()).collect();
                preds.push(Predicate::GeneralPosition { indices: Some(endpoints) });
                let seg = |k: usize| [combo[k][0], combo[k][1]];
                preds.push(Predicate::Condition7 { segments: [seg(0), seg(1), seg(2)] });
            }
        }
    }
    preds
}

/// Cartesian product with the last factor varying fastest.
fn product<X: Clone>(factors: &[Vec<X>]) -> Vec<Vec<X>> {
    let mut out = vec![Vec::new()];
    for f in factors {
        out = out.iter().flat_map(|prefix| f.iter().map(move |x| [prefix.clone(), vec![x.clone()]].concat())).collect();
    }
    out
}

fn certify_combinations<T: Real>(
    spec: &PLMapSpec<T>,
    case: &CaseParams,
    tol: &Tolerance<T>,
) -> Result<Vec<CombinationReport>, GenposError> {
    case.check(spec)?;
    let tops: Vec<Vec<Simplex>> = (0..spec.marked().len()).map(|i| spec.marked_top_simplices(i)).collect();
    let points = |s: &Simplex| -> Vec<DVector<T>> { s.iter().map(|&v| spec.image(v).clone()).collect() };
    let mut reports = Vec::new();
    for combo in product(&tops) {
        let hulls: Vec<AffineFlat<T>> = combo.iter().map(|s| affine_hull(&points(s), tol)).collect::<Result<_, _>>()?;
        let all: Vec<DVector<T>> = combo.iter().flat_map(|s| points(s)).collect();
        let mut pairwise_skew = Vec::new();
        for i in 0..hulls.len() {
            for j in (i + 1)..hulls.len() {
                pairwise_skew.push(jointly_skew(&[hulls[i].clone(), hulls[j].clone()], tol)?);
            }
        }
        let jointly = if hulls.len() > 1 { Some(jointly_skew(&hulls, tol)?) } else { None };
        let transversal_count = match case {
            CaseParams::D => {
                let seg = |s: &Simplex| {
                    let (a, b) = (spec.image(s[0]), spec.image(s[1]));
                    Segment3::new(Vector3::new(a[0], a[1], a[2]), Vector3::new(b[0], b[1], b[2]))
                };
                let segs = [seg(&combo[0])?, seg(&combo[1])?, seg(&combo[2])?, seg(&combo[3])?];
                let set = transversals_to_four_segments(&segs, tol).map_err(|e| {
                    if e.is_degeneracy() {
                        GenposError::Degenerate(format!("segments {combo:?}: {e}"))
                    } else {
                        e.into()
                    }
                })?;
                Some(set.count())
            }
            _ => None,
        };
        reports.push(CombinationReport {
            hull_dims: hulls.iter().map(|h| h.dim()).collect(),
            union_hull_dim: affine_hull(&all, tol)?.dim(),
            simplices: combo,
            pairwise_skew,
            jointly_skew: jointly,
            transversal_count,
        });
    }
    Ok(reports)
}

/// Recomputes the dimension bound from the recorded hull dimensions and
/// checks it against the headline formula.
///
/// Case a evaluates the three-flag bound in the hull of the three images,
/// which is empty (`-1`) when they are jointly skew. The headline is
/// compared after clamping at `-1`.
pub fn bset_dim_bound(cert: &GPCertificate) -> Result<i64, GenposError> {
    let inconsistent = |msg: String| Err(GenposError::InconsistentCertificate(msg));
    if cert.combinations.is_empty() {
        return inconsistent("certificate has no combinations".into());
    }
    let m = cert.case.ambient_dim() as i64;
    let mut worst = -1i64;
    for c in &cert.combinations {
        if c.hull_dims.len() != cert.case.marked_count() || c.hull_dims.iter().any(|&d| d < 0) {
            return inconsistent(format!("combination {:?} has malformed hull dimensions", c.simplices));
        }
        if c.pairwise_skew.iter().any(|&s| !s) {
            return inconsistent(format!("combination {:?} has non-skew hulls", c.simplices));
        }
        let n: Vec<i64> = c.hull_dims.iter().map(|&d| d as i64).collect();
        let value = match cert.case {
            CaseParams::A { .. } => {
                let m_eff = c.union_hull_dim as i64;
                if m_eff > n.iter().sum::<i64>() + 1 {
                    -1
                } else {
                    affine_three_flag_bound(m_eff, n[0], n[1], n[2], 0)?.as_signed()
                }
            }
            CaseParams::B { .. } => affine_two_flag_bound(m, n[0], 0, n[1], 0)?.as_signed(),
            CaseParams::C { d, .. } => affine_single_flag_bound(m, d as i64, n[0], 0)?.as_signed(),
            CaseParams::D => match c.transversal_count {
                Some(k) if k <= 2 => 0,
                Some(k) => return inconsistent(format!("{k} transversals to segments {:?}", c.simplices)),
                None => return inconsistent("case d combination without a transversal count".into()),
            },
        };
        worst = worst.max(value);
    }
    let headline = cert.case.headline_bound().max(-1);
    if worst > headline {
        return inconsistent(format!("recomputed bound {worst} exceeds the headline bound {headline}"));
    }
    Ok(worst)
}
