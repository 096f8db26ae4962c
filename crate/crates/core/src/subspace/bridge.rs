use nalgebra::DMatrix;

use super::linear::{check_same_ambient, PairDecomposition};
use super::{jointly_skew, AffineFlat, LinSubspace, SubspaceError, Tolerance};
use crate::linalg::orthonormal_top;
use crate::scalar::Real;

impl<T: Real> AffineFlat<T> {
    /// The `(d+1)`-dimensional subspace of `R^{m+1}` spanned by `(v, 0)` for
    /// directions `v` and by `(base, 1)`.
    pub fn homogenize(&self) -> Result<LinSubspace<T>, SubspaceError> {
        let (base, dir) = self.parts()?;
        let m = self.ambient_dim();
        let mut basis = DMatrix::zeros(m + 1, dir.dim() + 1);
        basis.view_mut((0, 0), (m, dir.dim())).copy_from(dir.basis());
        let mut lifted = base.clone().insert_row(m, T::one());
        lifted /= lifted.norm();
        basis.set_column(dir.dim(), &lifted);
        Ok(LinSubspace::from_basis_unchecked(orthonormal_top(&basis, dir.dim() + 1)))
    }

    /// Inverse of [`AffineFlat::homogenize`]: the points `x` with `(x, 1)` in
    /// `w`. Empty when `w` lies in the hyperplane at infinity.
    pub fn dehomogenize(w: &LinSubspace<T>, tol: &Tolerance<T>) -> Result<Self, SubspaceError> {
        let ambient = w.ambient_dim();
        if ambient < 2 {
            return Err(SubspaceError::ZeroAmbient);
        }
        let m = ambient - 1;
        // Projection of e_{m+1} onto w has the largest last coordinate.
        let last_row = w.basis().row(m).transpose();
        let lift = w.basis() * &last_row;
        let height = lift[m];
        if height <= tol.threshold(T::one()) {
            return Ok(Self::empty(m));
        }
        let point = lift.rows(0, m).into_owned() / height;
        let finite = LinSubspace::coordinate(ambient, &(0..m).collect::<Vec<_>>());
        let at_infinity = PairDecomposition::new(w, &finite).intersection(tol);
        let count = at_infinity.dim();
        let dir_basis = at_infinity.basis().rows(0, m).into_owned();
        let direction = LinSubspace::from_basis_unchecked(orthonormal_top(&dir_basis, count));
        Self::through(point, direction)
    }
}

/// The unique subspace `W ⊇ V^r` of dimension `2r` meeting `V1` and `V2` each
/// in dimension `r`, namely `W = (V^r + V1) ∩ (V^r + V2)`.
pub fn bridge_subspace<T: Real>(
    vr: &LinSubspace<T>,
    v1: &LinSubspace<T>,
    v2: &LinSubspace<T>,
    tol: &Tolerance<T>,
) -> Result<LinSubspace<T>, SubspaceError> {
    check_same_ambient(vr, v1)?;
    check_same_ambient(vr, v2)?;
    let pairs = [(vr, v1, "V^r", "V1"), (vr, v2, "V^r", "V2"), (v1, v2, "V1", "V2")];
    for (a, b, na, nb) in pairs {
        if !a.is_zero() && !b.is_zero() && PairDecomposition::new(a, b).intersection(tol).dim() > 0 {
            return Err(SubspaceError::NontrivialIntersection(na, nb));
        }
    }
    if vr.is_zero() {
        return Ok(LinSubspace::zero(vr.ambient_dim()));
    }
    let outer = PairDecomposition::new(v1, v2).sum(tol);
    if !outer.contains(vr, tol) {
        return Err(SubspaceError::NotInSum);
    }
    let w1 = PairDecomposition::new(vr, v1).sum(tol);
    let w2 = PairDecomposition::new(vr, v2).sum(tol);
    let w = PairDecomposition::new(&w1, &w2).intersection(tol);
    if w.dim() != 2 * vr.dim() {
        return Err(SubspaceError::Degenerate("bridge subspace has the wrong dimension"));
    }
    Ok(w)
}

/// The unique `(2r+1)`-flat containing the `r`-flat `pr` and meeting `p1`
/// and `p2` each in dimension at least `r`, if one exists.
pub fn bridge_flat<T: Real>(
    pr: &AffineFlat<T>,
    p1: &AffineFlat<T>,
    p2: &AffineFlat<T>,
    tol: &Tolerance<T>,
) -> Result<Option<AffineFlat<T>>, SubspaceError> {
    let flats = [pr, p1, p2];
    for i in 0..3 {
        for j in i + 1..3 {
            if !jointly_skew(&[flats[i].clone(), flats[j].clone()], tol)? {
                return Err(SubspaceError::NotSkew(i, j));
            }
        }
    }
    let vr = pr.homogenize()?;
    let v1 = p1.homogenize()?;
    let v2 = p2.homogenize()?;
    match bridge_subspace(&vr, &v1, &v2, tol) {
        Ok(w) => {
            let flat = AffineFlat::dehomogenize(&w, tol)?;
            if flat.dim() != 2 * pr.dim() + 1 {
                return Err(SubspaceError::Degenerate("bridge flat has the wrong dimension"));
            }
            Ok(Some(flat))
        }
        Err(SubspaceError::NotInSum) => Ok(None),
        Err(e) => Err(e),
    }
}
