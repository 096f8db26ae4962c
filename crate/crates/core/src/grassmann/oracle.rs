//! Numerical local dimension of `{V : dim(V ∩ V^n) ≥ r}` at a witness.
//!
//! Nearby `d`-planes are charted as graphs `V(L) = span(B + B_perp L)` with
//! `L` an `(m - d) x d` matrix. The condition `dim(V ∩ V^n) ≥ r` is the
//! vanishing of every `(d + n - r + 1)`-minor of `[B + B_perp L | B_n]`. The
//! local dimension is `(m - d) d` minus the rank of the Jacobian of those
//! minors, which is estimated by central differences.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{feasible_single, GrassmannError};
use crate::linalg::SortedSvd;
use crate::scalar::Real;
use crate::subspace::{intersect_linear, orthogonal_complement, LinSubspace, Tolerance};

/// Central-difference step for the minor Jacobian.
pub const FD_STEP: f64 = 1e-6;

/// A pair `(V^d, V^n)` with `dim(V^d ∩ V^n) = r`.
#[derive(Debug, Clone)]
pub struct StratumWitness<T: Real> {
    pub plane: LinSubspace<T>,
    pub flag: LinSubspace<T>,
}

/// Draws a random orthonormal frame and builds the witness from it: the first
/// `r` frame vectors are shared, the next `d - r` complete the plane and the
/// following `n - r` complete the flag.
pub fn stratum_witness<T: Real>(
    m: i64,
    d: i64,
    n: i64,
    r: i64,
    seed: u64,
) -> Result<StratumWitness<T>, GrassmannError> {
    if !feasible_single(m, d, n, r) {
        return Err(GrassmannError::Infeasible { m, d, n, r });
    }
    let (m, d, n, r) = (m as usize, d as usize, n as usize, r as usize);
    let frame = random_orthonormal_frame::<T>(m, seed);
    let mut plane = DMatrix::zeros(m, d);
    let mut flag = DMatrix::zeros(m, n);
    for j in 0..r {
        plane.set_column(j, &frame.column(j));
        flag.set_column(j, &frame.column(j));
    }
    for j in r..d {
        plane.set_column(j, &frame.column(j));
    }
    for j in r..n {
        flag.set_column(j, &frame.column(d + (j - r)));
    }
    Ok(StratumWitness {
        plane: LinSubspace::from_basis_unchecked(plane),
        flag: LinSubspace::from_basis_unchecked(flag),
    })
}

pub(crate) fn random_orthonormal_frame<T: Real>(m: usize, seed: u64) -> DMatrix<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gaussian = DMatrix::<T>::from_fn(m, m, |_, _| {
        let x: f64 = StandardNormal.sample(&mut rng);
        T::lit(x)
    });
    gaussian.qr().q()
}

/// Knobs for [`stratum_dim_oracle`].
#[derive(Debug, Clone, Copy)]
pub struct OracleSettings<T> {
    pub step: T,
    /// The rank must not change when the relative threshold is multiplied or
    /// divided by this factor; otherwise the measurement is indeterminate.
    pub stability_factor: T,
}

impl<T: Real> Default for OracleSettings<T> {
    fn default() -> Self {
        Self { step: T::lit(FD_STEP), stability_factor: T::lit(10.0) }
    }
}

/// Measured local dimension of `G(m, d; n, ≥ r)` at `witness.plane`.
pub fn stratum_dim_oracle<T: Real>(
    m: i64,
    d: i64,
    n: i64,
    r: i64,
    witness: &StratumWitness<T>,
    tol: &Tolerance<T>,
) -> Result<usize, GrassmannError> {
    stratum_dim_oracle_with(m, d, n, r, witness, tol, &OracleSettings::default())
}

pub fn stratum_dim_oracle_with<T: Real>(
    m: i64,
    d: i64,
    n: i64,
    r: i64,
    witness: &StratumWitness<T>,
    tol: &Tolerance<T>,
    settings: &OracleSettings<T>,
) -> Result<usize, GrassmannError> {
    if !feasible_single(m, d, n, r) {
        return Err(GrassmannError::Infeasible { m, d, n, r });
    }
    let (m, d, n, r) = (m as usize, d as usize, n as usize, r as usize);
    let plane = &witness.plane;
    let flag = &witness.flag;
    if plane.ambient_dim() != m || flag.ambient_dim() != m || plane.dim() != d || flag.dim() != n {
        return Err(GrassmannError::Hypothesis(format!(
            "witness shape ({}-plane, {}-flag in R^{}) does not match (d, n, m) = ({d}, {n}, {m})",
            plane.dim(),
            flag.dim(),
            plane.ambient_dim()
        )));
    }
    let meet = intersect_linear(plane, flag, tol)?.dim();
    if meet != r {
        return Err(GrassmannError::WitnessNotInStratum { expected: r, found: meet });
    }

    let chart_dim = (m - d) * d;
    let size = d + n - r + 1;
    if size > m || chart_dim == 0 {
        return Ok(chart_dim);
    }

    let perp = orthogonal_complement(plane);
    let mut combined = DMatrix::zeros(m, d + n);
    combined.view_mut((0, 0), (m, d)).copy_from(plane.basis());
    combined.view_mut((0, d), (m, n)).copy_from(flag.basis());

    let minors = MinorSet::new(m, d + n, size);
    let two_h = settings.step + settings.step;
    let mut jacobian = DMatrix::zeros(minors.len(), chart_dim);
    for i in 0..(m - d) {
        for j in 0..d {
            let shift = perp.basis().column(i) * settings.step;
            let mut forward = combined.clone();
            let mut backward = combined.clone();
            {
                let mut col = forward.column_mut(j);
                col += &shift;
            }
            {
                let mut col = backward.column_mut(j);
                col -= &shift;
            }
            let diff = (minors.evaluate(&forward) - minors.evaluate(&backward)) / two_h;
            jacobian.set_column(i * d + j, &diff);
        }
    }

    let svd = SortedSvd::new(&jacobian);
    let smax = svd.sigma_max();
    let rank = svd.rank_above(tol.threshold(smax));
    let loose = svd.rank_above(tol.threshold(smax) * settings.stability_factor);
    let tight = svd.rank_above(tol.threshold(smax) / settings.stability_factor);
    if loose != rank || tight != rank {
        return Err(GrassmannError::Indeterminate { ranks: vec![loose, rank, tight] });
    }
    Ok(chart_dim - rank)
}

/// All `size x size` minors of an `rows x cols` matrix, in a fixed order.
struct MinorSet {
    row_sets: Vec<Vec<usize>>,
    col_sets: Vec<Vec<usize>>,
}

impl MinorSet {
    fn new(rows: usize, cols: usize, size: usize) -> Self {
        Self { row_sets: combinations(rows, size), col_sets: combinations(cols, size) }
    }

    fn len(&self) -> usize {
        self.row_sets.len() * self.col_sets.len()
    }

    fn evaluate<T: Real>(&self, matrix: &DMatrix<T>) -> DVector<T> {
        let size = self.row_sets.first().map_or(0, Vec::len);
        let mut out = DVector::zeros(self.len());
        let mut sub = DMatrix::zeros(size, size);
        let mut k = 0;
        for rows in &self.row_sets {
            for cols in &self.col_sets {
                for (a, &ri) in rows.iter().enumerate() {
                    for (b, &ci) in cols.iter().enumerate() {
                        sub[(a, b)] = matrix[(ri, ci)];
                    }
                }
                out[k] = sub.clone().lu().determinant();
                k += 1;
            }
        }
        out
    }
}

pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let mut i = k;
        while i > 0 && idx[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}
