use super::{GrassmannError, StratumDim};

/// `0 <= r <= d <= n + d - r <= m`: the stratum `G(m, d; n, r)` is nonempty.
pub fn feasible_single(m: i64, d: i64, n: i64, r: i64) -> bool {
    0 <= r && r <= d && d <= n + d - r && n + d - r <= m
}

fn require_feasible(m: i64, d: i64, n: i64, r: i64) -> Result<(), GrassmannError> {
    if feasible_single(m, d, n, r) {
        Ok(())
    } else {
        Err(GrassmannError::Infeasible { m, d, n, r })
    }
}

/// `dim G(m, d; n, r) = (n - r) r + (m - d)(d - r)`.
pub fn single_flag_dim(m: i64, d: i64, n: i64, r: i64) -> Result<StratumDim, GrassmannError> {
    require_feasible(m, d, n, r)?;
    Ok(StratumDim::from_nonnegative((n - r) * r + (m - d) * (d - r)))
}

/// `dim G(m, d; n, ≥ r)`, evaluated through the stratification
/// `dim G(≥ r) = max(dim G(≥ r + 1), dim G(= r))` rather than the closed form.
pub fn single_flag_dim_geq(m: i64, d: i64, n: i64, r: i64) -> Result<StratumDim, GrassmannError> {
    require_feasible(m, d, n, r)?;
    let mut top = r;
    while feasible_single(m, d, n, top + 1) {
        top += 1;
    }
    // Unwind from the deepest stratum, where `≥` and `=` coincide.
    let mut acc = single_flag_dim(m, d, n, top)?;
    for level in (r..top).rev() {
        acc = acc.max(single_flag_dim(m, d, n, level)?);
    }
    Ok(acc)
}

/// Upper bound on the dimension of the affine stratum `M(m, d; n, ≥ r)`:
/// `(n - r)(r + 1) + (m - d)(d - r)` for `-1 <= r <= d <= n + d - r <= m`.
pub fn affine_single_flag_bound(m: i64, d: i64, n: i64, r: i64) -> Result<StratumDim, GrassmannError> {
    if !(-1 <= r && r <= d && d <= n + d - r && n + d - r <= m) {
        return Err(GrassmannError::Infeasible { m, d, n, r });
    }
    Ok(StratumDim::from_nonnegative((n - r) * (r + 1) + (m - d) * (d - r)))
}

/// `dim G(m, r1 + r2; n1, r1; n2, r2) = (n1 - r1) r1 + (n2 - r2) r2`, also the
/// dimension of the `≥` variant.
pub fn two_flag_dim(m: i64, n1: i64, r1: i64, n2: i64, r2: i64) -> Result<StratumDim, GrassmannError> {
    check_pair(n1, r1, n2, r2)?;
    if n1 + n2 > m {
        return Err(GrassmannError::Hypothesis(format!("need n1 + n2 <= m, got {} > {m}", n1 + n2)));
    }
    Ok(StratumDim::from_nonnegative((n1 - r1) * r1 + (n2 - r2) * r2))
}

/// Upper bound `(n1 - r1)(r1 + 1) + (n2 - r2)(r2 + 1)` on the
/// `(r1 + r2 + 1)`-flats meeting two skew flats in dimensions `≥ r1`, `≥ r2`.
pub fn affine_two_flag_bound(m: i64, n1: i64, r1: i64, n2: i64, r2: i64) -> Result<StratumDim, GrassmannError> {
    check_pair(n1, r1, n2, r2)?;
    if m < n1 + n2 + 1 {
        return Err(GrassmannError::Hypothesis(format!(
            "skew flats need m >= n1 + n2 + 1, got m={m} < {}",
            n1 + n2 + 1
        )));
    }
    Ok(StratumDim::from_nonnegative((n1 - r1) * (r1 + 1) + (n2 - r2) * (r2 + 1)))
}

fn check_pair(n1: i64, r1: i64, n2: i64, r2: i64) -> Result<(), GrassmannError> {
    if !(0 <= r1 && r1 <= n1 && 0 <= r2 && r2 <= n2) {
        return Err(GrassmannError::Hypothesis(format!(
            "need 0 <= r_i <= n_i, got (n1, r1) = ({n1}, {r1}), (n2, r2) = ({n2}, {r2})"
        )));
    }
    Ok(())
}

/// `dim G(m, 2r; V1, ≥ r; V2, ≥ r; V3, ≥ r) = (n1 + n2 + n3 - m - r) r` for
/// pairwise independent flags spanning `R^m`; empty once `r` exceeds
/// `n1 + n2 + n3 - m`.
pub fn three_flag_dim(m: i64, n1: i64, n2: i64, n3: i64, r: i64) -> Result<StratumDim, GrassmannError> {
    if r < 0 {
        return Err(GrassmannError::NegativeR(r));
    }
    if [n1, n2, n3].iter().any(|&n| n < 0 || n > m) {
        return Err(GrassmannError::Hypothesis(format!("flag dimensions must lie in 0..={m}")));
    }
    let w = n1 + n2 + n3 - m;
    if w < 0 {
        return Err(GrassmannError::Hypothesis(format!(
            "three flags of dimensions {n1}, {n2}, {n3} cannot span R^{m}"
        )));
    }
    if r > w {
        return Ok(StratumDim::Empty);
    }
    Ok(StratumDim::from_nonnegative((w - r) * r))
}

/// Upper bound `(n1 + n2 + n3 + 1 - m - r)(r + 1)` on the `(2r + 1)`-flats
/// meeting three pairwise skew flats (whose union spans `R^m`) each in
/// dimension `≥ r`. Requires `m <= n1 + n2 + n3 + 1 - r`.
pub fn affine_three_flag_bound(m: i64, n1: i64, n2: i64, n3: i64, r: i64) -> Result<StratumDim, GrassmannError> {
    if r < 0 {
        return Err(GrassmannError::NegativeR(r));
    }
    if [n1, n2, n3].iter().any(|&n| n < 0 || n > m) {
        return Err(GrassmannError::Hypothesis(format!("flag dimensions must lie in 0..={m}")));
    }
    let slack = n1 + n2 + n3 + 1 - r - m;
    if slack < 0 {
        return Err(GrassmannError::Hypothesis(format!(
            "need m <= n1 + n2 + n3 + 1 - r, got m={m} > {}",
            n1 + n2 + n3 + 1 - r
        )));
    }
    Ok(StratumDim::from_nonnegative(slack * (r + 1)))
}
