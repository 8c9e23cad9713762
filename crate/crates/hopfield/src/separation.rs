//! Pattern separation and sufficient fixed-point certificates.
//!
//! The separation of pattern `x_i` from the rest of the data,
//! `Delta_i = x_i^T x_i - max_{j != i} x_i^T x_j`, controls retrieval
//! speed, retrieval error, and storage capacity. The certificates in
//! [`classify_regime`] are sufficient conditions only: a failed
//! certificate does not rule the corresponding fixed point out.

use crate::error::CoreError;
use crate::linalg::dot;
use crate::math::InverseTemperature;
use crate::pattern::{PatternMatrix, StateVector};

/// Per-pattern separations. `Delta_i = +inf` when there is a single
/// pattern (no competitor).
#[derive(Debug, Clone, PartialEq)]
pub struct SeparationReport {
    /// `Delta_i` per pattern.
    pub delta: Vec<f64>,
    /// `min_i Delta_i`.
    pub delta_min: f64,
}

/// Sufficient-certificate flags for the three fixed-point regimes.
/// Each flag is a pure function of `(X, beta, cluster)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RegimeReport {
    /// `beta * m_max^2 < 1`: the iteration is a contraction everywhere,
    /// so a single global fixed point exists.
    pub global_fixed_point_certified: bool,
    /// Per pattern: `Delta_i >= 2/(beta N) + beta^-1 ln(2 (N-1) N beta M^2)`,
    /// certifying a fixed point in the sphere of radius `1/(beta N M)`
    /// around the pattern.
    pub stored_pattern_certified: Vec<bool>,
    /// For the designated cluster: the cluster-mean separation condition
    /// together with `beta * m_max^2 <= 1` on the cluster spread,
    /// certifying a metastable fixed point near the cluster mean.
    pub metastable_certified: Option<bool>,
}

/// Separations `Delta_i` of every stored pattern.
pub fn separation(x: &PatternMatrix) -> SeparationReport {
    let n = x.len();
    let delta: Vec<f64> = (0..n)
        .map(|i| {
            let xi = x.pattern(i);
            let self_dot = dot(xi, xi);
            let best_other = (0..n)
                .filter(|&j| j != i)
                .map(|j| dot(xi, x.pattern(j)))
                .fold(f64::NEG_INFINITY, f64::max);
            if best_other == f64::NEG_INFINITY {
                f64::INFINITY // single pattern: no competitor
            } else {
                self_dot - best_other
            }
        })
        .collect();
    let delta_min = delta.iter().cloned().fold(f64::INFINITY, f64::min);
    SeparationReport { delta, delta_min }
}

/// The pattern least separated from the query while being separated from
/// the others: `i = argmax_k (xi^T x_k - max_{j != k} xi^T x_j)`, with
/// the attained margin `c`. Ties break toward the lowest index; a single
/// pattern yields `(0, +inf)`.
pub fn separation_to_query(
    x: &PatternMatrix,
    xi: &StateVector,
) -> Result<(usize, f64), CoreError> {
    let dots = x.dots_with(xi)?;
    let n = dots.len();
    if n == 1 {
        return Ok((0, f64::INFINITY));
    }
    let mut best_idx = 0;
    let mut best_margin = f64::NEG_INFINITY;
    for k in 0..n {
        let max_other = (0..n)
            .filter(|&j| j != k)
            .map(|j| dots[j])
            .fold(f64::NEG_INFINITY, f64::max);
        let margin = dots[k] - max_other;
        if margin > best_margin {
            best_margin = margin;
            best_idx = k;
        }
    }
    Ok((best_idx, best_margin))
}

/// Evaluates the sufficient certificates for a global fixed point, a
/// fixed point near every stored pattern, and (optionally) a metastable
/// fixed point near the mean of `cluster`.
///
/// The cluster condition compares the separation of the cluster mean
/// from the remaining patterns against
/// `2M/(beta m_max) - beta^-1 ln((1 - beta m_max^2) /
/// (2 beta (N-l) M max{m_max, 2M}))`,
/// with `m_max` the cluster spread; it additionally requires
/// `beta * m_max^2 <= 1`. Degenerate clusters (zero spread, or covering
/// every pattern) resolve through the natural IEEE semantics of the
/// expression.
pub fn classify_regime(
    x: &PatternMatrix,
    beta: InverseTemperature,
    cluster: Option<&[usize]>,
) -> Result<RegimeReport, CoreError> {
    let b = beta.value();
    let n = x.len();
    let m = x.max_norm();

    let global = b * x.max_dist_to_mean() * x.max_dist_to_mean() < 1.0;

    let sep = separation(x);
    let threshold =
        2.0 / (b * n as f64) + (2.0 * (n as f64 - 1.0) * n as f64 * b * m * m).ln() / b;
    let stored: Vec<bool> = sep.delta.iter().map(|&d| d >= threshold).collect();

    let metastable = match cluster {
        None => None,
        Some(idx) => Some(metastable_certificate(x, beta, idx)?),
    };

    Ok(RegimeReport {
        global_fixed_point_certified: global,
        stored_pattern_certified: stored,
        metastable_certified: metastable,
    })
}

fn metastable_certificate(
    x: &PatternMatrix,
    beta: InverseTemperature,
    cluster: &[usize],
) -> Result<bool, CoreError> {
    if cluster.is_empty() {
        return Err(CoreError::EmptyCluster);
    }
    let n = x.len();
    let mut seen = vec![false; n];
    for &i in cluster {
        if i >= n {
            return Err(CoreError::IndexOutOfRange { index: i, count: n });
        }
        if seen[i] {
            return Err(CoreError::DuplicateIndex(i));
        }
        seen[i] = true;
    }

    let b = beta.value();
    let m = x.max_norm();
    let l = cluster.len();
    let d = x.dim();

    // cluster mean and spread
    let mut mean = vec![0.0; d];
    for &i in cluster {
        for (a, v) in mean.iter_mut().zip(x.pattern(i)) {
            *a += v;
        }
    }
    for a in &mut mean {
        *a /= l as f64;
    }
    let m_max = cluster
        .iter()
        .map(|&i| {
            x.pattern(i)
                .iter()
                .zip(&mean)
                .map(|(v, a)| (v - a) * (v - a))
                .sum::<f64>()
                .sqrt()
        })
        .fold(0.0_f64, f64::max);

    if b * m_max * m_max > 1.0 {
        return Ok(false);
    }

    // separation of the cluster mean from the patterns outside the cluster
    let mean_dot = dot(&mean, &mean);
    let delta_m = (0..n)
        .filter(|i| !seen[*i])
        .map(|j| mean_dot - dot(&mean, x.pattern(j)))
        .fold(f64::INFINITY, f64::min);

    let outside = (n - l) as f64;
    let required = 2.0 * m / (b * m_max)
        - ((1.0 - b * m_max * m_max) / (2.0 * b * outside * m * m_max.max(2.0 * m))).ln() / b;
    Ok(delta_m >= required)
}

/// Retrieval-error bound for pattern `i`:
/// `2 e (N-1) M exp(-beta Delta_i)`.
///
/// Valid for queries and fixed points within `1/(2 beta M)` of the
/// pattern; enforcing that radius is the caller's responsibility.
/// Monotone decreasing in `Delta_i`; zero for a single stored pattern.
pub fn retrieval_error_bound(
    x: &PatternMatrix,
    i: usize,
    beta: InverseTemperature,
) -> Result<f64, CoreError> {
    let n = x.len();
    if i >= n {
        return Err(CoreError::IndexOutOfRange { index: i, count: n });
    }
    if n == 1 {
        return Ok(0.0);
    }
    let delta_i = separation(x).delta[i];
    let m = x.max_norm();
    Ok(2.0 * std::f64::consts::E * (n as f64 - 1.0) * m * (-beta.value() * delta_i).exp())
}

/// One-update contraction bound for pattern `i` at radius `r`:
/// `2 beta N M^2 (N-1) exp(-beta (Delta_i - 2 r M))`.
///
/// `r` stands for `max{||xi - x_i||, ||x_i* - x_i||}`; since the fixed
/// point is unknown a priori, the caller supplies it. Monotone
/// increasing in `r`.
pub fn one_update_jacobian_bound(
    x: &PatternMatrix,
    i: usize,
    r: f64,
    beta: InverseTemperature,
) -> Result<f64, CoreError> {
    let n = x.len();
    if i >= n {
        return Err(CoreError::IndexOutOfRange { index: i, count: n });
    }
    if !(r.is_finite() && r >= 0.0) {
        return Err(CoreError::InvalidConfig("radius must be finite and nonnegative"));
    }
    if n == 1 {
        return Ok(0.0);
    }
    let delta_i = separation(x).delta[i];
    let m = x.max_norm();
    let b = beta.value();
    Ok(2.0 * b * n as f64 * m * m * (n as f64 - 1.0) * (-b * (delta_i - 2.0 * r * m)).exp())
}
