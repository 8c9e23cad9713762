//! Energy function, update rule, and fixed-point iteration.
//!
//! The energy of a state `xi` against stored patterns `X` is
//!
//! ```text
//! E = -lse(beta, X^T xi) + 1/2 xi^T xi + beta^-1 ln N + 1/2 M^2
//! ```
//!
//! and the update rule `xi <- X softmax(beta X^T xi)` is the
//! concave-convex procedure for minimizing it, so the energy never
//! increases along the iteration. The update lands in the convex hull of
//! the patterns, hence `||xi_new|| <= M`.

use crate::error::CoreError;
use crate::linalg::{dot, norm, sup_dist, Mat};
use crate::math::{softmax, softmax_jacobian, softmax_logits, lse, InverseTemperature};
use crate::pattern::{PatternMatrix, StateVector};

/// Stopping rule for [`iterate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationConfig {
    /// Maximum number of updates to apply (at least 1).
    pub max_updates: usize,
    /// Sup-norm step threshold; the iteration stops once
    /// `||xi_next - xi||_inf <= tol`.
    pub tol: f64,
    /// Record the energy before and after every update.
    pub record_energy: bool,
}

impl Default for IterationConfig {
    fn default() -> Self {
        Self { max_updates: 100, tol: 1e-6, record_energy: false }
    }
}

impl IterationConfig {
    fn validate(&self) -> Result<(), CoreError> {
        if self.max_updates == 0 {
            return Err(CoreError::InvalidConfig("max_updates must be at least 1"));
        }
        if !(self.tol.is_finite() && self.tol >= 0.0) {
            return Err(CoreError::InvalidConfig("tol must be finite and nonnegative"));
        }
        Ok(())
    }
}

/// Outcome of a fixed-point iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationResult {
    /// Final state after the last applied update.
    pub fixed_point: StateVector,
    /// Number of updates actually applied.
    pub updates_used: usize,
    /// True if the sup-norm step fell below the tolerance.
    pub converged: bool,
    /// Energy at the start plus after every update (when recorded);
    /// nonincreasing.
    pub energy_trace: Option<Vec<f64>>,
    /// `softmax(beta X^T xi)` at the final state.
    pub final_softmax: Vec<f64>,
}

/// Energy of state `xi` against stored patterns `X`. Nonnegative, and for
/// `xi` in the pattern simplex bounded by `2 M^2` and by
/// `beta^-1 ln N + M^2 / 2`.
pub fn energy(
    x: &PatternMatrix,
    xi: &StateVector,
    beta: InverseTemperature,
) -> Result<f64, CoreError> {
    let dots = x.dots_with(xi)?;
    let l = lse(beta, &dots)?;
    let q = dot(xi.values(), xi.values());
    let n = x.len() as f64;
    let m = x.max_norm();
    Ok(-l + 0.5 * q + n.ln() / beta.value() + 0.5 * m * m)
}

/// One application of the update rule: `X softmax(beta X^T xi)`.
pub fn update(
    x: &PatternMatrix,
    xi: &StateVector,
    beta: InverseTemperature,
) -> Result<StateVector, CoreError> {
    let dots = x.dots_with(xi)?;
    let p = softmax(beta, &dots)?;
    StateVector::new(x.combine(&p))
}

/// Repeated updates until the sup-norm step drops below `cfg.tol` or
/// `cfg.max_updates` is reached.
pub fn iterate(
    x: &PatternMatrix,
    xi0: &StateVector,
    beta: InverseTemperature,
    cfg: &IterationConfig,
) -> Result<IterationResult, CoreError> {
    cfg.validate()?;
    let mut trace = if cfg.record_energy {
        Some(vec![energy(x, xi0, beta)?])
    } else {
        None
    };

    let mut xi = xi0.clone();
    let mut updates_used = 0;
    let mut converged = false;
    for _ in 0..cfg.max_updates {
        let next = update(x, &xi, beta)?;
        updates_used += 1;
        let step = sup_dist(next.values(), xi.values());
        xi = next;
        if let Some(t) = &mut trace {
            t.push(energy(x, &xi, beta)?);
        }
        if step <= cfg.tol {
            converged = true;
            break;
        }
    }

    let final_softmax = softmax(beta, &x.dots_with(&xi)?)?;
    Ok(IterationResult { fixed_point: xi, updates_used, converged, energy_trace: trace, final_softmax })
}

/// Jacobian of the update rule at `xi`:
/// `J = beta X (diag(p) - p p^T) X^T`.
///
/// Symmetric positive semi-definite with
/// `||J||_2 <= beta * m_max^2` and
/// `||J||_2 <= 2 beta N M^2 max_i p_i (1 - p_i)`.
pub fn update_jacobian(
    x: &PatternMatrix,
    xi: &StateVector,
    beta: InverseTemperature,
) -> Result<Mat, CoreError> {
    let dots = x.dots_with(xi)?;
    let p = softmax(beta, &dots)?;
    let js = softmax_jacobian(&p, beta)?;
    // J = X J_s X^T with X column-major: build X as d x N row-major first.
    let d = x.dim();
    let n = x.len();
    let mut xm = Mat::zeros(d, n);
    for i in 0..n {
        for (r, v) in x.pattern(i).iter().enumerate() {
            xm[(r, i)] = *v;
        }
    }
    Ok(xm.matmul(&js).matmul(&xm.transpose()))
}

/// Update rule over a time-ordered pattern matrix with a forgetting
/// penalty and optional causal mask.
///
/// Logits are `beta x_i^T xi - gamma (t - 1 - i)` for column `i` of `t`
/// columns ordered oldest first, so the newest pattern is not penalized.
/// Masked positions (`mask[i] == true`) receive `-inf` before the softmax
/// and thus zero weight. With `gamma = 0` and no mask this is exactly
/// [`update`].
pub fn temporal_update(
    x_t: &PatternMatrix,
    xi: &StateVector,
    beta: InverseTemperature,
    gamma: f64,
    mask: Option<&[bool]>,
) -> Result<StateVector, CoreError> {
    if !(gamma.is_finite() && gamma >= 0.0) {
        return Err(CoreError::InvalidConfig("gamma must be finite and nonnegative"));
    }
    let t = x_t.len();
    if let Some(m) = mask {
        if m.len() != t {
            return Err(CoreError::MaskLengthMismatch { expected: t, got: m.len() });
        }
    }
    let dots = x_t.dots_with(xi)?;
    let b = beta.value();
    let mut logits: Vec<f64> = (0..t)
        .map(|i| b * dots[i] - gamma * (t - 1 - i) as f64)
        .collect();
    if let Some(m) = mask {
        for (l, &masked) in logits.iter_mut().zip(m) {
            if masked {
                *l = f64::NEG_INFINITY;
            }
        }
    }
    let p = softmax_logits(&logits)?;
    StateVector::new(x_t.combine(&p))
}

/// Weighted Gaussian mixture whose maxima are the energy minima:
/// `sum_i lambda(x_i, beta) G(xi; x_i, beta^-1 I)` with
/// `lambda(x_i, beta) = exp(beta x_i^T x_i / 2)` and `G` the Gaussian
/// density with mean `x_i` and covariance `beta^-1 I`.
///
/// For fixed `(X, beta)` the ratio `exp(-E(xi)) / mixture(xi)^(1/beta)`
/// is constant in `xi`.
pub fn gaussian_mixture_form(
    x: &PatternMatrix,
    xi: &StateVector,
    beta: InverseTemperature,
) -> Result<f64, CoreError> {
    if xi.dim() != x.dim() {
        return Err(CoreError::DimensionMismatch { expected: x.dim(), got: xi.dim() });
    }
    let b = beta.value();
    let d = x.dim() as f64;
    let norm_const = (b / (2.0 * std::f64::consts::PI)).powf(d / 2.0);
    let mut sum = 0.0;
    for i in 0..x.len() {
        let col = x.pattern(i);
        let lambda = (0.5 * b * dot(col, col)).exp();
        let dist2: f64 = col
            .iter()
            .zip(xi.values())
            .map(|(a, v)| (a - v) * (a - v))
            .sum();
        sum += lambda * norm_const * (-0.5 * b * dist2).exp();
    }
    Ok(sum)
}

/// Convenience: Euclidean distance of the one-step update from a target.
pub fn one_update_error(
    x: &PatternMatrix,
    xi: &StateVector,
    beta: InverseTemperature,
    target: &[f64],
) -> Result<f64, CoreError> {
    let next = update(x, xi, beta)?;
    if target.len() != next.dim() {
        return Err(CoreError::DimensionMismatch { expected: next.dim(), got: target.len() });
    }
    let diff: Vec<f64> = next
        .values()
        .iter()
        .zip(target)
        .map(|(a, b)| a - b)
        .collect();
    Ok(norm(&diff))
}
