//! Log-sum-exp, softmax, and their Jacobian.
//!
//! These kernels are the numerical heart of the crate: the energy is built
//! on `lse`, the update rule on `softmax`, and every convergence bound on
//! the softmax Jacobian. All of them subtract the maximum before
//! exponentiating, so inputs with `beta * |x|` in the hundreds do not
//! overflow, and the result is unchanged by the shift.

use crate::error::CoreError;
use crate::linalg::Mat;

/// Inverse temperature `beta > 0`.
///
/// Larger values sharpen the softmax toward its argmax; smaller values
/// flatten it toward the uniform distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InverseTemperature(f64);

impl InverseTemperature {
    pub fn new(beta: f64) -> Result<Self, CoreError> {
        if !(beta.is_finite() && beta > 0.0) {
            return Err(CoreError::InvalidBeta(beta));
        }
        Ok(Self(beta))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// The attention convention `1/sqrt(d_k)`.
    pub fn scaled_dot_product(d_k: usize) -> Self {
        Self(1.0 / (d_k as f64).sqrt())
    }
}

fn check_input(x: &[f64]) -> Result<(), CoreError> {
    if x.is_empty() {
        return Err(CoreError::EmptyInput);
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(CoreError::NonFinite);
    }
    Ok(())
}

/// `lse(beta, x) = beta^-1 ln sum_i exp(beta x_i)`.
///
/// Satisfies `max(x) <= lse(beta, x) <= max(x) + beta^-1 ln N`.
pub fn lse(beta: InverseTemperature, x: &[f64]) -> Result<f64, CoreError> {
    check_input(x)?;
    let b = beta.value();
    let m = x.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut s = 0.0;
    for &v in x {
        s += (b * (v - m)).exp();
    }
    Ok(m + s.ln() / b)
}

/// `softmax(beta x)`: positive entries summing to one.
///
/// Shift-invariant: adding a constant to every component of `x` leaves the
/// output unchanged.
pub fn softmax(beta: InverseTemperature, x: &[f64]) -> Result<Vec<f64>, CoreError> {
    check_input(x)?;
    let b = beta.value();
    let m = x.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut out: Vec<f64> = x.iter().map(|&v| (b * (v - m)).exp()).collect();
    let s: f64 = out.iter().sum();
    for v in &mut out {
        *v /= s;
    }
    Ok(out)
}

/// Softmax over raw logits (the `beta` factor already folded in), with
/// `-inf` entries allowed; they receive weight zero. Used by the causal
/// masking and forgetting variants.
pub(crate) fn softmax_logits(logits: &[f64]) -> Result<Vec<f64>, CoreError> {
    if logits.is_empty() {
        return Err(CoreError::EmptyInput);
    }
    if logits.iter().any(|v| v.is_nan() || *v == f64::INFINITY) {
        return Err(CoreError::NonFinite);
    }
    let m = logits.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return Err(CoreError::MaskExcludesAll);
    }
    let mut out: Vec<f64> = logits.iter().map(|&v| (v - m).exp()).collect();
    let s: f64 = out.iter().sum();
    for v in &mut out {
        *v /= s;
    }
    Ok(out)
}

/// Validates that `p` lies on the probability simplex within `tol`.
pub fn check_simplex(p: &[f64], tol: f64) -> Result<(), CoreError> {
    check_input(p)?;
    let mut sum = 0.0;
    for &v in p {
        if v < -tol {
            return Err(CoreError::NotOnSimplex { deviation: -v });
        }
        sum += v;
    }
    let dev = (sum - 1.0).abs();
    if dev > tol {
        return Err(CoreError::NotOnSimplex { deviation: dev });
    }
    Ok(())
}

/// Jacobian of the softmax at distribution `p`:
/// `J_s = beta (diag(p) - p p^T)`.
///
/// Symmetric, positive semi-definite, annihilates the all-ones vector,
/// and has spectral norm at most `beta / 2`.
pub fn softmax_jacobian(p: &[f64], beta: InverseTemperature) -> Result<Mat, CoreError> {
    check_simplex(p, 1e-9)?;
    let n = p.len();
    let b = beta.value();
    let mut j = Mat::zeros(n, n);
    for i in 0..n {
        for k in 0..n {
            let v = if i == k {
                p[i] * (1.0 - p[i])
            } else {
                -p[i] * p[k]
            };
            j[(i, k)] = b * v;
        }
    }
    Ok(j)
}

/// Entropy-duality gap of `lse`:
/// `gap = lse(beta, x) - (z^T x - beta^-1 sum_i z_i ln z_i)`.
///
/// Nonnegative on the simplex, with `0 ln 0 := 0`; the gap vanishes at
/// `z = softmax(beta x)`.
pub fn lse_duality_gap(
    beta: InverseTemperature,
    x: &[f64],
    z: &[f64],
) -> Result<f64, CoreError> {
    check_input(x)?;
    if z.len() != x.len() {
        return Err(CoreError::DimensionMismatch { expected: x.len(), got: z.len() });
    }
    check_simplex(z, 1e-9)?;
    let b = beta.value();
    let mut inner = 0.0;
    let mut entropy = 0.0;
    for (zi, xi) in z.iter().zip(x) {
        let zi = zi.max(0.0);
        inner += zi * xi;
        if zi > 0.0 {
            entropy += zi * zi.ln();
        }
    }
    Ok(lse(beta, x)? - (inner - entropy / b))
}
