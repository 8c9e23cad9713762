//! Lambert W function and storage-capacity calculators.
//!
//! The number of random patterns a continuous associative memory can hold
//! grows exponentially with the dimension: `N >= sqrt(p) c^((d-1)/4)`
//! with probability `1 - p`, where `c` is obtained from the Lambert W
//! function. This module implements both branches of W, the base-`c`
//! calculators (exact and Lambert-free lower bound), the
//! dimension-for-base solver, and the placed-pattern checks.

use thiserror::Error;

/// The omega constant `W_0(1)`.
pub const OMEGA: f64 = 0.567_143_290_409_784;

const INV_E: f64 = 1.0 / std::f64::consts::E;

/// Errors from the capacity calculators.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum CapacityError {
    #[error("invalid parameter: {0}")]
    InvalidParams(&'static str),

    #[error("argument {x} outside the domain of the {branch:?} Lambert branch")]
    LambertDomain { branch: LambertBranch, x: f64 },
}

/// The two real branches of the Lambert W function, the inverse of
/// `y -> y e^y`. The upper branch `W_0` is defined on `[-1/e, inf)`,
/// the lower branch `W_-1` on `[-1/e, 0)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LambertBranch {
    Upper,
    Lower,
}

/// Lambert W on a given branch, via Halley iteration from an asymptotic
/// initial guess (at most 50 iterations). Satisfies
/// `|W e^W - x| <= 1e-12 max(1, |x|)`.
pub fn lambert_w(branch: LambertBranch, x: f64) -> Result<f64, CapacityError> {
    if !x.is_finite() {
        return Err(CapacityError::InvalidParams("lambert argument must be finite"));
    }
    if x < -INV_E {
        return Err(CapacityError::LambertDomain { branch, x });
    }
    match branch {
        LambertBranch::Upper => {
            if x == 0.0 {
                return Ok(0.0);
            }
            if (x + INV_E).abs() < 1e-300 {
                return Ok(-1.0);
            }
            Ok(halley(x, upper_guess(x)))
        }
        LambertBranch::Lower => {
            if x >= 0.0 {
                return Err(CapacityError::LambertDomain { branch, x });
            }
            if (x + INV_E).abs() < 1e-300 {
                return Ok(-1.0);
            }
            Ok(halley(x, lower_guess(x)))
        }
    }
}

fn upper_guess(x: f64) -> f64 {
    if x < -0.25 {
        // branch-point series in p = sqrt(2 (e x + 1))
        let p = (2.0 * (std::f64::consts::E * x + 1.0)).sqrt();
        -1.0 + p - p * p / 3.0 + 11.0 * p * p * p / 72.0
    } else if x < std::f64::consts::E {
        // low-order series around zero, adequate as a seed
        x / (1.0 + x)
    } else {
        let l = x.ln();
        l - l.ln()
    }
}

fn lower_guess(x: f64) -> f64 {
    if x < -0.25 {
        let p = (2.0 * (std::f64::consts::E * x + 1.0)).sqrt();
        -1.0 - p - p * p / 3.0
    } else {
        // x in (-0.25, 0): W_-1(x) ~ ln(-x) - ln(-ln(-x))
        let l = (-x).ln();
        l - (-l).ln()
    }
}

fn halley(x: f64, mut w: f64) -> f64 {
    for _ in 0..50 {
        let ew = w.exp();
        let f = w * ew - x;
        if f.abs() <= 1e-13 * x.abs().max(1.0) {
            break;
        }
        let wp1 = w + 1.0;
        let denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
        if denom == 0.0 || !denom.is_finite() {
            break;
        }
        let step = f / denom;
        w -= step;
        if step.abs() <= 1e-16 * (1.0 + w.abs()) {
            break;
        }
    }
    w
}

/// `W_0(exp(u))`, safe for `u` beyond the overflow range of `exp`.
/// Solves `w + ln w = u` directly when `exp(u)` would overflow.
pub fn lambert_w0_of_exp(u: f64) -> Result<f64, CapacityError> {
    if !u.is_finite() {
        return Err(CapacityError::InvalidParams("exponent must be finite"));
    }
    if u <= 700.0 {
        return lambert_w(LambertBranch::Upper, u.exp());
    }
    // Newton on g(w) = w + ln w - u, monotone for w > 0
    let mut w = u - u.ln();
    for _ in 0..50 {
        let g = w + w.ln() - u;
        let step = g / (1.0 + 1.0 / w);
        w -= step;
        if step.abs() <= 1e-15 * w {
            break;
        }
    }
    Ok(w)
}

/// Inputs of the random-pattern capacity theorems: patterns live on the
/// sphere of radius `M = K sqrt(d-1)` and all of them are stored with
/// probability at least `1 - p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapacityParams {
    pub beta: f64,
    pub k: f64,
    pub d: u32,
    pub p: f64,
}

impl CapacityParams {
    pub fn new(beta: f64, k: f64, d: u32, p: f64) -> Result<Self, CapacityError> {
        if !(beta.is_finite() && beta > 0.0) {
            return Err(CapacityError::InvalidParams("beta must be positive"));
        }
        if !(k.is_finite() && k > 0.0) {
            return Err(CapacityError::InvalidParams("K must be positive"));
        }
        if d < 2 {
            return Err(CapacityError::InvalidParams("d must be at least 2"));
        }
        if !(p.is_finite() && p > 0.0 && p <= 1.0) {
            return Err(CapacityError::InvalidParams("p must lie in (0, 1]"));
        }
        Ok(Self { beta, k, d, p })
    }
}

/// Outputs of the base-`c` capacity computation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapacityResult {
    /// `a = (2/(d-1)) (1 + ln(2 beta K^2 p (d-1)))`.
    pub a: f64,
    /// `b = 2 K^2 beta / 5`, exactly.
    pub b: f64,
    /// `c = b / W_0(b e^a)`.
    pub c_hat: f64,
    /// Whether `c_hat >= (2/sqrt(p))^(4/(d-1))`.
    pub feasible: bool,
    /// `sqrt(p) c_hat^((d-1)/4)`, the guaranteed pattern count.
    pub n_lower: f64,
}

fn capacity_ab(params: &CapacityParams) -> (f64, f64) {
    let dm1 = (params.d - 1) as f64;
    let a = 2.0 / dm1 * (1.0 + (2.0 * params.beta * params.k * params.k * params.p * dm1).ln());
    let b = 2.0 * params.k * params.k * params.beta / 5.0;
    (a, b)
}

fn feasibility(params: &CapacityParams, c: f64) -> bool {
    c >= (2.0 / params.p.sqrt()).powf(4.0 / ((params.d - 1) as f64))
}

fn n_lower(params: &CapacityParams, c: f64) -> f64 {
    params.p.sqrt() * c.powf((params.d - 1) as f64 / 4.0)
}

/// Exact exponential-capacity base `c` via the Lambert W function.
pub fn capacity_base_c(params: &CapacityParams) -> Result<CapacityResult, CapacityError> {
    let (a, b) = capacity_ab(params);
    // exp(a + ln b) evaluated as b e^a; log-safe route for large exponents
    let c_hat = b / lambert_w0_of_exp(a + b.ln())?;
    Ok(CapacityResult {
        a,
        b,
        c_hat,
        feasible: feasibility(params, c_hat),
        n_lower: n_lower(params, c_hat),
    })
}

/// Lambert-free closed-form lower bound on the capacity base, via the
/// omega constant for `a + ln b <= 0` and the algebraic bound on
/// `W_0(exp(u))` otherwise. Never exceeds [`capacity_base_c`].
pub fn capacity_base_c_lower(params: &CapacityParams) -> Result<f64, CapacityError> {
    let (a, b) = capacity_ab(params);
    let u = a + b.ln();
    let c = if u <= 0.0 {
        b / ((OMEGA * u.exp() + 1.0) / (OMEGA * (1.0 + OMEGA))).ln()
    } else {
        b * u.powf(-u / (u + 1.0))
    };
    Ok(c)
}

/// How the dimension value in [`DimensionResult`] was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DimensionMethod {
    /// Root of `ln(d-1) + a(d-1) + b = 0` via the Lambert W function.
    LambertExact,
    /// `a = 0` degenerate case: `d = 1 + exp(-b)`.
    AZero,
    /// `a e^(-b) < -1/e` with `a < 0`: the defining inequality holds for
    /// every `d >= 2` (its left side never reaches zero), so no root
    /// exists; the reported value is the closed-form lower bound
    /// `d = 1 + (-ln(-a) + b)/a`.
    ClosedFormBound,
}

/// Dimension supporting capacity base `c`; `d_real` is fractional, the
/// caller rounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimensionResult {
    pub a: f64,
    pub b: f64,
    pub d_real: f64,
    pub method: DimensionMethod,
}

/// Dimension `d` for which the exponential capacity with base `c` holds:
/// `a = ln(c)/2 - K^2 beta/(5c)`, `b = 1 + ln(2 p beta K^2)`,
/// `d = 1 + W(a e^(-b)) / a` with the upper branch for `a > 0` and the
/// lower branch for `a < 0`.
pub fn capacity_dimension(
    beta: f64,
    k: f64,
    c: f64,
    p: f64,
) -> Result<DimensionResult, CapacityError> {
    if !(beta.is_finite() && beta > 0.0) {
        return Err(CapacityError::InvalidParams("beta must be positive"));
    }
    if !(k.is_finite() && k > 0.0) {
        return Err(CapacityError::InvalidParams("K must be positive"));
    }
    if !(c.is_finite() && c > 0.0) {
        return Err(CapacityError::InvalidParams("c must be positive"));
    }
    if !(p.is_finite() && p > 0.0 && p <= 1.0) {
        return Err(CapacityError::InvalidParams("p must lie in (0, 1]"));
    }

    let a = c.ln() / 2.0 - k * k * beta / (5.0 * c);
    let b = 1.0 + (2.0 * p * beta * k * k).ln();

    if a == 0.0 {
        return Ok(DimensionResult { a, b, d_real: 1.0 + (-b).exp(), method: DimensionMethod::AZero });
    }

    let arg = a * (-b).exp();
    if arg >= -INV_E {
        let branch = if a > 0.0 { LambertBranch::Upper } else { LambertBranch::Lower };
        let w = lambert_w(branch, arg)?;
        Ok(DimensionResult { a, b, d_real: 1.0 + w / a, method: DimensionMethod::LambertExact })
    } else if a < 0.0 {
        // ln(d-1) + a(d-1) + b stays strictly negative, so the capacity
        // inequality is met at every dimension; report the closed-form
        // bound used for the printed reference values.
        Ok(DimensionResult {
            a,
            b,
            d_real: 1.0 + ((-(-a).ln()) + b) / a,
            method: DimensionMethod::ClosedFormBound,
        })
    } else {
        Err(CapacityError::LambertDomain { branch: LambertBranch::Upper, x: arg })
    }
}

/// Checks the placed-pattern capacity inequality at `N = 2^(e (d-1))`
/// patterns equidistant on the sphere of radius `M = K sqrt(d-1)`:
///
/// ```text
/// M^2 (1 - cos(2 pi / N^(1/(d-1)))) >= 2/(beta N) + beta^-1 ln(2 N^2 beta M^2)
/// ```
///
/// Evaluated in log space, so exponents far beyond machine-integer range
/// are fine.
pub fn verify_placed_capacity(
    k: f64,
    d: u32,
    beta: f64,
    exponent: u32,
) -> Result<bool, CapacityError> {
    if !(k.is_finite() && k > 0.0) {
        return Err(CapacityError::InvalidParams("K must be positive"));
    }
    if d < 2 {
        return Err(CapacityError::InvalidParams("d must be at least 2"));
    }
    if !(beta.is_finite() && beta > 0.0) {
        return Err(CapacityError::InvalidParams("beta must be positive"));
    }
    if exponent == 0 {
        return Err(CapacityError::InvalidParams("exponent must be positive"));
    }
    let m2 = k * k * (d - 1) as f64;
    // N^(1/(d-1)) = 2^exponent exactly
    let alpha = 2.0 * std::f64::consts::PI / 2.0_f64.powi(exponent as i32);
    let lhs = m2 * (1.0 - alpha.cos());

    let log2_n = (exponent as u64 * (d - 1) as u64) as f64;
    let n = 2.0_f64.powf(log2_n); // may be +inf; 2/(beta inf) is then 0
    let ln_n2 = 2.0 * log2_n * std::f64::consts::LN_2;
    let rhs = 2.0 / (beta * n) + ((2.0 * beta * m2).ln() + ln_n2) / beta;
    Ok(lhs >= rhs)
}

/// The master separation inequality on a concrete pattern set:
/// `Delta_min >= 2/(beta N) + beta^-1 ln(2 N^2 beta M^2)`.
pub fn master_inequality(
    delta_min: f64,
    beta: f64,
    n: u64,
    m: f64,
) -> Result<bool, CapacityError> {
    if n < 2 {
        return Err(CapacityError::InvalidParams("N must be at least 2"));
    }
    if !(m.is_finite() && m > 0.0) {
        return Err(CapacityError::InvalidParams("M must be positive"));
    }
    if !(beta.is_finite() && beta > 0.0) {
        return Err(CapacityError::InvalidParams("beta must be positive"));
    }
    let nf = n as f64;
    Ok(delta_min >= 2.0 / (beta * nf) + (2.0 * nf * nf * beta * m * m).ln() / beta)
}
