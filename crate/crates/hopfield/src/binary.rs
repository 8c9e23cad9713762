//! Binary associative memory with exponential interaction, the discrete
//! reference point for the continuous network.
//!
//! Energy `E = -sum_i exp(xi^T x_i)` over patterns with entries in
//! `{-1, +1}`, minimized by asynchronous component flips. Storage is
//! exponential in the dimension, and a single sweep typically restores a
//! moderately corrupted pattern.

use thiserror::Error;

/// Errors raised by the binary network.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum BinaryError {
    #[error("entry at ({row}, {col}) is {value}, expected exactly -1 or +1")]
    NotBinary { row: usize, col: usize, value: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("component index {index} out of range for dimension {dim}")]
    ComponentOutOfRange { index: usize, dim: usize },

    #[error("order is not a permutation of 0..{dim}")]
    NotAPermutation { dim: usize },

    #[error("input must be nonempty")]
    Empty,

    #[error("rate argument {0} outside [0, 1]")]
    RateOutOfRange(f64),
}

/// Stored binary patterns, one per column, entries exactly `-1` or `+1`.
#[derive(Debug, Clone, PartialEq)]
pub struct BinaryPatternMatrix {
    d: usize,
    n: usize,
    data: Vec<f64>, // column-major
}

impl BinaryPatternMatrix {
    pub fn from_columns(columns: &[Vec<f64>]) -> Result<Self, BinaryError> {
        if columns.is_empty() || columns[0].is_empty() {
            return Err(BinaryError::Empty);
        }
        let d = columns[0].len();
        let mut data = Vec::with_capacity(d * columns.len());
        for (c, col) in columns.iter().enumerate() {
            if col.len() != d {
                return Err(BinaryError::DimensionMismatch { expected: d, got: col.len() });
            }
            for (r, &v) in col.iter().enumerate() {
                if v != 1.0 && v != -1.0 {
                    return Err(BinaryError::NotBinary { row: r, col: c, value: v });
                }
            }
            data.extend_from_slice(col);
        }
        Ok(Self { d, n: columns.len(), data })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false // construction guarantees n >= 1
    }

    pub fn pattern(&self, i: usize) -> &[f64] {
        &self.data[i * self.d..(i + 1) * self.d]
    }
}

/// A binary state vector, entries exactly `-1` or `+1`.
#[derive(Debug, Clone, PartialEq)]
pub struct BinaryState {
    values: Vec<f64>,
}

impl BinaryState {
    pub fn new(values: Vec<f64>) -> Result<Self, BinaryError> {
        if values.is_empty() {
            return Err(BinaryError::Empty);
        }
        for (r, &v) in values.iter().enumerate() {
            if v != 1.0 && v != -1.0 {
                return Err(BinaryError::NotBinary { row: r, col: 0, value: v });
            }
        }
        Ok(Self { values })
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

fn check_dims(x: &BinaryPatternMatrix, xi: &BinaryState) -> Result<(), BinaryError> {
    if x.dim() != xi.dim() {
        return Err(BinaryError::DimensionMismatch { expected: x.dim(), got: xi.dim() });
    }
    Ok(())
}

/// `E = -sum_i exp(xi^T x_i)`, accumulated with a common shift by the
/// largest inner product so intermediate exponentials cannot overflow.
pub fn binary_energy(x: &BinaryPatternMatrix, xi: &BinaryState) -> Result<f64, BinaryError> {
    check_dims(x, xi)?;
    let dots: Vec<f64> = (0..x.len())
        .map(|i| {
            x.pattern(i)
                .iter()
                .zip(xi.values())
                .map(|(a, b)| a * b)
                .sum::<f64>()
        })
        .collect();
    let m = dots.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let shifted: f64 = dots.iter().map(|&s| (s - m).exp()).sum();
    Ok(-(m.exp() * shifted))
}

/// Asynchronous update of component `j`:
/// the sign of the summed energy difference between setting the
/// component to `+1` and to `-1`, with `sgn(0) := +1`.
pub fn binary_update_component(
    x: &BinaryPatternMatrix,
    xi: &BinaryState,
    j: usize,
) -> Result<f64, BinaryError> {
    check_dims(x, xi)?;
    if j >= x.dim() {
        return Err(BinaryError::ComponentOutOfRange { index: j, dim: x.dim() });
    }
    // S_i = sum_{l != j} x_il xi_l; both candidate exponents share it
    let mut max_arg = f64::NEG_INFINITY;
    let mut args = Vec::with_capacity(2 * x.len());
    for i in 0..x.len() {
        let col = x.pattern(i);
        let full: f64 = col.iter().zip(xi.values()).map(|(a, b)| a * b).sum();
        let s = full - col[j] * xi.values()[j];
        let plus = col[j] + s;
        let minus = -col[j] + s;
        max_arg = max_arg.max(plus).max(minus);
        args.push((plus, minus));
    }
    let mut total = 0.0;
    for (plus, minus) in args {
        total += (plus - max_arg).exp() - (minus - max_arg).exp();
    }
    Ok(if total >= 0.0 { 1.0 } else { -1.0 })
}

/// One asynchronous sweep: updates components in the given order, each
/// update seeing the latest state. `order` must be a permutation of
/// `0..d`.
pub fn binary_sweep(
    x: &BinaryPatternMatrix,
    xi: &BinaryState,
    order: &[usize],
) -> Result<BinaryState, BinaryError> {
    check_dims(x, xi)?;
    let d = x.dim();
    let mut seen = vec![false; d];
    if order.len() != d {
        return Err(BinaryError::NotAPermutation { dim: d });
    }
    for &j in order {
        if j >= d || seen[j] {
            return Err(BinaryError::NotAPermutation { dim: d });
        }
        seen[j] = true;
    }

    let mut state = xi.clone();
    for &j in order {
        let new_bit = binary_update_component(x, &state, j)?;
        state.values[j] = new_bit;
    }
    Ok(state)
}

/// The large-deviation rate function
/// `I(a) = ((1+a) ln(1+a) + (1-a) ln(1-a)) / 2` on `[0, 1]`, with the
/// continuous extension `0 ln 0 := 0` at `a = 1`.
pub fn demircigil_rate(a: f64) -> Result<f64, BinaryError> {
    if !(a.is_finite() && (0.0..=1.0).contains(&a)) {
        return Err(BinaryError::RateOutOfRange(a));
    }
    let term = |t: f64| if t == 0.0 { 0.0 } else { t * t.ln() };
    Ok(0.5 * (term(1.0 + a) + term(1.0 - a)))
}

/// Capacity exponent threshold `I(1 - 2 rho) / 2` for corruption
/// fraction `rho` in `[0, 1/2)`.
pub fn demircigil_capacity_exponent(rho: f64) -> Result<f64, BinaryError> {
    if !(rho.is_finite() && (0.0..0.5).contains(&rho)) {
        return Err(BinaryError::RateOutOfRange(rho));
    }
    Ok(demircigil_rate(1.0 - 2.0 * rho)? / 2.0)
}
