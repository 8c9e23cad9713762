//! Stored patterns and query states.

use crate::error::CoreError;
use crate::linalg::{dot, norm};

/// The stored patterns `X`, one pattern per column, with cached geometry:
/// the largest pattern norm `M`, the arithmetic mean pattern, and the
/// largest distance of a pattern to that mean.
#[derive(Debug, Clone, PartialEq)]
pub struct PatternMatrix {
    d: usize,
    n: usize,
    /// Column-major storage: pattern `i` occupies `data[i*d..(i+1)*d]`.
    data: Vec<f64>,
    max_norm: f64,
    mean: Vec<f64>,
    max_dist_to_mean: f64,
}

impl PatternMatrix {
    /// Build from a list of patterns (each of dimension `d >= 1`).
    pub fn from_columns(columns: &[Vec<f64>]) -> Result<Self, CoreError> {
        let n = columns.len();
        if n == 0 {
            return Err(CoreError::EmptyInput);
        }
        let d = columns[0].len();
        if d == 0 {
            return Err(CoreError::EmptyInput);
        }
        let mut data = Vec::with_capacity(n * d);
        for col in columns {
            if col.len() != d {
                return Err(CoreError::DimensionMismatch { expected: d, got: col.len() });
            }
            if col.iter().any(|v| !v.is_finite()) {
                return Err(CoreError::NonFinite);
            }
            data.extend_from_slice(col);
        }

        let mut max_norm = 0.0_f64;
        let mut mean = vec![0.0; d];
        for i in 0..n {
            let col = &data[i * d..(i + 1) * d];
            max_norm = max_norm.max(norm(col));
            for (m, v) in mean.iter_mut().zip(col) {
                *m += v;
            }
        }
        for m in &mut mean {
            *m /= n as f64;
        }
        let mut max_dist = 0.0_f64;
        for i in 0..n {
            let col = &data[i * d..(i + 1) * d];
            let dist2: f64 = col
                .iter()
                .zip(&mean)
                .map(|(v, m)| (v - m) * (v - m))
                .sum();
            max_dist = max_dist.max(dist2.sqrt());
        }

        Ok(Self { d, n, data, max_norm, mean, max_dist_to_mean: max_dist })
    }

    /// Pattern dimension `d`.
    pub fn dim(&self) -> usize {
        self.d
    }

    /// Number of stored patterns `N`.
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false // construction guarantees n >= 1
    }

    /// Stored pattern `i`.
    pub fn pattern(&self, i: usize) -> &[f64] {
        &self.data[i * self.d..(i + 1) * self.d]
    }

    /// Largest pattern norm `M = max_i ||x_i||`.
    pub fn max_norm(&self) -> f64 {
        self.max_norm
    }

    /// Arithmetic mean of the patterns.
    pub fn mean(&self) -> &[f64] {
        &self.mean
    }

    /// Largest distance of a pattern to the mean.
    pub fn max_dist_to_mean(&self) -> f64 {
        self.max_dist_to_mean
    }

    /// Dot products of every pattern with a state: `X^T xi`.
    pub fn dots_with(&self, state: &StateVector) -> Result<Vec<f64>, CoreError> {
        if state.dim() != self.d {
            return Err(CoreError::DimensionMismatch { expected: self.d, got: state.dim() });
        }
        Ok((0..self.n)
            .map(|i| dot(self.pattern(i), state.values()))
            .collect())
    }

    /// Convex combination of patterns: `X p`.
    pub fn combine(&self, weights: &[f64]) -> Vec<f64> {
        debug_assert_eq!(weights.len(), self.n);
        let mut out = vec![0.0; self.d];
        for (i, &w) in weights.iter().enumerate() {
            for (o, v) in out.iter_mut().zip(self.pattern(i)) {
                *o += w * v;
            }
        }
        out
    }
}

/// A query/state vector paired with a `PatternMatrix`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    values: Vec<f64>,
}

impl StateVector {
    pub fn new(values: Vec<f64>) -> Result<Self, CoreError> {
        if values.is_empty() {
            return Err(CoreError::EmptyInput);
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(CoreError::NonFinite);
        }
        Ok(Self { values })
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn caches_match_definitions() {
        let x = PatternMatrix::from_columns(&[
            vec![3.0, 0.0],
            vec![0.0, 4.0],
            vec![0.0, 0.0],
        ])
        .unwrap();
        assert_eq!(x.dim(), 2);
        assert_eq!(x.len(), 3);
        assert!((x.max_norm() - 4.0).abs() < 1e-15);
        assert!((x.mean()[0] - 1.0).abs() < 1e-15);
        assert!((x.mean()[1] - 4.0 / 3.0).abs() < 1e-15);
        // farthest column from (1, 4/3) is (0,4): dist = sqrt(1 + (8/3)^2)
        let expect = (1.0_f64 + (8.0 / 3.0_f64).powi(2)).sqrt();
        assert!((x.max_dist_to_mean() - expect).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(PatternMatrix::from_columns(&[]).is_err());
        assert!(PatternMatrix::from_columns(&[vec![1.0], vec![1.0, 2.0]]).is_err());
        assert!(PatternMatrix::from_columns(&[vec![f64::NAN]]).is_err());
        assert!(StateVector::new(vec![]).is_err());
        assert!(StateVector::new(vec![f64::INFINITY]).is_err());
    }
}
