//! Attention-head operating-mode analysis.
//!
//! For every softmax row the minimal count `k` of largest weights whose
//! sum reaches a mass threshold (0.90 by default) measures the size of
//! the metastable state the head averages over. Heads are classified by
//! the median `k` relative to the sequence length `n`:
//!
//! * Class I:   `k_median > n/2` (averaging over very many patterns)
//! * Class II:  `n/8 < k_median <= n/2`
//! * Class III: `n/32 < k_median <= n/8`
//! * Class IV:  `k_median <= n/32` (small metastable states)
//!
//! Rows are analyzed exactly as provided; filtering padding positions is
//! the caller's job.

use thiserror::Error;

/// Errors raised by head analysis.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum HeadModeError {
    #[error("attention row must be nonempty")]
    EmptyRow,

    #[error("attention row entries must be finite and nonnegative")]
    InvalidEntries,

    #[error("attention row sums to {sum}, outside the renormalization window")]
    NotNormalized { sum: f64 },

    #[error("row length {got} does not match sequence length {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("mass must lie in (0, 1], got {0}")]
    InvalidMass(f64),

    #[error("no rows to analyze")]
    NoRows,
}

/// One softmax distribution over `N` positions. Rows whose sum deviates
/// from one by at most `1e-6` (file rounding) are renormalized on
/// ingest; larger deviations are rejected.
#[derive(Debug, Clone, PartialEq)]
pub struct AttentionRow {
    weights: Vec<f64>,
}

impl AttentionRow {
    pub fn new(mut weights: Vec<f64>) -> Result<Self, HeadModeError> {
        if weights.is_empty() {
            return Err(HeadModeError::EmptyRow);
        }
        if weights.iter().any(|w| !w.is_finite() || *w < -1e-12) {
            return Err(HeadModeError::InvalidEntries);
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > 1e-6 {
            return Err(HeadModeError::NotNormalized { sum });
        }
        for w in &mut weights {
            *w = w.max(0.0) / sum;
        }
        Ok(Self { weights })
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

/// Head operating class by median minimal count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatingClass {
    I,
    II,
    III,
    IV,
}

impl std::fmt::Display for OperatingClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::I => write!(f, "I"),
            Self::II => write!(f, "II"),
            Self::III => write!(f, "III"),
            Self::IV => write!(f, "IV"),
        }
    }
}

/// Per-head analysis result.
#[derive(Debug, Clone, PartialEq)]
pub struct HeadModeReport {
    /// Minimal count per analyzed row.
    pub k_values: Vec<usize>,
    /// Median of `k_values` (mean of the two middle values for even
    /// lengths).
    pub k_median: f64,
    /// Sequence length.
    pub n: usize,
    /// Operating class of the head.
    pub class: OperatingClass,
    /// Frobenius norm of the softmax Jacobian per row, when requested.
    pub frobenius_norms: Option<Vec<f64>>,
}

/// Smallest number of largest entries whose sum reaches `mass`.
/// Descending sort is stable, so ties keep their original order.
pub fn min_count_k(row: &AttentionRow, mass: f64) -> Result<usize, HeadModeError> {
    if !(mass > 0.0 && mass <= 1.0) {
        return Err(HeadModeError::InvalidMass(mass));
    }
    let mut sorted = row.weights.clone();
    sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut cum = 0.0;
    for (idx, w) in sorted.iter().enumerate() {
        cum += w;
        if cum >= mass - 1e-12 {
            return Ok(idx + 1);
        }
    }
    Ok(sorted.len())
}

/// Median of the counts; even-length lists average the two middle values.
fn median(k_values: &[usize]) -> f64 {
    let mut sorted = k_values.to_vec();
    sorted.sort_unstable();
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2] as f64
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) as f64 / 2.0
    }
}

/// Classifies a head from its per-row counts and the sequence length.
pub fn classify_head(k_values: &[usize], n: usize) -> Result<OperatingClass, HeadModeError> {
    if k_values.is_empty() {
        return Err(HeadModeError::NoRows);
    }
    if n == 0 {
        return Err(HeadModeError::LengthMismatch { expected: 1, got: 0 });
    }
    let k_bar = median(k_values);
    Ok(class_of(k_bar, n))
}

fn class_of(k_bar: f64, n: usize) -> OperatingClass {
    let n = n as f64;
    if k_bar > n / 2.0 {
        OperatingClass::I
    } else if k_bar > n / 8.0 {
        OperatingClass::II
    } else if k_bar > n / 32.0 {
        OperatingClass::III
    } else {
        OperatingClass::IV
    }
}

/// Frobenius norm of `beta (diag(p) - p p^T)` from the distribution
/// alone, without materializing the matrix:
/// `F^2 = beta^2 sum_i p_i^2 ((1 - p_i)^2 + sum_{j != i} p_j^2)`.
///
/// The off-diagonal mass is accumulated with prefix/suffix sums rather
/// than as `(sum p^2)^2 - sum p^4`, which cancels badly on nearly
/// one-hot rows.
pub fn softmax_jacobian_frobenius(row: &AttentionRow, beta: f64) -> f64 {
    let p = &row.weights;
    let n = p.len();
    let sq: Vec<f64> = p.iter().map(|v| v * v).collect();
    let mut suffix = vec![0.0; n + 1];
    for i in (0..n).rev() {
        suffix[i] = suffix[i + 1] + sq[i];
    }
    let mut prefix = 0.0;
    let mut total = 0.0;
    for i in 0..n {
        let one_minus = 1.0 - p[i];
        total += sq[i] * (one_minus * one_minus + prefix + suffix[i + 1]);
        prefix += sq[i];
    }
    beta * total.sqrt()
}

/// Analyzes one head: counts per row at `mass`, the median, the class,
/// and (when `frobenius_beta` is given) the per-row Jacobian norms.
pub fn analyze_head(
    rows: &[AttentionRow],
    n: usize,
    mass: f64,
    frobenius_beta: Option<f64>,
) -> Result<HeadModeReport, HeadModeError> {
    if rows.is_empty() {
        return Err(HeadModeError::NoRows);
    }
    for row in rows {
        if row.len() != n {
            return Err(HeadModeError::LengthMismatch { expected: n, got: row.len() });
        }
    }
    let k_values: Vec<usize> = rows
        .iter()
        .map(|r| min_count_k(r, mass))
        .collect::<Result<_, _>>()?;
    let k_median = median(&k_values);
    let class = class_of(k_median, n);
    let frobenius_norms = frobenius_beta
        .map(|beta| rows.iter().map(|r| softmax_jacobian_frobenius(r, beta)).collect());
    Ok(HeadModeReport { k_values, k_median, n, class, frobenius_norms })
}

/// Analyzes an ordered series of row-sets (for example training
/// checkpoints); one report per checkpoint, in order.
pub fn analyze_series(
    checkpoints: &[Vec<AttentionRow>],
    n: usize,
    mass: f64,
    frobenius_beta: Option<f64>,
) -> Result<Vec<HeadModeReport>, HeadModeError> {
    checkpoints
        .iter()
        .map(|rows| analyze_head(rows, n, mass, frobenius_beta))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_hot(n: usize, i: usize) -> AttentionRow {
        let mut w = vec![0.0; n];
        w[i] = 1.0;
        AttentionRow::new(w).unwrap()
    }

    fn uniform(n: usize) -> AttentionRow {
        AttentionRow::new(vec![1.0 / n as f64; n]).unwrap()
    }

    #[test]
    fn ingest_renormalizes_small_deviation() {
        let row = AttentionRow::new(vec![0.5000001, 0.5]).unwrap();
        let sum: f64 = row.weights().iter().sum();
        assert!((sum - 1.0).abs() < 1e-15);
        assert!(AttentionRow::new(vec![0.6, 0.5]).is_err());
        assert!(AttentionRow::new(vec![]).is_err());
    }

    #[test]
    fn min_count_one_hot() {
        for n in [1, 4, 128] {
            assert_eq!(min_count_k(&one_hot(n, 0), 0.9).unwrap(), 1);
        }
    }

    #[test]
    fn min_count_uniform_128() {
        // brute force: smallest k with k/128 >= 0.9 is 116
        assert_eq!(min_count_k(&uniform(128), 0.9).unwrap(), 116);
    }

    #[test]
    fn min_count_full_mass_counts_nonzeros() {
        let row = AttentionRow::new(vec![0.5, 0.25, 0.25, 0.0, 0.0]).unwrap();
        assert_eq!(min_count_k(&row, 1.0).unwrap(), 3);
    }

    #[test]
    fn min_count_monotone_in_mass() {
        let row = AttentionRow::new(vec![0.4, 0.3, 0.2, 0.1]).unwrap();
        let mut last = 0;
        for mass in [0.1, 0.3, 0.5, 0.7, 0.9, 1.0] {
            let k = min_count_k(&row, mass).unwrap();
            assert!(k >= last);
            last = k;
        }
    }

    #[test]
    fn min_count_k_one_iff_max_reaches_mass() {
        let row = AttentionRow::new(vec![0.91, 0.09]).unwrap();
        assert_eq!(min_count_k(&row, 0.9).unwrap(), 1);
        let row = AttentionRow::new(vec![0.89, 0.11]).unwrap();
        assert_eq!(min_count_k(&row, 0.9).unwrap(), 2);
    }

    #[test]
    fn classify_reference_cases() {
        assert_eq!(classify_head(&[3; 10], 128).unwrap(), OperatingClass::IV);
        assert_eq!(classify_head(&[116; 10], 128).unwrap(), OperatingClass::I);
        assert_eq!(classify_head(&[16; 10], 128).unwrap(), OperatingClass::III);
    }

    #[test]
    fn classify_boundaries_at_128() {
        // boundary medians land in the lower class (non-strict upper bound)
        assert_eq!(classify_head(&[4], 128).unwrap(), OperatingClass::IV);
        assert_eq!(classify_head(&[16], 128).unwrap(), OperatingClass::III);
        assert_eq!(classify_head(&[64], 128).unwrap(), OperatingClass::II);
        assert_eq!(classify_head(&[65], 128).unwrap(), OperatingClass::I);
    }

    #[test]
    fn classification_invariant_under_row_permutation() {
        let row = AttentionRow::new(vec![0.7, 0.1, 0.1, 0.1]).unwrap();
        let permuted = AttentionRow::new(vec![0.1, 0.1, 0.7, 0.1]).unwrap();
        assert_eq!(
            min_count_k(&row, 0.9).unwrap(),
            min_count_k(&permuted, 0.9).unwrap()
        );
    }

    #[test]
    fn frobenius_one_hot_zero() {
        assert_eq!(softmax_jacobian_frobenius(&one_hot(5, 2), 1.0), 0.0);
    }

    #[test]
    fn frobenius_uniform_two() {
        let f = softmax_jacobian_frobenius(&uniform(2), 1.0);
        assert!((f - 0.5).abs() < 1e-15);
    }

    #[test]
    fn frobenius_matches_dense() {
        let rows = vec![
            AttentionRow::new(vec![0.5, 0.3, 0.2]).unwrap(),
            AttentionRow::new(vec![0.05, 0.9, 0.05]).unwrap(),
        ];
        for row in &rows {
            for beta in [0.5, 1.0, 3.0] {
                let closed = softmax_jacobian_frobenius(row, beta);
                let p = row.weights();
                let mut dense = 0.0;
                for i in 0..p.len() {
                    for j in 0..p.len() {
                        let v = if i == j { p[i] * (1.0 - p[i]) } else { -p[i] * p[j] };
                        dense += (beta * v) * (beta * v);
                    }
                }
                assert!((closed - dense.sqrt()).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn analyze_head_aggregates() {
        let rows: Vec<AttentionRow> = (0..10).map(|i| one_hot(128, i)).collect();
        let rep = analyze_head(&rows, 128, 0.9, Some(1.0)).unwrap();
        assert_eq!(rep.class, OperatingClass::IV);
        assert_eq!(rep.k_median, 1.0);
        assert!(rep.frobenius_norms.unwrap().iter().all(|&f| f == 0.0));

        let rows: Vec<AttentionRow> = (0..10).map(|_| uniform(128)).collect();
        let rep = analyze_head(&rows, 128, 0.9, None).unwrap();
        assert_eq!(rep.class, OperatingClass::I);
        assert_eq!(rep.k_median, 116.0);
    }

    #[test]
    fn analyze_head_mixed_median() {
        let mut rows: Vec<AttentionRow> = (0..5).map(|i| one_hot(128, i)).collect();
        rows.extend((0..5).map(|_| uniform(128)));
        let rep = analyze_head(&rows, 128, 0.9, None).unwrap();
        assert_eq!(rep.k_median, (1.0 + 116.0) / 2.0);
        assert_eq!(rep.class, OperatingClass::II);
    }

    #[test]
    fn analyze_head_rejects_ragged() {
        let rows = vec![one_hot(4, 0), one_hot(5, 0)];
        assert!(matches!(
            analyze_head(&rows, 4, 0.9, None),
            Err(HeadModeError::LengthMismatch { .. })
        ));
    }

    #[test]
    fn analyze_series_ordering_and_drift() {
        let single = vec![vec![uniform(128); 4]];
        let series = analyze_series(&single, 128, 0.9, None).unwrap();
        assert_eq!(series.len(), 1);
        assert_eq!(series[0], analyze_head(&single[0], 128, 0.9, None).unwrap());

        // identical checkpoints give identical reports
        let twice = vec![vec![one_hot(128, 3); 4], vec![one_hot(128, 3); 4]];
        let series = analyze_series(&twice, 128, 0.9, None).unwrap();
        assert_eq!(series[0], series[1]);

        // drifting one-hot -> uniform walks the classes from IV to I
        let n = 128;
        let mut checkpoints = Vec::new();
        for t in 0..5 {
            let lambda = t as f64 / 4.0;
            let mut w = vec![lambda / n as f64; n];
            w[0] += 1.0 - lambda;
            let total: f64 = w.iter().sum();
            for v in &mut w {
                *v /= total;
            }
            checkpoints.push(vec![AttentionRow::new(w).unwrap(); 3]);
        }
        let series = analyze_series(&checkpoints, n, 0.9, None).unwrap();
        assert_eq!(series.first().unwrap().class, OperatingClass::IV);
        assert_eq!(series.last().unwrap().class, OperatingClass::I);
    }
}
