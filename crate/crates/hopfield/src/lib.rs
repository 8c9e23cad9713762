//! Continuous modern Hopfield networks.
//!
//! An associative memory over real-valued patterns: the energy
//!
//! ```text
//! E(xi) = -lse(beta, X^T xi) + 1/2 xi^T xi + beta^-1 ln N + 1/2 M^2
//! ```
//!
//! is minimized by the update rule `xi <- X softmax(beta X^T xi)`, which
//! converges globally, usually retrieves a stored pattern in one step,
//! and — after projecting queries and keys — is exactly transformer
//! attention. The crate covers:
//!
//! * [`dynamics`]: energy, update rule, fixed-point iteration, the
//!   forgetting/causal-masking variant, and the Gaussian-mixture form of
//!   the energy landscape;
//! * [`separation`]: pattern separation `Delta_i` and sufficient
//!   certificates for global, stored-pattern, and metastable fixed
//!   points;
//! * [`capacity`]: both real branches of the Lambert W function and the
//!   exponential storage-capacity calculators built on them;
//! * [`layers`]: the attention-equivalent forward passes (association,
//!   pooling, fixed-memory lookup), analytic weight gradients, pattern
//!   normalization, and input-independent Gaussian averaging heads;
//! * [`headmode`]: operating-class analysis of attention heads from
//!   their softmax rows;
//! * [`binary`]: the binary exponential-interaction network used as a
//!   discrete cross-check.
//!
//! Everything is pure and deterministic: reductions run in fixed
//! sequential order, so results are bit-identical across runs and safe
//! to call from many threads.

pub mod binary;
pub mod capacity;
pub mod dynamics;
pub mod error;
pub mod headmode;
pub mod layers;
pub mod linalg;
pub mod math;
pub mod pattern;
pub mod separation;

pub use error::CoreError;
pub use linalg::Mat;
pub use math::{lse, lse_duality_gap, softmax, softmax_jacobian, InverseTemperature};
pub use pattern::{PatternMatrix, StateVector};

pub use dynamics::{
    energy, gaussian_mixture_form, iterate, temporal_update, update, update_jacobian,
    IterationConfig, IterationResult,
};
pub use separation::{
    classify_regime, one_update_jacobian_bound, retrieval_error_bound, separation,
    separation_to_query, RegimeReport, SeparationReport,
};
