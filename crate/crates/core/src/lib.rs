//! Variable selection for wide binary and ternary data by leverage and
//! cross-leverage scores of the augmented matrix `[X, y]ᵀ`, with the
//! simulation studies and logic-regression pipeline built around it.
//!
//! Variable indices are 0-based throughout the library. Text formats and
//! the command line use 1-based indices.

pub mod dataset;
pub mod error;
pub mod experiments;
pub mod io;
pub mod leverage;
pub mod logic;
pub mod qr;
pub mod selection;
pub mod simgen;
pub mod stats;

pub use dataset::{augment, AugmentedMatrix, Coding, Dataset};
pub use error::{Error, Result};
pub use leverage::{compute_scores, hat_matrix_dense, ScoreSet, DENSE_HAT_CAP};
pub use selection::{
    sample_size, select, select_combined, CombinedMode, CombinedSpec, Criterion, SelectionResult,
    SelectionSpec,
};
pub use simgen::{builtin_scenario, generate, Calibration, ScenarioSpec};
