//! Harmonic functions and asymptotics.
//!
//! Boundary series of the positive harmonic function of five models in the
//! three-quadrant cone, the grids they generate, and estimates of the
//! constants in `c_{i,j}(n) ∼ κ μⁿ n^{−e}` from exact counts.

pub mod boundary;
pub mod grid;
pub mod growth;
pub mod real;
pub mod series;

pub use boundary::{harmonic_boundary, quadrant_boundary, Boundary, HARMONIC_MODELS};
pub use grid::{harmonic_grid, HarmonicGrid};
pub use growth::{asymptotics, da_predictions, estimate_growth, kreweras_kappa, Asymptotic, DaReport, GrowthModel};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum HarmonicError {
    #[error("unknown model `{0}`; expected one of: {1}")]
    UnknownModel(String, String),
    #[error("precision of {digits} digits is below the minimum of {min}")]
    PrecisionTooLow { digits: u32, min: u32 },
    #[error("boundary series of `{0}` has an unexpected pole")]
    Singular(String),
    #[error("grid inconsistent: residual {residual:e} exceeds {tol:e}")]
    GridInconsistent { residual: f64, tol: f64 },
    #[error("grid value at ({i},{j}) could not be reached from the boundary")]
    GridIncomplete { i: i32, j: i32 },
    #[error("harmonic relation at ({i},{j}) has several unknowns")]
    Underdetermined { i: i32, j: i32 },
    #[error("too few points: {have} usable terms, need {need}")]
    TooFewPoints { have: usize, need: usize },
}
