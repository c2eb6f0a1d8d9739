//! Piecewise Padé-Chebyshev type (PiPCT) approximation of piecewise smooth
//! functions on an interval, with an adaptive variant (APiPCT) that locates
//! singularities through near-zeros of the rational denominators on the unit
//! circle, refines the partition there, and raises the numerator degree in
//! flagged cells.
//!
//! Per-cell construction, error measurement, and badcell scanning run
//! data-parallel over rayon by default; build with
//! `--no-default-features` for the sequential fallback.

pub mod adaptive;
pub mod chebyshev;
pub mod corpus;
pub mod diagnostics;
pub mod error;
pub mod harness;
pub mod interval;
mod par;
pub mod pct;
pub mod piecewise;

pub use chebyshev::{chebyshev_points, ChebyshevExpansion};
pub use error::{Error, Result};
pub use interval::Interval;
pub use pct::{PCTApproximant, ToeplitzSystem};
pub use piecewise::{
    build_pipct, build_pipct_sequential, build_pipct_uniform, build_piecewise_chebyshev,
    convergence_order, convergence_table, ConvergenceRecord, Partition, PiecewiseApproximant,
    PiecewiseChebyshev,
};
