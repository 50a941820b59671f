//! Numerical toolkit for the elliptic U(2) dynamical quantum group.
//!
//! Layers, bottom to top:
//!
//! - [`theta`], [`tracked`]: theta functions, elliptic Pochhammer symbols and exact zero
//!   bookkeeping.
//! - [`series`]: terminating very-well-poised elliptic hypergeometric series and the
//!   elliptic Bailey transformation.
//! - [`rmatrix`]: the dynamical R-matrix and the QDYBE.
//! - [`coef`], [`algebra`]: coefficient functions of the dynamical variable and formal
//!   words in the generators.
//! - [`rep`], [`relations`]: the dynamical representation on weighted shift operators and
//!   the relations it must preserve.
//! - [`corep`], [`biorth`]: matrix elements of the corepresentations, their closed forms,
//!   unitarity and the biorthogonality of the resulting 10ω9 functions.
//! - [`harness`], [`report`]: seeded sampling, suites and JSON reports.

pub mod algebra;
pub mod biorth;
pub mod coef;
pub mod corep;
pub mod error;
pub mod harness;
pub mod rep;
pub mod relations;
pub mod report;
pub mod rmatrix;
pub mod series;
pub mod theta;
pub mod tracked;

pub type C64 = num_complex::Complex<f64>;

pub use error::{Error, Result};
pub use theta::ThetaContext;
