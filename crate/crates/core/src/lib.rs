//! Verification toolkit for the damped 1D harmonic oscillator.
//!
//! - [`oscillator`]: parameters, damping regimes, phase-space samples.
//! - [`analytic`]: closed-form solutions for every regime, and the
//!   circular-decay curve kept verbatim for falsification.
//! - [`dynamics`]: equations of motion in two damping conventions, RK4, and the
//!   residual checker.
//! - [`invariants`]: the multivalued first integrals with Riemann-sheet unwrapping.
//! - [`fieldmap`]: phase-plane fields, branch-cut detection, CSV/SVG export.

// `!(a < b)` is used on purpose so NaN falls into the rejection branch.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod dynamics;
pub mod error;
pub mod fieldmap;
pub mod invariants;
pub mod oscillator;

pub use error::{Error, Result};
pub use oscillator::{classify_regime, pseudo_frequency, OscillatorParams, PhaseState, Regime, Trajectory};
