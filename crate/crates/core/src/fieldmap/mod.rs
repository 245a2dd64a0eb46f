//! Dense evaluation of point invariants over the `(x, p)` plane and detection
//! of the branch-cut jump along the negative x-axis.

mod export;

pub use export::{export_grid, write_csv, write_svg, ExportFormat};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::invariants::PointInvariant;
use crate::oscillator::OscillatorParams;

/// Rectangular sampling window. Samples sit at cell centres.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub p_min: f64,
    pub p_max: f64,
    pub nx: usize,
    pub ny: usize,
}

impl GridSpec {
    pub fn new(x_min: f64, x_max: f64, p_min: f64, p_max: f64, nx: usize, ny: usize) -> Result<Self> {
        let spec = Self { x_min, x_max, p_min, p_max, nx, ny };
        spec.validate()?;
        Ok(spec)
    }

    /// Square window `[-half, half]^2` with `n x n` cells.
    pub fn square(half: f64, n: usize) -> Result<Self> {
        Self::new(-half, half, -half, half, n, n)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.x_min, self.x_max, self.p_min, self.p_max].iter().all(|v| v.is_finite());
        if !finite || !(self.x_min < self.x_max) || !(self.p_min < self.p_max) {
            return Err(Error::InvalidArgument(format!(
                "grid bounds must be finite and ordered: x [{}, {}], p [{}, {}]",
                self.x_min, self.x_max, self.p_min, self.p_max
            )));
        }
        if self.nx < 2 || self.ny < 2 {
            return Err(Error::InvalidArgument(format!(
                "grid needs at least 2 cells per axis, got {}x{}",
                self.nx, self.ny
            )));
        }
        Ok(())
    }

    /// Centre of column `i`.
    pub fn x_at(&self, i: usize) -> f64 {
        cell_center(self.x_min, self.x_max, i, self.nx)
    }

    /// Centre of row `j`; rows run from `p_min` upward.
    pub fn p_at(&self, j: usize) -> f64 {
        cell_center(self.p_min, self.p_max, j, self.ny)
    }

    pub fn cell_width(&self) -> f64 {
        (self.x_max - self.x_min) / self.nx as f64
    }

    pub fn cell_height(&self) -> f64 {
        (self.p_max - self.p_min) / self.ny as f64
    }
}

// lo + (hi - lo)(2k + 1) / 2n lands exactly on 0 for symmetric odd grids
fn cell_center(lo: f64, hi: f64, k: usize, n: usize) -> f64 {
    lo + (hi - lo) * (2 * k + 1) as f64 / (2 * n) as f64
}

/// Invariant values on a grid; `None` marks a masked cell.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldGrid {
    spec: GridSpec,
    invariant: PointInvariant,
    params: OscillatorParams,
    values: Vec<Option<f64>>,
}

impl FieldGrid {
    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn invariant(&self) -> PointInvariant {
        self.invariant
    }

    pub fn params(&self) -> &OscillatorParams {
        &self.params
    }

    /// Value at column `i`, row `j`.
    pub fn get(&self, i: usize, j: usize) -> Option<f64> {
        self.values[j * self.spec.nx + i]
    }

    pub fn is_valid(&self, i: usize, j: usize) -> bool {
        self.get(i, j).is_some()
    }

    /// Row-major values (rows of constant `p`).
    pub fn values(&self) -> &[Option<f64>] {
        &self.values
    }

    /// `(min, max)` over valid cells, if any.
    pub fn value_range(&self) -> Option<(f64, f64)> {
        self.values.iter().flatten().fold(None, |acc, &v| match acc {
            None => Some((v, v)),
            Some((lo, hi)) => Some((f64::min(lo, v), f64::max(hi, v))),
        })
    }

    /// Elementwise map over valid cells.
    pub fn map(&self, invariant: PointInvariant, f: impl Fn(f64) -> f64) -> FieldGrid {
        FieldGrid {
            spec: self.spec,
            invariant,
            params: self.params,
            values: self.values.iter().map(|v| v.map(&f).filter(|v| v.is_finite())).collect(),
        }
    }
}

/// Evaluates a point invariant at every cell centre.
///
/// Parameter-level preconditions (for example `gamma = 0` for `H1`) fail the
/// whole call; cells where the invariant is undefined, such as the origin, are
/// masked.
pub fn evaluate_field(invariant: PointInvariant, params: &OscillatorParams, spec: &GridSpec) -> Result<FieldGrid> {
    spec.validate()?;
    invariant.validate(params)?;
    let values = (0..spec.ny)
        .into_par_iter()
        .flat_map_iter(|j| {
            let p = spec.p_at(j);
            (0..spec.nx).map(move |i| invariant.evaluate(spec.x_at(i), p, params).ok().filter(|v| v.is_finite()))
        })
        .collect();
    Ok(FieldGrid { spec: *spec, invariant, params: *params, values })
}

/// Default magnitude above which a column's corrected jump is flagged.
pub const DEFAULT_FLAG_THRESHOLD: f64 = 1e-3;

/// One column where the field was compared across `p = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellPair {
    pub column: usize,
    pub x: f64,
    /// Last row with `p < 0`.
    pub below_row: usize,
    /// First row with `p >= 0`.
    pub above_row: usize,
    /// Difference across the axis minus the local smooth trend.
    pub jump: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BranchJumpReport {
    /// Median corrected jump over all usable `x < 0` columns.
    pub jump_estimate: f64,
    /// Columns whose corrected jump exceeds the flag threshold.
    pub locus: Vec<CellPair>,
    /// Every usable column, flagged or not.
    pub columns: Vec<CellPair>,
}

pub fn detect_branch_jump(grid: &FieldGrid) -> Result<BranchJumpReport> {
    detect_branch_jump_with(grid, DEFAULT_FLAG_THRESHOLD)
}

/// Estimates the jump of a field across the negative x-axis.
///
/// For each `x < 0` column the difference between the two cells straddling
/// `p = 0` is corrected by the mean of the adjacent same-side differences, which
/// cancels the smooth part of the field to second order in the row spacing.
/// The median over columns is robust to the few columns near the origin where
/// the field is steep.
pub fn detect_branch_jump_with(grid: &FieldGrid, flag_threshold: f64) -> Result<BranchJumpReport> {
    let spec = grid.spec();
    let below = (0..spec.ny).take_while(|&j| spec.p_at(j) < 0.0).count();
    let above = spec.ny - below;
    if below < 2 || above < 2 {
        return Err(Error::NoStraddle(format!(
            "need 2 rows on each side of p = 0, got {below} below and {above} above"
        )));
    }
    let (b2, b1, a1, a2) = (below - 2, below - 1, below, below + 1);

    let columns: Vec<CellPair> = (0..spec.nx)
        .filter(|&i| spec.x_at(i) < 0.0)
        .filter_map(|i| {
            let v = |j| grid.get(i, j);
            let (vb2, vb1, va1, va2) = (v(b2)?, v(b1)?, v(a1)?, v(a2)?);
            let cross = va1 - vb1;
            let trend = 0.5 * ((va2 - va1) + (vb1 - vb2));
            Some(CellPair { column: i, x: spec.x_at(i), below_row: b1, above_row: a1, jump: cross - trend })
        })
        .collect();
    if columns.is_empty() {
        return Err(Error::NoStraddle("no valid x < 0 column crosses p = 0".into()));
    }

    let mut jumps: Vec<f64> = columns.iter().map(|c| c.jump).collect();
    jumps.sort_by(f64::total_cmp);
    let mid = jumps.len() / 2;
    let jump_estimate = if jumps.len() % 2 == 1 { jumps[mid] } else { 0.5 * (jumps[mid - 1] + jumps[mid]) };
    let locus = columns.iter().copied().filter(|c| c.jump.abs() > flag_threshold).collect();
    Ok(BranchJumpReport { jump_estimate, locus, columns })
}
