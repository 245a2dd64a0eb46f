//! Equations of motion, a fixed-step RK4 integrator and the residual checker
//! that certifies or falsifies closed-form curves.

use crate::analytic::ClosedFormCurve;
use crate::error::{Error, Result};
use crate::oscillator::{OscillatorParams, PhaseState, Trajectory};

/// Default absolute threshold for a residual verdict.
pub const DEFAULT_RESIDUAL_THRESHOLD: f64 = 1e-8;

/// How the damping coefficient enters the equation of motion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Convention {
    /// `dp/dt = -x - gamma p`, natural frequency fixed at 1.
    LiuEq1,
    /// `dp/dt = -omega0^2 x - 2 gamma p`.
    #[default]
    ZimmerCorrected,
}

impl Convention {
    /// Damping coefficient in the standard (`2 gamma`) convention for a
    /// coefficient written in `self`'s convention.
    pub fn to_standard_gamma(self, gamma: f64) -> f64 {
        match self {
            Convention::LiuEq1 => gamma / 2.0,
            Convention::ZimmerCorrected => gamma,
        }
    }

    fn check(self, params: &OscillatorParams) -> Result<()> {
        if self == Convention::LiuEq1 && params.omega0() != 1.0 {
            return Err(Error::Convention(format!("LiuEq1 fixes omega0 = 1, got omega0 = {}", params.omega0())));
        }
        Ok(())
    }
}

fn rhs_unchecked(x: f64, p: f64, params: &OscillatorParams, conv: Convention) -> (f64, f64) {
    let g = params.gamma();
    match conv {
        Convention::LiuEq1 => (p, -x - g * p),
        Convention::ZimmerCorrected => {
            let w0 = params.omega0();
            (p, -(w0 * w0) * x - (2.0 * g) * p)
        }
    }
}

/// Right-hand side `(dx/dt, dp/dt)` of the equation of motion. `params.gamma()`
/// is read in the given convention.
pub fn eom_rhs(state: &PhaseState, params: &OscillatorParams, conv: Convention) -> Result<(f64, f64)> {
    conv.check(params)?;
    Ok(rhs_unchecked(state.x, state.p, params, conv))
}

/// Grid `t0, t0 + dt, t0 + 2 dt, ...` ending exactly at `t_end`; the final
/// interval may be shorter than `dt`.
pub fn step_times(t0: f64, t_end: f64, dt: f64) -> Result<Vec<f64>> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidArgument(format!("step must be positive and finite, got {dt}")));
    }
    if !(t0.is_finite() && t_end.is_finite() && t_end > t0) {
        return Err(Error::InvalidArgument(format!("need finite t_end > t0, got t0={t0}, t_end={t_end}")));
    }
    let ratio = (t_end - t0) / dt;
    let nearest = ratio.round();
    // absorb rounding in (t_end - t0) / dt so 62.8 / 1e-3 gives 62800 steps, not 62801
    let steps =
        if nearest >= 1.0 && (ratio - nearest).abs() <= 1e-9 * nearest.max(1.0) { nearest } else { ratio.ceil() }
            as usize;
    let mut times: Vec<f64> = (0..steps).map(|k| t0 + k as f64 * dt).collect();
    times.push(t_end);
    Ok(times)
}

/// Classic fourth-order Runge-Kutta with a fixed step.
pub fn integrate_rk4(
    params: &OscillatorParams,
    conv: Convention,
    init: PhaseState,
    t_end: f64,
    dt: f64,
) -> Result<Trajectory> {
    conv.check(params)?;
    if !init.is_finite() {
        return Err(Error::NonFinite { t: init.t });
    }
    let times = step_times(init.t, t_end, dt)?;
    let f = |x: f64, p: f64| rhs_unchecked(x, p, params, conv);

    let mut samples = Vec::with_capacity(times.len());
    samples.push(init);
    let (mut x, mut p) = (init.x, init.p);
    for w in times.windows(2) {
        let h = w[1] - w[0];
        let (k1x, k1p) = f(x, p);
        let (k2x, k2p) = f(x + 0.5 * h * k1x, p + 0.5 * h * k1p);
        let (k3x, k3p) = f(x + 0.5 * h * k2x, p + 0.5 * h * k2p);
        let (k4x, k4p) = f(x + h * k3x, p + h * k3p);
        x += h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
        p += h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
        if !(x.is_finite() && p.is_finite()) {
            return Err(Error::NonFinite { t: w[1] });
        }
        samples.push(PhaseState { t: w[1], x, p });
    }
    Trajectory::new(*params, samples)
}

/// Source of the curve derivatives used in a residual.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DerivativeMode {
    /// Hand-coded derivatives stored with the curve.
    #[default]
    Analytic,
    /// Central differences with `h = 1e-6 * max(1, |t|)`; cross-checks the analytic code.
    CentralDifference,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Satisfies,
    Violates,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualReport {
    pub max_abs_residual_x: f64,
    pub max_abs_residual_p: f64,
    /// Time of the largest residual over both equations.
    pub argmax_t: f64,
    pub threshold: f64,
    pub verdict: Verdict,
}

/// Signed residuals `(dx/dt - p, dp/dt - rhs_p(x, p))` of a curve at time `t`.
pub fn pointwise_residual(
    curve: &ClosedFormCurve,
    conv: Convention,
    t: f64,
    mode: DerivativeMode,
) -> Result<(f64, f64)> {
    conv.check(curve.params())?;
    Ok(residual_at(curve, conv, t, mode))
}

fn residual_at(curve: &ClosedFormCurve, conv: Convention, t: f64, mode: DerivativeMode) -> (f64, f64) {
    let (x, p) = (curve.x(t), curve.p(t));
    let (dxdt, dpdt) = match mode {
        DerivativeMode::Analytic => (curve.dxdt(t), curve.dpdt(t)),
        DerivativeMode::CentralDifference => {
            let h = 1e-6 * t.abs().max(1.0);
            ((curve.x(t + h) - curve.x(t - h)) / (2.0 * h), (curve.p(t + h) - curve.p(t - h)) / (2.0 * h))
        }
    };
    let (_, rhs_p) = rhs_unchecked(x, p, curve.params(), conv);
    (dxdt - p, dpdt - rhs_p)
}

/// Substitutes a curve into the equation of motion on `t_grid` and reports
/// the worst violation.
pub fn residual_check(
    curve: &ClosedFormCurve,
    conv: Convention,
    t_grid: &[f64],
    threshold: f64,
) -> Result<ResidualReport> {
    residual_check_with(curve, conv, t_grid, threshold, DerivativeMode::Analytic)
}

pub fn residual_check_with(
    curve: &ClosedFormCurve,
    conv: Convention,
    t_grid: &[f64],
    threshold: f64,
    mode: DerivativeMode,
) -> Result<ResidualReport> {
    conv.check(curve.params())?;
    if t_grid.is_empty() {
        return Err(Error::InvalidArgument("residual check needs at least one sample time".into()));
    }
    if !(threshold >= 0.0) {
        return Err(Error::InvalidArgument(format!("threshold must be >= 0, got {threshold}")));
    }
    let (mut max_x, mut max_p, mut worst, mut argmax_t) = (0.0f64, 0.0f64, -1.0f64, t_grid[0]);
    for &t in t_grid {
        let (rx, rp) = residual_at(curve, conv, t, mode);
        if !(rx.is_finite() && rp.is_finite()) {
            return Err(Error::NonFinite { t });
        }
        max_x = max_x.max(rx.abs());
        max_p = max_p.max(rp.abs());
        let here = rx.abs().max(rp.abs());
        if here > worst {
            worst = here;
            argmax_t = t;
        }
    }
    let verdict = if max_x <= threshold && max_p <= threshold { Verdict::Satisfies } else { Verdict::Violates };
    Ok(ResidualReport { max_abs_residual_x: max_x, max_abs_residual_p: max_p, argmax_t, threshold, verdict })
}

/// `n` evenly spaced times covering `[t0, t1]` inclusive.
pub fn linspace(t0: f64, t1: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![t0],
        _ => (0..n).map(|k| t0 + (t1 - t0) * k as f64 / (n - 1) as f64).collect(),
    }
}
