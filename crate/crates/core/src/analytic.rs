//! Closed-form curves for every damping regime, plus the circular-decay curve
//! `x = A e^{-gamma t} cos(t + phi)`, `p = A e^{-gamma t} sin(t + phi)` that
//! is kept verbatim so it can be falsified.
//!
//! Each curve carries hand-written analytic derivatives, so a residual check
//! measures modelling error only.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::invariants::principal_angle;
use crate::oscillator::{pseudo_frequency, OscillatorParams, PhaseState, Regime, Trajectory};

/// Parameters of one closed-form family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CurveKind {
    /// `x = A e^{-gamma t} cos(t + phi)`, `p = A e^{-gamma t} sin(t + phi)`; `p` is not `dx/dt`.
    LiuClaimed { amplitude: f64, phase: f64 },
    /// `x = A e^{-gamma t} cos(omega t + phi)` with `A > 0`, `phi` in `(-pi, pi]`.
    Underdamped { amplitude: f64, phase: f64 },
    /// `x = (c1 + c2 t) e^{-gamma t}`.
    Critical { c1: f64, c2: f64 },
    /// `x = c1 e^{(-gamma + zeta) t} + c2 e^{(-gamma - zeta) t}`.
    Overdamped { c1: f64, c2: f64 },
}

/// An evaluable `(x(t), p(t))` pair with exact time derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormCurve {
    params: OscillatorParams,
    kind: CurveKind,
    // pseudo-frequency for Underdamped, decay split for Overdamped, else 0
    rate: f64,
}

impl ClosedFormCurve {
    /// Underdamped (or undamped) curve with the given amplitude and phase.
    pub fn underdamped(params: OscillatorParams, amplitude: f64, phase: f64) -> Result<Self> {
        params.require_oscillatory("underdamped curve")?;
        if !(amplitude > 0.0 && amplitude.is_finite()) {
            return Err(Error::InvalidArgument(format!("amplitude must be > 0, got {amplitude}")));
        }
        if !(phase > -PI && phase <= PI) {
            return Err(Error::InvalidArgument(format!("phase must lie in (-pi, pi], got {phase}")));
        }
        Ok(Self { params, kind: CurveKind::Underdamped { amplitude, phase }, rate: pseudo_frequency(&params)? })
    }

    pub fn critical(params: OscillatorParams, c1: f64, c2: f64) -> Result<Self> {
        require_regime(&params, Regime::Critical, "critical curve")?;
        Ok(Self { params, kind: CurveKind::Critical { c1, c2 }, rate: 0.0 })
    }

    pub fn overdamped(params: OscillatorParams, c1: f64, c2: f64) -> Result<Self> {
        require_regime(&params, Regime::Overdamped, "overdamped curve")?;
        Ok(Self { params, kind: CurveKind::Overdamped { c1, c2 }, rate: params.decay_split()? })
    }

    pub fn params(&self) -> &OscillatorParams {
        &self.params
    }

    pub fn kind(&self) -> CurveKind {
        self.kind
    }

    pub fn x(&self, t: f64) -> f64 {
        let g = self.params.gamma();
        let decay = (-g * t).exp();
        match self.kind {
            CurveKind::LiuClaimed { amplitude, phase } => amplitude * decay * (t + phase).cos(),
            CurveKind::Underdamped { amplitude, phase } => amplitude * decay * (self.rate * t + phase).cos(),
            CurveKind::Critical { c1, c2 } => (c1 + c2 * t) * decay,
            CurveKind::Overdamped { c1, c2 } => {
                let z = self.rate;
                c1 * ((-g + z) * t).exp() + c2 * ((-g - z) * t).exp()
            }
        }
    }

    pub fn p(&self, t: f64) -> f64 {
        let g = self.params.gamma();
        let decay = (-g * t).exp();
        match self.kind {
            CurveKind::LiuClaimed { amplitude, phase } => amplitude * decay * (t + phase).sin(),
            CurveKind::Underdamped { amplitude, phase } => {
                let w = self.rate;
                let arg = w * t + phase;
                -amplitude * decay * (g * arg.cos() + w * arg.sin())
            }
            CurveKind::Critical { c1, c2 } => (c2 - g * (c1 + c2 * t)) * decay,
            CurveKind::Overdamped { c1, c2 } => {
                let z = self.rate;
                let (fast, slow) = (-g - z, -g + z);
                c1 * slow * (slow * t).exp() + c2 * fast * (fast * t).exp()
            }
        }
    }

    pub fn dxdt(&self, t: f64) -> f64 {
        match self.kind {
            CurveKind::LiuClaimed { amplitude, phase } => {
                let g = self.params.gamma();
                // product rule: d/dt[e^{-gt}] cos + e^{-gt} d/dt[cos]
                -amplitude * (-g * t).exp() * (g * (t + phase).cos() + (t + phase).sin())
            }
            _ => self.p(t),
        }
    }

    pub fn dpdt(&self, t: f64) -> f64 {
        let g = self.params.gamma();
        let decay = (-g * t).exp();
        match self.kind {
            CurveKind::LiuClaimed { amplitude, phase } => {
                amplitude * decay * ((t + phase).cos() - g * (t + phase).sin())
            }
            CurveKind::Underdamped { amplitude, phase } => {
                let w = self.rate;
                let arg = w * t + phase;
                amplitude * decay * ((g * g - w * w) * arg.cos() + 2.0 * g * w * arg.sin())
            }
            CurveKind::Critical { c1, c2 } => (g * g * (c1 + c2 * t) - 2.0 * g * c2) * decay,
            CurveKind::Overdamped { c1, c2 } => {
                let z = self.rate;
                let (fast, slow) = (-g - z, -g + z);
                c1 * slow * slow * (slow * t).exp() + c2 * fast * fast * (fast * t).exp()
            }
        }
    }

    pub fn state(&self, t: f64) -> PhaseState {
        PhaseState { t, x: self.x(t), p: self.p(t) }
    }

    /// Samples the curve at the given times.
    pub fn sample(&self, times: impl IntoIterator<Item = f64>) -> Result<Trajectory> {
        let samples = times.into_iter().map(|t| self.state(t)).collect();
        Trajectory::new(self.params, samples)
    }

    /// Samples on `t0, t0 + dt, ...` up to and including `t_end` (last step may be short).
    pub fn sample_uniform(&self, t0: f64, t_end: f64, dt: f64) -> Result<Trajectory> {
        self.sample(crate::dynamics::step_times(t0, t_end, dt)?)
    }
}

fn require_regime(params: &OscillatorParams, required: Regime, operation: &'static str) -> Result<()> {
    let found = params.regime();
    if found != required {
        let required = match required {
            Regime::Critical => "gamma = omega0 (critical)",
            Regime::Overdamped => "gamma > omega0 (overdamped)",
            _ => "gamma < omega0",
        };
        return Err(Error::Regime { operation, required, found });
    }
    Ok(())
}

/// The circular-decay curve `x = e^{-gamma t} cos(t + phi)`, `p = e^{-gamma t} sin(t + phi)`,
/// evaluated exactly as written (natural frequency fixed at 1).
pub fn liu_claimed_solution(gamma: f64, phi: f64) -> Result<ClosedFormCurve> {
    liu_claimed_with_amplitude(gamma, 1.0, phi)
}

/// Same curve family with an explicit positive amplitude.
pub fn liu_claimed_with_amplitude(gamma: f64, amplitude: f64, phi: f64) -> Result<ClosedFormCurve> {
    let params = OscillatorParams::unit(gamma)?;
    if !(amplitude > 0.0 && amplitude.is_finite() && phi.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "need amplitude > 0 and finite phase, got A={amplitude}, phi={phi}"
        )));
    }
    Ok(ClosedFormCurve { params, kind: CurveKind::LiuClaimed { amplitude, phase: phi }, rate: 0.0 })
}

/// Fits `x = A e^{-gamma t} cos(omega t + phi)` to `x(0) = x0`, `dx/dt(0) = p0`.
pub fn solve_underdamped(params: OscillatorParams, x0: f64, p0: f64) -> Result<ClosedFormCurve> {
    params.require_oscillatory("solve_underdamped")?;
    if x0 == 0.0 && p0 == 0.0 {
        return Err(Error::Degenerate);
    }
    let w = pseudo_frequency(&params)?;
    // A cos(phi) = x0, A sin(phi) = -(p0 + gamma x0) / omega
    let a_cos = x0;
    let a_sin = -(p0 + params.gamma() * x0) / w;
    let amplitude = a_cos.hypot(a_sin);
    let phase = principal_angle(a_cos, a_sin)?;
    ClosedFormCurve::underdamped(params, amplitude, phase)
}

/// Fits `x = (c1 + c2 t) e^{-gamma t}` to the initial state.
pub fn solve_critical(params: OscillatorParams, x0: f64, p0: f64) -> Result<ClosedFormCurve> {
    let c1 = x0;
    let c2 = p0 + params.gamma() * x0;
    ClosedFormCurve::critical(params, c1, c2)
}

/// Fits `x = c1 e^{(-gamma+zeta) t} + c2 e^{(-gamma-zeta) t}` to the initial state.
pub fn solve_overdamped(params: OscillatorParams, x0: f64, p0: f64) -> Result<ClosedFormCurve> {
    let z = params.decay_split().map_err(|_| Error::Regime {
        operation: "solve_overdamped",
        required: "gamma > omega0 (overdamped)",
        found: params.regime(),
    })?;
    let g = params.gamma();
    let (fast, slow) = (-g - z, -g + z);
    let c1 = (p0 - fast * x0) / (2.0 * z);
    let c2 = (slow * x0 - p0) / (2.0 * z);
    ClosedFormCurve::overdamped(params, c1, c2)
}

/// Dispatches to the solver matching the parameters' regime.
pub fn solve(params: OscillatorParams, x0: f64, p0: f64) -> Result<ClosedFormCurve> {
    match params.regime() {
        Regime::Undamped | Regime::Underdamped => solve_underdamped(params, x0, p0),
        Regime::Critical => solve_critical(params, x0, p0),
        Regime::Overdamped => solve_overdamped(params, x0, p0),
    }
}

/// Absolute tolerance for matching the phase-shifted complex form.
pub const Z_FORM_TOL: f64 = 1e-12;

/// Outcome of comparing `z = x + i p` against its two candidate closed forms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZFormCheck {
    pub z: Complex64,
    /// `A e^{-gamma t} [cos(omega t + phi) - i sin(omega t + phi + beta)]`.
    pub corrected_form: Complex64,
    /// `A e^{-gamma t - i(omega t + phi)}`.
    pub simple_exponential: Complex64,
    /// Phase offset with `sin beta = gamma`, `cos beta = omega`.
    pub beta: f64,
    pub matches_corrected_form: bool,
    pub differs_from_simple_exponential: bool,
    pub simple_exponential_gap: f64,
}

/// Evaluates `z = x + i p` on the corrected underdamped curve (unit natural
/// frequency) and compares it with the phase-shifted form and with the plain
/// complex exponential.
pub fn verify_z_form(amplitude: f64, phi: f64, gamma: f64, t: f64) -> Result<ZFormCheck> {
    if !(0.0..1.0).contains(&gamma) {
        return Err(Error::InvalidArgument(format!(
            "z-form check needs 0 <= gamma < 1 with omega0 = 1, got gamma={gamma}"
        )));
    }
    if !t.is_finite() {
        return Err(Error::InvalidArgument(format!("time must be finite, got {t}")));
    }
    let params = OscillatorParams::unit(gamma)?;
    let curve = ClosedFormCurve::underdamped(params, amplitude, phi)?;
    let w = pseudo_frequency(&params)?;
    let beta = gamma.atan2(w);

    let z = Complex64::new(curve.x(t), curve.p(t));
    let arg = w * t + phi;
    let envelope = amplitude * (-gamma * t).exp();
    let corrected_form = Complex64::new(envelope * arg.cos(), -envelope * (arg + beta).sin());
    let simple_exponential = Complex64::from_polar(envelope, -arg);

    let simple_exponential_gap = (z - simple_exponential).norm();
    Ok(ZFormCheck {
        z,
        corrected_form,
        simple_exponential,
        beta,
        matches_corrected_form: (z - corrected_form).norm() <= Z_FORM_TOL,
        differs_from_simple_exponential: simple_exponential_gap > Z_FORM_TOL,
        simple_exponential_gap,
    })
}
