//! Multivalued first integrals of the damped oscillator and their Riemann-sheet
//! bookkeeping.
//!
//! The logarithmic-spiral invariant `H1 = theta + ln(r) / gamma` is only constant
//! along a path once `theta` is continued across the negative x-axis, i.e. once
//! the principal angle is replaced by `[theta] + 2 pi n`. [`SheetTracker`]
//! performs that continuation with the minimal-jump rule; the sheet number is
//! derived from the continued angle so `unwrapped = principal + 2 pi n` holds
//! by construction.
//!
//! For the standard equation of motion `dp/dt = -omega0^2 x - 2 gamma p` the
//! conserved quantity is
//!
//! ```text
//! r = ln[omega^2 x^2 + (gamma x + p)^2] - 2 (gamma / omega) phi,
//! tan phi = (gamma x + p) / (omega x),
//! ```
//!
//! with `phi` continued along the path. In the sheared coordinates
//! `(omega x, gamma x + p)` the flow is a uniformly shrinking clockwise
//! rotation, so `phi` decreases by `omega` per unit time.

use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::oscillator::{pseudo_frequency, OscillatorParams, Trajectory};

/// Angle of `(x, p)` in `(-pi, pi]`.
///
/// `atan2` returns `-pi` for a negative-zero `p` on the negative x-axis; that
/// value is folded onto `+pi`.
pub fn principal_angle(x: f64, p: f64) -> Result<f64> {
    if x == 0.0 && p == 0.0 {
        return Err(Error::Origin);
    }
    let theta = p.atan2(x);
    Ok(if theta == -PI { PI } else { theta })
}

fn require_positive_gamma(gamma: f64) -> Result<()> {
    if gamma == 0.0 {
        return Err(Error::Singularity);
    }
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::InvalidArgument(format!("gamma must be > 0, got {gamma}")));
    }
    Ok(())
}

/// `H1 = atan2(p, x) + ln(sqrt(x^2 + p^2)) / gamma` with the principal angle only.
pub fn h1_naive(x: f64, p: f64, gamma: f64) -> Result<f64> {
    require_positive_gamma(gamma)?;
    let theta = principal_angle(x, p)?;
    Ok(theta + x.hypot(p).ln() / gamma)
}

/// `gamma * H1 = gamma * atan2(p, x) + ln(sqrt(x^2 + p^2))`, finite at `gamma = 0`.
pub fn gamma_h1(x: f64, p: f64, gamma: f64) -> Result<f64> {
    if !(gamma >= 0.0 && gamma.is_finite()) {
        return Err(Error::InvalidArgument(format!("gamma must be >= 0, got {gamma}")));
    }
    let theta = principal_angle(x, p)?;
    Ok(gamma * theta + x.hypot(p).ln())
}

/// Energy `(p^2 + omega0^2 x^2) / 2` of the undamped oscillator.
pub fn energy_undamped(x: f64, p: f64, omega0: f64) -> f64 {
    0.5 * (p * p + omega0 * omega0 * x * x)
}

/// `H1 = phi + ln(A) / gamma` for the curve `x = A e^{-gamma t} cos(t + phi)`.
pub fn generalized_h1(amplitude: f64, phi: f64, gamma: f64) -> Result<f64> {
    if !(amplitude > 0.0 && amplitude.is_finite()) {
        return Err(Error::InvalidArgument(format!("amplitude must be > 0, got {amplitude}")));
    }
    require_positive_gamma(gamma)?;
    Ok(phi + amplitude.ln() / gamma)
}

/// Running continuation of a multivalued angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SheetTracker {
    unwrapped: f64,
    sheet: i64,
    principal: f64,
}

impl SheetTracker {
    /// Starts on sheet 0 at the given principal value.
    pub fn new(principal: f64) -> Self {
        Self { unwrapped: principal, sheet: 0, principal }
    }

    /// Starts at an arbitrary continued angle; the sheet is inferred.
    pub fn from_unwrapped(angle: f64) -> Self {
        let principal = wrap_to_principal(angle);
        let sheet = ((angle - principal) / TAU).round() as i64;
        Self { unwrapped: principal + TAU * sheet as f64, sheet, principal }
    }

    pub fn unwrapped(&self) -> f64 {
        self.unwrapped
    }

    pub fn sheet(&self) -> i64 {
        self.sheet
    }

    pub fn principal(&self) -> f64 {
        self.principal
    }

    /// Moves to the representative `new_principal + 2 pi k` closest to the
    /// current continued angle.
    #[must_use]
    pub fn unwrap_step(self, new_principal: f64) -> Self {
        let sheet = ((self.unwrapped - new_principal) / TAU).round() as i64;
        Self { unwrapped: new_principal + TAU * sheet as f64, sheet, principal: new_principal }
    }

    /// Like [`unwrap_step`](Self::unwrap_step) but refuses a step whose
    /// resolution is ambiguous, i.e. a jump of (numerically) exactly pi.
    pub fn try_unwrap_step(self, new_principal: f64) -> Option<Self> {
        let next = self.unwrap_step(new_principal);
        let jump = (next.unwrapped - self.unwrapped).abs();
        if jump >= PI * (1.0 - 1e-12) {
            None
        } else {
            Some(next)
        }
    }
}

/// Maps any angle into `(-pi, pi]`.
pub fn wrap_to_principal(angle: f64) -> f64 {
    let w = angle - TAU * (angle / TAU).round();
    if w <= -PI {
        w + TAU
    } else if w > PI {
        w - TAU
    } else {
        w
    }
}

/// Continues a sequence of principal angles along a path.
pub fn unwrap_angles(principals: &[f64]) -> Result<Vec<SheetTracker>> {
    let Some(&first) = principals.first() else {
        return Ok(Vec::new());
    };
    let mut out = Vec::with_capacity(principals.len());
    let mut tracker = SheetTracker::new(first);
    out.push(tracker);
    for (index, &theta) in principals.iter().enumerate().skip(1) {
        tracker = tracker.try_unwrap_step(theta).ok_or(Error::AmbiguousUnwrap { index })?;
        out.push(tracker);
    }
    Ok(out)
}

/// Values of an invariant sampled along a trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct InvariantSeries {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub mean: f64,
    pub max_abs_deviation_from_mean: f64,
}

impl InvariantSeries {
    pub fn new(times: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if times.len() != values.len() || times.is_empty() {
            return Err(Error::InvalidArgument(format!(
                "series needs matching non-empty columns, got {} times and {} values",
                times.len(),
                values.len()
            )));
        }
        let mean = values.iter().sum::<f64>() / values.len() as f64;
        let max_abs_deviation_from_mean = values.iter().map(|v| (v - mean).abs()).fold(0.0, f64::max);
        Ok(Self { times, values, mean, max_abs_deviation_from_mean })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn initial(&self) -> f64 {
        self.values[0]
    }

    /// `max_t |I(t) - I(t0)|`, the conservation figure of merit.
    pub fn max_deviation_from_initial(&self) -> f64 {
        let v0 = self.initial();
        self.values.iter().map(|v| (v - v0).abs()).fold(0.0, f64::max)
    }

    /// `max - min` over the series.
    pub fn range(&self) -> f64 {
        let (lo, hi) =
            self.values.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
        hi - lo
    }

    pub fn write_csv<W: std::io::Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "t,value")?;
        for (t, v) in self.times.iter().zip(&self.values) {
            writeln!(out, "{t:.16e},{v:.16e}")?;
        }
        Ok(())
    }

    pub fn export_csv(&self, path: impl AsRef<std::path::Path>) -> Result<()> {
        let file = std::fs::File::create(path)?;
        self.write_csv(std::io::BufWriter::new(file))
    }
}

/// `H1` along a trajectory with the angle continued across sheets (sheet 0 at the first sample).
pub fn h1_unwrapped(traj: &Trajectory, gamma: f64) -> Result<InvariantSeries> {
    require_positive_gamma(gamma)?;
    let samples = traj.samples();
    let principals = samples.iter().map(|s| principal_angle(s.x, s.p)).collect::<Result<Vec<_>>>()?;
    let trackers = unwrap_angles(&principals)?;
    let values = samples.iter().zip(&trackers).map(|(s, tr)| tr.unwrapped() + s.x.hypot(s.p).ln() / gamma).collect();
    InvariantSeries::new(traj.times().collect(), values)
}

/// `H1` along a trajectory using only the principal angle.
pub fn h1_naive_series(traj: &Trajectory, gamma: f64) -> Result<InvariantSeries> {
    let values = traj.samples().iter().map(|s| h1_naive(s.x, s.p, gamma)).collect::<Result<Vec<_>>>()?;
    InvariantSeries::new(traj.times().collect(), values)
}

/// Which branch of the auxiliary angle to use in [`r_zimmer`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AuxPhase {
    /// Principal `phi` in `(-pi, pi]` on sheet `n`, entering as `phi - 2 pi n`.
    Sheet(i64),
    /// An already continued angle, used as is.
    Unwrapped(f64),
}

/// Principal value of the auxiliary angle `phi = atan2(gamma x + p, omega x)`.
pub fn aux_angle(x: f64, p: f64, params: &OscillatorParams) -> Result<f64> {
    params.require_oscillatory("aux_angle")?;
    let w = pseudo_frequency(params)?;
    principal_angle(w * x, params.gamma() * x + p)
}

/// The underdamped constant of motion
/// `r = ln[omega^2 x^2 + (gamma x + p)^2] - 2 (gamma / omega)(phi - 2 pi n)`.
///
/// With [`AuxPhase::Sheet`], the sign of `n` follows the formula above: a path
/// that has turned clockwise once past the cut has `n = 1`. A
/// [`SheetTracker`] continuing the same angle reports sheet `-n`.
pub fn r_zimmer(x: f64, p: f64, params: &OscillatorParams, phase: AuxPhase) -> Result<f64> {
    params.require_oscillatory("r_zimmer")?;
    if x == 0.0 && p == 0.0 {
        return Err(Error::Origin);
    }
    let w = pseudo_frequency(params)?;
    let g = params.gamma();
    let u = w * x;
    let v = g * x + p;
    let phi = match phase {
        AuxPhase::Sheet(n) => principal_angle(u, v)? - TAU * n as f64,
        AuxPhase::Unwrapped(phi) => phi,
    };
    Ok((u * u + v * v).ln() - 2.0 * (g / w) * phi)
}

/// `r` along a trajectory with `phi` continued from sheet 0 at the first sample.
pub fn r_zimmer_series(traj: &Trajectory) -> Result<InvariantSeries> {
    let params = traj.params();
    let principals = traj.samples().iter().map(|s| aux_angle(s.x, s.p, params)).collect::<Result<Vec<_>>>()?;
    let trackers = unwrap_angles(&principals)?;
    let values = traj
        .samples()
        .iter()
        .zip(&trackers)
        .map(|(s, tr)| r_zimmer(s.x, s.p, params, AuxPhase::Unwrapped(tr.unwrapped())))
        .collect::<Result<Vec<_>>>()?;
    InvariantSeries::new(traj.times().collect(), values)
}

/// A first integral that can be evaluated at a single phase-space point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PointInvariant {
    /// `H1` with the principal angle.
    H1Naive,
    /// `cos(H1)`.
    CosH1,
    /// `gamma * H1`.
    GammaH1,
    /// `r` on sheet 0.
    RPoint,
}

impl PointInvariant {
    pub fn name(self) -> &'static str {
        match self {
            PointInvariant::H1Naive => "h1",
            PointInvariant::CosH1 => "cos-h1",
            PointInvariant::GammaH1 => "gamma-h1",
            PointInvariant::RPoint => "r",
        }
    }

    /// Checks the parameter-level preconditions once, before evaluating many points.
    pub fn validate(self, params: &OscillatorParams) -> Result<()> {
        match self {
            PointInvariant::H1Naive | PointInvariant::CosH1 => require_positive_gamma(params.gamma()),
            PointInvariant::GammaH1 => Ok(()),
            PointInvariant::RPoint => params.require_oscillatory("r_zimmer"),
        }
    }

    pub fn evaluate(self, x: f64, p: f64, params: &OscillatorParams) -> Result<f64> {
        let g = params.gamma();
        match self {
            PointInvariant::H1Naive => h1_naive(x, p, g),
            PointInvariant::CosH1 => h1_naive(x, p, g).map(f64::cos),
            PointInvariant::GammaH1 => gamma_h1(x, p, g),
            PointInvariant::RPoint => r_zimmer(x, p, params, AuxPhase::Sheet(0)),
        }
    }
}

/// Offset from the negative x-axis used by the one-sided jump probes.
pub const BRANCH_PROBE_EPS: f64 = 1e-9;

/// Jump `I(theta = pi^-) - I(theta = (-pi)^+)` of a point invariant across
/// the negative x-axis at the given radius.
///
/// The invariant is probed at angular offsets `eps` and `2 eps` from the axis
/// and the one-sided difference is Richardson-extrapolated to `eps -> 0`.
pub fn branch_jump(invariant: PointInvariant, params: &OscillatorParams, radius: f64) -> Result<f64> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::InvalidArgument(format!("radius must be > 0, got {radius}")));
    }
    invariant.validate(params)?;
    let diff = |eps: f64| -> Result<f64> {
        let (s, c) = (PI - eps).sin_cos();
        let above = invariant.evaluate(radius * c, radius * s, params)?;
        let below = invariant.evaluate(radius * c, -radius * s, params)?;
        Ok(above - below)
    };
    let d1 = diff(BRANCH_PROBE_EPS)?;
    let d2 = diff(2.0 * BRANCH_PROBE_EPS)?;
    Ok(2.0 * d1 - d2)
}

/// [`branch_jump`] for `H1` itself.
pub fn branch_jump_h1(gamma: f64, radius: f64) -> Result<f64> {
    require_positive_gamma(gamma)?;
    branch_jump(PointInvariant::H1Naive, &OscillatorParams::unit(gamma)?, radius)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::{liu_claimed_solution, liu_claimed_with_amplitude};
    use crate::dynamics::{integrate_rk4, Convention};
    use crate::oscillator::PhaseState;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_PI_2;

    fn unit(gamma: f64) -> OscillatorParams {
        OscillatorParams::unit(gamma).unwrap()
    }

    #[test]
    fn principal_angle_range() {
        assert_eq!(principal_angle(1.0, 0.0).unwrap(), 0.0);
        assert_eq!(principal_angle(0.0, 1.0).unwrap(), FRAC_PI_2);
        assert_eq!(principal_angle(-1.0, 0.0).unwrap(), PI);
        assert_eq!(principal_angle(-1.0, -0.0).unwrap(), PI);
        assert_eq!(principal_angle(0.0, 0.0), Err(Error::Origin));
    }

    #[test]
    fn h1_naive_examples() {
        assert_eq!(h1_naive(1.0, 0.0, 0.5).unwrap(), 0.0);
        let r = (-0.1f64).exp();
        assert_abs_diff_eq!(h1_naive(r * 1f64.cos(), r * 1f64.sin(), 0.1).unwrap(), 0.0, epsilon = 1e-14);
        assert_eq!(h1_naive(1.0, 0.0, 0.0), Err(Error::Singularity));
        assert_eq!(h1_naive(0.0, 0.0, 0.1), Err(Error::Origin));
    }

    #[test]
    fn unwrap_step_examples() {
        let t = SheetTracker::new(3.0).unwrap_step(-3.1);
        assert_abs_diff_eq!(t.unwrapped(), -3.1 + TAU, epsilon = 1e-15);
        assert_eq!(t.sheet(), 1);

        let t = SheetTracker::new(0.0).unwrap_step(0.1);
        assert_eq!((t.unwrapped(), t.sheet()), (0.1, 0));

        let t = SheetTracker::new(-3.0).unwrap_step(3.1);
        assert_abs_diff_eq!(t.unwrapped(), 3.1 - TAU, epsilon = 1e-15);
        assert_eq!(t.sheet(), -1);
    }

    #[test]
    fn ambiguous_half_turn_is_refused() {
        assert!(SheetTracker::new(0.0).try_unwrap_step(PI).is_none());
        assert!(SheetTracker::new(0.0).try_unwrap_step(3.0).is_some());
        assert_eq!(unwrap_angles(&[0.0, 1.0, PI, 0.0]).unwrap_err(), Error::AmbiguousUnwrap { index: 3 });
    }

    #[test]
    fn tracker_from_unwrapped_angle() {
        let t = SheetTracker::from_unwrapped(7.0);
        assert_eq!(t.sheet(), 1);
        assert_abs_diff_eq!(t.unwrapped(), 7.0, epsilon = 1e-15);
        assert_eq!(wrap_to_principal(-PI), PI);
        assert_eq!(wrap_to_principal(3.0 * PI), PI);
    }

    fn liu_traj(gamma: f64, amplitude: f64, phi: f64, t_end: f64, dt: f64) -> Trajectory {
        liu_claimed_with_amplitude(gamma, amplitude, phi).unwrap().sample_uniform(0.0, t_end, dt).unwrap()
    }

    #[test]
    fn unwrapped_h1_recovers_phase() {
        for phi in [0.0, 1.0] {
            let series = h1_unwrapped(&liu_traj(0.1, 1.0, phi, 10.0, 0.01), 0.1).unwrap();
            assert_eq!(series.len(), 1001);
            assert!(series.max_deviation_from_initial() <= 1e-9);
            assert_abs_diff_eq!(series.initial(), phi, epsilon = 1e-12);
        }
    }

    #[test]
    fn naive_h1_drops_by_full_turns() {
        let traj = liu_traj(0.1, 1.0, 0.0, 10.0, 0.01);
        let naive = h1_naive_series(&traj, 0.1).unwrap();
        let unwrapped = h1_unwrapped(&traj, 0.1).unwrap();
        for (a, b) in naive.values.iter().zip(&unwrapped.values) {
            let turns = (b - a) / TAU;
            assert_abs_diff_eq!(turns, turns.round(), epsilon = 1e-9);
        }
        // t = 10 is past the first (t = pi) and second (t = 3 pi) crossings
        assert_abs_diff_eq!(naive.values[1000], -2.0 * TAU, epsilon = 1e-9);
    }

    #[test]
    fn generalized_h1_examples() {
        assert_eq!(generalized_h1(1.0, 0.7, 0.3).unwrap(), 0.7);
        assert_abs_diff_eq!(generalized_h1(std::f64::consts::E, 0.0, 0.5).unwrap(), 2.0, epsilon = 1e-15);
        assert!(generalized_h1(0.0, 0.0, 0.5).is_err());
        assert_eq!(generalized_h1(1.0, 0.0, 0.0), Err(Error::Singularity));

        let series = h1_unwrapped(&liu_traj(0.2, 2.0, 0.5, 10.0, 0.01), 0.2).unwrap();
        let expected = generalized_h1(2.0, 0.5, 0.2).unwrap();
        assert_abs_diff_eq!(expected, 0.5 + 2f64.ln() / 0.2, epsilon = 1e-15);
        for v in &series.values {
            assert_abs_diff_eq!(*v, expected, epsilon = 1e-9);
        }
    }

    #[test]
    fn gamma_h1_examples() {
        assert_eq!(gamma_h1(1.0, 0.0, 0.5).unwrap(), 0.0);
        assert_eq!(gamma_h1(1.0, 0.0, 0.0).unwrap(), 0.0);
        // ln|z| at gamma = 0 equals ln sqrt(2E)
        let (x, p) = (0.3, 0.4);
        assert_abs_diff_eq!(
            gamma_h1(x, p, 0.0).unwrap(),
            (2.0 * energy_undamped(x, p, 1.0)).sqrt().ln(),
            epsilon = 1e-15
        );
        assert_eq!(gamma_h1(0.0, 0.0, 0.1), Err(Error::Origin));
    }

    #[test]
    fn energy_examples() {
        assert_eq!(energy_undamped(1.0, 0.0, 1.0), 0.5);
        assert_eq!(energy_undamped(0.0, 2.0, 1.0), 2.0);
    }

    #[test]
    fn r_point_examples() {
        assert_eq!(r_zimmer(1.0, 0.0, &unit(0.0), AuxPhase::Sheet(0)).unwrap(), 0.0);
        let r = r_zimmer(1.0, 0.0, &unit(0.6), AuxPhase::Sheet(0)).unwrap();
        // ln(0.8^2 + 0.6^2) = 0, phi = atan2(0.6, 0.8)
        assert_abs_diff_eq!(r, -1.5 * 0.6f64.atan2(0.8), epsilon = 1e-15);
        assert_abs_diff_eq!(r, -0.965_251_663_2, epsilon = 1e-9);
    }

    #[test]
    fn r_sheet_sign_convention() {
        let params = unit(0.3);
        let (x, p) = (-0.5, 0.2);
        let phi = aux_angle(x, p, &params).unwrap();
        let on_sheet = r_zimmer(x, p, &params, AuxPhase::Sheet(1)).unwrap();
        let continued = r_zimmer(x, p, &params, AuxPhase::Unwrapped(phi - TAU)).unwrap();
        assert_abs_diff_eq!(on_sheet, continued, epsilon = 1e-14);
    }

    #[test]
    fn r_rejects_non_oscillatory_and_origin() {
        for gamma in [1.0, 10.0, 100.0] {
            assert!(matches!(r_zimmer(1.0, 0.0, &unit(gamma), AuxPhase::Sheet(0)), Err(Error::Regime { .. })));
        }
        assert_eq!(r_zimmer(0.0, 0.0, &unit(0.1), AuxPhase::Sheet(0)), Err(Error::Origin));
    }

    #[test]
    fn r_conserved_along_rk4() {
        let params = unit(0.1);
        let w = pseudo_frequency(&params).unwrap();
        let init = PhaseState::new(0.0, 1.0, 0.0).unwrap();
        let traj = integrate_rk4(&params, Convention::ZimmerCorrected, init, 10.0 * TAU / w, 1e-3).unwrap();
        let series = r_zimmer_series(&traj).unwrap();
        assert!(series.max_deviation_from_initial() <= 1e-6, "{}", series.max_deviation_from_initial());
        // the principal-only form is not conserved
        let naive = traj
            .samples()
            .iter()
            .map(|s| r_zimmer(s.x, s.p, &params, AuxPhase::Sheet(0)).unwrap())
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
        assert!(naive.1 - naive.0 > 1.0);
    }

    #[test]
    fn r_small_damping_limit() {
        let (x, p) = (0.3, 0.4);
        let log2e = (2.0 * energy_undamped(x, p, 1.0)).ln();
        let gap = |g: f64| (r_zimmer(x, p, &unit(g), AuxPhase::Sheet(0)).unwrap() - log2e).abs();
        assert!(gap(1e-6) <= 1e-4);
        let ratio = gap(1e-3) / gap(5e-4);
        assert!((ratio - 2.0).abs() <= 0.2, "ratio {ratio}");
    }

    #[test]
    fn branch_jump_values() {
        assert_abs_diff_eq!(branch_jump_h1(0.1, 1.0).unwrap(), TAU, epsilon = 1e-7);
        let params = unit(0.1);
        assert!(branch_jump(PointInvariant::CosH1, &params, 1.0).unwrap().abs() <= 1e-7);
        assert_abs_diff_eq!(branch_jump(PointInvariant::GammaH1, &params, 1.0).unwrap(), TAU * 0.1, epsilon = 1e-7);
        assert_eq!(branch_jump_h1(0.0, 1.0), Err(Error::Singularity));
        assert!(branch_jump_h1(0.1, 0.0).is_err());
    }

    #[test]
    fn cosine_hides_full_turn_but_not_scaled_turn() {
        let g = 0.1;
        let h = gamma_h1(1.0, 0.0, g).unwrap();
        assert!(((h + TAU * g).cos() - h.cos()).abs() > 0.1);
    }

    #[test]
    fn series_statistics() {
        let s = InvariantSeries::new(vec![0.0, 1.0, 2.0], vec![1.0, 2.0, 0.0]).unwrap();
        assert_eq!(s.mean, 1.0);
        assert_eq!(s.max_abs_deviation_from_mean, 1.0);
        assert_eq!(s.max_deviation_from_initial(), 1.0);
        assert_eq!(s.range(), 2.0);
        assert!(InvariantSeries::new(vec![0.0], vec![]).is_err());
        let mut buf = Vec::new();
        s.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().next(), Some("t,value"));
        assert_eq!(text.lines().count(), 4);
    }

    proptest! {
        #[test]
        fn cosine_masks_full_turn(x in -10.0f64..10.0, p in -10.0f64..10.0, g in 0.01f64..2.0) {
            prop_assume!(x.hypot(p) > 1e-3);
            let h = h1_naive(x, p, g).unwrap();
            prop_assert!(((h + TAU).cos() - h.cos()).abs() <= 1e-12 * (1.0 + h.abs()));
        }

        #[test]
        fn unwrapping_stays_on_integer_sheets(
            gamma in 0.0f64..0.9,
            amplitude in 0.1f64..5.0,
            phase in -3.1f64..3.1,
        ) {
            let params = unit(gamma);
            let curve = crate::analytic::ClosedFormCurve::underdamped(params, amplitude, phase).unwrap();
            let traj = curve.sample_uniform(0.0, 30.0, 0.05).unwrap();
            let principals: Vec<f64> = traj.samples().iter().map(|s| principal_angle(s.x, s.p).unwrap()).collect();
            for tr in unwrap_angles(&principals).unwrap() {
                let turns = (tr.unwrapped() - tr.principal()) / TAU;
                prop_assert!((turns - turns.round()).abs() <= 1e-12);
                prop_assert_eq!(turns.round() as i64, tr.sheet());
            }
        }

        #[test]
        fn unwrap_step_takes_minimal_jump(prev in -50.0f64..50.0, raw in -std::f64::consts::PI..std::f64::consts::PI) {
            let t = SheetTracker::from_unwrapped(prev).unwrap_step(raw);
            prop_assert!((t.unwrapped() - prev).abs() <= PI + 1e-12);
            prop_assert_eq!(t.principal(), raw);
        }
    }

    #[test]
    fn liu_curve_phase_matches_eq_chain() {
        // along the claimed curve, principal angle tracks [t + phi]
        let curve = liu_claimed_solution(0.1, 0.4).unwrap();
        let s = curve.state(2.0);
        assert_abs_diff_eq!(principal_angle(s.x, s.p).unwrap(), 2.4, epsilon = 1e-14);
    }
}
