//! Oscillator parameters, damping regimes and phase-space samples.
//!
//! Damping is stored in the standard convention, where the equation of motion
//! reads `dp/dt = -omega0^2 x - 2 gamma p`. The factor-of-two variant only
//! appears at the [`crate::dynamics::Convention`] boundary.

use std::fmt;

use crate::error::{Error, Result};

/// Default relative band used to recognise the undamped and critical cases.
pub const DEFAULT_REGIME_TOL: f64 = 1e-9;

/// Natural frequency and damping coefficient of a linear oscillator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorParams {
    omega0: f64,
    gamma: f64,
}

impl OscillatorParams {
    pub fn new(omega0: f64, gamma: f64) -> Result<Self> {
        if !(omega0.is_finite() && gamma.is_finite() && omega0 > 0.0 && gamma >= 0.0) {
            return Err(Error::InvalidParams { omega0, gamma });
        }
        Ok(Self { omega0, gamma })
    }

    /// Unit natural frequency, the normalisation used throughout the worked examples.
    pub fn unit(gamma: f64) -> Result<Self> {
        Self::new(1.0, gamma)
    }

    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn regime(&self) -> Regime {
        classify_regime(self, DEFAULT_REGIME_TOL).expect("params validated on construction")
    }

    /// Overdamped decay split `zeta = sqrt(gamma^2 - omega0^2)`.
    pub fn decay_split(&self) -> Result<f64> {
        if self.gamma <= self.omega0 {
            return Err(Error::Regime { operation: "decay_split", required: "gamma > omega0", found: self.regime() });
        }
        Ok(((self.gamma - self.omega0) * (self.gamma + self.omega0)).sqrt())
    }

    /// Fails with a regime error unless the parameters classify as undamped or underdamped.
    pub(crate) fn require_oscillatory(&self, operation: &'static str) -> Result<()> {
        match self.regime() {
            Regime::Undamped | Regime::Underdamped => Ok(()),
            found => Err(Error::Regime { operation, required: "gamma < omega0 (undamped or underdamped)", found }),
        }
    }
}

/// Damping regime of the linear oscillator.
///
/// The variant order is the order in which the regimes are visited as damping
/// grows at fixed natural frequency.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Regime {
    Undamped,
    Underdamped,
    Critical,
    Overdamped,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Regime::Undamped => "Undamped",
            Regime::Underdamped => "Underdamped",
            Regime::Critical => "Critical",
            Regime::Overdamped => "Overdamped",
        };
        f.write_str(name)
    }
}

/// Classifies the damping regime using a band of `tol * omega0` around the
/// undamped and critical boundaries.
pub fn classify_regime(params: &OscillatorParams, tol: f64) -> Result<Regime> {
    if !(tol >= 0.0) {
        return Err(Error::InvalidArgument(format!("classification tolerance must be >= 0, got {tol}")));
    }
    // Params built through `new` are already valid; re-check in case of
    // hand-built copies in tests.
    let OscillatorParams { omega0, gamma } = *params;
    OscillatorParams::new(omega0, gamma)?;

    let band = tol * omega0;
    let regime = if gamma <= band {
        Regime::Undamped
    } else if (gamma - omega0).abs() <= band {
        Regime::Critical
    } else if gamma < omega0 {
        Regime::Underdamped
    } else {
        Regime::Overdamped
    };
    Ok(regime)
}

/// Pseudo-frequency `omega = sqrt(omega0^2 - gamma^2)` of a damped oscillation.
pub fn pseudo_frequency(params: &OscillatorParams) -> Result<f64> {
    let OscillatorParams { omega0, gamma } = *params;
    if gamma >= omega0 {
        return Err(Error::Regime {
            operation: "pseudo_frequency",
            required: "gamma < omega0",
            found: params.regime(),
        });
    }
    // Factored form avoids cancellation in omega0^2 - gamma^2.
    Ok(((omega0 - gamma) * (omega0 + gamma)).sqrt())
}

/// A single phase-space sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseState {
    pub t: f64,
    pub x: f64,
    pub p: f64,
}

impl PhaseState {
    pub fn new(t: f64, x: f64, p: f64) -> Result<Self> {
        let state = Self { t, x, p };
        if !state.is_finite() {
            return Err(Error::NonFinite { t });
        }
        Ok(state)
    }

    pub fn is_finite(&self) -> bool {
        self.t.is_finite() && self.x.is_finite() && self.p.is_finite()
    }
}

/// Time-ordered samples of one phase-space path.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    params: OscillatorParams,
    samples: Vec<PhaseState>,
}

impl Trajectory {
    /// Builds a trajectory; samples must be non-empty, finite and strictly increasing in `t`.
    pub fn new(params: OscillatorParams, samples: Vec<PhaseState>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::InvalidArgument("trajectory needs at least one sample".into()));
        }
        for (i, s) in samples.iter().enumerate() {
            if !s.is_finite() {
                return Err(Error::NonFinite { t: s.t });
            }
            if i > 0 && !(s.t > samples[i - 1].t) {
                return Err(Error::InvalidArgument(format!(
                    "sample times must be strictly increasing (index {i}: {} after {})",
                    s.t,
                    samples[i - 1].t
                )));
            }
        }
        Ok(Self { params, samples })
    }

    pub fn params(&self) -> &OscillatorParams {
        &self.params
    }

    pub fn samples(&self) -> &[PhaseState] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn first(&self) -> &PhaseState {
        &self.samples[0]
    }

    pub fn last(&self) -> &PhaseState {
        &self.samples[self.samples.len() - 1]
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        self.samples.iter().map(|s| s.t)
    }

    /// Writes `t,x,p` rows with 17 significant digits.
    pub fn write_csv<W: std::io::Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "t,x,p")?;
        for s in &self.samples {
            writeln!(out, "{:.16e},{:.16e},{:.16e}", s.t, s.x, s.p)?;
        }
        Ok(())
    }

    pub fn export_csv(&self, path: impl AsRef<std::path::Path>) -> Result<()> {
        let file = std::fs::File::create(path)?;
        self.write_csv(std::io::BufWriter::new(file))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(omega0: f64, gamma: f64) -> OscillatorParams {
        OscillatorParams::new(omega0, gamma).unwrap()
    }

    #[test]
    fn classify_examples() {
        let tol = DEFAULT_REGIME_TOL;
        assert_eq!(classify_regime(&p(1.0, 0.5), tol).unwrap(), Regime::Underdamped);
        assert_eq!(classify_regime(&p(1.0, 1.0), tol).unwrap(), Regime::Critical);
        assert_eq!(classify_regime(&p(1.0, 10.0), tol).unwrap(), Regime::Overdamped);
        assert_eq!(classify_regime(&p(1.0, 0.0), tol).unwrap(), Regime::Undamped);
    }

    #[test]
    fn critical_band_catches_computed_inputs() {
        let gamma = 0.1 * 10.0 * (1.0 + 1e-12);
        assert_eq!(p(1.0, gamma).regime(), Regime::Critical);
    }

    #[test]
    fn invalid_params_rejected() {
        assert!(OscillatorParams::new(0.0, 0.1).is_err());
        assert!(OscillatorParams::new(-1.0, 0.1).is_err());
        assert!(OscillatorParams::new(1.0, -0.1).is_err());
        assert!(OscillatorParams::new(f64::NAN, 0.1).is_err());
        assert!(classify_regime(&p(1.0, 0.1), -1.0).is_err());
    }

    #[test]
    fn pseudo_frequency_examples() {
        assert_eq!(pseudo_frequency(&p(1.0, 0.0)).unwrap(), 1.0);
        assert!((pseudo_frequency(&p(1.0, 0.6)).unwrap() - 0.8).abs() < 1e-15);
        assert!(matches!(pseudo_frequency(&p(1.0, 1.0)), Err(Error::Regime { .. })));
    }

    #[test]
    fn decay_split_overdamped_only() {
        assert!((p(1.0, 1.25).decay_split().unwrap() - 0.75).abs() < 1e-15);
        assert!(p(1.0, 0.5).decay_split().is_err());
    }

    #[test]
    fn trajectory_rejects_bad_times() {
        let params = p(1.0, 0.1);
        let s = |t| PhaseState { t, x: 0.0, p: 0.0 };
        assert!(Trajectory::new(params, vec![]).is_err());
        assert!(Trajectory::new(params, vec![s(0.0), s(0.0)]).is_err());
        assert!(Trajectory::new(params, vec![s(1.0), s(0.5)]).is_err());
        assert!(Trajectory::new(params, vec![s(0.0), s(0.5)]).is_ok());
    }

    #[test]
    fn trajectory_csv_layout() {
        let params = p(1.0, 0.1);
        let traj = Trajectory::new(
            params,
            vec![PhaseState::new(0.0, 1.0, 0.0).unwrap(), PhaseState::new(0.1, 0.5, -0.25).unwrap()],
        )
        .unwrap();
        let mut buf = Vec::new();
        traj.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], "t,x,p");
        assert_eq!(lines.len(), 3);
        let row: Vec<f64> = lines[2].split(',').map(|v| v.parse().unwrap()).collect();
        assert_eq!(row, vec![0.1, 0.5, -0.25]);
    }

    proptest! {
        #[test]
        fn pseudo_frequency_closes_pythagoras(omega0 in 1e-3f64..1e3, frac in 0.0f64..0.999_999) {
            let gamma = frac * omega0;
            let params = p(omega0, gamma);
            let w = pseudo_frequency(&params).unwrap();
            prop_assert!(w > 0.0);
            let lhs = w * w + gamma * gamma;
            let rhs = omega0 * omega0;
            prop_assert!((lhs - rhs).abs() <= 4.0 * f64::EPSILON * rhs, "{} vs {}", lhs, rhs);
        }

        #[test]
        fn classification_is_monotone(omega0 in 1e-2f64..1e2, a in 0.0f64..3.0, b in 0.0f64..3.0, tol in 0.0f64..0.2) {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            let r_lo = classify_regime(&p(omega0, lo * omega0), tol).unwrap();
            let r_hi = classify_regime(&p(omega0, hi * omega0), tol).unwrap();
            prop_assert!(r_lo <= r_hi);
        }
    }
}
