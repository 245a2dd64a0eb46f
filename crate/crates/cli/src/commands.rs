use std::f64::consts::TAU;

use dampcheck::analytic::{liu_claimed_solution, solve, ClosedFormCurve};
use dampcheck::dynamics::{integrate_rk4, linspace, residual_check_with, DerivativeMode, Verdict};
use dampcheck::fieldmap::{detect_branch_jump, evaluate_field, export_grid, ExportFormat, GridSpec};
use dampcheck::invariants::{h1_naive_series, h1_unwrapped, r_zimmer_series, InvariantSeries};
use dampcheck::{classify_regime, pseudo_frequency, Error, OscillatorParams, PhaseState, Regime, Result, Trajectory};

use crate::{
    ClassifyArgs, ConserveArgs, CurveArg, DerivativeArg, FieldArgs, OscArgs, ResidualArgs, SeriesInvariant, SourceArg,
};

fn params(osc: &OscArgs) -> Result<OscillatorParams> {
    OscillatorParams::new(osc.omega0, osc.gamma)
}

fn require_unit_frequency(osc: &OscArgs, what: &str) -> Result<()> {
    if osc.omega0 != 1.0 {
        return Err(Error::InvalidArgument(format!("{what} fixes omega0 = 1, got {}", osc.omega0)));
    }
    Ok(())
}

pub fn classify(args: &ClassifyArgs) -> Result<bool> {
    let params = params(&args.osc)?;
    let regime = classify_regime(&params, args.tol)?;
    match regime {
        Regime::Undamped | Regime::Underdamped => {
            println!("{regime}, omega={}", pseudo_frequency(&params)?)
        }
        Regime::Critical => println!("{regime}"),
        Regime::Overdamped => println!("{regime}, zeta={}", params.decay_split()?),
    }
    Ok(true)
}

fn describe(curve: &ClosedFormCurve) -> String {
    format!("{:?}", curve.kind())
}

pub fn residual(args: &ResidualArgs) -> Result<bool> {
    let curve = match args.curve {
        CurveArg::LiuClaimed => {
            require_unit_frequency(&args.osc, "the liu-claimed curve")?;
            liu_claimed_solution(args.osc.gamma, args.phi)?
        }
        CurveArg::Corrected => solve(params(&args.osc)?, args.x0, args.p0)?,
    };
    if args.samples == 0 || args.t_end.partial_cmp(&args.t_start).is_none_or(|o| o.is_lt()) {
        return Err(Error::InvalidArgument("need samples >= 1 and t_end >= t_start".into()));
    }
    let grid = linspace(args.t_start, args.t_end, args.samples);
    let mode = match args.derivatives {
        DerivativeArg::Analytic => DerivativeMode::Analytic,
        DerivativeArg::FiniteDifference => DerivativeMode::CentralDifference,
    };
    let report = residual_check_with(&curve, args.convention.into(), &grid, args.threshold, mode)?;

    println!("curve: {} (omega0={}, gamma={})", describe(&curve), curve.params().omega0(), curve.params().gamma());
    println!("convention: {:?}", dampcheck::dynamics::Convention::from(args.convention));
    println!("samples: {} on [{}, {}]", grid.len(), args.t_start, args.t_end);
    println!("max |dx/dt - p|: {:.6e}", report.max_abs_residual_x);
    println!("max |dp/dt - rhs_p|: {:.6e}", report.max_abs_residual_p);
    println!("worst at t={}", report.argmax_t);
    let satisfied = report.verdict == Verdict::Satisfies;
    println!("verdict: {} (threshold {:e})", if satisfied { "satisfies" } else { "violates" }, report.threshold);
    Ok(satisfied)
}

fn conserve_trajectory(args: &ConserveArgs) -> Result<(Trajectory, String)> {
    let source = match args.source {
        SourceArg::Auto if args.invariant == SeriesInvariant::H1Unwrapped => SourceArg::LiuCurve,
        SourceArg::Auto => SourceArg::Rk4,
        s => s,
    };
    match source {
        SourceArg::LiuCurve => {
            require_unit_frequency(&args.osc, "the liu-claimed curve")?;
            let t_end = args.t_end.unwrap_or(10.0);
            let traj = liu_claimed_solution(args.osc.gamma, args.phi)?.sample_uniform(0.0, t_end, args.dt)?;
            Ok((traj, format!("liu-claimed curve (phi={}) on [0, {t_end}]", args.phi)))
        }
        _ => {
            let params = params(&args.osc)?;
            let t_end = match args.t_end {
                Some(t) => t,
                None => pseudo_frequency(&params).map(|w| 10.0 * TAU / w).unwrap_or(20.0),
            };
            let init = PhaseState::new(0.0, args.x0, args.p0)?;
            let traj = integrate_rk4(&params, args.convention.into(), init, t_end, args.dt)?;
            Ok((traj, format!("rk4 {:?} from ({}, {}) on [0, {t_end}]", args.convention, args.x0, args.p0)))
        }
    }
}

pub fn conserve(args: &ConserveArgs) -> Result<bool> {
    let (traj, label) = conserve_trajectory(args)?;
    let gamma = args.osc.gamma;
    let series: InvariantSeries = match args.invariant {
        SeriesInvariant::R => r_zimmer_series(&traj)?,
        SeriesInvariant::H1Naive => h1_naive_series(&traj, gamma)?,
        SeriesInvariant::H1Unwrapped => h1_unwrapped(&traj, gamma)?,
    };
    if let Some(path) = &args.csv {
        series.export_csv(path)?;
    }
    let dev = series.max_deviation_from_initial();
    let conserved = dev <= args.tolerance;
    println!("invariant: {:?}", args.invariant);
    println!("source: {label}");
    println!("samples: {}", series.len());
    println!("initial value: {:.12}", series.initial());
    println!("max deviation from initial: {dev:.6e}");
    println!("verdict: {} (tolerance {:e})", if conserved { "conserved" } else { "not conserved" }, args.tolerance);
    Ok(conserved)
}

pub fn field(args: &FieldArgs) -> Result<bool> {
    let params = params(&args.osc)?;
    let spec = GridSpec::new(args.x_min, args.x_max, args.p_min, args.p_max, args.nx, args.ny)?;
    let grid = evaluate_field(args.invariant.into(), &params, &spec)?;
    let masked = grid.values().iter().filter(|v| v.is_none()).count();
    println!(
        "field: {} on [{}, {}] x [{}, {}], {}x{} cells, {masked} masked",
        grid.invariant().name(),
        spec.x_min,
        spec.x_max,
        spec.p_min,
        spec.p_max,
        spec.nx,
        spec.ny
    );
    if let Some((lo, hi)) = grid.value_range() {
        println!("range: [{lo:.6}, {hi:.6}]");
    }
    match detect_branch_jump(&grid) {
        Ok(report) => println!(
            "branch jump across negative x-axis: {:.6} ({} of {} columns flagged)",
            report.jump_estimate,
            report.locus.len(),
            report.columns.len()
        ),
        Err(e) => println!("branch jump: n/a ({e})"),
    }
    if let Some(path) = &args.output {
        export_grid(&grid, ExportFormat::Csv, path)?;
        println!("wrote {}", path.display());
    }
    if let Some(path) = &args.svg {
        export_grid(&grid, ExportFormat::SvgHeatmap, path)?;
        println!("wrote {}", path.display());
    }
    Ok(true)
}
