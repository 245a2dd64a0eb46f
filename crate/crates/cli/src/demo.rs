//! `demo-errors`: one section per error in the circular-decay analysis of the
//! damped oscillator, each re-derived from the library's public operations.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use serde::Serialize;

use dampcheck::analytic::{
    liu_claimed_solution, liu_claimed_with_amplitude, solve_critical, solve_overdamped, solve_underdamped,
    verify_z_form,
};
use dampcheck::dynamics::{
    eom_rhs, integrate_rk4, linspace, pointwise_residual, residual_check, Convention, DerivativeMode, Verdict,
};
use dampcheck::fieldmap::{detect_branch_jump, evaluate_field, export_grid, ExportFormat, GridSpec};
use dampcheck::invariants::{
    branch_jump, branch_jump_h1, energy_undamped, gamma_h1, generalized_h1, h1_naive, h1_naive_series, h1_unwrapped,
    principal_angle, r_zimmer, r_zimmer_series, AuxPhase, PointInvariant,
};
use dampcheck::{classify_regime, pseudo_frequency, Error, OscillatorParams, PhaseState, Regime, Result};

use crate::DemoArgs;

const SCHEMA_VERSION: u32 = 1;
const INVALID_GAMMAS: [f64; 3] = [1.0, 10.0, 100.0];

#[derive(Debug, Serialize)]
struct Check {
    name: String,
    passed: bool,
}

#[derive(Debug, Serialize)]
struct Section {
    number: u8,
    title: &'static str,
    claim: &'static str,
    passed: bool,
    checks: Vec<Check>,
    evidence: BTreeMap<String, f64>,
}

impl Section {
    fn new(number: u8, title: &'static str, claim: &'static str) -> Self {
        Self { number, title, claim, passed: true, checks: Vec::new(), evidence: BTreeMap::new() }
    }

    fn check(&mut self, name: impl Into<String>, passed: bool) {
        self.passed &= passed;
        self.checks.push(Check { name: name.into(), passed });
    }

    fn evidence(&mut self, key: &str, value: f64) {
        self.evidence.insert(key.to_string(), value);
    }
}

#[derive(Debug, Serialize)]
struct Report {
    schema: u32,
    gamma: f64,
    all_passed: bool,
    sections: Vec<Section>,
}

fn unit(gamma: f64) -> Result<OscillatorParams> {
    OscillatorParams::unit(gamma)
}

fn error_1(g: f64, s: &mut Section) -> Result<()> {
    let curve = liu_claimed_solution(g, 0.0)?;
    let grid = linspace(0.0, 20.0, 1000);
    let (rx0, _) = pointwise_residual(&curve, Convention::LiuEq1, 0.0, DerivativeMode::Analytic)?;
    let (rx0_fd, _) = pointwise_residual(&curve, Convention::LiuEq1, 0.0, DerivativeMode::CentralDifference)?;
    s.evidence("residual_x_at_t0", rx0);
    s.check("dx/dt - p at t = 0 equals -gamma", (rx0 + g).abs() <= 1e-12);
    s.check("finite differences agree with the analytic derivative", (rx0 - rx0_fd).abs() <= 1e-6);
    for conv in [Convention::LiuEq1, Convention::ZimmerCorrected] {
        let r = residual_check(&curve, conv, &grid, 1e-6)?;
        s.evidence(&format!("max_residual_x_{conv:?}"), r.max_abs_residual_x);
        s.check(format!("violates the {conv:?} equation of motion"), r.verdict == Verdict::Violates);
    }
    Ok(())
}

fn error_2(g: f64, s: &mut Section) -> Result<()> {
    let curve = liu_claimed_solution(g, 0.0)?;
    let (_, rp0) = pointwise_residual(&curve, Convention::LiuEq1, 0.0, DerivativeMode::Analytic)?;
    s.evidence("residual_p_at_t0", rp0);
    s.check("dp/dt - (-x - gamma p) at t = 0 equals 2", (rp0 - 2.0).abs() <= 1e-12);
    let mut worst: f64 = 0.0;
    for t in linspace(0.0, 20.0, 1000) {
        let (_, rp) = pointwise_residual(&curve, Convention::LiuEq1, t, DerivativeMode::Analytic)?;
        worst = worst.max((rp - 2.0 * curve.x(t)).abs());
    }
    s.evidence("max_abs_residual_p_minus_2x", worst);
    s.check("p-equation residual is 2 x(t) everywhere (it would need x = -x)", worst <= 1e-12);
    Ok(())
}

fn error_3(g: f64, s: &mut Section) -> Result<()> {
    let (liu_double, std) = (unit(2.0 * g)?, unit(g)?);
    let states: Vec<PhaseState> = linspace(-3.0, 3.0, 10)
        .into_iter()
        .flat_map(|x| linspace(-2.0, 2.0, 10).into_iter().map(move |p| PhaseState { t: 0.0, x, p }))
        .collect();
    let mut identical = 0usize;
    let mut differs_same_gamma = false;
    for st in &states {
        if eom_rhs(st, &liu_double, Convention::LiuEq1)? == eom_rhs(st, &std, Convention::ZimmerCorrected)? {
            identical += 1;
        }
        differs_same_gamma |= eom_rhs(st, &std, Convention::LiuEq1)? != eom_rhs(st, &std, Convention::ZimmerCorrected)?;
    }
    s.evidence("identical_states", identical as f64);
    s.check("Liu(2g) equals standard(g) on all 100 states", identical == states.len());
    s.check("Liu(g) differs from standard(g)", differs_same_gamma);

    let init = PhaseState::new(0.0, 1.0, 0.0)?;
    let a = integrate_rk4(&liu_double, Convention::LiuEq1, init, 10.0, 0.01)?;
    let b = integrate_rk4(&std, Convention::ZimmerCorrected, init, 10.0, 0.01)?;
    s.check("RK4 trajectories coincide under the factor-of-two map", a.samples() == b.samples());
    Ok(())
}

fn error_4(g: f64, s: &mut Section) -> Result<()> {
    let w = pseudo_frequency(&unit(g)?)?;
    s.evidence("omega", w);
    s.check("pseudo-frequency differs from omega0 = 1", (w - 1.0).abs() > 0.0);
    s.check("omega^2 + gamma^2 = omega0^2", (w * w + g * g - 1.0).abs() <= 4.0 * f64::EPSILON);
    let mut min_gap = f64::INFINITY;
    for t in [0.0, 1.0, 2.5, 7.0] {
        let c = verify_z_form(1.0, 0.0, g, t)?;
        min_gap = min_gap.min(c.simple_exponential_gap);
        s.check(format!("z matches the beta-shifted form at t={t}"), c.matches_corrected_form);
        s.check(
            format!("z differs from A e^(-gamma t - i(omega t + phi)) at t={t}"),
            c.differs_from_simple_exponential,
        );
        if t == 0.0 {
            s.evidence("beta", c.beta);
            s.evidence("simple_exponential_gap_t0", c.simple_exponential_gap);
        }
    }
    s.evidence("min_simple_exponential_gap", min_gap);
    let corrected = solve_underdamped(unit(g)?, 1.0, -g)?;
    let r = residual_check(&corrected, Convention::ZimmerCorrected, &linspace(0.0, 20.0, 1000), 1e-10)?;
    s.evidence("corrected_max_residual", r.max_abs_residual_x.max(r.max_abs_residual_p));
    s.check("A e^(-gamma t) cos(omega t + phi) satisfies the corrected equation", r.verdict == Verdict::Satisfies);
    Ok(())
}

fn error_5(g: f64, s: &mut Section) -> Result<()> {
    let tol = dampcheck::oscillator::DEFAULT_REGIME_TOL;
    s.check("chosen gamma is underdamped", classify_regime(&unit(g)?, tol)? == Regime::Underdamped);
    s.check("gamma = 1 is critical", classify_regime(&unit(1.0)?, tol)? == Regime::Critical);
    for gamma in [10.0, 100.0] {
        s.check(format!("gamma = {gamma} is overdamped"), classify_regime(&unit(gamma)?, tol)? == Regime::Overdamped);
    }
    for gamma in INVALID_GAMMAS {
        let rejected = matches!(solve_underdamped(unit(gamma)?, 1.0, 0.0), Err(Error::Regime { .. }));
        s.check(format!("underdamped solution rejected at gamma = {gamma}"), rejected);
    }
    let grid = linspace(0.0, 20.0, 1000);
    let families = [
        ("critical", solve_critical(unit(1.0)?, 1.0, 0.5)?),
        ("overdamped_10", solve_overdamped(unit(10.0)?, 1.0, 0.5)?),
        ("overdamped_100", solve_overdamped(unit(100.0)?, 1.0, 0.5)?),
    ];
    for (name, curve) in families {
        let r = residual_check(&curve, Convention::ZimmerCorrected, &grid, 1e-10)?;
        s.evidence(&format!("{name}_max_residual"), r.max_abs_residual_x.max(r.max_abs_residual_p));
        s.check(format!("{name} family satisfies the corrected equation"), r.verdict == Verdict::Satisfies);
    }
    let params = unit(g)?;
    let w = pseudo_frequency(&params)?;
    let traj =
        integrate_rk4(&params, Convention::ZimmerCorrected, PhaseState::new(0.0, 1.0, 0.0)?, 10.0 * TAU / w, 1e-3)?;
    let dev = r_zimmer_series(&traj)?.max_deviation_from_initial();
    s.evidence("r_max_deviation_rk4", dev);
    s.check("underdamped constant r is conserved along RK4 (<= 1e-6)", dev <= 1e-6);
    Ok(())
}

fn error_6(g: f64, s: &mut Section) -> Result<()> {
    let phi = 0.0;
    let traj = liu_claimed_solution(g, phi)?.sample_uniform(0.0, 10.0, 0.01)?;
    let unwrapped = h1_unwrapped(&traj, g)?;
    let naive = h1_naive_series(&traj, g)?;
    s.evidence("h1_unwrapped_value", unwrapped.initial());
    s.evidence("h1_unwrapped_max_deviation", unwrapped.max_deviation_from_initial());
    s.evidence("h1_naive_range", naive.range());
    s.check(
        "[theta] + 2 pi n + ln r / gamma stays at phi",
        unwrapped.max_deviation_from_initial() <= 1e-9 && (unwrapped.initial() - phi).abs() <= 1e-9,
    );
    s.check("principal-angle H1 is not constant (range >= 2 pi - 0.01)", naive.range() >= TAU - 0.01);

    let start = traj.first();
    s.evidence("theta_at_t0", principal_angle(start.x, start.p)?);

    let (a, phase) = (2.0, 0.5);
    let expected = generalized_h1(a, phase, g)?;
    let gen_traj = liu_claimed_with_amplitude(g, a, phase)?.sample_uniform(0.0, 10.0, 0.01)?;
    let worst = h1_unwrapped(&gen_traj, g)?.values.iter().map(|v| (v - expected).abs()).fold(0.0, f64::max);
    s.evidence("generalized_h1_expected", expected);
    s.evidence("generalized_h1_max_error", worst);
    s.check("unwrapped H1 on the A = 2 curve equals phi + ln(A) / gamma", worst <= 1e-9);

    let jump = branch_jump_h1(g, 1.0)?;
    s.evidence("branch_jump_point", jump);
    s.check("H1(pi-) - H1(-pi+) = 2 pi at radius 1", (jump - TAU).abs() <= 1e-7);

    let grid = evaluate_field(PointInvariant::H1Naive, &unit(g)?, &cut_window()?)?;
    let est = detect_branch_jump(&grid)?.jump_estimate;
    s.evidence("branch_jump_field", est);
    s.check("field detector measures 2 pi along the negative x-axis", (est - TAU).abs() <= 1e-3);
    Ok(())
}

fn cut_window() -> Result<GridSpec> {
    GridSpec::new(-2.0, -0.1, -0.5, 0.5, 40, 40)
}

fn cos_sign_changes(gamma: f64) -> Result<usize> {
    let n = 200_000;
    let mut count = 0;
    let mut prev = None;
    for k in 0..n {
        let x = 0.01 * 100f64.powf(k as f64 / (n - 1) as f64);
        let v = h1_naive(x, 0.0, gamma)?.cos();
        if let Some(q) = prev {
            if (q < 0.0) != (v < 0.0) {
                count += 1;
            }
        }
        prev = Some(v);
    }
    Ok(count)
}

fn error_7(g: f64, s: &mut Section) -> Result<()> {
    // Issue 1: gamma = 0
    s.check("H1 at gamma = 0 is a singularity error", h1_naive(1.0, 0.0, 0.0) == Err(Error::Singularity));
    let field = evaluate_field(PointInvariant::CosH1, &unit(0.0)?, &GridSpec::square(2.0, 11)?);
    s.check("cos H1 field at gamma = 0 is refused", matches!(field, Err(Error::Singularity)));
    let (x, p) = (0.3, 0.4);
    let e = energy_undamped(x, p, 1.0);
    let gh0 = gamma_h1(x, p, 0.0)?;
    s.evidence("gamma_h1_at_gamma0", gh0);
    s.check("gamma H1 at gamma = 0 equals ln sqrt(2E)", (gh0 - (2.0 * e).sqrt().ln()).abs() <= 1e-15);
    let gap = (r_zimmer(x, p, &unit(1e-6)?, AuxPhase::Sheet(0))? - (2.0 * e).ln()).abs();
    s.evidence("r_minus_log_2e_at_gamma_1e-6", gap);
    s.check("r approaches log(2E) as gamma -> 0", gap <= 1e-4);

    // Issue 2: cosine hides the cut, gamma-scaling reveals it
    let params = unit(g)?;
    let cos_point = branch_jump(PointInvariant::CosH1, &params, 1.0)?;
    let gh_point = branch_jump(PointInvariant::GammaH1, &params, 1.0)?;
    s.evidence("cos_h1_jump_point", cos_point);
    s.evidence("gamma_h1_jump_point", gh_point);
    s.check("cos H1 shows no jump at the cut", cos_point.abs() <= 1e-7);
    s.check("gamma H1 jumps by 2 pi gamma", (gh_point - TAU * g).abs() <= 1e-7);
    let window = cut_window()?;
    let cos_field = detect_branch_jump(&evaluate_field(PointInvariant::CosH1, &params, &window)?)?.jump_estimate;
    let gh_field = detect_branch_jump(&evaluate_field(PointInvariant::GammaH1, &params, &window)?)?.jump_estimate;
    s.evidence("cos_h1_jump_field", cos_field);
    s.evidence("gamma_h1_jump_field", gh_field);
    s.check("field detector sees no jump in cos H1", cos_field.abs() <= 1e-3);
    s.check("field detector sees 2 pi gamma in gamma H1", (gh_field - TAU * g).abs() <= 1e-3);
    let (tight, loose) = (cos_sign_changes(g / 10.0)?, cos_sign_changes(g)?);
    s.evidence("cos_h1_zero_crossings_gamma", loose as f64);
    s.evidence("cos_h1_zero_crossings_gamma_over_10", tight as f64);
    s.check("cos H1 spirals tighten as gamma decreases", tight > loose);

    // Issue 3: regime validity
    for gamma in INVALID_GAMMAS {
        let rejected = matches!(r_zimmer(1.0, 0.0, &unit(gamma)?, AuxPhase::Sheet(0)), Err(Error::Regime { .. }));
        s.check(format!("underdamped invariant refused at gamma = {gamma}"), rejected);
    }
    Ok(())
}

type SectionFn = fn(f64, &mut Section) -> Result<()>;

const SECTIONS: [(u8, &str, &str, SectionFn); 7] = [
    (1, "x-equation", "the claimed x(t), p(t) do not satisfy dx/dt = p", error_1),
    (2, "p-equation", "substituting the claimed p(t) would require x = -x", error_2),
    (3, "damping factor", "gamma is off by a factor of 2 relative to the standard equation", error_3),
    (
        4,
        "pseudo-frequency",
        "the damped solution needs omega = sqrt(omega0^2 - gamma^2), so z is not a simple exponential",
        error_4,
    ),
    (5, "regimes", "the cosine-based result only covers the underdamped regime", error_5),
    (
        6,
        "Riemann sheets",
        "-i log(e^(i theta)) = [theta] + 2 pi n; without n, H1 is not constant and the 2 pi cut is lost",
        error_6,
    ),
    (
        7,
        "plots of cos H1",
        "H1 is singular at gamma = 0, cos H1 hides the cut, and gamma >= 1 plots are invalid",
        error_7,
    ),
];

fn write_figure_pair(g: f64, dir: &std::path::Path) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let params = unit(g)?;
    let spec = GridSpec::square(2.0, 401)?;
    for (inv, stem) in [(PointInvariant::H1Naive, "h1"), (PointInvariant::CosH1, "cos_h1")] {
        let grid = evaluate_field(inv, &params, &spec)?;
        export_grid(&grid, ExportFormat::Csv, dir.join(format!("{stem}.csv")))?;
        export_grid(&grid, ExportFormat::SvgHeatmap, dir.join(format!("{stem}.svg")))?;
    }
    Ok(())
}

pub fn run(args: &DemoArgs) -> Result<bool> {
    let g = args.gamma;
    if !(g > 0.0 && g < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "demo-errors needs 0 < gamma < 1 (underdamped with omega0 = 1), got {g}"
        )));
    }
    let sections: Vec<Section> = SECTIONS
        .iter()
        .map(|&(number, title, claim, body)| {
            let mut section = Section::new(number, title, claim);
            if let Err(e) = body(g, &mut section) {
                section.check(format!("unexpected error: {e}"), false);
            }
            section
        })
        .collect();
    let all_passed = sections.iter().all(|s| s.passed);
    if let Some(dir) = &args.out_dir {
        write_figure_pair(g, dir)?;
    }

    let report = Report { schema: SCHEMA_VERSION, gamma: g, all_passed, sections };
    if args.json {
        let text = serde_json::to_string_pretty(&report).map_err(|e| Error::Io(e.to_string()))?;
        println!("{text}");
    } else {
        print_text(&report);
        if let Some(dir) = &args.out_dir {
            println!("figure pair written to {}", dir.display());
        }
    }
    Ok(all_passed)
}

fn print_text(report: &Report) {
    println!("Damped oscillator error reproduction (omega0 = 1, gamma = {})", report.gamma);
    for s in &report.sections {
        println!();
        println!("Error {}: {} [{}]", s.number, s.title, if s.passed { "PASS" } else { "FAIL" });
        println!("  claim: {}", s.claim);
        for c in &s.checks {
            println!("  {} {}", if c.passed { "ok  " } else { "FAIL" }, c.name);
        }
        for (k, v) in &s.evidence {
            println!("  {k} = {v:.6e}");
        }
    }
    println!();
    let passed = report.sections.iter().filter(|s| s.passed).count();
    println!("{passed}/{} errors reproduced", report.sections.len());
}
