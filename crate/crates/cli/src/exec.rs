//! Command execution: argument validation beyond the grammar, delegation
//! to the library, and payload assembly.

use cayley_qmc::algebra::ProductObservable;
use cayley_qmc::dynamics::{
    critical_theta, find_fixed_points, iterate_trajectory, ModelParams, Verdict,
};
use cayley_qmc::qmc::{
    boundary_condition, evaluate_state, oracle_weights, recursion_residual, BcKind,
};
use cayley_qmc::transition::{
    gap_report, leaf_sigma3_expectation, phase_diagram_row, PhaseDiagramRow, PhaseVerdict,
};
use serde_json::{json, Value};

use crate::args::{
    BoundaryArgs, Command, CorrelationArgs, CriticalArgs, EvaluateArgs, FixedPointsArgs, GapArgs,
    KindArg, PhaseDiagramArgs, TempArgs, TrajectoryArgs, VerifyArgs,
};
use crate::output::{num, opt_num, scalar_to_string, Report};
use crate::verify;
use crate::CliError;

/// A rendered-ready command result. `csv` and `text` override the generic
/// renderings where the command has a natural shape of its own.
pub struct CommandOutput {
    pub report: Report,
    pub csv: Option<String>,
    pub text: Option<String>,
    pub exit: i32,
}

impl CommandOutput {
    fn new(report: Report) -> Self {
        CommandOutput {
            report,
            csv: None,
            text: None,
            exit: 0,
        }
    }
}

fn model(k: u32, temp: &TempArgs) -> Result<ModelParams, CliError> {
    let p = match (temp.theta, temp.beta) {
        (Some(theta), None) => ModelParams::from_theta(k, theta)?,
        (None, Some(beta)) => ModelParams::from_beta(k, beta)?,
        // the clap group admits exactly one
        _ => unreachable!("temperature group is required and exclusive"),
    };
    Ok(p)
}

fn params_echo(p: &ModelParams) -> Value {
    json!({
        "k": p.k(),
        "theta": num(p.theta()),
        "beta": num(p.beta()),
    })
}

fn bc_kind(kind: KindArg, alpha: Option<f64>) -> BcKind {
    match kind {
        KindArg::Alpha0 => BcKind::Alpha0,
        KindArg::Alpha => {
            BcKind::AlphaFamily(alpha.expect("clap enforces --alpha for --kind alpha"))
        }
        KindArg::Beta => BcKind::Beta,
        KindArg::Gamma => BcKind::Gamma,
    }
}

fn kind_echo(kind: KindArg, alpha: Option<f64>) -> Value {
    match kind {
        KindArg::Alpha => json!({"kind": "alpha", "alpha": num(alpha.unwrap_or(0.0))}),
        KindArg::Alpha0 => json!({"kind": "alpha0"}),
        KindArg::Beta => json!({"kind": "beta"}),
        KindArg::Gamma => json!({"kind": "gamma"}),
    }
}

pub fn execute(cmd: &Command) -> Result<CommandOutput, CliError> {
    match cmd {
        Command::Critical(args) => run_critical(args),
        Command::FixedPoints(args) => run_fixed_points(args),
        Command::Trajectory(args) => run_trajectory(args),
        Command::Boundary(args) => run_boundary(args),
        Command::Evaluate(args) => run_evaluate(args),
        Command::Correlation(args) => run_correlation(args),
        Command::Gap(args) => run_gap(args),
        Command::PhaseDiagram(args) => run_phase_diagram(args),
        Command::Verify(args) => run_verify(args),
    }
}

fn run_critical(args: &CriticalArgs) -> Result<CommandOutput, CliError> {
    let c = critical_theta(args.k)?;
    Ok(CommandOutput::new(Report {
        command: "critical",
        params: json!({"k": args.k}),
        payload: json!({
            "theta_c": num(c.theta_c),
            "beta_c": num(c.beta_c),
        }),
    }))
}

fn run_fixed_points(args: &FixedPointsArgs) -> Result<CommandOutput, CliError> {
    let p = model(args.k, &args.temp)?;
    let fps = find_fixed_points(&p);
    let points: Vec<Value> = fps
        .points()
        .iter()
        .map(|fp| {
            json!({
                "index": fp.index,
                "t": num(fp.t),
                "s": num(fp.s),
                "a": num(fp.a),
                "b": num(fp.b),
                "planar_x": num(fp.planar.0),
                "planar_y": num(fp.planar.1),
            })
        })
        .collect();
    Ok(CommandOutput::new(Report {
        command: "fixed-points",
        params: params_echo(&p),
        payload: json!({
            "theta_c": num(p.theta_c()),
            "count": fps.count(),
            "points": points,
        }),
    }))
}

fn run_trajectory(args: &TrajectoryArgs) -> Result<CommandOutput, CliError> {
    let p = model(args.k, &args.temp)?;
    let tr = iterate_trajectory(&p, args.x0, args.y0, args.steps)?;
    let verdict = match tr.verdict {
        Verdict::AtFixedPoint => json!({"kind": "at-fixed-point"}),
        Verdict::ConvergesTo((x, y)) => json!({
            "kind": "converges",
            "x": num(x),
            "y": num(y),
        }),
        Verdict::ExitsDomain(step) => json!({"kind": "exits-domain", "step": step}),
        Verdict::StepLimit => json!({"kind": "step-limit"}),
    };
    let points: Vec<Value> = tr
        .points
        .iter()
        .enumerate()
        .map(|(i, (x, y))| json!({"step": i, "x": num(*x), "y": num(*y)}))
        .collect();
    let mut csv = String::from("step,x,y\n");
    for (i, (x, y)) in tr.points.iter().enumerate() {
        csv.push_str(&format!(
            "{i},{},{}\n",
            crate::output::format_sig(*x),
            crate::output::format_sig(*y)
        ));
    }
    let mut out = CommandOutput::new(Report {
        command: "trajectory",
        params: params_echo(&p),
        payload: json!({
            "x0": num(args.x0),
            "y0": num(args.y0),
            "max_steps": args.steps,
            "verdict": verdict,
            "points": points,
        }),
    });
    out.csv = Some(csv);
    Ok(out)
}

fn run_boundary(args: &BoundaryArgs) -> Result<CommandOutput, CliError> {
    let p = model(args.k, &args.temp)?;
    let kind = bc_kind(args.kind, args.alpha);
    let bc = boundary_condition(&p, kind)?;
    let w0 = bc.w0();
    let h0 = bc.h(0);
    let normalization = (w0 * h0).normalized_trace();
    let levels: Vec<Value> = (0..=args.n)
        .map(|n| {
            let h = bc.h(n);
            let (c0, c3) = h.pauli_coeffs();
            json!({
                "n": n,
                "dp": num(h.dp),
                "dm": num(h.dm),
                "h0": num(c0),
                "h3": num(c3),
            })
        })
        .collect();
    let residuals: Vec<Value> = (0..=args.n)
        .map(|n| json!({"n": n, "residual": num(recursion_residual(&bc, &p, n))}))
        .collect();
    Ok(CommandOutput::new(Report {
        command: "boundary",
        params: params_echo(&p),
        payload: json!({
            "family": kind_echo(args.kind, args.alpha),
            "w0": {"dp": num(w0.dp), "dm": num(w0.dm)},
            "normalization": num(normalization),
            "levels": levels,
            "recursion_residuals": residuals,
        }),
    }))
}

fn run_evaluate(args: &EvaluateArgs) -> Result<CommandOutput, CliError> {
    let p = model(args.k, &args.temp)?;
    let observable = ProductObservable::parse(&args.observable, args.n, &p.tree())?;
    let kind = bc_kind(args.kind, args.alpha);
    let bc = boundary_condition(&p, kind)?;
    let st = oracle_weights(&p, &bc, args.n)?;
    let value = evaluate_state(&st, &observable)?;
    Ok(CommandOutput::new(Report {
        command: "evaluate",
        params: params_echo(&p),
        payload: json!({
            "family": kind_echo(args.kind, args.alpha),
            "n": args.n,
            "sites": st.site_count(),
            "observable": args.observable,
            "value": num(value),
        }),
    }))
}

fn run_correlation(args: &CorrelationArgs) -> Result<CommandOutput, CliError> {
    let p = model(args.k, &args.temp)?;
    let kind = bc_kind(args.kind, args.alpha);
    let value = leaf_sigma3_expectation(&p, kind, args.level)?;
    Ok(CommandOutput::new(Report {
        command: "correlation",
        params: params_echo(&p),
        payload: json!({
            "family": kind_echo(args.kind, args.alpha),
            "N": args.level,
            "value": num(value),
        }),
    }))
}

fn run_gap(args: &GapArgs) -> Result<CommandOutput, CliError> {
    let p = model(args.k, &args.temp)?;
    let report = gap_report(&p, args.level)?;
    let verdict = match report.verdict {
        PhaseVerdict::UniqueState => "unique-state",
        PhaseVerdict::PhaseTransition => "phase-transition",
    };
    let payload = match report.gap {
        Some(gap) => json!({
            "N": report.level,
            "verdict": verdict,
            "phi_alpha": num(report.phi_alpha),
            "phi_gamma_N": num(gap.phi_gamma_n),
            "phi_limit": num(gap.phi_limit),
            "eps0": num(gap.eps0),
            "N0": gap.n0,
        }),
        None => json!({
            "N": report.level,
            "verdict": verdict,
            "phi_alpha": num(report.phi_alpha),
        }),
    };
    Ok(CommandOutput::new(Report {
        command: "gap",
        params: params_echo(&p),
        payload,
    }))
}

fn row_value(row: &PhaseDiagramRow) -> Value {
    json!({
        "theta": num(row.theta),
        "beta": num(row.beta),
        "regime": row.regime.label(),
        "t2": opt_num(row.t2),
        "t3": opt_num(row.t3),
        "lambda2": opt_num(row.lambda2),
        "m_infinity": opt_num(row.m_infinity),
        "eps0": opt_num(row.eps0),
    })
}

fn run_phase_diagram(args: &PhaseDiagramArgs) -> Result<CommandOutput, CliError> {
    let thetas: Vec<f64> = match (args.theta, args.beta, args.theta_min) {
        (Some(theta), None, None) => vec![theta],
        (None, Some(beta), None) => {
            if !(beta > 0.0) {
                return Err(CliError::Core(cayley_qmc::Error::Param(format!(
                    "beta must be > 0 (got {beta})"
                ))));
            }
            vec![(2.0 * beta).exp()]
        }
        (None, None, Some(min)) => {
            let max = args.theta_max.expect("clap requires theta-max");
            let step = args.theta_step.expect("clap requires theta-step");
            if !(step > 0.0) || !step.is_finite() {
                return Err(CliError::Usage(format!(
                    "--theta-step must be > 0 (got {step})"
                )));
            }
            if max < min {
                return Err(CliError::Usage(format!(
                    "--theta-max {max} is below --theta-min {min}"
                )));
            }
            let count = ((max - min) / step + 1e-9).floor() as usize;
            if count > 1_000_000 {
                return Err(CliError::Usage(format!(
                    "sweep would produce {count} rows; narrow the range"
                )));
            }
            (0..=count).map(|i| min + i as f64 * step).collect()
        }
        _ => {
            return Err(CliError::Usage(
                "phase-diagram needs --theta, --beta, or --theta-min/--theta-max/--theta-step"
                    .to_string(),
            ))
        }
    };
    let mut rows = Vec::with_capacity(thetas.len());
    for &theta in &thetas {
        let p = ModelParams::from_theta(args.k, theta)?;
        rows.push(phase_diagram_row(&p)?);
    }
    let mut csv = String::from("theta,regime,t2,t3,lambda2,m_infinity,eps0\n");
    for row in &rows {
        let field =
            |x: Option<f64>| -> String { x.map(crate::output::format_sig).unwrap_or_default() };
        csv.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            crate::output::format_sig(row.theta),
            row.regime.label(),
            field(row.t2),
            field(row.t3),
            field(row.lambda2),
            field(row.m_infinity),
            field(row.eps0),
        ));
    }
    let rows_json: Vec<Value> = rows.iter().map(row_value).collect();
    let mut out = CommandOutput::new(Report {
        command: "phase-diagram",
        params: json!({"k": args.k}),
        payload: json!({"rows": rows_json}),
    });
    out.csv = Some(csv);
    Ok(out)
}

fn run_verify(args: &VerifyArgs) -> Result<CommandOutput, CliError> {
    let p = model(args.k, &args.temp)?;
    let checks = verify::run_suite(&p);
    let passed = checks.iter().filter(|c| c.pass).count();
    let failed = checks.len() - passed;
    let mut text = String::new();
    for c in &checks {
        text.push_str(&format!(
            "{} {} ({})\n",
            if c.pass { "PASS" } else { "FAIL" },
            c.name,
            c.detail
        ));
    }
    text.push_str(&format!(
        "{} of {} checks passed (k = {}, theta = {})\n",
        passed,
        checks.len(),
        p.k(),
        crate::output::format_sig(p.theta()),
    ));
    let mut csv = String::from("name,pass,detail\n");
    for c in &checks {
        csv.push_str(&format!(
            "{},{},\"{}\"\n",
            c.name,
            c.pass,
            c.detail.replace('"', "'")
        ));
    }
    let checks_json: Vec<Value> = checks
        .iter()
        .map(|c| json!({"name": c.name, "pass": c.pass, "detail": c.detail}))
        .collect();
    let mut out = CommandOutput::new(Report {
        command: "verify",
        params: params_echo(&p),
        payload: json!({
            "checks": checks_json,
            "passed": passed,
            "failed": failed,
        }),
    });
    out.text = Some(text);
    out.csv = Some(csv);
    out.exit = if failed == 0 { 0 } else { 1 };
    Ok(out)
}

/// Scalar used by tests to pull single payload fields out of reports.
pub fn payload_field(report: &Report, path: &str) -> Option<String> {
    let mut cur = &report.payload;
    for part in path.split('.') {
        cur = cur.get(part)?;
    }
    Some(scalar_to_string(cur))
}
