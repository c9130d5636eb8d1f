//! Command-line front end: argument parsing, dispatch and output formatting.

use std::fmt::Write as _;
use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Map, Value};

use qbrach_core::costate::{integrate_flow, random_costate, FlowSummary, Variant};
use qbrach_core::error::Error;
use qbrach_core::propagate::{convergence_report, ConvergenceReport, Scheme, DEFAULT_STEPS};
use qbrach_core::quantizer::{physical_params, search, Triple, DEFAULT_N_MAX};
use qbrach_core::synthesis::{synthesize, target_hamiltonian, target_propagator, SynthesisResult};
use qbrach_core::SynthesisTarget;

/// Fidelity a synthesized gate must exceed.
pub const SYNTH_FIDELITY_TOL: f64 = 1e-8;
/// Midpoint error bound at the default step count.
pub const VERIFY_TOL: f64 = 1e-5;
/// Error bound for coarse runs.
pub const COARSE_VERIFY_TOL: f64 = 1e-2;
/// Drift bound for conserved quantities along the costate flow.
pub const FLOW_DRIFT_TOL: f64 = 1e-8;
/// Bound on the field-rate and closure identities.
pub const FLOW_IDENTITY_TOL: f64 = 1e-11;
/// Flow runs cover `FLOW_PERIODS` gate times with `FLOW_STEPS_PER_T` steps each.
pub const FLOW_PERIODS: f64 = 5.0;
pub const FLOW_STEPS_PER_T: usize = 2000;

const CONVENTION: &str = "# convention: m counts field turns (Omega T = 2 pi m), labelled so that |Bz| T = pi |m - sqrt(3/8)| on the minimal triple";

#[derive(Debug, Parser)]
#[command(
    name = "qbrach",
    version,
    about = "Time-optimal gate synthesis for a three-qubit Ising chain"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TargetArg {
    U13s,
    Cnot13,
    Cnotpm13,
}

impl From<TargetArg> for SynthesisTarget {
    fn from(t: TargetArg) -> Self {
        match t {
            TargetArg::U13s => SynthesisTarget::U13S,
            TargetArg::Cnot13 => SynthesisTarget::Cnot13,
            TargetArg::Cnotpm13 => SynthesisTarget::CnotPm13,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SchemeArg {
    Leftpoint,
    Midpoint,
}

impl From<SchemeArg> for Scheme {
    fn from(s: SchemeArg) -> Self {
        match s {
            SchemeArg::Leftpoint => Scheme::LeftPoint,
            SchemeArg::Midpoint => Scheme::Midpoint,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Ising,
    Modified,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Ising => Variant::Ising,
            VariantArg::Modified => Variant::Modified,
        }
    }
}

#[derive(Debug, clap::Args)]
pub struct Common {
    /// Ising coupling J (> 0).
    #[arg(long = "J", visible_alias = "j", default_value_t = 1.0)]
    pub j: f64,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Human)]
    pub format: Format,
}

#[derive(Debug, clap::Args)]
pub struct PulseArgs {
    #[arg(long, value_enum, default_value_t = TargetArg::U13s)]
    pub target: TargetArg,
    /// Field turn count; defaults to the one minimizing |Bz|.
    #[arg(long, allow_negative_numbers = true)]
    pub m: Option<i64>,
    /// Search bound on each quantization integer.
    #[arg(long, default_value_t = DEFAULT_N_MAX)]
    pub n_max: u32,
    /// Initial field phase.
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
    pub theta0: f64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Synthesize the minimal-time pulse for a target gate.
    Synthesize {
        #[command(flatten)]
        pulse: PulseArgs,
        #[command(flatten)]
        common: Common,
    },
    /// List feasible quantization triples.
    Search {
        #[arg(long, value_enum, default_value_t = TargetArg::U13s)]
        target: TargetArg,
        #[arg(long, default_value_t = DEFAULT_N_MAX)]
        n_max: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Compare numerical time-ordered propagation with the closed form.
    Verify {
        #[command(flatten)]
        pulse: PulseArgs,
        #[arg(long, default_value_t = DEFAULT_STEPS)]
        steps: usize,
        #[arg(long, value_enum, default_value_t = SchemeArg::Midpoint)]
        scheme: SchemeArg,
        #[command(flatten)]
        common: Common,
    },
    /// Tabulate field and energy ratios of the optimal pulse over m.
    Sweep {
        #[arg(long, allow_negative_numbers = true, default_value_t = -3)]
        m_min: i64,
        #[arg(long, allow_negative_numbers = true, default_value_t = 3)]
        m_max: i64,
        #[command(flatten)]
        common: Common,
    },
    /// Integrate the costate flow from a seeded random costate.
    Flow {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = VariantArg::Ising)]
        variant: VariantArg,
        #[command(flatten)]
        common: Common,
    },
}

/// Process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    Ok = 0,
    Validation = 1,
    Numerical = 2,
}

/// Command output plus exit status.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub exit: Exit,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Self {
            stdout,
            stderr: String::new(),
            exit: Exit::Ok,
        }
    }

    fn validation(msg: impl Into<String>) -> Self {
        Self {
            stdout: String::new(),
            stderr: msg.into(),
            exit: Exit::Validation,
        }
    }

    fn from_error(e: Error) -> Self {
        let exit = match e {
            Error::InvalidParameter { .. }
            | Error::InfeasibleTriple { .. }
            | Error::NoFeasibleTriple { .. } => Exit::Validation,
            _ => Exit::Numerical,
        };
        Self {
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
            exit,
        }
    }
}

/// Round to 12 significant digits.
pub fn sig12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

fn num(x: f64) -> Value {
    json!(sig12(x))
}

fn to_json_line(v: &Value) -> String {
    let mut s = serde_json::to_string(v).expect("JSON values serialize");
    s.push('\n');
    s
}

fn csv_table<R: Serialize>(rows: &[R]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).expect("rows serialize");
    }
    String::from_utf8(w.into_inner().expect("in-memory writer")).expect("CSV is UTF-8")
}

fn validate_j(j: f64) -> Result<(), Outcome> {
    if j.is_finite() && j > 0.0 {
        Ok(())
    } else {
        Err(Outcome::validation(format!(
            "error: --J must be a positive number, got {j}\n"
        )))
    }
}

fn validate_n_max(n: u32) -> Result<(), Outcome> {
    if n >= 1 {
        Ok(())
    } else {
        Err(Outcome::validation("error: --n-max must be at least 1\n"))
    }
}

/// The JSON object for a synthesis result, with the fixed key set.
pub fn synthesis_json(r: &SynthesisResult) -> Value {
    let mut m = Map::new();
    m.insert("target".into(), json!(r.target.name()));
    m.insert("n_plus".into(), json!(r.triple.n_plus));
    m.insert("n_minus".into(), json!(r.triple.n_minus));
    m.insert("n_zero".into(), json!(r.triple.n_zero));
    m.insert("m".into(), json!(r.m));
    m.insert("J".into(), num(r.params.j));
    m.insert("T".into(), num(r.duration));
    m.insert("B0".into(), num(r.params.b0));
    m.insert("Bz".into(), num(r.params.bz));
    m.insert("Omega".into(), num(r.params.omega));
    m.insert("omega_energy".into(), num(r.energy));
    m.insert("fidelity".into(), num(r.fidelity));
    m.insert(
        "global_phase".into(),
        r.global_phase.map_or(Value::Null, num),
    );
    m.insert("f_minus".into(), json!(r.f_minus));
    Value::Object(m)
}

#[derive(Serialize)]
struct SynthesisRow {
    target: &'static str,
    n_plus: u32,
    n_minus: u32,
    n_zero: u32,
    m: i64,
    #[serde(rename = "J")]
    j: f64,
    #[serde(rename = "T")]
    t: f64,
    #[serde(rename = "B0")]
    b0: f64,
    #[serde(rename = "Bz")]
    bz: f64,
    #[serde(rename = "Omega")]
    omega: f64,
    omega_energy: f64,
    fidelity: f64,
    global_phase: Option<f64>,
    f_minus: i64,
    #[serde(rename = "JT")]
    jt: f64,
    #[serde(rename = "B0_over_J")]
    b0_over_j: f64,
    #[serde(rename = "abs_Bz_over_J")]
    bz_over_j: f64,
    #[serde(rename = "abs_Omega_over_J")]
    omega_over_j: f64,
    #[serde(rename = "J_over_omega")]
    j_over_omega: f64,
}

impl SynthesisRow {
    fn new(r: &SynthesisResult) -> Self {
        let j = r.params.j;
        Self {
            target: r.target.name(),
            n_plus: r.triple.n_plus,
            n_minus: r.triple.n_minus,
            n_zero: r.triple.n_zero,
            m: r.m,
            j: sig12(j),
            t: sig12(r.duration),
            b0: sig12(r.params.b0),
            bz: sig12(r.params.bz),
            omega: sig12(r.params.omega),
            omega_energy: sig12(r.energy),
            fidelity: sig12(r.fidelity),
            global_phase: r.global_phase.map(sig12),
            f_minus: r.f_minus,
            jt: sig12(j * r.duration),
            b0_over_j: sig12(r.params.b0 / j),
            bz_over_j: sig12(r.params.bz.abs() / j),
            omega_over_j: sig12(r.params.omega.abs() / j),
            j_over_omega: sig12(j / r.energy),
        }
    }
}

fn cmd_synthesize(pulse: &PulseArgs, common: &Common) -> Result<Outcome, Outcome> {
    validate_j(common.j)?;
    validate_n_max(pulse.n_max)?;
    let g = pulse.target.into();
    let r =
        synthesize(g, common.j, pulse.m, pulse.theta0, pulse.n_max).map_err(Outcome::from_error)?;
    let stdout = match common.format {
        Format::Json => to_json_line(&synthesis_json(&r)),
        Format::Csv => csv_table(&[SynthesisRow::new(&r)]),
        Format::Human => {
            let row = SynthesisRow::new(&r);
            let mut s = String::new();
            writeln!(s, "{CONVENTION}").unwrap();
            writeln!(s, "target        {}", row.target).unwrap();
            writeln!(
                s,
                "triple        ({}, {}, {})  f_minus = {}",
                row.n_plus, row.n_minus, row.n_zero, row.f_minus
            )
            .unwrap();
            writeln!(s, "m             {}", row.m).unwrap();
            writeln!(s, "J             {}", row.j).unwrap();
            writeln!(s, "T             {}   (J T = {})", row.t, row.jt).unwrap();
            writeln!(s, "B0            {}   (B0/J = {})", row.b0, row.b0_over_j).unwrap();
            writeln!(s, "Bz            {}   (|Bz|/J = {})", row.bz, row.bz_over_j).unwrap();
            writeln!(
                s,
                "Omega         {}   (|Omega|/J = {})",
                row.omega, row.omega_over_j
            )
            .unwrap();
            writeln!(
                s,
                "omega_energy  {}   (J/omega = {})",
                row.omega_energy, row.j_over_omega
            )
            .unwrap();
            writeln!(s, "fidelity      {}", row.fidelity).unwrap();
            match row.global_phase {
                Some(chi) => writeln!(s, "global_phase  {chi}").unwrap(),
                None => writeln!(s, "global_phase  undefined").unwrap(),
            }
            s
        }
    };
    if r.fidelity > 1.0 - SYNTH_FIDELITY_TOL {
        Ok(Outcome::ok(stdout))
    } else {
        Ok(Outcome {
            stdout,
            stderr: format!(
                "error: fidelity {} below 1 - {SYNTH_FIDELITY_TOL:e}\n",
                r.fidelity
            ),
            exit: Exit::Numerical,
        })
    }
}

#[derive(Serialize)]
struct SearchRow {
    n_plus: u32,
    n_minus: u32,
    n_zero: u32,
    m: i64,
    f_minus: i64,
    f_plus: i64,
    f_zero: i64,
    #[serde(rename = "JT")]
    jt: f64,
    #[serde(rename = "B0T")]
    b0t: f64,
}

fn search_row(t: &Triple, g: SynthesisTarget) -> Result<SearchRow, Error> {
    let s = t.shape();
    let sol = physical_params(t, g, 1.0)?;
    Ok(SearchRow {
        n_plus: t.n_plus,
        n_minus: t.n_minus,
        n_zero: t.n_zero,
        m: t.reported_m(),
        f_minus: s.f_minus,
        f_plus: s.f_plus,
        f_zero: s.f_zero,
        jt: sig12(sol.duration),
        b0t: sig12(sol.params.b0 * sol.duration),
    })
}

fn cmd_search(target: TargetArg, n_max: u32, common: &Common) -> Result<Outcome, Outcome> {
    validate_n_max(n_max)?;
    let g: SynthesisTarget = target.into();
    let rows = search(g, n_max)
        .iter()
        .map(|t| search_row(t, g))
        .collect::<Result<Vec<_>, _>>()
        .map_err(Outcome::from_error)?;
    let f1 = rows.iter().filter(|r| r.f_minus == 1).count();
    let stdout = match common.format {
        Format::Json => to_json_line(&json!({
            "target": g.name(),
            "n_max": n_max,
            "count": rows.len(),
            "f_minus_1_count": f1,
            "rows": rows,
        })),
        Format::Csv => csv_table(&rows),
        Format::Human => {
            let mut s = String::new();
            writeln!(s, "{CONVENTION}").unwrap();
            writeln!(
                s,
                "# target {}  n_max {}  feasible {}",
                g.name(),
                n_max,
                rows.len()
            )
            .unwrap();
            writeln!(
                s,
                "{:>4} {:>4} {:>4} {:>4} {:>8} {:>16} {:>16}",
                "n+", "n-", "n0", "m", "f_minus", "JT", "B0T"
            )
            .unwrap();
            for r in &rows {
                writeln!(
                    s,
                    "{:>4} {:>4} {:>4} {:>4} {:>8} {:>16.12} {:>16.12}",
                    r.n_plus, r.n_minus, r.n_zero, r.m, r.f_minus, r.jt, r.b0t
                )
                .unwrap();
            }
            writeln!(s, "f_minus = 1 count: {f1}").unwrap();
            s
        }
    };
    Ok(Outcome::ok(stdout))
}

/// Step counts used by `verify` for a final count `n`.
pub fn verify_steps(n: usize) -> Vec<usize> {
    vec![n / 8, n / 4, n / 2, n]
}

fn cmd_verify(
    pulse: &PulseArgs,
    steps: usize,
    scheme: SchemeArg,
    common: &Common,
) -> Result<Outcome, Outcome> {
    validate_j(common.j)?;
    validate_n_max(pulse.n_max)?;
    if steps < 8 {
        return Err(Outcome::validation("error: --steps must be at least 8\n"));
    }
    let g: SynthesisTarget = pulse.target.into();
    let scheme: Scheme = scheme.into();
    let r =
        synthesize(g, common.j, pulse.m, pulse.theta0, pulse.n_max).map_err(Outcome::from_error)?;
    let p = r.params;
    let oracle = target_propagator(g, r.duration, &p);
    let report: ConvergenceReport = convergence_report(
        |t| target_hamiltonian(g, t, &p),
        r.duration,
        &oracle,
        &verify_steps(steps),
        scheme,
    )
    .map_err(Outcome::from_error)?;

    let strict = steps >= DEFAULT_STEPS && scheme == Scheme::Midpoint;
    let threshold = if strict {
        VERIFY_TOL
    } else {
        COARSE_VERIFY_TOL
    };
    let final_error = report.final_error();
    let passed = final_error < threshold;
    let warning = (!strict).then(|| {
        format!("warning: coarse run ({} steps, {}); checked against the {threshold:e} threshold only\n", steps, scheme)
    });

    let stdout = match common.format {
        Format::Json => to_json_line(&json!({
            "target": g.name(),
            "m": r.m,
            "J": num(common.j),
            "T": num(r.duration),
            "scheme": scheme.name(),
            "rows": report.rows.iter().map(|row| json!({"n_steps": row.n_steps, "error": num(row.error)})).collect::<Vec<_>>(),
            "fitted_order": report.fitted_order.map_or(Value::Null, num),
            "final_error": num(final_error),
            "threshold": num(threshold),
            "passed": passed,
        })),
        Format::Csv => {
            #[derive(Serialize)]
            struct Row {
                n_steps: usize,
                dt: f64,
                error: f64,
            }
            let rows: Vec<Row> = report
                .rows
                .iter()
                .map(|row| Row {
                    n_steps: row.n_steps,
                    dt: sig12(r.duration / row.n_steps as f64),
                    error: sig12(row.error),
                })
                .collect();
            csv_table(&rows)
        }
        Format::Human => {
            let mut s = String::new();
            writeln!(s, "{CONVENTION}").unwrap();
            writeln!(
                s,
                "# target {}  m {}  T {}  scheme {}",
                g.name(),
                r.m,
                sig12(r.duration),
                scheme
            )
            .unwrap();
            writeln!(s, "{:>8} {:>20}", "n_steps", "error").unwrap();
            for row in &report.rows {
                writeln!(s, "{:>8} {:>20.6e}", row.n_steps, row.error).unwrap();
            }
            match report.fitted_order {
                Some(o) => writeln!(s, "fitted order {:.4}", o).unwrap(),
                None => writeln!(s, "fitted order unresolved (errors at round-off)").unwrap(),
            }
            writeln!(
                s,
                "final error {:.6e} (threshold {threshold:e}) {}",
                final_error,
                if passed { "ok" } else { "FAILED" }
            )
            .unwrap();
            s
        }
    };
    let mut stderr = warning.unwrap_or_default();
    let exit = if passed {
        Exit::Ok
    } else {
        writeln!(
            stderr,
            "error: final error {final_error:e} >= {threshold:e}"
        )
        .unwrap();
        Exit::Numerical
    };
    Ok(Outcome {
        stdout,
        stderr,
        exit,
    })
}

/// One row of the field-ratio sweep (all ratios are J-independent).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub m: i64,
    #[serde(rename = "J_over_omega")]
    pub j_over_omega: f64,
    #[serde(rename = "B0_over_J")]
    pub b0_over_j: f64,
    #[serde(rename = "Bz_over_J")]
    pub bz_over_j: f64,
    #[serde(rename = "Omega_over_J")]
    pub omega_over_j: f64,
    #[serde(rename = "B_over_J")]
    pub b_over_j: f64,
}

/// Ratios of the minimal-time U13S pulse at turn count `m` (reporting convention).
pub fn sweep_row(m: i64, j: f64) -> Result<SweepRow, Error> {
    let g = SynthesisTarget::U13S;
    let base = qbrach_core::quantizer::minimal_triple(g, DEFAULT_N_MAX)?;
    let sol = physical_params(&base.with_reported_m(m), g, j)?;
    let p = sol.params;
    Ok(SweepRow {
        m,
        j_over_omega: sig12(j / sol.energy),
        b0_over_j: sig12(p.b0 / j),
        bz_over_j: sig12(p.bz.abs() / j),
        omega_over_j: sig12(p.omega.abs() / j),
        b_over_j: sig12(p.field_magnitude() / j),
    })
}

fn cmd_sweep(m_min: i64, m_max: i64, common: &Common) -> Result<Outcome, Outcome> {
    validate_j(common.j)?;
    if m_min > m_max {
        return Err(Outcome::validation(format!(
            "error: empty m range {m_min}..={m_max}\n"
        )));
    }
    let rows = (m_min..=m_max)
        .map(|m| sweep_row(m, common.j))
        .collect::<Result<Vec<_>, _>>()
        .map_err(Outcome::from_error)?;
    let stdout = match common.format {
        Format::Json => to_json_line(&json!({"J": num(common.j), "rows": rows})),
        Format::Csv => csv_table(&rows),
        Format::Human => {
            let mut s = String::new();
            writeln!(s, "{CONVENTION}").unwrap();
            writeln!(
                s,
                "{:>4} {:>14} {:>14} {:>14} {:>14} {:>14}",
                "m", "J/omega", "|B0|/J", "|Bz|/J", "|Omega|/J", "|B|/J"
            )
            .unwrap();
            for r in &rows {
                writeln!(
                    s,
                    "{:>4} {:>14.10} {:>14.10} {:>14.10} {:>14.10} {:>14.10}",
                    r.m, r.j_over_omega, r.b0_over_j, r.bz_over_j, r.omega_over_j, r.b_over_j
                )
                .unwrap();
            }
            s
        }
    };
    Ok(Outcome::ok(stdout))
}

/// Drift check for one flow run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FlowCheck {
    pub seed: u64,
    pub variant: Variant,
    #[serde(rename = "T")]
    pub gate_time: f64,
    pub duration: f64,
    pub n_steps: usize,
    pub drift: FlowSummary,
    pub passed: bool,
}

/// Integrate the flow of the seeded costate over five gate times.
pub fn run_flow(seed: u64, j: f64, variant: Variant) -> Result<FlowCheck, Error> {
    let gate_time = 1.5f64.sqrt() / j;
    let (c, _) = random_costate(seed, j, variant)?;
    let n_steps = (FLOW_PERIODS as usize) * FLOW_STEPS_PER_T;
    let duration = FLOW_PERIODS * gate_time;
    let report = integrate_flow(&c, duration, n_steps)?;
    let d = report.drift;
    let passed = d.max_drift() < FLOW_DRIFT_TOL
        && d.field_rate_residual < FLOW_IDENTITY_TOL
        && d.closure_residual < FLOW_IDENTITY_TOL;
    Ok(FlowCheck {
        seed,
        variant,
        gate_time,
        duration,
        n_steps,
        drift: d,
        passed,
    })
}

fn cmd_flow(seed: u64, variant: VariantArg, common: &Common) -> Result<Outcome, Outcome> {
    validate_j(common.j)?;
    let check = run_flow(seed, common.j, variant.into()).map_err(Outcome::from_error)?;
    let d = check.drift;
    let drift_fields = [
        ("trace_f2", d.trace_f2),
        ("trace_hf", d.trace_hf),
        ("bz", d.bz),
        ("b0_squared", d.b0_squared),
        ("spectrum", d.spectrum),
        ("combined", d.combined),
        ("field_rate_residual", d.field_rate_residual),
        ("closure_residual", d.closure_residual),
    ];
    let stdout = match common.format {
        Format::Json => {
            let drift: Map<String, Value> = drift_fields
                .iter()
                .map(|(k, v)| (k.to_string(), num(*v)))
                .collect();
            to_json_line(&json!({
                "seed": check.seed,
                "variant": check.variant.name(),
                "J": num(common.j),
                "T": num(check.gate_time),
                "duration": num(check.duration),
                "n_steps": check.n_steps,
                "drift": drift,
                "passed": check.passed,
            }))
        }
        Format::Csv => {
            let header: Vec<&str> = ["seed", "variant", "n_steps"]
                .into_iter()
                .chain(drift_fields.iter().map(|(k, _)| *k))
                .collect();
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(&header).expect("in-memory writer");
            let mut rec = vec![
                check.seed.to_string(),
                check.variant.name().to_string(),
                check.n_steps.to_string(),
            ];
            rec.extend(drift_fields.iter().map(|(_, v)| format!("{:e}", sig12(*v))));
            w.write_record(&rec).expect("in-memory writer");
            String::from_utf8(w.into_inner().expect("in-memory writer")).expect("CSV is UTF-8")
        }
        Format::Human => {
            let mut s = String::new();
            writeln!(
                s,
                "# seed {}  variant {}  duration {} ({} steps)",
                check.seed,
                check.variant,
                sig12(check.duration),
                check.n_steps
            )
            .unwrap();
            for (k, v) in drift_fields {
                writeln!(s, "{k:<20} {v:.3e}").unwrap();
            }
            writeln!(
                s,
                "{}",
                if check.passed {
                    "all drifts within tolerance"
                } else {
                    "DRIFT VIOLATION"
                }
            )
            .unwrap();
            s
        }
    };
    if check.passed {
        Ok(Outcome::ok(stdout))
    } else {
        Ok(Outcome {
            stdout,
            stderr: format!("error: drift above {FLOW_DRIFT_TOL:e}\n"),
            exit: Exit::Numerical,
        })
    }
}

/// Parse and execute a command line (first item is the program name).
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                Outcome::validation(rendered)
            } else {
                Outcome::ok(rendered)
            };
        }
    };
    let res = match &cli.command {
        Command::Synthesize { pulse, common } => cmd_synthesize(pulse, common),
        Command::Search {
            target,
            n_max,
            common,
        } => cmd_search(*target, *n_max, common),
        Command::Verify {
            pulse,
            steps,
            scheme,
            common,
        } => cmd_verify(pulse, *steps, *scheme, common),
        Command::Sweep {
            m_min,
            m_max,
            common,
        } => cmd_sweep(*m_min, *m_max, common),
        Command::Flow {
            seed,
            variant,
            common,
        } => cmd_flow(*seed, *variant, common),
    };
    res.unwrap_or_else(|e| e)
}

/// Run and write to the process streams; returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let out = run(args);
    let _ = std::io::stdout().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    out.exit as i32
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig12_rounds() {
        assert_eq!(sig12(1.224744871391589), 1.22474487139);
        assert_eq!(sig12(0.0), 0.0);
        assert_eq!(sig12(-2.0), -2.0);
    }

    #[test]
    fn bad_flags_are_validation_errors() {
        assert_eq!(
            run(["qbrach", "synthesize", "--target", "toffoli"]).exit,
            Exit::Validation
        );
        assert_eq!(
            run(["qbrach", "synthesize", "--J", "-1"]).exit,
            Exit::Validation
        );
        assert_eq!(
            run(["qbrach", "search", "--n-max", "0"]).exit,
            Exit::Validation
        );
        assert_eq!(
            run(["qbrach", "sweep", "--m-min", "2", "--m-max", "1"]).exit,
            Exit::Validation
        );
        assert_eq!(
            run(["qbrach", "verify", "--steps", "4"]).exit,
            Exit::Validation
        );
    }

    #[test]
    fn negative_m_accepted() {
        let out = run(["qbrach", "synthesize", "--m", "-2", "--format", "json"]);
        assert_eq!(out.exit, Exit::Ok, "{}", out.stderr);
        let v: Value = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(v["m"], -2);
    }

    #[test]
    fn sweep_constants() {
        let r = sweep_row(1, 1.0).unwrap();
        assert!((r.b_over_j - 2.2585336584).abs() < 1e-9);
        assert!((r.j_over_omega - 0.3156636034).abs() < 1e-9);
        let r = sweep_row(2, 3.0).unwrap();
        assert!((r.b_over_j - 4.0965454763).abs() < 1e-9);
    }
}
