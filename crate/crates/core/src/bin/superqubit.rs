use std::fs;
use std::io::{self, Read, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde_json::{json, Value};

use superqubit::grassmann::{round_sig, VANISH_TOL};
use superqubit::invariants::{self, InvariantError, SuperReport};
use superqubit::osp::{build_generators, build_generators_with_epsilon, Generator, OspParams};
use superqubit::parser::{parse_state, ParseError};
use superqubit::states::{StateError, SuperState};
use superqubit::sweep::{self, BetaGrid, Family, SweepError};
use superqubit::verify;

/// Superqubit states, osp(1|2) and supersymmetric entanglement invariants.
///
/// Exit codes: 0 ok, 1 verification failure, 2 bad input, 3 unphysical state.
#[derive(Parser)]
#[command(name = "superqubit", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print every covariant and invariant of a 2- or 3-superqubit state.
    Invariants(StateArgs),
    /// Print the SLOCC class and vanishing pattern.
    Classify(StateArgs),
    /// Print the normalized state.
    Normalize(StateArgs),
    /// Tangle of a state family over a grid of β values.
    Sweep(SweepArgs),
    /// Run the algebra identity suite.
    Verify(VerifyArgs),
    /// Apply P00, P01, P11, Q0 or Q1 to one slot of a state.
    Act(ActArgs),
}

#[derive(Args)]
struct StateArgs {
    /// Ket expression, e.g. "(1/sqrt(2))|00> + (1/sqrt(2))|11>".
    state: Option<String>,
    /// Read the expression from FILE, or standard input for "-".
    #[arg(long, value_name = "FILE")]
    input: Option<String>,
    /// Number of superqubits; defaults to the ket length.
    #[arg(long)]
    n: Option<usize>,
    /// Vanishing tolerance on coefficient magnitudes.
    #[arg(long, default_value_t = VANISH_TOL)]
    tol_zero: f64,
    /// JSON output (default).
    #[arg(long, conflicts_with = "csv")]
    json: bool,
    /// quantity,re,im rows of body values.
    #[arg(long)]
    csv: bool,
}

#[derive(Args)]
struct SweepArgs {
    /// bell-soul, super-w or biseparable.
    #[arg(long, default_value = "bell-soul")]
    family: String,
    /// α as a coefficient expression, e.g. 1 or 0.5+2i.
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    alpha: String,
    /// re0:re1:k[,im0:im1:k]
    #[arg(long, default_value = "-2:2:21,-2:2:21", allow_hyphen_values = true)]
    beta_grid: String,
    /// Write rows here instead of standard output.
    #[arg(long, value_name = "FILE")]
    output: Option<String>,
    #[arg(long, conflicts_with = "csv")]
    json: bool,
    /// beta_re,beta_im,tau rows (default).
    #[arg(long)]
    csv: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Also print the 5x5 bracket table.
    #[arg(long)]
    table: bool,
    /// Flip the sign of ε_01 in the generators.
    #[arg(long)]
    inject_fault: bool,
    #[arg(long, default_value_t = 100)]
    cases: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Args)]
struct ActArgs {
    #[command(flatten)]
    state: StateArgs,
    /// Generator label.
    #[arg(long)]
    generator: String,
    /// Slot, counted from 1.
    #[arg(long, default_value_t = 1)]
    slot: usize,
}

struct Failure {
    code: u8,
    kind: &'static str,
    message: String,
}

impl Failure {
    fn input(kind: &'static str, message: impl ToString) -> Self {
        Failure { code: 2, kind, message: message.to_string() }
    }
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        Failure::input(e.kind(), e)
    }
}

impl From<StateError> for Failure {
    fn from(e: StateError) -> Self {
        match e {
            StateError::Unphysical(_) => Failure { code: 3, kind: "Unphysical", message: e.to_string() },
            other => Failure::input("StateError", other),
        }
    }
}

impl From<InvariantError> for Failure {
    fn from(e: InvariantError) -> Self {
        Failure::input("InvariantError", e)
    }
}

impl From<SweepError> for Failure {
    fn from(e: SweepError) -> Self {
        match e {
            SweepError::Parse(p) => p.into(),
            SweepError::State(s) => s.into(),
            other => Failure::input("SweepError", other),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::input("IoError", e)
    }
}

/// println! that exits quietly when stdout is closed early.
macro_rules! out {
    ($($arg:tt)*) => {{
        let mut text = format!($($arg)*);
        text.push('\n');
        write_stdout(&text);
    }};
}

fn write_stdout(text: &str) {
    if let Err(e) = io::stdout().write_all(text.as_bytes()) {
        if e.kind() == io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
    }
}

fn num(x: f64) -> String {
    format!("{}", round_sig(x))
}

fn read_state(args: &StateArgs) -> Result<SuperState, Failure> {
    let text = match (&args.state, &args.input) {
        (Some(s), None) => s.clone(),
        (None, Some(path)) if path == "-" => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s)?;
            s
        }
        (None, Some(path)) => fs::read_to_string(path)?,
        _ => return Err(Failure::input("UsageError", "give a state expression or --input, not both")),
    };
    Ok(parse_state(text.trim(), args.n)?)
}

fn print_json(v: &Value) {
    out!("{}", serde_json::to_string_pretty(v).expect("values serialize"));
}

fn csv_rows(report: &invariants::CovariantReport) -> Vec<(String, Complex64)> {
    let mut rows = Vec::new();
    match &report.superqubit {
        SuperReport::Two { sdet, tau, .. } => {
            rows.push(("sdet".to_string(), sdet.body()));
            rows.push(("tau".to_string(), tau.body()));
        }
        SuperReport::Three { gammas, t, forms, tau } => {
            let labels = ["0", "1", "*"];
            for (name, g) in ["gamma_a", "gamma_b", "gamma_c"].iter().zip(gammas) {
                for (i, c) in g.iter().enumerate() {
                    rows.push((format!("{name}_{}{}", labels[i / 3], labels[i % 3]), c.body()));
                }
            }
            for (i, c) in t.iter().enumerate() {
                rows.push((format!("T_{}", superqubit::states::ket_label(i, 3)), c.body()));
            }
            rows.push(("sDet".to_string(), forms.quadratic.body()));
            rows.push(("tau".to_string(), tau.value().map_or(Complex64::new(f64::NAN, 0.0), |v| v.body())));
        }
    }
    rows
}

fn cmd_invariants(args: &StateArgs) -> Result<u8, Failure> {
    let state = read_state(args)?;
    let report = invariants::analyze(&state, args.tol_zero)?;
    if args.csv {
        out!("quantity,re,im");
        for (name, c) in csv_rows(&report) {
            out!("{name},{},{}", num(c.re), num(c.im));
        }
    } else {
        print_json(&report.to_json());
    }
    Ok(0)
}

fn cmd_classify(args: &StateArgs) -> Result<u8, Failure> {
    let state = read_state(args)?;
    let report = invariants::analyze(&state, args.tol_zero)?;
    let mut out = json!({
        "n": report.n,
        "class": report.class.label(),
        "vanishing": report.vanishing.to_json(),
    });
    if let SuperReport::Three { forms, .. } = &report.superqubit {
        out["sDet"] = forms.quadratic.to_json();
    }
    if let SuperReport::Two { sdet, .. } = &report.superqubit {
        out["sdet"] = sdet.to_json();
    }
    if args.csv {
        out!("n,class\n{},{}", report.n, report.class.label());
    } else {
        print_json(&out);
    }
    Ok(0)
}

fn cmd_normalize(args: &StateArgs) -> Result<u8, Failure> {
    let state = read_state(args)?.normalize()?;
    if args.csv {
        out!("ket,re,im");
        for (i, c) in state.coeffs().iter().enumerate() {
            if !c.is_zero() {
                let b = c.body();
                out!("{},{},{}", superqubit::states::ket_label(i, state.n()), num(b.re), num(b.im));
            }
        }
    } else {
        print_json(&state.to_json());
    }
    Ok(0)
}

fn cmd_sweep(args: &SweepArgs) -> Result<u8, Failure> {
    let family: Family = args.family.parse()?;
    let alpha = parse_state(&format!("({})|0>", args.alpha), Some(1))?.coeff(&[0]).body();
    let grid: BetaGrid = args.beta_grid.parse()?;
    let rows = sweep::sweep(family, alpha, &grid)?;
    let mut text = String::new();
    if args.json {
        let v: Vec<Value> = rows
            .iter()
            .map(|r| {
                let mut row = json!({
                    "beta_re": round_sig(r.beta.re),
                    "beta_im": round_sig(r.beta.im),
                    "tau": if r.tau.is_nan() { json!("undefined-sqrt") } else { json!(round_sig(r.tau)) },
                    "covariant": {"re": round_sig(r.covariant.re), "im": round_sig(r.covariant.im)},
                });
                if let Some(t) = r.t111 {
                    row["t111"] = json!({"re": round_sig(t.re), "im": round_sig(t.im)});
                }
                row
            })
            .collect();
        text = serde_json::to_string_pretty(&Value::Array(v)).expect("values serialize");
        text.push('\n');
    } else {
        text.push_str("beta_re,beta_im,tau\n");
        for r in &rows {
            text.push_str(&format!("{},{},{}\n", num(r.beta.re), num(r.beta.im), num(r.tau)));
        }
    }
    match &args.output {
        Some(path) => fs::write(path, text)?,
        None => write_stdout(&text),
    }
    Ok(0)
}

fn cmd_verify(args: &VerifyArgs) -> Result<u8, Failure> {
    let eps = if args.inject_fault { -1.0 } else { 1.0 };
    let gens = build_generators_with_epsilon(OspParams::OSP12, eps);
    if args.table {
        match gens.bracket_table() {
            Ok(t) => write_stdout(&t.render()),
            Err(e) => out!("bracket table unavailable: {e}"),
        }
    }
    let checks = verify::run_suite(&gens, args.seed, args.cases);
    let mut failed = 0;
    for c in &checks {
        out!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
        failed += usize::from(!c.passed);
    }
    if failed > 0 {
        eprintln!("{}", json!({"error": "VerifyFailure", "message": format!("{failed} identities failed")}));
        return Ok(1);
    }
    Ok(0)
}

fn cmd_act(args: &ActArgs) -> Result<u8, Failure> {
    let state = read_state(&args.state)?;
    let gen: Generator = args.generator.parse().map_err(|e| Failure::input("UsageError", e))?;
    if args.slot == 0 {
        return Err(Failure::input("BadSlot", "slots are counted from 1"));
    }
    let gens = build_generators(OspParams::OSP12);
    let out = gens.act(gen, args.slot - 1, &state).map_err(|e| Failure::input("BadSlot", e))?;
    print_json(&out.to_json());
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Invariants(a) => cmd_invariants(a),
        Command::Classify(a) => cmd_classify(a),
        Command::Normalize(a) => cmd_normalize(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Act(a) => cmd_act(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("{}", json!({"error": f.kind, "message": f.message}));
            ExitCode::from(f.code)
        }
    }
}
