//! The `eqsup` command-line tool.
//!
//! Exit codes: 0 when the command succeeded and any checked relation holds,
//! 1 when a checked relation is violated, 2 for usage errors, 3 for I/O errors.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::coins::{BalancedCoin, Coin, UnbalancedCoin, NAMED_COINS};
use crate::ensemble::{apply_and_verify, sample_ensemble, satisfies_constraint, EnsembleState, StateRecord};
use crate::format::{round_sig, sig};
use crate::linalg::Complex;
use crate::nonlocal::{locc_test, signalling_test, uniqueness_sweep, Branch};
use crate::walk::{run_state, InitialCoinState};

/// Inputs whose squared norm is this close to the required value are rescaled
/// onto it, so that amplitudes typed to a handful of digits are accepted.
pub const INPUT_RENORMALIZE_TOL: f64 = 1e-6;

pub const EXIT_HOLDS: i32 = 0;
pub const EXIT_VIOLATED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "eqsup",
    version,
    about = "Equal-superposition coins: ensemble checks, nonlocality tests and quantum walks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate the walk and print the position distribution.
    Walk(WalkArgs),
    /// Test whether a state lies in the ensemble of a balanced coin.
    EnsembleCheck(StateArgs),
    /// Draw reproducible members of the ensemble of a balanced coin.
    EnsembleSample(SampleArgs),
    /// Compare Alice's reduced state before and after Bob's operation.
    Nosignal(StateArgs),
    /// Entanglement generated across the A:B cut on both LOCC resources.
    Locc(LoccArgs),
    /// Evaluate both LOCC branches over a lattice of states.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    /// Whitespace-separated `z P_z` columns (walk only).
    Plot,
}

#[derive(Debug, Args)]
pub struct Output {
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct WalkArgs {
    /// hadamard | invariant | hybrid | balanced:re_a,im_a,re_g,im_g,theta | unbalanced:re_p,im_p,re_q,im_q
    #[arg(long, default_value = "hadamard", value_parser = parse_coin)]
    pub coin: Coin,
    /// re_up,im_up,re_down,im_down
    #[arg(long, default_value = "1,0,0,0", value_parser = parse_initial, allow_hyphen_values = true)]
    pub initial: InitialCoinState,
    #[arg(long, allow_hyphen_values = true)]
    pub steps: usize,
    /// Also resolve the final coin register in the {ψ, ψ̄} basis of this state (re_a,im_a,re_b,im_b).
    #[arg(long, value_parser = parse_state, allow_hyphen_values = true)]
    pub basis: Option<EnsembleState>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct StateArgs {
    #[arg(long, default_value = "hadamard", value_parser = parse_coin)]
    pub coin: Coin,
    /// re_a,im_a,re_b,im_b or a JSON object {"re_a":..,"im_a":..,"re_b":..,"im_b":..}
    #[arg(long, value_parser = parse_state, allow_hyphen_values = true)]
    pub state: EnsembleState,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BranchChoice {
    Psi,
    Psibar,
    Both,
}

#[derive(Debug, Args)]
pub struct LoccArgs {
    #[command(flatten)]
    pub input: StateArgs,
    #[arg(long, value_enum, default_value = "both")]
    pub branch: BranchChoice,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[arg(long, default_value = "hadamard", value_parser = parse_coin)]
    pub coin: Coin,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub count: usize,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, default_value = "hadamard", value_parser = parse_coin)]
    pub coin: Coin,
    /// Lattice points per axis, at least 10.
    #[arg(long, default_value_t = 50)]
    pub resolution: usize,
    #[command(flatten)]
    pub output: Output,
}

fn parse_reals<const N: usize>(text: &str) -> Result<[f64; N], String> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != N {
        return Err(format!("expected {N} comma-separated numbers, got {} in '{text}'", parts.len()));
    }
    let mut out = [0.0; N];
    for (slot, token) in out.iter_mut().zip(parts) {
        let v: f64 = token.parse().map_err(|_| format!("invalid number '{token}'"))?;
        if !v.is_finite() {
            return Err(format!("number '{token}' is not finite"));
        }
        *slot = v;
    }
    Ok(out)
}

/// Rescales `z` so that `|z|² = target` when it is already within tolerance.
fn snap_modulus(name: &str, z: Complex, target: f64) -> Result<Complex, String> {
    let m = z.norm_sqr();
    if (m - target).abs() >= INPUT_RENORMALIZE_TOL {
        return Err(format!("|{name}|^2 must equal {target}, got {m}"));
    }
    Ok(z * (target / m).sqrt())
}

fn snap_pair(what: &str, x: Complex, y: Complex) -> Result<(Complex, Complex), String> {
    let n = x.norm_sqr() + y.norm_sqr();
    if (n - 1.0).abs() >= INPUT_RENORMALIZE_TOL {
        return Err(format!("{what} must have unit norm, got squared norm {n}"));
    }
    let s = 1.0 / n.sqrt();
    Ok((x * s, y * s))
}

pub fn parse_coin(text: &str) -> Result<Coin, String> {
    if let Some(c) = Coin::named(text) {
        return Ok(c);
    }
    if let Some(rest) = text.strip_prefix("balanced:") {
        let [ra, ia, rg, ig, theta] = parse_reals::<5>(rest)?;
        let alpha = snap_modulus("alpha", Complex::new(ra, ia), 0.5)?;
        let gamma = snap_modulus("gamma", Complex::new(rg, ig), 0.5)?;
        return BalancedCoin::new(alpha, gamma, theta)
            .map(Coin::from)
            .map_err(|e| e.to_string());
    }
    if let Some(rest) = text.strip_prefix("unbalanced:") {
        let [rp, ip, rq, iq] = parse_reals::<4>(rest)?;
        let (p, q) = snap_pair("(p, q)", Complex::new(rp, ip), Complex::new(rq, iq))?;
        return UnbalancedCoin::new(p, q).map(Coin::from).map_err(|e| e.to_string());
    }
    Err(format!(
        "unknown coin '{text}'; expected one of {}, balanced:re_a,im_a,re_g,im_g,theta or unbalanced:re_p,im_p,re_q,im_q",
        NAMED_COINS.join(", ")
    ))
}

pub fn parse_initial(text: &str) -> Result<InitialCoinState, String> {
    let [ru, iu, rd, id] = parse_reals::<4>(text)?;
    let (up, down) = snap_pair("initial coin state", Complex::new(ru, iu), Complex::new(rd, id))?;
    InitialCoinState::new(up, down).map_err(|e| e.to_string())
}

pub fn parse_state(text: &str) -> Result<EnsembleState, String> {
    let trimmed = text.trim();
    let [x, y, u, v] = if trimmed.starts_with('{') {
        let r: StateRecord = serde_json::from_str(trimmed).map_err(|e| format!("invalid state object: {e}"))?;
        [r.re_a, r.im_a, r.re_b, r.im_b]
    } else {
        parse_reals::<4>(trimmed)?
    };
    let (a, b) = snap_pair("state", Complex::new(x, y), Complex::new(u, v))?;
    EnsembleState::new(a, b).map_err(|e| e.to_string())
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "error: {m}"),
            CliError::Io(m) => write!(f, "I/O error: {m}"),
        }
    }
}

impl From<crate::error::Error> for CliError {
    fn from(e: crate::error::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

/// Parses `args` (program name first) and executes; returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}

/// Runs one command, writing its output; returns 0 or 1 by verdict.
pub fn execute(command: &Command) -> Result<i32, CliError> {
    let (text, output, holds) = match command {
        Command::Walk(args) => walk(args)?,
        Command::EnsembleCheck(args) => ensemble_check(args)?,
        Command::EnsembleSample(args) => ensemble_sample(args)?,
        Command::Nosignal(args) => nosignal(args)?,
        Command::Locc(args) => locc(args)?,
        Command::Sweep(args) => sweep(args)?,
    };
    write_output(output, &text)?;
    Ok(if holds { EXIT_HOLDS } else { EXIT_VIOLATED })
}

fn write_output(output: &Output, text: &str) -> Result<(), CliError> {
    match &output.out {
        Some(path) => fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => {
            let mut stdout = io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::Io(e.to_string()))
        }
    }
}

fn require_balanced(coin: &Coin) -> Result<&BalancedCoin, CliError> {
    coin.as_balanced()
        .ok_or_else(|| CliError::Usage("this command needs a balanced coin".into()))
}

fn no_plot(output: &Output) -> Result<(), CliError> {
    if output.format == Format::Plot {
        return Err(CliError::Usage("plot format is only available for walk".into()));
    }
    Ok(())
}

/// Replaces every float by its 12-significant-digit value.
fn round_numbers(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(x) = n.as_f64() {
                *v = json!(round_sig(x));
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_numbers),
        Value::Object(map) => map.values_mut().for_each(round_numbers),
        _ => {}
    }
}

fn to_json<T: Serialize>(value: &T) -> Value {
    let mut v = serde_json::to_value(value).expect("reports serialise to JSON");
    round_numbers(&mut v);
    v
}

fn render_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values render");
    s.push('\n');
    s
}

/// `field,value` rows with dotted paths for nested fields.
fn render_fields(v: &Value) -> String {
    fn walk(prefix: &str, v: &Value, out: &mut String) {
        let key = |k: &str| {
            if prefix.is_empty() {
                k.to_string()
            } else {
                format!("{prefix}.{k}")
            }
        };
        match v {
            Value::Object(map) => map.iter().for_each(|(k, x)| walk(&key(k), x, out)),
            Value::Array(items) => items
                .iter()
                .enumerate()
                .for_each(|(i, x)| walk(&key(&i.to_string()), x, out)),
            Value::Number(n) => {
                let s = match n.as_i64() {
                    Some(i) if !n.is_f64() => i.to_string(),
                    _ => sig(n.as_f64().unwrap_or(f64::NAN)),
                };
                out.push_str(&format!("{prefix},{s}\n"));
            }
            Value::Bool(b) => out.push_str(&format!("{prefix},{b}\n")),
            Value::String(s) => out.push_str(&format!("{prefix},{s}\n")),
            Value::Null => out.push_str(&format!("{prefix},\n")),
        }
    }
    let mut out = String::from("field,value\n");
    walk("", v, &mut out);
    out
}

fn render_report(format: Format, v: &Value) -> String {
    match format {
        Format::Csv => render_fields(v),
        _ => render_json(v),
    }
}

type Rendered<'a> = (String, &'a Output, bool);

fn walk(args: &WalkArgs) -> Result<Rendered<'_>, CliError> {
    let state = run_state(args.initial, &args.coin.matrix(), args.steps)?;
    let dist = state.distribution();
    let support: Vec<(i64, f64)> = dist.support().collect();
    let text = match args.output.format {
        Format::Plot => support.iter().map(|(z, p)| format!("{z} {}\n", sig(*p))).collect(),
        Format::Csv => {
            let mut s = String::from(if args.basis.is_some() { "z,p,p_psi,p_psibar\n" } else { "z,p\n" });
            let resolved = args.basis.map(|b| state.coin_resolved_probabilities(&b));
            for (k, (z, p)) in support.iter().enumerate() {
                s.push_str(&format!("{z},{}", sig(*p)));
                if let Some(r) = &resolved {
                    let [pp, pb] = r[2 * k].1;
                    s.push_str(&format!(",{},{}", sig(pp), sig(pb)));
                }
                s.push('\n');
            }
            s
        }
        Format::Json => {
            let mut v = json!({
                "command": "walk",
                "coin": args.coin,
                "initial": [args.initial.up(), args.initial.down()],
                "steps": args.steps,
                "total_probability": dist.total(),
                "distribution": support.iter().map(|(z, p)| json!({"z": z, "p": p})).collect::<Vec<_>>(),
            });
            if let Some(b) = &args.basis {
                let resolved: Vec<Value> = state
                    .coin_resolved_probabilities(b)
                    .into_iter()
                    .step_by(2)
                    .map(|(z, [pp, pb])| json!({"z": z, "p_psi": pp, "p_psibar": pb}))
                    .collect();
                v["basis"] = json!(b);
                v["coin_resolved"] = json!(resolved);
            }
            round_numbers(&mut v);
            render_json(&v)
        }
    };
    Ok((text, &args.output, true))
}

fn ensemble_check(args: &StateArgs) -> Result<Rendered<'_>, CliError> {
    no_plot(&args.output)?;
    let coin = require_balanced(&args.coin)?;
    let check = satisfies_constraint(&args.state, coin);
    let transform = apply_and_verify(coin, &args.state);
    let v = to_json(&json!({
        "command": "ensemble-check",
        "coin": args.coin,
        "state": args.state,
        "verdict": check.satisfied,
        "constraint": check,
        "transform": transform,
    }));
    Ok((render_report(args.output.format, &v), &args.output, check.satisfied))
}

fn ensemble_sample(args: &SampleArgs) -> Result<Rendered<'_>, CliError> {
    no_plot(&args.output)?;
    let coin = require_balanced(&args.coin)?;
    let states = sample_ensemble(coin, args.seed, args.count)?;
    let text = match args.output.format {
        Format::Csv => {
            let mut s = String::from("re_a,im_a,re_b,im_b\n");
            for st in &states {
                let (a, b) = (st.a(), st.b());
                s.push_str(&format!("{},{},{},{}\n", sig(a.re), sig(a.im), sig(b.re), sig(b.im)));
            }
            s
        }
        _ => render_json(&to_json(&states)),
    };
    Ok((text, &args.output, true))
}

fn nosignal(args: &StateArgs) -> Result<Rendered<'_>, CliError> {
    no_plot(&args.output)?;
    let coin = require_balanced(&args.coin)?;
    let report = signalling_test(coin, &args.state);
    let v = to_json(&json!({
        "command": "nosignal",
        "coin": args.coin,
        "state": args.state,
        "report": report,
    }));
    Ok((render_report(args.output.format, &v), &args.output, report.no_signalling))
}

fn locc(args: &LoccArgs) -> Result<Rendered<'_>, CliError> {
    let input = &args.input;
    no_plot(&input.output)?;
    let coin = require_balanced(&input.coin)?;
    let branches: &[Branch] = match args.branch {
        BranchChoice::Psi => &[Branch::Psi],
        BranchChoice::Psibar => &[Branch::Psibar],
        BranchChoice::Both => &[Branch::Psi, Branch::Psibar],
    };
    let reports = branches
        .iter()
        .map(|&b| locc_test(coin, &input.state, b))
        .collect::<crate::error::Result<Vec<_>>>()?;
    let holds = reports.iter().all(|r| r.separable);
    let v = to_json(&json!({
        "command": "locc",
        "coin": input.coin,
        "state": input.state,
        "separable": holds,
        "reports": reports,
    }));
    Ok((render_report(input.output.format, &v), &input.output, holds))
}

fn sweep(args: &SweepArgs) -> Result<Rendered<'_>, CliError> {
    no_plot(&args.output)?;
    let coin = require_balanced(&args.coin)?;
    let report = uniqueness_sweep(coin, args.resolution)?;
    let holds = report.intersection_within_constraint && report.constraint_within_intersection;
    let text = match args.output.format {
        Format::Csv => report.to_csv(),
        _ => render_json(&to_json(&report)),
    };
    Ok((text, &args.output, holds))
}
