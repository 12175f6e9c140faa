//! The `circuitwalk` command line: solve, walk, decompose, verify, generate
//! and classify instances stored as JSON files.
//!
//! Exit codes:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success |
//! | 1 | unreadable file, parse or dimension error, bad arguments |
//! | 2 | the program is infeasible |
//! | 3 | internal failure: a produced result did not pass its own check |
//! | 4 | `verify` rejected the certificate |

pub mod format;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use circuitwalk::circuits::conformal_circuit_decomposition;
use circuitwalk::hardness::{random_feasible_instance, reduce_to_walk_instance, seeded_rng, RandomInstanceConfig, SubsetSumInstance};
use circuitwalk::ip::{is_graver_element, solve_ip, DEFAULT_BRUTE_FORCE_BUDGET};
use circuitwalk::lp::solve_lp;
use circuitwalk::sparsity::{in_sparse_regime, matrix_graph, tree_depth, DEFAULT_TREE_DEPTH_MAX_VERTICES};
use circuitwalk::walks::{
    circuit_walk, delta_hat, graver_decomposition_with, graver_walk, verify_circuit_walk, verify_graver_walk,
    DeltaChoice, GraverExtraction, WalkCertificate, WalkMode, WalkOptions,
};
use circuitwalk::{Error, LpInstance, Rational};
use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;

use format::{certificate_to_json, parse_certificate, show, show_term, InstanceFile, ParseError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_INFEASIBLE: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;
pub const EXIT_REJECTED: i32 = 4;

/// Overrides the Δ(A) enumeration budget and the Graver-membership budget.
pub const BUDGET_ENV: &str = "CIRCUITWALK_BUDGET";

#[derive(Parser, Debug)]
#[command(name = "circuitwalk", version, about = "Exact circuit and Graver walks for max { wx : Ax = b, l <= x <= u }")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum DeltaArg {
    Auto,
    Exact,
    Bound,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ExtractionArg {
    Auxiliary,
    StandardForm,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Circuit,
    Graver,
}

#[derive(clap::Args, Debug)]
struct WalkArgs {
    file: PathBuf,
    /// run the certificate verifier before exiting
    #[arg(long)]
    verify: bool,
    /// how to obtain the bound on Δ(A)
    #[arg(long, value_enum, default_value = "auto")]
    delta: DeltaArg,
    #[arg(long, default_value_t = 100_000)]
    steps_limit: usize,
    /// write the certificate here instead of standard output
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve the LP relaxation exactly
    SolveLp { file: PathBuf },
    /// Solve the integer program exactly
    SolveIp { file: PathBuf },
    /// Walk from x0 to an LP optimum along circuits
    CircuitWalk(WalkArgs),
    /// Walk from x0 to an integer optimum along Graver-elements
    GraverWalk {
        #[command(flatten)]
        walk: WalkArgs,
        #[arg(long, value_enum, default_value = "auxiliary")]
        extraction: ExtractionArg,
    },
    /// Decompose the file's h into conformal circuits or Graver-elements
    Decompose {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "circuit")]
        mode: ModeArg,
    },
    /// Check a walk certificate against an instance
    Verify { instance: PathBuf, certificate: PathBuf },
    /// Generate an instance file
    Gen {
        /// subset-sum data `a0 a1 ... ar`; produces the walk instance of the reduction
        #[arg(long, num_args = 2.., value_name = "A", conflicts_with = "random", required_unless_present = "random")]
        subset_sum: Option<Vec<u64>>,
        /// random instance with a feasible integer start built in
        #[arg(long)]
        random: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        rows: usize,
        #[arg(long, default_value_t = 5)]
        cols: usize,
        #[arg(long, default_value_t = 2)]
        max_entry: i64,
        #[arg(long, default_value_t = -5, allow_negative_numbers = true)]
        lower: i64,
        #[arg(long, default_value_t = 9, allow_negative_numbers = true)]
        upper: i64,
        #[arg(long, default_value_t = 3)]
        max_weight: i64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Report tree-depths of the column and row graphs of A
    Classify {
        file: PathBuf,
        /// with --depth: test max |A_ij| <= MAX_ENTRY and min(td(A), td(A^T)) <= DEPTH
        #[arg(long, requires = "depth")]
        max_entry: Option<i64>,
        #[arg(long, requires = "max_entry")]
        depth: Option<usize>,
    },
}

/// A failed command: exit code plus a message for standard error.
struct Failure {
    code: i32,
    message: String,
}

type Outcome = std::result::Result<i32, Failure>;

fn input_error(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_INPUT,
        message: message.into(),
    }
}

fn in_file(path: &Path, e: ParseError) -> Failure {
    input_error(format!("{}: {e}", path.display()))
}

/// Library errors after the input parsed: infeasible starts, budgets and
/// dimension problems are the caller's; the rest are internal.
fn from_core(e: Error) -> Failure {
    let code = match e {
        Error::Dimension(_)
        | Error::InvalidInstance(_)
        | Error::Precondition(_)
        | Error::NotACircuit { .. }
        | Error::BudgetExceeded { .. }
        | Error::InfeasibleStart => EXIT_INPUT,
        _ => EXIT_INTERNAL,
    };
    Failure {
        code,
        message: e.to_string(),
    }
}

fn read(path: &Path) -> std::result::Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> std::result::Result<InstanceFile, Failure> {
    InstanceFile::parse(&read(path)?).map_err(|e| in_file(path, e))
}

fn load_instance(path: &Path) -> std::result::Result<(InstanceFile, LpInstance), Failure> {
    let file = load(path)?;
    let inst = file.instance().map_err(|e| in_file(path, e))?;
    Ok((file, inst))
}

fn budget() -> std::result::Result<Option<u64>, Failure> {
    match std::env::var(BUDGET_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| input_error(format!("{BUDGET_ENV}={v} is not a non-negative integer"))),
        Err(_) => Ok(None),
    }
}

fn emit(out: &mut dyn Write, text: &str) {
    let _ = out.write_all(text.as_bytes());
}

/// Runs one invocation and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_INPUT,
            };
            let text = e.render().to_string();
            if code == EXIT_OK {
                emit(out, &text);
            } else {
                emit(err, &text);
            }
            return code;
        }
    };
    let outcome = match cli.command {
        Command::SolveLp { file } => solve(&file, false, out),
        Command::SolveIp { file } => solve(&file, true, out),
        Command::CircuitWalk(args) => walk(&args, WalkMode::Circuit, GraverExtraction::Auxiliary, out, err),
        Command::GraverWalk { walk: args, extraction } => {
            let how = match extraction {
                ExtractionArg::Auxiliary => GraverExtraction::Auxiliary,
                ExtractionArg::StandardForm => GraverExtraction::StandardForm,
            };
            walk(&args, WalkMode::Graver, how, out, err)
        }
        Command::Decompose { file, mode } => decompose(&file, mode, out),
        Command::Verify { instance, certificate } => verify(&instance, &certificate, out),
        Command::Gen {
            subset_sum,
            random: _,
            seed,
            rows,
            cols,
            max_entry,
            lower,
            upper,
            max_weight,
            output,
        } => {
            let cfg = RandomInstanceConfig {
                rows,
                cols,
                max_entry,
                bound_range: (lower, upper),
                max_weight,
            };
            generate(subset_sum, seed, &cfg, output.as_deref(), out)
        }
        Command::Classify { file, max_entry, depth } => classify(&file, max_entry.zip(depth), out),
    };
    match outcome {
        Ok(code) => code,
        Err(f) => {
            emit(err, &format!("error: {}\n", f.message));
            f.code
        }
    }
}

fn solve(path: &Path, integral: bool, out: &mut dyn Write) -> Outcome {
    let (_, inst) = load_instance(path)?;
    let (optimal, x, objective) = if integral {
        let s = solve_ip(&inst);
        (s.is_optimal(), s.x, s.objective)
    } else {
        let s = solve_lp(&inst);
        (s.is_optimal(), s.x, s.objective)
    };
    if !optimal {
        emit(out, "status: infeasible\n");
        return Ok(EXIT_INFEASIBLE);
    }
    emit(out, &format!("status: optimal\nx: {}\nobjective: {objective}\n", show(&x)));
    Ok(EXIT_OK)
}

fn walk(args: &WalkArgs, mode: WalkMode, how: GraverExtraction, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let (file, inst) = load_instance(&args.file)?;
    let x0 = file
        .x0
        .clone()
        .ok_or_else(|| input_error(format!("{}: instance file lacks `x0`", args.file.display())))?;
    let budget = budget()?;
    let opts = WalkOptions {
        delta: match args.delta {
            DeltaArg::Auto => DeltaChoice::Auto,
            DeltaArg::Exact => DeltaChoice::Exact,
            DeltaArg::Bound => DeltaChoice::Bound,
        },
        delta_budget: budget.unwrap_or(WalkOptions::default().delta_budget),
        step_limit: args.steps_limit,
        extraction: how,
    };
    let cert = match mode {
        WalkMode::Circuit => circuit_walk(&inst, &x0, &opts),
        WalkMode::Graver => graver_walk(&inst, &x0, &opts),
    }
    .map_err(from_core)?;

    let json = certificate_to_json(&cert);
    match &args.output {
        Some(path) => {
            fs::write(path, &json).map_err(|e| input_error(format!("{}: {e}", path.display())))?;
            emit(
                out,
                &format!(
                    "steps: {}\nterminal: {}\nobjective: {}\n",
                    cert.len(),
                    show(&cert.terminal),
                    inst.objective(&cert.terminal)
                ),
            );
        }
        None => emit(out, &json),
    }
    if args.verify {
        let report = run_verifier(&inst, &cert, budget);
        if !report.passed() {
            emit(err, &format!("internal verification failed: {report}\n"));
            return Ok(EXIT_INTERNAL);
        }
        emit(err, &format!("verified: {report}\n"));
    }
    Ok(EXIT_OK)
}

fn run_verifier(inst: &LpInstance, cert: &WalkCertificate, budget: Option<u64>) -> circuitwalk::walks::VerifyReport {
    match cert.mode {
        WalkMode::Circuit => verify_circuit_walk(inst, cert),
        WalkMode::Graver => verify_graver_walk(inst, cert, budget.unwrap_or(DEFAULT_BRUTE_FORCE_BUDGET)),
    }
}

fn decompose(path: &Path, mode: ModeArg, out: &mut dyn Write) -> Outcome {
    let file = load(path)?;
    let h = file
        .h
        .clone()
        .ok_or_else(|| input_error(format!("{}: instance file lacks `h`", path.display())))?;
    if !file.a.mul_vec(&h).is_zero() {
        return Err(input_error(format!("{}: A h != 0", path.display())));
    }
    if h.is_zero() {
        return Err(input_error(format!("{}: h is zero", path.display())));
    }
    let mut text = format!("h = {}\n", show(&h));
    let problems = match mode {
        ModeArg::Circuit => {
            let dec = conformal_circuit_decomposition(&file.a, &h).map_err(from_core)?;
            for (k, d) in dec.terms.iter().enumerate() {
                text.push_str(&format!("d{} = {}\n", k + 1, show(d)));
            }
            text.push_str(&format!("terms: {}\n", dec.len()));
            dec.violations(&file.a)
        }
        ModeArg::Graver => {
            if !h.is_integral() {
                return Err(input_error(format!("{}: graver mode needs an integral h", path.display())));
            }
            let budget = budget()?;
            let delta = delta_hat(
                &file.a,
                DeltaChoice::Auto,
                budget.unwrap_or(WalkOptions::default().delta_budget),
            )
            .map_err(from_core)?;
            let dec = graver_decomposition_with(&file.a, &h, &delta, GraverExtraction::Auxiliary).map_err(from_core)?;
            for (k, (lambda, g)) in dec.terms.iter().enumerate() {
                text.push_str(&format!("g{} = {}\n", k + 1, show_term(lambda, g)));
            }
            text.push_str(&format!("terms: {}\n", dec.len()));
            let mut problems = dec.violations(&file.a);
            let check = budget.unwrap_or(DEFAULT_BRUTE_FORCE_BUDGET);
            for (k, (_, g)) in dec.terms.iter().enumerate() {
                match is_graver_element(&file.a, g, check) {
                    Ok(true) => {}
                    Ok(false) => problems.push(format!("term {k} is not a Graver-element")),
                    Err(e) => problems.push(format!("term {k}: {e}")),
                }
            }
            problems
        }
    };
    if problems.is_empty() {
        text.push_str("validation: ok\n");
        emit(out, &text);
        Ok(EXIT_OK)
    } else {
        text.push_str(&format!("validation: failed ({})\n", problems.join("; ")));
        emit(out, &text);
        Ok(EXIT_INTERNAL)
    }
}

fn verify(instance: &Path, certificate: &Path, out: &mut dyn Write) -> Outcome {
    let (_, inst) = load_instance(instance)?;
    let cert = parse_certificate(&read(certificate)?, &inst).map_err(|e| in_file(certificate, e))?;
    let report = run_verifier(&inst, &cert, budget()?);
    if report.passed() {
        emit(out, &format!("{report}\n"));
        return Ok(EXIT_OK);
    }
    emit(out, "rejected\n");
    for f in &report.failures {
        emit(out, &format!("  {f}\n"));
    }
    Ok(EXIT_REJECTED)
}

fn generate(
    subset_sum: Option<Vec<u64>>,
    seed: u64,
    cfg: &RandomInstanceConfig,
    output: Option<&Path>,
    out: &mut dyn Write,
) -> Outcome {
    let file = match subset_sum {
        Some(values) => {
            let s = SubsetSumInstance::from_u64(values[0], &values[1..]).map_err(|e| input_error(e.to_string()))?;
            let (inst, x0, _) = reduce_to_walk_instance(&s);
            InstanceFile {
                x0: Some(x0),
                mode: Some(WalkMode::Graver),
                ..InstanceFile::from_instance(&inst)
            }
        }
        None => {
            if cfg.rows == 0 || cfg.cols == 0 || cfg.max_entry < 0 || cfg.max_weight < 0 {
                return Err(input_error("rows and cols must be positive, max-entry and max-weight non-negative"));
            }
            if cfg.bound_range.0 > cfg.bound_range.1 {
                return Err(input_error("--lower exceeds --upper"));
            }
            let (inst, x0) = random_feasible_instance(&mut seeded_rng(seed), cfg);
            InstanceFile {
                x0: Some(x0),
                ..InstanceFile::from_instance(&inst)
            }
        }
    };
    let json = file.to_json();
    match output {
        Some(path) => fs::write(path, json).map_err(|e| input_error(format!("{}: {e}", path.display())))?,
        None => emit(out, &json),
    }
    Ok(EXIT_OK)
}

fn classify(path: &Path, regime: Option<(i64, usize)>, out: &mut dyn Write) -> Outcome {
    let file = load(path)?;
    let a = &file.a;
    let max = DEFAULT_TREE_DEPTH_MAX_VERTICES;
    let columns = tree_depth(&matrix_graph(a), max).map_err(from_core)?;
    let rows = tree_depth(&matrix_graph(&a.transpose()), max).map_err(from_core)?;
    let mut text = format!(
        "max |A_ij|: {}\ntd(A): {columns}\ntd(A^T): {rows}\n",
        a.max_abs_entry()
    );
    if let Some((entry, depth)) = regime {
        let sparse = in_sparse_regime(a, &Rational::from_integer(BigInt::from(entry)), depth, max).map_err(from_core)?;
        text.push_str(&format!("sparse regime (a = {entry}, d = {depth}): {}\n", if sparse { "yes" } else { "no" }));
    }
    emit(out, &text);
    Ok(EXIT_OK)
}
