//! The `dqsolve` command line.
//!
//! Exit codes: 0 solvable or verified, 2 unsolvable or a residual above
//! tolerance, 1 usage, input or internal error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::dual_matrix::DualQuatMatrix;
use crate::format::{parse_dqm, render_dqm};
use crate::matrix::{Tolerance, DEFAULT_RANK_REL, DEFAULT_ZERO_ABS};
use crate::quaternion::EtaAxis;
use crate::solver::{
    solve_ax_b, solve_ax_b_eta_hermitian, solve_dual_system, solve_xc_d, Check, ConditionMode, RankReport,
    SolveOutcome,
};

// clap prints defaults verbatim; unit tests pin these to the library constants
const ZERO_ABS_TEXT: &str = "1e-10";
const RANK_REL_TEXT: &str = "1e-10";

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_NEGATIVE: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "dqsolve",
    version,
    about = "Solve AX = B, XC = D over dual quaternion matrices",
    long_about = "Solve AX = B, XC = D over dual quaternion matrices.\n\n\
                  Matrices are read from and written to .dqm text files. Exit status: \
                  0 solvable or verified, 2 unsolvable or residual above tolerance, \
                  1 usage or input error."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide solvability and write the canonical particular solution
    Solve {
        #[command(subcommand)]
        kind: Kind,
    },
    /// Print every solvability condition with both sides and a verdict
    Check {
        #[command(subcommand)]
        kind: Kind,
    },
    /// Measure the residuals of a candidate solution
    Verify(VerifyArgs),
    /// Write seeded general-solution instances
    Sample(SampleArgs),
}

#[derive(Subcommand, Debug)]
enum Kind {
    /// AX = B, XC = D
    System {
        #[command(flatten)]
        files: SystemFiles,
        /// Condition family that decides solvability; both must agree under "both"
        #[arg(long, value_enum, default_value_t = Mode::Both)]
        mode: Mode,
        #[command(flatten)]
        common: Common,
    },
    /// AX = B, or its eta-Hermitian solutions with --eta
    #[command(name = "ax-b")]
    AxB {
        /// Coefficient A (m x n)
        #[arg(long = "A", value_name = "FILE")]
        a: PathBuf,
        /// Right-hand side B (m x k)
        #[arg(long = "B", value_name = "FILE")]
        b: PathBuf,
        /// Require X^{eta*} = X
        #[arg(long, value_enum)]
        eta: Option<Eta>,
        #[command(flatten)]
        common: Common,
    },
    /// XC = D
    #[command(name = "xc-d")]
    XcD {
        /// Coefficient C (k x l)
        #[arg(long = "C", value_name = "FILE")]
        c: PathBuf,
        /// Right-hand side D (n x l)
        #[arg(long = "D", value_name = "FILE")]
        d: PathBuf,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args, Debug)]
struct SystemFiles {
    /// Coefficient A (m x n)
    #[arg(long = "A", value_name = "FILE")]
    a: PathBuf,
    /// Right-hand side B (m x k)
    #[arg(long = "B", value_name = "FILE")]
    b: PathBuf,
    /// Coefficient C (k x l)
    #[arg(long = "C", value_name = "FILE")]
    c: PathBuf,
    /// Right-hand side D (n x l)
    #[arg(long = "D", value_name = "FILE")]
    d: PathBuf,
}

#[derive(Args, Debug, Default)]
struct OptionalFiles {
    /// Coefficient A (m x n)
    #[arg(long = "A", value_name = "FILE")]
    a: Option<PathBuf>,
    /// Right-hand side B (m x k)
    #[arg(long = "B", value_name = "FILE")]
    b: Option<PathBuf>,
    /// Coefficient C (k x l)
    #[arg(long = "C", value_name = "FILE")]
    c: Option<PathBuf>,
    /// Right-hand side D (n x l)
    #[arg(long = "D", value_name = "FILE")]
    d: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct Common {
    /// Write the result here instead of standard output
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Residual tolerance: a condition "M = 0" passes when |M| <= tol * (1 + operand norms)
    #[arg(long, value_name = "T", default_value = ZERO_ABS_TEXT)]
    tol: f64,
    /// Relative singular-value cutoff for ranks and pseudoinverses
    #[arg(long = "rank-tol", value_name = "T", default_value = RANK_REL_TEXT)]
    rank_tol: f64,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Candidate solution
    #[arg(long = "X", value_name = "FILE")]
    x: PathBuf,
    /// Also require X to be eta-Hermitian (AX = B only)
    #[arg(long, value_enum)]
    eta: Option<Eta>,
    #[command(flatten)]
    files: OptionalFiles,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct SampleArgs {
    /// Number of instances; instance i uses seed S + i
    #[arg(long, value_name = "N")]
    n: u64,
    /// Seed of the first instance
    #[arg(long, value_name = "S", default_value_t = 0)]
    seed: u64,
    /// Free-parameter coefficients are uniform in [-scale, scale]
    #[arg(long, value_name = "C", default_value_t = 1.0)]
    scale: f64,
    /// Condition family for the system; both must agree under "both"
    #[arg(long, value_enum, default_value_t = Mode::Both)]
    mode: Mode,
    /// Sample eta-Hermitian solutions of AX = B
    #[arg(long, value_enum)]
    eta: Option<Eta>,
    #[command(flatten)]
    files: OptionalFiles,
    #[command(flatten)]
    common: Common,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Mode {
    Projector,
    Rank,
    Both,
}

impl From<Mode> for ConditionMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Projector => ConditionMode::Projector,
            Mode::Rank => ConditionMode::Rank,
            Mode::Both => ConditionMode::Both,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Eta {
    I,
    J,
    K,
}

impl From<Eta> for EtaAxis {
    fn from(e: Eta) -> Self {
        match e {
            Eta::I => EtaAxis::I,
            Eta::J => EtaAxis::J,
            Eta::K => EtaAxis::K,
        }
    }
}

/// A failure that ends the run with exit code 1.
struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

type Run = std::result::Result<i32, Failure>;

/// Runs the command line with `args` (program name first) on the process's
/// standard streams.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

/// As [`run`], writing to the given streams.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    return EXIT_OK;
                }
                _ => EXIT_ERROR,
            };
            let _ = write!(err, "{}", e.render());
            return code;
        }
    };
    let result = match cli.command {
        Command::Solve { kind } => cmd_solve(kind, out),
        Command::Check { kind } => cmd_check(kind, out),
        Command::Verify(args) => cmd_verify(args, out),
        Command::Sample(args) => cmd_sample(args, out),
    };
    match result {
        Ok(code) => code,
        Err(Failure(msg)) => {
            let _ = writeln!(err, "dqsolve: {msg}");
            EXIT_ERROR
        }
    }
}

fn load(path: &Path) -> std::result::Result<DualQuatMatrix, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
    parse_dqm(&text).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn tolerance(common: &Common) -> std::result::Result<Tolerance, Failure> {
    Ok(Tolerance::new(common.rank_tol, common.tol)?)
}

fn emit(common: &Common, text: &str, out: &mut dyn Write) -> std::result::Result<(), Failure> {
    match &common.out {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure(format!("{}: {e}", path.display()))),
        None => Ok(out.write_all(text.as_bytes())?),
    }
}

/// Which equation a set of input files describes.
enum Problem {
    System {
        a: DualQuatMatrix,
        b: DualQuatMatrix,
        c: DualQuatMatrix,
        d: DualQuatMatrix,
        mode: ConditionMode,
    },
    AxB {
        a: DualQuatMatrix,
        b: DualQuatMatrix,
        eta: Option<EtaAxis>,
    },
    XcD {
        c: DualQuatMatrix,
        d: DualQuatMatrix,
    },
}

impl Problem {
    fn from_kind(kind: &Kind) -> std::result::Result<(Self, Vec<String>), Failure> {
        let name = |flag: &str, p: &Path| format!("{flag}={}", p.display());
        Ok(match kind {
            Kind::System { files, mode, .. } => (
                Problem::System {
                    a: load(&files.a)?,
                    b: load(&files.b)?,
                    c: load(&files.c)?,
                    d: load(&files.d)?,
                    mode: (*mode).into(),
                },
                vec![name("A", &files.a), name("B", &files.b), name("C", &files.c), name("D", &files.d)],
            ),
            Kind::AxB { a, b, eta, .. } => (
                Problem::AxB {
                    a: load(a)?,
                    b: load(b)?,
                    eta: eta.map(Into::into),
                },
                vec![name("A", a), name("B", b)],
            ),
            Kind::XcD { c, d, .. } => (
                Problem::XcD {
                    c: load(c)?,
                    d: load(d)?,
                },
                vec![name("C", c), name("D", d)],
            ),
        })
    }

    /// Infers the equation from which of `--A --B --C --D` were given.
    fn from_files(
        files: &OptionalFiles,
        mode: Mode,
        eta: Option<Eta>,
    ) -> std::result::Result<(Self, Vec<String>), Failure> {
        let kind = match (&files.a, &files.b, &files.c, &files.d) {
            (Some(a), Some(b), Some(c), Some(d)) => {
                if eta.is_some() {
                    return Err(Failure("--eta applies to AX = B only (give --A and --B)".into()));
                }
                Kind::System {
                    files: SystemFiles {
                        a: a.clone(),
                        b: b.clone(),
                        c: c.clone(),
                        d: d.clone(),
                    },
                    mode,
                    common: Common::unused(),
                }
            }
            (Some(a), Some(b), None, None) => Kind::AxB {
                a: a.clone(),
                b: b.clone(),
                eta,
                common: Common::unused(),
            },
            (None, None, Some(c), Some(d)) if eta.is_none() => Kind::XcD {
                c: c.clone(),
                d: d.clone(),
                common: Common::unused(),
            },
            _ => {
                return Err(Failure(
                    "give --A --B --C --D for the system, --A --B for AX = B, or --C --D for XC = D".into(),
                ))
            }
        };
        Self::from_kind(&kind)
    }

    fn label(&self) -> &'static str {
        match self {
            Problem::System { .. } => "system AX = B, XC = D",
            Problem::AxB { eta: Some(_), .. } => "eta-Hermitian AX = B",
            Problem::AxB { .. } => "AX = B",
            Problem::XcD { .. } => "XC = D",
        }
    }

    fn solve(&self, tol: &Tolerance) -> std::result::Result<SolveOutcome<DualQuatMatrix>, Failure> {
        Ok(match self {
            Problem::System { a, b, c, d, mode } => solve_dual_system(a, b, c, d, tol, *mode)?.outcome,
            Problem::AxB { a, b, eta: Some(eta) } => solve_ax_b_eta_hermitian(a, b, *eta, tol)?,
            Problem::AxB { a, b, eta: None } => solve_ax_b(a, b, tol)?,
            Problem::XcD { c, d } => solve_xc_d(c, d, tol)?,
        })
    }

    fn settings(&self, tol: &Tolerance) -> String {
        let mut s = format!("tol {:e}, rank-tol {:e}", tol.zero_abs, tol.rank_rel);
        match self {
            Problem::System { mode, .. } => {
                let _ = write!(s, ", mode {}", mode_name(*mode));
            }
            Problem::AxB { eta: Some(eta), .. } => {
                let _ = write!(s, ", eta {eta}");
            }
            _ => {}
        }
        s
    }
}

impl Common {
    fn unused() -> Self {
        Common {
            out: None,
            tol: DEFAULT_ZERO_ABS,
            rank_tol: DEFAULT_RANK_REL,
        }
    }
}

fn kind_common(kind: &Kind) -> &Common {
    match kind {
        Kind::System { common, .. } | Kind::AxB { common, .. } | Kind::XcD { common, .. } => common,
    }
}

fn mode_name(mode: ConditionMode) -> &'static str {
    match mode {
        ConditionMode::Projector => "projector",
        ConditionMode::Rank => "rank",
        ConditionMode::Both => "both",
    }
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

fn check_line(c: &Check) -> String {
    let (lhs, rhs) = c.sides();
    format!("{} {}: {lhs} vs {rhs}", verdict(c.pass), c.name)
}

fn header(command: &str, problem: &Problem, inputs: &[String], tol: &Tolerance, outcome: &SolveOutcome<DualQuatMatrix>) -> Vec<String> {
    let mut lines = vec![
        format!("dqsolve {command}: {}", problem.label()),
        format!("inputs: {}", inputs.join(" ")),
        problem.settings(tol),
        format!("verdict: {}", if outcome.solvable { "solvable" } else { "unsolvable" }),
    ];
    lines.extend(outcome.checks.iter().map(check_line));
    lines
}

fn report_unsolvable(outcome: &SolveOutcome<DualQuatMatrix>, out: &mut dyn Write) -> Run {
    writeln!(out, "unsolvable: failed {}", outcome.failed_conditions.join(", "))?;
    Ok(EXIT_NEGATIVE)
}

fn cmd_solve(kind: Kind, out: &mut dyn Write) -> Run {
    let common = kind_common(&kind);
    let tol = tolerance(common)?;
    let (problem, inputs) = Problem::from_kind(&kind)?;
    let outcome = problem.solve(&tol)?;
    let Some(x) = outcome.particular.as_ref() else {
        return report_unsolvable(&outcome, out);
    };
    let mut comments = header("solve", &problem, &inputs, &tol, &outcome);
    comments.push("solution: canonical particular solution, all free parameters zero".into());
    let text = render_dqm(x, &comments);
    emit(common, &text, out)?;
    if let Some(path) = &common.out {
        writeln!(out, "solvable: wrote {}x{} solution to {}", x.rows(), x.cols(), path.display())?;
    }
    Ok(EXIT_OK)
}

fn cmd_sample(args: SampleArgs, out: &mut dyn Write) -> Run {
    let tol = tolerance(&args.common)?;
    if !(args.scale.is_finite() && args.scale >= 0.0) {
        return Err(Failure(format!("--scale must be finite and nonnegative, got {}", args.scale)));
    }
    let (problem, inputs) = Problem::from_files(&args.files, args.mode, args.eta)?;
    let outcome = problem.solve(&tol)?;
    if !outcome.solvable {
        return report_unsolvable(&outcome, out);
    }
    let base = header("sample", &problem, &inputs, &tol, &outcome);
    let mut text = String::new();
    for i in 0..args.n {
        let seed = args
            .seed
            .checked_add(i)
            .ok_or_else(|| Failure("seed range overflows u64".into()))?;
        let x = outcome.sample(seed, args.scale).expect("solvable outcome has a sampler");
        let mut comments = base.clone();
        comments.push(format!(
            "solution: general solution instance {} of {}, seed {seed}, scale {}",
            i + 1,
            args.n,
            args.scale
        ));
        text.push_str(&render_dqm(&x, &comments));
    }
    emit(&args.common, &text, out)?;
    if let Some(path) = &args.common.out {
        writeln!(out, "solvable: wrote {} instances to {}", args.n, path.display())?;
    }
    Ok(EXIT_OK)
}

fn table(report: &RankReport) -> (String, bool, bool) {
    let mut rows: Vec<(String, String, String, bool)> = Vec::new();
    for e in &report.equalities {
        rows.push((e.name.into(), format!("{:.3e}", e.residual), format!("<= {:.3e}", e.threshold), e.pass));
    }
    for c in report.ranks.iter().chain(&report.projector) {
        let (lhs, rhs) = c.sides();
        rows.push((c.name.into(), lhs, rhs, c.pass));
    }
    let w0 = rows.iter().map(|r| r.0.len()).max().unwrap_or(0).max("condition".len());
    let w1 = rows.iter().map(|r| r.1.len()).max().unwrap_or(0).max("lhs".len());
    let w2 = rows.iter().map(|r| r.2.len()).max().unwrap_or(0).max("rhs".len());
    let mut s = format!("{:<w0$}  {:>w1$}  {:>w2$}  result\n", "condition", "lhs", "rhs");
    for (name, lhs, rhs, pass) in rows {
        let _ = writeln!(s, "{name:<w0$}  {lhs:>w1$}  {rhs:>w2$}  {}", verdict(pass));
    }
    (s, report.rank_verdict(), report.projector_verdict())
}

fn cmd_check(kind: Kind, out: &mut dyn Write) -> Run {
    let common = kind_common(&kind);
    let tol = tolerance(common)?;
    let (problem, _) = Problem::from_kind(&kind)?;
    let report = match &problem {
        Problem::System { a, b, c, d, .. } => crate::solver::rank_report(a, b, c, d, &tol)?,
        _ => problem
            .solve(&tol)?
            .rank_report
            .ok_or_else(|| Failure("no condition report for this equation".into()))?,
    };
    let (mut text, rank, projector) = table(&report);
    let _ = writeln!(
        text,
        "verdict: {} (rank conditions {}, projector conditions {})",
        if rank && projector { "solvable" } else { "unsolvable" },
        verdict(rank),
        verdict(projector)
    );
    emit(common, &text, out)?;
    if rank != projector {
        return Err(Failure(
            "projector and rank conditions disagree; the tolerances are inconsistent for this input".into(),
        ));
    }
    Ok(if rank { EXIT_OK } else { EXIT_NEGATIVE })
}

fn cmd_verify(args: VerifyArgs, out: &mut dyn Write) -> Run {
    let tol = tolerance(&args.common)?;
    let (problem, _) = Problem::from_files(&args.files, Mode::Both, args.eta)?;
    let x = load(&args.x)?;
    let mut lines = Vec::new();
    let mut ok = true;
    let mut measure = |name: &str, residual: f64, scale: f64| {
        let threshold = tol.threshold(scale);
        let pass = residual <= threshold;
        ok &= pass;
        lines.push(format!("{name} residual {residual:.6e} threshold {threshold:.3e} {}", verdict(pass)));
    };
    let ax_b = |a: &DualQuatMatrix, b: &DualQuatMatrix| -> crate::Result<(f64, f64)> {
        Ok((a.matmul(&x)?.try_sub(b)?.norm(), a.norm() * x.norm() + b.norm()))
    };
    let xc_d = |c: &DualQuatMatrix, d: &DualQuatMatrix| -> crate::Result<(f64, f64)> {
        Ok((x.matmul(c)?.try_sub(d)?.norm(), x.norm() * c.norm() + d.norm()))
    };
    match &problem {
        Problem::System { a, b, c, d, .. } => {
            let (r, s) = ax_b(a, b)?;
            measure("AX-B", r, s);
            let (r, s) = xc_d(c, d)?;
            measure("XC-D", r, s);
        }
        Problem::AxB { a, b, eta } => {
            let (r, s) = ax_b(a, b)?;
            measure("AX-B", r, s);
            if let Some(eta) = eta {
                let r = x.eta_hermitian_residual(*eta)?;
                measure(&format!("X-X^{{{eta}*}}"), r, x.norm());
            }
        }
        Problem::XcD { c, d } => {
            let (r, s) = xc_d(c, d)?;
            measure("XC-D", r, s);
        }
    }
    lines.push(format!("verdict: {}", if ok { "verified" } else { "residual above tolerance" }));
    let mut text = lines.join("\n");
    text.push('\n');
    emit(&args.common, &text, out)?;
    Ok(if ok { EXIT_OK } else { EXIT_NEGATIVE })
}
