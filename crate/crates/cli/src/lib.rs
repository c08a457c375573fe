//! The `lfhohh` command: check, translate and solve LF signatures.
//!
//! [`run`] takes the full argument list and returns the exit status with
//! the text for stdout and stderr, so tests can drive it without spawning
//! a process.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use lfhohh::hohh::{Head, Limits, Printer, Solution, Status, Style};
use lfhohh::lf::{parse_signature, Classifier};
use lfhohh::pipeline::{Pipeline, PipelineError};
use lfhohh::strictness::explain;
use lfhohh::translate::{emit_lambdaprolog, emit_split, Mode, QueryPlan};

/// Exit status: success or a solution was found.
pub const EXIT_OK: u8 = 0;
/// Exit status: the input was rejected or no solution exists.
pub const EXIT_FAIL: u8 = 1;
/// Exit status: bad arguments or an I/O error.
pub const EXIT_USAGE: u8 = 2;

#[derive(Parser, Debug)]
#[command(name = "lfhohh", version, about = "Check, translate and run LF signatures as hohh logic programs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Type-check a signature.
    Check { file: PathBuf },
    /// Translate a signature into a λProlog program.
    Translate(TranslateArgs),
    /// Find inhabitants of a type.
    Solve(SolveArgs),
    /// Report which binders of each constant's type are strict.
    Strictness { file: PathBuf },
}

#[derive(Args, Debug)]
struct TranslateArgs {
    file: PathBuf,
    /// Use the naive translation.
    #[arg(long, conflicts_with = "optimized")]
    naive: bool,
    /// Use the strictness-based translation (the default).
    #[arg(long)]
    optimized: bool,
    /// Keep `true =>` premises.
    #[arg(long)]
    no_simplify: bool,
    /// Write a `.sig` and a `.mod` file; needs `-o`.
    #[arg(long, requires = "out")]
    split_sig_mod: bool,
    /// Output file (stdout if absent).
    #[arg(short = 'o', long = "out")]
    out: Option<PathBuf>,
    /// Precede the clauses with comments giving each binder's strictness.
    #[arg(long)]
    explain_strictness: bool,
}

#[derive(Args, Debug)]
struct SolveArgs {
    file: PathBuf,
    /// Query type; capitalised unknown identifiers are existential variables.
    query: String,
    /// Largest number of backchaining steps per derivation.
    #[arg(long, default_value_t = 32, value_parser = clap::value_parser!(u32).range(1..))]
    depth: u32,
    /// Number of solutions to print; 0 prints all within the depth.
    #[arg(short = 'n', default_value_t = 1)]
    n: usize,
    /// Use the naive translation.
    #[arg(long)]
    naive: bool,
}

/// Result of one invocation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { code: EXIT_OK, stdout, stderr: String::new() }
    }

    fn fail(stdout: String, stderr: String) -> Self {
        Outcome { code: EXIT_FAIL, stdout, stderr }
    }

    fn usage(stderr: String) -> Self {
        Outcome { code: EXIT_USAGE, stdout: String::new(), stderr }
    }
}

/// Runs the command line `args` (including the program name).
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() { Outcome::usage(text) } else { Outcome::ok(text) };
        }
    };
    match cli.command {
        Command::Check { file } => cmd_check(&file),
        Command::Translate(args) => cmd_translate(&args),
        Command::Solve(args) => cmd_solve(&args),
        Command::Strictness { file } => cmd_strictness(&file),
    }
}

fn read(path: &Path) -> Result<String, Outcome> {
    std::fs::read_to_string(path).map_err(|e| Outcome::usage(format!("error: cannot read {}: {e}\n", path.display())))
}

fn load(path: &Path, mode: Mode, simplify: bool) -> Result<Pipeline, Outcome> {
    let src = read(path)?;
    Pipeline::new(&src, mode, simplify).map_err(|e| Outcome::fail(String::new(), diagnostic(path, &e)))
}

fn diagnostic(path: &Path, e: &PipelineError) -> String {
    format!("{}: {e}\n", path.display())
}

fn cmd_check(file: &Path) -> Outcome {
    match load(file, Mode::Optimized, true) {
        Ok(p) => Outcome::ok(format!("{}: ok, {} declarations\n", file.display(), p.sig.len())),
        Err(o) => o,
    }
}

fn cmd_translate(args: &TranslateArgs) -> Outcome {
    let mode = if args.naive { Mode::Naive } else { Mode::Optimized };
    let p = match load(&args.file, mode, !args.no_simplify) {
        Ok(p) => p,
        Err(o) => return o,
    };
    let comments = if args.explain_strictness { strictness_report(&p.sig, "% ") } else { String::new() };
    if args.split_sig_mod {
        let out = args.out.as_ref().expect("clap enforces -o");
        let name = out.file_stem().and_then(|s| s.to_str()).unwrap_or("program").to_string();
        let (sig, module) = emit_split(&p.program, &name);
        let module = insert_comments(&module, &comments);
        let (sig_path, mod_path) = (out.with_extension("sig"), out.with_extension("mod"));
        for (path, text) in [(&sig_path, sig), (&mod_path, module)] {
            if let Err(e) = std::fs::write(path, text) {
                return Outcome::usage(format!("error: cannot write {}: {e}\n", path.display()));
            }
        }
        return Outcome::ok(format!("wrote {} and {}\n", sig_path.display(), mod_path.display()));
    }
    let text = insert_comments(&emit_lambdaprolog(&p.program), &comments);
    match &args.out {
        Some(path) => match std::fs::write(path, &text) {
            Ok(()) => Outcome::ok(String::new()),
            Err(e) => Outcome::usage(format!("error: cannot write {}: {e}\n", path.display())),
        },
        None => Outcome::ok(text),
    }
}

fn insert_comments(text: &str, comments: &str) -> String {
    if comments.is_empty() {
        text.to_string()
    } else {
        format!("{comments}\n{text}")
    }
}

fn strictness_report(sig: &lfhohh::Signature, prefix: &str) -> String {
    let mut out = String::new();
    for d in sig.iter() {
        let Classifier::Type(a) = &d.class else { continue };
        let verdicts = explain(a);
        if verdicts.is_empty() {
            continue;
        }
        writeln!(out, "{prefix}{}", d.name).unwrap();
        for v in verdicts {
            let name = if v.name == "_" { format!("#{}", v.index + 1) } else { v.name.clone() };
            match &v.derivation {
                Some(der) => writeln!(out, "{prefix}  {name}: strict by {der}").unwrap(),
                None => writeln!(out, "{prefix}  {name}: not strict").unwrap(),
            }
        }
    }
    out
}

fn cmd_strictness(file: &Path) -> Outcome {
    let src = match read(file) {
        Ok(s) => s,
        Err(o) => return o,
    };
    let sig = match parse_signature(&src) {
        Ok(sig) => sig,
        Err(e) => return Outcome::fail(String::new(), diagnostic(file, &e.into())),
    };
    if let Err(e) = lfhohh::lf::check_signature(&sig) {
        return Outcome::fail(String::new(), diagnostic(file, &e.into()));
    }
    Outcome::ok(strictness_report(&sig, ""))
}

fn cmd_solve(args: &SolveArgs) -> Outcome {
    let mode = if args.naive { Mode::Naive } else { Mode::Optimized };
    let p = match load(&args.file, mode, true) {
        Ok(p) => p,
        Err(o) => return o,
    };
    let plan = match p.query(&args.query) {
        Ok(plan) => plan,
        Err(e) => return Outcome::fail(String::new(), format!("query: {e}\n")),
    };
    let limits = Limits { max_depth: args.depth as usize };
    let mut solver = p.solver(&plan, limits);
    let mut out = String::new();
    let mut found = 0;
    while args.n == 0 || found < args.n {
        let Some(s) = solver.next() else { break };
        found += 1;
        writeln!(out, "solution {found} (cost {}):", s.cost).unwrap();
        show_solution(&p, &plan, &s, &mut out);
    }
    if found == 0 {
        let verdict = match solver.status() {
            Status::DepthExhausted if solver.suspended() > 0 => "suspended",
            Status::DepthExhausted => "depth exhausted",
            _ if solver.suspended() > 0 => "suspended",
            _ => "no",
        };
        out.push_str(verdict);
        out.push('\n');
        return Outcome::fail(out, String::new());
    }
    Outcome::ok(out)
}

fn show_solution(p: &Pipeline, plan: &QueryPlan, s: &Solution, out: &mut String) {
    match p.answer(plan, s) {
        Ok(a) => {
            for (x, m) in &a.bindings {
                writeln!(out, "  {x} = {m}").unwrap();
            }
            writeln!(out, "  {} = {}", plan.subject, a.inhabitant).unwrap();
        }
        Err(e) => {
            let names = |h: &Head| match h {
                Head::LVar(v) => s.var_name(*v),
                Head::Eigen(e) => format!("c{e}"),
                other => format!("{other:?}"),
            };
            for (x, t) in &s.bindings {
                writeln!(out, "  {x} = {}", Printer::with_free_names(Style::Math, &names).term(t)).unwrap();
            }
            writeln!(out, "  ({e})").unwrap();
        }
    }
}
