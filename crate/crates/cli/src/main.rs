//! `pathsum-equiv`: command-line front end.
//!
//! Exit codes: 0 equivalent (per phase policy), 1 not equivalent,
//! 2 unknown, 3 timeout, 4 usage or parse error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand, ValueEnum};
use log::info;
use pathsum_equiv::checker::Timings;
use pathsum_equiv::counter::CountError;
use pathsum_equiv::gen::{generate, inject_fault, Family};
use pathsum_equiv::reduce::{reduce_fixpoint, ReduceBudget};
use pathsum_equiv::wcnf::{export_wcnf, parse_wcnf};
use pathsum_equiv::{
    check_equivalence, count, dagger, decompose, encode, parse_qasm, to_qasm, BackendChoice,
    CheckConfig, Circuit, ComplexWeight, CountOptions, Mode, PathSum, PhasePolicy, Status,
};

const EXIT_EQUIVALENT: u8 = 0;
const EXIT_NOT_EQUIVALENT: u8 = 1;
const EXIT_UNKNOWN: u8 = 2;
const EXIT_TIMEOUT: u8 = 3;
const EXIT_USAGE: u8 = 4;

#[derive(Parser)]
#[command(
    name = "pathsum-equiv",
    version,
    about = "Quantum circuit equivalence checking with path sums"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Rr,
    Wmc,
    Hybrid,
}

#[derive(Clone, Copy, ValueEnum)]
enum PhaseArg {
    Exact,
    GlobalPhase,
}

#[derive(Clone, Copy, ValueEnum)]
enum BackendArg {
    Auto,
    Exact,
    Float,
}

#[derive(clap::Args)]
struct Pipeline {
    /// Checking mode.
    #[arg(long, value_enum, default_value = "hybrid")]
    mode: ModeArg,
    /// Whether a global phase difference is tolerated.
    #[arg(long, value_enum, default_value = "global-phase")]
    phase: PhaseArg,
    /// Time limit in seconds.
    #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u64).range(1..))]
    timeout: u64,
    /// Numeric backend for model counting.
    #[arg(long, value_enum, default_value = "auto")]
    backend: BackendArg,
}

#[derive(Subcommand)]
enum Command {
    /// Check two OpenQASM 2.0 circuits for equivalence.
    Check {
        a: PathBuf,
        b: PathBuf,
        #[command(flatten)]
        pipeline: Pipeline,
        /// Print the verdict as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Write the weighted CNF instance of a circuit pair's miter.
    Export {
        a: PathBuf,
        b: PathBuf,
        out: PathBuf,
        #[command(flatten)]
        pipeline: Pipeline,
    },
    /// Count a weighted CNF file.
    Count {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "auto")]
        backend: BackendArg,
        #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u64).range(1..))]
        timeout: u64,
    },
    /// Print a benchmark circuit as OpenQASM 2.0.
    Gen {
        /// ghz, qft, graphstate or wstate-like.
        family: String,
        #[arg(value_parser = clap::value_parser!(usize))]
        size: usize,
        /// Insert one seeded Rz fault.
        #[arg(long)]
        fault_seed: Option<u64>,
        /// Emit the variant with reordered commuting gates.
        #[arg(long)]
        commuted: bool,
    },
}

impl Pipeline {
    fn config(&self) -> CheckConfig {
        CheckConfig {
            mode: match self.mode {
                ModeArg::Rr => Mode::Rr,
                ModeArg::Wmc => Mode::Wmc,
                ModeArg::Hybrid => Mode::Hybrid,
            },
            phase_policy: match self.phase {
                PhaseArg::Exact => PhasePolicy::Exact,
                PhaseArg::GlobalPhase => PhasePolicy::UpToGlobalPhase,
            },
            backend: backend(self.backend),
            timeout: Some(Duration::from_secs(self.timeout)),
            max_reduction_steps: None,
        }
    }
}

fn backend(b: BackendArg) -> BackendChoice {
    match b {
        BackendArg::Auto => BackendChoice::Auto,
        BackendArg::Exact => BackendChoice::Exact,
        BackendArg::Float => BackendChoice::Float,
    }
}

/// An error reported on stderr with the given exit code.
struct Failure(u8, String);

fn usage<E: std::fmt::Display>(e: E) -> Failure {
    Failure(EXIT_USAGE, e.to_string())
}

fn read_circuit(path: &Path) -> Result<Circuit, Failure> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    parse_qasm(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn read_pair(a: &Path, b: &Path) -> Result<(Circuit, Circuit), Failure> {
    let (ca, cb) = (read_circuit(a)?, read_circuit(b)?);
    if ca.n != cb.n {
        return Err(usage(format!(
            "circuits act on different qubit counts ({} and {})",
            ca.n, cb.n
        )));
    }
    Ok((ca, cb))
}

/// Names the root of unity `w` used in exact renderings.
fn generator(ring_size: usize) -> String {
    format!("w = e^(i*pi/{ring_size})")
}

fn status_code(s: &Status) -> u8 {
    match s {
        Status::Equivalent | Status::EquivalentUpToGlobalPhase(_) => EXIT_EQUIVALENT,
        Status::NotEquivalent => EXIT_NOT_EQUIVALENT,
        Status::Unknown => EXIT_UNKNOWN,
        Status::Timeout => EXIT_TIMEOUT,
    }
}

fn cmd_check(a: &Path, b: &Path, pipeline: &Pipeline, json: bool) -> Result<u8, Failure> {
    let t = Instant::now();
    let (ca, cb) = read_pair(a, b)?;
    let parse_ms = t.elapsed().as_secs_f64() * 1e3;
    let mut verdict = check_equivalence(&ca, &cb, &pipeline.config()).map_err(usage)?;
    verdict.timings = Timings {
        parse: parse_ms,
        ..verdict.timings
    };
    if json {
        let text = serde_json::to_string_pretty(&verdict.report()).map_err(usage)?;
        println!("{text}");
    } else {
        println!("{}", verdict.status);
        println!(
            "mode {}, n = {}, path variables {} -> {} ({} reduction steps)",
            verdict.mode,
            verdict.n,
            verdict.m_before_reduction,
            verdict.m_after_reduction,
            verdict.trace.steps.len()
        );
        if let Some(d) = &verdict.diag_sum {
            let c = d.to_complex();
            match (d.render_exact(), &d.count) {
                (Some(e), ComplexWeight::Cyclotomic(z)) => println!(
                    "diagonal sum {e} ({} + {}i), {}",
                    c.re,
                    c.im,
                    generator(z.size())
                ),
                _ => println!("diagonal sum {} + {}i", c.re, c.im),
            }
        }
        for w in &verdict.warnings {
            eprintln!("warning: {w}");
        }
    }
    Ok(status_code(&verdict.status))
}

fn cmd_export(a: &Path, b: &Path, out: &Path, pipeline: &Pipeline) -> Result<u8, Failure> {
    let (ca, cb) = read_pair(a, b)?;
    let cfg = pipeline.config();
    let miter = decompose(&ca.concat(&dagger(&cb)).map_err(usage)?);
    let mut ps = PathSum::build(&miter).map_err(usage)?;
    if cfg.mode != Mode::Wmc {
        let trace = reduce_fixpoint(
            &mut ps,
            ReduceBudget {
                max_steps: None,
                deadline: cfg.timeout.map(|t| Instant::now() + t),
            },
        );
        info!("{} reduction steps before export", trace.steps.len());
    }
    let inst = encode(&ps);
    let mut file = fs::File::create(out).map_err(|e| usage(format!("{}: {e}", out.display())))?;
    export_wcnf(&inst, &mut file).map_err(|e| usage(format!("{}: {e}", out.display())))?;
    println!(
        "wrote {} variables, {} clauses to {}",
        inst.var_count,
        inst.clauses.len(),
        out.display()
    );
    Ok(EXIT_EQUIVALENT)
}

fn cmd_count(file: &Path, backend_arg: BackendArg, timeout: u64) -> Result<u8, Failure> {
    let text = fs::read_to_string(file).map_err(|e| usage(format!("{}: {e}", file.display())))?;
    let inst = parse_wcnf(&text).map_err(|e| usage(format!("{}: {e}", file.display())))?;
    let opts = CountOptions {
        backend: backend(backend_arg),
        deadline: Some(Instant::now() + Duration::from_secs(timeout)),
        use_cache: true,
    };
    match count(&inst, opts) {
        Ok(r) => {
            let c = r.raw.to_complex();
            match &r.raw {
                ComplexWeight::Cyclotomic(z) => {
                    println!("count {z} ({} + {}i), {}", c.re, c.im, generator(z.size()))
                }
                ComplexWeight::FloatC(_) => println!("count {} + {}i", c.re, c.im),
            }
            if !inst.phase_offset.is_zero() {
                let v = r.value.to_complex();
                println!("with offset {}: {} + {}i", inst.phase_offset, v.re, v.im);
            }
            Ok(EXIT_EQUIVALENT)
        }
        Err(CountError::Timeout(stats)) => Err(Failure(
            EXIT_TIMEOUT,
            format!("timed out after {} decisions", stats.decisions),
        )),
        Err(e) => Err(usage(e)),
    }
}

fn cmd_gen(
    family: &str,
    size: usize,
    fault_seed: Option<u64>,
    commuted: bool,
) -> Result<u8, Failure> {
    let family: Family = family.parse().map_err(usage)?;
    let mut c = generate(family, size, commuted).map_err(usage)?;
    if let Some(seed) = fault_seed {
        c = inject_fault(&c, seed);
    }
    print!("{}", to_qasm(&c));
    Ok(EXIT_EQUIVALENT)
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Check {
            a,
            b,
            pipeline,
            json,
        } => cmd_check(&a, &b, &pipeline, json),
        Command::Export {
            a,
            b,
            out,
            pipeline,
        } => cmd_export(&a, &b, &out, &pipeline),
        Command::Count {
            file,
            backend,
            timeout,
        } => cmd_count(&file, backend, timeout),
        Command::Gen {
            family,
            size,
            fault_seed,
            commuted,
        } => cmd_gen(&family, size, fault_seed, commuted),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("PSE_LOG")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_EQUIVALENT
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
