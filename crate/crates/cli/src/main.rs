use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use jackmix::chain::{build_kernel, ThetaParam};
use jackmix::experiments::{lower_bound_witness, ncycle_fk_experiment, sample_summary, tv_profile, Mode};
use jackmix::jack::jack_table;
use jackmix::rational::{fmt_rat, parse_rat};
use jackmix::sdops::{apply, OpKind, OperatorSpec};
use jackmix::symfunc::SymExpansion;
use jackmix::verify::{run_suite, Ranges};
use jackmix::{Error, Partition, Rat};
use num_traits::{One, Zero};

/// Relative output paths, and outputs with no --out, land here when set.
const OUT_DIR_VAR: &str = "JACKMIX_OUT_DIR";

#[derive(Parser)]
#[command(name = "jackmix", version, about = "Exact spectral analysis of the Metropolis random-transposition chain on partitions")]
struct Cli {
    /// Worker threads (default: number of cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Lumped transition kernel as (from, to, probability) CSV.
    Kernel {
        #[arg(long)]
        n: u32,
        #[arg(long, value_parser = parse_theta)]
        theta: Rat,
        /// Holding probability δ (default 0, or 1/n at θ = 1).
        #[arg(long, value_parser = parse_rational)]
        lazy: Option<Rat>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Jack transition coefficients c, normalized d, or norms j as JSON.
    Jack {
        #[arg(long)]
        n: u32,
        #[arg(long, value_parser = parse_theta)]
        theta: Rat,
        #[arg(long, value_enum, default_value = "c")]
        emit: Emit,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// TV and L² along t(c) = ½(θ⁻¹∨1)n(log n + c) as CSV.
    TvProfile {
        #[arg(long)]
        n: u32,
        #[arg(long, value_parser = parse_theta)]
        theta: Rat,
        #[arg(long, value_parser = parse_rational)]
        lazy: Option<Rat>,
        /// id, ncycle, or a partition such as [3,1,1].
        #[arg(long, default_value = "id")]
        start: String,
        #[arg(long, default_value_t = -6.0, allow_hyphen_values = true)]
        c_from: f64,
        #[arg(long, default_value_t = 6.0, allow_hyphen_values = true)]
        c_to: f64,
        #[arg(long, default_value_t = 0.5)]
        c_step: f64,
        #[arg(long, value_enum, default_value = "auto")]
        mode: ModeArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte Carlo per-step averages of m₁, ℓ and d_(n−1,1) as CSV.
    Sample {
        #[arg(long)]
        n: u32,
        #[arg(long, value_parser = parse_theta)]
        theta: Rat,
        #[arg(long, value_parser = parse_rational)]
        lazy: Option<Rat>,
        #[arg(long)]
        steps: u64,
        #[arg(long)]
        reps: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value = "id")]
        start: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// d-statistic lower-bound witness from the identity as JSON.
    LowerBound {
        #[arg(long)]
        n: u32,
        #[arg(long, value_parser = parse_theta)]
        theta: Rat,
        #[arg(long, allow_hyphen_values = true)]
        c: f64,
        #[arg(long)]
        reps: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Short-cycle count experiment from the n-cycle as JSON.
    Fk {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        t: u64,
        #[arg(long, value_parser = parse_theta, default_value = "1")]
        theta: Rat,
        #[arg(long, value_parser = parse_rational)]
        lazy: Option<Rat>,
        #[arg(long)]
        reps: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Apply a differential operator to a JSON expansion.
    Ops {
        #[arg(long, value_parser = parse_op)]
        op: OpKind,
        #[arg(long, value_parser = parse_theta)]
        theta: Rat,
        #[arg(long)]
        nvars: u32,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the exact invariant suite.
    Verify {
        /// Small ranges (n ≤ 6).
        #[arg(long)]
        quick: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Emit {
    C,
    D,
    J,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Float,
    Auto,
}

fn parse_rational(s: &str) -> Result<Rat, String> {
    parse_rat(s).map_err(|e| e.to_string())
}

fn parse_theta(s: &str) -> Result<Rat, String> {
    let r = parse_rational(s)?;
    if r <= Rat::zero() {
        return Err(format!("theta must be positive, got {s}"));
    }
    Ok(r)
}

fn parse_op(s: &str) -> Result<OpKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InvalidArgument(_) | Error::Parse(_) | Error::Periodic(_) => 2,
        Error::NumericInstability(_) => 3,
        Error::Invariant(_) | Error::Singular(_) => 1,
    }
}

type Res<T> = std::result::Result<T, Error>;

fn theta_param(t: &Rat) -> Res<ThetaParam> {
    ThetaParam::new(t.clone())
}

fn laziness(n: u32, theta: &Rat, lazy: Option<Rat>) -> Rat {
    lazy.unwrap_or_else(|| if theta.is_one() { Rat::new(1.into(), n.max(1).into()) } else { Rat::zero() })
}

fn resolve_start(spec: &str, n: u32) -> Res<Partition> {
    let p = match spec {
        "id" => Partition::column(n),
        "ncycle" => Partition::row(n),
        s => s.parse()?,
    };
    if p.size() != n {
        return Err(Error::InvalidArgument(format!("start {p} is not a partition of {n}")));
    }
    Ok(p)
}

fn io_err(e: io::Error) -> Error {
    Error::InvalidArgument(format!("i/o: {e}"))
}

/// Writes to --out, to the default directory, or to standard output.
fn emit(out: Option<PathBuf>, default_name: &str, bytes: &[u8]) -> Res<()> {
    let dir = std::env::var_os(OUT_DIR_VAR).map(PathBuf::from);
    let path = match (out, dir) {
        (Some(p), Some(d)) if p.is_relative() => Some(d.join(p)),
        (Some(p), _) => Some(p),
        (None, Some(d)) => Some(d.join(default_name)),
        (None, None) => None,
    };
    match path {
        Some(p) => {
            if let Some(parent) = p.parent().filter(|x| !x.as_os_str().is_empty()) {
                fs::create_dir_all(parent).map_err(io_err)?;
            }
            fs::write(&p, bytes).map_err(io_err)?;
            eprintln!("wrote {}", p.display());
        }
        None => io::stdout().write_all(bytes).map_err(io_err)?,
    }
    Ok(())
}

fn csv_bytes<F: FnOnce(&mut csv::Writer<Vec<u8>>) -> csv::Result<()>>(f: F) -> Res<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    f(&mut w).map_err(|e| Error::InvalidArgument(format!("csv: {e}")))?;
    w.into_inner().map_err(|e| Error::InvalidArgument(format!("csv: {e}")))
}

fn json_bytes<T: Serialize>(v: &T) -> Res<Vec<u8>> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| Error::InvalidArgument(format!("json: {e}")))?;
    s.push('\n');
    Ok(s.into_bytes())
}

/// Shortest round-trip decimal, in exponent form outside [1e-5, 1e16).
fn fmt_f64(x: f64) -> String {
    let a = x.abs();
    if a != 0.0 && a.is_finite() && !(1e-5..1e16).contains(&a) {
        format!("{x:e}")
    } else {
        x.to_string()
    }
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

fn run(cmd: Command) -> Res<ExitCode> {
    match cmd {
        Command::Kernel { n, theta, lazy, out } => {
            let d = laziness(n, &theta, lazy);
            let k = build_kernel(n, &theta_param(&theta)?, &d)?;
            let bytes = csv_bytes(|w| {
                w.write_record(["from", "to", "probability"])?;
                for (i, row) in k.rows().iter().enumerate() {
                    for (j, p) in row {
                        let from = k.partitions().get(i).to_string();
                        let to = k.partitions().get(*j).to_string();
                        w.write_record([from, to, fmt_rat(p)])?;
                    }
                }
                Ok(())
            })?;
            emit(out, "kernel.csv", &bytes)?;
        }
        Command::Jack { n, theta, emit: kind, out } => {
            let table = jack_table(n, &theta)?;
            let tag = match kind {
                Emit::C => "c",
                Emit::D => "d",
                Emit::J => "j",
            };
            emit(out, "jack.json", &json_bytes(&table.to_json(tag)?)?)?;
        }
        Command::TvProfile { n, theta, lazy, start, c_from, c_to, c_step, mode, out } => {
            if !(c_step > 0.0) || !(c_to >= c_from) {
                return Err(Error::InvalidArgument("need c-step > 0 and c-to ≥ c-from".into()));
            }
            let d = laziness(n, &theta, lazy);
            let start = resolve_start(&start, n)?;
            let steps = ((c_to - c_from) / c_step + 1e-9).floor() as usize;
            let cs: Vec<f64> = (0..=steps).map(|i| c_from + i as f64 * c_step).collect();
            let mode = match mode {
                ModeArg::Exact => Mode::Exact,
                ModeArg::Float => Mode::Float,
                ModeArg::Auto => Mode::Auto,
            };
            let (source, rows) = tv_profile(n, &theta_param(&theta)?, &d, &start, &cs, mode)?;
            eprintln!("tv column: {source:?}");
            let bytes = csv_bytes(|w| {
                w.write_record(["c", "t", "tv", "l2_bound"])?;
                for r in &rows {
                    w.write_record([fmt_f64(r.c), r.t.to_string(), fmt_f64(r.tv), fmt_opt(r.l2_bound)])?;
                }
                Ok(())
            })?;
            emit(out, "tv_profile.csv", &bytes)?;
        }
        Command::Sample { n, theta, lazy, steps, reps, seed, start, out } => {
            let d = laziness(n, &theta, lazy);
            let start = resolve_start(&start, n)?;
            let rows = sample_summary(&start, steps, &theta_param(&theta)?, &d, reps, seed)?;
            let bytes = csv_bytes(|w| {
                w.write_record(["step", "mean_m1", "mean_cycles", "mean_d1", "sd_d1"])?;
                for r in &rows {
                    w.write_record([
                        r.step.to_string(),
                        fmt_f64(r.mean_fixed),
                        fmt_f64(r.mean_cycles),
                        fmt_f64(r.mean_d1),
                        fmt_f64(r.sd_d1),
                    ])?;
                }
                Ok(())
            })?;
            emit(out, "sample.csv", &bytes)?;
        }
        Command::LowerBound { n, theta, c, reps, seed, out } => {
            let report = lower_bound_witness(n, &theta_param(&theta)?, c, reps, seed)?;
            emit(out, "lower_bound.json", &json_bytes(&report)?)?;
        }
        Command::Fk { n, k, t, theta, lazy, reps, seed, out } => {
            let d = laziness(n, &theta, lazy);
            let report = ncycle_fk_experiment(n, k, t, &theta_param(&theta)?, &d, reps, seed)?;
            emit(out, "fk.json", &json_bytes(&report)?)?;
        }
        Command::Ops { op, theta, nvars, input, out } => {
            let text = fs::read_to_string(&input).map_err(io_err)?;
            let value: serde_json::Value =
                serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", input.display())))?;
            let f = SymExpansion::from_json(&value)?;
            let img = apply(&OperatorSpec::new(op, theta, nvars)?, &f)?;
            emit(out, "ops.json", &json_bytes(&img.to_json())?)?;
        }
        Command::Verify { quick } => {
            let ranges = if quick { Ranges::quick() } else { Ranges::full() };
            let results = run_suite(&ranges);
            let mut code = 0u8;
            let mut lines = String::new();
            for r in &results {
                match &r.outcome {
                    Ok(()) => lines.push_str(&format!("PASS {}: {}\n", r.module, r.name)),
                    Err(e) => {
                        lines.push_str(&format!("FAIL {}: {}: {e}\n", r.module, r.name));
                        code = code.max(exit_code(e).max(1));
                    }
                }
            }
            let failed = results.iter().filter(|r| !r.passed()).count();
            lines.push_str(&format!("{} checks, {failed} failed\n", results.len()));
            io::stdout().write_all(lines.as_bytes()).map_err(io_err)?;
            if code == 2 {
                code = 1;
            }
            return Ok(ExitCode::from(code));
        }
    }
    Ok(ExitCode::SUCCESS)
}
