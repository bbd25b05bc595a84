//! `commaseq`: generate comma sequences, prove bases finite, and emit the
//! escape-count and survival data sets.
//!
//! Exit codes: 0 success (and "finite" for verify), 1 usage or I/O error,
//! 2 verification found the base not finite, 3 internal cross-check failure.

use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;

use commaseq::analysis::{
    d_direct_series, d_divisor, d_gf, model_curves, survival_stats, write_dseries_csv,
    write_survival_csv, DSeries,
};
use commaseq::basekit::{power_period, to_digits, Radix};
use commaseq::graph::{big_l, period_multiset};
use commaseq::seq::comma_terms;
use commaseq::verifier::{
    path_stats, verify_base, CacheMode, ShardRequest, VerifyOptions, VerifyOutcome,
};

const EXIT_OK: u8 = 0;
const EXIT_USAGE: u8 = 1;
const EXIT_NOT_FINITE: u8 = 2;
const EXIT_CROSS_CHECK: u8 = 3;

#[derive(Parser)]
#[command(name = "commaseq", version, about = "Generalized comma sequences: generation, verification, statistics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the comma sequence from a starting value.
    Gen(GenArgs),
    /// Prove all comma sequences in a base finite (exit 2 if not).
    Verify(VerifyArgs),
    /// Print L(b) and the distribution of cycle periods behind it.
    Lb(LbArgs),
    /// Escape counts D(b) by several methods, as CSV (exit 3 on disagreement).
    Dvalues(DvaluesArgs),
    /// Danger-interval survival statistics per base, as CSV.
    Survival(SurvivalArgs),
    /// Path-length statistics of the reduced digraph, as JSON.
    Paths(PathsArgs),
    /// Pre-period and period of b^k modulo m.
    Period(PeriodArgs),
    /// List landmines (values with no successor) up to a bound.
    Mines(MinesArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Plain,
    Json,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_parser = clap::value_parser!(u32).range(3..=1024))]
    base: u32,
    /// Initial value (decimal).
    #[arg(long)]
    start: BigUint,
    /// Stop after this many terms.
    #[arg(long)]
    limit: Option<u64>,
    /// Print terms as base-b digit strings (0-9a-z, so base <= 36).
    #[arg(long)]
    radix_output: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_parser = clap::value_parser!(u32).range(3..=128))]
    base: u32,
    /// Worker threads (0 = all cores).
    #[arg(long, env = "COMMA_WORKERS", default_value_t = 0)]
    workers: usize,
    /// Step-result cache: off, per-worker, or shared.
    #[arg(long, default_value = "per-worker")]
    cache: CacheMode,
    /// Record completed shards here; an existing file resumes the run.
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    /// Restrict to shards `D:LO..HI` (κ-range, upper bound exclusive);
    /// repeatable. Meant for spreading one base across machines.
    #[arg(long = "shard")]
    shards: Vec<String>,
    /// Stop after this many pending shards.
    #[arg(long)]
    shard_limit: Option<usize>,
    /// κ-slots per auto-generated shard.
    #[arg(long, default_value_t = 1 << 16)]
    chunk: u64,
}

#[derive(Args)]
struct LbArgs {
    #[arg(long, value_parser = clap::value_parser!(u32).range(3..=1024))]
    base: u32,
    #[arg(long, value_enum, default_value_t = Format::Plain)]
    format: Format,
}

#[derive(Args)]
struct DvaluesArgs {
    #[arg(long, value_parser = clap::value_parser!(u32).range(2..=2048))]
    max_base: u32,
    /// Comma-separated subset of direct,gf,divisor.
    #[arg(long, default_value = "direct,gf,divisor")]
    method: String,
    /// Danger-interval scale used by the direct method.
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(3..=12))]
    k: u32,
    /// Write the CSV here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SurvivalArgs {
    /// Single base.
    #[arg(long, conflicts_with = "bases")]
    base: Option<u32>,
    /// Inclusive base range, e.g. 5..14.
    #[arg(long)]
    bases: Option<String>,
    /// Per-start term guard; 0 disables the guard.
    #[arg(long, default_value_t = 10_000_000)]
    guard: u64,
    /// Write the CSV here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also print the two model curves for the range.
    #[arg(long)]
    curves: bool,
}

#[derive(Args)]
struct PathsArgs {
    #[arg(long, value_parser = clap::value_parser!(u32).range(3..=128))]
    base: u32,
    /// Paths to sample; omit to walk every start (feasible for small L(b)).
    #[arg(long)]
    sample: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Count the in-degree-0 start vertices in |V|.
    #[arg(long)]
    include_starts: bool,
}

#[derive(Args)]
struct PeriodArgs {
    #[arg(long, value_parser = clap::value_parser!(u32).range(2..=1024))]
    base: u32,
    #[arg(long = "mod")]
    modulus: u64,
}

#[derive(Args)]
struct MinesArgs {
    #[arg(long, value_parser = clap::value_parser!(u32).range(3..=1024))]
    base: u32,
    /// Largest value to list.
    #[arg(long)]
    max: u64,
    #[arg(long)]
    radix_output: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn run(cli: Cli) -> Result<u8, Box<dyn std::error::Error>> {
    match cli.command {
        Command::Gen(args) => cmd_gen(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Lb(args) => cmd_lb(args),
        Command::Dvalues(args) => cmd_dvalues(args),
        Command::Survival(args) => cmd_survival(args),
        Command::Paths(args) => cmd_paths(args),
        Command::Period(args) => cmd_period(args),
        Command::Mines(args) => cmd_mines(args),
    }
}

/// Insert thousands separators; plain output only, and only from 10^6 up.
fn plain_number(digits: &str) -> String {
    if digits.len() < 7 {
        return digits.to_string();
    }
    let mut out = String::with_capacity(digits.len() + digits.len() / 3);
    for (i, c) in digits.chars().enumerate() {
        if i > 0 && (digits.len() - i).is_multiple_of(3) {
            out.push(',');
        }
        out.push(c);
    }
    out
}

fn radix_string(v: &BigUint, b: Radix) -> String {
    to_digits(v, b)
        .into_iter()
        .map(|d| char::from_digit(d, 36).expect("base <= 36"))
        .collect()
}

fn cmd_gen(args: GenArgs) -> Result<u8, Box<dyn std::error::Error>> {
    if args.start == BigUint::from(0u32) {
        return Err("--start must be positive".into());
    }
    if args.radix_output && args.base > 36 {
        return Err("--radix-output needs base <= 36".into());
    }
    let b = Radix::new(args.base);
    let stdout = std::io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let mut length = 0u64;
    let mut last = args.start.clone();
    let mut terminated = true;
    for term in comma_terms(b, &args.start) {
        if args.limit.is_some_and(|limit| length >= limit) {
            terminated = false;
            break;
        }
        if length > 0 {
            out.write_all(b" ")?;
        }
        if args.radix_output {
            write!(out, "{}", radix_string(&term, b))?;
        } else {
            write!(out, "{}", plain_number(&term.to_string()))?;
        }
        length += 1;
        last = term;
    }
    out.write_all(b"\n")?;
    if terminated {
        writeln!(
            out,
            "terminated, length {}, last {}",
            plain_number(&length.to_string()),
            if args.radix_output {
                radix_string(&last, b)
            } else {
                plain_number(&last.to_string())
            }
        )?;
    }
    out.flush()?;
    Ok(EXIT_OK)
}

fn parse_shard(spec: &str) -> Result<ShardRequest, String> {
    let bad = || format!("bad shard spec `{spec}`; expected D:LO..HI");
    let (d, range) = spec.split_once(':').ok_or_else(bad)?;
    let (lo, hi) = range.split_once("..").ok_or_else(bad)?;
    Ok(ShardRequest {
        d: d.parse().map_err(|_| bad())?,
        kappa_lo: lo.parse().map_err(|_| bad())?,
        kappa_hi: hi.parse().map_err(|_| bad())?,
    })
}

fn cmd_verify(args: VerifyArgs) -> Result<u8, Box<dyn std::error::Error>> {
    let shards = if args.shards.is_empty() {
        None
    } else {
        Some(args.shards.iter().map(|s| parse_shard(s)).collect::<Result<Vec<_>, _>>()?)
    };
    let options = VerifyOptions {
        workers: args.workers,
        cache: args.cache,
        checkpoint: args.checkpoint,
        kappa_chunk: args.chunk,
        shards,
        shard_limit: args.shard_limit,
        safety_bound: None,
    };
    match verify_base(Radix::new(args.base), &options)? {
        VerifyOutcome::Complete(verdict) => {
            println!("{}", verdict.to_json());
            Ok(if verdict.finite { EXIT_OK } else { EXIT_NOT_FINITE })
        }
        VerifyOutcome::Partial(progress) => {
            println!("{}", serde_json::to_string(&progress)?);
            Ok(EXIT_OK)
        }
    }
}

fn cmd_lb(args: LbArgs) -> Result<u8, Box<dyn std::error::Error>> {
    let b = Radix::new(args.base);
    let l = big_l(b);
    let periods = period_multiset(b);
    let mut by_period: std::collections::BTreeMap<u64, u64> = std::collections::BTreeMap::new();
    for (_, _, p) in &periods {
        *by_period.entry(*p).or_insert(0) += 1;
    }
    match args.format {
        Format::Plain => {
            println!("L({}) = {}", args.base, plain_number(&l.to_string()));
            println!("{} (d, u) pairs, {} distinct periods", periods.len(), by_period.len());
            for (period, count) in &by_period {
                println!("  l = {period}: {count} pairs");
            }
        }
        Format::Json => {
            let json = serde_json::json!({
                "base": args.base,
                "L": l.to_string(),
                "pairs": periods.len(),
                "distinct_periods": by_period.len(),
                "period_multiset": by_period,
            });
            println!("{json}");
        }
    }
    Ok(EXIT_OK)
}

fn cmd_dvalues(args: DvaluesArgs) -> Result<u8, Box<dyn std::error::Error>> {
    let mut direct: Option<DSeries> = None;
    let mut gf: Option<DSeries> = None;
    let mut divisor: Option<DSeries> = None;
    for method in args.method.split(',') {
        match method.trim() {
            "direct" => direct = Some(d_direct_series(args.max_base, args.k)),
            "gf" => gf = Some(d_gf(args.max_base)),
            "divisor" => divisor = Some(d_divisor(args.max_base)),
            other => return Err(format!("unknown method `{other}`").into()),
        }
    }
    if direct.is_none() && gf.is_none() && divisor.is_none() {
        return Err("no method selected".into());
    }
    let mut buf = Vec::new();
    let agree = write_dseries_csv(
        direct.as_ref(),
        gf.as_ref(),
        divisor.as_ref(),
        args.max_base,
        &mut buf,
    )?;
    write_output(args.out.as_deref(), &buf)?;
    if agree {
        Ok(EXIT_OK)
    } else {
        eprintln!("error: escape-count methods disagree (implementation bug)");
        Ok(EXIT_CROSS_CHECK)
    }
}

fn parse_base_range(spec: &str) -> Result<(u32, u32), String> {
    let bad = || format!("bad base range `{spec}`; expected LO..HI (inclusive)");
    let (lo, hi) = spec.split_once("..").ok_or_else(bad)?;
    let lo: u32 = lo.parse().map_err(|_| bad())?;
    let hi: u32 = hi.parse().map_err(|_| bad())?;
    if lo < 3 || hi < lo {
        return Err(bad());
    }
    Ok((lo, hi))
}

fn cmd_survival(args: SurvivalArgs) -> Result<u8, Box<dyn std::error::Error>> {
    let (lo, hi) = match (args.base, args.bases.as_deref()) {
        (Some(b), None) => (b, b),
        (None, Some(spec)) => parse_base_range(spec)?,
        (None, None) => return Err("need --base or --bases".into()),
        (Some(_), Some(_)) => unreachable!("clap conflict"),
    };
    if lo < 3 {
        return Err("survival needs base >= 3".into());
    }
    let guard = (args.guard > 0).then_some(args.guard);
    let records: Vec<_> = (lo..=hi).map(|b| survival_stats(Radix::new(b), guard)).collect();
    let mut buf = Vec::new();
    write_survival_csv(&records, &mut buf)?;
    write_output(args.out.as_deref(), &buf)?;
    if args.curves {
        for (b, geometric, graph) in model_curves(lo, hi) {
            eprintln!("base {b}: 2b/ln(2b) = {geometric:.6}, b/2+1 = {graph:.6}");
        }
    }
    Ok(EXIT_OK)
}

fn cmd_paths(args: PathsArgs) -> Result<u8, Box<dyn std::error::Error>> {
    let stats = path_stats(Radix::new(args.base), args.sample, args.seed, args.include_starts)?;
    println!("{}", serde_json::to_string(&stats)?);
    Ok(EXIT_OK)
}

fn cmd_period(args: PeriodArgs) -> Result<u8, Box<dyn std::error::Error>> {
    let info = power_period(Radix::new(args.base), args.modulus)?;
    println!("k0={} l={}", info.k0, info.l);
    Ok(EXIT_OK)
}

fn cmd_mines(args: MinesArgs) -> Result<u8, Box<dyn std::error::Error>> {
    if args.radix_output && args.base > 36 {
        return Err("--radix-output needs base <= 36".into());
    }
    let b = Radix::new(args.base);
    let base = u64::from(args.base);
    let stdout = std::io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    // Landmines with t digits are b^t - b² + xb + y with x + y = b - 1 and
    // x, y >= 1; enumerate by width, ascending.
    let mut width = 2u32;
    while let Some(pow) = base.checked_pow(width) {
        let lead = pow - base * base;
        if lead + base + (base - 2) > args.max {
            break;
        }
        for x in 1..args.base - 1 {
            let y = args.base - 1 - x;
            let v = lead + base * u64::from(x) + u64::from(y);
            if v <= args.max {
                if args.radix_output {
                    writeln!(out, "{}", radix_string(&BigUint::from(v), b))?;
                } else {
                    writeln!(out, "{}", plain_number(&v.to_string()))?;
                }
            }
        }
        width += 1;
    }
    out.flush()?;
    Ok(EXIT_OK)
}

fn write_output(path: Option<&std::path::Path>, bytes: &[u8]) -> std::io::Result<()> {
    match path {
        Some(path) => std::fs::write(path, bytes),
        None => std::io::stdout().write_all(bytes),
    }
}
