//! Command-line front end.
//!
//! Pattern files are an optional `p d` header followed by `p` lines of
//! `d` characters from `{+, -}`. Exit codes: 0 success, 1 verification
//! failure, 2 input error, 3 resource guard or overflow.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use tropcone::cyclic::{rays_to_json, SignedCyclicSpec};
use tropcone::search::{self, SearchMode, SearchOptions, TableMode};
use tropcone::verify::{self, Suite};
use tropcone::{bounds, deform, paths, Error, SignPattern};

#[derive(Parser)]
#[command(
    name = "tropcone",
    about = "Extreme rays of polars of signed cyclic tropical cones",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Count tropically allowed and allowed lattice paths of a pattern.
    Count(CountArgs),
    /// Enumerate the extreme rays of the polar of a signed cyclic cone.
    Enumerate(EnumerateArgs),
    /// Emit the lower/upper bound table over a range of shapes.
    Table(TableArgs),
    /// Maximize the path count over all sign patterns of one shape.
    Search(SearchArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
    /// Check the exponential deformation bridge on a pattern's rays.
    DeformCheck(DeformArgs),
}

#[derive(Args)]
struct CountArgs {
    /// Pattern file.
    file: PathBuf,
    /// Emit JSON instead of plain text.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct EnumerateArgs {
    /// Pattern file.
    file: PathBuf,
    /// Generator parameters t_1 < ... < t_p (default 0 1 2 ...).
    #[arg(long, num_args = 1.., allow_negative_numbers = true)]
    t: Option<Vec<i64>>,
    /// Also print an ASCII picture of each ray's lattice path.
    #[arg(long)]
    art: bool,
    /// Cross-check against the brute-force index-pair oracle.
    #[arg(long)]
    oracle: bool,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum TableModeArg {
    Exhaustive,
    FormulaOnly,
    Random,
}

#[derive(Args)]
struct TableArgs {
    /// Largest p (rows start at --p-min).
    #[arg(long)]
    p_max: usize,
    /// Largest d.
    #[arg(long)]
    d_max: usize,
    #[arg(long, default_value_t = 1)]
    p_min: usize,
    #[arg(long, default_value_t = 3)]
    d_min: usize,
    #[arg(long, value_enum, default_value_t = TableModeArg::Exhaustive)]
    mode: TableModeArg,
    /// Sample count per cell in random mode.
    #[arg(long, default_value_t = 10_000)]
    random: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads for the per-cell searches.
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long)]
    p: usize,
    #[arg(long)]
    d: usize,
    /// Scan all 2^{p d} patterns (the default).
    #[arg(long, conflicts_with = "random")]
    exhaustive: bool,
    /// Sample this many random patterns instead.
    #[arg(long)]
    random: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    threads: Option<usize>,
    /// Keep up to this many argmax witnesses.
    #[arg(long, default_value_t = 4)]
    witnesses: usize,
    /// Disable the 180-degree symmetry pruning.
    #[arg(long)]
    no_symmetry: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// One of: semiring, cramer, oracle, gale, bounds, deform, all.
    suite: String,
}

#[derive(Args)]
struct DeformArgs {
    /// Pattern file.
    file: PathBuf,
    #[arg(long, num_args = 1.., allow_negative_numbers = true)]
    t: Option<Vec<i64>>,
    /// Deformation parameters to test.
    #[arg(long, num_args = 1.., default_values_t = [1.0, 4.0, 16.0])]
    beta: Vec<f64>,
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Overflow | Error::GuardExceeded { .. } => 3,
        _ => 2,
    }
}

fn load_pattern(path: &PathBuf) -> Result<SignPattern, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))?;
    SignPattern::parse(&text)
}

fn build_spec(pattern: SignPattern, t: Option<Vec<i64>>) -> Result<SignedCyclicSpec, Error> {
    match t {
        Some(t) => SignedCyclicSpec::new(pattern, t),
        None => Ok(SignedCyclicSpec::with_default_t(pattern)),
    }
}

fn cmd_count(args: &CountArgs) -> Result<u8, Error> {
    let pattern = load_pattern(&args.file)?;
    let ntrop = paths::count_tropical_paths(&pattern)?;
    let nclass = paths::count_allowed_paths(&pattern)?;
    if args.json {
        println!(
            "{}",
            serde_json::json!({ "ntrop": ntrop, "nclass": nclass })
        );
    } else {
        println!("ntrop {ntrop}");
        println!("nclass {nclass}");
    }
    Ok(0)
}

fn cmd_enumerate(args: &EnumerateArgs) -> Result<u8, Error> {
    let pattern = load_pattern(&args.file)?;
    let spec = build_spec(pattern, args.t.clone())?;
    let rays = spec.enumerate_extreme_rays()?;
    if args.art {
        for er in &rays {
            println!("# ray {}", er.ray);
            print!("{}", er.path.render(spec.pattern())?);
        }
    }
    println!(
        "{}",
        serde_json::to_string_pretty(&rays_to_json(&rays)).unwrap()
    );
    if args.oracle {
        let mut by_paths: Vec<_> = rays.iter().map(|er| er.ray.canonicalized()).collect();
        by_paths.sort();
        let by_oracle = spec.oracle_extreme_rays()?;
        if by_paths == by_oracle {
            println!("oracle MATCH ({} rays)", by_oracle.len());
        } else {
            println!(
                "oracle MISMATCH ({} path rays vs {} oracle rays)",
                by_paths.len(),
                by_oracle.len()
            );
            return Ok(1);
        }
    }
    Ok(0)
}

fn cmd_table(args: &TableArgs) -> Result<u8, Error> {
    if args.p_min > args.p_max || args.d_min > args.d_max {
        return Err(Error::InvalidArgument("empty table range".into()));
    }
    let mode = match args.mode {
        TableModeArg::Exhaustive => TableMode::Exhaustive,
        TableModeArg::FormulaOnly => TableMode::FormulaOnly,
        TableModeArg::Random => TableMode::Random {
            samples: args.random,
            seed: args.seed,
        },
    };
    let opts = SearchOptions {
        threads: args.threads,
        ..SearchOptions::default()
    };
    let cells = search::emit_table(
        args.p_min..=args.p_max,
        args.d_min..=args.d_max,
        mode,
        &opts,
    )?;
    if args.json {
        println!(
            "{}",
            serde_json::to_string_pretty(&search::table_to_json(&cells)).unwrap()
        );
    } else {
        print!("{}", search::table_to_tsv(&cells));
    }
    Ok(0)
}

fn cmd_search(args: &SearchArgs) -> Result<u8, Error> {
    let mode = match args.random {
        Some(samples) => SearchMode::Random {
            samples,
            seed: args.seed,
        },
        None => SearchMode::Exhaustive,
    };
    let opts = SearchOptions {
        mode,
        witness_cap: args.witnesses,
        use_symmetry: !args.no_symmetry,
        threads: args.threads,
        ..SearchOptions::default()
    };
    let result = search::max_ntrop(args.p, args.d, &opts)?;
    let upper = bounds::mcmullen_u((args.p + args.d) as u64, (args.d - 1) as u64)?;
    eprintln!(
        "scanned {} patterns in {:.3}s ({})",
        result.patterns_scanned,
        result.elapsed.as_secs_f64(),
        if result.exhaustive {
            "exhaustive"
        } else {
            "random sample"
        }
    );
    let cell = |witness| search::TableCell {
        p: args.p,
        d: args.d,
        lower: Some(result.max_count),
        upper,
        exact: result.max_count as u128 == upper,
        witness,
    };
    let cells: Vec<_> = if result.witnesses.is_empty() {
        vec![cell(None)]
    } else {
        result.witnesses.iter().map(|&w| cell(Some(w))).collect()
    };
    print!("{}", search::table_to_tsv(&cells));
    Ok(0)
}

fn cmd_verify(args: &VerifyArgs) -> Result<u8, Error> {
    let suite: Suite = args.suite.parse()?;
    let reports = verify::run_suite(suite);
    let mut failed = 0;
    for report in &reports {
        let status = if report.passed { "PASS" } else { "FAIL" };
        println!(
            "{status} {} [{} ms] {}",
            report.name,
            report.elapsed.as_millis(),
            report.detail
        );
        if !report.passed {
            failed += 1;
        }
    }
    println!("{} checks, {} failed", reports.len(), failed);
    Ok(if failed > 0 { 1 } else { 0 })
}

fn cmd_deform_check(args: &DeformArgs) -> Result<u8, Error> {
    for &beta in &args.beta {
        if beta.is_nan() || beta <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "beta must be positive, got {beta}"
            )));
        }
    }
    let pattern = load_pattern(&args.file)?;
    let spec = build_spec(pattern, args.t.clone())?;
    let polar = spec.build_polar()?;
    let rays = spec.enumerate_extreme_rays()?;
    let mut violations = 0;
    for er in &rays {
        for &beta in &args.beta {
            let ok = deform::deformed_member(&polar, &er.ray, beta)?;
            let sandwich = deform::lse_sandwich_check(&er.ray.to_f64(), beta);
            if ok && sandwich {
                println!("OK ray {} beta {beta}", er.ray);
            } else {
                println!("VIOLATION ray {} beta {beta}", er.ray);
                violations += 1;
            }
        }
    }
    println!(
        "{} rays, {} betas, {} violations",
        rays.len(),
        args.beta.len(),
        violations
    );
    Ok(if violations > 0 { 1 } else { 0 })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Count(args) => cmd_count(args),
        Command::Enumerate(args) => cmd_enumerate(args),
        Command::Table(args) => cmd_table(args),
        Command::Search(args) => cmd_search(args),
        Command::Verify(args) => cmd_verify(args),
        Command::DeformCheck(args) => cmd_deform_check(args),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}
