use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use quotring::bench::{BenchConfig, BenchRow, Distribution};
use quotring::io::{self, PseudoMatrixFile, RingSpec};
use quotring::pseudo::{self, PseudoHnfOptions};
use quotring::selftest::{self, Suite};
use quotring::Error;

/// Exit codes: 0 ok, 2 parse error, 3 rank deficiency, 4 sampling budget
/// exhausted, 5 verification failure, 1 anything else.
fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Parse(_) | Error::InvalidInput(_) | Error::NotARing(_) => 2,
        Error::RankDeficient => 3,
        Error::SamplingBudgetExhausted => 4,
        Error::VerifyFailed => 5,
        _ => 1,
    }
}

#[derive(Parser)]
#[command(
    name = "quotring",
    version,
    about = "Pseudo-HNF over rings of integers via Euclidean quotient rings"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a pseudo-HNF of a pseudomatrix file.
    Hnf(HnfArgs),
    /// Run the randomized benchmark and emit CSV rows.
    Bench(BenchArgs),
    /// Run the built-in verification suites.
    Selftest(SelftestArgs),
}

#[derive(Args)]
struct HnfArgs {
    /// Input pseudomatrix (JSON).
    #[arg(long)]
    input: PathBuf,
    /// Ring preset name or JSON file; overrides the ring in the input file.
    #[arg(long)]
    ring: Option<String>,
    /// "auto" (default) or a JSON file with an ideal literal.
    #[arg(long, default_value = "auto")]
    modulus: String,
    /// Toggle the Z-split fast path.
    #[arg(long, default_value = "on", value_parser = parse_toggle, action = clap::ArgAction::Set)]
    zsplit: bool,
    /// PRNG seed; defaults to $QUOTRING_SEED or 0.
    #[arg(long)]
    seed: Option<u64>,
    /// Re-verify the result against the span lattice oracle.
    #[arg(long)]
    verify: bool,
    /// Output file; stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Ring preset (Z, Zi, Zsqrt10).
    #[arg(long, default_value = "Zsqrt10")]
    ring: String,
    /// Comma-separated dimensions.
    #[arg(long, default_value = "10,20,30")]
    dims: String,
    /// Comma-separated coefficient bit sizes.
    #[arg(long, default_value = "10,100")]
    bits: String,
    /// Comma-separated distributions (uniform, normal).
    #[arg(long, default_value = "uniform,normal")]
    dist: String,
    /// Trials per configuration.
    #[arg(long, default_value_t = 1)]
    trials: u32,
    /// PRNG seed; defaults to $QUOTRING_SEED or 0.
    #[arg(long)]
    seed: Option<u64>,
    /// Toggle the Z-split fast path.
    #[arg(long, default_value = "on", value_parser = parse_toggle, action = clap::ArgAction::Set)]
    zsplit: bool,
    /// Output CSV file; stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SelftestArgs {
    /// quick (skips statistical suites) or full.
    #[arg(long, default_value = "quick")]
    suite: String,
}

fn parse_toggle(s: &str) -> Result<bool, String> {
    match s {
        "on" => Ok(true),
        "off" => Ok(false),
        other => Err(format!("expected on or off, got {other:?}")),
    }
}

fn default_seed(explicit: Option<u64>) -> u64 {
    explicit
        .or_else(|| std::env::var("QUOTRING_SEED").ok()?.parse().ok())
        .unwrap_or(0)
}

fn read_file(path: &PathBuf) -> Result<String, Error> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))
}

fn emit(output: &Option<PathBuf>, text: &str) -> Result<(), Error> {
    match output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run_hnf(args: &HnfArgs) -> Result<(), Error> {
    let text = read_file(&args.input)?;
    let file: PseudoMatrixFile = io::parse_json(&text)?;
    let ring_spec = match &args.ring {
        Some(r) => {
            if r.ends_with(".json") {
                io::parse_json(&read_file(&PathBuf::from(r))?)?
            } else {
                RingSpec::Name(r.clone())
            }
        }
        None => file
            .ring
            .clone()
            .ok_or_else(|| Error::Parse("no ring: pass --ring or put one in the file".into()))?,
    };
    let ring = io::ring_from_spec(&ring_spec)?;
    let p = io::pseudomatrix_from_file(&ring, &file)?;
    let modulus = match args.modulus.as_str() {
        "auto" => None,
        path => {
            let spec: io::IdealSpec = io::parse_json(&read_file(&PathBuf::from(path))?)?;
            let frac = io::ideal_from_spec(&ring, &spec)?;
            Some(
                frac.as_integral()
                    .ok_or_else(|| Error::Parse("modulus must be an integral ideal".into()))?
                    .clone(),
            )
        }
    };
    let mut rng = quotring::rng::from_seed(default_seed(args.seed));
    let options = PseudoHnfOptions { modulus, use_zsplit: args.zsplit };
    let result = pseudo::pseudo_hnf(&ring, &p, &options, &mut rng)?;
    if args.verify {
        let equal = pseudo::spans_equal(&ring, &p, &result.hnf.to_pseudo_matrix(), None)?;
        if !equal {
            return Err(Error::VerifyFailed);
        }
    }
    let out = io::file_for_result(&ring_spec, &result);
    emit(&args.output, &io::to_json_string(&out))
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>, Error> {
    s.split(',')
        .map(|x| x.trim().parse().map_err(|_| Error::Parse(format!("bad {what}: {x:?}"))))
        .collect()
}

fn run_bench(args: &BenchArgs) -> Result<(), Error> {
    let ring = io::ring_from_spec(&RingSpec::Name(args.ring.clone()))?;
    let dims: Vec<usize> = parse_list(&args.dims, "dimension")?;
    let bits: Vec<u32> = parse_list(&args.bits, "bit size")?;
    let dists = args
        .dist
        .split(',')
        .map(|s| Distribution::parse(s.trim()))
        .collect::<Result<Vec<_>, _>>()?;
    if dims.is_empty() || bits.is_empty() || dists.is_empty() || args.trials == 0 {
        return Err(Error::Parse("empty benchmark grid".into()));
    }
    if dims.contains(&0) || bits.contains(&0) {
        return Err(Error::Parse("dimensions and bit sizes must be >= 1".into()));
    }
    let seed = default_seed(args.seed);
    let mut lines = vec![BenchRow::csv_header().to_string()];
    for &n in &dims {
        for &b in &bits {
            for &dist in &dists {
                let config = BenchConfig {
                    ring: ring.clone(),
                    ring_name: args.ring.clone(),
                    dimension: n,
                    bits: b,
                    distribution: dist,
                    trials: args.trials,
                    seed,
                    use_zsplit: args.zsplit,
                };
                for row in quotring::bench::run(&config)? {
                    lines.push(row.to_csv());
                }
            }
        }
    }
    lines.push(String::new());
    emit(&args.output, &lines.join("\n"))
}

fn run_selftest(args: &SelftestArgs) -> Result<(), Error> {
    let suite = match args.suite.as_str() {
        "quick" => Suite::Quick,
        "full" => Suite::Full,
        other => return Err(Error::Parse(format!("unknown suite {other:?}"))),
    };
    let results = selftest::run(suite);
    let mut failed = false;
    for r in &results {
        println!("{} {} ({})", if r.passed { "PASS" } else { "FAIL" }, r.name, r.detail);
        failed |= !r.passed;
    }
    if failed {
        return Err(Error::VerifyFailed);
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Hnf(args) => run_hnf(args),
        Command::Bench(args) => run_bench(args),
        Command::Selftest(args) => run_selftest(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
