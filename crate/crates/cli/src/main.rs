use std::f64::consts::LN_2;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use leakexp::{Channel, CurveKind, RateGrid};
use leakexp_cli::{self as run, CliResult, Failure, Preset, PRESET_STEPS};

/// Leaked information and error exponents of privacy amplification with
/// linear hashes over erasure and symmetric side channels.
#[derive(Parser)]
#[command(name = "leakexp", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact leaked information of a matrix, as JSON.
    Leakage {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        channel: Channel,
    },
    /// ML erasure-decoding error probability of the code spanned by a matrix.
    Pml {
        #[arg(long)]
        matrix: PathBuf,
        /// Erasure channel bec:<delta>.
        #[arg(long)]
        channel: Channel,
        /// Monte Carlo sample count; exact enumeration when omitted.
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Checks the leakage bound n*P_ML on random full-rank matrices.
    VerifyBound {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        /// Erasure channel bec:<eps>.
        #[arg(long)]
        channel: Channel,
        #[arg(long)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutFile,
    },
    /// Least-leaking full-rank matrix among random draws.
    Search {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        channel: Channel,
        #[arg(long)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Exponent curves as CSV files.
    Exponents(ExponentArgs),
    /// Critical and expurgation rates, as JSON.
    Rates {
        #[arg(long)]
        channel: Channel,
    },
    /// Empirical exponent -ln(I)/n of the best random matrix per block length.
    Scaling {
        /// Key rate in nats per symbol; k = round(rate * n / ln 2).
        #[arg(long)]
        rate: f64,
        /// Comma-separated block lengths.
        #[arg(long)]
        n: String,
        #[arg(long)]
        channel: Channel,
        #[arg(long)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutFile,
    },
}

#[derive(Args)]
struct OutFile {
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExponentArgs {
    /// fig3, fig4 or fig5.
    #[arg(long)]
    preset: Option<String>,
    /// Curve kind; repeatable.
    #[arg(long = "kind")]
    kinds: Vec<CurveKind>,
    #[arg(long)]
    channel: Option<Channel>,
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long)]
    rmin: Option<f64>,
    #[arg(long)]
    rmax: Option<f64>,
    /// Report negative exponents as 0.
    #[arg(long)]
    clamp: bool,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match configure_threads().and_then(|()| execute(cli.command)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(u8::try_from(f.code).unwrap_or(1))
        }
    }
}

fn configure_threads() -> CliResult<()> {
    let Ok(value) = std::env::var("LEAKEXP_THREADS") else {
        return Ok(());
    };
    let threads: usize = value.trim().parse().map_err(|_| {
        Failure::new(
            2,
            format!("LEAKEXP_THREADS={value:?} is not a thread count"),
        )
    })?;
    if threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| Failure::new(1, e.to_string()))?;
    }
    Ok(())
}

fn read_matrix(path: &Path) -> CliResult<leakexp::BinMatrix> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::new(2, format!("{}: {e}", path.display())))?;
    run::parse_matrix(&text).map_err(|f| Failure::new(f.code, format!("{}: {f}", path.display())))
}

fn erasure_param(channel: Channel) -> CliResult<f64> {
    match channel {
        Channel::Bec(e) => Ok(e),
        Channel::Bsc(_) => Err(Failure::new(
            2,
            format!("{channel}: this command needs bec:<p>"),
        )),
    }
}

fn emit(text: &str, out: &OutFile) -> CliResult<()> {
    match &out.out {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn execute(command: Command) -> CliResult<()> {
    match command {
        Command::Leakage { matrix, channel } => {
            print!("{}", run::leakage(&read_matrix(&matrix)?, channel)?);
        }
        Command::Pml {
            matrix,
            channel,
            samples,
            seed,
        } => {
            let delta = erasure_param(channel)?;
            print!(
                "{}",
                run::pml(&read_matrix(&matrix)?, delta, samples, seed)?
            );
        }
        Command::VerifyBound {
            k,
            n,
            channel,
            trials,
            seed,
            out,
        } => {
            let eps = erasure_param(channel)?;
            let outcome = run::verify_bound(k, n, eps, trials, seed)?;
            emit(&outcome.csv, &out)?;
            if !outcome.violations.is_empty() {
                return Err(Failure::new(
                    5,
                    format!("bound violated in trials {:?}", outcome.violations),
                ));
            }
        }
        Command::Search {
            k,
            n,
            channel,
            trials,
            seed,
        } => print!("{}", run::search(k, n, channel, trials, seed)?),
        Command::Exponents(args) => exponents(args)?,
        Command::Rates { channel } => print!("{}", run::rates_json(channel)?),
        Command::Scaling {
            rate,
            n,
            channel,
            trials,
            seed,
            out,
        } => {
            let ns = run::parse_n_list(&n)?;
            emit(&run::scaling(rate, &ns, channel, trials, seed)?, &out)?;
        }
    }
    Ok(())
}

fn exponents(args: ExponentArgs) -> CliResult<()> {
    let preset = args.preset.as_deref().map(Preset::parse).transpose()?;
    let steps = args.steps.unwrap_or(PRESET_STEPS);
    let grid = RateGrid::new(args.rmin.unwrap_or(0.0), args.rmax.unwrap_or(LN_2), steps)?;
    let clamp = args.clamp || preset.is_some();
    let tables = run::exponent_tables(preset, &args.kinds, args.channel, grid, clamp)?;
    fs::create_dir_all(&args.out)?;
    for (name, table) in tables {
        let path = args.out.join(name);
        fs::write(&path, table.to_csv())?;
        println!("{}", path.display());
    }
    Ok(())
}
