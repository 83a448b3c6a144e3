use clap::{Parser, Subcommand};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;
use zaremba_cli::report::{self, Format, Meta, Report};
use zaremba_cli::{bitset_file, theta};
use zaremba_core::{
    arc_profile_with, cf_eval, cf_expand, counting_fit_with, cylinder_depth_max,
    delta_asymptotic_estimate, delta_cylinder, delta_transfer, exp_sum_with, sieve, ArcPoint,
    Digits, ExecOptions,
};

/// Continuant-set toolkit: orbit sieving, dimension solvers, and
/// circle-method exponential sums for bounded partial quotients.
#[derive(Parser)]
#[command(name = "zaremba", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Report format.
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,

    /// Worker threads (default: all available cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Euclidean digit expansion of p/q.
    Expand {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        q: u64,
    },
    /// Convergents of a digit string.
    Eval {
        /// Comma-separated digits, e.g. 1,2,2
        #[arg(long, value_delimiter = ',', required = true, value_parser = clap::value_parser!(u64).range(1..))]
        digits: Vec<u64>,
    },
    /// Build the continuant bitset and write it as a .zbs file.
    Sieve {
        #[arg(
            long = "A",
            required_unless_present = "check",
            conflicts_with = "check"
        )]
        a: Option<u64>,
        #[arg(
            long = "N",
            required_unless_present = "check",
            conflicts_with = "check"
        )]
        n: Option<u64>,
        /// Destination for the bitset file.
        #[arg(long, required_unless_present = "check", conflicts_with = "check")]
        bitset_out: Option<PathBuf>,
        /// Validate and summarize an existing bitset file instead.
        #[arg(long)]
        check: Option<PathBuf>,
    },
    /// Density of the continuant set in [1, N].
    Density {
        #[arg(long = "A", value_parser = clap::value_parser!(u64).range(1..))]
        a: u64,
        #[arg(long = "N", value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
    },
    /// Integers in [1, N] with no A-bounded expansion.
    Exceptions {
        #[arg(long = "A", value_parser = clap::value_parser!(u64).range(1..))]
        a: u64,
        #[arg(long = "N", value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
    },
    /// Smallest coprime numerator giving q an A-bounded expansion.
    Witness {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        q: u64,
        #[arg(long = "A", value_parser = clap::value_parser!(u64).range(1..))]
        a: u64,
    },
    /// Witness check over the powers base^1 .. base^max-exp.
    Nieder {
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
        base: u64,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        max_exp: u32,
        #[arg(long = "A", value_parser = clap::value_parser!(u64).range(1..))]
        a: u64,
    },
    /// Log-log slope of the orbit count against N.
    Fit {
        #[arg(long = "A", value_parser = clap::value_parser!(u64).range(1..))]
        a: u64,
        /// Comma-separated limits, at least three, increasing.
        #[arg(long = "Ns", value_delimiter = ',', required = true, value_parser = clap::value_parser!(u64).range(1..))]
        ns: Vec<u64>,
    },
    /// Hausdorff dimension of the bounded-type set.
    Dim {
        #[arg(long = "A", value_parser = clap::value_parser!(u64).range(1..))]
        a: u64,
        #[arg(long, value_enum, default_value = "transfer")]
        method: MethodArg,
        /// Collocation order (transfer method).
        #[arg(long, default_value_t = 48)]
        m: usize,
        /// Bisection tolerance (transfer method).
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Cover depth (cylinder method; default fits the walk budget).
        #[arg(long)]
        depth: Option<u32>,
    },
    /// Exponential sum over the orbit at one frequency.
    Expsum {
        #[arg(long = "A", value_parser = clap::value_parser!(u64).range(1..))]
        a: u64,
        #[arg(long = "N", value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        /// Frequency as "r/s" (exact) or a decimal.
        #[arg(long, value_parser = theta::parse_theta)]
        theta: ArcPoint,
        /// Major-arc offset added to theta.
        #[arg(long, default_value_t = 0.0)]
        beta: f64,
    },
    /// |S_N(r/s)| over all Farey fractions with s <= s-max.
    Profile {
        #[arg(long = "A", value_parser = clap::value_parser!(u64).range(1..))]
        a: u64,
        #[arg(long = "N", value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..=4096))]
        s_max: u64,
    },
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
enum MethodArg {
    Asymptotic,
    Transfer,
    Cylinder,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}

/// Progress goes to standard error only; standard output stays
/// machine-parseable.
fn announce_sieve(a: u64, n: u64, threads: usize) {
    if n >= 1_000_000 {
        eprintln!("sieving A={a} N={n} on {threads} threads...");
    }
}

fn effective_threads(requested: Option<usize>) -> usize {
    requested.unwrap_or_else(|| {
        std::thread::available_parallelism()
            .map(|n| n.get())
            .unwrap_or(1)
    })
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let threads = effective_threads(cli.threads);
    let opts = ExecOptions {
        threads: Some(threads),
        ..ExecOptions::default()
    };
    let started = Instant::now();
    let mut sink: Box<dyn Write> = match &cli.out {
        Some(path) => Box::new(std::fs::File::create(path)?),
        None => Box::new(std::io::stdout().lock()),
    };

    match cli.command {
        Command::Expand { p, q } => {
            let digits = cf_expand(p, q)?;
            let payload = report::ExpandReport { p, q, digits };
            finish(
                &payload, None, None, threads, started, cli.format, &mut sink,
            )
        }
        Command::Eval { digits } => {
            let digits = Digits::new(digits)?;
            let ev = cf_eval(&digits)?;
            let payload = report::EvalReport {
                digits,
                p: ev.pair.p,
                q: ev.pair.q,
                convergents: ev.convergents,
            };
            finish(
                &payload, None, None, threads, started, cli.format, &mut sink,
            )
        }
        Command::Sieve {
            a,
            n,
            bitset_out,
            check,
        } => {
            let (set, path) = match check {
                Some(path) => (bitset_file::load(&path)?, path),
                None => {
                    let (a, n) = (a.unwrap(), n.unwrap());
                    let path = bitset_out.unwrap();
                    announce_sieve(a, n, threads);
                    let set = zaremba_core::continuant_bitset_with(a, n, &opts)?;
                    bitset_file::save(&set, &path)?;
                    (set, path)
                }
            };
            let payload = report::SieveReport {
                a: set.a_max(),
                n: set.limit(),
                count: set.count(),
                density: sieve::exception_report(&set).density,
                words: set.words().len(),
                path: path.display().to_string(),
            };
            let (a, n) = (Some(set.a_max()), Some(set.limit()));
            finish(&payload, a, n, threads, started, cli.format, &mut sink)
        }
        Command::Density { a, n } => {
            announce_sieve(a, n, threads);
            let density = sieve::density_with(a, n, &opts)?;
            let payload = report::DensityReport { a, n, density };
            finish(
                &payload,
                Some(a),
                Some(n),
                threads,
                started,
                cli.format,
                &mut sink,
            )
        }
        Command::Exceptions { a, n } => {
            announce_sieve(a, n, threads);
            let core = sieve::exceptions_with(a, n, &opts)?;
            let payload = report::ExceptionsReport::from_core(core);
            finish(
                &payload,
                Some(a),
                Some(n),
                threads,
                started,
                cli.format,
                &mut sink,
            )
        }
        Command::Witness { q, a } => {
            let found = sieve::witness(q, a)?;
            let payload = report::WitnessReport {
                q,
                a,
                p: found.as_ref().map(|(p, _)| *p),
                digits: found.map(|(_, d)| d),
            };
            finish(
                &payload,
                Some(a),
                None,
                threads,
                started,
                cli.format,
                &mut sink,
            )
        }
        Command::Nieder { base, max_exp, a } => {
            let core = sieve::niederreiter_check(base, max_exp, a)?;
            let payload = report::NiederReport::from_core(core);
            finish(
                &payload,
                Some(a),
                None,
                threads,
                started,
                cli.format,
                &mut sink,
            )
        }
        Command::Fit { a, ns } => {
            let core = counting_fit_with(a, &ns, &opts)?;
            let n_max = ns.last().copied();
            let payload = report::FitReport::from_core(core);
            finish(
                &payload,
                Some(a),
                n_max,
                threads,
                started,
                cli.format,
                &mut sink,
            )
        }
        Command::Dim {
            a,
            method,
            m,
            tol,
            depth,
        } => {
            let estimate = match method {
                MethodArg::Asymptotic => delta_asymptotic_estimate(a)?,
                MethodArg::Transfer => delta_transfer(a, m, tol)?,
                MethodArg::Cylinder => {
                    let depth = depth.unwrap_or_else(|| cylinder_depth_max(a));
                    delta_cylinder(a, depth)?
                }
            };
            let payload = report::DimReport::from_core(estimate);
            finish(
                &payload,
                Some(a),
                None,
                threads,
                started,
                cli.format,
                &mut sink,
            )
        }
        Command::Expsum { a, n, theta, beta } => {
            let point = theta::with_beta(theta, beta).map_err(anyhow::Error::msg)?;
            let value = exp_sum_with(a, n, point, &opts)?;
            let payload = report::ExpSumReport::from_core(value);
            finish(
                &payload,
                Some(a),
                Some(n),
                threads,
                started,
                cli.format,
                &mut sink,
            )
        }
        Command::Profile { a, n, s_max } => {
            let profile = arc_profile_with(a, n, s_max, &opts)?;
            let payload = report::ProfileReport::from_core(profile);
            finish(
                &payload,
                Some(a),
                Some(n),
                threads,
                started,
                cli.format,
                &mut sink,
            )
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn finish<T: Report>(
    payload: &T,
    a: Option<u64>,
    n: Option<u64>,
    threads: usize,
    started: Instant,
    format: Format,
    sink: &mut Box<dyn Write>,
) -> anyhow::Result<()> {
    let meta = Meta::new(a, n, threads, started.elapsed().as_millis() as u64);
    report::emit(payload, &meta, format, sink.as_mut())?;
    Ok(())
}
