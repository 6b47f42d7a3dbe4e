use std::collections::BTreeSet;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use polysemy::cli::{self, Report, SimulateArgs, SimulateModel};
use polysemy::gof::{MergeBasis, MergePolicy, DEFAULT_MIN_CLASS_SIZE};
use polysemy::lstar::Objective;
use polysemy::model::DEFAULT_TOL;
use polysemy::simulate::Sampling;
use polysemy::Error;

#[derive(Parser, Debug)]
#[command(name = "polysemy", version, about = "Parameter-free model of rank polysemy distributions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Predict the polysemy spectrum from the word and meaning totals
    Predict {
        /// Number of headwords L
        #[arg(long)]
        words: u64,
        /// Total number of meanings M
        #[arg(long)]
        meanings: f64,
        /// Highest degree to report (default: until the tail is negligible)
        #[arg(long)]
        k_max: Option<u32>,
        /// Relative tolerance of the normalization solve
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Chi-square test of an empirical spectrum against the parameter-free model
    Test {
        /// Spectrum file (degree,count rows or JSON)
        spectrum: PathBuf,
        #[command(flatten)]
        policy: PolicyArgs,
        /// Parameters counted as fitted when computing degrees of freedom
        #[arg(long, default_value_t = 0)]
        fitted_params: u32,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Fit the modified word count L* and test the one-parameter model
    FitLstar {
        /// Spectrum file (degree,count rows or JSON)
        spectrum: PathBuf,
        #[command(flatten)]
        policy: PolicyArgs,
        /// Smallest L* candidate (default: polysemous word count + 1)
        #[arg(long)]
        search_lo: Option<u64>,
        /// Largest L* candidate (default: twice the word count)
        #[arg(long)]
        search_hi: Option<u64>,
        #[arg(long, value_enum, default_value_t = ObjectiveArg::MaxP)]
        objective: ObjectiveArg,
        /// Leave degree 1 out of the comparison
        #[arg(long)]
        drop_monosemous: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Sample synthetic dictionaries from the model
    Simulate {
        /// Number of headwords L
        #[arg(long)]
        words: u64,
        /// Total number of meanings M (the exponent is solved for)
        #[arg(long, conflicts_with = "gamma", required_unless_present = "gamma")]
        meanings: Option<f64>,
        /// Zipf exponent
        #[arg(long)]
        gamma: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        reps: u32,
        #[arg(long, value_enum, default_value_t = SamplingArg::PerRank)]
        sampling: SamplingArg,
        /// Also test every replicate and report the p-values
        #[arg(long)]
        calibrate: bool,
        #[command(flatten)]
        policy: PolicyArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Args, Debug)]
struct PolicyArgs {
    /// Minimum class size when pooling degrees
    #[arg(long, default_value_t = DEFAULT_MIN_CLASS_SIZE)]
    merge_min: f64,
    /// Count compared against --merge-min
    #[arg(long, value_enum, default_value_t = BasisArg::Expected)]
    merge_by: BasisArg,
    /// Degrees that always share a class, e.g. 8,9 (repeatable)
    #[arg(long, value_delimiter = ',', num_args = 1, action = clap::ArgAction::Append)]
    join: Vec<String>,
    /// Degrees left out of the comparison, e.g. 1 or 1,2
    #[arg(long, value_delimiter = ',')]
    exclude_k: Vec<u32>,
    /// Remove words with more meanings than this
    #[arg(long)]
    exclude_k_above: Option<u32>,
}

#[derive(Args, Debug)]
struct OutputArgs {
    /// Print a human-readable table instead of JSON
    #[arg(long)]
    pretty: bool,
    /// Also write the per-degree table as CSV
    #[arg(long, value_name = "PATH")]
    emit_csv: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum BasisArg {
    Expected,
    Observed,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum ObjectiveArg {
    MaxP,
    MinChi2,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum SamplingArg {
    PerRank,
    Multinomial,
}

impl PolicyArgs {
    fn to_policy(&self, joins: &[BTreeSet<u32>]) -> MergePolicy {
        MergePolicy {
            min_class_size: self.merge_min,
            merge_basis: match self.merge_by {
                BasisArg::Expected => MergeBasis::Expected,
                BasisArg::Observed => MergeBasis::Observed,
            },
            explicit_joins: joins.to_vec(),
            exclude_degrees: self.exclude_k.iter().copied().collect(),
            exclude_above: self.exclude_k_above,
        }
    }
}

/// `--join 8,9 --join 2,3` arrives as one flat list per occurrence group;
/// clap keeps occurrences apart through the raw matches.
fn parse_joins(matches: &clap::ArgMatches) -> Result<Vec<BTreeSet<u32>>, Error> {
    let Some(groups) = matches.get_occurrences::<String>("join") else {
        return Ok(Vec::new());
    };
    groups
        .map(|group| {
            group
                .map(|k| {
                    k.trim()
                        .parse::<u32>()
                        .map_err(|_| Error::InvalidConfig(format!("invalid degree {k:?} in --join")))
                })
                .collect()
        })
        .collect()
}

fn run(cli: Cli, matches: &clap::ArgMatches) -> Result<(Report, OutputArgs), Error> {
    let sub = matches.subcommand().map(|(_, m)| m).expect("subcommand is required");
    let joins = if sub.try_contains_id("join").unwrap_or(false) { parse_joins(sub)? } else { Vec::new() };
    match cli.command {
        Command::Predict { words, meanings, k_max, tol, output } => {
            Ok((cli::cmd_predict(words, meanings, k_max, tol)?, output))
        }
        Command::Test { spectrum, policy, fitted_params, output } => {
            Ok((cli::cmd_test(&spectrum, &policy.to_policy(&joins), fitted_params)?, output))
        }
        Command::FitLstar { spectrum, policy, search_lo, search_hi, objective, drop_monosemous, output } => {
            let mut policy = policy.to_policy(&joins);
            if drop_monosemous {
                policy.exclude_degrees.insert(1);
            }
            let objective = match objective {
                ObjectiveArg::MaxP => Objective::MaxPValue,
                ObjectiveArg::MinChi2 => Objective::MinChiSquare,
            };
            Ok((cli::cmd_fit_lstar(&spectrum, &policy, (search_lo, search_hi), objective)?, output))
        }
        Command::Simulate { words, meanings, gamma, seed, reps, sampling, calibrate, policy, output } => {
            let model = match (meanings, gamma) {
                (Some(m), None) => SimulateModel::Meanings(m),
                (None, Some(g)) => SimulateModel::Gamma(g),
                _ => return Err(Error::InvalidConfig("give exactly one of --meanings and --gamma".into())),
            };
            let args = SimulateArgs {
                words,
                model,
                seed,
                replicates: reps,
                sampling: match sampling {
                    SamplingArg::PerRank => Sampling::PerRank,
                    SamplingArg::Multinomial => Sampling::Multinomial,
                },
                calibrate: calibrate.then(|| policy.to_policy(&joins)),
            };
            Ok((cli::cmd_simulate(&args)?, output))
        }
    }
}

fn main() -> ExitCode {
    let matches = <Cli as clap::CommandFactory>::command().get_matches();
    let cli = <Cli as clap::FromArgMatches>::from_arg_matches(&matches).unwrap_or_else(|e| e.exit());

    let result = run(cli, &matches).and_then(|(report, output)| {
        if let Some(path) = &output.emit_csv {
            report.write_csv(path)?;
        }
        let text = if output.pretty { report.render_table() } else { report.to_json() + "\n" };
        match std::io::stdout().lock().write_all(text.as_bytes()) {
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
            _ => Ok(()),
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            if let Some(hint) = cli::remediation_hint(&err) {
                eprintln!("hint: {hint}");
            }
            ExitCode::from(cli::exit_code(&err) as u8)
        }
    }
}
