mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use humancomp::Error;

#[derive(Parser, Debug)]
#[command(name = "hcm", version, about = "Humanly computable passwords, generators and attacks")]
pub struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Step budget for searches.
    #[arg(long, global = true, default_value_t = 1e7)]
    pub budget: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Draw a random key and report its preprocessing cost.
    Keygen {
        /// letters, letters<N>, digits or pairs.
        #[arg(long, default_value = "letters")]
        domain: String,
        /// Key file to write.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Turn challenges into passwords.
    Run(RunArgs),
    /// Run a generator on a digit seed, or measure its mean output length.
    Prg(PrgArgs),
    /// The one-way function candidate.
    Owf {
        #[command(subcommand)]
        action: OwfAction,
    },
    /// Attacks and distinguishers.
    Attack {
        #[command(subcommand)]
        kind: AttackKind,
    },
}

#[derive(Args, Debug)]
pub struct ChallengeArgs {
    /// A challenge; may be repeated.
    #[arg(long = "challenge")]
    pub challenges: Vec<String>,
    /// File with one challenge per line.
    #[arg(long)]
    pub challenges_file: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct RunArgs {
    #[arg(long)]
    pub key: PathBuf,
    /// letter-sub, single-digit or stml; ignored when a pipeline names a schema.
    #[arg(long)]
    pub schema: Option<String>,
    /// Fixed string for the single-digit schema.
    #[arg(long, default_value = "SESAME1@")]
    pub fixed: String,
    /// Modifier pipeline, e.g. `start:two-past-first-vowel | stml`.
    #[arg(long)]
    pub pipeline: Option<String>,
    #[command(flatten)]
    pub input: ChallengeArgs,
    /// Print the full step trace.
    #[arg(long)]
    pub trace: bool,
    /// Uppercase challenges instead of rejecting lowercase letters.
    #[arg(long)]
    pub normalize: bool,
    /// Charge every primitive, not only the ones the cost formulas list.
    #[arg(long)]
    pub every_step: bool,
}

#[derive(Args, Debug)]
pub struct PrgArgs {
    /// Digit key file.
    #[arg(long)]
    pub key: Option<PathBuf>,
    /// prg1, prg2 or stml.
    #[arg(long, default_value = "prg1")]
    pub generator: String,
    /// Seed digits.
    #[arg(long)]
    pub challenge: Option<String>,
    /// Accept any digit in the seed.
    #[arg(long)]
    pub any_digits: bool,
    /// Measure the mean output length at this seed length instead.
    #[arg(long)]
    pub length_stats: Option<usize>,
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
}

#[derive(Subcommand, Debug)]
pub enum OwfAction {
    /// Draw an instance over an N-symbol alphabet.
    Make {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1.0)]
        factor: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate an instance on a key.
    Eval {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        key: PathBuf,
    },
    /// Find every key with the given output.
    Invert {
        #[arg(long)]
        instance: PathBuf,
        /// Target output digits.
        #[arg(long)]
        output: String,
        /// Key digits range over 0..range.
        #[arg(long, default_value_t = 10)]
        range: u8,
    },
}

#[derive(Subcommand, Debug)]
pub enum AttackKind {
    /// Recover seeds from a first-generator output.
    GuessSolve {
        #[arg(long, default_value_t = 6)]
        n: usize,
        /// Digit key file; a random key is drawn when absent.
        #[arg(long)]
        key: Option<PathBuf>,
        /// Output digits to attack; a random instance is generated when absent.
        #[arg(long)]
        target: Option<String>,
        /// Only print the cost projection for this seed length.
        #[arg(long)]
        project: Option<usize>,
    },
    /// Search every seed for one producing the candidate.
    Exhaust {
        #[arg(long, default_value_t = 6)]
        n: usize,
        #[arg(long)]
        key: Option<PathBuf>,
        #[arg(long)]
        candidate: Option<String>,
        #[arg(long, default_value = "prg2")]
        generator: String,
    },
    /// Estimate how many observations an adversary needs.
    Qsec(QsecArgs),
    /// Chi-square frequency test.
    Frequency {
        /// File of digit strings, one per line; generator outputs are drawn when absent.
        #[arg(long)]
        samples_file: Option<PathBuf>,
        #[arg(long, default_value = "prg2")]
        generator: String,
        #[arg(long, default_value_t = 10)]
        n: usize,
        #[arg(long, default_value_t = 1000)]
        count: usize,
    },
    /// Learn a letter-substitution map from observed pairs.
    Learn {
        /// CHALLENGE=PASSWORD; may be repeated.
        #[arg(long = "observe")]
        observations: Vec<String>,
        /// Challenge to answer with the learned map.
        #[arg(long)]
        predict: Option<String>,
    },
}

#[derive(Args, Debug)]
pub struct QsecArgs {
    /// Lexicon file: `word probability` per line.
    #[arg(long)]
    pub lexicon: Option<PathBuf>,
    /// Uniform random challenges of this many letters when no lexicon is given.
    #[arg(long, default_value_t = 5)]
    pub letters: usize,
    #[arg(long, default_value = "letter-sub")]
    pub schema: String,
    #[arg(long)]
    pub key: Option<PathBuf>,
    #[arg(long, default_value = "SESAME1@")]
    pub fixed: String,
    /// Use this many reused passwords instead of a schema.
    #[arg(long)]
    pub reused: Option<usize>,
    /// majority or map.
    #[arg(long, default_value = "majority")]
    pub guesser: String,
    #[arg(long, default_value_t = 5)]
    pub max_observations: usize,
    #[arg(long, default_value_t = 2000)]
    pub trials: u64,
}

pub const EXIT_DOMAIN: u8 = 2;
pub const EXIT_BUDGET: u8 = 3;
pub const EXIT_INCONSISTENT: u8 = 4;

pub fn exit_code(err: &anyhow::Error) -> u8 {
    match err.chain().find_map(|e| e.downcast_ref::<Error>()) {
        Some(Error::Domain { .. } | Error::NotADigit(_) | Error::KeyLength { .. }) => EXIT_DOMAIN,
        Some(Error::Budget { .. }) => EXIT_BUDGET,
        Some(Error::Inconsistent(_)) => EXIT_INCONSISTENT,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::dispatch(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
