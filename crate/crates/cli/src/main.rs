use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use evirank_core::io::{
    emit_report, load_scenario, read_table, reconstruct_personnel, reconstruct_weights, Format,
    LabeledTable, ReconstructionReport,
};
use evirank_core::ranking::LeaderStrategy;
use evirank_core::stratification::DichotomyVariant;
use evirank_core::{Channel, Error, Matrix, Roster, Scenario, SplitRule, ZeroDivisionPolicy};
use evirank_service::run::{classify, execute, ErrorClass, Metric, Pairs, RunRequest};

const EXIT_VALIDATION: u8 = 1;
const EXIT_COMPUTATION: u8 = 2;
const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(name = "evirank", version, about = "Rankings, leagues, injustice and work passion from evidence bundles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Bundle directory, manifest file, or the name of a directory under ./fixtures
    #[arg(long)]
    bundle: PathBuf,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
    /// Write the document here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
    Markdown,
}

#[derive(Clone, Copy, ValueEnum)]
enum ChannelArg {
    Achievements,
    Rewards,
}

impl From<ChannelArg> for Channel {
    fn from(c: ChannelArg) -> Self {
        match c {
            ChannelArg::Achievements => Channel::Achievements,
            ChannelArg::Rewards => Channel::Rewards,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ProcedureArg {
    Admin,
    Democratic,
    WeightedDemocracy,
    LeaderCompromise,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Weak,
    Strong,
    #[value(name = "self")]
    SelfCompromise,
}

#[derive(Clone, Copy, ValueEnum)]
enum SplitArg {
    Half,
    Golden,
}

#[derive(Clone, Copy, ValueEnum)]
enum MetricArg {
    Place,
    Score,
}

#[derive(Clone, Copy, ValueEnum)]
enum PairsArg {
    Canonical,
    All,
}

fn parse_leader(s: &str) -> Result<LeaderStrategy, String> {
    Ok(match s {
        "admin-top" => LeaderStrategy::AdminTop,
        "democratic-top" => LeaderStrategy::DemocraticTop,
        _ => match s.strip_prefix("league-top:") {
            Some(n) => LeaderStrategy::LeagueTop(n.parse().map_err(|_| format!("bad league index '{n}'"))?),
            None => LeaderStrategy::Explicit(s.to_string()),
        },
    })
}

fn parse_zero_policy(s: &str) -> Result<ZeroDivisionPolicy, String> {
    Ok(match s {
        "strict" => ZeroDivisionPolicy::Strict,
        "zero-for-zero" => ZeroDivisionPolicy::ZeroForZero,
        _ => match s.strip_prefix("epsilon:") {
            Some(e) => ZeroDivisionPolicy::Epsilon(e.parse().map_err(|_| format!("bad epsilon '{e}'"))?),
            None => return Err(format!("expected strict, zero-for-zero or epsilon:<value>, got '{s}'")),
        },
    })
}

#[derive(Subcommand)]
enum Command {
    /// One ranking list
    Rank {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = ProcedureArg::Admin)]
        procedure: ProcedureArg,
        #[arg(long, value_enum, default_value_t = ChannelArg::Achievements)]
        channel: ChannelArg,
        /// admin-top, democratic-top, league-top:<index> or a staff id
        #[arg(long, value_parser = parse_leader, default_value = "admin-top")]
        leader: LeaderStrategy,
    },
    /// Leagues re-ranked under their leaders, with an optional social lift
    Leagues {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = ChannelArg::Achievements)]
        channel: ChannelArg,
        #[arg(long)]
        count: Option<usize>,
        #[arg(long)]
        swap: Option<usize>,
    },
    /// The social-lift ranking list
    SocialLift {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = ChannelArg::Achievements)]
        channel: ChannelArg,
        #[arg(long)]
        count: Option<usize>,
        #[arg(long)]
        swap: Option<usize>,
    },
    /// Groups personal value systems with seeded k-means
    Cluster {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = ChannelArg::Achievements)]
        channel: ChannelArg,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Compromise by repeated splitting into winners and losers
    Dichotomy {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = ChannelArg::Achievements)]
        channel: ChannelArg,
        #[arg(long, value_enum)]
        variant: VariantArg,
        #[arg(long, value_enum)]
        split: Option<SplitArg>,
        #[arg(long, default_value_t = 0)]
        swap: usize,
    },
    /// Distance between two lists given by code (AA, DA, CR, ABA, ...)
    Compare {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        list_a: String,
        #[arg(long)]
        list_b: String,
        #[arg(long, value_enum, default_value_t = MetricArg::Place)]
        metric: MetricArg,
    },
    /// Injustice between achievement and reward lists
    Justice {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = PairsArg::Canonical)]
        pairs: PairsArg,
    },
    /// Work-passion matrix, average and ranking
    Passion {
        #[command(flatten)]
        common: Common,
        /// strict, zero-for-zero or epsilon:<value>; defaults to the bundle config
        #[arg(long, value_parser = parse_zero_policy)]
        zero_policy: Option<ZeroDivisionPolicy>,
    },
    /// Fits value systems to observed scores by non-negative least squares
    ReconstructWeights {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = ChannelArg::Achievements)]
        channel: ChannelArg,
        /// Table with one score column per staff row; fits the administrative weights
        #[arg(long, required_unless_present = "assessments")]
        scores: Option<PathBuf>,
        /// Square table of raw assessments, assessors by assessed; fits one row per assessor
        #[arg(long)]
        assessments: Option<PathBuf>,
    },
    /// Runs the HTTP API
    Serve {
        #[arg(long, default_value = "127.0.0.1:8080")]
        addr: SocketAddr,
        /// Snapshot directory; scenarios are kept in memory only when absent
        #[arg(long)]
        data_dir: Option<PathBuf>,
    },
}

enum Failure {
    Engine(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Engine(e)
    }
}

fn resolve_bundle(p: &Path) -> PathBuf {
    if p.exists() {
        return p.to_path_buf();
    }
    let named = Path::new("fixtures").join(p);
    if named.exists() {
        named
    } else {
        p.to_path_buf()
    }
}

fn aligned_rows(t: &LabeledTable, roster: &Roster, file: &str) -> Result<Vec<usize>, Error> {
    let mut idx = Vec::with_capacity(roster.len());
    for id in roster.ids() {
        let i = t.row_labels.iter().position(|l| l == id).ok_or_else(|| {
            Error::Invalid(format!("{file}: no row for '{id}'"))
        })?;
        idx.push(i);
    }
    if let Some(extra) = t.row_labels.iter().find(|l| roster.index_of(l).is_none()) {
        return Err(Error::UnknownStaff(extra.clone()));
    }
    Ok(idx)
}

fn reconstruct(s: &Scenario, channel: Channel, scores: Option<&Path>, assessments: Option<&Path>) -> Result<ReconstructionReport, Error> {
    let ch = s.channel(channel)?;
    let roster = s.roster();
    let mut fits = Vec::new();
    if let Some(p) = scores {
        let t = read_table(p)?;
        if t.col_labels.len() != 1 {
            return Err(Error::Invalid(format!("{}: expected one score column, found {}", p.display(), t.col_labels.len())));
        }
        let observed: Vec<f64> = aligned_rows(&t, roster, &p.display().to_string())?
            .into_iter()
            .map(|i| t.values.row(i)[0])
            .collect();
        fits.push(("admin".to_string(), reconstruct_weights(ch.evidence, &observed)?));
    }
    if let Some(p) = assessments {
        let t = read_table(p)?;
        let assessors = Roster::new(t.row_labels.iter().cloned())?;
        let mut cols = Vec::with_capacity(roster.len());
        for id in roster.ids() {
            cols.push(t.col_labels.iter().position(|c| c == id).ok_or_else(|| {
                Error::Invalid(format!("{}: no column for '{id}'", p.display()))
            })?);
        }
        let data: Vec<f64> = t
            .values
            .row_iter()
            .flat_map(|r| cols.iter().map(move |&j| r[j]))
            .collect();
        let raw = Matrix::from_vec(assessors.len(), roster.len(), data)?;
        let (_, rows) = reconstruct_personnel(ch.evidence, &assessors, &raw)?;
        fits.extend(assessors.ids().iter().cloned().zip(rows));
    }
    Ok(ReconstructionReport { fits })
}

fn emit(common: &Common, text: &str) -> Result<(), Failure> {
    match &common.out {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Io(format!("cannot write {}: {e}", p.display()))),
        None => {
            use std::io::Write;
            std::io::stdout()
                .write_all(text.as_bytes())
                .map_err(|e| Failure::Io(format!("cannot write to stdout: {e}")))
        }
    }
}

fn format_of(f: FormatArg) -> Format {
    match f {
        FormatArg::Json => Format::Json,
        FormatArg::Csv => Format::Csv,
        FormatArg::Markdown => Format::Markdown,
    }
}

fn request(command: &Command) -> Option<RunRequest> {
    Some(match *command {
        Command::Rank { procedure, channel, ref leader, .. } => {
            let channel = channel.into();
            match procedure {
                ProcedureArg::Admin => RunRequest::AdminRank { channel },
                ProcedureArg::Democratic => RunRequest::DemocraticRank { channel },
                ProcedureArg::WeightedDemocracy => RunRequest::WeightedDemocracy { channel },
                ProcedureArg::LeaderCompromise => RunRequest::LeaderCompromise {
                    channel,
                    leader: leader.clone(),
                },
            }
        }
        Command::Leagues { channel, count, swap, .. } => RunRequest::Leagues {
            channel: channel.into(),
            count,
            swap_k: swap,
        },
        Command::SocialLift { channel, count, swap, .. } => RunRequest::SocialLift {
            channel: channel.into(),
            count,
            swap_k: swap,
        },
        Command::Cluster { channel, k, seed, .. } => RunRequest::Cluster {
            channel: channel.into(),
            k,
            seed,
        },
        Command::Dichotomy { channel, variant, split, swap, .. } => RunRequest::Dichotomy {
            channel: channel.into(),
            variant: match variant {
                VariantArg::Weak => DichotomyVariant::Weak,
                VariantArg::Strong => DichotomyVariant::Strong,
                VariantArg::SelfCompromise => DichotomyVariant::SelfCompromise,
            },
            split: split.map(|s| match s {
                SplitArg::Half => SplitRule::Half,
                SplitArg::Golden => SplitRule::GoldenRatio,
            }),
            swap,
        },
        Command::Compare { ref list_a, ref list_b, metric, .. } => RunRequest::Compare {
            list_a: list_a.clone(),
            list_b: list_b.clone(),
            metric: match metric {
                MetricArg::Place => Metric::PlaceDistance,
                MetricArg::Score => Metric::ScoreDistance,
            },
        },
        Command::Justice { pairs, .. } => RunRequest::Justice {
            pairs: match pairs {
                PairsArg::Canonical => Pairs::Canonical,
                PairsArg::All => Pairs::All,
            },
        },
        Command::Passion { zero_policy, .. } => RunRequest::Passion { zero_policy },
        Command::ReconstructWeights { .. } | Command::Serve { .. } => return None,
    })
}

fn common(command: &Command) -> Option<&Common> {
    match command {
        Command::Rank { common, .. }
        | Command::Leagues { common, .. }
        | Command::SocialLift { common, .. }
        | Command::Cluster { common, .. }
        | Command::Dichotomy { common, .. }
        | Command::Compare { common, .. }
        | Command::Justice { common, .. }
        | Command::Passion { common, .. }
        | Command::ReconstructWeights { common, .. } => Some(common),
        Command::Serve { .. } => None,
    }
}

fn serve(addr: SocketAddr, data_dir: Option<&Path>) -> Result<(), Failure> {
    let rt = tokio::runtime::Runtime::new().map_err(|e| Failure::Io(e.to_string()))?;
    eprintln!("listening on http://{addr}");
    rt.block_on(evirank_service::serve(addr, data_dir))
        .map_err(|e| Failure::Io(e.to_string()))
}

fn run(cli: Cli) -> Result<(), Failure> {
    if let Command::Serve { addr, data_dir } = &cli.command {
        return serve(*addr, data_dir.as_deref());
    }
    let common = common(&cli.command).expect("every other subcommand reads a bundle");
    let scenario = load_scenario(&resolve_bundle(&common.bundle))?;
    let format = format_of(common.format);
    let text = match request(&cli.command) {
        Some(req) => {
            let outcome = execute(&scenario, &req, &|_| None)?;
            emit_report(outcome.report.as_ref(), format)
        }
        None => {
            let Command::ReconstructWeights {
                channel,
                scores,
                assessments,
                ..
            } = &cli.command
            else {
                unreachable!("only reconstruct-weights has no run request")
            };
            let r = reconstruct(&scenario, (*channel).into(), scores.as_deref(), assessments.as_deref())?;
            emit_report(&r, format)
        }
    };
    emit(common, &text)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Engine(e)) => {
            match &e {
                Error::Bundle(vs) => {
                    eprintln!("error: invalid bundle, {} problem(s):", vs.len());
                    for v in vs {
                        eprintln!("  {v}");
                    }
                }
                _ => eprintln!("error: {e}"),
            }
            match classify(&e) {
                ErrorClass::Validation => ExitCode::from(EXIT_VALIDATION),
                ErrorClass::Computation => ExitCode::from(EXIT_COMPUTATION),
            }
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_VALIDATION)
        }
    }
}
