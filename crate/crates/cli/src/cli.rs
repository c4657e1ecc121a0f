use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dirough::relsys::DEFAULT_CAP;

#[derive(Parser, Debug)]
#[command(name = "dirough", version, about = "Rough approximations over up-directed relational systems")]
pub struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,

    /// Largest universe enumerated exhaustively.
    #[arg(long, global = true, env = "DIROUGH_CAP", default_value_t = DEFAULT_CAP)]
    pub cap: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Inspect a relational system.
    #[command(subcommand)]
    Relation(RelationCmd),
    /// Lower and upper approximations of a set.
    Approx(ApproxArgs),
    /// CUD sets or subgroupoids.
    Granules(GranulesArgs),
    /// Build groupoids of a system or check laws on them.
    #[command(subcommand)]
    Groupoid(GroupoidCmd),
    /// The ACP-rough algebra of a groupoid.
    #[command(subcommand)]
    Acp(AcpCmd),
    /// Decision regions of a pair of sets.
    Regions(RegionsArgs),
    /// Rough clustering of band data.
    #[command(subcommand)]
    Cluster(ClusterCmd),
    /// The embedded worked example.
    #[command(subcommand)]
    Fixture(FixtureCmd),
    /// The claims auditor.
    #[command(subcommand)]
    Audit(AuditCmd),
}

#[derive(Args, Debug, Clone, Default)]
pub struct RelationInput {
    /// Relation text file.
    #[arg(long)]
    pub rel: Option<PathBuf>,
    /// Information table CSV; objects are related when they agree on `--attrs`.
    #[arg(long, conflicts_with = "rel")]
    pub table: Option<PathBuf>,
    /// Attributes compared in `--table` (all when omitted).
    #[arg(long, value_delimiter = ',', requires = "table")]
    pub attrs: Option<Vec<String>>,
    /// Use the embedded example relation (and its Cayley table as the default groupoid).
    #[arg(long, conflicts_with_all = ["rel", "table"])]
    pub fixture: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StrategyArg {
    Min,
    Max,
    Seed(u64),
    Table(PathBuf),
}

impl FromStr for StrategyArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "min" => Ok(StrategyArg::Min),
            "max" => Ok(StrategyArg::Max),
            _ => {
                if let Some(n) = s.strip_prefix("seed:") {
                    n.parse().map(StrategyArg::Seed).map_err(|e| format!("bad seed `{n}`: {e}"))
                } else if let Some(p) = s.strip_prefix("table:") {
                    Ok(StrategyArg::Table(PathBuf::from(p)))
                } else {
                    Err(format!("expected min, max, seed:<n> or table:<file>, found `{s}`"))
                }
            }
        }
    }
}

#[derive(Args, Debug, Clone, Default)]
pub struct GroupoidInput {
    /// How products of unrelated pairs are chosen: min, max, seed:<n> or table:<file>.
    #[arg(long)]
    pub strategy: Option<StrategyArg>,
    /// Choose among pseudo-joins, as a function of the upper-bound set.
    #[arg(long)]
    pub pi: bool,
}

#[derive(Subcommand, Debug)]
pub enum RelationCmd {
    /// Structural profile of the relation.
    Check {
        /// Relation text file (alternative to `--rel`).
        file: Option<PathBuf>,
        #[command(flatten)]
        input: RelationInput,
    },
    /// Graphviz rendering.
    Dot {
        file: Option<PathBuf>,
        #[command(flatten)]
        input: RelationInput,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ApproxKind {
    Nbd,
    Cud,
    Pi,
}

#[derive(ValueEnum, Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum UpperModeArg {
    #[default]
    Pointwise,
    Collection,
}

#[derive(Args, Debug)]
pub struct ApproxArgs {
    #[command(flatten)]
    pub input: RelationInput,
    #[command(flatten)]
    pub groupoid: GroupoidInput,
    /// Comma-separated labels.
    #[arg(long, allow_hyphen_values = true)]
    pub set: String,
    #[arg(long, value_enum)]
    pub kind: ApproxKind,
    /// Reading of the CUD upper approximation.
    #[arg(long, value_enum, default_value_t)]
    pub mode: UpperModeArg,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum GranuleKind {
    Cud,
    Subgroupoid,
}

#[derive(Args, Debug)]
pub struct GranulesArgs {
    #[arg(value_enum)]
    pub which: GranuleKind,
    #[command(flatten)]
    pub input: RelationInput,
    #[command(flatten)]
    pub groupoid: GroupoidInput,
}

#[derive(Subcommand, Debug)]
pub enum GroupoidCmd {
    /// Cayley table of a member of B(S).
    Build {
        #[command(flatten)]
        input: RelationInput,
        #[command(flatten)]
        groupoid: GroupoidInput,
    },
    /// Check equational laws exhaustively.
    Laws {
        #[command(flatten)]
        input: RelationInput,
        #[command(flatten)]
        groupoid: GroupoidInput,
        /// Law ids (all registered laws when omitted).
        #[arg(long, value_delimiter = ',')]
        laws: Option<Vec<String>>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum CarrierArg {
    #[default]
    Formal,
    Realized,
}

#[derive(Subcommand, Debug)]
pub enum AcpCmd {
    /// Check A1–A6 and well-definedness over the carrier.
    Audit {
        #[command(flatten)]
        input: RelationInput,
        #[command(flatten)]
        groupoid: GroupoidInput,
        #[arg(long, value_enum, default_value_t)]
        mode: CarrierArg,
    },
}

#[derive(Args, Debug)]
pub struct RegionsArgs {
    #[command(flatten)]
    pub input: RelationInput,
    #[command(flatten)]
    pub groupoid: GroupoidInput,
    /// The sets A and B, in that order.
    #[arg(long, num_args = 1, required = true, allow_hyphen_values = true)]
    pub set: Vec<String>,
}

#[derive(ValueEnum, Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum RhoArg {
    #[default]
    L2,
    Linf,
}

#[derive(ValueEnum, Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum FlavorArg {
    #[default]
    Cud,
    Pi,
}

#[derive(ValueEnum, Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum PolicyArg {
    /// Fail when the induced relation is not up-directed.
    #[default]
    Require,
    /// Fall back to neighborhood approximations.
    Basic,
    /// Add a synthetic row above every row.
    AugmentTop,
}

#[derive(ValueEnum, Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SeedsArg {
    #[default]
    Neighborhood,
    Granule,
}

#[derive(ValueEnum, Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum MetricArg {
    #[default]
    Nasd,
    BandVariance,
}

#[derive(Args, Debug, Clone)]
pub struct DataArgs {
    /// Band CSV; columns `id`, `lat`, `lon`, `class` take those roles, the rest are bands.
    #[arg(long)]
    pub data: PathBuf,
    /// Distance threshold for relating rows.
    #[arg(long, required_unless_present = "class_eps")]
    pub eps: Option<f64>,
    /// Per-class thresholds, `class=eps,...`, looked up by the class of the first row.
    #[arg(long, value_delimiter = ',')]
    pub class_eps: Option<Vec<String>>,
    #[arg(long, value_enum, default_value_t)]
    pub rho: RhoArg,
    /// Cluster flavor.
    #[arg(long, value_enum, default_value_t)]
    pub kind: FlavorArg,
    /// Behaviour when the induced relation is not up-directed.
    #[arg(long, value_enum, default_value_t)]
    pub policy: PolicyArg,
    #[arg(long, value_enum, default_value_t)]
    pub seeds: SeedsArg,
    #[command(flatten)]
    pub groupoid: GroupoidInput,
    #[arg(long, value_enum, default_value_t)]
    pub metric: MetricArg,
    /// Band weights for ranking.
    #[arg(long, value_delimiter = ',')]
    pub weights: Option<Vec<f64>>,
    /// Largest number of clusters kept, unless the cover needs more.
    #[arg(long)]
    pub k: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum ClusterCmd {
    /// Relation, candidate clusters, validation, scoring and selection.
    Run {
        #[command(flatten)]
        data: DataArgs,
        /// Write a `row,cluster` segmentation CSV of the selected clusters.
        #[arg(long)]
        segmentation: Option<PathBuf>,
    },
    /// Cover and disclusion of the given (or proposed) clusters.
    Validate {
        #[command(flatten)]
        data: DataArgs,
        /// One cluster per line: comma-separated row ids of the set it approximates.
        #[arg(long)]
        clusters: Option<PathBuf>,
    },
    /// Component scores of the given (or proposed) clusters.
    Score {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long)]
        clusters: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
pub enum FixtureCmd {
    /// Recompute every printed artifact of the worked example and diff against the prints.
    Section6,
}

#[derive(ValueEnum, Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TierArg {
    #[value(name = "1")]
    One,
    #[value(name = "2")]
    Two,
    #[default]
    All,
}

#[derive(Subcommand, Debug)]
pub enum AuditCmd {
    /// Check every registered claim on the given instance and on random instances.
    Claims {
        #[command(flatten)]
        input: RelationInput,
        #[command(flatten)]
        groupoid: GroupoidInput,
        #[arg(long, value_enum, default_value_t)]
        tier: TierArg,
        /// Number of random instances.
        #[arg(long, default_value_t = 25)]
        instances: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}
