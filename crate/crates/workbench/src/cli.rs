use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "delta-wb", version, about = "Combinatorial derivations of subsets of groups")]
pub struct Cli {
    /// Emit the report as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Window radius (defaults per group).
    #[arg(long, global = true)]
    pub window: Option<u64>,
    /// Multiplicity threshold.
    #[arg(long, global = true)]
    pub threshold: Option<u64>,
    /// Seed for corpus generation.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Run on the calling thread only.
    #[arg(long, global = true)]
    pub serial: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Compute or estimate Δ(A).
    Delta(DeltaArgs),
    /// Iterate the derivation.
    Iterate(IterateArgs),
    /// Search for a finite F with FA cofinite.
    Cover(CoverArgs),
    /// Certify that finitely many translates of Δ(A) cover the group.
    DeltaLarge(DeltaLargeArgs),
    /// Find a Δ-large part of a partition of a large set.
    Partition(PartitionArgs),
    /// Build Y ⊆ A with Δ(Y) = X.
    BuildY(BuildArgs),
    /// Evaluate taxonomy properties.
    Classify(ClassifyArgs),
    /// Regenerate a fixture and compare it with the stored copy.
    Reproduce(ReproduceArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum DeltaMode {
    Exact,
    Window,
    Stabilized,
    Handoff,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum IterMode {
    Exact,
    Window,
    Handoff,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Prop {
    Sparse,
    NablaThin,
    AlmostPSmall,
    WeaklyPSmall,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Via {
    Cofinite,
    Maximal,
}

#[derive(Args, Debug)]
pub struct DeltaArgs {
    #[arg(long)]
    pub set: String,
    /// Defaults to exact when a closed form exists, window otherwise.
    #[arg(long, value_enum)]
    pub mode: Option<DeltaMode>,
    /// Only report members within this radius.
    #[arg(long)]
    pub region: Option<u64>,
}

#[derive(Args, Debug)]
pub struct IterateArgs {
    #[arg(long)]
    pub set: String,
    #[arg(long, default_value_t = 5)]
    pub steps: usize,
    #[arg(long, value_enum)]
    pub mode: Option<IterMode>,
}

#[derive(Args, Debug)]
pub struct CoverArgs {
    #[arg(long)]
    pub set: String,
    #[arg(long, default_value_t = 4)]
    pub max_size: usize,
}

#[derive(Args, Debug)]
pub struct DeltaLargeArgs {
    #[arg(long)]
    pub set: String,
    #[arg(long, value_enum, default_value = "cofinite")]
    pub via: Via,
    /// Translating set for the cofinite route; searched for when absent.
    #[arg(long)]
    pub cover: Option<String>,
    /// Largest almost-disjoint family tried on the maximal route.
    #[arg(long, default_value_t = 25)]
    pub cap: usize,
}

#[derive(Args, Debug)]
pub struct PartitionArgs {
    #[arg(long)]
    pub cover_set: String,
    /// Elements of F with F·X cofinite.
    #[arg(long, required_unless_present = "check_only")]
    pub cover: Option<String>,
    /// Part descriptions separated by `;`.
    #[arg(long)]
    pub parts: String,
    /// Only check the partition and report per-part Δ-evidence.
    #[arg(long)]
    pub check_only: bool,
}

#[derive(Args, Debug)]
pub struct BuildArgs {
    #[arg(long)]
    pub ambient: String,
    #[arg(long)]
    pub target: String,
    #[arg(long, default_value_t = 10)]
    pub steps: usize,
}

#[derive(Args, Debug)]
pub struct ClassifyArgs {
    /// Set to classify; a seeded random corpus when absent.
    #[arg(long, required_unless_present = "corpus")]
    pub set: Option<String>,
    #[arg(
        long,
        value_enum,
        value_delimiter = ',',
        default_value = "sparse,nabla-thin,almost-p-small,weakly-p-small"
    )]
    pub props: Vec<Prop>,
    /// Infinite subset tested for sparseness.
    #[arg(long)]
    pub x: Option<String>,
    #[arg(long, default_value_t = 3)]
    pub max_f: usize,
    /// Family size for almost P-smallness.
    #[arg(long, default_value_t = 4)]
    pub k: usize,
    /// Family size for weak P-smallness.
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    #[arg(long, default_value_t = 5)]
    pub iterations: usize,
    /// Number of random periodic sets to classify.
    #[arg(long)]
    pub corpus: Option<usize>,
}

#[derive(Args, Debug)]
pub struct ReproduceArgs {
    /// Fixture name.
    #[arg(required_unless_present_any = ["all", "list"])]
    pub name: Option<String>,
    #[arg(long)]
    pub all: bool,
    #[arg(long)]
    pub list: bool,
    /// Overwrite stored fixtures with the regenerated reports.
    #[arg(long)]
    pub bless: bool,
}
