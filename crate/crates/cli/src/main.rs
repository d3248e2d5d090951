mod commands;
mod report;
mod sources;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use report::{Report, INPUT_ERROR};

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Core(growthlab::Error),
}

impl From<growthlab::Error> for CliError {
    fn from(e: growthlab::Error) -> Self {
        CliError::Core(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(msg) => f.write_str(msg),
            CliError::Core(e) => e.fmt(f),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_capacity() => report::Status::Capacity.exit_code(),
            _ => INPUT_ERROR,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "growthlab", version, about = "Growth sequences, bound checks, graph classes and coding witnesses")]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Worker threads; defaults to one per core.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Single worker and sequential search order.
    #[arg(long, global = true)]
    pub deterministic: bool,
    /// Largest tuple space a single orbit count may walk.
    #[arg(long, global = true)]
    pub budget_tuples: Option<u64>,
    /// Backtracking nodes per search.
    #[arg(long, global = true)]
    pub budget_nodes: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Labelled and all-tuple growth sequences of a grammar expression.
    Seq(SeqArgs),
    /// Growth bound checks over a computed prefix.
    Bounds(BoundsArgs),
    /// Compare a computed prefix against a local OEIS b-file.
    Oeis(OeisArgs),
    /// Hereditary graph classes, half-graphs and flipped paths.
    Graphs {
        #[command(subcommand)]
        command: GraphCommand,
    },
    /// Order, coding and tuple-coding witnesses in a finite relation.
    Witness(WitnessArgs),
}

#[derive(Args, Debug)]
pub struct ExprInput {
    /// Expression text, e.g. `(wr (wr (finite 1)))`.
    #[arg(long)]
    pub expr: Option<String>,
    /// File holding the expression.
    pub file: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SeqArgs {
    #[command(flatten)]
    pub input: ExprInput,
    #[arg(long, default_value_t = 10)]
    pub max_n: usize,
    /// Check each `l_n` against orbit counts on truncations.
    #[arg(long)]
    pub oracle_check: bool,
    /// Largest `n` the oracle is run for.
    #[arg(long, default_value_t = 5)]
    pub oracle_max_n: usize,
    /// Single truncation level instead of `m = n` and `m = n + 1`.
    #[arg(long)]
    pub trunc_m: Option<usize>,
}

#[derive(Args, Debug)]
pub struct BoundsArgs {
    #[command(flatten)]
    pub input: ExprInput,
    #[arg(long, default_value_t = 50)]
    pub max_n: usize,
    /// Comma list: `c:d` entries form the cellular grid, bare `c` entries the
    /// factorial constants.
    #[arg(long)]
    pub grid: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Builtin {
    Bell,
    Bell2,
    TrivialMeet,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Field {
    L,
    S,
}

#[derive(Args, Debug)]
pub struct OeisArgs {
    #[arg(long)]
    pub bfile: PathBuf,
    #[arg(long, value_enum)]
    pub builtin: Option<Builtin>,
    #[arg(long)]
    pub expr: Option<String>,
    #[arg(long)]
    pub expr_file: Option<PathBuf>,
    /// Which sequence of an expression to compare.
    #[arg(long, value_enum, default_value_t = Field::L)]
    pub field: Field,
    /// Defaults to the last b-file index.
    #[arg(long)]
    pub max_n: Option<usize>,
    /// Compare b-file entry `n` with computed index `n - offset`.
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    pub offset: i64,
}

#[derive(Subcommand, Debug)]
pub enum GraphCommand {
    /// Labelled members of a hereditary class on `[n]`.
    Count(CountArgs),
    /// Largest semi-induced half-graph.
    #[command(name = "semiinduced")]
    SemiInduced {
        /// Graph file or `half:t`, `path:k`, `complete:n`, `empty:n`, `biclique:s:t`.
        #[arg(long)]
        graph: String,
        /// Let the two sides share vertices.
        #[arg(long)]
        lax: bool,
    },
    /// Recover 3 copies of `P_k` from seeded random flips.
    #[command(name = "fliproundtrip")]
    FlipRoundTrip {
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 100)]
        seeds: u64,
        #[arg(long, default_value_t = 3)]
        copies: usize,
        /// Every flip spec instead of random ones.
        #[arg(long)]
        exhaustive: bool,
    },
}

#[derive(Args, Debug)]
pub struct CountArgs {
    /// Class file: optional `mode=` line, graphs separated by `---`.
    #[arg(long)]
    pub class: Option<PathBuf>,
    #[arg(long, value_delimiter = ',')]
    pub generators: Vec<String>,
    #[arg(long, value_delimiter = ',')]
    pub forbidden: Vec<String>,
    /// Orders to count; defaults to `1..=max-n`.
    #[arg(long, value_delimiter = ',')]
    pub n: Vec<usize>,
    #[arg(long, default_value_t = 5)]
    pub max_n: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum WitnessKind {
    Order,
    Coding,
    Tuplecoding,
}

#[derive(Args, Debug)]
pub struct WitnessArgs {
    #[arg(value_enum)]
    pub kind: WitnessKind,
    /// Relation file or `e1e2:m0`, `less:a`, `pairing:a`, `pair-parity`,
    /// `half:t`, `empty:a:r`, `full:a:r`.
    #[arg(long)]
    pub relation: String,
    /// `n` for order witnesses, `m` for coding grids.
    #[arg(long)]
    pub size: usize,
    /// Tuple length for tuple coding.
    #[arg(long, default_value_t = 1)]
    pub k: usize,
}

fn run(cli: &Cli) -> Result<Report, CliError> {
    match &cli.command {
        Command::Seq(a) => commands::seq(cli, a),
        Command::Bounds(a) => commands::bounds(cli, a),
        Command::Oeis(a) => commands::oeis(cli, a),
        Command::Graphs { command } => commands::graphs(cli, command),
        Command::Witness(a) => commands::witness(cli, a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = if cli.deterministic { Some(1) } else { cli.jobs };
    if let Some(t) = threads {
        if t == 0 {
            eprintln!("error: --jobs must be positive");
            return ExitCode::from(INPUT_ERROR);
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .expect("global pool is configured once");
    }
    match run(&cli) {
        Ok(report) => {
            let text = match cli.format {
                Format::Json => report.to_json(),
                Format::Csv => report.to_csv(),
            };
            let mut out = std::io::stdout().lock();
            if out.write_all(text.as_bytes()).and_then(|_| out.flush()).is_err() {
                return ExitCode::from(INPUT_ERROR);
            }
            ExitCode::from(report.status.exit_code())
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
