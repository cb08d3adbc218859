use clap::{Args, Parser, Subcommand, ValueEnum};

use toricext::cli::{self, Job};

#[derive(Parser)]
#[command(
    name = "toricext",
    version,
    about = "Exact lattice computations for affine toric varieties and a divisor-based extension decision"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Classify a lattice presentation: primality, origin, dimension,
    /// Hilbert basis, kernel, dichotomy flags
    Classify(Common),
    /// Hilbert basis of the nonnegative kernel of A
    HilbertBasis(Common),
    /// Saturate the semigroup generated by the rows of A and report
    /// whether it was already saturated
    Saturate(Common),
    /// Minimal doubly represented monoid element with disjoint-support
    /// representations
    Obstruction(Common),
    /// Build the model non-extendable problem for a presentation
    Counterexample(Common),
    /// Decide extendability of a divisor-presented map
    DecideExtension(Common),
}

#[derive(Args)]
struct Common {
    /// Input document path, "-" for stdin
    #[arg(long)]
    input: String,
    /// Report format
    #[arg(long, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,
    /// Cap on fiber selections examined (TORIC_BUDGET overrides)
    #[arg(long)]
    budget: Option<u64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

fn main() {
    let cli = Cli::parse();
    let (command, common) = match &cli.command {
        Cmd::Classify(c) => (cli::Command::Classify, c),
        Cmd::HilbertBasis(c) => (cli::Command::HilbertBasis, c),
        Cmd::Saturate(c) => (cli::Command::Saturate, c),
        Cmd::Obstruction(c) => (cli::Command::Obstruction, c),
        Cmd::Counterexample(c) => (cli::Command::Counterexample, c),
        Cmd::DecideExtension(c) => (cli::Command::DecideExtension, c),
    };
    let job = Job {
        command,
        input_path: common.input.clone(),
        format: match common.format {
            FormatArg::Text => cli::Format::Text,
            FormatArg::Json => cli::Format::Json,
        },
        budget: common.budget,
    };
    match cli::run(&job) {
        Ok(report) => print!("{report}"),
        Err(f) => {
            eprintln!("{}", f.message);
            std::process::exit(f.exit_code);
        }
    }
}
