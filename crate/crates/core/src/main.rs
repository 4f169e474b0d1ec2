use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use dimlab::dimension::{Budget, RANK_BUDGET_ENV};
use dimlab::harness::{emit_plot_data, emit_report, load_scenario, run_scenario, Kind, OutputFormat, Report};
use dimlab::Error;

#[derive(Parser)]
#[command(name = "dimlab", version, about = "Q-tilde expansions, F_xi transforms and packing-dimension experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Digit expansions and cylinder tables
    Expand(RunArgs),
    /// F_xi images of words and points
    Transform(RunArgs),
    /// Box, cylinder-family and oracle dimension estimates
    Dimension(RunArgs),
    /// Entropy ratio, sparse set T, B and the verdict
    Criteria(RunArgs),
    /// Dimension of E and F_xi(E) against the verdict
    Preservation(RunArgs),
    /// The test set L and the 1/(1+B) bound
    Counterexample(RunArgs),
    /// Load and validate a scenario without running it
    Validate(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "json")]
    format: String,
    /// Maximum enumeration rank; at most 2^N cylinders are enumerated
    #[arg(long)]
    rank_budget: Option<u32>,
    #[arg(long)]
    seed: Option<u64>,
}

fn budget(args: &RunArgs, from_doc: Option<u32>) -> Budget {
    if let Some(n) = args.rank_budget {
        return Budget::new(n);
    }
    if std::env::var(RANK_BUDGET_ENV).is_ok() {
        return Budget::from_env();
    }
    from_doc.map_or_else(Budget::default, Budget::new)
}

fn emit(report: &Report, args: &RunArgs, doc_out: Option<(Option<String>, Option<String>)>) -> Result<(), Error> {
    let (doc_dir, doc_format) = doc_out.unwrap_or((None, None));
    let format: OutputFormat = match (&args.format, doc_format) {
        (f, Some(d)) if f == "json" => d.parse()?,
        (f, _) => f.parse()?,
    };
    let dir = args.out.clone().or(doc_dir.map(PathBuf::from));
    match dir {
        Some(dir) => {
            emit_report(report, &dir, format)?;
            emit_plot_data(report, &dir)?;
        }
        None => print!("{}", report.to_json()?),
    }
    Ok(())
}

fn execute(kind: Option<Kind>, args: &RunArgs) -> ExitCode {
    let scenario = match load_scenario(&args.config) {
        Ok(mut s) => {
            if let Some(seed) = args.seed {
                s.doc.seed = Some(seed);
            }
            s
        }
        Err(e) => return fail(kind, &e, args),
    };
    let Some(kind) = kind else {
        let summary = serde_json::json!({
            "valid": true,
            "kind": scenario.kind(),
            "q_min": dimlab::rational::format_rational(scenario.q.q_min()),
        });
        println!("{summary}");
        return ExitCode::SUCCESS;
    };
    if scenario.kind() != kind {
        let e = Error::Schema(format!("subcommand {kind} cannot run a {} scenario", scenario.kind()));
        return fail(Some(kind), &e, args);
    }
    let report = run_scenario(&scenario, &budget(args, scenario.doc.rank_budget));
    let out = scenario.doc.output.as_ref().map(|o| (o.dir.clone(), o.format.clone()));
    if let Err(e) = emit(&report, args, out) {
        eprintln!("dimlab: {e}");
        return ExitCode::FAILURE;
    }
    if let Some(e) = &report.error {
        eprintln!("dimlab: {e}");
        return ExitCode::FAILURE;
    }
    ExitCode::SUCCESS
}

fn fail(kind: Option<Kind>, err: &Error, args: &RunArgs) -> ExitCode {
    eprintln!("dimlab: {err}");
    let report = Report::failure(kind, err);
    if let Err(e) = emit(&report, args, None) {
        eprintln!("dimlab: {e}");
    }
    ExitCode::FAILURE
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, args) = match &cli.command {
        Command::Expand(a) => (Some(Kind::Expand), a),
        Command::Transform(a) => (Some(Kind::Transform), a),
        Command::Dimension(a) => (Some(Kind::Dimension), a),
        Command::Criteria(a) => (Some(Kind::Criteria), a),
        Command::Preservation(a) => (Some(Kind::Preservation), a),
        Command::Counterexample(a) => (Some(Kind::Counterexample), a),
        Command::Validate(a) => (None, a),
    };
    execute(kind, args)
}
