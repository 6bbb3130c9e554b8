use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use twisted_hh::cli::{normalize, run, CliError, Command, JobSpec, Overrides};

#[derive(Parser)]
#[command(name = "twisted-hh", version, about = "Hochschild cohomology of twisted tensor products")]
struct Cli {
    #[command(subcommand)]
    command: Option<Sub>,
    /// Job file (JSON); a JSON report is accepted too and reruns its job.
    #[arg(long, global = true)]
    job: Option<PathBuf>,
    /// Truncation degree D.
    #[arg(long, global = true)]
    max_degree: Option<usize>,
    /// Q, Fp:p or Qq.
    #[arg(long, global = true)]
    field: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = Output::Text)]
    output: Output,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Output {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Sub {
    /// Hochschild cohomology dimensions and representative cocycles.
    ComputeHh,
    /// Compare the factorwise decomposition with the product's own bar complex.
    Decompose,
    /// Cup products of basis classes, from two pipelines.
    CupTable,
    /// Brackets of basis classes, from three pipelines.
    BracketTable,
    /// Verify the presentation of HH of a two-factor quantum complete intersection.
    VerifyQci {
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Verify a quantum complete intersection with three or more factors.
    VerifyQciIterated,
    /// Verify the skew group algebra decomposition.
    VerifySkew,
    /// Check algebra axioms and the bicharacter.
    Validate,
}

fn execute(cli: &Cli) -> Result<twisted_hh::cli::Report, CliError> {
    let job = match &cli.job {
        Some(path) => JobSpec::from_json(&std::fs::read_to_string(path)?)?,
        None => JobSpec::default(),
    };
    let mut o = Overrides { field: cli.field.clone(), max_degree: cli.max_degree, ..Default::default() };
    o.command = cli.command.as_ref().map(|c| match c {
        Sub::ComputeHh => Command::ComputeHh,
        Sub::Decompose => Command::Decompose,
        Sub::CupTable => Command::CupTable,
        Sub::BracketTable => Command::BracketTable,
        Sub::VerifyQci { m, n } => {
            o.m = *m;
            o.n = *n;
            Command::VerifyQci
        }
        Sub::VerifyQciIterated => Command::VerifyQciIterated,
        Sub::VerifySkew => Command::VerifySkew,
        Sub::Validate => Command::Validate,
    });
    run(&normalize(job, &o)?)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match execute(&cli) {
        Ok(report) => {
            match cli.output {
                Output::Text => print!("{}", report.to_text()),
                Output::Json => println!("{}", report.to_json()),
            }
            if report.passed {
                ExitCode::SUCCESS
            } else {
                for f in &report.failures {
                    eprintln!("verification failed: {f}");
                }
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
