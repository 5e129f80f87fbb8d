use std::path::PathBuf;
use std::process::ExitCode;

use apolar_cli::job::{run, Command, JobRequest};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "apolar", version, about = "Exact apolarity, real rank certificates and hyperdeterminants")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Catalecticant matrix, rank, determinant and kernel of a form
    Catalecticant(Opts),
    /// Antipolar form of a form with respect to a multidegree
    Antipolar(Opts),
    /// Test whether a point lies on the antipolar hypersurface
    RsMembership(Opts),
    /// Symbolic scan of ternary quartics with a forbidden point
    ForbiddenScan(Opts),
    /// Signature of a symmetric rational matrix given as JSON
    Signature(Opts),
    /// Real rank certificate for a (2,2d) biform
    RankCertify(Opts),
    /// Which side of the real rank boundary a (2,2d) biform lies on
    BoundarySide(Opts),
    /// Seeded sample of random (2,2d) biforms tallied by verdict
    SampleTypical(Opts),
    /// Binary form det(a1*T1 + a2*T2) of a pencil
    PencilForm(Opts),
    /// Hyperdeterminant of a 2 x n x n tensor
    Hyperdet(Opts),
    /// Real rank of a 2 x n x n tensor from the real roots of its pencil form
    Bergqvist(Opts),
    /// Hyperdeterminant of a 2 x 2 x 2 x 2 tensor
    Hyperdet2222(Opts),
    /// Complex rank, apolar generators and tangential test for a binary form
    BinaryRank(Opts),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
}

#[derive(Args)]
struct Opts {
    /// Read the input (form text or JSON) from a file
    #[arg(long, conflicts_with = "expr")]
    input: Option<PathBuf>,
    /// Inline input (form text or JSON)
    #[arg(long, allow_hyphen_values = true)]
    expr: Option<String>,
    /// Catalecticant multidegree, comma separated
    #[arg(long = "B", value_name = "B")]
    b: Option<String>,
    #[arg(long)]
    d: Option<u32>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    samples: Option<usize>,
    /// Point coordinates, comma separated rationals
    #[arg(long, allow_hyphen_values = true)]
    point: Option<String>,
    #[arg(long)]
    threads: Option<usize>,
    /// binary, ternary, p1xp1 or pNxp1; inferred from the variables by default
    #[arg(long)]
    ring: Option<String>,
    /// Write the JSON document here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write untruncated symbolic output here
    #[arg(long)]
    full_out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

impl Sub {
    fn split(self) -> (Command, Opts) {
        match self {
            Sub::Catalecticant(o) => (Command::Catalecticant, o),
            Sub::Antipolar(o) => (Command::Antipolar, o),
            Sub::RsMembership(o) => (Command::RsMembership, o),
            Sub::ForbiddenScan(o) => (Command::ForbiddenScan, o),
            Sub::Signature(o) => (Command::Signature, o),
            Sub::RankCertify(o) => (Command::RankCertify, o),
            Sub::BoundarySide(o) => (Command::BoundarySide, o),
            Sub::SampleTypical(o) => (Command::SampleTypical, o),
            Sub::PencilForm(o) => (Command::PencilForm, o),
            Sub::Hyperdet(o) => (Command::Hyperdet, o),
            Sub::Bergqvist(o) => (Command::Bergqvist, o),
            Sub::Hyperdet2222(o) => (Command::Hyperdet2222, o),
            Sub::BinaryRank(o) => (Command::BinaryRank, o),
        }
    }
}

fn main() -> ExitCode {
    let (command, opts) = Cli::parse().command.split();
    let Format::Json = opts.format;
    let mut job = JobRequest {
        command: Some(command),
        b: opts.b,
        d: opts.d,
        seed: opts.seed,
        samples: opts.samples,
        point: opts.point,
        threads: opts.threads,
        ring: opts.ring,
        full_out: opts.full_out,
        ..Default::default()
    };
    if let Some(text) = opts.expr {
        job.input = Some(text);
        job.input_source = Some("--expr".into());
    } else if let Some(path) = &opts.input {
        match std::fs::read_to_string(path) {
            Ok(text) => job.input = Some(text),
            Err(e) => {
                eprintln!("apolar: cannot read {}: {e}", path.display());
                return ExitCode::from(1);
            }
        }
        job.input_source = Some(path.display().to_string());
    }
    let out = run(&job);
    let text = out.to_pretty();
    match &opts.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("apolar: cannot write {}: {e}", path.display());
                return ExitCode::from(1);
            }
        }
        None => print!("{text}"),
    }
    if out.exit_code != 0 {
        if let Some(msg) = out.document["error"]["message"].as_str() {
            eprintln!("apolar: {msg}");
        }
    }
    ExitCode::from(out.exit_code as u8)
}
