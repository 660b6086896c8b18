mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use structlabel::codec::Scheme;
use structlabel::io::SourceFormat;
use structlabel::kernels::schedule;

use commands::CliError;

/// Encode, decode and score trees and graphs as per-token label sequences.
#[derive(Parser, Debug)]
#[command(name = "structlabel", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Turn a treebank into a label file.
    Encode(CodecArgs),
    /// Turn a label file back into a treebank.
    Decode(DecodeArgs),
    /// Encode, decode and score the result against the input.
    Roundtrip(RoundtripArgs),
    /// Score predictions against gold annotations.
    Eval(EvalArgs),
    /// Run the numeric invariant suite of the diffusion and adversarial kernels.
    KernelsSelfcheck(SelfcheckArgs),
}

#[derive(Args, Debug)]
struct SchemeArgs {
    /// Label scheme, e.g. dep-4b, tetra, gr-brk:3.
    #[arg(long)]
    scheme: Scheme,
    /// Plane count, graph schemes only.
    #[arg(long)]
    k: Option<usize>,
}

#[derive(Args, Debug)]
struct CodecArgs {
    #[command(flatten)]
    scheme: SchemeArgs,
    /// Input format: conllu, conllu-enhanced, ptb or sdp.
    #[arg(long)]
    format: SourceFormat,
    /// Input file; '-' reads standard input.
    input: PathBuf,
    /// Output file instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct DecodeArgs {
    /// Scheme to decode with; must agree with the file header when given.
    #[arg(long)]
    scheme: Option<Scheme>,
    #[arg(long)]
    k: Option<usize>,
    /// Output format; defaults to ptb, conllu or conllu-enhanced by scheme.
    #[arg(long)]
    format: Option<SourceFormat>,
    /// Label file; '-' reads standard input.
    input: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct RoundtripArgs {
    #[command(flatten)]
    codec: CodecArgs,
    /// Comma-separated labels ignored when scoring constituents.
    #[arg(long, value_delimiter = ',')]
    delete_labels: Option<Vec<String>>,
    /// Print the report as JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct EvalArgs {
    /// Format of both files: conllu, conllu-enhanced, ptb, sdp or labels.
    #[arg(long)]
    format: String,
    gold: PathBuf,
    pred: PathBuf,
    #[arg(long, value_delimiter = ',')]
    delete_labels: Option<Vec<String>>,
    #[arg(long)]
    json: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SelfcheckArgs {
    /// Diffusion steps.
    #[arg(long = "T", default_value_t = schedule::DEFAULT_STEPS)]
    steps: usize,
    /// Denoising stride.
    #[arg(long = "s", default_value_t = schedule::DEFAULT_SKIP)]
    skip: usize,
    #[arg(long, default_value_t = schedule::DEFAULT_BETA_START)]
    beta_start: f64,
    #[arg(long, default_value_t = schedule::DEFAULT_BETA_END)]
    beta_end: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Gumbel-softmax temperature.
    #[arg(long, default_value_t = 1.0)]
    tau: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn scheme_with_k(scheme: Scheme, k: Option<usize>) -> Result<Scheme, CliError> {
    match k {
        None => Ok(scheme),
        Some(0) => Err(CliError::Usage("--k must be at least 1".into())),
        Some(k) if scheme.planes().is_some() => Ok(scheme.with_planes(k)),
        Some(_) => Err(CliError::Usage(format!(
            "--k applies to graph schemes only, not {scheme}"
        ))),
    }
}

fn configure_threads() -> Result<(), CliError> {
    if let Ok(v) = std::env::var("STRUCTLABEL_THREADS") {
        let n: usize = v
            .parse()
            .map_err(|_| CliError::Usage(format!("STRUCTLABEL_THREADS must be a positive integer, got '{v}'")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool, CliError> {
    configure_threads()?;
    match cli.command {
        Command::Encode(a) => {
            let scheme = scheme_with_k(a.scheme.scheme, a.scheme.k)?;
            commands::cmd_encode(scheme, a.format, &a.input, a.out.as_deref())
        }
        Command::Decode(a) => {
            let scheme = match a.scheme {
                Some(s) => Some(scheme_with_k(s, a.k)?),
                None if a.k.is_some() => return Err(CliError::Usage("--k needs --scheme".into())),
                None => None,
            };
            commands::cmd_decode(scheme, a.format, &a.input, a.out.as_deref())
        }
        Command::Roundtrip(a) => {
            let scheme = scheme_with_k(a.codec.scheme.scheme, a.codec.scheme.k)?;
            commands::cmd_roundtrip(
                scheme,
                a.codec.format,
                &a.codec.input,
                a.codec.out.as_deref(),
                a.delete_labels.as_deref(),
                a.json,
            )
        }
        Command::Eval(a) => commands::cmd_eval(
            &a.format,
            &a.gold,
            &a.pred,
            a.delete_labels.as_deref(),
            a.json,
            a.out.as_deref(),
        ),
        Command::KernelsSelfcheck(a) => {
            let cfg = structlabel::kernels::selfcheck::SelfCheckConfig {
                steps: a.steps,
                skip: a.skip,
                beta_start: a.beta_start,
                beta_end: a.beta_end,
                seed: a.seed,
                tau: a.tau,
                ..Default::default()
            };
            commands::cmd_selfcheck(&cfg, a.out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
