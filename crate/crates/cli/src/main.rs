use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;

use threefold_cli::{parse_int_list, run_pipeline, Command, CubicSource, JobConfig, JobError, CACHE_ENV};

#[derive(Parser)]
#[command(name = "threefold", version, about = "Point counts, Weil polynomials and non-Jacobian certificates for cubic threefolds")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Count points over F_{p^k} for k = 1..r.
    Count(Opts),
    /// Find the lines over F_{p^r} (default r = 1).
    Lines(Opts),
    /// Reconstruct (and optionally extend) the Weil polynomial.
    Weil(Opts),
    /// Run the absolute simplicity criterion.
    Simple(Opts),
    /// Compare #A(F_q) with the Prym point-count bounds.
    Prym(Opts),
    /// Full pipeline ending in a non-Jacobian certificate.
    Certify(Opts),
    /// Search for singular points over F_{p^k}, k <= r.
    Singular(Opts),
    /// Classify a prime for the Klein cubic.
    KleinCase(Opts),
}

#[derive(Args)]
struct Opts {
    /// Builtin cubic: paper-x, fermat or klein.
    #[arg(long, conflicts_with = "cubic")]
    builtin: Option<String>,
    /// Cubic in the `e1 e2 e3 e4 e5 : c` text format.
    #[arg(long)]
    cubic: Option<PathBuf>,
    #[arg(long)]
    p: Option<u64>,
    #[arg(long)]
    r: Option<u32>,
    /// Field size for --counts and --poly.
    #[arg(long)]
    q: Option<BigInt>,
    /// Point counts N_1,N_2,... of the threefold.
    #[arg(long, value_parser = int_list)]
    counts: Option<IntList>,
    /// Weil polynomial coefficients, constant term first.
    #[arg(long, value_parser = int_list, conflicts_with = "counts")]
    poly: Option<IntList>,
    /// Base-change the Weil polynomial to F_{q^e}.
    #[arg(long)]
    extend: Option<u32>,
    /// Genus of the base curve for the Prym bounds (default dim + 1).
    #[arg(long)]
    genus: Option<usize>,
    /// Use the closed-form Weil polynomial of the Fermat cubic instead of counting.
    #[arg(long)]
    closed_form: bool,
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long, env = CACHE_ENV)]
    cache: Option<PathBuf>,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone)]
struct IntList(Vec<BigInt>);

fn int_list(s: &str) -> Result<IntList, String> {
    parse_int_list(s).map(IntList)
}

fn job_config(cli: Cli) -> JobConfig {
    let (command, o) = match cli.command {
        Cmd::Count(o) => (Command::Count, o),
        Cmd::Lines(o) => (Command::Lines, o),
        Cmd::Weil(o) => (Command::Weil, o),
        Cmd::Simple(o) => (Command::Simple, o),
        Cmd::Prym(o) => (Command::Prym, o),
        Cmd::Certify(o) => (Command::Certify, o),
        Cmd::Singular(o) => (Command::Singular, o),
        Cmd::KleinCase(o) => (Command::KleinCase, o),
    };
    let cubic = match (o.builtin, o.cubic) {
        (Some(name), _) => Some(CubicSource::Builtin(name)),
        (None, Some(path)) => Some(CubicSource::File(path)),
        (None, None) => None,
    };
    JobConfig {
        command,
        cubic,
        p: o.p,
        r: o.r,
        q: o.q,
        counts: o.counts.map(|l| l.0),
        poly: o.poly.map(|l| l.0),
        extend: o.extend,
        genus: o.genus,
        closed_form: o.closed_form,
        threads: o.threads,
        cache_path: o.cache,
        output: o.output,
    }
}

fn emit(doc: &serde_json::Value, output: Option<&PathBuf>) -> std::io::Result<()> {
    let text = serde_json::to_string_pretty(doc).expect("JSON values serialize");
    match output {
        Some(path) => std::fs::write(path, text + "\n"),
        None => writeln!(std::io::stdout().lock(), "{text}"),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = emit(&JobError::Usage(e.to_string()).to_json(), None);
            return ExitCode::from(1);
        }
    };
    let cfg = job_config(cli);
    let output = cfg.output.clone();
    let outcome = run_pipeline(cfg);
    if let Err(e) = emit(&outcome.document, output.as_ref()) {
        let path = output.unwrap_or_default();
        let _ = emit(&JobError::Io { path, source: e }.to_json(), None);
        return ExitCode::from(1);
    }
    ExitCode::from(outcome.status.code() as u8)
}
