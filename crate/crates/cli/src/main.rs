use clap::{Args, Parser, Subcommand};
use nygaard_cli::config::{Layer, RunConfig};
use nygaard_cli::envelope::{pretty, ResultEnvelope, VERSION};
use nygaard_cli::regress::fixture_regress;
use nygaard_cli::{commands, CliError, Result};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(name = "nygaard", version, about = "Exact Witt, de Rham-Witt, q-de Rham, A_crys and syntomic computations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Witt vector laws and the perfectoid square relations
    Witt(Flags),
    /// Décalage of a named integral complex
    Eta(Flags),
    /// Nygaard-filtered de Rham-Witt checks on the torus
    Derham(Flags),
    /// q-de Rham identification checks on the torus
    Qderham(Flags),
    /// Divided-power envelope checks and Frobenius fixed points
    Acrys(Flags),
    /// Z/p^r(i) in the charp, q or acrys model
    Syntomic(Flags),
    /// Recompute a fixture directory and compare payloads
    Regress(RegressArgs),
}

#[derive(Args, Default)]
struct Flags {
    #[arg(short = 'p', long = "prime")]
    p: Option<String>,
    #[arg(short = 'n', long = "precision")]
    n: Option<String>,
    #[arg(short = 'r')]
    r: Option<String>,
    /// (q-1)-adic truncation
    #[arg(short = 'N', long = "trunc")]
    big_n: Option<String>,
    /// depth of x^{1/p^e}
    #[arg(short = 'e', long = "depth")]
    e: Option<String>,
    #[arg(short = 'W', long = "weight-bound")]
    w: Option<String>,
    /// weight box |m|∞ ≤ M
    #[arg(short = 'M', long = "box")]
    m: Option<String>,
    /// orbit cap; searched when absent
    #[arg(short = 'V', long = "cap")]
    v: Option<String>,
    #[arg(short = 'd', long = "dim")]
    d: Option<String>,
    #[arg(short = 'i', long = "twist", allow_hyphen_values = true)]
    i: Option<String>,
    #[arg(long)]
    model: Option<String>,
    /// scalar for eta: an integer, p or p2
    #[arg(long)]
    f: Option<String>,
    /// named complex for eta
    #[arg(long)]
    fixture: Option<String>,
    /// flat key = value file; flags override it
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args)]
struct RegressArgs {
    #[arg(default_value = "fixtures")]
    dir: PathBuf,
    /// rewrite payloads from the current engine
    #[arg(long)]
    bless: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    threads: Option<usize>,
}

impl Flags {
    fn layer(&self) -> Result<Layer> {
        let mut l = Layer::default();
        let pairs = [
            ("p", &self.p),
            ("n", &self.n),
            ("r", &self.r),
            ("N", &self.big_n),
            ("e", &self.e),
            ("W", &self.w),
            ("M", &self.m),
            ("V", &self.v),
            ("d", &self.d),
            ("i", &self.i),
            ("model", &self.model),
            ("f", &self.f),
            ("fixture", &self.fixture),
        ];
        for (k, v) in pairs {
            if let Some(v) = v {
                l.set(k, v.clone())?;
            }
        }
        let file = match &self.config {
            Some(path) => Layer::from_file(path)?,
            None => Layer::default(),
        };
        Ok(l.over(&file))
    }
}

fn set_threads(threads: Option<usize>) -> Result<()> {
    if let Some(t) = threads {
        if t == 0 {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
    }
    Ok(())
}

fn emit(text: &str, out: &Option<PathBuf>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, format!("{text}\n"))?,
        None => println!("{text}"),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    let (name, flags) = match cli.command {
        Command::Regress(args) => {
            set_threads(args.threads)?;
            let report = fixture_regress(&args.dir, args.bless)?;
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            emit(&pretty(&report.to_value()), &args.out)?;
            if !report.passed() {
                return Err(CliError::Regression(format!("mismatched fixtures: {}", report.mismatched.join(", "))));
            }
            return Ok(());
        }
        Command::Witt(f) => ("witt", f),
        Command::Eta(f) => ("eta", f),
        Command::Derham(f) => ("derham", f),
        Command::Qderham(f) => ("qderham", f),
        Command::Acrys(f) => ("acrys", f),
        Command::Syntomic(f) => ("syntomic", f),
    };
    set_threads(flags.threads)?;
    let cfg = RunConfig::resolve(&flags.layer()?)?;
    let start = Instant::now();
    let payload = commands::run(name, &cfg)?;
    let env = ResultEnvelope {
        version: VERSION.to_string(),
        command: name.to_string(),
        config: cfg.echo(name),
        payload,
        elapsed_ms: start.elapsed().as_millis() as u64,
    };
    emit(&pretty(&env.to_value()), &flags.out)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
