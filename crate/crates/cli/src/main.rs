use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use opent_cli::pool::workers_from_env;
use opent_cli::{
    run_diagonal, run_saturation, run_spectrum, run_sweep, CliError, DiagonalConfig, RawConfig,
    SaturationConfig, SpectrumConfig, SweepConfig,
};

#[derive(Parser)]
#[command(
    name = "opent",
    version,
    about = "Operator entanglement of coupled kicked tops"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Entropy time series over a (k, eps) grid, one CSV per point.
    Sweep(Overrides),
    /// Schmidt-coefficient statistics against the Laguerre law.
    Spectrum(Overrides),
    /// Entropies of exp(-i alpha Jz Jz) and of a product rotation.
    Diagonal(Overrides),
    /// Predicted saturation entropy for subsystem dimensions N <= M.
    Saturation(Overrides),
}

/// Values given here replace the matching keys of `--config`.
#[derive(Args, Default)]
struct Overrides {
    /// key = value configuration file
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    j1: Option<String>,
    /// Spin of the second top; comma-separated list for `spectrum`
    #[arg(long)]
    j2: Option<String>,
    /// Kick strength; comma-separated list for `sweep`
    #[arg(long)]
    k: Option<String>,
    /// Coupling strength; comma-separated list for `sweep`
    #[arg(long)]
    eps: Option<String>,
    #[arg(long)]
    nmax: Option<String>,
    #[arg(long)]
    stride: Option<String>,
    #[arg(long)]
    bins: Option<String>,
    #[arg(long)]
    window_start: Option<String>,
    #[arg(long)]
    window_end: Option<String>,
    #[arg(long)]
    window_stride: Option<String>,
    /// Comma-separated coupling angles for `diagonal`
    #[arg(long)]
    alpha: Option<String>,
    /// Product-rotation angle for `diagonal`
    #[arg(long)]
    p: Option<String>,
    /// Smaller dimension for `saturation`
    #[arg(long)]
    n: Option<String>,
    /// Larger dimension for `saturation`
    #[arg(long)]
    m: Option<String>,
    /// Output directory
    #[arg(long)]
    out: Option<String>,
}

impl Overrides {
    fn into_raw(self) -> Result<RawConfig, CliError> {
        let mut raw = match &self.config {
            Some(path) => RawConfig::load(path)?,
            None => RawConfig::default(),
        };
        let pairs = [
            ("j1", self.j1),
            ("j2", self.j2),
            ("k", self.k),
            ("eps", self.eps),
            ("nmax", self.nmax),
            ("stride", self.stride),
            ("bins", self.bins),
            ("window_start", self.window_start),
            ("window_end", self.window_end),
            ("window_stride", self.window_stride),
            ("alpha", self.alpha),
            ("p", self.p),
            ("n", self.n),
            ("m", self.m),
            ("out", self.out),
        ];
        for (key, value) in pairs {
            if let Some(v) = value {
                raw.set(key, v);
            }
        }
        Ok(raw)
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\")
        .replace('"', "\\\"")
        .replace('\n', " ")
}

fn report_error(e: &CliError) {
    eprintln!(
        "error kind={} message=\"{}\"",
        e.kind(),
        escape(&e.to_string())
    );
}

fn run(command: Command) -> Result<bool, CliError> {
    match command {
        Command::Sweep(o) => {
            let cfg = SweepConfig::from_raw(&o.into_raw()?)?;
            let report = run_sweep(&cfg, workers_from_env())?;
            for p in &report.points {
                match &p.result {
                    Ok(path) => println!("wrote {}", path.display()),
                    Err(e) => eprintln!(
                        "point_failed k={} eps={} kind={} message=\"{}\"",
                        p.k,
                        p.eps,
                        e.kind(),
                        escape(&e.to_string())
                    ),
                }
            }
            Ok(report.all_ok())
        }
        Command::Spectrum(o) => {
            let cfg = SpectrumConfig::from_raw(&o.into_raw()?)?;
            for r in run_spectrum(&cfg, workers_from_env())? {
                println!("{r}");
            }
            Ok(true)
        }
        Command::Diagonal(o) => {
            let cfg = DiagonalConfig::from_raw(&o.into_raw()?)?;
            let r = run_diagonal(&cfg)?;
            println!("wrote {}", r.path.display());
            Ok(true)
        }
        Command::Saturation(o) => {
            let cfg = SaturationConfig::from_raw(&o.into_raw()?)?;
            println!("{}", run_saturation(&cfg)?);
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            report_error(&e);
            ExitCode::FAILURE
        }
    }
}
