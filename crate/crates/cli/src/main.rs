mod commands;
mod config;

use std::fs;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::{Artifact, CliError};
use config::RunConfig;

/// Batch verification runs for vector-valued automorphic forms on PSL2(Z).
#[derive(Parser)]
#[command(name = "vvaf", version)]
struct Cli {
    #[command(subcommand)]
    group: Group,
}

#[derive(Subcommand)]
enum Group {
    /// Representations of PSL2(Z).
    Repr {
        #[command(subcommand)]
        action: ReprAction,
    },
    /// Vector-valued forms and their coefficients.
    Vvaf {
        #[command(subcommand)]
        action: VvafAction,
    },
    /// Completed L-functions.
    Lfunc {
        #[command(subcommand)]
        action: LfuncAction,
    },
    /// Exponential sums of coefficients.
    Expsum {
        #[command(subcommand)]
        action: ExpsumAction,
    },
}

#[derive(Subcommand)]
enum ReprAction {
    /// Check the defining relations.
    Check(Common),
    /// Classify the growth of the representation.
    Growth(Common),
}

#[derive(Subcommand)]
enum VvafAction {
    /// Write the q-expansions.
    Coeffs(Common),
    /// Check the transformation law at sample points.
    TransformCheck(Common),
    /// Coefficient growth against the predicted exponent.
    Growth(Common),
    /// Mean-square coefficient sums.
    Meansq(Common),
}

#[derive(Subcommand)]
enum LfuncAction {
    /// Completed L-values by both methods.
    Eval(Common),
    /// Functional-equation residuals for both signs.
    FeScan(Common),
}

#[derive(Subcommand)]
enum ExpsumAction {
    /// Twisted sums over a grid of angles and cutoffs.
    Scan(Common),
}

#[derive(Args)]
struct Common {
    /// Key-value config file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Artifact directory; the artifact goes to stdout when absent.
    #[arg(long)]
    out_dir: Option<PathBuf>,
    #[arg(long, value_parser = ["json", "csv"])]
    format: Option<String>,
    #[arg(long)]
    builtin: Option<String>,
    /// JSON representation or form bundle.
    #[arg(long)]
    input: Option<PathBuf>,
    /// `key=value`; the only key is `a`.
    #[arg(long)]
    param: Vec<String>,
    /// Truncation.
    #[arg(short = 'N')]
    n: Option<i64>,
    /// Comma-separated points `s`, e.g. `7,6+3i`.
    #[arg(long, allow_hyphen_values = true)]
    s: Option<String>,
    /// Comma-separated angles, rational or decimal.
    #[arg(long)]
    theta: Option<String>,
    /// Comma-separated cutoffs.
    #[arg(long)]
    x: Option<String>,
}

impl Common {
    fn resolve(&self) -> Result<RunConfig, String> {
        let mut cfg = match &self.config {
            Some(p) => {
                let text = fs::read_to_string(p).map_err(|e| format!("cannot read {}: {e}", p.display()))?;
                RunConfig::parse(&text).map_err(|e| format!("{}: {e}", p.display()))?
            }
            None => RunConfig::default(),
        };
        let mut set = |k: &str, v: Option<String>| match v {
            Some(v) => cfg.set(k, &v),
            None => Ok(()),
        };
        set("seed", self.seed.map(|v| v.to_string()))?;
        set("out_dir", self.out_dir.as_ref().map(|p| p.display().to_string()))?;
        set("format", self.format.clone())?;
        set("builtin", self.builtin.clone())?;
        set("input", self.input.as_ref().map(|p| p.display().to_string()))?;
        set("n", self.n.map(|v| v.to_string()))?;
        set("s", self.s.clone())?;
        set("theta", self.theta.clone())?;
        set("x", self.x.clone())?;
        for p in &self.param {
            match p.split_once('=') {
                Some(("a", v)) => cfg.set("param_a", v)?,
                _ => return Err(format!("unsupported parameter `{p}`, expected a=<complex>")),
            }
        }
        Ok(cfg)
    }
}

fn emit(cfg: &RunConfig, art: &Artifact) -> Result<(), String> {
    match &cfg.out_dir {
        Some(dir) => {
            fs::create_dir_all(dir).map_err(|e| format!("cannot create {}: {e}", dir.display()))?;
            let path = dir.join(format!("{}.{}", art.stem, cfg.format.extension()));
            fs::write(&path, &art.body).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
            println!("{} {}", if art.failed { "FAIL" } else { "PASS" }, path.display());
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(art.body.as_bytes()).map_err(|e| e.to_string())?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (common, run): (&Common, fn(&RunConfig) -> Result<Artifact, CliError>) = match &cli.group {
        Group::Repr { action: ReprAction::Check(c) } => (c, commands::repr_check),
        Group::Repr { action: ReprAction::Growth(c) } => (c, commands::repr_growth),
        Group::Vvaf { action: VvafAction::Coeffs(c) } => (c, commands::vvaf_coeffs),
        Group::Vvaf { action: VvafAction::TransformCheck(c) } => (c, commands::vvaf_transform_check),
        Group::Vvaf { action: VvafAction::Growth(c) } => (c, commands::vvaf_growth),
        Group::Vvaf { action: VvafAction::Meansq(c) } => (c, commands::vvaf_meansq),
        Group::Lfunc { action: LfuncAction::Eval(c) } => (c, commands::lfunc_eval),
        Group::Lfunc { action: LfuncAction::FeScan(c) } => (c, commands::lfunc_fe_scan),
        Group::Expsum { action: ExpsumAction::Scan(c) } => (c, commands::expsum_scan),
    };
    let cfg = match common.resolve() {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match run(&cfg) {
        Ok(art) => {
            if let Err(e) = emit(&cfg, &art) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            if art.failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(CliError::Usage(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(CliError::Verify(e)) => {
            eprintln!("FAIL: {e}");
            ExitCode::from(1)
        }
    }
}
