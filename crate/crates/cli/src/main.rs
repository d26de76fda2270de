mod config;
mod error;
mod run;

use clap::{Args, Parser, Subcommand, ValueEnum};
use config::{Figure, Mode, PartialConfig, RunConfig};
use error::CliError;
use glance::approx::GForm;
use rayon::prelude::*;
use run::{execute, RunOptions, Summary};
use std::path::PathBuf;

/// Parabolic level-crossing dynamics: exact runs, regime approximations,
/// connection formulas and figure data.
#[derive(Parser)]
#[command(name = "glance", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone, Default)]
struct Common {
    /// Flat JSON config; flags override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(flatten)]
    fields: PartialConfig,
}

#[derive(Clone, Copy, ValueEnum)]
enum Regime {
    Auto,
    Airy,
    Pcf,
    Bessel,
}

#[derive(Clone, Copy, ValueEnum)]
enum GFormArg {
    Derived,
    Printed,
}

#[derive(Subcommand)]
enum Cmd {
    /// Integrate the coupled amplitudes from the lower level.
    Simulate(Common),
    /// Regime approximation against the exact solution.
    Approx {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "auto")]
        regime: Regime,
        /// Report the homogeneous curve instead of the corrected one.
        #[arg(long)]
        homogeneous: bool,
        /// Airy correction form.
        #[arg(long, value_enum, default_value = "derived")]
        g_form: GFormArg,
    },
    /// Three-segment connection with the amplitude-phase tail (alpha = 0).
    Connect {
        #[command(flatten)]
        common: Common,
        /// Report the match without the tail.
        #[arg(long)]
        no_tail: bool,
    },
    /// Final amplitude from the exact dynamics with an uncertainty; t_f is the extrapolation start.
    Stokes(Common),
    /// Closed-form integral identities and Wronskians; exit 0 iff all pass.
    Verify {
        #[arg(long)]
        out: Option<String>,
        /// Random points per (family, n).
        #[arg(long, default_value_t = 20)]
        points: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// Reproduce a figure's data.
    Figure {
        #[arg(value_enum)]
        id: Figure,
        #[command(flatten)]
        common: Common,
    },
    /// Run several config files in parallel; each may hold one object or an array.
    Sweep {
        #[arg(required = true)]
        configs: Vec<PathBuf>,
    },
}

fn load(common: Common, base: PartialConfig, mode: Mode) -> Result<RunConfig, CliError> {
    let file = match &common.config {
        Some(p) => PartialConfig::from_file(p)?,
        None => PartialConfig::default(),
    };
    let mut merged = base.merge(file).merge(common.fields);
    merged.mode = Some(mode);
    merged.resolve()
}

fn approx_mode(regime: Regime, cfg: &RunConfig) -> Result<Mode, CliError> {
    Ok(match regime {
        Regime::Airy => Mode::Airy,
        Regime::Pcf => Mode::Pcf,
        Regime::Bessel => Mode::Bessel,
        Regime::Auto => {
            use glance::model::RegimeKind;
            let mid = 0.5 * (cfg.t_i + cfg.t_f);
            match cfg.params()?.classify_regime(mid).map_err(|e| CliError::Config(e.to_string()))?.kind {
                RegimeKind::ShortSmallRatio => Mode::Airy,
                RegimeKind::ShortLargeRatio => Mode::Pcf,
                RegimeKind::Long => Mode::Bessel,
            }
        }
    })
}

fn sweep_configs(paths: &[PathBuf]) -> Result<Vec<RunConfig>, CliError> {
    let mut out = Vec::new();
    for path in paths {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        let items = match value {
            serde_json::Value::Array(v) => v,
            v => vec![v],
        };
        for (k, item) in items.into_iter().enumerate() {
            let part: PartialConfig =
                serde_json::from_value(item).map_err(|e| CliError::Config(format!("{} [{k}]: {e}", path.display())))?;
            out.push(part.resolve().map_err(|e| CliError::Config(format!("{} [{k}]: {e}", path.display())))?);
        }
    }
    let mut seen = std::collections::BTreeSet::new();
    for c in &out {
        if !seen.insert(c.output_path.clone()) {
            return Err(CliError::Config(format!("duplicate `output_path` `{}` in sweep", c.output_path)));
        }
    }
    Ok(out)
}

fn print(s: &Summary) {
    println!("{}", serde_json::to_string(s).expect("summary serializes"));
}

fn run(cli: Cli) -> Result<i32, CliError> {
    let opts = RunOptions::default();
    let summary = match cli.cmd {
        Cmd::Simulate(c) => execute(&load(c, PartialConfig::default(), Mode::Exact)?, &opts)?,
        Cmd::Approx { common, regime, homogeneous, g_form } => {
            let mut cfg = load(common, PartialConfig::default(), Mode::Exact)?;
            cfg.mode = approx_mode(regime, &cfg)?;
            let g_form = match g_form {
                GFormArg::Derived => GForm::Derived,
                GFormArg::Printed => GForm::Printed,
            };
            execute(&cfg, &RunOptions { plain: homogeneous, g_form, ..opts })?
        }
        Cmd::Connect { common, no_tail } => {
            execute(&load(common, PartialConfig::default(), Mode::Connect)?, &RunOptions { plain: no_tail, ..opts })?
        }
        Cmd::Stokes(c) => execute(&load(c, PartialConfig::default(), Mode::Stokes)?, &opts)?,
        Cmd::Verify { out, points, seed } => {
            if points == 0 {
                return Err(CliError::Config("`points` must be at least 1".to_string()));
            }
            // parameters are unused by the identity suite
            let base = PartialConfig {
                f_re: Some(0.0),
                alpha: Some(0.0),
                beta: Some(0.0),
                t_i: Some(0.0),
                t_f: Some(1.0),
                output_path: Some(out.unwrap_or_else(|| "verify".to_string())),
                ..Default::default()
            };
            execute(&base.resolve().map(|c| RunConfig { mode: Mode::Verify, ..c })?, &RunOptions { verify_points: points, seed, ..opts })?
        }
        Cmd::Figure { id, common } => {
            let preset = id.preset();
            let mode = preset.mode.unwrap_or(Mode::Exact);
            execute(&load(common, preset, mode)?, &RunOptions { plain: id.plain(), ..opts })?
        }
        Cmd::Sweep { configs } => {
            let cfgs = sweep_configs(&configs)?;
            let results: Vec<Result<Summary, CliError>> = cfgs.par_iter().map(|c| execute(c, &opts)).collect();
            let mut code = 0;
            for r in results {
                match r {
                    Ok(s) => {
                        print(&s);
                        if !s.ok() {
                            code = code.max(3);
                        }
                    }
                    Err(e) => {
                        eprintln!("{}", e.to_json());
                        code = code.max(e.exit_code());
                    }
                }
            }
            return Ok(code);
        }
    };
    print(&summary);
    Ok(if summary.ok() { 0 } else { 3 })
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            let err = CliError::Config(e.to_string().trim().to_string());
            eprintln!("{}", err.to_json());
            std::process::exit(err.exit_code());
        }
    };
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("{}", e.to_json());
            std::process::exit(e.exit_code());
        }
    }
}
