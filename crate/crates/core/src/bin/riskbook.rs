use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use riskbook::io::parse_instance;
use riskbook::report::{self, DEFAULT_ALPHAS};
use riskbook::{Error, Instance, RiskConfig, RiskMeasure};

#[derive(Parser)]
#[command(name = "riskbook", version, about = "Rank trajectories with risk-aware rulebooks")]
struct Cli {
    /// Emit machine-readable JSON instead of text tables.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Safety flags, pairwise verdicts, optimal set and tradeoffs.
    Rank {
        file: PathBuf,
        #[command(flatten)]
        risk: Overrides,
    },
    /// Risk of every trajectory under one rule for all built-in measures.
    Risk {
        file: PathBuf,
        #[command(flatten)]
        risk: Overrides,
        /// Comma-separated levels for the VaR/CVaR columns.
        #[arg(long, value_delimiter = ',')]
        alphas: Option<Vec<f64>>,
    },
    /// Explain the comparison between two trajectories.
    Explain {
        file: PathBuf,
        a: String,
        b: String,
        #[command(flatten)]
        risk: Overrides,
    },
    /// Validate the instance and re-check the ranking laws on it.
    Check {
        file: PathBuf,
        #[command(flatten)]
        risk: Overrides,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum MeasureArg {
    Expected,
    WorstCase,
    Var,
    Cvar,
}

#[derive(Args)]
struct Overrides {
    /// Rule the risk overrides apply to (all rules when omitted). Selects
    /// the tabulated rule for `risk`.
    #[arg(long)]
    rule: Option<String>,
    #[arg(long, value_enum)]
    measure: Option<MeasureArg>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    threshold: Option<f64>,
}

impl Overrides {
    fn apply(&self, inst: &mut Instance) -> Result<(), Error> {
        if self.measure.is_none() && self.alpha.is_none() && self.threshold.is_none() {
            return Ok(());
        }
        let targets: Vec<String> = match &self.rule {
            Some(r) => vec![r.clone()],
            None => inst.rule_ids().iter().map(|s| s.to_string()).collect(),
        };
        for rule in targets {
            let old = inst.risk_config(&rule)?.clone();
            let alpha = self.alpha.or(old.measure.alpha());
            let need = |name: &str| {
                alpha.ok_or_else(|| Error::Validation(format!("--measure {name} needs --alpha")))
            };
            let measure = match self.measure {
                Some(MeasureArg::Expected) => RiskMeasure::Expected,
                Some(MeasureArg::WorstCase) => RiskMeasure::WorstCase,
                Some(MeasureArg::Var) => RiskMeasure::VaR(need("var")?),
                Some(MeasureArg::Cvar) => RiskMeasure::CVaR(need("cvar")?),
                None => match (old.measure, self.alpha) {
                    (RiskMeasure::VaR(_), Some(a)) => RiskMeasure::VaR(a),
                    (RiskMeasure::CVaR(_), Some(a)) => RiskMeasure::CVaR(a),
                    (m, Some(_)) => {
                        return Err(Error::Validation(format!(
                            "--alpha does not apply to measure {m} of rule {rule}"
                        )))
                    }
                    (m, None) => m,
                },
            };
            let threshold = self.threshold.unwrap_or(old.threshold);
            inst.set_risk_config(&rule, RiskConfig::new(measure, threshold))?;
        }
        Ok(())
    }
}

fn load(path: &Path, overrides: &Overrides) -> anyhow::Result<Instance> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut inst = parse_instance(&text)?;
    overrides.apply(&mut inst)?;
    Ok(inst)
}

fn run(cli: &Cli) -> anyhow::Result<()> {
    let out = |text: String, json: String| {
        print!("{}", if cli.json { json + "\n" } else { text });
    };
    match &cli.command {
        Command::Rank { file, risk } => {
            let r = report::run_rank(&load(file, risk)?)?;
            out(r.to_text(), report::to_json(&r));
        }
        Command::Risk { file, risk, alphas } => {
            let rule = risk
                .rule
                .as_deref()
                .ok_or_else(|| anyhow!("`risk` needs --rule <id>"))?;
            let alphas = alphas.clone().unwrap_or_else(|| DEFAULT_ALPHAS.to_vec());
            let t = report::run_risk_table(&load(file, risk)?, rule, &alphas)?;
            out(t.to_text(), report::to_json(&t));
        }
        Command::Explain { file, a, b, risk } => {
            let e = report::run_explain(&load(file, risk)?, a, b)?;
            out(e.to_text(), report::to_json(&e));
        }
        Command::Check { file, risk } => {
            let c = report::run_check(&load(file, risk)?)?;
            out(c.to_text(), report::to_json(&c));
            if !c.passed {
                bail!("instance check failed");
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            let parse_like = e.chain().any(|c| {
                matches!(c.downcast_ref::<Error>(), Some(Error::Parse { .. }))
                    || c.downcast_ref::<std::io::Error>().is_some()
            });
            ExitCode::from(if parse_like { 2 } else { 1 })
        }
    }
}
