use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use infoblotto::format::{CertificateRecord, ProfileRecord};
use infoblotto::sweep::{parse_fixed, Axis, GameKind, SweepSpec};
use infoblotto::{format_number, parallel};
use infoblotto_core::blotto2::{self, BlottoParams};
use infoblotto_core::lotto3::{self, LottoParams};
use infoblotto_core::oracle::{CertifyOptions, Instance, DEFAULT_GRID_POINTS, DEFAULT_SAMPLES};
use infoblotto_core::payoff::ex_ante_payoff_informed;
use infoblotto_core::StrategyProfile;
use serde_json::json;

/// Solver and verifier for Blotto and Lotto games with one informed player.
#[derive(Parser)]
#[command(name = "infoblotto", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the equilibrium payoff and related quantities.
    Payoff {
        #[command(flatten)]
        game: GameArgs,
        /// Print a JSON object with full-precision numbers.
        #[arg(long)]
        json: bool,
    },
    /// Evaluate a parameter grid into a CSV table.
    Sweep {
        #[arg(long, value_enum)]
        game: GameKind,
        /// Swept parameter as name=min:max:steps; repeat for more axes.
        #[arg(long = "axis", required = true)]
        axes: Vec<String>,
        /// Fixed parameter as name=value; repeatable.
        #[arg(long = "fix")]
        fixed: Vec<String>,
        /// Comma-separated outputs (blotto2: payoff,baseline,voi,q; lotto3:
        /// payoff,baseline,voi,max_cost,zero_alpha,regime).
        #[arg(long, value_delimiter = ',')]
        outputs: Vec<String>,
        /// Output file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the equilibrium strategy profile as JSON.
    Strategy {
        #[command(flatten)]
        game: GameArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Certify a profile: exit 0 if it passes, 1 if it fails.
    Verify {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, default_value_t = DEFAULT_GRID_POINTS)]
        grid: usize,
        /// Certificate file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte Carlo estimate of the informed player's payoff.
    Simulate {
        #[command(flatten)]
        source: SourceArgs,
    },
}

#[derive(Args)]
struct GameArgs {
    #[arg(long, value_enum)]
    game: Option<GameKind>,
    /// Lotto: value of the second battlefield relative to the first.
    #[arg(long)]
    alpha: Option<f64>,
    /// Lotto: value of the third battlefield; defaults to alpha.
    #[arg(long)]
    beta: Option<f64>,
    /// Budget ratio X_I / X_U.
    #[arg(long)]
    gamma: Option<f64>,
    /// Blotto: high battlefield value.
    #[arg(long, default_value_t = 1.0)]
    vbar: f64,
    /// Blotto: low battlefield value.
    #[arg(long)]
    vlow: Option<f64>,
    /// Uninformed budget X_U.
    #[arg(long, default_value_t = 1.0)]
    xu: f64,
    /// Lotto: fraction of the budget paid for information.
    #[arg(long, default_value_t = 0.0)]
    cost: f64,
    /// Blotto: lattice offset e in (r, d); defaults to (r + d) / 2.
    #[arg(long)]
    offset: Option<f64>,
}

#[derive(Args)]
struct SourceArgs {
    /// Strategy file written by `strategy`; otherwise the equilibrium is
    /// rebuilt from the game flags.
    #[arg(long)]
    input: Option<PathBuf>,
    #[command(flatten)]
    game: GameArgs,
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl GameArgs {
    fn instance(&self) -> Result<Instance> {
        let gamma = self.gamma.context("--gamma is required")?;
        match self.game.context("--game is required")? {
            GameKind::Blotto2 => {
                let vlow = self.vlow.context("--vlow is required for blotto2")?;
                Ok(Instance::Blotto(BlottoParams::from_ratio(
                    self.vbar, vlow, gamma, self.xu,
                )?))
            }
            GameKind::Lotto3 => {
                let alpha = self.alpha.context("--alpha is required for lotto3")?;
                let beta = self.beta.unwrap_or(alpha);
                Ok(Instance::Lotto(LottoParams::new(alpha, beta, gamma, self.xu)?))
            }
        }
    }

    fn equilibrium(&self) -> Result<(Instance, StrategyProfile)> {
        let instance = self.instance()?;
        let profile = match &instance {
            Instance::Blotto(p) => blotto2::build_equilibrium(p, self.offset)?.profile,
            Instance::Lotto(p) => lotto3::build_equilibrium(p)?.profile(),
        };
        Ok((instance, profile))
    }
}

impl SourceArgs {
    fn load(&self) -> Result<(Instance, StrategyProfile)> {
        match &self.input {
            Some(path) => ProfileRecord::read(path)?.decode(),
            None => self.game.equilibrium(),
        }
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn payoff(args: &GameArgs, as_json: bool) -> Result<()> {
    let instance = args.instance()?;
    let mut fields: Vec<(&str, serde_json::Value)> = Vec::new();
    match &instance {
        Instance::Blotto(p) => {
            let index = p.index();
            let value = blotto2::informed_payoff(p);
            let baseline = blotto2::complete_info_baseline(index.levels)?;
            fields.push(("game", json!("blotto2")));
            fields.push(("q", json!(index.levels)));
            fields.push(("d", json!(index.shortfall)));
            fields.push(("r", json!(index.remainder)));
            fields.push(("payoff", json!(value)));
            fields.push(("baseline", json!(baseline)));
            fields.push(("voi", json!(value - baseline)));
        }
        Instance::Lotto(p) => {
            let m = lotto3::multipliers(p);
            let value = lotto3::informed_payoff(p.alpha(), p.beta(), p.gamma())?;
            fields.push(("game", json!("lotto3")));
            fields.push(("regime", json!(p.regime().label())));
            fields.push(("payoff", json!(value)));
            fields.push(("lambda_informed", json!(m.informed)));
            fields.push(("lambda_uninformed", json!(m.uninformed)));
            fields.push(("baseline", json!(lotto3::complete_info_baseline(p.gamma())?)));
            fields.push(("voi", json!(lotto3::voi(p.alpha(), p.gamma(), args.cost)?)));
            fields.push(("max_cost", json!(lotto3::max_cost(p.alpha(), p.gamma())?)));
            if p.gamma() > 1.0 / 3.0 {
                fields.push(("zero_alpha", json!(lotto3::zero_crossing_alpha(p.gamma())?)));
            }
        }
    }
    let text = if as_json {
        let map: serde_json::Map<String, serde_json::Value> =
            fields.into_iter().map(|(k, v)| (k.to_string(), v)).collect();
        format!("{}\n", serde_json::to_string_pretty(&map)?)
    } else {
        fields
            .iter()
            .map(|(k, v)| match v.as_f64() {
                Some(x) if !v.is_u64() => format!("{k}: {}\n", format_number(x)),
                _ => format!("{k}: {}\n", v.as_str().map_or_else(|| v.to_string(), str::to_string)),
            })
            .collect()
    };
    emit(None, &text)
}

fn sweep(game: GameKind, axes: &[String], fixed: &[String], outputs: Vec<String>, out: Option<&Path>) -> Result<()> {
    let spec = SweepSpec {
        game,
        axes: axes.iter().map(|a| a.parse()).collect::<Result<Vec<Axis>>>()?,
        fixed: fixed.iter().map(|f| parse_fixed(f)).collect::<Result<_>>()?,
        outputs: if outputs.is_empty() {
            game.default_outputs()
        } else {
            outputs
        },
    };
    let rows = spec.run()?;
    match out {
        Some(path) => {
            let file = fs::File::create(path).with_context(|| format!("writing {}", path.display()))?;
            spec.write_csv(rows, file)
        }
        None => spec.write_csv(rows, io::stdout().lock()),
    }
}

fn strategy(args: &GameArgs, out: Option<&Path>) -> Result<()> {
    if args.game == Some(GameKind::Lotto3) && args.offset.is_some() {
        bail!("--offset only applies to blotto2");
    }
    let (instance, profile) = args.equilibrium()?;
    emit(out, &format!("{}\n", ProfileRecord::new(&instance, &profile).to_json()))
}

fn verify(source: &SourceArgs, grid: usize, out: Option<&Path>) -> Result<ExitCode> {
    let (instance, profile) = source.load()?;
    let options = CertifyOptions {
        grid_points: grid,
        samples: source.samples,
        seed: source.seed,
        ..CertifyOptions::default()
    };
    let cert = parallel::certify(&profile, &instance, &options)?;
    let record = CertificateRecord::new(&instance, &cert);
    emit(out, &format!("{}\n", record.to_json()))?;
    if out.is_some() {
        println!(
            "{}: max gap {}, max budget residual {}, exact value {}, claimed {}, monte carlo {} ± {}",
            if cert.pass { "pass" } else { "fail" },
            format_number(cert.max_gap()),
            format_number(cert.max_budget_residual()),
            format_number(cert.exact_value),
            format_number(cert.claimed_value),
            format_number(cert.mc.mean),
            format_number(cert.mc.std_error),
        );
    }
    Ok(if cert.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn simulate(source: &SourceArgs) -> Result<()> {
    let (instance, profile) = source.load()?;
    let game = instance.game();
    let mc = parallel::monte_carlo_value(&profile, &game, source.samples, source.seed)?;
    let exact = ex_ante_payoff_informed(&profile, &game)?;
    let text = format!(
        "mean: {}\nstd_error: {}\nsamples: {}\nseed: {}\nexact: {}\nclaimed: {}\n",
        format_number(mc.mean),
        format_number(mc.std_error),
        mc.samples,
        source.seed,
        format_number(exact),
        format_number(instance.claimed_value()),
    );
    emit(None, &text)
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Payoff { game, json } => payoff(&game, json)?,
        Command::Sweep {
            game,
            axes,
            fixed,
            outputs,
            out,
        } => sweep(game, &axes, &fixed, outputs, out.as_deref())?,
        Command::Strategy { game, out } => strategy(&game, out.as_deref())?,
        Command::Verify { source, grid, out } => return verify(&source, grid, out.as_deref()),
        Command::Simulate { source } => simulate(&source)?,
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
