//! Parameter grids evaluated into CSV tables.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use anyhow::{anyhow, bail, ensure, Context, Result};
use infoblotto_core::blotto2::{self, BlottoParams};
use infoblotto_core::lotto3;
use rayon::prelude::*;

/// Twelve significant digits.
pub fn format_number(x: f64) -> String {
    format!("{x:.11e}")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum GameKind {
    Blotto2,
    Lotto3,
}

impl GameKind {
    fn parameters(self) -> &'static [&'static str] {
        match self {
            GameKind::Blotto2 => &["vbar", "vlow", "alpha", "gamma", "xu"],
            GameKind::Lotto3 => &["alpha", "beta", "gamma", "cost"],
        }
    }

    fn outputs(self) -> &'static [&'static str] {
        match self {
            GameKind::Blotto2 => &["payoff", "baseline", "voi", "q"],
            GameKind::Lotto3 => &["payoff", "baseline", "voi", "max_cost", "zero_alpha", "regime"],
        }
    }

    pub fn default_outputs(self) -> Vec<String> {
        let names: &[&str] = match self {
            GameKind::Blotto2 => &["payoff", "baseline", "voi"],
            GameKind::Lotto3 => &["payoff", "voi", "max_cost"],
        };
        names.iter().map(|s| s.to_string()).collect()
    }
}

impl fmt::Display for GameKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GameKind::Blotto2 => "blotto2",
            GameKind::Lotto3 => "lotto3",
        })
    }
}

/// One swept parameter: `steps` evenly spaced values from `min` to `max`.
#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub name: String,
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl Axis {
    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.min];
        }
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|k| {
                if k + 1 == self.steps {
                    self.max
                } else {
                    self.min + (self.max - self.min) * k as f64 / last
                }
            })
            .collect()
    }
}

/// `name=min:max:steps`
impl FromStr for Axis {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, range) = s
            .split_once('=')
            .ok_or_else(|| anyhow!("axis `{s}` is not name=min:max:steps"))?;
        let parts: Vec<&str> = range.split(':').collect();
        ensure!(parts.len() == 3, "axis `{s}` is not name=min:max:steps");
        Ok(Axis {
            name: name.trim().to_string(),
            min: parts[0]
                .trim()
                .parse()
                .with_context(|| format!("axis `{s}`: bad min"))?,
            max: parts[1]
                .trim()
                .parse()
                .with_context(|| format!("axis `{s}`: bad max"))?,
            steps: parts[2]
                .trim()
                .parse()
                .with_context(|| format!("axis `{s}`: bad step count"))?,
        })
    }
}

/// `name=value`
pub fn parse_fixed(s: &str) -> Result<(String, f64)> {
    let (name, value) = s.split_once('=').ok_or_else(|| anyhow!("`{s}` is not name=value"))?;
    let value = value.trim().parse().with_context(|| format!("`{s}`: bad value"))?;
    Ok((name.trim().to_string(), value))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub game: GameKind,
    pub axes: Vec<Axis>,
    pub fixed: Vec<(String, f64)>,
    pub outputs: Vec<String>,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        ensure!(!self.axes.is_empty(), "a sweep needs at least one axis");
        let known = self.game.parameters();
        let mut seen = Vec::new();
        for name in self.axes.iter().map(|a| &a.name).chain(self.fixed.iter().map(|f| &f.0)) {
            ensure!(
                known.contains(&name.as_str()),
                "unknown {} parameter `{name}` (expected one of {})",
                self.game,
                known.join(", ")
            );
            ensure!(!seen.contains(name), "parameter `{name}` given twice");
            seen.push(name.clone());
        }
        for axis in &self.axes {
            ensure!(
                axis.min.is_finite() && axis.max.is_finite() && axis.min <= axis.max,
                "axis `{}`: need finite min <= max",
                axis.name
            );
            ensure!(
                axis.steps >= 2 || (axis.steps == 1 && axis.min == axis.max),
                "axis `{}`: need at least 2 steps (1 only when min == max)",
                axis.name
            );
        }
        ensure!(!self.outputs.is_empty(), "no outputs requested");
        for out in &self.outputs {
            ensure!(
                self.game.outputs().contains(&out.as_str()),
                "unknown {} output `{out}` (expected one of {})",
                self.game,
                self.game.outputs().join(", ")
            );
        }
        if self.game == GameKind::Blotto2 {
            ensure!(
                !(seen.iter().any(|n| n == "vlow") && seen.iter().any(|n| n == "alpha")),
                "give either vlow or alpha for blotto2, not both"
            );
        }
        Ok(())
    }

    pub fn header(&self) -> Vec<String> {
        self.axes
            .iter()
            .map(|a| a.name.clone())
            .chain(self.outputs.iter().cloned())
            .collect()
    }

    /// Evaluates every grid point, first axis outermost.
    pub fn run(&self) -> Result<Vec<Vec<String>>> {
        self.validate()?;
        let values: Vec<Vec<f64>> = self.axes.iter().map(Axis::values).collect();
        let total: usize = values.iter().map(Vec::len).product();
        (0..total)
            .into_par_iter()
            .map(|flat| {
                let mut rest = flat;
                let mut coords = vec![0.0; values.len()];
                for (k, axis) in values.iter().enumerate().rev() {
                    coords[k] = axis[rest % axis.len()];
                    rest /= axis.len();
                }
                let mut point: BTreeMap<&str, f64> = self.fixed.iter().map(|(n, v)| (n.as_str(), *v)).collect();
                for (axis, x) in self.axes.iter().zip(&coords) {
                    point.insert(axis.name.as_str(), *x);
                }
                let cells = evaluate(self.game, &point, &self.outputs).with_context(|| {
                    let at: Vec<String> = point.iter().map(|(n, v)| format!("{n}={v}")).collect();
                    format!("at {}", at.join(", "))
                })?;
                Ok(coords.iter().map(|x| format_number(*x)).chain(cells).collect())
            })
            .collect()
    }

    /// Writes the header and `rows` (from [`SweepSpec::run`]) as CSV.
    pub fn write_csv<W: Write>(&self, rows: Vec<Vec<String>>, writer: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(writer);
        out.write_record(self.header())?;
        for row in rows {
            out.write_record(row)?;
        }
        out.flush()?;
        Ok(())
    }
}

fn evaluate(game: GameKind, point: &BTreeMap<&str, f64>, outputs: &[String]) -> Result<Vec<String>> {
    match game {
        GameKind::Blotto2 => {
            let vbar = point.get("vbar").copied().unwrap_or(1.0);
            let vlow = match (point.get("vlow"), point.get("alpha")) {
                (Some(v), _) => *v,
                (None, Some(a)) => a * vbar,
                (None, None) => bail!("blotto2 needs vlow or alpha"),
            };
            let gamma = *point.get("gamma").ok_or_else(|| anyhow!("blotto2 needs gamma"))?;
            let xu = point.get("xu").copied().unwrap_or(1.0);
            let params = BlottoParams::from_ratio(vbar, vlow, gamma, xu)?;
            let q = params.index().levels;
            let payoff = blotto2::informed_payoff(&params);
            let baseline = blotto2::complete_info_baseline(q)?;
            Ok(outputs
                .iter()
                .map(|o| match o.as_str() {
                    "payoff" => format_number(payoff),
                    "baseline" => format_number(baseline),
                    "voi" => format_number(payoff - baseline),
                    _ => q.to_string(),
                })
                .collect())
        }
        GameKind::Lotto3 => {
            let alpha = *point.get("alpha").ok_or_else(|| anyhow!("lotto3 needs alpha"))?;
            let beta = point.get("beta").copied().unwrap_or(alpha);
            let gamma = *point.get("gamma").ok_or_else(|| anyhow!("lotto3 needs gamma"))?;
            let cost = point.get("cost").copied().unwrap_or(0.0);
            let payoff = lotto3::informed_payoff(alpha, beta, gamma)?;
            outputs
                .iter()
                .map(|o| {
                    Ok(match o.as_str() {
                        "payoff" => format_number(payoff),
                        "baseline" => format_number(lotto3::complete_info_baseline(gamma)?),
                        "voi" => format_number(lotto3::voi(alpha, gamma, cost)?),
                        "max_cost" => format_number(lotto3::max_cost(alpha, gamma)?),
                        "zero_alpha" if gamma > 1.0 / 3.0 => format_number(lotto3::zero_crossing_alpha(gamma)?),
                        "zero_alpha" => String::new(),
                        _ => lotto3::Regime::of(gamma).to_string(),
                    })
                })
                .collect()
        }
    }
}
