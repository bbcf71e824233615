//! JSON records for marginals, strategy profiles and certificates.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use infoblotto_core::blotto2::BlottoParams;
use infoblotto_core::lotto3::LottoParams;
use infoblotto_core::oracle::{Certificate, Instance, McEstimate, Tolerances};
use infoblotto_core::{Atom, PiecewiseCdf, Segment, StrategyProfile};
use serde::{Deserialize, Serialize};

/// `{atoms: [[loc, mass]...], segments: [[left, right, density]...]}`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CdfRecord {
    #[serde(default)]
    pub atoms: Vec<[f64; 2]>,
    #[serde(default)]
    pub segments: Vec<[f64; 3]>,
}

impl From<&PiecewiseCdf> for CdfRecord {
    fn from(cdf: &PiecewiseCdf) -> Self {
        Self {
            atoms: cdf.atoms().iter().map(|a| [a.location, a.mass]).collect(),
            segments: cdf.segments().iter().map(|s| [s.left, s.right, s.density]).collect(),
        }
    }
}

impl CdfRecord {
    pub fn to_cdf(&self) -> Result<PiecewiseCdf> {
        let atoms = self
            .atoms
            .iter()
            .map(|&[location, mass]| Atom { location, mass })
            .collect();
        let segments = self
            .segments
            .iter()
            .map(|&[left, right, density]| Segment { left, right, density })
            .collect();
        Ok(PiecewiseCdf::new(atoms, segments)?)
    }
}

/// Game parameters carried alongside a profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GameRecord {
    Blotto2 { vbar: f64, vlow: f64, gamma: f64, xu: f64 },
    Lotto3 { alpha: f64, beta: f64, gamma: f64, xu: f64 },
}

impl GameRecord {
    pub fn from_instance(instance: &Instance) -> Self {
        match instance {
            Instance::Blotto(p) => GameRecord::Blotto2 {
                vbar: p.high(),
                vlow: p.low(),
                gamma: p.ratio(),
                xu: p.budgets().uninformed(),
            },
            Instance::Lotto(p) => GameRecord::Lotto3 {
                alpha: p.alpha(),
                beta: p.beta(),
                gamma: p.gamma(),
                xu: p.scale(),
            },
        }
    }

    pub fn to_instance(&self) -> Result<Instance> {
        Ok(match *self {
            GameRecord::Blotto2 { vbar, vlow, gamma, xu } => {
                Instance::Blotto(BlottoParams::from_ratio(vbar, vlow, gamma, xu)?)
            }
            GameRecord::Lotto3 { alpha, beta, gamma, xu } => Instance::Lotto(LottoParams::new(alpha, beta, gamma, xu)?),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileRecord {
    pub game: GameRecord,
    /// `informed[i][j]`: type `i`, battlefield `j`.
    pub informed: Vec<Vec<CdfRecord>>,
    pub uninformed: Vec<CdfRecord>,
}

impl ProfileRecord {
    pub fn new(instance: &Instance, profile: &StrategyProfile) -> Self {
        Self {
            game: GameRecord::from_instance(instance),
            informed: profile
                .informed_all()
                .iter()
                .map(|row| row.iter().map(CdfRecord::from).collect())
                .collect(),
            uninformed: profile.uninformed().iter().map(CdfRecord::from).collect(),
        }
    }

    /// Parses the game and every marginal; fails on any invalid piece or
    /// on a profile whose shape does not match the game.
    pub fn decode(&self) -> Result<(Instance, StrategyProfile)> {
        let instance = self.game.to_instance()?;
        let informed = self
            .informed
            .iter()
            .map(|row| row.iter().map(CdfRecord::to_cdf).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let uninformed = self
            .uninformed
            .iter()
            .map(CdfRecord::to_cdf)
            .collect::<Result<Vec<_>>>()?;
        let profile = StrategyProfile::new(informed, uninformed)?;
        profile.check_dimensions(&instance.game())?;
        Ok((instance, profile))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("records serialize")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McRecord {
    pub mean: f64,
    pub std_error: f64,
    pub samples: u64,
}

impl From<McEstimate> for McRecord {
    fn from(m: McEstimate) -> Self {
        Self {
            mean: m.mean,
            std_error: m.std_error,
            samples: m.samples,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TolerancesRecord {
    pub deviation: f64,
    pub budget: f64,
    pub value: f64,
    pub mc_sigmas: f64,
}

impl From<Tolerances> for TolerancesRecord {
    fn from(t: Tolerances) -> Self {
        Self {
            deviation: t.deviation,
            budget: t.budget,
            value: t.value,
            mc_sigmas: t.mc_sigmas,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateRecord {
    pub game: GameRecord,
    pub claimed_value: f64,
    pub exact_value: f64,
    pub best_deviation_gap_uninformed: f64,
    pub best_deviation_gap_informed: Vec<f64>,
    pub budget_residual_uninformed: f64,
    pub budget_residual_informed: Vec<f64>,
    pub mc_estimate: McRecord,
    pub tolerances: TolerancesRecord,
    pub pass: bool,
}

impl CertificateRecord {
    pub fn new(instance: &Instance, cert: &Certificate) -> Self {
        Self {
            game: GameRecord::from_instance(instance),
            claimed_value: cert.claimed_value,
            exact_value: cert.exact_value,
            best_deviation_gap_uninformed: cert.gap_uninformed,
            best_deviation_gap_informed: cert.gap_informed.clone(),
            budget_residual_uninformed: cert.budget_residual_uninformed,
            budget_residual_informed: cert.budget_residual_informed.clone(),
            mc_estimate: cert.mc.into(),
            tolerances: cert.tolerances.into(),
            pass: cert.pass,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("records serialize")
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let record: Self = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        if record.best_deviation_gap_informed.len() != record.budget_residual_informed.len() {
            bail!("certificate has mismatched per-type fields");
        }
        Ok(record)
    }
}
