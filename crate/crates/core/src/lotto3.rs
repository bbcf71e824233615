//! Three-battlefield General Lotto with cyclic valuations and a uniform prior.
//!
//! In state `i` the battlefields are worth a cyclic shift of
//! `(1, α, β) · c` with `c = 1/(1 + α + β)`, so every state has one
//! "diagonal" battlefield worth `c` and two minor ones. The budget only has
//! to hold in expectation, and the game splits into one all-pay auction per
//! battlefield under a common pair of Lagrange multipliers `(λ_I, λ_U)` with
//! `λ_U = 3γλ_I`. Three budget regimes give three shapes of marginals:
//!
//! | regime | γ            | informed player contests          |
//! |--------|--------------|-----------------------------------|
//! | low    | (0, 1/3]     | the diagonal battlefield only     |
//! | mid    | (1/3, 2/3]   | diagonal and α battlefields       |
//! | high   | (2/3, 1]     | all three                         |

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::cdf::PiecewiseCdf;
use crate::error::{Error, Result};
use crate::game::{Budgets, GameParams, Prior, ValuationMatrix};
use crate::payoff::interim_payoffs_agree;
use crate::profile::StrategyProfile;

/// Atoms lighter than this (from cancellation at regime boundaries) are
/// dropped when building marginals.
const NEGLIGIBLE_MASS: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LottoParams {
    alpha: f64,
    beta: f64,
    gamma: f64,
    scale: f64,
}

impl LottoParams {
    /// `1 > α ≥ β > 0`, `γ ∈ (0, 1]`, `X_U = scale > 0`.
    pub fn new(alpha: f64, beta: f64, gamma: f64, scale: f64) -> Result<Self> {
        check_values(alpha, beta)?;
        check_ratio(gamma)?;
        if !(scale.is_finite() && scale > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "uninformed budget {scale} must be positive"
            )));
        }
        Ok(Self {
            alpha,
            beta,
            gamma,
            scale,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// `X_U`.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Normalization `c = 1 / (1 + α + β)`.
    pub fn normalizer(&self) -> f64 {
        1.0 / (1.0 + self.alpha + self.beta)
    }

    pub fn regime(&self) -> Regime {
        Regime::of(self.gamma)
    }

    pub fn budgets(&self) -> Budgets {
        Budgets::from_ratio(self.gamma, self.scale).expect("validated ratio")
    }

    pub fn game(&self) -> GameParams {
        GameParams::new(
            ValuationMatrix::cyclic(self.alpha, self.beta).expect("validated valuations"),
            Prior::uniform(3),
            self.budgets(),
        )
        .expect("3x3 game with a 3-state prior")
    }
}

fn check_values(alpha: f64, beta: f64) -> Result<()> {
    if !(alpha < 1.0 && alpha >= beta && beta > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "valuations must satisfy 1 > alpha >= beta > 0, got alpha = {alpha}, beta = {beta}"
        )));
    }
    Ok(())
}

fn check_ratio(gamma: f64) -> Result<()> {
    if !(gamma > 0.0 && gamma <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "budget ratio {gamma} must lie in (0, 1]"
        )));
    }
    Ok(())
}

/// Budget regime, keyed off γ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    /// γ ∈ (0, 1/3]; λ_I/λ_U ≥ 1.
    Low,
    /// γ ∈ (1/3, 2/3]; λ_I/λ_U ∈ [1/2, 1).
    Mid,
    /// γ ∈ (2/3, 1]; λ_I/λ_U ∈ [1/3, 1/2).
    High,
}

impl Regime {
    pub fn of(gamma: f64) -> Self {
        if gamma <= 1.0 / 3.0 {
            Regime::Low
        } else if gamma <= 2.0 / 3.0 {
            Regime::Mid
        } else {
            Regime::High
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Regime::Low => "low",
            Regime::Mid => "mid",
            Regime::High => "high",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Closed-form payoff of each regime, without validation.
pub(crate) fn payoff_unchecked(alpha: f64, beta: f64, gamma: f64) -> f64 {
    let c = 1.0 / (1.0 + alpha + beta);
    match Regime::of(gamma) {
        Regime::Low => 3.0 * gamma * c - 1.0,
        Regime::Mid => mid_branch(alpha, beta, gamma),
        Regime::High => high_branch(alpha, beta, gamma),
    }
}

fn mid_branch(alpha: f64, beta: f64, gamma: f64) -> f64 {
    let c = 1.0 / (1.0 + alpha + beta);
    c * ((1.0 - 1.0 / (3.0 * gamma)) * (3.0 * gamma * alpha + (1.0 - alpha)) + 1.0) - 1.0
}

// The β term carries the square of (1 - 2/(3γ)); this is what the high-regime
// marginals below integrate to.
fn high_branch(alpha: f64, beta: f64, gamma: f64) -> f64 {
    let c = 1.0 / (1.0 + alpha + beta);
    let t = 1.0 - 2.0 / (3.0 * gamma);
    c * (2.0 - 1.0 / (3.0 * gamma) + alpha * (2.0 - 1.0 / gamma) + 3.0 * beta * gamma * t * t) - 1.0
}

/// Branch formulas exposed for continuity checks at the regime boundaries.
pub mod branches {
    pub fn low(alpha: f64, beta: f64, gamma: f64) -> f64 {
        3.0 * gamma / (1.0 + alpha + beta) - 1.0
    }

    pub fn mid(alpha: f64, beta: f64, gamma: f64) -> f64 {
        super::mid_branch(alpha, beta, gamma)
    }

    pub fn high(alpha: f64, beta: f64, gamma: f64) -> f64 {
        super::high_branch(alpha, beta, gamma)
    }
}

/// Equilibrium payoff `π_I*(α, β, γ)` of the informed player.
pub fn informed_payoff(alpha: f64, beta: f64, gamma: f64) -> Result<f64> {
    check_values(alpha, beta)?;
    check_ratio(gamma)?;
    Ok(payoff_unchecked(alpha, beta, gamma))
}

/// Payoff `γ - 1` when neither player observes the state.
pub fn complete_info_baseline(gamma: f64) -> Result<f64> {
    check_ratio(gamma)?;
    Ok(gamma - 1.0)
}

/// Lagrange multipliers on the informed and uninformed budget constraints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Multipliers {
    pub informed: f64,
    pub uninformed: f64,
}

impl Multipliers {
    pub fn ratio(&self) -> f64 {
        self.informed / self.uninformed
    }
}

pub fn multipliers(params: &LottoParams) -> Multipliers {
    let (a, b, g) = (params.alpha, params.beta, params.gamma);
    let base = params.normalizer() / params.scale;
    let informed = match params.regime() {
        Regime::Low => base,
        Regime::Mid => base * ((1.0 - a) / (9.0 * g * g) + a),
        Regime::High => base * (b + (1.0 + 3.0 * a - 4.0 * b) / (9.0 * g * g)),
    };
    Multipliers {
        informed,
        uninformed: 3.0 * g * informed,
    }
}

/// Equilibrium marginals and multipliers for one parameter point.
#[derive(Debug, Clone, PartialEq)]
pub struct RegimeSolution {
    pub params: LottoParams,
    pub regime: Regime,
    pub multipliers: Multipliers,
    /// Uninformed marginal, the same on every battlefield.
    pub uninformed: PiecewiseCdf,
    /// Informed marginal on the battlefield worth `c`.
    pub diagonal: PiecewiseCdf,
    /// Informed marginal on the battlefield worth `α·c`.
    pub alpha_marginal: PiecewiseCdf,
    /// Informed marginal on the battlefield worth `β·c`.
    pub beta_marginal: PiecewiseCdf,
}

impl RegimeSolution {
    /// Closed-form value `π_I*`.
    pub fn value(&self) -> f64 {
        payoff_unchecked(self.params.alpha, self.params.beta, self.params.gamma)
    }

    /// Informed marginal for the battlefield whose value is the `kind`-th
    /// entry of `(1, α, β)`.
    fn informed_for(&self, kind: usize) -> &PiecewiseCdf {
        match kind {
            0 => &self.diagonal,
            1 => &self.alpha_marginal,
            _ => &self.beta_marginal,
        }
    }

    /// The full 3-state × 3-battlefield profile. In state `i`, battlefield
    /// `j` is worth the `(j - i) mod 3` entry of `(1, α, β)`.
    pub fn profile(&self) -> StrategyProfile {
        let informed = (0..3)
            .map(|i| (0..3).map(|j| self.informed_for((j + 3 - i) % 3).clone()).collect())
            .collect();
        let uninformed = vec![self.uninformed.clone(); 3];
        StrategyProfile::new(informed, uninformed).expect("3x3 profile")
    }
}

fn marginal(atom_at_zero: f64, segments: &[(f64, f64, f64)]) -> Result<PiecewiseCdf> {
    let atoms: Vec<(f64, f64)> = if atom_at_zero > NEGLIGIBLE_MASS {
        vec![(0.0, atom_at_zero)]
    } else {
        Vec::new()
    };
    PiecewiseCdf::from_parts(&atoms, segments)
}

/// Builds the equilibrium marginals of the regime selected by γ.
pub fn build_equilibrium(params: &LottoParams) -> Result<RegimeSolution> {
    let (a, b) = (params.alpha, params.beta);
    let c = params.normalizer();
    let m = multipliers(params);
    let (li, lu) = (m.informed, m.uninformed);
    let regime = params.regime();

    let (uninformed, diagonal, alpha_marginal, beta_marginal) = match regime {
        Regime::Low => {
            let top = 2.0 * c / (3.0 * li);
            (
                marginal(0.0, &[(0.0, top, 3.0 * li / (2.0 * c))])?,
                marginal(1.0 - lu / li, &[(0.0, top, 3.0 * lu / (2.0 * c))])?,
                PiecewiseCdf::point(0.0)?,
                PiecewiseCdf::point(0.0)?,
            )
        }
        Regime::Mid => {
            let x1 = 2.0 * c / 3.0 * (a / li - a / lu);
            let x2 = 2.0 * c / 3.0 * (a / li + (1.0 - a) / lu);
            (
                marginal(
                    0.0,
                    &[(0.0, x1, 3.0 * li / (2.0 * a * c)), (x1, x2, 3.0 * li / (2.0 * c))],
                )?,
                marginal(0.0, &[(x1, x2, 3.0 * lu / (2.0 * c))])?,
                marginal(2.0 - lu / li, &[(0.0, x1, 3.0 * lu / (2.0 * a * c))])?,
                PiecewiseCdf::point(0.0)?,
            )
        }
        Regime::High => {
            let x1 = 2.0 * c / 3.0 * (b / li - 2.0 * b / lu);
            let x2 = 2.0 * c / 3.0 * (b / li + (a - 2.0 * b) / lu);
            let x3 = 2.0 * c / 3.0 * (b / li + (a - 2.0 * b + 1.0) / lu);
            (
                marginal(
                    0.0,
                    &[
                        (0.0, x1, 3.0 * li / (2.0 * b * c)),
                        (x1, x2, 3.0 * li / (2.0 * a * c)),
                        (x2, x3, 3.0 * li / (2.0 * c)),
                    ],
                )?,
                marginal(0.0, &[(x2, x3, 3.0 * lu / (2.0 * c))])?,
                marginal(0.0, &[(x1, x2, 3.0 * lu / (2.0 * a * c))])?,
                marginal(3.0 - lu / li, &[(0.0, x1, 3.0 * lu / (2.0 * b * c))])?,
            )
        }
    };

    Ok(RegimeSolution {
        params: *params,
        regime,
        multipliers: m,
        uninformed,
        diagonal,
        alpha_marginal,
        beta_marginal,
    })
}

/// The α below which `π_I*(α, α, γ) > 0`, for `γ ∈ (1/3, 1]`:
/// `(1/3 - γ) / (3γ² - 4γ + 1/3)`. A threshold of 1 or more means the
/// informed player wins for every admissible α.
pub fn zero_crossing_alpha(gamma: f64) -> Result<f64> {
    if gamma.is_nan() || gamma > 1.0 {
        return Err(Error::InvalidParameter(format!(
            "budget ratio {gamma} must lie in (0, 1]"
        )));
    }
    if gamma <= 1.0 / 3.0 {
        return Err(Error::OutOfRegime(format!(
            "budget ratio {gamma} <= 1/3: the informed player cannot win in the low regime"
        )));
    }
    Ok((1.0 / 3.0 - gamma) / (3.0 * gamma * gamma - 4.0 * gamma + 1.0 / 3.0))
}

/// Net gain from buying the state observation with a fraction `cost` of
/// the budget, against the uninformed baseline `γ - 1`.
pub fn voi(alpha: f64, gamma: f64, cost: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParameter(format!("alpha {alpha} must lie in (0, 1)")));
    }
    check_ratio(gamma)?;
    if !(0.0..1.0).contains(&cost) {
        return Err(Error::InvalidParameter(format!("cost {cost} must lie in [0, 1)")));
    }
    let reduced = (1.0 - cost) * gamma;
    if reduced <= 0.0 {
        return Err(Error::InvalidParameter(
            "budget after paying for information is zero".into(),
        ));
    }
    Ok(payoff_unchecked(alpha, alpha, reduced) - (gamma - 1.0))
}

/// Positive root γ_e of `π_I*(α, α, γ_e) = γ - 1` using the mid/high
/// branch (valid when the root is at least 1/3).
///
/// Evaluated in rationalized form, which equals the usual quadratic root
/// and stays accurate as α → 0 (limit `1 / (3(2 - γ))`).
pub fn equalizing_ratio(alpha: f64, gamma: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&alpha) {
        return Err(Error::InvalidParameter(format!("alpha {alpha} must lie in [0, 1)")));
    }
    check_ratio(gamma)?;
    let c = 1.0 / (1.0 + 2.0 * alpha);
    let p = 2.0 * (1.0 - alpha) * c - gamma;
    let disc = p * p + 4.0 * c * c * alpha * (1.0 - alpha);
    Ok(2.0 * c * (1.0 - alpha) / (3.0 * (p + libm::sqrt(disc))))
}

/// Largest budget fraction `C_I(α, γ)` the informed player can give up for
/// information without falling below the uninformed baseline.
pub fn max_cost(alpha: f64, gamma: f64) -> Result<f64> {
    let ge = equalizing_ratio(alpha, gamma)?;
    if ge >= 1.0 / 3.0 {
        Ok((gamma - ge) / gamma)
    } else {
        Ok(1.0 - (1.0 + 2.0 * alpha) / 3.0)
    }
}

/// Whether every informed type earns the same interim payoff (within 1e-9)
/// in the constructed equilibrium.
pub fn interim_equivalence_check(alpha: f64, beta: f64, gamma: f64) -> Result<bool> {
    let params = LottoParams::new(alpha, beta, gamma, 1.0)?;
    let solution = build_equilibrium(&params)?;
    interim_payoffs_agree(&solution.profile(), &params.game(), 1e-9)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::payoff::{ex_ante_payoff_informed, expected_budget};

    #[test]
    fn closed_form_values() {
        assert!((informed_payoff(0.5, 0.5, 0.2).unwrap() + 0.7).abs() < 1e-15);
        let third = 1.0 / 3.0;
        assert!((branches::low(0.5, 0.5, third) + 0.5).abs() < 1e-15);
        assert!((branches::mid(0.5, 0.5, third) + 0.5).abs() < 1e-15);
        assert!((informed_payoff(0.5, 0.5, 1.0).unwrap() - 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn baseline() {
        assert_eq!(complete_info_baseline(1.0).unwrap(), 0.0);
        assert!((complete_info_baseline(0.4).unwrap() + 0.6).abs() < 1e-15);
        assert!((complete_info_baseline(1.0 / 3.0).unwrap() + 2.0 / 3.0).abs() < 1e-15);
        assert!(complete_info_baseline(0.0).is_err());
    }

    #[test]
    fn parameter_validation() {
        assert!(informed_payoff(0.3, 0.5, 0.5).is_err());
        assert!(informed_payoff(1.0, 0.5, 0.5).is_err());
        assert!(informed_payoff(0.5, 0.0, 0.5).is_err());
        assert!(informed_payoff(0.5, 0.5, 1.1).is_err());
        assert!(informed_payoff(0.5, 0.5, 0.0).is_err());
        assert!(LottoParams::new(0.5, 0.5, 0.5, 0.0).is_err());
    }

    #[test]
    fn multiplier_values() {
        let m = multipliers(&LottoParams::new(0.5, 0.5, 0.2, 1.0).unwrap());
        assert!((m.informed - 0.5).abs() < 1e-15);
        assert!((m.uninformed - 0.3).abs() < 1e-15);
        let m = multipliers(&LottoParams::new(0.5, 0.5, 0.5, 1.0).unwrap());
        assert!((m.informed - 13.0 / 36.0).abs() < 1e-15);
        assert!((m.uninformed - 1.5 * 13.0 / 36.0).abs() < 1e-15);
    }

    #[test]
    fn regime_one_marginals() {
        let s = build_equilibrium(&LottoParams::new(0.5, 0.5, 0.2, 1.0).unwrap()).unwrap();
        assert_eq!(s.regime, Regime::Low);
        let top = 2.0 / 3.0;
        assert_eq!(s.uninformed.segments().len(), 1);
        assert!((s.uninformed.segments()[0].right - top).abs() < 1e-15);
        assert!((s.uninformed.cdf(top) - 1.0).abs() < 1e-15);
        assert!((s.diagonal.atoms()[0].mass - 0.4).abs() < 1e-15);
        assert!((s.diagonal.segments()[0].mass() - 0.6).abs() < 1e-15);
        assert_eq!(s.alpha_marginal, PiecewiseCdf::point(0.0).unwrap());
        assert_eq!(s.beta_marginal, PiecewiseCdf::point(0.0).unwrap());
        let profile = s.profile();
        let game = s.params.game();
        assert!((ex_ante_payoff_informed(&profile, &game).unwrap() + 0.7).abs() < 1e-12);
        assert!((expected_budget(profile.informed(0)) - 0.2).abs() < 1e-12);
    }

    #[test]
    fn budgets_bind_in_every_regime() {
        for &(a, b, g) in &[
            (0.5, 0.5, 0.2),
            (0.5, 0.3, 0.5),
            (0.6, 0.3, 0.8),
            (0.5, 0.5, 1.0),
            (0.9, 0.2, 2.0 / 3.0),
        ] {
            let p = LottoParams::new(a, b, g, 2.5).unwrap();
            let s = build_equilibrium(&p).unwrap();
            let profile = s.profile();
            for ty in 0..3 {
                assert!((expected_budget(profile.informed(ty)) - g * 2.5).abs() < 1e-9);
            }
            assert!((expected_budget(profile.uninformed()) - 2.5).abs() < 1e-9);
        }
    }

    #[test]
    fn zero_crossing() {
        assert!((zero_crossing_alpha(0.5).unwrap() - 2.0 / 11.0).abs() < 1e-15);
        assert!(informed_payoff(0.18, 0.18, 0.5).unwrap() > 0.0);
        assert!(informed_payoff(0.19, 0.19, 0.5).unwrap() < 0.0);
        assert!((zero_crossing_alpha(1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!(zero_crossing_alpha(1.0 / 3.0 + 1e-9).unwrap() < 1e-7);
        assert!(matches!(zero_crossing_alpha(0.3), Err(Error::OutOfRegime(_))));
    }

    #[test]
    fn value_of_information() {
        let free = voi(0.4, 0.7, 0.0).unwrap();
        assert!(free > 0.0);
        let v = voi(0.5, 1.0, 0.2).unwrap();
        assert!((v - informed_payoff(0.5, 0.5, 0.8).unwrap()).abs() < 1e-15);
        assert!(voi(0.5, 1.0, 1.0).is_err());
        for &(a, g) in &[(0.3, 0.9), (0.7, 0.6), (0.1, 1.0)] {
            let c = max_cost(a, g).unwrap();
            assert!(voi(a, g, c).unwrap().abs() < 1e-9);
        }
    }

    #[test]
    fn max_cost_anchor() {
        assert!((max_cost(0.0, 1.0).unwrap() - 2.0 / 3.0).abs() < 1e-12);
        assert!((max_cost(1e-12, 1.0).unwrap() - 2.0 / 3.0).abs() < 1e-9);
        assert!(max_cost(0.95, 0.5).unwrap() < max_cost(0.2, 0.5).unwrap());
    }

    #[test]
    fn interim_equivalence() {
        assert!(interim_equivalence_check(0.5, 0.5, 0.5).unwrap());
        assert!(interim_equivalence_check(0.6, 0.3, 0.8).unwrap());
    }
}
