//! Two-battlefield Colonel Blotto with one informed player.
//!
//! Two equally likely states swap which battlefield is worth more. The
//! informed player sees the state but has the smaller budget, with
//! `γ = X_I / X_U ∈ (1/2, 1)`. The uninformed player can take both
//! battlefields outright when `γ < 1/2`.
//!
//! Write `d = X_U - X_I`, `q = ⌊X_U / d⌋` and `X_U = q·d + r`. The equilibrium
//! payoff depends only on `q` and the value ratio. For odd `q` the
//! equilibrium is built explicitly: both players put their battlefield-1
//! allocation on a lattice of spacing `d`, with geometrically weighted atoms.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::cdf::PiecewiseCdf;
use crate::error::{Error, Result};
use crate::game::{Budgets, GameParams, Prior, ValuationMatrix};
use crate::profile::StrategyProfile;

/// Relative distance to the nearest integer under which `X_U / d` is
/// treated as that integer.
const LEVEL_SNAP: f64 = 1e-9;

/// Valuations `(high, low)` and budgets of the symmetric two-battlefield game.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlottoParams {
    high: f64,
    low: f64,
    budgets: Budgets,
}

impl BlottoParams {
    pub fn new(high: f64, low: f64, budgets: Budgets) -> Result<Self> {
        if !(high.is_finite() && low.is_finite() && low > 0.0 && high > low) {
            return Err(Error::InvalidParameter(format!(
                "valuations must satisfy high > low > 0, got high = {high}, low = {low}"
            )));
        }
        check_ratio(budgets.ratio())?;
        Ok(Self { high, low, budgets })
    }

    /// Parameters with `X_U = scale` and `X_I = γ · scale`.
    pub fn from_ratio(high: f64, low: f64, gamma: f64, scale: f64) -> Result<Self> {
        check_ratio(gamma)?;
        Self::new(high, low, Budgets::from_ratio(gamma, scale)?)
    }

    pub fn high(&self) -> f64 {
        self.high
    }

    pub fn low(&self) -> f64 {
        self.low
    }

    pub fn budgets(&self) -> &Budgets {
        &self.budgets
    }

    pub fn ratio(&self) -> f64 {
        self.budgets.ratio()
    }

    pub fn index(&self) -> BlottoIndex {
        BlottoIndex::new(&self.budgets)
    }

    /// The game as a general asymmetric-information instance: normalized
    /// valuation rows `(high, low)` and `(low, high)`, uniform prior.
    pub fn game(&self) -> GameParams {
        GameParams::new(
            ValuationMatrix::symmetric_pair(self.high, self.low).expect("validated valuations"),
            Prior::uniform(2),
            self.budgets,
        )
        .expect("2x2 game with a 2-state prior")
    }
}

fn check_ratio(gamma: f64) -> Result<()> {
    if !gamma.is_finite() || gamma <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "budget ratio {gamma} must be positive"
        )));
    }
    if gamma < 0.5 {
        return Err(Error::OutOfRegime(format!(
            "budget ratio {gamma} < 1/2: U secures both battlefields regardless of what I does"
        )));
    }
    if gamma == 0.5 || gamma >= 1.0 {
        return Err(Error::OutOfRegime(format!(
            "budget ratio {gamma} must lie in the open interval (1/2, 1)"
        )));
    }
    Ok(())
}

/// Lattice decomposition `X_U = q·d + r` with `d = X_U - X_I`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlottoIndex {
    /// `d = X_U - X_I`.
    pub shortfall: f64,
    /// `q = ⌊X_U / d⌋`.
    pub levels: u64,
    /// `r = X_U - q·d`, in `[0, d)`.
    pub remainder: f64,
}

impl BlottoIndex {
    pub fn new(budgets: &Budgets) -> Self {
        let d = budgets.uninformed() - budgets.informed();
        let ratio = budgets.uninformed() / d;
        let nearest = libm::round(ratio);
        let q = if (ratio - nearest).abs() <= LEVEL_SNAP * ratio {
            nearest
        } else {
            libm::floor(ratio)
        };
        let r = (budgets.uninformed() - q * d).max(0.0);
        Self {
            shortfall: d,
            levels: q as u64,
            remainder: r,
        }
    }

    pub fn is_odd(&self) -> bool {
        self.levels % 2 == 1
    }
}

/// `Σ_{k=0}^{n-1} ρ^k` for `ρ = low/high ∈ (0, 1)`, accurate when `ρ` is
/// close to one.
fn geometric_sum(high: f64, low: f64, n: u64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    if n <= 64 {
        let rho = low / high;
        let mut term = 1.0;
        let mut sum = 0.0;
        for _ in 0..n {
            sum += term;
            term *= rho;
        }
        return sum;
    }
    let delta = (high - low) / high;
    -libm::expm1(n as f64 * libm::log1p(-delta)) / delta
}

fn rho_pow(high: f64, low: f64, n: u64) -> f64 {
    libm::exp(n as f64 * libm::log1p(-(high - low) / high))
}

/// Equilibrium payoff of the informed player for `q` lattice levels.
///
/// Odd `q = 2h + 1`: `-(2 Σ_{k=0}^{h} c^k - 1)^{-1}` with `c = high/low`.
/// Even `q = 2h`: `-(low / (high + low)) (Σ_{k=0}^{h-1} c^k)^{-1}`.
/// Both are evaluated in powers of `low/high` to avoid overflow.
pub fn payoff_for_levels(high: f64, low: f64, q: u64) -> f64 {
    if q % 2 == 1 {
        let h = (q - 1) / 2;
        let top = rho_pow(high, low, h);
        -top / (2.0 * geometric_sum(high, low, h + 1) - top)
    } else {
        let h = q / 2;
        let top = rho_pow(high, low, h - 1);
        -(low / (high + low)) * top / geometric_sum(high, low, h)
    }
}

/// Equilibrium ex-ante payoff `π_I*` of the informed player.
pub fn informed_payoff(params: &BlottoParams) -> f64 {
    payoff_for_levels(params.high, params.low, params.index().levels)
}

/// Complete-information value `-1/q` when neither player observes the state.
pub fn complete_info_baseline(q: u64) -> Result<f64> {
    if q < 1 {
        return Err(Error::InvalidParameter("q must be at least 1".into()));
    }
    Ok(-1.0 / q as f64)
}

/// Payoff gained by observing the state: `π_I* - (-1/q)`.
pub fn value_of_information(params: &BlottoParams) -> f64 {
    let q = params.index().levels;
    informed_payoff(params) + 1.0 / q as f64
}

/// Sufficient condition for the uninformed player to secure a nonnegative
/// payoff with `n` battlefields: `γ < 2/n` for even `n`, `γ < 2/(n+1)` for
/// odd `n`.
pub fn uninformed_guarantee_condition(n: u64, gamma: f64) -> Result<bool> {
    if n < 1 {
        return Err(Error::InvalidParameter("need at least one battlefield".into()));
    }
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "budget ratio {gamma} must lie in (0, 1)"
        )));
    }
    let threshold = if n.is_multiple_of(2) {
        2.0 / n as f64
    } else {
        2.0 / (n + 1) as f64
    };
    Ok(gamma < threshold)
}

/// Explicit equilibrium for odd `q`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlottoEquilibrium {
    pub params: BlottoParams,
    pub index: BlottoIndex,
    /// Lattice offset `e ∈ (r, d)` of the uninformed player's atoms.
    pub offset: f64,
    /// Battlefield-1 atoms of the uninformed player, `(location, probability)`.
    pub uninformed_atoms: Vec<(f64, f64)>,
    /// Battlefield-1 atoms of each informed type.
    pub informed_atoms: [Vec<(f64, f64)>; 2],
    /// Uninformed normalizer `s_A`, divided by `c^h`.
    scaled_uninformed_norm: f64,
    /// Informed normalizer `s_B`, divided by `c^h`.
    scaled_informed_norm: f64,
    pub profile: StrategyProfile,
}

impl BlottoEquilibrium {
    /// Closed-form game value `π_I*`.
    pub fn value(&self) -> f64 {
        informed_payoff(&self.params)
    }

    /// `-low (1 + c) / ((high + low) s_A)`, the best interim payoff against
    /// the uninformed strategy.
    pub fn value_from_uninformed_norm(&self) -> f64 {
        let p = &self.params;
        let h = (self.index.levels - 1) / 2;
        let c = p.high / p.low;
        -p.low * (1.0 + c) / (p.high + p.low) * rho_pow(p.high, p.low, h) / self.scaled_uninformed_norm
    }

    /// `-low / ((high + low) s_B)`, the best payoff of the uninformed player
    /// against the informed strategy, negated.
    pub fn value_from_informed_norm(&self) -> f64 {
        let p = &self.params;
        let h = (self.index.levels - 1) / 2;
        -p.low / (p.high + p.low) * rho_pow(p.high, p.low, h) / self.scaled_informed_norm
    }
}

/// Builds the odd-`q` equilibrium with lattice offset `offset`
/// (default `(r + d) / 2`).
///
/// Battlefield-1 marginals are atomic on the lattices `e + k·d` (uninformed)
/// and `k·d` (informed). Battlefield 2 receives the rest of the budget, so
/// its marginal is the reflection `x ↦ X - x`.
pub fn build_equilibrium(params: &BlottoParams, offset: Option<f64>) -> Result<BlottoEquilibrium> {
    let index = params.index();
    if !index.is_odd() {
        return Err(Error::Unsupported(format!(
            "q = {} is even: only the equilibrium payoff is available, strategies are constructed for odd q",
            index.levels
        )));
    }
    let d = index.shortfall;
    let r = index.remainder;
    let e = offset.unwrap_or(0.5 * (r + d));
    if !(e > r && e < d) {
        return Err(Error::InvalidParameter(format!(
            "lattice offset {e} must lie in (r, d) = ({r}, {d})"
        )));
    }

    let (high, low) = (params.high, params.low);
    let q = index.levels;
    let h = (q - 1) / 2;
    // weights are c^k scaled by c^{-h}, i.e. ρ^{h-k}
    let scaled = |k: u64| rho_pow(high, low, h - k);

    let mut uninformed = Vec::with_capacity(q as usize);
    for k in 1..=h {
        uninformed.push((e + (k - 1) as f64 * d, scaled(h + 1 - k)));
    }
    uninformed.push((e + h as f64 * d, scaled(0)));
    for k in (h + 2)..=q {
        uninformed.push((e + (k - 1) as f64 * d, scaled(k - h - 1)));
    }
    let norm_a: f64 = uninformed.iter().map(|(_, w)| w).sum();

    let boundary = low / (high + low);
    let mut first = vec![(h as f64 * d, boundary)];
    for k in (h + 1)..q {
        first.push((k as f64 * d, scaled(q - 1 - k)));
    }
    let mut second: Vec<(f64, f64)> = (0..h).map(|k| (k as f64 * d, scaled(k))).collect();
    second.push((h as f64 * d, boundary));
    let norm_b: f64 = first.iter().map(|(_, w)| w).sum();

    let normalize = |atoms: Vec<(f64, f64)>, norm: f64| -> Vec<(f64, f64)> {
        atoms
            .into_iter()
            .map(|(x, w)| (x, w / norm))
            .filter(|(_, w)| *w > 0.0)
            .collect()
    };
    let uninformed = normalize(uninformed, norm_a);
    let first = normalize(first, norm_b);
    let second = normalize(second, norm_b);

    let x_i = params.budgets.informed();
    let x_u = params.budgets.uninformed();
    let pair = |atoms: &[(f64, f64)], total: f64| -> Result<Vec<PiecewiseCdf>> {
        let bf1 = PiecewiseCdf::from_parts(atoms, &[])?;
        let bf2 = bf1.reflect(total)?;
        Ok(vec![bf1, bf2])
    };
    let profile = StrategyProfile::new(vec![pair(&first, x_i)?, pair(&second, x_i)?], pair(&uninformed, x_u)?)?;

    Ok(BlottoEquilibrium {
        params: *params,
        index,
        offset: e,
        uninformed_atoms: uninformed,
        informed_atoms: [first, second],
        scaled_uninformed_norm: norm_a,
        scaled_informed_norm: norm_b,
        profile,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::payoff::ex_ante_payoff_informed;

    fn params(high: f64, low: f64, gamma: f64, scale: f64) -> BlottoParams {
        BlottoParams::from_ratio(high, low, gamma, scale).unwrap()
    }

    #[test]
    fn index_decomposition() {
        let idx = params(1.0, 0.5, 0.7, 10.0).index();
        assert_eq!(idx.levels, 3);
        assert!((idx.shortfall - 3.0).abs() < 1e-12);
        assert!((idx.remainder - 1.0).abs() < 1e-12);
        // X_U / d = 3 up to rounding
        assert_eq!(params(1.0, 0.5, 2.0 / 3.0, 1.0).index().levels, 3);
        assert_eq!(params(1.0, 0.5, 0.6, 1.0).index().levels, 2);
    }

    #[test]
    fn closed_form_values() {
        // q = 3, c = 2: -(2(1 + 2) - 1)^{-1}
        assert!((informed_payoff(&params(1.0, 0.5, 0.7, 1.0)) + 0.2).abs() < 1e-15);
        // q = 2: -(1/3)(1)^{-1}
        assert!((informed_payoff(&params(1.0, 0.5, 0.6, 1.0)) + 1.0 / 3.0).abs() < 1e-15);
        // q = 3, c = 10: -(2(1 + 10) - 1)^{-1}
        assert!((informed_payoff(&params(1.0, 0.1, 0.7, 1.0)) + 1.0 / 21.0).abs() < 1e-15);
    }

    #[test]
    fn homogeneous_limit() {
        let low = 1.0 - 1e-8;
        for (gamma, q) in [(0.6, 2u64), (0.7, 3), (0.8, 5), (0.9, 10), (0.99, 100)] {
            let p = params(1.0, low, gamma, 1.0);
            assert_eq!(p.index().levels, q);
            assert!((informed_payoff(&p) + 1.0 / q as f64).abs() < 1e-6);
        }
    }

    #[test]
    fn large_level_counts_stay_finite() {
        let p = params(1.0, 0.9, 0.999, 1.0);
        assert_eq!(p.index().levels, 1000);
        let v = informed_payoff(&p);
        assert!(v < 0.0 && v > -1.0);
        // the exact value is about -1e-998 here and rounds to zero
        let v = informed_payoff(&params(1.0, 0.01, 0.999, 1.0));
        assert!(v <= 0.0 && v.is_finite());
    }

    #[test]
    fn complete_info_baseline_values() {
        assert_eq!(complete_info_baseline(2).unwrap(), -0.5);
        assert!((complete_info_baseline(3).unwrap() + 1.0 / 3.0).abs() < 1e-15);
        assert!((complete_info_baseline(10).unwrap() + 0.1).abs() < 1e-15);
        assert!(complete_info_baseline(0).is_err());
    }

    #[test]
    fn information_value() {
        let v = value_of_information(&params(1.0, 0.5, 0.7, 1.0));
        assert!((v - 2.0 / 15.0).abs() < 1e-15);
        let v = value_of_information(&params(1.0, 0.1, 0.7, 1.0));
        assert!((v - 2.0 / 7.0).abs() < 1e-15);
        let v = value_of_information(&params(1.0, 1.0 - 1e-9, 0.7, 1.0));
        assert!(v > 0.0 && v < 1e-8);
    }

    #[test]
    fn guarantee_condition() {
        assert!(uninformed_guarantee_condition(2, 0.4).unwrap());
        assert!(uninformed_guarantee_condition(2, 0.99).unwrap());
        assert!(!uninformed_guarantee_condition(3, 0.6).unwrap());
        assert!(uninformed_guarantee_condition(4, 0.49).unwrap());
        assert!(!uninformed_guarantee_condition(4, 0.5).unwrap());
        assert!(uninformed_guarantee_condition(0, 0.5).is_err());
    }

    #[test]
    fn regime_errors() {
        let err = BlottoParams::from_ratio(1.0, 0.5, 0.4, 1.0).unwrap_err();
        assert!(matches!(&err, Error::OutOfRegime(m) if m.contains("U secures both battlefields")));
        assert!(matches!(
            BlottoParams::from_ratio(1.0, 0.5, 0.5, 1.0),
            Err(Error::OutOfRegime(_))
        ));
        assert!(BlottoParams::from_ratio(1.0, 0.5, 1.0, 1.0).is_err());
        assert!(BlottoParams::from_ratio(0.5, 1.0, 0.7, 1.0).is_err());
    }

    #[test]
    fn worked_construction() {
        let eq = build_equilibrium(&params(1.0, 0.5, 0.7, 10.0), Some(2.0)).unwrap();
        let expect_u = [(2.0, 0.4), (5.0, 0.2), (8.0, 0.4)];
        assert_eq!(eq.uninformed_atoms.len(), 3);
        for ((x, w), (ex, ew)) in eq.uninformed_atoms.iter().zip(expect_u) {
            assert!((x - ex).abs() < 1e-12 && (w - ew).abs() < 1e-12);
        }
        // s_B = 1 + (0.5 · 2) / 1.5 = 5/3
        let expect_t2 = [(0.0, 0.6), (3.0, 0.4)];
        for ((x, w), (ex, ew)) in eq.informed_atoms[1].iter().zip(expect_t2) {
            assert!((x - ex).abs() < 1e-12 && (w - ew).abs() < 1e-12);
        }
        let expect_t1 = [(3.0, 0.4), (6.0, 0.6)];
        for ((x, w), (ex, ew)) in eq.informed_atoms[0].iter().zip(expect_t1) {
            assert!((x - ex).abs() < 1e-12 && (w - ew).abs() < 1e-12);
        }
        // informed type-1 support inside (e + (h - 1) d, X_I]
        for (x, _) in &eq.informed_atoms[0] {
            assert!(*x > 2.0 - 3.0 && *x <= 7.0);
        }
    }

    #[test]
    fn value_matches_exact_evaluation() {
        let p = params(1.0, 0.5, 0.7, 10.0);
        let eq = build_equilibrium(&p, None).unwrap();
        let exact = ex_ante_payoff_informed(&eq.profile, &p.game()).unwrap();
        assert!((exact + 0.2).abs() < 1e-12);
        assert!((eq.value_from_uninformed_norm() - eq.value_from_informed_norm()).abs() < 1e-12);
        assert!((eq.value_from_uninformed_norm() - eq.value()).abs() < 1e-12);
    }

    #[test]
    fn even_levels_and_bad_offset_rejected() {
        let even = params(1.0, 0.5, 0.6, 1.0);
        assert!(matches!(build_equilibrium(&even, None), Err(Error::Unsupported(_))));
        let odd = params(1.0, 0.5, 0.7, 10.0);
        assert!(matches!(
            build_equilibrium(&odd, Some(0.5)),
            Err(Error::InvalidParameter(_))
        ));
        assert!(build_equilibrium(&odd, Some(3.0)).is_err());
    }
}
