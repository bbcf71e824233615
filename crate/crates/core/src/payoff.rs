//! Exact expected payoffs and budgets for profiles of piecewise marginals.

use alloc::vec::Vec;

use crate::cdf::{allocation_sign, PiecewiseCdf, Segment};
use crate::error::{Error, Result};
use crate::game::GameParams;
use crate::profile::StrategyProfile;

/// `E[sgn(x_a - x_b)]` for independent `x_a ~ a`, `x_b ~ b`, ties scoring 0.
///
/// Every pair of pieces is integrated in closed form: atom/atom pairs by
/// direct comparison, atom/segment pairs through the segment's CDF, and
/// segment/segment pairs through the integral of one clamped CDF over the
/// other segment.
pub fn battlefield_payoff(a: &PiecewiseCdf, b: &PiecewiseCdf) -> f64 {
    let mut total = 0.0;
    for x in a.atoms() {
        for y in b.atoms() {
            total += x.mass * y.mass * allocation_sign(x.location, y.location);
        }
        for s in b.segments() {
            let below = s.density * (x.location.clamp(s.left, s.right) - s.left);
            total += x.mass * (2.0 * below - s.mass());
        }
    }
    for s in a.segments() {
        for y in b.atoms() {
            let below = s.density * (y.location.clamp(s.left, s.right) - s.left);
            total += y.mass * (s.mass() - 2.0 * below);
        }
        for t in b.segments() {
            total += segment_pair_sign(s, t);
        }
    }
    total.clamp(-1.0, 1.0)
}

/// `∫∫ sgn(x - y) dS(x) dT(y)` for two uniform pieces.
fn segment_pair_sign(s: &Segment, t: &Segment) -> f64 {
    // J = ∫_{s.left}^{s.right} (clamp(x, t.left, t.right) - t.left) dx
    let mut j = 0.0;
    let lo = s.left.max(t.left);
    let hi = s.right.min(t.right);
    if hi > lo {
        j += 0.5 * ((hi - t.left) * (hi - t.left) - (lo - t.left) * (lo - t.left));
    }
    let lo = s.left.max(t.right);
    if s.right > lo {
        j += (t.right - t.left) * (s.right - lo);
    }
    s.density * (2.0 * t.density * j - t.mass() * (s.right - s.left))
}

/// Payoff to the informed player of type `ty`: `Σ_j v_ty^j · E[sgn]` on each
/// battlefield.
pub fn interim_payoff_informed(profile: &StrategyProfile, game: &GameParams, ty: usize) -> Result<f64> {
    profile.check_dimensions(game)?;
    if ty >= profile.types() {
        return Err(Error::IndexOutOfRange {
            index: ty,
            len: profile.types(),
        });
    }
    Ok(interim_unchecked(profile, game, ty))
}

fn interim_unchecked(profile: &StrategyProfile, game: &GameParams, ty: usize) -> f64 {
    let values = game.valuations().row(ty);
    profile
        .informed(ty)
        .iter()
        .zip(profile.uninformed())
        .zip(values)
        .map(|((fi, fu), v)| v * battlefield_payoff(fi, fu))
        .sum()
}

/// All interim payoffs, indexed by type.
pub fn interim_payoffs(profile: &StrategyProfile, game: &GameParams) -> Result<Vec<f64>> {
    profile.check_dimensions(game)?;
    Ok((0..profile.types())
        .map(|ty| interim_unchecked(profile, game, ty))
        .collect())
}

/// Prior-weighted payoff to the informed player. The game is zero-sum, so
/// the uninformed player's payoff is the negation.
pub fn ex_ante_payoff_informed(profile: &StrategyProfile, game: &GameParams) -> Result<f64> {
    let interim = interim_payoffs(profile, game)?;
    Ok(interim
        .iter()
        .zip(game.prior().probabilities())
        .map(|(u, p)| p * u)
        .sum())
}

/// True when every informed type earns the same interim payoff within `tol`.
pub fn interim_payoffs_agree(profile: &StrategyProfile, game: &GameParams, tol: f64) -> Result<bool> {
    let interim = interim_payoffs(profile, game)?;
    let lo = interim.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = interim.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(hi - lo <= tol)
}

/// Total expected allocation `Σ_j E[x_j]` of one player's marginals.
pub fn expected_budget(marginals: &[PiecewiseCdf]) -> f64 {
    marginals.iter().map(PiecewiseCdf::mean).sum()
}
