//! Independent verification of constructed equilibria.
//!
//! Nothing here trusts the constructions: Blotto profiles are checked by
//! scanning every pure deviation of each player, Lotto profiles by checking
//! the per-battlefield all-pay-auction conditions under the Lagrange
//! multipliers, and both by an exact payoff evaluation and a Monte Carlo
//! estimate.

use alloc::format;
use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::blotto2::{self, BlottoParams};
use crate::cdf::{allocation_sign, same_location, InverseCdf, PiecewiseCdf};
use crate::error::{Error, Result};
use crate::game::GameParams;
use crate::lotto3::{self, LottoParams, Multipliers};
use crate::payoff::{ex_ante_payoff_informed, expected_budget, interim_payoffs};
use crate::profile::StrategyProfile;

/// Default number of grid points per deviation scan.
pub const DEFAULT_GRID_POINTS: usize = 10_000;

/// Default Monte Carlo sample count.
pub const DEFAULT_SAMPLES: u64 = 1_000_000;

/// Samples per Monte Carlo chunk. Each chunk has its own generator stream.
pub const CHUNK_SAMPLES: u64 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Largest admissible deviation gain or support slack.
    pub deviation: f64,
    /// Largest admissible relative budget residual.
    pub budget: f64,
    /// Largest admissible difference between exact and claimed value.
    pub value: f64,
    /// Monte Carlo acceptance band in standard errors.
    pub mc_sigmas: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            deviation: 1e-6,
            budget: 1e-9,
            value: 1e-9,
            mc_sigmas: 4.0,
        }
    }
}

// ---------------------------------------------------------------------------
// Blotto deviations

/// Best pure-deviation gains in a two-battlefield Blotto profile.
#[derive(Debug, Clone, PartialEq)]
pub struct DeviationGaps {
    /// `max_x π_U(x) - π_U(profile)`.
    pub uninformed: f64,
    /// Battlefield-1 allocation attaining the uninformed maximum.
    pub uninformed_argmax: f64,
    /// Per-type `max_y π_I(y | t_i) - π_I(profile | t_i)`.
    pub informed: Vec<f64>,
    pub informed_argmax: Vec<f64>,
}

impl DeviationGaps {
    pub fn max_gap(&self) -> f64 {
        self.informed.iter().copied().fold(self.uninformed, f64::max)
    }
}

/// `E[sgn(x - Y)]` for a pure allocation `x` against an atomic `Y`.
fn point_sign(x: f64, dist: &PiecewiseCdf) -> f64 {
    dist.atoms()
        .iter()
        .map(|a| a.mass * allocation_sign(x, a.location))
        .sum()
}

/// Points of `[0, total]` at which a pure split `(x, total - x)` can change
/// outcome against the given battlefield marginals, with the midpoints
/// between them and a half-step-offset grid.
fn blotto_scan_points(total: f64, opponents: &[(&PiecewiseCdf, &PiecewiseCdf)], grid_points: usize) -> Vec<f64> {
    let mut breaks = Vec::new();
    breaks.push(0.0);
    breaks.push(total);
    for (bf1, bf2) in opponents {
        breaks.extend(bf1.atoms().iter().map(|a| a.location));
        breaks.extend(bf2.atoms().iter().map(|a| total - a.location));
    }
    breaks.retain(|x| *x >= 0.0 && *x <= total);
    breaks.sort_by(f64::total_cmp);
    breaks.dedup_by(|a, b| same_location(*a, *b));

    let mut points = breaks.clone();
    points.extend(breaks.windows(2).map(|w| 0.5 * (w[0] + w[1])));
    let step = total / grid_points as f64;
    points.extend((0..grid_points).map(|k| (k as f64 + 0.5) * step));
    points
}

fn require_blotto_shape(profile: &StrategyProfile, game: &GameParams) -> Result<()> {
    profile.check_dimensions(game)?;
    if profile.battlefields() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "Blotto scans need 2 battlefields, profile has {}",
            profile.battlefields()
        )));
    }
    let all_atomic = profile.uninformed().iter().all(PiecewiseCdf::is_atomic)
        && profile.informed_all().iter().flatten().all(PiecewiseCdf::is_atomic);
    if !all_atomic {
        return Err(Error::InvalidDistribution(
            "Blotto deviation scans need purely atomic marginals".into(),
        ));
    }
    Ok(())
}

/// Scans every pure deviation `(x, X - x)` of each player and type.
///
/// Payoffs against atomic marginals are piecewise constant in `x`, so the
/// breakpoints and midpoints make the scan exact; the grid is a safeguard.
pub fn blotto_deviation_gap(profile: &StrategyProfile, game: &GameParams, grid_points: usize) -> Result<DeviationGaps> {
    require_blotto_shape(profile, game)?;
    let grid_points = grid_points.max(1);
    let v = game.valuations();
    let p = game.prior().probabilities();
    let interim = interim_payoffs(profile, game)?;
    let value: f64 = interim.iter().zip(p).map(|(u, p)| u * p).sum();

    let x_u = game.budgets().uninformed();
    let u_bf = profile.uninformed();
    let opponents: Vec<_> = profile.informed_all().iter().map(|m| (&m[0], &m[1])).collect();
    let payoff_u = |x: f64| -> f64 {
        -(0..profile.types())
            .map(|i| {
                let m = profile.informed(i);
                // I's sign against U's pure split
                p[i] * (v.value(i, 0) * -point_sign(x, &m[0]) + v.value(i, 1) * -point_sign(x_u - x, &m[1]))
            })
            .sum::<f64>()
    };
    let (uninformed, uninformed_argmax) =
        best_over(&blotto_scan_points(x_u, &opponents, grid_points), payoff_u, -value);

    let x_i = game.budgets().informed();
    let points = blotto_scan_points(x_i, &[(&u_bf[0], &u_bf[1])], grid_points);
    let mut informed = Vec::with_capacity(profile.types());
    let mut informed_argmax = Vec::with_capacity(profile.types());
    for (i, eq) in interim.iter().enumerate() {
        let payoff = |y: f64| v.value(i, 0) * point_sign(y, &u_bf[0]) + v.value(i, 1) * point_sign(x_i - y, &u_bf[1]);
        let (gap, arg) = best_over(&points, payoff, *eq);
        informed.push(gap);
        informed_argmax.push(arg);
    }
    Ok(DeviationGaps {
        uninformed,
        uninformed_argmax,
        informed,
        informed_argmax,
    })
}

fn best_over(points: &[f64], f: impl Fn(f64) -> f64, baseline: f64) -> (f64, f64) {
    let mut best = f64::NEG_INFINITY;
    let mut arg = f64::NAN;
    for &x in points {
        let u = f(x);
        if u > best {
            best = u;
            arg = x;
        }
    }
    (best - baseline, arg)
}

/// Largest pointwise budget violation of a two-battlefield profile, relative
/// to the budget: battlefield 2 must be the reflection of battlefield 1.
fn blotto_budget_residual(marginals: &[PiecewiseCdf], total: f64) -> Result<f64> {
    let expected = marginals[0].reflect(total)?;
    let mut residual = 0.0f64;
    let actual = marginals[1].atoms();
    let mut matched = alloc::vec![false; actual.len()];
    for a in expected.atoms() {
        match actual
            .iter()
            .position(|b| same_location(a.location, b.location) || (a.location - b.location).abs() <= 1e-12 * total)
        {
            Some(k) => {
                matched[k] = true;
                residual += (a.mass - actual[k].mass).abs();
            }
            None => residual += a.mass,
        }
    }
    residual += actual
        .iter()
        .zip(&matched)
        .filter(|(_, m)| !**m)
        .map(|(b, _)| b.mass)
        .sum::<f64>();
    let lo = marginals[0].support_min().min(marginals[1].support_min());
    let hi = marginals[0].support_max().max(marginals[1].support_max());
    let range = ((-lo).max(0.0) + (hi - total).max(0.0)) / total;
    Ok(residual.max(range))
}

// ---------------------------------------------------------------------------
// Lotto support optimality

/// Support optimality of one marginal for `u(x) = ν·F_opp(x) - x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarginalOptimality {
    /// Supremum of `u` over the scan.
    pub sup: f64,
    /// Smallest and largest `u` on the marginal's own support.
    pub support_min: f64,
    pub support_max: f64,
}

impl MarginalOptimality {
    /// How far the best deviation beats the best supported allocation.
    pub fn slack(&self) -> f64 {
        self.sup - self.support_max
    }

    /// Spread of `u` over the support.
    pub fn variation(&self) -> f64 {
        self.support_max - self.support_min
    }

    /// `sup - min over support`: gain of the best deviation over the worst
    /// allocation the marginal actually uses.
    pub fn gap(&self) -> f64 {
        self.sup - self.support_min
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LottoOptimality {
    /// `informed[i][j]`: type `i`, battlefield `j`.
    pub informed: Vec<Vec<MarginalOptimality>>,
    pub uninformed: Vec<MarginalOptimality>,
}

impl LottoOptimality {
    pub fn informed_gap(&self, ty: usize) -> f64 {
        self.informed[ty]
            .iter()
            .map(MarginalOptimality::gap)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn uninformed_gap(&self) -> f64 {
        self.uninformed
            .iter()
            .map(MarginalOptimality::gap)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn max_gap(&self) -> f64 {
        (0..self.informed.len())
            .map(|i| self.informed_gap(i))
            .fold(self.uninformed_gap(), f64::max)
    }
}

/// Piecewise-linear `x ↦ Σ_k ν_k·F_k(x) - x` against a weighted mixture of
/// opponent marginals.
struct Lagrangian<'a> {
    terms: Vec<(f64, &'a PiecewiseCdf)>,
}

impl Lagrangian<'_> {
    fn at(&self, x: f64) -> f64 {
        self.terms.iter().map(|(nu, f)| nu * f.tie_split_cdf(x)).sum::<f64>() - x
    }

    fn right_limit(&self, x: f64) -> f64 {
        self.terms.iter().map(|(nu, f)| nu * f.cdf(x)).sum::<f64>() - x
    }

    fn left_limit(&self, x: f64) -> f64 {
        self.terms.iter().map(|(nu, f)| nu * f.cdf_below(x)).sum::<f64>() - x
    }

    fn breakpoints(&self) -> Vec<f64> {
        self.terms.iter().flat_map(|(_, f)| f.breakpoints()).collect()
    }

    fn check(&self, own: &PiecewiseCdf, grid_points: usize) -> MarginalOptimality {
        let breaks = self.breakpoints();
        let top = breaks
            .iter()
            .copied()
            .chain([own.support_max(), 0.0])
            .fold(f64::NEG_INFINITY, f64::max);

        let mut sup = f64::NEG_INFINITY;
        for &b in &breaks {
            sup = sup.max(self.at(b)).max(self.right_limit(b));
            if b > 0.0 {
                sup = sup.max(self.left_limit(b));
            }
        }
        let n = grid_points.max(1);
        for k in 0..=n {
            sup = sup.max(self.at(top * k as f64 / n as f64));
        }

        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        let mut visit = |u: f64| {
            lo = lo.min(u);
            hi = hi.max(u);
        };
        for a in own.atoms() {
            visit(self.at(a.location));
        }
        const INTERIOR: usize = 32;
        for s in own.segments() {
            visit(self.right_limit(s.left));
            visit(self.left_limit(s.right));
            for k in 1..INTERIOR {
                let x = s.left + (s.right - s.left) * k as f64 / INTERIOR as f64;
                visit(self.at(x));
            }
            for &b in &breaks {
                if b > s.left && b < s.right {
                    visit(self.left_limit(b));
                    visit(self.right_limit(b));
                }
            }
        }
        for a in own.atoms() {
            sup = sup.max(self.at(a.location));
        }
        MarginalOptimality {
            sup: sup.max(hi),
            support_min: lo,
            support_max: hi,
        }
    }
}

/// Checks, battlefield by battlefield, that each marginal is supported on
/// maximizers of its all-pay-auction Lagrangian: for type `i` of the
/// informed player `u(x) = (2 v_i^j p_i / λ_I) F_U^j(x) - x`, for the
/// uninformed player `u(x) = Σ_i p_i (2 v_i^j / λ_U) F_I^j(t_i)(x) - x`.
pub fn lotto_support_optimality(
    profile: &StrategyProfile,
    game: &GameParams,
    multipliers: &Multipliers,
    grid_points: usize,
) -> Result<LottoOptimality> {
    profile.check_dimensions(game)?;
    let (li, lu) = (multipliers.informed, multipliers.uninformed);
    if !(li > 0.0 && lu > 0.0 && li.is_finite() && lu.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "multipliers must be positive, got ({li}, {lu})"
        )));
    }
    let v = game.valuations();
    let p = game.prior().probabilities();
    let n = profile.battlefields();

    let informed = (0..profile.types())
        .map(|i| {
            (0..n)
                .map(|j| {
                    let nu = 2.0 * v.value(i, j) * p[i] / li;
                    Lagrangian {
                        terms: alloc::vec![(nu, &profile.uninformed()[j])],
                    }
                    .check(&profile.informed(i)[j], grid_points)
                })
                .collect()
        })
        .collect();
    let uninformed = (0..n)
        .map(|j| {
            let terms = (0..profile.types())
                .map(|i| (2.0 * v.value(i, j) * p[i] / lu, &profile.informed(i)[j]))
                .collect();
            Lagrangian { terms }.check(&profile.uninformed()[j], grid_points)
        })
        .collect();
    Ok(LottoOptimality { informed, uninformed })
}

// ---------------------------------------------------------------------------
// Monte Carlo

/// Sample mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub samples: u64,
}

/// Count, mean and centered sum of squares of one chunk of samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChunkStats {
    pub count: u64,
    pub mean: f64,
    pub m2: f64,
}

impl ChunkStats {
    pub const EMPTY: ChunkStats = ChunkStats {
        count: 0,
        mean: 0.0,
        m2: 0.0,
    };

    /// Pairwise combination of two disjoint sample sets.
    pub fn merge(self, other: ChunkStats) -> ChunkStats {
        if self.count == 0 {
            return other;
        }
        if other.count == 0 {
            return self;
        }
        let n = self.count + other.count;
        let delta = other.mean - self.mean;
        let w = other.count as f64 / n as f64;
        ChunkStats {
            count: n,
            mean: self.mean + delta * w,
            m2: self.m2 + other.m2 + delta * delta * self.count as f64 * w,
        }
    }

    pub fn estimate(&self) -> McEstimate {
        let var = if self.count > 1 {
            self.m2 / (self.count - 1) as f64
        } else {
            0.0
        };
        McEstimate {
            mean: self.mean,
            std_error: libm::sqrt(var / self.count as f64),
            samples: self.count,
        }
    }
}

/// Precomputed inverse CDFs for sampling `π_I` of a profile.
///
/// Each sample draws a state from the prior and an independent allocation
/// from every marginal. Chunk `k` uses stream `k` of a ChaCha8 generator
/// seeded with `seed`, so chunks can be evaluated in any order or in
/// parallel and reduced in index order to the same result.
pub struct McSampler {
    informed: Vec<Vec<InverseCdf>>,
    uninformed: Vec<InverseCdf>,
    values: Vec<Vec<f64>>,
    cumulative: Vec<f64>,
    seed: u64,
}

fn uniform01(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

impl McSampler {
    pub fn new(profile: &StrategyProfile, game: &GameParams, seed: u64) -> Result<Self> {
        profile.check_dimensions(game)?;
        let mut acc = 0.0;
        let cumulative = game
            .prior()
            .probabilities()
            .iter()
            .map(|p| {
                acc += p;
                acc
            })
            .collect();
        Ok(Self {
            informed: profile
                .informed_all()
                .iter()
                .map(|row| row.iter().map(PiecewiseCdf::inverse).collect())
                .collect(),
            uninformed: profile.uninformed().iter().map(PiecewiseCdf::inverse).collect(),
            values: (0..profile.types())
                .map(|i| game.valuations().row(i).to_vec())
                .collect(),
            cumulative,
            seed,
        })
    }

    /// Number of chunks needed for `samples` samples.
    pub fn chunk_count(samples: u64) -> u64 {
        samples.div_ceil(CHUNK_SAMPLES)
    }

    /// Samples in chunk `index` out of `samples` in total.
    pub fn chunk_len(samples: u64, index: u64) -> u64 {
        (samples - index * CHUNK_SAMPLES).min(CHUNK_SAMPLES)
    }

    pub fn chunk(&self, index: u64, len: u64) -> ChunkStats {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index);
        let mut stats = ChunkStats::EMPTY;
        let mut mean = 0.0;
        let mut m2 = 0.0;
        for k in 0..len {
            let x = self.draw(&mut rng);
            let delta = x - mean;
            mean += delta / (k + 1) as f64;
            m2 += delta * (x - mean);
        }
        if len > 0 {
            stats = ChunkStats { count: len, mean, m2 };
        }
        stats
    }

    fn draw(&self, rng: &mut ChaCha8Rng) -> f64 {
        let u = uniform01(rng);
        let last = self.cumulative.len() - 1;
        let state = self.cumulative.partition_point(|&c| c <= u).min(last);
        let mut payoff = 0.0;
        for (j, inv_u) in self.uninformed.iter().enumerate() {
            let xi = self.informed[state][j].sample(uniform01(rng));
            let xu = inv_u.sample(uniform01(rng));
            payoff += self.values[state][j] * allocation_sign(xi, xu);
        }
        payoff
    }
}

fn check_samples(samples: u64) -> Result<()> {
    if samples < 1 {
        return Err(Error::InvalidParameter("Monte Carlo needs at least one sample".into()));
    }
    Ok(())
}

/// Monte Carlo estimate of `π_I`; deterministic in `(profile, game, samples, seed)`.
pub fn monte_carlo_value(profile: &StrategyProfile, game: &GameParams, samples: u64, seed: u64) -> Result<McEstimate> {
    check_samples(samples)?;
    let sampler = McSampler::new(profile, game, seed)?;
    let stats = (0..McSampler::chunk_count(samples))
        .map(|k| sampler.chunk(k, McSampler::chunk_len(samples, k)))
        .fold(ChunkStats::EMPTY, ChunkStats::merge);
    Ok(stats.estimate())
}

// ---------------------------------------------------------------------------
// Certification

/// Parameters of a game with a closed-form value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Instance {
    Blotto(BlottoParams),
    Lotto(LottoParams),
}

impl Instance {
    pub fn game(&self) -> GameParams {
        match self {
            Instance::Blotto(p) => p.game(),
            Instance::Lotto(p) => p.game(),
        }
    }

    /// Closed-form equilibrium payoff of the informed player.
    pub fn claimed_value(&self) -> f64 {
        match self {
            Instance::Blotto(p) => blotto2::informed_payoff(p),
            Instance::Lotto(p) => lotto3::informed_payoff(p.alpha(), p.beta(), p.gamma()).expect("validated params"),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Instance::Blotto(_) => "blotto2",
            Instance::Lotto(_) => "lotto3",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CertifyOptions {
    pub grid_points: usize,
    pub samples: u64,
    pub seed: u64,
    pub tolerances: Tolerances,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        Self {
            grid_points: DEFAULT_GRID_POINTS,
            samples: DEFAULT_SAMPLES,
            seed: 0,
            tolerances: Tolerances::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub game: &'static str,
    pub claimed_value: f64,
    /// `π_I` of the profile by exact integration.
    pub exact_value: f64,
    pub gap_uninformed: f64,
    pub gap_informed: Vec<f64>,
    /// Relative budget residuals.
    pub budget_residual_uninformed: f64,
    pub budget_residual_informed: Vec<f64>,
    pub mc: McEstimate,
    pub tolerances: Tolerances,
    pub pass: bool,
}

impl Certificate {
    pub fn max_gap(&self) -> f64 {
        self.gap_informed.iter().copied().fold(self.gap_uninformed, f64::max)
    }

    pub fn max_budget_residual(&self) -> f64 {
        self.budget_residual_informed
            .iter()
            .copied()
            .fold(self.budget_residual_uninformed, f64::max)
    }

    pub fn mc_within_band(&self) -> bool {
        (self.mc.mean - self.claimed_value).abs() <= self.tolerances.mc_sigmas * self.mc.std_error + 1e-12
    }

    fn evaluate(&self) -> bool {
        let t = &self.tolerances;
        self.max_gap() <= t.deviation
            && self.max_budget_residual() <= t.budget
            && (self.exact_value - self.claimed_value).abs() <= t.value
            && self.mc_within_band()
    }
}

/// Runs every applicable check with a sequential Monte Carlo estimate.
pub fn certify(profile: &StrategyProfile, instance: &Instance, options: &CertifyOptions) -> Result<Certificate> {
    certify_with(profile, instance, options, |sampler, samples| {
        (0..McSampler::chunk_count(samples))
            .map(|k| sampler.chunk(k, McSampler::chunk_len(samples, k)))
            .fold(ChunkStats::EMPTY, ChunkStats::merge)
            .estimate()
    })
}

/// As [`certify`], with the Monte Carlo reduction supplied by the caller
/// (for example a parallel one).
pub fn certify_with(
    profile: &StrategyProfile,
    instance: &Instance,
    options: &CertifyOptions,
    estimate: impl FnOnce(&McSampler, u64) -> McEstimate,
) -> Result<Certificate> {
    check_samples(options.samples)?;
    let game = instance.game();
    profile.check_dimensions(&game)?;
    let exact_value = ex_ante_payoff_informed(profile, &game)?;
    let x_i = game.budgets().informed();
    let x_u = game.budgets().uninformed();

    let (gap_uninformed, gap_informed, budget_residual_uninformed, budget_residual_informed) = match instance {
        Instance::Blotto(_) => {
            let gaps = blotto_deviation_gap(profile, &game, options.grid_points)?;
            let informed = profile
                .informed_all()
                .iter()
                .map(|m| blotto_budget_residual(m, x_i))
                .collect::<Result<Vec<_>>>()?;
            let uninformed = blotto_budget_residual(profile.uninformed(), x_u)?;
            (gaps.uninformed, gaps.informed, uninformed, informed)
        }
        Instance::Lotto(params) => {
            let report = lotto_support_optimality(profile, &game, &lotto3::multipliers(params), options.grid_points)?;
            let informed_gaps = (0..profile.types()).map(|i| report.informed_gap(i)).collect();
            let informed = profile
                .informed_all()
                .iter()
                .map(|m| (expected_budget(m) - x_i).abs() / x_i)
                .collect();
            let uninformed = (expected_budget(profile.uninformed()) - x_u).abs() / x_u;
            (report.uninformed_gap(), informed_gaps, uninformed, informed)
        }
    };

    let sampler = McSampler::new(profile, &game, options.seed)?;
    let mc = estimate(&sampler, options.samples);

    let mut certificate = Certificate {
        game: instance.label(),
        claimed_value: instance.claimed_value(),
        exact_value,
        gap_uninformed,
        gap_informed,
        budget_residual_uninformed,
        budget_residual_informed,
        mc,
        tolerances: options.tolerances,
        pass: false,
    };
    certificate.pass = certificate.evaluate();
    Ok(certificate)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{Budgets, Prior, ValuationMatrix};
    use alloc::vec;

    fn blotto(low: f64, gamma: f64) -> blotto2::BlottoEquilibrium {
        let params = BlottoParams::from_ratio(1.0, low, gamma, 10.0).unwrap();
        blotto2::build_equilibrium(&params, None).unwrap()
    }

    #[test]
    fn constructed_blotto_has_no_profitable_deviation() {
        let eq = blotto(0.5, 0.7);
        let gaps = blotto_deviation_gap(&eq.profile, &eq.params.game(), DEFAULT_GRID_POINTS).unwrap();
        assert!(gaps.max_gap() <= 1e-9, "{gaps:?}");
        assert!(gaps.uninformed >= -1e-12);
        assert!(gaps.informed.iter().all(|g| *g >= -1e-12));
    }

    #[test]
    fn pure_uninformed_deviation_is_not_better() {
        let eq = blotto(0.5, 0.7);
        let game = eq.params.game();
        let half = PiecewiseCdf::point(5.0).unwrap();
        let profile = StrategyProfile::new(eq.profile.informed_all().to_vec(), vec![half.clone(), half]).unwrap();
        let gaps = blotto_deviation_gap(&profile, &game, 1000).unwrap();
        assert!(gaps.uninformed >= 0.0);
    }

    #[test]
    fn perturbed_blotto_profile_is_exposed() {
        let eq = blotto(0.5, 0.7);
        let game = eq.params.game();
        let mut atoms = eq.uninformed_atoms.clone();
        atoms[0].1 += 0.05;
        let total: f64 = atoms.iter().map(|a| a.1).sum();
        for a in &mut atoms {
            a.1 /= total;
        }
        let bf1 = PiecewiseCdf::from_parts(&atoms, &[]).unwrap();
        let bf2 = bf1.reflect(10.0).unwrap();
        let profile = StrategyProfile::new(eq.profile.informed_all().to_vec(), vec![bf1, bf2]).unwrap();
        let gaps = blotto_deviation_gap(&profile, &game, DEFAULT_GRID_POINTS).unwrap();
        assert!(gaps.max_gap() > 1e-3, "{gaps:?}");
    }

    #[test]
    fn blotto_scan_rejects_segments() {
        let eq = blotto(0.5, 0.7);
        let u = PiecewiseCdf::uniform(0.0, 10.0).unwrap();
        let profile = StrategyProfile::new(eq.profile.informed_all().to_vec(), vec![u.clone(), u]).unwrap();
        assert!(matches!(
            blotto_deviation_gap(&profile, &eq.params.game(), 100),
            Err(Error::InvalidDistribution(_))
        ));
    }

    #[test]
    fn regime_one_support_optimality() {
        let params = LottoParams::new(0.5, 0.5, 0.2, 1.0).unwrap();
        let s = lotto3::build_equilibrium(&params).unwrap();
        let report =
            lotto_support_optimality(&s.profile(), &params.game(), &s.multipliers, DEFAULT_GRID_POINTS).unwrap();
        assert!(report.max_gap() <= 1e-9, "{report:?}");
        // the α battlefield sits at 0 and no positive bid pays
        let alpha = report.informed[0][1];
        assert!(alpha.support_max.abs() < 1e-15);
        assert!(alpha.sup.abs() < 1e-12);
    }

    #[test]
    fn deterministic_win_has_zero_variance() {
        let game = GameParams::new(
            ValuationMatrix::new(&[vec![0.5, 0.5]]).unwrap(),
            Prior::uniform(1),
            Budgets::new(2.0, 2.0).unwrap(),
        )
        .unwrap();
        let one = PiecewiseCdf::point(1.0).unwrap();
        let zero = PiecewiseCdf::point(0.0).unwrap();
        let profile = StrategyProfile::new(vec![vec![one.clone(), one]], vec![zero.clone(), zero]).unwrap();
        let mc = monte_carlo_value(&profile, &game, 1000, 7).unwrap();
        assert_eq!(mc.mean, 1.0);
        assert_eq!(mc.std_error, 0.0);
        assert_eq!(mc.samples, 1000);
        assert!(monte_carlo_value(&profile, &game, 0, 7).is_err());
    }

    #[test]
    fn chunk_merge_matches_direct_moments() {
        let xs = [1.0, -1.0, 0.5, 0.25, -0.75, 1.0];
        let direct_mean = xs.iter().sum::<f64>() / 6.0;
        let direct_m2: f64 = xs.iter().map(|x| (x - direct_mean) * (x - direct_mean)).sum();
        let stats = |s: &[f64]| {
            let m = s.iter().sum::<f64>() / s.len() as f64;
            ChunkStats {
                count: s.len() as u64,
                mean: m,
                m2: s.iter().map(|x| (x - m) * (x - m)).sum(),
            }
        };
        let merged = stats(&xs[..2]).merge(stats(&xs[2..]));
        assert!((merged.mean - direct_mean).abs() < 1e-15);
        assert!((merged.m2 - direct_m2).abs() < 1e-14);
    }

    #[test]
    fn certify_blotto_and_lotto() {
        let options = CertifyOptions {
            samples: 200_000,
            ..CertifyOptions::default()
        };
        let eq = blotto(0.5, 0.7);
        let cert = certify(&eq.profile, &Instance::Blotto(eq.params), &options).unwrap();
        assert!(cert.pass, "{cert:?}");
        assert!((cert.claimed_value + 0.2).abs() < 1e-12);

        let params = LottoParams::new(0.6, 0.3, 0.8, 1.0).unwrap();
        let s = lotto3::build_equilibrium(&params).unwrap();
        let cert = certify(&s.profile(), &Instance::Lotto(params), &options).unwrap();
        assert!(cert.pass, "{cert:?}");
    }
}
