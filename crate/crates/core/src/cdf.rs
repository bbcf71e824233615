//! Univariate allocation distributions made of point masses and
//! constant-density segments.
//!
//! Every equilibrium marginal in the two solvers has this form, so payoffs,
//! means and quantiles are all computed in closed form.

use alloc::format;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::error::{Error, Result};

/// Total probability mass must equal one within this tolerance.
pub const MASS_TOLERANCE: f64 = 1e-12;

/// Relative tolerance under which two allocations count as equal (a tie).
pub const TIE_TOLERANCE: f64 = 1e-12;

/// True when `a` and `b` are the same allocation up to rounding.
#[inline]
pub fn same_location(a: f64, b: f64) -> bool {
    let scale = a.abs().max(b.abs());
    (a - b).abs() <= TIE_TOLERANCE * scale
}

/// `sgn(a - b)` with ties (within [`TIE_TOLERANCE`]) mapped to zero.
#[inline]
pub fn allocation_sign(a: f64, b: f64) -> f64 {
    if same_location(a, b) {
        0.0
    } else if a > b {
        1.0
    } else {
        -1.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    pub location: f64,
    pub mass: f64,
}

/// Constant density on `[left, right]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub left: f64,
    pub right: f64,
    pub density: f64,
}

impl Segment {
    pub fn mass(&self) -> f64 {
        self.density * (self.right - self.left)
    }

    /// Mass of the segment lying at or below `x`.
    fn mass_below(&self, x: f64) -> f64 {
        self.density * (x.clamp(self.left, self.right) - self.left)
    }

    fn contains_interior(&self, x: f64) -> bool {
        x > self.left && x < self.right && !same_location(x, self.left) && !same_location(x, self.right)
    }
}

#[derive(Debug, Clone, Copy)]
enum Piece {
    Atom(Atom),
    Segment(Segment),
}

/// A mixed discrete/continuous distribution on the nonnegative reals.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseCdf {
    atoms: Vec<Atom>,
    segments: Vec<Segment>,
}

impl PiecewiseCdf {
    /// Validates and normalizes the representation: atoms and segments are
    /// sorted, atoms at the same location are merged.
    pub fn new(mut atoms: Vec<Atom>, mut segments: Vec<Segment>) -> Result<Self> {
        for a in &atoms {
            if !(a.location.is_finite() && a.location >= 0.0) {
                return Err(Error::InvalidDistribution(format!(
                    "atom location {} must be nonnegative",
                    a.location
                )));
            }
            if !(a.mass.is_finite() && a.mass > 0.0 && a.mass <= 1.0 + MASS_TOLERANCE) {
                return Err(Error::InvalidDistribution(format!(
                    "atom mass {} must lie in (0, 1]",
                    a.mass
                )));
            }
        }
        for s in &segments {
            if !(s.left.is_finite() && s.right.is_finite() && s.left >= 0.0 && s.left < s.right) {
                return Err(Error::InvalidDistribution(format!(
                    "segment [{}, {}] must satisfy 0 <= left < right",
                    s.left, s.right
                )));
            }
            if !(s.density.is_finite() && s.density > 0.0) {
                return Err(Error::InvalidDistribution(format!(
                    "segment density {} must be positive",
                    s.density
                )));
            }
        }

        atoms.sort_by(|a, b| a.location.total_cmp(&b.location));
        let mut merged: Vec<Atom> = Vec::with_capacity(atoms.len());
        for a in atoms {
            match merged.last_mut() {
                Some(last) if same_location(last.location, a.location) => last.mass += a.mass,
                _ => merged.push(a),
            }
        }
        segments.sort_by(|a, b| a.left.total_cmp(&b.left));
        for pair in segments.windows(2) {
            if pair[1].left < pair[0].right && !same_location(pair[1].left, pair[0].right) {
                return Err(Error::InvalidDistribution(format!(
                    "segments [{}, {}] and [{}, {}] overlap",
                    pair[0].left, pair[0].right, pair[1].left, pair[1].right
                )));
            }
        }
        for a in &merged {
            if let Some(s) = segments.iter().find(|s| s.contains_interior(a.location)) {
                return Err(Error::InvalidDistribution(format!(
                    "atom at {} lies inside segment [{}, {}]",
                    a.location, s.left, s.right
                )));
            }
        }

        let total: f64 = merged.iter().map(|a| a.mass).sum::<f64>() + segments.iter().map(Segment::mass).sum::<f64>();
        if (total - 1.0).abs() > MASS_TOLERANCE {
            return Err(Error::InvalidDistribution(format!("total mass {total} differs from 1")));
        }
        Ok(Self {
            atoms: merged,
            segments,
        })
    }

    /// Convenience constructor from `(location, mass)` and
    /// `(left, right, density)` tuples.
    pub fn from_parts(atoms: &[(f64, f64)], segments: &[(f64, f64, f64)]) -> Result<Self> {
        Self::new(
            atoms.iter().map(|&(location, mass)| Atom { location, mass }).collect(),
            segments
                .iter()
                .map(|&(left, right, density)| Segment { left, right, density })
                .collect(),
        )
    }

    pub fn point(location: f64) -> Result<Self> {
        Self::from_parts(&[(location, 1.0)], &[])
    }

    pub fn uniform(left: f64, right: f64) -> Result<Self> {
        Self::from_parts(&[], &[(left, right, 1.0 / (right - left))])
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn is_atomic(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.mass).sum::<f64>() + self.segments.iter().map(Segment::mass).sum::<f64>()
    }

    pub fn mean(&self) -> f64 {
        let atoms: f64 = self.atoms.iter().map(|a| a.location * a.mass).sum();
        let segments: f64 = self
            .segments
            .iter()
            .map(|s| 0.5 * s.density * (s.right * s.right - s.left * s.left))
            .sum();
        atoms + segments
    }

    /// P(X <= x). Right-continuous.
    pub fn cdf(&self, x: f64) -> f64 {
        let atoms: f64 = self
            .atoms
            .iter()
            .filter(|a| a.location <= x || same_location(a.location, x))
            .map(|a| a.mass)
            .sum();
        (atoms + self.segment_mass_below(x)).min(1.0)
    }

    /// P(X < x).
    pub fn cdf_below(&self, x: f64) -> f64 {
        let atoms: f64 = self
            .atoms
            .iter()
            .filter(|a| a.location < x && !same_location(a.location, x))
            .map(|a| a.mass)
            .sum();
        (atoms + self.segment_mass_below(x)).min(1.0)
    }

    /// P(X < x) + P(X = x) / 2: the win probability of bidding `x` when
    /// ties are split.
    pub fn tie_split_cdf(&self, x: f64) -> f64 {
        0.5 * (self.cdf(x) + self.cdf_below(x))
    }

    fn segment_mass_below(&self, x: f64) -> f64 {
        self.segments.iter().map(|s| s.mass_below(x)).sum()
    }

    /// Smallest point of the support.
    pub fn support_min(&self) -> f64 {
        let a = self.atoms.first().map_or(f64::INFINITY, |a| a.location);
        let s = self.segments.first().map_or(f64::INFINITY, |s| s.left);
        a.min(s)
    }

    /// Largest point of the support.
    pub fn support_max(&self) -> f64 {
        let a = self.atoms.last().map_or(f64::NEG_INFINITY, |a| a.location);
        let s = self.segments.iter().map(|s| s.right).fold(f64::NEG_INFINITY, f64::max);
        a.max(s)
    }

    /// Sorted, deduplicated atom locations and segment endpoints.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut points: Vec<f64> = self
            .atoms
            .iter()
            .map(|a| a.location)
            .chain(self.segments.iter().flat_map(|s| [s.left, s.right]))
            .collect();
        points.sort_by(f64::total_cmp);
        points.dedup_by(|a, b| same_location(*a, *b));
        points
    }

    /// Distribution of `total - X`.
    pub fn reflect(&self, total: f64) -> Result<Self> {
        let flip = |x: f64| {
            let y = total - x;
            if y < 0.0 && same_location(x, total) {
                0.0
            } else {
                y
            }
        };
        Self::new(
            self.atoms
                .iter()
                .map(|a| Atom {
                    location: flip(a.location),
                    mass: a.mass,
                })
                .collect(),
            self.segments
                .iter()
                .map(|s| Segment {
                    left: flip(s.right),
                    right: flip(s.left),
                    density: s.density,
                })
                .collect(),
        )
    }

    /// Distribution of `factor · X` for `factor > 0`.
    pub fn scale(&self, factor: f64) -> Result<Self> {
        if !(factor.is_finite() && factor > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "scale factor {factor} must be positive"
            )));
        }
        Self::new(
            self.atoms
                .iter()
                .map(|a| Atom {
                    location: a.location * factor,
                    mass: a.mass,
                })
                .collect(),
            self.segments
                .iter()
                .map(|s| Segment {
                    left: s.left * factor,
                    right: s.right * factor,
                    density: s.density / factor,
                })
                .collect(),
        )
    }

    /// Inverse CDF: maps `u ∈ [0, 1)` to an allocation.
    pub fn quantile(&self, u: f64) -> f64 {
        self.inverse().sample(u)
    }

    /// Precomputed inverse CDF for repeated sampling.
    pub fn inverse(&self) -> InverseCdf {
        let mut pieces: Vec<(f64, u8, Piece)> = self
            .atoms
            .iter()
            .map(|a| (a.location, 0u8, Piece::Atom(*a)))
            .chain(self.segments.iter().map(|s| (s.left, 1u8, Piece::Segment(*s))))
            .collect();
        // an atom sitting on a segment's left end comes first
        pieces.sort_by(|a, b| match a.0.total_cmp(&b.0) {
            Ordering::Equal => a.1.cmp(&b.1),
            o => o,
        });
        let mut upper = Vec::with_capacity(pieces.len());
        let mut acc = 0.0;
        for (_, _, piece) in &pieces {
            acc += match piece {
                Piece::Atom(a) => a.mass,
                Piece::Segment(s) => s.mass(),
            };
            upper.push(acc);
        }
        InverseCdf {
            upper,
            pieces: pieces.into_iter().map(|(_, _, p)| p).collect(),
        }
    }
}

/// Inverse-transform sampler for a [`PiecewiseCdf`].
#[derive(Debug, Clone)]
pub struct InverseCdf {
    /// Cumulative mass at the upper end of each piece.
    upper: Vec<f64>,
    pieces: Vec<Piece>,
}

impl InverseCdf {
    pub fn sample(&self, u: f64) -> f64 {
        let k = self.upper.partition_point(|&c| c <= u).min(self.pieces.len() - 1);
        let below = if k == 0 { 0.0 } else { self.upper[k - 1] };
        match self.pieces[k] {
            Piece::Atom(a) => a.location,
            Piece::Segment(s) => (s.left + (u - below).max(0.0) / s.density).min(s.right),
        }
    }
}
