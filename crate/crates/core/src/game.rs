//! Game data shared by the Blotto and Lotto solvers: who values what in
//! which state, how likely each state is, and how many resources each side
//! brings.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};

const PRIOR_TOLERANCE: f64 = 1e-12;

/// Battlefield values per state, stored row-major (`states × battlefields`).
#[derive(Debug, Clone, PartialEq)]
pub struct ValuationMatrix {
    states: usize,
    battlefields: usize,
    values: Vec<f64>,
}

impl ValuationMatrix {
    pub fn new(rows: &[Vec<f64>]) -> Result<Self> {
        let states = rows.len();
        if states == 0 {
            return Err(Error::InvalidParameter("valuation matrix has no states".into()));
        }
        let battlefields = rows[0].len();
        if battlefields == 0 {
            return Err(Error::InvalidParameter("valuation matrix has no battlefields".into()));
        }
        let mut values = Vec::with_capacity(states * battlefields);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != battlefields {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has {} entries, expected {battlefields}",
                    row.len()
                )));
            }
            for (j, &v) in row.iter().enumerate() {
                if !(v.is_finite() && v > 0.0) {
                    return Err(Error::InvalidParameter(format!(
                        "valuation v[{i}][{j}] = {v} must be positive"
                    )));
                }
            }
            values.extend_from_slice(row);
        }
        Ok(Self {
            states,
            battlefields,
            values,
        })
    }

    /// The cyclic three-battlefield matrix whose rows are shifts of
    /// `(1, α, β) / (1 + α + β)`.
    pub fn cyclic(alpha: f64, beta: f64) -> Result<Self> {
        let c = 1.0 / (1.0 + alpha + beta);
        Self::new(&[
            alloc::vec![c, alpha * c, beta * c],
            alloc::vec![beta * c, c, alpha * c],
            alloc::vec![alpha * c, beta * c, c],
        ])
    }

    /// The symmetric two-state, two-battlefield matrix
    /// `[[high, low], [low, high]] / (high + low)`.
    pub fn symmetric_pair(high: f64, low: f64) -> Result<Self> {
        let s = high + low;
        Self::new(&[alloc::vec![high / s, low / s], alloc::vec![low / s, high / s]])
    }

    pub fn states(&self) -> usize {
        self.states
    }

    pub fn battlefields(&self) -> usize {
        self.battlefields
    }

    pub fn value(&self, state: usize, battlefield: usize) -> f64 {
        self.values[state * self.battlefields + battlefield]
    }

    pub fn row(&self, state: usize) -> &[f64] {
        &self.values[state * self.battlefields..(state + 1) * self.battlefields]
    }
}

/// Common prior over states.
#[derive(Debug, Clone, PartialEq)]
pub struct Prior(Vec<f64>);

impl Prior {
    pub fn new(probabilities: Vec<f64>) -> Result<Self> {
        if probabilities.is_empty() {
            return Err(Error::InvalidParameter("prior is empty".into()));
        }
        if let Some(p) = probabilities.iter().find(|p| !(p.is_finite() && **p > 0.0)) {
            return Err(Error::InvalidParameter(format!(
                "prior probability {p} must be positive"
            )));
        }
        let total: f64 = probabilities.iter().sum();
        if (total - 1.0).abs() > PRIOR_TOLERANCE {
            return Err(Error::InvalidParameter(format!("prior sums to {total}, expected 1")));
        }
        Ok(Self(probabilities))
    }

    pub fn uniform(states: usize) -> Self {
        Self(alloc::vec![1.0 / states as f64; states])
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Resource budgets. The informed player is never the stronger one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Budgets {
    informed: f64,
    uninformed: f64,
}

impl Budgets {
    /// Requires `0 < informed <= uninformed`. Solvers that need a strict
    /// inequality check it themselves.
    pub fn new(informed: f64, uninformed: f64) -> Result<Self> {
        if !(informed.is_finite() && informed > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "informed budget {informed} must be positive"
            )));
        }
        if !(uninformed.is_finite() && uninformed > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "uninformed budget {uninformed} must be positive"
            )));
        }
        if informed > uninformed {
            return Err(Error::InvalidParameter(format!(
                "informed budget {informed} exceeds uninformed budget {uninformed}"
            )));
        }
        Ok(Self { informed, uninformed })
    }

    /// Budgets with `X_U = scale` and `X_I = ratio · scale`.
    pub fn from_ratio(ratio: f64, scale: f64) -> Result<Self> {
        Self::new(ratio * scale, scale)
    }

    pub fn informed(&self) -> f64 {
        self.informed
    }

    pub fn uninformed(&self) -> f64 {
        self.uninformed
    }

    /// γ = X_I / X_U.
    pub fn ratio(&self) -> f64 {
        self.informed / self.uninformed
    }
}

/// A game with asymmetric information: valuations, prior and budgets.
#[derive(Debug, Clone, PartialEq)]
pub struct GameParams {
    valuations: ValuationMatrix,
    prior: Prior,
    budgets: Budgets,
}

impl GameParams {
    pub fn new(valuations: ValuationMatrix, prior: Prior, budgets: Budgets) -> Result<Self> {
        if valuations.states() != prior.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} valuation rows but {} prior entries",
                valuations.states(),
                prior.len()
            )));
        }
        Ok(Self {
            valuations,
            prior,
            budgets,
        })
    }

    pub fn valuations(&self) -> &ValuationMatrix {
        &self.valuations
    }

    pub fn prior(&self) -> &Prior {
        &self.prior
    }

    pub fn budgets(&self) -> &Budgets {
        &self.budgets
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn cyclic_rows_sum_to_one_and_shift() {
        let v = ValuationMatrix::cyclic(0.6, 0.3).unwrap();
        for i in 0..3 {
            let s: f64 = v.row(i).iter().sum();
            assert!((s - 1.0).abs() < 1e-15);
            for j in 0..3 {
                assert_eq!(v.value(i, j), v.value((i + 1) % 3, (j + 1) % 3));
            }
        }
    }

    #[test]
    fn rejects_nonpositive_entries_and_ragged_rows() {
        assert!(ValuationMatrix::new(&[vec![1.0, 0.0]]).is_err());
        assert!(matches!(
            ValuationMatrix::new(&[vec![1.0, 2.0], vec![1.0]]),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn prior_must_normalize() {
        assert!(Prior::new(vec![0.5, 0.5]).is_ok());
        assert!(Prior::new(vec![0.5, 0.6]).is_err());
        assert!(Prior::new(vec![1.0, 0.0]).is_err());
    }

    #[test]
    fn budgets_order() {
        let b = Budgets::new(7.0, 10.0).unwrap();
        assert!((b.ratio() - 0.7).abs() < 1e-15);
        assert!(Budgets::new(11.0, 10.0).is_err());
        assert!(Budgets::new(0.0, 10.0).is_err());
        assert!(Budgets::new(10.0, 10.0).is_ok());
    }

    #[test]
    fn game_dimensions_checked() {
        let v = ValuationMatrix::symmetric_pair(1.0, 0.5).unwrap();
        let b = Budgets::new(0.7, 1.0).unwrap();
        assert!(GameParams::new(v.clone(), Prior::uniform(2), b).is_ok());
        assert!(GameParams::new(v, Prior::uniform(3), b).is_err());
    }
}
