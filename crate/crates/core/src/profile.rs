use alloc::format;
use alloc::vec::Vec;

use crate::cdf::PiecewiseCdf;
use crate::error::{Error, Result};
use crate::game::GameParams;

/// Per-battlefield marginals for every informed type and for the
/// uninformed player.
#[derive(Debug, Clone, PartialEq)]
pub struct StrategyProfile {
    informed: Vec<Vec<PiecewiseCdf>>,
    uninformed: Vec<PiecewiseCdf>,
}

impl StrategyProfile {
    /// `informed[i][j]` is the marginal of type `i` on battlefield `j`.
    pub fn new(informed: Vec<Vec<PiecewiseCdf>>, uninformed: Vec<PiecewiseCdf>) -> Result<Self> {
        if uninformed.is_empty() {
            return Err(Error::DimensionMismatch("profile has no battlefields".into()));
        }
        if informed.is_empty() {
            return Err(Error::DimensionMismatch("profile has no informed types".into()));
        }
        for (i, row) in informed.iter().enumerate() {
            if row.len() != uninformed.len() {
                return Err(Error::DimensionMismatch(format!(
                    "informed type {i} has {} marginals, uninformed has {}",
                    row.len(),
                    uninformed.len()
                )));
            }
        }
        Ok(Self { informed, uninformed })
    }

    pub fn types(&self) -> usize {
        self.informed.len()
    }

    pub fn battlefields(&self) -> usize {
        self.uninformed.len()
    }

    pub fn informed(&self, ty: usize) -> &[PiecewiseCdf] {
        &self.informed[ty]
    }

    pub fn informed_all(&self) -> &[Vec<PiecewiseCdf>] {
        &self.informed
    }

    pub fn uninformed(&self) -> &[PiecewiseCdf] {
        &self.uninformed
    }

    /// Errors unless the profile has one type per state and one marginal
    /// per battlefield of `game`.
    pub fn check_dimensions(&self, game: &GameParams) -> Result<()> {
        let v = game.valuations();
        if self.types() != v.states() || self.battlefields() != v.battlefields() {
            return Err(Error::DimensionMismatch(format!(
                "profile is {}x{} but the game has {} states and {} battlefields",
                self.types(),
                self.battlefields(),
                v.states(),
                v.battlefields()
            )));
        }
        Ok(())
    }
}
