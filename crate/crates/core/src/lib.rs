//! Colonel Blotto and General Lotto games in which one player observes the
//! battlefield valuations and the other only knows a prior.
//!
//! - [`cdf`], [`game`], [`profile`], [`payoff`]: marginal distributions made
//!   of atoms and uniform pieces, game data, and exact expected payoffs.
//! - [`blotto2`]: the two-battlefield Blotto game.
//! - [`lotto3`]: the three-battlefield Lotto game with cyclic valuations.
//! - [`oracle`]: deviation scans, all-pay-auction checks, Monte Carlo and
//!   certificates.
//!
//! The crate is `no_std` and only needs `alloc`.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod blotto2;
pub mod cdf;
pub mod error;
pub mod game;
pub mod lotto3;
pub mod oracle;
pub mod payoff;
pub mod profile;

pub use cdf::{Atom, PiecewiseCdf, Segment};
pub use error::{Error, Result};
pub use game::{Budgets, GameParams, Prior, ValuationMatrix};
pub use profile::StrategyProfile;
