//! Collective accuracy of the voter model with zealots.
//!
//! `n` free voters copy random neighbours; `α` zealots hold the correct
//! opinion and `β` the incorrect one. On the complete graph the number of
//! correct free voters has a beta-binomial stationary law, its fraction tends
//! to Beta(α, β), and the majority is right with probability
//! `1 − I_{1/2}(α, β)` in the limit, which beats a lone voter's `α/(α+β)`
//! whenever `α > β`.
//!
//! - [`special_fn`]: log-gamma, log-beta, incomplete beta, normal cdf.
//! - [`stationary`]: exact pmf, finite and limiting majority accuracy, and a
//!   birth–death oracle for the pmf.
//! - [`dynamics`]: the Monte Carlo chain on complete and sparse graphs.
//! - [`verify`]: checks of the accuracy bound, its integral steps, and
//!   convergence in `n`.

pub mod dynamics;
pub mod error;
pub mod quadrature;
pub mod special_fn;
pub mod stationary;
pub mod verify;

pub use error::{Error, Result};
pub use special_fn::{Probability, ShapePair};
pub use stationary::{AccuracyResult, BetaBinomialPmf, Population, PopulationSize};
