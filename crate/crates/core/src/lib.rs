//! Exact-oracle laboratory for robust PAC learning on the Boolean hypercube.
//!
//! The crate is organized bottom-up:
//!
//! * [`hypercube`]: points, Hamming balls, dense vertex sets and ρ-expansion.
//! * [`concepts`]: conjunctions, k-CNF, k-decision lists, and their
//!   structural decompositions.
//! * [`distributions`]: uniform, product and table distributions with α
//!   certification.
//! * [`risk`]: standard and robust risks, exact and Monte-Carlo.
//! * [`expansion`]: `S_ρ` measurement and the k-CNF expansion thresholds.
//! * [`learners`]: proper learners for monotone conjunctions and k-DL.
//! * [`lowerbound`]: the disjoint-conjunction sample-complexity experiment.
//! * [`cli`]: the `robustpac` command-line front end.

pub mod cli;
pub mod concepts;
pub mod distributions;
pub mod error;
pub mod expansion;
pub mod hypercube;
pub mod learners;
pub mod lowerbound;
mod numeric;
pub mod report;
pub mod risk;
pub mod rng;

pub use error::{Error, Result};
pub use numeric::{compensated_sum, hoeffding_radius};
