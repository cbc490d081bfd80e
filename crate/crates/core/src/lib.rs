//! Designer-optimal mechanisms when an agent can falsify a score at a cost.
//!
//! * [`finite`] encodes direct recommendation mechanisms over finite type
//!   spaces as a linear program and implements the canonicalization steps
//!   (collapsing randomized rules, composing indirect mechanisms, reducing to
//!   score-based rules, monotone rebalancing).
//! * [`continuous`] solves binary approval with a continuum of types under
//!   linear and quadratic falsification costs in closed form.
//! * [`audit`] independently checks incentive compatibility and provides a
//!   brute-force optimum for small instances.
//! * [`lpcore`] is the exact/float simplex solver behind [`finite`].

pub mod audit;
pub mod cli;
pub mod continuous;
pub mod error;
pub mod finite;
pub mod instances;
pub mod lpcore;
pub mod model;
pub mod num;

pub use error::{Error, Result};
