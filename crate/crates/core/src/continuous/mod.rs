//! Binary approval with a continuum of types: closed-form optimal mechanisms
//! under linear and quadratic falsification costs.

pub mod discretize;
pub mod distribution;
pub mod numerics;
pub mod solver;

pub use discretize::{discretize, score_rule_from_solution};
pub use distribution::{Distribution, DistributionSpec};
pub use solver::{
    check_mhr, compute_t0, solve, solve_first_best, solve_linear, solve_quadratic, ContinuousSolution, MhrReport, Regime,
    SolutionSample,
};
