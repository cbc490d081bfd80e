//! Independent checks of solver output: best responses, incentive audits and
//! a brute-force optimum for tiny instances.

mod brute_force;
mod response;

pub use brute_force::{brute_force_optimum, BRUTE_FORCE_LIMITS};
pub use response::{
    audit_ic, best_response_continuous, best_response_finite, best_response_score_rule,
    best_response_score_rule_numeric, AuditReport, BestResponse, ContinuousResponse, TypeAudit, DEFAULT_TOLERANCE,
};
