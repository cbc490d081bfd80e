//! Finite type spaces: the LP for optimal direct recommendation mechanisms
//! and the canonicalization constructions around it.

pub mod canonical;
pub mod evaluate;
pub mod lp;
pub mod table;

pub use canonical::{
    compose, derandomize_decision_rules, derive_drm, mixture_joint_law, monotone_rebalance, reduce_to_score_based,
    MessageDraw, RuleDraw,
};
pub use evaluate::{evaluate_mechanism, joint_law, Evaluation};
pub use lp::{
    assignment_for, build_drm_lp, extract_mechanism, joint_of, mechanism_from_joint, solve_instance, DrmLp,
    FiniteSolution, JointVariableIndex,
};
pub use table::{read_mechanism_table, write_mechanism_table};
