use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::continuous::ContinuousSolution;
use crate::error::{Error, Result};
use crate::finite::evaluate::check_mechanism;
use crate::model::{CostModel, FiniteMechanism, FiniteTypeSpace, ScoreBasedRule};
use crate::num::{self, format_rational, Rational};

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Best deviation of one type in a direct mechanism.
#[derive(Debug, Clone, PartialEq)]
pub struct BestResponse {
    pub report: usize,
    /// `quit[a]`: take the outside option when told to submit `a`.
    pub quit: Vec<bool>,
    pub value: Rational,
}

/// Best report of type `t`, quitting after any recommendation whose
/// continuation is below the outside option. Ties go to the truthful report,
/// then to the lowest index.
pub fn best_response_finite(
    space: &FiniteTypeSpace,
    costs: &CostModel,
    mech: &FiniteMechanism,
    outside_option: &[Rational],
    t: usize,
) -> Result<BestResponse> {
    check_mechanism(space, mech)?;
    let c = costs.table_for(space)?;
    let plan = |r: usize| -> Result<(Vec<bool>, Rational)> {
        let mut quit = vec![false; space.n_scores()];
        let mut value = num::zero();
        for a in mech.support(r) {
            let q = mech.row(r, a)?;
            let cont: Rational = q.iter().zip(&space.agent_value[t]).map(|(p, v)| p * v).sum::<Rational>() - &c[t][a];
            let rho = &mech.recommendation[r][a];
            if cont < outside_option[t] {
                quit[a] = true;
                value += rho * &outside_option[t];
            } else {
                value += rho * cont;
            }
        }
        Ok((quit, value))
    };
    let (quit, value) = plan(t)?;
    let mut best = BestResponse { report: t, quit, value };
    for r in (0..space.n_types()).filter(|&r| r != t) {
        let (quit, value) = plan(r)?;
        if value > best.value {
            best = BestResponse { report: r, quit, value };
        }
    }
    Ok(best)
}

/// Best score for type `t` facing a score-based rule, by exact enumeration.
/// Ties go to the natural score, then to the lowest score.
pub fn best_response_score_rule(
    space: &FiniteTypeSpace,
    costs: &CostModel,
    rule: &ScoreBasedRule,
    t: usize,
) -> Result<(usize, Rational)> {
    if rule.decision.len() != space.n_scores() {
        return Err(Error::Structural("rule must have one row per score".into()));
    }
    let c = costs.table_for(space)?;
    let natural = space.natural_score(t)?;
    let order = space.score_order();
    let value = |a: usize| -> Rational {
        rule.decision[a].iter().zip(&space.agent_value[t]).map(|(p, v)| p * v).sum::<Rational>() - &c[t][a]
    };
    let mut best = (natural, value(natural));
    for a in 0..space.n_scores() {
        let v = value(a);
        let better = v > best.1 || (v == best.1 && best.0 != natural && order[a] < order[best.0]);
        if better {
            best = (a, v);
        }
    }
    Ok(best)
}

/// Floating-point variant over numeric scores with a parametric cost: type
/// with natural score `t` values approval (outcome 1) at `approve_value`.
/// Scores within `1e-12` of the best count as ties.
pub fn best_response_score_rule_numeric(
    scores: &[f64],
    costs: &CostModel,
    rule: &ScoreBasedRule,
    t: f64,
    approve_value: f64,
) -> Result<(usize, f64)> {
    if rule.decision.len() != scores.len() || scores.is_empty() {
        return Err(Error::Structural("rule must have one row per score".into()));
    }
    let value = |a: usize| -> Result<f64> {
        let cost = costs.eval(scores[a], t).ok_or_else(|| Error::Precondition("numeric best response needs a parametric cost".into()))?;
        let p = num::to_f64(&rule.decision[a][1]);
        Ok(p * approve_value - cost)
    };
    let values: Vec<f64> = (0..scores.len()).map(value).collect::<Result<_>>()?;
    let top = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let ties: Vec<usize> = (0..scores.len()).filter(|&a| values[a] >= top - 1e-12).collect();
    let pick = ties
        .iter()
        .copied()
        .find(|&a| scores[a] == t)
        .unwrap_or_else(|| *ties.iter().min_by(|&&i, &&j| scores[i].total_cmp(&scores[j])).expect("nonempty"));
    Ok((pick, values[pick]))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContinuousResponse {
    /// Report mimicked; `None` means quitting beats every report.
    pub report: Option<f64>,
    pub value: f64,
}

/// Best `(report, obey)` deviation of type `t` against a continuous solution
/// over the candidate reports; quitting is worth 0.
pub fn best_response_continuous(sol: &ContinuousSolution, t: f64, reports: &[f64]) -> ContinuousResponse {
    let mut best = ContinuousResponse { report: None, value: 0.0 };
    for &r in reports {
        let v = sol.q_star(r) - sol.cost_of(sol.a_star(r), t);
        if v > best.value {
            best = ContinuousResponse { report: Some(r), value: v };
        }
    }
    best
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TypeAudit {
    #[serde(rename = "type")]
    pub type_name: String,
    pub best_report: String,
    /// Scores after which the best deviation quits.
    pub quits_at: Vec<String>,
    pub truthful_value: String,
    pub best_value: String,
    pub gain: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditReport {
    pub passes: bool,
    pub tolerance: f64,
    pub max_tt_violation: f64,
    pub max_pc_violation: f64,
    #[serde(rename = "max_tt_violation_exact")]
    pub max_tt_exact: String,
    #[serde(rename = "max_pc_violation_exact")]
    pub max_pc_exact: String,
    pub types: Vec<TypeAudit>,
}

impl AuditReport {
    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Io(e.to_string()))
    }
}

/// Maximal truth-telling gain (against quitting-enabled deviations) and
/// maximal ex-post participation shortfall on the support.
pub fn audit_ic(
    space: &FiniteTypeSpace,
    costs: &CostModel,
    mech: &FiniteMechanism,
    outside_option: &[Rational],
    tolerance: f64,
) -> Result<AuditReport> {
    check_mechanism(space, mech)?;
    if outside_option.len() != space.n_types() {
        return Err(Error::Structural("outside option needs one entry per type".into()));
    }
    let c = costs.table_for(space)?;
    let mut max_tt = num::zero();
    let mut max_pc = num::zero();
    let mut types = Vec::with_capacity(space.n_types());
    for t in 0..space.n_types() {
        let mut truthful = num::zero();
        for a in mech.support(t) {
            let q = mech.row(t, a)?;
            let cont: Rational = q.iter().zip(&space.agent_value[t]).map(|(p, v)| p * v).sum::<Rational>() - &c[t][a];
            let shortfall = &outside_option[t] - &cont;
            if shortfall > max_pc {
                max_pc = shortfall;
            }
            truthful += &mech.recommendation[t][a] * cont;
        }
        let br = best_response_finite(space, costs, mech, outside_option, t)?;
        let gain = &br.value - &truthful;
        if gain > max_tt {
            max_tt = gain.clone();
        }
        types.push(TypeAudit {
            type_name: space.type_name(t),
            best_report: space.type_name(br.report),
            quits_at: (0..space.n_scores()).filter(|&a| br.quit[a]).map(|a| space.scores[a].id.clone()).collect(),
            truthful_value: format_rational(&truthful),
            best_value: format_rational(&br.value),
            gain: num::to_f64(&gain),
        });
    }
    debug_assert!(!max_tt.is_negative() && !max_pc.is_negative());
    let tt = num::to_f64(&max_tt);
    let pc = num::to_f64(&max_pc);
    let tol = num::from_f64(tolerance)?;
    Ok(AuditReport {
        passes: max_tt <= tol && max_pc <= tol,
        tolerance,
        max_tt_violation: if max_tt.is_zero() { 0.0 } else { tt },
        max_pc_violation: if max_pc.is_zero() { 0.0 } else { pc },
        max_tt_exact: format_rational(&max_tt),
        max_pc_exact: format_rational(&max_pc),
        types,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::continuous::{solve_linear, Distribution, numerics::linspace};
    use crate::instances::{college, college_mechanism};
    use crate::num::{int, ratio};

    #[test]
    fn college_mechanism_best_responses() {
        let inst = college(true);
        let m = college_mechanism();
        let u = inst.outside();
        let br = best_response_finite(&inst.space, &inst.costs, &m, &u, 0).unwrap();
        assert_eq!(br.value, ratio(1, 4));
        assert_eq!(br.report, 0);
        // mimicking t2 is exactly as good
        let mut mimic = m.clone();
        mimic.recommendation[0] = m.recommendation[1].clone();
        mimic.decision[0] = m.decision[1].clone();
        let alt = best_response_finite(&inst.space, &inst.costs, &mimic, &u, 0).unwrap();
        assert_eq!(alt.value, ratio(1, 4));
        let br = best_response_finite(&inst.space, &inst.costs, &m, &u, 2).unwrap();
        assert_eq!((br.report, br.value), (2, int(1)));
        let report = audit_ic(&inst.space, &inst.costs, &m, &u, DEFAULT_TOLERANCE).unwrap();
        assert!(report.passes);
        assert_eq!(report.max_tt_violation, 0.0);
        assert!(report.to_toml().unwrap().contains("passes = true"));
    }

    #[test]
    fn giving_t2_the_separating_rule_breaks_truth_telling() {
        let inst = college(true);
        let mut m = college_mechanism();
        m.decision[1][0] = Some(vec![int(0), int(1)]);
        let report = audit_ic(&inst.space, &inst.costs, &m, &inst.outside(), DEFAULT_TOLERANCE).unwrap();
        assert!(!report.passes);
        assert!(report.max_tt_violation > 0.0);
        assert_eq!(report.types[0].best_report, "NF/sL");
    }

    #[test]
    fn approve_everything_means_no_falsification() {
        let inst = college(false);
        let m = FiniteMechanism {
            decision: vec![vec![Some(vec![int(0), int(1)]); 2]; 4],
            recommendation: (0..4).map(|t| (0..2).map(|a| if a == t / 2 { int(1) } else { int(0) }).collect()).collect(),
        };
        for t in 0..4 {
            let br = best_response_finite(&inst.space, &inst.costs, &m, &inst.outside(), t).unwrap();
            assert_eq!((br.report, br.value), (t, int(1)));
        }
    }

    #[test]
    fn score_rule_ties_break_to_natural_score() {
        let inst = college(false);
        let rule = ScoreBasedRule::binary(&[int(0), int(1)]);
        let (a, v) = best_response_score_rule(&inst.space, &inst.costs, &rule, 0).unwrap();
        assert_eq!((a, v), (0, int(0)));
        let zero = ScoreBasedRule::binary(&[int(0), int(0)]);
        assert_eq!(best_response_score_rule(&inst.space, &inst.costs, &zero, 3).unwrap(), (1, int(0)));
    }

    #[test]
    fn sampled_linear_rule_matches_closed_form_utility() {
        let d = Distribution::uniform(-2.0, 1.0).unwrap();
        let sol = solve_linear(&d, 4.0).unwrap();
        let scores = linspace(-2.0, 1.0, 200);
        let rule = crate::continuous::score_rule_from_solution(&sol, &scores).unwrap();
        let costs = CostModel::Linear { gamma: 4.0, domain: [-2.0, 1.0] };
        for t in [0.0, 0.25, 0.5, 0.9, 1.0] {
            let (a, v) = best_response_score_rule_numeric(&scores, &costs, &rule, t, 1.0).unwrap();
            assert_eq!(scores[a], 1.0, "t = {t}");
            assert!((v - (sol.p_star - (1.0 - t) / 4.0)).abs() < 1e-12);
            assert!((v - sol.utility(t)).abs() < 1e-12);
        }
    }

    #[test]
    fn continuous_truth_is_a_best_response() {
        let d = Distribution::uniform(-2.0, 1.0).unwrap();
        let sol = solve_linear(&d, 4.0).unwrap();
        let grid = linspace(-2.0, 1.0, 50);
        for &t in &grid {
            let br = best_response_continuous(&sol, t, &grid);
            assert!(br.value <= sol.utility(t) + 1e-12);
        }
    }

    #[test]
    fn numeric_response_needs_parametric_cost() {
        let rule = ScoreBasedRule::binary(&[int(0)]);
        let costs = CostModel::Tabulated { table: vec![vec![int(0)]] };
        assert!(best_response_score_rule_numeric(&[0.0], &costs, &rule, 0.0, 1.0).is_err());
    }
}
