//! Domain types shared by the finite and continuous solvers.
//!
//! Finite quantities are exact rationals. A type is a pair (soft label,
//! natural score); scores form the action set and may carry a numeric value,
//! which the monotone and continuous operations require.

use std::collections::HashSet;
use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::continuous::Distribution;
use crate::error::{Error, Result};
use crate::num::{self, format_rational, Rational};

/// `rho(a|t)` above this is "in the support".
pub const SUPPORT_TOL: f64 = 1e-12;
/// Probability vectors must sum to one within this.
pub const SUM_TOL: f64 = 1e-12;

pub fn support_tol() -> Rational {
    num::from_f64(SUPPORT_TOL).expect("finite")
}

fn sum_tol() -> Rational {
    num::from_f64(SUM_TOL).expect("finite")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreDef {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AgentType {
    pub label: String,
    pub natural_score: String,
}

/// Finite types, scores (actions), outcomes, prior and the agent's valuation
/// `v(x, t)` of each outcome.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiniteTypeSpace {
    pub types: Vec<AgentType>,
    pub scores: Vec<ScoreDef>,
    pub outcomes: Vec<String>,
    #[serde(with = "num::serde_rational_vec")]
    pub prior: Vec<Rational>,
    /// `agent_value[t][x]`
    #[serde(with = "num::serde_rational_matrix")]
    pub agent_value: Vec<Vec<Rational>>,
}

impl FiniteTypeSpace {
    pub fn n_types(&self) -> usize {
        self.types.len()
    }

    pub fn n_scores(&self) -> usize {
        self.scores.len()
    }

    pub fn n_outcomes(&self) -> usize {
        self.outcomes.len()
    }

    pub fn score_index(&self, id: &str) -> Option<usize> {
        self.scores.iter().position(|s| s.id == id)
    }

    pub fn type_index(&self, name: &str) -> Option<usize> {
        (0..self.n_types()).find(|&t| self.type_name(t) == name || self.types[t].label == name)
    }

    /// Index of the natural score of type `t`.
    pub fn natural_score(&self, t: usize) -> Result<usize> {
        let id = &self.types[t].natural_score;
        self.score_index(id)
            .ok_or_else(|| Error::Structural(format!("type {} has unknown natural score '{id}'", self.type_name(t))))
    }

    /// Display name `label/score`.
    pub fn type_name(&self, t: usize) -> String {
        format!("{}/{}", self.types[t].label, self.types[t].natural_score)
    }

    /// Numeric score values, required by monotone and parametric operations.
    pub fn score_values(&self) -> Result<Vec<f64>> {
        self.scores
            .iter()
            .map(|s| {
                s.value
                    .ok_or_else(|| Error::Precondition(format!("score '{}' has no numeric value", s.id)))
            })
            .collect()
    }

    /// Sort key for tie-breaking toward lower scores: numeric value when every
    /// score has one, declaration order otherwise.
    pub(crate) fn score_order(&self) -> Vec<f64> {
        match self.score_values() {
            Ok(v) => v,
            Err(_) => (0..self.n_scores()).map(|i| i as f64).collect(),
        }
    }
}

/// Falsification cost `c(a, t)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CostModel {
    /// `table[t][a]`
    Tabulated {
        #[serde(with = "num::serde_rational_matrix")]
        table: Vec<Vec<Rational>>,
    },
    /// `|a - t| / gamma`
    Linear { gamma: f64, domain: [f64; 2] },
    /// `(a - t)^2 / gamma`
    Quadratic { gamma: f64, domain: [f64; 2] },
}

/// The two parametric cost families of the continuous model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CostFamily {
    Linear,
    Quadratic,
}

impl CostFamily {
    /// Unscaled cost `c_raw(a, t)`; the agent pays `c_raw / gamma`.
    pub fn raw(self, a: f64, t: f64) -> f64 {
        match self {
            CostFamily::Linear => (a - t).abs(),
            CostFamily::Quadratic => (a - t) * (a - t),
        }
    }
}

impl fmt::Display for CostFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CostFamily::Linear => "linear",
            CostFamily::Quadratic => "quadratic",
        })
    }
}

impl CostModel {
    pub fn parametric(family: CostFamily, gamma: f64, domain: [f64; 2]) -> Self {
        match family {
            CostFamily::Linear => CostModel::Linear { gamma, domain },
            CostFamily::Quadratic => CostModel::Quadratic { gamma, domain },
        }
    }

    pub fn family(&self) -> Option<(CostFamily, f64)> {
        match *self {
            CostModel::Tabulated { .. } => None,
            CostModel::Linear { gamma, .. } => Some((CostFamily::Linear, gamma)),
            CostModel::Quadratic { gamma, .. } => Some((CostFamily::Quadratic, gamma)),
        }
    }

    /// Scaled parametric cost of submitting `a` for natural score `t`.
    pub fn eval(&self, a: f64, t: f64) -> Option<f64> {
        self.family().map(|(fam, gamma)| fam.raw(a, t) / gamma)
    }

    /// Cost table `[t][a]` over a finite space; parametric kinds are evaluated
    /// at the numeric score values.
    pub fn table_for(&self, space: &FiniteTypeSpace) -> Result<Vec<Vec<Rational>>> {
        match self {
            CostModel::Tabulated { table } => {
                if table.len() != space.n_types() || table.iter().any(|r| r.len() != space.n_scores()) {
                    return Err(Error::Structural(format!(
                        "cost table must be {} types x {} scores",
                        space.n_types(),
                        space.n_scores()
                    )));
                }
                Ok(table.clone())
            }
            _ => {
                let values = space.score_values()?;
                (0..space.n_types())
                    .map(|t| {
                        let s = values[space.natural_score(t)?];
                        values
                            .iter()
                            .map(|&a| num::from_f64(self.eval(a, s).expect("parametric")))
                            .collect()
                    })
                    .collect()
            }
        }
    }
}

/// Designer-side loss from falsification costs actually incurred.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FalsificationLoss {
    /// The objective ignores falsification costs.
    #[default]
    None,
    /// `L(c) = lambda * c^2`
    Quadratic {
        #[serde(with = "num::serde_rational")]
        lambda: Rational,
    },
}

impl FalsificationLoss {
    pub fn loss(&self, cost: &Rational) -> Rational {
        match self {
            FalsificationLoss::None => num::zero(),
            FalsificationLoss::Quadratic { lambda } => lambda * cost * cost,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignerPayoff {
    /// `decision_value[t][x]`
    #[serde(with = "num::serde_rational_matrix")]
    pub decision_value: Vec<Vec<Rational>>,
    #[serde(default)]
    pub loss: FalsificationLoss,
}

/// Direct recommendation mechanism in decomposed form.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteMechanism {
    /// `decision[t][a]` is `q(.|a,t)`, undefined off the support of `rho(.|t)`.
    pub decision: Vec<Vec<Option<Vec<Rational>>>>,
    /// `recommendation[t][a]` is `rho(a|t)`.
    pub recommendation: Vec<Vec<Rational>>,
}

impl FiniteMechanism {
    pub fn in_support(&self, t: usize, a: usize) -> bool {
        self.recommendation[t][a] > support_tol()
    }

    pub fn support(&self, t: usize) -> Vec<usize> {
        let tol = support_tol();
        (0..self.recommendation[t].len())
            .filter(|&a| self.recommendation[t][a] > tol)
            .collect()
    }

    /// Decision row on the support; structural error when it is missing.
    pub fn row(&self, t: usize, a: usize) -> Result<&[Rational]> {
        self.decision[t][a]
            .as_deref()
            .ok_or_else(|| Error::Structural(format!("decision q(.|a={a},t={t}) undefined on the support")))
    }

    /// The score recommended with certainty, if every type has one.
    pub fn deterministic_recommendations(&self) -> Option<Vec<usize>> {
        self.recommendation
            .iter()
            .map(|row| row.iter().position(|p| *p == num::one()))
            .collect()
    }

    /// Invariant violations against a type space (empty = valid).
    pub fn violations(&self, space: &FiniteTypeSpace) -> Vec<Violation> {
        let mut out = Vec::new();
        let (nt, na, nx) = (space.n_types(), space.n_scores(), space.n_outcomes());
        if self.recommendation.len() != nt
            || self.decision.len() != nt
            || self.recommendation.iter().any(|r| r.len() != na)
            || self.decision.iter().any(|r| r.len() != na)
        {
            out.push(Violation::DimensionMismatch("mechanism".into()));
            return out;
        }
        let tol = sum_tol();
        for t in 0..nt {
            let rho = &self.recommendation[t];
            if rho.iter().any(|p| p.is_negative() || *p > num::one()) {
                out.push(Violation::ProbabilityOutOfRange(format!("rho(.|{})", space.type_name(t))));
            }
            let total: Rational = rho.iter().sum();
            if (total - num::one()).abs() > tol {
                out.push(Violation::RecommendationNotNormalized(space.type_name(t)));
            }
            for a in 0..na {
                match &self.decision[t][a] {
                    Some(q) => {
                        if q.len() != nx {
                            out.push(Violation::DimensionMismatch(format!("q(.|{a},{t})")));
                            continue;
                        }
                        if q.iter().any(|p| p.is_negative() || *p > num::one()) {
                            out.push(Violation::ProbabilityOutOfRange(format!(
                                "q(.|{},{})",
                                space.scores[a].id,
                                space.type_name(t)
                            )));
                        }
                        let s: Rational = q.iter().sum();
                        if (s - num::one()).abs() > tol {
                            out.push(Violation::DecisionNotNormalized(format!(
                                "q(.|{},{})",
                                space.scores[a].id,
                                space.type_name(t)
                            )));
                        }
                    }
                    None if self.in_support(t, a) => out.push(Violation::DecisionMissing(format!(
                        "q(.|{},{})",
                        space.scores[a].id,
                        space.type_name(t)
                    ))),
                    None => {}
                }
            }
        }
        out
    }
}

/// Decision rule depending only on the submitted score.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreBasedRule {
    /// `decision[a][x]`
    pub decision: Vec<Vec<Rational>>,
}

impl ScoreBasedRule {
    /// Binary rule from approval probabilities `q(1|a)`.
    pub fn binary(approval: &[Rational]) -> Self {
        ScoreBasedRule {
            decision: approval.iter().map(|p| vec![num::one() - p, p.clone()]).collect(),
        }
    }

    pub fn violations(&self) -> Vec<Violation> {
        let tol = sum_tol();
        let mut out = Vec::new();
        for (a, row) in self.decision.iter().enumerate() {
            if row.iter().any(|p| p.is_negative() || *p > num::one()) {
                out.push(Violation::ProbabilityOutOfRange(format!("rule row {a}")));
            }
            let s: Rational = row.iter().sum();
            if (s - num::one()).abs() > tol {
                out.push(Violation::DecisionNotNormalized(format!("rule row {a}")));
            }
        }
        out
    }
}

/// A broken invariant, reported rather than raised.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    PriorNotNormalized(String),
    NegativePrior(String),
    UnknownNaturalScore(String),
    DuplicateIdentifier(String),
    DimensionMismatch(String),
    OwnScoreCostNonzero(String),
    NegativeCost(String),
    NegativeLoss,
    NonPositiveGamma,
    BadDomain,
    NonNegativeMean(f64),
    NonFinite(String),
    RecommendationNotNormalized(String),
    DecisionNotNormalized(String),
    DecisionMissing(String),
    ProbabilityOutOfRange(String),
    Empty(String),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::PriorNotNormalized(s) => write!(f, "prior not normalized (sum = {s})"),
            Violation::NegativePrior(t) => write!(f, "negative prior for type {t}"),
            Violation::UnknownNaturalScore(t) => write!(f, "natural score of type {t} is not a declared score"),
            Violation::DuplicateIdentifier(id) => write!(f, "duplicate identifier '{id}'"),
            Violation::DimensionMismatch(w) => write!(f, "dimension mismatch in {w}"),
            Violation::OwnScoreCostNonzero(t) => write!(f, "own-score cost nonzero for type {t}"),
            Violation::NegativeCost(w) => write!(f, "negative cost at {w}"),
            Violation::NegativeLoss => write!(f, "negative loss coefficient"),
            Violation::NonPositiveGamma => write!(f, "gamma must be positive"),
            Violation::BadDomain => write!(f, "cost domain must satisfy s_min < 0 < s_max"),
            Violation::NonNegativeMean(m) => write!(f, "distribution mean {m} is not negative"),
            Violation::NonFinite(w) => write!(f, "non-finite entry in {w}"),
            Violation::RecommendationNotNormalized(t) => write!(f, "recommendation rule of {t} not normalized"),
            Violation::DecisionNotNormalized(w) => write!(f, "decision rule {w} not normalized"),
            Violation::DecisionMissing(w) => write!(f, "decision rule {w} undefined on the support"),
            Violation::ProbabilityOutOfRange(w) => write!(f, "probability outside [0,1] in {w}"),
            Violation::Empty(w) => write!(f, "empty {w}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn into_result(self) -> Result<()> {
        if self.is_valid() {
            Ok(())
        } else {
            let msg: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
            Err(Error::Structural(msg.join("; ")))
        }
    }
}

/// Checks a finite instance against every type invariant.
pub fn validate(space: &FiniteTypeSpace, costs: &CostModel, payoff: &DesignerPayoff) -> ValidationReport {
    let mut v = Vec::new();
    let (nt, na, nx) = (space.n_types(), space.n_scores(), space.n_outcomes());
    for (what, n) in [("types", nt), ("scores", na), ("outcomes", nx)] {
        if n == 0 {
            v.push(Violation::Empty(what.into()));
        }
    }

    let mut seen = HashSet::new();
    for s in &space.scores {
        if !seen.insert(&s.id) {
            v.push(Violation::DuplicateIdentifier(s.id.clone()));
        }
        if s.value.is_some_and(|x| !x.is_finite()) {
            v.push(Violation::NonFinite(format!("score '{}'", s.id)));
        }
    }
    let mut seen = HashSet::new();
    for x in &space.outcomes {
        if !seen.insert(x) {
            v.push(Violation::DuplicateIdentifier(x.clone()));
        }
    }
    let mut seen = HashSet::new();
    for t in 0..nt {
        if !seen.insert(&space.types[t]) {
            v.push(Violation::DuplicateIdentifier(space.type_name(t)));
        }
        if space.score_index(&space.types[t].natural_score).is_none() {
            v.push(Violation::UnknownNaturalScore(space.type_name(t)));
        }
    }

    if space.prior.len() != nt {
        v.push(Violation::DimensionMismatch("prior".into()));
    } else {
        for (t, p) in space.prior.iter().enumerate() {
            if p.is_negative() {
                v.push(Violation::NegativePrior(space.type_name(t)));
            }
        }
        let total: Rational = space.prior.iter().sum();
        if (total.clone() - num::one()).abs() > sum_tol() {
            v.push(Violation::PriorNotNormalized(format_rational(&total)));
        }
    }
    if space.agent_value.len() != nt || space.agent_value.iter().any(|r| r.len() != nx) {
        v.push(Violation::DimensionMismatch("agent_value".into()));
    }
    if payoff.decision_value.len() != nt || payoff.decision_value.iter().any(|r| r.len() != nx) {
        v.push(Violation::DimensionMismatch("decision_value".into()));
    }
    if let FalsificationLoss::Quadratic { lambda } = &payoff.loss {
        if lambda.is_negative() {
            v.push(Violation::NegativeLoss);
        }
    }

    match costs {
        CostModel::Tabulated { table } => {
            if table.len() != nt || table.iter().any(|r| r.len() != na) {
                v.push(Violation::DimensionMismatch("cost table".into()));
            } else {
                check_cost_table(space, table, &mut v);
            }
        }
        CostModel::Linear { gamma, domain } | CostModel::Quadratic { gamma, domain } => {
            check_parametric(*gamma, *domain, &mut v);
            if v.is_empty() {
                match costs.table_for(space) {
                    Ok(table) => check_cost_table(space, &table, &mut v),
                    Err(_) => v.push(Violation::NonFinite("score values (parametric cost needs numeric scores)".into())),
                }
            }
        }
    }
    ValidationReport { violations: v }
}

fn check_cost_table(space: &FiniteTypeSpace, table: &[Vec<Rational>], v: &mut Vec<Violation>) {
    for (t, row) in table.iter().enumerate() {
        for (a, c) in row.iter().enumerate() {
            if c.is_negative() {
                v.push(Violation::NegativeCost(format!("({}, {})", space.scores[a].id, space.type_name(t))));
            }
        }
        if let Some(s) = space.score_index(&space.types[t].natural_score) {
            if !row[s].is_zero() {
                v.push(Violation::OwnScoreCostNonzero(space.type_name(t)));
            }
        }
    }
}

fn check_parametric(gamma: f64, domain: [f64; 2], v: &mut Vec<Violation>) {
    if !(gamma.is_finite() && gamma > 0.0) {
        v.push(Violation::NonPositiveGamma);
    }
    if !(domain[0] < 0.0 && 0.0 < domain[1] && domain.iter().all(|d| d.is_finite())) {
        v.push(Violation::BadDomain);
    }
}

/// Checks a parametric cost against a continuous type distribution, including
/// the negative-mean assumption of the continuous model.
pub fn validate_continuous(dist: &Distribution, costs: &CostModel) -> ValidationReport {
    let mut v = Vec::new();
    match costs {
        CostModel::Tabulated { .. } => v.push(Violation::DimensionMismatch(
            "continuous model needs a parametric cost".into(),
        )),
        CostModel::Linear { gamma, domain } | CostModel::Quadratic { gamma, domain } => {
            check_parametric(*gamma, *domain, &mut v);
            let (lo, hi) = dist.support();
            if (domain[0] - lo).abs() > 1e-12 || (domain[1] - hi).abs() > 1e-12 {
                v.push(Violation::DimensionMismatch("cost domain differs from distribution support".into()));
            }
        }
    }
    let (lo, hi) = dist.support();
    if !(lo < 0.0 && 0.0 < hi) {
        v.push(Violation::BadDomain);
    }
    let mean = dist.mean();
    if mean >= 0.0 {
        v.push(Violation::NonNegativeMean(mean));
    }
    ValidationReport { violations: v }
}

/// Everything the finite solvers need about one instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiniteInstance {
    pub space: FiniteTypeSpace,
    pub costs: CostModel,
    pub payoff: DesignerPayoff,
    /// Outside option `u(t)` per type; zero when omitted.
    #[serde(default, with = "num::serde_rational_vec", skip_serializing_if = "Vec::is_empty")]
    pub outside_option: Vec<Rational>,
}

impl FiniteInstance {
    pub fn validate(&self) -> ValidationReport {
        let mut report = validate(&self.space, &self.costs, &self.payoff);
        if !self.outside_option.is_empty() && self.outside_option.len() != self.space.n_types() {
            report.violations.push(Violation::DimensionMismatch("outside_option".into()));
        }
        report
    }

    /// Outside options with the zero default filled in.
    pub fn outside(&self) -> Vec<Rational> {
        if self.outside_option.is_empty() {
            zero_outside_option(&self.space)
        } else {
            self.outside_option.clone()
        }
    }
}

/// Outside option of zero for every type.
pub fn zero_outside_option(space: &FiniteTypeSpace) -> Vec<Rational> {
    vec![num::zero(); space.n_types()]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::college;
    use crate::num::ratio;

    #[test]
    fn college_instance_is_valid() {
        let inst = college(false);
        let report = validate(&inst.space, &inst.costs, &inst.payoff);
        assert!(report.is_valid(), "{:?}", report.violations);
    }

    #[test]
    fn prior_summing_to_point_nine_is_caught() {
        let mut inst = college(false);
        inst.space.prior = vec![ratio(9, 40); 4];
        let report = validate(&inst.space, &inst.costs, &inst.payoff);
        assert!(report.violations.iter().any(|v| v.to_string().starts_with("prior not normalized")));
    }

    #[test]
    fn own_score_cost_is_caught() {
        let mut inst = college(false);
        if let CostModel::Tabulated { table } = &mut inst.costs {
            table[0][0] = ratio(3, 10);
        }
        let report = validate(&inst.space, &inst.costs, &inst.payoff);
        assert_eq!(report.violations.len(), 1);
        assert!(report.violations[0].to_string().contains("own-score cost nonzero"));
    }

    #[test]
    fn parametric_cost_tabulates_at_score_values() {
        let inst = college(false);
        let costs = CostModel::Linear { gamma: 2.0, domain: [-1.0, 1.0] };
        let table = costs.table_for(&inst.space).unwrap();
        assert_eq!(table[0], vec![num::zero(), ratio(1, 2)]);
        assert_eq!(table[2], vec![ratio(1, 2), num::zero()]);
    }

    #[test]
    fn continuous_validation_requires_negative_mean() {
        let costs = CostModel::Linear { gamma: 4.0, domain: [-2.0, 1.0] };
        let ok = Distribution::uniform(-2.0, 1.0).unwrap();
        assert!(validate_continuous(&ok, &costs).is_valid());
        let costs = CostModel::Linear { gamma: 4.0, domain: [-1.0, 2.0] };
        let bad = Distribution::uniform(-1.0, 2.0).unwrap();
        let r = validate_continuous(&bad, &costs);
        assert!(r.violations.iter().any(|v| matches!(v, Violation::NonNegativeMean(_))));
    }
}
