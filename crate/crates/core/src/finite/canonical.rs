//! Canonicalization: collapsing randomization over decision rules, composing
//! indirect mechanisms into recommendation mechanisms, score-based reduction
//! and monotone rebalancing of approval probabilities.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::finite::evaluate::check_mechanism;
use crate::model::{support_tol, CostModel, DesignerPayoff, FiniteMechanism, FiniteTypeSpace, ScoreBasedRule};
use crate::num::{self, format_rational, Rational};

/// One atom of a randomized recommendation: a score-based rule, the score the
/// agent is told to submit, and its probability.
#[derive(Debug, Clone, PartialEq)]
pub struct RuleDraw {
    pub rule: ScoreBasedRule,
    pub score: usize,
    pub weight: Rational,
}

/// Replaces a type-by-type lottery over (rule, score) pairs by a single rule
/// per recommended score, `q~(x|a,t) = sum nu q(x|a) / sum nu`, with `rho`
/// the score marginal. Scores drawn with zero total mass get no decision row.
pub fn derandomize_decision_rules(n_scores: usize, randomized: &[Vec<RuleDraw>]) -> Result<FiniteMechanism> {
    let mut decision = Vec::with_capacity(randomized.len());
    let mut recommendation = Vec::with_capacity(randomized.len());
    for (t, draws) in randomized.iter().enumerate() {
        let n_outcomes = draws.first().map(|d| d.rule.decision.first().map_or(0, Vec::len)).unwrap_or(0);
        let mut rho = vec![num::zero(); n_scores];
        let mut mass: Vec<Vec<Rational>> = vec![vec![num::zero(); n_outcomes]; n_scores];
        for d in draws {
            if d.score >= n_scores || d.rule.decision.len() != n_scores {
                return Err(Error::Structural(format!("draw for type {t} does not match {n_scores} scores")));
            }
            if d.weight.is_negative() {
                return Err(Error::Structural(format!("negative weight for type {t}")));
            }
            let row = &d.rule.decision[d.score];
            if row.len() != n_outcomes {
                return Err(Error::Structural(format!("rules for type {t} disagree on the outcome count")));
            }
            rho[d.score] += &d.weight;
            for (m, q) in mass[d.score].iter_mut().zip(row) {
                *m += &d.weight * q;
            }
        }
        decision.push(
            mass.into_iter()
                .zip(&rho)
                .map(|(m, r)| (!r.is_zero()).then(|| m.into_iter().map(|v| v / r).collect()))
                .collect(),
        );
        recommendation.push(rho);
    }
    Ok(FiniteMechanism { decision, recommendation })
}

/// An indirect mechanism: each report draws a rule and a message.
#[derive(Debug, Clone, PartialEq)]
pub struct MessageDraw {
    pub rule: ScoreBasedRule,
    pub message: usize,
    pub weight: Rational,
}

/// Composes reporting `sigma(r|t)`, the indirect mechanism `pi(q, m|r)` and the
/// action rule `delta(a|m)` into a direct recommendation mechanism.
pub fn derive_drm(
    n_scores: usize,
    indirect: &[Vec<MessageDraw>],
    reporting: &[Vec<(usize, Rational)>],
    action: &BTreeMap<usize, Vec<(usize, Rational)>>,
) -> Result<FiniteMechanism> {
    let randomized = compose(indirect, reporting, action)?;
    derandomize_decision_rules(n_scores, &randomized)
}

/// The per-type lottery over (rule, score) induced by `sigma`, `pi`, `delta`.
pub fn compose(
    indirect: &[Vec<MessageDraw>],
    reporting: &[Vec<(usize, Rational)>],
    action: &BTreeMap<usize, Vec<(usize, Rational)>>,
) -> Result<Vec<Vec<RuleDraw>>> {
    reporting
        .iter()
        .map(|sigma| {
            let mut out = Vec::new();
            for (r, p_r) in sigma {
                let pi = indirect
                    .get(*r)
                    .ok_or_else(|| Error::Structural(format!("report {r} has no indirect mechanism")))?;
                for draw in pi {
                    let delta = action
                        .get(&draw.message)
                        .ok_or_else(|| Error::Structural(format!("message {} has no action rule", draw.message)))?;
                    for (a, p_a) in delta {
                        out.push(RuleDraw { rule: draw.rule.clone(), score: *a, weight: p_r * &draw.weight * p_a });
                    }
                }
            }
            Ok(out)
        })
        .collect()
}

/// Joint law `P(t, a, x)` of a per-type lottery over (rule, score), `[t][a][x]`.
pub fn mixture_joint_law(prior: &[Rational], randomized: &[Vec<RuleDraw>], n_scores: usize, n_outcomes: usize) -> Vec<Vec<Vec<Rational>>> {
    randomized
        .iter()
        .zip(prior)
        .map(|(draws, f)| {
            let mut law = vec![vec![num::zero(); n_outcomes]; n_scores];
            for d in draws {
                for (x, q) in d.rule.decision[d.score].iter().enumerate() {
                    law[d.score][x] += f * &d.weight * q;
                }
            }
            law
        })
        .collect()
}

/// Score-based reduction of an IC mechanism with deterministic
/// recommendations and two outcomes (index 1 is approval).
///
/// Types sent to the same score must receive approval probabilities they are
/// indifferent between; among them the designer's preferred one is kept.
/// Scores nobody is sent to get the null outcome (index 0).
pub fn reduce_to_score_based(
    space: &FiniteTypeSpace,
    costs: &CostModel,
    payoff: &DesignerPayoff,
    mech: &FiniteMechanism,
) -> Result<(ScoreBasedRule, Vec<usize>)> {
    if space.n_outcomes() != 2 {
        return Err(Error::Precondition("score-based reduction is implemented for two outcomes".into()));
    }
    check_mechanism(space, mech)?;
    costs.table_for(space)?;
    let target = mech
        .deterministic_recommendations()
        .ok_or_else(|| Error::Precondition("recommendations must be deterministic".into()))?;
    let tol = num::from_f64(1e-9)?;
    let v = &space.agent_value;
    let mut approval = vec![num::zero(); space.n_scores()];
    for a in 0..space.n_scores() {
        let group: Vec<usize> = (0..space.n_types()).filter(|&t| target[t] == a).collect();
        if group.is_empty() {
            continue;
        }
        let candidates: Vec<Rational> = group.iter().map(|&t| mech.row(t, a).map(|q| q[1].clone())).collect::<Result<_>>()?;
        for &t in &group {
            let own = &mech.row(t, a)?[1];
            let stake = &v[t][1] - &v[t][0];
            for cand in &candidates {
                if ((cand - own) * &stake).abs() > tol {
                    return Err(Error::NotIncentiveCompatible(format!(
                        "type {} at score {} is not indifferent between approvals {} and {}",
                        space.type_name(t),
                        space.scores[a].id,
                        format_rational(own),
                        format_rational(cand)
                    )));
                }
            }
        }
        let value = |p: &Rational| -> Rational {
            group
                .iter()
                .map(|&t| {
                    let dv = &payoff.decision_value[t];
                    &space.prior[t] * (p * &dv[1] + (num::one() - p) * &dv[0])
                })
                .sum()
        };
        // first maximizer in type order keeps the choice deterministic
        let mut best = candidates[0].clone();
        for c in &candidates[1..] {
            if value(c) > value(&best) {
                best = c.clone();
            }
        }
        approval[a] = best;
    }
    Ok((ScoreBasedRule::binary(&approval), target))
}

/// Payoff-equivalent nondecreasing approval probabilities for one type.
///
/// Interior support levels drop to their cost, the surplus moves to the top
/// score, and whatever exceeds 1 there spills downward with
/// `d_i rho_i = d_{i+1} rho_{i+1}`, capping each level at 1. Scores outside the
/// support inherit the level below them so the output stays monotone.
pub fn monotone_rebalance(scores: &[f64], rho: &[Rational], alpha: &[Rational], cost: &[Rational]) -> Result<Vec<Rational>> {
    let n = scores.len();
    if rho.len() != n || alpha.len() != n || cost.len() != n {
        return Err(Error::Structural("scores, rho, alpha and cost must have equal length".into()));
    }
    let total: Rational = rho.iter().sum();
    if total != num::one() || rho.iter().any(|r| r.is_negative()) {
        return Err(Error::Precondition("rho must be a probability vector".into()));
    }
    if alpha.iter().any(|a| a.is_negative() || *a > num::one()) {
        return Err(Error::Precondition("approval probabilities must lie in [0,1]".into()));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| scores[i].total_cmp(&scores[j]));
    let tol = support_tol();
    let support: Vec<usize> = order.iter().copied().filter(|&i| rho[i] > tol).collect();
    for &i in &support {
        if alpha[i] < cost[i] {
            return Err(Error::Precondition(format!("obedience fails at score {}", scores[i])));
        }
    }
    if support.windows(2).any(|w| cost[w[1]] < cost[w[0]]) {
        return Err(Error::Precondition("costs must be nondecreasing in the score".into()));
    }

    let mut out = alpha.to_vec();
    let monotone = support.windows(2).all(|w| alpha[w[0]] <= alpha[w[1]]);
    if !monotone {
        let q: Rational = support.iter().map(|&i| &rho[i] * &alpha[i]).sum();
        let (&top, rest) = support.split_last().expect("nonempty support");
        for &i in rest {
            out[i] = cost[i].clone();
        }
        let below: Rational = rest.iter().map(|&i| &rho[i] * &cost[i]).sum();
        out[top] = (q - below) / &rho[top];
        // spill the excess over 1 down the support
        let mut excess = Rational::zero();
        for &i in support.iter().rev() {
            out[i] += &excess / &rho[i];
            excess = Rational::zero();
            if out[i] > num::one() {
                excess = (&out[i] - num::one()) * &rho[i];
                out[i] = num::one();
            }
        }
        if excess.is_positive() {
            return Err(Error::Numerical("rebalancing left approval mass unplaced".into()));
        }
    }
    // off-support scores follow the level below (or the first support level)
    let mut level: Option<Rational> = support.first().map(|&i| out[i].clone());
    for &i in &order {
        if rho[i] > tol {
            level = Some(out[i].clone());
        } else if let Some(l) = &level {
            out[i] = l.clone();
        }
    }
    Ok(out)
}
