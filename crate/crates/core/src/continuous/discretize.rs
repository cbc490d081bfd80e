//! Bridges from the continuous model to finite instances and score-based rules.

use crate::continuous::distribution::Distribution;
use crate::continuous::numerics::linspace;
use crate::continuous::solver::ContinuousSolution;
use crate::error::{Error, Result};
use crate::model::{
    AgentType, CostModel, DesignerPayoff, FalsificationLoss, FiniteInstance, FiniteTypeSpace, ScoreBasedRule, ScoreDef,
};
use crate::num::{self, ratio};

/// Equal-mass finite approximation of a continuous instance.
///
/// Types sit at the `(2i - 1) / 2n` quantiles, each with mass `1/n`. The
/// score grid is the type grid plus `s_max`, refined with `n_scores` evenly
/// spaced points between the lowest type and `s_max`. Approving type `t` is
/// worth `t` to the designer and `1` to the agent.
pub fn discretize(dist: &Distribution, costs: &CostModel, n_types: usize, n_scores: usize) -> Result<FiniteInstance> {
    if n_types < 2 || n_scores < 2 {
        return Err(Error::Precondition("discretize needs at least two types and two scores".into()));
    }
    if costs.family().is_none() {
        return Err(Error::Precondition("discretize needs a parametric cost".into()));
    }
    let (_, hi) = dist.support();
    let points: Vec<f64> = (0..n_types)
        .map(|i| dist.quantile((2 * i + 1) as f64 / (2 * n_types) as f64))
        .collect::<Result<_>>()?;

    let mut grid: Vec<f64> = points.clone();
    grid.push(hi);
    grid.extend(linspace(points[0], hi, n_scores));
    grid.sort_by(f64::total_cmp);
    grid.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * (1.0 + b.abs()));
    // keep the exact type locations when a refinement point lands on one
    for p in &points {
        if let Some(g) = grid.iter_mut().find(|g| (**g - p).abs() <= 1e-12 * (1.0 + p.abs())) {
            *g = *p;
        }
    }

    let scores: Vec<ScoreDef> = grid
        .iter()
        .enumerate()
        .map(|(i, &v)| ScoreDef { id: format!("a{i}"), value: Some(v) })
        .collect();
    let score_of = |v: f64| scores.iter().find(|s| s.value == Some(v)).map(|s| s.id.clone()).expect("type on grid");
    let types: Vec<AgentType> = points
        .iter()
        .enumerate()
        .map(|(i, &p)| AgentType { label: format!("t{i}"), natural_score: score_of(p) })
        .collect();

    let decision_value = points
        .iter()
        .map(|&p| Ok(vec![num::zero(), num::from_f64(p)?]))
        .collect::<Result<Vec<_>>>()?;
    let space = FiniteTypeSpace {
        types,
        scores,
        outcomes: vec!["reject".into(), "approve".into()],
        prior: vec![ratio(1, n_types as i64); n_types],
        agent_value: vec![vec![num::zero(), num::one()]; n_types],
    };
    let table = costs.table_for(&space)?;
    Ok(FiniteInstance {
        space,
        costs: CostModel::Tabulated { table },
        payoff: DesignerPayoff { decision_value, loss: FalsificationLoss::None },
        outside_option: Vec::new(),
    })
}

/// Binary score-based rule implementing a continuous solution on a score
/// grid: each score is approved with the best `Q*` among types recommended a
/// score no higher than it.
pub fn score_rule_from_solution(sol: &ContinuousSolution, scores: &[f64]) -> Result<ScoreBasedRule> {
    let (lo, hi) = sol.distribution().support();
    let mut pairs: Vec<(f64, f64)> = linspace(lo, hi, 20_001)
        .into_iter()
        .chain(scores.iter().copied().filter(|s| (lo..=hi).contains(s)))
        .map(|t| (sol.a_star(t), sol.q_star(t)))
        .collect();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut best = 0.0f64;
    for p in pairs.iter_mut() {
        best = best.max(p.1);
        p.1 = best;
    }
    let approval = scores
        .iter()
        .map(|&a| {
            let k = pairs.partition_point(|p| p.0 <= a);
            num::from_f64(if k == 0 { 0.0 } else { pairs[k - 1].1 })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ScoreBasedRule::binary(&approval))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::validate;

    #[test]
    fn three_type_uniform_grid() {
        let d = Distribution::uniform(-2.0, 1.0).unwrap();
        let costs = CostModel::Linear { gamma: 4.0, domain: [-2.0, 1.0] };
        let inst = discretize(&d, &costs, 3, 2).unwrap();
        let vals = inst.space.score_values().unwrap();
        let types: Vec<f64> = (0..3).map(|t| vals[inst.space.natural_score(t).unwrap()]).collect();
        for (x, y) in types.iter().zip([-1.5, -0.5, 0.5]) {
            assert!((x - y).abs() < 1e-12);
        }
        assert_eq!(vals.len(), 4);
        assert!(inst.space.prior.iter().all(|p| *p == ratio(1, 3)));
        assert!(validate(&inst.space, &inst.costs, &inst.payoff).is_valid());
    }

    #[test]
    fn two_types_split_at_median() {
        let d = Distribution::triangular(-2.0, -1.0, 1.0).unwrap();
        let costs = CostModel::Quadratic { gamma: 2.0, domain: [-2.0, 1.0] };
        let inst = discretize(&d, &costs, 2, 5).unwrap();
        let vals = inst.space.score_values().unwrap();
        let med = d.quantile(0.5).unwrap();
        let t0 = vals[inst.space.natural_score(0).unwrap()];
        let t1 = vals[inst.space.natural_score(1).unwrap()];
        assert!(t0 < med && med < t1);
        assert!((d.cdf(t0) - 0.25).abs() < 1e-12 && (d.cdf(t1) - 0.75).abs() < 1e-12);
    }
}
