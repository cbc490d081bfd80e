#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use semihard::finite::{MessageDraw, RuleDraw};
use semihard::model::{
    AgentType, CostModel, DesignerPayoff, FalsificationLoss, FiniteInstance, FiniteTypeSpace, ScoreBasedRule, ScoreDef,
};
use semihard::num::{int, ratio, Rational};

/// Random probability vector with denominator `den`.
pub fn simplex(rng: &mut ChaCha8Rng, n: usize, den: i64) -> Vec<Rational> {
    let mut parts = vec![0i64; n];
    for _ in 0..den {
        parts[rng.gen_range(0..n)] += 1;
    }
    parts.into_iter().map(|p| ratio(p, den)).collect()
}

pub fn grid_prob(rng: &mut ChaCha8Rng, den: i64) -> Rational {
    ratio(rng.gen_range(0..=den), den)
}

/// Small binary-outcome instance: `nt` types, `na` scores on 0,1,2..., costs
/// nondecreasing in the distance to the natural score.
pub fn small_instance(rng: &mut ChaCha8Rng, nt: usize, na: usize) -> FiniteInstance {
    let types: Vec<AgentType> = (0..nt)
        .map(|t| AgentType { label: format!("t{t}"), natural_score: format!("s{}", rng.gen_range(0..na)) })
        .collect();
    let scores = (0..na).map(|a| ScoreDef { id: format!("s{a}"), value: Some(a as f64) }).collect();
    let natural: Vec<usize> = types.iter().map(|t| t.natural_score[1..].parse().unwrap()).collect();
    let table = (0..nt)
        .map(|t| {
            let unit = ratio(rng.gen_range(1..=6), 4);
            (0..na).map(|a| unit.clone() * int((a as i64 - natural[t] as i64).abs())).collect()
        })
        .collect();
    let space = FiniteTypeSpace {
        types,
        scores,
        outcomes: vec!["reject".into(), "approve".into()],
        prior: simplex(rng, nt, 12).into_iter().map(|p| (p * int(12) + int(1)) / int(12 + nt as i64)).collect(),
        agent_value: (0..nt).map(|_| vec![int(0), ratio(rng.gen_range(1..=4), 2)]).collect(),
    };
    let loss = if rng.gen_bool(0.5) { FalsificationLoss::None } else { FalsificationLoss::Quadratic { lambda: ratio(rng.gen_range(1..=3), 6) } };
    let payoff = DesignerPayoff {
        decision_value: (0..nt).map(|_| vec![int(0), int(rng.gen_range(-3..=4))]).collect(),
        loss,
    };
    FiniteInstance { space, costs: CostModel::Tabulated { table }, payoff, outside_option: vec![] }
}

pub fn random_rule(rng: &mut ChaCha8Rng, na: usize, nx: usize) -> ScoreBasedRule {
    ScoreBasedRule { decision: (0..na).map(|_| simplex(rng, nx, 6)).collect() }
}

/// Per-type lottery over (rule, score) with a handful of atoms.
pub fn random_lottery(rng: &mut ChaCha8Rng, nt: usize, na: usize, nx: usize) -> Vec<Vec<RuleDraw>> {
    (0..nt)
        .map(|_| {
            let k = rng.gen_range(1..=4);
            simplex(rng, k, 8)
                .into_iter()
                .map(|weight| RuleDraw { rule: random_rule(rng, na, nx), score: rng.gen_range(0..na), weight })
                .collect()
        })
        .collect()
}

pub fn random_indirect(rng: &mut ChaCha8Rng, n_reports: usize, n_messages: usize, na: usize, nx: usize) -> Vec<Vec<MessageDraw>> {
    (0..n_reports)
        .map(|_| {
            let k = rng.gen_range(1..=3);
            simplex(rng, k, 6)
                .into_iter()
                .map(|weight| MessageDraw { rule: random_rule(rng, na, nx), message: rng.gen_range(0..n_messages), weight })
                .collect()
        })
        .collect()
}

pub fn sparse_lottery(rng: &mut ChaCha8Rng, n: usize, den: i64) -> Vec<(usize, Rational)> {
    simplex(rng, n, den).into_iter().enumerate().filter(|(_, p)| *p != int(0)).collect()
}
