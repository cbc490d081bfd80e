//! Built-in instances.

use crate::model::{AgentType, FiniteMechanism, CostModel, DesignerPayoff, FalsificationLoss, FiniteInstance, FiniteTypeSpace, ScoreDef};
use crate::num::{self, int, ratio, Rational};

/// College admission: four equally likely students, a low and a high score,
/// unit falsification cost, admit/reject. With `cost_loss` the college also
/// loses `c^2 / 6` for every unit of falsification cost a student burns.
pub fn college(cost_loss: bool) -> FiniteInstance {
    let types = [("F", "sL"), ("NF", "sL"), ("NF", "sH"), ("F", "sH")]
        .iter()
        .map(|(label, s)| AgentType { label: label.to_string(), natural_score: s.to_string() })
        .collect();
    let space = FiniteTypeSpace {
        types,
        scores: vec![
            ScoreDef { id: "sL".into(), value: Some(0.0) },
            ScoreDef { id: "sH".into(), value: Some(1.0) },
        ],
        outcomes: vec!["reject".into(), "admit".into()],
        prior: vec![ratio(1, 4); 4],
        agent_value: vec![vec![int(0), int(1)]; 4],
    };
    let table = vec![
        vec![int(0), int(1)],
        vec![int(0), int(1)],
        vec![int(1), int(0)],
        vec![int(1), int(0)],
    ];
    let payoff = DesignerPayoff {
        decision_value: [3, -1, 2, 4].iter().map(|&d| vec![int(0), int(d)]).collect(),
        loss: if cost_loss {
            FalsificationLoss::Quadratic { lambda: ratio(1, 6) }
        } else {
            FalsificationLoss::None
        },
    };
    FiniteInstance { space, costs: CostModel::Tabulated { table }, payoff, outside_option: vec![] }
}

/// The stochastic-request menu from the college example: the strong
/// low-score student submits the high score with probability 3/4 and is
/// always admitted, the weak low-score student is admitted with probability
/// 1/4 at the low score, high-score students are separated. Worth 69/32 with
/// the falsification loss, which the plain separating test (53/24) beats.
pub fn college_mechanism() -> FiniteMechanism {
    let q = |p: Rational| Some(vec![num::one() - &p, p]);
    FiniteMechanism {
        decision: vec![
            vec![q(int(1)), q(int(1))],
            vec![q(ratio(1, 4)), None],
            vec![None, q(int(1))],
            vec![None, q(int(1))],
        ],
        recommendation: vec![
            vec![ratio(1, 4), ratio(3, 4)],
            vec![int(1), int(0)],
            vec![int(0), int(1)],
            vec![int(0), int(1)],
        ],
    }
}
