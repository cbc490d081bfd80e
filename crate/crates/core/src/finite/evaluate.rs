//! Exact payoffs of a finite mechanism.

use crate::error::{Error, Result};
use crate::model::{validate, CostModel, DesignerPayoff, FiniteMechanism, FiniteTypeSpace};
use crate::num::{self, Rational};

#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub designer_value: Rational,
    /// Obedient truthful payoff `U(t)`.
    pub utility: Vec<Rational>,
    /// `sum_a rho(a|t) c(a,t)`
    pub expected_cost: Vec<Rational>,
}

pub fn evaluate_mechanism(
    space: &FiniteTypeSpace,
    costs: &CostModel,
    payoff: &DesignerPayoff,
    mech: &FiniteMechanism,
) -> Result<Evaluation> {
    validate(space, costs, payoff).into_result()?;
    check_mechanism(space, mech)?;
    let c = costs.table_for(space)?;
    let mut designer_value = num::zero();
    let mut utility = Vec::with_capacity(space.n_types());
    let mut expected_cost = Vec::with_capacity(space.n_types());
    for t in 0..space.n_types() {
        let (mut u, mut cost, mut d) = (num::zero(), num::zero(), num::zero());
        for a in mech.support(t) {
            let q = mech.row(t, a)?;
            let rho = &mech.recommendation[t][a];
            let ev: Rational = q.iter().zip(&space.agent_value[t]).map(|(p, v)| p * v).sum();
            let ed: Rational = q.iter().zip(&payoff.decision_value[t]).map(|(p, v)| p * v).sum();
            u += rho * (ev - &c[t][a]);
            cost += rho * &c[t][a];
            d += rho * (ed - payoff.loss.loss(&c[t][a]));
        }
        designer_value += &space.prior[t] * d;
        utility.push(u);
        expected_cost.push(cost);
    }
    Ok(Evaluation { designer_value, utility, expected_cost })
}

pub(crate) fn check_mechanism(space: &FiniteTypeSpace, mech: &FiniteMechanism) -> Result<()> {
    let v = mech.violations(space);
    if v.is_empty() {
        Ok(())
    } else {
        let msg: Vec<String> = v.iter().map(|x| x.to_string()).collect();
        Err(Error::Structural(msg.join("; ")))
    }
}

/// Joint law `P(t, a, x) = f(t) rho(a|t) q(x|a,t)` as `[t][a][x]`.
pub fn joint_law(prior: &[Rational], mech: &FiniteMechanism, n_outcomes: usize) -> Vec<Vec<Vec<Rational>>> {
    mech.recommendation
        .iter()
        .zip(&mech.decision)
        .zip(prior)
        .map(|((rho, rows), f)| {
            rho.iter()
                .zip(rows)
                .map(|(r, q)| match q {
                    Some(q) => q.iter().map(|p| f * r * p).collect(),
                    None => vec![num::zero(); n_outcomes],
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{college, college_mechanism};
    use crate::num::{int, ratio};

    fn q(p: Rational) -> Option<Vec<Rational>> {
        Some(vec![num::one() - &p, p])
    }

    #[test]
    fn stochastic_menu_value() {
        let inst = college(true);
        let e = evaluate_mechanism(&inst.space, &inst.costs, &inst.payoff, &college_mechanism()).unwrap();
        assert_eq!(e.designer_value, ratio(69, 32));
        assert_eq!(e.utility, vec![ratio(1, 4), ratio(1, 4), int(1), int(1)]);
        assert_eq!(e.expected_cost[0], ratio(3, 4));
    }

    #[test]
    fn first_best_test_burns_t1_utility() {
        let inst = college(false);
        let test = FiniteMechanism {
            decision: vec![
                vec![None, q(int(1))],
                vec![q(int(0)), None],
                vec![None, q(int(1))],
                vec![None, q(int(1))],
            ],
            recommendation: vec![
                vec![int(0), int(1)],
                vec![int(1), int(0)],
                vec![int(0), int(1)],
                vec![int(0), int(1)],
            ],
        };
        let e = evaluate_mechanism(&inst.space, &inst.costs, &inst.payoff, &test).unwrap();
        assert_eq!(e.designer_value, ratio(9, 4));
        assert_eq!(e.utility[0], int(0));
    }

    #[test]
    fn always_reject_is_worth_nothing() {
        let inst = college(true);
        let m = FiniteMechanism {
            decision: (0..4).map(|t| (0..2).map(|a| (a == t / 2).then(|| q(int(0))).flatten()).collect()).collect(),
            recommendation: (0..4).map(|t| (0..2).map(|a| if a == t / 2 { int(1) } else { int(0) }).collect()).collect(),
        };
        let e = evaluate_mechanism(&inst.space, &inst.costs, &inst.payoff, &m).unwrap();
        assert_eq!(e.designer_value, int(0));
        assert!(e.utility.iter().all(|u| *u == int(0)));
    }

    #[test]
    fn missing_decision_on_support_is_structural() {
        let inst = college(true);
        let mut m = college_mechanism();
        m.decision[1][0] = None;
        assert!(matches!(
            evaluate_mechanism(&inst.space, &inst.costs, &inst.payoff, &m),
            Err(Error::Structural(_))
        ));
    }
}
