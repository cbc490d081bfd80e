//! Exhaustive search over grid mechanisms, an independent lower bound on the
//! LP optimum for tiny binary-outcome instances.
//!
//! Each type's options are enumerated separately: a recommendation lottery on
//! the grid plus a grid approval probability at every recommended score,
//! filtered by ex-post participation. An option is summarized by its designer
//! value, the type's own payoff, and what every other type would get by
//! mimicking it (quitting where that pays). Options that are worse on all of
//! these at once are discarded, then a depth-first search over types keeps
//! pairwise truth-telling and prunes by the best remaining designer values.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::model::{validate, CostModel, DesignerPayoff, FiniteTypeSpace};
use crate::num::{self, Rational};

/// Largest `(types, scores)` accepted.
pub const BRUTE_FORCE_LIMITS: (usize, usize) = (4, 3);

struct Candidate {
    designer: i128,
    own: i128,
    /// payoff of each type when mimicking this option (own slot unused)
    mimic: Vec<i128>,
}

pub fn brute_force_optimum(
    space: &FiniteTypeSpace,
    costs: &CostModel,
    payoff: &DesignerPayoff,
    outside_option: &[Rational],
    step: &Rational,
) -> Result<Rational> {
    validate(space, costs, payoff).into_result()?;
    let (nt, na) = (space.n_types(), space.n_scores());
    if nt > BRUTE_FORCE_LIMITS.0 || na > BRUTE_FORCE_LIMITS.1 || space.n_outcomes() != 2 {
        return Err(Error::Precondition(format!(
            "brute force needs at most {} types, {} scores and two outcomes",
            BRUTE_FORCE_LIMITS.0, BRUTE_FORCE_LIMITS.1
        )));
    }
    if !step.is_positive() || *step < num::ratio(1, 16) || !step.recip().is_integer() {
        return Err(Error::Precondition("grid step must be 1/n with n <= 16".into()));
    }
    if outside_option.len() != nt {
        return Err(Error::Structural("outside option needs one entry per type".into()));
    }
    let n = step.recip().to_integer().to_usize().expect("small");
    let c = costs.table_for(space)?;
    let v = &space.agent_value;
    let u = outside_option;
    let grid: Vec<Rational> = (0..=n).map(|k| Rational::new(BigInt::from(k), BigInt::from(n))).collect();
    let cont = |s: usize, a: usize, q: &Rational| -> Rational { q * &v[s][1] + (num::one() - q) * &v[s][0] - &c[s][a] };

    // exact option summaries per type
    let mut raw: Vec<Vec<(Rational, Rational, Vec<Rational>)>> = Vec::with_capacity(nt);
    for t in 0..nt {
        let dv = &payoff.decision_value[t];
        let mut options = Vec::new();
        for ks in compositions(n, na) {
            let support: Vec<usize> = (0..na).filter(|&a| ks[a] > 0).collect();
            let allowed: Vec<Vec<&Rational>> = support
                .iter()
                .map(|&a| grid.iter().filter(|q| cont(t, a, q) >= u[t]).collect())
                .collect();
            if allowed.iter().any(Vec::is_empty) {
                continue;
            }
            for pick in product(&allowed.iter().map(Vec::len).collect::<Vec<_>>()) {
                let mut designer = num::zero();
                let mut own = num::zero();
                let mut mimic = vec![num::zero(); nt];
                for (j, &a) in support.iter().enumerate() {
                    let q = allowed[j][pick[j]];
                    let rho = &grid[ks[a]];
                    let d = q * &dv[1] + (num::one() - q) * &dv[0] - payoff.loss.loss(&c[t][a]);
                    designer += rho * d;
                    own += rho * cont(t, a, q);
                    for s in (0..nt).filter(|&s| s != t) {
                        let gain = cont(s, a, q) - &u[s];
                        if gain.is_positive() {
                            mimic[s] += rho * gain;
                        }
                    }
                }
                for s in 0..nt {
                    mimic[s] += &u[s];
                }
                options.push((&space.prior[t] * designer, own, mimic));
            }
        }
        if options.is_empty() {
            return Err(Error::Infeasible);
        }
        raw.push(options);
    }

    // common denominator so the search runs on integers
    let mut denom = BigInt::one();
    for (d, o, m) in raw.iter().flatten() {
        for r in std::iter::once(d).chain(std::iter::once(o)).chain(m.iter()) {
            denom = denom.lcm(r.denom());
        }
    }
    let scale = |r: &Rational| -> Result<i128> {
        (r.numer() * (&denom / r.denom()))
            .to_i128()
            .ok_or_else(|| Error::Precondition("payoff denominators too large for brute force".into()))
    };
    let mut cands: Vec<Vec<Candidate>> = Vec::with_capacity(nt);
    for (t, options) in raw.iter().enumerate() {
        let mut list = options
            .iter()
            .map(|(d, o, m)| {
                Ok(Candidate {
                    designer: scale(d)?,
                    own: scale(o)?,
                    mimic: m.iter().enumerate().map(|(s, x)| if s == t { Ok(0) } else { scale(x) }).collect::<Result<_>>()?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        list = pareto(list);
        cands.push(list);
    }

    let best_rest: Vec<i128> = {
        let mut acc = vec![0i128; nt + 1];
        for t in (0..nt).rev() {
            acc[t] = acc[t + 1] + cands[t][0].designer;
        }
        acc
    };
    let mut best: Option<i128> = None;
    let mut chosen: Vec<usize> = Vec::with_capacity(nt);
    search(&cands, &best_rest, 0, 0, &mut chosen, &mut best);
    let best = best.ok_or(Error::Infeasible)?;
    Ok(Rational::new(BigInt::from(best), denom))
}

fn search(cands: &[Vec<Candidate>], best_rest: &[i128], t: usize, partial: i128, chosen: &mut Vec<usize>, best: &mut Option<i128>) {
    if t == cands.len() {
        if best.is_none_or(|b| partial > b) {
            *best = Some(partial);
        }
        return;
    }
    for (k, cand) in cands[t].iter().enumerate() {
        let bound = partial + cand.designer + best_rest[t + 1];
        if best.is_some_and(|b| bound <= b) {
            break; // candidates are sorted by designer value
        }
        let compatible = chosen.iter().enumerate().all(|(s, &j)| {
            let other = &cands[s][j];
            other.own >= cand.mimic[s] && cand.own >= other.mimic[t]
        });
        if compatible {
            chosen.push(k);
            search(cands, best_rest, t + 1, partial + cand.designer, chosen, best);
            chosen.pop();
        }
    }
}

/// Drops options dominated in designer value, own payoff and every mimic
/// payoff; the survivors are sorted by designer value, best first.
fn pareto(mut list: Vec<Candidate>) -> Vec<Candidate> {
    list.sort_by(|a, b| {
        b.designer
            .cmp(&a.designer)
            .then(b.own.cmp(&a.own))
            .then_with(|| a.mimic.cmp(&b.mimic))
    });
    let mut kept: Vec<Candidate> = Vec::new();
    for c in list {
        let dominated = kept.iter().any(|k| {
            k.designer >= c.designer && k.own >= c.own && k.mimic.iter().zip(&c.mimic).all(|(x, y)| x <= y)
        });
        if !dominated {
            kept.push(c);
        }
    }
    kept
}

/// All `k`-part compositions of `n` (ordered, parts may be zero).
fn compositions(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 1 {
        return vec![vec![n]];
    }
    (0..=n)
        .flat_map(|first| {
            compositions(n - first, k - 1).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}

/// Cartesian product of index ranges `0..sizes[i]`.
fn product(sizes: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &s in sizes {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..s).map(move |i| {
                    let mut p = prefix.clone();
                    p.push(i);
                    p
                })
            })
            .collect();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::college;
    use crate::model::{AgentType, FalsificationLoss, ScoreDef};
    use crate::num::{int, ratio};

    #[test]
    fn college_grid_optimum_is_tight() {
        let inst = college(true);
        let v = brute_force_optimum(&inst.space, &inst.costs, &inst.payoff, &inst.outside(), &ratio(1, 16)).unwrap();
        assert_eq!(v, ratio(53, 24));
    }

    #[test]
    fn single_type_gets_its_favourite_outcome() {
        let space = FiniteTypeSpace {
            types: vec![AgentType { label: "only".into(), natural_score: "s".into() }],
            scores: vec![ScoreDef { id: "s".into(), value: Some(0.0) }],
            outcomes: vec!["reject".into(), "approve".into()],
            prior: vec![int(1)],
            agent_value: vec![vec![int(0), int(1)]],
        };
        let payoff = DesignerPayoff { decision_value: vec![vec![int(0), int(5)]], loss: FalsificationLoss::None };
        let costs = CostModel::Tabulated { table: vec![vec![int(0)]] };
        let v = brute_force_optimum(&space, &costs, &payoff, &[int(0)], &ratio(1, 4)).unwrap();
        assert_eq!(v, int(5));
    }

    #[test]
    fn prohibitive_costs_separate_on_natural_scores() {
        let space = FiniteTypeSpace {
            types: vec![
                AgentType { label: "lo".into(), natural_score: "a".into() },
                AgentType { label: "hi".into(), natural_score: "b".into() },
            ],
            scores: vec![ScoreDef { id: "a".into(), value: Some(0.0) }, ScoreDef { id: "b".into(), value: Some(1.0) }],
            outcomes: vec!["reject".into(), "approve".into()],
            prior: vec![ratio(1, 2), ratio(1, 2)],
            agent_value: vec![vec![int(0), int(1)]; 2],
        };
        let payoff = DesignerPayoff { decision_value: vec![vec![int(0), int(-1)], vec![int(0), int(1)]], loss: FalsificationLoss::None };
        let costs = CostModel::Tabulated { table: vec![vec![int(0), int(10)], vec![int(10), int(0)]] };
        let v = brute_force_optimum(&space, &costs, &payoff, &[int(0), int(0)], &ratio(1, 8)).unwrap();
        assert_eq!(v, ratio(1, 2));
    }

    #[test]
    fn rejects_oversized_instances_and_fine_grids() {
        let inst = college(false);
        assert!(matches!(
            brute_force_optimum(&inst.space, &inst.costs, &inst.payoff, &inst.outside(), &ratio(1, 32)),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            brute_force_optimum(&inst.space, &inst.costs, &inst.payoff, &inst.outside(), &ratio(2, 5)),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn compositions_cover_the_simplex() {
        assert_eq!(compositions(4, 3).len(), 15);
        assert!(compositions(4, 3).iter().all(|c| c.iter().sum::<usize>() == 4));
        assert_eq!(product(&[2, 3]).len(), 6);
    }
}
