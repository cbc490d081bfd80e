//! The direct-recommendation design problem as a linear program.
//!
//! The mechanism `(q, rho)` enters incentive constraints bilinearly. Working
//! in joint variables `z(x,a|t) = rho(a|t) q(x|a,t)` makes everything linear:
//! `rho` is the marginal of `z` over outcomes, and `q = z / rho` on the
//! support, so any feasible `z` is a mechanism and vice versa.
//!
//! Truth-telling with per-recommendation quitting has a positive part,
//! `U(t) - u(t) >= sum_a [ sum_x z(x,a|t')(v(x,t) - c(a,t) - u(t)) ]^+`,
//! which is encoded with auxiliaries `w(a;t,t') >= 0` bounded below by the
//! bracket. At any feasible point the smallest admissible `w` is exactly the
//! positive part, so the relaxation is tight.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::lpcore::{solve_lp, LinearProgram, LpSolution, LpStatus, Relation, SolveMode};
use crate::model::{validate, CostModel, DesignerPayoff, FiniteInstance, FiniteMechanism, FiniteTypeSpace};
use crate::num::{self, Rational};

/// Positions of `z(x,a|t)` and `w(a;t,t')` in the LP.
///
/// Variables are omitted when participation already forces them to zero
/// (`c(a,t) + u(t) > max_x v(x,t)`), and `w` is omitted when its bracket can
/// never be positive.
#[derive(Debug, Clone, PartialEq)]
pub struct JointVariableIndex {
    n_outcomes: usize,
    n_scores: usize,
    n_types: usize,
    z: Vec<Option<usize>>,
    w: Vec<Option<usize>>,
    n_z: usize,
}

impl JointVariableIndex {
    pub fn z(&self, x: usize, a: usize, t: usize) -> Option<usize> {
        self.z[(t * self.n_scores + a) * self.n_outcomes + x]
    }

    /// `w(a; t, t')`: type `t` reporting `t'` and being told `a`.
    pub fn w(&self, a: usize, t: usize, t_report: usize) -> Option<usize> {
        self.w[(t * self.n_types + t_report) * self.n_scores + a]
    }

    /// Number of `z` variables; they occupy positions `0..n_z()`.
    pub fn n_z(&self) -> usize {
        self.n_z
    }

    /// `(x, a, t)` of an LP position in the `z` block.
    pub fn triple(&self, pos: usize) -> Option<(usize, usize, usize)> {
        let k = self.z.iter().position(|p| *p == Some(pos))?;
        let x = k % self.n_outcomes;
        let a = (k / self.n_outcomes) % self.n_scores;
        Some((x, a, k / (self.n_outcomes * self.n_scores)))
    }
}

#[derive(Debug, Clone)]
pub struct DrmLp {
    pub lp: LinearProgram,
    pub index: JointVariableIndex,
}

/// Builds the design LP for an instance.
pub fn build_drm_lp(
    space: &FiniteTypeSpace,
    costs: &CostModel,
    payoff: &DesignerPayoff,
    outside_option: &[Rational],
) -> Result<DrmLp> {
    validate(space, costs, payoff).into_result()?;
    let (nt, na, nx) = (space.n_types(), space.n_scores(), space.n_outcomes());
    if outside_option.len() != nt {
        return Err(Error::Structural(format!("outside option needs {nt} entries")));
    }
    let c = costs.table_for(space)?;
    let v = &space.agent_value;
    let u = outside_option;
    let max_v: Vec<Rational> = v.iter().map(|row| row.iter().max().cloned().unwrap_or_else(num::zero)).collect();

    let mut lp = LinearProgram::new(0);
    let mut z = vec![None; nt * na * nx];
    for t in 0..nt {
        for a in 0..na {
            if &c[t][a] + &u[t] > max_v[t] {
                continue;
            }
            let loss = payoff.loss.loss(&c[t][a]);
            for x in 0..nx {
                let gain = &space.prior[t] * (&payoff.decision_value[t][x] - &loss);
                z[(t * na + a) * nx + x] = Some(lp.add_var(gain));
            }
        }
    }
    let n_z = lp.n_vars();
    let mut index = JointVariableIndex { n_outcomes: nx, n_scores: na, n_types: nt, z, w: vec![None; nt * nt * na], n_z };

    // normalization
    for t in 0..nt {
        let terms: Vec<_> = (0..na)
            .flat_map(|a| (0..nx).filter_map(move |x| Some((a, x))))
            .filter_map(|(a, x)| index.z(x, a, t).map(|p| (p, num::one())))
            .collect();
        if terms.is_empty() {
            return Err(Error::Infeasible);
        }
        lp.add_constraint(terms, Relation::Eq, num::one());
    }

    // ex-post participation: sum_x z(x,a|t)(v(x,t) - c(a,t) - u(t)) >= 0
    for t in 0..nt {
        for a in 0..na {
            let terms: Vec<_> = (0..nx)
                .filter_map(|x| index.z(x, a, t).map(|p| (p, &v[t][x] - &c[t][a] - &u[t])))
                .filter(|(_, k)| !k.is_zero())
                .collect();
            if terms.iter().any(|(_, k)| k.is_negative()) {
                lp.add_constraint(terms, Relation::Ge, num::zero());
            }
        }
    }

    // truth-telling
    for t in 0..nt {
        let own: Vec<(usize, Rational)> = (0..na)
            .flat_map(|a| (0..nx).map(move |x| (a, x)))
            .filter_map(|(a, x)| index.z(x, a, t).map(|p| (p, &v[t][x] - &c[t][a])))
            .filter(|(_, k)| !k.is_zero())
            .collect();
        for r in (0..nt).filter(|&r| r != t) {
            let mut row = own.clone();
            for a in 0..na {
                let bracket: Vec<(usize, Rational)> = (0..nx)
                    .filter_map(|x| index.z(x, a, r).map(|p| (p, &v[t][x] - &c[t][a] - &u[t])))
                    .filter(|(_, k)| !k.is_zero())
                    .collect();
                if !bracket.iter().any(|(_, k)| k.is_positive()) {
                    continue;
                }
                let w = lp.add_var(num::zero());
                index.w[(t * nt + r) * na + a] = Some(w);
                let mut terms = vec![(w, num::one())];
                terms.extend(bracket.into_iter().map(|(p, k)| (p, -k)));
                lp.add_constraint(terms, Relation::Ge, num::zero());
                row.push((w, -num::one()));
            }
            lp.add_constraint(row, Relation::Ge, u[t].clone());
        }
    }
    Ok(DrmLp { lp, index })
}

/// Recovers `(q, rho)` from an optimal LP assignment.
///
/// Floating-point assignments are cleaned first: negatives and entries below
/// the support tolerance are zeroed and each type's row is renormalized.
pub fn extract_mechanism(space: &FiniteTypeSpace, drm: &DrmLp, solution: &LpSolution) -> Result<FiniteMechanism> {
    if solution.status != LpStatus::Optimal {
        return Err(Error::Structural(format!("cannot extract a mechanism from a {:?} solution", solution.status)));
    }
    let (nt, na, nx) = (space.n_types(), space.n_scores(), space.n_outcomes());
    let exact = solution.mode == SolveMode::Exact;
    let tol = crate::model::support_tol();
    let mut joint = vec![vec![vec![num::zero(); nx]; na]; nt];
    for (t, per_t) in joint.iter_mut().enumerate() {
        for (a, per_a) in per_t.iter_mut().enumerate() {
            for (x, cell) in per_a.iter_mut().enumerate() {
                if let Some(p) = drm.index.z(x, a, t) {
                    let val = solution.assignment[p].clone();
                    *cell = if exact || val > tol { val } else { num::zero() };
                }
            }
        }
        if !exact {
            let total: Rational = per_t.iter().flatten().sum();
            if total.is_positive() {
                per_t.iter_mut().flatten().for_each(|c| *c = &*c / &total);
            }
        }
    }
    mechanism_from_joint(&joint)
}

/// `rho(a|t) = sum_x z`, `q = z / rho` on the support; `joint[t][a][x]`.
pub fn mechanism_from_joint(joint: &[Vec<Vec<Rational>>]) -> Result<FiniteMechanism> {
    let tol = crate::model::support_tol();
    let mut decision = Vec::with_capacity(joint.len());
    let mut recommendation = Vec::with_capacity(joint.len());
    for (t, per_t) in joint.iter().enumerate() {
        let rho: Vec<Rational> = per_t.iter().map(|row| row.iter().sum()).collect();
        if rho.iter().all(|r| r.is_zero()) {
            return Err(Error::Structural(format!("type {t} has an all-zero row")));
        }
        decision.push(
            per_t
                .iter()
                .zip(&rho)
                .map(|(row, r)| (r > &tol).then(|| row.iter().map(|z| z / r).collect()))
                .collect(),
        );
        recommendation.push(rho);
    }
    Ok(FiniteMechanism { decision, recommendation })
}

/// Joint variables `z(x,a|t)` of a mechanism; off-support entries are zero.
pub fn joint_of(mech: &FiniteMechanism) -> Vec<Vec<Vec<Rational>>> {
    mech.recommendation
        .iter()
        .zip(&mech.decision)
        .map(|(rho, rows)| {
            rho.iter()
                .zip(rows)
                .map(|(r, q)| match q {
                    Some(q) => q.iter().map(|p| r * p).collect(),
                    None => Vec::new(),
                })
                .collect()
        })
        .collect()
}

/// Writes a mechanism into the LP's variable vector, setting every `w` to its
/// positive part; useful to check a known mechanism against the constraints.
pub fn assignment_for(space: &FiniteTypeSpace, costs: &CostModel, outside_option: &[Rational], drm: &DrmLp, mech: &FiniteMechanism) -> Result<Vec<Rational>> {
    let (nt, na, nx) = (space.n_types(), space.n_scores(), space.n_outcomes());
    let c = costs.table_for(space)?;
    let mut x = vec![num::zero(); drm.lp.n_vars()];
    let z = |xo: usize, a: usize, t: usize| -> Rational {
        match &mech.decision[t][a] {
            Some(q) => &mech.recommendation[t][a] * &q[xo],
            None => num::zero(),
        }
    };
    for t in 0..nt {
        for a in 0..na {
            for xo in 0..nx {
                match drm.index.z(xo, a, t) {
                    Some(p) => x[p] = z(xo, a, t),
                    None if !z(xo, a, t).is_zero() => {
                        return Err(Error::Structural(format!("mechanism uses pruned score {a} for type {t}")))
                    }
                    None => {}
                }
            }
        }
    }
    for t in 0..nt {
        for r in 0..nt {
            for a in 0..na {
                if let Some(p) = drm.index.w(a, t, r) {
                    let bracket: Rational = (0..nx)
                        .map(|xo| z(xo, a, r) * (&space.agent_value[t][xo] - &c[t][a] - &outside_option[t]))
                        .sum();
                    x[p] = if bracket.is_positive() { bracket } else { num::zero() };
                }
            }
        }
    }
    Ok(x)
}

#[derive(Debug, Clone)]
pub struct FiniteSolution {
    pub value: Rational,
    pub mechanism: FiniteMechanism,
    pub lp: LpSolution,
    pub drm: DrmLp,
}

/// Builds, solves and extracts in one go.
pub fn solve_instance(inst: &FiniteInstance, mode: SolveMode) -> Result<FiniteSolution> {
    let outside = inst.outside();
    let drm = build_drm_lp(&inst.space, &inst.costs, &inst.payoff, &outside)?;
    let lp = solve_lp(&drm.lp, mode)?;
    match lp.status {
        LpStatus::Optimal => {}
        LpStatus::Infeasible => return Err(Error::Infeasible),
        LpStatus::Unbounded => return Err(Error::Unbounded),
        LpStatus::IterationLimit => return Err(Error::IterationLimit(lp.pivots)),
    }
    let mechanism = extract_mechanism(&inst.space, &drm, &lp)?;
    Ok(FiniteSolution { value: lp.value.clone(), mechanism, lp, drm })
}
