//! Dense two-phase tableau simplex with Bland's rule.
//!
//! Runs over exact rationals or `f64`. Every optimal solve also returns a
//! dual certificate: row multipliers whose induced upper bound on the
//! objective is checked against the primal value. Large float instances can
//! be routed to a sparse revised simplex ([`SolveMode::Sparse`]), which
//! reports no certificate.

use std::fmt::Debug;

use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::num::{self, Rational};

pub const ITERATION_CAP: usize = 1_000_000;
/// Zero threshold for tableau entries and reduced costs in float mode.
pub const FLOAT_EPS: f64 = 1e-10;
/// Feasibility and duality tolerance reported for float solutions.
pub const FLOAT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearConstraint {
    /// Sparse row: `(variable, coefficient)`.
    pub terms: Vec<(usize, Rational)>,
    pub relation: Relation,
    pub rhs: Rational,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VarBounds {
    pub lo: Rational,
    pub hi: Option<Rational>,
}

impl Default for VarBounds {
    fn default() -> Self {
        VarBounds { lo: num::zero(), hi: None }
    }
}

/// `maximize objective . x` subject to the constraints and `lo <= x <= hi`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LinearProgram {
    pub objective: Vec<Rational>,
    pub constraints: Vec<LinearConstraint>,
    pub bounds: Vec<VarBounds>,
}

impl LinearProgram {
    pub fn new(n_vars: usize) -> Self {
        LinearProgram {
            objective: vec![num::zero(); n_vars],
            constraints: Vec::new(),
            bounds: vec![VarBounds::default(); n_vars],
        }
    }

    /// From dense rows, the textbook layout.
    pub fn from_dense(objective: Vec<Rational>, rows: Vec<(Vec<Rational>, Relation, Rational)>) -> Result<Self> {
        let n = objective.len();
        let mut lp = LinearProgram::new(n);
        lp.objective = objective;
        for (row, relation, rhs) in rows {
            if row.len() != n {
                return Err(Error::Structural(format!("row has {} coefficients, objective has {n}", row.len())));
            }
            let terms = row.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
            lp.constraints.push(LinearConstraint { terms, relation, rhs });
        }
        Ok(lp)
    }

    pub fn n_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn add_var(&mut self, objective: Rational) -> usize {
        self.objective.push(objective);
        self.bounds.push(VarBounds::default());
        self.objective.len() - 1
    }

    pub fn add_constraint(&mut self, terms: Vec<(usize, Rational)>, relation: Relation, rhs: Rational) {
        let terms = terms.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        self.constraints.push(LinearConstraint { terms, relation, rhs });
    }

    pub fn check(&self) -> Result<()> {
        let n = self.n_vars();
        if self.bounds.len() != n {
            return Err(Error::Structural(format!("{} bounds for {n} variables", self.bounds.len())));
        }
        for (i, c) in self.constraints.iter().enumerate() {
            if let Some((j, _)) = c.terms.iter().find(|(j, _)| *j >= n) {
                return Err(Error::Structural(format!("constraint {i} references variable {j} of {n}")));
            }
        }
        for (j, b) in self.bounds.iter().enumerate() {
            if b.lo.is_negative() {
                return Err(Error::Structural(format!("variable {j} has negative lower bound")));
            }
            if let Some(hi) = &b.hi {
                if *hi < b.lo {
                    return Err(Error::Structural(format!("variable {j} has lo > hi")));
                }
            }
        }
        Ok(())
    }

    /// Objective value at `x`.
    pub fn objective_at(&self, x: &[Rational]) -> Rational {
        self.objective.iter().zip(x).map(|(c, v)| c * v).sum()
    }

    /// Largest constraint or bound violation at `x`.
    pub fn max_violation(&self, x: &[Rational]) -> Rational {
        let mut worst = num::zero();
        for c in &self.constraints {
            let lhs: Rational = c.terms.iter().map(|(j, a)| a * &x[*j]).sum();
            let gap = &lhs - &c.rhs;
            let v = match c.relation {
                Relation::Le => gap,
                Relation::Ge => -gap,
                Relation::Eq => gap.abs(),
            };
            worst = worst.max(v);
        }
        for (j, b) in self.bounds.iter().enumerate() {
            worst = worst.max(&b.lo - &x[j]);
            if let Some(hi) = &b.hi {
                worst = worst.max(&x[j] - hi);
            }
        }
        worst
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveMode {
    /// Arbitrary-precision rationals; exact optimum.
    Exact,
    /// Dense `f64` tableau, Bland's rule, tolerance [`FLOAT_TOL`].
    Float,
    /// Sparse revised simplex in `f64` for instances too large for a dense tableau.
    Sparse,
}

impl std::str::FromStr for SolveMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(SolveMode::Exact),
            "float" => Ok(SolveMode::Float),
            "sparse" => Ok(SolveMode::Sparse),
            other => Err(Error::Config(format!("unknown mode '{other}' (exact|float|sparse)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    IterationLimit,
}

/// Row multipliers proving `objective . x <= bound` for every feasible `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct DualCertificate {
    pub row_duals: Vec<Rational>,
    pub bound: Rational,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    pub mode: SolveMode,
    /// Optimal value (exact image of the float value in float modes).
    pub value: Rational,
    pub assignment: Vec<Rational>,
    pub certificate: Option<DualCertificate>,
    pub pivots: usize,
}

impl LpSolution {
    fn without_optimum(status: LpStatus, mode: SolveMode, pivots: usize) -> Self {
        LpSolution { status, mode, value: num::zero(), assignment: Vec::new(), certificate: None, pivots }
    }

    pub fn value_f64(&self) -> f64 {
        num::to_f64(&self.value)
    }

    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

/// Solves `lp` in the requested mode.
pub fn solve_lp(lp: &LinearProgram, mode: SolveMode) -> Result<LpSolution> {
    lp.check()?;
    match mode {
        SolveMode::Exact => solve_dense::<Rational>(lp, mode),
        SolveMode::Float => solve_dense::<f64>(lp, mode),
        SolveMode::Sparse => solve_sparse(lp),
    }
}

/// Arithmetic the tableau needs; `f64` compares against [`FLOAT_EPS`].
pub trait LpScalar: Clone + PartialOrd + Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_rational(r: &Rational) -> Self;
    fn to_rational(&self) -> Rational;
    fn is_pos(&self) -> bool;
    fn is_neg(&self) -> bool;
    fn is_zero_tol(&self) -> bool {
        !self.is_pos() && !self.is_neg()
    }
    fn neg(&self) -> Self;
    fn div(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    /// `self -= a * b`
    fn sub_mul(&mut self, a: &Self, b: &Self);
    fn add_assign(&mut self, o: &Self);
}

impl LpScalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_rational(r: &Rational) -> Self {
        num::to_f64(r)
    }
    fn to_rational(&self) -> Rational {
        Rational::from_float(*self).unwrap_or_else(num::zero)
    }
    fn is_pos(&self) -> bool {
        *self > FLOAT_EPS
    }
    fn is_neg(&self) -> bool {
        *self < -FLOAT_EPS
    }
    fn neg(&self) -> Self {
        -*self
    }
    fn div(&self, o: &Self) -> Self {
        *self / *o
    }
    fn mul(&self, o: &Self) -> Self {
        *self * *o
    }
    fn sub_mul(&mut self, a: &Self, b: &Self) {
        *self -= *a * *b;
    }
    fn add_assign(&mut self, o: &Self) {
        *self += *o;
    }
}

impl LpScalar for Rational {
    fn zero() -> Self {
        num::zero()
    }
    fn one() -> Self {
        num::one()
    }
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn to_rational(&self) -> Rational {
        self.clone()
    }
    fn is_pos(&self) -> bool {
        self.is_positive()
    }
    fn is_neg(&self) -> bool {
        self.is_negative()
    }
    fn neg(&self) -> Self {
        -self.clone()
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn sub_mul(&mut self, a: &Self, b: &Self) {
        if !a.is_zero() && !b.is_zero() {
            *self -= a * b;
        }
    }
    fn add_assign(&mut self, o: &Self) {
        *self += o;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ColKind {
    Structural,
    Slack,
    Artificial,
}

struct Tableau<S> {
    rows: usize,
    cols: usize,
    /// Row-major, `cols + 1` entries per row; the last is the right-hand side.
    data: Vec<S>,
    /// Reduced costs `c_j - c_B B^-1 A_j`, plus `-value` in the last slot.
    reduced: Vec<S>,
    basis: Vec<usize>,
    kinds: Vec<ColKind>,
    pivots: usize,
}

enum Outcome {
    Optimal,
    Unbounded,
    IterationLimit,
}

impl<S: LpScalar> Tableau<S> {
    fn at(&self, i: usize, j: usize) -> &S {
        &self.data[i * (self.cols + 1) + j]
    }

    fn rhs(&self, i: usize) -> &S {
        self.at(i, self.cols)
    }

    fn pivot(&mut self, p: usize, e: usize) {
        let w = self.cols + 1;
        let pv = self.at(p, e).clone();
        let row_start = p * w;
        for j in 0..w {
            let v = self.data[row_start + j].div(&pv);
            self.data[row_start + j] = v;
        }
        let nz: Vec<usize> = (0..w).filter(|&j| !self.data[row_start + j].is_zero_tol()).collect();
        let prow: Vec<S> = nz.iter().map(|&j| self.data[row_start + j].clone()).collect();
        for i in 0..self.rows {
            if i == p {
                continue;
            }
            let f = self.data[i * w + e].clone();
            if f.is_zero_tol() {
                // snap float dust so it cannot be picked as a pivot later
                self.data[i * w + e] = S::zero();
                continue;
            }
            for (k, &j) in nz.iter().enumerate() {
                self.data[i * w + j].sub_mul(&f, &prow[k]);
            }
            self.data[i * w + e] = S::zero();
        }
        let f = self.reduced[e].clone();
        if !f.is_zero_tol() {
            for (k, &j) in nz.iter().enumerate() {
                self.reduced[j].sub_mul(&f, &prow[k]);
            }
        }
        self.reduced[e] = S::zero();
        self.basis[p] = e;
        self.pivots += 1;
    }

    /// Bland's rule: lowest-index improving column, ratio ties to the lowest basic index.
    fn run(&mut self, allow: impl Fn(ColKind) -> bool) -> Outcome {
        loop {
            if self.pivots >= ITERATION_CAP {
                return Outcome::IterationLimit;
            }
            let entering = (0..self.cols).find(|&j| allow(self.kinds[j]) && self.reduced[j].is_pos());
            let Some(e) = entering else {
                return Outcome::Optimal;
            };
            let mut best: Option<(usize, S)> = None;
            for i in 0..self.rows {
                let a = self.at(i, e);
                if !a.is_pos() {
                    continue;
                }
                let ratio = self.rhs(i).div(a);
                best = match best {
                    None => Some((i, ratio)),
                    Some((bi, br)) => {
                        let diff = {
                            let mut d = ratio.clone();
                            d.sub_mul(&S::one(), &br);
                            d
                        };
                        if diff.is_neg() || (diff.is_zero_tol() && self.basis[i] < self.basis[bi]) {
                            Some((i, ratio))
                        } else {
                            Some((bi, br))
                        }
                    }
                };
            }
            match best {
                None => return Outcome::Unbounded,
                Some((p, _)) => self.pivot(p, e),
            }
        }
    }

    fn set_objective(&mut self, costs: &[S]) {
        let w = self.cols + 1;
        let mut reduced: Vec<S> = costs.to_vec();
        reduced.push(S::zero());
        for i in 0..self.rows {
            let cb = costs[self.basis[i]].clone();
            if cb.is_zero_tol() {
                continue;
            }
            for j in 0..w {
                let a = self.data[i * w + j].clone();
                reduced[j].sub_mul(&cb, &a);
            }
        }
        self.reduced = reduced;
    }

    fn value(&self) -> S {
        self.reduced[self.cols].neg()
    }
}

fn solve_dense<S: LpScalar>(lp: &LinearProgram, mode: SolveMode) -> Result<LpSolution> {
    let n = lp.n_vars();

    // shift x = lo + y, y >= 0; finite upper bounds become rows
    struct Row<S> {
        terms: Vec<(usize, S)>,
        rel: Relation,
        rhs: S,
        sign: i8,
    }
    let mut rows: Vec<Row<S>> = Vec::new();
    for c in &lp.constraints {
        let shift: Rational = c.terms.iter().map(|(j, a)| a * &lp.bounds[*j].lo).sum();
        let rhs = &c.rhs - shift;
        let flip = rhs.is_negative();
        let terms = c
            .terms
            .iter()
            .map(|(j, a)| (*j, S::from_rational(&if flip { -a.clone() } else { a.clone() })))
            .collect();
        let rel = match (c.relation, flip) {
            (r, false) => r,
            (Relation::Le, true) => Relation::Ge,
            (Relation::Ge, true) => Relation::Le,
            (Relation::Eq, true) => Relation::Eq,
        };
        rows.push(Row { terms, rel, rhs: S::from_rational(&rhs.abs()), sign: if flip { -1 } else { 1 } });
    }
    let n_user_rows = rows.len();
    for (j, b) in lp.bounds.iter().enumerate() {
        if let Some(hi) = &b.hi {
            rows.push(Row { terms: vec![(j, S::one())], rel: Relation::Le, rhs: S::from_rational(&(hi - &b.lo)), sign: 1 });
        }
    }

    let m = rows.len();
    let mut kinds = vec![ColKind::Structural; n];
    let mut identity_col = vec![0usize; m];
    let mut surplus_col = vec![None; m];
    for (i, r) in rows.iter().enumerate() {
        match r.rel {
            Relation::Le => {
                identity_col[i] = kinds.len();
                kinds.push(ColKind::Slack);
            }
            Relation::Ge => {
                surplus_col[i] = Some(kinds.len());
                kinds.push(ColKind::Slack);
                identity_col[i] = kinds.len();
                kinds.push(ColKind::Artificial);
            }
            Relation::Eq => {
                identity_col[i] = kinds.len();
                kinds.push(ColKind::Artificial);
            }
        }
    }
    let cols = kinds.len();
    let w = cols + 1;
    let mut data = vec![S::zero(); m * w];
    for (i, r) in rows.iter().enumerate() {
        for (j, a) in &r.terms {
            data[i * w + j].add_assign(a);
        }
        data[i * w + identity_col[i]] = S::one();
        if let Some(s) = surplus_col[i] {
            data[i * w + s] = S::one().neg();
        }
        data[i * w + cols] = r.rhs.clone();
    }
    let mut tab = Tableau { rows: m, cols, data, reduced: Vec::new(), basis: identity_col.clone(), kinds, pivots: 0 };

    // phase 1: maximize -(sum of artificials)
    let has_artificials = tab.kinds.contains(&ColKind::Artificial);
    if has_artificials {
        let phase1: Vec<S> = tab
            .kinds
            .iter()
            .map(|k| if *k == ColKind::Artificial { S::one().neg() } else { S::zero() })
            .collect();
        tab.set_objective(&phase1);
        match tab.run(|_| true) {
            Outcome::IterationLimit => return Ok(LpSolution::without_optimum(LpStatus::IterationLimit, mode, tab.pivots)),
            Outcome::Unbounded => return Err(Error::Numerical("phase 1 reported unbounded".into())),
            Outcome::Optimal => {}
        }
        if tab.value().is_neg() {
            return Ok(LpSolution::without_optimum(LpStatus::Infeasible, mode, tab.pivots));
        }
        // drive remaining artificials out of the basis; all-zero rows are redundant and stay put
        for i in 0..m {
            if tab.kinds[tab.basis[i]] != ColKind::Artificial {
                continue;
            }
            if let Some(j) = (0..cols).find(|&j| tab.kinds[j] != ColKind::Artificial && !tab.at(i, j).is_zero_tol()) {
                tab.pivot(i, j);
            }
        }
    }

    // phase 2
    let mut costs = vec![S::zero(); cols];
    for j in 0..n {
        costs[j] = S::from_rational(&lp.objective[j]);
    }
    tab.set_objective(&costs);
    match tab.run(|k| k != ColKind::Artificial) {
        Outcome::IterationLimit => return Ok(LpSolution::without_optimum(LpStatus::IterationLimit, mode, tab.pivots)),
        Outcome::Unbounded => return Ok(LpSolution::without_optimum(LpStatus::Unbounded, mode, tab.pivots)),
        Outcome::Optimal => {}
    }

    let mut y = vec![S::zero(); cols];
    for i in 0..m {
        y[tab.basis[i]] = tab.rhs(i).clone();
    }
    let assignment: Vec<Rational> = (0..n)
        .map(|j| {
            let v = y[j].to_rational();
            let v = if mode == SolveMode::Exact || !y[j].is_zero_tol() { v } else { num::zero() };
            &lp.bounds[j].lo + v
        })
        .collect();
    let value = lp.objective_at(&assignment);

    let row_duals: Vec<Rational> = (0..n_user_rows)
        .map(|i| {
            let d = tab.reduced[identity_col[i]].neg().to_rational();
            if rows[i].sign < 0 {
                -d
            } else {
                d
            }
        })
        .collect();
    let tol = match mode {
        SolveMode::Exact => num::zero(),
        _ => num::from_f64(FLOAT_TOL * 10.0)?,
    };
    let bound = verify_certificate(lp, &row_duals, &tol)?;
    let scale = num::one() + value.abs();
    if (&bound - &value).abs() > &tol * &scale {
        return Err(Error::Numerical(format!(
            "dual bound {} differs from primal value {}",
            num::to_f64(&bound),
            num::to_f64(&value)
        )));
    }
    let violation = lp.max_violation(&assignment);
    if violation > tol * scale {
        return Err(Error::Numerical(format!("primal violation {}", num::to_f64(&violation))));
    }

    Ok(LpSolution {
        status: LpStatus::Optimal,
        mode,
        value,
        assignment,
        certificate: Some(DualCertificate { row_duals, bound }),
        pivots: tab.pivots,
    })
}

/// Checks the dual sign conditions and returns the weak-duality bound
/// `b.y + sum_j max(d_j * hi_j, d_j * lo_j)` with `d = c - A^T y`.
pub fn verify_certificate(lp: &LinearProgram, row_duals: &[Rational], tol: &Rational) -> Result<Rational> {
    if row_duals.len() != lp.constraints.len() {
        return Err(Error::Structural("one dual per constraint expected".into()));
    }
    let mut reduced = lp.objective.clone();
    let mut bound = num::zero();
    for (c, yi) in lp.constraints.iter().zip(row_duals) {
        let sign_ok = match c.relation {
            Relation::Le => *yi >= -tol.clone(),
            Relation::Ge => *yi <= tol.clone(),
            Relation::Eq => true,
        };
        if !sign_ok {
            return Err(Error::Numerical(format!("dual sign violated on a {:?} row", c.relation)));
        }
        if yi.is_zero() {
            continue;
        }
        bound += &c.rhs * yi;
        for (j, a) in &c.terms {
            reduced[*j] -= a * yi;
        }
    }
    for (j, d) in reduced.iter().enumerate() {
        let b = &lp.bounds[j];
        if d.is_positive() {
            match &b.hi {
                Some(hi) => bound += d * hi,
                None if d <= tol => {}
                None => return Err(Error::Numerical(format!("dual infeasible at unbounded variable {j}"))),
            }
        } else {
            bound += d * &b.lo;
        }
    }
    Ok(bound)
}

fn solve_sparse(lp: &LinearProgram) -> Result<LpSolution> {
    use microlp::{ComparisonOp, OptimizationDirection, Problem};
    let mut problem = Problem::new(OptimizationDirection::Maximize);
    let vars: Vec<_> = (0..lp.n_vars())
        .map(|j| {
            let b = &lp.bounds[j];
            let hi = b.hi.as_ref().map(num::to_f64).unwrap_or(f64::INFINITY);
            problem.add_var(num::to_f64(&lp.objective[j]), (num::to_f64(&b.lo), hi))
        })
        .collect();
    for c in &lp.constraints {
        let expr: Vec<_> = c.terms.iter().map(|(j, a)| (vars[*j], a.to_f64().unwrap_or(f64::NAN))).collect();
        let op = match c.relation {
            Relation::Le => ComparisonOp::Le,
            Relation::Eq => ComparisonOp::Eq,
            Relation::Ge => ComparisonOp::Ge,
        };
        problem.add_constraint(expr.as_slice(), op, num::to_f64(&c.rhs));
    }
    match problem.solve() {
        Ok(outcome) => {
            let sol = outcome
                .solution()
                .ok_or_else(|| Error::Numerical("sparse solver stopped without a solution".into()))?;
            let assignment: Vec<Rational> = vars
                .iter()
                .map(|v| {
                    let x = sol.var_value(*v);
                    num::from_f64(if x.abs() < FLOAT_EPS { 0.0 } else { x })
                })
                .collect::<Result<_>>()?;
            let value = lp.objective_at(&assignment);
            let scale = 1.0 + num::to_f64(&value).abs();
            let violation = num::to_f64(&lp.max_violation(&assignment));
            if violation > 1e-7 * scale {
                return Err(Error::Numerical(format!("sparse solve violates constraints by {violation}")));
            }
            Ok(LpSolution { status: LpStatus::Optimal, mode: SolveMode::Sparse, value, assignment, certificate: None, pivots: 0 })
        }
        Err(microlp::Error::Infeasible) => Ok(LpSolution::without_optimum(LpStatus::Infeasible, SolveMode::Sparse, 0)),
        Err(microlp::Error::Unbounded) => Ok(LpSolution::without_optimum(LpStatus::Unbounded, SolveMode::Sparse, 0)),
        Err(e) => Err(Error::Numerical(format!("sparse solver: {e}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{int, ratio};

    fn r(v: i64) -> Rational {
        int(v)
    }

    #[test]
    fn textbook_sum_capped_at_one() {
        let lp = LinearProgram::from_dense(vec![r(1), r(1)], vec![(vec![r(1), r(1)], Relation::Le, r(1))]).unwrap();
        for mode in [SolveMode::Exact, SolveMode::Float, SolveMode::Sparse] {
            let sol = solve_lp(&lp, mode).unwrap();
            assert_eq!(sol.status, LpStatus::Optimal);
            assert!((sol.value_f64() - 1.0).abs() < 1e-9, "{mode:?}");
        }
        assert_eq!(solve_lp(&lp, SolveMode::Exact).unwrap().value, r(1));
    }

    #[test]
    fn infeasible_system() {
        let lp = LinearProgram::from_dense(vec![r(1)], vec![(vec![r(1)], Relation::Le, r(-1))]).unwrap();
        for mode in [SolveMode::Exact, SolveMode::Float, SolveMode::Sparse] {
            assert_eq!(solve_lp(&lp, mode).unwrap().status, LpStatus::Infeasible, "{mode:?}");
        }
    }

    #[test]
    fn unbounded_ray() {
        let lp = LinearProgram::from_dense(vec![r(1), r(0)], vec![(vec![r(1), r(-1)], Relation::Le, r(2))]).unwrap();
        assert_eq!(solve_lp(&lp, SolveMode::Exact).unwrap().status, LpStatus::Unbounded);
        assert_eq!(solve_lp(&lp, SolveMode::Float).unwrap().status, LpStatus::Unbounded);
    }

    #[test]
    fn dimension_mismatch_is_structural() {
        let err = LinearProgram::from_dense(vec![r(1), r(1)], vec![(vec![r(1)], Relation::Le, r(1))]).unwrap_err();
        assert!(matches!(err, Error::Structural(_)));
        let mut lp = LinearProgram::new(1);
        lp.add_constraint(vec![(3, r(1))], Relation::Le, r(1));
        assert!(matches!(solve_lp(&lp, SolveMode::Exact), Err(Error::Structural(_))));
    }

    #[test]
    fn equality_and_bounds_exact() {
        // max 3x + 2y, x + y = 4, x <= 3 (bound), y >= 1/2 (bound)
        let mut lp = LinearProgram::from_dense(vec![r(3), r(2)], vec![(vec![r(1), r(1)], Relation::Eq, r(4))]).unwrap();
        lp.bounds[0].hi = Some(r(3));
        lp.bounds[1].lo = ratio(1, 2);
        let sol = solve_lp(&lp, SolveMode::Exact).unwrap();
        assert_eq!(sol.value, r(11));
        assert_eq!(sol.assignment, vec![r(3), r(1)]);
        let cert = sol.certificate.unwrap();
        assert_eq!(cert.bound, r(11));
    }

    #[test]
    fn ge_rows_and_negative_rhs() {
        // max -x - y s.t. x + 2y >= 3, -x <= -1  => x >= 1; optimum x=1,y=1: -2
        let lp = LinearProgram::from_dense(
            vec![r(-1), r(-1)],
            vec![(vec![r(1), r(2)], Relation::Ge, r(3)), (vec![r(-1), r(0)], Relation::Le, r(-1))],
        )
        .unwrap();
        let sol = solve_lp(&lp, SolveMode::Exact).unwrap();
        assert_eq!(sol.value, r(-2));
        let f = solve_lp(&lp, SolveMode::Float).unwrap();
        assert!((f.value_f64() + 2.0).abs() < 1e-9);
    }

    #[test]
    fn redundant_equalities() {
        let lp = LinearProgram::from_dense(
            vec![r(1), r(1)],
            vec![
                (vec![r(1), r(1)], Relation::Eq, r(1)),
                (vec![r(2), r(2)], Relation::Eq, r(2)),
                (vec![r(1), r(0)], Relation::Le, ratio(1, 3)),
            ],
        )
        .unwrap();
        let sol = solve_lp(&lp, SolveMode::Exact).unwrap();
        assert_eq!(sol.value, r(1));
    }

    #[test]
    fn degenerate_cycling_example_terminates() {
        // Beale's example, cycles under the largest-coefficient rule
        let lp = LinearProgram::from_dense(
            vec![ratio(3, 4), r(-150), ratio(1, 50), r(-6)],
            vec![
                (vec![ratio(1, 4), r(-60), ratio(-1, 25), r(9)], Relation::Le, r(0)),
                (vec![ratio(1, 2), r(-90), ratio(-1, 50), r(3)], Relation::Le, r(0)),
                (vec![r(0), r(0), r(1), r(0)], Relation::Le, r(1)),
            ],
        )
        .unwrap();
        let sol = solve_lp(&lp, SolveMode::Exact).unwrap();
        assert_eq!(sol.value, ratio(1, 20));
        let f = solve_lp(&lp, SolveMode::Float).unwrap();
        assert!((f.value_f64() - 0.05).abs() < 1e-9);
    }

    #[test]
    fn certificate_rejects_wrong_signs() {
        let lp = LinearProgram::from_dense(vec![r(1)], vec![(vec![r(1)], Relation::Le, r(1))]).unwrap();
        assert!(verify_certificate(&lp, &[r(-1)], &num::zero()).is_err());
        assert_eq!(verify_certificate(&lp, &[r(1)], &num::zero()).unwrap(), r(1));
        assert_eq!(verify_certificate(&lp, &[r(2)], &num::zero()).unwrap(), r(2));
    }
}
