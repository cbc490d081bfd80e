//! Optimal binary-approval mechanisms for a continuum of types.
//!
//! Types are natural scores `t` on `[s_min, s_max]`; approving type `t` is
//! worth `t` to the designer and `1` to the agent, who may submit any score
//! `a` at cost `c_raw(a, t) / gamma`.

use serde::Serialize;

use crate::continuous::distribution::Distribution;
use crate::continuous::numerics::{adaptive_simpson, bisect, linspace, QUAD_TOL, ROOT_TOL};
use crate::error::{Error, Result};
use crate::model::{CostFamily, CostModel};

/// Hazard-rate grid spacing used by [`check_mhr`].
pub const MHR_STEP: f64 = 1e-3;
pub const MHR_SLOPE_TOL: f64 = -1e-8;

/// Nodes in the cumulative table behind `int_t^{s_max} C`.
const CUMULATIVE_NODES: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    FirstBest,
    Interior,
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Regime::FirstBest => "first_best",
            Regime::Interior => "interior",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MhrReport {
    pub passes: bool,
    pub min_hazard_slope: f64,
    /// Minimum over the grid of `2 + f'(t)(1 - F(t)) / f(t)^2`.
    pub min_sufficient_quantity: f64,
}

/// One row of the exported solution table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolutionSample {
    pub t: f64,
    pub a_star: f64,
    pub q_star: f64,
    pub c: f64,
    pub u: f64,
    pub cost: f64,
}

#[derive(Debug, Clone)]
pub struct ContinuousSolution {
    pub regime: Regime,
    pub family: CostFamily,
    pub gamma: f64,
    pub t0: f64,
    pub t_star: f64,
    pub t_dagger: Option<f64>,
    pub p_star: f64,
    /// Score every type in `[0, target)` falsifies to under the first best.
    pub first_best_target: Option<f64>,
    dist: Distribution,
    /// `int_{nodes[i]}^{s_max} C` on `[t_star, t_dagger]` (quadratic interior only).
    tail: Option<Cumulative>,
}

#[derive(Debug, Clone)]
struct Cumulative {
    nodes: Vec<f64>,
    upper: Vec<f64>,
}

/// `t0` with `int_{t0}^{s_max} z f(z) dz = 0`.
pub fn compute_t0(dist: &Distribution) -> Result<f64> {
    let (lo, hi) = dist.support();
    if !(lo < 0.0 && 0.0 < hi) {
        return Err(Error::InputAssumption(format!("support [{lo}, {hi}] must straddle 0")));
    }
    let mean = dist.mean();
    if mean >= 0.0 {
        return Err(Error::InputAssumption(format!("mean {mean} is not negative")));
    }
    let t0 = bisect(|t| dist.upper_moment(t), lo, 0.0, 1e-15 * (hi - lo), 0.0)?;
    let g = dist.upper_moment(t0);
    if g.abs() > ROOT_TOL {
        return Err(Error::Numerical(format!("t0 residual {g} exceeds {ROOT_TOL}")));
    }
    Ok(t0)
}

/// First-best threshold: `gamma <= c_raw(s_max, 0)`, equality included.
pub fn is_first_best(family: CostFamily, gamma: f64, s_max: f64) -> bool {
    gamma <= family.raw(s_max, 0.0)
}

fn parametric(costs: &CostModel) -> Result<(CostFamily, f64)> {
    let (family, gamma) = costs
        .family()
        .ok_or_else(|| Error::Precondition("continuous solvers need a linear or quadratic cost".into()))?;
    if !(gamma.is_finite() && gamma > 0.0) {
        return Err(Error::Precondition(format!("gamma must be positive, got {gamma}")));
    }
    Ok((family, gamma))
}

/// The first-best solution when falsification is too expensive to stop it, `None` otherwise.
pub fn solve_first_best(dist: &Distribution, costs: &CostModel) -> Result<Option<ContinuousSolution>> {
    let (family, gamma) = parametric(costs)?;
    let (_, hi) = dist.support();
    if !is_first_best(family, gamma, hi) {
        return Ok(None);
    }
    let target = match family {
        CostFamily::Linear => gamma,
        CostFamily::Quadratic => gamma.sqrt(),
    };
    Ok(Some(ContinuousSolution {
        regime: Regime::FirstBest,
        family,
        gamma,
        t0: compute_t0(dist)?,
        t_star: 0.0,
        t_dagger: None,
        p_star: 1.0,
        first_best_target: Some(target.min(hi)),
        dist: dist.clone(),
        tail: None,
    }))
}

pub fn solve_linear(dist: &Distribution, gamma: f64) -> Result<ContinuousSolution> {
    let (_, hi) = dist.support();
    if !(gamma.is_finite() && gamma > 0.0) {
        return Err(Error::Precondition(format!("gamma must be positive, got {gamma}")));
    }
    if is_first_best(CostFamily::Linear, gamma, hi) {
        return Err(Error::Regime(format!("gamma = {gamma} <= s_max = {hi}: first best is attainable")));
    }
    let t0 = compute_t0(dist)?;
    let (p_star, t_star) = if hi - t0 <= gamma { ((hi - t0) / gamma, t0) } else { (1.0, hi - gamma) };
    Ok(ContinuousSolution {
        regime: Regime::Interior,
        family: CostFamily::Linear,
        gamma,
        t0,
        t_star,
        t_dagger: None,
        p_star,
        first_best_target: None,
        dist: dist.clone(),
        tail: None,
    })
}

/// Pointwise optimal target of the relaxed quadratic problem, `t - M(t) / (t f(t))`.
pub fn quadratic_target(dist: &Distribution, t: f64) -> f64 {
    t - dist.upper_moment(t) / (t * dist.pdf(t))
}

pub fn solve_quadratic(dist: &Distribution, gamma: f64) -> Result<ContinuousSolution> {
    let (lo, hi) = dist.support();
    if !(gamma.is_finite() && gamma > 0.0) {
        return Err(Error::Precondition(format!("gamma must be positive, got {gamma}")));
    }
    if is_first_best(CostFamily::Quadratic, gamma, hi) {
        return Err(Error::Regime(format!("gamma = {gamma} <= s_max^2 = {}: first best is attainable", hi * hi)));
    }
    let mhr = check_mhr(dist);
    if !mhr.passes {
        return Err(Error::MonotonicityUnverified(format!(
            "hazard rate decreases somewhere (min slope {})",
            mhr.min_hazard_slope
        )));
    }
    let t0 = compute_t0(dist)?;
    let raw_dagger = find_t_dagger(dist, t0)?;

    let mut sol = ContinuousSolution {
        regime: Regime::Interior,
        family: CostFamily::Quadratic,
        gamma,
        t0,
        t_star: t0,
        t_dagger: Some(raw_dagger),
        p_star: 0.0,
        first_best_target: None,
        dist: dist.clone(),
        tail: None,
    };
    sol.tail = Some(sol.build_tail(t0, raw_dagger));
    let candidate = sol.integral_c(t0);
    if candidate <= 1.0 {
        sol.p_star = candidate;
    } else {
        sol.p_star = 1.0;
        let t_star = bisect(|t| sol.integral_c(t) - 1.0, t0, hi, ROOT_TOL, 0.0)?;
        sol.t_star = t_star;
        // types above t_dagger already submit s_max, so the cap never sits below t_star
        sol.t_dagger = Some(raw_dagger.max(t_star));
        sol.tail = Some(sol.build_tail(t_star, raw_dagger.max(t_star)));
    }
    debug_assert!(lo <= sol.t0 && sol.t0 <= sol.t_star);
    Ok(sol)
}

/// Root of `a*(t) = s_max` on `(t0, 0)`.
fn find_t_dagger(dist: &Distribution, t0: f64) -> Result<f64> {
    let (_, hi) = dist.support();
    let g = |t: f64| quadratic_target(dist, t) - hi;
    let mut right = -1e-9 * (hi - t0).max(1.0);
    while !(g(right) > 0.0) {
        right *= 1e-2;
        if right.abs() < 1e-300 {
            return Err(Error::Structural("optimal target never reaches s_max below 0".into()));
        }
    }
    // a* must be nondecreasing for the bracket to isolate a single root
    let probe = linspace(t0, right, 65);
    let vals: Vec<f64> = probe.iter().map(|&t| quadratic_target(dist, t)).collect();
    if vals.windows(2).any(|w| w[1] < w[0] - 1e-9 * w[0].abs().max(1.0)) {
        return Err(Error::Numerical("optimal target is not monotone on the t_dagger bracket".into()));
    }
    let root = bisect(g, t0, right, ROOT_TOL, 0.0)
        .map_err(|_| Error::Structural("no root of a*(t) = s_max in (t0, 0)".into()))?;
    assert!(root < 0.0, "t_dagger must lie below 0");
    Ok(root)
}

/// Decides the regime and dispatches to the matching solver.
pub fn solve(dist: &Distribution, costs: &CostModel) -> Result<ContinuousSolution> {
    if let Some(fb) = solve_first_best(dist, costs)? {
        return Ok(fb);
    }
    let (family, gamma) = parametric(costs)?;
    match family {
        CostFamily::Linear => solve_linear(dist, gamma),
        CostFamily::Quadratic => solve_quadratic(dist, gamma),
    }
}

/// Hazard-rate monotonicity on a `1e-3` grid.
pub fn check_mhr(dist: &Distribution) -> MhrReport {
    let (lo, hi) = dist.support();
    let n = ((hi - lo) / MHR_STEP).floor() as usize;
    let grid: Vec<f64> = (0..n).map(|i| lo + i as f64 * MHR_STEP).filter(|&t| t < hi - 0.5 * MHR_STEP).collect();
    let hazard: Vec<f64> = grid.iter().map(|&t| dist.hazard(t)).collect();
    let min_hazard_slope = grid
        .windows(2)
        .zip(hazard.windows(2))
        .map(|(t, h)| (h[1] - h[0]) / (t[1] - t[0]))
        .fold(f64::INFINITY, f64::min);
    let min_sufficient_quantity = grid
        .iter()
        .map(|&t| {
            let f = dist.pdf(t);
            2.0 + dist.pdf_derivative(t) * dist.survival(t) / (f * f)
        })
        .fold(f64::INFINITY, f64::min);
    MhrReport {
        passes: min_hazard_slope >= MHR_SLOPE_TOL && min_hazard_slope.is_finite() || grid.len() < 2,
        min_hazard_slope,
        min_sufficient_quantity,
    }
}

impl ContinuousSolution {
    pub fn distribution(&self) -> &Distribution {
        &self.dist
    }

    pub fn s_max(&self) -> f64 {
        self.dist.support().1
    }

    pub fn s_min(&self) -> f64 {
        self.dist.support().0
    }

    /// Agent-side cost `c(a, t)` in gamma-scaled units.
    pub fn cost_of(&self, a: f64, t: f64) -> f64 {
        self.family.raw(a, t) / self.gamma
    }

    /// Recommended score.
    pub fn a_star(&self, t: f64) -> f64 {
        let hi = self.s_max();
        match (self.regime, self.family) {
            (Regime::FirstBest, _) => {
                let target = self.first_best_target.unwrap_or(hi);
                if (0.0..target).contains(&t) {
                    target
                } else {
                    t
                }
            }
            (Regime::Interior, CostFamily::Linear) => {
                if t >= 0.0 {
                    hi
                } else {
                    t
                }
            }
            (Regime::Interior, CostFamily::Quadratic) => {
                let dagger = self.t_dagger.unwrap_or(hi);
                if t < self.t_star {
                    t
                } else if t >= dagger {
                    hi
                } else {
                    quadratic_target(&self.dist, t).min(hi)
                }
            }
        }
    }

    /// Falsification cost paid by type `t` when obeying.
    pub fn cost(&self, t: f64) -> f64 {
        self.cost_of(self.a_star(t), t)
    }

    /// Envelope derivative `C(t) = -d/dt c(a*(t), t)`, zero below `t_star`.
    pub fn envelope(&self, t: f64) -> f64 {
        if t < self.t_star {
            return 0.0;
        }
        match (self.regime, self.family) {
            (Regime::Interior, CostFamily::Linear) => 1.0 / self.gamma,
            (Regime::FirstBest, CostFamily::Linear) => {
                if self.a_star(t) > t {
                    1.0 / self.gamma
                } else {
                    0.0
                }
            }
            (_, CostFamily::Quadratic) => 2.0 * (self.a_star(t) - t) / self.gamma,
        }
    }

    /// Envelope derivative under the modified cost `(a^2 - 2at)/gamma`; this is
    /// the quantity incentive compatibility needs to be nondecreasing.
    pub fn modified_envelope(&self, t: f64) -> f64 {
        match self.family {
            CostFamily::Linear => self.envelope(t),
            CostFamily::Quadratic => {
                if t < self.t_star {
                    0.0
                } else {
                    2.0 * self.a_star(t) / self.gamma
                }
            }
        }
    }

    /// `int_t^{s_max} C(z) dz`
    pub fn integral_c(&self, t: f64) -> f64 {
        let (lo, hi) = self.dist.support();
        let t = t.clamp(lo, hi).max(self.t_star);
        match (self.regime, self.family) {
            (Regime::Interior, CostFamily::Linear) => (hi - t) / self.gamma,
            (Regime::FirstBest, _) => {
                let target = self.first_best_target.unwrap_or(hi);
                if t >= target {
                    0.0
                } else {
                    self.cost_of(target, t)
                }
            }
            (Regime::Interior, CostFamily::Quadratic) => {
                let dagger = self.t_dagger.unwrap_or(hi);
                let top = (hi - t.max(dagger)).powi(2) / self.gamma;
                if t >= dagger {
                    return top;
                }
                match &self.tail {
                    Some(tab) if t >= tab.nodes[0] => {
                        let i = tab.nodes.partition_point(|&x| x <= t).clamp(1, tab.nodes.len() - 1);
                        tab.upper[i] + self.simpson_c(t, tab.nodes[i])
                    }
                    _ => top + self.simpson_c(t, dagger),
                }
            }
        }
    }

    fn simpson_c(&self, a: f64, b: f64) -> f64 {
        let g = |z: f64| 2.0 * (quadratic_target(&self.dist, z) - z) / self.gamma;
        adaptive_simpson(&g, a, b, QUAD_TOL * 1e-3)
    }

    fn build_tail(&self, from: f64, dagger: f64) -> Cumulative {
        let hi = self.s_max();
        let nodes = linspace(from, dagger, CUMULATIVE_NODES);
        let mut upper = vec![0.0; nodes.len()];
        if let Some(last) = upper.last_mut() {
            *last = (hi - dagger).powi(2) / self.gamma;
        }
        for i in (0..nodes.len().saturating_sub(1)).rev() {
            upper[i] = upper[i + 1] + self.simpson_c(nodes[i], nodes[i + 1]);
        }
        Cumulative { nodes, upper }
    }

    /// Equilibrium agent value `U(t)`.
    pub fn utility(&self, t: f64) -> f64 {
        if t < self.t_star {
            return 0.0;
        }
        match self.regime {
            Regime::FirstBest => 1.0 - self.cost(t),
            Regime::Interior => self.p_star - self.integral_c(t),
        }
    }

    /// Interim approval probability `Q*(t)`.
    pub fn q_star(&self, t: f64) -> f64 {
        if t < self.t_star {
            return 0.0;
        }
        match (self.regime, self.family) {
            (Regime::FirstBest, _) => 1.0,
            (Regime::Interior, CostFamily::Linear) => {
                if t >= 0.0 {
                    self.p_star
                } else {
                    (self.p_star - (self.s_max() - t) / self.gamma).max(0.0)
                }
            }
            (Regime::Interior, CostFamily::Quadratic) => {
                if t >= self.t_dagger.unwrap_or(self.s_max()) {
                    self.p_star
                } else {
                    (self.utility(t) + self.cost(t)).clamp(0.0, 1.0)
                }
            }
        }
    }

    /// Designer value `int Q*(t) t dF(t)`.
    pub fn designer_value(&self) -> f64 {
        let (lo, hi) = self.dist.support();
        let mut cuts = vec![lo, hi, self.t_star.clamp(lo, hi), 0.0];
        cuts.extend(self.t_dagger.map(|d| d.clamp(lo, hi)));
        cuts.extend(self.first_best_target.map(|d| d.clamp(lo, hi)));
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        let g = |t: f64| self.q_star(t) * t * self.dist.pdf(t);
        cuts.windows(2)
            .filter(|w| w[1] > self.t_star)
            .map(|w| adaptive_simpson(&g, w[0].max(self.t_star), w[1], QUAD_TOL * 1e-2))
            .sum()
    }

    pub fn sample_at(&self, t: f64) -> SolutionSample {
        SolutionSample {
            t,
            a_star: self.a_star(t),
            q_star: self.q_star(t),
            c: self.envelope(t),
            u: self.utility(t),
            cost: self.cost(t),
        }
    }

    /// `n` evenly spaced samples across the support.
    pub fn sample(&self, n: usize) -> Vec<SolutionSample> {
        let (lo, hi) = self.dist.support();
        linspace(lo, hi, n).into_iter().map(|t| self.sample_at(t)).collect()
    }
}
