//! Type distributions on `[s_min, s_max]`.
//!
//! Uniform, triangular and tabulated densities are all piecewise linear, so
//! their cdf and partial first moments are integrated exactly segment by
//! segment. The truncated exponential has closed forms.

use serde::{Deserialize, Serialize};

use crate::continuous::numerics::bisect;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DistributionSpec {
    Uniform { lo: f64, hi: f64 },
    /// Density proportional to `exp(-rate * t)` on `[lo, hi]`.
    TruncatedExponential { rate: f64, lo: f64, hi: f64 },
    Triangular { lo: f64, mode: f64, hi: f64 },
    /// Density values at increasing nodes, linearly interpolated.
    Tabulated { nodes: Vec<f64>, density: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq)]
enum Shape {
    PiecewiseLinear {
        xs: Vec<f64>,
        fs: Vec<f64>,
        /// cdf at each node
        cum: Vec<f64>,
        /// `int_{x_i}^{hi} z f(z) dz` at each node
        upper_moment: Vec<f64>,
        tabulated: bool,
    },
    TruncExp { rate: f64, norm: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    spec: DistributionSpec,
    lo: f64,
    hi: f64,
    shape: Shape,
}

impl Distribution {
    pub fn uniform(lo: f64, hi: f64) -> Result<Self> {
        Self::new(DistributionSpec::Uniform { lo, hi })
    }

    pub fn truncated_exponential(rate: f64, lo: f64, hi: f64) -> Result<Self> {
        Self::new(DistributionSpec::TruncatedExponential { rate, lo, hi })
    }

    pub fn triangular(lo: f64, mode: f64, hi: f64) -> Result<Self> {
        Self::new(DistributionSpec::Triangular { lo, mode, hi })
    }

    /// Tabulated density; values are rescaled to integrate to one.
    pub fn tabulated(nodes: Vec<f64>, density: Vec<f64>) -> Result<Self> {
        Self::new(DistributionSpec::Tabulated { nodes, density })
    }

    pub fn new(spec: DistributionSpec) -> Result<Self> {
        let bad = |m: &str| Error::Config(format!("invalid distribution: {m}"));
        let (lo, hi, shape) = match &spec {
            DistributionSpec::Uniform { lo, hi } => {
                check_interval(*lo, *hi)?;
                let h = 1.0 / (hi - lo);
                (*lo, *hi, piecewise(vec![*lo, *hi], vec![h, h], false))
            }
            DistributionSpec::Triangular { lo, mode, hi } => {
                check_interval(*lo, *hi)?;
                if !(lo <= mode && mode <= hi) {
                    return Err(bad("mode outside support"));
                }
                let h = 2.0 / (hi - lo);
                let (xs, fs) = if mode == lo {
                    (vec![*lo, *hi], vec![h, 0.0])
                } else if mode == hi {
                    (vec![*lo, *hi], vec![0.0, h])
                } else {
                    (vec![*lo, *mode, *hi], vec![0.0, h, 0.0])
                };
                (*lo, *hi, piecewise(xs, fs, false))
            }
            DistributionSpec::TruncatedExponential { rate, lo, hi } => {
                check_interval(*lo, *hi)?;
                if !rate.is_finite() || *rate == 0.0 {
                    return Err(bad("rate must be finite and nonzero"));
                }
                let norm = ((-rate * lo).exp() - (-rate * hi).exp()) / rate;
                (*lo, *hi, Shape::TruncExp { rate: *rate, norm })
            }
            DistributionSpec::Tabulated { nodes, density } => {
                if nodes.len() < 2 || nodes.len() != density.len() {
                    return Err(bad("need at least two nodes and one density value per node"));
                }
                if nodes.windows(2).any(|w| !(w[0] < w[1])) || nodes.iter().any(|x| !x.is_finite()) {
                    return Err(bad("nodes must be finite and strictly increasing"));
                }
                if density.iter().any(|f| !f.is_finite() || *f < 0.0) {
                    return Err(bad("density values must be finite and nonnegative"));
                }
                let mass: f64 = nodes.windows(2).zip(density.windows(2)).map(|(x, f)| 0.5 * (f[0] + f[1]) * (x[1] - x[0])).sum();
                if !(mass > 0.0) {
                    return Err(bad("density has zero mass"));
                }
                let fs = density.iter().map(|f| f / mass).collect();
                (nodes[0], *nodes.last().unwrap(), piecewise(nodes.clone(), fs, true))
            }
        };
        Ok(Distribution { spec, lo, hi, shape })
    }

    pub fn spec(&self) -> &DistributionSpec {
        &self.spec
    }

    /// `(s_min, s_max)`
    pub fn support(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    pub fn pdf(&self, t: f64) -> f64 {
        if t < self.lo || t > self.hi {
            return 0.0;
        }
        match &self.shape {
            Shape::PiecewiseLinear { xs, fs, .. } => {
                let i = segment(xs, t);
                let w = (t - xs[i]) / (xs[i + 1] - xs[i]);
                fs[i] + w * (fs[i + 1] - fs[i])
            }
            Shape::TruncExp { rate, norm } => (-rate * t).exp() / norm,
        }
    }

    /// `f'(t)`; central differences with step `1e-4 (s_max - s_min)` for tabulated densities.
    pub fn pdf_derivative(&self, t: f64) -> f64 {
        match &self.shape {
            Shape::PiecewiseLinear { xs, fs, tabulated, .. } => {
                if *tabulated {
                    let h = 1e-4 * (self.hi - self.lo);
                    let a = (t - h).max(self.lo);
                    let b = (t + h).min(self.hi);
                    (self.pdf(b) - self.pdf(a)) / (b - a)
                } else {
                    let i = segment(xs, t);
                    (fs[i + 1] - fs[i]) / (xs[i + 1] - xs[i])
                }
            }
            Shape::TruncExp { rate, .. } => -rate * self.pdf(t),
        }
    }

    pub fn cdf(&self, t: f64) -> f64 {
        if t <= self.lo {
            return 0.0;
        }
        if t >= self.hi {
            return 1.0;
        }
        match &self.shape {
            Shape::PiecewiseLinear { xs, fs, cum, .. } => {
                let i = segment(xs, t);
                cum[i] + seg_mass(xs[i], fs[i], xs[i + 1], fs[i + 1], xs[i], t)
            }
            Shape::TruncExp { rate, norm } => ((-rate * self.lo).exp() - (-rate * t).exp()) / (rate * norm),
        }
    }

    /// `int_t^{s_max} z f(z) dz`
    pub fn upper_moment(&self, t: f64) -> f64 {
        let t = t.clamp(self.lo, self.hi);
        match &self.shape {
            Shape::PiecewiseLinear { xs, fs, upper_moment, .. } => {
                let i = segment(xs, t);
                upper_moment[i + 1] + seg_moment(xs[i], fs[i], xs[i + 1], fs[i + 1], t, xs[i + 1])
            }
            Shape::TruncExp { rate, norm } => {
                // antiderivative of z e^{-rz}: -e^{-rz} (z/r + 1/r^2)
                let prim = |z: f64| -(-rate * z).exp() * (z / rate + 1.0 / (rate * rate));
                (prim(self.hi) - prim(t)) / norm
            }
        }
    }

    pub fn mean(&self) -> f64 {
        self.upper_moment(self.lo)
    }

    /// `1 - F(t)`, accumulated from the top so it stays accurate near `s_max`.
    pub fn survival(&self, t: f64) -> f64 {
        if t <= self.lo {
            return 1.0;
        }
        if t >= self.hi {
            return 0.0;
        }
        match &self.shape {
            Shape::PiecewiseLinear { xs, fs, cum, .. } => {
                let i = segment(xs, t);
                let total = *cum.last().unwrap();
                (total - cum[i + 1]) + seg_mass(xs[i], fs[i], xs[i + 1], fs[i + 1], t, xs[i + 1])
            }
            Shape::TruncExp { rate, norm } => ((-rate * t).exp() - (-rate * self.hi).exp()) / (rate * norm),
        }
    }

    /// Hazard rate `f / (1 - F)`.
    pub fn hazard(&self, t: f64) -> f64 {
        self.pdf(t) / self.survival(t)
    }

    /// Smallest `t` with `F(t) >= p`.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Precondition(format!("quantile level {p} outside [0,1]")));
        }
        if p <= 0.0 {
            return Ok(self.lo);
        }
        if p >= 1.0 {
            return Ok(self.hi);
        }
        if let DistributionSpec::Uniform { lo, hi } = self.spec {
            return Ok(lo + p * (hi - lo));
        }
        bisect(|t| self.cdf(t) - p, self.lo, self.hi, 1e-15 * (self.hi - self.lo), 0.0)
    }
}

fn check_interval(lo: f64, hi: f64) -> Result<()> {
    if lo.is_finite() && hi.is_finite() && lo < hi {
        Ok(())
    } else {
        Err(Error::Config(format!("invalid support [{lo}, {hi}]")))
    }
}

fn piecewise(xs: Vec<f64>, fs: Vec<f64>, tabulated: bool) -> Shape {
    let n = xs.len();
    let mut cum = vec![0.0; n];
    for i in 1..n {
        cum[i] = cum[i - 1] + seg_mass(xs[i - 1], fs[i - 1], xs[i], fs[i], xs[i - 1], xs[i]);
    }
    let mut upper_moment = vec![0.0; n];
    for i in (0..n - 1).rev() {
        upper_moment[i] = upper_moment[i + 1] + seg_moment(xs[i], fs[i], xs[i + 1], fs[i + 1], xs[i], xs[i + 1]);
    }
    Shape::PiecewiseLinear { xs, fs, cum, upper_moment, tabulated }
}

fn segment(xs: &[f64], t: f64) -> usize {
    match xs.partition_point(|&x| x <= t) {
        0 => 0,
        k => (k - 1).min(xs.len() - 2),
    }
}

/// `int_u^v f` for the linear piece through `(x0, f0)`, `(x1, f1)`.
fn seg_mass(x0: f64, f0: f64, x1: f64, f1: f64, u: f64, v: f64) -> f64 {
    let s = (f1 - f0) / (x1 - x0);
    f0 * (v - u) + 0.5 * s * ((v - x0).powi(2) - (u - x0).powi(2))
}

/// `int_u^v z f(z) dz` for the same linear piece.
fn seg_moment(x0: f64, f0: f64, x1: f64, f1: f64, u: f64, v: f64) -> f64 {
    let s = (f1 - f0) / (x1 - x0);
    let c = f0 - s * x0;
    0.5 * c * (v * v - u * u) + s * (v.powi(3) - u.powi(3)) / 3.0
}
