//! Deterministic minimization of convex functions from a subgradient oracle.
//!
//! Central-cut ellipsoid method with deep objective cuts; bisection in one
//! dimension. Every step yields the certified lower bound
//! `f(c) − √(gᵀAg)` on the minimum over the current ellipsoid, which drives
//! the stopping rule.

use crate::error::{Error, Result};

/// Oracle answer at a query point.
#[derive(Clone, Debug, PartialEq)]
pub enum Eval {
    Value { f: f64, g: Vec<f64> },
    /// Outside the domain: every admissible `x` has `cutᵀ(x − query) ≤ −depth`.
    Infeasible { cut: Vec<f64>, depth: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct MinimizeOptions {
    /// Target gap between the best value and the lower bound.
    pub tol: f64,
    pub max_iter: usize,
    /// Initial ball radius; default `2(1 + ‖x0‖)`.
    pub radius: Option<f64>,
    /// Initial axis-aligned semi-axes; overrides `radius`.
    pub semi_axes: Option<Vec<f64>>,
    /// Also require the search region to shrink below this size.
    pub step_tol: Option<f64>,
}

impl Default for MinimizeOptions {
    fn default() -> Self {
        MinimizeOptions { tol: 1e-8, max_iter: 20_000, radius: None, semi_axes: None, step_tol: None }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Minimum {
    /// Best feasible query point.
    pub x: Vec<f64>,
    pub value: f64,
    pub lower_bound: f64,
    pub iterations: usize,
    /// False when the iteration budget ran out first.
    pub converged: bool,
}

pub fn minimize_convex<F>(f: F, x0: &[f64], tol: f64, max_iter: usize) -> Result<Minimum>
where
    F: FnMut(&[f64]) -> Eval,
{
    minimize_convex_with(f, x0, &MinimizeOptions { tol, max_iter, ..MinimizeOptions::default() })
}

pub fn minimize_convex_with<F>(mut f: F, x0: &[f64], opts: &MinimizeOptions) -> Result<Minimum>
where
    F: FnMut(&[f64]) -> Eval,
{
    let n = x0.len();
    if n == 0 {
        return Err(Error::InvalidInput("empty starting point".into()));
    }
    if !(opts.tol > 0.0) {
        return Err(Error::InvalidInput("tolerance must be positive".into()));
    }
    let axes = match &opts.semi_axes {
        Some(a) if a.len() != n => return Err(Error::DimensionMismatch { expected: n, found: a.len() }),
        Some(a) => a.clone(),
        None => {
            let r = opts.radius.unwrap_or_else(|| 2.0 * (1.0 + x0.iter().map(|v| v * v).sum::<f64>().sqrt()));
            vec![r; n]
        }
    };
    if axes.iter().any(|a| !(*a > 0.0) || !a.is_finite()) {
        return Err(Error::InvalidInput("initial region must have positive finite size".into()));
    }
    let mut state = Ellipsoid::new(x0.to_vec(), &axes);
    let upper: Vec<f64> = x0.iter().zip(&axes).map(|(x, a)| x + a).collect();
    let lower_box: Vec<f64> = x0.iter().zip(&axes).map(|(x, a)| x - a).collect();
    let mut best: Option<(Vec<f64>, f64)> = None;
    let mut lower = f64::NEG_INFINITY;
    let mut iterations = 0;
    let mut converged = false;
    while iterations < opts.max_iter {
        iterations += 1;
        if let Some((g, depth)) = state.box_cut(&lower_box, &upper) {
            if !state.cut(&g, depth) {
                break;
            }
            continue;
        }
        let c = state.center().to_vec();
        let (g, depth) = match f(&c) {
            Eval::Infeasible { cut, depth } => (cut, depth.max(0.0)),
            Eval::Value { f: fc, g } => {
                if best.as_ref().map_or(true, |(_, b)| fc < *b) {
                    best = Some((c.clone(), fc));
                }
                let fb = best.as_ref().expect("just set").1;
                let width = state.width(&g);
                lower = lower.max(fc - width);
                if fb - lower <= opts.tol && state.size() <= opts.step_tol.unwrap_or(f64::INFINITY) {
                    converged = true;
                    break;
                }
                (g, fc - fb)
            }
        };
        if !state.cut(&g, depth) {
            // No admissible point with a smaller value remains.
            if let Some((_, fb)) = &best {
                lower = lower.max(*fb);
                converged = true;
            }
            break;
        }
    }
    match best {
        Some((x, value)) => Ok(Minimum { x, value, lower_bound: lower.min(value), iterations, converged }),
        None => Err(Error::InvalidInput("no point of the domain found".into())),
    }
}

/// `{c + Ju : ‖u‖ ≤ 1}`.
struct Ellipsoid {
    c: Vec<f64>,
    j: Vec<Vec<f64>>,
}

impl Ellipsoid {
    fn new(c: Vec<f64>, axes: &[f64]) -> Self {
        let n = c.len();
        let mut j = vec![vec![0.0; n]; n];
        for i in 0..n {
            j[i][i] = axes[i];
        }
        Ellipsoid { c, j }
    }

    fn center(&self) -> &[f64] {
        &self.c
    }

    /// `Jᵀg`.
    fn jt(&self, g: &[f64]) -> Vec<f64> {
        let n = self.c.len();
        (0..n).map(|k| (0..n).map(|i| self.j[i][k] * g[i]).sum()).collect()
    }

    /// `max over the ellipsoid of gᵀ(x − c)`.
    fn width(&self, g: &[f64]) -> f64 {
        self.jt(g).iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Upper bound on the longest semi-axis.
    fn size(&self) -> f64 {
        self.j.iter().flatten().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// A cut keeping the ellipsoid inside the initial box, when it removes volume.
    fn box_cut(&self, lo: &[f64], hi: &[f64]) -> Option<(Vec<f64>, f64)> {
        let n = self.c.len();
        let nf = n as f64;
        for i in 0..n {
            let w = self.j[i].iter().map(|v| v * v).sum::<f64>().sqrt();
            let mut g = vec![0.0; n];
            // Depth above −w/(2n) guarantees a definite volume reduction.
            if self.c[i] + w / (2.0 * nf) > hi[i] {
                g[i] = 1.0;
                return Some((g, self.c[i] - hi[i]));
            }
            if self.c[i] - w / (2.0 * nf) < lo[i] {
                g[i] = -1.0;
                return Some((g, lo[i] - self.c[i]));
            }
        }
        None
    }

    /// Keep `{x : gᵀ(x − c) ≤ −depth}`; false if that part is empty.
    fn cut(&mut self, g: &[f64], depth: f64) -> bool {
        let n = self.c.len();
        let nf = n as f64;
        let jg = self.jt(g);
        let s = jg.iter().map(|v| v * v).sum::<f64>().sqrt();
        if !(s > 0.0) || !s.is_finite() {
            return false;
        }
        let alpha = depth / s;
        if alpha >= 1.0 {
            return false;
        }
        if alpha <= -1.0 / nf {
            return true;
        }
        let p: Vec<f64> = jg.iter().map(|v| v / s).collect();
        let b: Vec<f64> = (0..n).map(|i| (0..n).map(|k| self.j[i][k] * p[k]).sum()).collect();
        if n == 1 {
            // Interval [c − r, c + r]; keep the side g·(x − c) ≤ −depth.
            let r = self.j[0][0].abs();
            let (lo, hi) = (self.c[0] - r, self.c[0] + r);
            let (lo, hi) = if g[0] > 0.0 { (lo, hi.min(self.c[0] - depth / g[0])) } else { (lo.max(self.c[0] + depth / -g[0]), hi) };
            self.c[0] = 0.5 * (lo + hi);
            self.j[0][0] = 0.5 * (hi - lo);
            return hi > lo;
        }
        let step = (1.0 + nf * alpha) / (nf + 1.0);
        for (ci, bi) in self.c.iter_mut().zip(&b) {
            *ci -= step * bi;
        }
        let sigma = (nf * nf / (nf * nf - 1.0) * (1.0 - alpha * alpha)).sqrt();
        let shrink = 2.0 * (1.0 + nf * alpha) / ((nf + 1.0) * (1.0 + alpha));
        let gamma = 1.0 - (1.0 - shrink).max(0.0).sqrt();
        for i in 0..n {
            for k in 0..n {
                self.j[i][k] = sigma * (self.j[i][k] - gamma * b[i] * p[k]);
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn norm(x: &[f64]) -> Eval {
        let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        let g = if r == 0.0 { vec![0.0; x.len()] } else { x.iter().map(|v| v / r).collect() };
        Eval::Value { f: r, g }
    }

    #[test]
    fn euclidean_norm() {
        let m = minimize_convex(norm, &[3.0, 4.0], 1e-8, 10_000).unwrap();
        assert!(m.converged);
        assert!(m.value <= 1e-8, "{}", m.value);
    }

    #[test]
    fn absolute_value() {
        let m = minimize_convex(|x| Eval::Value { f: (x[0] - 1.0).abs(), g: vec![(x[0] - 1.0).signum()] }, &[5.0], 1e-10, 1000)
            .unwrap();
        assert!(m.converged);
        assert!((m.x[0] - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn domain_cuts() {
        // min 1/x + x over x > 0, optimum 2 at 1.
        let f = |x: &[f64]| {
            if x[0] <= 0.0 {
                Eval::Infeasible { cut: vec![-1.0], depth: -x[0] }
            } else {
                Eval::Value { f: 1.0 / x[0] + x[0], g: vec![1.0 - 1.0 / (x[0] * x[0])] }
            }
        };
        let m = minimize_convex_with(f, &[-3.0], &MinimizeOptions { tol: 1e-12, radius: Some(10.0), ..Default::default() }).unwrap();
        assert!((m.value - 2.0).abs() <= 1e-12);
        assert!(m.lower_bound <= m.value);
    }

    #[test]
    fn lower_bound_is_valid() {
        // Piecewise-linear max of affine functions in 3-D; minimum 1 at (1, −2, 0.5).
        let t = [1.0, -2.0, 0.5];
        let f = |x: &[f64]| {
            let mut best = (f64::NEG_INFINITY, vec![]);
            for i in 0..3 {
                for s in [-1.0, 1.0] {
                    let v = 1.0 + s * (x[i] - t[i]);
                    if v > best.0 {
                        let mut g = vec![0.0; 3];
                        g[i] = s;
                        best = (v, g);
                    }
                }
            }
            Eval::Value { f: best.0, g: best.1 }
        };
        let m = minimize_convex(f, &[0.0, 0.0, 0.0], 1e-9, 10_000).unwrap();
        assert!(m.converged);
        assert!(m.lower_bound <= 1.0 + 1e-12 && m.value - 1.0 <= 1e-9);
    }
}
