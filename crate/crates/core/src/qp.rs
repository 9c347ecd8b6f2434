//! Exact Euclidean projection onto a polytope.
//!
//! V-presented sets use Wolfe's minimum-norm-point iteration, H-presented
//! sets a primal active-set method started at a vertex. Both run over
//! rationals, so the returned squared distance and minimizer are exact.

use num_traits::{One, Signed, Zero};

use crate::error::{check_dim, Error, Result};
use crate::linalg::solve;
use crate::lp::{solve_lp, LPOutcome, LinearProgram};
use crate::point::{dot, Point};
use crate::polytope::{HPolytope, Polytope, VPolytope};
use crate::rational::Rational;
#[cfg(test)]
use crate::rational::to_f64;

/// Nearest-point problem `min ‖p − x‖² over p ∈ feasible`.
#[derive(Clone, Copy, Debug)]
pub struct QPNearest<'a> {
    pub target: &'a [Rational],
    pub feasible: &'a Polytope,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Nearest {
    pub value_sq: Rational,
    pub minimizer: Point,
    /// V-case: generating points carrying the minimizer, with convex weights.
    pub support: Vec<(usize, Rational)>,
    /// H-case: rows tight in the final working set.
    pub active_rows: Vec<usize>,
}

impl QPNearest<'_> {
    pub fn solve(&self) -> Result<Nearest> {
        solve_qp_nearest(self.target, self.feasible)
    }
}

pub fn solve_qp_nearest(target: &[Rational], feasible: &Polytope) -> Result<Nearest> {
    match feasible {
        Polytope::V(v) => nearest_v(target, v),
        Polytope::H(h) => nearest_h(target, h),
    }
}

/// Wolfe's minimum-norm point of `conv(vertices) − x`.
pub fn nearest_v(x: &[Rational], p: &VPolytope) -> Result<Nearest> {
    check_dim(p.dim(), x.len())?;
    let y: Vec<Vec<Rational>> = p
        .vertices()
        .iter()
        .map(|v| v.iter().zip(x).map(|(a, b)| a - b).collect())
        .collect();
    let norms: Vec<Rational> = y.iter().map(|v| dot(v, v)).collect();
    let start = (0..y.len()).min_by(|&a, &b| norms[a].cmp(&norms[b])).expect("nonempty");
    let mut corral = vec![start];
    let mut weights = vec![Rational::one()];
    let mut z = y[start].clone();
    let max_major = 50 * (y.len() + 1) * (x.len() + 1);
    for _ in 0..max_major {
        let zz = dot(&z, &z);
        let (j, best) = (0..y.len())
            .map(|j| (j, dot(&z, &y[j])))
            .min_by(|a, b| a.1.cmp(&b.1).then(a.0.cmp(&b.0)))
            .expect("nonempty");
        if zz <= best || corral.contains(&j) {
            let minimizer = Point::new(z.iter().zip(x).map(|(a, b)| a + b).collect());
            return Ok(Nearest {
                value_sq: zz,
                minimizer,
                support: corral.into_iter().zip(weights).collect(),
                active_rows: Vec::new(),
            });
        }
        corral.push(j);
        weights.push(Rational::zero());
        loop {
            let a = affine_minimizer(&y, &corral)
                .ok_or_else(|| Error::SelfCheck("affinely dependent corral in nearest-point iteration".into()))?;
            if a.iter().all(Signed::is_positive) {
                weights = a;
                break;
            }
            let mut theta: Option<Rational> = None;
            for (w, ai) in weights.iter().zip(&a) {
                if !ai.is_positive() {
                    let t = w / (w - ai);
                    if theta.as_ref().map_or(true, |th| t < *th) {
                        theta = Some(t);
                    }
                }
            }
            let theta = theta.expect("some coefficient is nonpositive");
            let one_minus = Rational::one() - &theta;
            for (w, ai) in weights.iter_mut().zip(&a) {
                *w = &theta * ai + &one_minus * &*w;
            }
            let mut k = 0;
            while k < corral.len() {
                if weights[k].is_positive() {
                    k += 1;
                } else {
                    corral.remove(k);
                    weights.remove(k);
                }
            }
        }
        z = combine(&y, &corral, &weights);
    }
    Err(Error::SelfCheck("nearest-point iteration did not terminate".into()))
}

fn combine(y: &[Vec<Rational>], idx: &[usize], w: &[Rational]) -> Vec<Rational> {
    let d = y[0].len();
    let mut z = vec![Rational::zero(); d];
    for (&i, wi) in idx.iter().zip(w) {
        for k in 0..d {
            z[k] += wi * &y[i][k];
        }
    }
    z
}

/// Coefficients `a` (summing to one) of the minimum-norm point of `aff{y_i : i ∈ idx}`.
fn affine_minimizer(y: &[Vec<Rational>], idx: &[usize]) -> Option<Vec<Rational>> {
    let k = idx.len();
    let mut m = vec![vec![Rational::zero(); k + 1]; k + 1];
    for a in 0..k {
        for b in a..k {
            let g = dot(&y[idx[a]], &y[idx[b]]);
            m[a][b] = g.clone();
            m[b][a] = g;
        }
        m[a][k] = Rational::one();
        m[k][a] = Rational::one();
    }
    let mut rhs = vec![Rational::zero(); k + 1];
    rhs[k] = Rational::one();
    let mut sol = solve(m, rhs)?;
    sol.truncate(k);
    Some(sol)
}

/// Primal active-set method for `min ½‖y − x‖²` subject to `Ay ≤ b`.
pub fn nearest_h(x: &[Rational], p: &HPolytope) -> Result<Nearest> {
    check_dim(p.dim(), x.len())?;
    if p.contains_point(x)? {
        return Ok(Nearest {
            value_sq: Rational::zero(),
            minimizer: Point::new(x.to_vec()),
            support: Vec::new(),
            active_rows: Vec::new(),
        });
    }
    let rows = p.rows();
    let d = p.dim();
    let mut lp = LinearProgram::new(d);
    for r in rows {
        lp.add_le(&r.a, r.b.clone());
    }
    let mut y = match solve_lp(&lp) {
        LPOutcome::Optimal { solution, .. } => solution.into_coords(),
        _ => return Err(Error::Empty),
    };
    let mut working: Vec<usize> = Vec::new();
    let max_iter = 100 * (rows.len() + d + 1);
    for _ in 0..max_iter {
        let k = working.len();
        let lambda = if k == 0 {
            Vec::new()
        } else {
            let g: Vec<Vec<Rational>> = working
                .iter()
                .map(|&i| working.iter().map(|&j| dot(&rows[i].a, &rows[j].a)).collect())
                .collect();
            let rhs: Vec<Rational> = working.iter().map(|&i| dot(&rows[i].a, x) - &rows[i].b).collect();
            solve(g, rhs).ok_or_else(|| Error::SelfCheck("dependent working set in projection".into()))?
        };
        let mut target: Vec<Rational> = x.to_vec();
        for (l, &i) in lambda.iter().zip(&working) {
            for (t, a) in target.iter_mut().zip(rows[i].a.iter()) {
                *t -= l * a;
            }
        }
        let step: Vec<Rational> = target.iter().zip(&y).map(|(a, b)| a - b).collect();
        if step.iter().all(Zero::is_zero) {
            let worst = lambda
                .iter()
                .enumerate()
                .filter(|(_, l)| l.is_negative())
                .min_by(|a, b| a.1.cmp(b.1).then(working[a.0].cmp(&working[b.0])));
            match worst {
                None => {
                    let value_sq = dot(&step_to(x, &y), &step_to(x, &y));
                    let mut active_rows = working;
                    active_rows.sort_unstable();
                    return Ok(Nearest {
                        value_sq,
                        minimizer: Point::new(y),
                        support: Vec::new(),
                        active_rows,
                    });
                }
                Some((pos, _)) => {
                    working.remove(pos);
                }
            }
            continue;
        }
        let mut t = Rational::one();
        let mut blocking: Option<usize> = None;
        for (i, r) in rows.iter().enumerate() {
            if working.contains(&i) {
                continue;
            }
            let ap = dot(&r.a, &step);
            if !ap.is_positive() {
                continue;
            }
            let ti = (&r.b - dot(&r.a, &y)) / ap;
            if ti < t || (ti == t && blocking.is_none()) {
                t = ti;
                blocking = Some(i);
            }
        }
        for (yi, si) in y.iter_mut().zip(&step) {
            *yi += &t * si;
        }
        if let Some(i) = blocking {
            working.push(i);
        }
    }
    Err(Error::SelfCheck("projection active-set iteration did not terminate".into()))
}

fn step_to(x: &[Rational], y: &[Rational]) -> Vec<Rational> {
    x.iter().zip(y).map(|(a, b)| a - b).collect()
}

/// Floating-point nearest point of `conv(points)` to `x`.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct NearestF64 {
    pub value_sq: f64,
    pub minimizer: Vec<f64>,
}

/// Wolfe's iteration in doubles with relative tolerances.
pub(crate) fn nearest_v_f64(x: &[f64], points: &[Vec<f64>]) -> NearestF64 {
    let y: Vec<Vec<f64>> = points.iter().map(|p| p.iter().zip(x).map(|(a, b)| a - b).collect()).collect();
    let dotf = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(u, v)| u * v).sum::<f64>();
    let norms: Vec<f64> = y.iter().map(|v| dotf(v, v)).collect();
    let scale = norms.iter().cloned().fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let start = (0..y.len()).min_by(|&a, &b| norms[a].total_cmp(&norms[b])).expect("nonempty");
    let mut corral = vec![start];
    let mut weights = vec![1.0];
    let mut z = y[start].clone();
    let eps = 1e-13;
    for _ in 0..50 * (y.len() + 1) * (x.len() + 1) {
        let zz = dotf(&z, &z);
        let (j, best) = (0..y.len())
            .map(|j| (j, dotf(&z, &y[j])))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("nonempty");
        if zz - best <= eps * scale || corral.contains(&j) {
            break;
        }
        corral.push(j);
        weights.push(0.0);
        loop {
            let Some(a) = affine_minimizer_f64(&y, &corral) else {
                corral.pop();
                weights.pop();
                return finish_f64(x, &y, &corral, &weights);
            };
            if a.iter().all(|v| *v > eps) {
                weights = a;
                break;
            }
            let mut theta = 1.0f64;
            for (w, ai) in weights.iter().zip(&a) {
                if *ai <= eps {
                    theta = theta.min(w / (w - ai));
                }
            }
            for (w, ai) in weights.iter_mut().zip(&a) {
                *w = theta * ai + (1.0 - theta) * *w;
            }
            let mut k = 0;
            while k < corral.len() {
                if weights[k] > eps {
                    k += 1;
                } else {
                    corral.remove(k);
                    weights.remove(k);
                }
            }
            let total: f64 = weights.iter().sum();
            weights.iter_mut().for_each(|w| *w /= total);
        }
        z = vec![0.0; x.len()];
        for (&i, w) in corral.iter().zip(&weights) {
            for (zk, yk) in z.iter_mut().zip(&y[i]) {
                *zk += w * yk;
            }
        }
    }
    finish_f64(x, &y, &corral, &weights)
}

fn finish_f64(x: &[f64], y: &[Vec<f64>], corral: &[usize], weights: &[f64]) -> NearestF64 {
    let mut z = vec![0.0; x.len()];
    for (&i, w) in corral.iter().zip(weights) {
        for (zk, yk) in z.iter_mut().zip(&y[i]) {
            *zk += w * yk;
        }
    }
    NearestF64 { value_sq: z.iter().map(|v| v * v).sum(), minimizer: z.iter().zip(x).map(|(a, b)| a + b).collect() }
}

fn affine_minimizer_f64(y: &[Vec<f64>], idx: &[usize]) -> Option<Vec<f64>> {
    let k = idx.len();
    let mut m = vec![vec![0.0; k + 2]; k + 1];
    for a in 0..k {
        for b in 0..k {
            m[a][b] = y[idx[a]].iter().zip(&y[idx[b]]).map(|(u, v)| u * v).sum();
        }
        m[a][k] = 1.0;
        m[k][a] = 1.0;
    }
    m[k][k + 1] = 1.0;
    let scale = (0..k).map(|a| m[a][a]).fold(1e-300, f64::max);
    for col in 0..=k {
        let p = (col..=k).max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))?;
        let pivot_scale = if col < k { scale } else { 1.0 };
        if m[p][col].abs() <= 1e-12 * pivot_scale {
            return None;
        }
        m.swap(col, p);
        for i in 0..=k {
            if i != col {
                let f = m[i][col] / m[col][col];
                if f != 0.0 {
                    for j in col..k + 2 {
                        m[i][j] -= f * m[col][j];
                    }
                }
            }
        }
    }
    Some((0..k).map(|i| m[i][k + 1] / m[i][i]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn projection_examples() {
        let sq = Polytope::H(HPolytope::cube(2, int(1)));
        let r = solve_qp_nearest(&Point::from_ints(&[2, 0]), &sq).unwrap();
        assert_eq!((r.value_sq, r.minimizer), (int(1), Point::from_ints(&[1, 0])));

        let origin = Polytope::V(VPolytope::from_ints(&[&[0, 0]]).unwrap());
        let r = solve_qp_nearest(&Point::from_ints(&[3, 4]), &origin).unwrap();
        assert_eq!((r.value_sq, r.minimizer), (int(25), Point::from_ints(&[0, 0])));

        let tri = Polytope::V(VPolytope::from_ints(&[&[0, 0], &[2, 0], &[0, 2]]).unwrap());
        let r = solve_qp_nearest(&Point::from_ints(&[2, 2]), &tri).unwrap();
        assert_eq!((r.value_sq, r.minimizer), (int(2), Point::from_ints(&[1, 1])));
        assert_eq!(r.support.len(), 2);
    }

    #[test]
    fn presentations_agree() {
        let v = Polytope::V(VPolytope::from_ints(&[&[-1, -1], &[1, -1], &[1, 1], &[-1, 1]]).unwrap());
        let h = Polytope::H(HPolytope::cube(2, int(1)));
        for x in [[3, 5], [0, 7], [-4, 1], [0, 0], [2, -3]] {
            let x = Point::from_ints(&x);
            assert_eq!(solve_qp_nearest(&x, &v).unwrap().value_sq, solve_qp_nearest(&x, &h).unwrap().value_sq);
        }
    }

    #[test]
    fn face_projection_in_three_dimensions() {
        // Simplex {x ≥ 0, Σx ≤ 1}; (1,1,1) projects to its centroid face point.
        let h = HPolytope::from_rows(3, &[(&[-1, 0, 0], 0), (&[0, -1, 0], 0), (&[0, 0, -1], 0), (&[1, 1, 1], 1)])
            .unwrap();
        let r = nearest_h(&Point::from_ints(&[1, 1, 1]), &h).unwrap();
        assert_eq!(r.minimizer, Point::new(vec![ratio(1, 3); 3]));
        assert_eq!(r.value_sq, ratio(4, 3));
        let r = nearest_h(&Point::from_ints(&[-1, -2, 3]), &h).unwrap();
        assert_eq!(r.minimizer, Point::from_ints(&[0, 0, 1]));
    }

    #[test]
    fn empty_feasible_set() {
        let h = HPolytope::from_rows(1, &[(&[1], -1), (&[-1], -1)]).unwrap();
        assert_eq!(nearest_h(&Point::from_ints(&[5]), &h), Err(Error::Empty));
    }

    #[test]
    fn float_projection_agrees() {
        let tri = VPolytope::from_ints(&[&[0, 0], &[2, 0], &[0, 2]]).unwrap();
        let pts: Vec<Vec<f64>> = tri.vertices().iter().map(Point::to_f64s).collect();
        for x in [[2, 2], [-1, 3], [5, -1], [1, 0], [0, 0]] {
            let exact = nearest_v(&Point::from_ints(&x), &tri).unwrap();
            let approx = nearest_v_f64(&[x[0] as f64, x[1] as f64], &pts);
            assert!((approx.value_sq - to_f64(&exact.value_sq)).abs() < 1e-12, "{x:?}");
        }
    }
}
