//! Point-to-polytope distances, the Euclidean projection and its gradients.

use num_traits::{One, Zero};

use crate::error::{check_dim, Error, Result};
use crate::lp::{solve_lp, LPOutcome, LinearProgram, Terms};
use crate::norm::{Affine, NormSpec};
use crate::point::{norm_f64, Point};
use crate::polytope::{HPolytope, Polytope, VPolytope};
use crate::qp::solve_qp_nearest;
use crate::rational::{sqrt_f64, to_f64, Rational};

#[derive(Clone, Debug, PartialEq)]
pub struct DistanceResult {
    pub norm: NormSpec,
    /// The distance; its square for ℓ2.
    pub value: Rational,
    /// A nearest point of the polytope (unique for ℓ2).
    pub witness: Point,
}

impl DistanceResult {
    /// The distance itself as a float.
    pub fn distance_f64(&self) -> f64 {
        if self.norm.is_euclidean() {
            sqrt_f64(&self.value)
        } else {
            to_f64(&self.value)
        }
    }
}

/// `d(x, P)` under `norm`; squared for ℓ2.
pub fn point_distance(x: &[Rational], p: &Polytope, norm: &NormSpec) -> Result<DistanceResult> {
    check_dim(p.dim(), x.len())?;
    norm.check_dim(x.len())?;
    if let Polytope::H(h) = p {
        h.ensure_bounded()?;
        if h.contains_point(x)? {
            return Ok(DistanceResult { norm: norm.clone(), value: Rational::zero(), witness: Point::new(x.to_vec()) });
        }
    }
    let (value, witness) = match norm {
        NormSpec::L2 => {
            let n = solve_qp_nearest(x, p)?;
            (n.value_sq, n.minimizer)
        }
        _ => match p {
            Polytope::V(v) => lp_distance_v(x, v, norm)?,
            Polytope::H(h) => lp_distance_h(x, h, norm)?,
        },
    };
    Ok(DistanceResult { norm: norm.clone(), value, witness })
}

/// `min ρ` with `x − Σλⱼpⱼ ∈ ρ𝔹`, `λ ∈ Δ`.
fn lp_distance_v(x: &[Rational], p: &VPolytope, norm: &NormSpec) -> Result<(Rational, Point)> {
    let n = p.vertices().len();
    let mut lp = LinearProgram::new(n + 1);
    for j in 0..=n {
        lp.set_nonneg(j);
    }
    let rho = n;
    lp.maximize_terms(vec![(rho, -Rational::one())]);
    lp.add_eq_terms((0..n).map(|j| (j, Rational::one())).collect(), Rational::one());
    let z: Vec<Affine> = (0..x.len())
        .map(|k| Affine {
            terms: (0..n)
                .filter(|&j| !p.vertices()[j][k].is_zero())
                .map(|j| (j, -p.vertices()[j][k].clone()))
                .collect(),
            constant: x[k].clone(),
        })
        .collect();
    norm.add_ball_constraint(&mut lp, &z, rho)?;
    match solve_lp(&lp) {
        LPOutcome::Optimal { value, solution, .. } => {
            let mut w = vec![Rational::zero(); x.len()];
            for (j, v) in p.vertices().iter().enumerate() {
                if solution[j].is_zero() {
                    continue;
                }
                for k in 0..x.len() {
                    w[k] += &solution[j] * &v[k];
                }
            }
            Ok((-value, Point::new(w)))
        }
        _ => Err(Error::SelfCheck("distance program has no optimum".into())),
    }
}

/// `min ρ` with `x − y ∈ ρ𝔹`, `Ay ≤ b`.
fn lp_distance_h(x: &[Rational], p: &HPolytope, norm: &NormSpec) -> Result<(Rational, Point)> {
    let d = x.len();
    let mut lp = LinearProgram::new(d + 1);
    let rho = d;
    lp.set_nonneg(rho);
    lp.maximize_terms(vec![(rho, -Rational::one())]);
    for r in p.rows() {
        let terms: Terms = (0..d).filter(|&k| !r.a[k].is_zero()).map(|k| (k, r.a[k].clone())).collect();
        lp.add_le_terms(terms, r.b.clone());
    }
    let z: Vec<Affine> = (0..d)
        .map(|k| Affine { terms: vec![(k, -Rational::one())], constant: x[k].clone() })
        .collect();
    norm.add_ball_constraint(&mut lp, &z, rho)?;
    match solve_lp(&lp) {
        LPOutcome::Optimal { value, solution, .. } => Ok((-value, Point::new(solution.coords()[..d].to_vec()))),
        LPOutcome::Infeasible => Err(Error::Empty),
        LPOutcome::Unbounded => Err(Error::SelfCheck("distance program unbounded".into())),
    }
}

/// The Euclidean projection `Π_P(x)`.
pub fn nearest_point(x: &[Rational], p: &Polytope) -> Result<Point> {
    check_dim(p.dim(), x.len())?;
    if let Polytope::H(h) = p {
        h.ensure_bounded()?;
    }
    Ok(solve_qp_nearest(x, p)?.minimizer)
}

/// `∇d₂(·, P)(x) = (x − Π_P(x)) / ‖x − Π_P(x)‖₂`.
pub fn distance_gradient(x: &[Rational], p: &Polytope) -> Result<Vec<f64>> {
    let proj = nearest_point(x, p)?;
    let diff: Vec<f64> = x.iter().zip(proj.iter()).map(|(a, b)| to_f64(&(a - b))).collect();
    let norm = norm_f64(&diff);
    if norm == 0.0 {
        return Err(Error::PointInside);
    }
    Ok(diff.iter().map(|v| v / norm).collect())
}

/// Which body a point of an objective piece belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PointRole {
    PointOfP,
    PointOfQ,
}

/// Gradient in `(α, c)` at `(1, 0)` of `α, c ↦ d₂(αp + c, Q)` or `α, c ↦ d₂(q, αP + c)`.
pub fn objective_gradients(point: &[Rational], role: PointRole, p: &Polytope, q: &Polytope) -> Result<Vec<f64>> {
    let (lifted, norm) = lifted_vector(point, role, p, q)?;
    Ok(lifted.iter().map(|v| v / norm).collect())
}

/// Unnormalized lifted vector `((x−π)ᵀx', x−π)` and the norm `‖x−π‖`.
pub(crate) fn lifted_vector(point: &[Rational], role: PointRole, p: &Polytope, q: &Polytope) -> Result<(Vec<f64>, f64)> {
    let (diff, anchor) = match role {
        PointRole::PointOfP => {
            let proj = nearest_point(point, q)?;
            let diff = Point::new(point.iter().zip(proj.iter()).map(|(a, b)| a - b).collect());
            (diff, Point::new(point.to_vec()))
        }
        PointRole::PointOfQ => {
            let proj = nearest_point(point, p)?;
            let diff = Point::new(proj.iter().zip(point).map(|(a, b)| a - b).collect());
            (diff, proj)
        }
    };
    let norm_sq = diff.norm_sq();
    if norm_sq.is_zero() {
        return Err(Error::PointInside);
    }
    let first = to_f64(&diff.dot(&anchor)?);
    let mut out = vec![first];
    out.extend(diff.iter().map(to_f64));
    Ok((out, sqrt_f64(&norm_sq)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn square() -> Polytope {
        Polytope::H(HPolytope::cube(2, int(1)))
    }

    #[test]
    fn distance_examples() {
        let r = point_distance(&Point::from_ints(&[2, 0]), &square(), &NormSpec::LInf).unwrap();
        assert_eq!((r.value, r.witness), (int(1), Point::from_ints(&[1, 0])));
        let r = point_distance(&Point::from_ints(&[2, 2]), &square(), &NormSpec::L1).unwrap();
        assert_eq!((r.value, r.witness), (int(2), Point::from_ints(&[1, 1])));
        let origin = Polytope::H(HPolytope::cube(2, int(0)));
        let r = point_distance(&Point::from_ints(&[3, 4]), &origin, &NormSpec::L2).unwrap();
        assert_eq!((r.value, r.witness), (int(25), Point::from_ints(&[0, 0])));
        for norm in [NormSpec::L1, NormSpec::L2, NormSpec::LInf] {
            assert_eq!(point_distance(&Point::zeros(2), &square(), &norm).unwrap().value, int(0));
        }
    }

    #[test]
    fn v_and_h_agree() {
        let v = Polytope::V(VPolytope::from_ints(&[&[-1, -1], &[1, -1], &[1, 1], &[-1, 1]]).unwrap());
        let ball = NormSpec::polytopal_v(VPolytope::from_ints(&[&[2, 1], &[-2, -1], &[0, 1], &[0, -1]]).unwrap()).unwrap();
        for x in [[3, 5], [0, 7], [-4, 1], [2, -3]] {
            let x = Point::from_ints(&x);
            for norm in [NormSpec::L1, NormSpec::L2, NormSpec::LInf, ball.clone()] {
                let a = point_distance(&x, &v, &norm).unwrap().value;
                let b = point_distance(&x, &square(), &norm).unwrap().value;
                assert_eq!(a, b, "{x} {}", norm.name());
            }
        }
    }

    #[test]
    fn projection_and_gradients() {
        assert_eq!(nearest_point(&Point::from_ints(&[2, 0]), &square()).unwrap(), Point::from_ints(&[1, 0]));
        let seg = Polytope::V(VPolytope::from_ints(&[&[0, 0], &[1, 0]]).unwrap());
        assert_eq!(nearest_point(&Point::from_ints(&[2, 3]), &seg).unwrap(), Point::from_ints(&[1, 0]));
        assert_eq!(distance_gradient(&Point::from_ints(&[2, 0]), &square()).unwrap(), vec![1.0, 0.0]);
        let g = distance_gradient(&Point::from_ints(&[2, 2]), &square()).unwrap();
        assert!((g[0] - 0.5f64.sqrt()).abs() < 1e-15 && (g[1] - 0.5f64.sqrt()).abs() < 1e-15);
        assert_eq!(distance_gradient(&Point::zeros(2), &square()), Err(Error::PointInside));

        let origin = Polytope::V(VPolytope::from_ints(&[&[0, 0]]).unwrap());
        let gp = objective_gradients(&Point::from_ints(&[1, 0]), PointRole::PointOfP, &square(), &origin).unwrap();
        assert_eq!(gp, vec![1.0, 1.0, 0.0]);
        let big = Polytope::V(VPolytope::from_ints(&[&[2, 0]]).unwrap());
        let gq = objective_gradients(&Point::from_ints(&[2, 0]), PointRole::PointOfQ, &square(), &big).unwrap();
        assert_eq!(gq, vec![-1.0, -1.0, 0.0]);
    }
}
