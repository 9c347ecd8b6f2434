//! Norms inducing distances: ℓ1, ℓ2, ℓ∞ and polytopal unit balls.

use num_traits::{One, Signed, Zero};

use crate::error::{check_dim, Error, Result};
use crate::lp::{solve_lp, LPOutcome, LinearProgram, Terms};
use crate::point::dot;
use crate::polytope::{is_zero_symmetric, HPolytope, Polytope, VPolytope};
use crate::rational::{max_of, Rational};

#[derive(Clone, Debug, PartialEq)]
pub enum NormSpec {
    L1,
    L2,
    LInf,
    PolytopalV(VPolytope),
    PolytopalH(HPolytope),
}

/// An affine expression `Σ coefᵢ·xᵢ + constant` over LP variables.
#[derive(Clone, Debug, Default)]
pub(crate) struct Affine {
    pub terms: Terms,
    pub constant: Rational,
}

impl NormSpec {
    /// Unit ball given by points; it must be 0-symmetric and full-dimensional.
    pub fn polytopal_v(ball: VPolytope) -> Result<Self> {
        if !is_zero_symmetric(&Polytope::V(ball.clone())) {
            return Err(Error::InvalidNorm("unit ball is not 0-symmetric".into()));
        }
        if ball.affine_dim() < ball.dim() {
            return Err(Error::InvalidNorm("unit ball is not full-dimensional".into()));
        }
        Ok(NormSpec::PolytopalV(ball))
    }

    /// Unit ball given by inequalities; bounded, 0-symmetric, 0 in the interior.
    pub fn polytopal_h(ball: HPolytope) -> Result<Self> {
        if let Some((i, _)) = ball.rows().iter().enumerate().find(|(_, r)| !r.b.is_positive() && !r.a.is_zero()) {
            return Err(Error::InvalidNorm(format!("row {i}: origin is not interior (offset must be positive)")));
        }
        if !ball.is_bounded() {
            return Err(Error::InvalidNorm("unit ball is unbounded".into()));
        }
        if !is_zero_symmetric(&Polytope::H(ball.clone())) {
            return Err(Error::InvalidNorm("unit ball is not 0-symmetric".into()));
        }
        Ok(NormSpec::PolytopalH(ball))
    }

    pub fn polytopal(ball: Polytope) -> Result<Self> {
        match ball {
            Polytope::V(v) => Self::polytopal_v(v),
            Polytope::H(h) => Self::polytopal_h(h),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            NormSpec::L1 => "l1",
            NormSpec::L2 => "l2",
            NormSpec::LInf => "linf",
            NormSpec::PolytopalV(_) => "polytopal-v",
            NormSpec::PolytopalH(_) => "polytopal-h",
        }
    }

    /// The fixed dimension of a polytopal ball.
    pub fn ball_dim(&self) -> Option<usize> {
        match self {
            NormSpec::PolytopalV(b) => Some(b.dim()),
            NormSpec::PolytopalH(b) => Some(b.dim()),
            _ => None,
        }
    }

    pub fn is_euclidean(&self) -> bool {
        matches!(self, NormSpec::L2)
    }

    pub(crate) fn check_dim(&self, dim: usize) -> Result<()> {
        match self.ball_dim() {
            Some(b) => check_dim(b, dim),
            None => Ok(()),
        }
    }

    /// `‖x‖`; the squared norm for ℓ2.
    pub fn eval(&self, x: &[Rational]) -> Result<Rational> {
        self.check_dim(x.len())?;
        Ok(match self {
            NormSpec::L1 => x.iter().map(|v| v.abs()).sum(),
            NormSpec::LInf => x.iter().map(|v| v.abs()).max().unwrap_or_else(Rational::zero),
            NormSpec::L2 => dot(x, x),
            NormSpec::PolytopalH(b) => {
                let ratios: Vec<Rational> = b
                    .rows()
                    .iter()
                    .filter(|r| !r.a.is_zero())
                    .map(|r| dot(&r.a, x) / &r.b)
                    .collect();
                max_of(&ratios).cloned().unwrap_or_else(Rational::zero).max(Rational::zero())
            }
            NormSpec::PolytopalV(b) => {
                // Gauge: min Σν subject to x = Σ νₗ vₗ, ν ≥ 0.
                let n = b.vertices().len();
                let mut lp = LinearProgram::new(n);
                for l in 0..n {
                    lp.set_nonneg(l);
                }
                lp.maximize_terms((0..n).map(|l| (l, -Rational::one())).collect());
                for (k, xk) in x.iter().enumerate() {
                    let terms = (0..n)
                        .filter(|&l| !b.vertices()[l][k].is_zero())
                        .map(|l| (l, b.vertices()[l][k].clone()))
                        .collect();
                    lp.add_eq_terms(terms, xk.clone());
                }
                match solve_lp(&lp) {
                    LPOutcome::Optimal { value, .. } => -value,
                    _ => unreachable!("a full-dimensional symmetric ball absorbs every point"),
                }
            }
        })
    }

    /// Dual norm `h(𝔹, u)`; squared for ℓ2.
    pub fn dual_eval(&self, u: &[Rational]) -> Result<Rational> {
        self.check_dim(u.len())?;
        Ok(match self {
            NormSpec::L1 => u.iter().map(|v| v.abs()).max().unwrap_or_else(Rational::zero),
            NormSpec::LInf => u.iter().map(|v| v.abs()).sum(),
            NormSpec::L2 => dot(u, u),
            NormSpec::PolytopalV(b) => b.support(u)?,
            NormSpec::PolytopalH(b) => b.support(u)?,
        })
    }

    /// Adds variables and rows forcing `z ∈ ρ𝔹` for polytopal balls.
    pub(crate) fn add_ball_constraint(&self, lp: &mut LinearProgram, z: &[Affine], rho: usize) -> Result<()> {
        let d = z.len();
        match self {
            NormSpec::L2 => return Err(Error::InvalidNorm("the Euclidean ball is not polytopal".into())),
            NormSpec::L1 => {
                let mut total: Terms = vec![(rho, -Rational::one())];
                for zk in z {
                    let sp = lp.add_nonneg_var();
                    let sn = lp.add_nonneg_var();
                    let mut terms = zk.terms.clone();
                    terms.push((sp, -Rational::one()));
                    terms.push((sn, Rational::one()));
                    lp.add_eq_terms(terms, -zk.constant.clone());
                    total.push((sp, Rational::one()));
                    total.push((sn, Rational::one()));
                }
                lp.add_le_terms(total, Rational::zero());
            }
            NormSpec::LInf => {
                for zk in z {
                    let mut up = zk.terms.clone();
                    up.push((rho, -Rational::one()));
                    lp.add_le_terms(up, -zk.constant.clone());
                    let mut down: Terms = zk.terms.iter().map(|(j, v)| (*j, -v)).collect();
                    down.push((rho, -Rational::one()));
                    lp.add_le_terms(down, zk.constant.clone());
                }
            }
            NormSpec::PolytopalV(b) => {
                check_dim(b.dim(), d)?;
                let nus: Vec<usize> = (0..b.vertices().len()).map(|_| lp.add_nonneg_var()).collect();
                for (k, zk) in z.iter().enumerate() {
                    let mut terms = zk.terms.clone();
                    for (l, &nu) in nus.iter().enumerate() {
                        let c = &b.vertices()[l][k];
                        if !c.is_zero() {
                            terms.push((nu, -c.clone()));
                        }
                    }
                    lp.add_eq_terms(terms, -zk.constant.clone());
                }
                let mut total: Terms = nus.iter().map(|&nu| (nu, Rational::one())).collect();
                total.push((rho, -Rational::one()));
                lp.add_le_terms(total, Rational::zero());
            }
            NormSpec::PolytopalH(b) => {
                check_dim(b.dim(), d)?;
                for r in b.rows() {
                    let mut terms: Terms = Vec::new();
                    let mut constant = Rational::zero();
                    for (k, zk) in z.iter().enumerate() {
                        let c = &r.a[k];
                        if c.is_zero() {
                            continue;
                        }
                        terms.extend(zk.terms.iter().map(|(j, v)| (*j, v * c)));
                        constant += &zk.constant * c;
                    }
                    terms.push((rho, -r.b.clone()));
                    lp.add_le_terms(merge_terms(terms), -constant);
                }
            }
        }
        Ok(())
    }
}

pub(crate) fn merge_terms(mut terms: Terms) -> Terms {
    terms.sort_by_key(|(j, _)| *j);
    let mut out: Terms = Vec::with_capacity(terms.len());
    for (j, v) in terms {
        match out.last_mut() {
            Some((lj, lv)) if *lj == j => *lv += v,
            _ => out.push((j, v)),
        }
    }
    out.retain(|(_, v)| !v.is_zero());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::point::Point;
    use crate::rational::int;

    #[test]
    fn norm_values() {
        let x = Point::from_ints(&[3, -4]);
        assert_eq!(NormSpec::L1.eval(&x).unwrap(), int(7));
        assert_eq!(NormSpec::LInf.eval(&x).unwrap(), int(4));
        assert_eq!(NormSpec::L2.eval(&x).unwrap(), int(25));
        let diamond = VPolytope::from_ints(&[&[1, 0], &[-1, 0], &[0, 1], &[0, -1]]).unwrap();
        let nv = NormSpec::polytopal_v(diamond).unwrap();
        assert_eq!(nv.eval(&x).unwrap(), int(7));
        assert_eq!(nv.dual_eval(&x).unwrap(), int(4));
        let nh = NormSpec::polytopal_h(HPolytope::cube(2, int(1))).unwrap();
        assert_eq!(nh.eval(&x).unwrap(), int(4));
        assert_eq!(nh.dual_eval(&x).unwrap(), int(7));
    }

    #[test]
    fn invalid_balls() {
        let seg = VPolytope::from_ints(&[&[1, 0], &[-1, 0]]).unwrap();
        assert!(NormSpec::polytopal_v(seg).is_err());
        let shifted = VPolytope::from_ints(&[&[2, 0], &[0, 1], &[0, -1]]).unwrap();
        assert!(NormSpec::polytopal_v(shifted).is_err());
        let half = HPolytope::from_rows(2, &[(&[1, 0], 1), (&[-1, 0], 1)]).unwrap();
        assert!(NormSpec::polytopal_h(half).is_err());
        let off = HPolytope::from_rows(1, &[(&[1], 2), (&[-1], 0)]).unwrap();
        assert!(NormSpec::polytopal_h(off).is_err());
    }
}
