//! Homothetic Hausdorff matching: `min over α > 0, c of δ(αP + c, Q)`.
//!
//! Polytopal norms give one exact LP. The Euclidean case minimizes the
//! convex objective `f(α, c) = δ₂(αP + c, Q)` with the ellipsoid method,
//! every evaluation being exact on a dyadic grid. Optimality of a position
//! is witnessed by a certificate of at most `d + 2` extremal points.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{check_dim, Error, Result};
use crate::hausdorff::hausdorff_oracle;
use crate::linalg::null_vector;
use crate::lp::{solve_lp, LPOutcome, LinearProgram, Terms};
use crate::minimize::{minimize_convex_with, Eval, MinimizeOptions};
use crate::norm::{Affine, NormSpec};
use crate::point::{dist_sq, dot, Point};
use crate::polytope::{bounding_box, Polytope, VPolytope};
use crate::qp::{nearest_v, nearest_v_f64};
use crate::rational::{from_f64, int, rational_sqrt, ratio, sqrt_f64, to_f64, Rational};

/// `x ↦ αx + c`.
#[derive(Clone, Debug, PartialEq)]
pub struct Homothety {
    pub alpha: Rational,
    pub c: Point,
    /// False when `alpha`, `c` are rational stand-ins for irrational values.
    pub exact: bool,
}

impl Homothety {
    pub fn identity(dim: usize) -> Self {
        Homothety { alpha: Rational::one(), c: Point::zeros(dim), exact: true }
    }

    pub fn alpha_f64(&self) -> f64 {
        to_f64(&self.alpha)
    }

    pub fn c_f64(&self) -> Vec<f64> {
        self.c.to_f64s()
    }

    pub fn apply_point(&self, x: &[Rational]) -> Point {
        Point::new(x.iter().zip(self.c.iter()).map(|(v, t)| &self.alpha * v + t).collect())
    }

    pub fn apply(&self, p: &VPolytope) -> VPolytope {
        p.transform(&self.alpha, &self.c)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MatchingResult {
    pub homothety: Homothety,
    /// `δ(αP + c, Q)` at the returned homothety.
    pub rho: f64,
    /// Exact `ρ` on the LP path, exact `ρ²` at the returned homothety for ℓ2.
    pub value: Rational,
    /// Certified lower bound on the optimum.
    pub lower_bound: f64,
    /// True only for the LP path.
    pub exact: bool,
    pub converged: bool,
}

fn ensure_full_dim(p: &VPolytope, name: &str) -> Result<()> {
    if p.affine_dim() < p.dim() {
        return Err(Error::Degenerate(format!("{name} is not full-dimensional")));
    }
    Ok(())
}

// ------------------------------------------------------------ polytopal LP

/// Exact optimal homothety under a polytopal norm.
pub fn match_polytopal(p: &VPolytope, q: &VPolytope, ball: &NormSpec) -> Result<MatchingResult> {
    check_dim(p.dim(), q.dim())?;
    if ball.is_euclidean() {
        return Err(Error::InvalidNorm("polytopal matching needs a polytopal ball".into()));
    }
    ball.check_dim(p.dim())?;
    let (rho, alpha, c) = polytopal_program(p.vertices(), q.vertices(), p, q, ball)?;
    if alpha.is_zero() {
        return Err(Error::Degenerate("optimal scaling factor is zero".into()));
    }
    let f = to_f64(&rho);
    Ok(MatchingResult {
        homothety: Homothety { alpha, c, exact: true },
        rho: f,
        value: rho,
        lower_bound: f,
        exact: true,
        converged: true,
    })
}

/// `min ρ` s.t. `αp + c ∈ Q + ρ𝔹` for `p ∈ r` and `q ∈ αP + c + ρ𝔹` for `q ∈ s`.
fn polytopal_program(
    r: &[Point],
    s: &[Point],
    p: &VPolytope,
    q: &VPolytope,
    ball: &NormSpec,
) -> Result<(Rational, Rational, Point)> {
    let d = p.dim();
    let mut lp = LinearProgram::new(d + 2);
    let alpha = 0;
    let rho = d + 1;
    lp.set_nonneg(alpha);
    lp.set_nonneg(rho);
    lp.maximize_terms(vec![(rho, -Rational::one())]);
    for x in r {
        let lambda: Vec<usize> = q.vertices().iter().map(|_| lp.add_nonneg_var()).collect();
        lp.add_eq_terms(lambda.iter().map(|&j| (j, Rational::one())).collect(), Rational::one());
        let z: Vec<Affine> = (0..d)
            .map(|k| {
                let mut terms: Terms = vec![(1 + k, Rational::one())];
                if !x[k].is_zero() {
                    terms.push((alpha, x[k].clone()));
                }
                for (j, v) in lambda.iter().zip(q.vertices()) {
                    if !v[k].is_zero() {
                        terms.push((*j, -v[k].clone()));
                    }
                }
                Affine { terms, constant: Rational::zero() }
            })
            .collect();
        ball.add_ball_constraint(&mut lp, &z, rho)?;
    }
    for y in s {
        let mu: Vec<usize> = p.vertices().iter().map(|_| lp.add_nonneg_var()).collect();
        let mut sum: Terms = mu.iter().map(|&j| (j, Rational::one())).collect();
        sum.push((alpha, -Rational::one()));
        lp.add_eq_terms(sum, Rational::zero());
        let z: Vec<Affine> = (0..d)
            .map(|k| {
                let mut terms: Terms = vec![(1 + k, -Rational::one())];
                for (j, v) in mu.iter().zip(p.vertices()) {
                    if !v[k].is_zero() {
                        terms.push((*j, -v[k].clone()));
                    }
                }
                Affine { terms, constant: y[k].clone() }
            })
            .collect();
        ball.add_ball_constraint(&mut lp, &z, rho)?;
    }
    match solve_lp(&lp) {
        LPOutcome::Optimal { value, solution, .. } => {
            let c = Point::new(solution.coords()[1..=d].to_vec());
            Ok((-value, solution[alpha].clone(), c))
        }
        _ => Err(Error::SelfCheck("matching program has no optimum".into())),
    }
}

/// Optimal value of the program restricted to the constraints of `r ⊆ P` and `s ⊆ Q`.
///
/// Polytopal norms solve the restricted LP exactly. For ℓ2 the restricted
/// objective is minimized over a region known to contain an optimal
/// homothety of the full problem.
pub fn restricted_rho(r: &[Point], s: &[Point], p: &VPolytope, q: &VPolytope, norm: &NormSpec) -> Result<MatchingResult> {
    check_dim(p.dim(), q.dim())?;
    norm.check_dim(p.dim())?;
    for x in r {
        check_dim(p.dim(), x.len())?;
        if !p.contains_point(x)? {
            return Err(Error::Membership(format!("{x} is not a point of P")));
        }
    }
    for y in s {
        check_dim(q.dim(), y.len())?;
        if !q.contains_point(y)? {
            return Err(Error::Membership(format!("{y} is not a point of Q")));
        }
    }
    if !norm.is_euclidean() {
        let (rho, alpha, c) = polytopal_program(r, s, p, q, norm)?;
        let f = to_f64(&rho);
        return Ok(MatchingResult {
            homothety: Homothety { alpha, c, exact: true },
            rho: f,
            value: rho,
            lower_bound: f,
            exact: true,
            converged: true,
        });
    }
    let setup = L2Setup::new(p, q)?;
    let problem = L2Problem {
        anchor: setup.anchor.clone(),
        p_pieces: r.iter().map(|x| x.sub(&setup.anchor)).collect(),
        q_set: q.clone(),
        p_set: setup.anchored.clone(),
        q_pieces: s.to_vec(),
    };
    problem.solve(&setup.center, &setup.axes, &L2Options::default())
}

// ------------------------------------------------------------ Euclidean matching

#[derive(Clone, Debug, PartialEq)]
pub struct L2Options {
    /// Accuracy of `ρ`.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for L2Options {
    fn default() -> Self {
        L2Options { tol: 1e-9, max_iter: 20_000 }
    }
}

/// Euclidean matching to accuracy `tol`.
pub fn match_l2(p: &VPolytope, q: &VPolytope, tol: f64) -> Result<MatchingResult> {
    match_l2_with(p, q, &L2Options { tol, ..L2Options::default() })
}

pub fn match_l2_with(p: &VPolytope, q: &VPolytope, opts: &L2Options) -> Result<MatchingResult> {
    check_dim(p.dim(), q.dim())?;
    if !(opts.tol > 0.0) {
        return Err(Error::InvalidInput("tolerance must be positive".into()));
    }
    ensure_full_dim(p, "P")?;
    ensure_full_dim(q, "Q")?;
    let setup = L2Setup::new(p, q)?;
    if setup.start_value.is_zero() {
        return Ok(MatchingResult {
            homothety: setup.start.clone(),
            rho: 0.0,
            value: Rational::zero(),
            lower_bound: 0.0,
            exact: setup.start.exact,
            converged: true,
        });
    }
    let problem = L2Problem {
        anchor: setup.anchor.clone(),
        p_pieces: setup.anchored.vertices().to_vec(),
        q_set: q.clone(),
        p_set: setup.anchored.clone(),
        q_pieces: q.vertices().to_vec(),
    };
    problem.solve(&setup.center, &setup.axes, opts)
}

/// Start and search region shared by the full and restricted problems.
struct L2Setup {
    /// `r(P)`; positions are parametrized as `α(P − r(P)) + c`.
    anchor: Point,
    anchored: VPolytope,
    start: Homothety,
    start_value: Rational,
    center: Vec<f64>,
    axes: Vec<f64>,
}

impl L2Setup {
    fn new(p: &VPolytope, q: &VPolytope) -> Result<Self> {
        let d = p.dim();
        let anchor = bounding_box(&Polytope::V(p.clone()))?.lower;
        let anchored = p.translate(&anchor.neg());
        let start = reference_match(&Polytope::V(p.clone()), &Polytope::V(q.clone()))?;
        let start_c = start.c.add(&anchor.scale(&start.alpha));
        let start_value = objective_sq(&anchored, q, &start.alpha, &start_c)?;
        let rho0 = sqrt_f64(&start_value);
        let diam = p
            .vertices()
            .iter()
            .enumerate()
            .flat_map(|(i, a)| p.vertices()[i + 1..].iter().map(move |b| dist_sq(a, b)))
            .max()
            .map_or(0.0, |v| sqrt_f64(&v));
        let n = (d + 1) as f64;
        let grow = 1.01 * n.sqrt();
        let mut axes = vec![grow * 2.0 * rho0 * (1.0 + 2.0 * (d as f64).sqrt()); d + 1];
        axes[0] = grow * 4.0 * rho0 / diam.max(f64::MIN_POSITIVE);
        let mut center = vec![to_f64(&start.alpha)];
        center.extend(start_c.to_f64s());
        Ok(L2Setup { anchor, anchored, start, start_value, center, axes })
    }
}

/// `δ₂(αP + c, Q)²`.
fn objective_sq(p: &VPolytope, q: &VPolytope, alpha: &Rational, c: &[Rational]) -> Result<Rational> {
    let moved = p.transform(alpha, c);
    let mut best = Rational::zero();
    for x in moved.vertices() {
        best = best.max(nearest_v(x, q)?.value_sq);
    }
    for y in q.vertices() {
        best = best.max(nearest_v(y, &moved)?.value_sq);
    }
    Ok(best)
}

const SNAP_BITS: i32 = 40;

/// Nearest multiple of `2^-40`.
fn snap(x: f64) -> Rational {
    let scale = 2f64.powi(SNAP_BITS);
    from_f64((x * scale).round()) / from_f64(scale)
}

/// Pieces `d₂(αp + c, Q)` for `p ∈ p_pieces` and `d₂(q, αP + c)` for `q ∈ q_pieces`.
struct L2Problem {
    anchor: Point,
    p_pieces: Vec<Point>,
    q_set: VPolytope,
    p_set: VPolytope,
    q_pieces: Vec<Point>,
}

impl L2Problem {
    /// Exact `max` of the squared pieces.
    fn value_sq(&self, alpha: &Rational, c: &[Rational]) -> Result<Rational> {
        let mut best = Rational::zero();
        for x in &self.p_pieces {
            let y = Point::new(x.iter().zip(c).map(|(v, t)| alpha * v + t).collect());
            best = best.max(nearest_v(&y, &self.q_set)?.value_sq);
        }
        if !self.q_pieces.is_empty() {
            let moved = self.p_set.transform(alpha, c);
            for y in &self.q_pieces {
                best = best.max(nearest_v(y, &moved)?.value_sq);
            }
        }
        Ok(best)
    }
}

/// Floating-point copy of an [`L2Problem`] driving the search.
struct L2Floats {
    p_pieces: Vec<Vec<f64>>,
    q_set: Vec<Vec<f64>>,
    p_set: Vec<Vec<f64>>,
    q_pieces: Vec<Vec<f64>>,
}

impl L2Floats {
    fn new(problem: &L2Problem) -> Self {
        let conv = |v: &[Point]| v.iter().map(Point::to_f64s).collect::<Vec<_>>();
        L2Floats {
            p_pieces: conv(&problem.p_pieces),
            q_set: conv(problem.q_set.vertices()),
            p_set: conv(problem.p_set.vertices()),
            q_pieces: conv(&problem.q_pieces),
        }
    }

    /// `max` of the pieces and the averaged gradient of the (near-)maximizers.
    fn eval(&self, alpha: f64, c: &[f64]) -> (f64, Vec<f64>) {
        let d = c.len();
        let mut pieces: Vec<(f64, Vec<f64>)> = Vec::new();
        for x in &self.p_pieces {
            let y: Vec<f64> = x.iter().zip(c).map(|(v, t)| alpha * v + t).collect();
            let n = nearest_v_f64(&y, &self.q_set);
            let norm = n.value_sq.sqrt();
            let mut g = vec![0.0; d + 1];
            if norm > 0.0 {
                let u: Vec<f64> = y.iter().zip(&n.minimizer).map(|(a, b)| (a - b) / norm).collect();
                g[0] = u.iter().zip(x).map(|(a, b)| a * b).sum();
                g[1..].copy_from_slice(&u);
            }
            pieces.push((norm, g));
        }
        if !self.q_pieces.is_empty() {
            let moved: Vec<Vec<f64>> =
                self.p_set.iter().map(|x| x.iter().zip(c).map(|(v, t)| alpha * v + t).collect()).collect();
            for y in &self.q_pieces {
                let n = nearest_v_f64(y, &moved);
                let norm = n.value_sq.sqrt();
                let mut g = vec![0.0; d + 1];
                if norm > 0.0 {
                    let u: Vec<f64> = y.iter().zip(&n.minimizer).map(|(a, b)| (a - b) / norm).collect();
                    g[0] = -u.iter().zip(n.minimizer.iter().zip(c)).map(|(a, (m, t))| a * (m - t) / alpha).sum::<f64>();
                    for k in 0..d {
                        g[k + 1] = -u[k];
                    }
                }
                pieces.push((norm, g));
            }
        }
        let best = pieces.iter().map(|p| p.0).fold(0.0, f64::max);
        let ties: Vec<&Vec<f64>> = pieces.iter().filter(|p| p.0 >= best * (1.0 - 1e-12) && p.0 > 0.0).map(|p| &p.1).collect();
        let mut g = vec![0.0; d + 1];
        for gi in &ties {
            for (a, b) in g.iter_mut().zip(gi.iter()) {
                *a += b / ties.len() as f64;
            }
        }
        (best, g)
    }
}

impl L2Problem {
    fn solve(&self, center: &[f64], axes: &[f64], opts: &L2Options) -> Result<MatchingResult> {
        let d = self.anchor.dim();
        let floats = L2Floats::new(self);
        let oracle = |x: &[f64]| {
            if !(x[0] > 0.0) {
                let mut cut = vec![0.0; d + 1];
                cut[0] = -1.0;
                return Eval::Infeasible { cut, depth: -x[0] };
            }
            let (f, g) = floats.eval(x[0], &x[1..]);
            Eval::Value { f, g }
        };
        let mopts = MinimizeOptions {
            tol: opts.tol,
            max_iter: opts.max_iter,
            semi_axes: Some(axes.iter().map(|a| a.max(1e-12)).collect()),
            ..MinimizeOptions::default()
        };
        let m = minimize_convex_with(oracle, center, &mopts)?;
        let mut alpha = snap(m.x[0]);
        if !alpha.is_positive() {
            alpha = from_f64(m.x[0]);
        }
        if !alpha.is_positive() {
            return Err(Error::SelfCheck("matching search left the domain".into()));
        }
        let c: Vec<Rational> = m.x[1..].iter().map(|v| snap(*v)).collect();
        let value = self.value_sq(&alpha, &c)?;
        let c_orig: Vec<Rational> = c.iter().zip(self.anchor.iter()).map(|(t, r)| t - &alpha * r).collect();
        Ok(MatchingResult {
            homothety: Homothety { alpha, c: Point::new(c_orig), exact: false },
            rho: sqrt_f64(&value),
            lower_bound: m.lower_bound.clamp(0.0, sqrt_f64(&value)),
            value,
            exact: false,
            converged: m.converged,
        })
    }
}

// ------------------------------------------------------------ reference points

/// `ᾱ = D(Q)/D(P)`, `c̄ = r(Q) − ᾱ r(P)` with `r` the lower bounding-box corner.
pub fn reference_match(p: &Polytope, q: &Polytope) -> Result<Homothety> {
    check_dim(p.dim(), q.dim())?;
    let bp = bounding_box(p)?;
    let bq = bounding_box(q)?;
    if bp.diam_sq.is_zero() {
        return Err(Error::Degenerate("P has zero bounding-box diameter".into()));
    }
    let ratio_sq = &bq.diam_sq / &bp.diam_sq;
    let (alpha, exact) = match rational_sqrt(&ratio_sq) {
        Some(a) => (a, true),
        None => (snap(sqrt_f64(&ratio_sq)), false),
    };
    let c = bq.lower.sub(&bp.lower.scale(&alpha));
    Ok(Homothety { alpha, c, exact })
}

#[derive(Clone, Debug, PartialEq)]
pub struct PropertyCheck {
    /// `"a"`, `"b"` or `"c"`.
    pub property: &'static str,
    pub lhs: f64,
    pub rhs: f64,
}

impl PropertyCheck {
    pub fn margin(&self) -> f64 {
        self.rhs - self.lhs
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ReferencePointReport {
    pub checks: Vec<PropertyCheck>,
}

/// Checks, exactly on squares:
/// a) `δ₂(α₁(P − r(P)), α₂(P − r(P))) ≤ |α₁ − α₂| D(P)` for `samples` random `α₁, α₂ ∈ (0, 3]`,
/// b) `|D(P) − D(Q)| ≤ 2√d δ₂(P, Q)`,
/// c) `‖r(P) − r(Q)‖₂ ≤ √d δ₂(P, Q)`.
pub fn reference_point_properties_check(p: &Polytope, q: &Polytope, samples: usize, seed: u64) -> Result<ReferencePointReport> {
    check_dim(p.dim(), q.dim())?;
    let d = int(p.dim() as i64);
    let bp = bounding_box(p)?;
    let bq = bounding_box(q)?;
    let h = hausdorff_oracle(p, q, &NormSpec::L2)?.value;
    let mut report = ReferencePointReport::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shift = bp.lower.neg();
    for _ in 0..samples {
        let a1 = ratio(rng.gen_range(1..=3000), 1000);
        let a2 = ratio(rng.gen_range(1..=3000), 1000);
        let scaled = |a: &Rational| -> Result<Polytope> {
            Ok(match p {
                Polytope::V(v) => Polytope::V(v.translate(&shift).transform(a, &Point::zeros(v.dim()))),
                Polytope::H(hp) => {
                    let t = hp.transform(&Rational::one(), &shift);
                    Polytope::H(t.transform(a, &Point::zeros(hp.dim())))
                }
            })
        };
        let lhs = hausdorff_oracle(&scaled(&a1)?, &scaled(&a2)?, &NormSpec::L2)?.value;
        let diff = &a1 - &a2;
        let rhs = &diff * &diff * &bp.diam_sq;
        record(&mut report, "a", &lhs, &rhs, lhs <= rhs)?;
    }
    // (D_P − D_Q)² ≤ 4 d h  ⇔  a + b − 4dh ≤ 2√(ab).
    let (a, b) = (&bp.diam_sq, &bq.diam_sq);
    let four_dh = int(4) * &d * &h;
    let left = a + b - &four_dh;
    let holds = !left.is_positive() || &left * &left <= int(4) * a * b;
    let lhs_b = (sqrt_f64(a) - sqrt_f64(b)).powi(2);
    record(&mut report, "b", &from_f64(lhs_b), &four_dh, holds)?;
    let lhs_c = bp.lower.sub(&bq.lower).norm_sq();
    let rhs_c = &d * &h;
    let holds = lhs_c <= rhs_c;
    record(&mut report, "c", &lhs_c, &rhs_c, holds)?;
    Ok(report)
}

fn record(report: &mut ReferencePointReport, property: &'static str, lhs_sq: &Rational, rhs_sq: &Rational, holds: bool) -> Result<()> {
    let check = PropertyCheck { property, lhs: sqrt_f64(lhs_sq), rhs: sqrt_f64(rhs_sq) };
    if !holds {
        return Err(Error::TheoremViolation(format!(
            "reference-point property {property}: {} > {}",
            check.lhs, check.rhs
        )));
    }
    report.checks.push(check);
    Ok(())
}

// ------------------------------------------------------------ certificates

/// Witness that a position of `P` is optimal: `R ⊆ P`, `S ⊆ Q` with their projections.
#[derive(Clone, Debug, PartialEq)]
pub struct MatchingCertificate {
    pub rho: f64,
    /// `(p, Π_Q(p))`.
    pub r: Vec<(Point, Point)>,
    /// `(q, Π_P(q))`.
    pub s: Vec<(Point, Point)>,
    /// Convex weights on the normalized lifted vectors of `r` then `s`; may be empty.
    pub weights: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum CertificateStatus {
    Valid,
    Violated { condition: u8, detail: String },
}

impl MatchingCertificate {
    /// Certificate with projections computed exactly and no weights.
    pub fn from_points(p: &VPolytope, q: &VPolytope, rho: f64, r: &[Point], s: &[Point]) -> Result<Self> {
        let r = r.iter().map(|x| Ok((x.clone(), nearest_v(x, q)?.minimizer))).collect::<Result<_>>()?;
        let s = s.iter().map(|y| Ok((y.clone(), nearest_v(y, p)?.minimizer))).collect::<Result<_>>()?;
        Ok(MatchingCertificate { rho, r, s, weights: Vec::new() })
    }
}

/// Lifted vector `((x − π)ᵀa, x − π)` normalized by `‖x − π‖`; zero when `x = π`.
fn lifted(x: &[Rational], pi: &[Rational], a: &[Rational]) -> Vec<f64> {
    let diff: Vec<Rational> = x.iter().zip(pi).map(|(u, v)| u - v).collect();
    let n2 = dot(&diff, &diff);
    if n2.is_zero() {
        return vec![0.0; x.len() + 1];
    }
    let norm = sqrt_f64(&n2);
    let mut out = vec![to_f64(&dot(&diff, a)) / norm];
    out.extend(diff.iter().map(|v| to_f64(v) / norm));
    out
}

/// `((p − Π_Q(p))ᵀp ; p − Π_Q(p))`, normalized.
fn lifted_p(p: &[Rational], proj: &[Rational]) -> Vec<f64> {
    lifted(p, proj, p)
}

/// `((Π_P(q) − q)ᵀΠ_P(q) ; Π_P(q) − q)`, normalized.
fn lifted_q(q: &[Rational], proj: &[Rational]) -> Vec<f64> {
    lifted(proj, q, proj)
}

/// Exact LP `min ‖Σ wᵢvᵢ‖∞` over the simplex; returns the residual and weights.
fn min_residual(vectors: &[Vec<f64>]) -> Result<(Rational, Vec<Rational>)> {
    let k = vectors.len();
    let dim = vectors[0].len();
    let mut lp = LinearProgram::new(k + 1);
    for j in 0..=k {
        lp.set_nonneg(j);
    }
    let t = k;
    lp.maximize_terms(vec![(t, -Rational::one())]);
    lp.add_eq_terms((0..k).map(|j| (j, Rational::one())).collect(), Rational::one());
    for i in 0..dim {
        let terms: Terms = (0..k).filter(|&j| vectors[j][i] != 0.0).map(|j| (j, from_f64(vectors[j][i]))).collect();
        let mut up = terms.clone();
        up.push((t, -Rational::one()));
        lp.add_le_terms(up, Rational::zero());
        let mut down: Terms = terms.into_iter().map(|(j, v)| (j, -v)).collect();
        down.push((t, -Rational::one()));
        lp.add_le_terms(down, Rational::zero());
    }
    match solve_lp(&lp) {
        LPOutcome::Optimal { value, solution, .. } => Ok((-value, solution.coords()[..k].to_vec())),
        _ => Err(Error::SelfCheck("residual program has no optimum".into())),
    }
}

/// Shrinks the support of `w` to at most `dim + 1` entries without changing `Σ wᵢvᵢ` or `Σ wᵢ`.
fn reduce_support(vectors: &[Vec<f64>], mut w: Vec<Rational>) -> Vec<Rational> {
    let dim = vectors[0].len();
    loop {
        let support: Vec<usize> = (0..w.len()).filter(|&j| w[j].is_positive()).collect();
        if support.len() <= dim + 1 {
            return w;
        }
        let cols: Vec<Vec<Rational>> = support
            .iter()
            .map(|&j| {
                let mut c: Vec<Rational> = vectors[j].iter().map(|v| from_f64(*v)).collect();
                c.push(Rational::one());
                c
            })
            .collect();
        let lambda = null_vector(&cols).expect("more columns than rows");
        let lambda = if lambda.iter().any(Signed::is_positive) { lambda } else { lambda.iter().map(|v| -v).collect() };
        let theta = support
            .iter()
            .zip(&lambda)
            .filter(|(_, l)| l.is_positive())
            .map(|(&j, l)| &w[j] / l)
            .min()
            .expect("positive entry");
        for (&j, l) in support.iter().zip(&lambda) {
            w[j] -= &theta * l;
            if w[j].is_negative() {
                w[j] = Rational::zero();
            }
        }
    }
}

/// Checks the three optimality conditions at tolerance `tol`.
pub fn verify_certificate(p: &VPolytope, q: &VPolytope, cert: &MatchingCertificate, tol: f64) -> Result<CertificateStatus> {
    let d = p.dim();
    check_dim(d, q.dim())?;
    if !(tol >= 0.0) || !(cert.rho >= 0.0) || !cert.rho.is_finite() {
        return Err(Error::InvalidInput("rho and tol must be finite and nonnegative".into()));
    }
    let count = cert.r.len() + cert.s.len();
    if count > d + 2 {
        return Err(Error::InvalidInput(format!("certificate uses {count} points, more than d + 2 = {}", d + 2)));
    }
    for (x, pi) in &cert.r {
        check_dim(d, x.len())?;
        check_dim(d, pi.len())?;
        if !p.contains_point(x)? {
            return Err(Error::Membership(format!("{x} is not a point of P")));
        }
    }
    for (y, pi) in &cert.s {
        check_dim(d, y.len())?;
        check_dim(d, pi.len())?;
        if !q.contains_point(y)? {
            return Err(Error::Membership(format!("{y} is not a point of Q")));
        }
    }
    let violated = |condition: u8, detail: String| Ok(CertificateStatus::Violated { condition, detail });

    let bound = from_f64(cert.rho) + from_f64(tol);
    let bound_sq = &bound * &bound;
    for x in p.vertices() {
        let v = nearest_v(x, q)?.value_sq;
        if v > bound_sq {
            return violated(1, format!("vertex {x} of P is at distance {} > rho", sqrt_f64(&v)));
        }
    }
    for y in q.vertices() {
        let v = nearest_v(y, p)?.value_sq;
        if v > bound_sq {
            return violated(1, format!("vertex {y} of Q is at distance {} > rho", sqrt_f64(&v)));
        }
    }

    let mut vectors = Vec::with_capacity(count);
    for (role, x, recorded, other) in cert
        .r
        .iter()
        .map(|(x, pi)| ("R", x, pi, q))
        .chain(cert.s.iter().map(|(y, pi)| ("S", y, pi, p)))
    {
        let n = nearest_v(x, other)?;
        let dist = sqrt_f64(&n.value_sq);
        if (dist - cert.rho).abs() > tol {
            return violated(2, format!("{role} point {x} is at distance {dist}, not rho = {}", cert.rho));
        }
        let gap = sqrt_f64(&dist_sq(recorded, &n.minimizer));
        if gap > tol {
            return violated(2, format!("recorded projection of {role} point {x} is off by {gap}"));
        }
        vectors.push(if role == "R" { lifted_p(x, &n.minimizer) } else { lifted_q(x, &n.minimizer) });
    }

    if vectors.is_empty() {
        return violated(3, "no lifted vectors".into());
    }
    if cert.weights.len() == count && cert.weights.iter().all(|w| *w >= -tol) && (cert.weights.iter().sum::<f64>() - 1.0).abs() <= tol {
        let residual = (0..d + 1)
            .map(|i| vectors.iter().zip(&cert.weights).map(|(v, w)| v[i] * w).sum::<f64>().abs())
            .fold(0.0, f64::max);
        if residual <= tol {
            return Ok(CertificateStatus::Valid);
        }
    }
    let (residual, _) = min_residual(&vectors)?;
    if residual > from_f64(tol) {
        return violated(3, format!("0 is at distance {} from the hull of the lifted vectors", to_f64(&residual)));
    }
    Ok(CertificateStatus::Valid)
}

/// Certificate for the current position of `p`, built from pieces within `activity` of the maximum.
pub fn certificate_at(p: &VPolytope, q: &VPolytope, activity: f64) -> Result<MatchingCertificate> {
    let (cert, _, _) = certificate_indices(p, q, activity)?;
    Ok(cert)
}

/// Certificate at the optimum of a matching result; also returns `αP + c`.
pub fn build_certificate(p: &VPolytope, q: &VPolytope, result: &MatchingResult, activity: f64) -> Result<(VPolytope, MatchingCertificate)> {
    let moved = result.homothety.apply(p);
    let cert = certificate_at(&moved, q, activity)?;
    Ok((moved, cert))
}

/// Certificate plus the vertex indices of `R` in `p` and `S` in `q`.
fn certificate_indices(p: &VPolytope, q: &VPolytope, activity: f64) -> Result<(MatchingCertificate, Vec<usize>, Vec<usize>)> {
    let d = p.dim();
    check_dim(d, q.dim())?;
    let pn: Vec<_> = p.vertices().iter().map(|x| nearest_v(x, q)).collect::<Result<_>>()?;
    let qn: Vec<_> = q.vertices().iter().map(|y| nearest_v(y, p)).collect::<Result<_>>()?;
    let rho_sq = pn.iter().chain(&qn).map(|n| n.value_sq.clone()).max().expect("nonempty");
    let rho = sqrt_f64(&rho_sq);
    let mut cand: Vec<(bool, usize)> = Vec::new();
    let mut vectors = Vec::new();
    for (i, n) in pn.iter().enumerate() {
        if rho - sqrt_f64(&n.value_sq) <= activity {
            cand.push((true, i));
            vectors.push(lifted_p(&p.vertices()[i], &n.minimizer));
        }
    }
    for (j, n) in qn.iter().enumerate() {
        if rho - sqrt_f64(&n.value_sq) <= activity {
            cand.push((false, j));
            vectors.push(lifted_q(&q.vertices()[j], &n.minimizer));
        }
    }
    let (_, w) = min_residual(&vectors)?;
    let w = reduce_support(&vectors, w);
    let mut cert = MatchingCertificate { rho, r: Vec::new(), s: Vec::new(), weights: Vec::new() };
    let (mut ri, mut si) = (Vec::new(), Vec::new());
    let mut wr = Vec::new();
    let mut ws = Vec::new();
    for ((is_p, i), wi) in cand.iter().zip(&w) {
        if !wi.is_positive() {
            continue;
        }
        if *is_p {
            cert.r.push((p.vertices()[*i].clone(), pn[*i].minimizer.clone()));
            ri.push(*i);
            wr.push(to_f64(wi));
        } else {
            cert.s.push((q.vertices()[*i].clone(), qn[*i].minimizer.clone()));
            si.push(*i);
            ws.push(to_f64(wi));
        }
    }
    cert.weights = wr.into_iter().chain(ws).collect();
    debug_assert!(cert.r.len() + cert.s.len() <= d + 2);
    Ok((cert, ri, si))
}

// ------------------------------------------------------------ core-sets

#[derive(Clone, Debug, PartialEq)]
pub struct Coreset {
    pub r: Vec<Point>,
    pub s: Vec<Point>,
    /// `δ_H(conv R, conv S)`.
    pub rho: f64,
    /// `δ_H(P, Q)`.
    pub full_rho: f64,
}

pub const CORESET_MAX_POINTS: usize = 30;

/// Supersets of the certificate core examined by the exhaustive fallback.
pub const CORESET_MAX_CANDIDATES: usize = 200_000;

/// Subsets examined when no superset of the certificate points fits.
pub const CORESET_MAX_SUBSETS: usize = 5_000;

/// Extreme points `R`, `S` with `|R| + |S| ≤ d(d + 2)` and `δ_H(conv R, conv S) = δ_H(P, Q)` up to `tol`.
///
/// Any `R`, `S` containing the certificate points have sub-value at least `δ_H(P, Q)`, so a
/// candidate matches once the optimal homothety of the full problem keeps it within `ρ`.
/// Candidates: the certificate points plus the vertices carrying their projections, then all
/// supersets of the certificate points within the bound, then every full-dimensional pair of
/// subsets within the bound. Failure of the last stage is a counterexample to the bound.
pub fn coreset_search(p: &VPolytope, q: &VPolytope, tol: f64) -> Result<Coreset> {
    let d = p.dim();
    check_dim(d, q.dim())?;
    let pe = p.extreme_points();
    let qe = q.extreme_points();
    let (np, nq) = (pe.vertices().len(), qe.vertices().len());
    if np + nq > CORESET_MAX_POINTS {
        return Err(Error::ScaleGuard(format!("{} extreme points exceed limit {CORESET_MAX_POINTS}", np + nq)));
    }
    let inner = L2Options { tol: (tol / 10.0).min(1e-12), ..L2Options::default() };
    let full = match_l2_with(&pe, &qe, &inner)?;
    if full.value.is_zero() {
        let x = pe.vertices()[0].clone();
        let y = full.homothety.apply_point(&x);
        return Ok(Coreset { r: vec![x], s: vec![y], rho: 0.0, full_rho: 0.0 });
    }
    let moved = full.homothety.apply(&pe);
    let (_, r0, s0) = certificate_indices(&moved, &qe, tol.min(1e-9))?;
    let bound = d * (d + 2);
    let slack = from_f64(full.rho + tol);
    let slack_sq = &slack * &slack;
    let fits = |r: &BTreeSet<usize>, s: &BTreeSet<usize>| -> Result<bool> {
        let mr = VPolytope::new(r.iter().map(|&i| moved.vertices()[i].clone()).collect())?;
        let cs = VPolytope::new(s.iter().map(|&j| qe.vertices()[j].clone()).collect())?;
        for x in mr.vertices() {
            if nearest_v(x, &cs)?.value_sq > slack_sq {
                return Ok(false);
            }
        }
        for y in cs.vertices() {
            if nearest_v(y, &mr)?.value_sq > slack_sq {
                return Ok(false);
            }
        }
        Ok(true)
    };

    let core_r: BTreeSet<usize> = r0.iter().copied().collect();
    let core_s: BTreeSet<usize> = s0.iter().copied().collect();
    let mut r = core_r.clone();
    let mut s = core_s.clone();
    // Carathéodory step: vertices carrying each projection.
    for &i in &r0 {
        for (j, _) in nearest_v(&moved.vertices()[i], &qe)?.support {
            s.insert(j);
        }
    }
    for &j in &s0 {
        for (i, _) in nearest_v(&qe.vertices()[j], &moved)?.support {
            r.insert(i);
        }
    }
    let mut found = (r.len() + s.len() <= bound && fits(&r, &s)?).then_some((r, s));
    if found.is_none() {
        let rest: Vec<(bool, usize)> = (0..np)
            .filter(|i| !core_r.contains(i))
            .map(|i| (true, i))
            .chain((0..nq).filter(|j| !core_s.contains(j)).map(|j| (false, j)))
            .collect();
        let room = bound.saturating_sub(core_r.len() + core_s.len()).min(rest.len());
        let mut examined = 0;
        'sizes: for extra in 0..=room {
            for pick in Combinations::new(rest.len(), extra) {
                examined += 1;
                if examined > CORESET_MAX_CANDIDATES {
                    return Err(Error::ScaleGuard(format!("more than {CORESET_MAX_CANDIDATES} core-set candidates")));
                }
                let (mut r, mut s) = (core_r.clone(), core_s.clone());
                for &k in &pick {
                    match rest[k] {
                        (true, i) => r.insert(i),
                        (false, j) => s.insert(j),
                    };
                }
                if !r.is_empty() && !s.is_empty() && fits(&r, &s)? {
                    found = Some((r, s));
                    break 'sizes;
                }
            }
        }
    }
    if let Some((r, s)) = found {
        let rp: Vec<Point> = r.iter().map(|&i| pe.vertices()[i].clone()).collect();
        let sp: Vec<Point> = s.iter().map(|&j| qe.vertices()[j].clone()).collect();
        let (cr, cs) = (VPolytope::new(rp.clone())?, VPolytope::new(sp.clone())?);
        if cr.affine_dim() == d && cs.affine_dim() == d {
            let sub = match_l2_with(&cr, &cs, &inner)?;
            if (sub.rho - full.rho).abs() <= tol {
                return Ok(Coreset { r: rp, s: sp, rho: sub.rho, full_rho: full.rho });
            }
        }
    }
    // Every full-dimensional pair of subsets within the bound.
    let count: usize = (0..=bound.min(np + nq)).map(|k| binomial(np + nq, k)).sum();
    if count > CORESET_MAX_SUBSETS {
        return Err(Error::ScaleGuard(format!(
            "no core-set among certificate supersets; {count} subsets exceed the exhaustive limit {CORESET_MAX_SUBSETS}"
        )));
    }
    let mut closest = f64::INFINITY;
    for k in 2 * (d + 1)..=bound.min(np + nq) {
        for pick in Combinations::new(np + nq, k) {
            let rp: Vec<Point> = pick.iter().filter(|&&i| i < np).map(|&i| pe.vertices()[i].clone()).collect();
            let sp: Vec<Point> = pick.iter().filter(|&&i| i >= np).map(|&i| qe.vertices()[i - np].clone()).collect();
            if rp.len() <= d || sp.len() <= d {
                continue;
            }
            let (cr, cs) = (VPolytope::new(rp.clone())?, VPolytope::new(sp.clone())?);
            if cr.affine_dim() < d || cs.affine_dim() < d {
                continue;
            }
            let sub = match_l2_with(&cr, &cs, &inner)?;
            if (sub.rho - full.rho).abs() <= tol {
                return Ok(Coreset { r: rp, s: sp, rho: sub.rho, full_rho: full.rho });
            }
            closest = closest.min((sub.rho - full.rho).abs());
        }
    }
    Err(Error::TheoremViolation(format!(
        "no core-set within {bound} extreme points reproduces the matching value {}; closest differs by {closest:e}",
        full.rho
    )))
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1usize, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// `k`-subsets of `0..n` in lexicographic order.
struct Combinations {
    n: usize,
    next: Option<Vec<usize>>,
}

impl Combinations {
    fn new(n: usize, k: usize) -> Self {
        Combinations { n, next: (k <= n).then(|| (0..k).collect()) }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let current = self.next.take()?;
        let k = current.len();
        let mut succ = current.clone();
        let mut i = k;
        while i > 0 {
            i -= 1;
            if succ[i] < self.n - k + i {
                succ[i] += 1;
                for j in i + 1..k {
                    succ[j] = succ[j - 1] + 1;
                }
                self.next = Some(succ);
                return Some(current);
            }
        }
        Some(current)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square(r: i64) -> VPolytope {
        VPolytope::from_ints(&[&[-r, -r], &[r, -r], &[r, r], &[-r, r]]).unwrap()
    }

    fn diamond(r: i64) -> VPolytope {
        VPolytope::from_ints(&[&[r, 0], &[-r, 0], &[0, r], &[0, -r]]).unwrap()
    }

    #[test]
    fn polytopal_recovers_homothety() {
        let p = VPolytope::from_ints(&[&[0, 0], &[2, 0], &[1, 3]]).unwrap();
        let q = p.transform(&int(2), &Point::from_ints(&[1, -1]));
        let m = match_polytopal(&p, &q, &NormSpec::LInf).unwrap();
        assert_eq!(m.value, int(0));
        assert_eq!(m.homothety.alpha, int(2));
        assert_eq!(m.homothety.c, Point::from_ints(&[1, -1]));
        let m = match_polytopal(&p, &p, &NormSpec::L1).unwrap();
        assert_eq!(m.value, int(0));
    }

    #[test]
    fn polytopal_not_better_than_identity() {
        let m = match_polytopal(&square(1), &diamond(2), &NormSpec::L1).unwrap();
        let at_identity = crate::hausdorff::hausdorff_vv(&square(1), &diamond(2), &NormSpec::L1).unwrap().value;
        assert!(m.value <= at_identity);
        assert!(m.value.is_positive());
    }

    #[test]
    fn reference_examples() {
        let p = Polytope::V(square(1));
        let q = Polytope::V(VPolytope::from_ints(&[&[0, 0], &[4, 0], &[4, 4], &[0, 4]]).unwrap());
        let h = reference_match(&p, &q).unwrap();
        assert_eq!((h.alpha.clone(), h.c.clone(), h.exact), (int(2), Point::from_ints(&[2, 2]), true));
        let t = Polytope::V(square(1).translate(&Point::from_ints(&[3, -1])));
        let h = reference_match(&p, &t).unwrap();
        assert_eq!((h.alpha, h.c), (int(1), Point::from_ints(&[3, -1])));
        let flat = Polytope::V(VPolytope::from_ints(&[&[1, 1]]).unwrap());
        assert!(reference_match(&flat, &p).is_err());
    }

    #[test]
    fn l2_square_vs_diamond() {
        let m = match_l2(&square(1), &diamond(2), 1e-10).unwrap();
        assert!(m.converged);
        assert!((m.rho - (2.0 - 2f64.sqrt())).abs() < 1e-8, "{}", m.rho);
        assert!((m.homothety.alpha_f64() - 2f64.sqrt()).abs() < 1e-6);
        let (moved, cert) = build_certificate(&square(1), &diamond(2), &m, 1e-7).unwrap();
        assert_eq!(verify_certificate(&moved, &diamond(2), &cert, 1e-6).unwrap(), CertificateStatus::Valid);
    }

    #[test]
    fn l2_exact_homothety() {
        let p = VPolytope::from_ints(&[&[0, 0], &[2, 0], &[1, 3]]).unwrap();
        let q = p.transform(&int(3), &Point::from_ints(&[-1, 2]));
        let m = match_l2(&p, &q, 1e-9).unwrap();
        assert_eq!(m.rho, 0.0);
        assert_eq!(m.homothety.alpha, int(3));
    }

    #[test]
    fn certificate_examples() {
        let p = VPolytope::from_ints(&[&[-1], &[1]]).unwrap();
        let q = VPolytope::from_ints(&[&[-2], &[2]]).unwrap();
        let cert = MatchingCertificate::from_points(&p, &q, 1.0, &[], &[Point::from_ints(&[2]), Point::from_ints(&[-2])]).unwrap();
        assert!(matches!(verify_certificate(&p, &q, &cert, 1e-9).unwrap(), CertificateStatus::Violated { condition: 3, .. }));
        let cert = MatchingCertificate::from_points(&p, &p, 0.0, &[Point::from_ints(&[1])], &[]).unwrap();
        assert_eq!(verify_certificate(&p, &p, &cert, 1e-9).unwrap(), CertificateStatus::Valid);
        let too_many = MatchingCertificate::from_points(&p, &p, 0.0, &vec![Point::from_ints(&[1]); 4], &[]).unwrap();
        assert!(verify_certificate(&p, &p, &too_many, 1e-9).is_err());
    }

    #[test]
    fn restricted_examples() {
        let p = VPolytope::from_ints(&[&[0, 0], &[2, 0], &[0, 2]]).unwrap();
        let q = square(1);
        let ball = NormSpec::LInf;
        let none = restricted_rho(&[], &[], &p, &q, &ball).unwrap();
        assert_eq!(none.value, int(0));
        let full = restricted_rho(p.vertices(), q.vertices(), &p, &q, &ball).unwrap();
        assert_eq!(full.value, match_polytopal(&p, &q, &ball).unwrap().value);
        assert!(restricted_rho(&[Point::from_ints(&[5, 5])], &[], &p, &q, &ball).is_err());
    }

    #[test]
    fn reference_properties_hold() {
        let p = Polytope::V(square(1));
        let q = Polytope::V(square(2));
        let report = reference_point_properties_check(&p, &q, 5, 7).unwrap();
        assert_eq!(report.checks.len(), 7);
        assert!(report.checks.iter().all(|c| c.margin() >= 0.0));
    }
}
