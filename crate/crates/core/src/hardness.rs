//! Generators for hard Hausdorff instances: the Clique construction with two
//! nested 0-symmetric H-polytopes in ℝ^{2k}, and the norm-maximization
//! instance `(P, {0})`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::point::{dot, Point};
use crate::polytope::{direct_product, is_zero_symmetric, HPolytope, HRow, Polytope, VPolytope};
use crate::rational::{int, Rational};
use crate::vertex_enum::{vertex_enumeration_with, ScaleGuard};

/// Undirected simple graph on vertices `1..=m` and a clique size `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphInstance {
    pub m: usize,
    pub edges: BTreeSet<(usize, usize)>,
    pub k: usize,
}

impl GraphInstance {
    /// Edges are 1-based pairs; loops and out-of-range endpoints are rejected.
    pub fn new(m: usize, k: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if k == 0 || k > m {
            return Err(Error::InvalidInput(format!("clique size {k} must satisfy 1 <= k <= m = {m}")));
        }
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u == v || u == 0 || v == 0 || u > m || v > m {
                return Err(Error::InvalidInput(format!("invalid edge {u}-{v} for m = {m}")));
            }
            set.insert((u.min(v), u.max(v)));
        }
        Ok(GraphInstance { m, edges: set, k })
    }

    /// Parses `"1-2,2-3"`.
    pub fn parse_edges(text: &str) -> Result<Vec<(usize, usize)>> {
        text.split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|e| {
                let (a, b) = e
                    .split_once('-')
                    .ok_or_else(|| Error::InvalidInput(format!("edge {e:?} is not of the form u-v")))?;
                let parse = |s: &str| {
                    s.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::InvalidInput(format!("edge endpoint {s:?} is not a positive integer")))
                };
                Ok((parse(a)?, parse(b)?))
            })
            .collect()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CliqueReductionOutput {
    pub p: HPolytope,
    pub q: HPolytope,
    pub epsilon: Rational,
    pub k_eps: Rational,
    /// Half the number of polygon facets actually used (`2m` unless padded).
    pub n: usize,
}

/// Exhaustive search over `k`-subsets.
pub fn brute_force_clique(g: &GraphInstance) -> bool {
    fn extend(g: &GraphInstance, chosen: &mut Vec<usize>, next: usize) -> bool {
        if chosen.len() == g.k {
            return true;
        }
        for v in next..=g.m {
            if chosen.iter().all(|&u| g.has_edge(u, v)) {
                chosen.push(v);
                if extend(g, chosen, v + 1) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    g.m <= 20 && extend(g, &mut Vec::new(), 1)
}

// ------------------------------------------------------------ trigonometry

const FIXED_BITS: u64 = 256;
const GUARD_BITS: u64 = 32;

fn fixed_one() -> BigInt {
    BigInt::one() << (FIXED_BITS + GUARD_BITS)
}

/// `arctan(1/x)` in fixed point.
fn arctan_inv(x: u64) -> BigInt {
    let one = fixed_one();
    let x = BigInt::from(x);
    let x2 = &x * &x;
    let mut power = &one / &x;
    let mut sum = power.clone();
    let mut k = 1u64;
    loop {
        power = &power / &x2;
        if power.is_zero() {
            break;
        }
        let term = &power / BigInt::from(2 * k + 1);
        if k % 2 == 1 {
            sum -= term;
        } else {
            sum += term;
        }
        k += 1;
    }
    sum
}

fn fixed_pi() -> BigInt {
    (BigInt::from(16) * arctan_inv(5)) - (BigInt::from(4) * arctan_inv(239))
}

/// `(cos θ, sin θ)` in fixed point by Taylor series.
fn cos_sin(theta: &BigInt) -> (BigInt, BigInt) {
    let one = fixed_one();
    let mut cos = one.clone();
    let mut sin = theta.clone();
    let mut term = theta.clone();
    let mut k = 1u64;
    loop {
        term = (&term * theta) >> (FIXED_BITS + GUARD_BITS);
        term = &term / BigInt::from(k + 1);
        if term.is_zero() {
            break;
        }
        match (k + 1) % 4 {
            0 => cos += &term,
            1 => sin += &term,
            2 => cos -= &term,
            _ => sin -= &term,
        }
        k += 1;
    }
    (cos, sin)
}

/// `round(x · scale)` for fixed-point `x` and rational `scale`, ties away from zero.
fn round_scaled(x: &BigInt, scale: &Rational) -> BigInt {
    let num = x * scale.numer();
    let den = (BigInt::one() << (FIXED_BITS + GUARD_BITS)) * scale.denom();
    let twice = (&num * 2i32).abs() + &den;
    let q = twice.div_floor(&(&den * 2i32));
    if num.is_negative() {
        -q
    } else {
        q
    }
}

/// Vertices of the regular `2n`-gon on the unit circle rounded to `(U/2)ℤ²`.
///
/// The first `n` points sit at angles `π(v−1)/n`; the remaining ones are
/// their negatives, so the output is 0-symmetric.
pub fn rounded_2ngon(n: usize, u: &Rational) -> Result<Vec<Point>> {
    if n < 2 {
        return Err(Error::InvalidInput("the polygon needs n >= 2".into()));
    }
    if !u.is_positive() {
        return Err(Error::InvalidInput("grid constant must be positive".into()));
    }
    let grid = u / int(2);
    let inv_grid = grid.recip();
    let pi = fixed_pi();
    let mut pts = Vec::with_capacity(2 * n);
    for v in 0..n {
        let theta = (&pi * BigInt::from(v)) / BigInt::from(n);
        let (c, s) = cos_sin(&theta);
        let x = Rational::from_integer(round_scaled(&c, &inv_grid)) * &grid;
        let y = Rational::from_integer(round_scaled(&s, &inv_grid)) * &grid;
        pts.push(Point::new(vec![x, y]));
    }
    for v in 0..n {
        let neg = pts[v].neg();
        pts.push(neg);
    }
    Ok(pts)
}

// ------------------------------------------------------------ Clique instance

struct PlanarPieces {
    rows: Vec<HRow>,
    epsilon: Rational,
}

fn linf(p: &Point) -> Rational {
    p.iter().map(|x| x.abs()).max().expect("planar point")
}

/// Builds the planar polygon and its facet labels; `None` if a check fails.
fn planar_pieces(n: usize, k: usize) -> Result<Option<PlanarPieces>> {
    let u = Rational::new(BigInt::one(), BigInt::from(n * n * k * k));
    let pbar = rounded_2ngon(n, &u)?;
    let rows: Vec<HRow> = pbar
        .iter()
        .map(|p| {
            let s = linf(p);
            HRow { a: p.scale(&s.recip()), b: s.recip() }
        })
        .collect();
    let p1 = HPolytope::new(2, rows.clone())?;
    let verts = vertex_enumeration_with(&p1, &ScaleGuard::UNLIMITED)?;
    // Every inequality induces an edge.
    for r in &rows {
        let tight = verts.vertices().iter().filter(|v| dot(&r.a, v) == r.b).count();
        if tight < 2 {
            return Ok(None);
        }
    }
    let two_n = rows.len();
    let mut eps_min: Option<Rational> = None;
    for v in 0..n {
        let c = &rows[2 * v];
        if linf(&c.a) != int(1) || !c.b.is_positive() {
            return Ok(None);
        }
        let a_next = &rows[(2 * v + 1) % two_n];
        if linf(&a_next.a) != int(1) || !a_next.b.is_positive() {
            return Ok(None);
        }
        // A unit coordinate direction e with eᵀc = 1 must see both neighbouring a's positively.
        let axis = (0..2).find(|&i| c.a[i].abs() == int(1)).expect("unit infinity norm");
        let sign = c.a[axis].clone();
        for w in [(2 * v + two_n - 1) % two_n, (2 * v + 1) % two_n] {
            if !(&rows[w].a[axis] * &sign).is_positive() {
                return Ok(None);
            }
        }
        let values: Vec<Rational> = verts.vertices().iter().map(|p| dot(&c.a, p)).collect();
        let below = values.iter().filter(|x| **x != c.b).max().expect("polygon has off-facet vertices");
        let eps_v = &c.b - below;
        if eps_min.as_ref().map_or(true, |e| eps_v < *e) {
            eps_min = Some(eps_v);
        }
    }
    let epsilon = eps_min.expect("n >= 1") / int(10);
    Ok(Some(PlanarPieces { rows, epsilon }))
}

fn embed(parts: &[(usize, &Point)], dim: usize) -> Point {
    let mut a = vec![Rational::zero(); dim];
    for (block, p) in parts {
        a[2 * block] += &p[0];
        a[2 * block + 1] += &p[1];
    }
    Point::new(a)
}

/// The pair `(P, Q)` in ℝ^{2k} with `δ₁(P,Q) = kε` exactly when the graph has a `k`-clique.
pub fn gen_clique_instance(g: &GraphInstance) -> Result<CliqueReductionOutput> {
    if g.m > 6 || g.k > 3 {
        return Err(Error::ScaleGuard(format!(
            "clique instances are limited to m <= 6 and k <= 3 (got m = {}, k = {})",
            g.m, g.k
        )));
    }
    let k = g.k;
    let mut m = g.m;
    for _ in 0..4 {
        let n = 2 * m;
        if let Some(pieces) = planar_pieces(n, k)? {
            return Ok(assemble(g, m, n, k, pieces)?);
        }
        // Pad with isolated vertices; a k-clique exists in the padded graph iff in the original.
        m *= 2;
    }
    Err(Error::SelfCheck("planar polygon checks failed after repeated refinement".into()))
}

fn assemble(g: &GraphInstance, m: usize, n: usize, k: usize, pieces: PlanarPieces) -> Result<CliqueReductionOutput> {
    let PlanarPieces { rows, epsilon } = pieces;
    let dim = 2 * k;
    let p1 = HPolytope::new(2, rows.clone())?;
    let q1_rows: Vec<HRow> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| if i % 2 == 0 { HRow { a: r.a.clone(), b: &r.b - &epsilon } } else { r.clone() })
        .collect();
    let q1 = HPolytope::new(2, q1_rows)?;
    let p2 = direct_product(&vec![p1; k])?;
    let q = direct_product(&vec![q1.clone(); k])?;
    let c = |v: usize| &rows[2 * v];
    let mut p_rows: Vec<HRow> = p2.rows().to_vec();
    for i in 0..k {
        for j in i + 1..k {
            for v in 0..m {
                for w in 0..m {
                    let edge = v != w && v < g.m && w < g.m && g.has_edge(v + 1, w + 1);
                    if edge {
                        continue;
                    }
                    let bound = &c(v).b + &c(w).b - &epsilon;
                    let neg_w = c(w).a.neg();
                    for second in [&c(w).a, &neg_w] {
                        let a = embed(&[(i, &c(v).a), (j, second)], dim);
                        p_rows.push(HRow { a: a.neg(), b: bound.clone() });
                        p_rows.push(HRow { a, b: bound.clone() });
                    }
                }
            }
        }
    }
    let p = HPolytope::new(dim, p_rows)?;
    // Q ⊆ P through block-wise support values of Q.
    let q1_vertices = vertex_enumeration_with(&q1, &ScaleGuard::UNLIMITED)?;
    for (idx, r) in p.rows().iter().enumerate() {
        let h: Rational = (0..k)
            .map(|b| {
                let dir = [r.a[2 * b].clone(), r.a[2 * b + 1].clone()];
                q1_vertices.support_argmax(&dir).0
            })
            .sum();
        if h > r.b {
            return Err(Error::SelfCheck(format!("Q is not contained in P (row {idx})")));
        }
    }
    if !is_zero_symmetric(&Polytope::H(p.clone())) || !is_zero_symmetric(&Polytope::H(q.clone())) {
        return Err(Error::SelfCheck("generated polytopes are not 0-symmetric".into()));
    }
    let k_eps = &epsilon * int(k as i64);
    Ok(CliqueReductionOutput { p, q, epsilon, k_eps, n })
}

// ------------------------------------------------------------ Normmax

/// Exponent of the norm-maximization problem.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormExponent {
    One,
    Two,
    Infinity,
}

#[derive(Clone, Debug, PartialEq)]
pub struct NormmaxInstance {
    pub p: HPolytope,
    /// The single point `{0}`.
    pub q: VPolytope,
    pub gamma: Rational,
    pub exponent: NormExponent,
}

/// `max{‖x‖ₚᵖ : x ∈ P} ≥ γ` becomes `δₚ(P, {0})ᵖ ≥ γ`.
pub fn gen_normmax_instance(p: &HPolytope, gamma: Rational, exponent: NormExponent) -> Result<NormmaxInstance> {
    if !is_zero_symmetric(&Polytope::H(p.clone())) {
        return Err(Error::InvalidInput("norm maximization needs a 0-symmetric polytope".into()));
    }
    p.ensure_bounded()?;
    let q = VPolytope::new(vec![Point::zeros(p.dim())])?;
    Ok(NormmaxInstance { p: p.clone(), q, gamma, exponent })
}
