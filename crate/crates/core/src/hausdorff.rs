//! Hausdorff distances: exact V-V evaluation, an oracle for H-presented
//! inputs, and the support-function lower bound.
//!
//! The oracle enumerates the vertices of H-presented inputs and evaluates
//! directed distances against the other body in whichever presentation it
//! came in. An H-presented target is split into independent coordinate
//! blocks (variables never coupled by a row). Under ℓ1, ℓ∞ and ℓ2 the
//! distance to a product is the sum, maximum or root-sum-of-squares of the
//! block distances. For polytopal norms a small block is tabulated once:
//! `d(x, Q) = max(0, max_u (uᵀx − h(Q, u)))` over the vertices `u` of the
//! cells `N(Q, q) ∩ 𝔹°`, which turns each evaluation into a handful of
//! integer dot products. Larger blocks fall back to one LP per point.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::distance::point_distance;
use crate::error::{check_dim, Error, Result};
use crate::norm::NormSpec;
use crate::point::{dot, Point};
use crate::polytope::{HPolytope, HRow, Polytope, VPolytope};
use crate::qp::nearest_h;
use crate::rational::{common_denominator, Rational};
use crate::vertex_enum::{integerize, vertex_enumeration_with, ScaleGuard};

#[derive(Clone, Debug, PartialEq)]
pub struct HausdorffResult {
    /// `max(directed_pq, directed_qp)`; squared for ℓ2.
    pub value: Rational,
    pub directed_pq: Rational,
    pub directed_qp: Rational,
    /// Vertex of `P` farthest from `Q`.
    pub argmax_p: Point,
    /// Vertex of `Q` farthest from `P`.
    pub argmax_q: Point,
}

/// Exact Hausdorff distance of two V-polytopes; squared for ℓ2.
pub fn hausdorff_vv(p: &VPolytope, q: &VPolytope, norm: &NormSpec) -> Result<HausdorffResult> {
    check_dim(p.dim(), q.dim())?;
    norm.check_dim(p.dim())?;
    let pt = Polytope::V(p.clone());
    let qt = Polytope::V(q.clone());
    let (directed_pq, argmax_p) = directed_to_polytope(p.vertices(), &qt, norm)?;
    let (directed_qp, argmax_q) = directed_to_polytope(q.vertices(), &pt, norm)?;
    Ok(finish(directed_pq, argmax_p, directed_qp, argmax_q))
}

fn directed_to_polytope(points: &[Point], target: &Polytope, norm: &NormSpec) -> Result<(Rational, Point)> {
    let mut best: Option<(Rational, &Point)> = None;
    for x in points {
        let v = point_distance(x, target, norm)?.value;
        if best.as_ref().map_or(true, |(b, _)| v > *b) {
            best = Some((v, x));
        }
    }
    let (v, x) = best.expect("nonempty vertex list");
    Ok((v, x.clone()))
}

fn finish(directed_pq: Rational, argmax_p: Point, directed_qp: Rational, argmax_q: Point) -> HausdorffResult {
    let value = directed_pq.clone().max(directed_qp.clone());
    HausdorffResult { value, directed_pq, directed_qp, argmax_p, argmax_q }
}

/// Exact Hausdorff distance for any presentations; H inputs pass through vertex enumeration.
pub fn hausdorff_oracle(p: &Polytope, q: &Polytope, norm: &NormSpec) -> Result<HausdorffResult> {
    hausdorff_oracle_with(p, q, norm, &ScaleGuard::from_env()?)
}

pub fn hausdorff_oracle_with(p: &Polytope, q: &Polytope, norm: &NormSpec, guard: &ScaleGuard) -> Result<HausdorffResult> {
    check_dim(p.dim(), q.dim())?;
    norm.check_dim(p.dim())?;
    if let (Polytope::V(pv), Polytope::V(qv)) = (p, q) {
        return hausdorff_vv(pv, qv, norm);
    }
    let ps = Prepared::new(p, norm, guard)?;
    let qs = Prepared::new(q, norm, guard)?;
    let (directed_pq, argmax_p) = ps.directed_to(&qs, norm)?;
    let (directed_qp, argmax_q) = qs.directed_to(&ps, norm)?;
    Ok(finish(directed_pq, argmax_p, directed_qp, argmax_q))
}

/// `|h(P,u) − h(Q,u)| / h(𝔹, u)`, a lower bound on `δ(P, Q)`; squared for ℓ2.
pub fn support_gap(p: &Polytope, q: &Polytope, u: &[Rational], norm: &NormSpec) -> Result<Rational> {
    check_dim(p.dim(), u.len())?;
    check_dim(q.dim(), u.len())?;
    if u.iter().all(Zero::is_zero) {
        return Err(Error::InvalidInput("direction must be nonzero".into()));
    }
    let gap = (p.support(u)? - q.support(u)?).abs();
    let dual = norm.dual_eval(u)?;
    Ok(if norm.is_euclidean() { &gap * &gap / dual } else { gap / dual })
}

// ------------------------------------------------------------ oracle internals

/// A polytope with its vertex list, plus the block structure of H inputs.
struct Prepared<'a> {
    vertices: Vec<Point>,
    source: &'a Polytope,
    blocks: Vec<Block>,
}

struct Block {
    vars: Vec<usize>,
    poly: HPolytope,
    vertices: VPolytope,
    eval: BlockEval,
}

enum BlockEval {
    /// Integer rows `[L·u, −L·h(Q,u)]` and the scale `L`.
    Table { rows: Vec<Vec<BigInt>>, scale: BigInt },
    Program,
}

impl<'a> Prepared<'a> {
    fn new(p: &'a Polytope, norm: &NormSpec, guard: &ScaleGuard) -> Result<Self> {
        match p {
            Polytope::V(v) => Ok(Prepared { vertices: v.vertices().to_vec(), source: p, blocks: Vec::new() }),
            Polytope::H(h) => {
                guard_check(h, guard)?;
                let separable = matches!(norm, NormSpec::L1 | NormSpec::LInf | NormSpec::L2);
                let groups = if separable { variable_blocks(h)? } else { vec![(0..h.dim()).collect()] };
                let mut blocks = Vec::with_capacity(groups.len());
                for vars in groups {
                    let poly = restrict(h, &vars)?;
                    let vertices = vertex_enumeration_with(&poly, guard)?;
                    let eval = block_eval(&poly, &vertices, norm, guard)?;
                    blocks.push(Block { vars, poly, vertices, eval });
                }
                let count: usize = blocks.iter().map(|b| b.vertices.vertices().len()).product();
                if count > guard.max_rays {
                    return Err(Error::ScaleGuard(format!("{count} vertices exceed limit {}", guard.max_rays)));
                }
                let vertices = product_vertices(h.dim(), &blocks);
                Ok(Prepared { vertices, source: p, blocks })
            }
        }
    }

    /// `h(self, a)`, block-wise for H inputs.
    fn support(&self, a: &[Rational]) -> Rational {
        if self.blocks.is_empty() {
            return self.vertices.iter().map(|v| dot(v, a)).max().expect("nonempty");
        }
        self.blocks
            .iter()
            .map(|b| {
                let dir: Vec<Rational> = b.vars.iter().map(|&i| a[i].clone()).collect();
                b.vertices.support_argmax(&dir).0
            })
            .sum()
    }

    fn directed_to(&self, target: &Prepared, norm: &NormSpec) -> Result<(Rational, Point)> {
        match target.source {
            Polytope::V(_) => directed_to_polytope(&self.vertices, target.source, norm),
            Polytope::H(h) => {
                if h.rows().iter().all(|r| self.support(&r.a) <= r.b) {
                    return Ok((Rational::zero(), self.vertices[0].clone()));
                }
                let mut best: Option<(Rational, usize)> = None;
                for (i, x) in self.vertices.iter().enumerate() {
                    let v = target.distance_h(x, norm)?;
                    if best.as_ref().map_or(true, |(b, _)| v > *b) {
                        best = Some((v, i));
                    }
                }
                let (v, i) = best.expect("nonempty");
                Ok((v, self.vertices[i].clone()))
            }
        }
    }

    /// Distance from `x` to this H-polytope through its blocks.
    fn distance_h(&self, x: &[Rational], norm: &NormSpec) -> Result<Rational> {
        let mut total = Rational::zero();
        for b in &self.blocks {
            let xb: Vec<Rational> = b.vars.iter().map(|&i| x[i].clone()).collect();
            let v = match (&b.eval, norm) {
                (BlockEval::Table { rows, scale }, _) => table_distance(rows, scale, &xb),
                _ if b.poly.contains_point(&xb)? => Rational::zero(),
                (BlockEval::Program, NormSpec::L2) => nearest_h(&xb, &b.poly)?.value_sq,
                (BlockEval::Program, _) => point_distance(&xb, &Polytope::H(b.poly.clone()), norm)?.value,
            };
            match norm {
                NormSpec::LInf => total = total.max(v),
                _ => total += v,
            }
        }
        Ok(total)
    }
}

fn guard_check(h: &HPolytope, guard: &ScaleGuard) -> Result<()> {
    if h.dim() > guard.max_dim {
        return Err(Error::ScaleGuard(format!("dimension {} exceeds limit {}", h.dim(), guard.max_dim)));
    }
    if h.rows().len() > guard.max_rows {
        return Err(Error::ScaleGuard(format!("{} rows exceed limit {}", h.rows().len(), guard.max_rows)));
    }
    Ok(())
}

/// Connected components of variables coupled by rows.
fn variable_blocks(h: &HPolytope) -> Result<Vec<Vec<usize>>> {
    let d = h.dim();
    let mut parent: Vec<usize> = (0..d).collect();
    fn find(parent: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while parent[r] != r {
            r = parent[r];
        }
        let mut j = i;
        while parent[j] != r {
            let next = parent[j];
            parent[j] = r;
            j = next;
        }
        r
    }
    let mut covered = vec![false; d];
    for r in h.rows() {
        let nz: Vec<usize> = (0..d).filter(|&k| !r.a[k].is_zero()).collect();
        if nz.is_empty() && r.b.is_negative() {
            return Err(Error::Empty);
        }
        for &k in &nz {
            covered[k] = true;
        }
        for w in nz.windows(2) {
            let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    if covered.iter().any(|c| !c) {
        return Err(Error::Unbounded(None));
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut root_index = vec![usize::MAX; d];
    for k in 0..d {
        let r = find(&mut parent, k);
        if root_index[r] == usize::MAX {
            root_index[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[root_index[r]].push(k);
    }
    Ok(groups)
}

fn restrict(h: &HPolytope, vars: &[usize]) -> Result<HPolytope> {
    let rows = h
        .rows()
        .iter()
        .filter(|r| vars.iter().any(|&k| !r.a[k].is_zero()))
        .map(|r| HRow { a: Point::new(vars.iter().map(|&k| r.a[k].clone()).collect()), b: r.b.clone() })
        .collect();
    HPolytope::new(vars.len(), rows)
}

fn product_vertices(dim: usize, blocks: &[Block]) -> Vec<Point> {
    let mut out: Vec<Vec<Rational>> = vec![vec![Rational::zero(); dim]];
    for b in blocks {
        let mut next = Vec::with_capacity(out.len() * b.vertices.vertices().len());
        for partial in &out {
            for v in b.vertices.vertices() {
                let mut x = partial.clone();
                for (&k, c) in b.vars.iter().zip(v.iter()) {
                    x[k] = c.clone();
                }
                next.push(x);
            }
        }
        out = next;
    }
    out.into_iter().map(Point::new).collect()
}

const TABLE_MAX_DIM: usize = 4;
const TABLE_MAX_VERTICES: usize = 256;

/// Rows `(w, 1)` with `𝔹° = {u : wᵀu ≤ 1}` for the ball restricted to `dim` coordinates.
fn dual_ball_rows(norm: &NormSpec, dim: usize, guard: &ScaleGuard) -> Result<Option<Vec<Point>>> {
    Ok(Some(match norm {
        NormSpec::L2 => return Ok(None),
        NormSpec::L1 => (0..dim).flat_map(|i| [Point::unit(dim, i), Point::unit(dim, i).neg()]).collect(),
        NormSpec::LInf => (0..1usize << dim)
            .map(|mask| Point::new((0..dim).map(|i| if mask >> i & 1 == 1 { -Rational::one() } else { Rational::one() }).collect()))
            .collect(),
        NormSpec::PolytopalV(b) => b.vertices().to_vec(),
        NormSpec::PolytopalH(b) => vertex_enumeration_with(b, guard)?.vertices().to_vec(),
    }))
}

fn block_eval(poly: &HPolytope, vertices: &VPolytope, norm: &NormSpec, guard: &ScaleGuard) -> Result<BlockEval> {
    let dim = poly.dim();
    let verts = vertices.vertices();
    if dim > TABLE_MAX_DIM || verts.len() > TABLE_MAX_VERTICES {
        return Ok(BlockEval::Program);
    }
    let Some(dual_rows) = dual_ball_rows(norm, dim, guard)? else {
        return Ok(BlockEval::Program);
    };
    let mut candidates: Vec<(Point, Rational)> = Vec::new();
    for (i, q) in verts.iter().enumerate() {
        let mut rows: Vec<HRow> = verts
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, other)| HRow { a: other.sub(q), b: Rational::zero() })
            .collect();
        rows.extend(dual_rows.iter().map(|w| HRow { a: w.clone(), b: Rational::one() }));
        let cell = HPolytope::new(dim, rows)?;
        for u in vertex_enumeration_with(&cell, &ScaleGuard::UNLIMITED)?.vertices() {
            let h = dot(u, q);
            candidates.push((u.clone(), h));
        }
    }
    candidates.sort();
    candidates.dedup();
    let table: Vec<Vec<Rational>> = candidates
        .into_iter()
        .map(|(u, h)| {
            let mut row = u.into_coords();
            row.push(-h);
            row
        })
        .collect();
    let l = common_denominator(table.iter().flatten());
    let rows = table
        .iter()
        .map(|row| row.iter().map(|x| x.numer() * (&l / x.denom())).collect())
        .collect();
    Ok(BlockEval::Table { rows, scale: l })
}

fn table_distance(rows: &[Vec<BigInt>], scale: &BigInt, x: &[Rational]) -> Rational {
    let mut hom: Vec<Rational> = x.to_vec();
    hom.push(Rational::one());
    let y = integerize_positive(&hom);
    let t = y.last().expect("homogenizing coordinate").clone();
    let mut best = BigInt::zero();
    for w in rows {
        let mut s = BigInt::zero();
        for (a, b) in w.iter().zip(&y) {
            if !a.is_zero() && !b.is_zero() {
                s += a * b;
            }
        }
        if s > best {
            best = s;
        }
    }
    Rational::new(best, scale * t)
}

/// Integer multiple of `v` whose last coordinate stays positive.
fn integerize_positive(v: &[Rational]) -> Vec<BigInt> {
    let ints = integerize(v);
    debug_assert!(ints.last().map_or(false, Signed::is_positive));
    ints
}
