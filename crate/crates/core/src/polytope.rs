//! V- and H-presented polytopes with exact support functions.

use std::sync::OnceLock;

use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{check_dim, Error, Result};
use crate::lp::{solve_lp, LPOutcome, LinearProgram, Terms};
use crate::point::{dot, Point};
use crate::rational::{format_rational, int, parse_rational, Rational};

/// Convex hull of finitely many points.
#[derive(Clone, Debug, PartialEq)]
pub struct VPolytope {
    dim: usize,
    vertices: Vec<Point>,
}

/// One inequality `aᵀx ≤ b`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HRow {
    pub a: Point,
    pub b: Rational,
}

/// Intersection of halfspaces.
#[derive(Clone, Debug)]
pub struct HPolytope {
    dim: usize,
    rows: Vec<HRow>,
    bounded: OnceLock<bool>,
}

impl PartialEq for HPolytope {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.rows == other.rows
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Polytope {
    V(VPolytope),
    H(HPolytope),
}

/// Axis-parallel bounding box.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundingBox {
    pub lower: Point,
    pub upper: Point,
    pub diam_sq: Rational,
}

impl VPolytope {
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        let first = vertices
            .first()
            .ok_or_else(|| Error::InvalidInput("V-polytope needs at least one point".into()))?;
        let dim = first.dim();
        if dim == 0 {
            return Err(Error::InvalidInput("dimension must be positive".into()));
        }
        for v in &vertices {
            check_dim(dim, v.dim())?;
        }
        Ok(VPolytope { dim, vertices })
    }

    pub fn from_ints(points: &[&[i64]]) -> Result<Self> {
        Self::new(points.iter().map(|p| Point::from_ints(p)).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The generating points (not necessarily all extreme).
    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn support(&self, a: &[Rational]) -> Result<Rational> {
        check_dim(self.dim, a.len())?;
        Ok(self.support_argmax(a).0)
    }

    pub(crate) fn support_argmax(&self, a: &[Rational]) -> (Rational, usize) {
        let mut best = (dot(&self.vertices[0], a), 0);
        for (i, v) in self.vertices.iter().enumerate().skip(1) {
            let val = dot(v, a);
            if val > best.0 {
                best = (val, i);
            }
        }
        best
    }

    /// Image under `x ↦ αx + c`.
    pub fn transform(&self, alpha: &Rational, c: &[Rational]) -> VPolytope {
        let vertices = self
            .vertices
            .iter()
            .map(|v| Point::new(v.iter().zip(c).map(|(x, t)| alpha * x + t).collect()))
            .collect();
        VPolytope { dim: self.dim, vertices }
    }

    pub fn translate(&self, t: &[Rational]) -> VPolytope {
        self.transform(&Rational::one(), t)
    }

    /// Cartesian product; the vertex list is the product of the vertex lists.
    pub fn product(parts: &[VPolytope]) -> Result<VPolytope> {
        let first = parts
            .first()
            .ok_or_else(|| Error::InvalidInput("direct product of an empty list".into()))?;
        let mut vertices = first.vertices.clone();
        for part in &parts[1..] {
            let mut next = Vec::with_capacity(vertices.len() * part.vertices.len());
            for v in &vertices {
                for w in &part.vertices {
                    next.push(v.concat(w));
                }
            }
            vertices = next;
        }
        VPolytope::new(vertices)
    }

    /// Removes duplicate points and points that are convex combinations of the others.
    pub fn extreme_points(&self) -> VPolytope {
        let mut pts = self.vertices.clone();
        pts.sort();
        pts.dedup();
        let mut keep = Vec::new();
        for (i, p) in pts.iter().enumerate() {
            let others: Vec<&Point> = pts.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, q)| q).collect();
            if others.is_empty() || !in_convex_hull(&others, p) {
                keep.push(p.clone());
            }
        }
        VPolytope { dim: self.dim, vertices: keep }
    }

    /// Dimension of the affine hull.
    pub fn affine_dim(&self) -> usize {
        let base = &self.vertices[0];
        let diffs: Vec<Vec<Rational>> = self.vertices[1..].iter().map(|v| v.sub(base).into_coords()).collect();
        crate::linalg::rank(&diffs)
    }

    pub fn contains_point(&self, x: &[Rational]) -> Result<bool> {
        check_dim(self.dim, x.len())?;
        let refs: Vec<&Point> = self.vertices.iter().collect();
        Ok(in_convex_hull(&refs, x))
    }
}

/// LP feasibility of `x = Σλᵢpᵢ`, `λ ∈ Δ`.
fn in_convex_hull(points: &[&Point], x: &[Rational]) -> bool {
    if points.iter().any(|p| p.coords() == x) {
        return true;
    }
    let n = points.len();
    let d = x.len();
    let mut lp = LinearProgram::new(n);
    for j in 0..n {
        lp.set_nonneg(j);
    }
    for k in 0..d {
        let terms: Terms = (0..n)
            .filter(|&j| !points[j][k].is_zero())
            .map(|j| (j, points[j][k].clone()))
            .collect();
        lp.add_eq_terms(terms, x[k].clone());
    }
    lp.add_eq_terms((0..n).map(|j| (j, Rational::one())).collect(), Rational::one());
    matches!(solve_lp(&lp), LPOutcome::Optimal { .. })
}

impl HPolytope {
    pub fn new(dim: usize, rows: Vec<HRow>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput("dimension must be positive".into()));
        }
        for (i, r) in rows.iter().enumerate() {
            if r.a.dim() != dim {
                return Err(Error::InvalidInput(format!(
                    "row {i}: normal has {} coordinates, expected {dim}",
                    r.a.dim()
                )));
            }
        }
        Ok(HPolytope { dim, rows, bounded: OnceLock::new() })
    }

    pub fn from_rows(dim: usize, rows: &[(&[i64], i64)]) -> Result<Self> {
        Self::new(
            dim,
            rows.iter().map(|(a, b)| HRow { a: Point::from_ints(a), b: int(*b) }).collect(),
        )
    }

    /// `{x : |xᵢ| ≤ r}`.
    pub fn cube(dim: usize, r: Rational) -> Self {
        let mut rows = Vec::with_capacity(2 * dim);
        for i in 0..dim {
            rows.push(HRow { a: Point::unit(dim, i), b: r.clone() });
            rows.push(HRow { a: Point::unit(dim, i).neg(), b: r.clone() });
        }
        HPolytope { dim, rows, bounded: OnceLock::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rows(&self) -> &[HRow] {
        &self.rows
    }

    /// Recession cone is trivial: the normals positively span the space.
    pub fn is_bounded(&self) -> bool {
        *self.bounded.get_or_init(|| {
            let normals: Vec<Vec<Rational>> = self.rows.iter().map(|r| r.a.coords().to_vec()).collect();
            if crate::linalg::rank(&normals) < self.dim {
                return false;
            }
            // Some strictly positive combination of the normals vanishes.
            let m = self.rows.len();
            let mut lp = LinearProgram::new(m);
            for i in 0..m {
                lp.add_ge_terms(vec![(i, Rational::one())], Rational::one());
            }
            for k in 0..self.dim {
                let terms: Terms = (0..m)
                    .filter(|&i| !self.rows[i].a[k].is_zero())
                    .map(|i| (i, self.rows[i].a[k].clone()))
                    .collect();
                lp.add_eq_terms(terms, Rational::zero());
            }
            matches!(solve_lp(&lp), LPOutcome::Optimal { .. })
        })
    }

    pub fn ensure_bounded(&self) -> Result<()> {
        if self.is_bounded() {
            Ok(())
        } else {
            Err(Error::Unbounded(None))
        }
    }

    pub fn contains_point(&self, x: &[Rational]) -> Result<bool> {
        check_dim(self.dim, x.len())?;
        Ok(self.rows.iter().all(|r| dot(&r.a, x) <= r.b))
    }

    /// LP maximizer of `aᵀx`.
    pub fn support_argmax(&self, a: &[Rational]) -> Result<(Rational, Point)> {
        check_dim(self.dim, a.len())?;
        let mut lp = LinearProgram::new(self.dim);
        lp.maximize(a);
        for r in &self.rows {
            lp.add_le(&r.a, r.b.clone());
        }
        match solve_lp(&lp) {
            LPOutcome::Optimal { value, solution, .. } => Ok((value, solution)),
            LPOutcome::Infeasible => Err(Error::Empty),
            LPOutcome::Unbounded => Err(Error::Unbounded(Some(Point::new(a.to_vec()).to_string()))),
        }
    }

    pub fn support(&self, a: &[Rational]) -> Result<Rational> {
        Ok(self.support_argmax(a)?.0)
    }

    /// Image under `x ↦ αx + c` for `α > 0`.
    pub fn transform(&self, alpha: &Rational, c: &[Rational]) -> HPolytope {
        let rows = self
            .rows
            .iter()
            .map(|r| HRow { a: r.a.clone(), b: alpha * &r.b + dot(&r.a, c) })
            .collect();
        HPolytope { dim: self.dim, rows, bounded: OnceLock::new() }
    }
}

impl Polytope {
    pub fn dim(&self) -> usize {
        match self {
            Polytope::V(p) => p.dim(),
            Polytope::H(p) => p.dim(),
        }
    }

    pub fn support(&self, a: &[Rational]) -> Result<Rational> {
        match self {
            Polytope::V(p) => p.support(a),
            Polytope::H(p) => p.support(a),
        }
    }

    pub fn contains_point(&self, x: &[Rational]) -> Result<bool> {
        match self {
            Polytope::V(p) => p.contains_point(x),
            Polytope::H(p) => p.contains_point(x),
        }
    }

    pub fn bounding_box(&self) -> Result<BoundingBox> {
        bounding_box(self)
    }
}

impl From<VPolytope> for Polytope {
    fn from(p: VPolytope) -> Self {
        Polytope::V(p)
    }
}

impl From<HPolytope> for Polytope {
    fn from(p: HPolytope) -> Self {
        Polytope::H(p)
    }
}

/// `max{aᵀx : x ∈ P}`.
pub fn support(p: &Polytope, a: &[Rational]) -> Result<Rational> {
    p.support(a)
}

pub fn contains_point(p: &Polytope, x: &[Rational]) -> Result<bool> {
    p.contains_point(x)
}

pub fn bounding_box(p: &Polytope) -> Result<BoundingBox> {
    let d = p.dim();
    if let Polytope::H(h) = p {
        h.ensure_bounded()?;
    }
    let mut lower = Vec::with_capacity(d);
    let mut upper = Vec::with_capacity(d);
    for i in 0..d {
        let e = Point::unit(d, i);
        lower.push(-p.support(&e.neg())?);
        upper.push(p.support(&e)?);
    }
    let diam_sq = lower.iter().zip(&upper).map(|(l, u)| (u - l) * (u - l)).sum();
    Ok(BoundingBox { lower: Point::new(lower), upper: Point::new(upper), diam_sq })
}

/// Block-diagonal stacking of the parts' rows.
pub fn direct_product(parts: &[HPolytope]) -> Result<HPolytope> {
    if parts.is_empty() {
        return Err(Error::InvalidInput("direct product of an empty list".into()));
    }
    let dim: usize = parts.iter().map(HPolytope::dim).sum();
    let mut rows = Vec::new();
    let mut offset = 0;
    for part in parts {
        for r in &part.rows {
            let mut a = vec![Rational::zero(); dim];
            a[offset..offset + part.dim].clone_from_slice(r.a.coords());
            rows.push(HRow { a: Point::new(a), b: r.b.clone() });
        }
        offset += part.dim;
    }
    HPolytope::new(dim, rows)
}

/// Whether `P = -P`.
///
/// The syntactic test (vertex or row set closed under negation) is tried
/// first; H-presentations then fall back to comparing `h(P, -aᵢ)` with `bᵢ`
/// for every row, V-presentations to `-v ∈ P` for every vertex.
pub fn is_zero_symmetric(p: &Polytope) -> bool {
    match p {
        Polytope::V(v) => {
            let mut set: Vec<&Point> = v.vertices.iter().collect();
            set.sort();
            let closed = v.vertices.iter().all(|x| set.binary_search(&&x.neg()).is_ok());
            closed
                || v.vertices
                    .iter()
                    .all(|x| v.contains_point(&x.neg()).unwrap_or(false))
        }
        Polytope::H(h) => {
            let mut rows: Vec<(&Point, &Rational)> = h.rows.iter().map(|r| (&r.a, &r.b)).collect();
            rows.sort();
            let closed = h.rows.iter().all(|r| {
                let neg = r.a.neg();
                rows.binary_search(&(&neg, &r.b)).is_ok()
            });
            if closed {
                return true;
            }
            if !h.is_bounded() {
                return false;
            }
            h.rows.iter().all(|r| match h.support(&r.a.neg()) {
                Ok(s) => s <= r.b,
                Err(_) => false,
            })
        }
    }
}

// ---------------------------------------------------------------- JSON

fn rational_to_json(r: &Rational) -> Value {
    Value::String(format_rational(r))
}

fn rational_from_json(v: &Value, context: &str) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s).map_err(|e| Error::InvalidInput(format!("{context}: {e}"))),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(int(i))
            } else {
                parse_rational(&n.to_string()).map_err(|e| Error::InvalidInput(format!("{context}: {e}")))
            }
        }
        other => Err(Error::InvalidInput(format!("{context}: expected a rational, found {other}"))),
    }
}

fn point_from_json(v: &Value, context: &str) -> Result<Point> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::InvalidInput(format!("{context}: expected an array of rationals")))?;
    arr.iter()
        .enumerate()
        .map(|(i, x)| rational_from_json(x, &format!("{context}, coordinate {i}")))
        .collect::<Result<Vec<_>>>()
        .map(Point::new)
}

pub fn point_to_json(p: &[Rational]) -> Value {
    Value::Array(p.iter().map(rational_to_json).collect())
}

/// Parses a JSON array of rationals.
pub fn point_from_json_value(v: &Value) -> Result<Point> {
    point_from_json(v, "point")
}

impl Polytope {
    pub fn to_json(&self) -> Value {
        match self {
            Polytope::V(p) => json!({
                "dim": p.dim,
                "type": "V",
                "vertices": p.vertices.iter().map(|v| point_to_json(v)).collect::<Vec<_>>(),
            }),
            Polytope::H(p) => json!({
                "dim": p.dim,
                "type": "H",
                "rows": p.rows.iter().map(|r| json!({"a": point_to_json(&r.a), "b": rational_to_json(&r.b)})).collect::<Vec<_>>(),
            }),
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("serializable")
    }

    pub fn from_json(v: &Value) -> Result<Polytope> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::InvalidInput("expected a JSON object".into()))?;
        let declared = match obj.get("dim") {
            None => None,
            Some(d) => Some(
                d.as_u64()
                    .ok_or_else(|| Error::InvalidInput("\"dim\" must be a positive integer".into()))?
                    as usize,
            ),
        };
        let kind = obj.get("type").and_then(Value::as_str).unwrap_or("");
        match kind {
            "V" => {
                let verts = obj
                    .get("vertices")
                    .and_then(Value::as_array)
                    .ok_or_else(|| Error::InvalidInput("V-polytope needs a \"vertices\" array".into()))?;
                let pts = verts
                    .iter()
                    .enumerate()
                    .map(|(i, p)| point_from_json(p, &format!("vertex {i}")))
                    .collect::<Result<Vec<_>>>()?;
                let dim = declared.or_else(|| pts.first().map(Point::dim)).unwrap_or(0);
                for (i, p) in pts.iter().enumerate() {
                    if p.dim() != dim {
                        return Err(Error::InvalidInput(format!(
                            "vertex {i}: has {} coordinates, expected {dim}",
                            p.dim()
                        )));
                    }
                }
                Ok(Polytope::V(VPolytope::new(pts)?))
            }
            "H" => {
                let rows = obj
                    .get("rows")
                    .and_then(Value::as_array)
                    .ok_or_else(|| Error::InvalidInput("H-polytope needs a \"rows\" array".into()))?;
                let rows = rows
                    .iter()
                    .enumerate()
                    .map(|(i, r)| {
                        let ctx = format!("row {i}");
                        let a = r
                            .get("a")
                            .ok_or_else(|| Error::InvalidInput(format!("{ctx}: missing \"a\"")))?;
                        let b = r
                            .get("b")
                            .ok_or_else(|| Error::InvalidInput(format!("{ctx}: missing \"b\"")))?;
                        Ok(HRow { a: point_from_json(a, &ctx)?, b: rational_from_json(b, &ctx)? })
                    })
                    .collect::<Result<Vec<_>>>()?;
                let dim = declared
                    .or_else(|| rows.first().map(|r| r.a.dim()))
                    .ok_or_else(|| Error::InvalidInput("H-polytope without rows needs \"dim\"".into()))?;
                Ok(Polytope::H(HPolytope::new(dim, rows)?))
            }
            other => Err(Error::InvalidInput(format!("unknown polytope type {other:?}; expected \"V\" or \"H\""))),
        }
    }

    pub fn from_json_str(text: &str) -> Result<Polytope> {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::Json(e.to_string()))?;
        Self::from_json(&v)
    }
}
