//! Vertex enumeration for H-presented polytopes.
//!
//! [`vertex_enumeration`] runs the double description method on the
//! homogenized cone `{(x, t) : aᵀx − bt ≤ 0, t ≥ 0}` with primitive integer
//! rays. Adjacency of two rays is decided by the rank of their common tight
//! rows: a rank computed modulo a large prime that already reaches the
//! maximum proves adjacency, and an exact fraction-free elimination settles
//! every other case. [`vertex_enumeration_exhaustive`] tries every
//! `d`-subset of rows and serves as an independent cross-check.

use std::env;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg::solve;
use crate::lp::{solve_lp, LPOutcome, LinearProgram};
use crate::point::Point;
use crate::polytope::{HPolytope, VPolytope};
use crate::rational::{common_denominator, Rational};

/// Size limits for vertex enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ScaleGuard {
    pub max_dim: usize,
    pub max_rows: usize,
    pub max_rays: usize,
}

impl Default for ScaleGuard {
    fn default() -> Self {
        ScaleGuard { max_dim: 8, max_rows: 512, max_rays: 200_000 }
    }
}

impl ScaleGuard {
    pub const UNLIMITED: ScaleGuard = ScaleGuard { max_dim: usize::MAX, max_rows: usize::MAX, max_rays: usize::MAX };

    /// Reads `HKIT_SCALE_GUARD`: `off`, or comma-separated `dim=`, `rows=`, `rays=` overrides.
    pub fn from_env() -> Result<Self> {
        match env::var("HKIT_SCALE_GUARD") {
            Ok(v) => Self::parse(&v),
            Err(_) => Ok(Self::default()),
        }
    }

    pub fn parse(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        if spec.eq_ignore_ascii_case("off") {
            return Ok(Self::UNLIMITED);
        }
        let mut guard = Self::default();
        for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| Error::InvalidInput(format!("scale guard entry {part:?} is not key=value")))?;
            let value: usize = value
                .trim()
                .parse()
                .map_err(|_| Error::InvalidInput(format!("scale guard value {value:?} is not an integer")))?;
            match key.trim() {
                "dim" => guard.max_dim = value,
                "rows" => guard.max_rows = value,
                "rays" => guard.max_rays = value,
                other => return Err(Error::InvalidInput(format!("unknown scale guard key {other:?}"))),
            }
        }
        Ok(guard)
    }

    fn check(&self, dim: usize, rows: usize) -> Result<()> {
        if dim > self.max_dim {
            return Err(Error::ScaleGuard(format!("dimension {dim} exceeds limit {}", self.max_dim)));
        }
        if rows > self.max_rows {
            return Err(Error::ScaleGuard(format!("{rows} rows exceed limit {}", self.max_rows)));
        }
        Ok(())
    }
}

/// All vertices of a bounded nonempty H-polytope, sorted lexicographically.
pub fn vertex_enumeration(p: &HPolytope) -> Result<VPolytope> {
    vertex_enumeration_with(p, &ScaleGuard::from_env()?)
}

pub fn vertex_enumeration_with(p: &HPolytope, guard: &ScaleGuard) -> Result<VPolytope> {
    guard.check(p.dim(), p.rows().len())?;
    let cone = HomogeneousCone::new(p);
    let rays = match double_description(&cone.rows, guard)? {
        Some(rays) => rays,
        None => return Err(empty_or_unbounded(p)),
    };
    let t = cone.rows[0].len() - 1;
    if rays.iter().all(|r| r[t].is_zero()) {
        return Err(Error::Empty);
    }
    let mut vertices = Vec::with_capacity(rays.len());
    for r in &rays {
        if r[t].is_zero() {
            return Err(Error::Unbounded(None));
        }
        let denom = &r[t];
        vertices.push(Point::new(r[..t].iter().map(|x| Rational::new(x.clone(), denom.clone())).collect()));
    }
    if vertices.is_empty() {
        return Err(Error::Empty);
    }
    vertices.sort();
    vertices.dedup();
    VPolytope::new(vertices)
}

fn empty_or_unbounded(p: &HPolytope) -> Error {
    let mut lp = LinearProgram::new(p.dim());
    for r in p.rows() {
        lp.add_le(&r.a, r.b.clone());
    }
    match solve_lp(&lp) {
        LPOutcome::Infeasible => Error::Empty,
        _ => Error::Unbounded(None),
    }
}

/// Rows of the homogenized cone as primitive integer vectors, `−t ≤ 0` first.
struct HomogeneousCone {
    rows: Vec<Vec<BigInt>>,
}

impl HomogeneousCone {
    fn new(p: &HPolytope) -> Self {
        let d = p.dim();
        let mut t_row = vec![BigInt::zero(); d + 1];
        t_row[d] = -BigInt::one();
        let mut rows = vec![t_row];
        for r in p.rows() {
            let mut row: Vec<Rational> = r.a.coords().to_vec();
            row.push(-r.b.clone());
            rows.push(integerize(&row));
        }
        HomogeneousCone { rows }
    }
}

/// Smallest integer multiple with coprime entries.
pub(crate) fn integerize(row: &[Rational]) -> Vec<BigInt> {
    let l = common_denominator(row);
    let ints: Vec<BigInt> = row.iter().map(|x| x.numer() * (&l / x.denom())).collect();
    make_primitive(ints)
}

fn make_primitive(mut v: Vec<BigInt>) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in v.iter_mut() {
            *x /= &g;
        }
    }
    v
}

fn dot_int(a: &[BigInt], b: &[BigInt]) -> BigInt {
    let mut acc = BigInt::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += x * y;
        }
    }
    acc
}

const PRIME: u64 = (1 << 61) - 1;

fn mulmod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % PRIME as u128) as u64
}

fn powmod(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a);
        }
        a = mulmod(a, a);
        e >>= 1;
    }
    r
}

fn reduce(x: &BigInt) -> u64 {
    let p = BigInt::from(PRIME);
    let r = x.mod_floor(&p);
    r.to_u64().expect("reduced below the modulus")
}

#[derive(Clone)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64)])
    }
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn and(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }
    fn and_count(&self, other: &Bits) -> u32 {
        self.0.iter().zip(&other.0).map(|(a, b)| (a & b).count_ones()).sum()
    }
    fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(w, &word)| {
            (0..64).filter(move |b| word >> b & 1 == 1).map(move |b| w * 64 + b)
        })
    }
}

/// Rank of the listed rows modulo [`PRIME`], stopping once `cap` is reached.
fn rank_mod(rows_mod: &[Vec<u64>], idx: &[usize], dim: usize, cap: usize) -> usize {
    let mut basis: Vec<Vec<u64>> = Vec::with_capacity(cap);
    let mut pivots: Vec<usize> = Vec::with_capacity(cap);
    for &i in idx {
        let mut v = rows_mod[i].clone();
        for (b, &pc) in basis.iter().zip(&pivots) {
            if v[pc] != 0 {
                let f = v[pc];
                for k in 0..dim {
                    v[k] = (v[k] + PRIME - mulmod(f, b[k])) % PRIME;
                }
            }
        }
        if let Some(pc) = (0..dim).find(|&k| v[k] != 0) {
            let inv = powmod(v[pc], PRIME - 2);
            for x in v.iter_mut() {
                *x = mulmod(*x, inv);
            }
            basis.push(v);
            pivots.push(pc);
            if basis.len() >= cap {
                break;
            }
        }
    }
    basis.len()
}

/// Exact rank by fraction-free elimination.
fn rank_exact(rows: &[&[BigInt]]) -> usize {
    let mut m: Vec<Vec<BigInt>> = rows.iter().map(|r| r.to_vec()).collect();
    let ncols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for col in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..m.len() {
            if m[i][col].is_zero() {
                continue;
            }
            let a = m[r][col].clone();
            let b = m[i][col].clone();
            let mut row: Vec<BigInt> = (0..ncols).map(|j| &a * &m[i][j] - &b * &m[r][j]).collect();
            row = make_primitive(row);
            m[i] = row;
        }
        r += 1;
    }
    r
}

/// Extreme rays of `{z : hᵢᵀz ≤ 0}`; `None` when the cone is not pointed.
fn double_description(rows: &[Vec<BigInt>], guard: &ScaleGuard) -> Result<Option<Vec<Vec<BigInt>>>> {
    let dim = rows[0].len();
    let n = rows.len();
    // Initial simplicial cone from the first independent rows.
    let rows_mod: Vec<Vec<u64>> = rows.iter().map(|r| r.iter().map(reduce).collect()).collect();
    let mut chosen: Vec<usize> = Vec::with_capacity(dim);
    for i in 0..n {
        let mut trial = chosen.clone();
        trial.push(i);
        let refs: Vec<&[BigInt]> = trial.iter().map(|&j| rows[j].as_slice()).collect();
        if rank_mod(&rows_mod, &trial, dim, dim) == trial.len() || rank_exact(&refs) == trial.len() {
            chosen = trial;
            if chosen.len() == dim {
                break;
            }
        }
    }
    if chosen.len() < dim {
        return Ok(None);
    }
    let m: Vec<Vec<Rational>> = chosen
        .iter()
        .map(|&i| rows[i].iter().map(|x| Rational::from_integer(x.clone())).collect())
        .collect();
    let mut rays: Vec<Vec<BigInt>> = Vec::with_capacity(dim);
    let mut zeros: Vec<Bits> = Vec::with_capacity(dim);
    for k in 0..dim {
        let mut rhs = vec![Rational::zero(); dim];
        rhs[k] = -Rational::one();
        let sol = solve(m.clone(), rhs).expect("independent rows");
        rays.push(integerize(&sol));
        let mut z = Bits::new(n);
        for (l, &i) in chosen.iter().enumerate() {
            if l != k {
                z.set(i);
            }
        }
        zeros.push(z);
    }
    let mut processed = vec![false; n];
    for &i in &chosen {
        processed[i] = true;
    }
    for i in 0..n {
        if processed[i] {
            continue;
        }
        processed[i] = true;
        let h = &rows[i];
        let values: Vec<BigInt> = rays.iter().map(|r| dot_int(h, r)).collect();
        let mut plus = Vec::new();
        let mut minus = Vec::new();
        for (j, v) in values.iter().enumerate() {
            if v.is_positive() {
                plus.push(j);
            } else if v.is_negative() {
                minus.push(j);
            } else {
                zeros[j].set(i);
            }
        }
        if plus.is_empty() {
            continue;
        }
        let mut new_rays = Vec::new();
        let mut new_zeros = Vec::new();
        let need = (dim - 2) as u32;
        for &a in &plus {
            for &b in &minus {
                if zeros[a].and_count(&zeros[b]) < need {
                    continue;
                }
                let common = zeros[a].and(&zeros[b]);
                let idx: Vec<usize> = common.ones().collect();
                let adjacent = rank_mod(&rows_mod, &idx, dim, dim - 2) == dim - 2 || {
                    let refs: Vec<&[BigInt]> = idx.iter().map(|&j| rows[j].as_slice()).collect();
                    rank_exact(&refs) == dim - 2
                };
                if !adjacent {
                    continue;
                }
                let sa = &values[a];
                let sb = &values[b];
                let ray: Vec<BigInt> = rays[a].iter().zip(&rays[b]).map(|(ra, rb)| sa * rb - sb * ra).collect();
                let mut z = common;
                z.set(i);
                new_rays.push(make_primitive(ray));
                new_zeros.push(z);
            }
        }
        let mut kept_rays = Vec::with_capacity(rays.len() - plus.len() + new_rays.len());
        let mut kept_zeros = Vec::with_capacity(kept_rays.capacity());
        for (j, (r, z)) in rays.into_iter().zip(zeros).enumerate() {
            if !values[j].is_positive() {
                kept_rays.push(r);
                kept_zeros.push(z);
            }
        }
        kept_rays.extend(new_rays);
        kept_zeros.extend(new_zeros);
        rays = kept_rays;
        zeros = kept_zeros;
        if rays.len() > guard.max_rays {
            return Err(Error::ScaleGuard(format!(
                "intermediate ray count {} exceeds limit {}",
                rays.len(),
                guard.max_rays
            )));
        }
    }
    Ok(Some(rays))
}

/// Vertices by trying every `d`-subset of rows. Limited to 40 rows.
pub fn vertex_enumeration_exhaustive(p: &HPolytope) -> Result<VPolytope> {
    let d = p.dim();
    let rows = p.rows();
    if rows.len() > 40 || d > 8 {
        return Err(Error::ScaleGuard(format!(
            "exhaustive enumeration limited to 40 rows and dimension 8 (got {} rows, dimension {d})",
            rows.len()
        )));
    }
    p.ensure_bounded()?;
    let mut vertices = Vec::new();
    let mut subset: Vec<usize> = (0..d.min(rows.len())).collect();
    if subset.len() < d {
        return Err(Error::Unbounded(None));
    }
    loop {
        let a: Vec<Vec<Rational>> = subset.iter().map(|&i| rows[i].a.coords().to_vec()).collect();
        let b: Vec<Rational> = subset.iter().map(|&i| rows[i].b.clone()).collect();
        if let Some(x) = solve(a, b) {
            if p.contains_point(&x)? {
                vertices.push(Point::new(x));
            }
        }
        // Next combination in lexicographic order.
        let mut k = d;
        loop {
            if k == 0 {
                vertices.sort();
                vertices.dedup();
                if vertices.is_empty() {
                    return Err(Error::Empty);
                }
                return VPolytope::new(vertices);
            }
            k -= 1;
            if subset[k] < rows.len() - d + k {
                subset[k] += 1;
                for l in k + 1..d {
                    subset[l] = subset[l - 1] + 1;
                }
                break;
            }
        }
    }
}
