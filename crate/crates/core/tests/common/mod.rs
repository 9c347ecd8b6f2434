//! Generators and independent oracles shared by the integration tests.
#![allow(dead_code)]

use hkit::lp::{solve_lp, LPOutcome, LinearProgram};
use hkit::rational::{int, ratio, to_f64};
use hkit::{HPolytope, HRow, NormSpec, Point, Rational, VPolytope};
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `num/den` with `num ∈ [-range·den, range·den]` and `den ∈ dens`.
pub fn rand_rational(rng: &mut ChaCha8Rng, range: i64, dens: &[i64]) -> Rational {
    let den = dens[rng.gen_range(0..dens.len())];
    ratio(rng.gen_range(-range * den..=range * den), den)
}

pub fn rand_point(rng: &mut ChaCha8Rng, d: usize, range: i64, dens: &[i64]) -> Point {
    Point::new((0..d).map(|_| rand_rational(rng, range, dens)).collect())
}

/// `n` random points spanning `ℝ^d`.
pub fn rand_full_dim(rng: &mut ChaCha8Rng, d: usize, n: usize, range: i64, dens: &[i64]) -> VPolytope {
    loop {
        let p = VPolytope::new((0..n).map(|_| rand_point(rng, d, range, dens)).collect()).unwrap();
        if p.affine_dim() == d {
            return p;
        }
    }
}

pub fn rand_int_polytope(rng: &mut ChaCha8Rng, d: usize, n: usize, range: i64) -> VPolytope {
    rand_full_dim(rng, d, n, range, &[1])
}

// ------------------------------------------------------------ exact linear algebra

/// Solves a square system by Gauss-Jordan elimination; `None` if singular.
pub fn gauss_solve(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = a.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        b.swap(col, piv);
        let inv = Rational::one() / &a[col][col];
        for j in col..n {
            a[col][j] = &a[col][j] * &inv;
        }
        b[col] = &b[col] * &inv;
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in col..n {
                    let t = &f * &a[col][j];
                    a[r][j] -= t;
                }
                let t = &f * &b[col];
                b[r] -= t;
            }
        }
    }
    Some(b)
}

/// A nonzero `x` with `Mx = 0` for the `(d−1) × d` matrix `m`, if the kernel is a line.
pub fn kernel_line(m: &[Vec<Rational>], d: usize) -> Option<Vec<Rational>> {
    let mut a: Vec<Vec<Rational>> = m.to_vec();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..d {
        let Some(p) = (row..a.len()).find(|&r| !a[r][col].is_zero()) else { continue };
        a.swap(row, p);
        let inv = Rational::one() / &a[row][col];
        for j in 0..d {
            a[row][j] = &a[row][j] * &inv;
        }
        for r in 0..a.len() {
            if r != row && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in 0..d {
                    let t = &f * &a[row][j];
                    a[r][j] -= t;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    if pivots.len() != d - 1 {
        return None;
    }
    let free = (0..d).find(|c| !pivots.contains(c)).expect("one free column");
    let mut x = vec![Rational::zero(); d];
    x[free] = Rational::one();
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = -a[r][free].clone();
    }
    Some(x)
}

pub fn dotr(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

pub fn dist_sq(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| {
        let t = x - y;
        acc + &t * &t
    })
}

/// `k`-subsets of `0..n`.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(n, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, k, 0, &mut Vec::new(), &mut out);
    out
}

// ------------------------------------------------------------ facets and vertices by brute force

/// Facet inequalities of a full-dimensional `conv(points)`, found from all `d`-subsets.
pub fn facets(points: &[Point]) -> Vec<HRow> {
    let d = points[0].dim();
    let mut rows: Vec<HRow> = Vec::new();
    for sub in subsets(points.len(), d) {
        let base = &points[sub[0]];
        let m: Vec<Vec<Rational>> = sub[1..].iter().map(|&i| points[i].sub(base).into_coords()).collect();
        let Some(mut a) = kernel_line(&m, d) else { continue };
        let mut b = dotr(&a, base);
        let sides: Vec<Rational> = points.iter().map(|p| dotr(&a, p) - &b).collect();
        let (pos, neg) = (sides.iter().any(|s| s.is_positive()), sides.iter().any(|s| s.is_negative()));
        if pos && neg {
            continue;
        }
        if pos {
            a.iter_mut().for_each(|v| *v = -v.clone());
            b = -b;
        }
        // Normalize by the first nonzero coefficient for deduplication.
        let lead = a.iter().find(|v| !v.is_zero()).expect("nonzero normal").abs();
        let a: Vec<Rational> = a.iter().map(|v| v / &lead).collect();
        let b = b / &lead;
        let row = HRow { a: Point::new(a), b };
        if !rows.contains(&row) {
            rows.push(row);
        }
    }
    rows
}

/// Vertices of a bounded H-polytope from all `d`-subsets of rows.
pub fn brute_vertices(rows: &[HRow], d: usize) -> Vec<Point> {
    let mut out: Vec<Point> = Vec::new();
    for sub in subsets(rows.len(), d) {
        let a: Vec<Vec<Rational>> = sub.iter().map(|&i| rows[i].a.coords().to_vec()).collect();
        let b: Vec<Rational> = sub.iter().map(|&i| rows[i].b.clone()).collect();
        let Some(x) = gauss_solve(a, b) else { continue };
        if rows.iter().all(|r| dotr(&r.a, &x) <= r.b) {
            let p = Point::new(x);
            if !out.contains(&p) {
                out.push(p);
            }
        }
    }
    out
}

// ------------------------------------------------------------ LP distance oracles

/// Adds `z ∈ ρ·ball` for `z = x − y` with `y` given by `y_terms[k]` (linear in LP variables).
fn add_ball(lp: &mut LinearProgram, x: &[Rational], y_terms: &[Vec<(usize, Rational)>], rho: usize, norm: &NormSpec) {
    let d = x.len();
    match norm {
        NormSpec::LInf => {
            for k in 0..d {
                // x_k − y_k ≤ ρ and y_k − x_k ≤ ρ.
                let mut up: Vec<(usize, Rational)> = y_terms[k].iter().map(|(j, v)| (*j, -v.clone())).collect();
                up.push((rho, -Rational::one()));
                lp.add_le_terms(up, -x[k].clone());
                let mut down = y_terms[k].clone();
                down.push((rho, -Rational::one()));
                lp.add_le_terms(down, x[k].clone());
            }
        }
        NormSpec::L1 => {
            let t0 = lp.num_vars();
            for _ in 0..d {
                lp.add_nonneg_var();
            }
            for k in 0..d {
                let mut up: Vec<(usize, Rational)> = y_terms[k].iter().map(|(j, v)| (*j, -v.clone())).collect();
                up.push((t0 + k, -Rational::one()));
                lp.add_le_terms(up, -x[k].clone());
                let mut down = y_terms[k].clone();
                down.push((t0 + k, -Rational::one()));
                lp.add_le_terms(down, x[k].clone());
            }
            let mut sum: Vec<(usize, Rational)> = (0..d).map(|k| (t0 + k, Rational::one())).collect();
            sum.push((rho, -Rational::one()));
            lp.add_le_terms(sum, Rational::zero());
        }
        _ => panic!("oracle supports l1 and linf"),
    }
}

fn lp_min_rho(lp: &LinearProgram) -> Rational {
    match solve_lp(lp) {
        LPOutcome::Optimal { value, .. } => -value,
        other => panic!("oracle LP failed: {other:?}"),
    }
}

/// `d(x, conv(points))` from `min ρ : x − Σλⱼvⱼ ∈ ρ𝔹, λ ∈ Δ`.
pub fn lp_dist_vv(x: &[Rational], points: &[Point], norm: &NormSpec) -> Rational {
    let (n, d) = (points.len(), x.len());
    let mut lp = LinearProgram::new(n + 1);
    for j in 0..=n {
        lp.set_nonneg(j);
    }
    lp.maximize_terms(vec![(n, -Rational::one())]);
    lp.add_eq_terms((0..n).map(|j| (j, Rational::one())).collect(), Rational::one());
    let y: Vec<Vec<(usize, Rational)>> = (0..d).map(|k| (0..n).map(|j| (j, points[j][k].clone())).collect()).collect();
    add_ball(&mut lp, x, &y, n, norm);
    lp_min_rho(&lp)
}

/// `d(x, {y : Ay ≤ b})` from `min ρ : x − y ∈ ρ𝔹, Ay ≤ b`.
pub fn lp_dist_vh(x: &[Rational], rows: &[HRow], norm: &NormSpec) -> Rational {
    let d = x.len();
    let mut lp = LinearProgram::new(d + 1);
    lp.set_nonneg(d);
    lp.maximize_terms(vec![(d, -Rational::one())]);
    for r in rows {
        lp.add_le_terms((0..d).map(|k| (k, r.a[k].clone())).collect(), r.b.clone());
    }
    let y: Vec<Vec<(usize, Rational)>> = (0..d).map(|k| vec![(k, Rational::one())]).collect();
    add_ball(&mut lp, x, &y, d, norm);
    lp_min_rho(&lp)
}

// ------------------------------------------------------------ projections by face enumeration

/// Squared distance to `conv(points)`: best projection onto the affine hull of an
/// affinely independent subset that lands inside that subset's simplex.
pub fn face_enum_v(x: &[Rational], points: &[Point]) -> (Rational, Vec<Rational>) {
    let d = x.len();
    let mut best: Option<(Rational, Vec<Rational>)> = None;
    for k in 1..=(d + 1).min(points.len()) {
        for sub in subsets(points.len(), k) {
            let base = &points[sub[0]];
            let b: Vec<Vec<Rational>> = sub[1..].iter().map(|&i| points[i].sub(base).into_coords()).collect();
            let gram: Vec<Vec<Rational>> = b.iter().map(|u| b.iter().map(|v| dotr(u, v)).collect()).collect();
            let rhs: Vec<Rational> = b.iter().map(|u| dotr(u, &Point::new(x.to_vec()).sub(base))).collect();
            let mu = if b.is_empty() { Some(Vec::new()) } else { gauss_solve(gram, rhs) };
            let Some(mu) = mu else { continue };
            let lambda0 = Rational::one() - mu.iter().fold(Rational::zero(), |a, m| a + m);
            if lambda0.is_negative() || mu.iter().any(|m| m.is_negative()) {
                continue;
            }
            let mut y = base.coords().to_vec();
            for (m, u) in mu.iter().zip(&b) {
                for (yk, uk) in y.iter_mut().zip(u) {
                    *yk += m * uk;
                }
            }
            let v = dist_sq(x, &y);
            if best.as_ref().map_or(true, |(bv, _)| v < *bv) {
                best = Some((v, y));
            }
        }
    }
    best.expect("some vertex qualifies")
}

/// Squared distance to `{y : Ay ≤ b}`: best feasible projection onto `{a_i y = b_i, i ∈ I}`
/// over linearly independent row sets `I`.
pub fn face_enum_h(x: &[Rational], rows: &[HRow]) -> (Rational, Vec<Rational>) {
    let d = x.len();
    let mut best: Option<(Rational, Vec<Rational>)> = None;
    for k in 0..=d.min(rows.len()) {
        for sub in subsets(rows.len(), k) {
            let a: Vec<&Point> = sub.iter().map(|&i| &rows[i].a).collect();
            let gram: Vec<Vec<Rational>> = a.iter().map(|u| a.iter().map(|v| dotr(u, v)).collect()).collect();
            let resid: Vec<Rational> = sub.iter().map(|&i| dotr(&rows[i].a, x) - &rows[i].b).collect();
            let nu = if k == 0 { Some(Vec::new()) } else { gauss_solve(gram, resid) };
            let Some(nu) = nu else { continue };
            let mut y = x.to_vec();
            for (n, u) in nu.iter().zip(&a) {
                for (yk, uk) in y.iter_mut().zip(u.iter()) {
                    *yk -= n * uk;
                }
            }
            if rows.iter().any(|r| dotr(&r.a, &y) > r.b) {
                continue;
            }
            let v = dist_sq(x, &y);
            if best.as_ref().map_or(true, |(bv, _)| v < *bv) {
                best = Some((v, y));
            }
        }
    }
    best.expect("nonempty polytope")
}

// ------------------------------------------------------------ random H-polytopes

/// Random rows plus a bounding box `|x_i| ≤ box`, so the polytope is bounded and contains 0.
pub fn rand_h_polytope(rng: &mut ChaCha8Rng, d: usize, extra: usize, bound: i64) -> HPolytope {
    let mut rows: Vec<HRow> = (0..d)
        .flat_map(|i| {
            let e = Point::unit(d, i);
            [HRow { a: e.clone(), b: int(bound) }, HRow { a: e.neg(), b: int(bound) }]
        })
        .collect();
    for _ in 0..extra {
        let a = rand_point(rng, d, 3, &[1]);
        if a.is_zero() {
            continue;
        }
        rows.push(HRow { a, b: int(rng.gen_range(1..=bound)) });
    }
    HPolytope::new(d, rows).unwrap()
}

/// 0-symmetric: every row comes with its negation.
pub fn rand_symmetric_h(rng: &mut ChaCha8Rng, d: usize, pairs: usize) -> HPolytope {
    let mut rows = Vec::new();
    for i in 0..d {
        let b = int(rng.gen_range(1..=6));
        rows.push(HRow { a: Point::unit(d, i), b: b.clone() });
        rows.push(HRow { a: Point::unit(d, i).neg(), b });
    }
    for _ in 0..pairs {
        let a = rand_point(rng, d, 3, &[1]);
        if a.is_zero() {
            continue;
        }
        let b = int(rng.gen_range(1..=8));
        rows.push(HRow { a: a.neg(), b: b.clone() });
        rows.push(HRow { a, b });
    }
    HPolytope::new(d, rows).unwrap()
}

// ------------------------------------------------------------ planar floats

pub type P2 = [f64; 2];

/// Counter-clockwise hull by the monotone chain.
pub fn hull2(points: &[P2]) -> Vec<P2> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let cross = |o: P2, a: P2, b: P2| (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    let mut lower: Vec<P2> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<P2> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

fn seg_dist(x: P2, a: P2, b: P2) -> f64 {
    let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
    let len = dx * dx + dy * dy;
    let t = if len == 0.0 { 0.0 } else { (((x[0] - a[0]) * dx + (x[1] - a[1]) * dy) / len).clamp(0.0, 1.0) };
    let (px, py) = (a[0] + t * dx - x[0], a[1] + t * dy - x[1]);
    (px * px + py * py).sqrt()
}

/// Euclidean distance from `x` to a counter-clockwise convex polygon.
pub fn polygon_dist(x: P2, poly: &[P2]) -> f64 {
    let n = poly.len();
    if n == 1 {
        return seg_dist(x, poly[0], poly[0]);
    }
    let inside = n >= 3
        && (0..n).all(|i| {
            let (a, b) = (poly[i], poly[(i + 1) % n]);
            (b[0] - a[0]) * (x[1] - a[1]) - (b[1] - a[1]) * (x[0] - a[0]) >= 0.0
        });
    if inside {
        return 0.0;
    }
    (0..n).map(|i| seg_dist(x, poly[i], poly[(i + 1) % n])).fold(f64::INFINITY, f64::min)
}

/// `δ₂(αP + c, Q)` for planar polygons.
pub fn planar_objective(p: &[P2], q: &[P2], alpha: f64, c: P2) -> f64 {
    let moved: Vec<P2> = p.iter().map(|v| [alpha * v[0] + c[0], alpha * v[1] + c[1]]).collect();
    let a = moved.iter().map(|x| polygon_dist(*x, q)).fold(0.0, f64::max);
    let b = q.iter().map(|y| polygon_dist(*y, &moved)).fold(0.0, f64::max);
    a.max(b)
}

/// Golden-section minimum of a convex function on `[lo, hi]`.
fn golden<F: FnMut(f64) -> f64>(mut f: F, mut lo: f64, mut hi: f64) -> (f64, f64) {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let (mut x1, mut x2) = (hi - r * (hi - lo), lo + r * (hi - lo));
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..70 {
        if f1 <= f2 {
            hi = x2;
            (x2, f2) = (x1, f1);
            x1 = hi - r * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            (x1, f1) = (x2, f2);
            x2 = lo + r * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 <= f2 { (x1, f1) } else { (x2, f2) }
}

/// Minimum of the planar matching objective, returned as `(ρ, α, c)`.
///
/// A coarse grid over `(α, c)` gives an upper bound; nested golden-section searches over
/// `α`, `c₀`, `c₁` (the objective is jointly convex) refine it.
pub fn grid_match(p: &[P2], q: &[P2]) -> (f64, f64, P2) {
    let (p, q) = (hull2(p), hull2(q));
    let diam = |s: &[P2]| {
        let mut m: f64 = 0.0;
        for a in s {
            for b in s {
                m = m.max(((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt());
            }
        }
        m
    };
    let centroid = |s: &[P2]| {
        let n = s.len() as f64;
        [s.iter().map(|v| v[0]).sum::<f64>() / n, s.iter().map(|v| v[1]).sum::<f64>() / n]
    };
    let (dp, dq) = (diam(&p), diam(&q));
    let a0 = if dp > 0.0 && dq > 0.0 { dq / dp } else { 1.0 };
    let (cp, cq) = (centroid(&p), centroid(&q));
    let f = |a: f64, c: P2| planar_objective(&p, &q, a, c);
    let span = 2.0 * dq.max(a0 * dp).max(1.0);
    let base = |a: f64| [cq[0] - a * cp[0], cq[1] - a * cp[1]];
    let mut best = (f64::INFINITY, a0, [0.0, 0.0]);
    let (na, nc) = (30, 30);
    for i in 1..=na {
        let a = 3.0 * a0 * i as f64 / na as f64;
        let b = base(a);
        for j in 0..=nc {
            for k in 0..=nc {
                let c = [b[0] + span * (2.0 * j as f64 / nc as f64 - 1.0), b[1] + span * (2.0 * k as f64 / nc as f64 - 1.0)];
                let v = f(a, c);
                if v < best.0 {
                    best = (v, a, c);
                }
            }
        }
    }
    let inner = |a: f64| {
        let b = base(a);
        let line = |c0: f64| golden(|c1| f(a, [c0, c1]), b[1] - span, b[1] + span);
        let (c0, v) = golden(|c0| line(c0).1, b[0] - span, b[0] + span);
        (v, [c0, line(c0).0])
    };
    let (a, _) = golden(|a| inner(a).0, 1e-9, 3.0 * a0);
    let c = inner(a).1;
    let v = f(a, c);
    if v < best.0 {
        best = (v, a, c);
    }
    best
}

pub fn to_p2(p: &VPolytope) -> Vec<P2> {
    p.vertices().iter().map(|v| [to_f64(&v[0]), to_f64(&v[1])]).collect()
}

/// Independent clique check by bitmask enumeration.
pub fn has_clique(m: usize, k: usize, edges: &[(usize, usize)]) -> bool {
    (0u32..1 << m).filter(|s| s.count_ones() as usize == k).any(|s| {
        let members: Vec<usize> = (0..m).filter(|i| s >> i & 1 == 1).map(|i| i + 1).collect();
        members.iter().enumerate().all(|(i, &u)| {
            members[i + 1..].iter().all(|&v| edges.contains(&(u.min(v), u.max(v))))
        })
    })
}
