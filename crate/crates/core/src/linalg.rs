//! Small dense exact linear algebra.

use num_traits::Zero;

use crate::rational::Rational;

/// Rank of the matrix whose rows are given.
pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let ncols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for col in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][col].recip();
        for i in r + 1..m.len() {
            if m[i][col].is_zero() {
                continue;
            }
            let f = &m[i][col] * &inv;
            for j in col..ncols {
                let v = &f * &m[r][j];
                m[i][j] -= v;
            }
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    r
}

/// Solves the square system `a x = b`; `None` when singular.
pub fn solve(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = a.len();
    for col in 0..n {
        let p = (col..n).find(|&i| !a[i][col].is_zero())?;
        a.swap(col, p);
        b.swap(col, p);
        let inv = a[col][col].recip();
        for j in col..n {
            a[col][j] *= &inv;
        }
        b[col] *= &inv;
        for i in 0..n {
            if i == col || a[i][col].is_zero() {
                continue;
            }
            let f = a[i][col].clone();
            for j in col..n {
                let v = &f * &a[col][j];
                a[i][j] -= v;
            }
            let v = &f * &b[col];
            b[i] -= v;
        }
    }
    Some(b)
}

/// A nonzero `λ` with `Σ λⱼ colⱼ = 0`, if the columns are dependent.
pub fn null_vector(columns: &[Vec<Rational>]) -> Option<Vec<Rational>> {
    let k = columns.len();
    let rows = columns.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<Rational>> = (0..rows).map(|i| columns.iter().map(|c| c[i].clone()).collect()).collect();
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for col in 0..k {
        let Some(p) = (r..rows).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][col].recip();
        for j in col..k {
            m[r][j] *= &inv;
        }
        for i in 0..rows {
            if i == r || m[i][col].is_zero() {
                continue;
            }
            let f = m[i][col].clone();
            for j in col..k {
                let v = &f * &m[r][j];
                m[i][j] -= v;
            }
        }
        pivots.push(col);
        r += 1;
    }
    let free = (0..k).find(|c| !pivots.contains(c))?;
    let mut lambda = vec![Rational::zero(); k];
    lambda[free] = Rational::from_integer(1.into());
    for (row, &pc) in pivots.iter().enumerate() {
        lambda[pc] = -m[row][free].clone();
    }
    Some(lambda)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn m(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
    }

    #[test]
    fn ranks() {
        assert_eq!(rank(&m(&[&[1, 2], &[2, 4]])), 1);
        assert_eq!(rank(&m(&[&[1, 2], &[0, 1], &[3, 3]])), 2);
        assert_eq!(rank(&[]), 0);
    }

    #[test]
    fn solves() {
        let x = solve(m(&[&[2, 1], &[1, 3]]), vec![int(3), int(5)]).unwrap();
        assert_eq!(x, vec![ratio(4, 5), ratio(7, 5)]);
        assert!(solve(m(&[&[1, 2], &[2, 4]]), vec![int(1), int(1)]).is_none());
    }

    #[test]
    fn null_vectors() {
        let cols = m(&[&[1, 0], &[0, 1], &[1, 1]]);
        let l = null_vector(&cols).unwrap();
        for i in 0..2 {
            let s: Rational = (0..3).map(|j| &l[j] * &cols[j][i]).sum();
            assert!(s.is_zero());
        }
        assert!(null_vector(&m(&[&[1, 0], &[0, 1]])).is_none());
    }
}
