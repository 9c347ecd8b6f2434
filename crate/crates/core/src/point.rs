use std::fmt;
use std::ops::{Deref, Index};

use num_traits::Zero;

use crate::error::{check_dim, Result};
use crate::rational::{format_rational, from_f64, int, to_f64, Rational};

/// A point (or direction) of rational coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    coords: Vec<Rational>,
}

impl Point {
    pub fn new(coords: Vec<Rational>) -> Self {
        Point { coords }
    }

    pub fn zeros(dim: usize) -> Self {
        Point { coords: vec![Rational::zero(); dim] }
    }

    pub fn unit(dim: usize, axis: usize) -> Self {
        let mut p = Self::zeros(dim);
        p.coords[axis] = int(1);
        p
    }

    pub fn from_ints(values: &[i64]) -> Self {
        Point { coords: values.iter().map(|&v| int(v)).collect() }
    }

    /// Exact conversion of finite doubles.
    pub fn from_f64s(values: &[f64]) -> Self {
        Point { coords: values.iter().map(|&v| from_f64(v)).collect() }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<Rational> {
        self.coords
    }

    pub fn to_f64s(&self) -> Vec<f64> {
        self.coords.iter().map(to_f64).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn dot(&self, other: &Point) -> Result<Rational> {
        check_dim(self.dim(), other.dim())?;
        Ok(dot(&self.coords, &other.coords))
    }

    pub fn add(&self, other: &Point) -> Point {
        Point::new(self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Point) -> Point {
        Point::new(self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, s: &Rational) -> Point {
        Point::new(self.coords.iter().map(|a| a * s).collect())
    }

    pub fn neg(&self) -> Point {
        Point::new(self.coords.iter().map(|a| -a).collect())
    }

    pub fn norm_sq(&self) -> Rational {
        dot(&self.coords, &self.coords)
    }

    /// Concatenation, used for direct products.
    pub fn concat(&self, other: &Point) -> Point {
        let mut coords = self.coords.clone();
        coords.extend(other.coords.iter().cloned());
        Point::new(coords)
    }
}

impl Deref for Point {
    type Target = [Rational];
    fn deref(&self) -> &[Rational] {
        &self.coords
    }
}

impl Index<usize> for Point {
    type Output = Rational;
    fn index(&self, i: usize) -> &Rational {
        &self.coords[i]
    }
}

impl From<Vec<Rational>> for Point {
    fn from(coords: Vec<Rational>) -> Self {
        Point::new(coords)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(format_rational).collect();
        write!(f, "({})", parts.join(", "))
    }
}

pub(crate) fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    let mut acc = Rational::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += x * y;
        }
    }
    acc
}

pub(crate) fn dist_sq(a: &[Rational], b: &[Rational]) -> Rational {
    let mut acc = Rational::zero();
    for (x, y) in a.iter().zip(b) {
        let d = x - y;
        acc += &d * &d;
    }
    acc
}

pub(crate) fn dot_f64(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm_f64(a: &[f64]) -> f64 {
    dot_f64(a, a).sqrt()
}
