//! Simplicial cones over the rationals: primitive ray normalization, exact
//! membership tests, and pairwise intersection by facet enumeration.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::rat::Rat;

/// A ray direction stored as a primitive integer vector (entries cleared of
/// denominators and divided by their gcd, direction preserved).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Ray(pub Vec<BigInt>);

impl Ray {
    /// Normalizes a nonzero rational vector; errors on the zero vector.
    pub fn from_vec(v: &[Rat]) -> Result<Ray> {
        let mut l = BigInt::one();
        for x in v {
            l = l.lcm(x.denom());
        }
        let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&l / x.denom())).collect();
        let mut g = BigInt::zero();
        for x in &ints {
            g = g.gcd(x);
        }
        if g.is_zero() {
            return Err(Error::Precondition("zero vector is not a ray".into()));
        }
        Ok(Ray(ints.iter().map(|x| x / &g).collect()))
    }

    pub fn to_rats(&self) -> Vec<Rat> {
        self.0.iter().map(|x| Rat::from_integer(x.clone())).collect()
    }
}

/// A finite set of pairwise distinct primitive rays.
pub type RayList = BTreeSet<Ray>;

pub fn ray_list(vectors: &[Vec<Rat>]) -> Result<RayList> {
    vectors.iter().map(|v| Ray::from_vec(v)).collect()
}

/// Exact membership of x in the simplicial cone spanned by the columns of
/// `gens` (columns must be linearly independent).
pub fn cone_contains(gens: &Matrix, x: &[Rat]) -> Result<bool> {
    if gens.cols() == 0 {
        return Ok(x.iter().all(|v| v.is_zero()));
    }
    match gens.solve_unique(x)? {
        None => Ok(false),
        Some(coef) => Ok(coef.iter().all(|c| !c.is_negative())),
    }
}

/// Intersection of two strongly convex simplicial cones, returned as the set
/// of extreme rays (empty set encodes the origin).
///
/// The cones are moved into a basis of the intersection of their linear spans;
/// there each cone is cut out by one inequality per generator, and extreme
/// rays of the joint inequality system are recovered from (k-1)-subsets of
/// tight constraints.
pub fn cone_intersection(a: &Matrix, b: &Matrix) -> Result<RayList> {
    let d = a.rows();
    if b.rows() != d {
        return Err(Error::Dimension("cones live in different spaces".into()));
    }
    for (name, m) in [("first", a), ("second", b)] {
        if m.rank() != m.cols() {
            return Err(Error::Precondition(format!(
                "{name} cone has dependent generators"
            )));
        }
    }
    if a.cols() == 0 || b.cols() == 0 {
        return Ok(RayList::new());
    }

    // span(A) ∩ span(B) as the nullspace of stacked orthogonal complements
    let mut ortho_rows: Vec<Vec<Rat>> = Vec::new();
    for m in [a, b] {
        let complement = m.transpose().nullspace();
        for j in 0..complement.cols() {
            ortho_rows.push(complement.column(j));
        }
    }
    let span_basis = if ortho_rows.is_empty() {
        Matrix::identity(d)
    } else {
        Matrix::from_rows(&ortho_rows)?.nullspace()
    };
    let k = span_basis.cols();
    if k == 0 {
        return Ok(RayList::new());
    }

    // In coordinates x = span_basis * y, membership in each cone is a system
    // of linear inequalities W y >= 0 (one row per generator coefficient).
    let mut ineq_rows: Vec<Vec<Rat>> = Vec::new();
    for m in [a, b] {
        let gram = m.transpose().mul(m)?;
        let coeffs = gram.inverse()?.mul(&m.transpose())?.mul(&span_basis)?;
        for i in 0..coeffs.rows() {
            ineq_rows.push(coeffs.row(i));
        }
    }
    let w = Matrix::from_rows(&ineq_rows)?;

    let feasible = |y: &[Rat]| -> Result<bool> {
        Ok(w.mul_vec(y)?.iter().all(|v| !v.is_negative()))
    };
    let mut result = RayList::new();
    let mut push = |y: &[Rat]| -> Result<()> {
        let x = span_basis.mul_vec(y)?;
        if x.iter().any(|v| !v.is_zero()) {
            result.insert(Ray::from_vec(&x)?);
        }
        Ok(())
    };

    if k == 1 {
        for y in [vec![Rat::one()], vec![-Rat::one()]] {
            if feasible(&y)? {
                push(&y)?;
            }
        }
        return Ok(result);
    }

    use itertools::Itertools;
    for subset in (0..w.rows()).combinations(k - 1) {
        let tight = w.select_rows(&subset);
        let null = tight.nullspace();
        if null.cols() != 1 {
            continue;
        }
        let y = null.column(0);
        if feasible(&y)? {
            push(&y)?;
        } else {
            let neg: Vec<Rat> = y.iter().map(|v| -v.clone()).collect();
            if feasible(&neg)? {
                push(&neg)?;
            }
        }
    }
    Ok(result)
}
