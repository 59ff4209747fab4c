//! Calibrations in the standard chart and the semialgebraic moduli chart:
//! determinant sign vectors, the open locus U(D), geometric admissibility and
//! per-component sign inequalities.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::comb::{c_type, product_type, s_type, CombinatorialType, Cone};
use crate::cone::{cone_contains, cone_intersection, ray_list, Ray, RayList};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::rat::{rat, sign, Rat};

/// A d x n rational matrix whose first d columns are the identity (standard
/// chart normalization) and whose rank is d.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Calibration {
    pub d: usize,
    pub n: usize,
    matrix: Matrix,
}

impl Calibration {
    pub fn new(matrix: Matrix) -> Result<Self> {
        let d = matrix.rows();
        let n = matrix.cols();
        if d == 0 || n < d {
            return Err(Error::Dimension("need 0 < d <= n".into()));
        }
        let prefix: Vec<usize> = (0..d).collect();
        if !matrix.select_cols(&prefix).is_identity() {
            return Err(Error::Precondition(
                "first d columns must form the identity".into(),
            ));
        }
        Ok(Calibration { d, n, matrix })
    }

    /// Builds from the free columns only (columns d+1..n), prepending the
    /// identity block.
    pub fn from_free_columns(d: usize, free: &[Vec<Rat>]) -> Result<Self> {
        let mut cols: Vec<Vec<Rat>> = (0..d)
            .map(|i| (0..d).map(|j| if i == j { rat(1) } else { rat(0) }).collect())
            .collect();
        cols.extend_from_slice(free);
        Calibration::new(Matrix::from_columns(&cols)?)
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    /// Column of generator i (1-based).
    pub fn generator(&self, i: usize) -> Vec<Rat> {
        self.matrix.column(i - 1)
    }

    /// Column submatrix over the 1-based index set, ascending order.
    pub fn columns_of(&self, cone: &[usize]) -> Matrix {
        let mut idx: Vec<usize> = cone.iter().map(|&i| i - 1).collect();
        idx.sort_unstable();
        self.matrix.select_cols(&idx)
    }
}

/// Sign vector over the maximal cones of a combinatorial type.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct SignVector(pub BTreeMap<Cone, i8>);

impl SignVector {
    pub fn has_zero(&self) -> bool {
        self.0.values().any(|&s| s == 0)
    }

    /// Entrywise membership in {reference, 0}.
    pub fn degenerates(&self, reference: &SignVector) -> bool {
        self.0.keys().eq(reference.0.keys())
            && self
                .0
                .iter()
                .all(|(c, &s)| s == 0 || s == reference.0[c])
    }
}

fn check_shape(t: &CombinatorialType, h: &Calibration) -> Result<()> {
    if t.d != h.d || t.n != h.n {
        return Err(Error::Dimension(format!(
            "type is ({}, {}) but calibration is ({}, {})",
            t.d, t.n, h.d, h.n
        )));
    }
    Ok(())
}

fn check_top_dimensional(t: &CombinatorialType) -> Result<()> {
    if t.max_cardinality() != t.d {
        return Err(Error::Unsupported(
            "maximal cones must have cardinality d".into(),
        ));
    }
    Ok(())
}

/// Sign of the determinant over every maximal cone, columns taken in
/// ascending index order.
pub fn det_signs(t: &CombinatorialType, h: &Calibration) -> Result<SignVector> {
    check_shape(t, h)?;
    check_top_dimensional(t)?;
    let mut map = BTreeMap::new();
    for c in t.maximal_cones() {
        let det = h.columns_of(&c).det()?;
        map.insert(c, sign(&det));
    }
    Ok(SignVector(map))
}

/// Open locus where every maximal-cone determinant is nonzero.
pub fn in_u(t: &CombinatorialType, h: &Calibration) -> Result<bool> {
    Ok(!det_signs(t, h)?.has_zero())
}

/// Geometric admissibility: the cones spanned by the columns realize exactly
/// the combinatorics of D. Checks per-cone independence, pairwise maximal-cone
/// intersections, and absence of stray containments.
pub fn is_admissible(t: &CombinatorialType, h: &Calibration) -> Result<bool> {
    check_shape(t, h)?;
    check_top_dimensional(t)?;
    for c in &t.cones {
        if c.is_empty() {
            continue;
        }
        let m = h.columns_of(c);
        if m.rank() != c.len() {
            return Ok(false);
        }
    }
    let maxes = t.maximal_cones();
    for (a, b) in iter_pairs(&maxes) {
        let got = cone_intersection(&h.columns_of(a), &h.columns_of(b))?;
        let shared: Cone = a.iter().filter(|i| b.contains(i)).copied().collect();
        let expect: RayList = ray_list(
            &shared
                .iter()
                .map(|&i| h.generator(i))
                .collect::<Vec<_>>(),
        )?;
        if got != expect {
            return Ok(false);
        }
    }
    for &j in &t.rays() {
        let v = h.generator(j);
        for c in &maxes {
            if c.contains(&j) {
                continue;
            }
            if cone_contains(&h.columns_of(c), &v)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn iter_pairs<T>(xs: &[T]) -> impl Iterator<Item = (&T, &T)> {
    xs.iter()
        .enumerate()
        .flat_map(move |(i, a)| xs[i..].iter().map(move |b| (a, b)))
}

/// The sign inequalities cutting the connected moduli chart containing the
/// admissible base point: one (cone, sign) pair per maximal cone.
pub fn component_inequalities(
    t: &CombinatorialType,
    base: &Calibration,
) -> Result<Vec<(Cone, i8)>> {
    if !is_admissible(t, base)? {
        return Err(Error::Precondition("base calibration is not admissible".into()));
    }
    Ok(det_signs(t, base)?.0.into_iter().collect())
}

/// Same open stratum: equal, everywhere nonzero sign vectors.
pub fn same_stratum(t: &CombinatorialType, h: &Calibration, h0: &Calibration) -> Result<bool> {
    let a = det_signs(t, h)?;
    let b = det_signs(t, h0)?;
    Ok(a == b && !a.has_zero())
}

/// Exact completeness test in dimension 2: the rays, sorted by angle, must
/// pairwise-consecutively span 2-cones of D (so the sectors tile the plane).
pub fn is_complete_2d(t: &CombinatorialType, h: &Calibration) -> Result<bool> {
    check_shape(t, h)?;
    if t.d != 2 {
        return Err(Error::Unsupported("completeness test requires d = 2".into()));
    }
    let rays: Vec<usize> = t.rays().into_iter().collect();
    if rays.len() < 3 {
        return Ok(false);
    }
    let mut dirs: Vec<(usize, Ray)> = Vec::new();
    for &i in &rays {
        let v = h.generator(i);
        if v.iter().all(|x| x.is_zero()) {
            return Ok(false);
        }
        dirs.push((i, Ray::from_vec(&v)?));
    }
    // exact angular order: quadrant class then cross-product comparison
    let half = |r: &Ray| -> u8 {
        use num_traits::Signed;
        let (x, y) = (&r.0[0], &r.0[1]);
        if y.is_positive() || (y.is_zero() && x.is_positive()) {
            0
        } else {
            1
        }
    };
    let cross = |a: &Ray, b: &Ray| &a.0[0] * &b.0[1] - &a.0[1] * &b.0[0];
    dirs.sort_by(|(_, a), (_, b)| {
        half(a).cmp(&half(b)).then_with(|| {
            use num_traits::Signed;
            let c = cross(a, b);
            if c.is_positive() {
                std::cmp::Ordering::Less
            } else if c.is_negative() {
                std::cmp::Ordering::Greater
            } else {
                std::cmp::Ordering::Equal
            }
        })
    });
    for w in 0..dirs.len() {
        let (i, a) = &dirs[w];
        let (j, b) = &dirs[(w + 1) % dirs.len()];
        use num_traits::Signed;
        if !cross(a, b).is_positive() {
            return Ok(false); // angular gap of 180 degrees or more
        }
        if !t.contains(&[*i, *j]) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Reference calibration for the simplex type: every free column is all -1.
pub fn reference_s(d: usize) -> Calibration {
    Calibration::from_free_columns(d, &[vec![rat(-1); d]]).unwrap()
}

/// Reference calibration for the cyclic type: hand-picked integer directions
/// with strictly increasing angles from e2 around to e1.
pub fn reference_c(n: usize) -> Calibration {
    let tail: Vec<[i64; 2]> = match n {
        3 => vec![[-1, -1]],
        4 => vec![[-1, 0], [0, -1]],
        5 => vec![[-1, 0], [-1, -2], [1, -2]],
        6 => vec![[-1, 1], [-1, 0], [-1, -2], [1, -2]],
        7 => vec![[-1, 1], [-1, 0], [-2, -1], [-1, -2], [1, -2]],
        8 => vec![[-1, 2], [-1, 1], [-1, 0], [-2, -1], [-1, -2], [1, -2]],
        _ => panic!("no reference calibration tabulated for C_{n}"),
    };
    let free: Vec<Vec<Rat>> = tail
        .iter()
        .map(|[x, y]| vec![rat(*x), rat(*y)])
        .collect();
    Calibration::from_free_columns(2, &free).unwrap()
}

/// Reference calibration for the product type of `product_type()`:
/// generator 4 opposes generator 1, generator 5 opposes the {2, 3} plane.
pub fn reference_product() -> Calibration {
    Calibration::from_free_columns(
        3,
        &[
            vec![rat(-1), rat(0), rat(0)],
            vec![rat(0), rat(-1), rat(-1)],
        ],
    )
    .unwrap()
}

pub fn fixtures() -> Vec<(&'static str, CombinatorialType, Calibration)> {
    vec![
        ("S_2", s_type(2), reference_s(2)),
        ("S_3", s_type(3), reference_s(3)),
        ("C_4", c_type(4), reference_c(4)),
        ("C_5", c_type(5), reference_c(5)),
        ("S_1xS_2", product_type(), reference_product()),
    ]
}
