//! The kernel (Gale) side: chart normalizations of kernel bases, transition
//! matrices between charts, Plucker coordinates and the sign conditions
//! cutting the compactified moduli chart.

use std::collections::BTreeMap;

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::comb::{CombinatorialType, Cone};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::moduli::{is_admissible, Calibration};
use crate::rat::{sign, Rat};

/// Kernel basis of the calibration matrix: an n x (n-d) matrix whose column
/// span is the Gale dual subspace.
pub fn gale(h: &Calibration) -> Matrix {
    h.matrix().nullspace()
}

/// A kernel basis normalized so that its row submatrix over `chart`
/// (1-based, ascending) is the identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChartedKernel {
    pub matrix: Matrix,
    pub chart: Vec<usize>,
}

fn chart_rows(k: &Matrix, chart: &[usize]) -> Result<Matrix> {
    let r = k.cols();
    let mut rows: Vec<usize> = Vec::with_capacity(chart.len());
    for &i in chart {
        if i == 0 || i > k.rows() {
            return Err(Error::Dimension(format!("chart row {i} out of range")));
        }
        rows.push(i - 1);
    }
    if rows.len() != r || rows.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Dimension(
            "chart must be an ascending set of n-d row indices".into(),
        ));
    }
    Ok(k.select_rows(&rows))
}

/// Right-multiplies by the inverse of the chart row block; errors with
/// NotInChart when the block is singular.
pub fn chart_normalize(k: &Matrix, chart: &[usize]) -> Result<ChartedKernel> {
    let block = chart_rows(k, chart)?;
    let inv = block
        .inverse()
        .map_err(|_| Error::NotInChart(chart.to_vec()))?;
    Ok(ChartedKernel {
        matrix: k.mul(&inv)?,
        chart: chart.to_vec(),
    })
}

/// Transition matrix from chart `from` to chart `to`: the rows-`to` block of
/// the `from`-normalized kernel. Satisfies s_to = s_from * transition^{-1}.
pub fn transition(k: &Matrix, from: &[usize], to: &[usize]) -> Result<Matrix> {
    let s = chart_normalize(k, from)?;
    let block = chart_rows(&s.matrix, to)?;
    if block.inverse().is_err() {
        return Err(Error::NotInChart(to.to_vec()));
    }
    Ok(block)
}

/// A projective vector of maximal minors, normalized to primitive integers
/// with positive first nonzero entry; keys are ascending row subsets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PluckerVector {
    pub n: usize,
    pub rank: usize,
    pub coords: BTreeMap<Vec<usize>, Rat>,
}

impl PluckerVector {
    pub fn get(&self, subset: &[usize]) -> Result<&Rat> {
        let mut s = subset.to_vec();
        s.sort_unstable();
        self.coords
            .get(&s)
            .ok_or_else(|| Error::Dimension(format!("no Plucker coordinate {subset:?}")))
    }

    /// Builds from raw coordinates (normalizing them); errors when all are
    /// zero or the key set is not all rank-subsets of [1, n].
    pub fn new(n: usize, rank: usize, raw: BTreeMap<Vec<usize>, Rat>) -> Result<Self> {
        let expect: Vec<Vec<usize>> = (1..=n).combinations(rank).collect();
        if raw.len() != expect.len() || !expect.iter().all(|s| raw.contains_key(s)) {
            return Err(Error::Dimension("wrong Plucker coordinate index set".into()));
        }
        let mut l = BigInt::one();
        for v in raw.values() {
            l = l.lcm(v.denom());
        }
        let mut ints: BTreeMap<Vec<usize>, BigInt> = raw
            .iter()
            .map(|(k, v)| (k.clone(), v.numer() * (&l / v.denom())))
            .collect();
        let mut g = BigInt::zero();
        for v in ints.values() {
            g = g.gcd(v);
        }
        if g.is_zero() {
            return Err(Error::Precondition("zero Plucker vector".into()));
        }
        let first_sign = ints
            .values()
            .find(|v| !v.is_zero())
            .map(|v| v.is_negative())
            .unwrap_or(false);
        for v in ints.values_mut() {
            *v = &*v / &g;
            if first_sign {
                *v = -&*v;
            }
        }
        Ok(PluckerVector {
            n,
            rank,
            coords: ints
                .into_iter()
                .map(|(k, v)| (k, Rat::from_integer(v)))
                .collect(),
        })
    }
}

/// Raw maximal minors of k by ascending row subsets (no normalization).
pub fn raw_minors(k: &Matrix) -> Result<BTreeMap<Vec<usize>, Rat>> {
    let r = k.cols();
    let cols: Vec<usize> = (0..r).collect();
    let mut out = BTreeMap::new();
    for subset in (1..=k.rows()).combinations(r) {
        let rows: Vec<usize> = subset.iter().map(|&i| i - 1).collect();
        out.insert(subset, k.select(&rows, &cols).det()?);
    }
    Ok(out)
}

/// Normalized Plucker vector of a full-column-rank matrix.
pub fn plucker(k: &Matrix) -> Result<PluckerVector> {
    if k.rank() != k.cols() {
        return Err(Error::Precondition("kernel basis has dependent columns".into()));
    }
    PluckerVector::new(k.rows(), k.cols(), raw_minors(k)?)
}

/// One sign condition of the compactified chart: the product of the Plucker
/// coordinates complementary to two maximal cones must have the given sign or
/// vanish.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ClosureCondition {
    pub cone_a: Cone,
    pub cone_b: Cone,
    pub sign: i8,
}

fn complement(n: usize, cone: &[usize]) -> Vec<usize> {
    (1..=n).filter(|i| !cone.contains(i)).collect()
}

/// The pairwise product conditions over maximal cones, with required signs
/// read off the admissible base point. A type with a single maximal cone gets
/// the one vacuous squared condition.
pub fn closure_conditions(
    t: &CombinatorialType,
    base: &Calibration,
) -> Result<Vec<ClosureCondition>> {
    if !is_admissible(t, base)? {
        return Err(Error::Precondition("base calibration is not admissible".into()));
    }
    let p0 = plucker(&gale(base))?;
    let maxes = t.maximal_cones();
    let mut pairs: Vec<(Cone, Cone)> = Vec::new();
    if maxes.len() == 1 {
        pairs.push((maxes[0].clone(), maxes[0].clone()));
    } else {
        for i in 0..maxes.len() {
            for j in i + 1..maxes.len() {
                pairs.push((maxes[i].clone(), maxes[j].clone()));
            }
        }
    }
    let mut out = Vec::new();
    for (a, b) in pairs {
        let pa = p0.get(&complement(t.n, &a))?;
        let pb = p0.get(&complement(t.n, &b))?;
        let s = sign(&(pa * pb));
        if s == 0 {
            return Err(Error::Precondition(
                "vanishing Plucker coordinate at an admissible base point".into(),
            ));
        }
        out.push(ClosureCondition {
            cone_a: a,
            cone_b: b,
            sign: s,
        });
    }
    Ok(out)
}

/// Tests a Plucker point against a condition list.
pub fn in_closure(
    t: &CombinatorialType,
    p: &PluckerVector,
    conditions: &[ClosureCondition],
) -> Result<bool> {
    if p.n != t.n || p.rank + t.d != t.n {
        return Err(Error::Dimension("Plucker vector does not match the type".into()));
    }
    for c in conditions {
        let pa = p.get(&complement(t.n, &c.cone_a))?;
        let pb = p.get(&complement(t.n, &c.cone_b))?;
        let s = sign(&(pa * pb));
        if s != 0 && s != c.sign {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::comb::{c_type, s_type};
    use crate::moduli::{reference_c, reference_s};
    use crate::rat::{rat, ratio};

    fn mat(cols: &[&[i64]]) -> Matrix {
        Matrix::from_columns(
            &cols
                .iter()
                .map(|c| c.iter().map(|&x| rat(x)).collect())
                .collect::<Vec<_>>(),
        )
        .unwrap()
    }

    #[test]
    fn gale_of_reference_quadrilateral() {
        let k = gale(&reference_c(4));
        assert_eq!(k.columns(), mat(&[&[1, 0, 1, 0], &[0, 1, 0, 1]]).columns());
    }

    #[test]
    fn chart_normalize_and_transition() {
        let k = mat(&[&[1, 0, 1, 0], &[0, 1, 0, 1]]);
        let s = chart_normalize(&k, &[3, 4]).unwrap();
        assert!(chart_rows(&s.matrix, &[3, 4]).unwrap().is_identity());
        let tr = transition(&k, &[3, 4], &[1, 2]).unwrap();
        assert!(tr.is_identity());
        // a chart the kernel misses
        let k2 = mat(&[&[1, 0, 0, 0], &[0, 1, 0, 1]]);
        assert!(matches!(
            chart_normalize(&k2, &[3, 4]),
            Err(Error::NotInChart(_))
        ));
    }

    #[test]
    fn transition_cocycle_and_inverse() {
        let k = mat(&[&[1, 2, 1, -1], &[0, 1, 3, 2]]);
        let charts = [vec![1, 2], vec![1, 3], vec![2, 4], vec![3, 4]];
        for i in &charts {
            for j in &charts {
                for l in &charts {
                    let kij = transition(&k, j, i).unwrap();
                    let kjl = transition(&k, l, j).unwrap();
                    let kil = transition(&k, l, i).unwrap();
                    assert_eq!(kij.mul(&kjl).unwrap(), kil);
                }
            }
        }
        let kij = transition(&k, &[1, 2], &[3, 4]).unwrap();
        let kji = transition(&k, &[3, 4], &[1, 2]).unwrap();
        assert!(kij.mul(&kji).unwrap().is_identity());
    }

    #[test]
    fn plucker_of_quadrilateral_kernel() {
        let p = plucker(&gale(&reference_c(4))).unwrap();
        let expect: BTreeMap<Vec<usize>, Rat> = [
            (vec![1, 2], rat(1)),
            (vec![1, 3], rat(0)),
            (vec![1, 4], rat(1)),
            (vec![2, 3], rat(-1)),
            (vec![2, 4], rat(0)),
            (vec![3, 4], rat(1)),
        ]
        .into_iter()
        .collect();
        assert_eq!(p.coords, expect);
    }

    #[test]
    fn plucker_normalization() {
        let k = Matrix::from_columns(&[vec![ratio(-1, 2), ratio(-1, 3), rat(0)]]).unwrap();
        let p = plucker(&k).unwrap();
        assert_eq!(p.get(&[1]).unwrap(), &rat(3));
        assert_eq!(p.get(&[2]).unwrap(), &rat(2));
        assert_eq!(p.get(&[3]).unwrap(), &rat(0));
    }

    #[test]
    fn plucker_three_term_relation() {
        let k = mat(&[&[3, 1, -2, 5], &[1, 4, 1, -1]]);
        let p = plucker(&k).unwrap();
        let g = |a: usize, b: usize| p.get(&[a, b]).unwrap().clone();
        assert_eq!(
            g(1, 2) * g(3, 4) - g(1, 3) * g(2, 4) + g(1, 4) * g(2, 3),
            rat(0)
        );
    }

    #[test]
    fn closure_of_simplex_is_orthant() {
        let t = s_type(2);
        let conds = closure_conditions(&t, &reference_s(2)).unwrap();
        assert_eq!(conds.len(), 3);
        let point = |v: [i64; 3]| {
            PluckerVector::new(
                3,
                1,
                [(vec![1], rat(v[0])), (vec![2], rat(v[1])), (vec![3], rat(v[2]))]
                    .into_iter()
                    .collect(),
            )
            .unwrap()
        };
        for v in [[1, 1, 1], [1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 0]] {
            assert!(in_closure(&t, &point(v), &conds).unwrap(), "{v:?}");
        }
        for v in [[1, -1, 1], [1, 0, -1], [-1, 1, 1]] {
            assert!(!in_closure(&t, &point(v), &conds).unwrap(), "{v:?}");
        }
    }

    #[test]
    fn closure_of_quadrilateral_is_six_pairwise_products() {
        let t = c_type(4);
        let conds = closure_conditions(&t, &reference_c(4)).unwrap();
        assert_eq!(conds.len(), 6);
        // distinguished coordinates are the complements of the four maximal
        // cones with base signs p34, p23, p14, p12 = +, -, +, +; so exactly
        // the pairs touching cone {1,4} (coordinate p23) require a negative
        // product
        for c in &conds {
            let involves_14 = c.cone_a == vec![1, 4] || c.cone_b == vec![1, 4];
            assert_eq!(c.sign, if involves_14 { -1 } else { 1 }, "{c:?}");
        }
        // the base point itself is inside
        let p0 = plucker(&gale(&reference_c(4))).unwrap();
        assert!(in_closure(&t, &p0, &conds).unwrap());
    }

    #[test]
    fn single_maximal_cone_gives_vacuous_condition() {
        let t = crate::comb::CombinatorialType::new(
            2,
            2,
            vec![vec![1], vec![2], vec![1, 2]],
            [],
        )
        .unwrap();
        let h = Calibration::from_free_columns(2, &[]).unwrap();
        let conds = closure_conditions(&t, &h).unwrap();
        assert_eq!(conds.len(), 1);
        assert_eq!(conds[0].cone_a, conds[0].cone_b);
        assert_eq!(conds[0].sign, 1);
    }
}
