//! The finite symmetry group of a combinatorial type acting on calibrations,
//! the induced action on kernel bases, and the chart cocycles of the action.
//!
//! Conventions (frozen here and verified by the cocycle and action tests):
//! act(g, h) has column i equal to L * h(e_{pi(i)}) with pi the combined
//! permutation and L the inverse of columns pi(1..d); the kernel side acts by
//! row relabeling (row i of g*k is row pi(i) of k); compose(a, b) applies a's
//! permutation first, so act(compose(a, b), h) = act(a, act(b, h)) and
//! K_{compose(a,b),I}([k]) = K_{a,I}(b*[k]) * K_{b,I}([k]).

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;

use crate::comb::{automorphism_group, is_maximal_type, CombinatorialType, RayPermutation};
use crate::error::{Error, Result};
use crate::grassmann::chart_normalize;
use crate::matrix::Matrix;
use crate::moduli::{in_u, Calibration};
use crate::rat::Rat;
use num_traits::One;

/// One symmetry of a combinatorial type: a cone-preserving ray permutation, a
/// permutation of the virtual generators, and (for non-maximal types) an
/// integral shear and unimodular block on the remaining free indices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct GroupElement {
    pub n: usize,
    pub tau: BTreeMap<usize, usize>,
    pub sigma: BTreeMap<usize, usize>,
    pub alpha: Option<Matrix>,
    pub a_block: Option<Matrix>,
}

impl GroupElement {
    pub fn identity(t: &CombinatorialType) -> Self {
        GroupElement {
            n: t.n,
            tau: t.rays().into_iter().map(|r| (r, r)).collect(),
            sigma: t.virtual_set.iter().map(|&v| (v, v)).collect(),
            alpha: None,
            a_block: None,
        }
    }

    pub fn from_parts(
        t: &CombinatorialType,
        tau: BTreeMap<usize, usize>,
        sigma: BTreeMap<usize, usize>,
    ) -> Result<Self> {
        RayPermutation::new(t, tau.clone(), sigma.clone())?;
        Ok(GroupElement {
            n: t.n,
            tau,
            sigma,
            alpha: None,
            a_block: None,
        })
    }

    pub fn from_ray_permutation(t: &CombinatorialType, rp: &RayPermutation) -> Self {
        GroupElement {
            n: t.n,
            tau: rp.tau.clone(),
            sigma: rp.sigma.clone(),
            alpha: None,
            a_block: None,
        }
    }

    /// Combined 1-based permutation of [1, n] (identity on free indices).
    pub fn permutation(&self) -> Vec<usize> {
        (1..=self.n)
            .map(|i| {
                self.tau
                    .get(&i)
                    .or_else(|| self.sigma.get(&i))
                    .copied()
                    .unwrap_or(i)
            })
            .collect()
    }

    /// Group law: apply a's permutation first, then b's.
    pub fn compose(a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        if a.n != b.n {
            return Err(Error::Dimension("elements of different types".into()));
        }
        if a.alpha.is_some() || b.alpha.is_some() || a.a_block.is_some() || b.a_block.is_some()
        {
            return Err(Error::Unsupported(
                "composition of shear blocks is not supported".into(),
            ));
        }
        let pa = a.permutation();
        let pb = b.permutation();
        let combined: Vec<usize> = (1..=a.n).map(|i| pb[pa[i - 1] - 1]).collect();
        let tau: BTreeMap<usize, usize> = a
            .tau
            .keys()
            .map(|&r| (r, combined[r - 1]))
            .collect();
        let sigma: BTreeMap<usize, usize> = a
            .sigma
            .keys()
            .map(|&v| (v, combined[v - 1]))
            .collect();
        Ok(GroupElement {
            n: a.n,
            tau,
            sigma,
            alpha: None,
            a_block: None,
        })
    }
}

/// Action on calibrations: relabel the columns by the permutation (with the
/// optional shear block on free indices) and re-normalize the identity prefix.
pub fn act(t: &CombinatorialType, g: &GroupElement, h: &Calibration) -> Result<Calibration> {
    if t.n != h.n || t.d != h.d || g.n != t.n {
        return Err(Error::Dimension("type, element and calibration disagree".into()));
    }
    let pi = g.permutation();
    let lead: Vec<usize> = (0..h.d).map(|i| pi[i] - 1).collect();
    let l = h
        .matrix()
        .select_cols(&lead)
        .inverse()
        .map_err(|_| Error::Precondition("leading image columns are singular".into()))?;

    let relabeled = if g.alpha.is_none() && g.a_block.is_none() {
        let cols: Vec<usize> = (0..h.n).map(|i| pi[i] - 1).collect();
        h.matrix().select_cols(&cols)
    } else {
        // general block element: multiply by the inverse of the full block
        // matrix H (permutation columns outside the free set, shear and
        // unimodular block on it)
        let free: Vec<usize> = t.free_set().into_iter().collect();
        let rays: Vec<usize> = t.rays().into_iter().collect();
        let alpha = g.alpha.as_ref().ok_or_else(|| {
            Error::Precondition("shear block requires both alpha and A".into())
        })?;
        let a_block = g.a_block.as_ref().ok_or_else(|| {
            Error::Precondition("shear block requires both alpha and A".into())
        })?;
        if alpha.rows() != rays.len()
            || alpha.cols() != free.len()
            || a_block.rows() != free.len()
            || a_block.cols() != free.len()
        {
            return Err(Error::Dimension("shear block sizes do not match".into()));
        }
        if !a_block.det()?.numer().magnitude().eq(&1u32.into()) {
            return Err(Error::Precondition("A block must be unimodular".into()));
        }
        let mut big_h = Matrix::zeros(t.n, t.n);
        let mut inv_pi = vec![0usize; t.n];
        for i in 1..=t.n {
            inv_pi[pi[i - 1] - 1] = i;
        }
        for i in 1..=t.n {
            if !free.contains(&i) {
                big_h[(inv_pi[i - 1] - 1, i - 1)] = Rat::one();
            }
        }
        for (cj, &j) in free.iter().enumerate() {
            for (ri, &r) in rays.iter().enumerate() {
                big_h[(r - 1, j - 1)] = alpha[(ri, cj)].clone();
            }
            for (ri, &r) in free.iter().enumerate() {
                big_h[(r - 1, j - 1)] = a_block[(ri, cj)].clone();
            }
        }
        h.matrix().mul(&big_h.inverse()?)?
    };
    Calibration::new(l.mul(&relabeled)?)
}

/// The full symmetry group of a maximal type: cone automorphisms paired with
/// every permutation of the virtual set.
pub fn group_elements(t: &CombinatorialType) -> Result<Vec<GroupElement>> {
    if !is_maximal_type(t) {
        return Err(Error::Unsupported(
            "group enumeration requires a maximal type".into(),
        ));
    }
    let virt: Vec<usize> = t.virtual_set.iter().copied().collect();
    let mut out = Vec::new();
    for rp in automorphism_group(t) {
        for image in virt.iter().copied().permutations(virt.len()) {
            let sigma: BTreeMap<usize, usize> =
                virt.iter().copied().zip(image).collect();
            out.push(GroupElement {
                n: t.n,
                tau: rp.tau.clone(),
                sigma,
                alpha: None,
                a_block: None,
            });
        }
    }
    Ok(out)
}

fn check_orbit_pre(t: &CombinatorialType, h: &Calibration) -> Result<()> {
    if !in_u(t, h)? {
        return Err(Error::Precondition(
            "calibration has a vanishing maximal-cone determinant".into(),
        ));
    }
    let chart: Vec<usize> = (1..=t.d).collect();
    if !t.contains(&chart) {
        return Err(Error::Unsupported(
            "standard chart cone [1, d] is not in the type".into(),
        ));
    }
    Ok(())
}

/// Orbit of a calibration under the full symmetry group, sorted.
pub fn orbit(t: &CombinatorialType, h: &Calibration) -> Result<Vec<Calibration>> {
    check_orbit_pre(t, h)?;
    let mut set: BTreeSet<Calibration> = BTreeSet::new();
    for g in group_elements(t)? {
        set.insert(act(t, &g, h)?);
    }
    Ok(set.into_iter().collect())
}

/// Least orbit representative (lexicographic on row-major entries).
pub fn canonical_form(t: &CombinatorialType, h: &Calibration) -> Result<Calibration> {
    Ok(orbit(t, h)?.into_iter().next().expect("orbit is nonempty"))
}

/// Finds a group element carrying h1 to h2, if any.
pub fn isomorphic(
    t: &CombinatorialType,
    h1: &Calibration,
    h2: &Calibration,
) -> Result<Option<GroupElement>> {
    check_orbit_pre(t, h1)?;
    check_orbit_pre(t, h2)?;
    for g in group_elements(t)? {
        if act(t, &g, h1)? == *h2 {
            return Ok(Some(g));
        }
    }
    Ok(None)
}

/// Action on kernel bases: row i of the result is row pi(i) of k.
pub fn grassmann_act(g: &GroupElement, k: &Matrix) -> Result<Matrix> {
    if k.rows() != g.n {
        return Err(Error::Dimension("kernel rows do not match the element".into()));
    }
    let pi = g.permutation();
    let rows: Vec<usize> = (0..g.n).map(|i| pi[i] - 1).collect();
    Ok(k.select_rows(&rows))
}

/// Chart cocycle of the action: the chart-row block of g applied to the
/// I-normalized kernel. Satisfies
/// K_{compose(a,b),I}([k]) = K_{a,I}(b*[k]) * K_{b,I}([k]).
pub fn action_cocycle(g: &GroupElement, k: &Matrix, chart: &[usize]) -> Result<Matrix> {
    let s = chart_normalize(k, chart)?;
    let moved = grassmann_act(g, &s.matrix)?;
    let rows: Vec<usize> = chart.iter().map(|&i| i - 1).collect();
    let block = moved.select_rows(&rows);
    if block.inverse().is_err() {
        return Err(Error::NotInChart(chart.to_vec()));
    }
    Ok(block)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::comb::{c_type, s_type};
    use crate::grassmann::gale;
    use crate::moduli::{is_admissible, reference_c, reference_s};
    use crate::rat::rat;

    fn cal(d: usize, free: &[&[i64]]) -> Calibration {
        Calibration::from_free_columns(
            d,
            &free
                .iter()
                .map(|c| c.iter().map(|&x| rat(x)).collect())
                .collect::<Vec<_>>(),
        )
        .unwrap()
    }

    fn span_eq(a: &Matrix, b: &Matrix) -> bool {
        if a.rows() != b.rows() {
            return false;
        }
        let mut cols = a.columns();
        cols.extend(b.columns());
        let joint = Matrix::from_columns(&cols).unwrap();
        a.rank() == b.rank() && a.rank() == joint.rank()
    }

    #[test]
    fn reference_simplex_point_is_fixed() {
        let t = s_type(2);
        let h = reference_s(2);
        assert_eq!(orbit(&t, &h).unwrap(), vec![h.clone()]);
    }

    #[test]
    fn orbit_size_divides_group_order() {
        let t = s_type(2);
        let h = cal(2, &[&[-1, -2]]);
        let o = orbit(&t, &h).unwrap();
        assert_eq!(6 % o.len(), 0);
        assert!(o.len() > 1);
        for x in &o {
            assert_eq!(canonical_form(&t, x).unwrap(), o[0]);
            assert!(is_admissible(&t, x).unwrap());
        }
    }

    #[test]
    fn action_composes_with_group_law() {
        let t = c_type(4);
        let h = cal(2, &[&[-1, 1], &[-1, -2]]);
        let elems = group_elements(&t).unwrap();
        for a in &elems {
            for b in &elems {
                let lhs = act(&t, &GroupElement::compose(a, b).unwrap(), &h).unwrap();
                let rhs = act(&t, a, &act(&t, b, &h).unwrap()).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn orbits_are_closed_under_action() {
        let t = c_type(4);
        let h = reference_c(4);
        let o = orbit(&t, &h).unwrap();
        for g in group_elements(&t).unwrap() {
            for x in &o {
                assert!(o.contains(&act(&t, &g, x).unwrap()));
            }
        }
    }

    #[test]
    fn isomorphic_finds_witness() {
        let t = s_type(2);
        let h1 = cal(2, &[&[-1, -2]]);
        let o = orbit(&t, &h1).unwrap();
        let h2 = o.last().unwrap().clone();
        let g = isomorphic(&t, &h1, &h2).unwrap().unwrap();
        assert_eq!(act(&t, &g, &h1).unwrap(), h2);
        let far = cal(2, &[&[-1, -3]]);
        assert!(isomorphic(&t, &h1, &far).unwrap().is_none());
    }

    #[test]
    fn kernel_equivariance() {
        let t = c_type(4);
        let h = cal(2, &[&[-2, 1], &[-1, -3]]);
        for g in group_elements(&t).unwrap() {
            let moved = act(&t, &g, &h).unwrap();
            let lhs = gale(&moved);
            let rhs = grassmann_act(&g, &gale(&h)).unwrap();
            assert!(span_eq(&lhs, &rhs));
        }
    }

    #[test]
    fn cocycle_law() {
        let t = c_type(4);
        let k = Matrix::from_columns(&[
            vec![rat(1), rat(2), rat(1), rat(-1)],
            vec![rat(0), rat(1), rat(3), rat(2)],
        ])
        .unwrap();
        let chart = vec![3usize, 4];
        let elems = group_elements(&t).unwrap();
        for a in &elems {
            for b in &elems {
                let kb = match action_cocycle(b, &k, &chart) {
                    Ok(m) => m,
                    Err(_) => continue, // chart violated along the way
                };
                let moved = grassmann_act(b, &chart_normalize(&k, &chart).unwrap().matrix)
                    .unwrap();
                let ka_at = match action_cocycle(a, &moved, &chart) {
                    Ok(m) => m,
                    Err(_) => continue,
                };
                let kab = match action_cocycle(
                    &GroupElement::compose(a, b).unwrap(),
                    &k,
                    &chart,
                ) {
                    Ok(m) => m,
                    Err(_) => continue,
                };
                assert_eq!(ka_at.mul(&kb).unwrap(), kab);
            }
        }
    }

    #[test]
    fn shear_block_action_is_exact_matrix_arithmetic() {
        // a non-maximal type: rays {1,2}, virtual {4}, free {3}
        let t = crate::comb::CombinatorialType::new(
            2,
            4,
            vec![vec![1], vec![2], vec![1, 2]],
            [4],
        )
        .unwrap();
        let h = cal(2, &[&[3, 5], &[-1, -1]]);
        let mut g = GroupElement::identity(&t);
        g.alpha = Some(Matrix::from_columns(&[vec![rat(2), rat(-1)]]).unwrap());
        g.a_block = Some(Matrix::from_columns(&[vec![rat(1)]]).unwrap());
        let moved = act(&t, &g, &h).unwrap();
        // H = [[1,0,2,0],[0,1,-1,0],[0,0,1,0],[0,0,0,1]], so the free column
        // becomes h(e3) - 2 h(e1) + h(e2) and the rest are untouched
        assert_eq!(moved.generator(3), vec![rat(1), rat(6)]);
        assert_eq!(moved.generator(4), vec![rat(-1), rat(-1)]);
    }
}
