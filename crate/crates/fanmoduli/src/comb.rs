//! Combinatorial types: downward-closed families of index subsets with a
//! virtual generator set, their automorphisms and combinatorial degenerations.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};

pub type Cone = Vec<usize>; // sorted, 1-based indices

/// A combinatorial type of a simplicial fan with n generators in dimension d:
/// a downward-closed family of subsets of [1, n] (always containing the empty
/// set) together with a set of virtual generator indices disjoint from the
/// family's rays.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct CombinatorialType {
    pub d: usize,
    pub n: usize,
    pub cones: BTreeSet<Cone>,
    pub virtual_set: BTreeSet<usize>,
}

impl CombinatorialType {
    /// Builds and validates in one step; the empty cone is added implicitly.
    pub fn new(
        d: usize,
        n: usize,
        cones: impl IntoIterator<Item = Cone>,
        virtual_set: impl IntoIterator<Item = usize>,
    ) -> Result<Self> {
        let mut set: BTreeSet<Cone> = BTreeSet::new();
        set.insert(vec![]);
        for mut c in cones {
            c.sort_unstable();
            c.dedup();
            set.insert(c);
        }
        let t = CombinatorialType {
            d,
            n,
            cones: set,
            virtual_set: virtual_set.into_iter().collect(),
        };
        t.validate()?;
        Ok(t)
    }

    /// Checks every structural axiom, reporting the first violation with a
    /// witness subset.
    pub fn validate(&self) -> Result<()> {
        let fail = |axiom: &str, witness: Vec<usize>| {
            Err(Error::Validation {
                axiom: axiom.into(),
                witness,
            })
        };
        if self.d == 0 || self.n < self.d {
            return fail("dimension bounds (0 < d <= n)", vec![self.d, self.n]);
        }
        for c in &self.cones {
            if c.iter().any(|&i| i == 0 || i > self.n) {
                return fail("cone indices lie in [1, n]", c.clone());
            }
            if c.windows(2).any(|w| w[0] >= w[1]) {
                return fail("cones are strictly sorted", c.clone());
            }
            if c.len() > self.d {
                return fail("cone cardinality at most d", c.clone());
            }
        }
        if !self.cones.iter().any(|c| c.len() == self.d) {
            return fail("some cone has cardinality exactly d", vec![]);
        }
        for c in &self.cones {
            if c.len() < 2 {
                continue;
            }
            for drop in 0..c.len() {
                let mut face = c.clone();
                face.remove(drop);
                if !self.cones.contains(&face) {
                    return fail("downward closure", face);
                }
            }
            // cardinality-1 faces
            for &i in c {
                if !self.cones.contains(&vec![i]) {
                    return fail("downward closure", vec![i]);
                }
            }
        }
        if let Some(&v) = self.virtual_set.iter().find(|&&v| v == 0 || v > self.n) {
            return fail("virtual indices lie in [1, n]", vec![v]);
        }
        let rays = self.rays();
        if let Some(&v) = self.virtual_set.intersection(&rays).next() {
            return fail("virtual set disjoint from rays", vec![v]);
        }
        Ok(())
    }

    /// Indices appearing as singleton members.
    pub fn rays(&self) -> BTreeSet<usize> {
        self.cones
            .iter()
            .filter(|c| c.len() == 1)
            .map(|c| c[0])
            .collect()
    }

    /// Indices that are neither rays nor virtual.
    pub fn free_set(&self) -> BTreeSet<usize> {
        let rays = self.rays();
        (1..=self.n)
            .filter(|i| !rays.contains(i) && !self.virtual_set.contains(i))
            .collect()
    }

    /// Members of maximal cardinality.
    pub fn maximal_cones(&self) -> Vec<Cone> {
        let top = self.cones.iter().map(|c| c.len()).max().unwrap_or(0);
        self.cones.iter().filter(|c| c.len() == top).cloned().collect()
    }

    pub fn max_cardinality(&self) -> usize {
        self.cones.iter().map(|c| c.len()).max().unwrap_or(0)
    }

    pub fn contains(&self, cone: &[usize]) -> bool {
        let mut c = cone.to_vec();
        c.sort_unstable();
        self.cones.contains(&c)
    }
}

/// Every index of [1, n] is accounted for as a ray or a virtual generator.
pub fn is_maximal_type(t: &CombinatorialType) -> bool {
    t.free_set().is_empty()
}

/// A permutation of the rays of a combinatorial type that maps its family of
/// cones onto itself, with an optional permutation of the virtual set.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct RayPermutation {
    pub tau: BTreeMap<usize, usize>,
    pub sigma: BTreeMap<usize, usize>,
}

impl RayPermutation {
    pub fn new(
        t: &CombinatorialType,
        tau: BTreeMap<usize, usize>,
        sigma: BTreeMap<usize, usize>,
    ) -> Result<Self> {
        let rays = t.rays();
        let dom: BTreeSet<usize> = tau.keys().copied().collect();
        let img: BTreeSet<usize> = tau.values().copied().collect();
        if dom != rays || img != rays {
            return Err(Error::Precondition("tau is not a permutation of the rays".into()));
        }
        let vdom: BTreeSet<usize> = sigma.keys().copied().collect();
        let vimg: BTreeSet<usize> = sigma.values().copied().collect();
        if vdom != t.virtual_set || vimg != t.virtual_set {
            return Err(Error::Precondition(
                "sigma is not a permutation of the virtual set".into(),
            ));
        }
        for c in &t.cones {
            let mut image: Cone = c.iter().map(|i| tau[i]).collect();
            image.sort_unstable();
            if !t.cones.contains(&image) {
                return Err(Error::Precondition(format!(
                    "tau does not preserve the cone family (witness {c:?})"
                )));
            }
        }
        Ok(RayPermutation { tau, sigma })
    }

    /// Image of an arbitrary index: tau on rays, sigma on virtuals, identity
    /// elsewhere.
    pub fn image(&self, i: usize) -> usize {
        self.tau
            .get(&i)
            .or_else(|| self.sigma.get(&i))
            .copied()
            .unwrap_or(i)
    }
}

/// All automorphisms of the cone family, as permutations of the rays
/// (the virtual part is left as the identity). Backtracking over ray images
/// with membership-degree pruning.
pub fn automorphism_group(t: &CombinatorialType) -> Vec<RayPermutation> {
    let rays: Vec<usize> = t.rays().into_iter().collect();
    // signature: for each ray, the sorted multiset of cardinalities of members
    // containing it; automorphisms preserve it.
    let signature = |r: usize| -> Vec<usize> {
        let mut sizes: Vec<usize> = t
            .cones
            .iter()
            .filter(|c| c.binary_search(&r).is_ok())
            .map(|c| c.len())
            .collect();
        sizes.sort_unstable();
        sizes
    };
    let sigs: BTreeMap<usize, Vec<usize>> = rays.iter().map(|&r| (r, signature(r))).collect();

    let mut out = Vec::new();
    let mut assignment: BTreeMap<usize, usize> = BTreeMap::new();
    let mut used: BTreeSet<usize> = BTreeSet::new();

    fn extend(
        t: &CombinatorialType,
        rays: &[usize],
        sigs: &BTreeMap<usize, Vec<usize>>,
        assignment: &mut BTreeMap<usize, usize>,
        used: &mut BTreeSet<usize>,
        out: &mut Vec<RayPermutation>,
    ) {
        let pos = assignment.len();
        if pos == rays.len() {
            let sigma = t.virtual_set.iter().map(|&v| (v, v)).collect();
            if let Ok(p) = RayPermutation::new(t, assignment.clone(), sigma) {
                out.push(p);
            }
            return;
        }
        let r = rays[pos];
        for &cand in rays {
            if used.contains(&cand) || sigs[&r] != sigs[&cand] {
                continue;
            }
            assignment.insert(r, cand);
            used.insert(cand);
            // prune: members fully inside the assigned domain must map to members
            let ok = t.cones.iter().all(|c| {
                if c.iter().any(|i| !assignment.contains_key(i)) {
                    return true;
                }
                let mut image: Cone = c.iter().map(|i| assignment[i]).collect();
                image.sort_unstable();
                t.cones.contains(&image)
            });
            if ok {
                extend(t, rays, sigs, assignment, used, out);
            }
            assignment.remove(&r);
            used.remove(&cand);
        }
    }

    extend(t, &rays, &sigs, &mut assignment, &mut used, &mut out);
    out
}

/// All proper combinatorial degenerations: downward-closed strict subfamilies
/// with the same rays and the same maximal cardinality. Enumerated by deciding
/// keep/remove per member in decreasing cardinality order (a kept member
/// forces all faces kept; a member below a kept member is forced kept).
pub fn enumerate_degenerations(t: &CombinatorialType) -> Vec<CombinatorialType> {
    let mut members: Vec<Cone> = t.cones.iter().filter(|c| c.len() >= 2).cloned().collect();
    members.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    let top = t.max_cardinality();

    let mut out = Vec::new();
    let mut removed: Vec<bool> = vec![false; members.len()];

    fn is_face(a: &Cone, b: &Cone) -> bool {
        a.len() < b.len() && a.iter().all(|i| b.binary_search(i).is_ok())
    }

    #[allow(clippy::too_many_arguments)]
    fn walk(
        t: &CombinatorialType,
        members: &[Cone],
        top: usize,
        pos: usize,
        removed: &mut Vec<bool>,
        out: &mut Vec<CombinatorialType>,
    ) {
        if pos == members.len() {
            let removed_any = removed.iter().any(|&r| r);
            let keeps_top = members
                .iter()
                .zip(removed.iter())
                .any(|(c, &r)| !r && c.len() == top);
            if removed_any && keeps_top {
                let cones: BTreeSet<Cone> = t
                    .cones
                    .iter()
                    .filter(|c| {
                        c.len() < 2
                            || !removed[members.binary_search_by(|m| {
                                m.len().cmp(&c.len()).reverse().then_with(|| m.cmp(c))
                            })
                            .unwrap()]
                    })
                    .cloned()
                    .collect();
                out.push(CombinatorialType {
                    d: t.d,
                    n: t.n,
                    cones,
                    virtual_set: t.virtual_set.clone(),
                });
            }
            return;
        }
        let forced_kept = members[..pos]
            .iter()
            .zip(removed.iter())
            .any(|(kept, &r)| !r && is_face(&members[pos], kept));
        removed[pos] = false;
        walk(t, members, top, pos + 1, removed, out);
        if !forced_kept {
            removed[pos] = true;
            walk(t, members, top, pos + 1, removed, out);
            removed[pos] = false;
        }
    }

    walk(t, &members, top, 0, &mut removed, &mut out);
    out.sort();
    out
}

/// The boundary complex of the d-simplex on d+1 vertices (projective space).
pub fn s_type(d: usize) -> CombinatorialType {
    let n = d + 1;
    let mut cones: Vec<Cone> = Vec::new();
    for mask in 1u32..(1 << n) {
        let c: Cone = (1..=n).filter(|i| mask >> (i - 1) & 1 == 1).collect();
        if c.len() <= d {
            cones.push(c);
        }
    }
    CombinatorialType::new(d, n, cones, []).unwrap()
}

/// The n-gon fan in dimension 2 (cyclic type).
pub fn c_type(n: usize) -> CombinatorialType {
    assert!(n >= 3);
    let mut cones: Vec<Cone> = (1..=n).map(|i| vec![i]).collect();
    for i in 1..n {
        cones.push(vec![i, i + 1]);
    }
    cones.push(vec![1, n]);
    CombinatorialType::new(2, n, cones, []).unwrap()
}

/// The product of the 1-simplex and 2-simplex boundaries (n = 5, d = 3),
/// labeled so that {1, 2, 3} is a maximal cone: the line pair is {1, 4} and
/// the triangle triple is {2, 3, 5}.
pub fn product_type() -> CombinatorialType {
    let mut cones: Vec<Cone> = Vec::new();
    for &i in &[1usize, 4] {
        for pair in [[2usize, 3], [2, 5], [3, 5]] {
            let mut c = vec![i, pair[0], pair[1]];
            c.sort_unstable();
            cones.push(c.clone());
            // faces are added by closure below
        }
    }
    let mut closed: BTreeSet<Cone> = BTreeSet::new();
    for c in &cones {
        for mask in 1u32..(1 << c.len()) {
            let face: Cone = c
                .iter()
                .enumerate()
                .filter(|(k, _)| mask >> k & 1 == 1)
                .map(|(_, &i)| i)
                .collect();
            closed.insert(face);
        }
    }
    CombinatorialType::new(3, 5, closed, []).unwrap()
}
