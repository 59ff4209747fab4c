//! Boundary behavior of calibrations: pointwise combinatorial degeneration,
//! zero-pattern models of the associated varieties, stratum classification by
//! sign vector, and a seeded scan of a chart for its strata.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::comb::{CombinatorialType, Cone};
use crate::error::{Error, Result};
use crate::moduli::{det_signs, is_admissible, Calibration, SignVector};
use crate::rat::{rat, ratio, Rat};

/// The combinatorial type realized by a (possibly boundary) calibration:
/// every cone whose columns have deficient rank is dropped, including 1-cones
/// with a vanishing generator.
pub fn degenerate_type(t: &CombinatorialType, h: &Calibration) -> Result<CombinatorialType> {
    if t.d != h.d || t.n != h.n {
        return Err(Error::Dimension("type and calibration disagree".into()));
    }
    let cones: BTreeSet<Cone> = t
        .cones
        .iter()
        .filter(|c| c.is_empty() || h.columns_of(c).rank() == c.len())
        .cloned()
        .collect();
    Ok(CombinatorialType {
        d: t.d,
        n: t.n,
        cones,
        virtual_set: t.virtual_set.clone(),
    })
}

/// The zero-pattern model of the union of coordinate tori attached to a
/// downward-closed family: a point belongs iff its vanishing set is a member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZeroPatternFamily {
    pub n: usize,
    pub patterns: BTreeSet<Cone>,
}

pub fn zero_patterns(t: &CombinatorialType) -> ZeroPatternFamily {
    ZeroPatternFamily {
        n: t.n,
        patterns: t.cones.clone(),
    }
}

impl ZeroPatternFamily {
    pub fn member(&self, point: &[Rat]) -> Result<bool> {
        if point.len() != self.n {
            return Err(Error::Dimension("point length does not match n".into()));
        }
        let zeros: Cone = point
            .iter()
            .enumerate()
            .filter(|(_, x)| x.is_zero())
            .map(|(i, _)| i + 1)
            .collect();
        Ok(self.patterns.contains(&zeros))
    }
}

/// A closed-stratum class: the sign vector, the cones lost there, the
/// degenerate type, and a witness calibration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stratum {
    pub signs: SignVector,
    pub removed_cones: Vec<Cone>,
    pub degenerate: CombinatorialType,
    pub witness: Calibration,
}

/// Classifies a calibration lying in the closure of the chart of `base`:
/// its sign vector must agree with the base signs entrywise up to zeros.
pub fn classify(
    t: &CombinatorialType,
    h: &Calibration,
    base: &Calibration,
) -> Result<Stratum> {
    if !is_admissible(t, base)? {
        return Err(Error::Precondition("base calibration is not admissible".into()));
    }
    let reference = det_signs(t, base)?;
    let signs = det_signs(t, h)?;
    if !signs.degenerates(&reference) {
        return Err(Error::OutsideClosure(format!(
            "sign vector {:?} is not a degeneration of {:?}",
            signs.0, reference.0
        )));
    }
    let degenerate = degenerate_type(t, h)?;
    let removed_cones: Vec<Cone> = t
        .cones
        .difference(&degenerate.cones)
        .cloned()
        .collect();
    Ok(Stratum {
        signs,
        removed_cones,
        degenerate,
        witness: h.clone(),
    })
}

fn thread_count() -> usize {
    std::env::var("FANMODULI_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&v| v >= 1)
        .unwrap_or(1)
}

/// Deterministic seeded scan of the standard chart for strata of the closed
/// chart of `base`: grid-plus-jitter samples of the free coordinates, with a
/// share of the samples pinned onto each subset of determinant zero loci
/// (solving one determinant for one coordinate at a time, exactly). Returns
/// one stratum per observed sign class, with the earliest witness, sorted by
/// sign vector.
pub fn strata_scan(
    t: &CombinatorialType,
    base: &Calibration,
    chart: &[usize],
    samples: usize,
    seed: u64,
) -> Result<Vec<Stratum>> {
    let standard: Vec<usize> = (1..=t.d).collect();
    if chart != standard {
        return Err(Error::Unsupported(
            "only the standard chart [1..d] is supported".into(),
        ));
    }
    if !is_admissible(t, base)? {
        return Err(Error::Precondition("base calibration is not admissible".into()));
    }
    let maxes = t.maximal_cones();
    if maxes.len() > 20 {
        return Err(Error::Unsupported("too many maximal cones to scan".into()));
    }
    let d = t.d;
    let n = t.n;
    let subsets: Vec<Vec<usize>> = (0..1usize << maxes.len())
        .map(|mask| (0..maxes.len()).filter(|i| mask >> i & 1 == 1).collect())
        .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut candidates: Vec<Calibration> = Vec::with_capacity(samples);
    'sample: for idx in 0..samples {
        let subset = &subsets[idx % subsets.len()];
        // grid + jitter over the free coordinate cube [-3, 3]
        let mut free: Vec<Vec<Rat>> = (0..n - d)
            .map(|_| {
                (0..d)
                    .map(|_| {
                        let cell: i64 = rng.gen_range(0..9);
                        let jitter: i64 = rng.gen_range(-32..=32);
                        ratio(-3, 1) + ratio(6 * cell, 8) + ratio(jitter, 64)
                    })
                    .collect()
            })
            .collect();
        let mut pinned: BTreeSet<(usize, usize)> = BTreeSet::new(); // (col, row)
        for &ci in subset {
            let cone = &maxes[ci];
            // determinants are affine in each single coordinate: evaluate at
            // 0 and 1 to solve exactly
            let mut solved = false;
            let mut slots: Vec<(usize, usize)> = cone
                .iter()
                .filter(|&&i| i > d)
                .flat_map(|&i| (0..d).map(move |r| (i, r)))
                .filter(|slot| !pinned.contains(slot))
                .collect();
            // deterministic slot shuffle
            for k in (1..slots.len()).rev() {
                let j = rng.gen_range(0..=k);
                slots.swap(k, j);
            }
            for (col, row) in slots {
                let eval = |v: &Rat, free: &Vec<Vec<Rat>>| -> Result<Rat> {
                    let mut f = free.clone();
                    f[col - d - 1][row] = v.clone();
                    let h = Calibration::from_free_columns(d, &f)?;
                    h.columns_of(cone).det()
                };
                let at0 = eval(&rat(0), &free)?;
                let at1 = eval(&rat(1), &free)?;
                let slope = &at1 - &at0;
                if slope.is_zero() {
                    continue;
                }
                free[col - d - 1][row] = -at0 / slope;
                pinned.insert((col, row));
                solved = true;
                break;
            }
            if !solved {
                continue 'sample; // this zero locus is unreachable from here
            }
        }
        candidates.push(Calibration::from_free_columns(d, &free)?);
    }

    let threads = thread_count().min(candidates.len().max(1));
    let classified: Vec<Option<Stratum>> = if threads <= 1 {
        candidates
            .iter()
            .map(|h| classify(t, h, base).ok())
            .collect()
    } else {
        let chunk = candidates.len().div_ceil(threads);
        let mut out: Vec<Option<Stratum>> = Vec::with_capacity(candidates.len());
        std::thread::scope(|scope| {
            let handles: Vec<_> = candidates
                .chunks(chunk)
                .map(|part| {
                    scope.spawn(move || {
                        part.iter()
                            .map(|h| classify(t, h, base).ok())
                            .collect::<Vec<_>>()
                    })
                })
                .collect();
            for handle in handles {
                out.extend(handle.join().expect("scan worker panicked"));
            }
        });
        out
    };

    let mut seen: BTreeMap<SignVector, Stratum> = BTreeMap::new();
    for stratum in classified.into_iter().flatten() {
        seen.entry(stratum.signs.clone()).or_insert(stratum);
    }
    Ok(seen.into_values().collect())
}

/// Rank-one projection along an opposite generator pair (d = 2 only): for
/// h(e_j) negatively proportional to h(e_i), pairs the rotation of h(e_i)
/// against every other generator, and returns the positive generator alpha of
/// the group those pairings span together with the pairing row divided by it.
pub fn projected_calibration(
    h: &Calibration,
    i: usize,
    j: usize,
) -> Result<(Rat, Vec<Rat>)> {
    if h.d != 2 {
        return Err(Error::Unsupported("projection requires d = 2".into()));
    }
    if i == j || i == 0 || j == 0 || i > h.n || j > h.n {
        return Err(Error::Dimension("bad generator indices".into()));
    }
    let vi = h.generator(i);
    let vj = h.generator(j);
    let cross = &vi[0] * &vj[1] - &vi[1] * &vj[0];
    let dot = &vi[0] * &vj[0] + &vi[1] * &vj[1];
    if vi.iter().all(|x| x.is_zero())
        || vj.iter().all(|x| x.is_zero())
        || !cross.is_zero()
        || !dot.is_negative()
    {
        return Err(Error::Precondition(
            "generators must be nonzero and negatively proportional".into(),
        ));
    }
    let mut w = vec![-vi[1].clone(), vi[0].clone()];
    let pairing = |w: &[Rat], v: &[Rat]| &w[0] * &v[0] + &w[1] * &v[1];
    let others: Vec<usize> = (1..=h.n).filter(|&k| k != i && k != j).collect();
    if let Some(first) = others
        .iter()
        .map(|&k| pairing(&w, &h.generator(k)))
        .find(|p| !p.is_zero())
    {
        if first.is_negative() {
            w = vec![vi[1].clone(), -vi[0].clone()];
        }
    } else {
        return Err(Error::Precondition("all pairings vanish".into()));
    }
    let pairings: Vec<Rat> = (1..=h.n)
        .map(|k| {
            if k == i || k == j {
                rat(0)
            } else {
                pairing(&w, &h.generator(k))
            }
        })
        .collect();
    // positive generator of the additive group spanned by the pairings
    let mut denom_lcm = BigInt::one();
    for p in &pairings {
        denom_lcm = denom_lcm.lcm(p.denom());
    }
    let mut num_gcd = BigInt::zero();
    for p in &pairings {
        num_gcd = num_gcd.gcd(&(p.numer() * (&denom_lcm / p.denom())));
    }
    let alpha = Rat::new(num_gcd, denom_lcm);
    let row: Vec<Rat> = pairings.iter().map(|p| p / &alpha).collect();
    Ok((alpha, row))
}
