//! JSON codecs for the public types. Rationals travel as "p/q" strings,
//! matrices as arrays of column arrays, subsets as ascending 1-based index
//! arrays (compact digit keys in sign and Plucker maps).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::comb::{CombinatorialType, Cone};
use crate::degeneration::{Stratum, ZeroPatternFamily};
use crate::error::{Error, Result};
use crate::grassmann::{ChartedKernel, ClosureCondition, PluckerVector};
use crate::matrix::Matrix;
use crate::moduli::{Calibration, SignVector};
use crate::rat::{format_rat, parse_rat};
use crate::symmetry::GroupElement;

pub type MatrixJson = Vec<Vec<String>>;

pub fn matrix_to_json(m: &Matrix) -> MatrixJson {
    m.columns()
        .iter()
        .map(|c| c.iter().map(format_rat).collect())
        .collect()
}

pub fn matrix_from_json(j: &MatrixJson) -> Result<Matrix> {
    let cols: Result<Vec<Vec<_>>> = j
        .iter()
        .map(|c| c.iter().map(|s| parse_rat(s)).collect())
        .collect();
    Matrix::from_columns(&cols?)
}

/// Compact key for an index subset: digits are concatenated while n fits in
/// one digit per index, comma-separated otherwise.
pub fn cone_key(n: usize, cone: &[usize]) -> String {
    let parts: Vec<String> = cone.iter().map(|i| i.to_string()).collect();
    if n <= 9 {
        parts.concat()
    } else {
        parts.join(",")
    }
}

pub fn parse_cone_key(n: usize, key: &str) -> Result<Cone> {
    let cone: Cone = if n <= 9 {
        key.chars()
            .map(|c| {
                c.to_digit(10)
                    .map(|d| d as usize)
                    .ok_or_else(|| Error::Parse(format!("bad subset key {key:?}")))
            })
            .collect::<Result<_>>()?
    } else {
        key.split(',')
            .map(|p| {
                p.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad subset key {key:?}")))
            })
            .collect::<Result<_>>()?
    };
    Ok(cone)
}

#[derive(Serialize, Deserialize)]
pub struct TypeJson {
    pub d: usize,
    pub n: usize,
    pub cones: Vec<Cone>,
    #[serde(rename = "virtual", default)]
    pub virtual_set: Vec<usize>,
}

pub fn type_to_json(t: &CombinatorialType) -> TypeJson {
    TypeJson {
        d: t.d,
        n: t.n,
        cones: t.cones.iter().filter(|c| !c.is_empty()).cloned().collect(),
        virtual_set: t.virtual_set.iter().copied().collect(),
    }
}

pub fn type_from_json(j: TypeJson) -> Result<CombinatorialType> {
    CombinatorialType::new(j.d, j.n, j.cones, j.virtual_set)
}

#[derive(Serialize, Deserialize)]
pub struct CalibrationJson {
    pub d: usize,
    pub n: usize,
    pub columns: MatrixJson,
}

pub fn calibration_to_json(h: &Calibration) -> CalibrationJson {
    CalibrationJson {
        d: h.d,
        n: h.n,
        columns: matrix_to_json(h.matrix()),
    }
}

pub fn calibration_from_json(j: CalibrationJson) -> Result<Calibration> {
    let m = matrix_from_json(&j.columns)?;
    if m.rows() != j.d || m.cols() != j.n {
        return Err(Error::Dimension(
            "declared (d, n) does not match the columns".into(),
        ));
    }
    Calibration::new(m)
}

pub fn sign_vector_to_json(n: usize, s: &SignVector) -> BTreeMap<String, i8> {
    s.0.iter().map(|(c, &v)| (cone_key(n, c), v)).collect()
}

#[derive(Serialize)]
pub struct InequalityJson {
    pub cone: Cone,
    pub sign: i8,
}

#[derive(Serialize)]
pub struct ClosureConditionJson {
    pub cones: [Cone; 2],
    pub sign: i8,
}

pub fn closure_condition_to_json(c: &ClosureCondition) -> ClosureConditionJson {
    ClosureConditionJson {
        cones: [c.cone_a.clone(), c.cone_b.clone()],
        sign: c.sign,
    }
}

#[derive(Serialize)]
pub struct GroupElementJson {
    pub tau: Vec<usize>,
    pub sigma: Vec<usize>,
    pub alpha: Option<MatrixJson>,
    #[serde(rename = "A")]
    pub a_block: Option<MatrixJson>,
}

/// Images listed in ascending key order (rays, then virtuals).
pub fn group_element_to_json(g: &GroupElement) -> GroupElementJson {
    GroupElementJson {
        tau: g.tau.values().copied().collect(),
        sigma: g.sigma.values().copied().collect(),
        alpha: g.alpha.as_ref().map(matrix_to_json),
        a_block: g.a_block.as_ref().map(matrix_to_json),
    }
}

#[derive(Serialize, Deserialize)]
pub struct PluckerJson {
    pub rank: usize,
    pub n: usize,
    pub coords: BTreeMap<String, String>,
}

pub fn plucker_to_json(p: &PluckerVector) -> PluckerJson {
    PluckerJson {
        rank: p.rank,
        n: p.n,
        coords: p
            .coords
            .iter()
            .map(|(c, v)| (cone_key(p.n, c), format_rat(v)))
            .collect(),
    }
}

pub fn plucker_from_json(j: PluckerJson) -> Result<PluckerVector> {
    let coords: Result<BTreeMap<Cone, _>> = j
        .coords
        .iter()
        .map(|(k, v)| Ok((parse_cone_key(j.n, k)?, parse_rat(v)?)))
        .collect();
    PluckerVector::new(j.n, j.rank, coords?)
}

#[derive(Serialize)]
pub struct ChartedKernelJson {
    pub chart: Vec<usize>,
    pub matrix: MatrixJson,
}

pub fn charted_kernel_to_json(c: &ChartedKernel) -> ChartedKernelJson {
    ChartedKernelJson {
        chart: c.chart.clone(),
        matrix: matrix_to_json(&c.matrix),
    }
}

#[derive(Serialize)]
pub struct StratumJson {
    pub signs: BTreeMap<String, i8>,
    pub removed_cones: Vec<Cone>,
    pub witness: CalibrationJson,
}

pub fn stratum_to_json(n: usize, s: &Stratum) -> StratumJson {
    StratumJson {
        signs: sign_vector_to_json(n, &s.signs),
        removed_cones: s.removed_cones.clone(),
        witness: calibration_to_json(&s.witness),
    }
}

#[derive(Serialize)]
pub struct ZeroPatternJson {
    pub n: usize,
    pub patterns: Vec<Cone>,
}

pub fn zero_patterns_to_json(f: &ZeroPatternFamily) -> ZeroPatternJson {
    ZeroPatternJson {
        n: f.n,
        patterns: f.patterns.iter().cloned().collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::comb::c_type;
    use crate::moduli::reference_c;

    #[test]
    fn type_round_trip() {
        let t = c_type(4);
        let j = serde_json::to_string(&type_to_json(&t)).unwrap();
        let back = type_from_json(serde_json::from_str(&j).unwrap()).unwrap();
        assert_eq!(t, back);
        assert!(j.contains("\"cones\""));
        assert!(!j.contains("[[]")); // empty cone stays implicit
    }

    #[test]
    fn calibration_round_trip() {
        let h = reference_c(4);
        let j = serde_json::to_string(&calibration_to_json(&h)).unwrap();
        let back = calibration_from_json(serde_json::from_str(&j).unwrap()).unwrap();
        assert_eq!(h, back);
        assert!(j.contains("\"-1\""));
    }

    #[test]
    fn matrix_codec_uses_column_major_strings() {
        let m = Matrix::from_columns(&[
            vec![crate::rat::ratio(1, 2), crate::rat::rat(0)],
            vec![crate::rat::rat(3), crate::rat::rat(-1)],
        ])
        .unwrap();
        let j = matrix_to_json(&m);
        assert_eq!(j, vec![vec!["1/2", "0"], vec!["3", "-1"]]);
        assert_eq!(matrix_from_json(&j).unwrap(), m);
    }

    #[test]
    fn cone_keys() {
        assert_eq!(cone_key(4, &[1, 2]), "12");
        assert_eq!(cone_key(12, &[1, 11]), "1,11");
        assert_eq!(parse_cone_key(4, "12").unwrap(), vec![1, 2]);
        assert_eq!(parse_cone_key(12, "1,11").unwrap(), vec![1, 11]);
        assert!(parse_cone_key(4, "1x").is_err());
    }

    #[test]
    fn plucker_round_trip() {
        let p = crate::grassmann::plucker(&crate::grassmann::gale(&reference_c(4))).unwrap();
        let j = serde_json::to_string(&plucker_to_json(&p)).unwrap();
        let back = plucker_from_json(serde_json::from_str(&j).unwrap()).unwrap();
        assert_eq!(p, back);
    }
}
