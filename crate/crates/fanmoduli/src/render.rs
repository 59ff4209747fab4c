//! Deterministic SVG rendering of a planar calibration: one line per nonzero
//! generator, one translucent wedge per surviving 2-cone.

use num_traits::ToPrimitive;
use num_traits::Zero;

use crate::comb::CombinatorialType;
use crate::degeneration::degenerate_type;
use crate::error::{Error, Result};
use crate::moduli::Calibration;
use crate::rat::Rat;

const SIZE: f64 = 1000.0;
const RAY_LEN: f64 = 400.0;

#[derive(Debug, Clone)]
pub struct Scene {
    pub rays: Vec<(usize, f64, f64)>, // generator index, unit direction
    pub wedges: Vec<(usize, usize)>,  // surviving 2-cones by generator index
}

fn unit(v: &[Rat]) -> Option<(f64, f64)> {
    if v.iter().all(|x| x.is_zero()) {
        return None;
    }
    let x = v[0].to_f64().unwrap_or(0.0);
    let y = v[1].to_f64().unwrap_or(0.0);
    let norm = (x * x + y * y).sqrt();
    Some((x / norm, y / norm))
}

pub fn scene(t: &CombinatorialType, h: &Calibration) -> Result<Scene> {
    if t.d != 2 {
        return Err(Error::Unsupported("rendering requires d = 2".into()));
    }
    if t.n != h.n || t.d != h.d {
        return Err(Error::Dimension("type and calibration disagree".into()));
    }
    let survived = degenerate_type(t, h)?;
    let mut rays = Vec::new();
    for i in 1..=h.n {
        if let Some((x, y)) = unit(&h.generator(i)) {
            rays.push((i, x, y));
        }
    }
    let wedges = survived
        .cones
        .iter()
        .filter(|c| c.len() == 2)
        .map(|c| (c[0], c[1]))
        .collect();
    Ok(Scene { rays, wedges })
}

fn px(x: f64) -> String {
    format!("{:.2}", SIZE / 2.0 + x * RAY_LEN)
}

fn py(y: f64) -> String {
    format!("{:.2}", SIZE / 2.0 - y * RAY_LEN)
}

/// Byte-deterministic SVG: fixed viewport, fixed ordering, fixed precision.
pub fn svg(t: &CombinatorialType, h: &Calibration) -> Result<String> {
    let sc = scene(t, h)?;
    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{s}\" height=\"{s}\" \
         viewBox=\"0 0 {s} {s}\">\n",
        s = SIZE as u64
    ));
    out.push_str("  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    let dir = |i: usize| sc.rays.iter().find(|(j, _, _)| *j == i).map(|(_, x, y)| (*x, *y));
    for &(a, b) in &sc.wedges {
        let (Some((ax, ay)), Some((bx, by))) = (dir(a), dir(b)) else {
            continue;
        };
        out.push_str(&format!(
            "  <path d=\"M {cx} {cy} L {} {} L {} {} Z\" fill=\"#7fb3d5\" \
             fill-opacity=\"0.4\" stroke=\"none\"/>\n",
            px(ax),
            py(ay),
            px(bx),
            py(by),
            cx = SIZE / 2.0,
            cy = SIZE / 2.0,
        ));
    }
    for &(i, x, y) in &sc.rays {
        out.push_str(&format!(
            "  <line x1=\"{cx}\" y1=\"{cy}\" x2=\"{}\" y2=\"{}\" stroke=\"black\" \
             stroke-width=\"2\"/>\n",
            px(x),
            py(y),
            cx = SIZE / 2.0,
            cy = SIZE / 2.0,
        ));
        out.push_str(&format!(
            "  <text x=\"{:.2}\" y=\"{:.2}\" font-family=\"monospace\" \
             font-size=\"24\" text-anchor=\"middle\">{}</text>\n",
            SIZE / 2.0 + x * RAY_LEN * 1.08,
            SIZE / 2.0 - y * RAY_LEN * 1.08,
            i
        ));
    }
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::comb::c_type;
    use crate::moduli::{reference_c, Calibration};
    use crate::rat::rat;

    #[test]
    fn svg_is_deterministic_and_well_formed() {
        let t = c_type(4);
        let h = reference_c(4);
        let a = svg(&t, &h).unwrap();
        let b = svg(&t, &h).unwrap();
        assert_eq!(a, b);
        assert!(a.starts_with("<svg"));
        assert!(a.ends_with("</svg>\n"));
        assert_eq!(a.matches("<line").count(), 4);
        assert_eq!(a.matches("<path").count(), 4);
    }

    #[test]
    fn zero_generators_are_skipped() {
        let t = c_type(4);
        let h = Calibration::from_free_columns(
            2,
            &[vec![rat(0), rat(0)], vec![rat(-1), rat(-1)]],
        )
        .unwrap();
        let s = svg(&t, &h).unwrap();
        assert_eq!(s.matches("<line").count(), 3);
        assert_eq!(s.matches("<path").count(), 2); // cones {1,2} and {1,4}
    }
}
