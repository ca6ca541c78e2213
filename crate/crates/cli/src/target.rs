use std::f64::consts::FRAC_PI_2;
use std::path::Path;

use anyhow::{bail, Context, Result};
use reachkit::lie::{exp, product, AlgebraElement, GroupElement, Mat2};
use reachkit::schedule::ControlSchedule;
use reachkit::synth::{recipe_c, recipe_rotation, recipe_scaled_drift, synthesize};

/// Named targets for `synth`, `simulate` and `sweep`.
pub const PRESETS: &str = "identity, a, b, c, 2a, rot, x1, y1, z, generic";

/// Resolves a target: a preset name, `exp:<coefficients>` (a, b, c, ξ…, η…, ζ),
/// `matrix:<m11,m12,m21,m22>`, or a path to a group-element JSON file.
pub fn parse_target(spec: &str, d: usize) -> Result<GroupElement> {
    let one = |x: AlgebraElement| exp(&x).map_err(anyhow::Error::from);
    let g = match spec {
        "identity" => GroupElement::identity(d),
        "a" => one(AlgebraElement::basis_a(d))?,
        "b" => one(AlgebraElement::basis_b(d))?,
        "c" => one(AlgebraElement::basis_c(d))?,
        "2a" => one(AlgebraElement::basis_a(d).scale(2.0))?,
        "rot" => one(AlgebraElement::sl2(d, FRAC_PI_2, -FRAC_PI_2, 0.0))?,
        "x1" => one(AlgebraElement::basis_x(d, 0))?,
        "y1" => one(AlgebraElement::basis_y(d, 0))?,
        "z" => one(AlgebraElement::basis_z(d))?,
        "generic" => {
            let mut h = AlgebraElement::zero(d);
            h.xi[0] = 0.7;
            h.eta[0] = -0.4;
            h.zeta = 0.3;
            let parts = [
                one(AlgebraElement::sl2(d, FRAC_PI_2 / 2.0, -FRAC_PI_2 / 2.0, 0.0))?,
                one(AlgebraElement::basis_c(d).scale(0.5))?,
                one(AlgebraElement::basis_b(d).scale(0.3))?,
                one(h)?,
            ];
            product(d, &parts)?
        }
        _ => {
            if let Some(list) = spec.strip_prefix("exp:") {
                one(AlgebraElement::from_coefficients(d, &parse_list(list)?)?)?
            } else if let Some(list) = spec.strip_prefix("matrix:") {
                GroupElement::from_matrix(d, parse_matrix(list)?)
            } else if Path::new(spec).exists() {
                let text = std::fs::read_to_string(spec).with_context(|| format!("reading {spec}"))?;
                serde_json::from_str(&text).with_context(|| format!("{spec} is not a group element"))?
            } else {
                bail!("unknown target {spec:?}; use one of {PRESETS}, exp:<coefficients>, matrix:<entries> or a JSON file");
            }
        }
    };
    g.validate()?;
    Ok(g)
}

/// Schedule generator for sweeps: the dedicated recipe for the presets it
/// exists for, the planner otherwise.
pub fn sweep_recipe<'a>(spec: &str, d: usize, target: &'a GroupElement) -> Box<dyn Fn(f64) -> reachkit::Result<ControlSchedule> + Sync + 'a> {
    match spec {
        "c" => Box::new(move |e| recipe_c(d, 1.0, e, e * e)),
        "2a" => Box::new(move |e| recipe_scaled_drift(d, 2.0, e)),
        "rot" => Box::new(move |e| recipe_rotation(d, FRAC_PI_2, e)),
        _ => Box::new(move |e| synthesize(target, e)),
    }
}

pub fn parse_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|t| t.trim().parse::<f64>().with_context(|| format!("{t:?} is not a number")))
        .collect()
}

pub fn parse_matrix(s: &str) -> Result<Mat2> {
    let v = parse_list(s)?;
    if v.len() != 4 {
        bail!("a 2×2 matrix needs 4 comma-separated entries, got {}", v.len());
    }
    Ok(Mat2::new(v[0], v[1], v[2], v[3]))
}
