//! Browser bindings: three self-contained operations returning JSON strings
//! (or raw samples) so the page needs no glue beyond `wasm-bindgen`.

use reachkit::lie::{exp, iwasawa, AlgebraElement, Mat2};
use reachkit::liouville::{pullback_with, DensitySource, LiouvilleTargetParams, PhaseGrid};
use reachkit::numfmt::to_json;
use reachkit::sim::simulate;
use reachkit::synth::{plan_target, synthesize};
use wasm_bindgen::prelude::*;

fn js(e: impl std::fmt::Display) -> JsError {
    JsError::new(&e.to_string())
}

/// Iwasawa factors of a unimodular matrix as `{"t1","t2","t3"}`.
#[wasm_bindgen]
pub fn iwasawa_factors(m11: f64, m12: f64, m21: f64, m22: f64) -> Result<String, JsError> {
    let f = iwasawa(&Mat2::new(m11, m12, m21, m22)).map_err(js)?;
    to_json(&f, false).map_err(js)
}

/// Plans a schedule reaching `exp(Σ coeffs·basis)` for d = 1
/// (coefficients a, b, c, ξ, η, ζ) and returns the planner report.
#[wasm_bindgen]
pub fn synthesize_exp(coeffs: &[f64], tol: f64) -> Result<String, JsError> {
    let x = AlgebraElement::from_coefficients(1, coeffs).map_err(js)?;
    let g = exp(&x).map_err(js)?;
    let report = plan_target(&g, tol, 0.1, 30).map_err(js)?;
    to_json(&report, false).map_err(js)
}

/// Group-space error of the planner's schedule at a fixed ε, for the
/// convergence plot.
#[wasm_bindgen]
pub fn synthesis_error(coeffs: &[f64], eps: f64) -> Result<f64, JsError> {
    let g = exp(&AlgebraElement::from_coefficients(1, coeffs).map_err(js)?).map_err(js)?;
    let reached = simulate(&synthesize(&g, eps).map_err(js)?).map_err(js)?;
    reachkit::lie::distance(&reached, &g).map_err(js)
}

/// A standard Gaussian transported by the reachable map with parameters
/// (α, t, r, s, w), sampled on `[-half, half]²` with `n` cells per axis,
/// indexed `[i_q * n + i_p]`. Mass pushed off the window is simply not drawn.
#[wasm_bindgen]
pub fn transported_density(alpha: f64, t: f64, r: f64, s: f64, w: f64, half: f64, n: usize) -> Result<Vec<f64>, JsError> {
    let params = LiouvilleTargetParams { alpha, t, r, s: vec![s], w: vec![w] };
    params.validate().map_err(js)?;
    let grid = PhaseGrid::new([[-half, half], [-half, half]], [n, n], 1.0).map_err(js)?;
    let map = params.map().map_err(js)?;
    let moved = pullback_with(&DensitySource::standard_gaussian(), &map, &grid, f64::INFINITY).map_err(js)?;
    Ok(moved.values)
}
