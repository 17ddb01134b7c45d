//! Browser bindings. Every export returns a JSON string; failures come back
//! as `{"error": "..."}` so the page never has to catch exceptions.

use cnp_core::body::{body_union, BodyOptions};
use cnp_core::feasibility::{one_point_disk, search_x_grid, FeasStatus, GridOptions};
use cnp_core::linalg::{eigenvalues_hermitian, CMat};
use cnp_core::pick::PickBundle;
use cnp_core::{BlaschkeSpec, Complex64, DataSet, ToleranceConfig};
use serde_json::{json, Value};
use wasm_bindgen::prelude::wasm_bindgen;

fn pairs(flat: &[f64], what: &str) -> Result<Vec<Complex64>, String> {
    if !flat.len().is_multiple_of(2) {
        return Err(format!("{what}: expected re,im pairs"));
    }
    Ok(flat.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect())
}

fn respond(r: Result<Value, String>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e }).to_string(),
    }
}

/// Feasible parameter disk of the one-point problem `s(z) = w`, `s'(0) = 0`.
#[wasm_bindgen]
pub fn parameter_disk(z_re: f64, z_im: f64, w_re: f64, w_im: f64) -> String {
    respond(
        one_point_disk(Complex64::new(z_re, z_im), Complex64::new(w_re, w_im))
            .map(|d| json!({"center": [d.center.re, d.center.im], "radius": d.radius}))
            .map_err(|e| e.to_string()),
    )
}

fn feasibility(nodes: &[f64], values: &[f64], size: usize) -> Result<Value, String> {
    let d = DataSet::scalar(&pairs(nodes, "nodes")?, &pairs(values, "values")?).map_err(|e| e.to_string())?;
    let b = BlaschkeSpec::z_squared();
    let tol = ToleranceConfig::default();
    let r = search_x_grid(&d, &b, &GridOptions::default(), &tol).map_err(|e| e.to_string())?;
    let bundle = PickBundle::new(&d, &b).map_err(|e| e.to_string())?;
    let size = size.clamp(2, 400);
    let mut margins = Vec::with_capacity(size * size);
    for a in 0..size {
        for c in 0..size {
            let x = Complex64::new(
                -1.0 + 2.0 * c as f64 / (size - 1) as f64,
                1.0 - 2.0 * a as f64 / (size - 1) as f64,
            );
            if x.norm() > 1.0 {
                margins.push(Value::Null);
                continue;
            }
            let v = eigenvalues_hermitian(&bundle.px(&CMat::from_element(1, 1, x)));
            let max = v.iter().fold(0.0f64, |m, e| m.max(e.abs()));
            margins.push(json!(v[0] / (1.0 + max)));
        }
    }
    let status = match r.status {
        FeasStatus::Feasible => "feasible",
        FeasStatus::Infeasible => "infeasible",
        FeasStatus::Undetermined => "undetermined",
    };
    let disk = (d.n() == 1)
        .then(|| one_point_disk(d.nodes()[0], d.scalar_values()[0]).ok())
        .flatten()
        .map(|dk| json!({"center": [dk.center.re, dk.center.im], "radius": dk.radius}));
    Ok(json!({
        "status": status,
        "reason": r.reason,
        "margin": if r.margin.is_finite() { json!(r.margin) } else { Value::Null },
        "witness": r.witness_x.map(|x| [x[(0, 0)].re, x[(0, 0)].im]),
        "disk": disk,
        "size": size,
        "margins": margins,
    }))
}

/// Solvability of scalar data (flattened `re,im` pairs) together with a
/// `size × size` map of the relative margin of `P_x` over `[-1,1]²`
/// (row-major from the top; `null` outside the unit disk).
#[wasm_bindgen]
pub fn feasibility_map(nodes: Vec<f64>, values: Vec<f64>, size: usize) -> String {
    respond(feasibility(&nodes, &values, size))
}

fn body_json(z1: Complex64, w1: Complex64, z0: Complex64, xres: usize, wres: usize) -> Result<Value, String> {
    let opts = BodyOptions {
        x_resolution: xres.clamp(2, 60),
        w_resolution: wres.clamp(2, 121),
    };
    let r = body_union(z1, w1, z0, &opts, &ToleranceConfig::default()).map_err(|e| e.to_string())?;
    Ok(json!({
        "disks": r.inner_disks.iter().map(|(x, d)| [x.re, x.im, d.center.re, d.center.im, d.radius]).collect::<Vec<_>>(),
        "grid": r.outer_grid.iter().map(|(w, i)| json!([w.re, w.im, u8::from(*i)])).collect::<Vec<_>>(),
        "unconstrained": {"center": [r.unconstrained.center.re, r.unconstrained.center.im], "radius": r.unconstrained.radius},
        "diameter": r.inner_diameter(),
    }))
}

/// Interpolation body at `z₀` for the one-point data `s(z₁) = w₁`.
#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn interpolation_body(
    z1_re: f64,
    z1_im: f64,
    w1_re: f64,
    w1_im: f64,
    z0_re: f64,
    z0_im: f64,
    xres: usize,
    wres: usize,
) -> String {
    respond(body_json(
        Complex64::new(z1_re, z1_im),
        Complex64::new(w1_re, w1_im),
        Complex64::new(z0_re, z0_im),
        xres,
        wres,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Value {
        serde_json::from_str(s).unwrap()
    }

    #[test]
    fn disk_export() {
        let v = parse(&parameter_disk(0.5, 0.0, 0.5, 0.0));
        assert!((v["radius"].as_f64().unwrap() - 0.190_476_190_476).abs() < 1e-10);
        assert!(parse(&parameter_disk(0.0, 0.0, 0.5, 0.0))["error"].is_string());
    }

    #[test]
    fn feasibility_export() {
        let v = parse(&feasibility_map(vec![0.5, 0.0], vec![0.5, 0.0], 41));
        assert_eq!(v["status"], "feasible");
        let m = v["margins"].as_array().unwrap();
        assert_eq!(m.len(), 41 * 41);
        // centre row, column nearest x = 0.476 is PSD; the far corner is outside the disk
        assert!(m[20 * 41 + 30].as_f64().unwrap() > 0.0);
        assert!(m[0].is_null());
        let v = parse(&feasibility_map(vec![0.3, 0.0, -0.3, 0.0], vec![0.3, 0.0, -0.3, 0.0], 21));
        assert_eq!(v["status"], "infeasible");
        assert!(parse(&feasibility_map(vec![0.5], vec![0.5, 0.0], 10))["error"].is_string());
    }

    #[test]
    fn body_export() {
        let v = parse(&interpolation_body(0.5, 0.0, 0.0, 0.0, 0.3, 0.0, 8, 11));
        assert!(!v["disks"].as_array().unwrap().is_empty());
        assert_eq!(v["grid"].as_array().unwrap().len(), 121);
        assert!(parse(&interpolation_body(0.5, 0.0, 0.0, 0.0, 0.5, 0.0, 8, 11))["error"].is_string());
    }
}
