use std::fs;
use std::path::{Path, PathBuf};

use cnp_core::body::{body_union, BodyOptions};
use cnp_core::feasibility::{one_point_disk, search_x_grid, FeasReport, FeasStatus, GridOptions};
use cnp_core::interpolant::{construct, verify_interpolant, ResidualReport, SchurChain, VerifyTol};
use cnp_core::kernels::{necessity_scan, ScanOutcome};
use cnp_core::linalg::{eigenvalues_hermitian, identity, is_psd, operator_norm, CMat, ToleranceConfig};
use cnp_core::pick::{build_aux, build_jet, stein_solve, AuxMatrices, PickBundle};
use cnp_core::{BlaschkeSpec, Complex64, DataSet};
use serde_json::{json, Value};

use crate::problem::{complex, matrix_rows, pair, BlaschkeFile, Problem, ProblemFile};
use crate::{CliError, Report, Status, SCHEMA};

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.display().to_string(),
        source,
    })
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Write {
        path: path.display().to_string(),
        source,
    })
}

/// Reads and validates a problem file, then applies `CNP_TOL` and `--tol`.
pub fn load_problem(path: &Path, env_tol: Option<&str>, flag_tol: Option<f64>) -> Result<Problem, CliError> {
    let mut p = ProblemFile::parse(&read(path)?)?.validate()?;
    p.tolerances = crate::problem::resolve_tolerances(p.tolerances, env_tol, flag_tol)?;
    Ok(p)
}

fn status_name(s: FeasStatus) -> &'static str {
    match s {
        FeasStatus::Feasible => "feasible",
        FeasStatus::Infeasible => "infeasible",
        FeasStatus::Undetermined => "undetermined",
    }
}

fn exit_for(s: FeasStatus) -> Status {
    match s {
        FeasStatus::Feasible => Status::Ok,
        FeasStatus::Infeasible => Status::Infeasible,
        FeasStatus::Undetermined => Status::Undetermined,
    }
}

fn finite(v: f64) -> Value {
    if v.is_finite() {
        json!(v)
    } else {
        Value::Null
    }
}

fn scalar_disk(d: &DataSet) -> Option<Value> {
    if d.n() != 1 || d.k() != 1 {
        return None;
    }
    let dk = one_point_disk(d.nodes()[0], d.scalar_values()[0]).ok()?;
    Some(json!({"center": pair(dk.center), "radius": dk.radius}))
}

fn feas_json(r: &FeasReport) -> Value {
    let mut v = json!({
        "status": status_name(r.status),
        "reason": r.reason,
        "margin": finite(r.margin),
        "witness_x": r.witness_x.as_ref().map(matrix_rows),
        "grid": {
            "resolution": r.grid_stats.resolution,
            "refine": r.grid_stats.refine,
            "evaluated": r.grid_stats.evaluated,
            "psd_points": r.grid_stats.psd_points,
        },
    });
    if r.status != FeasStatus::Feasible && !r.margin_map.is_empty() {
        v["margin_map"] = r.margin_map.iter().map(|(x, m)| json!([x.re, x.im, m])).collect();
    }
    v
}

/// `cnp check`: solvability by the parameter search.
pub fn check(p: &Problem, opts: &GridOptions) -> Result<Report, CliError> {
    let r = search_x_grid(&p.data, &p.blaschke, opts, &p.tolerances)?;
    let mut json = feas_json(&r);
    json["schema"] = json!(SCHEMA);
    json["command"] = json!("check");
    let disk = scalar_disk(&p.data);
    let mut text = format!("{}: {}\nbest margin {:.6e}", status_name(r.status).to_uppercase(), r.reason, r.margin);
    if let Some(x) = &r.witness_x {
        if x.len() == 1 {
            text += &format!("\nwitness x = {:.9} {:+.9}i", x[(0, 0)].re, x[(0, 0)].im);
        } else {
            text += &format!("\nwitness X of norm {:.6}", operator_norm(x));
        }
    }
    if let Some(dk) = &disk {
        let (c, r) = (&dk["center"], &dk["radius"]);
        text += &format!("\nfeasible parameters: closed disk center ({}, {}) radius {r}", c[0], c[1]);
        json["one_point_disk"] = dk.clone();
    }
    Ok(Report {
        status: exit_for(r.status),
        json,
        text,
    })
}

/// `cnp witness`: kernel-family necessity scan.
pub fn witness(p: &Problem, samples: usize, seed: u64) -> Result<Report, CliError> {
    let r = necessity_scan(&p.data, samples, &[], seed, &p.tolerances)?;
    let mut json = json!({
        "schema": SCHEMA,
        "command": "witness",
        "samples": r.samples,
        "seed": seed,
        "min_value": finite(r.min_value),
        "min_sample": r.min_sample,
    });
    let (status, text) = match &r.outcome {
        ScanOutcome::Pass => {
            json["result"] = json!("PASS");
            (Status::Ok, format!("PASS: no witness in {} samples (min normalized value {:.3e})", r.samples, r.min_value))
        }
        ScanOutcome::Witness(w) => {
            json["result"] = json!("WITNESS");
            json["witness"] = json!({
                "sample": w.sample,
                "alpha": matrix_rows(&w.param.alpha),
                "beta": matrix_rows(&w.param.beta),
                "xs": w.xs.0.iter().map(matrix_rows).collect::<Vec<_>>(),
                "value": w.value,
                "threshold": w.threshold,
            });
            (
                Status::Infeasible,
                format!(
                    "WITNESS at sample {} (l = {}, l' = {}): form value {:.6e} below {:.3e}",
                    w.sample,
                    w.param.ell(),
                    w.param.ell_prime(),
                    w.value,
                    w.threshold
                ),
            )
        }
    };
    Ok(Report { status, json, text })
}

#[derive(Debug, Clone)]
pub struct BodyArgs {
    pub z0: Complex64,
    pub x_resolution: usize,
    pub w_resolution: usize,
    pub csv: Option<PathBuf>,
}

/// Shortest round-trip decimal, without a sign on zero.
fn num(v: f64) -> String {
    (v + 0.0).to_string()
}

fn csv_file(path: &Path, header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> Result<(), CliError> {
    let err = |e: csv::Error| CliError::Write {
        path: path.display().to_string(),
        source: e.into(),
    };
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_path(path)
        .map_err(err)?;
    w.write_record(header).map_err(err)?;
    for row in rows {
        w.write_record(&row).map_err(err)?;
    }
    w.flush().map_err(|source| CliError::Write {
        path: path.display().to_string(),
        source,
    })
}

/// `cnp body`: interpolation body at `z₀` for one-point scalar data.
pub fn body(p: &Problem, args: &BodyArgs) -> Result<Report, CliError> {
    let d = &p.data;
    if d.n() != 1 || d.k() != 1 {
        return Err(CliError::Parse("body needs a scalar problem with exactly one node".into()));
    }
    if !p.blaschke.is_z_squared() {
        return Err(CliError::Parse("body supports only the default B(z) = z^2".into()));
    }
    let (z1, w1, z0) = (d.nodes()[0], d.scalar_values()[0], args.z0);
    if !(z0.norm() > 0.0 && z0.norm() < 1.0) {
        return Err(CliError::Parse(format!("--z0 must satisfy 0 < |z0| < 1, got {z0}")));
    }
    if (z0 - z1).norm() <= 1e-12 {
        return Err(CliError::Parse("--z0 coincides with the node".into()));
    }
    if z1.norm() == 0.0 {
        return Err(CliError::Parse("body needs a nonzero node".into()));
    }
    let opts = BodyOptions {
        x_resolution: args.x_resolution,
        w_resolution: args.w_resolution,
    };
    let rep = body_union(z1, w1, z0, &opts, &p.tolerances)?;
    let inside = rep.outer_grid.iter().filter(|(_, i)| *i).count();
    let uncovered = rep
        .outer_grid
        .iter()
        .filter(|(w, i)| !*i && rep.inner_disks.iter().any(|(_, dk)| (w - dk.center).norm() < dk.radius * (1.0 - 1e-9)))
        .count();
    if let Some(dir) = &args.csv {
        fs::create_dir_all(dir).map_err(|source| CliError::Write {
            path: dir.display().to_string(),
            source,
        })?;
        csv_file(
            &dir.join("disks.csv"),
            &["x_re", "x_im", "c_re", "c_im", "R"],
            rep.inner_disks.iter().map(|(x, dk)| {
                [x.re, x.im, dk.center.re, dk.center.im, dk.radius]
                    .iter()
                    .map(|&v| num(v))
                    .collect()
            }),
        )?;
        csv_file(
            &dir.join("membership.csv"),
            &["w_re", "w_im", "inside"],
            rep.outer_grid
                .iter()
                .map(|(w, i)| vec![num(w.re), num(w.im), u8::from(*i).to_string()]),
        )?;
    }
    let json = json!({
        "schema": SCHEMA,
        "command": "body",
        "z0": pair(z0),
        "parameter_disk": {"center": pair(rep.parameter_disk.center), "radius": rep.parameter_disk.radius},
        "unconstrained": {"center": pair(rep.unconstrained.center), "radius": rep.unconstrained.radius},
        "inner_disks": rep.inner_disks.len(),
        "inner_diameter": rep.inner_diameter(),
        "grid_points": rep.outer_grid.len(),
        "grid_inside": inside,
        "inner_points_outside_grid_set": uncovered,
        "csv": args.csv.as_ref().map(|d| d.display().to_string()),
    });
    let text = format!(
        "{} inner disks (diameter {:.6}); {inside} of {} grid points inside; {uncovered} inner points outside the grid set",
        rep.inner_disks.len(),
        rep.inner_diameter(),
        rep.outer_grid.len()
    );
    Ok(Report {
        status: Status::Ok,
        json,
        text,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum XChoice {
    Auto,
    Fixed(Complex64),
}

fn residual_json(r: &ResidualReport) -> Value {
    json!({
        "pass": r.pass,
        "interpolation": r.interpolation,
        "max_interpolation": r.max_interpolation(),
        "derivatives": r.derivatives.iter().map(|(i, j, v)| json!({"zero": i, "order": j, "value": v})).collect::<Vec<_>>(),
        "equality": r.equality,
        "sup_norm": r.sup_norm,
    })
}

fn residual_text(r: &ResidualReport) -> String {
    format!(
        "{}: max interpolation residual {:.3e}, max class residual {:.3e}, sup norm {:.9}",
        if r.pass { "PASS" } else { "FAIL" },
        r.max_interpolation(),
        r.max_class(),
        r.sup_norm
    )
}

/// `cnp solve`: build an interpolant and report its residuals.
pub fn solve(p: &Problem, choice: XChoice, opts: &GridOptions, out: Option<&Path>) -> Result<Report, CliError> {
    let d = &p.data;
    if d.k() != 1 {
        return Err(CliError::Parse("solve needs a scalar problem (k = 1)".into()));
    }
    let refuse = |status: Status, msg: String| Report {
        status,
        json: json!({"schema": SCHEMA, "command": "solve", "error": msg}),
        text: msg,
    };
    let x = match choice {
        XChoice::Auto => {
            let r = search_x_grid(d, &p.blaschke, opts, &p.tolerances)?;
            match (r.status, &r.witness_x) {
                (FeasStatus::Feasible, Some(x)) => x[(0, 0)],
                (s, _) => return Ok(refuse(exit_for(s).max_failure(), format!("problem is {}: {}", status_name(s), r.reason))),
            }
        }
        XChoice::Fixed(x) => {
            let ok = x.norm() < 1.0 && {
                let bundle = PickBundle::new(d, &p.blaschke)?;
                is_psd(&bundle.px(&CMat::from_element(1, 1, x)), &p.tolerances)?.psd
            };
            if !ok {
                return Ok(refuse(Status::Infeasible, format!("x infeasible: P_x is not PSD at x = {x}")));
            }
            x
        }
    };
    let chain = construct(d, &p.blaschke, x, &p.tolerances)?;
    let r = verify_interpolant(&chain, d, &p.blaschke, &VerifyTol::default())?;
    let chain_json: Value = serde_json::from_str(&chain.to_json()).expect("chain JSON is valid");
    if let Some(path) = out {
        write(path, &(chain.to_json() + "\n"))?;
    }
    let json = json!({
        "schema": SCHEMA,
        "command": "solve",
        "x": pair(x),
        "chain": chain_json,
        "residuals": residual_json(&r),
    });
    let text = format!("x = {:.9} {:+.9}i, {} steps\n{}", x.re, x.im, chain.steps.len(), residual_text(&r));
    Ok(Report {
        status: if r.pass { Status::Ok } else { Status::Software },
        json,
        text,
    })
}

impl Status {
    /// An auto search that did not find a parameter never reports success.
    fn max_failure(self) -> Status {
        if self == Status::Ok {
            Status::Undetermined
        } else {
            self
        }
    }
}

/// `cnp verify`: residuals of a chain file against a problem.
pub fn verify(p: &Problem, chain_path: &Path) -> Result<Report, CliError> {
    let chain = SchurChain::from_json(&read(chain_path)?).map_err(|e| CliError::Parse(format!("chain file: {e}")))?;
    let r = verify_interpolant(&chain, &p.data, &p.blaschke, &VerifyTol::default())?;
    Ok(Report {
        status: if r.pass { Status::Ok } else { Status::Infeasible },
        json: json!({"schema": SCHEMA, "command": "verify", "residuals": residual_json(&r)}),
        text: residual_text(&r),
    })
}

/// `cnp stein`: jet matrices and Stein solutions of a Blaschke product.
pub fn stein(blaschke_path: &Path, nodes: &[Complex64], k: usize, tol: &ToleranceConfig) -> Result<Report, CliError> {
    let file: BlaschkeFile = serde_json::from_str(&read(blaschke_path)?)
        .map_err(|e| CliError::Parse(format!("Blaschke file: {e}")))?;
    let b = BlaschkeSpec::new(file.zeros.iter().map(|&z| complex(z)).collect(), file.multiplicities)
        .map_err(|e| CliError::Parse(format!("Blaschke file: {e}")))?;
    if k == 0 {
        return Err(CliError::Parse("--k must be at least 1".into()));
    }
    let aux = if nodes.is_empty() {
        AuxMatrices {
            z: CMat::zeros(0, 0),
            e: CMat::zeros(0, k),
            w_col: CMat::zeros(0, k),
            w_diag: CMat::zeros(0, 0),
        }
    } else {
        let d = DataSet::new(nodes.to_vec(), vec![CMat::zeros(k, k); nodes.len()])
            .map_err(|e| CliError::Parse(format!("--nodes: {e}")))?;
        build_aux(&d)
    };
    let jet = build_jet(&b, k);
    let s = stein_solve(&jet, &aux, b.zeros(), nodes)?;
    let dq = &s.q - identity(s.q.nrows());
    let slack = -tol.psd_tol * (1.0 + operator_norm(&s.q));
    let q_ge_i = eigenvalues_hermitian(&dq).first().is_none_or(|&m| m >= slack);
    let q_pd = eigenvalues_hermitian(&s.q).first().is_none_or(|&m| m > 0.0);
    let json = json!({
        "schema": SCHEMA,
        "command": "stein",
        "degree": b.degree(),
        "k": k,
        "J": matrix_rows(&jet.j),
        "E_tilde": matrix_rows(&jet.e_tilde),
        "Q": matrix_rows(&s.q),
        "Q_tilde": matrix_rows(&s.q_tilde),
        "residual_q": s.residual_q,
        "residual_q_tilde": s.residual_q_tilde,
        "condition": s.condition,
        "q_ge_identity": q_ge_i,
        "q_positive_definite": q_pd,
    });
    let text = format!(
        "degree {}, residuals {:.3e} / {:.3e}, Q >= I: {q_ge_i}, Q > 0: {q_pd}",
        b.degree(),
        s.residual_q,
        s.residual_q_tilde
    );
    Ok(Report {
        status: Status::Ok,
        json,
        text,
    })
}
