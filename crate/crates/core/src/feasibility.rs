//! Solvability decisions: the LMI pencil and its matrix-ball description,
//! the scalar `Δ`/`Δ̃` test, the one-point disk, and the parameter searches
//! over `x` (or `X`) and over `λ`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::data::{BlaschkeSpec, DataSet};
use crate::error::{Error, Result};
use crate::kernels::dprs_lambda_matrix;
use crate::linalg::{
    block_diag_repeat, condition_number, eigenvalues_hermitian, hermitian_part, hstack, identity,
    inv_sqrt_pd, inverse, is_psd, operator_norm, sqrt_psd, CMat, HermitianBlocks, PsdVerdict,
    ToleranceConfig, ONE,
};
use crate::pick::{build_aux, build_phat, build_pick_standard, check_overlap, OverlapVerdict, PickBundle};
use crate::search::{ellipsoid_max, polar_grid, polar_spacing, zoom_grid, AffineFamily};

/// Condition number of `M` above which the ball formulas are not trusted.
pub const M_CONDITION_LIMIT: f64 = 1e12;

/// Data of the unstructured LMI
/// `[[ℙ, Ẽ + W̃X̃*], [Ẽ* + X̃W̃*, I − X̃X̃*]] ⪰ 0`.
#[derive(Debug, Clone)]
pub struct LmiPencil {
    pub p: CMat,
    pub e_tilde: CMat,
    pub w_tilde: CMat,
    pub m: CMat,
    pub lambda: CMat,
    pub m_condition: f64,
    /// `(ℙ + W̃W̃*)⁻¹`
    pw_inv: CMat,
}

impl LmiPencil {
    /// Pencil from arbitrary blocks; `ℙ` must be positive definite.
    pub fn from_parts(p: CMat, e_tilde: CMat, w_tilde: CMat, tol: &ToleranceConfig) -> Result<Self> {
        let rows = p.nrows();
        if e_tilde.nrows() != rows || w_tilde.shape() != e_tilde.shape() {
            return Err(Error::Dimension("E~ and W~ must be n x m with n = dim P".into()));
        }
        let m2 = e_tilde.ncols();
        let pv = is_psd(&p, tol)?;
        if pv.min_eig <= tol.residual_tol * pv.scale {
            return Err(Error::NotPsd(pv.min_eig));
        }
        let p_inv = hermitian_part(&inverse(&p, "Pick matrix")?);
        let ep = e_tilde.adjoint() * &p_inv;
        let wp = w_tilde.adjoint() * &p_inv;
        let mut hb = HermitianBlocks::new(&[m2, m2]);
        hb.set(0, 0, &(identity(m2) - &ep * &e_tilde))
            .set(0, 1, &-(&ep * &w_tilde))
            .set(1, 1, &-(identity(m2) + &wp * &w_tilde));
        let m = hb.build();
        let pw_inv = hermitian_part(&inverse(
            &(&p + &w_tilde * w_tilde.adjoint()),
            "P + W~W~*",
        )?);
        let lambda = hermitian_part(&(identity(m2) - e_tilde.adjoint() * &pw_inv * &e_tilde));
        Ok(Self {
            m_condition: condition_number(&m),
            p,
            e_tilde,
            w_tilde,
            m,
            lambda,
            pw_inv,
        })
    }

    /// Size `2k` of the free parameter.
    pub fn param_size(&self) -> usize {
        self.e_tilde.ncols()
    }

    pub fn criterion_matrix(&self, xt: &CMat) -> CMat {
        let m2 = self.param_size();
        assert_eq!(xt.shape(), (m2, m2), "parameter has the wrong size");
        let mut hb = HermitianBlocks::new(&[self.p.nrows(), m2]);
        hb.set(0, 0, &self.p)
            .set(0, 1, &(&self.e_tilde + &self.w_tilde * xt.adjoint()))
            .set(1, 1, &(identity(m2) - xt * xt.adjoint()));
        hb.build()
    }

    /// `Λ` as the Schur complement `M₁₁ − M₁₂ M₂₂⁻¹ M₂₁`.
    pub fn lambda_via_m(&self) -> Result<CMat> {
        let m2 = self.param_size();
        let m11 = self.m.view((0, 0), (m2, m2));
        let m12 = self.m.view((0, m2), (m2, m2));
        let m22 = self.m.view((m2, m2), (m2, m2)).into_owned();
        let inv = inverse(&m22, "M22")?;
        Ok(hermitian_part(&(m11 - m12 * inv * m12.adjoint())))
    }
}

/// `Ẽ = [E, ZE]`, `W̃ = [W, ZW]` for the `B(z) = z²` problem.
pub fn pencil_build(d: &DataSet, tol: &ToleranceConfig) -> Result<LmiPencil> {
    let aux = build_aux(d);
    let et = hstack(&[aux.e.clone(), &aux.z * &aux.e]);
    let wt = hstack(&[aux.w_col.clone(), &aux.z * &aux.w_col]);
    LmiPencil::from_parts(build_pick_standard(d), et, wt, tol)
}

/// The unstructured parameter reproducing `ℙ′_X`: `X̃ = −diag(X, X)`.
pub fn structured_parameter(x: &CMat) -> CMat {
    -block_diag_repeat(x, 2)
}

/// `{C + L^{1/2} K R^{1/2} : ‖K‖ ≤ 1}`.
#[derive(Debug, Clone)]
pub struct MatrixBall {
    pub center: CMat,
    pub left: CMat,
    pub right: CMat,
}

impl MatrixBall {
    pub fn point(&self, k: &CMat, tol: &ToleranceConfig) -> Result<CMat> {
        Ok(&self.center + sqrt_psd(&self.left, tol)? * k * sqrt_psd(&self.right, tol)?)
    }
}

#[derive(Debug, Clone)]
pub enum BallOutcome {
    Ball(MatrixBall),
    /// `Λ` has a negative eigenvalue: no parameter exists at all.
    Infeasible { lambda_min: f64 },
    Undetermined { reason: String },
}

/// All `X̃` satisfying the unstructured LMI.
///
/// Completing the square in the Schur complement gives
/// `(X̃ − C)(I + W̃*ℙ⁻¹W̃)(X̃ − C)* ⪯ Λ`, so the ball has left semi-radius
/// `Λ` and right semi-radius `(I + W̃*ℙ⁻¹W̃)⁻¹ = I − W̃*(ℙ + W̃W̃*)⁻¹W̃`.
pub fn ball_unstructured(p: &LmiPencil, tol: &ToleranceConfig) -> Result<BallOutcome> {
    if !(p.m_condition <= M_CONDITION_LIMIT) {
        return Ok(BallOutcome::Undetermined {
            reason: format!("M is numerically singular (condition {:.3e})", p.m_condition),
        });
    }
    let v = is_psd(&p.lambda, tol)?;
    if !v.psd {
        return Ok(BallOutcome::Infeasible { lambda_min: v.min_eig });
    }
    let m2 = p.param_size();
    let wpw = p.w_tilde.adjoint() * &p.pw_inv;
    Ok(BallOutcome::Ball(MatrixBall {
        center: -(p.e_tilde.adjoint() * &p.pw_inv * &p.w_tilde),
        left: p.lambda.clone(),
        right: hermitian_part(&(identity(m2) - wpw * &p.w_tilde)),
    }))
}

#[derive(Debug, Clone)]
pub struct Membership {
    pub inside: bool,
    pub k: CMat,
    pub norm: f64,
}

/// Recovers `K = L^{−1/2}(X̃ − C)R^{−1/2}`.
pub fn ball_membership(ball: &MatrixBall, xt: &CMat, tol: &ToleranceConfig) -> Result<Membership> {
    let k = inv_sqrt_pd(&ball.left, tol)? * (xt - &ball.center) * inv_sqrt_pd(&ball.right, tol)?;
    let norm = operator_norm(&k);
    Ok(Membership {
        inside: norm <= 1.0 + tol.psd_tol,
        k,
        norm,
    })
}

/// Matrices of the scalar `Δ`-test.
#[derive(Debug, Clone)]
pub struct ScalarDeltas {
    pub delta: CMat,
    pub delta_tilde: CMat,
    /// `EW* + ZEW*Z*`
    pub cross: CMat,
    delta_sqrt: CMat,
    delta_inv_sqrt: CMat,
}

/// `Δ = ℙ + WW* + ZWW*Z*` and
/// `Δ̃ = ℙ − EE* − ZEE*Z* + (WE* + ZWE*Z*)Δ⁻¹(EW* + ZEW*Z*)`.
pub fn scalar_delta(d: &DataSet, tol: &ToleranceConfig) -> Result<ScalarDeltas> {
    d.require_scalar()?;
    if d.scalar_values().iter().any(|w| w.norm() >= 1.0) {
        return Err(Error::InvalidData("the delta test needs all |w_i| < 1".into()));
    }
    let aux = build_aux(d);
    let (e, w, z) = (&aux.e, &aux.w_col, &aux.z);
    let ww = w * w.adjoint();
    let ee = e * e.adjoint();
    let ew = e * w.adjoint();
    let p = build_pick_standard(d);
    let delta = hermitian_part(&(&p + &ww + z * &ww * z.adjoint()));
    let delta_inv_sqrt = inv_sqrt_pd(&delta, tol)?;
    let delta_sqrt = sqrt_psd(&delta, tol)?;
    let cross = &ew + z * &ew * z.adjoint();
    let delta_inv = &delta_inv_sqrt * &delta_inv_sqrt;
    let delta_tilde = hermitian_part(
        &(&p - &ee - z * &ee * z.adjoint() + cross.adjoint() * delta_inv * &cross),
    );
    Ok(ScalarDeltas {
        delta,
        delta_tilde,
        cross,
        delta_sqrt,
        delta_inv_sqrt,
    })
}

/// PSD verdict of `Δ̃ − K̃*K̃` with `K̃ = x̄Δ^{1/2} − Δ^{−1/2}(EW* + ZEW*Z*)`.
pub fn scalar_feasible_x(deltas: &ScalarDeltas, x: Complex64, tol: &ToleranceConfig) -> Result<PsdVerdict> {
    if !(x.norm() < 1.0) {
        return Err(Error::InvalidParameter(format!("the delta test needs |x| < 1, got {x}")));
    }
    let kt = &deltas.delta_sqrt * x.conj() - &deltas.delta_inv_sqrt * &deltas.cross;
    is_psd(&hermitian_part(&(&deltas.delta_tilde - kt.adjoint() * kt)), tol)
}

/// Closed disk in the complex plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Disk {
    pub center: Complex64,
    pub radius: f64,
}

impl Disk {
    pub fn contains(&self, x: Complex64) -> bool {
        (x - self.center).norm() <= self.radius
    }
}

/// Feasible parameters of the one-point problem `s(z₁) = w₁`, `s′(0) = 0`.
pub fn one_point_disk(z1: Complex64, w1: Complex64) -> Result<Disk> {
    let r2 = z1.norm_sqr();
    if !(r2 > 0.0 && r2 < 1.0) {
        return Err(Error::InvalidData(format!("need 0 < |z1| < 1, got {z1}")));
    }
    let a = w1.norm_sqr();
    if a >= 1.0 {
        return Err(Error::Degenerate(format!(
            "|w1| = {} >= 1: the only candidate is the constant x = w1",
            w1.norm()
        )));
    }
    let z4 = r2 * r2;
    let den = 1.0 - z4 * a;
    Ok(Disk {
        center: w1 * ((1.0 - z4) / den),
        radius: r2 * (1.0 - a) / den,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FeasStatus {
    Feasible,
    Infeasible,
    Undetermined,
}

#[derive(Debug, Clone, Default)]
pub struct GridStats {
    pub resolution: usize,
    pub refine: usize,
    /// Parameter points at which the criterion matrix was evaluated.
    pub evaluated: usize,
    pub psd_points: usize,
}

#[derive(Debug, Clone)]
pub struct FeasReport {
    pub status: FeasStatus,
    pub witness_x: Option<CMat>,
    pub witness_lambda: Option<Complex64>,
    /// Best relative margin `λ_min / (1 + max|λ|)` found.
    pub margin: f64,
    pub grid_stats: GridStats,
    /// How the status was reached.
    pub reason: String,
    /// Margins on the coarse grid (scalar parameter searches only).
    pub margin_map: Vec<(Complex64, f64)>,
}

#[derive(Debug, Clone, Copy)]
pub struct GridOptions {
    pub resolution: usize,
    pub refine: usize,
    pub seed: u64,
    /// Random contractions tried when `k > 1`.
    pub random_candidates: usize,
}

impl Default for GridOptions {
    fn default() -> Self {
        Self {
            resolution: 200,
            refine: 2,
            seed: 0,
            random_candidates: 200,
        }
    }
}

impl GridOptions {
    fn exhaustive(&self) -> bool {
        self.resolution >= 200 && self.refine >= 2
    }
}

struct Tracker {
    tol: ToleranceConfig,
    stats: GridStats,
    best_rel: f64,
    witness: Option<(CMat, f64)>,
}

impl Tracker {
    fn new(tol: &ToleranceConfig, opts: &GridOptions) -> Self {
        Self {
            tol: *tol,
            stats: GridStats {
                resolution: opts.resolution,
                refine: opts.refine,
                ..GridStats::default()
            },
            best_rel: f64::NEG_INFINITY,
            witness: None,
        }
    }

    fn record(&mut self, x: impl FnOnce() -> CMat, min_eig: f64, scale: f64) -> f64 {
        self.stats.evaluated += 1;
        let rel = min_eig / scale;
        if rel > self.best_rel {
            self.best_rel = rel;
        }
        if min_eig >= -self.tol.psd_tol * scale {
            self.stats.psd_points += 1;
            if self.witness.as_ref().is_none_or(|(_, r)| rel > *r) {
                self.witness = Some((x(), rel));
            }
        }
        rel
    }

    fn report(self, status: FeasStatus, reason: String, map: Vec<(Complex64, f64)>) -> FeasReport {
        FeasReport {
            status,
            witness_x: self.witness.map(|(x, _)| x),
            witness_lambda: None,
            margin: self.best_rel,
            grid_stats: self.stats,
            reason,
            margin_map: map,
        }
    }
}

fn x_from(t: &[f64], k: usize) -> CMat {
    CMat::from_fn(k, k, |r, c| {
        let m = 2 * (r * k + c);
        Complex64::new(t[m], t[m + 1])
    })
}

fn t_from(x: &CMat) -> Vec<f64> {
    let k = x.nrows();
    let mut t = vec![0.0; 2 * k * k];
    for r in 0..k {
        for c in 0..k {
            let m = 2 * (r * k + c);
            t[m] = x[(r, c)].re;
            t[m + 1] = x[(r, c)].im;
        }
    }
    t
}

fn certificate(status: FeasStatus, witness: Option<CMat>, margin: f64, reason: &str, opts: &GridOptions) -> FeasReport {
    FeasReport {
        status,
        witness_x: witness,
        witness_lambda: None,
        margin,
        grid_stats: GridStats {
            resolution: opts.resolution,
            refine: opts.refine,
            evaluated: 1,
            psd_points: usize::from(status == FeasStatus::Feasible),
        },
        reason: reason.to_string(),
        margin_map: Vec::new(),
    }
}

/// Searches for a parameter `X` making `ℙ_X` PSD.
///
/// Exact shortcuts come first (nodes on zeros of `B`, the classical Pick
/// matrix, unimodular targets, the unstructured ball for `B = z²`). Then
/// constant candidates, a cutting-plane maximization of the concave
/// `X ↦ λ_min(ℙ_X)`, and for `k = 1` the polar grid with zoom refinement.
/// `Infeasible` from the search itself is only reported for `k = 1` on an
/// exhaustive grid whose best relative margin is below `−10·psd_tol`.
pub fn search_x_grid(
    d: &DataSet,
    b: &BlaschkeSpec,
    opts: &GridOptions,
    tol: &ToleranceConfig,
) -> Result<FeasReport> {
    use FeasStatus::*;
    let k = d.k();
    match check_overlap(d, b, tol)? {
        OverlapVerdict::ValuesDiffer { .. } => {
            return Ok(certificate(
                Infeasible,
                None,
                f64::NEG_INFINITY,
                "overlap values differ: nodes on zeros of B carry different values",
                opts,
            ))
        }
        OverlapVerdict::Reduced { x, verdict, .. } => {
            let reason = "a node on a zero of B forces the parameter";
            return Ok(if verdict.psd {
                certificate(Feasible, Some(x), verdict.relative_margin(), reason, opts)
            } else {
                certificate(Infeasible, None, verdict.relative_margin(), reason, opts)
            });
        }
        OverlapVerdict::NoOverlap => {}
    }
    let classical = is_psd(&build_pick_standard(d), tol)?;
    if !classical.psd {
        return Ok(certificate(
            Infeasible,
            None,
            classical.relative_margin(),
            "classical Pick matrix is not PSD",
            opts,
        ));
    }
    let bundle = PickBundle::new(d, b)?;
    let family = AffineFamily::from_fn(2 * k * k, |t| bundle.px(&x_from(t, k)));
    let mut tr = Tracker::new(tol, opts);
    let eval_x = |tr: &mut Tracker, x: &CMat| {
        let (m, s) = family.margin(&t_from(x));
        tr.record(|| x.clone(), m, s)
    };

    if k == 1 {
        if let Some(w) = d.scalar_values().into_iter().find(|w| w.norm() >= 1.0 - tol.residual_tol) {
            let x = CMat::from_element(1, 1, w);
            eval_x(&mut tr, &x);
            let status = if tr.witness.is_some() { Feasible } else { Infeasible };
            return Ok(tr.report(status, "a unimodular value forces a constant interpolant".into(), Vec::new()));
        }
    }

    let mut candidates: Vec<CMat> = d.values().to_vec();
    candidates.push(CMat::zeros(k, k));
    if b.is_z_squared() && classical.min_eig > tol.residual_tol * classical.scale {
        let pencil = pencil_build(d, tol)?;
        match ball_unstructured(&pencil, tol)? {
            BallOutcome::Infeasible { lambda_min } if lambda_min / (1.0 + operator_norm(&pencil.lambda)) < -10.0 * tol.psd_tol => {
                return Ok(certificate(
                    Infeasible,
                    None,
                    lambda_min,
                    "the unstructured LMI has no solution (Lambda is not PSD)",
                    opts,
                ));
            }
            BallOutcome::Ball(ball) => {
                let c11 = ball.center.view((0, 0), (k, k));
                let c22 = ball.center.view((k, k), (k, k));
                candidates.push(-(c11 + c22) * Complex64::new(0.5, 0.0));
            }
            _ => {}
        }
    }
    for x in &candidates {
        eval_x(&mut tr, x);
    }

    if k > 1 {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        for _ in 0..opts.random_candidates {
            let g = CMat::from_fn(k, k, |_, _| {
                let re: f64 = StandardNormal.sample(&mut rng);
                let im: f64 = StandardNormal.sample(&mut rng);
                Complex64::new(re, im)
            });
            let scale: f64 = rng.random_range(0.0..1.0);
            let x = &g * Complex64::new(scale / operator_norm(&g).max(1e-300), 0.0);
            eval_x(&mut tr, &x);
        }
    }

    let dim = 2 * k * k;
    ellipsoid_max(
        &family,
        &vec![0.0; dim],
        2.0 * (k as f64).sqrt(),
        150 * dim * dim,
        tol,
        |t, e| {
            tr.record(|| x_from(t, k), e.min_eig, e.scale);
        },
    )?;

    if k > 1 {
        let status = if tr.witness.is_some() { Feasible } else { Undetermined };
        let reason = if tr.witness.is_some() {
            "PSD parameter found"
        } else {
            "no PSD parameter found; matrix-valued searches are not exhaustive"
        };
        return Ok(tr.report(status, reason.into(), Vec::new()));
    }
    if tr.witness.is_some() {
        return Ok(tr.report(Feasible, "PSD parameter found".into(), Vec::new()));
    }

    // k = 1: coarse polar grid, then zoom passes around the best point
    let mut map = Vec::new();
    let mut best = (f64::NEG_INFINITY, Complex64::new(0.0, 0.0));
    for x in polar_grid(opts.resolution, 1.0) {
        let (m, s) = family.margin(&[x.re, x.im]);
        let rel = tr.record(|| CMat::from_element(1, 1, x), m, s);
        map.push((x, rel));
        if rel > best.0 {
            best = (rel, x);
        }
    }
    let mut spacing = polar_spacing(opts.resolution, 1.0);
    for _ in 0..opts.refine {
        let half = 2.0 * spacing;
        for x in zoom_grid(best.1, half) {
            if x.norm() > 1.0 {
                continue;
            }
            let (m, s) = family.margin(&[x.re, x.im]);
            let rel = tr.record(|| CMat::from_element(1, 1, x), m, s);
            if rel > best.0 {
                best = (rel, x);
            }
        }
        spacing = half / 10.0;
    }
    let (status, reason) = if tr.witness.is_some() {
        (Feasible, "PSD parameter found on the grid")
    } else if opts.exhaustive() && tr.best_rel < -10.0 * tol.psd_tol {
        (Infeasible, "no PSD parameter on the refined grid; margin uniformly negative")
    } else {
        (Undetermined, "no PSD parameter found; grid not exhaustive or margin near zero")
    };
    Ok(tr.report(status, reason.into(), map))
}

/// Scans `λ ∈ 𝔻` for a PSD criterion matrix
/// `[(z_i² z̄_j² − φ_λ(w_i)φ_λ(w_j)‾)/(1 − z_i z̄_j)]`.
pub fn search_lambda_dprs(d: &DataSet, opts: &GridOptions, tol: &ToleranceConfig) -> Result<FeasReport> {
    d.require_scalar()?;
    let w = d.scalar_values();
    if w.iter().any(|w| w.norm() >= 1.0) {
        return Err(Error::InvalidData("the lambda criterion needs all |w_i| < 1".into()));
    }
    let eval = |l: Complex64| -> Result<(f64, f64)> {
        let vals = eigenvalues_hermitian(&dprs_lambda_matrix(d, l)?);
        let max = vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        Ok((vals[0], 1.0 + max))
    };
    struct Scan {
        stats: GridStats,
        best: (f64, Complex64),
        witness: Option<(Complex64, f64)>,
    }
    let mut sc = Scan {
        stats: GridStats {
            resolution: opts.resolution,
            refine: opts.refine,
            ..GridStats::default()
        },
        best: (f64::NEG_INFINITY, Complex64::new(0.0, 0.0)),
        witness: None,
    };
    let visit = |l: Complex64, sc: &mut Scan| -> Result<f64> {
        let (m, s) = eval(l)?;
        sc.stats.evaluated += 1;
        let rel = m / s;
        if rel > sc.best.0 {
            sc.best = (rel, l);
        }
        if m >= -tol.psd_tol * s {
            sc.stats.psd_points += 1;
            if sc.witness.is_none_or(|(_, r)| rel > r) {
                sc.witness = Some((l, rel));
            }
        }
        Ok(rel)
    };
    for &l in &w {
        visit(l, &mut sc)?;
    }
    let mut map = Vec::new();
    for l in polar_grid(opts.resolution, 1.0) {
        if l.norm() >= 1.0 - 1e-9 {
            continue;
        }
        let rel = visit(l, &mut sc)?;
        map.push((l, rel));
    }
    // the requested passes, then further zooms while nothing is found
    let mut spacing = polar_spacing(opts.resolution, 1.0);
    let mut pass = 0;
    while pass < opts.refine || (pass < opts.refine + 12 && sc.witness.is_none() && spacing > 1e-9) {
        let half = 2.0 * spacing;
        for l in zoom_grid(sc.best.1, half) {
            if l.norm() < 1.0 - 1e-9 {
                visit(l, &mut sc)?;
            }
        }
        spacing = half / 10.0;
        pass += 1;
    }
    let Scan { stats, best, witness } = sc;
    let (status, reason) = if witness.is_some() {
        (FeasStatus::Feasible, "PSD lambda found")
    } else if opts.exhaustive() && best.0 < -10.0 * tol.psd_tol {
        (FeasStatus::Infeasible, "no PSD lambda on the refined grid; margin uniformly negative")
    } else {
        (FeasStatus::Undetermined, "no PSD lambda found; grid not exhaustive or margin near zero")
    };
    Ok(FeasReport {
        status,
        witness_x: None,
        witness_lambda: witness.map(|(l, _)| l),
        margin: best.0,
        grid_stats: stats,
        reason: reason.to_string(),
        margin_map: map,
    })
}

/// Residuals of the two candidate congruences between `P̂_λ` (for `B = z²`)
/// and the `λ`-criterion matrix `D_λ`, with
/// `T = diag((1 − λ̄w_i)/√(1 − |λ|²))`.
#[derive(Debug, Clone, Copy)]
pub struct CongruenceCheck {
    /// `‖T P̂_λ T* − D_λ‖`
    pub direct: f64,
    /// `‖T⁻¹ P̂_λ T⁻* − D_λ‖`
    pub inverse: f64,
}

pub fn dprs_congruence(d: &DataSet, lambda: Complex64, tol: &ToleranceConfig) -> Result<CongruenceCheck> {
    let dl = dprs_lambda_matrix(d, lambda)?;
    let phat = build_phat(d, &BlaschkeSpec::z_squared(), &CMat::from_element(1, 1, lambda), tol)?;
    let s = (1.0 - lambda.norm_sqr()).sqrt();
    let t: Vec<Complex64> = d
        .scalar_values()
        .iter()
        .map(|&w| (ONE - lambda.conj() * w) / s)
        .collect();
    let n = d.n();
    let direct = CMat::from_fn(n, n, |i, j| t[i] * phat[(i, j)] * t[j].conj());
    let inv = CMat::from_fn(n, n, |i, j| phat[(i, j)] / (t[i] * t[j].conj()));
    Ok(CongruenceCheck {
        direct: (direct - &dl).norm(),
        inverse: (inv - &dl).norm(),
    })
}
