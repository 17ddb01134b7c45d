//! Interpolation bodies: the set of values `S(z₀)` over all interpolants.
//!
//! For the unconstrained problem this is a matrix ball. For the one-point
//! constrained scalar problem the module produces an inner approximation
//! (a union of disks parametrized by `x`) and, separately, a membership
//! grid computed by a direct search over `x`.

use num_complex::Complex64;

use crate::data::{BlaschkeSpec, DataSet, POINT_EPS};
use crate::error::{Error, Result};
use crate::feasibility::{ball_unstructured, one_point_disk, BallOutcome, Disk, LmiPencil, MatrixBall};
use crate::interpolant::{construct, SchurChain};
use crate::linalg::{eigenvalues_hermitian, identity, inverse, is_psd, CMat, HermitianBlocks, ToleranceConfig, ONE};
use crate::pick::{build_pick_standard, PickBundle};
use crate::search::{ellipsoid_max, polar_grid, zoom_grid, AffineFamily};

/// Matrix ball of values `S(z₀)` over all Schur-class interpolants.
///
/// The `(n+1)`-point Pick matrix with the last row and column scaled by
/// `δ^{1/2}`, `δ = 1 − |z₀|²`, is the LMI with blocks
/// `Ẽ_i = δ^{1/2}/(1 − z_i z̄₀) · I` and `W̃_i = −δ^{1/2} W_i/(1 − z_i z̄₀)`.
pub fn unconstrained_body(d: &DataSet, z0: Complex64, tol: &ToleranceConfig) -> Result<MatrixBall> {
    if !(z0.norm() < 1.0) {
        return Err(Error::OutsideDisk(z0));
    }
    if d.nodes().iter().any(|z| (z - z0).norm() <= POINT_EPS) {
        return Err(Error::InvalidData(format!("z0 = {z0} coincides with a node")));
    }
    let k = d.k();
    let sd = (1.0 - z0.norm_sqr()).sqrt();
    let mut et = CMat::zeros(d.n() * k, k);
    let mut wt = CMat::zeros(d.n() * k, k);
    for (i, (&z, w)) in d.nodes().iter().zip(d.values()).enumerate() {
        let f = Complex64::new(sd, 0.0) / (ONE - z * z0.conj());
        et.view_mut((i * k, 0), (k, k)).copy_from(&(identity(k) * f));
        wt.view_mut((i * k, 0), (k, k)).copy_from(&(w * -f));
    }
    let pencil = LmiPencil::from_parts(build_pick_standard(d), et, wt, tol)?;
    match ball_unstructured(&pencil, tol)? {
        BallOutcome::Ball(b) => Ok(b),
        BallOutcome::Infeasible { lambda_min } => Err(Error::NotPsd(lambda_min)),
        BallOutcome::Undetermined { reason } => Err(Error::Degenerate(reason)),
    }
}

fn check_body_args(z1: Complex64, z0: Complex64) -> Result<()> {
    for z in [z1, z0] {
        if !(z.norm() > POINT_EPS && z.norm() < 1.0) {
            return Err(Error::InvalidData(format!("need 0 < |z| < 1, got {z}")));
        }
    }
    if (z1 - z0).norm() <= POINT_EPS {
        return Err(Error::InvalidData("z0 must differ from z1".into()));
    }
    Ok(())
}

/// `ℙ′_x`, `E` and `W_x` of the one-point body.
fn body_blocks(z1: Complex64, w1: Complex64, z0: Complex64, x: Complex64) -> (CMat, CMat, CMat) {
    let cx = 1.0 - x.norm_sqr();
    let a = ONE - w1.conj() * x;
    let mut hb = HermitianBlocks::new(&[1, 1, 1]);
    let s = |v: Complex64| CMat::from_element(1, 1, v);
    hb.set(0, 0, &s(Complex64::new(cx, 0.0)))
        .set(0, 1, &s(Complex64::new(0.0, 0.0)))
        .set(0, 2, &s(a))
        .set(1, 1, &s(Complex64::new(cx, 0.0)))
        .set(1, 2, &s(z1.conj() * a))
        .set(2, 2, &s(Complex64::new((1.0 - w1.norm_sqr()) / (1.0 - z1.norm_sqr()), 0.0)));
    let sd = (1.0 - z0.norm_sqr()).sqrt();
    let q = ONE - z0.conj() * z1;
    let e = CMat::from_column_slice(3, 1, &[ONE * sd, z0.conj() * sd, ONE / q * sd]);
    let w = CMat::from_column_slice(3, 1, &[-x * sd, -z0.conj() * x * sd, -w1 / q * sd]);
    (hb.build(), e, w)
}

/// The `4 × 4` matrix `ℙ′_{x,w₀} = [[ℙ′_x, E + W_x w̄₀], [·, 1 − |w₀|²]]`.
pub fn body_pick_matrix(z1: Complex64, w1: Complex64, z0: Complex64, x: Complex64, w0: Complex64) -> CMat {
    let (p, e, w) = body_blocks(z1, w1, z0, x);
    let mut hb = HermitianBlocks::new(&[3, 1]);
    hb.set(0, 0, &p)
        .set(0, 1, &(e + w * w0.conj()))
        .set(1, 1, &CMat::from_element(1, 1, Complex64::new(1.0 - w0.norm_sqr(), 0.0)));
    hb.build()
}

/// Disk `𝔻̄(c_x, R_x)` of values at `z₀` reachable with parameter `x`;
/// `None` unless `ℙ′_x ≻ 0` and `r_x > 0`.
pub fn body_disk_x(
    z1: Complex64,
    w1: Complex64,
    z0: Complex64,
    x: Complex64,
    tol: &ToleranceConfig,
) -> Result<Option<Disk>> {
    check_body_args(z1, z0)?;
    if !(x.norm() < 1.0) {
        return Err(Error::InvalidParameter(format!("need |x| < 1, got {x}")));
    }
    let (p, e, w) = body_blocks(z1, w1, z0, x);
    let v = is_psd(&p, tol)?;
    if v.min_eig <= tol.residual_tol * v.scale {
        return Ok(None);
    }
    let m = inverse(&(&p + &w * w.adjoint()), "P'_x + W_x W_x*")?;
    let center = -(e.adjoint() * &m * &w)[(0, 0)];
    let ell = 1.0 - (w.adjoint() * &m * &w)[(0, 0)].re;
    let r = 1.0 - (e.adjoint() * &m * &e)[(0, 0)].re;
    if !(r > 0.0) {
        return Ok(None);
    }
    Ok(Some(Disk {
        center,
        radius: (ell.max(0.0) * r).sqrt(),
    }))
}

#[derive(Debug, Clone)]
pub struct BodyMembership {
    pub inside: bool,
    pub witness_x: Option<Complex64>,
    /// Best relative margin of `ℙ′_{x,w₀}` found.
    pub margin: f64,
}

fn relative_min(a: &CMat) -> f64 {
    let v = eigenvalues_hermitian(a);
    let max = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    v[0] / (1.0 + max)
}

/// Is `w₀ = s(z₀)` for some `s` with `s′(0) = 0`, `‖s‖∞ ≤ 1`, `s(z₁) = w₁`?
///
/// Searches `x` with a cutting-plane maximization of `λ_min` of the linear
/// two-point parameter matrix, then a polar grid over the closed disk of
/// admissible `x` with two zoom passes. Each candidate is judged by the
/// PSD test of `ℙ′_{x,w₀}`.
pub fn body_membership(
    z1: Complex64,
    w1: Complex64,
    z0: Complex64,
    w0: Complex64,
    tol: &ToleranceConfig,
) -> Result<BodyMembership> {
    check_body_args(z1, z0)?;
    if w0.norm() > 1.0 || w1.norm() >= 1.0 {
        return Ok(BodyMembership {
            inside: false,
            witness_x: None,
            margin: f64::NEG_INFINITY,
        });
    }
    let disk = one_point_disk(z1, w1)?;
    let mut best = (f64::NEG_INFINITY, disk.center);
    let visit = |x: Complex64, best: &mut (f64, Complex64)| {
        let rel = relative_min(&body_pick_matrix(z1, w1, z0, x, w0));
        if rel > best.0 {
            *best = (rel, x);
        }
    };
    let psd = |best: &(f64, Complex64)| best.0 >= -tol.psd_tol;
    for x in [w1, w0, disk.center] {
        if x.norm() <= 1.0 {
            visit(x, &mut best);
        }
    }
    if !psd(&best) {
        let d = DataSet::scalar(&[z1, z0], &[w1, w0])?;
        let bundle = PickBundle::new(&d, &BlaschkeSpec::z_squared())?;
        let family = AffineFamily::from_fn(2, |t| bundle.px(&CMat::from_element(1, 1, Complex64::new(t[0], t[1]))));
        let mut steps = Vec::new();
        ellipsoid_max(&family, &[disk.center.re, disk.center.im], 2.0 * disk.radius + 1e-3, 200, tol, |t, _| {
            steps.push(Complex64::new(t[0], t[1]))
        })?;
        for x in steps {
            visit(x, &mut best);
        }
    }
    if !psd(&best) {
        for g in polar_grid(40, 1.0) {
            visit(disk.center + g * disk.radius, &mut best);
        }
        let mut half = 2.0 * disk.radius / 20.0;
        for _ in 0..2 {
            for x in zoom_grid(best.1, half) {
                visit(x, &mut best);
            }
            half /= 5.0;
        }
    }
    let inside = psd(&best);
    Ok(BodyMembership {
        inside,
        witness_x: inside.then_some(best.1),
        margin: best.0,
    })
}

#[derive(Debug, Clone, Copy)]
pub struct BodyOptions {
    /// Polar resolution of the `x` sweep over the parameter disk.
    pub x_resolution: usize,
    /// Points per side of the square `w₀` grid.
    pub w_resolution: usize,
}

impl Default for BodyOptions {
    fn default() -> Self {
        Self {
            x_resolution: 20,
            w_resolution: 41,
        }
    }
}

#[derive(Debug, Clone)]
pub struct BodyReport {
    pub z0: Complex64,
    /// Admissible parameters `x` (closed disk).
    pub parameter_disk: Disk,
    /// Values reachable without the constraint; contains the body.
    pub unconstrained: Disk,
    pub inner_disks: Vec<(Complex64, Disk)>,
    /// `(w₀, ∃x on the sweep grid with ℙ′_{x,w₀} PSD)`.
    pub outer_grid: Vec<(Complex64, bool)>,
}

impl BodyReport {
    /// Diameter of the union of inner disks.
    pub fn inner_diameter(&self) -> f64 {
        let mut d: f64 = 0.0;
        for (_, a) in &self.inner_disks {
            for (_, b) in &self.inner_disks {
                d = d.max((a.center - b.center).norm() + a.radius + b.radius);
            }
        }
        d
    }
}

/// Inner union of disks over an `x` sweep of the open parameter disk, and a
/// grid membership map over the bounding square of the unconstrained body.
pub fn body_union(
    z1: Complex64,
    w1: Complex64,
    z0: Complex64,
    opts: &BodyOptions,
    tol: &ToleranceConfig,
) -> Result<BodyReport> {
    check_body_args(z1, z0)?;
    let pdisk = one_point_disk(z1, w1)?;
    let ball = unconstrained_body(&DataSet::scalar(&[z1], &[w1])?, z0, tol)?;
    let unconstrained = Disk {
        center: ball.center[(0, 0)],
        radius: (ball.left[(0, 0)].re.max(0.0) * ball.right[(0, 0)].re.max(0.0)).sqrt(),
    };
    let rings = (opts.x_resolution / 2).max(1) as f64;
    let shrink = rings / (rings + 1.0);
    let xs: Vec<Complex64> = polar_grid(opts.x_resolution, 1.0)
        .into_iter()
        .map(|g| pdisk.center + g * (pdisk.radius * shrink))
        .collect();
    let mut inner_disks = Vec::new();
    for &x in &xs {
        if let Some(dk) = body_disk_x(z1, w1, z0, x, tol)? {
            inner_disks.push((x, dk));
        }
    }
    let m = opts.w_resolution.max(2);
    let mut outer_grid = Vec::with_capacity(m * m);
    let (c, r) = (unconstrained.center, unconstrained.radius);
    for a in 0..m {
        for b in 0..m {
            let w0 = c + Complex64::new(
                -r + 2.0 * r * b as f64 / (m - 1) as f64,
                -r + 2.0 * r * a as f64 / (m - 1) as f64,
            );
            let inside = unconstrained.contains(w0)
                && xs.iter().any(|&x| {
                    let v = eigenvalues_hermitian(&body_pick_matrix(z1, w1, z0, x, w0));
                    let max = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
                    v[0] >= -tol.psd_tol * (1.0 + max)
                });
            outer_grid.push((w0, inside));
        }
    }
    Ok(BodyReport {
        z0,
        parameter_disk: pdisk,
        unconstrained,
        inner_disks,
        outer_grid,
    })
}

/// An interpolant with `s(z₁) = w₁`, `s(z₀) = w₀`, `s(0) = x`, `s′(0) = 0`.
pub fn realize_body_point(
    z1: Complex64,
    w1: Complex64,
    z0: Complex64,
    w0: Complex64,
    x: Complex64,
    tol: &ToleranceConfig,
) -> Result<SchurChain> {
    let d = DataSet::scalar(&[z1, z0], &[w1, w0])?;
    construct(&d, &BlaschkeSpec::z_squared(), x, tol)
}
