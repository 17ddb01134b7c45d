//! The kernel family `K^{α,β}` indexed by Grassmann parameters, the
//! trace-form necessity test built from it, and the `λ`-parametrized
//! criterion matrix for scalar data.

use std::f64::consts::PI;

use nalgebra::DVector;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::data::{DataSet, mobius_zero};
use crate::error::{Error, Result};
use crate::linalg::{
    eig_hermitian, identity, min_singular_value, CMat, HermitianBlocks, ToleranceConfig, ONE,
};

/// Least singular value of `α` below which a draw is rejected.
const INJECTIVITY_FLOOR: f64 = 1e-6;

/// A pair `(α, β)` of `ℓ′ × ℓ` matrices with `αα* + ββ* = I` and `α` injective.
#[derive(Debug, Clone, PartialEq)]
pub struct GrassmannParam {
    pub alpha: CMat,
    pub beta: CMat,
}

impl GrassmannParam {
    pub fn new(alpha: CMat, beta: CMat, tol: &ToleranceConfig) -> Result<Self> {
        if alpha.shape() != beta.shape() {
            return Err(Error::InvalidParameter("alpha and beta must have equal shapes".into()));
        }
        let (lp, l) = alpha.shape();
        check_shape(l, lp)?;
        let gram = &alpha * alpha.adjoint() + &beta * beta.adjoint();
        let err = (gram - identity(lp)).norm();
        if err > tol.residual_tol {
            return Err(Error::InvalidParameter(format!(
                "alpha alpha* + beta beta* deviates from I by {err:.3e}"
            )));
        }
        if min_singular_value(&alpha) <= tol.residual_tol {
            return Err(Error::InvalidParameter("alpha is not injective".into()));
        }
        Ok(Self { alpha, beta })
    }

    pub fn scalar(alpha: Complex64, beta: Complex64, tol: &ToleranceConfig) -> Result<Self> {
        Self::new(
            CMat::from_element(1, 1, alpha),
            CMat::from_element(1, 1, beta),
            tol,
        )
    }

    pub fn ell(&self) -> usize {
        self.alpha.ncols()
    }

    pub fn ell_prime(&self) -> usize {
        self.alpha.nrows()
    }

    fn sample_with(rng: &mut ChaCha8Rng, ell: usize, ell_prime: usize) -> Self {
        loop {
            let g = CMat::from_fn(2 * ell, ell_prime, |_, _| {
                let re: f64 = StandardNormal.sample(rng);
                let im: f64 = StandardNormal.sample(rng);
                Complex64::new(re, im)
            });
            // orthonormal columns of g  →  orthonormal rows of [α β]
            let rows = g.qr().q().adjoint();
            let alpha = rows.columns(0, ell).into_owned();
            let beta = rows.columns(ell, ell).into_owned();
            if min_singular_value(&alpha) > INJECTIVITY_FLOOR {
                return Self { alpha, beta };
            }
        }
    }
}

fn check_shape(ell: usize, ell_prime: usize) -> Result<()> {
    if ell == 0 || ell > ell_prime {
        return Err(Error::InvalidParameter(format!(
            "need 1 <= ell <= ell' (got ell={ell}, ell'={ell_prime})"
        )));
    }
    if ell_prime > 2 * ell {
        return Err(Error::InvalidParameter(format!(
            "[alpha beta] has rank at most 2 ell, so ell'={ell_prime} > {} admits no parameter",
            2 * ell
        )));
    }
    Ok(())
}

/// Deterministic draw from `𝔾(ℓ′ × ℓ)`.
pub fn grassmann_sample(seed: u64, ell: usize, ell_prime: usize) -> Result<GrassmannParam> {
    check_shape(ell, ell_prime)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(GrassmannParam::sample_with(&mut rng, ell, ell_prime))
}

fn check_disk(z: Complex64) -> Result<()> {
    if !(z.norm() < 1.0) {
        return Err(Error::OutsideDisk(z));
    }
    Ok(())
}

/// `K(z, w) = (α* + w̄ β*)(α + z β) + w̄² z² / (1 − w̄ z) · I_ℓ`.
pub fn kernel_eval(p: &GrassmannParam, z: Complex64, w: Complex64) -> Result<CMat> {
    check_disk(z)?;
    check_disk(w)?;
    Ok(kernel_unchecked(p, z, w))
}

fn kernel_unchecked(p: &GrassmannParam, z: Complex64, w: Complex64) -> CMat {
    let wc = w.conj();
    let left = p.alpha.adjoint() + p.beta.adjoint() * wc;
    let right = &p.alpha + &p.beta * z;
    let tail = wc * wc * z * z / (ONE - wc * z);
    left * right + identity(p.ell()) * tail
}

/// Block matrix `[K(z_j, z_i)]_{i,j}` over the given points.
///
/// With this index placement the matrix is the Gram matrix of the kernel
/// sections, hence PSD for every parameter.
pub fn kernel_gram(p: &GrassmannParam, points: &[Complex64]) -> Result<CMat> {
    for &z in points {
        check_disk(z)?;
    }
    let n = points.len();
    let mut hb = HermitianBlocks::new(&vec![p.ell(); n]);
    for i in 0..n {
        for j in i..n {
            hb.set(i, j, &kernel_unchecked(p, points[j], points[i]));
        }
    }
    Ok(hb.build())
}

/// An `n`-tuple of `k × ℓ` matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct XTuple(pub Vec<CMat>);

fn check_tuple(d: &DataSet, p: &GrassmannParam, xs: &XTuple) -> Result<()> {
    if xs.0.len() != d.n() {
        return Err(Error::Dimension(format!("{} matrices for {} nodes", xs.0.len(), d.n())));
    }
    if xs.0.iter().any(|x| x.shape() != (d.k(), p.ell())) {
        return Err(Error::Dimension(format!(
            "tuple entries must be {}x{}",
            d.k(),
            p.ell()
        )));
    }
    Ok(())
}

/// `Σ_{i,j} trace[X_j K(z_i,z_j) X_i* − W_j* X_j K(z_i,z_j) X_i* W_i]`.
pub fn necessity_form(
    d: &DataSet,
    p: &GrassmannParam,
    xs: &XTuple,
    tol: &ToleranceConfig,
) -> Result<f64> {
    check_tuple(d, p, xs)?;
    let (z, w, x) = (d.nodes(), d.values(), &xs.0);
    let mut total = Complex64::new(0.0, 0.0);
    let mut magnitude = 0.0;
    for i in 0..d.n() {
        for j in 0..d.n() {
            let kij = kernel_eval(p, z[i], z[j])?;
            let xkx = &x[j] * kij * x[i].adjoint();
            let a = xkx.trace();
            let b = (w[j].adjoint() * &xkx * &w[i]).trace();
            magnitude += a.norm() + b.norm();
            total += a - b;
        }
    }
    if total.im.abs() > tol.residual_tol * (1.0 + magnitude) {
        return Err(Error::NotHermitian(total.im.abs()));
    }
    Ok(total.re)
}

/// Hermitian matrix `H` of the necessity form: `form(X) = x* H x` where `x`
/// lists the entries of `X_1, …, X_n`, each row-major.
pub fn necessity_matrix(d: &DataSet, p: &GrassmannParam) -> Result<CMat> {
    let (k, l, n) = (d.k(), p.ell(), d.n());
    let eye = identity(k);
    let mut hb = HermitianBlocks::new(&vec![k * l; n]);
    for i in 0..n {
        for j in i..n {
            let kij = kernel_eval(p, d.nodes()[i], d.nodes()[j])?;
            let left = &eye - &d.values()[i] * d.values()[j].adjoint();
            let block = CMat::from_fn(k * l, k * l, |a, b| {
                let (r, c) = (a / l, a % l);
                let (r2, c2) = (b / l, b % l);
                left[(r, r2)] * kij[(c2, c)]
            });
            hb.set(i, j, &block);
        }
    }
    Ok(hb.build())
}

/// `[(1 − w_i w̄_j) K(z_i, z_j)]` for scalar `(α, β)`; for matrix data the
/// blocks are `(I − W_i W_j*) K(z_i, z_j)`.
pub fn scalar_criterion_matrix(
    d: &DataSet,
    alpha: Complex64,
    beta: Complex64,
    tol: &ToleranceConfig,
) -> Result<CMat> {
    let norm = alpha.norm_sqr() + beta.norm_sqr();
    if (norm - 1.0).abs() > tol.residual_tol {
        return Err(Error::InvalidParameter(format!(
            "|alpha|^2 + |beta|^2 = {norm}, expected 1"
        )));
    }
    let k = d.k();
    let eye = identity(k);
    let mut hb = HermitianBlocks::new(&vec![k; d.n()]);
    for i in 0..d.n() {
        for j in i..d.n() {
            let (zi, zj) = (d.nodes()[i], d.nodes()[j]);
            let kern = (alpha + beta * zi) * (alpha + beta * zj).conj()
                + zi * zi * (zj * zj).conj() / (ONE - zi * zj.conj());
            hb.set(i, j, &((&eye - &d.values()[i] * d.values()[j].adjoint()) * kern));
        }
    }
    Ok(hb.build())
}

/// `[(z_i² z̄_j² − φ_λ(w_i) φ_λ(w_j)‾) / (1 − z_i z̄_j)]` with
/// `φ_λ(w) = (w − λ)/(1 − λ̄ w)`.
pub fn dprs_lambda_matrix(d: &DataSet, lambda: Complex64) -> Result<CMat> {
    d.require_scalar()?;
    check_disk(lambda)?;
    let z = d.nodes();
    let phi: Vec<Complex64> = d.scalar_values().iter().map(|&w| mobius_zero(lambda, w)).collect();
    let n = d.n();
    let mut hb = HermitianBlocks::new(&vec![1; n]);
    for i in 0..n {
        for j in i..n {
            let num = z[i] * z[i] * (z[j] * z[j]).conj() - phi[i] * phi[j].conj();
            hb.set(i, j, &CMat::from_element(1, 1, num / (ONE - z[i] * z[j].conj())));
        }
    }
    Ok(hb.build())
}

/// A parameter and tuple making the necessity form negative.
#[derive(Debug, Clone)]
pub struct NecessityWitness {
    pub sample: usize,
    pub param: GrassmannParam,
    pub xs: XTuple,
    pub value: f64,
    pub threshold: f64,
}

#[derive(Debug, Clone)]
pub enum ScanOutcome {
    /// No witness found among the evaluated samples. Not a proof of solvability.
    Pass,
    Witness(NecessityWitness),
}

#[derive(Debug, Clone)]
pub struct ScanReport {
    pub outcome: ScanOutcome,
    pub samples: usize,
    /// Smallest normalized form value seen and the sample that produced it.
    pub min_value: f64,
    pub min_sample: usize,
}

impl ScanReport {
    pub fn passed(&self) -> bool {
        matches!(self.outcome, ScanOutcome::Pass)
    }
}

/// Every admissible `(ℓ, ℓ′)` with `1 ≤ ℓ ≤ ℓ′ ≤ k`.
pub fn default_shapes(k: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for lp in 1..=k {
        for l in 1..=lp {
            if lp <= 2 * l {
                out.push((l, lp));
            }
        }
    }
    out
}

/// Scalar parameters evaluated before any random draw.
fn canonical_scalars() -> Vec<(Complex64, Complex64)> {
    let mut out = vec![(ONE, Complex64::new(0.0, 0.0))];
    for eps in [1e-3, 1e-2, 1e-1] {
        out.push((Complex64::new(eps, 0.0), Complex64::new((1.0 - eps * eps).sqrt(), 0.0)));
    }
    for m in 0..16 {
        let theta = -PI / 2.0 + PI * (m as f64 + 0.5) / 16.0;
        out.push((Complex64::new(theta.cos(), 0.0), Complex64::new(theta.sin(), 0.0)));
    }
    out
}

/// Searches for a violation of the trace-form necessary condition.
///
/// Each sample fixes a parameter; the tuple is then the minimizer of the
/// (quadratic) form over unit tuples, i.e. the bottom eigenvector of
/// [`necessity_matrix`]. Canonical scalar parameters come first, then
/// seeded draws cycling through `shapes`.
pub fn necessity_scan(
    d: &DataSet,
    samples: usize,
    shapes: &[(usize, usize)],
    seed: u64,
    tol: &ToleranceConfig,
) -> Result<ScanReport> {
    let shapes: Vec<(usize, usize)> = if shapes.is_empty() {
        default_shapes(d.k())
    } else {
        shapes.to_vec()
    };
    for &(l, lp) in &shapes {
        check_shape(l, lp)?;
        if lp > d.k() {
            return Err(Error::InvalidParameter(format!("ell'={lp} exceeds k={}", d.k())));
        }
    }
    let canonical = canonical_scalars();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut witness = None;
    let (mut min_value, mut min_sample) = (f64::INFINITY, 0);
    let samples = samples.max(1);
    for s in 0..samples {
        let param = match canonical.get(s) {
            Some(&(a, b)) => GrassmannParam {
                alpha: CMat::from_element(1, 1, a),
                beta: CMat::from_element(1, 1, b),
            },
            None => {
                let (l, lp) = shapes[(s - canonical.len()) % shapes.len()];
                GrassmannParam::sample_with(&mut rng, l, lp)
            }
        };
        let h = necessity_matrix(d, &param)?;
        let eig = eig_hermitian(&h, tol)?;
        let value = eig.values[0];
        let norm = eig.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let threshold = -tol.psd_tol * (1.0 + norm);
        let normalized = value / (1.0 + norm);
        if normalized < min_value {
            min_value = normalized;
            min_sample = s;
        }
        if witness.is_none() && value < threshold {
            let v: DVector<Complex64> = eig.vectors.column(0).into_owned();
            let (k, l) = (d.k(), param.ell());
            let xs = XTuple(
                (0..d.n())
                    .map(|i| CMat::from_fn(k, l, |r, c| v[i * k * l + r * l + c]))
                    .collect(),
            );
            witness = Some(NecessityWitness {
                sample: s,
                param,
                xs,
                value,
                threshold,
            });
        }
    }
    Ok(ScanReport {
        outcome: witness.map_or(ScanOutcome::Pass, ScanOutcome::Witness),
        samples,
        min_value,
        min_sample,
    })
}
