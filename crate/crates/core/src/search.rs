//! Grid and cutting-plane helpers for the parameter searches.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::Result;
use crate::linalg::{eig_hermitian, eigenvalues_hermitian, CMat, ToleranceConfig};

/// Polar grid over the closed disk of the given radius: `resolution / 2`
/// rings, ring `j` holding `⌈2πj⌉` points, plus the center.
pub(crate) fn polar_grid(resolution: usize, radius: f64) -> Vec<Complex64> {
    let rings = (resolution / 2).max(1);
    let mut out = vec![Complex64::new(0.0, 0.0)];
    for j in 1..=rings {
        let r = radius * j as f64 / rings as f64;
        let count = (2.0 * std::f64::consts::PI * j as f64).ceil() as usize;
        let offset = if j % 2 == 0 { 0.5 } else { 0.0 };
        for m in 0..count {
            let t = 2.0 * std::f64::consts::PI * (m as f64 + offset) / count as f64;
            out.push(Complex64::from_polar(r, t));
        }
    }
    out
}

/// Ring spacing of [`polar_grid`].
pub(crate) fn polar_spacing(resolution: usize, radius: f64) -> f64 {
    radius / (resolution / 2).max(1) as f64
}

/// `21 × 21` square lattice of half-width `half` around `center`.
pub(crate) fn zoom_grid(center: Complex64, half: f64) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(441);
    for a in -10..=10 {
        for b in -10..=10 {
            out.push(center + Complex64::new(a as f64, b as f64) * (half / 10.0));
        }
    }
    out
}

/// Real-affine Hermitian family `A(t) = A₀ + Σ t_m A_m`.
pub(crate) struct AffineFamily {
    base: CMat,
    dirs: Vec<CMat>,
}

/// One evaluation of `λ_min(A(t))`.
#[derive(Debug, Clone)]
pub(crate) struct Eval {
    pub min_eig: f64,
    pub scale: f64,
    pub gradient: Vec<f64>,
}

impl AffineFamily {
    pub fn from_fn(dim: usize, f: impl Fn(&[f64]) -> CMat) -> Self {
        let zero = vec![0.0; dim];
        let base = f(&zero);
        let dirs = (0..dim)
            .map(|m| {
                let mut e = zero.clone();
                e[m] = 1.0;
                f(&e) - &base
            })
            .collect();
        Self { base, dirs }
    }

    pub fn dim(&self) -> usize {
        self.dirs.len()
    }

    pub fn at(&self, t: &[f64]) -> CMat {
        let mut a = self.base.clone();
        for (d, &s) in self.dirs.iter().zip(t) {
            if s != 0.0 {
                a += d * Complex64::new(s, 0.0);
            }
        }
        a
    }

    /// Bottom eigenvalue and scale `1 + max|λ|`, without eigenvectors.
    pub fn margin(&self, t: &[f64]) -> (f64, f64) {
        let vals = eigenvalues_hermitian(&self.at(t));
        let max = vals.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        (vals[0], 1.0 + max)
    }

    /// Bottom eigenvalue, the scale `1 + max|λ|`, and a supergradient
    /// `v* A_m v` built from a bottom eigenvector.
    pub fn eval(&self, t: &[f64], tol: &ToleranceConfig) -> Result<Eval> {
        let eig = eig_hermitian(&self.at(t), tol)?;
        let v = eig.vectors.column(0);
        let gradient = self
            .dirs
            .iter()
            .map(|d| (v.adjoint() * d * v)[(0, 0)].re)
            .collect();
        let max = eig.values.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        Ok(Eval {
            min_eig: eig.values[0],
            scale: 1.0 + max,
            gradient,
        })
    }
}

/// Central-cut ellipsoid method maximizing the concave `t ↦ λ_min(A(t))`
/// over the ball of `radius` around `center`. Returns every iterate's
/// evaluation through `visit`.
pub(crate) fn ellipsoid_max(
    family: &AffineFamily,
    center: &[f64],
    radius: f64,
    iters: usize,
    tol: &ToleranceConfig,
    mut visit: impl FnMut(&[f64], &Eval),
) -> Result<()> {
    let n = family.dim();
    let nf = n as f64;
    let mut c = DVector::from_column_slice(center);
    let mut p = DMatrix::<f64>::identity(n, n) * (radius * radius);
    for _ in 0..iters {
        let eval = family.eval(c.as_slice(), tol)?;
        visit(c.as_slice(), &eval);
        let g = DVector::from_vec(eval.gradient);
        let pg = &p * &g;
        let gpg = g.dot(&pg);
        if !(gpg > 1e-28) {
            break;
        }
        let step = pg / gpg.sqrt();
        c += &step / (nf + 1.0);
        p = (&p - (&step * step.transpose()) * (2.0 / (nf + 1.0))) * (nf * nf / (nf * nf - 1.0));
    }
    Ok(())
}
