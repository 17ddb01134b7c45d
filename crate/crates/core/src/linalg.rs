//! Dense complex linear algebra with an explicit tolerance policy.
//!
//! Every positive-semidefiniteness test in the crate goes through [`is_psd`],
//! which symmetrizes its input and accepts `λ_min ≥ −psd_tol·(1 + ‖A‖)`.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type CMat = DMatrix<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Absolute/relative thresholds used by the PSD and residual checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceConfig {
    pub psd_tol: f64,
    pub residual_tol: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            psd_tol: 1e-9,
            residual_tol: 1e-8,
        }
    }
}

impl ToleranceConfig {
    pub fn new(psd_tol: f64, residual_tol: f64) -> Result<Self> {
        if !(psd_tol >= 0.0 && residual_tol >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "tolerances must be nonnegative (psd_tol={psd_tol}, residual_tol={residual_tol})"
            )));
        }
        Ok(Self {
            psd_tol,
            residual_tol,
        })
    }

    pub fn with_psd_tol(mut self, psd_tol: f64) -> Self {
        self.psd_tol = psd_tol.max(0.0);
        self
    }
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: CMat,
}

/// Outcome of a PSD test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsdVerdict {
    pub psd: bool,
    pub min_eig: f64,
    /// `1 + ‖A‖` (spectral norm of the Hermitian part).
    pub scale: f64,
}

impl PsdVerdict {
    /// Smallest eigenvalue measured in units of the scale.
    pub fn relative_margin(&self) -> f64 {
        self.min_eig / self.scale
    }
}

fn check_square(a: &CMat) -> Result<usize> {
    if a.nrows() != a.ncols() {
        return Err(Error::NotSquare {
            rows: a.nrows(),
            cols: a.ncols(),
        });
    }
    Ok(a.nrows())
}

/// Induced ∞-norm (max absolute row sum).
pub fn inf_norm(a: &CMat) -> f64 {
    a.row_iter()
        .map(|r| r.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// `(A + A*)/2`, with a real diagonal.
pub fn hermitian_part(a: &CMat) -> CMat {
    let n = a.nrows();
    let mut h = CMat::zeros(n, n);
    for i in 0..n {
        h[(i, i)] = Complex64::new(a[(i, i)].re, 0.0);
        for j in (i + 1)..n {
            let v = (a[(i, j)] + a[(j, i)].conj()) * 0.5;
            h[(i, j)] = v;
            h[(j, i)] = v.conj();
        }
    }
    h
}

pub fn asymmetry(a: &CMat) -> f64 {
    inf_norm(&(a - a.adjoint()))
}

pub fn eig_hermitian(a: &CMat, tol: &ToleranceConfig) -> Result<HermitianEigen> {
    check_square(a)?;
    let asym = asymmetry(a);
    if asym > tol.residual_tol * (1.0 + inf_norm(a)) {
        return Err(Error::NotHermitian(asym));
    }
    Ok(eig_symmetrized(a))
}

fn eig_symmetrized(a: &CMat) -> HermitianEigen {
    let n = a.nrows();
    if n == 0 {
        return HermitianEigen {
            values: Vec::new(),
            vectors: CMat::zeros(0, 0),
        };
    }
    let eig = SymmetricEigen::new(hermitian_part(a));
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMat::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    HermitianEigen { values, vectors }
}

/// Eigenvalues of the Hermitian part, ascending (no eigenvectors).
pub fn eigenvalues_hermitian(a: &CMat) -> Vec<f64> {
    if a.nrows() == 0 {
        return Vec::new();
    }
    let mut v: Vec<f64> = hermitian_part(a).symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

pub fn is_psd(a: &CMat, tol: &ToleranceConfig) -> Result<PsdVerdict> {
    check_square(a)?;
    Ok(psd_from_eigenvalues(&eigenvalues_hermitian(a), tol))
}

pub(crate) fn psd_from_eigenvalues(values: &[f64], tol: &ToleranceConfig) -> PsdVerdict {
    let Some(&min_eig) = values.first() else {
        return PsdVerdict {
            psd: true,
            min_eig: 0.0,
            scale: 1.0,
        };
    };
    let norm = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let scale = 1.0 + norm;
    PsdVerdict {
        psd: min_eig >= -tol.psd_tol * scale,
        min_eig,
        scale,
    }
}

/// Which diagonal block of a 2×2 block matrix is pivoted on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pivot {
    /// `A₁₁ − A₁₂ A₂₂⁻¹ A₂₁`
    LowerRight,
    /// `A₂₂ − A₂₁ A₁₁⁻¹ A₁₂`
    UpperLeft,
}

#[derive(Debug, Clone)]
pub struct SchurComplement {
    pub matrix: CMat,
    /// Condition estimate of the pivot block.
    pub pivot_condition: f64,
}

/// Schur complement of a square matrix split after `split` rows/columns.
///
/// The pivot block must be Hermitian and invertible; a pivot whose smallest
/// eigenvalue magnitude falls below `residual_tol·(1 + ‖pivot‖)` yields
/// [`Error::SingularPivot`].
pub fn schur_complement(
    a: &CMat,
    split: usize,
    pivot: Pivot,
    tol: &ToleranceConfig,
) -> Result<SchurComplement> {
    let n = check_square(a)?;
    if split == 0 || split >= n {
        return Err(Error::Dimension(format!(
            "split {split} must lie strictly inside 0..{n}"
        )));
    }
    let m = n - split;
    let a11 = a.view((0, 0), (split, split)).into_owned();
    let a12 = a.view((0, split), (split, m)).into_owned();
    let a21 = a.view((split, 0), (m, split)).into_owned();
    let a22 = a.view((split, split), (m, m)).into_owned();
    let (keep, off_l, off_r, piv) = match pivot {
        Pivot::LowerRight => (a11, a12, a21, a22),
        Pivot::UpperLeft => (a22, a21, a12, a11),
    };
    let vals = eigenvalues_hermitian(&piv);
    let max = vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let min = vals.iter().fold(f64::INFINITY, |m, v| m.min(v.abs()));
    let cond = if min > 0.0 { max / min } else { f64::INFINITY };
    if min <= tol.residual_tol * (1.0 + max) {
        return Err(Error::SingularPivot(cond));
    }
    let inv = piv
        .clone()
        .try_inverse()
        .ok_or(Error::SingularPivot(cond))?;
    let matrix = hermitian_part(&(keep - off_l * inv * off_r));
    Ok(SchurComplement {
        matrix,
        pivot_condition: cond,
    })
}

/// How a PSD verdict obtained through a Schur complement was reached.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PsdRoute {
    Complement,
    /// Pivot block not positive definite: the full matrix was tested.
    Direct,
}

/// PSD test using the complement of a lower-right pivot when that pivot is
/// positive definite, falling back to a direct eigen test otherwise.
pub fn is_psd_via_schur(
    a: &CMat,
    split: usize,
    tol: &ToleranceConfig,
) -> Result<(PsdVerdict, PsdRoute)> {
    let n = check_square(a)?;
    if split > 0 && split < n {
        let piv = a.view((split, split), (n - split, n - split)).into_owned();
        let pv = is_psd(&piv, tol)?;
        if pv.min_eig > tol.residual_tol * pv.scale {
            if let Ok(s) = schur_complement(a, split, Pivot::LowerRight, tol) {
                return Ok((is_psd(&s.matrix, tol)?, PsdRoute::Complement));
            }
        }
    }
    Ok((is_psd(a, tol)?, PsdRoute::Direct))
}

pub fn sqrt_psd(a: &CMat, tol: &ToleranceConfig) -> Result<CMat> {
    check_square(a)?;
    let eig = eig_symmetrized(a);
    let verdict = psd_from_eigenvalues(&eig.values, tol);
    if !verdict.psd {
        return Err(Error::NotPsd(verdict.min_eig));
    }
    // eigenvalues within tolerance of zero are treated as zero
    let floor = tol.residual_tol * verdict.scale;
    let roots: Vec<f64> = eig
        .values
        .iter()
        .map(|&v| if v <= floor { 0.0 } else { v.sqrt() })
        .collect();
    Ok(spectral_fn(&eig, &roots))
}

/// Inverse square root of a positive definite matrix.
pub fn inv_sqrt_pd(a: &CMat, tol: &ToleranceConfig) -> Result<CMat> {
    check_square(a)?;
    let eig = eig_symmetrized(a);
    let verdict = psd_from_eigenvalues(&eig.values, tol);
    if verdict.min_eig <= tol.residual_tol * verdict.scale {
        return Err(Error::Singular(format!(
            "inverse square root needs a positive definite matrix (min eigenvalue {:.3e})",
            verdict.min_eig
        )));
    }
    let vals: Vec<f64> = eig.values.iter().map(|v| 1.0 / v.sqrt()).collect();
    Ok(spectral_fn(&eig, &vals))
}

fn spectral_fn(eig: &HermitianEigen, vals: &[f64]) -> CMat {
    let n = vals.len();
    let mut scaled = eig.vectors.clone();
    for (c, &v) in vals.iter().enumerate() {
        for r in 0..n {
            scaled[(r, c)] *= v;
        }
    }
    hermitian_part(&(scaled * eig.vectors.adjoint()))
}

/// Largest singular value.
pub fn operator_norm(a: &CMat) -> f64 {
    if a.nrows() == 0 || a.ncols() == 0 {
        return 0.0;
    }
    a.clone()
        .singular_values()
        .iter()
        .fold(0.0f64, |m, v| m.max(*v))
}

/// Smallest singular value.
pub fn min_singular_value(a: &CMat) -> f64 {
    if a.nrows() == 0 || a.ncols() == 0 {
        return 0.0;
    }
    a.clone()
        .singular_values()
        .iter()
        .fold(f64::INFINITY, |m, v| m.min(*v))
}

pub fn inverse(a: &CMat, what: &str) -> Result<CMat> {
    check_square(a)?;
    a.clone()
        .try_inverse()
        .ok_or_else(|| Error::Singular(what.to_string()))
}

/// 2-norm condition number.
pub fn condition_number(a: &CMat) -> f64 {
    let sv = a.clone().singular_values();
    let max = sv.iter().fold(0.0f64, |m, v| m.max(*v));
    let min = sv.iter().fold(f64::INFINITY, |m, v| m.min(*v));
    if min > 0.0 {
        max / min
    } else {
        f64::INFINITY
    }
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

/// Block-diagonal matrix with `count` copies of `block`.
pub fn block_diag_repeat(block: &CMat, count: usize) -> CMat {
    let (r, c) = block.shape();
    let mut m = CMat::zeros(r * count, c * count);
    for i in 0..count {
        m.view_mut((i * r, i * c), (r, c)).copy_from(block);
    }
    m
}

pub fn block_diag(blocks: &[CMat]) -> CMat {
    let rows: usize = blocks.iter().map(|b| b.nrows()).sum();
    let cols: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut m = CMat::zeros(rows, cols);
    let (mut r0, mut c0) = (0, 0);
    for b in blocks {
        m.view_mut((r0, c0), b.shape()).copy_from(b);
        r0 += b.nrows();
        c0 += b.ncols();
    }
    m
}

/// Vertical stack of blocks with equal column counts.
pub fn vstack(blocks: &[CMat]) -> CMat {
    let cols = blocks.first().map_or(0, |b| b.ncols());
    let rows: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut m = CMat::zeros(rows, cols);
    let mut r0 = 0;
    for b in blocks {
        m.view_mut((r0, 0), b.shape()).copy_from(b);
        r0 += b.nrows();
    }
    m
}

pub fn hstack(blocks: &[CMat]) -> CMat {
    let rows = blocks.first().map_or(0, |b| b.nrows());
    let cols: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut m = CMat::zeros(rows, cols);
    let mut c0 = 0;
    for b in blocks {
        m.view_mut((0, c0), b.shape()).copy_from(b);
        c0 += b.ncols();
    }
    m
}

/// Assembles a Hermitian matrix from its upper block triangle.
///
/// Off-diagonal blocks are written once and mirrored as their adjoint;
/// diagonal blocks contribute only their upper triangle. The result is
/// exactly Hermitian.
#[derive(Debug, Clone)]
pub struct HermitianBlocks {
    offsets: Vec<usize>,
    m: CMat,
}

impl HermitianBlocks {
    pub fn new(sizes: &[usize]) -> Self {
        let mut offsets = Vec::with_capacity(sizes.len() + 1);
        let mut acc = 0;
        offsets.push(0);
        for s in sizes {
            acc += s;
            offsets.push(acc);
        }
        Self {
            offsets,
            m: CMat::zeros(acc, acc),
        }
    }

    fn size(&self, i: usize) -> usize {
        self.offsets[i + 1] - self.offsets[i]
    }

    /// Sets block `(i, j)` with `i ≤ j`.
    pub fn set(&mut self, i: usize, j: usize, block: &CMat) -> &mut Self {
        assert!(i <= j, "only upper blocks are set");
        assert_eq!(block.shape(), (self.size(i), self.size(j)), "block ({i},{j}) shape");
        let (r0, c0) = (self.offsets[i], self.offsets[j]);
        if i == j {
            for r in 0..block.nrows() {
                self.m[(r0 + r, r0 + r)] = Complex64::new(block[(r, r)].re, 0.0);
                for c in (r + 1)..block.ncols() {
                    self.m[(r0 + r, r0 + c)] = block[(r, c)];
                    self.m[(r0 + c, r0 + r)] = block[(r, c)].conj();
                }
            }
        } else {
            for r in 0..block.nrows() {
                for c in 0..block.ncols() {
                    self.m[(r0 + r, c0 + c)] = block[(r, c)];
                    self.m[(c0 + c, r0 + r)] = block[(r, c)].conj();
                }
            }
        }
        self
    }

    pub fn build(self) -> CMat {
        self.m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn real(rows: usize, cols: usize, v: &[f64]) -> CMat {
        CMat::from_row_iterator(rows, cols, v.iter().map(|&x| Complex64::new(x, 0.0)))
    }

    fn random_matrix(rng: &mut ChaCha8Rng, r: usize, c: usize) -> CMat {
        CMat::from_fn(r, c, |_, _| {
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        })
    }

    fn random_psd(rng: &mut ChaCha8Rng, n: usize, rank: usize) -> CMat {
        let b = random_matrix(rng, rank, n);
        hermitian_part(&(b.adjoint() * b))
    }

    #[test]
    fn eigenvalues_of_small_cases() {
        let tol = ToleranceConfig::default();
        let e = eig_hermitian(&identity(2), &tol).unwrap();
        assert_eq!(e.values, vec![1.0, 1.0]);
        let e = eig_hermitian(&real(2, 2, &[1.0, 2.0, 2.0, 1.0]), &tol).unwrap();
        assert!((e.values[0] + 1.0).abs() < 1e-14 && (e.values[1] - 3.0).abs() < 1e-14);
        let e = eig_hermitian(&real(3, 3, &[5., 0., 0., 0., -3., 0., 0., 0., 0.]), &tol).unwrap();
        assert_eq!(e.values, vec![-3.0, 0.0, 5.0]);
    }

    #[test]
    fn eig_rejects_bad_input() {
        let tol = ToleranceConfig::default();
        assert!(matches!(
            eig_hermitian(&CMat::zeros(2, 3), &tol),
            Err(Error::NotSquare { .. })
        ));
        assert!(matches!(
            eig_hermitian(&real(2, 2, &[1.0, 0.5, 0.0, 1.0]), &tol),
            Err(Error::NotHermitian(_))
        ));
    }

    #[test]
    fn eig_reconstructs() {
        let tol = ToleranceConfig::default();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 1..9 {
            let b = random_matrix(&mut rng, n, n);
            let a = hermitian_part(&(&b + b.adjoint()));
            let e = eig_hermitian(&a, &tol).unwrap();
            let lam = CMat::from_diagonal(&nalgebra::DVector::from_iterator(
                n,
                e.values.iter().map(|&v| Complex64::new(v, 0.0)),
            ));
            let rec = &e.vectors * lam * e.vectors.adjoint();
            let scale = 1.0 + operator_norm(&a);
            assert!((rec - &a).norm() <= tol.residual_tol * scale);
            let vv = e.vectors.adjoint() * &e.vectors;
            assert!((vv - identity(n)).norm() <= tol.residual_tol);
            assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn psd_examples() {
        let tol = ToleranceConfig::default();
        let v = is_psd(&identity(3), &tol).unwrap();
        assert!(v.psd && (v.min_eig - 1.0).abs() < 1e-14);
        let v = is_psd(&real(2, 2, &[1.0, 1.0, 1.0, 1.0]), &tol).unwrap();
        assert!(v.psd && v.min_eig.abs() < 1e-14);
        // eigenvalues a ± b of [[a, b], [b, a]]
        let v = is_psd(&real(2, 2, &[0.3636, 1.6238, 1.6238, 0.3636]), &tol).unwrap();
        assert!(!v.psd);
        assert!((v.min_eig - (0.3636 - 1.6238)).abs() < 1e-12);
    }

    #[test]
    fn psd_sum_closed_on_random_pairs() {
        let tol = ToleranceConfig::default();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let n = rng.random_range(1..8);
            let (ra, rb) = (rng.random_range(1..=n), rng.random_range(1..=n));
            let a = random_psd(&mut rng, n, ra);
            let b = random_psd(&mut rng, n, rb);
            assert!(is_psd(&a, &tol).unwrap().psd);
            assert!(is_psd(&b, &tol).unwrap().psd);
            assert!(is_psd(&(a + b), &tol).unwrap().psd);
        }
    }

    #[test]
    fn schur_complement_examples() {
        let tol = ToleranceConfig::default();
        let s = schur_complement(&real(2, 2, &[2.0, 1.0, 1.0, 1.0]), 1, Pivot::LowerRight, &tol)
            .unwrap();
        assert!((s.matrix[(0, 0)].re - 1.0).abs() < 1e-15);

        // [[I, X], [X*, I]] with ‖X‖ < 1 → I − X X* ≻ 0
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut x = random_matrix(&mut rng, 3, 3);
        x /= Complex64::new(1.5 * operator_norm(&x), 0.0);
        let mut hb = HermitianBlocks::new(&[3, 3]);
        hb.set(0, 0, &identity(3)).set(0, 1, &x).set(1, 1, &identity(3));
        let s = schur_complement(&hb.build(), 3, Pivot::LowerRight, &tol).unwrap();
        assert!((&s.matrix - (identity(3) - &x * x.adjoint())).norm() < 1e-14);
        assert!(is_psd(&s.matrix, &tol).unwrap().min_eig > 0.0);
    }

    #[test]
    fn schur_complement_singular_pivot_falls_back() {
        let tol = ToleranceConfig::default();
        let a = real(2, 2, &[1.0, 0.0, 0.0, 0.0]);
        assert!(matches!(
            schur_complement(&a, 1, Pivot::LowerRight, &tol),
            Err(Error::SingularPivot(_))
        ));
        let (v, route) = is_psd_via_schur(&a, 1, &tol).unwrap();
        assert!(v.psd);
        assert_eq!(route, PsdRoute::Direct);
    }

    #[test]
    fn schur_complement_preserves_psd_verdict() {
        let tol = ToleranceConfig::default();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let mut both = 0;
        for _ in 0..200 {
            let n = rng.random_range(2..=12);
            let split = rng.random_range(1..n);
            let m = n - split;
            // PD pivot, arbitrary coupling, indefinite-or-not top block
            let a22 = random_psd(&mut rng, m, m) + identity(m) * Complex64::new(0.1, 0.0);
            let a12 = random_matrix(&mut rng, split, m);
            let shift: f64 = rng.random_range(-1.0..4.0);
            let a11 = random_psd(&mut rng, split, split)
                + &a12 * a22.clone().try_inverse().unwrap() * a12.adjoint()
                + identity(split) * Complex64::new(shift - 1.0, 0.0);
            let mut hb = HermitianBlocks::new(&[split, m]);
            hb.set(0, 0, &a11).set(0, 1, &a12).set(1, 1, &a22);
            let full = hb.build();
            let direct = is_psd(&full, &tol).unwrap();
            let s = schur_complement(&full, split, Pivot::LowerRight, &tol).unwrap();
            let comp = is_psd(&s.matrix, &tol).unwrap();
            if direct.min_eig.abs() > 1e-7 && comp.min_eig.abs() > 1e-7 {
                assert_eq!(direct.psd, comp.psd);
                both += 1;
            }
        }
        assert!(both > 150);
    }

    #[test]
    fn sqrt_examples() {
        let tol = ToleranceConfig::default();
        assert!((sqrt_psd(&identity(3), &tol).unwrap() - identity(3)).norm() < 1e-14);
        let s = sqrt_psd(&real(2, 2, &[4.0, 0.0, 0.0, 9.0]), &tol).unwrap();
        assert!((s - real(2, 2, &[2.0, 0.0, 0.0, 3.0])).norm() < 1e-14);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let a = random_psd(&mut rng, 5, 5);
        let s = sqrt_psd(&a, &tol).unwrap();
        assert!((&s * &s - &a).norm() <= tol.residual_tol * (1.0 + operator_norm(&a)));
        assert!(is_psd(&s, &tol).unwrap().psd);
        assert!(matches!(
            sqrt_psd(&real(1, 1, &[-1.0]), &tol),
            Err(Error::NotPsd(_))
        ));
    }

    #[test]
    fn sqrt_of_projection_is_itself() {
        let tol = ToleranceConfig::default();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..20 {
            let v = random_matrix(&mut rng, 6, 2);
            let q = v.clone().qr().q();
            let p = &q * q.adjoint();
            assert!((sqrt_psd(&p, &tol).unwrap() - &p).norm() < 1e-12);
        }
    }

    #[test]
    fn operator_norm_examples() {
        assert_eq!(operator_norm(&CMat::zeros(3, 2)), 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let u = random_matrix(&mut rng, 4, 4).qr().q();
        assert!((operator_norm(&u) - 1.0).abs() < 1e-13);
        assert!((operator_norm(&real(2, 2, &[0.0, 2.0, 0.0, 0.0])) - 2.0).abs() < 1e-14);
    }

    #[test]
    fn hermitian_blocks_are_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let mut hb = HermitianBlocks::new(&[2, 3]);
        hb.set(0, 0, &random_matrix(&mut rng, 2, 2))
            .set(0, 1, &random_matrix(&mut rng, 2, 3))
            .set(1, 1, &random_matrix(&mut rng, 3, 3));
        let m = hb.build();
        assert_eq!(m.clone() - m.adjoint(), CMat::zeros(5, 5));
    }
}
