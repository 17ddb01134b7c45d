//! Pick-type matrices: the classical Pick matrix, the `B(z) = z²` parameter
//! matrices, and the general Blaschke-product construction built from the
//! jet matrices `J`, `Ẽ` and the Stein solutions `Q`, `Q̃`.

use num_complex::Complex64;

use crate::data::{BlaschkeSpec, DataSet, POINT_EPS};
use crate::error::{Error, Result};
use crate::linalg::{
    block_diag, block_diag_repeat, hermitian_part, identity, inf_norm, inverse, is_psd, vstack,
    CMat, HermitianBlocks, PsdVerdict, ToleranceConfig, ONE,
};

/// Pick matrix of the unconstrained problem: block `(i, j)` is
/// `(I − W_i W_j*) / (1 − z_i z̄_j)`.
pub fn build_pick_standard(d: &DataSet) -> CMat {
    pick_from_parts(d.nodes(), d.values(), d.k())
}

pub(crate) fn pick_from_parts(nodes: &[Complex64], values: &[CMat], k: usize) -> CMat {
    let n = nodes.len();
    let mut hb = HermitianBlocks::new(&vec![k; n]);
    let eye = identity(k);
    for i in 0..n {
        for j in i..n {
            let denom = ONE - nodes[i] * nodes[j].conj();
            let block = (&eye - &values[i] * values[j].adjoint()) / denom;
            hb.set(i, j, &block);
        }
    }
    hb.build()
}

/// `Z = diag(z_i I_k)`, `E = [I_k; …; I_k]`, `W = [W_1; …; W_n]` and
/// `W̃ = diag(W_1, …, W_n)`.
#[derive(Debug, Clone)]
pub struct AuxMatrices {
    pub z: CMat,
    pub e: CMat,
    pub w_col: CMat,
    pub w_diag: CMat,
}

pub fn build_aux(d: &DataSet) -> AuxMatrices {
    aux_from_parts(d.nodes(), d.values(), d.k())
}

fn aux_from_parts(nodes: &[Complex64], values: &[CMat], k: usize) -> AuxMatrices {
    let n = nodes.len();
    let eye = identity(k);
    let z = block_diag(&nodes.iter().map(|&zi| &eye * zi).collect::<Vec<_>>());
    AuxMatrices {
        z,
        e: if n == 0 { CMat::zeros(0, k) } else { vstack(&vec![eye.clone(); n]) },
        w_col: if n == 0 { CMat::zeros(0, k) } else { vstack(values) },
        w_diag: block_diag(values),
    }
}

/// Jordan-type data of the Blaschke product.
#[derive(Debug, Clone)]
pub struct Jet {
    pub j: CMat,
    pub e_tilde: CMat,
}

/// `J = diag(J_i)` with `J_i` lower bidiagonal (`λ_i I_k` on the diagonal,
/// `I_k` on the first block subdiagonal); `Ẽ` stacks `[I_k, 0, …, 0]ᵀ`.
pub fn build_jet(b: &BlaschkeSpec, k: usize) -> Jet {
    let d = b.degree();
    let mut j = CMat::zeros(k * d, k * d);
    let mut e_tilde = CMat::zeros(k * d, k);
    let mut base = 0;
    for (&lam, &r) in b.zeros().iter().zip(b.multiplicities()) {
        for s in 0..r {
            for t in 0..k {
                let row = base + s * k + t;
                j[(row, row)] = lam;
                if s > 0 {
                    j[(row, row - k)] = ONE;
                }
            }
        }
        for t in 0..k {
            e_tilde[(base + t, t)] = ONE;
        }
        base += r * k;
    }
    Jet { j, e_tilde }
}

#[derive(Debug, Clone)]
pub struct SteinSolution {
    pub q: CMat,
    pub q_tilde: CMat,
    /// `‖Q − JQJ* − ẼẼ*‖_∞`
    pub residual_q: f64,
    /// `‖Q̃ − JQ̃Z* − ẼE*‖_∞`
    pub residual_q_tilde: f64,
    /// Ratio of the largest to smallest `|1 − μ ν̄|` over the operator spectra.
    pub condition: f64,
}

const STEIN_SINGULAR: f64 = 1e-12;

fn stein_condition(left: &[Complex64], right: &[Complex64]) -> f64 {
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for a in left {
        for b in right {
            let v = (ONE - a * b.conj()).norm();
            lo = lo.min(v);
            hi = hi.max(v);
        }
    }
    if left.is_empty() || right.is_empty() {
        1.0
    } else if lo > 0.0 {
        hi / lo
    } else {
        f64::INFINITY
    }
}

/// Solves `X − A X B = C` by vectorization: `(I − Bᵀ ⊗ A) vec(X) = vec(C)`.
fn solve_stein(a: &CMat, b: &CMat, c: &CMat) -> Result<CMat> {
    let (r, s) = c.shape();
    if r == 0 || s == 0 {
        return Ok(CMat::zeros(r, s));
    }
    let op = identity(r * s) - b.transpose().kronecker(a);
    let rhs = CMat::from_column_slice(r * s, 1, c.as_slice());
    let sol = op
        .lu()
        .solve(&rhs)
        .ok_or(Error::IllConditionedStein(f64::INFINITY))?;
    Ok(CMat::from_column_slice(r, s, sol.as_slice()))
}

/// Solves `Q − JQJ* = ẼẼ*` and `Q̃ − JQ̃Z* = ẼE*` as finite linear systems.
pub fn stein_solve(jet: &Jet, aux: &AuxMatrices, zeros: &[Complex64], nodes: &[Complex64]) -> Result<SteinSolution> {
    let cond = stein_condition(zeros, zeros).max(stein_condition(zeros, nodes));
    if !cond.is_finite() || cond > 1.0 / STEIN_SINGULAR {
        return Err(Error::IllConditionedStein(cond));
    }
    let jh = jet.j.adjoint();
    let ee = &jet.e_tilde * jet.e_tilde.adjoint();
    let q = hermitian_part(&solve_stein(&jet.j, &jh, &ee)?);
    let ee_t = &jet.e_tilde * aux.e.adjoint();
    let q_tilde = solve_stein(&jet.j, &aux.z.adjoint(), &ee_t)?;
    let residual_q = inf_norm(&(&q - &jet.j * &q * &jh - &ee));
    let residual_q_tilde = inf_norm(&(&q_tilde - &jet.j * &q_tilde * aux.z.adjoint() - &ee_t));
    Ok(SteinSolution {
        q,
        q_tilde,
        residual_q,
        residual_q_tilde,
        condition: cond,
    })
}

/// Partial sums `Σ_{i<terms} J^i ẼẼ* J^{*i}` and `Σ J^i ẼE* Z^{*i}`.
pub fn stein_series(jet: &Jet, aux: &AuxMatrices, terms: usize) -> (CMat, CMat) {
    let kd = jet.j.nrows();
    let mut q = CMat::zeros(kd, kd);
    let mut qt = CMat::zeros(kd, aux.z.nrows());
    let mut left = jet.e_tilde.clone();
    let mut right_q = jet.e_tilde.adjoint();
    let mut right_t = aux.e.adjoint();
    let jh = jet.j.adjoint();
    let zh = aux.z.adjoint();
    for _ in 0..terms {
        q += &left * &right_q;
        qt += &left * &right_t;
        left = &jet.j * left;
        right_q *= &jh;
        right_t *= &zh;
    }
    (q, qt)
}

/// All matrices of a constrained problem instance. Immutable once built.
#[derive(Debug, Clone)]
pub struct PickBundle {
    k: usize,
    n: usize,
    d: usize,
    pub p: CMat,
    pub aux: AuxMatrices,
    pub jet: Jet,
    pub stein: SteinSolution,
    pub q_inv: CMat,
}

impl PickBundle {
    /// Fails with [`Error::Overlap`] when a node equals a zero of `B`.
    pub fn new(d: &DataSet, b: &BlaschkeSpec) -> Result<Self> {
        for &z in d.nodes() {
            for &l in b.zeros() {
                if (z - l).norm() <= POINT_EPS {
                    return Err(Error::Overlap { node: z, zero: l });
                }
            }
        }
        Self::from_parts(d.nodes(), d.values(), d.k(), b)
    }

    /// Unchecked construction; `nodes` may be empty.
    pub(crate) fn from_parts(
        nodes: &[Complex64],
        values: &[CMat],
        k: usize,
        b: &BlaschkeSpec,
    ) -> Result<Self> {
        let p = pick_from_parts(nodes, values, k);
        let aux = aux_from_parts(nodes, values, k);
        let jet = build_jet(b, k);
        let stein = stein_solve(&jet, &aux, b.zeros(), nodes)?;
        let q_inv = hermitian_part(&inverse(&stein.q, "Stein solution Q")?);
        Ok(Self {
            k,
            n: nodes.len(),
            d: b.degree(),
            p,
            aux,
            jet,
            stein,
            q_inv,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    fn check_x(&self, x: &CMat) {
        assert_eq!(x.shape(), (self.k, self.k), "parameter must be k x k");
    }

    /// `Q̃(I − X_n W̃*)`, the coupling block below `ℙ`.
    fn coupling(&self, x: &CMat) -> CMat {
        let xn = block_diag_repeat(x, self.n);
        &self.stein.q_tilde * (identity(self.n * self.k) - xn * self.aux.w_diag.adjoint())
    }

    /// `ℙ_X`: the `3 × 3` block matrix linear in `X`.
    pub fn px(&self, x: &CMat) -> CMat {
        self.check_x(x);
        let (nk, kd) = (self.n * self.k, self.d * self.k);
        let xd = block_diag_repeat(x, self.d);
        let mut hb = HermitianBlocks::new(&[nk, kd, kd]);
        hb.set(0, 0, &self.p)
            .set(0, 1, &self.coupling(x).adjoint())
            .set(0, 2, &CMat::zeros(nk, kd))
            .set(1, 1, &self.stein.q)
            .set(1, 2, &xd)
            .set(2, 2, &self.q_inv);
        hb.build()
    }

    /// `ℙ̃_X`: the Carathéodory-Fejér Pick matrix for the value `X` at every zero.
    pub fn ptilde(&self, x: &CMat) -> CMat {
        self.check_x(x);
        let (nk, kd) = (self.n * self.k, self.d * self.k);
        let xd = block_diag_repeat(x, self.d);
        let mut hb = HermitianBlocks::new(&[nk, kd]);
        hb.set(0, 0, &self.p)
            .set(0, 1, &self.coupling(x).adjoint())
            .set(1, 1, &(&self.stein.q - &xd * &self.stein.q * xd.adjoint()));
        hb.build()
    }

    /// `P̂_X`, the complement of `Q − X_d Q X_d*` in `ℙ̃_X`.
    pub fn phat(&self, x: &CMat, tol: &ToleranceConfig) -> Result<CMat> {
        self.check_x(x);
        let xd = block_diag_repeat(x, self.d);
        let pivot = hermitian_part(&(&self.stein.q - &xd * &self.stein.q * xd.adjoint()));
        let v = is_psd(&pivot, tol)?;
        if v.min_eig <= tol.residual_tol * v.scale {
            return Err(Error::Singular(format!(
                "Q - X_d Q X_d* is not invertible (min eigenvalue {:.3e}); test the unreduced matrix",
                v.min_eig
            )));
        }
        let c = self.coupling(x);
        let inv = inverse(&pivot, "Q - X_d Q X_d*")?;
        Ok(hermitian_part(&(&self.p - c.adjoint() * inv * c)))
    }
}

fn reject_origin(d: &DataSet) -> Result<()> {
    if d.nodes().iter().any(|z| z.norm() <= POINT_EPS) {
        return Err(Error::NodeAtBlaschkeZero);
    }
    Ok(())
}

/// `ℙ′_X` for `B(z) = z²`, quadratic in `X`.
pub fn build_px_prime_z2(d: &DataSet, x: &CMat) -> Result<CMat> {
    reject_origin(d)?;
    let k = d.k();
    if x.shape() != (k, k) {
        return Err(Error::Dimension("parameter must be k x k".into()));
    }
    let aux = build_aux(d);
    let nk = d.n() * k;
    let ewx = &aux.e - &aux.w_col * x.adjoint();
    let contr = identity(k) - x * x.adjoint();
    let mut hb = HermitianBlocks::new(&[nk, k, k]);
    hb.set(0, 0, &build_pick_standard(d))
        .set(0, 1, &ewx)
        .set(0, 2, &(&aux.z * &ewx))
        .set(1, 1, &contr)
        .set(1, 2, &CMat::zeros(k, k))
        .set(2, 2, &contr);
    Ok(hb.build())
}

/// `ℙ_X` for `B(z) = z²`, the `5 × 5` block matrix linear in `X`.
pub fn build_px_z2(d: &DataSet, x: &CMat) -> Result<CMat> {
    reject_origin(d)?;
    let k = d.k();
    if x.shape() != (k, k) {
        return Err(Error::Dimension("parameter must be k x k".into()));
    }
    let aux = build_aux(d);
    let nk = d.n() * k;
    let ewx = &aux.e - &aux.w_col * x.adjoint();
    let zero_nk = CMat::zeros(nk, k);
    let zero_k = CMat::zeros(k, k);
    let eye = identity(k);
    let mut hb = HermitianBlocks::new(&[nk, k, k, k, k]);
    hb.set(0, 0, &build_pick_standard(d))
        .set(0, 1, &ewx)
        .set(0, 2, &(&aux.z * &ewx))
        .set(0, 3, &zero_nk)
        .set(0, 4, &zero_nk)
        .set(1, 1, &eye)
        .set(1, 2, &zero_k)
        .set(1, 3, x)
        .set(1, 4, &zero_k)
        .set(2, 2, &eye)
        .set(2, 3, &zero_k)
        .set(2, 4, x)
        .set(3, 3, &eye)
        .set(3, 4, &zero_k)
        .set(4, 4, &eye);
    Ok(hb.build())
}

pub fn build_px_general(d: &DataSet, b: &BlaschkeSpec, x: &CMat) -> Result<CMat> {
    Ok(PickBundle::new(d, b)?.px(x))
}

pub fn build_ptilde(d: &DataSet, b: &BlaschkeSpec, x: &CMat) -> Result<CMat> {
    Ok(PickBundle::new(d, b)?.ptilde(x))
}

pub fn build_phat(d: &DataSet, b: &BlaschkeSpec, x: &CMat, tol: &ToleranceConfig) -> Result<CMat> {
    PickBundle::new(d, b)?.phat(x, tol)
}

/// Outcome of the node/zero intersection check.
#[derive(Debug, Clone)]
pub enum OverlapVerdict {
    NoOverlap,
    /// Nodes sitting on zeros of `B` carry different values: no solution.
    ValuesDiffer { indices: Vec<usize> },
    /// The shared value is forced to be the parameter; one PSD test decides.
    Reduced {
        indices: Vec<usize>,
        x: CMat,
        verdict: PsdVerdict,
    },
}

pub fn check_overlap(d: &DataSet, b: &BlaschkeSpec, tol: &ToleranceConfig) -> Result<OverlapVerdict> {
    let indices: Vec<usize> = (0..d.n())
        .filter(|&i| {
            b.zeros()
                .iter()
                .any(|l| (d.nodes()[i] - l).norm() <= POINT_EPS)
        })
        .collect();
    let Some(&first) = indices.first() else {
        return Ok(OverlapVerdict::NoOverlap);
    };
    let x = d.values()[first].clone();
    if indices
        .iter()
        .any(|&i| inf_norm(&(&d.values()[i] - &x)) > tol.residual_tol)
    {
        return Ok(OverlapVerdict::ValuesDiffer { indices });
    }
    let (nodes, values) = d.without(&indices);
    let bundle = PickBundle::from_parts(&nodes, &values, d.k(), b)?;
    let verdict = is_psd(&bundle.px(&x), tol)?;
    Ok(OverlapVerdict::Reduced {
        indices,
        x,
        verdict,
    })
}
