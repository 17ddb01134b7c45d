//! Scalar interpolants as Schur chains: reduction of the constrained problem
//! to a classical one, the central Schur-algorithm solution, evaluation,
//! derivatives, verification and a generator of feasible instances.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::data::{mobius_zero, BlaschkeSpec, DataSet, POINT_EPS};
use crate::error::{Error, Result};
use crate::linalg::{is_psd, CMat, ToleranceConfig, ONE};
use crate::pick::build_pick_standard;

/// Version tag written into every chain file.
pub const SCHEMA: &str = "cnp/1";

/// One factor `t ↦ μ_v(b_ζ(z)·t)` of a chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchurStep {
    pub zeta: Complex64,
    pub value: Complex64,
}

/// `s = μ_{v₁}(b_{ζ₁} · μ_{v₂}(b_{ζ₂} · … μ_{v_N}(b_{ζ_N} · tail)))` with
/// `μ_v(t) = (t + v)/(1 + v̄t)` and `b_ζ(z) = (z − ζ)/(1 − ζ̄z)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SchurChain {
    pub steps: Vec<SchurStep>,
    pub tail: Complex64,
}

#[derive(Serialize, Deserialize)]
struct ChainFile {
    schema: String,
    steps: Vec<[f64; 4]>,
    tail: [f64; 2],
}

impl SchurChain {
    pub fn constant(c: Complex64) -> Self {
        Self {
            steps: Vec::new(),
            tail: c,
        }
    }

    pub fn new(steps: Vec<SchurStep>, tail: Complex64) -> Result<Self> {
        for (j, s) in steps.iter().enumerate() {
            if !(s.zeta.norm() < 1.0) || !(s.value.norm() < 1.0) {
                return Err(Error::InvalidParameter(format!(
                    "step {j} needs |zeta| < 1 and |v| < 1"
                )));
            }
        }
        if !(tail.norm() <= 1.0) {
            return Err(Error::InvalidParameter(format!("tail {tail} is outside the closed disk")));
        }
        Ok(Self { steps, tail })
    }

    pub fn to_json(&self) -> String {
        let file = ChainFile {
            schema: SCHEMA.to_string(),
            steps: self
                .steps
                .iter()
                .map(|s| [s.zeta.re, s.zeta.im, s.value.re, s.value.im])
                .collect(),
            tail: [self.tail.re, self.tail.im],
        };
        serde_json::to_string_pretty(&file).expect("chain serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: ChainFile = serde_json::from_str(text)
            .map_err(|e| Error::InvalidParameter(format!("chain JSON: {e}")))?;
        if file.schema != SCHEMA {
            return Err(Error::InvalidParameter(format!(
                "unsupported chain schema {:?} (expected {SCHEMA:?})",
                file.schema
            )));
        }
        Self::new(
            file.steps
                .iter()
                .map(|s| SchurStep {
                    zeta: Complex64::new(s[0], s[1]),
                    value: Complex64::new(s[2], s[3]),
                })
                .collect(),
            Complex64::new(file.tail[0], file.tail[1]),
        )
    }

    /// Same steps with another terminal constant.
    pub fn with_tail(&self, tail: Complex64) -> Result<Self> {
        Self::new(self.steps.clone(), tail)
    }
}

fn mu(v: Complex64, t: Complex64) -> Complex64 {
    (t + v) / (ONE + v.conj() * t)
}

pub fn chain_eval(chain: &SchurChain, z: Complex64) -> Complex64 {
    chain
        .steps
        .iter()
        .rev()
        .fold(chain.tail, |t, s| mu(s.value, mobius_zero(s.zeta, z) * t))
}

/// Reduced data `(w_i − x)/((1 − x̄w_i) z_i²)` of the two Schur steps at 0.
pub fn schur_reduce_constrained(d: &DataSet, x: Complex64) -> Result<DataSet> {
    schur_reduce(d, &BlaschkeSpec::z_squared(), x)
}

/// Targets `φ_x(w_i)/B(z_i)` of the classical problem for `g` in
/// `s = μ_x(B·g)`.
pub fn schur_reduce(d: &DataSet, b: &BlaschkeSpec, x: Complex64) -> Result<DataSet> {
    d.require_scalar()?;
    if !(x.norm() < 1.0) {
        return Err(Error::InvalidParameter(format!("reduction needs |x| < 1, got {x}")));
    }
    let mut values = Vec::with_capacity(d.n());
    for (&z, &w) in d.nodes().iter().zip(&d.scalar_values()) {
        let bz = b.eval(z);
        if bz.norm() <= POINT_EPS {
            return Err(Error::NodeAtBlaschkeZero);
        }
        let v = mobius_zero(x, w) / bz;
        if !(v.norm() < 1.0) {
            return Err(Error::Degenerate(format!(
                "reduced value {v} at node {z} is not in the open disk"
            )));
        }
        values.push(v);
    }
    DataSet::scalar(d.nodes(), &values)
}

/// Central solution of the classical problem by the Schur algorithm.
pub fn np_central_solve(reduced: &DataSet, tol: &ToleranceConfig) -> Result<SchurChain> {
    reduced.require_scalar()?;
    let v = is_psd(&build_pick_standard(reduced), tol)?;
    if v.min_eig <= tol.residual_tol * v.scale {
        return Err(Error::Degenerate(format!(
            "reduced Pick matrix is not positive definite (min eigenvalue {:.3e}); move x into the interior of its feasible set",
            v.min_eig
        )));
    }
    let mut nodes = reduced.nodes().to_vec();
    let mut vals = reduced.scalar_values();
    let mut steps = Vec::with_capacity(nodes.len());
    while !nodes.is_empty() {
        let (zeta, value) = (nodes.remove(0), vals.remove(0));
        if !(value.norm() < 1.0 - 1e-14) {
            return Err(Error::Degenerate(format!(
                "Schur step at {zeta} reached |v| = {}",
                value.norm()
            )));
        }
        for (z, w) in nodes.iter().zip(vals.iter_mut()) {
            *w = mobius_zero(value, *w) / mobius_zero(zeta, *z);
        }
        steps.push(SchurStep { zeta, value });
    }
    SchurChain::new(steps, Complex64::new(0.0, 0.0))
}

/// Prefix steps turning `g` into `μ_x(B·g)`.
fn blaschke_prefix(b: &BlaschkeSpec, x: Complex64) -> Vec<SchurStep> {
    let mut out = Vec::with_capacity(b.degree());
    for (&l, &r) in b.zeros().iter().zip(b.multiplicities()) {
        for _ in 0..r {
            let value = if out.is_empty() { x } else { Complex64::new(0.0, 0.0) };
            out.push(SchurStep { zeta: l, value });
        }
    }
    out
}

/// `s(z) = μ_x(z² · s₂(z))`.
pub fn assemble_constrained(chain: &SchurChain, x: Complex64) -> Result<SchurChain> {
    assemble(chain, &BlaschkeSpec::z_squared(), x)
}

/// `s = μ_x(B·g)`.
pub fn assemble(g: &SchurChain, b: &BlaschkeSpec, x: Complex64) -> Result<SchurChain> {
    let mut steps = blaschke_prefix(b, x);
    steps.extend_from_slice(&g.steps);
    SchurChain::new(steps, g.tail)
}

/// Reduce, solve centrally and assemble in one go.
pub fn construct(d: &DataSet, b: &BlaschkeSpec, x: Complex64, tol: &ToleranceConfig) -> Result<SchurChain> {
    let reduced = schur_reduce(d, b, x)?;
    assemble(&np_central_solve(&reduced, tol)?, b, x)
}

/// `j`-th derivative by the trapezoid rule for the Cauchy integral on a
/// circle of radius `min(0.1, (1 − |a|)/2)` with 256 nodes.
pub fn derivative_at(chain: &SchurChain, a: Complex64, order: usize) -> Result<Complex64> {
    if order > 4 {
        return Err(Error::InvalidParameter(format!("derivative order {order} > 4")));
    }
    if !(a.norm() < 1.0) {
        return Err(Error::OutsideDisk(a));
    }
    if order == 0 {
        return Ok(chain_eval(chain, a));
    }
    const NODES: usize = 256;
    let rho = (0.1f64).min((1.0 - a.norm()) / 2.0);
    let mut acc = Complex64::new(0.0, 0.0);
    for m in 0..NODES {
        let theta = 2.0 * PI * m as f64 / NODES as f64;
        let e = Complex64::from_polar(1.0, theta);
        acc += chain_eval(chain, a + e * rho) * Complex64::from_polar(1.0, -(order as f64) * theta);
    }
    let fact: f64 = (1..=order).map(|j| j as f64).product();
    Ok(acc * (fact / (NODES as f64 * rho.powi(order as i32))))
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyTol {
    /// Bound on `|s(z_i) − w_i|`.
    pub interpolation: f64,
    /// Bound on the derivative and value-equality residuals at zeros of `B`.
    pub class: f64,
    /// Allowed excess of the sampled sup-norm over 1.
    pub sup: f64,
}

impl Default for VerifyTol {
    fn default() -> Self {
        Self {
            interpolation: 1e-7,
            class: 1e-8,
            sup: 1e-6,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ResidualReport {
    /// `|s(z_i) − w_i|`
    pub interpolation: Vec<f64>,
    /// `(zero index, order j, |s^{(j)}(λ_i)|)` for `1 ≤ j < r_i`.
    pub derivatives: Vec<(usize, usize, f64)>,
    /// `|s(λ_i) − s(λ_1)|` for `i ≥ 2`.
    pub equality: Vec<f64>,
    /// Max of `|s|` over 4096 points of `|z| = 0.999`.
    pub sup_norm: f64,
    pub pass: bool,
}

impl ResidualReport {
    pub fn max_interpolation(&self) -> f64 {
        self.interpolation.iter().fold(0.0, |m: f64, v| m.max(*v))
    }

    pub fn max_class(&self) -> f64 {
        self.derivatives
            .iter()
            .map(|d| d.2)
            .chain(self.equality.iter().copied())
            .fold(0.0, f64::max)
    }
}

pub fn verify_interpolant(chain: &SchurChain, d: &DataSet, b: &BlaschkeSpec, tol: &VerifyTol) -> Result<ResidualReport> {
    d.require_scalar()?;
    let interpolation: Vec<f64> = d
        .nodes()
        .iter()
        .zip(d.scalar_values())
        .map(|(&z, w)| (chain_eval(chain, z) - w).norm())
        .collect();
    let mut derivatives = Vec::new();
    for (i, (&l, &r)) in b.zeros().iter().zip(b.multiplicities()).enumerate() {
        for j in 1..r.min(5) {
            derivatives.push((i, j, derivative_at(chain, l, j)?.norm()));
        }
    }
    let s0 = chain_eval(chain, b.zeros()[0]);
    let equality: Vec<f64> = b.zeros()[1..]
        .iter()
        .map(|&l| (chain_eval(chain, l) - s0).norm())
        .collect();
    let sup_norm = (0..4096)
        .map(|m| chain_eval(chain, Complex64::from_polar(0.999, 2.0 * PI * m as f64 / 4096.0)).norm())
        .fold(0.0, f64::max);
    let mut report = ResidualReport {
        interpolation,
        derivatives,
        equality,
        sup_norm,
        pass: false,
    };
    report.pass = report.max_interpolation() <= tol.interpolation
        && report.max_class() <= tol.class
        && sup_norm <= 1.0 + tol.sup;
    Ok(report)
}

/// Residuals `‖S(z_i) − W_i‖` and the sampled sup of `‖S‖` on `|z| = 0.999`
/// for a matrix function supplied as a closure.
pub fn verify_matrix_samples(d: &DataSet, s: impl Fn(Complex64) -> CMat, samples: usize) -> (Vec<f64>, f64) {
    let res = d
        .nodes()
        .iter()
        .zip(d.values())
        .map(|(&z, w)| crate::linalg::operator_norm(&(s(z) - w)))
        .collect();
    let sup = (0..samples)
        .map(|m| {
            let z = Complex64::from_polar(0.999, 2.0 * PI * m as f64 / samples as f64);
            crate::linalg::operator_norm(&s(z))
        })
        .fold(0.0, f64::max);
    (res, sup)
}

/// A feasible-by-construction instance.
#[derive(Debug, Clone)]
pub struct GeneratedInstance {
    pub data: DataSet,
    pub chain: SchurChain,
    pub x: Complex64,
}

fn random_disk(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> Complex64 {
    let r = rng.random_range(lo..hi);
    Complex64::from_polar(r, rng.random_range(0.0..2.0 * PI))
}

/// Random `s = μ_x(B·g)` with a short random chain `g`, sampled at `n`
/// separated nodes away from the zeros of `B`.
pub fn generate_feasible(seed: u64, n: usize, b: &BlaschkeSpec) -> Result<GeneratedInstance> {
    if n == 0 {
        return Err(Error::InvalidData("n must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x = random_disk(&mut rng, 0.0, 0.8);
    let m = rng.random_range(0..=2);
    let gsteps: Vec<SchurStep> = (0..m)
        .map(|_| SchurStep {
            zeta: random_disk(&mut rng, 0.0, 0.9),
            value: random_disk(&mut rng, 0.0, 0.8),
        })
        .collect();
    let g = SchurChain::new(gsteps, random_disk(&mut rng, 0.0, 0.8))?;
    let chain = assemble(&g, b, x)?;
    let mut nodes: Vec<Complex64> = Vec::with_capacity(n);
    while nodes.len() < n {
        let z = random_disk(&mut rng, 0.1, 0.9);
        let far_from = |p: &Complex64| (z - p).norm() > 0.05;
        if nodes.iter().all(far_from) && b.zeros().iter().all(far_from) {
            nodes.push(z);
        }
    }
    let values: Vec<Complex64> = nodes.iter().map(|&z| chain_eval(&chain, z)).collect();
    Ok(GeneratedInstance {
        data: DataSet::scalar(&nodes, &values)?,
        chain,
        x,
    })
}
