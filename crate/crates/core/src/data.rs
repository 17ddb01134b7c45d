//! Interpolation data and the Blaschke product defining the constraint.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::CMat;

/// Minimum separation below which two points count as equal.
pub const POINT_EPS: f64 = 1e-12;

/// Nodes `z_i` in the open disk with `k × k` target values `W_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct DataSet {
    nodes: Vec<Complex64>,
    values: Vec<CMat>,
    k: usize,
}

impl DataSet {
    pub fn new(nodes: Vec<Complex64>, values: Vec<CMat>) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::InvalidData("at least one node is required".into()));
        }
        if nodes.len() != values.len() {
            return Err(Error::InvalidData(format!(
                "{} nodes but {} values",
                nodes.len(),
                values.len()
            )));
        }
        let k = values[0].nrows();
        if k == 0 {
            return Err(Error::InvalidData("values must be at least 1x1".into()));
        }
        for (i, w) in values.iter().enumerate() {
            if w.shape() != (k, k) {
                return Err(Error::InvalidData(format!(
                    "value {i} has shape {}x{}, expected {k}x{k}",
                    w.nrows(),
                    w.ncols()
                )));
            }
            if w.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(Error::InvalidData(format!("value {i} is not finite")));
            }
        }
        for (i, z) in nodes.iter().enumerate() {
            if !(z.norm() < 1.0) {
                return Err(Error::InvalidData(format!(
                    "node {i} = {z} is not in the open unit disk"
                )));
            }
            for (j, zj) in nodes.iter().enumerate().take(i) {
                if (z - zj).norm() <= POINT_EPS {
                    return Err(Error::InvalidData(format!(
                        "nodes {j} and {i} coincide ({z})"
                    )));
                }
            }
        }
        Ok(Self { nodes, values, k })
    }

    /// Scalar (`k = 1`) data set.
    pub fn scalar(nodes: &[Complex64], values: &[Complex64]) -> Result<Self> {
        Self::new(
            nodes.to_vec(),
            values.iter().map(|&w| CMat::from_element(1, 1, w)).collect(),
        )
    }

    pub fn n(&self) -> usize {
        self.nodes.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn nodes(&self) -> &[Complex64] {
        &self.nodes
    }

    pub fn values(&self) -> &[CMat] {
        &self.values
    }

    pub fn is_scalar(&self) -> bool {
        self.k == 1
    }

    /// Scalar values; only meaningful when `k = 1`.
    pub fn scalar_values(&self) -> Vec<Complex64> {
        self.values.iter().map(|w| w[(0, 0)]).collect()
    }

    pub(crate) fn require_scalar(&self) -> Result<()> {
        if self.k != 1 {
            return Err(Error::Dimension(format!(
                "operation needs scalar data, got k = {}",
                self.k
            )));
        }
        Ok(())
    }

    /// Data with the listed indices removed (may be empty).
    pub(crate) fn without(&self, drop: &[usize]) -> (Vec<Complex64>, Vec<CMat>) {
        let keep = |i: &usize| !drop.contains(i);
        (
            (0..self.n()).filter(keep).map(|i| self.nodes[i]).collect(),
            (0..self.n())
                .filter(keep)
                .map(|i| self.values[i].clone())
                .collect(),
        )
    }
}

/// Finite Blaschke product `∏ ((z − λ_i)/(1 − λ̄_i z))^{r_i}`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlaschkeSpec {
    zeros: Vec<Complex64>,
    multiplicities: Vec<usize>,
}

impl BlaschkeSpec {
    pub fn new(zeros: Vec<Complex64>, multiplicities: Vec<usize>) -> Result<Self> {
        if zeros.is_empty() {
            return Err(Error::InvalidBlaschke("at least one zero is required".into()));
        }
        if zeros.len() != multiplicities.len() {
            return Err(Error::InvalidBlaschke(format!(
                "{} zeros but {} multiplicities",
                zeros.len(),
                multiplicities.len()
            )));
        }
        for (i, (z, &r)) in zeros.iter().zip(&multiplicities).enumerate() {
            if !(z.norm() < 1.0) {
                return Err(Error::InvalidBlaschke(format!(
                    "zero {i} = {z} is not in the open unit disk"
                )));
            }
            if r == 0 {
                return Err(Error::InvalidBlaschke(format!("zero {i} has multiplicity 0")));
            }
            for (j, zj) in zeros.iter().enumerate().take(i) {
                if (z - zj).norm() <= POINT_EPS {
                    return Err(Error::InvalidBlaschke(format!(
                        "zeros {j} and {i} coincide; merge them into one multiplicity"
                    )));
                }
            }
        }
        Ok(Self {
            zeros,
            multiplicities,
        })
    }

    /// `B(z) = z²`, the algebra of functions with `f'(0) = 0`.
    pub fn z_squared() -> Self {
        Self {
            zeros: vec![Complex64::new(0.0, 0.0)],
            multiplicities: vec![2],
        }
    }

    pub fn zeros(&self) -> &[Complex64] {
        &self.zeros
    }

    pub fn multiplicities(&self) -> &[usize] {
        &self.multiplicities
    }

    pub fn m(&self) -> usize {
        self.zeros.len()
    }

    /// Total degree `d = Σ r_i`.
    pub fn degree(&self) -> usize {
        self.multiplicities.iter().sum()
    }

    pub fn is_z_squared(&self) -> bool {
        self.zeros.len() == 1 && self.zeros[0].norm() == 0.0 && self.multiplicities[0] == 2
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.zeros
            .iter()
            .zip(&self.multiplicities)
            .fold(Complex64::new(1.0, 0.0), |acc, (l, &r)| {
                acc * mobius_zero(*l, z).powu(r as u32)
            })
    }
}

/// Disk automorphism `(z − a)/(1 − ā z)` vanishing at `a`.
pub fn mobius_zero(a: Complex64, z: Complex64) -> Complex64 {
    (z - a) / (Complex64::new(1.0, 0.0) - a.conj() * z)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn data_validation() {
        assert!(DataSet::scalar(&[c(0.5, 0.0)], &[c(0.5, 0.0)]).is_ok());
        assert!(DataSet::scalar(&[], &[]).is_err());
        assert!(DataSet::scalar(&[c(1.0, 0.0)], &[c(0.0, 0.0)]).is_err());
        assert!(DataSet::scalar(&[c(0.2, 0.0), c(0.2, 0.0)], &[c(0.0, 0.0); 2]).is_err());
        assert!(DataSet::scalar(&[c(0.2, 0.0)], &[c(0.0, 0.0); 2]).is_err());
        let bad = DataSet::new(
            vec![c(0.1, 0.0), c(0.2, 0.0)],
            vec![CMat::zeros(2, 2), CMat::zeros(1, 1)],
        );
        assert!(bad.is_err());
    }

    #[test]
    fn blaschke_validation_and_eval() {
        let b = BlaschkeSpec::z_squared();
        assert_eq!(b.degree(), 2);
        assert!(b.is_z_squared());
        assert!((b.eval(c(0.3, 0.4)) - c(0.3, 0.4).powu(2)).norm() < 1e-15);
        assert!(BlaschkeSpec::new(vec![c(0.0, 1.0)], vec![1]).is_err());
        assert!(BlaschkeSpec::new(vec![c(0.0, 0.1)], vec![0]).is_err());
        assert!(BlaschkeSpec::new(vec![c(0.1, 0.0), c(0.1, 0.0)], vec![1, 1]).is_err());
        let b = BlaschkeSpec::new(vec![c(0.5, 0.0)], vec![1]).unwrap();
        assert!(b.eval(c(0.5, 0.0)).norm() < 1e-16);
        assert!((b.eval(c(0.0, 1.0)).norm() - 1.0).abs() < 1e-15);
    }
}
