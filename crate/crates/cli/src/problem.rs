//! Problem files: JSON with complex numbers as `[re, im]` and matrices as
//! row-major nested arrays.

use cnp_core::linalg::CMat;
use cnp_core::{BlaschkeSpec, Complex64, DataSet, ToleranceConfig};
use serde::{Deserialize, Serialize};

use crate::CliError;

pub type Pair = [f64; 2];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlaschkeFile {
    pub zeros: Vec<Pair>,
    pub multiplicities: Vec<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TolerancesFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psd_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual_tol: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub k: usize,
    pub nodes: Vec<Pair>,
    /// One `k × k` matrix per node, rows of `[re, im]` entries.
    pub values: Vec<Vec<Vec<Pair>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blaschke: Option<BlaschkeFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<TolerancesFile>,
}

/// A validated problem.
#[derive(Debug, Clone)]
pub struct Problem {
    pub data: DataSet,
    pub blaschke: BlaschkeSpec,
    pub tolerances: ToleranceConfig,
}

pub fn complex(p: Pair) -> Complex64 {
    Complex64::new(p[0], p[1])
}

pub fn pair(z: Complex64) -> Pair {
    [z.re, z.im]
}

pub fn matrix_rows(m: &CMat) -> Vec<Vec<Pair>> {
    (0..m.nrows())
        .map(|r| (0..m.ncols()).map(|c| pair(m[(r, c)])).collect())
        .collect()
}

fn invalid(path: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Parse(format!("{path}: {msg}"))
}

impl ProblemFile {
    /// Parses JSON; syntax and type errors carry line and column.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Parse(format!("problem file: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("problem serializes")
    }

    pub fn from_data(d: &DataSet, b: Option<&BlaschkeSpec>) -> Self {
        Self {
            k: d.k(),
            nodes: d.nodes().iter().map(|&z| pair(z)).collect(),
            values: d.values().iter().map(matrix_rows).collect(),
            blaschke: b.map(|b| BlaschkeFile {
                zeros: b.zeros().iter().map(|&z| pair(z)).collect(),
                multiplicities: b.multiplicities().to_vec(),
            }),
            tolerances: None,
        }
    }

    /// Validates shapes and the data invariants. Errors name the JSON path.
    pub fn validate(&self) -> Result<Problem, CliError> {
        if self.k == 0 {
            return Err(invalid("k", "must be at least 1"));
        }
        if self.nodes.len() != self.values.len() {
            return Err(invalid(
                "values",
                format!("{} entries for {} nodes", self.values.len(), self.nodes.len()),
            ));
        }
        let mut values = Vec::with_capacity(self.values.len());
        for (i, m) in self.values.iter().enumerate() {
            if m.len() != self.k {
                return Err(invalid(&format!("values[{i}]"), format!("{} rows, expected {}", m.len(), self.k)));
            }
            for (r, row) in m.iter().enumerate() {
                if row.len() != self.k {
                    return Err(invalid(
                        &format!("values[{i}][{r}]"),
                        format!("{} entries, expected {}", row.len(), self.k),
                    ));
                }
            }
            values.push(CMat::from_fn(self.k, self.k, |r, c| complex(m[r][c])));
        }
        let nodes: Vec<Complex64> = self.nodes.iter().map(|&p| complex(p)).collect();
        let data = DataSet::new(nodes, values).map_err(|e| invalid("nodes/values", e))?;
        let blaschke = match &self.blaschke {
            None => BlaschkeSpec::z_squared(),
            Some(b) => BlaschkeSpec::new(b.zeros.iter().map(|&p| complex(p)).collect(), b.multiplicities.clone())
                .map_err(|e| invalid("blaschke", e))?,
        };
        let mut tolerances = ToleranceConfig::default();
        if let Some(t) = &self.tolerances {
            tolerances = ToleranceConfig::new(
                t.psd_tol.unwrap_or(tolerances.psd_tol),
                t.residual_tol.unwrap_or(tolerances.residual_tol),
            )
            .map_err(|e| invalid("tolerances", e))?;
        }
        Ok(Problem {
            data,
            blaschke,
            tolerances,
        })
    }
}

/// Parses `re,im` (or a bare real number).
pub fn parse_complex(s: &str) -> Result<Complex64, CliError> {
    let bad = || CliError::Parse(format!("expected a complex number as re,im, got {s:?}"));
    let mut parts = s.split(',').map(str::trim);
    let re: f64 = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
    let im: f64 = match parts.next() {
        Some(p) => p.parse().map_err(|_| bad())?,
        None => 0.0,
    };
    if parts.next().is_some() || !re.is_finite() || !im.is_finite() {
        return Err(bad());
    }
    Ok(Complex64::new(re, im))
}

/// Applies `CNP_TOL` and then an explicit flag to the file tolerances.
pub fn resolve_tolerances(
    base: ToleranceConfig,
    env: Option<&str>,
    flag: Option<f64>,
) -> Result<ToleranceConfig, CliError> {
    let mut t = base;
    if let Some(v) = env {
        let psd: f64 = v
            .trim()
            .parse()
            .map_err(|_| CliError::Parse(format!("CNP_TOL: not a number: {v:?}")))?;
        t = ToleranceConfig::new(psd, t.residual_tol).map_err(|e| CliError::Parse(format!("CNP_TOL: {e}")))?;
    }
    if let Some(psd) = flag {
        t = ToleranceConfig::new(psd, t.residual_tol).map_err(|e| CliError::Parse(format!("--tol: {e}")))?;
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    const ONE_POINT: &str = r#"{"k": 1, "nodes": [[0.5, 0.0]], "values": [[[[0.5, 0.0]]]]}"#;

    #[test]
    fn parses_and_defaults_to_z_squared() {
        let p = ProblemFile::parse(ONE_POINT).unwrap().validate().unwrap();
        assert!(p.blaschke.is_z_squared());
        assert_eq!(p.data.n(), 1);
        assert_eq!(p.tolerances, ToleranceConfig::default());
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let err = ProblemFile::parse("{\"k\": 1,\n \"nodes\": [[0.5]],\n}").unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
        let err = ProblemFile::parse(r#"{"k": 1, "nodes": [], "values": [], "extra": 1}"#).unwrap_err();
        assert!(err.to_string().contains("extra"), "{err}");
    }

    #[test]
    fn semantic_errors_name_the_path() {
        let f = ProblemFile::parse(r#"{"k": 2, "nodes": [[0.5, 0.0]], "values": [[[[0.1, 0.0]]]]}"#).unwrap();
        assert!(f.validate().unwrap_err().to_string().contains("values[0]"));
        let f = ProblemFile::parse(r#"{"k": 1, "nodes": [[1.5, 0.0]], "values": [[[[0.1, 0.0]]]]}"#).unwrap();
        assert!(f.validate().unwrap_err().to_string().contains("open unit disk"));
        let f = ProblemFile::parse(
            r#"{"k": 1, "nodes": [[0.5, 0.0]], "values": [[[[0.1, 0.0]]]], "blaschke": {"zeros": [[0.1, 0.0]], "multiplicities": [0]}}"#,
        )
        .unwrap();
        assert!(f.validate().unwrap_err().to_string().contains("blaschke"));
    }

    #[test]
    fn complex_flags() {
        assert_eq!(parse_complex("0.3,-0.2").unwrap(), Complex64::new(0.3, -0.2));
        assert_eq!(parse_complex("0.3").unwrap(), Complex64::new(0.3, 0.0));
        assert!(parse_complex("a,b").is_err());
        assert!(parse_complex("1,2,3").is_err());
    }

    #[test]
    fn tolerance_precedence() {
        let base = ToleranceConfig::default();
        assert_eq!(resolve_tolerances(base, Some("1e-6"), None).unwrap().psd_tol, 1e-6);
        assert_eq!(resolve_tolerances(base, Some("1e-6"), Some(1e-4)).unwrap().psd_tol, 1e-4);
        assert!(resolve_tolerances(base, Some("x"), None).is_err());
        assert!(resolve_tolerances(base, None, Some(-1.0)).is_err());
    }
}
