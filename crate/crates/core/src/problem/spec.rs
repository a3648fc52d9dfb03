//! Network description file: loading, validation and saving.
//!
//! All per-node arrays are node-major: `field[i][j]` is node `i`, type `j`.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::space::Bounds;

fn default_alpha_low() -> f64 {
    1.0
}

fn default_alpha_high() -> f64 {
    0.5
}

fn default_penalty_weights() -> [f64; 3] {
    [1.0, 1.0, 1.0]
}

/// Static description of an entanglement-allocation instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkSpec {
    /// Node count N.
    pub nodes: usize,
    /// Fidelity-type count T.
    pub types: usize,
    /// Received fidelity per node and type, each in `[0, 1]`.
    pub fidelities: Vec<Vec<f64>>,
    /// Critical fidelity separating the low and high node classes.
    pub f_star: f64,
    /// Quadratic regression coefficients of the fidelity surrogate, `N x T x T`.
    pub a: Vec<Vec<Vec<f64>>>,
    /// Linear regression coefficients of the fidelity surrogate, `N x T`.
    pub r: Vec<Vec<f64>>,
    /// Constant term of the fidelity surrogate, per node.
    pub c: Vec<f64>,
    /// Relative-entropy surrogate coefficients, same shapes as `a`, `r`, `c`.
    pub a_star: Vec<Vec<Vec<f64>>>,
    pub r_star: Vec<Vec<f64>>,
    pub c_star: Vec<f64>,
    /// Initialization throughput added to the decision variable, `N x T`.
    pub init_throughput: Vec<Vec<f64>>,
    /// Unit purification + correction cost per type.
    pub f_costs: Vec<f64>,
    /// Memory coefficients per type.
    pub eta: Vec<f64>,
    pub kappa: Vec<f64>,
    /// Scale of the memory-usage cost.
    pub lambda_mem: f64,
    /// Memory capacity per node, strictly positive.
    pub upsilon: Vec<f64>,
    /// Explicit per-node quality coefficients; when absent they follow the
    /// node class (`alpha_low` / `alpha_high`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Vec<f64>>,
    #[serde(default = "default_alpha_low")]
    pub alpha_low: f64,
    #[serde(default = "default_alpha_high")]
    pub alpha_high: f64,
    /// Throughput box, `N x T` each.
    pub b_low: Vec<Vec<f64>>,
    pub b_up: Vec<Vec<f64>>,
    /// Lower bound on the summed fidelity surrogate.
    pub gamma: f64,
    /// Upper bound on the total purification/correction cost.
    pub lambda_bound: f64,
    /// Upper bound on the storage dispersion.
    pub pi_bound: f64,
    #[serde(default = "default_penalty_weights")]
    pub penalty_weights: [f64; 3],
}

impl NetworkSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        let spec: NetworkSpec =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("spec is always serializable");
        text.push('\n');
        text
    }

    /// Number of decision variables, `N * T`.
    pub fn dim(&self) -> usize {
        self.nodes * self.types
    }

    /// Flattened search box, node-major.
    pub fn bounds(&self) -> Bounds {
        Bounds {
            low: self.b_low.iter().flatten().copied().collect(),
            up: self.b_up.iter().flatten().copied().collect(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let (n, t) = (self.nodes, self.types);
        if n == 0 {
            return Err(Error::validation("nodes", "must be positive"));
        }
        if t == 0 {
            return Err(Error::validation("types", "must be positive"));
        }

        check_matrix("fidelities", &self.fidelities, n, t, |v| (0.0..=1.0).contains(&v), "must lie in [0, 1]")?;
        if !(self.f_star > 0.0 && self.f_star <= 1.0) {
            return Err(Error::validation("f_star", format!("{} not in (0, 1]", self.f_star)));
        }

        check_cube("a", &self.a, n, t)?;
        check_matrix("r", &self.r, n, t, f64::is_finite, "must be finite")?;
        check_vector("c", &self.c, n, f64::is_finite, "must be finite")?;
        check_cube("a_star", &self.a_star, n, t)?;
        check_matrix("r_star", &self.r_star, n, t, f64::is_finite, "must be finite")?;
        check_vector("c_star", &self.c_star, n, f64::is_finite, "must be finite")?;

        let nonneg = |v: f64| v.is_finite() && v >= 0.0;
        check_matrix("init_throughput", &self.init_throughput, n, t, nonneg, "must be finite and >= 0")?;
        check_vector("f_costs", &self.f_costs, t, nonneg, "must be finite and >= 0")?;
        check_vector("eta", &self.eta, t, f64::is_finite, "must be finite")?;
        check_vector("kappa", &self.kappa, t, f64::is_finite, "must be finite")?;
        if !self.lambda_mem.is_finite() {
            return Err(Error::validation("lambda_mem", "must be finite"));
        }
        check_vector("upsilon", &self.upsilon, n, |v| v.is_finite() && v > 0.0, "must be > 0")?;
        if let Some(alpha) = &self.alpha {
            check_vector("alpha", alpha, n, nonneg, "must be finite and >= 0")?;
        }
        for (name, v) in [("alpha_low", self.alpha_low), ("alpha_high", self.alpha_high)] {
            if !nonneg(v) {
                return Err(Error::validation(name, "must be finite and >= 0"));
            }
        }

        check_matrix("b_low", &self.b_low, n, t, nonneg, "must be finite and >= 0")?;
        check_matrix("b_up", &self.b_up, n, t, f64::is_finite, "must be finite")?;
        for i in 0..n {
            for j in 0..t {
                if self.b_up[i][j] <= self.b_low[i][j] {
                    return Err(Error::validation(
                        format!("b_up[{i}][{j}]"),
                        format!("{} must exceed b_low {}", self.b_up[i][j], self.b_low[i][j]),
                    ));
                }
            }
        }

        for (name, v) in [
            ("gamma", self.gamma),
            ("lambda_bound", self.lambda_bound),
            ("pi_bound", self.pi_bound),
        ] {
            if !v.is_finite() {
                return Err(Error::validation(name, "must be finite"));
            }
        }
        for (z, w) in self.penalty_weights.iter().enumerate() {
            if !nonneg(*w) {
                return Err(Error::validation(format!("penalty_weights[{z}]"), "must be finite and >= 0"));
            }
        }
        Ok(())
    }
}

fn check_vector(
    name: &str,
    v: &[f64],
    len: usize,
    ok: impl Fn(f64) -> bool,
    why: &str,
) -> Result<()> {
    if v.len() != len {
        return Err(Error::validation(name, format!("expected length {len}, found {}", v.len())));
    }
    for (i, x) in v.iter().enumerate() {
        if !ok(*x) {
            return Err(Error::validation(format!("{name}[{i}]"), format!("{x} {why}")));
        }
    }
    Ok(())
}

fn check_matrix(
    name: &str,
    m: &[Vec<f64>],
    rows: usize,
    cols: usize,
    ok: impl Fn(f64) -> bool,
    why: &str,
) -> Result<()> {
    if m.len() != rows {
        return Err(Error::validation(name, format!("expected {rows} rows, found {}", m.len())));
    }
    for (i, row) in m.iter().enumerate() {
        if row.len() != cols {
            return Err(Error::validation(
                format!("{name}[{i}]"),
                format!("expected {cols} entries, found {}", row.len()),
            ));
        }
        for (j, x) in row.iter().enumerate() {
            if !ok(*x) {
                return Err(Error::validation(format!("{name}[{i}][{j}]"), format!("{x} {why}")));
            }
        }
    }
    Ok(())
}

fn check_cube(name: &str, cube: &[Vec<Vec<f64>>], n: usize, t: usize) -> Result<()> {
    if cube.len() != n {
        return Err(Error::validation(name, format!("expected {n} slices, found {}", cube.len())));
    }
    for (i, m) in cube.iter().enumerate() {
        check_matrix(&format!("{name}[{i}]"), m, t, t, f64::is_finite, "must be finite")?;
    }
    Ok(())
}

/// Reads and validates a network spec file.
pub fn load_network_spec(path: impl AsRef<Path>) -> Result<NetworkSpec> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    NetworkSpec::from_json(&text)
}

pub fn save_network_spec(spec: &NetworkSpec, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, spec.to_json()).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn minimal_spec_parses() {
        let spec = NetworkSpec::from_json(&minimal().to_json()).unwrap();
        assert_eq!(spec.c, vec![0.0]);
        assert_eq!(spec.dim(), 1);
    }

    #[test]
    fn fidelity_out_of_range_names_field() {
        let mut spec = minimal();
        spec.fidelities[0][0] = 1.2;
        let err = NetworkSpec::from_json(&spec.to_json()).unwrap_err();
        match err {
            Error::Validation { field, .. } => assert_eq!(field, "fidelities[0][0]"),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn shape_mismatch_names_field() {
        let mut spec = zeros(2, 2);
        spec.a[1].pop();
        let err = spec.validate().unwrap_err();
        assert!(err.to_string().contains("a[1]"), "{err}");
    }

    #[test]
    fn collapsed_bounds_rejected() {
        let mut spec = minimal();
        spec.b_up[0][0] = 0.0;
        let err = spec.validate().unwrap_err();
        assert!(err.to_string().contains("b_up[0][0]"), "{err}");
    }

    #[test]
    fn nonpositive_capacity_rejected() {
        let mut spec = minimal();
        spec.upsilon[0] = 0.0;
        assert!(spec.validate().unwrap_err().to_string().contains("upsilon[0]"));
    }

    #[test]
    fn malformed_json_is_parse_error() {
        assert!(matches!(NetworkSpec::from_json("{ nodes: "), Err(Error::Parse(_))));
        let missing = r#"{"nodes": 1}"#;
        let err = NetworkSpec::from_json(missing).unwrap_err();
        assert!(err.to_string().contains("types"), "{err}");
    }

    #[test]
    fn defaults_fill_optional_fields() {
        let mut value: serde_json::Value = serde_json::from_str(&minimal().to_json()).unwrap();
        let obj = value.as_object_mut().unwrap();
        obj.remove("alpha_low");
        obj.remove("alpha_high");
        obj.remove("penalty_weights");
        let spec = NetworkSpec::from_json(&value.to_string()).unwrap();
        assert_eq!(spec.alpha_low, 1.0);
        assert_eq!(spec.alpha_high, 0.5);
        assert_eq!(spec.penalty_weights, [1.0; 3]);
    }
}
