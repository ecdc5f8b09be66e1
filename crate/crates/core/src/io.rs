//! JSON input formats.
//!
//! Algebra: `{"dim": n, "basis": [names], "brackets": [{"i", "j", "coeffs"}]}`
//! with 0-based indices; omitted pairs bracket to zero.
//!
//! Representation: `{"algebra": {...}, "dimX": m, "matrices": [[[..]]]}`
//! with `matrices[k]` the row-major matrix of `ρ(e_k)`.
//!
//! A scalar is a string in the exact syntax (`"-1/2+3/4i"`), a JSON number,
//! or a `[re, im]` pair of either. Every error names the offending path.

use serde::Deserialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::lab::ProxyConfig;
use crate::lie::LieAlgebra;
use crate::numeric::{parse_exact, Exact, Matrix, Scalar};
use crate::representation::Representation;

/// Largest accepted algebra dimension.
pub const MAX_ALGEBRA_DIM: usize = 64;
/// Largest accepted module dimension.
pub const MAX_MODULE_DIM: usize = 1024;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAlgebra {
    dim: usize,
    basis: Vec<String>,
    #[serde(default)]
    brackets: Vec<RawBracket>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBracket {
    i: usize,
    j: usize,
    coeffs: Vec<Value>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRepresentation {
    algebra: RawAlgebra,
    #[serde(rename = "dimX")]
    dim_x: usize,
    matrices: Vec<Vec<Vec<Value>>>,
}

fn input(path: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Input { path: path.into(), message: message.into() }
}

fn structured<'de, T: Deserialize<'de>>(text: &'de str) -> Result<T> {
    let mut de = serde_json::Deserializer::from_str(text);
    let value = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        input(if path == "." { "$".to_string() } else { format!("$.{path}") }, e.inner().to_string())
    })?;
    de.end().map_err(|e| input("$", e.to_string()))?;
    Ok(value)
}

/// One scalar literal.
pub fn scalar_from_json(value: &Value, path: &str) -> Result<Exact> {
    let part = |v: &Value, p: &str| -> Result<Exact> {
        match v {
            Value::String(s) => parse_exact(s).map_err(|e| input(p, e.to_string())),
            Value::Number(n) => parse_exact(&n.to_string()).map_err(|e| input(p, e.to_string())),
            _ => Err(input(p, "expected a string or a number")),
        }
    };
    match value {
        Value::Array(pair) if pair.len() == 2 => {
            let re = part(&pair[0], &format!("{path}[0]"))?;
            let im = part(&pair[1], &format!("{path}[1]"))?;
            if !num_traits::Zero::is_zero(&re.im) || !num_traits::Zero::is_zero(&im.im) {
                return Err(input(path, "components of a [re, im] pair must be real"));
            }
            Ok(Exact::new(re.re, im.re))
        }
        Value::Array(_) => Err(input(path, "a scalar pair must have exactly two entries")),
        other => part(other, path),
    }
}

fn algebra_from_raw(raw: RawAlgebra, prefix: &str) -> Result<LieAlgebra> {
    let n = raw.dim;
    if n > MAX_ALGEBRA_DIM {
        return Err(input(format!("{prefix}.dim"), format!("dimension {n} exceeds {MAX_ALGEBRA_DIM}")));
    }
    if raw.basis.len() != n {
        return Err(input(format!("{prefix}.basis"), format!("expected {n} names, got {}", raw.basis.len())));
    }
    for (k, name) in raw.basis.iter().enumerate() {
        if name.is_empty() || raw.basis[..k].contains(name) {
            return Err(input(format!("{prefix}.basis[{k}]"), "names must be nonempty and distinct"));
        }
    }
    let mut seen = std::collections::HashSet::new();
    let mut brackets = Vec::with_capacity(raw.brackets.len());
    for (k, b) in raw.brackets.into_iter().enumerate() {
        let here = format!("{prefix}.brackets[{k}]");
        if b.i >= n || b.j >= n {
            return Err(input(&here, format!("index out of range for dimension {n}")));
        }
        if b.i == b.j {
            return Err(input(&here, "i and j must differ"));
        }
        if !seen.insert((b.i.min(b.j), b.i.max(b.j))) {
            return Err(input(&here, "pair listed twice"));
        }
        if b.coeffs.len() != n {
            return Err(input(format!("{here}.coeffs"), format!("expected {n} coefficients, got {}", b.coeffs.len())));
        }
        let coeffs = b
            .coeffs
            .iter()
            .enumerate()
            .map(|(c, v)| scalar_from_json(v, &format!("{here}.coeffs[{c}]")))
            .collect::<Result<Vec<_>>>()?;
        brackets.push((b.i, b.j, coeffs));
    }
    LieAlgebra::from_brackets(raw.basis, &brackets).map_err(|e| input(prefix, e.to_string()))
}

/// Parses an algebra document. Does not check the Jacobi identity.
pub fn parse_algebra(text: &str) -> Result<LieAlgebra> {
    algebra_from_raw(structured(text)?, "$")
}

/// Parses a representation document. Does not check the homomorphism law.
pub fn parse_representation(text: &str) -> Result<Representation<Exact>> {
    let raw: RawRepresentation = structured(text)?;
    let algebra = algebra_from_raw(raw.algebra, "$.algebra")?;
    let (n, m) = (algebra.dim(), raw.dim_x);
    if m > MAX_MODULE_DIM {
        return Err(input("$.dimX", format!("dimension {m} exceeds {MAX_MODULE_DIM}")));
    }
    if raw.matrices.len() != n {
        return Err(input("$.matrices", format!("expected {n} matrices, got {}", raw.matrices.len())));
    }
    let mut mats = Vec::with_capacity(n);
    for (k, rows) in raw.matrices.iter().enumerate() {
        if rows.len() != m {
            return Err(input(format!("$.matrices[{k}]"), format!("expected {m} rows, got {}", rows.len())));
        }
        let mut parsed = Vec::with_capacity(m);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != m {
                return Err(input(format!("$.matrices[{k}][{r}]"), format!("expected {m} entries, got {}", row.len())));
            }
            parsed.push(
                row.iter()
                    .enumerate()
                    .map(|(c, v)| scalar_from_json(v, &format!("$.matrices[{k}][{r}][{c}]")))
                    .collect::<Result<Vec<_>>>()?,
            );
        }
        mats.push(Matrix::from_rows(parsed).map_err(|e| input(format!("$.matrices[{k}]"), e.to_string()))?);
    }
    Representation::new(algebra, m, mats)
}

/// Parses a `lab proxy` configuration.
pub fn parse_proxy_config(text: &str) -> Result<ProxyConfig> {
    let config: ProxyConfig = structured(text)?;
    if config.schedule.is_empty() {
        return Err(input("$.schedule", "schedule must not be empty"));
    }
    if let Some(k) = config.schedule.iter().position(|&m| m > MAX_MODULE_DIM) {
        return Err(input(format!("$.schedule[{k}]"), format!("dimension exceeds {MAX_MODULE_DIM}")));
    }
    Ok(config)
}

/// Document form of an algebra; inverse of [`parse_algebra`].
pub fn algebra_to_json(algebra: &LieAlgebra) -> Value {
    let brackets: Vec<Value> = algebra
        .nonzero_brackets()
        .into_iter()
        .map(|(i, j, c)| serde_json::json!({"i": i, "j": j, "coeffs": c.iter().map(Scalar::text).collect::<Vec<_>>()}))
        .collect();
    serde_json::json!({"dim": algebra.dim(), "basis": algebra.names(), "brackets": brackets})
}

/// Document form of an exact representation; inverse of [`parse_representation`].
pub fn representation_to_json(rep: &Representation<Exact>) -> Value {
    let matrices: Vec<Vec<Vec<String>>> = rep
        .matrices()
        .iter()
        .map(|a| (0..a.rows()).map(|r| a.row(r).iter().map(Scalar::text).collect()).collect())
        .collect();
    serde_json::json!({"algebra": algebra_to_json(rep.algebra()), "dimX": rep.dim(), "matrices": matrices})
}
