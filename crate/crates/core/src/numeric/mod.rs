//! Scalar and dense-matrix kernel shared by every other module.
//!
//! Two interchangeable backends implement [`Scalar`]:
//!
//! * [`Exact`]: Gaussian rationals `a/b + (c/d)i` over arbitrary-precision
//!   integers. Arithmetic never rounds, so rank and nullity are exact.
//! * [`Float`]: double-precision complex numbers. Every comparison against
//!   zero goes through a [`Tolerances`] value.
//!
//! Library code is written once, generically over `T: Scalar`, and the caller
//! picks the backend by choosing the type parameter.

mod exact;
mod float;
mod matrix;

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::Result;

pub use exact::{characteristic_polynomial, parse_exact, rank_fraction_free};
pub use matrix::{intersect_subspaces, Echelon, Matrix};
pub(crate) use matrix::echelon_basis;

/// Gaussian rational.
pub type Exact = Complex<BigRational>;
/// Double-precision complex.
pub type Float = Complex64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Exact,
    Float,
}

impl std::fmt::Display for Backend {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Backend::Exact => f.write_str("exact"),
            Backend::Float => f.write_str("float"),
        }
    }
}

impl std::str::FromStr for Backend {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "exact" => Ok(Backend::Exact),
            "float" => Ok(Backend::Float),
            other => Err(format!("unknown backend `{other}` (expected exact|float)")),
        }
    }
}

/// Thresholds used by the float backend. The exact backend ignores them.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    /// Relative pivot threshold: a pivot counts when its magnitude exceeds
    /// `rank` times the largest entry of the matrix.
    pub rank: f64,
    /// Absolute eigenvalue merge radius after scaling the matrix to unit
    /// max-norm.
    pub eigen: f64,
    /// Infinity-norm radius under which two characters are the same point.
    pub dedup: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { rank: 1e-9, eigen: 1e-6, dedup: 1e-6 }
    }
}

/// Numeric policy threaded through the higher-level computations.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Settings {
    pub tol: Tolerances,
    /// Largest admissible dimension of any `X ⊗ Λ^p L`.
    pub dimension_cap: usize,
}

impl Default for Settings {
    fn default() -> Self {
        Settings { tol: Tolerances::default(), dimension_cap: 100_000 }
    }
}

/// A complex scalar of one of the two backends.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const BACKEND: Backend;
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    /// Conversion from a parsed literal. Lossy for the float backend.
    fn from_exact(v: &Exact) -> Self;
    fn to_complex64(&self) -> Complex64;

    fn is_zero(&self) -> bool;
    /// Modulus, approximated in `f64` for the exact backend.
    fn magnitude(&self) -> f64;
    /// Preference for choosing a pivot; ties go to the earliest row.
    fn pivot_score(&self) -> f64;
    /// `self -= a * b`.
    fn mul_sub_assign(&mut self, a: &Self, b: &Self);
    /// `self += a * b`.
    fn mul_add_assign(&mut self, a: &Self, b: &Self);

    /// Textual form, e.g. `-1/2+3/4i` for exact values.
    fn text(&self) -> String;
    fn to_json(&self) -> serde_json::Value;

    /// Equality up to `tol` (exact backend: literal equality).
    fn approx_eq(&self, other: &Self, tol: f64) -> bool;

    fn matrix_rank(m: &Matrix<Self>, tol: &Tolerances) -> usize;
    /// Eigenvalues with algebraic multiplicity.
    fn matrix_eigenvalues(m: &Matrix<Self>, tol: &Tolerances) -> Result<Vec<Self>>;

    /// Basis of the null space, with smallness judged against
    /// `tol.rank · max(scale, max|m|)`.
    fn matrix_kernel(m: &Matrix<Self>, tol: &Tolerances, scale: f64) -> Vec<Vec<Self>> {
        m.nullspace_at_scale(tol, scale)
    }

    /// Unit right singular vector for the least singular value, where the
    /// backend has one.
    fn least_singular_vector(_m: &Matrix<Self>) -> Option<Vec<Self>> {
        None
    }

    /// `true` when `self` must be treated as zero under the elimination
    /// threshold `threshold`.
    fn negligible(&self, threshold: f64) -> bool {
        if Self::EXACT {
            self.is_zero()
        } else {
            self.magnitude() <= threshold
        }
    }
}

/// Removes duplicates (under [`Scalar::approx_eq`]) keeping first occurrences.
pub fn distinct<T: Scalar>(values: &[T], tol: f64) -> Vec<T> {
    let mut out: Vec<T> = Vec::new();
    for v in values {
        if !out.iter().any(|u| u.approx_eq(v, tol)) {
            out.push(v.clone());
        }
    }
    out
}

/// Componentwise approximate equality of two coefficient vectors.
pub fn vectors_approx_eq<T: Scalar>(a: &[T], b: &[T], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.approx_eq(y, tol))
}

/// Joins coefficient texts with commas; used as a stable key for characters.
pub fn vector_text<T: Scalar>(v: &[T]) -> String {
    v.iter().map(Scalar::text).collect::<Vec<_>>().join(",")
}
