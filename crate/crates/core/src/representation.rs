//! Representations `ρ: L → L(X)` stored as one `m × m` matrix per basis
//! element of `L`.

use crate::error::{Error, Result};
use crate::lie::{evaluate, LieAlgebra, Subspace};
use crate::numeric::{Exact, Float, Matrix, Scalar, Tolerances};

#[derive(Clone, Debug, PartialEq)]
pub struct Representation<T> {
    algebra: LieAlgebra,
    dim: usize,
    mats: Vec<Matrix<T>>,
}

/// Failure of `ρ([e_i, e_j]) = [ρ(e_i), ρ(e_j)]`.
#[derive(Clone, Debug, PartialEq)]
pub struct HomomorphismViolation {
    pub pair: (usize, usize),
    /// Largest entry modulus of the residual.
    pub residual: f64,
}

impl<T: Scalar> Representation<T> {
    /// Checks shapes only; the homomorphism law is checked by [`Self::validate`].
    pub fn new(algebra: LieAlgebra, dim: usize, mats: Vec<Matrix<T>>) -> Result<Self> {
        if mats.len() != algebra.dim() {
            return Err(Error::DimensionMismatch(format!(
                "{} matrices for an algebra of dimension {}",
                mats.len(),
                algebra.dim()
            )));
        }
        if let Some(k) = mats.iter().position(|a| a.rows() != dim || a.cols() != dim) {
            return Err(Error::DimensionMismatch(format!("matrix {k} is not {dim}×{dim}")));
        }
        Ok(Representation { algebra, dim, mats })
    }

    /// The zero representation of `algebra` on `C^m`.
    pub fn zero(algebra: LieAlgebra, m: usize) -> Self {
        let mats = vec![Matrix::zeros(m, m); algebra.dim()];
        Representation { algebra, dim: m, mats }
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.algebra
    }

    /// `m = dim X`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrices(&self) -> &[Matrix<T>] {
        &self.mats
    }

    /// `ρ(Σ v_i e_i) = Σ v_i ρ(e_i)`.
    pub fn act(&self, v: &[Exact]) -> Matrix<T> {
        let mut out = Matrix::zeros(self.dim, self.dim);
        for (c, a) in v.iter().zip(&self.mats) {
            if !c.is_zero() {
                out = out.add(&a.scale(&T::from_exact(c)));
            }
        }
        out
    }

    /// Checks the homomorphism law on every pair `i < j`. Float residuals are
    /// compared against `tol.rank` relative to the squared operator scale.
    pub fn validate(&self, tol: &Tolerances) -> std::result::Result<(), Vec<HomomorphismViolation>> {
        let n = self.algebra.dim();
        let scale = self.mats.iter().map(Matrix::max_magnitude).fold(1.0, f64::max);
        let threshold = if T::EXACT { 0.0 } else { tol.rank * scale * scale * self.dim.max(1) as f64 };
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let commutator = self.mats[i].mul(&self.mats[j]).sub(&self.mats[j].mul(&self.mats[i]));
                let residual = self.act(&self.algebra.structure(i, j)).sub(&commutator);
                let bad = if T::EXACT { !residual.is_zero() } else { residual.max_magnitude() > threshold };
                if bad {
                    out.push(HomomorphismViolation { pair: (i, j), residual: residual.max_magnitude() });
                }
            }
        }
        if out.is_empty() {
            Ok(())
        } else {
            Err(out)
        }
    }

    /// `ρ − f·I`.
    pub fn shift(&self, f: &[T], tol: &Tolerances) -> Result<Self> {
        if !self.algebra.is_character(f, tol.dedup) {
            return Err(Error::NotACharacter);
        }
        Ok(self.shift_unchecked(f))
    }

    pub(crate) fn shift_unchecked(&self, f: &[T]) -> Self {
        let mats = self.mats.iter().zip(f).map(|(a, c)| a.shift_diagonal(c)).collect();
        Representation { algebra: self.algebra.clone(), dim: self.dim, mats }
    }

    /// `ρ*: L^op → L(X')`, `ρ*(l) = ρ(l)ᵀ`.
    pub fn adjoint(&self) -> Self {
        Representation {
            algebra: self.algebra.opposite(),
            dim: self.dim,
            mats: self.mats.iter().map(Matrix::transpose).collect(),
        }
    }

    /// `ρ|_I` on the echelon basis of the ideal `I`.
    pub fn restrict(&self, ideal: &Subspace) -> Result<Self> {
        let algebra = self.algebra.restrict_to(ideal)?;
        let mats = ideal.basis().iter().map(|b| self.act(b)).collect();
        Ok(Representation { algebra, dim: self.dim, mats })
    }

    /// The same operators on the algebra basis given by the columns of `change`.
    pub fn change_algebra_basis(&self, change: &Matrix<Exact>) -> Result<Self> {
        let algebra = self.algebra.change_basis(change)?;
        let mats = (0..change.cols()).map(|a| self.act(&change.column(a))).collect();
        Ok(Representation { algebra, dim: self.dim, mats })
    }

    /// `S ρ S⁻¹`.
    pub fn conjugate(&self, s: &Matrix<T>, tol: &Tolerances) -> Result<Self> {
        if s.rows() != self.dim || s.cols() != self.dim {
            return Err(Error::DimensionMismatch("conjugator has the wrong size".into()));
        }
        let inv = s.inverse(tol).ok_or_else(|| Error::Precondition("conjugator is singular".into()))?;
        let mats = self.mats.iter().map(|a| s.mul(a).mul(&inv)).collect();
        Ok(Representation { algebra: self.algebra.clone(), dim: self.dim, mats })
    }

    /// `ρ ⊕ σ` for two representations of the same algebra.
    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if self.algebra != other.algebra {
            return Err(Error::DimensionMismatch("direct sum of representations of different algebras".into()));
        }
        let mats = self.mats.iter().zip(&other.mats).map(|(a, b)| a.direct_sum(b)).collect();
        Ok(Representation { algebra: self.algebra.clone(), dim: self.dim + other.dim, mats })
    }

    /// The one-dimensional representation `l ↦ f(l)`.
    pub fn character_block(algebra: &LieAlgebra, f: &[T]) -> Self {
        let mats = f.iter().map(|c| Matrix::from_fn(1, 1, |_, _| c.clone())).collect();
        Representation { algebra: algebra.clone(), dim: 1, mats }
    }

    /// Sum of the ranks of the operators `ρ(e_i)`.
    pub fn total_rank(&self, tol: &Tolerances) -> usize {
        self.mats.iter().map(|a| a.rank_with(tol)).sum()
    }

    /// Value of the functional `f` on an exact algebra vector.
    pub fn character_value(f: &[T], v: &[Exact]) -> T {
        evaluate(f, v)
    }
}

impl Representation<Exact> {
    pub fn to_float(&self) -> Representation<Float> {
        Representation {
            algebra: self.algebra.clone(),
            dim: self.dim,
            mats: self.mats.iter().map(|a| a.map(Scalar::to_complex64)).collect(),
        }
    }

    /// Converts into either backend.
    pub fn to_backend<T: Scalar>(&self) -> Representation<T> {
        Representation {
            algebra: self.algebra.clone(),
            dim: self.dim,
            mats: self.mats.iter().map(|a| a.map(T::from_exact)).collect(),
        }
    }
}

/// Transforms a character under the algebra basis change `change`
/// (`f'(e'_a) = f(Σ_j change[j][a] e_j)`).
pub fn transform_character<T: Scalar>(f: &[T], change: &Matrix<Exact>) -> Vec<T> {
    (0..change.cols()).map(|a| evaluate(f, &change.column(a))).collect()
}
