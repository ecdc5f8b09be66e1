use std::ops::{Index, IndexMut};

use super::{Scalar, Tolerances};
use crate::error::{Error, Result};

/// Dense row-major matrix. Zero rows or zero columns are allowed; they model
/// the maps into and out of the zero space at the ends of a complex.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Echelon<T> {
    pub reduced: Matrix<T>,
    pub pivots: Vec<usize>,
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;

    fn index(&self, (r, c): (usize, usize)) -> &T {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut T {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        let n = rows.len();
        Ok(Matrix { rows: n, cols, data: rows.into_iter().flatten().collect() })
    }

    /// Convenience constructor for small-integer matrices.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Self::from_fn(rows.len(), cols, |r, c| T::from_i64(rows[r][c]))
    }

    /// Matrix whose columns are the given vectors (all of length `len`).
    pub fn from_columns(len: usize, columns: &[Vec<T>]) -> Self {
        Self::from_fn(len, columns.len(), |r, c| columns[c][r].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<T> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    /// Largest entry modulus (0 for an empty matrix).
    pub fn max_magnitude(&self) -> f64 {
        self.data.iter().map(Scalar::magnitude).fold(0.0, f64::max)
    }

    pub fn trace(&self) -> T {
        (0..self.rows.min(self.cols)).fold(T::zero(), |acc, i| acc + self[(i, i)].clone())
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(|x| x.clone() * s.clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch in add");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.clone() + b.clone()).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch in sub");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.clone() - b.clone()).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "shape mismatch in mul");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)].mul_add_assign(a, b);
                    }
                }
            }
        }
        out
    }

    /// `self * v` for a column vector `v`.
    pub fn apply(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len(), "shape mismatch in apply");
        (0..self.rows)
            .map(|r| {
                let mut acc = T::zero();
                for (a, x) in self.row(r).iter().zip(v) {
                    if !a.is_zero() && !x.is_zero() {
                        acc.mul_add_assign(a, x);
                    }
                }
                acc
            })
            .collect()
    }

    /// `self - s·I`.
    pub fn shift_diagonal(&self, s: &T) -> Self {
        assert!(self.is_square());
        let mut out = self.clone();
        for i in 0..self.rows {
            out[(i, i)] = out[(i, i)].clone() - s.clone();
        }
        out
    }

    /// Adds `factor * block` into the sub-block starting at `(r0, c0)`.
    pub fn add_block(&mut self, r0: usize, c0: usize, block: &Self, factor: &T) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols);
        for r in 0..block.rows {
            for c in 0..block.cols {
                let b = &block[(r, c)];
                if !b.is_zero() {
                    self[(r0 + r, c0 + c)].mul_add_assign(factor, b);
                }
            }
        }
    }

    /// Adds `factor` along the diagonal of the `size × size` block at `(r0, c0)`.
    pub fn add_scaled_identity(&mut self, r0: usize, c0: usize, size: usize, factor: &T) {
        for i in 0..size {
            let e = &mut self[(r0 + i, c0 + i)];
            *e = e.clone() + factor.clone();
        }
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |r, c| self[(rows[r], cols[c])].clone())
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.rows + other.rows, self.cols + other.cols);
        out.add_block(0, 0, self, &T::one());
        out.add_block(self.rows, self.cols, other, &T::one());
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn elimination_threshold(&self, tol: f64) -> f64 {
        if T::EXACT {
            0.0
        } else {
            tol * self.max_magnitude()
        }
    }

    /// Gauss-Jordan reduction with partial pivoting by [`Scalar::pivot_score`].
    pub fn echelon(&self, tol: &Tolerances) -> Echelon<T> {
        self.echelon_below(self.elimination_threshold(tol.rank))
    }

    fn echelon_below(&self, threshold: f64) -> Echelon<T> {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let mut best = r;
            let mut best_score = m[(r, c)].pivot_score();
            for i in r + 1..m.rows {
                let s = m[(i, c)].pivot_score();
                if s > best_score {
                    best = i;
                    best_score = s;
                }
            }
            if m[(best, c)].negligible(threshold) {
                continue;
            }
            m.swap_rows(r, best);
            let inv = T::one() / m[(r, c)].clone();
            for j in c..m.cols {
                let v = m[(r, j)].clone() * inv.clone();
                m[(r, j)] = v;
            }
            m[(r, c)] = T::one();
            let pivot_row: Vec<T> = m.row(r).to_vec();
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let factor = m[(i, c)].clone();
                if factor.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    if !pivot_row[j].is_zero() {
                        m[(i, j)].mul_sub_assign(&factor, &pivot_row[j]);
                    }
                }
                m[(i, c)] = T::zero();
            }
            pivots.push(c);
            r += 1;
        }
        Echelon { reduced: m, pivots }
    }

    /// Rank with the default tolerances.
    pub fn rank(&self) -> usize {
        self.rank_with(&Tolerances::default())
    }

    /// Exact backend: fraction-free elimination. Float backend: count of
    /// pivots above `tol.rank` times the largest entry.
    pub fn rank_with(&self, tol: &Tolerances) -> usize {
        T::matrix_rank(self, tol)
    }

    pub fn nullspace(&self) -> Vec<Vec<T>> {
        self.nullspace_with(&Tolerances::default())
    }

    /// One vector per free column of the reduced echelon form, in column
    /// order; the free coordinate is set to 1.
    pub fn nullspace_with(&self, tol: &Tolerances) -> Vec<Vec<T>> {
        self.nullspace_below(self.elimination_threshold(tol.rank))
    }

    /// Null space with pivots judged against `scale` as well as the entries
    /// of `self`. For `A − λ` near a scalar matrix the entries are pure
    /// rounding noise, so the scale of `A` must decide.
    pub fn nullspace_at_scale(&self, tol: &Tolerances, scale: f64) -> Vec<Vec<T>> {
        let own = self.elimination_threshold(tol.rank);
        self.nullspace_below(if T::EXACT { own } else { own.max(tol.rank * scale) })
    }

    fn nullspace_below(&self, threshold: f64) -> Vec<Vec<T>> {
        let Echelon { reduced, pivots } = self.echelon_below(threshold);
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![T::zero(); self.cols];
                v[free] = T::one();
                for (k, &p) in pivots.iter().enumerate() {
                    v[p] = -reduced[(k, free)].clone();
                }
                v
            })
            .collect()
    }

    pub fn eigenvalues(&self) -> Result<Vec<T>> {
        self.eigenvalues_with(&Tolerances::default())
    }

    pub fn eigenvalues_with(&self, tol: &Tolerances) -> Result<Vec<T>> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "eigenvalues of a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        T::matrix_eigenvalues(self, tol)
    }

    /// Inverse by Gauss-Jordan elimination; `None` when singular.
    pub fn inverse(&self, tol: &Tolerances) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        aug.add_block(0, 0, self, &T::one());
        aug.add_scaled_identity(0, n, n, &T::one());
        let Echelon { reduced, pivots } = aug.echelon(tol);
        if pivots.iter().take(n).copied().ne(0..n) {
            return None;
        }
        let cols: Vec<usize> = (n..2 * n).collect();
        let rows: Vec<usize> = (0..n).collect();
        Some(reduced.submatrix(&rows, &cols))
    }

    /// A matrix `G` with `self · G · self = self`.
    ///
    /// Built from an invertible `r × r` submatrix on independent rows and
    /// columns, with zeros elsewhere.
    pub fn generalized_inverse(&self, tol: &Tolerances) -> Option<Self> {
        let col_pivots = self.echelon(tol).pivots;
        let row_pivots = self.transpose().echelon(tol).pivots;
        if col_pivots.len() != row_pivots.len() {
            return None;
        }
        let core = self.submatrix(&row_pivots, &col_pivots).inverse(tol)?;
        let mut g = Self::zeros(self.cols, self.rows);
        for (a, &c) in col_pivots.iter().enumerate() {
            for (b, &r) in row_pivots.iter().enumerate() {
                g[(c, r)] = core[(a, b)].clone();
            }
        }
        Some(g)
    }
}

/// Basis of `span(a) ∩ span(b)`, returned in reduced echelon form.
///
/// Solves `Σ x_i a_i − Σ y_j b_j = 0` and maps each solution to `Σ x_i a_i`.
/// Both inputs are assumed to be linearly independent lists.
pub fn intersect_subspaces<T: Scalar>(a: &[Vec<T>], b: &[Vec<T>], tol: &Tolerances) -> Vec<Vec<T>> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let len = a[0].len();
    let mut columns: Vec<Vec<T>> = a.to_vec();
    columns.extend(b.iter().map(|v| v.iter().map(|x| -x.clone()).collect()));
    let system = Matrix::from_columns(len, &columns);
    let vectors: Vec<Vec<T>> = system
        .nullspace_with(tol)
        .into_iter()
        .map(|sol| {
            let mut v = vec![T::zero(); len];
            for (coef, basis) in sol.iter().zip(a) {
                if coef.is_zero() {
                    continue;
                }
                for (acc, x) in v.iter_mut().zip(basis) {
                    acc.mul_add_assign(coef, x);
                }
            }
            v
        })
        .collect();
    echelon_basis(len, &vectors, tol)
}

/// Nonzero rows of the reduced echelon form of the given vectors.
pub(crate) fn echelon_basis<T: Scalar>(len: usize, vectors: &[Vec<T>], tol: &Tolerances) -> Vec<Vec<T>> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let m = Matrix::from_fn(vectors.len(), len, |r, c| vectors[r][c].clone());
    let Echelon { reduced, pivots } = m.echelon(tol);
    (0..pivots.len()).map(|r| reduced.row(r).to_vec()).collect()
}
