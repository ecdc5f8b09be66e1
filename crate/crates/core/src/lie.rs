//! Lie algebras given by structure constants.
//!
//! Structure constants are always exact (Gaussian rationals); only the
//! representation matrices and characters switch backend. Subspaces are kept
//! in reduced echelon form so that equal subspaces have equal bases.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::numeric::{Exact, Matrix, Scalar, Tolerances};

/// Exact tolerances: ignored by the exact backend, but required by the
/// generic elimination routines.
const EXACT_TOL: Tolerances = Tolerances { rank: 0.0, eigen: 0.0, dedup: 0.0 };

fn zero_vec(n: usize) -> Vec<Exact> {
    vec![Exact::zero(); n]
}

fn unit(n: usize, i: usize) -> Vec<Exact> {
    let mut v = zero_vec(n);
    v[i] = Exact::one();
    v
}

fn is_zero_vec(v: &[Exact]) -> bool {
    v.iter().all(Scalar::is_zero)
}

fn cmp_exact(a: &Exact, b: &Exact) -> Ordering {
    a.re.cmp(&b.re).then_with(|| a.im.cmp(&b.im))
}

/// Index of the unordered pair `i < j` in the packed upper triangle.
fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

/// Renders `Σ c_i e_i` with the algebra's basis names, e.g. `x+2y`.
pub fn combination_name(names: &[String], v: &[Exact]) -> String {
    let mut out = String::new();
    for (name, c) in names.iter().zip(v) {
        if c.is_zero() {
            continue;
        }
        let coeff = c.text();
        let term = match coeff.as_str() {
            "1" => name.clone(),
            "-1" => format!("-{name}"),
            t if !num_traits::Zero::is_zero(&c.im) && !num_traits::Zero::is_zero(&c.re) => format!("({t}){name}"),
            t => format!("{t}{name}"),
        };
        if !out.is_empty() && !term.starts_with('-') {
            out.push('+');
        }
        out.push_str(&term);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct LieAlgebra {
    names: Vec<String>,
    /// `[e_i, e_j]` for `i < j`, packed by [`pair_index`].
    brackets: Vec<Vec<Exact>>,
}

/// A Jacobi identity failure on the basis triple `(i, j, k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct JacobiViolation {
    pub triple: (usize, usize, usize),
    pub residual: Vec<Exact>,
}

impl LieAlgebra {
    /// The abelian algebra on the given basis names.
    pub fn abelian(names: &[&str]) -> Self {
        let n = names.len();
        LieAlgebra {
            names: names.iter().map(|s| s.to_string()).collect(),
            brackets: vec![zero_vec(n); n * n.saturating_sub(1) / 2],
        }
    }

    /// Builds an algebra from `(i, j, [e_i, e_j])` triples. Pairs not listed
    /// bracket to zero. A pair given as `i > j` is stored negated.
    pub fn from_brackets(names: Vec<String>, brackets: &[(usize, usize, Vec<Exact>)]) -> Result<Self> {
        let n = names.len();
        let mut packed = vec![zero_vec(n); n * n.saturating_sub(1) / 2];
        let mut seen = vec![false; packed.len()];
        for (i, j, coeffs) in brackets {
            let (i, j) = (*i, *j);
            if i >= n || j >= n || i == j {
                return Err(Error::DimensionMismatch(format!("bracket index pair ({i},{j}) for dimension {n}")));
            }
            if coeffs.len() != n {
                return Err(Error::DimensionMismatch(format!(
                    "bracket ({i},{j}) has {} coefficients, expected {n}",
                    coeffs.len()
                )));
            }
            let (lo, hi, v) = if i < j {
                (i, j, coeffs.clone())
            } else {
                (j, i, coeffs.iter().map(|c| -c.clone()).collect())
            };
            let idx = pair_index(n, lo, hi);
            if seen[idx] {
                return Err(Error::DimensionMismatch(format!("bracket ({lo},{hi}) given twice")));
            }
            seen[idx] = true;
            packed[idx] = v;
        }
        Ok(LieAlgebra { names, brackets: packed })
    }

    /// Convenience constructor from integer constants.
    pub fn from_int_brackets(names: &[&str], brackets: &[(usize, usize, &[i64])]) -> Result<Self> {
        let b: Vec<_> = brackets
            .iter()
            .map(|(i, j, c)| (*i, *j, c.iter().map(|&x| Exact::from_i64(x)).collect()))
            .collect();
        Self::from_brackets(names.iter().map(|s| s.to_string()).collect(), &b)
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// `[e_i, e_j]` for any pair, synthesizing antisymmetry.
    pub fn structure(&self, i: usize, j: usize) -> Vec<Exact> {
        match i.cmp(&j) {
            Ordering::Equal => zero_vec(self.dim()),
            Ordering::Less => self.brackets[pair_index(self.dim(), i, j)].clone(),
            Ordering::Greater => self.brackets[pair_index(self.dim(), j, i)].iter().map(|c| -c.clone()).collect(),
        }
    }

    /// Nonzero brackets `(i, j, [e_i, e_j])` with `i < j`.
    pub fn nonzero_brackets(&self) -> Vec<(usize, usize, Vec<Exact>)> {
        let n = self.dim();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let v = &self.brackets[pair_index(n, i, j)];
                if !is_zero_vec(v) {
                    out.push((i, j, v.clone()));
                }
            }
        }
        out
    }

    /// Bilinear extension of the structure constants.
    pub fn bracket(&self, u: &[Exact], v: &[Exact]) -> Vec<Exact> {
        let n = self.dim();
        let mut out = zero_vec(n);
        for i in 0..n {
            if u[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if i == j || v[j].is_zero() {
                    continue;
                }
                let c = u[i].clone() * v[j].clone();
                for (acc, s) in out.iter_mut().zip(self.structure(i, j)) {
                    if !s.is_zero() {
                        acc.mul_add_assign(&c, &s);
                    }
                }
            }
        }
        out
    }

    /// Checks the Jacobi identity on every basis triple `i < j < k`.
    pub fn validate(&self) -> std::result::Result<(), Vec<JacobiViolation>> {
        let n = self.dim();
        let e = |i| unit(n, i);
        let mut violations = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let a = self.bracket(&e(i), &self.bracket(&e(j), &e(k)));
                    let b = self.bracket(&e(j), &self.bracket(&e(k), &e(i)));
                    let c = self.bracket(&e(k), &self.bracket(&e(i), &e(j)));
                    let residual: Vec<Exact> =
                        a.into_iter().zip(b).zip(c).map(|((x, y), z)| x + y + z).collect();
                    if !is_zero_vec(&residual) {
                        violations.push(JacobiViolation { triple: (i, j, k), residual });
                    }
                }
            }
        }
        if violations.is_empty() {
            Ok(())
        } else {
            Err(violations)
        }
    }

    /// The opposite algebra: same basis, negated bracket.
    pub fn opposite(&self) -> Self {
        LieAlgebra {
            names: self.names.clone(),
            brackets: self.brackets.iter().map(|v| v.iter().map(|c| -c.clone()).collect()).collect(),
        }
    }

    /// The algebra in the basis given by the columns of `change`
    /// (`e'_a = Σ_j change[j][a] e_j`).
    pub fn change_basis(&self, change: &Matrix<Exact>) -> Result<Self> {
        let n = self.dim();
        if change.rows() != n || change.cols() != n {
            return Err(Error::DimensionMismatch("basis change must be n×n".into()));
        }
        let inv = change
            .inverse(&EXACT_TOL)
            .ok_or_else(|| Error::Precondition("basis change is singular".into()))?;
        let cols: Vec<Vec<Exact>> = (0..n).map(|a| change.column(a)).collect();
        let names: Vec<String> = cols.iter().map(|c| combination_name(&self.names, c)).collect();
        let mut brackets = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                let v = self.bracket(&cols[a], &cols[b]);
                brackets.push((a, b, inv.apply(&v)));
            }
        }
        Self::from_brackets(names, &brackets)
    }

    pub fn span(&self, vectors: &[Vec<Exact>]) -> Subspace {
        Subspace::span(self.dim(), vectors)
    }

    pub fn full(&self) -> Subspace {
        Subspace::span(self.dim(), &(0..self.dim()).map(|i| unit(self.dim(), i)).collect::<Vec<_>>())
    }

    /// `[A, B]` as a subspace.
    pub fn bracket_span(&self, a: &Subspace, b: &Subspace) -> Subspace {
        let mut vectors = Vec::new();
        for u in &a.basis {
            for v in &b.basis {
                let w = self.bracket(u, v);
                if !is_zero_vec(&w) {
                    vectors.push(w);
                }
            }
        }
        Subspace::span(self.dim(), &vectors)
    }

    /// `L² = [L, L]`.
    pub fn derived_subalgebra(&self) -> Subspace {
        let n = self.dim();
        let vectors: Vec<Vec<Exact>> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .map(|(i, j)| self.structure(i, j))
            .filter(|v| !is_zero_vec(v))
            .collect();
        Subspace::span(n, &vectors)
    }

    /// `L ⊇ [L, L] ⊇ [L, [L, L]] ⊇ …`, ending at the first repeated term.
    pub fn lower_central_series(&self) -> Vec<Subspace> {
        let full = self.full();
        let mut series = vec![full.clone()];
        loop {
            let next = self.bracket_span(&full, series.last().unwrap());
            if &next == series.last().unwrap() {
                return series;
            }
            series.push(next);
        }
    }

    /// `L ⊇ [L, L] ⊇ [L², L²] ⊇ …`, ending at the first repeated term.
    pub fn derived_series(&self) -> Vec<Subspace> {
        let mut series = vec![self.full()];
        loop {
            let last = series.last().unwrap();
            let next = self.bracket_span(last, last);
            if &next == last {
                return series;
            }
            series.push(next);
        }
    }

    pub fn is_nilpotent(&self) -> bool {
        self.lower_central_series().last().is_some_and(|s| s.dim() == 0)
    }

    pub fn is_solvable(&self) -> bool {
        self.derived_series().last().is_some_and(|s| s.dim() == 0)
    }

    /// Length of the lower central series down to zero, `None` if not nilpotent.
    pub fn nilpotency_class(&self) -> Option<usize> {
        let series = self.lower_central_series();
        (series.last()?.dim() == 0).then(|| series.len() - 1)
    }

    /// `{x : [x, L] ⊆ base}` for a subspace `base` containing `[base, L]`.
    fn centralizer_modulo(&self, base: &Subspace) -> Subspace {
        let n = self.dim();
        // Column i stacks the reductions of [e_i, e_j] modulo `base` over all j.
        let columns: Vec<Vec<Exact>> = (0..n)
            .map(|i| (0..n).flat_map(|j| base.reduce(&self.structure(i, j))).collect())
            .collect();
        let system = Matrix::from_columns(n * n, &columns);
        Subspace::span(n, &system.nullspace_with(&EXACT_TOL))
    }

    /// `0 = Z_0 ⊆ Z_1 ⊆ …` with `Z_{k+1} / Z_k` the center of `L / Z_k`.
    pub fn upper_central_series(&self) -> Vec<Subspace> {
        let mut series = vec![Subspace::zero(self.dim())];
        loop {
            let next = self.centralizer_modulo(series.last().unwrap());
            if &next == series.last().unwrap() {
                return series;
            }
            series.push(next);
        }
    }

    pub fn center(&self) -> Subspace {
        self.centralizer_modulo(&Subspace::zero(self.dim()))
    }

    /// Chain of ideals `0 = L_0 ⊂ L_1 ⊂ … ⊂ L_n = L`, `dim L_i = i`, with
    /// `[L_i, L_j] ⊆ L_{i−1}` for `i < j`.
    ///
    /// Refines the upper central series: the terms are exhausted in order, and
    /// inside each term the lexicographically smallest echelon vector not yet
    /// spanned is added. For the Heisenberg algebra this yields
    /// `0 ⊂ ⟨z⟩ ⊂ ⟨y, z⟩ ⊂ L`.
    pub fn jordan_holder_chain(&self) -> Result<Vec<Subspace>> {
        if !self.is_nilpotent() {
            return Err(Error::NotNilpotent);
        }
        let n = self.dim();
        let mut chain = vec![Subspace::zero(n)];
        let mut current: Vec<Vec<Exact>> = Vec::new();
        for term in self.upper_central_series().iter().skip(1) {
            let mut candidates = term.basis.clone();
            candidates.sort_by(|a, b| {
                a.iter().zip(b).map(|(x, y)| cmp_exact(x, y)).find(|o| o.is_ne()).unwrap_or(Ordering::Equal)
            });
            loop {
                let span = Subspace::span(n, &current);
                let Some(next) = candidates.iter().find(|v| !span.contains(v)) else {
                    break;
                };
                current.push(next.clone());
                chain.push(Subspace::span(n, &current));
            }
        }
        debug_assert_eq!(chain.len(), n + 1);
        Ok(chain)
    }

    /// Checks a proposed Jordan-Hölder chain against its defining conditions.
    pub fn verify_chain(&self, chain: &[Subspace]) -> std::result::Result<(), Vec<ChainViolation>> {
        let n = self.dim();
        let mut out = Vec::new();
        if chain.len() != n + 1 {
            out.push(ChainViolation::WrongLength { expected: n + 1, found: chain.len() });
            return Err(out);
        }
        for (i, s) in chain.iter().enumerate() {
            if s.ambient() != n || s.dim() != i {
                out.push(ChainViolation::WrongDimension { index: i, dim: s.dim() });
            }
            if self.check_ideal(s).is_err() {
                out.push(ChainViolation::NotIdeal { index: i });
            }
        }
        for i in 0..n {
            if !chain[i].is_subspace_of(&chain[i + 1]) {
                out.push(ChainViolation::NotNested { index: i });
            }
        }
        for i in 1..=n {
            for j in i + 1..=n {
                if !self.bracket_span(&chain[i], &chain[j]).is_subspace_of(&chain[i - 1]) {
                    out.push(ChainViolation::Bracket { i, j });
                }
            }
        }
        if out.is_empty() {
            Ok(())
        } else {
            Err(out)
        }
    }

    /// `Ok` iff `[L, I] ⊆ I`.
    pub fn check_ideal(&self, ideal: &Subspace) -> Result<()> {
        let n = self.dim();
        for j in 0..n {
            for b in &ideal.basis {
                let w = self.bracket(&unit(n, j), b);
                if !ideal.contains(&w) {
                    return Err(Error::NotAnIdeal {
                        element: self.names[j].clone(),
                        ideal_vector: combination_name(&self.names, b),
                    });
                }
            }
        }
        Ok(())
    }

    /// Does `f` vanish on `L²`?
    pub fn is_character<T: Scalar>(&self, f: &[T], tol: f64) -> bool {
        f.len() == self.dim() && self.derived_subalgebra().basis.iter().all(|v| evaluate(f, v).approx_eq(&T::zero(), tol))
    }

    /// The ideal `I` as a Lie algebra in its echelon basis.
    pub fn restrict_to(&self, ideal: &Subspace) -> Result<LieAlgebra> {
        self.check_ideal(ideal)?;
        let r = ideal.dim();
        let names: Vec<String> = ideal.basis.iter().map(|b| combination_name(&self.names, b)).collect();
        let mut brackets = Vec::new();
        for a in 0..r {
            for b in a + 1..r {
                let w = self.bracket(&ideal.basis[a], &ideal.basis[b]);
                let coords = ideal.coordinates(&w).expect("ideal is closed under the bracket");
                brackets.push((a, b, coords));
            }
        }
        LieAlgebra::from_brackets(names, &brackets)
    }
}

/// `f(v) = Σ f_i v_i` for an exact vector `v`.
pub fn evaluate<T: Scalar>(f: &[T], v: &[Exact]) -> T {
    let mut acc = T::zero();
    for (a, b) in f.iter().zip(v) {
        if !b.is_zero() {
            acc.mul_add_assign(a, &T::from_exact(b));
        }
    }
    acc
}

/// Coefficients of `f` on the echelon basis of an ideal (restriction
/// `L* → I*`).
pub fn restrict_character<T: Scalar>(algebra: &LieAlgebra, f: &[T], ideal: &Subspace) -> Result<Vec<T>> {
    algebra.check_ideal(ideal)?;
    Ok(ideal.basis.iter().map(|b| evaluate(f, b)).collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChainViolation {
    WrongLength { expected: usize, found: usize },
    WrongDimension { index: usize, dim: usize },
    NotIdeal { index: usize },
    NotNested { index: usize },
    /// `[L_i, L_j] ⊄ L_{i−1}`.
    Bracket { i: usize, j: usize },
}

impl fmt::Display for ChainViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChainViolation::WrongLength { expected, found } => {
                write!(f, "chain has {found} terms, expected {expected}")
            }
            ChainViolation::WrongDimension { index, dim } => write!(f, "L_{index} has dimension {dim}"),
            ChainViolation::NotIdeal { index } => write!(f, "L_{index} is not an ideal"),
            ChainViolation::NotNested { index } => write!(f, "L_{index} is not contained in L_{}", index + 1),
            ChainViolation::Bracket { i, j } => write!(f, "[L_{i}, L_{j}] is not contained in L_{}", i - 1),
        }
    }
}

/// A linear subspace of `C^n` with a reduced echelon basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vec<Exact>>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: Vec::new() }
    }

    pub fn span(ambient: usize, vectors: &[Vec<Exact>]) -> Self {
        let basis = crate::numeric::echelon_basis(ambient, vectors, &EXACT_TOL);
        Subspace { ambient, basis }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Exact>] {
        &self.basis
    }

    fn pivots(&self) -> Vec<usize> {
        self.basis.iter().map(|b| b.iter().position(|c| !c.is_zero()).expect("nonzero basis vector")).collect()
    }

    /// Canonical representative of `v` modulo the subspace: pivot
    /// coordinates are cleared.
    pub fn reduce(&self, v: &[Exact]) -> Vec<Exact> {
        let mut w = v.to_vec();
        for (b, p) in self.basis.iter().zip(self.pivots()) {
            let c = w[p].clone();
            if c.is_zero() {
                continue;
            }
            for (x, y) in w.iter_mut().zip(b) {
                x.mul_sub_assign(&c, y);
            }
        }
        w
    }

    pub fn contains(&self, v: &[Exact]) -> bool {
        is_zero_vec(&self.reduce(v))
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.basis.iter().all(|v| other.contains(v))
    }

    /// Coordinates of `v` in the echelon basis, `None` if `v` is outside.
    pub fn coordinates(&self, v: &[Exact]) -> Option<Vec<Exact>> {
        self.contains(v).then(|| self.pivots().into_iter().map(|p| v[p].clone()).collect())
    }

    pub fn describe(&self, names: &[String]) -> String {
        let parts: Vec<String> = self.basis.iter().map(|b| combination_name(names, b)).collect();
        format!("⟨{}⟩", parts.join(", "))
    }
}
