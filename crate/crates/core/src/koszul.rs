//! The Koszul complex `(X ⊗ ΛL, d(ρ))`.
//!
//! `X ⊗ Λ^p L` is indexed subset-major: basis vector `x_a ⊗ e_S` sits at
//! `rank(S) · m + a`, where `rank(S)` is the lexicographic position of the
//! increasing index tuple `S`. `d_p` maps degree `p` to degree `p − 1`;
//! `d_0` and `d_{n+1}` are zero.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{Matrix, Scalar, Settings, Tolerances};
use crate::representation::Representation;

/// Increasing `p`-subsets of `{0, …, n−1}` in lexicographic order. Empty for
/// `p > n`.
pub fn exterior_basis(n: usize, p: usize) -> Vec<Vec<usize>> {
    fn extend(start: usize, n: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for i in start..=n - left {
            cur.push(i);
            extend(i + 1, n, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if p <= n {
        extend(0, n, p, &mut Vec::with_capacity(p), &mut out);
    }
    out
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// `m · C(n, p)` for `p = 0..=n`.
pub fn chain_dims(m: usize, n: usize) -> Vec<usize> {
    (0..=n).map(|p| m.saturating_mul(binomial(n, p))).collect()
}

fn check_cap(m: usize, n: usize, settings: &Settings) -> Result<()> {
    let dim = chain_dims(m, n).into_iter().max().unwrap_or(0);
    if dim > settings.dimension_cap {
        return Err(Error::DimensionCap { dim, cap: settings.dimension_cap });
    }
    Ok(())
}

/// Matrix of `d_p(ρ)` for `1 ≤ p ≤ n`.
pub fn koszul_differential<T: Scalar>(rho: &Representation<T>, p: usize, settings: &Settings) -> Result<Matrix<T>> {
    let (n, m) = (rho.algebra().dim(), rho.dim());
    if p == 0 || p > n {
        return Err(Error::Precondition(format!("differential degree {p} outside 1..={n}")));
    }
    check_cap(m, n, settings)?;
    Ok(differential(rho, p))
}

fn differential<T: Scalar>(rho: &Representation<T>, p: usize) -> Matrix<T> {
    let (n, m) = (rho.algebra().dim(), rho.dim());
    let sources = exterior_basis(n, p);
    let targets = exterior_basis(n, p - 1);
    let index: HashMap<&[usize], usize> = targets.iter().enumerate().map(|(k, s)| (s.as_slice(), k)).collect();
    let structure: Vec<Vec<Vec<T>>> = (0..n)
        .map(|i| (0..n).map(|j| rho.algebra().structure(i, j).iter().map(T::from_exact).collect()).collect())
        .collect();
    let mut d = Matrix::zeros(targets.len() * m, sources.len() * m);
    let sign = |odd: bool| if odd { -T::one() } else { T::one() };

    for (col, s) in sources.iter().enumerate() {
        // Σ_k (−1)^{k+1} ρ(l_k) x ⊗ (… l̂_k …), positions k counted from 1.
        for k in 0..p {
            let rest: Vec<usize> = s.iter().enumerate().filter(|&(q, _)| q != k).map(|(_, &e)| e).collect();
            let row = index[rest.as_slice()];
            d.add_block(row * m, col * m, &rho.matrices()[s[k]], &sign(k % 2 == 1));
        }
        // Σ_{i<j} (−1)^{i+j−1} x ⊗ ([l_i, l_j] ∧ … l̂_i … l̂_j …).
        for i in 0..p {
            for j in i + 1..p {
                let rest: Vec<usize> =
                    s.iter().enumerate().filter(|&(q, _)| q != i && q != j).map(|(_, &e)| e).collect();
                // 1-based positions give (−1)^{(i+1)+(j+1)−1} = (−1)^{i+j+1}.
                let outer = sign((i + j + 1) % 2 == 1);
                for (t, c) in structure[s[i]][s[j]].iter().enumerate() {
                    if c.is_zero() || rest.contains(&t) {
                        continue;
                    }
                    // e_t ∧ e_rest reordered: e_t moves past every smaller index.
                    let shift = rest.iter().filter(|&&r| r < t).count();
                    let mut target = rest.clone();
                    target.insert(shift, t);
                    let row = index[target.as_slice()];
                    let factor = outer.clone() * sign(shift % 2 == 1) * c.clone();
                    d.add_scaled_identity(row * m, col * m, m, &factor);
                }
            }
        }
    }
    d
}

/// Koszul complex of one representation.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainComplex<T> {
    /// `dims[p] = m · C(n, p)`.
    pub dims: Vec<usize>,
    /// `diffs[p − 1] = d_p` for `p = 1..=n`.
    pub diffs: Vec<Matrix<T>>,
}

impl<T: Scalar> ChainComplex<T> {
    pub fn of(rho: &Representation<T>, settings: &Settings) -> Result<Self> {
        let (n, m) = (rho.algebra().dim(), rho.dim());
        check_cap(m, n, settings)?;
        Ok(ChainComplex { dims: chain_dims(m, n), diffs: (1..=n).map(|p| differential(rho, p)).collect() })
    }

    /// `n`, the top degree.
    pub fn top(&self) -> usize {
        self.dims.len() - 1
    }

    /// `d_p` for any integer degree, with the zero maps at both ends.
    pub fn d(&self, p: usize) -> Matrix<T> {
        if p == 0 {
            Matrix::zeros(0, self.dims[0])
        } else if p > self.top() {
            Matrix::zeros(self.dims[self.top()], 0)
        } else {
            self.diffs[p - 1].clone()
        }
    }

    /// `ranks[p] = rank d_p` for `p = 0..=n+1`.
    pub fn ranks(&self, tol: &Tolerances) -> Vec<usize> {
        let mut ranks = vec![0];
        ranks.extend(self.diffs.iter().map(|d| d.rank_with(tol)));
        ranks.push(0);
        ranks
    }

    pub fn homology(&self, tol: &Tolerances) -> Homology {
        let ranks = self.ranks(tol);
        let betti = (0..self.dims.len()).map(|p| self.dims[p] - ranks[p] - ranks[p + 1]).collect();
        Homology { dims: self.dims.clone(), ranks, betti: BettiVector(betti) }
    }

    /// Checks `d_{p−1} d_p = 0` for `p = 2..=n`. Float products are compared
    /// against `tol.rank` relative to the product of the operator scales.
    pub fn validate(&self, tol: &Tolerances) -> std::result::Result<(), Vec<ComplexViolation>> {
        let mut out = Vec::new();
        for p in 2..=self.top() {
            let (a, b) = (&self.diffs[p - 2], &self.diffs[p - 1]);
            let prod = a.mul(b);
            let bad = if T::EXACT {
                !prod.is_zero()
            } else {
                let scale = a.max_magnitude().max(1.0) * b.max_magnitude().max(1.0) * a.cols().max(1) as f64;
                prod.max_magnitude() > tol.rank * scale
            };
            if bad {
                out.push(ComplexViolation { degree: p, residual: prod.max_magnitude() });
            }
        }
        if out.is_empty() {
            Ok(())
        } else {
            Err(out)
        }
    }
}

/// `d_{p−1} d_p ≠ 0`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComplexViolation {
    pub degree: usize,
    pub residual: f64,
}

/// `h[p] = dim H_p` for `p = 0..=n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct BettiVector(pub Vec<usize>);

impl BettiVector {
    pub fn is_exact(&self) -> bool {
        self.0.iter().all(|&h| h == 0)
    }

    pub fn euler_characteristic(&self) -> i64 {
        alternating_sum(&self.0)
    }
}

pub fn alternating_sum(values: &[usize]) -> i64 {
    values.iter().enumerate().map(|(p, &v)| if p % 2 == 0 { v as i64 } else { -(v as i64) }).sum()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Homology {
    pub dims: Vec<usize>,
    /// `ranks[p] = rank d_p` for `p = 0..=n+1`.
    pub ranks: Vec<usize>,
    pub betti: BettiVector,
}

/// Homology of the complex of `ρ − f`.
pub fn homology_dims<T: Scalar>(rho: &Representation<T>, f: &[T], settings: &Settings) -> Result<Homology> {
    let shifted = rho.shift(f, &settings.tol)?;
    Ok(ChainComplex::of(&shifted, settings)?.homology(&settings.tol))
}

/// `h_p: X_p → X_{p+1}` and `h_{p−1}: X_{p−1} → X_p` with
/// `d_{p+1} h_p + h_{p−1} d_p = I_p`.
#[derive(Clone, Debug, PartialEq)]
pub struct Homotopy<T> {
    pub degree: usize,
    pub h_p: Matrix<T>,
    pub h_prev: Matrix<T>,
}

/// Splitting homotopy at degree `p` of the complex of `ρ − f`.
///
/// With `G_q` a generalized inverse of `d_q` (`d G d = d`), `P = G_p d_p`
/// is a projection with kernel `N(d_p)`. Take `h_{p−1} = G_p` and
/// `h_p = G_{p+1}(I − P)`; exactness at `p` puts `R(I − P) = N(d_p)` inside
/// `R(d_{p+1})`, where `d_{p+1} G_{p+1}` is the identity.
pub fn splitting_homotopy<T: Scalar>(
    rho: &Representation<T>,
    f: &[T],
    p: usize,
    settings: &Settings,
) -> Result<Homotopy<T>> {
    let shifted = rho.shift(f, &settings.tol)?;
    let complex = ChainComplex::of(&shifted, settings)?;
    complex_homotopy(&complex, p, &settings.tol)
}

pub fn complex_homotopy<T: Scalar>(complex: &ChainComplex<T>, p: usize, tol: &Tolerances) -> Result<Homotopy<T>> {
    if p > complex.top() {
        return Err(Error::Precondition(format!("degree {p} outside 0..={}", complex.top())));
    }
    let homology = complex.homology(tol);
    if homology.betti.0[p] != 0 {
        return Err(Error::NotSplit { degree: p, betti: homology.betti.0[p] });
    }
    let (d_p, d_next) = (complex.d(p), complex.d(p + 1));
    let ginv = |d: &Matrix<T>| {
        d.generalized_inverse(tol)
            .ok_or_else(|| Error::Precondition("generalized inverse: rank detection disagreed".into()))
    };
    let g_p = ginv(&d_p)?;
    let g_next = ginv(&d_next)?;
    let complement = Matrix::identity(complex.dims[p]).sub(&g_p.mul(&d_p));
    Ok(Homotopy { degree: p, h_p: g_next.mul(&complement), h_prev: g_p })
}

fn homotopy_defect<T: Scalar>(complex: &ChainComplex<T>, h: &Homotopy<T>) -> Matrix<T> {
    let p = h.degree;
    let lhs = complex.d(p + 1).mul(&h.h_p).add(&h.h_prev.mul(&complex.d(p)));
    lhs.sub(&Matrix::identity(complex.dims[p]))
}

/// Largest entry modulus of `d_{p+1} h_p + h_{p−1} d_p − I_p`.
pub fn homotopy_residual<T: Scalar>(complex: &ChainComplex<T>, h: &Homotopy<T>) -> f64 {
    homotopy_defect(complex, h).max_magnitude()
}

/// Exact backend: the identity holds literally. Float: residual ≤ `bound`.
pub fn verify_homotopy<T: Scalar>(complex: &ChainComplex<T>, h: &Homotopy<T>, bound: f64) -> bool {
    let defect = homotopy_defect(complex, h);
    if T::EXACT {
        defect.is_zero()
    } else {
        defect.max_magnitude() <= bound
    }
}

/// `d_{p+1} h_p + h_{p−1} d_p = I_p − k_p` with `k_p` compact.
#[derive(Clone, Debug, PartialEq)]
pub struct FredholmCertificate<T> {
    pub homotopy: Homotopy<T>,
    pub k_p: Matrix<T>,
    /// Every finite-rank operator is compact, so `h = 0`, `k_p = I_p` always
    /// works; `true` marks that trivial certificate.
    pub degenerate: bool,
}

pub fn fredholm_split_certificate<T: Scalar>(
    rho: &Representation<T>,
    p: usize,
    settings: &Settings,
) -> Result<FredholmCertificate<T>> {
    let (n, m) = (rho.algebra().dim(), rho.dim());
    if p > n {
        return Err(Error::Precondition(format!("degree {p} outside 0..={n}")));
    }
    check_cap(m, n, settings)?;
    let dims = chain_dims(m, n);
    let next = dims.get(p + 1).copied().unwrap_or(0);
    let prev = if p == 0 { 0 } else { dims[p - 1] };
    Ok(FredholmCertificate {
        homotopy: Homotopy { degree: p, h_p: Matrix::zeros(next, dims[p]), h_prev: Matrix::zeros(dims[p], prev) },
        k_p: Matrix::identity(dims[p]),
        degenerate: true,
    })
}
