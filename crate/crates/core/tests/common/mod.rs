//! Independent oracles. Nothing here calls into the library's Koszul or rank
//! code: the differential is expanded straight from the defining formula over
//! `i64`, and ranks come from an SVD.

#![allow(dead_code)]

use joint_spectra::numeric::{Exact, Matrix, Scalar};
use joint_spectra::representation::Representation;
use nalgebra::DMatrix;
use num_traits::{ToPrimitive, Zero};

pub fn ex(v: i64) -> Exact {
    <Exact as Scalar>::from_i64(v)
}

pub fn exs(v: &[i64]) -> Vec<Exact> {
    v.iter().map(|&x| ex(x)).collect()
}

pub fn to_i64(v: &Exact) -> Option<i64> {
    if !v.im.is_zero() || !v.re.is_integer() {
        return None;
    }
    v.re.to_integer().to_i64()
}

pub fn int_matrix(m: &Matrix<Exact>) -> Option<Vec<Vec<i64>>> {
    (0..m.rows()).map(|r| m.row(r).iter().map(to_i64).collect()).collect()
}

/// Integer data of a representation: structure constants `c[i][j][k]` and
/// operator matrices.
pub struct IntRep {
    pub n: usize,
    pub m: usize,
    pub c: Vec<Vec<Vec<i64>>>,
    pub mats: Vec<Vec<Vec<i64>>>,
}

impl IntRep {
    pub fn of(rep: &Representation<Exact>) -> Option<IntRep> {
        let n = rep.algebra().dim();
        let c = (0..n)
            .map(|i| (0..n).map(|j| rep.algebra().structure(i, j).iter().map(to_i64).collect()).collect())
            .collect::<Option<Vec<Vec<Vec<i64>>>>>()?;
        let mats = rep.matrices().iter().map(int_matrix).collect::<Option<Vec<_>>>()?;
        Some(IntRep { n, m: rep.dim(), c, mats })
    }

    /// `ρ − f` for an integer character.
    pub fn shifted(&self, f: &[i64]) -> IntRep {
        let mats = self
            .mats
            .iter()
            .zip(f)
            .map(|(a, &fi)| {
                let mut a = a.clone();
                for (k, row) in a.iter_mut().enumerate() {
                    row[k] -= fi;
                }
                a
            })
            .collect();
        IntRep { n: self.n, m: self.m, c: self.c.clone(), mats }
    }
}

fn subsets(n: usize, p: usize) -> Vec<u32> {
    let mut out: Vec<u32> = (0u32..1 << n).filter(|s| s.count_ones() as usize == p).collect();
    // Lexicographic order of the increasing index tuples.
    out.sort_by_key(|&s| (0..n).filter(|i| s >> i & 1 == 1).collect::<Vec<_>>());
    out
}

fn indices(s: u32, n: usize) -> Vec<usize> {
    (0..n).filter(|i| s >> i & 1 == 1).collect()
}

/// Sign that sorts `word`, or `None` if it has a repeated letter.
fn normalize(word: &[usize]) -> Option<(i64, u32)> {
    let mut sign = 1;
    let mut mask = 0u32;
    for (a, &x) in word.iter().enumerate() {
        if mask >> x & 1 == 1 {
            return None;
        }
        mask |= 1 << x;
        for &y in &word[a + 1..] {
            if x > y {
                sign = -sign;
            }
        }
    }
    Some((sign, mask))
}

/// `d_p` straight from
/// `d(x ⊗ l_1∧…∧l_p) = Σ_k (−1)^{k+1} ρ(l_k)x ⊗ l_1∧…l̂_k…∧l_p
///                   + Σ_{i<j} (−1)^{i+j−1} x ⊗ [l_i,l_j]∧l_1∧…l̂_i…l̂_j…∧l_p`
/// with 1-based positions.
pub fn differential(r: &IntRep, p: usize) -> Vec<Vec<i64>> {
    let (n, m) = (r.n, r.m);
    let src = subsets(n, p);
    let dst = subsets(n, p - 1);
    let pos = |mask: u32| dst.iter().position(|&t| t == mask).expect("target subset");
    let mut d = vec![vec![0i64; src.len() * m]; dst.len() * m];
    for (col, &s) in src.iter().enumerate() {
        let l = indices(s, n);
        for k in 1..=p {
            let sign = if (k + 1) % 2 == 0 { 1 } else { -1 };
            let rest: Vec<usize> = l.iter().enumerate().filter(|&(q, _)| q + 1 != k).map(|(_, &e)| e).collect();
            let (_, mask) = normalize(&rest).unwrap();
            let row = pos(mask);
            for a in 0..m {
                for b in 0..m {
                    d[row * m + a][col * m + b] += sign * r.mats[l[k - 1]][a][b];
                }
            }
        }
        for i in 1..=p {
            for j in i + 1..=p {
                let sign = if (i + j - 1) % 2 == 0 { 1 } else { -1 };
                let rest: Vec<usize> =
                    l.iter().enumerate().filter(|&(q, _)| q + 1 != i && q + 1 != j).map(|(_, &e)| e).collect();
                for (t, &coeff) in r.c[l[i - 1]][l[j - 1]].iter().enumerate() {
                    if coeff == 0 {
                        continue;
                    }
                    let mut word = vec![t];
                    word.extend(&rest);
                    if let Some((parity, mask)) = normalize(&word) {
                        let row = pos(mask);
                        for a in 0..m {
                            d[row * m + a][col * m + a] += sign * parity * coeff;
                        }
                    }
                }
            }
        }
    }
    d
}

pub fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter().map(|row| (0..cols).map(|c| (0..inner).map(|k| row[k] * b[k][c]).sum()).collect()).collect()
}

/// Numerical rank through singular values; fine for the small integer
/// matrices used in tests.
pub fn svd_rank(a: &[Vec<i64>]) -> usize {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    if rows == 0 || cols == 0 {
        return 0;
    }
    let m = DMatrix::from_fn(rows, cols, |r, c| a[r][c] as f64);
    let sv = m.singular_values();
    let top = sv.iter().cloned().fold(0.0, f64::max);
    sv.iter().filter(|&&s| s > top * 1e-9 * (rows.max(cols) as f64)).count()
}

pub fn svd_rank_exact(a: &Matrix<Exact>) -> usize {
    svd_rank(&int_matrix(a).expect("integer matrix"))
}

/// Betti numbers of the Koszul complex of an integer representation.
pub fn betti(r: &IntRep) -> Vec<usize> {
    let n = r.n;
    let dims: Vec<usize> = (0..=n).map(|p| r.m * subsets(n, p).len()).collect();
    let mut ranks = vec![0usize; n + 2];
    for p in 1..=n {
        ranks[p] = svd_rank(&differential(r, p));
    }
    (0..=n).map(|p| dims[p] - ranks[p] - ranks[p + 1]).collect()
}

/// Integer characters with entries in `-r..=r` that vanish on the derived
/// algebra.
pub fn character_grid(rep: &Representation<Exact>, r: i64) -> Vec<Vec<i64>> {
    let n = rep.algebra().dim();
    let derived = rep.algebra().derived_subalgebra();
    let mut out = Vec::new();
    let mut cur = vec![-r; n];
    loop {
        let f = exs(&cur);
        if derived
            .basis()
            .iter()
            .all(|v| Scalar::is_zero(&f.iter().zip(v).fold(ex(0), |acc, (a, b)| acc + a.clone() * b.clone())))
        {
            out.push(cur.clone());
        }
        let mut k = 0;
        loop {
            if k == n {
                return out;
            }
            if cur[k] < r {
                cur[k] += 1;
                break;
            }
            cur[k] = -r;
            k += 1;
        }
    }
}

/// Taylor spectrum by brute force over a character grid, sorted.
pub fn grid_spectrum(rep: &Representation<Exact>, r: i64) -> Vec<Vec<i64>> {
    let int = IntRep::of(rep).expect("integer representation");
    let mut out: Vec<Vec<i64>> =
        character_grid(rep, r).into_iter().filter(|f| betti(&int.shifted(f)).iter().any(|&h| h != 0)).collect();
    out.sort();
    out
}

pub fn as_int_set(set: &[Vec<Exact>]) -> Option<Vec<Vec<i64>>> {
    let mut out: Vec<Vec<i64>> = set.iter().map(|f| f.iter().map(to_i64).collect()).collect::<Option<_>>()?;
    out.sort();
    Some(out)
}
