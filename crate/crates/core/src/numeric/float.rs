use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;

use super::{Backend, Exact, Float, Matrix, Scalar, Tolerances};
use crate::error::{Error, Result};

const SCHUR_MAX_ITER: usize = 100_000;

impl Scalar for Float {
    const BACKEND: Backend = Backend::Float;
    const EXACT: bool = false;

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }

    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }

    fn from_i64(v: i64) -> Self {
        Complex64::new(v as f64, 0.0)
    }

    fn from_exact(v: &Exact) -> Self {
        v.to_complex64()
    }

    fn to_complex64(&self) -> Complex64 {
        *self
    }

    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }

    fn magnitude(&self) -> f64 {
        self.norm()
    }

    fn pivot_score(&self) -> f64 {
        self.norm()
    }

    fn mul_sub_assign(&mut self, a: &Self, b: &Self) {
        *self -= a * b;
    }

    fn mul_add_assign(&mut self, a: &Self, b: &Self) {
        *self += a * b;
    }

    fn text(&self) -> String {
        let clean = |x: f64| if x == 0.0 { 0.0 } else { x };
        let (re, im) = (clean(self.re), clean(self.im));
        if im == 0.0 {
            format!("{re}")
        } else if re == 0.0 {
            format!("{im}i")
        } else if im < 0.0 {
            format!("{re}{im}i")
        } else {
            format!("{re}+{im}i")
        }
    }

    fn to_json(&self) -> serde_json::Value {
        let num = |x: f64| {
            serde_json::Number::from_f64(if x == 0.0 { 0.0 } else { x })
                .map_or(serde_json::Value::Null, serde_json::Value::Number)
        };
        if self.im == 0.0 {
            num(self.re)
        } else {
            serde_json::Value::Array(vec![num(self.re), num(self.im)])
        }
    }

    fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        (self.re - other.re).abs() <= tol && (self.im - other.im).abs() <= tol
    }

    fn matrix_rank(m: &Matrix<Self>, tol: &Tolerances) -> usize {
        m.echelon(tol).pivots.len()
    }

    fn matrix_eigenvalues(m: &Matrix<Self>, tol: &Tolerances) -> Result<Vec<Self>> {
        float_eigenvalues(m, tol)
    }

    /// Right singular vectors for small singular values. Unlike pivoted
    /// elimination this sees the near-singularity of `J − δ` for a Jordan
    /// block `J`, whose pivots are all about `δ` while `σ_min ≈ δ^k`.
    fn matrix_kernel(m: &Matrix<Self>, tol: &Tolerances, scale: f64) -> Vec<Vec<Self>> {
        let threshold = tol.rank * scale.max(m.max_magnitude());
        right_singular_pairs(m).into_iter().filter(|(s, _)| *s <= threshold).map(|(_, v)| v).collect()
    }

    fn least_singular_vector(m: &Matrix<Self>) -> Option<Vec<Self>> {
        right_singular_pairs(m).into_iter().min_by(|a, b| a.0.total_cmp(&b.0)).map(|(_, v)| v)
    }
}

/// All `(σ, v)` with `m v = σ u`; zero rows pad `m` to at least square so
/// that every right singular vector is present.
fn right_singular_pairs(m: &Matrix<Float>) -> Vec<(f64, Vec<Float>)> {
    let (rows, cols) = (m.rows(), m.cols());
    if cols == 0 {
        return Vec::new();
    }
    let size = rows.max(cols);
    let a = DMatrix::from_fn(size, cols, |r, c| if r < rows { m[(r, c)] } else { Complex64::new(0.0, 0.0) });
    let svd = a.svd(false, true);
    let v_t = svd.v_t.expect("requested");
    svd.singular_values.iter().enumerate().map(|(k, &s)| (s, (0..cols).map(|c| v_t[(k, c)].conj()).collect())).collect()
}

/// Eigenvalues through nalgebra's complex Schur form.
///
/// A defective eigenvalue of a `k × k` Jordan block is perturbed by roughly
/// `ε^{1/k}` into a ring around the true value, whose mean is accurate to
/// working precision. Clusters are found top-down on the single-linkage tree
/// of the computed values (see [`cluster`]) on the unit-max-norm rescaled
/// matrix.
fn float_eigenvalues(m: &Matrix<Float>, tol: &Tolerances) -> Result<Vec<Float>> {
    let n = m.rows();
    if n == 0 {
        return Ok(Vec::new());
    }
    let scale = m.max_magnitude();
    if scale == 0.0 {
        return Ok(vec![Complex64::new(0.0, 0.0); n]);
    }
    let a = DMatrix::from_fn(n, n, |r, c| m[(r, c)] / scale);
    let raw: Vec<Complex64> = if is_triangular(&a) {
        (0..n).map(|i| a[(i, i)]).collect()
    } else {
        // The QR iteration can stall at a machine-epsilon threshold on
        // defective spectra, and occasionally cycles. A looser threshold, the
        // real double-shift iteration and shifted copies `a − c` each take a
        // different path; the perturbations they cause stay within the
        // cluster radius below.
        let attempt = |shift: f64| -> Option<Vec<Complex64>> {
            let b = DMatrix::from_fn(n, n, |r, c| if r == c { a[(r, c)] - shift } else { a[(r, c)] });
            let back = |v: Complex64| v + shift;
            let complex = || {
                Schur::try_new(b.clone(), f64::EPSILON, SCHUR_MAX_ITER)
                    .or_else(|| Schur::try_new(b.clone(), 64.0 * f64::EPSILON, SCHUR_MAX_ITER))
                    .map(|s| triangular_eigenvalues(&s.unpack().1).into_iter().map(back).collect())
            };
            let real = || {
                b.iter().all(|z| z.im == 0.0).then(|| b.map(|z| z.re)).and_then(|r| {
                    Schur::try_new(r, f64::EPSILON, SCHUR_MAX_ITER)
                        .map(|s| s.complex_eigenvalues().iter().copied().map(back).collect())
                })
            };
            complex().or_else(real)
        };
        [0.0, 0.318_309_886, -0.577_215_665, 1.414_213_562]
            .into_iter()
            .find_map(attempt)
            .ok_or_else(|| Error::Precondition("Schur iteration did not converge".into()))?
    };

    let mut out = Vec::with_capacity(n);
    for (mean, count) in cluster(&a, raw, tol) {
        let mean = mean * scale;
        let snap = |x: f64| if x.abs() <= tol.eigen * scale { 0.0 } else { x };
        out.extend(std::iter::repeat_n(Complex64::new(snap(mean.re), snap(mean.im)), count));
    }
    Ok(out)
}

/// Splits `values` into clusters of one eigenvalue each, as `(mean, size)`.
///
/// A set of `k` values is accepted when it lies within `R(k) =
/// max(tol.eigen, (10⁴ε)^{1/k})` of its mean and `a − mean` is numerically
/// singular; otherwise it is cut at the longest edge of its minimum spanning
/// tree and both halves are tried again. Singletons are always accepted.
fn cluster(a: &DMatrix<Complex64>, values: Vec<Complex64>, tol: &Tolerances) -> Vec<(Complex64, usize)> {
    let k = values.len();
    let mean = values.iter().sum::<Complex64>() / k as f64;
    if k == 1 {
        return vec![(mean, 1)];
    }
    let radius = values.iter().map(|v| (v - mean).norm()).fold(0.0, f64::max);
    let bound = tol.eigen.max((1e4 * f64::EPSILON).powf(1.0 / k as f64));
    if radius <= tol.eigen || (radius <= bound && near_singular(a, mean, tol.eigen)) {
        return vec![(mean, k)];
    }
    let (left, right) = split_longest_edge(values);
    let mut out = cluster(a, left, tol);
    out.extend(cluster(a, right, tol));
    out
}

fn near_singular(a: &DMatrix<Complex64>, mu: Complex64, tol: f64) -> bool {
    let n = a.nrows();
    let shifted = DMatrix::from_fn(n, n, |r, c| if r == c { a[(r, c)] - mu } else { a[(r, c)] });
    shifted.singular_values().iter().cloned().fold(f64::INFINITY, f64::min) <= tol
}

/// The two components left after deleting the longest edge of a minimum
/// spanning tree (Prim). Both are nonempty for two or more values.
fn split_longest_edge(values: Vec<Complex64>) -> (Vec<Complex64>, Vec<Complex64>) {
    let k = values.len();
    let mut in_tree = vec![false; k];
    let mut best = vec![(f64::INFINITY, 0usize); k];
    let mut parent = vec![0usize; k];
    let mut order = Vec::with_capacity(k);
    best[0] = (0.0, 0);
    for _ in 0..k {
        let u = (0..k).filter(|&i| !in_tree[i]).min_by(|&i, &j| best[i].0.total_cmp(&best[j].0)).expect("vertex");
        in_tree[u] = true;
        parent[u] = best[u].1;
        order.push(u);
        for v in 0..k {
            let d = (values[u] - values[v]).norm();
            if !in_tree[v] && d < best[v].0 {
                best[v] = (d, u);
            }
        }
    }
    // Longest tree edge, ties to the latest vertex added.
    let cut = order[1..].iter().copied().max_by(|&i, &j| best[i].0.total_cmp(&best[j].0)).expect("two vertices");
    // Vertices added after `cut` whose tree path runs through it.
    let mut side = vec![false; k];
    side[cut] = true;
    for &v in &order {
        if v != cut && v != order[0] && side[parent[v]] {
            side[v] = true;
        }
    }
    let (mut left, mut right) = (Vec::new(), Vec::new());
    for (i, v) in values.into_iter().enumerate() {
        if side[i] { right.push(v) } else { left.push(v) }
    }
    (left, right)
}

fn is_triangular(a: &DMatrix<Complex64>) -> bool {
    let n = a.nrows();
    let zero = |r: usize, c: usize| a[(r, c)].norm() == 0.0;
    (0..n).all(|r| (0..r).all(|c| zero(r, c))) || (0..n).all(|r| (r + 1..n).all(|c| zero(r, c)))
}

/// Reads eigenvalues off a (quasi-)triangular Schur factor, solving any
/// remaining 2×2 diagonal blocks directly.
fn triangular_eigenvalues(t: &DMatrix<Complex64>) -> Vec<Complex64> {
    let n = t.nrows();
    let mut out = Vec::with_capacity(n);
    let mut i = 0;
    while i < n {
        if i + 1 < n && t[(i + 1, i)].norm() > 0.0 {
            let (a, b, c, d) = (t[(i, i)], t[(i, i + 1)], t[(i + 1, i)], t[(i + 1, i + 1)]);
            let half_tr = (a + d) / 2.0;
            let disc = (half_tr * half_tr - (a * d - b * c)).sqrt();
            out.push(half_tr + disc);
            out.push(half_tr - disc);
            i += 2;
        } else {
            out.push(t[(i, i)]);
            i += 1;
        }
    }
    out
}
