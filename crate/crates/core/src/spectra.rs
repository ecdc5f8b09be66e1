//! Joint spectra of finite-dimensional representations of solvable Lie
//! algebras.
//!
//! Two independent routes:
//!
//! * homology: evaluate the Koszul complex of `ρ − f` on a finite candidate
//!   set that provably contains every spectral point;
//! * eigencharacters: enumerate common eigenvectors directly.
//!
//! For nilpotent algebras both routes must give the same set.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::koszul::{complex_homotopy, verify_homotopy, BettiVector, ChainComplex};
use crate::lie::{evaluate, LieAlgebra, Subspace};
use crate::numeric::{distinct, intersect_subspaces, vector_text, vectors_approx_eq, Matrix, Scalar, Settings, Tolerances};
use crate::representation::Representation;

/// Coefficients `f(e_i)` of a functional on the algebra basis.
pub type Character<T> = Vec<T>;

/// Homotopy residual bound for the float backend.
pub const FLOAT_HOMOTOPY_BOUND: f64 = 1e-6;

pub const ANNOTATION_CLOSED_RANGE: &str =
    "closed-range clause: every range R(d_{n-k}(rho-f)) is closed in finite dimension, so the clause adds no members";
pub const ANNOTATION_CLOSED_RANGE_ESSENTIAL: &str =
    "closed-range clause: read as R(d_{n-k}(rho)) or as R(d_{n-k}(rho-f)), every range is closed in finite dimension";
pub const ANNOTATION_ESSENTIAL: &str = "finite-dimensional: essential homology never infinite";
pub const ANNOTATION_SPLIT_ESSENTIAL: &str =
    "finite-dimensional: k_p = I_p is compact, so a splitting modulo compacts always exists";
pub const ANNOTATION_SPLIT: &str = "finite-dim: split = Taylor";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SpectrumKind {
    Taylor,
    Delta(usize),
    Pi(usize),
    Split,
    SplitDelta(usize),
    SplitPi(usize),
    Fredholm,
    DeltaE(usize),
    PiE(usize),
    SplitE,
    SplitDeltaE(usize),
    SplitPiE(usize),
}

/// Which union of per-degree sets a kind describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Range {
    All,
    Bottom(usize),
    Top(usize),
}

impl SpectrumKind {
    /// Every kind, with `k` ranging over `0..=n`.
    pub fn all(n: usize) -> Vec<SpectrumKind> {
        use SpectrumKind::*;
        let mut out = vec![Taylor];
        out.extend((0..=n).map(Delta));
        out.extend((0..=n).map(Pi));
        out.push(Split);
        out.extend((0..=n).map(SplitDelta));
        out.extend((0..=n).map(SplitPi));
        out.push(Fredholm);
        out.extend((0..=n).map(DeltaE));
        out.extend((0..=n).map(PiE));
        out.push(SplitE);
        out.extend((0..=n).map(SplitDeltaE));
        out.extend((0..=n).map(SplitPiE));
        out
    }

    /// Kinds that are not essential.
    pub fn non_essential(n: usize) -> Vec<SpectrumKind> {
        Self::all(n).into_iter().filter(|k| !k.is_essential()).collect()
    }

    pub fn k(&self) -> Option<usize> {
        use SpectrumKind::*;
        match *self {
            Delta(k) | Pi(k) | SplitDelta(k) | SplitPi(k) | DeltaE(k) | PiE(k) | SplitDeltaE(k) | SplitPiE(k) => Some(k),
            Taylor | Split | Fredholm | SplitE => None,
        }
    }

    pub fn with_k(&self, k: usize) -> SpectrumKind {
        use SpectrumKind::*;
        match *self {
            Delta(_) => Delta(k),
            Pi(_) => Pi(k),
            SplitDelta(_) => SplitDelta(k),
            SplitPi(_) => SplitPi(k),
            DeltaE(_) => DeltaE(k),
            PiE(_) => PiE(k),
            SplitDeltaE(_) => SplitDeltaE(k),
            SplitPiE(_) => SplitPiE(k),
            other => other,
        }
    }

    pub fn is_essential(&self) -> bool {
        use SpectrumKind::*;
        matches!(self, Fredholm | DeltaE(_) | PiE(_) | SplitE | SplitDeltaE(_) | SplitPiE(_))
    }

    pub fn is_split(&self) -> bool {
        use SpectrumKind::*;
        matches!(self, Split | SplitDelta(_) | SplitPi(_) | SplitE | SplitDeltaE(_) | SplitPiE(_))
    }

    fn range(&self) -> Range {
        use SpectrumKind::*;
        match *self {
            Taylor | Split | Fredholm | SplitE => Range::All,
            Delta(k) | SplitDelta(k) | DeltaE(k) | SplitDeltaE(k) => Range::Bottom(k),
            Pi(k) | SplitPi(k) | PiE(k) | SplitPiE(k) => Range::Top(k),
        }
    }

    /// Degrees `p` whose per-degree sets are united.
    pub fn degrees(&self, n: usize) -> std::ops::RangeInclusive<usize> {
        match self.range() {
            Range::All => 0..=n,
            Range::Bottom(k) => 0..=k.min(n),
            Range::Top(k) => n - k.min(n)..=n,
        }
    }

    /// `Err(InvalidKind)` unless `k ≤ n`.
    pub fn check(&self, n: usize) -> Result<()> {
        match self.k() {
            Some(k) if k > n => Err(Error::InvalidKind(format!("{self}: k must lie in 0..={n}"))),
            _ => Ok(()),
        }
    }

    pub fn annotations(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if self.is_split() && !self.is_essential() {
            out.push(ANNOTATION_SPLIT);
        }
        if matches!(self.range(), Range::Top(_)) {
            out.push(if self.is_essential() { ANNOTATION_CLOSED_RANGE_ESSENTIAL } else { ANNOTATION_CLOSED_RANGE });
        }
        if self.is_essential() {
            out.push(if self.is_split() { ANNOTATION_SPLIT_ESSENTIAL } else { ANNOTATION_ESSENTIAL });
        }
        out
    }
}

impl fmt::Display for SpectrumKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use SpectrumKind::*;
        let name = match self {
            Taylor => "taylor",
            Delta(_) => "delta",
            Pi(_) => "pi",
            Split => "split",
            SplitDelta(_) => "split_delta",
            SplitPi(_) => "split_pi",
            Fredholm => "fredholm",
            DeltaE(_) => "delta_e",
            PiE(_) => "pi_e",
            SplitE => "split_e",
            SplitDeltaE(_) => "split_delta_e",
            SplitPiE(_) => "split_pi_e",
        };
        match self.k() {
            Some(k) => write!(f, "{name}:{k}"),
            None => f.write_str(name),
        }
    }
}

impl FromStr for SpectrumKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        use SpectrumKind::*;
        let bad = || Error::InvalidKind(format!("`{}` is not a known kind", s.chars().take(64).collect::<String>()));
        let (name, k) = match s.split_once(':') {
            Some((name, k)) => {
                if k.is_empty() || !k.bytes().all(|b| b.is_ascii_digit()) || k.len() > 9 {
                    return Err(bad());
                }
                (name, Some(k.parse::<usize>().map_err(|_| bad())?))
            }
            None => (s, None),
        };
        let kind = match (name, k) {
            ("taylor", None) => Taylor,
            ("split", None) => Split,
            ("fredholm", None) => Fredholm,
            ("split_e", None) => SplitE,
            ("delta", Some(k)) => Delta(k),
            ("pi", Some(k)) => Pi(k),
            ("split_delta", Some(k)) => SplitDelta(k),
            ("split_pi", Some(k)) => SplitPi(k),
            ("delta_e", Some(k)) => DeltaE(k),
            ("pi_e", Some(k)) => PiE(k),
            ("split_delta_e", Some(k)) => SplitDeltaE(k),
            ("split_pi_e", Some(k)) => SplitPiE(k),
            _ => return Err(bad()),
        };
        Ok(kind)
    }
}

/// Tolerances for eigenvector and eigenspace computations: eigenvalues are
/// only known to `tol.eigen`, so rank decisions use that scale.
fn eigen_tol(tol: &Tolerances) -> Tolerances {
    Tolerances { rank: tol.rank.max(tol.eigen), ..*tol }
}

fn dedup_characters<T: Scalar>(chars: Vec<Character<T>>, tol: f64) -> Vec<Character<T>> {
    let mut out: Vec<Character<T>> = Vec::new();
    for f in chars {
        if !out.iter().any(|g| vectors_approx_eq(g, &f, tol)) {
            out.push(f);
        }
    }
    out
}

fn sort_characters<T: Scalar>(chars: &mut [Character<T>]) {
    chars.sort_by_cached_key(|f| vector_text(f));
}

/// Common eigenvectors of a family of matrices, by branching over the
/// eigenvalues of one matrix at a time. Returns `(eigenvalue tuple, witness)`
/// pairs; stops after the first leaf when `first_only`.
fn joint_eigen_search<T: Scalar>(
    mats: &[Matrix<T>],
    m: usize,
    tol: &Tolerances,
    first_only: bool,
) -> Result<Vec<(Vec<T>, Vec<T>)>> {
    let spectra: Vec<Vec<T>> =
        mats.iter().map(|a| Ok(distinct(&a.eigenvalues_with(tol)?, tol.dedup))).collect::<Result<_>>()?;
    Ok(search_over(mats, m, &spectra, tol, first_only))
}

/// [`joint_eigen_search`] with the candidate eigenvalues of each matrix given.
fn search_over<T: Scalar>(
    mats: &[Matrix<T>],
    m: usize,
    spectra: &[Vec<T>],
    tol: &Tolerances,
    first_only: bool,
) -> Vec<(Vec<T>, Vec<T>)> {
    let etol = eigen_tol(tol);
    let start: Vec<Vec<T>> = (0..m)
        .map(|i| {
            let mut v = vec![T::zero(); m];
            v[i] = T::one();
            v
        })
        .collect();
    let mut out = Vec::new();
    let mut stack = vec![(0usize, Vec::new(), start)];
    while let Some((k, tuple, space)) = stack.pop() {
        if k == mats.len() {
            out.push((tuple, space[0].clone()));
            if first_only {
                break;
            }
            continue;
        }
        // Reverse push order so that leaves come out in eigenvalue order.
        for lambda in spectra[k].iter().rev() {
            let scale = mats[k].max_magnitude().max(lambda.magnitude());
            let kernel = T::matrix_kernel(&mats[k].shift_diagonal(lambda), &etol, scale);
            let next = intersect_subspaces(&space, &kernel, &etol);
            if !next.is_empty() {
                let mut t = tuple.clone();
                t.push(lambda.clone());
                stack.push((k + 1, t, next));
            }
        }
    }
    out
}

/// A character `f` with a nonzero `x` such that `ρ(l)x = f(l)x` for all `l`.
#[derive(Clone, Debug, PartialEq)]
pub struct Eigencharacter<T> {
    pub f: Character<T>,
    pub witness: Vec<T>,
}

/// All joint eigencharacters of `ρ`, sorted by coefficient text.
pub fn joint_eigencharacters<T: Scalar>(rho: &Representation<T>, tol: &Tolerances) -> Result<Vec<Eigencharacter<T>>> {
    let leaves = joint_eigen_search(rho.matrices(), rho.dim(), tol, false)?;
    let mut out: Vec<Eigencharacter<T>> = Vec::new();
    for (f, witness) in leaves {
        if !rho.algebra().is_character(&f, tol.dedup) {
            continue;
        }
        if !out.iter().any(|e| vectors_approx_eq(&e.f, &f, tol.dedup)) {
            out.push(Eigencharacter { f, witness });
        }
    }
    out.sort_by_cached_key(|e| vector_text(&e.f));
    Ok(out)
}

/// Diagonal weight tuples of a simultaneous triangularization (with
/// multiplicity, in flag order). Requires a solvable family.
fn triangular_weights<T: Scalar>(mats: &[Matrix<T>], m: usize, tol: &Tolerances) -> Result<Vec<Vec<T>>> {
    let mut weights = Vec::with_capacity(m);
    let mut current: Vec<Matrix<T>> = mats.to_vec();
    // Rounding noise in a quotient is measured against the original
    // operator, not against whatever is left after deflation.
    let floors: Vec<f64> = mats.iter().map(|a| tol.rank * a.max_magnitude()).collect();
    // The spectrum of each quotient is what is left of the original one, so
    // eigenvalues are computed once, at the scale of the original operator.
    let mut remaining: Vec<Vec<T>> = mats.iter().map(|a| a.eigenvalues_with(tol)).collect::<Result<_>>()?;
    for size in (1..=m).rev() {
        let spectra: Vec<Vec<T>> = remaining.iter().map(|r| distinct(r, tol.dedup)).collect();
        let Some((tuple, v)) = search_over(&current, size, &spectra, tol, true).pop() else {
            // Lie's theorem guarantees a common eigenvector for solvable
            // input, so only rounding can get here.
            if !T::EXACT {
                return Err(Error::Precondition(
                    "no common eigenvector within float tolerances; the spectrum is too ill-conditioned, use the exact backend"
                        .into(),
                ));
            }
            return Err(Error::NotSolvable);
        };
        // Float witnesses come out of an elimination-based intersection; the
        // least singular vector of the stacked shifted operators is accurate
        // to working precision and keeps the quotients from drifting.
        let v = if T::EXACT {
            v
        } else {
            let stacked = Matrix::from_fn(current.len() * size, size, |r, c| {
                let (k, i) = (r / size, r % size);
                if i == c { current[k][(i, c)].clone() - tuple[k].clone() } else { current[k][(i, c)].clone() }
            });
            T::least_singular_vector(&stacked).unwrap_or(v)
        };
        for (r, lambda) in remaining.iter_mut().zip(&tuple) {
            let at = r.iter().position(|x| x.approx_eq(lambda, tol.dedup)).expect("searched value");
            r.swap_remove(at);
        }
        weights.push(tuple);
        // Replace the standard vector at the largest entry of v by v itself;
        // the quotient acts on the remaining coordinates.
        let pivot = (0..size)
            .max_by(|&a, &b| v[a].pivot_score().total_cmp(&v[b].pivot_score()).then(b.cmp(&a)))
            .expect("nonempty");
        // Scaled so the pivot entry is 1 and every other entry is at most 1
        // in magnitude: the basis change stays well conditioned.
        let scale = T::one() / v[pivot].clone();
        let mut basis = Matrix::identity(size);
        for (r, x) in v.iter().enumerate() {
            basis[(r, pivot)] = x.clone() * scale.clone();
        }
        let inverse = basis.inverse(tol).ok_or(Error::NotSolvable)?;
        let keep: Vec<usize> = (0..size).filter(|&i| i != pivot).collect();
        current = current
            .iter()
            .zip(&floors)
            .map(|(a, &floor)| {
                let q = inverse.mul(a).mul(&basis).submatrix(&keep, &keep);
                if T::EXACT {
                    q
                } else {
                    Matrix::from_fn(q.rows(), q.cols(), |r, c| {
                        if q[(r, c)].magnitude() <= floor { T::zero() } else { q[(r, c)].clone() }
                    })
                }
            })
            .collect();
    }
    if mats.is_empty() && m > 0 {
        weights.truncate(m);
    }
    Ok(weights)
}

/// Distinct diagonal characters of a simultaneous triangularization of `ρ`.
pub fn weight_candidates<T: Scalar>(rho: &Representation<T>, tol: &Tolerances) -> Result<Vec<Character<T>>> {
    if !rho.algebra().is_solvable() {
        return Err(Error::NotSolvable);
    }
    let weights = triangular_weights(rho.matrices(), rho.dim(), tol)?;
    let mut out = dedup_characters(weights, tol.dedup);
    if let Some(bad) = out.iter().find(|f| !rho.algebra().is_character(f, tol.dedup)) {
        return Err(Error::Precondition(format!("triangular weight ({}) is not a character", vector_text(bad))));
    }
    sort_characters(&mut out);
    Ok(out)
}

/// The adjoint representation `ad: L → gl(L)` with exact entries.
pub fn adjoint_representation(algebra: &LieAlgebra) -> Representation<crate::numeric::Exact> {
    let n = algebra.dim();
    let mats = (0..n)
        .map(|i| {
            let mut a = Matrix::zeros(n, n);
            for j in 0..n {
                for (r, c) in algebra.structure(i, j).into_iter().enumerate() {
                    a[(r, j)] = c;
                }
            }
            a
        })
        .collect();
    Representation::new(algebra.clone(), n, mats).expect("square matrices")
}

/// A finite set containing every point of `σ(ρ)`.
///
/// `L` acts trivially on `H_*(L, X ⊗ C_{−f})`, so a nonzero homology group
/// needs a weight `0` in some `C_λ ⊗ Λ^p L ⊗ C_{−f}`, i.e.
/// `f = λ + α_{i_1} + … + α_{i_p}` with `λ` a weight of `ρ` and `α` the
/// adjoint weights. For nilpotent `L` every `α` is zero and this is the
/// plain weight set.
pub fn homology_candidates<T: Scalar>(rho: &Representation<T>, tol: &Tolerances) -> Result<Vec<Character<T>>> {
    let weights = weight_candidates(rho, tol)?;
    let algebra = rho.algebra();
    let n = algebra.dim();
    let ad_weights = triangular_weights(
        &adjoint_representation(algebra).to_backend::<T>().matrices().to_vec(),
        n,
        tol,
    )?;
    let mut shifts: Vec<Vec<T>> = vec![vec![T::zero(); n]];
    for alpha in ad_weights {
        if alpha.iter().all(|a| a.approx_eq(&T::zero(), tol.dedup)) {
            continue;
        }
        let moved: Vec<Vec<T>> =
            shifts.iter().map(|s| s.iter().zip(&alpha).map(|(a, b)| a.clone() + b.clone()).collect()).collect();
        shifts = dedup_characters(shifts.into_iter().chain(moved).collect(), tol.dedup);
    }
    let sums: Vec<Vec<T>> = weights
        .iter()
        .flat_map(|w| shifts.iter().map(move |s| w.iter().zip(s).map(|(a, b)| a.clone() + b.clone()).collect()))
        .collect();
    let mut out = dedup_characters(sums, tol.dedup);
    out.retain(|f| algebra.is_character(f, tol.dedup));
    sort_characters(&mut out);
    Ok(out)
}

/// Homology of `ρ − f` at every homology candidate, computed once and
/// shared by all spectrum kinds.
#[derive(Clone, Debug)]
pub struct SpectralData<T> {
    rho: Representation<T>,
    settings: Settings,
    pub candidates: Vec<Character<T>>,
    pub betti: Vec<BettiVector>,
}

impl<T: Scalar> SpectralData<T> {
    pub fn compute(rho: &Representation<T>, settings: &Settings) -> Result<Self> {
        let candidates = homology_candidates(rho, &settings.tol)?;
        Self::on_candidates(rho, candidates, settings)
    }

    /// Evaluates on a caller-supplied candidate list (each must be a character).
    pub fn on_candidates(rho: &Representation<T>, candidates: Vec<Character<T>>, settings: &Settings) -> Result<Self> {
        if let Some(bad) = candidates.iter().find(|f| !rho.algebra().is_character(f, settings.tol.dedup)) {
            return Err(Error::Precondition(format!("candidate ({}) is not a character", vector_text(bad))));
        }
        ChainComplex::<T>::of(&Representation::zero(rho.algebra().clone(), rho.dim()), settings)?;
        let betti = candidates
            .par_iter()
            .map(|f| ChainComplex::of(&rho.shift_unchecked(f), settings).map(|c| c.homology(&settings.tol).betti))
            .collect::<Result<Vec<_>>>()?;
        Ok(SpectralData { rho: rho.clone(), settings: *settings, candidates, betti })
    }

    pub fn representation(&self) -> &Representation<T> {
        &self.rho
    }

    fn n(&self) -> usize {
        self.rho.algebra().dim()
    }

    /// `σ_p(ρ)`.
    pub fn sigma_p(&self, p: usize) -> Vec<Character<T>> {
        self.candidates
            .iter()
            .zip(&self.betti)
            .filter(|(_, b)| b.0.get(p).is_some_and(|&h| h != 0))
            .map(|(f, _)| f.clone())
            .collect()
    }

    /// `f ∈ sp_p(ρ)` iff no verified splitting homotopy exists at degree `p`.
    fn split_fails(&self, complex: &ChainComplex<T>, p: usize) -> bool {
        match complex_homotopy(complex, p, &self.settings.tol) {
            Ok(h) => !verify_homotopy(complex, &h, FLOAT_HOMOTOPY_BOUND),
            Err(_) => true,
        }
    }

    pub fn report(&self, kind: SpectrumKind) -> Result<SpectrumReport<T>> {
        let n = self.n();
        kind.check(n)?;
        let degrees = kind.degrees(n);
        let flags: Vec<bool> = if kind.is_essential() {
            // dim H_p < ∞ and k_p = I_p is compact: no member can qualify.
            vec![false; self.candidates.len()]
        } else if kind.is_split() {
            self.candidates
                .par_iter()
                .map(|f| {
                    let complex = ChainComplex::of(&self.rho.shift_unchecked(f), &self.settings)?;
                    Ok(degrees.clone().any(|p| self.split_fails(&complex, p)))
                })
                .collect::<Result<Vec<_>>>()?
        } else {
            self.betti.iter().map(|b| degrees.clone().any(|p| b.0[p] != 0)).collect()
        };
        let mut members: Vec<Member<T>> = self
            .candidates
            .iter()
            .zip(&self.betti)
            .zip(flags)
            .filter(|(_, keep)| *keep)
            .map(|((f, b), _)| Member { f: f.clone(), betti: Some(b.clone()), witness: None })
            .collect();
        members.sort_by_cached_key(|m| vector_text(&m.f));
        Ok(SpectrumReport {
            kind,
            backend: T::BACKEND.to_string(),
            route: Route::Homology,
            members,
            annotations: kind.annotations().into_iter().map(String::from).collect(),
            candidates: self.candidates.clone(),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    Homology,
    Eigencharacter,
    Both,
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Route::Homology => "homology",
            Route::Eigencharacter => "eigencharacter",
            Route::Both => "both",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Member<T> {
    pub f: Character<T>,
    pub betti: Option<BettiVector>,
    pub witness: Option<Vec<T>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumReport<T> {
    pub kind: SpectrumKind,
    pub backend: String,
    pub route: Route,
    /// Sorted by coefficient text.
    pub members: Vec<Member<T>>,
    pub annotations: Vec<String>,
    pub candidates: Vec<Character<T>>,
}

impl<T: Scalar> SpectrumReport<T> {
    pub fn characters(&self) -> Vec<Character<T>> {
        self.members.iter().map(|m| m.f.clone()).collect()
    }

    pub fn to_json(&self) -> Value {
        let texts = |f: &[T]| Value::Array(f.iter().map(|c| Value::String(c.text())).collect());
        let betti: serde_json::Map<String, Value> = self
            .members
            .iter()
            .filter_map(|m| m.betti.as_ref().map(|b| (vector_text(&m.f), json!(b))))
            .collect();
        let mut out = json!({
            "kind": self.kind.to_string(),
            "backend": self.backend,
            "route": self.route.to_string(),
            "members": self.members.iter().map(|m| texts(&m.f)).collect::<Vec<_>>(),
            "betti": betti,
            "annotations": self.annotations,
            "candidates": self.candidates.iter().map(|f| texts(f)).collect::<Vec<_>>(),
        });
        if self.members.iter().any(|m| m.witness.is_some()) {
            out["witnesses"] = self
                .members
                .iter()
                .map(|m| m.witness.as_deref().map_or(Value::Null, texts))
                .collect::<Vec<_>>()
                .into();
        }
        out
    }
}

/// `spectrum(ρ, kind)` through the homology route.
pub fn spectrum<T: Scalar>(rho: &Representation<T>, kind: SpectrumKind, settings: &Settings) -> Result<SpectrumReport<T>> {
    kind.check(rho.algebra().dim())?;
    SpectralData::compute(rho, settings)?.report(kind)
}

/// `σ_p(ρ)` through the homology route.
pub fn sigma_p<T: Scalar>(rho: &Representation<T>, p: usize, settings: &Settings) -> Result<Vec<Character<T>>> {
    if p > rho.algebra().dim() {
        return Err(Error::Precondition(format!("degree {p} outside 0..={}", rho.algebra().dim())));
    }
    Ok(SpectralData::compute(rho, settings)?.sigma_p(p))
}

/// The Taylor spectrum read off the joint eigencharacters. Only valid for
/// nilpotent algebras; `override_nilpotency` forces it anyway.
pub fn spectrum_via_eigencharacters<T: Scalar>(
    rho: &Representation<T>,
    override_nilpotency: bool,
    tol: &Tolerances,
) -> Result<SpectrumReport<T>> {
    let mut annotations = Vec::new();
    if !rho.algebra().is_nilpotent() {
        if !override_nilpotency {
            return Err(Error::HypothesisViolation(
                "the eigencharacter description of the spectrum needs a nilpotent algebra".into(),
            ));
        }
        annotations.push("nilpotency override: the algebra is not nilpotent; the result may miss spectral points".into());
    }
    let members = joint_eigencharacters(rho, tol)?
        .into_iter()
        .map(|e| Member { f: e.f, betti: None, witness: Some(e.witness) })
        .collect::<Vec<_>>();
    let candidates = members.iter().map(|m| m.f.clone()).collect();
    Ok(SpectrumReport {
        kind: SpectrumKind::Taylor,
        backend: T::BACKEND.to_string(),
        route: Route::Eigencharacter,
        members,
        annotations,
        candidates,
    })
}

pub fn same_set<T: Scalar>(a: &[Character<T>], b: &[Character<T>], tol: f64) -> bool {
    subset(a, b, tol) && subset(b, a, tol)
}

pub fn subset<T: Scalar>(a: &[Character<T>], b: &[Character<T>], tol: f64) -> bool {
    a.iter().all(|f| b.iter().any(|g| vectors_approx_eq(f, g, tol)))
}

#[derive(Clone, Debug, PartialEq)]
pub struct CrossValidation<T> {
    pub nilpotent: bool,
    pub eigencharacters: Vec<Character<T>>,
    pub taylor: Vec<Character<T>>,
    pub equal: bool,
    /// `eigencharacters ⊆ taylor`.
    pub contained: bool,
    pub strict: bool,
}

impl<T: Scalar> CrossValidation<T> {
    /// Nilpotent: the routes agree. Otherwise: containment holds.
    pub fn consistent(&self) -> bool {
        if self.nilpotent {
            self.equal
        } else {
            self.contained
        }
    }

    pub fn to_json(&self) -> Value {
        let set = |s: &[Character<T>]| s.iter().map(|f| f.iter().map(Scalar::text).collect::<Vec<_>>()).collect::<Vec<_>>();
        json!({
            "nilpotent": self.nilpotent,
            "eigencharacters": set(&self.eigencharacters),
            "taylor": set(&self.taylor),
            "equal": self.equal,
            "contained": self.contained,
            "strict": self.strict,
            "verdict": if self.consistent() { "consistent" } else { "inconsistent" },
        })
    }
}

/// Both routes side by side.
pub fn cross_validate<T: Scalar>(rho: &Representation<T>, settings: &Settings) -> Result<CrossValidation<T>> {
    if !rho.algebra().is_solvable() {
        return Err(Error::NotSolvable);
    }
    let tol = settings.tol.dedup;
    let eigencharacters: Vec<_> = joint_eigencharacters(rho, &settings.tol)?.into_iter().map(|e| e.f).collect();
    let taylor = spectrum(rho, SpectrumKind::Taylor, settings)?.characters();
    let equal = same_set(&eigencharacters, &taylor, tol);
    let contained = subset(&eigencharacters, &taylor, tol);
    Ok(CrossValidation {
        nilpotent: rho.algebra().is_nilpotent(),
        strict: contained && !equal,
        eigencharacters,
        taylor,
        equal,
        contained,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProjectionReport<T> {
    pub kind: SpectrumKind,
    /// Kind used on the ideal (`k` clamped to `dim I`).
    pub restricted_kind: SpectrumKind,
    pub ideal_dim: usize,
    pub projected: Vec<Character<T>>,
    pub restricted: Vec<Character<T>>,
    pub equal: bool,
}

impl<T: Scalar> ProjectionReport<T> {
    pub fn to_json(&self, names: &[String], ideal: &Subspace) -> Value {
        let set = |s: &[Character<T>]| s.iter().map(|f| f.iter().map(Scalar::text).collect::<Vec<_>>()).collect::<Vec<_>>();
        json!({
            "kind": self.kind.to_string(),
            "restricted_kind": self.restricted_kind.to_string(),
            "ideal": ideal.describe(names),
            "ideal_dim": self.ideal_dim,
            "projected": set(&self.projected),
            "restricted": set(&self.restricted),
            "equal": self.equal,
        })
    }
}

/// Compares `π(σ_*(ρ))` with `σ_*(ρ|_I)`.
pub fn projection_check<T: Scalar>(
    rho: &Representation<T>,
    ideal: &Subspace,
    kind: SpectrumKind,
    settings: &Settings,
) -> Result<ProjectionReport<T>> {
    Ok(projection_checks(rho, ideal, &[kind], settings)?.remove(0))
}

/// [`projection_check`] for several kinds, computing the homology of `ρ` and
/// of `ρ|_I` once.
pub fn projection_checks<T: Scalar>(
    rho: &Representation<T>,
    ideal: &Subspace,
    kinds: &[SpectrumKind],
    settings: &Settings,
) -> Result<Vec<ProjectionReport<T>>> {
    rho.algebra().check_ideal(ideal)?;
    for kind in kinds {
        kind.check(rho.algebra().dim())?;
    }
    let full = SpectralData::compute(rho, settings)?;
    let restricted_data = SpectralData::compute(&rho.restrict(ideal)?, settings)?;
    kinds
        .iter()
        .map(|&kind| {
            let restricted_kind = kind.k().map_or(kind, |k| kind.with_k(k.min(ideal.dim())));
            let mut projected: Vec<Character<T>> = full
                .report(kind)?
                .members
                .iter()
                .map(|m| ideal.basis().iter().map(|b| evaluate(&m.f, b)).collect())
                .collect();
            projected = dedup_characters(projected, settings.tol.dedup);
            sort_characters(&mut projected);
            let restricted = restricted_data.report(restricted_kind)?.characters();
            let equal = same_set(&projected, &restricted, settings.tol.dedup);
            Ok(ProjectionReport { kind, restricted_kind, ideal_dim: ideal.dim(), projected, restricted, equal })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct DualityReport<T> {
    pub k: usize,
    /// `{0} ∪ σ_{δ,k}(ρ)`.
    pub delta: Vec<Character<T>>,
    /// `{0} ∪ σ_{π,k}(ρ*)`.
    pub pi_adjoint: Vec<Character<T>>,
    pub equal: bool,
}

/// `{0} ∪ σ_{δ,k}(ρ) = {0} ∪ σ_{π,k}(ρ*)`, both evaluated on the union of
/// the two candidate sets.
pub fn adjoint_duality_check<T: Scalar>(rho: &Representation<T>, k: usize, settings: &Settings) -> Result<DualityReport<T>> {
    if !rho.algebra().is_nilpotent() {
        return Err(Error::NotNilpotent);
    }
    let n = rho.algebra().dim();
    SpectrumKind::Delta(k).check(n)?;
    let adjoint = rho.adjoint();
    let mut candidates = homology_candidates(rho, &settings.tol)?;
    candidates.extend(homology_candidates(&adjoint, &settings.tol)?);
    let candidates = dedup_characters(candidates, settings.tol.dedup);
    let augment = |mut set: Vec<Character<T>>| {
        set.push(vec![T::zero(); n]);
        let mut set = dedup_characters(set, settings.tol.dedup);
        sort_characters(&mut set);
        set
    };
    let delta =
        augment(SpectralData::on_candidates(rho, candidates.clone(), settings)?.report(SpectrumKind::Delta(k))?.characters());
    let pi_adjoint =
        augment(SpectralData::on_candidates(&adjoint, candidates, settings)?.report(SpectrumKind::Pi(k))?.characters());
    let equal = same_set(&delta, &pi_adjoint, settings.tol.dedup);
    Ok(DualityReport { k, delta, pi_adjoint, equal })
}
