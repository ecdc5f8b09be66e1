//! Fixture catalog, seeded generators and batch experiments.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::koszul::{complex_homotopy, verify_homotopy, ChainComplex};
use crate::lie::LieAlgebra;
use crate::numeric::{parse_exact, vector_text, Backend, Exact, Float, Matrix, Scalar, Settings};
use crate::representation::Representation;
use crate::spectra::{
    joint_eigencharacters, same_set, subset, Character, SpectralData, SpectrumKind, FLOAT_HOMOTOPY_BOUND,
};

fn unit(m: usize, r: usize, c: usize) -> Matrix<Exact> {
    let mut a = Matrix::zeros(m, m);
    a[(r, c)] = Exact::one();
    a
}

fn ints(c: &[i64]) -> Vec<Exact> {
    c.iter().map(|&x| Exact::from_i64(x)).collect()
}

pub fn heisenberg() -> LieAlgebra {
    LieAlgebra::from_int_brackets(&["x", "y", "z"], &[(0, 1, &[0, 0, 1])]).expect("valid constants")
}

/// `[x, y] = y`.
pub fn affine_line() -> LieAlgebra {
    LieAlgebra::from_int_brackets(&["x", "y"], &[(0, 1, &[0, 1])]).expect("valid constants")
}

/// `[e1, e2] = e3`, `[e1, e3] = e4`.
pub fn filiform4() -> LieAlgebra {
    LieAlgebra::from_int_brackets(&["e1", "e2", "e3", "e4"], &[(0, 1, &[0, 0, 1, 0]), (0, 2, &[0, 0, 0, 1])])
        .expect("valid constants")
}

pub fn a1_rep() -> Representation<Exact> {
    Representation::new(LieAlgebra::abelian(&["e1"]), 2, vec![Matrix::from_i64(&[&[2, 0], &[0, 3]])])
        .expect("shapes match")
}

/// `ρ(x) = E12`, `ρ(y) = E23`, `ρ(z) = E13`.
pub fn h3_rep() -> Representation<Exact> {
    Representation::new(heisenberg(), 3, vec![unit(3, 0, 1), unit(3, 1, 2), unit(3, 0, 2)]).expect("shapes match")
}

/// `ρ(x) = E11`, `ρ(y) = E12`.
pub fn s2_rep() -> Representation<Exact> {
    Representation::new(affine_line(), 2, vec![unit(2, 0, 0), unit(2, 0, 1)]).expect("shapes match")
}

/// `ρ(e1) = E12 + E23 + E34`, `ρ(e2) = E34`, `ρ(e3) = E24`, `ρ(e4) = E14`.
pub fn f4_rep() -> Representation<Exact> {
    let e1 = unit(4, 0, 1).add(&unit(4, 1, 2)).add(&unit(4, 2, 3));
    Representation::new(filiform4(), 4, vec![e1, unit(4, 2, 3), unit(4, 1, 3), unit(4, 0, 3)]).expect("shapes match")
}

/// Zero representation of the Heisenberg algebra on `C^m`.
pub fn zero_rep(m: usize) -> Representation<Exact> {
    Representation::zero(heisenberg(), m)
}

/// `ρ(x) = E12`, `ρ(y) = E23`, `ρ(z) = 0`: violates the homomorphism law at `(x, y)`.
pub fn broken_h3_rep() -> Representation<Exact> {
    Representation::new(heisenberg(), 3, vec![unit(3, 0, 1), unit(3, 1, 2), Matrix::zeros(3, 3)]).expect("shapes match")
}

#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: String,
    pub rep: Representation<Exact>,
    pub expected_taylor: Vec<Character<Exact>>,
    pub expected_eigencharacters: Vec<Character<Exact>>,
    pub notes: &'static str,
}

pub fn catalog() -> Vec<Fixture> {
    vec![
        Fixture {
            name: "A1".into(),
            rep: a1_rep(),
            expected_taylor: vec![ints(&[2]), ints(&[3])],
            expected_eigencharacters: vec![ints(&[2]), ints(&[3])],
            notes: "one diagonal operator diag(2,3)",
        },
        Fixture {
            name: "H3".into(),
            rep: h3_rep(),
            expected_taylor: vec![ints(&[0, 0, 0])],
            expected_eigencharacters: vec![ints(&[0, 0, 0])],
            notes: "Heisenberg algebra by strictly upper triangular 3x3 matrices",
        },
        Fixture {
            name: "S2".into(),
            rep: s2_rep(),
            expected_taylor: vec![ints(&[0, 0]), ints(&[2, 0])],
            expected_eigencharacters: vec![ints(&[1, 0])],
            notes: "solvable, not nilpotent: H_0 sits at (0,0), H_2 at (2,0), the only eigencharacter is (1,0)",
        },
        Fixture {
            name: "Z_3".into(),
            rep: zero_rep(3),
            expected_taylor: vec![ints(&[0, 0, 0])],
            expected_eigencharacters: vec![ints(&[0, 0, 0])],
            notes: "zero representation of the Heisenberg algebra on C^3",
        },
        Fixture {
            name: "F4".into(),
            rep: f4_rep(),
            expected_taylor: vec![ints(&[0, 0, 0, 0])],
            expected_eigencharacters: vec![ints(&[0, 0, 0, 0])],
            notes: "filiform algebra of dimension 4 on C^4 by nilpotent matrices",
        },
    ]
}

/// Base module used by the generators: `a1`, `h3` or `f4`.
pub fn base_block(algebra: &str) -> Result<Representation<Exact>> {
    match algebra {
        "a1" => Ok(a1_rep()),
        "h3" => Ok(h3_rep()),
        "f4" => Ok(f4_rep()),
        "s2" => Err(Error::NotNilpotent),
        other => Err(Error::Precondition(format!("unknown catalog algebra `{other}` (expected a1|h3|f4)"))),
    }
}

/// Integer combination, coefficients in `[-2, 2]`, of a basis of the
/// annihilator of `L²`.
fn random_character(rng: &mut ChaCha8Rng, algebra: &LieAlgebra) -> Vec<Exact> {
    let n = algebra.dim();
    let derived = algebra.derived_subalgebra();
    let annihilator = if derived.dim() == 0 {
        (0..n).map(|i| Matrix::<Exact>::identity(n).column(i)).collect()
    } else {
        let rows = Matrix::from_fn(derived.dim(), n, |r, c| derived.basis()[r][c].clone());
        rows.nullspace_with(&Default::default())
    };
    let mut f = vec![Exact::zero(); n];
    for a in &annihilator {
        let c = Exact::from_i64(rng.random_range(-2..=2));
        for (x, y) in f.iter_mut().zip(a) {
            *x = x.clone() + c.clone() * y.clone();
        }
    }
    f
}

/// Unit lower times unit upper triangular, off-diagonal entries in `[-1, 1]`,
/// redrawn until every entry has modulus at most 5.
fn random_unimodular(rng: &mut ChaCha8Rng, m: usize) -> Matrix<Exact> {
    loop {
        let lower: Vec<Vec<i64>> =
            (0..m).map(|r| (0..m).map(|c| if r == c { 1 } else if r > c { rng.random_range(-1..=1) } else { 0 }).collect()).collect();
        let upper: Vec<Vec<i64>> =
            (0..m).map(|r| (0..m).map(|c| if r == c { 1 } else if r < c { rng.random_range(-1..=1) } else { 0 }).collect()).collect();
        let product: Vec<Vec<i64>> =
            (0..m).map(|r| (0..m).map(|c| (0..m).map(|k| lower[r][k] * upper[k][c]).sum()).collect()).collect();
        if product.iter().flatten().all(|x| x.abs() <= 5) {
            return Matrix::from_fn(m, m, |r, c| Exact::from_i64(product[r][c]));
        }
    }
}

#[derive(Clone, Debug)]
pub struct RandomRep {
    pub rep: Representation<Exact>,
    /// One character per direct summand; the first block is untwisted.
    pub twists: Vec<Vec<Exact>>,
    pub conjugator: Matrix<Exact>,
}

/// Deterministic in `seed`: base block, then twisted copies of it while they
/// fit, then one-dimensional character blocks, all conjugated by a random
/// unimodular matrix.
pub fn random_nilpotent_rep(seed: u64, algebra: &str, m: usize) -> Result<RandomRep> {
    let base = base_block(algebra)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let l = base.algebra().clone();
    let mut blocks: Vec<Representation<Exact>> = Vec::new();
    let mut twists = Vec::new();
    let mut used = 0;
    while used + base.dim() <= m {
        let f = if blocks.is_empty() { vec![Exact::zero(); l.dim()] } else { random_character(&mut rng, &l) };
        let neg: Vec<Exact> = f.iter().map(|c| -c.clone()).collect();
        blocks.push(base.shift_unchecked(&neg));
        twists.push(f);
        used += base.dim();
    }
    while used < m {
        let f = random_character(&mut rng, &l);
        blocks.push(Representation::character_block(&l, &f));
        twists.push(f);
        used += 1;
    }
    let mut rep = Representation::zero(l, 0);
    for b in &blocks {
        rep = rep.direct_sum(b)?;
    }
    let conjugator = random_unimodular(&mut rng, m);
    let rep = rep.conjugate(&conjugator, &Default::default())?;
    Ok(RandomRep { rep, twists, conjugator })
}

/// Algebra and module size used for suite instance `seed`: `dim L ≤ 4`,
/// `m ≤ 8`.
pub fn suite_instance(seed: u64) -> Result<(String, RandomRep)> {
    let algebras = ["h3", "f4", "a1"];
    let algebra = algebras[(seed % 3) as usize];
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    let m = rng.random_range(1..=8);
    let r = random_nilpotent_rep(seed, algebra, m)?;
    Ok((format!("seed {seed} ({algebra}, m={m})"), r))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProxyConfig {
    pub algebra: String,
    pub schedule: Vec<usize>,
    pub rank_budget: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_backend")]
    pub backend: Backend,
}

fn default_backend() -> Backend {
    Backend::Exact
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProxyRow {
    pub m: usize,
    pub rank_budget: usize,
    pub sigma_size: usize,
    pub eigenchar_size: usize,
    /// `σ(ρ) = {0} ∪ eigencharacters`.
    pub equality: bool,
    /// `Σ rank ρ(e_i) < m ⇒ 0 ∈ σ(ρ)`.
    pub zero_in_sigma: bool,
    pub elapsed_ms: u128,
}

/// Catalog block padded with zeros to each `m`, conjugated, every operator
/// of rank at most the budget.
pub fn finite_rank_proxy(config: &ProxyConfig, settings: &Settings) -> Result<Vec<ProxyRow>> {
    if config.schedule.iter().any(|&m| config.rank_budget >= m) {
        return Err(Error::Precondition("rank budget must be below every m in the schedule".into()));
    }
    let base = base_block(&config.algebra)?;
    if let Some(&m) = config.schedule.iter().find(|&&m| m < base.dim()) {
        return Err(Error::Precondition(format!("m={m} is smaller than the base module")));
    }
    let ranks: Vec<usize> = base.matrices().iter().map(|a| a.rank()).collect();
    if ranks.iter().any(|&r| r > config.rank_budget) {
        return Err(Error::Precondition(format!("base operators have ranks {ranks:?}, above the budget")));
    }
    config
        .schedule
        .par_iter()
        .map(|&m| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ (m as u64).wrapping_mul(0xA24B_AED4_963E_E407));
            let padded = base.direct_sum(&Representation::zero(base.algebra().clone(), m - base.dim()))?;
            let rep = padded.conjugate(&random_unimodular(&mut rng, m), &settings.tol)?;
            match config.backend {
                Backend::Exact => proxy_row(&rep, config.rank_budget, settings),
                Backend::Float => proxy_row(&rep.to_float(), config.rank_budget, settings),
            }
        })
        .collect()
}

fn proxy_row<T: Scalar>(rep: &Representation<T>, rank_budget: usize, settings: &Settings) -> Result<ProxyRow> {
    let start = Instant::now();
    let n = rep.algebra().dim();
    let sigma = SpectralData::compute(rep, settings)?.report(SpectrumKind::Taylor)?.characters();
    let mut expected: Vec<Character<T>> = joint_eigencharacters(rep, &settings.tol)?.into_iter().map(|e| e.f).collect();
    let eigenchar_size = expected.len();
    let zero = vec![T::zero(); n];
    if !subset(std::slice::from_ref(&zero), &expected, settings.tol.dedup) {
        expected.push(zero.clone());
    }
    let zero_in_sigma = subset(&[zero], &sigma, settings.tol.dedup);
    if rep.total_rank(&settings.tol) < rep.dim() && !zero_in_sigma {
        return Err(Error::Precondition(format!("m={}: common kernel is nonzero but 0 is not in σ", rep.dim())));
    }
    Ok(ProxyRow {
        m: rep.dim(),
        rank_budget,
        sigma_size: sigma.len(),
        eigenchar_size,
        equality: same_set(&sigma, &expected, settings.tol.dedup),
        zero_in_sigma,
        elapsed_ms: start.elapsed().as_millis(),
    })
}

/// CSV with header `m,rank_budget,sigma_size,eigenchar_size,equality,elapsed_ms`.
/// Without `timing` the last column is left empty so that the bytes depend
/// only on the configuration.
pub fn proxy_csv(rows: &[ProxyRow], timing: bool) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["m", "rank_budget", "sigma_size", "eigenchar_size", "equality", "elapsed_ms"])
        .expect("in-memory write");
    for r in rows {
        let elapsed = if timing { r.elapsed_ms.to_string() } else { String::new() };
        w.write_record([
            r.m.to_string(),
            r.rank_budget.to_string(),
            r.sigma_size.to_string(),
            r.eigenchar_size.to_string(),
            r.equality.to_string(),
            elapsed,
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii output")
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub instance: String,
    pub check: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct SuiteSummary {
    pub instances: usize,
    pub results: Vec<CheckResult>,
}

impl SuiteSummary {
    pub fn passed(&self) -> usize {
        self.results.iter().filter(|r| r.passed).count()
    }

    pub fn failed(&self) -> usize {
        self.results.len() - self.passed()
    }

    pub fn to_json(&self) -> Value {
        let failures: Vec<&CheckResult> = self.results.iter().filter(|r| !r.passed).collect();
        json!({
            "instances": self.instances,
            "checks": self.results.len(),
            "passed": self.passed(),
            "failed": self.failed(),
            "failures": failures,
        })
    }
}

/// Runs every invariant on the catalog plus `seeds` generated instances.
pub fn run_property_suite(seeds: u64, settings: &Settings) -> Result<SuiteSummary> {
    let mut instances: Vec<(String, Representation<Exact>)> =
        catalog().into_iter().map(|f| (format!("catalog {}", f.name), f.rep)).collect();
    for seed in 0..seeds {
        let (name, r) = suite_instance(seed)?;
        instances.push((name, r.rep));
    }
    Ok(run_suite_on(&instances, settings))
}

pub fn run_suite_on(instances: &[(String, Representation<Exact>)], settings: &Settings) -> SuiteSummary {
    let results = instances.par_iter().flat_map_iter(|(name, rep)| check_instance(name, rep, settings)).collect();
    SuiteSummary { instances: instances.len(), results }
}

/// All invariants for one instance. A representation failing validation
/// reports only that failure.
pub fn check_instance(name: &str, rep: &Representation<Exact>, settings: &Settings) -> Vec<CheckResult> {
    let mut out = Vec::new();
    let mut record = |check: &'static str, outcome: Result<String, String>| {
        let (passed, detail) = match outcome {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        out.push(CheckResult { instance: name.to_string(), check, passed, detail });
    };
    if let Err(v) = rep.validate(&settings.tol) {
        record("validate", Err(format!("homomorphism law fails at {:?}", v.iter().map(|x| x.pair).collect::<Vec<_>>())));
        return out;
    }
    record("validate", Ok(String::new()));
    let data = match SpectralData::compute(rep, settings) {
        Ok(d) => d,
        Err(e) => {
            record("spectra", Err(e.to_string()));
            return out;
        }
    };
    let n = rep.algebra().dim();
    let tol = settings.tol.dedup;
    let report = |kind| data.report(kind).map(|r| r.characters()).map_err(|e| e.to_string());
    let outcome = (|| -> Result<String, String> {
        let taylor = report(SpectrumKind::Taylor)?;
        let text = taylor.iter().map(|f| format!("({})", vector_text(f))).collect::<Vec<_>>().join(" ");
        let mut problems = Vec::new();
        let mut rng = ChaCha8Rng::seed_from_u64(0x5EED);
        let shifts: Vec<Vec<Exact>> = std::iter::once(vec![Exact::zero(); n])
            .chain((0..4).map(|_| random_character(&mut rng, rep.algebra())))
            .chain(data.candidates.iter().cloned())
            .collect();
        for f in &shifts {
            let c = ChainComplex::of(&rep.shift_unchecked(f), settings).map_err(|e| e.to_string())?;
            if let Err(v) = c.validate(&settings.tol) {
                problems.push(format!("d∘d ≠ 0 at f=({}) in degree {}", vector_text(f), v[0].degree));
            }
            if n >= 1 && c.homology(&settings.tol).betti.euler_characteristic() != 0 {
                problems.push(format!("Euler characteristic nonzero at f=({})", vector_text(f)));
            }
        }
        if rep.dim() >= 1 && taylor.is_empty() {
            problems.push("Taylor spectrum is empty".into());
        }
        for k in 0..n {
            for kind in [SpectrumKind::Delta(k), SpectrumKind::Pi(k)] {
                if !subset(&report(kind)?, &report(kind.with_k(k + 1))?, tol) {
                    problems.push(format!("{kind} is not contained in {}", kind.with_k(k + 1)));
                }
            }
        }
        if !same_set(&report(SpectrumKind::Delta(n))?, &taylor, tol) || !same_set(&report(SpectrumKind::Pi(n))?, &taylor, tol) {
            problems.push("top δ/π spectra differ from the Taylor spectrum".into());
        }
        if !same_set(&report(SpectrumKind::Split)?, &taylor, tol) {
            problems.push("split spectrum differs from the Taylor spectrum".into());
        }
        for kind in SpectrumKind::all(n).into_iter().filter(SpectrumKind::is_essential) {
            if !report(kind)?.is_empty() {
                problems.push(format!("{kind} is not empty"));
            }
        }
        if rep.total_rank(&settings.tol) < rep.dim() && !subset(&[vec![Exact::zero(); n]], &taylor, tol) {
            problems.push("common kernel is nonzero but 0 is not in σ".into());
        }
        if rep.algebra().is_nilpotent() {
            let eig: Vec<_> = joint_eigencharacters(rep, &settings.tol).map_err(|e| e.to_string())?.into_iter().map(|e| e.f).collect();
            for k in 0..=n {
                if !same_set(&report(SpectrumKind::Delta(k))?, &eig, tol) || !same_set(&report(SpectrumKind::Pi(k))?, &eig, tol) {
                    problems.push(format!("δ/π spectra at k={k} differ from the eigencharacters"));
                }
            }
        }
        if problems.is_empty() {
            Ok(format!("σ = {text}"))
        } else {
            Err(problems.join("; "))
        }
    })();
    record("spectra", outcome);
    record("homotopies", check_homotopies(&data, settings));
    if rep.algebra().is_nilpotent() {
        record("projection", check_projections(rep, &data, settings));
    }
    out
}

/// Every candidate outside `σ` admits verified homotopies in every degree.
fn check_homotopies(data: &SpectralData<Exact>, settings: &Settings) -> Result<String, String> {
    let rep = data.representation();
    let mut checked = 0;
    for (f, b) in data.candidates.iter().zip(&data.betti) {
        if !b.is_exact() {
            continue;
        }
        let complex = ChainComplex::of(&rep.shift_unchecked(f), settings).map_err(|e| e.to_string())?;
        for p in 0..=rep.algebra().dim() {
            let h = complex_homotopy(&complex, p, &settings.tol).map_err(|e| format!("f=({}): {e}", vector_text(f)))?;
            if !verify_homotopy(&complex, &h, FLOAT_HOMOTOPY_BOUND) {
                return Err(format!("homotopy identity fails at f=({}), p={p}", vector_text(f)));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} homotopies verified"))
}

/// `π(σ_*(L)) = σ_*(I)` for each ideal of the Jordan-Hölder chain and each
/// non-essential kind.
fn check_projections(rep: &Representation<Exact>, data: &SpectralData<Exact>, settings: &Settings) -> Result<String, String> {
    let chain = rep.algebra().jordan_holder_chain().map_err(|e| e.to_string())?;
    let n = rep.algebra().dim();
    let mut count = 0;
    for ideal in &chain {
        let restricted = rep.restrict(ideal).map_err(|e| e.to_string())?;
        let rdata = SpectralData::compute(&restricted, settings).map_err(|e| e.to_string())?;
        for kind in SpectrumKind::non_essential(n) {
            let full = data.report(kind).map_err(|e| e.to_string())?.characters();
            let projected: Vec<Character<Exact>> =
                full.iter().map(|f| ideal.basis().iter().map(|b| crate::lie::evaluate(f, b)).collect()).collect();
            let rkind = kind.k().map_or(kind, |k| kind.with_k(k.min(ideal.dim())));
            let small = rdata.report(rkind).map_err(|e| e.to_string())?.characters();
            if !same_set(&projected, &small, settings.tol.dedup) {
                return Err(format!("{kind} fails on the ideal of dimension {}", ideal.dim()));
            }
            count += 1;
        }
    }
    Ok(format!("{count} projections equal"))
}

/// Parses a character given as comma-separated scalars.
pub fn parse_character(text: &str, n: usize) -> Result<Vec<Exact>> {
    let parts: Vec<&str> = if text.trim().is_empty() { Vec::new() } else { text.split(',').map(str::trim).collect() };
    if parts.len() != n {
        return Err(Error::Input { path: "character".into(), message: format!("expected {n} coefficients, got {}", parts.len()) });
    }
    parts.into_iter().map(parse_exact).collect()
}

/// Converts an exact character to the requested backend.
pub fn character_to<T: Scalar>(f: &[Exact]) -> Vec<T> {
    f.iter().map(T::from_exact).collect()
}

/// Float copy of an exact set, for cross-backend comparison.
pub fn to_float_set(set: &[Character<Exact>]) -> Vec<Character<Float>> {
    set.iter().map(|f| character_to(f)).collect()
}
