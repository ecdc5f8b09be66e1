//! One line per acceptance criterion. Runs under `cargo test` with its own
//! harness so the lines are printed as they are decided.
//!
//! A criterion listed in [`ANALYZED_FAILURES`] prints `FAIL` and does not
//! fail the run, provided what it observes is exactly the analyzed outcome;
//! any other result, pass included, fails the run so the analysis gets
//! revisited.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{as_int_set, betti, character_grid, differential, exs, mat_mul, IntRep};
use joint_spectra::koszul::{splitting_homotopy, ChainComplex};
use joint_spectra::lab::{catalog, finite_rank_proxy, proxy_csv, suite_instance, to_float_set, Fixture, ProxyConfig};
use joint_spectra::lie::Subspace;
use joint_spectra::numeric::{Backend, Exact, Float, Matrix, Scalar, Settings};
use joint_spectra::representation::Representation;
use joint_spectra::spectra::{
    joint_eigencharacters, projection_checks, same_set, subset, weight_candidates, SpectralData, SpectrumKind,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Time bound for criterion 1, wall clock.
const THEOREM_FOUR_BUDGET: Duration = Duration::from_secs(60);
/// Time bound for criterion 2, wall clock.
const HEISENBERG_BUDGET: Duration = Duration::from_secs(1);
/// Largest entry of `d h + h d − I` accepted from the float backend.
const FLOAT_HOMOTOPY_RESIDUAL: f64 = 1e-6;
/// Seeded random instances used throughout.
const SEEDS: u64 = 100;
/// Random character shifts for criterion 7.
const SHIFTS: u64 = 100;

const ANALYZED_FAILURES: &[u32] = &[3];

struct Outcome {
    pass: bool,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Outcome {
    Outcome { pass: true, detail: detail.into() }
}

fn fail(detail: impl Into<String>) -> Outcome {
    Outcome { pass: false, detail: detail.into() }
}

fn settings() -> Settings {
    Settings::default()
}

fn fixture(name: &str) -> Fixture {
    catalog().into_iter().find(|f| f.name == name).expect("catalog fixture")
}

fn seeded() -> Vec<(String, Representation<Exact>)> {
    (0..SEEDS)
        .map(|seed| {
            let (name, r) = suite_instance(seed).expect("suite instance");
            (name, r.rep)
        })
        .collect()
}

/// Catalog plus seeded instances.
fn suite() -> Vec<(String, Representation<Exact>)> {
    let mut all: Vec<(String, Representation<Exact>)> = catalog().into_iter().map(|f| (f.name, f.rep)).collect();
    all.extend(seeded());
    all
}

fn chars(data: &SpectralData<Exact>, kind: SpectrumKind) -> Vec<Vec<Exact>> {
    data.report(kind).expect("valid kind").characters()
}

fn first_failure<T: Sync>(items: Vec<T>, check: impl Fn(&T) -> Result<(), String> + Sync) -> Option<String> {
    items.par_iter().map(|x| check(x).err()).collect::<Vec<_>>().into_iter().flatten().next()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut instances: Vec<(String, Representation<Exact>)> =
        ["H3", "Z_3", "F4"].iter().map(|n| (n.to_string(), fixture(n).rep)).collect();
    instances.extend(seeded());
    let count = instances.len();
    let failure = first_failure(instances, |(name, rep)| {
        let s = settings();
        let n = rep.algebra().dim();
        let data = SpectralData::compute(rep, &s).map_err(|e| format!("{name}: {e}"))?;
        let sigma = chars(&data, SpectrumKind::Taylor);
        let eig: Vec<Vec<Exact>> = joint_eigencharacters(rep, &s.tol).map_err(|e| format!("{name}: {e}"))?.into_iter().map(|e| e.f).collect();
        if !same_set(&sigma, &eig, 0.0) {
            return Err(format!("{name}: taylor differs from the eigencharacters"));
        }
        for k in 0..=n {
            for kind in [SpectrumKind::Delta(k), SpectrumKind::Pi(k)] {
                if !same_set(&chars(&data, kind), &sigma, 0.0) {
                    return Err(format!("{name}: {kind} differs from taylor"));
                }
            }
        }
        Ok(())
    });
    let elapsed = start.elapsed();
    match failure {
        Some(f) => fail(f),
        None if elapsed > THEOREM_FOUR_BUDGET => fail(format!("{count} instances agree but took {elapsed:.1?} > {THEOREM_FOUR_BUDGET:?}")),
        None => pass(format!("{count} instances, all routes equal, within {THEOREM_FOUR_BUDGET:?}")),
    }
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let s = settings();
    let rep = fixture("H3").rep;
    let data = SpectralData::compute(&rep, &s).expect("H3 spectra");
    let sigma = chars(&data, SpectrumKind::Taylor);
    let at_zero = data.candidates.iter().zip(&data.betti).find(|(f, _)| f.iter().all(Scalar::is_zero)).map(|(_, b)| b.0.clone());
    let mut others_exact = true;
    for f in weight_candidates(&rep, &s.tol).expect("H3 weights").into_iter().chain(data.candidates.clone()) {
        if f.iter().all(Scalar::is_zero) {
            continue;
        }
        let c = ChainComplex::of(&rep.shift(&f, &s.tol).expect("character"), &s).expect("complex");
        others_exact &= c.homology(&s.tol).betti.is_exact();
    }
    let elapsed = start.elapsed();
    // Independent Betti numbers at f = 0 from singular values.
    let oracle = betti(&IntRep::of(&rep).unwrap());
    let zero_set = as_int_set(&sigma) == Some(vec![vec![0, 0, 0]]);
    match at_zero {
        _ if !zero_set => fail(format!("σ(H3) has {} members, expected {{0}}", sigma.len())),
        Some(b) if b != oracle => fail(format!("Betti at 0 is {b:?}, oracle {oracle:?}")),
        Some(b) if b.iter().all(|&h| h == 0) => fail("Betti vector at 0 vanishes"),
        None => fail("0 is not among the homology candidates"),
        Some(_) if !others_exact => fail("homology at a nonzero weight candidate"),
        Some(_) if elapsed > HEISENBERG_BUDGET => fail(format!("took {elapsed:.1?} > {HEISENBERG_BUDGET:?}")),
        Some(b) => pass(format!("σ = {{0}}, Betti at 0 = {b:?}, other candidates exact, within {HEISENBERG_BUDGET:?}")),
    }
}

/// What the S2 fixture actually yields, from the brute-force oracle: the
/// eigencharacter (1,0) lies outside σ = {(0,0), (2,0)}.
const S2_TRUE_SIGMA: [[i64; 2]; 2] = [[0, 0], [2, 0]];
const S2_TRUE_EIGEN: [[i64; 2]; 1] = [[1, 0]];

fn criterion_3() -> Outcome {
    let s = settings();
    let rep = fixture("S2").rep;
    let sigma = as_int_set(&SpectralData::compute(&rep, &s).map(|d| chars(&d, SpectrumKind::Taylor)).expect("S2 spectra")).unwrap();
    let eig: Vec<Vec<Exact>> = joint_eigencharacters(&rep, &s.tol).expect("S2 eigencharacters").into_iter().map(|e| e.f).collect();
    let eig = as_int_set(&eig).unwrap();
    let claimed_eig = vec![vec![1, 0]];
    let claimed_sigma = vec![vec![0, 0], vec![1, 0]];
    let detail = format!("eigencharacters {eig:?} (claimed {claimed_eig:?}), taylor {sigma:?} (claimed {claimed_sigma:?})");
    if eig == claimed_eig && sigma == claimed_sigma {
        return pass(detail);
    }
    let grid = common::grid_spectrum(&rep, 4);
    let analyzed = sigma == S2_TRUE_SIGMA.map(|r| r.to_vec()) && eig == S2_TRUE_EIGEN.map(|r| r.to_vec()) && grid == sigma;
    fail(format!("{detail}; {}", if analyzed { "matches the analyzed values" } else { "UNANALYZED outcome" }))
}

fn criterion_4() -> Outcome {
    let failure = first_failure(suite(), |(name, rep)| {
        let s = settings();
        let data = SpectralData::compute(rep, &s).map_err(|e| format!("{name}: {e}"))?;
        let sigma = chars(&data, SpectrumKind::Taylor);
        if !same_set(&chars(&data, SpectrumKind::Split), &sigma, 0.0) {
            return Err(format!("{name}: split differs from taylor"));
        }
        // Every candidate off σ, plus a few grid points that are not candidates.
        let mut off: Vec<Vec<Exact>> = data.candidates.iter().filter(|f| !subset(&[(*f).clone()], &sigma, 0.0)).cloned().collect();
        off.extend(
            character_grid(rep, 1).into_iter().map(|f| exs(&f)).filter(|f| !subset(&[f.clone()], &sigma, 0.0)).take(3),
        );
        let float_rep = rep.to_float();
        for f in &off {
            let complex = ChainComplex::of(&rep.shift(f, &s.tol).unwrap(), &s).unwrap();
            let ff: Vec<Float> = f.iter().map(Scalar::to_complex64).collect();
            let float_complex = ChainComplex::of(&float_rep.shift(&ff, &s.tol).unwrap(), &s).unwrap();
            for p in 0..=rep.algebra().dim() {
                let h = splitting_homotopy(rep, f, p, &s).map_err(|e| format!("{name}: exact, degree {p}: {e}"))?;
                if !defect(&complex, &h.h_p, &h.h_prev, p).is_zero() {
                    return Err(format!("{name}: exact identity fails at degree {p}"));
                }
                let h = splitting_homotopy(&float_rep, &ff, p, &s).map_err(|e| format!("{name}: float, degree {p}: {e}"))?;
                let r = defect(&float_complex, &h.h_p, &h.h_prev, p).max_magnitude();
                if r > FLOAT_HOMOTOPY_RESIDUAL {
                    return Err(format!("{name}: float residual {r:e} at degree {p}"));
                }
            }
        }
        Ok(())
    });
    match failure {
        Some(f) => fail(f),
        None => pass(format!("{} instances: split = taylor; exact identity holds, float residual ≤ {FLOAT_HOMOTOPY_RESIDUAL:e}", 5 + SEEDS)),
    }
}

/// `d_{p+1} h_p + h_{p−1} d_p − I_p`, multiplied out here rather than by the
/// library's own checker.
fn defect<T: Scalar>(c: &ChainComplex<T>, h_p: &Matrix<T>, h_prev: &Matrix<T>, p: usize) -> Matrix<T> {
    c.d(p + 1).mul(h_p).add(&h_prev.mul(&c.d(p))).sub(&Matrix::identity(c.dims[p]))
}

fn criterion_5() -> Outcome {
    let instances = suite();
    let count = instances.len();
    let failure = first_failure(instances, |(name, rep)| {
        let data = SpectralData::compute(rep, &settings()).map_err(|e| format!("{name}: {e}"))?;
        let n = rep.algebra().dim();
        let sigma = chars(&data, SpectrumKind::Taylor);
        if rep.dim() >= 1 && sigma.is_empty() {
            return Err(format!("{name}: empty spectrum"));
        }
        for k in 0..n {
            for (a, b) in [(SpectrumKind::Delta(k), SpectrumKind::Delta(k + 1)), (SpectrumKind::Pi(k), SpectrumKind::Pi(k + 1))] {
                if !subset(&chars(&data, a), &chars(&data, b), 0.0) {
                    return Err(format!("{name}: {a} ⊄ {b}"));
                }
            }
        }
        for top in [SpectrumKind::Delta(n), SpectrumKind::Pi(n)] {
            if !same_set(&chars(&data, top), &sigma, 0.0) {
                return Err(format!("{name}: {top} differs from taylor"));
            }
        }
        for kind in SpectrumKind::all(n).into_iter().filter(SpectrumKind::is_essential) {
            let r = data.report(kind).unwrap();
            if !r.members.is_empty() || r.annotations.is_empty() {
                return Err(format!("{name}: essential kind {kind} is nonempty or unannotated"));
            }
        }
        Ok(())
    });
    match failure {
        Some(f) => fail(f),
        None => pass(format!("{count} instances: chains monotone, tops equal σ, essential kinds empty and annotated, σ nonempty")),
    }
}

fn criterion_6() -> Outcome {
    // The chain exists only for nilpotent algebras; S2 has none.
    let instances: Vec<_> = suite().into_iter().filter(|(_, r)| r.algebra().is_nilpotent()).collect();
    let count = instances.len();
    let checks: usize = instances.iter().map(|(_, r)| (r.algebra().dim() + 1) * SpectrumKind::non_essential(r.algebra().dim()).len()).sum();
    let failure = first_failure(instances, |(name, rep)| {
        let s = settings();
        let n = rep.algebra().dim();
        let chain: Vec<Subspace> = rep.algebra().jordan_holder_chain().map_err(|e| format!("{name}: {e}"))?;
        for ideal in &chain {
            let reports = projection_checks(rep, ideal, &SpectrumKind::non_essential(n), &s).map_err(|e| format!("{name}: {e}"))?;
            if let Some(r) = reports.iter().find(|r| !r.equal) {
                return Err(format!("{name}: {} fails on the ideal of dimension {}", r.kind, ideal.dim()));
            }
        }
        Ok(())
    });
    match failure {
        Some(f) => fail(f),
        None => pass(format!("{count} nilpotent instances, {checks} (ideal, kind) pairs, all equal")),
    }
}

fn criterion_7() -> Outcome {
    let s = settings();
    // Every instance at every homology candidate.
    let failure = first_failure(suite(), |(name, rep)| {
        let data = SpectralData::compute(rep, &s).map_err(|e| format!("{name}: {e}"))?;
        for f in &data.candidates {
            check_complex(name, &rep.shift(f, &s.tol).unwrap())?;
        }
        Ok(())
    });
    if let Some(f) = failure {
        return fail(f);
    }
    // Random integer character shifts, one per seed.
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let shifts: Vec<(String, Representation<Exact>)> = (0..SHIFTS)
        .map(|seed| {
            let (name, r) = suite_instance(seed).unwrap();
            let grid = character_grid(&r.rep, 2);
            let f = exs(&grid[rng.random_range(0..grid.len())]);
            (format!("{name} shifted by {}", joint_spectra::numeric::vector_text(&f)), r.rep.shift(&f, &s.tol).unwrap())
        })
        .collect();
    match first_failure(shifts, |(name, rep)| check_complex(name, rep)) {
        Some(f) => fail(f),
        None => pass(format!("{} instances at all candidates plus {SHIFTS} random shifts: d∘d = 0 exactly, Euler sum 0", 5 + SEEDS)),
    }
}

/// `d_p d_{p+1} = 0` both from the library and from the integer expansion,
/// and a vanishing Euler characteristic.
fn check_complex(name: &str, rep: &Representation<Exact>) -> Result<(), String> {
    let s = settings();
    let c = ChainComplex::of(rep, &s).map_err(|e| format!("{name}: {e}"))?;
    let n = rep.algebra().dim();
    for p in 1..n {
        if !c.d(p).mul(&c.d(p + 1)).is_zero() {
            return Err(format!("{name}: d_{p} d_{} ≠ 0", p + 1));
        }
    }
    if let Some(int) = IntRep::of(rep) {
        for p in 1..n {
            if mat_mul(&differential(&int, p), &differential(&int, p + 1)).iter().flatten().any(|&v| v != 0) {
                return Err(format!("{name}: integer expansion gives d_{p} d_{} ≠ 0", p + 1));
            }
        }
    }
    let h = c.homology(&s.tol);
    if h.betti.euler_characteristic() != 0 {
        return Err(format!("{name}: Euler sum {}", h.betti.euler_characteristic()));
    }
    Ok(())
}

fn criterion_8() -> Outcome {
    let s = settings();
    let config = ProxyConfig { algebra: "h3".into(), schedule: vec![6, 10, 14], rank_budget: 3, seed: 7, backend: Backend::Exact };
    let rows = match finite_rank_proxy(&config, &s) {
        Ok(r) => r,
        Err(e) => return fail(e.to_string()),
    };
    let first = proxy_csv(&rows, false);
    let second = proxy_csv(&finite_rank_proxy(&config, &s).unwrap(), false);
    let expected = "m,rank_budget,sigma_size,eigenchar_size,equality,elapsed_ms\n6,3,1,1,true,\n10,3,1,1,true,\n14,3,1,1,true,\n";
    if !rows.iter().all(|r| r.equality && r.zero_in_sigma) {
        fail("a row reports σ ≠ {0} ∪ eigencharacters")
    } else if first != second {
        fail("tables differ between runs")
    } else if first != expected {
        fail(format!("unexpected table {first:?}"))
    } else {
        pass("m ∈ {6, 10, 14}, budget 3: σ = {0} ∪ eigencharacters on every row, table byte-identical")
    }
}

fn criterion_9() -> Outcome {
    let s = settings();
    let mut compared = 0;
    for f in catalog() {
        let n = f.rep.algebra().dim();
        let exact = SpectralData::compute(&f.rep, &s).expect("exact");
        let float = match SpectralData::compute(&f.rep.to_float(), &s) {
            Ok(d) => d,
            Err(e) => return fail(format!("{}: float backend: {e}", f.name)),
        };
        for kind in SpectrumKind::all(n) {
            let e = to_float_set(&exact.report(kind).unwrap().characters());
            let x = float.report(kind).unwrap().characters();
            if !same_set(&e, &x, s.tol.dedup) || e.len() != x.len() {
                return fail(format!("{}: {kind}: exact {} members, float {}", f.name, e.len(), x.len()));
            }
            compared += 1;
        }
    }
    pass(format!("{} fixtures, {compared} (fixture, kind) pairs identical", catalog().len()))
}

fn main() -> ExitCode {
    let criteria: [(u32, &str, fn() -> Outcome); 9] = [
        (1, "dual-route equality on nilpotent instances", criterion_1),
        (2, "Heisenberg spectrum is {0}", criterion_2),
        (3, "S2 counterexample sets", criterion_3),
        (4, "split = taylor and splitting homotopies", criterion_4),
        (5, "chain structure of the partial spectra", criterion_5),
        (6, "projection property along the chain", criterion_6),
        (7, "complex validity", criterion_7),
        (8, "finite-rank proxy table", criterion_8),
        (9, "backend agreement on the catalog", criterion_9),
    ];
    let mut unexpected = 0;
    for (id, title, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let analyzed = ANALYZED_FAILURES.contains(&id);
        let verdict = if outcome.pass { "PASS" } else { "FAIL" };
        println!("criterion {id} [{verdict}] {title}: {} ({elapsed:.1?})", outcome.detail);
        let ok = if analyzed { !outcome.pass && !outcome.detail.contains("UNANALYZED") } else { outcome.pass };
        if !ok {
            unexpected += 1;
        }
    }
    if unexpected > 0 {
        println!("{unexpected} criterion outcome(s) differ from expectations");
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
