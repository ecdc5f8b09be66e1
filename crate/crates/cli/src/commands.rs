use std::path::Path;

use joint_spectra::io::{parse_algebra, parse_proxy_config, parse_representation};
use joint_spectra::koszul::ChainComplex;
use joint_spectra::lab::{self, character_to, finite_rank_proxy, proxy_csv, run_property_suite};
use joint_spectra::lie::{LieAlgebra, Subspace};
use joint_spectra::numeric::{vector_text, Backend, Exact, Scalar, Settings};
use joint_spectra::representation::Representation;
use joint_spectra::spectra::{
    cross_validate, joint_eigencharacters, projection_check, projection_checks, same_set, spectrum_via_eigencharacters, Route,
    SpectralData, SpectrumKind,
};
use joint_spectra::{Error, Result};
use serde_json::{json, Value};

use crate::render::emit;
use crate::{GlobalArgs, Outcome, RouteArg};

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Input { path: path.display().to_string(), message: e.to_string() })
}

enum Document {
    Algebra(LieAlgebra),
    Representation(Representation<Exact>),
}

/// A representation document, or a bare algebra document.
fn load_any(path: &Path) -> Result<Document> {
    let text = read(path)?;
    let is_rep = serde_json::from_str::<Value>(&text)
        .map(|v| v.get("matrices").is_some() || v.get("algebra").is_some() || v.get("dimX").is_some())
        .unwrap_or(true);
    if is_rep {
        parse_representation(&text).map(Document::Representation)
    } else {
        parse_algebra(&text).map(Document::Algebra)
    }
}

fn load_rep(path: &Path) -> Result<Representation<Exact>> {
    parse_representation(&read(path)?)
}

fn texts<T: Scalar>(v: &[T]) -> Value {
    Value::Array(v.iter().map(|c| Value::String(c.text())).collect())
}

fn set_json<T: Scalar>(set: &[Vec<T>]) -> Value {
    Value::Array(set.iter().map(|f| texts(f)).collect())
}

fn jacobi_json(algebra: &LieAlgebra) -> Value {
    match algebra.validate() {
        Ok(()) => json!({"ok": true, "violations": []}),
        Err(v) => {
            let names = algebra.names();
            let violations: Vec<Value> = v
                .iter()
                .map(|x| {
                    let (i, j, k) = x.triple;
                    json!({"triple": [names[i], names[j], names[k]], "residual": texts(&x.residual)})
                })
                .collect();
            json!({"ok": false, "violations": violations})
        }
    }
}

fn homomorphism_json<T: Scalar>(rep: &Representation<T>, s: &Settings) -> Value {
    match rep.validate(&s.tol) {
        Ok(()) => json!({"ok": true, "violations": []}),
        Err(v) => {
            let names = rep.algebra().names();
            let violations: Vec<Value> =
                v.iter().map(|x| json!({"pair": [names[x.pair.0], names[x.pair.1]], "residual": x.residual})).collect();
            json!({"ok": false, "violations": violations})
        }
    }
}

/// Jacobi identity and homomorphism law, or a precondition error naming the first failure.
fn require_valid<T: Scalar>(rep: &Representation<T>, s: &Settings) -> Result<()> {
    if let Err(v) = rep.algebra().validate() {
        let (i, j, k) = v[0].triple;
        let n = rep.algebra().names();
        return Err(Error::Precondition(format!("Jacobi identity fails on ({}, {}, {})", n[i], n[j], n[k])));
    }
    if let Err(v) = rep.validate(&s.tol) {
        let n = rep.algebra().names();
        return Err(Error::Precondition(format!(
            "homomorphism law fails at ({}, {})",
            n[v[0].pair.0], n[v[0].pair.1]
        )));
    }
    Ok(())
}

macro_rules! dispatch {
    ($g:expr, $rep:expr, $f:ident ( $($arg:expr),* )) => {
        match $g.backend {
            Backend::Exact => $f(&$rep, $($arg),*),
            Backend::Float => $f(&$rep.to_float(), $($arg),*),
        }
    };
}

pub fn validate(g: &GlobalArgs, path: &Path, s: &Settings) -> Result<Outcome> {
    let (value, ok) = match load_any(path)? {
        Document::Algebra(l) => {
            let jacobi = jacobi_json(&l);
            let ok = jacobi["ok"] == true;
            (json!({"jacobi": jacobi}), ok)
        }
        Document::Representation(rep) => {
            let jacobi = jacobi_json(rep.algebra());
            let hom = match g.backend {
                Backend::Exact => homomorphism_json(&rep, s),
                Backend::Float => homomorphism_json(&rep.to_float(), s),
            };
            let ok = jacobi["ok"] == true && hom["ok"] == true;
            (json!({"jacobi": jacobi, "homomorphism": hom}), ok)
        }
    };
    Ok(Outcome { body: emit(&value, g.format), ok })
}

fn describe_all(series: &[Subspace], names: &[String]) -> Value {
    Value::Array(series.iter().map(|s| Value::String(s.describe(names))).collect())
}

pub fn algebra_info(l: &LieAlgebra) -> Value {
    let names = l.names();
    let chain = l.jordan_holder_chain().ok();
    json!({
        "dim": l.dim(),
        "basis": names,
        "jacobi": jacobi_json(l)["ok"],
        "nilpotent": l.is_nilpotent(),
        "solvable": l.is_solvable(),
        "nilpotency_class": l.nilpotency_class(),
        "derived_subalgebra": l.derived_subalgebra().describe(names),
        "lower_central_series": describe_all(&l.lower_central_series(), names),
        "derived_series": describe_all(&l.derived_series(), names),
        "upper_central_series": describe_all(&l.upper_central_series(), names),
        "center": l.center().describe(names),
        "jordan_holder_chain": chain.map(|c| describe_all(&c, names)),
    })
}

pub fn info(g: &GlobalArgs, path: &Path) -> Result<Outcome> {
    let value = match load_any(path)? {
        Document::Algebra(l) => json!({"algebra": algebra_info(&l)}),
        Document::Representation(rep) => json!({"algebra": algebra_info(rep.algebra()), "dimX": rep.dim()}),
    };
    Ok(Outcome { body: emit(&value, g.format), ok: true })
}

fn koszul_t<T: Scalar>(rep: &Representation<T>, f: &[Exact], s: &Settings) -> Result<Value> {
    require_valid(rep, s)?;
    let f: Vec<T> = character_to(f);
    let shifted = rep.shift(&f, &s.tol)?;
    let complex = ChainComplex::of(&shifted, s)?;
    let h = complex.homology(&s.tol);
    Ok(json!({
        "f": texts(&f),
        "dims": h.dims,
        "ranks": h.ranks,
        "betti": h.betti,
        "euler": h.betti.euler_characteristic(),
        "d_squared_zero": complex.validate(&s.tol).is_ok(),
    }))
}

pub fn koszul(g: &GlobalArgs, path: &Path, character: Option<&str>, s: &Settings) -> Result<Outcome> {
    let rep = load_rep(path)?;
    let n = rep.algebra().dim();
    let f = match character {
        Some(text) => lab::parse_character(text, n)?,
        None => vec![Exact::zero(); n],
    };
    let value = dispatch!(g, rep, koszul_t(&f, s))?;
    Ok(Outcome { body: emit(&value, g.format), ok: true })
}

fn spectrum_t<T: Scalar>(
    rep: &Representation<T>,
    kind: SpectrumKind,
    route: RouteArg,
    g: &GlobalArgs,
    s: &Settings,
) -> Result<(Value, bool)> {
    require_valid(rep, s)?;
    let characterized = matches!(kind, SpectrumKind::Taylor | SpectrumKind::Delta(_) | SpectrumKind::Pi(_));
    if route != RouteArg::Homology && !characterized {
        return Err(Error::Precondition(format!(
            "the eigencharacter route describes taylor, delta:K and pi:K only, not {kind}"
        )));
    }
    match route {
        RouteArg::Homology => Ok((SpectralData::compute(rep, s)?.report(kind)?.to_json(), true)),
        RouteArg::Eigencharacter => {
            let mut report = spectrum_via_eigencharacters(rep, g.override_nilpotency, &s.tol)?;
            report.kind = kind;
            Ok((report.to_json(), true))
        }
        RouteArg::Both => {
            let eig = spectrum_via_eigencharacters(rep, g.override_nilpotency, &s.tol)?;
            let mut report = SpectralData::compute(rep, s)?.report(kind)?;
            let agree = same_set(&report.characters(), &eig.characters(), s.tol.dedup);
            report.route = Route::Both;
            report.annotations.push(if agree {
                "routes agree".to_string()
            } else {
                let e: Vec<String> = eig.characters().iter().map(|f| format!("({})", vector_text(f))).collect();
                format!("routes disagree: eigencharacters are {}", e.join(" "))
            });
            Ok((report.to_json(), agree))
        }
    }
}

pub fn spectrum(g: &GlobalArgs, path: &Path, kind: &str, route: RouteArg, s: &Settings) -> Result<Outcome> {
    let kind: SpectrumKind = kind.parse()?;
    let rep = load_rep(path)?;
    kind.check(rep.algebra().dim())?;
    let (value, ok) = dispatch!(g, rep, spectrum_t(kind, route, g, s))?;
    Ok(Outcome { body: emit(&value, g.format), ok })
}

fn eigenchars_t<T: Scalar>(rep: &Representation<T>, s: &Settings) -> Result<Value> {
    require_valid(rep, s)?;
    let list: Vec<Value> = joint_eigencharacters(rep, &s.tol)?
        .iter()
        .map(|e| json!({"f": texts(&e.f), "witness": texts(&e.witness)}))
        .collect();
    Ok(json!({"eigencharacters": list}))
}

pub fn eigenchars(g: &GlobalArgs, path: &Path, s: &Settings) -> Result<Outcome> {
    let rep = load_rep(path)?;
    let value = dispatch!(g, rep, eigenchars_t(s))?;
    Ok(Outcome { body: emit(&value, g.format), ok: true })
}

fn crossval_t<T: Scalar>(rep: &Representation<T>, s: &Settings) -> Result<(Value, bool)> {
    require_valid(rep, s)?;
    let cv = cross_validate(rep, s)?;
    Ok((cv.to_json(), !cv.nilpotent || cv.equal))
}

pub fn crossval(g: &GlobalArgs, path: &Path, s: &Settings) -> Result<Outcome> {
    let rep = load_rep(path)?;
    let (value, ok) = dispatch!(g, rep, crossval_t(s))?;
    Ok(Outcome { body: emit(&value, g.format), ok })
}

fn project_t<T: Scalar>(rep: &Representation<T>, kind: SpectrumKind, ideals: &[Subspace], s: &Settings) -> Result<(Value, bool)> {
    require_valid(rep, s)?;
    let mut ok = true;
    let mut out = Vec::new();
    for ideal in ideals {
        let r = projection_check(rep, ideal, kind, s)?;
        ok &= r.equal;
        out.push(r.to_json(rep.algebra().names(), ideal));
    }
    Ok((Value::Array(out), ok))
}

pub fn project(g: &GlobalArgs, path: &Path, kind: &str, s: &Settings) -> Result<Outcome> {
    let kind: SpectrumKind = kind.parse()?;
    let rep = load_rep(path)?;
    kind.check(rep.algebra().dim())?;
    let chain = rep.algebra().jordan_holder_chain()?;
    let (value, ok) = dispatch!(g, rep, project_t(kind, &chain, s))?;
    Ok(Outcome { body: emit(&json!({"projections": value}), g.format), ok })
}

fn report_t<T: Scalar>(rep: &Representation<T>, g: &GlobalArgs, s: &Settings) -> Result<(Value, bool)> {
    require_valid(rep, s)?;
    let l = rep.algebra();
    let n = l.dim();
    let data = SpectralData::compute(rep, s)?;
    let mut spectra = serde_json::Map::new();
    for kind in SpectrumKind::all(n) {
        let r = data.report(kind)?;
        spectra.insert(
            kind.to_string(),
            json!({"members": set_json(&r.characters()), "annotations": r.annotations}),
        );
    }
    let cv = cross_validate(rep, s)?;
    let mut ok = !cv.nilpotent || cv.equal;
    let eig_route = match spectrum_via_eigencharacters(rep, g.override_nilpotency, &s.tol) {
        Ok(r) => set_json(&r.characters()),
        Err(e @ Error::HypothesisViolation(_)) => Value::String(e.to_string()),
        Err(e) => return Err(e),
    };
    let projections = match l.jordan_holder_chain() {
        Ok(chain) if n >= 1 => {
            let ideal = &chain[n - 1];
            let mut list = Vec::new();
            for r in projection_checks(rep, ideal, &SpectrumKind::non_essential(n), s)? {
                ok &= r.equal;
                list.push(r.to_json(l.names(), ideal));
            }
            Value::Array(list)
        }
        Ok(_) => Value::Array(Vec::new()),
        Err(e) => Value::String(e.to_string()),
    };
    let value = json!({
        "algebra": algebra_info(l),
        "dimX": rep.dim(),
        "backend": T::BACKEND.to_string(),
        "candidates": set_json(&data.candidates),
        "betti": data.candidates.iter().zip(&data.betti).map(|(f, b)| (vector_text(f), json!(b))).collect::<serde_json::Map<_, _>>(),
        "spectra": spectra,
        "eigencharacter_route": eig_route,
        "crossval": cv.to_json(),
        "projections": projections,
    });
    Ok((value, ok))
}

pub fn report(g: &GlobalArgs, path: &Path, s: &Settings) -> Result<Outcome> {
    let rep = load_rep(path)?;
    let (value, ok) = dispatch!(g, rep, report_t(g, s))?;
    Ok(Outcome { body: emit(&value, g.format), ok })
}

pub fn lab_proxy(g: &GlobalArgs, path: &Path, timing: bool, s: &Settings) -> Result<Outcome> {
    let mut config = parse_proxy_config(&read(path)?)?;
    if let Some(seed) = g.seed {
        config.seed = seed;
    }
    let rows = finite_rank_proxy(&config, s)?;
    let ok = rows.iter().all(|r| r.equality);
    Ok(Outcome { body: proxy_csv(&rows, timing), ok })
}

pub fn lab_suite(g: &GlobalArgs, seeds: u64, s: &Settings) -> Result<Outcome> {
    if g.backend != Backend::Exact {
        return Err(Error::Input { path: "--backend".into(), message: "the property suite runs on the exact backend".into() });
    }
    let summary = run_property_suite(seeds, s)?;
    Ok(Outcome { body: emit(&summary.to_json(), g.format), ok: summary.failed() == 0 })
}
