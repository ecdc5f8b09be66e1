mod common;

use common::{as_int_set, ex, exs, grid_spectrum};
use joint_spectra::lab::{a1_rep, catalog, f4_rep, h3_rep, random_nilpotent_rep, s2_rep, zero_rep};
use joint_spectra::lie::{LieAlgebra, Subspace};
use joint_spectra::numeric::{Exact, Float, Matrix, Scalar, Settings};
use joint_spectra::representation::{transform_character, Representation};
use joint_spectra::spectra::{
    adjoint_duality_check, cross_validate, homology_candidates, joint_eigencharacters, projection_check, same_set,
    sigma_p, spectrum, spectrum_via_eigencharacters, subset, weight_candidates, SpectralData, SpectrumKind,
    ANNOTATION_ESSENTIAL, ANNOTATION_SPLIT,
};
use joint_spectra::Error;
use proptest::prelude::*;

fn settings() -> Settings {
    Settings::default()
}

fn ints(set: &[Vec<Exact>]) -> Vec<Vec<i64>> {
    as_int_set(set).expect("integer characters")
}

fn taylor(rep: &Representation<Exact>) -> Vec<Vec<i64>> {
    ints(&spectrum(rep, SpectrumKind::Taylor, &settings()).unwrap().characters())
}

#[test]
fn eigencharacter_examples() {
    let tol = settings().tol;
    let a1 = joint_eigencharacters(&a1_rep(), &tol).unwrap();
    assert_eq!(ints(&a1.iter().map(|e| e.f.clone()).collect::<Vec<_>>()), [[2], [3]]);
    for e in &a1 {
        // The witness is an eigenvector of diag(2,3) for the value e.f.
        assert_eq!(a1_rep().matrices()[0].apply(&e.witness), e.witness.iter().map(|w| w.clone() * e.f[0].clone()).collect::<Vec<_>>());
    }
    let h3 = joint_eigencharacters(&h3_rep(), &tol).unwrap();
    assert_eq!(h3.len(), 1);
    assert_eq!(h3[0].f, exs(&[0, 0, 0]));
    assert_eq!(h3[0].witness.iter().filter(|c| !c.is_zero()).count(), 1);
    assert!(!h3[0].witness[0].is_zero());

    let s2 = joint_eigencharacters(&s2_rep(), &tol).unwrap();
    assert_eq!(s2.len(), 1);
    assert_eq!(s2[0].f, exs(&[1, 0]));
    assert!(!s2[0].witness[0].is_zero() && s2[0].witness[1].is_zero());
}

#[test]
fn weight_examples() {
    let tol = settings().tol;
    assert_eq!(ints(&weight_candidates(&a1_rep(), &tol).unwrap()), [[2], [3]]);
    assert_eq!(ints(&weight_candidates(&s2_rep(), &tol).unwrap()), [[0, 0], [1, 0]]);
    assert_eq!(ints(&weight_candidates(&h3_rep(), &tol).unwrap()), [[0, 0, 0]]);
    // Adjoint weights of aff(1) are 0 and (1,0); homology can sit one root
    // above the module weights.
    assert_eq!(ints(&homology_candidates(&s2_rep(), &tol).unwrap()), [[0, 0], [1, 0], [2, 0]]);
}

#[test]
fn sigma_p_examples() {
    let s = settings();
    assert_eq!(ints(&sigma_p(&a1_rep(), 0, &s).unwrap()), [[2], [3]]);
    assert_eq!(ints(&sigma_p(&a1_rep(), 1, &s).unwrap()), [[2], [3]]);
    assert!(ints(&sigma_p(&s2_rep(), 0, &s).unwrap()).contains(&vec![0, 0]));
    for p in 0..=3 {
        assert!(subset(&sigma_p(&h3_rep(), p, &s).unwrap(), &[exs(&[0, 0, 0])], 0.0));
    }
    assert!(matches!(sigma_p(&a1_rep(), 2, &s), Err(Error::Precondition(_))));
}

#[test]
fn spectrum_examples() {
    let s = settings();
    for kind in SpectrumKind::non_essential(3) {
        assert_eq!(ints(&spectrum(&h3_rep(), kind, &s).unwrap().characters()), [[0, 0, 0]], "{kind}");
    }
    let split = spectrum(&a1_rep(), SpectrumKind::Split, &s).unwrap();
    assert_eq!(ints(&split.characters()), [[2], [3]]);
    assert!(split.annotations.iter().any(|a| a == ANNOTATION_SPLIT));
    for rep in [a1_rep(), h3_rep(), s2_rep()] {
        let n = rep.algebra().dim();
        for kind in SpectrumKind::all(n).into_iter().filter(SpectrumKind::is_essential) {
            let r = spectrum(&rep, kind, &s).unwrap();
            assert!(r.members.is_empty(), "{kind}");
            assert!(!r.annotations.is_empty());
        }
        let fredholm = spectrum(&rep, SpectrumKind::Fredholm, &s).unwrap();
        assert!(fredholm.annotations.iter().any(|a| a == ANNOTATION_ESSENTIAL));
    }
    assert!(matches!(spectrum(&a1_rep(), SpectrumKind::Delta(2), &s), Err(Error::InvalidKind(_))));
}

#[test]
fn solvable_fixture_spectra() {
    // H_0 at (0,0): ranges of E11 and E12 stay inside span{e1}.
    // H_2 at (2,0): the top differential of ρ − (2,0) has a kernel.
    // At the eigencharacter (1,0) the complex is exact.
    let s = settings();
    assert_eq!(taylor(&s2_rep()), [[0, 0], [2, 0]]);
    assert_eq!(taylor(&s2_rep()), grid_spectrum(&s2_rep(), 3));
    let cv = cross_validate(&s2_rep(), &s).unwrap();
    assert!(!cv.nilpotent);
    assert_eq!(ints(&cv.eigencharacters), [[1, 0]]);
    assert!(!cv.contained && !cv.equal && !cv.strict);
}

#[test]
fn eigencharacter_route_examples() {
    let tol = settings().tol;
    assert_eq!(ints(&spectrum_via_eigencharacters(&h3_rep(), false, &tol).unwrap().characters()), [[0, 0, 0]]);
    assert_eq!(ints(&spectrum_via_eigencharacters(&zero_rep(4), false, &tol).unwrap().characters()), [[0, 0, 0]]);
    assert!(matches!(spectrum_via_eigencharacters(&s2_rep(), false, &tol), Err(Error::HypothesisViolation(_))));
    let forced = spectrum_via_eigencharacters(&s2_rep(), true, &tol).unwrap();
    assert_eq!(ints(&forced.characters()), [[1, 0]]);
    assert!(!forced.annotations.is_empty());
}

#[test]
fn cross_validation_examples() {
    for rep in [h3_rep(), a1_rep(), f4_rep(), zero_rep(2)] {
        let cv = cross_validate(&rep, &settings()).unwrap();
        assert!(cv.nilpotent && cv.equal && cv.contained && !cv.strict && cv.consistent());
    }
}

#[test]
fn projection_examples() {
    let s = settings();
    let yz = Subspace::span(3, &[exs(&[0, 1, 0]), exs(&[0, 0, 1])]);
    let r = projection_check(&h3_rep(), &yz, SpectrumKind::Taylor, &s).unwrap();
    assert!(r.equal);
    assert_eq!(ints(&r.restricted), [[0, 0]]);
    let z = Subspace::span(3, &[exs(&[0, 0, 1])]);
    let r = projection_check(&h3_rep(), &z, SpectrumKind::Taylor, &s).unwrap();
    assert!(r.equal);
    assert_eq!(ints(&r.projected), [[0]]);
    let full = Subspace::span(1, &[exs(&[1])]);
    for kind in SpectrumKind::non_essential(1) {
        assert!(projection_check(&a1_rep(), &full, kind, &s).unwrap().equal);
    }
    let x = Subspace::span(3, &[exs(&[1, 0, 0])]);
    assert!(matches!(projection_check(&h3_rep(), &x, SpectrumKind::Taylor, &s), Err(Error::NotAnIdeal { .. })));
}

#[test]
fn duality_examples() {
    let s = settings();
    for k in 0..=3 {
        let d = adjoint_duality_check(&h3_rep(), k, &s).unwrap();
        assert!(d.equal);
        assert_eq!(ints(&d.delta), [[0, 0, 0]]);
    }
    for k in 0..=1 {
        let d = adjoint_duality_check(&a1_rep(), k, &s).unwrap();
        assert!(d.equal);
        assert_eq!(ints(&d.delta), [[0], [2], [3]]);
    }
    assert!(adjoint_duality_check(&zero_rep(2), 1, &s).unwrap().equal);
    assert_eq!(adjoint_duality_check(&s2_rep(), 0, &s).unwrap_err(), Error::NotNilpotent);
}

#[test]
fn kinds_parse_and_print() {
    for kind in SpectrumKind::all(3) {
        assert_eq!(kind.to_string().parse::<SpectrumKind>().unwrap(), kind);
    }
    for bad in ["", "delta", "delta:x", "taylor:1", "sigma"] {
        assert!(bad.parse::<SpectrumKind>().is_err(), "{bad}");
    }
}

#[test]
fn catalog_matches_recorded_values() {
    for f in catalog() {
        assert_eq!(taylor(&f.rep), ints(&f.expected_taylor), "{}", f.name);
        let eig: Vec<_> = joint_eigencharacters(&f.rep, &settings().tol).unwrap().into_iter().map(|e| e.f).collect();
        assert_eq!(ints(&eig), ints(&f.expected_eigencharacters), "{}", f.name);
        assert_eq!(taylor(&f.rep), grid_spectrum(&f.rep, 3), "{}", f.name);
    }
}

fn random_rep() -> impl Strategy<Value = Representation<Exact>> {
    random_rep_up_to(7)
}

fn random_rep_up_to(max: usize) -> impl Strategy<Value = Representation<Exact>> {
    (any::<u64>(), 0usize..3, 1usize..=max).prop_map(|(seed, k, m)| {
        random_nilpotent_rep(seed, ["a1", "h3", "f4"][k], m).unwrap().rep
    })
}

fn unimodular(n: usize) -> impl Strategy<Value = Matrix<Exact>> {
    (prop::collection::vec(-2i64..=2, n * n), prop::collection::vec(-2i64..=2, n * n)).prop_map(move |(a, b)| {
        let l = Matrix::from_fn(n, n, |r, c| if r == c { ex(1) } else if r > c { ex(a[r * n + c]) } else { ex(0) });
        let u = Matrix::from_fn(n, n, |r, c| if r == c { ex(1) } else if r < c { ex(b[r * n + c]) } else { ex(0) });
        l.mul(&u)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn taylor_matches_brute_force(rep in random_rep()) {
        // Twists lie in [−2, 2] and A1 weights in {2, 3}: radius 5 covers σ.
        prop_assert_eq!(taylor(&rep), grid_spectrum(&rep, 5));
    }

    #[test]
    fn definition_structure(rep in random_rep()) {
        let s = settings();
        let n = rep.algebra().dim();
        let data = SpectralData::compute(&rep, &s).unwrap();
        let get = |k: SpectrumKind| data.report(k).unwrap().characters();
        let sigma = get(SpectrumKind::Taylor);
        prop_assert!(!sigma.is_empty());
        for k in 0..n {
            prop_assert!(subset(&get(SpectrumKind::Delta(k)), &get(SpectrumKind::Delta(k + 1)), 0.0));
            prop_assert!(subset(&get(SpectrumKind::Pi(k)), &get(SpectrumKind::Pi(k + 1)), 0.0));
        }
        prop_assert!(same_set(&get(SpectrumKind::Delta(n)), &sigma, 0.0));
        prop_assert!(same_set(&get(SpectrumKind::Pi(n)), &sigma, 0.0));
        prop_assert!(same_set(&get(SpectrumKind::Split), &sigma, 0.0));
        for k in 0..=n {
            prop_assert!(same_set(&get(SpectrumKind::SplitDelta(k)), &get(SpectrumKind::Delta(k)), 0.0));
            prop_assert!(same_set(&get(SpectrumKind::SplitPi(k)), &get(SpectrumKind::Pi(k)), 0.0));
        }
        for kind in SpectrumKind::all(n).into_iter().filter(SpectrumKind::is_essential) {
            prop_assert!(get(kind).is_empty());
        }
    }

    #[test]
    fn nilpotent_routes_agree(rep in random_rep()) {
        let s = settings();
        let n = rep.algebra().dim();
        let eig: Vec<_> = joint_eigencharacters(&rep, &s.tol).unwrap().into_iter().map(|e| e.f).collect();
        let data = SpectralData::compute(&rep, &s).unwrap();
        for kind in std::iter::once(SpectrumKind::Taylor).chain((0..=n).flat_map(|k| [SpectrumKind::Delta(k), SpectrumKind::Pi(k)])) {
            prop_assert!(same_set(&data.report(kind).unwrap().characters(), &eig, 0.0), "{}", kind);
        }
        let weights = weight_candidates(&rep, &s.tol).unwrap();
        prop_assert!(subset(&data.report(SpectrumKind::Taylor).unwrap().characters(), &weights, 0.0));
    }

    #[test]
    fn spectra_follow_basis_changes((rep, t) in random_rep().prop_flat_map(|rep| {
        let n = rep.algebra().dim();
        (Just(rep), unimodular(n))
    })) {
        let changed = rep.change_algebra_basis(&t).unwrap();
        prop_assert!(changed.validate(&settings().tol).is_ok());
        let s = settings();
        for kind in [SpectrumKind::Taylor, SpectrumKind::Delta(1), SpectrumKind::Pi(0)] {
            let before: Vec<Vec<Exact>> = spectrum(&rep, kind, &s).unwrap().characters().iter().map(|f| transform_character(f, &t)).collect();
            let after = spectrum(&changed, kind, &s).unwrap().characters();
            prop_assert!(same_set(&before, &after, 0.0), "{}", kind);
        }
    }

    #[test]
    fn common_kernel_puts_zero_in_sigma(seed in any::<u64>(), pad in 1usize..4) {
        // Pad with zero blocks: Σ rank ρ(e_i) < m forces a common kernel.
        let base = random_nilpotent_rep(seed, "h3", 3).unwrap().rep;
        let zero = Representation::zero(base.algebra().clone(), pad);
        let rep = base.direct_sum(&zero).unwrap();
        if rep.total_rank(&settings().tol) < rep.dim() {
            prop_assert!(taylor(&rep).contains(&vec![0, 0, 0]));
        }
    }

    // Capped at m = 6: at m = 7 Jordan blocks of size five and up spread
    // float eigenvalues far enough that about one instance in a hundred
    // cannot be told apart from neighbouring integers, and the float backend
    // reports that rather than guessing.
    #[test]
    fn float_backend_agrees(rep in random_rep_up_to(6)) {
        let s = settings();
        let exact = spectrum(&rep, SpectrumKind::Taylor, &s).unwrap().characters();
        let float = spectrum(&rep.to_float(), SpectrumKind::Taylor, &s).unwrap().characters();
        let lifted: Vec<Vec<Float>> = exact.iter().map(|f| f.iter().map(Scalar::to_complex64).collect()).collect();
        prop_assert!(same_set(&lifted, &float, s.tol.dedup), "{:?} vs {:?}", lifted, float);
    }
}

#[test]
fn non_solvable_input_is_rejected() {
    // sl2: [h,e] = 2e, [h,f] = −2f, [e,f] = h.
    let sl2 = LieAlgebra::from_int_brackets(&["h", "e", "f"], &[(0, 1, &[0, 2, 0]), (0, 2, &[0, 0, -2]), (1, 2, &[1, 0, 0])]).unwrap();
    assert!(sl2.validate().is_ok());
    let rep = Representation::new(
        sl2,
        2,
        vec![Matrix::<Exact>::from_i64(&[&[1, 0], &[0, -1]]), Matrix::from_i64(&[&[0, 1], &[0, 0]]), Matrix::from_i64(&[&[0, 0], &[1, 0]])],
    )
    .unwrap();
    assert!(rep.validate(&settings().tol).is_ok());
    assert_eq!(weight_candidates(&rep, &settings().tol).unwrap_err(), Error::NotSolvable);
    assert_eq!(cross_validate(&rep, &settings()).unwrap_err(), Error::NotSolvable);
}
