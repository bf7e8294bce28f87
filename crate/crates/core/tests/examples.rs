use finitude::extend::{build_hn, builtin_algebra, example7_approximations, transport_module};
use finitude::field::{Field, Fp, Q};
use finitude::finiteness::{
    default_lambdas, is_left_approximation, refute_left_bounded, search_left_approximation, string_band_corpus,
    validate_criterion_input, Criterion3Input,
};
use finitude::homalg::{pdim, DEFAULT_CUTOFF};
use finitude::presentation::AlgebraRef;
use finitude::repmod::{combine_maps, hom_basis, ModuleMap, Representation};

type F2 = Fp<2>;
type F3 = Fp<3>;

fn ex2_input() -> Criterion3Input {
    Criterion3Input { p: vec!["alpha".into()], q: vec!["beta".into()] }
}

#[test]
fn example2_bounded_refutation_finds_a_survivor() {
    let alg: AlgebraRef<F2> = builtin_algebra("ex2").unwrap();
    let (inp, report) = validate_criterion_input(&alg, &ex2_input()).unwrap();
    assert!(report.valid, "{:?}", report.diagnostics);
    let corpus = string_band_corpus(&alg, 7, &default_lambdas::<F2>(), DEFAULT_CUTOFF).unwrap();
    let reps = corpus.finite_pdim_reps(8);
    let r = refute_left_bounded(&alg, &inp, &reps, &corpus.description, 8, 9, DEFAULT_CUTOFF).unwrap();
    assert!(!r.refuted);
    assert!(!r.survivors.is_empty());
}

#[test]
fn example2_left_approximation_of_s1_is_found_and_verified() {
    let alg: AlgebraRef<Q> = builtin_algebra("ex2").unwrap();
    let corpus = string_band_corpus(&alg, 8, &default_lambdas::<Q>(), DEFAULT_CUTOFF).unwrap();
    let reps = corpus.finite_pdim_reps(usize::MAX);
    let (f, report) = search_left_approximation(&alg, alg.vertex("1"), &reps, "strings and bands", 8).expect("a witness");
    assert!(report.passed);
    assert!(pdim(f.target(), DEFAULT_CUTOFF).unwrap().is_finite());
    // Re-check independently of the search.
    assert!(is_left_approximation(&f, &reps, "strings and bands").passed);
}

/// Every F3-linear combination of a basis, as maps.
fn all_maps<F: Field>(basis: &[ModuleMap<F>], source: &Representation<F>, target: &Representation<F>) -> Vec<ModuleMap<F>> {
    let elems = F::elements().unwrap();
    let mut out = vec![ModuleMap::zero(source, target)];
    for b in basis {
        let mut next = Vec::new();
        for m in &out {
            for c in &elems {
                next.push(m.add(&b.scale(c)));
            }
        }
        out = next;
    }
    out
}

/// The sums displayed for S_5 and S_7 do not absorb the map from H_2 that hits one top of
/// type 5 (resp. 7), although H_2 has projective dimension 1 over the extended algebra.
/// Exhaustive over F3: no map H_2 -> A composes to the canonical map onto the simple.
#[test]
fn example7_sums_for_s5_and_s7_miss_h2() {
    let lam: AlgebraRef<F3> = builtin_algebra("ex7-lambda").unwrap();
    let delta: AlgebraRef<F3> = builtin_algebra("ex7-delta").unwrap();
    let h2 = transport_module(&build_hn(&lam, 2).unwrap(), &delta).unwrap();
    assert_eq!(pdim(&h2, DEFAULT_CUTOFF).unwrap(), finitude::PdimResult::Exact { value: 1 });
    let approx = example7_approximations(&delta).unwrap();
    for (label, v) in [("(5-2-7)+(5-2-8)", "5"), ("(7-2-5)+(7-2-6)", "7")] {
        let a = approx.iter().find(|a| a.label == label).unwrap();
        let simple = Representation::simple(delta.clone(), delta.vertex(v));
        let to_simple = hom_basis(&h2, &simple);
        assert!(!to_simple.is_empty());
        let into_a = all_maps(&hom_basis(&h2, &a.module.rep), &h2, &a.module.rep);
        let reachable: Vec<Vec<F3>> = into_a.iter().map(|h| a.map.compose(h).flatten()).collect();
        let missing = all_maps(&to_simple, &h2, &simple).into_iter().filter(|g| !reachable.contains(&g.flatten())).count();
        assert!(missing > 0, "{label} absorbs every map from H_2");
        // The failure is genuine: a nonzero map onto the simple exists and is missed.
        let g = combine_maps(&to_simple, &vec![F3::one(); to_simple.len()]);
        assert!(g.is_surjective());
    }
}
