//! Fixtures shared by the benchmarks in `benches/`.

use finitude::extend::{build_hn, builtin_algebra};
use finitude::field::Q;
use finitude::finiteness::{build_mn, validate_criterion_input, Criterion3Input};
use finitude::presentation::AlgebraRef;
use finitude::repmod::Representation;

pub fn ex6() -> AlgebraRef<Q> {
    builtin_algebra("ex6").expect("builtin")
}

pub fn ex7_lambda() -> AlgebraRef<Q> {
    builtin_algebra("ex7-lambda").expect("builtin")
}

/// M_n over the ex6 algebra with its standard input paths.
pub fn mn(alg: &AlgebraRef<Q>, n: usize) -> Representation<Q> {
    let inp = Criterion3Input { p: vec!["beta".into(), "chi".into()], q: vec!["alpha".into(), "psi".into()] };
    let (resolved, _) = validate_criterion_input(alg, &inp).expect("valid input");
    build_mn(alg, &resolved, n).expect("M_n builds").rep
}

pub fn hn(alg: &AlgebraRef<Q>, n: usize) -> Representation<Q> {
    build_hn(alg, n).expect("H_n builds")
}
