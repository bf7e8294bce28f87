//! One-point extensions and the built-in algebras and module families.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{Field, FieldKind};
use crate::linalg::Matrix;
use crate::presentation::{parse_algebra, parse_relation, Algebra, AlgebraRef, Presentation, PresentationError, Quiver};
use crate::repmod::{direct_sum_with_maps, ModuleError, ModuleMap, ProjectiveModule, Representation};
use crate::strings::{rep_from_graphspec, GraphModule, GraphSpec, StringError};

#[derive(Debug, Error)]
pub enum ExtendError {
    #[error("extension spec: {0}")]
    Spec(String),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error(transparent)]
    String(#[from] StringError),
    #[error("unknown built-in algebra `{0}` (expected one of ex2, ex6, ex7-lambda, ex7-lambda1, ex7-delta)")]
    UnknownBuiltin(String),
}

/// A new source vertex, arrows leaving it, and relations starting with new arrows.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionSpec {
    pub vertex: String,
    /// `(label, target)` pairs.
    pub arrows: Vec<(String, String)>,
    /// Relation right-hand sides in the algebra DSL.
    pub relations: Vec<String>,
}

impl ExtensionSpec {
    /// Parse `extend: vertex 9; arrow chi1: 9 -> 5; rel: beta1.chi1 - beta2.chi2`.
    /// Statements may also be split over several `extend:` lines.
    pub fn parse(text: &str) -> Result<ExtensionSpec, ExtendError> {
        let bad = |m: String| ExtendError::Spec(m);
        let mut vertex = None;
        let mut arrows = Vec::new();
        let mut relations = Vec::new();
        for line in text.lines() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let body = line.strip_prefix("extend:").ok_or_else(|| bad(format!("expected `extend:` in `{line}`")))?;
            for stmt in body.split(';').map(str::trim).filter(|s| !s.is_empty()) {
                if let Some(v) = stmt.strip_prefix("vertex ") {
                    if vertex.replace(v.trim().to_string()).is_some() {
                        return Err(bad("more than one new vertex".into()));
                    }
                } else if let Some(rest) = stmt.strip_prefix("arrow ") {
                    let (label, ends) = rest.split_once(':').ok_or_else(|| bad(format!("bad arrow `{stmt}`")))?;
                    let (s, t) = ends.split_once("->").ok_or_else(|| bad(format!("bad arrow `{stmt}`")))?;
                    let s = s.trim().to_string();
                    if vertex.as_deref() != Some(s.as_str()) {
                        return Err(bad(format!("arrow `{}` must leave the new vertex", label.trim())));
                    }
                    arrows.push((label.trim().to_string(), t.trim().to_string()));
                } else if let Some(rel) = stmt.strip_prefix("rel:") {
                    relations.push(rel.trim().to_string());
                } else {
                    return Err(bad(format!("unknown statement `{stmt}`")));
                }
            }
        }
        let vertex = vertex.ok_or_else(|| bad("missing `vertex`".into()))?;
        Ok(ExtensionSpec { vertex, arrows, relations })
    }

    pub fn to_dsl(&self) -> String {
        let mut parts = vec![format!("vertex {}", self.vertex)];
        for (l, t) in &self.arrows {
            parts.push(format!("arrow {l}: {} -> {t}", self.vertex));
        }
        for r in &self.relations {
            parts.push(format!("rel: {r}"));
        }
        format!("extend: {}\n", parts.join("; "))
    }
}

/// The extended presentation, after checking that the extension adds one source vertex with arrows into the old quiver.
pub fn extend_presentation(pres: &Presentation, spec: &ExtensionSpec) -> Result<Presentation, ExtendError> {
    let bad = |m: String| ExtendError::Spec(m);
    let mut quiver: Quiver = pres.quiver.clone();
    let old_arrows = quiver.arrows().len();
    quiver.add_vertex(spec.vertex.clone())?;
    for (label, target) in &spec.arrows {
        if *target == spec.vertex {
            return Err(bad(format!("arrow `{label}` ends at the new vertex, which must be a source")));
        }
        quiver.add_arrow(label.clone(), &spec.vertex, target)?;
    }
    let mut relations = pres.relations.clone();
    for (k, text) in spec.relations.iter().enumerate() {
        let raw = format!("rel: {text}");
        let rel = parse_relation(&quiver, k + 1, &raw, &raw[4..])?;
        for (_, p) in rel.terms() {
            if p.arrows().first().is_none_or(|&a| a < old_arrows) {
                return Err(bad(format!("relation `{text}` has a term not starting with a new arrow")));
            }
        }
        relations.push(rel);
    }
    Ok(Presentation { quiver, relations, field: pres.field })
}

/// Per old vertex pair, the block dimension before and after extension.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockComparison {
    pub source: String,
    pub target: String,
    pub before: usize,
    pub after: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExtensionCertificate {
    pub blocks: Vec<BlockComparison>,
    /// All old blocks keep their dimension, so the new ideal meets the old path algebra in the old ideal.
    pub old_ideal_preserved: bool,
    pub new_projective_dim: usize,
}

pub struct Extension<F: Field> {
    pub algebra: AlgebraRef<F>,
    pub certificate: ExtensionCertificate,
}

pub fn one_point_extend<F: Field>(alg: &Algebra<F>, spec: &ExtensionSpec) -> Result<Extension<F>, ExtendError> {
    let pres = extend_presentation(alg.presentation(), spec)?;
    let ext: Algebra<F> = Algebra::new(pres)?;
    let n = alg.num_vertices();
    let mut blocks = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let before = alg.block(i, j).len();
            let after = ext.block(i, j).len();
            if before > 0 || after > 0 {
                blocks.push(BlockComparison {
                    source: alg.vertex_name(i).to_string(),
                    target: alg.vertex_name(j).to_string(),
                    before,
                    after,
                });
            }
        }
    }
    let old_ideal_preserved = blocks.iter().all(|b| b.before == b.after);
    let new_projective_dim = ext.basis_from(n).len();
    Ok(Extension {
        algebra: Arc::new(ext),
        certificate: ExtensionCertificate { blocks, old_ideal_preserved, new_projective_dim },
    })
}

/// Transport a module along matching vertex and arrow names; missing vertices get zero spaces.
pub fn transport_module<F: Field>(rep: &Representation<F>, to: &AlgebraRef<F>) -> Result<Representation<F>, ModuleError> {
    let from = rep.algebra().quiver();
    let q = to.quiver();
    let dims: Vec<usize> = (0..q.num_vertices())
        .map(|v| from.vertex(q.vertex_name(v)).map_or(0, |w| rep.dim(w)))
        .collect();
    for w in 0..from.num_vertices() {
        if rep.dim(w) > 0 && q.vertex(from.vertex_name(w)).is_none() {
            return Err(ModuleError::Shape(format!("vertex `{}` is missing in the target algebra", from.vertex_name(w))));
        }
    }
    let maps = q
        .arrows()
        .iter()
        .map(|a| match from.arrow_id(&a.label) {
            Some(b) => rep.arrow_map(b).clone(),
            None => Matrix::zeros(dims[a.target], dims[a.source]),
        })
        .collect();
    Representation::new(to.clone(), dims, maps).map(|r| match rep.name() {
        Some(n) => r.with_name(n),
        None => r,
    })
}

pub const EX2: &str = "\
# Two vertices with a double arrow and a return arrow.
field: Q
vertices: 1 2
arrow alpha: 1 -> 2
arrow beta: 1 -> 2
arrow gamma: 2 -> 1
rel: gamma.beta
rel: alpha.gamma
rel: beta.gamma
";

pub const EX6: &str = "\
field: Q
vertices: 1 2 3 4 5 6 7 8
arrow alpha: 1 -> 2
arrow beta: 1 -> 3
arrow chi: 5 -> 2
arrow psi: 5 -> 3
arrow gamma: 2 -> 4
arrow rho: 2 -> 6
arrow delta: 3 -> 4
arrow sigma: 3 -> 6
arrow epsilon: 4 -> 8
arrow epsilon': 8 -> 8
arrow tau: 6 -> 7
arrow tau': 7 -> 7
rel: gamma.alpha - delta.beta
rel: rho.chi - sigma.psi
rel: gamma.chi
rel: rho.alpha
rel: delta.psi
rel: sigma.beta
rel: epsilon.gamma
rel: epsilon'.epsilon
rel: epsilon'.epsilon'
rel: tau'.tau
rel: tau'.tau'
rel: tau.sigma
";

pub const EX7_LAMBDA: &str = "\
field: Q
vertices: 1 2 3 4 5 6 7 8
arrow alpha: 1 -> 2
arrow beta1: 5 -> 2
arrow beta2: 6 -> 2
arrow gamma1: 7 -> 2
arrow gamma2: 8 -> 2
arrow delta: 2 -> 3
arrow epsilon: 2 -> 4
arrow rho: 3 -> 3
arrow sigma: 4 -> 4
rel: delta.alpha
rel: epsilon.alpha
rel: epsilon.beta1
rel: epsilon.beta2
rel: delta.gamma1
rel: delta.gamma2
rel: rho.delta
rel: sigma.epsilon
rel: rho.rho
rel: sigma.sigma
";

pub const EX7_EXT9: &str = "extend: vertex 9; arrow chi1: 9 -> 5; arrow chi2: 9 -> 6; rel: beta1.chi1 - beta2.chi2\n";
pub const EX7_EXT10: &str = "extend: vertex 10; arrow psi1: 10 -> 7; arrow psi2: 10 -> 8; rel: gamma1.psi1 - gamma2.psi2\n";

pub const BUILTIN_NAMES: [&str; 5] = ["ex2", "ex6", "ex7-lambda", "ex7-lambda1", "ex7-delta"];

/// Presentation of a built-in algebra over the requested field.
pub fn builtin_presentation(name: &str, field: FieldKind) -> Result<Presentation, ExtendError> {
    let pres = match name {
        "ex2" => parse_algebra(EX2)?,
        "ex6" => parse_algebra(EX6)?,
        "ex7-lambda" => parse_algebra(EX7_LAMBDA)?,
        "ex7-lambda1" => extend_presentation(&parse_algebra(EX7_LAMBDA)?, &ExtensionSpec::parse(EX7_EXT9)?)?,
        "ex7-delta" => {
            let l1 = extend_presentation(&parse_algebra(EX7_LAMBDA)?, &ExtensionSpec::parse(EX7_EXT9)?)?;
            extend_presentation(&l1, &ExtensionSpec::parse(EX7_EXT10)?)?
        }
        other => return Err(ExtendError::UnknownBuiltin(other.to_string())),
    };
    Ok(pres.with_field(field))
}

pub fn builtin_algebra<F: Field>(name: &str) -> Result<AlgebraRef<F>, ExtendError> {
    Ok(Arc::new(Algebra::new(builtin_presentation(name, F::kind())?)?))
}

fn odd_even(i: usize, odd: &'static str, even: &'static str) -> &'static str {
    if i % 2 == 1 {
        odd
    } else {
        even
    }
}

/// `H_n` as the quotient of `Λz ⊕ ⊕Λx_i ⊕ ⊕Λy_i` by the submodule `U_n`.
pub fn build_hn<F: Field>(alg: &AlgebraRef<F>, n: usize) -> Result<Representation<F>, ExtendError> {
    assert!(n >= 1, "H_n needs n >= 1");
    let v = |name: &str| alg.vertex(name);
    let mut types = vec![v("1")];
    for i in 1..=n {
        types.push(v(odd_even(i, "5", "6")));
    }
    for i in 1..=n {
        types.push(v(odd_even(i, "7", "8")));
    }
    let projs: Vec<ProjectiveModule<F>> = types.iter().map(|&t| ProjectiveModule::new(alg, t)).collect();
    let sum = direct_sum_with_maps(alg, &projs.iter().map(|p| p.rep.clone()).collect::<Vec<_>>());
    // Element `path · generator` of the summand `k`, embedded in the sum.
    let elem = |k: usize, path: &str| -> (usize, Vec<F>) {
        let (w, x) = projs[k].path_element(&alg.path(path));
        (w, sum.injections[k].block(w).mul(&Matrix::column(x)).col(0))
    };
    let x = |i: usize| i;
    let y = |i: usize| n + i;
    let combine = |terms: [(usize, &str, i64); 3]| -> (usize, Vec<F>) {
        let mut acc: Option<(usize, Vec<F>)> = None;
        for (k, p, c) in terms {
            let (w, e) = elem(k, p);
            let c = F::from_i64(c);
            acc = Some(match acc {
                None => (w, e.into_iter().map(|a| a * c.clone()).collect()),
                Some((w0, a)) => (w0, a.into_iter().zip(e).map(|(a, b)| a + b * c.clone()).collect()),
            });
        }
        acc.expect("three terms")
    };
    let mut gens = vec![combine([(0, "alpha", 1), (x(1), "beta1", -1), (y(1), "gamma1", -1)])];
    for i in 1..n {
        gens.push(combine([
            (y(i), odd_even(i, "gamma1", "gamma2"), 1),
            (x(i + 1), odd_even(i + 1, "beta1", "beta2"), -1),
            (y(i + 1), odd_even(i + 1, "gamma1", "gamma2"), -1),
        ]));
    }
    let u = sum.rep.generated_submodule(&gens);
    Ok(sum.rep.quotient(&u)?.0.with_name(format!("H_{n}")))
}

/// Graph spec of `H_n`: tops `z, x_i, y_i` with one dependency loop per triple.
pub fn hn_graphspec(n: usize) -> GraphSpec {
    let mut s = GraphSpec::default();
    s.top("z", "1").edge("z", "alpha", "a");
    for i in 1..=n {
        let (xi, yi) = (format!("x{i}"), format!("y{i}"));
        s.top(&xi, odd_even(i, "5", "6")).edge(&xi, odd_even(i, "beta1", "beta2"), &format!("b{i}"));
        s.top(&yi, odd_even(i, "7", "8")).edge(&yi, odd_even(i, "gamma1", "gamma2"), &format!("c{i}"));
    }
    s.dep(&["a", "b1", "c1"]);
    for i in 1..n {
        s.dep(&[&format!("c{i}"), &format!("b{}", i + 1), &format!("c{}", i + 1)]);
    }
    s
}

/// `A_1 = (Δe_1 ⊕ Δe_9 ⊕ Δe_10) / Δ(α, β1χ1, γ1ψ1)` over the doubly extended algebra.
pub fn build_a1<F: Field>(delta: &AlgebraRef<F>) -> Result<Representation<F>, ExtendError> {
    let types = [delta.vertex("1"), delta.vertex("9"), delta.vertex("10")];
    let projs: Vec<ProjectiveModule<F>> = types.iter().map(|&t| ProjectiveModule::new(delta, t)).collect();
    let sum = direct_sum_with_maps(delta, &projs.iter().map(|p| p.rep.clone()).collect::<Vec<_>>());
    let mut g: Option<(usize, Vec<F>)> = None;
    for (k, p) in ["alpha", "beta1.chi1", "gamma1.psi1"].iter().enumerate() {
        let (w, x) = projs[k].path_element(&delta.path(p));
        let e = sum.injections[k].block(w).mul(&Matrix::column(x)).col(0);
        g = Some(match g {
            None => (w, e),
            Some((w0, a)) => (w0, a.into_iter().zip(e).map(|(a, b)| a + b).collect()),
        });
    }
    let u = sum.rep.generated_submodule(&[g.expect("three summands")]);
    Ok(sum.rep.quotient(&u)?.0.with_name("A_1"))
}

pub fn a1_graphspec() -> GraphSpec {
    let mut s = GraphSpec::default();
    s.top("z", "1").top("u", "9").top("w", "10");
    s.edge("z", "alpha", "a");
    s.edge("u", "beta1.chi1", "b").edge("u", "beta2.chi2", "b");
    s.edge("w", "gamma1.psi1", "c").edge("w", "gamma2.psi2", "c");
    s.dep(&["a", "b", "c"]);
    s
}

/// A proposed right approximation `module → S_vertex` sending the listed tops to 1.
pub struct ProposedApproximation<F: Field> {
    pub label: String,
    pub vertex: usize,
    pub module: GraphModule<F>,
    pub map: ModuleMap<F>,
}

/// The map `rep → S_v` that is 1 on each listed top of type `v` and kills the radical.
pub fn map_to_simple<F: Field>(rep: &Representation<F>, v: usize, tops: &[Vec<F>]) -> Result<ModuleMap<F>, ModuleError> {
    let alg = rep.algebra();
    let simple = Representation::simple(alg.clone(), v);
    let rad = rep.radical();
    let d = rep.dim(v);
    let basis = &rad.spaces[v];
    let mut cols: Vec<Matrix<F>> = vec![basis.clone()];
    let mut rhs = vec![F::zero(); basis.cols()];
    for t in tops {
        cols.push(Matrix::column(t.clone()));
        rhs.push(F::one());
    }
    // Solve phi · [basis | tops] = [0 | 1].
    let lhs = Matrix::hstack_all(d, &cols).transpose();
    let phi = lhs
        .solve(&Matrix::column(rhs))
        .ok_or_else(|| ModuleError::Shape("top elements are dependent modulo the radical".into()))?;
    let blocks = (0..alg.num_vertices())
        .map(|w| if w == v { phi.transpose() } else { Matrix::zeros(simple.dim(w), rep.dim(w)) })
        .collect();
    ModuleMap::new(rep.clone(), simple, blocks)
}

fn graph_approximation<F: Field>(
    delta: &AlgebraRef<F>,
    label: &str,
    vertex: &str,
    spec: GraphSpec,
) -> Result<ProposedApproximation<F>, ExtendError> {
    let v = delta.vertex(vertex);
    let module = rep_from_graphspec(delta, &spec)?;
    let tops: Vec<Vec<F>> = module.tops.iter().filter(|(_, (w, _))| *w == v).map(|(_, (_, x))| x.clone()).collect();
    let map = map_to_simple(&module.rep, v, &tops)?;
    let module = GraphModule { rep: module.rep.clone().with_name(label), ..module };
    Ok(ProposedApproximation { label: label.to_string(), vertex: v, module, map })
}

/// Two V-shaped strings `top-2-other` sharing the top type.
fn v_pair(top: (&str, &str), others: [(&str, &str); 2]) -> GraphSpec {
    let mut s = GraphSpec::default();
    for (k, (ov, oa)) in others.iter().enumerate() {
        let (t, o, slot) = (format!("t{k}"), format!("o{k}"), format!("s{k}"));
        s.top(&t, top.0).top(&o, ov);
        s.edge(&t, top.1, &slot).edge(&o, oa, &slot);
    }
    s
}

/// The ten proposed right approximations of the simple modules over the doubly extended algebra.
pub fn example7_approximations<F: Field>(delta: &AlgebraRef<F>) -> Result<Vec<ProposedApproximation<F>>, ExtendError> {
    let mut out = Vec::new();
    for v in ["2", "3", "4"] {
        let mut s = GraphSpec::default();
        s.top("t", v);
        let idx = delta.vertex(v);
        let proj = ProjectiveModule::new(delta, idx);
        // The projective itself, expressed as a graph module with its generator as top.
        let module = GraphModule { rep: proj.rep.clone().with_name(format!("P({v})")), spec: s, tops: vec![("t".into(), proj.generator())], slots: Default::default() };
        let map = map_to_simple(&module.rep, idx, &[proj.generator().1])?;
        out.push(ProposedApproximation { label: format!("P({v})"), vertex: idx, module, map });
    }
    let b1 = ("5", "beta1");
    let b2 = ("6", "beta2");
    let g1 = ("7", "gamma1");
    let g2 = ("8", "gamma2");
    out.push(graph_approximation(delta, "(5-2-7)+(5-2-8)", "5", v_pair(b1, [g1, g2]))?);
    out.push(graph_approximation(delta, "(6-2-7)+(6-2-8)", "6", v_pair(b2, [g1, g2]))?);
    out.push(graph_approximation(delta, "(7-2-5)+(7-2-6)", "7", v_pair(g1, [b1, b2]))?);
    out.push(graph_approximation(delta, "(8-2-5)+(8-2-6)", "8", v_pair(g2, [b1, b2]))?);
    let mut s9 = GraphSpec::default();
    s9.top("t0", "9").edge("t0", "chi1", "s0").top("t1", "9").edge("t1", "chi2", "s1");
    out.push(graph_approximation(delta, "(9-5)+(9-6)", "9", s9)?);
    let mut s10 = GraphSpec::default();
    s10.top("t0", "10").edge("t0", "psi1", "s0").top("t1", "10").edge("t1", "psi2", "s1");
    out.push(graph_approximation(delta, "(10-7)+(10-8)", "10", s10)?);
    let mut a1 = graph_approximation(delta, "A_1", "1", a1_graphspec())?;
    a1.label = "A_1".into();
    out.push(a1);
    out.sort_by_key(|a| a.vertex);
    Ok(out)
}

/// Graph specs of the seed classes used to build test corpora over the doubly extended algebra.
pub fn example7_seed_specs() -> Vec<(String, GraphSpec)> {
    let mut out = Vec::new();
    for (v, a) in [("5", "beta1"), ("6", "beta2"), ("7", "gamma1"), ("8", "gamma2")] {
        let mut s = GraphSpec::default();
        s.top("t", v).edge("t", a, "s");
        out.push((format!("{v}-2"), s));
    }
    let mut b = GraphSpec::default();
    b.top("t", "9").edge("t", "beta1.chi1", "s").edge("t", "beta2.chi2", "s");
    out.push(("9-V-2".into(), b));
    let mut c = GraphSpec::default();
    c.top("t", "10").edge("t", "gamma1.psi1", "s").edge("t", "gamma2.psi2", "s");
    out.push(("10-V-2".into(), c));
    let mut z = GraphSpec::default();
    z.top("t", "1").edge("t", "alpha", "s");
    out.push(("1-2".into(), z));
    out.push(("A_1".into(), a1_graphspec()));
    out
}

/// Seed modules over the doubly extended algebra: projectives, simples, the seed classes,
/// `H_n` for `n <= 4`, and the modules of the proposed approximations.
pub fn example7_corpus_seeds<F: Field>(delta: &AlgebraRef<F>) -> Result<Vec<(String, Representation<F>)>, ExtendError> {
    let lam: AlgebraRef<F> = builtin_algebra("ex7-lambda")?;
    let mut seeds = Vec::new();
    for v in 0..delta.num_vertices() {
        seeds.push((format!("P({})", delta.vertex_name(v)), crate::repmod::projective_rep(delta, v)));
        seeds.push((format!("S({})", delta.vertex_name(v)), Representation::simple(delta.clone(), v)));
    }
    for (name, spec) in example7_seed_specs() {
        seeds.push((name, rep_from_graphspec(delta, &spec)?.rep));
    }
    for n in 1..=4 {
        seeds.push((format!("H_{n}"), transport_module(&build_hn(&lam, n)?, delta)?));
    }
    for a in example7_approximations(delta)? {
        seeds.push((a.label, a.module.rep));
    }
    Ok(seeds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Q;
    use crate::homalg::first_syzygy;
    use crate::repmod::{direct_sum, is_isomorphic, projective_rep};

    #[test]
    fn extension_spec_round_trip() {
        let s = ExtensionSpec::parse(EX7_EXT9).unwrap();
        assert_eq!(s.vertex, "9");
        assert_eq!(s.arrows.len(), 2);
        assert_eq!(ExtensionSpec::parse(&s.to_dsl()).unwrap(), s);
        assert!(ExtensionSpec::parse("extend: vertex 9; arrow a: 5 -> 9").is_err());
    }

    #[test]
    fn rejects_arrows_into_new_vertex_and_old_relations() {
        let lam = parse_algebra(EX7_LAMBDA).unwrap();
        let loopy = ExtensionSpec { vertex: "9".into(), arrows: vec![("x".into(), "9".into())], relations: vec![] };
        assert!(extend_presentation(&lam, &loopy).is_err());
        let old = ExtensionSpec { vertex: "9".into(), arrows: vec![("x".into(), "5".into())], relations: vec!["rho.delta.alpha".into()] };
        assert!(extend_presentation(&lam, &old).is_err());
    }

    #[test]
    fn example7_extensions() {
        let lam: AlgebraRef<Q> = builtin_algebra("ex7-lambda").unwrap();
        assert_eq!(lam.dim(), 21);
        let e1 = one_point_extend(&lam, &ExtensionSpec::parse(EX7_EXT9).unwrap()).unwrap();
        assert!(e1.certificate.old_ideal_preserved);
        assert_eq!(e1.certificate.new_projective_dim, 5);
        let e2 = one_point_extend(&e1.algebra, &ExtensionSpec::parse(EX7_EXT10).unwrap()).unwrap();
        assert!(e2.certificate.old_ideal_preserved);
        assert_eq!(e2.certificate.new_projective_dim, 5);
        let delta = e2.algebra;
        for v in 0..8 {
            let moved = transport_module(&projective_rep(&lam, v), &delta).unwrap();
            assert!(is_isomorphic(&moved, &projective_rep(&delta, v), 0).is_iso());
        }
    }

    #[test]
    fn hn_quotient_matches_graph() {
        let lam: AlgebraRef<Q> = builtin_algebra("ex7-lambda").unwrap();
        for n in 1..=3 {
            let h = build_hn(&lam, n).unwrap();
            assert_eq!(h.total_dim(), 3 * n + 2);
            let g = rep_from_graphspec(&lam, &hn_graphspec(n)).unwrap();
            assert!(is_isomorphic(&h, &g.rep, 1).is_iso());
            let omega = first_syzygy(&h).0;
            let p2 = projective_rep(&lam, lam.vertex("2"));
            assert!(is_isomorphic(&omega, &direct_sum(&lam, &vec![p2; n]), 2).is_iso());
        }
    }

    #[test]
    fn a1_quotient_matches_graph() {
        let delta: AlgebraRef<Q> = builtin_algebra("ex7-delta").unwrap();
        let a = build_a1(&delta).unwrap();
        assert_eq!(a.total_dim(), 9);
        let g = rep_from_graphspec(&delta, &a1_graphspec()).unwrap();
        assert!(is_isomorphic(&a, &g.rep, 0).is_iso());
        let omega = first_syzygy(&a).0;
        assert!(is_isomorphic(&omega, &projective_rep(&delta, delta.vertex("2")), 0).is_iso());
    }

    #[test]
    fn approximations_are_onto_their_simples() {
        let delta: AlgebraRef<Q> = builtin_algebra("ex7-delta").unwrap();
        let approx = example7_approximations(&delta).unwrap();
        assert_eq!(approx.len(), 10);
        for a in &approx {
            assert!(a.map.is_surjective(), "{}", a.label);
        }
    }
}
