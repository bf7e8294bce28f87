//! The zigzag criterion for failure of left approximations, band socle facts,
//! approximation checks, minimality, and bounded refutation over finite fields.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::Field;
use crate::homalg::{PdimResult, SyzygyGraph};
use crate::linalg::{self, Matrix};
use crate::presentation::{is_subpath, AlgebraRef, Path};
use crate::repmod::{
    combine_maps, decompose, direct_sum_with_maps, hom_basis, DecomposeOptions, ModuleError, ModuleMap, Representation,
};
use crate::strings::{band_rep, enumerate_bands, enumerate_strings, rep_from_graphspec, string_rep, GraphModule, GraphSpec, StringError};

#[derive(Debug, Error)]
pub enum FinitenessError {
    #[error("criterion input: {0}")]
    Input(String),
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error(transparent)]
    String(#[from] StringError),
    #[error("exhaustive enumeration of homomorphisms needs a finite field, not {0}")]
    InfiniteField(String),
}

/// Paths `p_1..p_r`, `q_1..q_r` in composition notation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Criterion3Input {
    pub p: Vec<String>,
    pub q: Vec<String>,
}

/// Input with paths resolved; `valleys[i]` is the endpoint of `p_i`, `tops[i]` the common start.
#[derive(Clone, Debug)]
pub struct ResolvedInput {
    pub p: Vec<Path>,
    pub q: Vec<Path>,
    pub valleys: Vec<usize>,
    pub tops: Vec<usize>,
}

impl ResolvedInput {
    pub fn r(&self) -> usize {
        self.p.len()
    }

    /// `p_i` for `i ≥ 1`, indices wrapping modulo `r`.
    pub fn p_at(&self, i: usize) -> &Path {
        &self.p[(i - 1) % self.r()]
    }

    pub fn q_at(&self, i: usize) -> &Path {
        &self.q[(i - 1) % self.r()]
    }

    /// Vertex of the simple module the criterion is about.
    pub fn simple_vertex(&self) -> usize {
        self.valleys[0]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub r: usize,
    pub valleys: Vec<String>,
    pub tops: Vec<String>,
    pub diagnostics: Vec<String>,
}

/// Resolve the paths and check the shape and subpath hypotheses.
pub fn validate_criterion_input<F: Field>(
    alg: &AlgebraRef<F>,
    inp: &Criterion3Input,
) -> Result<(ResolvedInput, ValidationReport), FinitenessError> {
    let q = alg.quiver();
    let r = inp.p.len();
    if r == 0 || inp.q.len() != r {
        return Err(FinitenessError::Input(format!("need r >= 1 paths p and q, got {} and {}", inp.p.len(), inp.q.len())));
    }
    let parse = |t: &String| q.parse_path(t).map_err(FinitenessError::Input);
    let p: Vec<Path> = inp.p.iter().map(parse).collect::<Result<_, _>>()?;
    let qq: Vec<Path> = inp.q.iter().map(parse).collect::<Result<_, _>>()?;
    let mut diag = Vec::new();
    let names: Vec<String> = (1..=r).map(|i| format!("p{i}")).chain((1..=r).map(|i| format!("q{i}"))).collect();
    let all: Vec<&Path> = p.iter().chain(&qq).collect();
    for (name, path) in names.iter().zip(&all) {
        if path.is_trivial() {
            diag.push(format!("{name} has length zero"));
        } else if alg.is_zero_path(path) {
            diag.push(format!("{name} = {} is zero in the algebra", q.path_string(path)));
        }
    }
    for i in 0..r {
        if p[i].source() != qq[i].source() {
            diag.push(format!("p{0} and q{0} start at different vertices", i + 1));
        } else if !p[i].is_trivial() && !qq[i].is_trivial() && p[i].arrows()[0] == qq[i].arrows()[0] {
            diag.push(format!("p{0} and q{0} start in the same arrow", i + 1));
        }
        let next = (i + 1) % r;
        if qq[i].target() != p[next].target() {
            diag.push(format!("q{} ends at {} but p{} ends at {}", i + 1, q.vertex_name(qq[i].target()), next + 1, q.vertex_name(p[next].target())));
        }
    }
    for (a, pa) in all.iter().enumerate() {
        for (b, pb) in all.iter().enumerate() {
            if a != b && is_subpath(pa, pb, q) {
                diag.push(format!("{} is a subpath of {}", names[a], names[b]));
            }
        }
    }
    let valleys: Vec<usize> = p.iter().map(Path::target).collect();
    let tops: Vec<usize> = p.iter().map(Path::source).collect();
    let report = ValidationReport {
        valid: diag.is_empty(),
        r,
        valleys: valleys.iter().map(|&v| q.vertex_name(v).to_string()).collect(),
        tops: tops.iter().map(|&v| q.vertex_name(v).to_string()).collect(),
        diagnostics: diag,
    };
    Ok((ResolvedInput { p, q: qq, valleys, tops }, report))
}

/// Graph spec of the zigzag `M_n` with `n·r` tops; the last top carries only its `p`-edge.
pub fn mn_graphspec<F: Field>(alg: &AlgebraRef<F>, inp: &ResolvedInput, n: usize) -> GraphSpec {
    let q = alg.quiver();
    let mut s = GraphSpec::default();
    let count = n * inp.r();
    for k in 1..=count {
        let name = format!("x{k}");
        s.top(&name, q.vertex_name(inp.p_at(k).source()));
        s.edge(&name, &q.path_string(inp.p_at(k)), &format!("v{k}"));
        if k < count {
            s.edge(&name, &q.path_string(inp.q_at(k)), &format!("v{}", k + 1));
        }
    }
    s
}

pub fn build_mn<F: Field>(alg: &AlgebraRef<F>, inp: &ResolvedInput, n: usize) -> Result<GraphModule<F>, FinitenessError> {
    let mut m = rep_from_graphspec(alg, &mn_graphspec(alg, inp, n))?;
    m.rep = m.rep.with_name(format!("M_{n}"));
    Ok(m)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Condition2 {
    pub i: bool,
    pub ii: Vec<bool>,
    pub iii: Vec<bool>,
}

impl Condition2 {
    pub fn holds(&self) -> bool {
        self.i && self.ii.iter().all(|&b| b) && self.iii.iter().all(|&b| b)
    }

    pub fn failed_parts(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !self.i {
            out.push("(i)".to_string());
        }
        for (k, b) in self.ii.iter().enumerate() {
            if !b {
                out.push(format!("(ii) at index {}", k + 1));
            }
        }
        for (k, b) in self.iii.iter().enumerate() {
            if !b {
                out.push(format!("(iii) at index {}", k + 1));
            }
        }
        out
    }
}

fn image_of<F: Field>(a: &Representation<F>, p: &Path) -> Matrix<F> {
    linalg::image(&a.path_action(p))
}

/// Decide the three socle conditions by subspace computations.
pub fn condition2_check<F: Field>(inp: &ResolvedInput, a: &Representation<F>) -> Condition2 {
    let soc = a.socle();
    let r = inp.r();
    let e1 = inp.valleys[0];
    let i = linalg::span_contains(&image_of(a, inp.p_at(1)), &soc.spaces[e1]);
    let mut ii = Vec::with_capacity(r);
    let mut iii = Vec::with_capacity(r);
    for k in 1..=r {
        let qk = inp.q_at(k);
        let t = qk.target();
        let meet = linalg::intersect(&image_of(a, qk), &soc.spaces[t]);
        ii.push(linalg::span_contains(&image_of(a, inp.p_at(k + 1)), &meet));
        let pk = inp.p_at(k);
        let pre = linalg::preimage(&a.path_action(pk), &soc.spaces[pk.target()]);
        let pushed = a.path_action(qk).mul(&pre);
        iii.push(linalg::span_contains(&soc.spaces[t], &pushed));
    }
    Condition2 { i, ii, iii }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CorpusModule<F: Field> {
    pub name: String,
    pub kind: String,
    #[serde(skip)]
    pub rep: Option<Representation<F>>,
    pub dim: usize,
    pub pdim: PdimResult,
}

impl<F: Field> CorpusModule<F> {
    pub fn rep(&self) -> &Representation<F> {
        self.rep.as_ref().expect("corpus module carries its representation")
    }
}

/// Strings and sampled bands, each with its projective dimension.
pub struct Corpus<F: Field> {
    pub description: String,
    pub modules: Vec<CorpusModule<F>>,
}

impl<F: Field> Corpus<F> {
    /// Modules of finite projective dimension.
    pub fn finite_pdim(&self) -> impl Iterator<Item = &CorpusModule<F>> {
        self.modules.iter().filter(|m| m.pdim.is_finite())
    }

    pub fn finite_pdim_reps(&self, dim_bound: usize) -> Vec<(String, Representation<F>)> {
        self.finite_pdim().filter(|m| m.dim <= dim_bound).map(|m| (m.name.clone(), m.rep().clone())).collect()
    }
}

/// Enumerate strings of length at most `max_len` and bands at the given parameters.
pub fn string_band_corpus<F: Field>(
    alg: &AlgebraRef<F>,
    max_len: usize,
    lambdas: &[F],
    cutoff: usize,
) -> Result<Corpus<F>, FinitenessError> {
    let q = alg.quiver();
    let mut graph = SyzygyGraph::new(alg);
    let mut modules = Vec::new();
    for w in enumerate_strings(alg, max_len) {
        let rep = string_rep(alg, &w)?;
        let pdim = graph.pdim(&rep, cutoff)?;
        modules.push(CorpusModule { name: w.display(q), kind: "string".into(), dim: rep.total_dim(), rep: Some(rep), pdim });
    }
    for band in enumerate_bands(alg, max_len) {
        for l in lambdas {
            let rep = band_rep(alg, &band, l)?;
            let pdim = graph.pdim(&rep, cutoff)?;
            modules.push(CorpusModule {
                name: format!("band[{}; {l}]", band.display(q)),
                kind: "band".into(),
                dim: rep.total_dim(),
                rep: Some(rep),
                pdim,
            });
        }
    }
    let lam: Vec<String> = lambdas.iter().map(|l| l.to_string()).collect();
    Ok(Corpus {
        description: format!("strings and bands of length <= {max_len}, band parameters {{{}}}, cutoff {cutoff}", lam.join(", ")),
        modules,
    })
}

/// Default band parameters: `{1, -1, 2}` over Q, all nonzero elements over a prime field.
pub fn default_lambdas<F: Field>() -> Vec<F> {
    match F::elements() {
        Some(all) => all.into_iter().filter(|x| !x.is_zero()).collect(),
        None => vec![F::one(), -F::one(), F::from_i64(2)],
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanEntry {
    pub module: String,
    pub kind: String,
    pub dim: usize,
    pub result: Condition2,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanReport {
    pub corpus: String,
    pub checked: usize,
    pub passed: usize,
    pub failures: Vec<(String, Vec<String>)>,
    pub excluded_infinite: usize,
    /// Modules whose projective dimension was not settled within the cutoff.
    pub undecided: Vec<String>,
    pub vacuous: bool,
    pub all_pass: bool,
    pub entries: Vec<ScanEntry>,
}

/// Run the socle conditions on every corpus module of finite projective dimension.
pub fn scan_condition2<F: Field>(inp: &ResolvedInput, corpus: &Corpus<F>) -> ScanReport {
    let finite: Vec<&CorpusModule<F>> = corpus.finite_pdim().collect();
    let entries: Vec<ScanEntry> = finite
        .par_iter()
        .map(|m| ScanEntry { module: m.name.clone(), kind: m.kind.clone(), dim: m.dim, result: condition2_check(inp, m.rep()) })
        .collect();
    let failures: Vec<(String, Vec<String>)> =
        entries.iter().filter(|e| !e.result.holds()).map(|e| (e.module.clone(), e.result.failed_parts())).collect();
    let undecided = corpus
        .modules
        .iter()
        .filter(|m| matches!(m.pdim, PdimResult::AtLeast { .. }))
        .map(|m| m.name.clone())
        .collect();
    let excluded_infinite = corpus.modules.iter().filter(|m| m.pdim.is_infinite()).count();
    ScanReport {
        corpus: corpus.description.clone(),
        checked: entries.len(),
        passed: entries.len() - failures.len(),
        all_pass: failures.is_empty(),
        vacuous: entries.is_empty(),
        failures,
        excluded_infinite,
        undecided,
        entries,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BandSocleFact {
    pub vertex: String,
    pub paths: Vec<String>,
    /// Every nonzero path of positive length ending here is an arrow, and there are at most two.
    pub two_arrow_property: bool,
}

pub fn band_socle_fact_check<F: Field>(alg: &AlgebraRef<F>, v: usize) -> BandSocleFact {
    let q = alg.quiver();
    let ending: Vec<&Path> = alg.basis().iter().filter(|p| !p.is_trivial() && p.target() == v).collect();
    BandSocleFact {
        vertex: q.vertex_name(v).to_string(),
        paths: ending.iter().map(|p| q.path_string(p)).collect(),
        two_arrow_property: ending.len() <= 2 && ending.iter().all(|p| p.len() == 1),
    }
}

/// Whether `e_v(Soc M)` lies in `u M` for every listed path `u` ending at `v`.
pub fn socle_in_images<F: Field>(rep: &Representation<F>, v: usize, paths: &[Path]) -> bool {
    let soc = rep.socle();
    paths.iter().all(|u| linalg::span_contains(&image_of(rep, u), &soc.spaces[v]))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BandLemmaReport {
    pub vertex: String,
    pub paths: Vec<String>,
    pub checked: usize,
    pub failures: Vec<String>,
}

/// Check `e_v(Soc B) ⊆ ⋂ u B` on every band in the corpus.
pub fn band_lemma_check<F: Field>(alg: &AlgebraRef<F>, corpus: &Corpus<F>, v: usize, paths: &[Path]) -> BandLemmaReport {
    let q = alg.quiver();
    let bands: Vec<&CorpusModule<F>> = corpus.modules.iter().filter(|m| m.kind == "band").collect();
    let failures = bands.iter().filter(|m| !socle_in_images(m.rep(), v, paths)).map(|m| m.name.clone()).collect();
    BandLemmaReport {
        vertex: q.vertex_name(v).to_string(),
        paths: paths.iter().map(|p| q.path_string(p)).collect(),
        checked: bands.len(),
        failures,
    }
}

// ---------------------------------------------------------------------------
// Approximations

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Left,
    Right,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorEntry {
    pub module: String,
    pub dim: usize,
    /// Dimension of the space of maps that must factor.
    pub required: usize,
    /// Dimension of the subspace that does factor.
    pub factored: usize,
    pub passes: bool,
    /// Every basis map that factors was re-composed and compared exactly.
    pub witnesses_verified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinimalityReport {
    /// No nonzero summand of the source lies in the kernel.
    pub right_minimal: bool,
    pub summands: Vec<String>,
    /// For each summand, whether the map restricted to the other summands is still an approximation.
    pub deletion_still_approximates: Vec<bool>,
    pub minimal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApproxReport {
    pub direction: Direction,
    pub candidate: String,
    pub candidate_dim: usize,
    pub corpus: String,
    pub checked: usize,
    pub passed: bool,
    pub failures: Vec<String>,
    pub entries: Vec<FactorEntry>,
    pub minimality: Option<MinimalityReport>,
}

/// Compare the span of `produced` with the space spanned by `required`, re-verifying each solvable element.
fn factor_span<F: Field>(
    produced: &[ModuleMap<F>],
    sources: &[ModuleMap<F>],
    required: &[ModuleMap<F>],
    recompose: impl Fn(&ModuleMap<F>) -> ModuleMap<F>,
) -> (usize, bool) {
    if required.is_empty() {
        return (0, true);
    }
    let len = required[0].flatten().len();
    let cols: Vec<Matrix<F>> = produced.iter().map(|m| Matrix::column(m.flatten())).collect();
    let span = if cols.is_empty() { Matrix::zeros(len, 0) } else { Matrix::hstack_all(len, &cols) };
    let mut factored = 0;
    let mut verified = true;
    for g in required {
        let Some(c) = span.solve(&Matrix::column(g.flatten())) else { continue };
        factored += 1;
        let h = combine_maps_or_zero(sources, &c.col(0));
        let back = recompose(&h);
        if back.blocks() != g.blocks() || !h.is_homomorphism() {
            verified = false;
        }
    }
    (factored, verified)
}

fn combine_maps_or_zero<F: Field>(maps: &[ModuleMap<F>], coeffs: &[F]) -> ModuleMap<F> {
    combine_maps(maps, coeffs)
}

fn label<F: Field>(rep: &Representation<F>) -> String {
    rep.name().map_or_else(|| format!("module of dims {:?}", rep.dims()), str::to_string)
}

/// Every map from a corpus module into the target of `f` factors through `f`.
pub fn is_right_approximation<F: Field>(f: &ModuleMap<F>, corpus: &[(String, Representation<F>)], corpus_name: &str) -> ApproxReport {
    let (a, m) = (f.source(), f.target());
    let entries: Vec<FactorEntry> = corpus
        .par_iter()
        .map(|(name, b)| {
            let required = hom_basis(b, m);
            if required.is_empty() {
                return FactorEntry { module: name.clone(), dim: b.total_dim(), required: 0, factored: 0, passes: true, witnesses_verified: true };
            }
            let sources = hom_basis(b, a);
            let produced: Vec<ModuleMap<F>> = sources.iter().map(|h| f.compose(h)).collect();
            let (factored, ok) = if sources.is_empty() {
                (0, true)
            } else {
                factor_span(&produced, &sources, &required, |h| f.compose(h))
            };
            FactorEntry {
                module: name.clone(),
                dim: b.total_dim(),
                required: required.len(),
                factored,
                passes: factored == required.len() && ok,
                witnesses_verified: ok,
            }
        })
        .collect();
    finish_report(Direction::Right, label(a), a.total_dim(), corpus_name, entries)
}

/// Every map from the source of `f` into a corpus module factors through `f`.
pub fn is_left_approximation<F: Field>(f: &ModuleMap<F>, corpus: &[(String, Representation<F>)], corpus_name: &str) -> ApproxReport {
    let (m, a) = (f.source(), f.target());
    let entries: Vec<FactorEntry> = corpus
        .par_iter()
        .map(|(name, b)| {
            let required = hom_basis(m, b);
            if required.is_empty() {
                return FactorEntry { module: name.clone(), dim: b.total_dim(), required: 0, factored: 0, passes: true, witnesses_verified: true };
            }
            let sources = hom_basis(a, b);
            let produced: Vec<ModuleMap<F>> = sources.iter().map(|h| h.compose(f)).collect();
            let (factored, ok) = if sources.is_empty() {
                (0, true)
            } else {
                factor_span(&produced, &sources, &required, |h| h.compose(f))
            };
            FactorEntry {
                module: name.clone(),
                dim: b.total_dim(),
                required: required.len(),
                factored,
                passes: factored == required.len() && ok,
                witnesses_verified: ok,
            }
        })
        .collect();
    finish_report(Direction::Left, label(a), a.total_dim(), corpus_name, entries)
}

fn finish_report(direction: Direction, candidate: String, candidate_dim: usize, corpus: &str, entries: Vec<FactorEntry>) -> ApproxReport {
    let failures: Vec<String> = entries.iter().filter(|e| !e.passes).map(|e| e.module.clone()).collect();
    ApproxReport {
        direction,
        candidate,
        candidate_dim,
        corpus: corpus.to_string(),
        checked: entries.len(),
        passed: failures.is_empty(),
        failures,
        entries,
        minimality: None,
    }
}

/// Right minimality of `f`, decided by nilpotency of `{φ ∈ End(A) : fφ = 0}`,
/// together with a summand-deletion check against the corpus.
pub fn minimality_check<F: Field>(
    f: &ModuleMap<F>,
    corpus: &[(String, Representation<F>)],
    corpus_name: &str,
) -> Result<MinimalityReport, FinitenessError> {
    let a = f.source();
    let ends = hom_basis(a, a);
    let right_minimal = if ends.is_empty() {
        true
    } else {
        let len = f.target().dims().iter().zip(a.dims()).map(|(x, y)| x * y).sum::<usize>();
        let cols: Vec<Matrix<F>> = ends.iter().map(|e| Matrix::column(f.compose(e).flatten())).collect();
        let coeffs = Matrix::hstack_all(len, &cols).kernel();
        let z: Vec<Matrix<F>> = (0..coeffs.cols()).map(|k| combine_maps(&ends, &coeffs.col(k)).global_matrix()).collect();
        ideal_is_nilpotent(&z)
    };
    let parts = decompose(a, &DecomposeOptions::default())?;
    let names: Vec<String> = parts.iter().enumerate().map(|(k, s)| format!("summand {} (dims {:?})", k + 1, s.rep.dims())).collect();
    let mut deletions = Vec::with_capacity(parts.len());
    for skip in 0..parts.len() {
        let keep: Vec<&crate::repmod::Summand<F>> = parts.iter().enumerate().filter(|(k, _)| *k != skip).map(|(_, s)| s).collect();
        let alg = a.algebra();
        let sum = direct_sum_with_maps(alg, &keep.iter().map(|s| s.rep.clone()).collect::<Vec<_>>());
        let blocks = (0..alg.num_vertices())
            .map(|v| {
                let pieces: Vec<Matrix<F>> = keep.iter().map(|s| s.inclusion.block(v).clone()).collect();
                if pieces.is_empty() {
                    Matrix::zeros(a.dim(v), 0)
                } else {
                    Matrix::hstack_all(a.dim(v), &pieces)
                }
            })
            .collect();
        let incl = ModuleMap::new(sum.rep, a.clone(), blocks)?;
        deletions.push(is_right_approximation(&f.compose(&incl), corpus, corpus_name).passed);
    }
    let minimal = right_minimal && deletions.iter().all(|d| !d);
    Ok(MinimalityReport { right_minimal, summands: names, deletion_still_approximates: deletions, minimal })
}

/// Whether the multiplicatively closed span of `gens` is nilpotent.
fn ideal_is_nilpotent<F: Field>(gens: &[Matrix<F>]) -> bool {
    if gens.is_empty() {
        return true;
    }
    let flat = |ms: &[Matrix<F>]| -> Matrix<F> {
        let cols: Vec<Matrix<F>> = ms.iter().map(|m| Matrix::column(m.flatten())).collect();
        Matrix::hstack_all(cols[0].rows(), &cols)
    };
    let shape = (gens[0].rows(), gens[0].cols());
    let basis_of = |ms: &[Matrix<F>]| -> Vec<Matrix<F>> {
        if ms.is_empty() {
            return Vec::new();
        }
        let b = linalg::span_basis(&flat(ms));
        (0..b.cols()).map(|k| Matrix::from_vec(shape.0, shape.1, b.col(k))).collect()
    };
    let mut cur = basis_of(gens);
    let mut prev_dim = usize::MAX;
    while !cur.is_empty() {
        if cur.len() >= prev_dim {
            return false;
        }
        prev_dim = cur.len();
        let products: Vec<Matrix<F>> = gens.iter().flat_map(|z| cur.iter().map(move |c| z.mul(c))).filter(|m| !m.is_zero()).collect();
        cur = basis_of(&products);
    }
    true
}

// ---------------------------------------------------------------------------
// Bounded refutation

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RefutationEntry {
    pub module: String,
    pub dim: usize,
    /// Coordinates of `f` in the chosen basis of `Hom(S, A)`.
    pub f: Vec<String>,
    /// Smallest `n` whose canonical map into `M_n` does not factor through `f`.
    pub witness_n: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MnEntry {
    pub n: usize,
    pub dim: usize,
    pub pdim: PdimResult,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RefutationReport {
    pub field: String,
    pub simple: String,
    pub dim_bound: usize,
    pub n_max: usize,
    pub corpus: String,
    pub modules_checked: usize,
    pub maps_checked: usize,
    pub mn: Vec<MnEntry>,
    /// No pair `(A, f)` factors every canonical map.
    pub refuted: bool,
    pub degenerate: bool,
    pub survivors: Vec<RefutationEntry>,
    pub entries: Vec<RefutationEntry>,
}

/// All tuples in `F^k`, in lexicographic order of the element list.
fn all_tuples<F: Field>(k: usize) -> Vec<Vec<F>> {
    let elems = F::elements().expect("finite field");
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|t| {
                elems.iter().map(move |e| {
                    let mut t = t.clone();
                    t.push(e.clone());
                    t
                })
            })
            .collect();
    }
    out
}

/// For every corpus module `A` of dimension at most `dim_bound` and every `f: S → A`,
/// look for `n ≤ n_max` such that `S → M_n`, `1 ↦ p_1 x_1`, does not factor through `f`.
/// Only `M_n` of finite projective dimension are used.
pub fn refute_left_bounded<F: Field>(
    alg: &AlgebraRef<F>,
    inp: &ResolvedInput,
    corpus: &[(String, Representation<F>)],
    corpus_name: &str,
    dim_bound: usize,
    n_max: usize,
    cutoff: usize,
) -> Result<RefutationReport, FinitenessError> {
    if F::elements().is_none() {
        return Err(FinitenessError::InfiniteField(F::kind().to_string()));
    }
    let v = inp.simple_vertex();
    let s = Representation::simple(alg.clone(), v);
    let mut graph = SyzygyGraph::new(alg);
    let mut mn_info = Vec::new();
    let mut targets: Vec<(usize, Representation<F>, ModuleMap<F>)> = Vec::new();
    for n in 1..=n_max {
        let m = build_mn(alg, inp, n)?;
        let pdim = graph.pdim(&m.rep, cutoff)?;
        mn_info.push(MnEntry { n, dim: m.rep.total_dim(), pdim: pdim.clone() });
        if !pdim.is_finite() {
            continue;
        }
        let (w, x) = m.rep.act(inp.p_at(1), m.top("x1").expect("first top"));
        debug_assert_eq!(w, v);
        let blocks = (0..alg.num_vertices())
            .map(|u| if u == v { Matrix::column(x.clone()) } else { Matrix::zeros(m.rep.dim(u), 0) })
            .collect();
        let g = ModuleMap::new(s.clone(), m.rep.clone(), blocks)?;
        targets.push((n, m.rep, g));
    }
    let small: Vec<&(String, Representation<F>)> = corpus.iter().filter(|(_, a)| a.total_dim() <= dim_bound).collect();
    let per_module: Vec<Vec<RefutationEntry>> = small
        .par_iter()
        .map(|(name, a)| {
            let fs = hom_basis(&s, a);
            let homs: Vec<Vec<ModuleMap<F>>> = targets.iter().map(|(_, m, _)| hom_basis(a, m)).collect();
            all_tuples::<F>(fs.len())
                .into_iter()
                .map(|c| {
                    let f = if fs.is_empty() { ModuleMap::zero(&s, a) } else { combine_maps(&fs, &c) };
                    let witness_n = targets.iter().zip(&homs).find_map(|((n, _, g), hs)| {
                        let produced: Vec<ModuleMap<F>> = hs.iter().map(|h| h.compose(&f)).collect();
                        let (factored, ok) = factor_span(&produced, hs, std::slice::from_ref(g), |h| h.compose(&f));
                        debug_assert!(ok);
                        (factored == 0).then_some(*n)
                    });
                    RefutationEntry {
                        module: name.clone(),
                        dim: a.total_dim(),
                        f: c.iter().map(|x| x.to_string()).collect(),
                        witness_n,
                    }
                })
                .collect()
        })
        .collect();
    let entries: Vec<RefutationEntry> = per_module.into_iter().flatten().collect();
    let survivors: Vec<RefutationEntry> = entries.iter().filter(|e| e.witness_n.is_none()).cloned().collect();
    let degenerate = dim_bound == 0 || small.is_empty() || targets.is_empty();
    Ok(RefutationReport {
        field: F::kind().to_string(),
        simple: alg.vertex_name(v).to_string(),
        dim_bound,
        n_max,
        corpus: corpus_name.to_string(),
        modules_checked: small.len(),
        maps_checked: entries.len(),
        mn: mn_info,
        refuted: !degenerate && survivors.is_empty(),
        degenerate,
        survivors,
        entries,
    })
}

/// Search small corpus modules and pairwise sums for a left approximation of `S_v`.
pub fn search_left_approximation<F: Field>(
    alg: &AlgebraRef<F>,
    v: usize,
    corpus: &[(String, Representation<F>)],
    corpus_name: &str,
    dim_bound: usize,
) -> Option<(ModuleMap<F>, ApproxReport)> {
    let s = Representation::simple(alg.clone(), v);
    let mut candidates: Vec<(String, Representation<F>)> =
        corpus.iter().filter(|(_, a)| a.total_dim() <= dim_bound && !hom_basis(&s, a).is_empty()).cloned().collect();
    candidates.sort_by_key(|(_, a)| a.total_dim());
    let singles = candidates.clone();
    for (i, (na, a)) in singles.iter().enumerate() {
        for (nb, b) in &singles[i..] {
            if a.total_dim() + b.total_dim() <= dim_bound {
                let sum = direct_sum_with_maps(alg, &[a.clone(), b.clone()]).rep.with_name(format!("{na} + {nb}"));
                candidates.push((format!("{na} + {nb}"), sum));
            }
        }
    }
    for (name, a) in candidates {
        let fs = hom_basis(&s, &a);
        // The sum of the basis maps, then each basis map on its own.
        let mut tries = vec![combine_maps(&fs, &vec![F::one(); fs.len()])];
        tries.extend(fs.iter().cloned());
        for f in tries {
            if f.is_zero() {
                continue;
            }
            let f = ModuleMap::new(s.clone(), a.clone().with_name(name.clone()), f.blocks().to_vec()).expect("same map");
            let report = is_left_approximation(&f, corpus, corpus_name);
            if report.passed {
                return Some((f, report));
            }
        }
    }
    None
}

/// Indecomposable modules of finite projective dimension reachable from the seeds
/// by summands and syzygies, up to `dim_bound`.
pub fn closure_corpus<F: Field>(
    alg: &AlgebraRef<F>,
    seeds: &[(String, Representation<F>)],
    dim_bound: usize,
    cutoff: usize,
) -> Result<Vec<(String, Representation<F>, PdimResult)>, FinitenessError> {
    let mut graph = SyzygyGraph::new(alg);
    let mut seed_names: BTreeMap<usize, String> = BTreeMap::new();
    let mut roots = Vec::new();
    for (name, rep) in seeds {
        let ids = graph.add_module(rep)?;
        let single = ids.len() == 1;
        for (k, id) in ids.into_iter().enumerate() {
            let label = if single { name.clone() } else { format!("{name}#{}", k + 1) };
            seed_names.entry(id).or_insert(label);
            roots.push(id);
        }
    }
    let mut pdims = BTreeMap::new();
    for &id in &roots {
        if !pdims.contains_key(&id) {
            let p = graph.pdim_of_classes(&[id], cutoff)?;
            pdims.insert(id, p);
        }
    }
    // Syzygy summands explored by the pdim runs join the corpus too.
    let total = graph.len();
    let mut out = Vec::new();
    for id in 0..total {
        let c = graph.class(id);
        if c.rep.total_dim() > dim_bound || c.rep.is_zero() {
            continue;
        }
        let p = match pdims.get(&id) {
            Some(p) => p.clone(),
            None => graph.pdim_of_classes(&[id], cutoff)?,
        };
        if !p.is_finite() {
            continue;
        }
        let c = graph.class(id);
        let name = seed_names.get(&id).cloned().unwrap_or_else(|| c.key.to_string());
        out.push((name, c.rep.clone().with_name(c.key.to_string()), p));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extend::builtin_algebra;
    use crate::field::{Fp, Q};
    use crate::repmod::{direct_sum, projective_rep};
    use crate::strings::StringWord;

    fn ex6_input() -> Criterion3Input {
        Criterion3Input { p: vec!["beta".into(), "chi".into()], q: vec!["alpha".into(), "psi".into()] }
    }

    #[test]
    fn example6_input_validates() {
        let alg: AlgebraRef<Q> = builtin_algebra("ex6").unwrap();
        let (inp, rep) = validate_criterion_input(&alg, &ex6_input()).unwrap();
        assert!(rep.valid, "{:?}", rep.diagnostics);
        assert_eq!(rep.valleys, vec!["3", "2"]);
        assert_eq!(alg.vertex_name(inp.simple_vertex()), "3");
        let same = Criterion3Input { p: vec!["beta".into(), "chi".into()], q: vec!["beta".into(), "psi".into()] };
        assert!(!validate_criterion_input(&alg, &same).unwrap().1.valid);
        let off = Criterion3Input { p: vec!["beta".into(), "chi".into()], q: vec!["alpha".into(), "rho.chi".into()] };
        assert!(!validate_criterion_input(&alg, &off).unwrap().1.valid);
    }

    #[test]
    fn m1_is_the_string() {
        let alg: AlgebraRef<Q> = builtin_algebra("ex6").unwrap();
        let (inp, _) = validate_criterion_input(&alg, &ex6_input()).unwrap();
        let m1 = build_mn(&alg, &inp, 1).unwrap();
        let w = StringWord::parse(alg.quiver(), "beta^- alpha chi^-").unwrap();
        assert!(crate::repmod::is_isomorphic(&m1.rep, &string_rep(&alg, &w).unwrap(), 0).is_iso());
        let m2 = build_mn(&alg, &inp, 2).unwrap();
        assert_eq!(m2.rep.total_dim(), 8);
        let types: Vec<usize> = m2.rep.top_elements().iter().map(|(v, _)| *v).collect();
        assert_eq!(types.iter().filter(|&&v| v == alg.vertex("1")).count(), 2);
        assert_eq!(types.iter().filter(|&&v| v == alg.vertex("5")).count(), 2);
    }

    #[test]
    fn condition2_on_projective_and_excluded_string() {
        let alg: AlgebraRef<Q> = builtin_algebra("ex6").unwrap();
        let (inp, _) = validate_criterion_input(&alg, &ex6_input()).unwrap();
        assert!(condition2_check(&inp, &projective_rep(&alg, alg.vertex("1"))).holds());
        let w = StringWord::parse(alg.quiver(), "psi^- chi").unwrap();
        let a = string_rep(&alg, &w).unwrap();
        assert!(!condition2_check(&inp, &a).i);
    }

    #[test]
    fn band_socle_facts() {
        let alg: AlgebraRef<Q> = builtin_algebra("ex6").unwrap();
        let f3 = band_socle_fact_check(&alg, alg.vertex("3"));
        assert!(f3.two_arrow_property);
        assert_eq!(f3.paths.len(), 2);
        let f7 = band_socle_fact_check(&alg, alg.vertex("7"));
        assert!(!f7.two_arrow_property);
        assert!(f7.paths.iter().any(|p| p == "tau.rho"));
    }

    #[test]
    fn identity_is_an_approximation_and_double_cover_is_not_minimal() {
        let alg: AlgebraRef<Q> = builtin_algebra("ex7-lambda").unwrap();
        let p2 = projective_rep(&alg, alg.vertex("2"));
        let corpus = vec![("P2".to_string(), p2.clone()), ("P5".to_string(), projective_rep(&alg, alg.vertex("5")))];
        assert!(is_right_approximation(&ModuleMap::identity(&p2), &corpus, "test").passed);
        assert!(is_left_approximation(&ModuleMap::identity(&p2), &corpus, "test").passed);
        let double = direct_sum(&alg, &[p2.clone(), p2.clone()]);
        let s2 = Representation::simple(alg.clone(), alg.vertex("2"));
        let top = crate::extend::map_to_simple(&double, alg.vertex("2"), &double.top_elements().iter().map(|(_, x)| x.clone()).collect::<Vec<_>>()).unwrap();
        assert_eq!(top.target().dims(), s2.dims());
        let report = is_right_approximation(&top, &corpus, "test");
        assert!(report.passed);
        let min = minimality_check(&top, &corpus, "test").unwrap();
        assert!(!min.right_minimal && !min.minimal);
        let single = crate::extend::map_to_simple(&p2, alg.vertex("2"), &[p2.top_elements()[0].1.clone()]).unwrap();
        assert!(minimality_check(&single, &corpus, "test").unwrap().minimal);
    }

    #[test]
    fn refutation_small_bound_over_f2() {
        let alg: AlgebraRef<Fp<2>> = builtin_algebra("ex6").unwrap();
        let (inp, _) = validate_criterion_input(&alg, &ex6_input()).unwrap();
        let corpus = string_band_corpus(&alg, 3, &default_lambdas(), 12).unwrap();
        let reps = corpus.finite_pdim_reps(4);
        let r = refute_left_bounded(&alg, &inp, &reps, "small", 4, 5, 12).unwrap();
        assert!(r.refuted, "{:?}", r.survivors);
        let degenerate = refute_left_bounded(&alg, &inp, &reps, "small", 0, 5, 12).unwrap();
        assert!(degenerate.degenerate && !degenerate.refuted);
    }
}
