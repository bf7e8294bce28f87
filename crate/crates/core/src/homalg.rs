//! Projective covers, syzygies, projective dimension, and finitistic-dimension probes.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::field::Field;
use crate::linalg::Matrix;
use crate::presentation::AlgebraRef;
use crate::repmod::{
    decompose_modules, direct_sum, iso_to_local, DecomposeOptions, ModuleError, ModuleMap, ProjectiveModule,
    Representation,
};
use crate::strings::{enumerate_strings, string_rep, strings_with_dims};

/// Default depth for syzygy iteration.
pub const DEFAULT_CUTOFF: usize = 12;

pub struct ProjectiveCover<F: Field> {
    pub cover: Representation<F>,
    pub map: ModuleMap<F>,
    /// Vertex type of each summand `Λe_v`, in top-element order.
    pub summand_vertices: Vec<usize>,
}

/// `⊕ Λe_{v(t)} → M` sending the generator of each summand to a top element `t`.
pub fn projective_cover<F: Field>(rep: &Representation<F>) -> ProjectiveCover<F> {
    let alg = rep.algebra();
    let tops = rep.top_elements();
    let projs: Vec<ProjectiveModule<F>> = tops.iter().map(|(v, _)| ProjectiveModule::new(alg, *v)).collect();
    let cover = direct_sum(alg, &projs.iter().map(|p| p.rep.clone()).collect::<Vec<_>>());
    let n = alg.num_vertices();
    let mut blocks = Vec::with_capacity(n);
    for w in 0..n {
        let mut parts = Vec::new();
        for (p, (_, x)) in projs.iter().zip(&tops) {
            let mut m = Matrix::zeros(rep.dim(w), p.rep.dim(w));
            let x = Matrix::column(x.clone());
            for (path, t, l) in p.basis_paths() {
                if t != w {
                    continue;
                }
                let y = rep.path_action(&path).mul(&x);
                for r in 0..rep.dim(w) {
                    m[(r, l)] = y[(r, 0)].clone();
                }
            }
            parts.push(m);
        }
        blocks.push(Matrix::hstack_all(rep.dim(w), &parts));
    }
    let map = ModuleMap::new(cover.clone(), rep.clone(), blocks).expect("cover map is a homomorphism");
    ProjectiveCover { cover, map, summand_vertices: tops.iter().map(|(v, _)| *v).collect() }
}

/// Dimension of the projective cover, computed from the top alone.
pub fn cover_dim<F: Field>(rep: &Representation<F>) -> usize {
    let alg = rep.algebra();
    rep.top_elements().iter().map(|(v, _)| alg.basis_from(*v).len()).sum()
}

pub fn is_projective<F: Field>(rep: &Representation<F>) -> bool {
    cover_dim(rep) == rep.total_dim()
}

/// The first syzygy together with the projective cover it came from.
pub fn first_syzygy<F: Field>(rep: &Representation<F>) -> (Representation<F>, ProjectiveCover<F>) {
    let cover = projective_cover(rep);
    let (k, _) = cover.map.kernel();
    (k, cover)
}

/// `Ω^k(rep)` by iterated kernels of projective covers.
pub fn syzygy<F: Field>(rep: &Representation<F>, k: usize) -> Representation<F> {
    let mut cur = rep.clone();
    for _ in 0..k {
        if cur.is_zero() {
            break;
        }
        cur = first_syzygy(&cur).0;
    }
    cur
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ClassKey {
    /// Indecomposable projective `Λe_v`.
    Projective(String),
    /// String module, by canonical word.
    String(String),
    /// Any other indecomposable, numbered in order of discovery.
    Class(usize),
}

impl fmt::Display for ClassKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassKey::Projective(v) => write!(f, "P({v})"),
            ClassKey::String(w) => write!(f, "string[{w}]"),
            ClassKey::Class(k) => write!(f, "class#{k}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PdimResult {
    Exact { value: usize },
    /// The summand `key` occurs in `Ω^first_index` and again in `Ω^(first_index + period)`.
    Infinite { key: String, first_index: usize, period: usize, cycle: Vec<String> },
    AtLeast { value: usize },
}

impl PdimResult {
    pub fn is_finite(&self) -> bool {
        matches!(self, PdimResult::Exact { .. })
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, PdimResult::Infinite { .. })
    }

    pub fn exact(&self) -> Option<usize> {
        match self {
            PdimResult::Exact { value } => Some(*value),
            _ => None,
        }
    }
}

impl fmt::Display for PdimResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PdimResult::Exact { value } => write!(f, "{value}"),
            PdimResult::Infinite { key, first_index, period, .. } => {
                write!(f, "infinite ({key} recurs at Ω^{first_index} and Ω^{})", first_index + period)
            }
            PdimResult::AtLeast { value } => write!(f, ">= {value}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ClassEntry<F: Field> {
    pub key: ClassKey,
    pub rep: Representation<F>,
    pub projective: bool,
    /// Summands of the first syzygy, as class ids with multiplicity.
    pub syzygy: Option<Vec<usize>>,
}

/// Registry of indecomposable isomorphism classes and the syzygy relation among them.
pub struct SyzygyGraph<F: Field> {
    alg: AlgebraRef<F>,
    classes: Vec<ClassEntry<F>>,
    by_dims: HashMap<Vec<usize>, Vec<usize>>,
    opts: DecomposeOptions,
    name_strings: bool,
}

impl<F: Field> SyzygyGraph<F> {
    pub fn new(alg: &AlgebraRef<F>) -> Self {
        let name_strings = alg.is_special_biserial();
        SyzygyGraph {
            alg: alg.clone(),
            classes: Vec::new(),
            by_dims: HashMap::new(),
            opts: DecomposeOptions::default(),
            name_strings,
        }
    }

    pub fn with_options(mut self, opts: DecomposeOptions) -> Self {
        self.opts = opts;
        self
    }

    pub fn algebra(&self) -> &AlgebraRef<F> {
        &self.alg
    }

    pub fn class(&self, id: usize) -> &ClassEntry<F> {
        &self.classes[id]
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Find or register the class of an indecomposable module with local endomorphism ring.
    pub fn classify_indecomposable(&mut self, rep: &Representation<F>) -> usize {
        let dims = rep.dims().to_vec();
        if let Some(ids) = self.by_dims.get(&dims) {
            for &id in ids {
                if iso_to_local(&self.classes[id].rep, rep).is_some() {
                    return id;
                }
            }
        }
        let id = self.classes.len();
        let projective = is_projective(rep);
        let key = if projective {
            let v = rep.top_elements()[0].0;
            ClassKey::Projective(self.alg.vertex_name(v).to_string())
        } else {
            self.string_key(rep).unwrap_or(ClassKey::Class(id))
        };
        self.classes.push(ClassEntry { key, rep: rep.clone(), projective, syzygy: None });
        self.by_dims.entry(dims).or_default().push(id);
        id
    }

    fn string_key(&self, rep: &Representation<F>) -> Option<ClassKey> {
        if !self.name_strings {
            return None;
        }
        let q = self.alg.quiver();
        let ranks: Vec<usize> = rep.arrow_maps().iter().map(Matrix::rank).collect();
        for w in strings_with_dims(&self.alg, rep.dims()) {
            let mut counts = vec![0; ranks.len()];
            for l in &w.letters {
                counts[l.arrow] += 1;
            }
            if counts != ranks {
                continue;
            }
            let s = string_rep(&self.alg, &w).ok()?;
            if iso_to_local(rep, &s).is_some() {
                return Some(ClassKey::String(w.display(q)));
            }
        }
        None
    }

    /// Decompose and register every summand.
    pub fn add_module(&mut self, rep: &Representation<F>) -> Result<Vec<usize>, ModuleError> {
        let parts = decompose_modules(rep, &self.opts)?;
        Ok(parts.iter().map(|p| self.classify_indecomposable(p)).collect())
    }

    /// Classes of the summands of `Ω¹` of class `id` (memoized).
    pub fn syzygy_of(&mut self, id: usize) -> Result<Vec<usize>, ModuleError> {
        if let Some(s) = &self.classes[id].syzygy {
            return Ok(s.clone());
        }
        let out = if self.classes[id].projective {
            Vec::new()
        } else {
            let omega = first_syzygy(&self.classes[id].rep).0;
            self.add_module(&omega)?
        };
        self.classes[id].syzygy = Some(out.clone());
        Ok(out)
    }

    /// Projective dimension from the syzygy graph reachable from the summands of `rep`.
    pub fn pdim(&mut self, rep: &Representation<F>, cutoff: usize) -> Result<PdimResult, ModuleError> {
        let roots = self.add_module(rep)?;
        self.pdim_of_classes(&roots, cutoff)
    }

    pub fn pdim_of_classes(&mut self, roots: &[usize], cutoff: usize) -> Result<PdimResult, ModuleError> {
        let mut level: BTreeMap<usize, usize> = BTreeMap::new();
        let mut queue = VecDeque::new();
        for &r in roots {
            if !level.contains_key(&r) {
                level.insert(r, 0);
                queue.push_back(r);
            }
        }
        let mut children: HashMap<usize, Vec<usize>> = HashMap::new();
        let mut truncated = false;
        while let Some(id) = queue.pop_front() {
            if self.classes[id].projective {
                continue;
            }
            let d = level[&id];
            if d >= cutoff {
                truncated = true;
                continue;
            }
            let kids = self.syzygy_of(id)?;
            for &k in &kids {
                if !level.contains_key(&k) {
                    level.insert(k, d + 1);
                    queue.push_back(k);
                }
            }
            children.insert(id, kids);
        }
        if let Some(cycle) = find_cycle(&children) {
            let start = cycle[0];
            return Ok(PdimResult::Infinite {
                key: self.classes[start].key.to_string(),
                first_index: level[&start],
                period: cycle.len(),
                cycle: cycle.iter().map(|&c| self.classes[c].key.to_string()).collect(),
            });
        }
        if truncated {
            return Ok(PdimResult::AtLeast { value: cutoff });
        }
        // Longest path to a nonprojective class, over an acyclic graph.
        let mut memo: HashMap<usize, usize> = HashMap::new();
        fn height(id: usize, children: &HashMap<usize, Vec<usize>>, memo: &mut HashMap<usize, usize>) -> usize {
            if let Some(&h) = memo.get(&id) {
                return h;
            }
            let h = match children.get(&id) {
                None => 0,
                Some(kids) => 1 + kids.iter().map(|&k| height(k, children, memo)).max().unwrap_or(0),
            };
            memo.insert(id, h);
            h
        }
        let value = roots.iter().map(|&r| height(r, &children, &mut memo)).max().unwrap_or(0);
        Ok(PdimResult::Exact { value })
    }

    /// Whether class `id` occurs among the summands of `Ω^k(rep)`, recomputed from scratch.
    pub fn occurs_in_syzygy(&mut self, rep: &Representation<F>, k: usize, id: usize) -> Result<bool, ModuleError> {
        let omega = syzygy(rep, k);
        let parts = decompose_modules(&omega, &self.opts)?;
        let target = self.classes[id].rep.clone();
        Ok(parts.iter().any(|p| iso_to_local(&target, p).is_some()))
    }

    pub fn find_key(&self, key: &str) -> Option<usize> {
        self.classes.iter().position(|c| c.key.to_string() == key)
    }
}

/// Some directed cycle, listed from a node of minimal id.
fn find_cycle(children: &HashMap<usize, Vec<usize>>) -> Option<Vec<usize>> {
    let mut nodes: Vec<usize> = children.keys().copied().collect();
    nodes.sort_unstable();
    let mut state: HashMap<usize, u8> = HashMap::new();
    let mut stack: Vec<usize> = Vec::new();
    fn dfs(
        v: usize,
        children: &HashMap<usize, Vec<usize>>,
        state: &mut HashMap<usize, u8>,
        stack: &mut Vec<usize>,
    ) -> Option<Vec<usize>> {
        state.insert(v, 1);
        stack.push(v);
        if let Some(kids) = children.get(&v) {
            for &k in kids {
                match state.get(&k).copied().unwrap_or(0) {
                    1 => {
                        let pos = stack.iter().position(|&x| x == k).expect("on stack");
                        return Some(stack[pos..].to_vec());
                    }
                    0 => {
                        if let Some(c) = dfs(k, children, state, stack) {
                            return Some(c);
                        }
                    }
                    _ => {}
                }
            }
        }
        stack.pop();
        state.insert(v, 2);
        None
    }
    for v in nodes {
        if state.get(&v).copied().unwrap_or(0) == 0 {
            if let Some(c) = dfs(v, children, &mut state, &mut stack) {
                return Some(c);
            }
        }
    }
    None
}

/// Projective dimension with a fresh registry.
pub fn pdim<F: Field>(rep: &Representation<F>, cutoff: usize) -> Result<PdimResult, ModuleError> {
    SyzygyGraph::new(rep.algebra()).pdim(rep, cutoff)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FindimEntry {
    pub module: String,
    pub dim: usize,
    pub pdim: PdimResult,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FindimReport {
    pub corpus: String,
    pub max_len: Option<usize>,
    pub cutoff: usize,
    pub field: String,
    /// Maximum finite projective dimension over the corpus.
    pub max_finite_pdim: Option<usize>,
    pub witness: Option<String>,
    pub exact: usize,
    pub infinite: usize,
    pub at_least: usize,
    pub entries: Vec<FindimEntry>,
}

/// Classify every string of length at most `max_len` (special biserial algebras).
pub fn findim_probe<F: Field>(alg: &AlgebraRef<F>, max_len: usize, cutoff: usize) -> Result<FindimReport, ModuleError> {
    let q = alg.quiver();
    let words = enumerate_strings(alg, max_len);
    let modules: Vec<(String, Representation<F>)> = words
        .iter()
        .map(|w| (w.display(q), string_rep(alg, w).expect("enumerated strings are valid")))
        .collect();
    let mut report = findim_probe_corpus(alg, &modules, cutoff)?;
    report.corpus = format!("strings of length <= {max_len}");
    report.max_len = Some(max_len);
    Ok(report)
}

/// Classify a supplied corpus.
pub fn findim_probe_corpus<F: Field>(
    alg: &AlgebraRef<F>,
    modules: &[(String, Representation<F>)],
    cutoff: usize,
) -> Result<FindimReport, ModuleError> {
    let mut graph = SyzygyGraph::new(alg);
    let mut entries = Vec::with_capacity(modules.len());
    let (mut best, mut witness) = (None::<usize>, None);
    let (mut exact, mut infinite, mut at_least) = (0, 0, 0);
    for (name, m) in modules {
        let p = graph.pdim(m, cutoff)?;
        match &p {
            PdimResult::Exact { value } => {
                exact += 1;
                if best.is_none_or(|b| *value > b) {
                    best = Some(*value);
                    witness = Some(name.clone());
                }
            }
            PdimResult::Infinite { .. } => infinite += 1,
            PdimResult::AtLeast { .. } => at_least += 1,
        }
        entries.push(FindimEntry { module: name.clone(), dim: m.total_dim(), pdim: p });
    }
    Ok(FindimReport {
        corpus: format!("{} supplied modules", modules.len()),
        max_len: None,
        cutoff,
        field: F::kind().to_string(),
        max_finite_pdim: best,
        witness,
        exact,
        infinite,
        at_least,
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Q;
    use crate::presentation::{parse_algebra, Algebra};
    use crate::repmod::{is_isomorphic, projective_rep};
    use std::sync::Arc;

    fn ex2() -> AlgebraRef<Q> {
        let text = "vertices: 1 2\narrow alpha: 1 -> 2\narrow beta: 1 -> 2\narrow gamma: 2 -> 1\n\
                    rel: gamma.beta\nrel: alpha.gamma\nrel: beta.gamma\n";
        Arc::new(Algebra::new(parse_algebra(text).unwrap()).unwrap())
    }

    #[test]
    fn covers_and_syzygies_of_example_two() {
        let alg = ex2();
        let s1 = Representation::simple(alg.clone(), 0);
        let c = projective_cover(&s1);
        assert_eq!(c.cover.total_dim(), 4);
        let (omega, _) = first_syzygy(&s1);
        assert_eq!(omega.total_dim(), 3);
        let expected = direct_sum(&alg, &[projective_rep(&alg, 1), Representation::simple(alg.clone(), 1)]);
        assert!(is_isomorphic(&omega, &expected, 0).is_iso());
        assert!(syzygy(&projective_rep(&alg, 0), 1).is_zero());
    }

    #[test]
    fn pdims_of_example_two_simples() {
        let alg = ex2();
        let mut g = SyzygyGraph::new(&alg);
        for v in 0..2 {
            let s = Representation::simple(alg.clone(), v);
            let p = g.pdim(&s, DEFAULT_CUTOFF).unwrap();
            assert!(p.is_infinite(), "{p:?}");
        }
        assert_eq!(g.pdim(&projective_rep(&alg, 0), 4).unwrap(), PdimResult::Exact { value: 0 });
    }

    #[test]
    fn infinite_certificate_replays() {
        let alg = ex2();
        let mut g = SyzygyGraph::new(&alg);
        let s = Representation::simple(alg.clone(), 0);
        let PdimResult::Infinite { key, first_index, period, .. } = g.pdim(&s, DEFAULT_CUTOFF).unwrap() else {
            panic!("expected infinite");
        };
        let id = g.find_key(&key).unwrap();
        assert!(g.occurs_in_syzygy(&s, first_index, id).unwrap());
        assert!(g.occurs_in_syzygy(&s, first_index + period, id).unwrap());
    }

    #[test]
    fn findim_probe_example_two() {
        let alg = ex2();
        let r = findim_probe(&alg, 6, DEFAULT_CUTOFF).unwrap();
        assert_eq!(r.max_finite_pdim, Some(1));
        assert_eq!(r.at_least, 0);
    }
}

#[cfg(test)]
mod example6_tests {
    use super::*;
    use crate::extend::builtin_algebra;
    use crate::field::Q;
    use crate::strings::StringWord;

    #[test]
    fn m1_has_pdim_two_and_top_simples_are_infinite() {
        let alg: AlgebraRef<Q> = builtin_algebra("ex6").unwrap();
        let w = StringWord::parse(alg.quiver(), "beta^- alpha chi^-").unwrap();
        let m1 = string_rep(&alg, &w).unwrap();
        let mut g = SyzygyGraph::new(&alg);
        assert_eq!(g.pdim(&m1, DEFAULT_CUTOFF).unwrap(), PdimResult::Exact { value: 2 });
        for v in ["3", "4"] {
            let s = Representation::simple(alg.clone(), alg.vertex(v));
            assert!(g.pdim(&s, DEFAULT_CUTOFF).unwrap().is_infinite());
        }
    }

    #[test]
    fn example6_probe_reaches_two() {
        let alg: AlgebraRef<Q> = builtin_algebra("ex6").unwrap();
        let r = findim_probe(&alg, 6, DEFAULT_CUTOFF).unwrap();
        assert_eq!(r.max_finite_pdim, Some(2));
    }
}
