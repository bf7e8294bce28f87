//! String and band words, their modules, and graph presentations of modules.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::Field;
use crate::linalg::Matrix;
use crate::presentation::{relation_paths, AlgebraRef, Path, Quiver};
use crate::repmod::{direct_sum_with_maps, Element, ModuleError, ProjectiveModule, Representation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StringError {
    #[error("invalid string word: {0}")]
    InvalidWord(String),
    #[error("invalid band word: {0}")]
    InvalidBand(String),
    #[error("band parameter must be nonzero")]
    ZeroParameter,
    #[error("inconsistent graph spec: {0}")]
    InconsistentSpec(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Module(#[from] ModuleError),
}

/// An arrow read forwards (direct) or backwards (inverse).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub arrow: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn direct(arrow: usize) -> Letter {
        Letter { arrow, inverse: false }
    }

    pub fn inverse(arrow: usize) -> Letter {
        Letter { arrow, inverse: true }
    }

    pub fn flip(self) -> Letter {
        Letter { arrow: self.arrow, inverse: !self.inverse }
    }

    /// Walk endpoints (from, to).
    pub fn ends(self, q: &Quiver) -> (usize, usize) {
        let a = q.arrow(self.arrow);
        if self.inverse {
            (a.target, a.source)
        } else {
            (a.source, a.target)
        }
    }
}

/// A walk of letters read left to right; the empty word sits at `start`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StringWord {
    pub start: usize,
    pub letters: Vec<Letter>,
}

impl Ord for StringWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.letters
            .len()
            .cmp(&other.letters.len())
            .then_with(|| self.letters.cmp(&other.letters))
            .then_with(|| self.start.cmp(&other.start))
    }
}

impl PartialOrd for StringWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl StringWord {
    pub fn empty(v: usize) -> StringWord {
        StringWord { start: v, letters: Vec::new() }
    }

    /// Build from letters; `None` unless consecutive letters form a walk.
    pub fn from_letters(q: &Quiver, letters: Vec<Letter>) -> Option<StringWord> {
        let start = letters.first()?.ends(q).0;
        let mut at = start;
        for l in &letters {
            let (from, to) = l.ends(q);
            if from != at {
                return None;
            }
            at = to;
        }
        Some(StringWord { start, letters })
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Vertices of the walk nodes `b_0, ..., b_n`.
    pub fn nodes(&self, q: &Quiver) -> Vec<usize> {
        let mut out = vec![self.start];
        for l in &self.letters {
            out.push(l.ends(q).1);
        }
        out
    }

    pub fn end(&self, q: &Quiver) -> usize {
        *self.nodes(q).last().expect("at least one node")
    }

    pub fn reversed(&self, q: &Quiver) -> StringWord {
        StringWord { start: self.end(q), letters: self.letters.iter().rev().map(|l| l.flip()).collect() }
    }

    /// The smaller of the word and its reverse.
    pub fn canonical(&self, q: &Quiver) -> StringWord {
        let r = self.reversed(q);
        if r < *self {
            r
        } else {
            self.clone()
        }
    }

    pub fn dim_vector(&self, q: &Quiver) -> Vec<usize> {
        let mut dims = vec![0; q.num_vertices()];
        for v in self.nodes(q) {
            dims[v] += 1;
        }
        dims
    }

    pub fn display(&self, q: &Quiver) -> String {
        if self.letters.is_empty() {
            return format!("@{}", q.vertex_name(self.start));
        }
        self.letters
            .iter()
            .map(|l| {
                let label = &q.arrow(l.arrow).label;
                if l.inverse {
                    format!("{label}^-")
                } else {
                    label.clone()
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Parse `beta^- alpha chi^-`, or `@v` for the empty word at `v`.
    pub fn parse(q: &Quiver, text: &str) -> Result<StringWord, StringError> {
        let text = text.trim();
        if let Some(v) = text.strip_prefix('@') {
            let v = q.vertex(v.trim()).ok_or_else(|| StringError::Parse(format!("unknown vertex `{v}`")))?;
            return Ok(StringWord::empty(v));
        }
        let mut letters = Vec::new();
        for tok in text.split_whitespace() {
            let (label, inverse) = match tok.strip_suffix("^-1").or_else(|| tok.strip_suffix("^-")) {
                Some(l) => (l, true),
                None => (tok, false),
            };
            let arrow = q.arrow_id(label).ok_or_else(|| StringError::Parse(format!("unknown arrow `{label}`")))?;
            letters.push(Letter { arrow, inverse });
        }
        if letters.is_empty() {
            return Err(StringError::Parse("empty word; write `@<vertex>` for a simple".into()));
        }
        StringWord::from_letters(q, letters).ok_or_else(|| StringError::Parse(format!("`{text}` is not a walk")))
    }
}

/// Paths that must not occur along a run of letters: the monomial generators
/// and every term of the other relations.
fn forbidden_paths<F: Field>(alg: &AlgebraRef<F>) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = relation_paths(alg.presentation()).iter().map(|p| p.arrows().to_vec()).collect();
    out.extend(alg.hidden_zero_paths().iter().filter(|p| p.len() >= 2).map(|p| p.arrows().to_vec()));
    out
}

/// Structural checks: walk, no backtracking, no forbidden path along a run.
fn structurally_valid(q: &Quiver, letters: &[Letter], forbidden: &[Vec<usize>]) -> Result<(), String> {
    for w in letters.windows(2) {
        if w[0].ends(q).1 != w[1].ends(q).0 {
            return Err("letters do not form a walk".into());
        }
        if w[0].arrow == w[1].arrow && w[0].inverse != w[1].inverse {
            return Err(format!("letter `{}` is followed by its inverse", q.arrow(w[0].arrow).label));
        }
    }
    let mut i = 0;
    while i < letters.len() {
        let inverse = letters[i].inverse;
        let mut j = i;
        while j < letters.len() && letters[j].inverse == inverse {
            j += 1;
        }
        let mut run: Vec<usize> = letters[i..j].iter().map(|l| l.arrow).collect();
        if inverse {
            run.reverse();
        }
        for f in forbidden {
            if run.windows(f.len()).any(|w| w == f.as_slice()) {
                let p = Path::from_arrows(q, f.clone()).expect("relation path");
                return Err(format!("contains the relation path `{}`", q.path_string(&p)));
            }
        }
        i = j;
    }
    Ok(())
}

pub fn is_valid_string<F: Field>(alg: &AlgebraRef<F>, w: &StringWord) -> bool {
    string_rep(alg, w).is_ok()
}

fn check_string<F: Field>(alg: &AlgebraRef<F>, w: &StringWord) -> Result<(), StringError> {
    let q = alg.quiver();
    if w.start >= q.num_vertices() {
        return Err(StringError::InvalidWord("unknown start vertex".into()));
    }
    if let Some(first) = w.letters.first() {
        if first.ends(q).0 != w.start {
            return Err(StringError::InvalidWord("start vertex does not match the first letter".into()));
        }
    }
    structurally_valid(q, &w.letters, &forbidden_paths(alg)).map_err(StringError::InvalidWord)
}

/// The string module: one basis vector per walk node, arrows acting along the edges.
pub fn string_rep<F: Field>(alg: &AlgebraRef<F>, w: &StringWord) -> Result<Representation<F>, StringError> {
    check_string(alg, w)?;
    let q = alg.quiver();
    let nodes = w.nodes(q);
    let (dims, local) = node_layout(q, &nodes);
    let mut maps: Vec<Matrix<F>> = q.arrows().iter().map(|a| Matrix::zeros(dims[a.target], dims[a.source])).collect();
    for (k, l) in w.letters.iter().enumerate() {
        let (from, to) = if l.inverse { (k + 1, k) } else { (k, k + 1) };
        maps[l.arrow][(local[to], local[from])] = F::one();
    }
    let rep = Representation::new(alg.clone(), dims, maps).map_err(|e| StringError::InvalidWord(e.to_string()))?;
    Ok(rep.with_name(w.display(q)))
}

fn node_layout(q: &Quiver, nodes: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let mut dims = vec![0; q.num_vertices()];
    let mut local = Vec::with_capacity(nodes.len());
    for &v in nodes {
        local.push(dims[v]);
        dims[v] += 1;
    }
    (dims, local)
}

/// A cyclic word, stored as its minimal rotation over both orientations.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BandWord(pub StringWord);

fn rotate(q: &Quiver, w: &StringWord, k: usize) -> StringWord {
    let mut letters = w.letters[k..].to_vec();
    letters.extend_from_slice(&w.letters[..k]);
    StringWord::from_letters(q, letters).expect("rotation of a closed walk")
}

fn is_proper_power(letters: &[Letter]) -> bool {
    let n = letters.len();
    (1..n).filter(|d| n % d == 0).any(|d| (0..n).all(|i| letters[i] == letters[i % d]))
}

impl BandWord {
    pub fn new<F: Field>(alg: &AlgebraRef<F>, w: StringWord) -> Result<BandWord, StringError> {
        let q = alg.quiver();
        if w.letters.is_empty() {
            return Err(StringError::InvalidBand("empty word".into()));
        }
        if w.end(q) != w.start {
            return Err(StringError::InvalidBand("walk is not closed".into()));
        }
        if !w.letters.iter().any(|l| l.inverse) || !w.letters.iter().any(|l| !l.inverse) {
            return Err(StringError::InvalidBand("needs both direct and inverse letters".into()));
        }
        if is_proper_power(&w.letters) {
            return Err(StringError::InvalidBand("word is a proper power".into()));
        }
        let mut doubled = w.letters.clone();
        doubled.extend_from_slice(&w.letters);
        structurally_valid(q, &doubled, &forbidden_paths(alg)).map_err(StringError::InvalidBand)?;
        let n = w.letters.len();
        let rev = w.reversed(q);
        let best = (0..n).flat_map(|k| [rotate(q, &w, k), rotate(q, &rev, k)]).min().expect("nonempty");
        Ok(BandWord(best))
    }

    /// Dimension vector at parameter dimension 1: one basis vector per letter.
    pub fn dim_vector(&self, q: &Quiver) -> Vec<usize> {
        let mut dims = self.0.dim_vector(q);
        dims[self.0.start] -= 1;
        dims
    }

    pub fn word(&self) -> &StringWord {
        &self.0
    }

    pub fn display(&self, q: &Quiver) -> String {
        self.0.display(q)
    }
}

/// Band module with parameter `lambda` on the closing edge.
pub fn band_rep<F: Field>(alg: &AlgebraRef<F>, band: &BandWord, lambda: &F) -> Result<Representation<F>, StringError> {
    if lambda.is_zero() {
        return Err(StringError::ZeroParameter);
    }
    let q = alg.quiver();
    let w = &band.0;
    let n = w.letters.len();
    let nodes: Vec<usize> = w.nodes(q)[..n].to_vec();
    let (dims, local) = node_layout(q, &nodes);
    let mut maps: Vec<Matrix<F>> = q.arrows().iter().map(|a| Matrix::zeros(dims[a.target], dims[a.source])).collect();
    for (k, l) in w.letters.iter().enumerate() {
        let next = (k + 1) % n;
        let (from, to) = if l.inverse { (next, k) } else { (k, next) };
        let c = if k + 1 == n { lambda.clone() } else { F::one() };
        let cur = maps[l.arrow][(local[to], local[from])].clone();
        maps[l.arrow][(local[to], local[from])] = cur + c;
    }
    let rep = Representation::new(alg.clone(), dims, maps).map_err(|e| StringError::InvalidBand(e.to_string()))?;
    Ok(rep.with_name(format!("band({}; {lambda})", w.display(q))))
}

/// All letters available in the quiver, in the fixed letter order.
fn all_letters(q: &Quiver) -> Vec<Letter> {
    (0..q.arrows().len()).flat_map(|a| [Letter::direct(a), Letter::inverse(a)]).collect()
}

/// Every valid walk (both orientations) of length at most `max_len`, depth first.
fn walks<F: Field>(alg: &AlgebraRef<F>, max_len: usize, mut visit: impl FnMut(&StringWord)) {
    let q = alg.quiver();
    let forbidden = forbidden_paths(alg);
    let letters = all_letters(q);
    let max_forbidden = forbidden.iter().map(Vec::len).max().unwrap_or(0);
    fn go(
        q: &Quiver,
        letters: &[Letter],
        forbidden: &[Vec<usize>],
        window: usize,
        cur: &mut StringWord,
        max_len: usize,
        visit: &mut dyn FnMut(&StringWord),
    ) {
        visit(cur);
        if cur.letters.len() == max_len {
            return;
        }
        let at = cur.end(q);
        for &l in letters {
            if l.ends(q).0 != at {
                continue;
            }
            cur.letters.push(l);
            let tail_start = cur.letters.len().saturating_sub(window.max(2));
            if structurally_valid(q, &cur.letters[tail_start..], forbidden).is_ok() {
                go(q, letters, forbidden, window, cur, max_len, visit);
            }
            cur.letters.pop();
        }
    }
    for v in 0..q.num_vertices() {
        let mut w = StringWord::empty(v);
        go(q, &letters, &forbidden, max_forbidden, &mut w, max_len, &mut visit);
    }
}

/// Valid strings up to `max_len`, one per {word, reverse} pair, ordered by
/// length and then by canonical word.
pub fn enumerate_strings<F: Field>(alg: &AlgebraRef<F>, max_len: usize) -> Vec<StringWord> {
    let q = alg.quiver();
    let mut seen = BTreeSet::new();
    walks(alg, max_len, |w| {
        seen.insert(w.canonical(q));
    });
    seen.into_iter().filter(|w| string_rep(alg, w).is_ok()).collect()
}

/// Valid strings with the given dimension vector.
pub fn strings_with_dims<F: Field>(alg: &AlgebraRef<F>, dims: &[usize]) -> Vec<StringWord> {
    let total: usize = dims.iter().sum();
    if total == 0 {
        return Vec::new();
    }
    let q = alg.quiver();
    let forbidden = forbidden_paths(alg);
    let letters = all_letters(q);
    let mut out = BTreeSet::new();
    let mut counts = vec![0usize; dims.len()];
    fn go(
        q: &Quiver,
        letters: &[Letter],
        forbidden: &[Vec<usize>],
        dims: &[usize],
        counts: &mut Vec<usize>,
        cur: &mut StringWord,
        target_len: usize,
        out: &mut BTreeSet<StringWord>,
    ) {
        if cur.letters.len() == target_len {
            out.insert(cur.canonical(q));
            return;
        }
        let at = cur.end(q);
        for &l in letters {
            let (from, to) = l.ends(q);
            if from != at || counts[to] >= dims[to] {
                continue;
            }
            cur.letters.push(l);
            if structurally_valid(q, &cur.letters, forbidden).is_ok() {
                counts[to] += 1;
                go(q, letters, forbidden, dims, counts, cur, target_len, out);
                counts[to] -= 1;
            }
            cur.letters.pop();
        }
    }
    for v in 0..q.num_vertices() {
        if dims[v] == 0 {
            continue;
        }
        counts[v] += 1;
        let mut w = StringWord::empty(v);
        go(q, &letters, &forbidden, dims, &mut counts, &mut w, total - 1, &mut out);
        counts[v] -= 1;
    }
    out.into_iter().filter(|w| string_rep(alg, w).is_ok()).collect()
}

/// Bands of length at most `max_len`, deduplicated up to rotation and orientation.
pub fn enumerate_bands<F: Field>(alg: &AlgebraRef<F>, max_len: usize) -> Vec<BandWord> {
    let q = alg.quiver();
    let mut seen = BTreeSet::new();
    walks(alg, max_len, |w| {
        if !w.letters.is_empty() && w.end(q) == w.start {
            if let Ok(b) = BandWord::new(alg, w.clone()) {
                seen.insert(b);
            }
        }
    });
    seen.into_iter().filter(|b| band_rep(alg, b, &F::one()).is_ok()).collect()
}

// ---------------------------------------------------------------------------
// Graph specs

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TopSpec {
    pub name: String,
    pub vertex: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeSpec {
    pub top: String,
    /// Path in composition order, e.g. `gamma.alpha`.
    pub path: String,
    /// Valley slot the path lands in; edges sharing a slot are identified.
    pub slot: String,
}

/// A module presented by top elements, descending paths, and valley slots.
/// Each dependency group lists slots whose elements span a space of dimension
/// one less than the group size.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct GraphSpec {
    pub tops: Vec<TopSpec>,
    pub edges: Vec<EdgeSpec>,
    #[serde(default)]
    pub deps: Vec<Vec<String>>,
}

impl GraphSpec {
    pub fn top(&mut self, name: &str, vertex: &str) -> &mut Self {
        self.tops.push(TopSpec { name: name.into(), vertex: vertex.into() });
        self
    }

    pub fn edge(&mut self, top: &str, path: &str, slot: &str) -> &mut Self {
        self.edges.push(EdgeSpec { top: top.into(), path: path.into(), slot: slot.into() });
        self
    }

    pub fn dep(&mut self, slots: &[&str]) -> &mut Self {
        self.deps.push(slots.iter().map(|s| s.to_string()).collect());
        self
    }
}

/// The module of a graph spec with the images of its named elements.
#[derive(Clone, Debug)]
pub struct GraphModule<F: Field> {
    pub rep: Representation<F>,
    pub spec: GraphSpec,
    pub tops: Vec<(String, Element<F>)>,
    pub slots: BTreeMap<String, Element<F>>,
}

impl<F: Field> GraphModule<F> {
    pub fn top(&self, name: &str) -> Option<&Element<F>> {
        self.tops.iter().find(|(n, _)| n == name).map(|(_, e)| e)
    }
}

/// Build `(⊕ Λx_t) / U` where `U` kills every path on `x_t` that is not a right
/// subpath of one of its edges, identifies the edges landing in a common slot,
/// and imposes one linear relation per dependency group.
pub fn rep_from_graphspec<F: Field>(alg: &AlgebraRef<F>, spec: &GraphSpec) -> Result<GraphModule<F>, StringError> {
    let q = alg.quiver();
    let bad = |m: String| StringError::InconsistentSpec(m);
    if spec.tops.is_empty() {
        return Err(bad("no top elements".into()));
    }
    let mut top_index = HashMap::new();
    let mut projs = Vec::new();
    for (i, t) in spec.tops.iter().enumerate() {
        let v = q.vertex(&t.vertex).ok_or_else(|| bad(format!("unknown vertex `{}`", t.vertex)))?;
        if top_index.insert(t.name.clone(), i).is_some() {
            return Err(bad(format!("duplicate top `{}`", t.name)));
        }
        projs.push(ProjectiveModule::new(alg, v));
    }
    let sum = direct_sum_with_maps(alg, &projs.iter().map(|p| p.rep.clone()).collect::<Vec<_>>());
    let embed = |t: usize, (v, x): Element<F>| -> Element<F> {
        let m = sum.injections[t].block(v).mul(&Matrix::column(x));
        (v, m.col(0))
    };

    let mut edge_paths: Vec<Vec<Path>> = vec![Vec::new(); spec.tops.len()];
    let mut slot_members: BTreeMap<String, Vec<(usize, Path)>> = BTreeMap::new();
    for e in &spec.edges {
        let t = *top_index.get(&e.top).ok_or_else(|| bad(format!("edge refers to unknown top `{}`", e.top)))?;
        let p = q.parse_path(&e.path).map_err(bad)?;
        if p.source() != projs[t].vertex {
            return Err(bad(format!("path `{}` does not start at the vertex of top `{}`", e.path, e.top)));
        }
        if alg.is_zero_path(&p) {
            return Err(bad(format!("path `{}` lies in the ideal", e.path)));
        }
        edge_paths[t].push(p.clone());
        let members = slot_members.entry(e.slot.clone()).or_default();
        if let Some((_, first)) = members.first() {
            if first.target() != p.target() {
                return Err(bad(format!("slot `{}` mixes vertices", e.slot)));
            }
        }
        members.push((t, p));
    }

    let mut gens: Vec<Element<F>> = Vec::new();
    for (t, paths) in edge_paths.iter().enumerate() {
        let v = projs[t].vertex;
        let mut prefixes: Vec<Path> = vec![Path::trivial(v)];
        for p in paths {
            for r in p.right_subpaths(q) {
                if !prefixes.contains(&r) {
                    prefixes.push(r);
                }
            }
        }
        for pre in &prefixes {
            for a in q.arrows_from(pre.target()) {
                let ext = pre.then(q, a).expect("composable");
                if !prefixes.contains(&ext) {
                    gens.push(embed(t, projs[t].path_element(&ext)));
                }
            }
        }
    }
    let slot_element = |members: &[(usize, Path)]| -> Element<F> {
        let (t, p) = &members[0];
        embed(*t, projs[*t].path_element(p))
    };
    for members in slot_members.values() {
        let (v, first) = slot_element(members);
        for (t, p) in &members[1..] {
            let (_, other) = embed(*t, projs[*t].path_element(p));
            gens.push((v, first.iter().zip(&other).map(|(a, b)| a.clone() - b.clone()).collect()));
        }
    }
    for group in &spec.deps {
        if group.len() < 3 {
            return Err(bad("dependency groups need at least three members".into()));
        }
        let mut elems = Vec::new();
        for s in group {
            let members = slot_members.get(s).ok_or_else(|| bad(format!("dependency refers to unknown slot `{s}`")))?;
            elems.push(slot_element(members));
        }
        let v = elems[0].0;
        if elems.iter().any(|(w, _)| *w != v) {
            return Err(bad("dependency group mixing different vertices".into()));
        }
        let mut rel = elems[0].1.clone();
        for (_, e) in &elems[1..] {
            rel = rel.iter().zip(e).map(|(a, b)| a.clone() - b.clone()).collect();
        }
        gens.push((v, rel));
    }

    let u = sum.rep.generated_submodule(&gens);
    let (rep, proj) = sum.rep.quotient(&u)?;
    let image = |(v, x): &Element<F>| -> Element<F> { (*v, proj.block(*v).mul(&Matrix::column(x.clone())).col(0)) };

    let tops: Vec<(String, Element<F>)> =
        spec.tops.iter().enumerate().map(|(t, ts)| (ts.name.clone(), image(&embed(t, projs[t].generator())))).collect();
    if rep.top_elements().len() != spec.tops.len() {
        return Err(bad("the relations kill a top element".into()));
    }
    for (t, paths) in edge_paths.iter().enumerate() {
        for p in paths {
            let e = image(&embed(t, projs[t].path_element(p)));
            if e.1.iter().all(F::is_zero) {
                return Err(bad(format!("path `{}` on top `{}` vanishes", q.path_string(p), spec.tops[t].name)));
            }
        }
    }
    let slots: BTreeMap<String, Element<F>> =
        slot_members.iter().map(|(name, members)| (name.clone(), image(&slot_element(members)))).collect();
    for group in &spec.deps {
        let cols: Vec<Matrix<F>> = group.iter().map(|s| Matrix::column(slots[s].1.clone())).collect();
        let span = Matrix::hstack_all(cols[0].rows(), &cols);
        if span.rank() + 1 != group.len() {
            return Err(bad(format!("dependency group {group:?} does not span a space of dimension {}", group.len() - 1)));
        }
        for i in 0..cols.len() {
            for j in i + 1..cols.len() {
                if cols[i].hstack(&cols[j]).rank() < 2 {
                    return Err(bad(format!("slots `{}` and `{}` are dependent", group[i], group[j])));
                }
            }
        }
    }
    Ok(GraphModule { rep, spec: spec.clone(), tops, slots })
}

/// A zigzag graph spec equivalent to a string word: peaks become tops and each
/// maximal run becomes an edge.
pub fn graphspec_of_string(q: &Quiver, w: &StringWord) -> GraphSpec {
    let nodes = w.nodes(q);
    let n = w.letters.len();
    let mut spec = GraphSpec::default();
    if n == 0 {
        spec.top("t0", q.vertex_name(w.start));
        return spec;
    }
    // A node is a peak if no letter maps onto it.
    let is_peak = |k: usize| {
        let from_left = k > 0 && !w.letters[k - 1].inverse;
        let from_right = k < n && w.letters[k].inverse;
        !from_left && !from_right
    };
    let slot_name = |k: usize| format!("n{k}");
    for k in 0..=n {
        if !is_peak(k) {
            continue;
        }
        let name = format!("t{k}");
        spec.top(&name, q.vertex_name(nodes[k]));
        // Descend to the left along inverse letters.
        let mut j = k;
        let mut arrows = Vec::new();
        while j > 0 && w.letters[j - 1].inverse {
            arrows.push(w.letters[j - 1].arrow);
            j -= 1;
        }
        if !arrows.is_empty() {
            let p = Path::from_arrows(q, arrows).expect("run is a path");
            spec.edge(&name, &q.path_string(&p), &slot_name(j));
        }
        let mut j = k;
        let mut arrows = Vec::new();
        while j < n && !w.letters[j].inverse {
            arrows.push(w.letters[j].arrow);
            j += 1;
        }
        if !arrows.is_empty() {
            let p = Path::from_arrows(q, arrows).expect("run is a path");
            spec.edge(&name, &q.path_string(&p), &slot_name(j));
        }
    }
    spec
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.arrow, if self.inverse { "^-" } else { "" })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Fp, Q};
    use crate::presentation::{parse_algebra, Algebra};
    use crate::repmod::is_isomorphic;
    use std::sync::Arc;

    const EX6: &str = "vertices: 1 2 3 4 5 6 7 8
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

    fn ex6<F: Field>() -> AlgebraRef<F> {
        let p = parse_algebra(EX6).unwrap().with_field(F::kind());
        Arc::new(Algebra::new(p).unwrap())
    }

    #[test]
    fn example_six_string_words() {
        let alg = ex6::<Q>();
        let q = alg.quiver();
        let w = StringWord::parse(q, "beta^- alpha chi^-").unwrap();
        assert_eq!(w.nodes(q), vec![2, 0, 1, 4]);
        let m = string_rep(&alg, &w).unwrap();
        assert_eq!(m.dims(), &[1, 1, 1, 0, 1, 0, 0, 0]);
        assert_eq!(m.path_action(&alg.path("beta")).rank(), 1);
        let bad = StringWord::parse(q, "chi gamma").unwrap();
        assert!(!is_valid_string(&alg, &bad));
        assert!(is_valid_string(&alg, &StringWord::empty(3)));
        assert_eq!(w.display(q), "beta^- alpha chi^-");
    }

    #[test]
    fn reversal_gives_isomorphic_modules() {
        let alg = ex6::<Fp<3>>();
        let q = alg.quiver();
        for w in enumerate_strings(&alg, 4) {
            let a = string_rep(&alg, &w).unwrap();
            let b = string_rep(&alg, &w.reversed(q)).unwrap();
            assert!(is_isomorphic(&a, &b, 7).is_iso(), "{}", w.display(q));
        }
    }

    #[test]
    fn enumeration_counts_are_monotone() {
        let alg = ex6::<Q>();
        assert_eq!(enumerate_strings(&alg, 0).len(), 8);
        let mut last = 0;
        for len in 0..6 {
            let n = enumerate_strings(&alg, len).len();
            assert!(n >= last);
            last = n;
        }
    }

    #[test]
    fn bands_exist_in_example_six() {
        let alg = ex6::<Q>();
        let q = alg.quiver();
        let bands = enumerate_bands(&alg, 4);
        assert!(!bands.is_empty());
        let w = StringWord::parse(q, "beta^- alpha chi^- psi").unwrap();
        let b = BandWord::new(&alg, w).unwrap();
        assert!(bands.contains(&b));
        let m = band_rep(&alg, &b, &Q::from_i64(2)).unwrap();
        assert_eq!(m.total_dim(), 4);
        assert!(band_rep(&alg, &b, &Q::zero()).is_err());
    }

    #[test]
    fn zigzag_spec_matches_string() {
        let alg = ex6::<Q>();
        let q = alg.quiver();
        for w in enumerate_strings(&alg, 4) {
            let spec = graphspec_of_string(q, &w);
            let g = rep_from_graphspec(&alg, &spec).unwrap();
            let s = string_rep(&alg, &w).unwrap();
            assert!(is_isomorphic(&g.rep, &s, 3).is_iso(), "{}", w.display(q));
        }
    }

    #[test]
    fn inconsistent_specs_are_rejected() {
        let alg = ex6::<Q>();
        let mut spec = GraphSpec::default();
        spec.top("x", "5").edge("x", "gamma.chi", "a");
        assert!(matches!(rep_from_graphspec(&alg, &spec), Err(StringError::InconsistentSpec(_))));
        let mut spec = GraphSpec::default();
        spec.top("x", "1").edge("x", "alpha", "a").edge("x", "beta", "b").edge("x", "gamma.alpha", "c");
        spec.dep(&["a", "b", "c"]);
        assert!(matches!(rep_from_graphspec(&alg, &spec), Err(StringError::InconsistentSpec(_))));
    }
}
