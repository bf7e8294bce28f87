//! Quivers with relations, the presentation DSL, and the path basis of `KQ/I`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::field::{parse_rational, Field, FieldKind};
use crate::linalg::Matrix;

/// Default hard cap on path length during basis construction.
pub const DEFAULT_PATH_CAP: usize = 64;
/// Refuse to enumerate more paths than this while searching for the nilpotency degree.
const PATH_BUDGET: usize = 250_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arrow {
    pub label: String,
    pub source: usize,
    pub target: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
    vertex_index: HashMap<String, usize>,
    arrow_index: HashMap<String, usize>,
}

impl Quiver {
    pub fn new(vertices: Vec<String>, arrows: Vec<(String, String, String)>) -> Result<Self, PresentationError> {
        let mut q = Quiver {
            vertices: Vec::new(),
            arrows: Vec::new(),
            vertex_index: HashMap::new(),
            arrow_index: HashMap::new(),
        };
        for v in vertices {
            q.add_vertex(v)?;
        }
        for (label, s, t) in arrows {
            q.add_arrow(label, &s, &t)?;
        }
        Ok(q)
    }

    pub(crate) fn add_vertex(&mut self, v: String) -> Result<usize, PresentationError> {
        if self.vertex_index.contains_key(&v) {
            return Err(PresentationError::invalid(format!("duplicate vertex `{v}`")));
        }
        let id = self.vertices.len();
        self.vertex_index.insert(v.clone(), id);
        self.vertices.push(v);
        Ok(id)
    }

    pub(crate) fn add_arrow(&mut self, label: String, s: &str, t: &str) -> Result<usize, PresentationError> {
        if self.arrow_index.contains_key(&label) {
            return Err(PresentationError::invalid(format!("duplicate arrow `{label}`")));
        }
        let source = self.vertex(s).ok_or_else(|| PresentationError::invalid(format!("unknown vertex `{s}`")))?;
        let target = self.vertex(t).ok_or_else(|| PresentationError::invalid(format!("unknown vertex `{t}`")))?;
        let id = self.arrows.len();
        self.arrow_index.insert(label.clone(), id);
        self.arrows.push(Arrow { label, source, target });
        Ok(id)
    }

    pub fn vertex(&self, name: &str) -> Option<usize> {
        self.vertex_index.get(name).copied()
    }

    pub fn arrow_id(&self, label: &str) -> Option<usize> {
        self.arrow_index.get(label).copied()
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow(&self, a: usize) -> &Arrow {
        &self.arrows[a]
    }

    pub fn arrows_from(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.arrows.len()).filter(move |&a| self.arrows[a].source == v)
    }

    pub fn arrows_into(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.arrows.len()).filter(move |&a| self.arrows[a].target == v)
    }

    /// Parse a path written in composition order, e.g. `gamma.alpha`, or a trivial
    /// path `e_<vertex>`.
    pub fn parse_path(&self, text: &str) -> Result<Path, String> {
        let text = text.trim();
        if let Some(v) = text.strip_prefix("e_") {
            if self.arrow_id(text).is_none() {
                return self
                    .vertex(v)
                    .map(Path::trivial)
                    .ok_or_else(|| format!("unknown vertex `{v}` in trivial path"));
            }
        }
        let mut ids = Vec::new();
        for label in text.split('.').map(str::trim) {
            let id = self.arrow_id(label).ok_or_else(|| format!("unknown arrow `{label}`"))?;
            ids.push(id);
        }
        ids.reverse();
        Path::from_arrows(self, ids).ok_or_else(|| format!("path `{text}` is not composable"))
    }

    pub fn path_string(&self, p: &Path) -> String {
        if p.is_trivial() {
            return format!("e_{}", self.vertex_name(p.source()));
        }
        p.arrows().iter().rev().map(|&a| self.arrows[a].label.as_str()).collect::<Vec<_>>().join(".")
    }
}

/// A path, stored with its arrows in the order they are applied.
/// The composite written `gamma.alpha` applies `alpha` first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Path {
    source: usize,
    target: usize,
    arrows: Vec<usize>,
}

impl Path {
    pub fn trivial(v: usize) -> Path {
        Path { source: v, target: v, arrows: Vec::new() }
    }

    pub fn arrow(q: &Quiver, a: usize) -> Path {
        let ar = q.arrow(a);
        Path { source: ar.source, target: ar.target, arrows: vec![a] }
    }

    /// Build from arrows in application order; `None` if not composable or empty.
    pub fn from_arrows(q: &Quiver, arrows: Vec<usize>) -> Option<Path> {
        let first = *arrows.first()?;
        let mut at = q.arrow(first).source;
        for &a in &arrows {
            if q.arrow(a).source != at {
                return None;
            }
            at = q.arrow(a).target;
        }
        Some(Path { source: q.arrow(first).source, target: at, arrows })
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    /// Arrows in application order.
    pub fn arrows(&self) -> &[usize] {
        &self.arrows
    }

    /// Append one more arrow applied after this path.
    pub fn then(&self, q: &Quiver, a: usize) -> Option<Path> {
        let ar = q.arrow(a);
        if ar.source != self.target {
            return None;
        }
        let mut arrows = self.arrows.clone();
        arrows.push(a);
        Some(Path { source: self.source, target: ar.target, arrows })
    }

    /// Vertices visited, in application order.
    pub fn vertices(&self, q: &Quiver) -> Vec<usize> {
        let mut out = vec![self.source];
        out.extend(self.arrows.iter().map(|&a| q.arrow(a).target));
        out
    }

    /// Initial segments in application order, from the trivial path up to the path itself.
    pub fn right_subpaths(&self, q: &Quiver) -> Vec<Path> {
        let mut out = vec![Path::trivial(self.source)];
        let mut cur = Path::trivial(self.source);
        for &a in &self.arrows {
            cur = cur.then(q, a).expect("composable");
            out.push(cur.clone());
        }
        out
    }
}

impl Ord for Path {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.arrows.cmp(&other.arrows))
            .then_with(|| self.source.cmp(&other.source))
    }
}

impl PartialOrd for Path {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// The composite `p q`: first `q`, then `p`. `None` when `target(q) != source(p)`.
pub fn compose_paths(p: &Path, q: &Path) -> Option<Path> {
    if q.target != p.source {
        return None;
    }
    let mut arrows = q.arrows.clone();
    arrows.extend_from_slice(&p.arrows);
    Some(Path { source: q.source, target: p.target, arrows })
}

/// `q` occurs in `p` as `p = p2 q p1`.
pub fn is_subpath(q: &Path, p: &Path, quiver: &Quiver) -> bool {
    if q.is_trivial() {
        return p.vertices(quiver).contains(&q.source);
    }
    p.arrows.windows(q.len()).any(|w| w == q.arrows.as_slice())
}

/// `p = p2 q` (q is applied first).
pub fn is_right_subpath(q: &Path, p: &Path) -> bool {
    q.source == p.source && p.arrows.starts_with(&q.arrows)
}

/// `p = q p1` (q is applied last).
pub fn is_left_subpath(q: &Path, p: &Path) -> bool {
    q.target == p.target && p.arrows.ends_with(&q.arrows)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    terms: Vec<(BigRational, Path)>,
}

impl Relation {
    /// Combine like terms and check the admissibility conditions.
    pub fn new(terms: Vec<(BigRational, Path)>) -> Result<Relation, String> {
        let mut merged: Vec<(BigRational, Path)> = Vec::new();
        for (c, p) in terms {
            match merged.iter_mut().find(|(_, q)| *q == p) {
                Some(slot) => slot.0 = &slot.0 + c,
                None => merged.push((c, p)),
            }
        }
        merged.retain(|(c, _)| !c.is_zero());
        let Some((_, first)) = merged.first() else {
            return Err("relation is zero".into());
        };
        let (s, t) = (first.source, first.target);
        for (_, p) in &merged {
            if p.len() < 2 {
                return Err("inadmissible generator: every term needs length at least 2".into());
            }
            if p.source != s || p.target != t {
                return Err("relation terms are not parallel".into());
            }
        }
        Ok(Relation { terms: merged })
    }

    pub fn terms(&self) -> &[(BigRational, Path)] {
        &self.terms
    }

    pub fn source(&self) -> usize {
        self.terms[0].1.source
    }

    pub fn target(&self) -> usize {
        self.terms[0].1.target
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn to_dsl(&self, q: &Quiver) -> String {
        let mut out = String::new();
        for (i, (c, p)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if !abs.is_one() {
                out.push_str(&format!("{abs}*"));
            }
            out.push_str(&q.path_string(p));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    pub quiver: Quiver,
    pub relations: Vec<Relation>,
    pub field: FieldKind,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PresentationError {
    #[error("line {line}, column {col}: {message}")]
    Syntax { line: usize, col: usize, message: String },
    #[error("{0}")]
    Invalid(String),
    #[error("not finite-dimensional below cap: paths of length {cap} survive reduction")]
    NotFiniteDimensional { cap: usize },
    #[error("path enumeration exceeded {0} paths before the nilpotency degree was found")]
    TooManyPaths(usize),
}

impl PresentationError {
    fn invalid(msg: String) -> Self {
        PresentationError::Invalid(msg)
    }

    fn at(line: usize, col: usize, message: impl Into<String>) -> Self {
        PresentationError::Syntax { line, col, message: message.into() }
    }
}

fn is_label_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

fn column_of(line: &str, sub: &str) -> usize {
    let offset = sub.as_ptr() as usize - line.as_ptr() as usize;
    line[..offset].chars().count() + 1
}

/// Parse a presentation written in the line-oriented algebra DSL.
pub fn parse_algebra(text: &str) -> Result<Presentation, PresentationError> {
    let mut quiver = Quiver::new(Vec::new(), Vec::new())?;
    let mut field = None;
    let mut relations = Vec::new();
    let mut pending_rels: Vec<(usize, &str, &str)> = Vec::new();
    let mut extensions: Vec<(usize, &str)> = Vec::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let line = raw.split('#').next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        let Some((key, rest)) = line.split_once(':') else {
            let col = column_of(raw, line.trim_start());
            return Err(PresentationError::at(line_no, col, "expected `<keyword>: ...`"));
        };
        let key_trim = key.trim();
        if key_trim == "vertices" {
            for tok in rest.split_whitespace() {
                if !tok.chars().all(is_label_char) {
                    return Err(PresentationError::at(line_no, column_of(raw, tok), format!("bad vertex name `{tok}`")));
                }
                quiver
                    .add_vertex(tok.to_string())
                    .map_err(|e| PresentationError::at(line_no, column_of(raw, tok), e.to_string()))?;
            }
        } else if let Some(label) = key_trim.strip_prefix("arrow") {
            let label = label.trim();
            if label.is_empty() || !label.chars().all(is_label_char) {
                return Err(PresentationError::at(line_no, column_of(raw, key.trim_start()), "bad arrow label"));
            }
            let Some((s, t)) = rest.split_once("->") else {
                return Err(PresentationError::at(line_no, column_of(raw, rest), "expected `<src> -> <tgt>`"));
            };
            let (s_tok, t_tok) = (s.trim(), t.trim());
            for tok in [s_tok, t_tok] {
                if quiver.vertex(tok).is_none() {
                    let col = if tok.is_empty() { column_of(raw, rest) } else { column_of(raw, tok) };
                    return Err(PresentationError::at(line_no, col, format!("unknown vertex `{tok}`")));
                }
            }
            quiver
                .add_arrow(label.to_string(), s_tok, t_tok)
                .map_err(|e| PresentationError::at(line_no, column_of(raw, key.trim_start()), e.to_string()))?;
        } else if key_trim == "rel" {
            pending_rels.push((line_no, raw, rest));
        } else if key_trim == "field" {
            let tok = rest.trim();
            let kind: FieldKind = tok
                .parse()
                .map_err(|e: String| PresentationError::at(line_no, column_of(raw, rest.trim_start()), e))?;
            field = Some(kind);
        } else if key_trim == "extend" {
            extensions.push((line_no, raw));
        } else {
            return Err(PresentationError::at(line_no, column_of(raw, key.trim_start()), format!("unknown keyword `{key_trim}`")));
        }
    }
    if let Some((line_no, _)) = extensions.first() {
        return Err(PresentationError::at(*line_no, 1, "`extend:` lines belong in an extension spec"));
    }
    for (line_no, raw, rest) in pending_rels {
        relations.push(parse_relation(&quiver, line_no, raw, rest)?);
    }
    Ok(Presentation { quiver, relations, field: field.unwrap_or(FieldKind::Rational) })
}

/// Parse the right-hand side of a `rel:` line.
pub(crate) fn parse_relation(q: &Quiver, line_no: usize, raw: &str, rest: &str) -> Result<Relation, PresentationError> {
    let mut terms = Vec::new();
    let mut sign = BigRational::one();
    let mut expect_term = true;
    let mut i = 0;
    let bytes: Vec<(usize, char)> = rest.char_indices().collect();
    let col_at = |idx: usize| column_of(raw, &rest[idx..]);
    while i < bytes.len() {
        let (idx, c) = bytes[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c == '+' || c == '-' {
            if !expect_term && !terms.is_empty() || terms.is_empty() && expect_term {
                if c == '-' {
                    sign = -sign;
                }
                expect_term = true;
                i += 1;
                continue;
            }
            return Err(PresentationError::at(line_no, col_at(idx), "unexpected sign"));
        }
        if !expect_term {
            return Err(PresentationError::at(line_no, col_at(idx), "expected `+` or `-` between terms"));
        }
        let start = idx;
        let mut j = i;
        while j < bytes.len() && !matches!(bytes[j].1, '+' | '-') && !bytes[j].1.is_whitespace() {
            j += 1;
        }
        let end = if j < bytes.len() { bytes[j].0 } else { rest.len() };
        let token = &rest[start..end];
        let (coeff, path_text, path_start) = match token.split_once('*') {
            Some((c, p)) => {
                let Some(val) = parse_rational(c) else {
                    return Err(PresentationError::at(line_no, col_at(start), format!("bad coefficient `{c}`")));
                };
                (val, p, start + c.len() + 1)
            }
            None => (BigRational::one(), token, start),
        };
        if path_text.is_empty() {
            return Err(PresentationError::at(line_no, col_at(start), "missing path"));
        }
        let mut ids = Vec::new();
        let mut off = path_start;
        for label in path_text.split('.') {
            match q.arrow_id(label) {
                Some(id) => ids.push(id),
                None => {
                    return Err(PresentationError::at(line_no, col_at(off), format!("unknown arrow `{label}`")));
                }
            }
            off += label.len() + 1;
        }
        ids.reverse();
        let Some(path) = Path::from_arrows(q, ids) else {
            return Err(PresentationError::at(line_no, col_at(path_start), format!("`{path_text}` is not a path")));
        };
        terms.push((sign.clone() * coeff, path));
        sign = BigRational::one();
        expect_term = false;
        i = j;
    }
    if expect_term {
        return Err(PresentationError::at(line_no, column_of(raw, rest) + rest.len(), "relation ends without a term"));
    }
    Relation::new(terms).map_err(|m| PresentationError::at(line_no, column_of(raw, rest.trim_start()), m))
}

impl Presentation {
    /// Canonical DSL text: vertices and arrows in declaration order.
    pub fn to_dsl(&self) -> String {
        let q = &self.quiver;
        let mut out = format!("field: {}\n", self.field);
        out.push_str(&format!("vertices: {}\n", q.vertices.join(" ")));
        for a in &q.arrows {
            out.push_str(&format!("arrow {}: {} -> {}\n", a.label, q.vertices[a.source], q.vertices[a.target]));
        }
        for r in &self.relations {
            out.push_str(&format!("rel: {}\n", r.to_dsl(q)));
        }
        out
    }

    /// SHA-256 of the canonical DSL text, hex encoded.
    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.to_dsl().as_bytes()))
    }

    pub fn with_field(&self, field: FieldKind) -> Presentation {
        Presentation { field, ..self.clone() }
    }

    pub fn is_monomial(&self) -> bool {
        self.relations.iter().all(Relation::is_monomial)
    }
}

/// Basis data for a finite-dimensional algebra `KQ/I` over the field `F`.
#[derive(Debug)]
pub struct Algebra<F> {
    presentation: Presentation,
    basis: Vec<Path>,
    basis_index: HashMap<Path, usize>,
    reductions: HashMap<Path, Vec<(usize, F)>>,
    zero_paths: Vec<Path>,
    loewy: usize,
    hash: String,
}

pub type AlgebraRef<F> = Arc<Algebra<F>>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub monomial: bool,
    pub special_biserial: bool,
    pub loewy_length: usize,
}

fn contains_any(p: &Path, forbidden: &[Path]) -> bool {
    forbidden.iter().any(|m| p.arrows.len() >= m.arrows.len() && p.arrows.ends_with(&m.arrows))
}

/// All paths of length at most `max_len` avoiding the monomial generators.
fn enumerate_paths(q: &Quiver, max_len: usize, monomials: &[Path], budget: usize) -> Option<Vec<Path>> {
    let mut all: Vec<Path> = (0..q.num_vertices()).map(Path::trivial).collect();
    let mut frontier = all.clone();
    for _ in 0..max_len {
        let mut next = Vec::new();
        for p in &frontier {
            for a in q.arrows_from(p.target) {
                let np = p.then(q, a).expect("composable");
                if !contains_any(&np, monomials) {
                    next.push(np);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        all.extend(next.iter().cloned());
        if all.len() > budget {
            return None;
        }
        frontier = next;
    }
    Some(all)
}

type Block = BTreeMap<(usize, usize), Vec<Path>>;

struct Reduction<F> {
    /// Per block: columns in ascending order and the RREF of the ideal rows.
    blocks: Vec<((usize, usize), Vec<Path>, Matrix<F>, Vec<usize>)>,
}

fn ideal_rows<F: Field>(
    pres: &Presentation,
    paths: &[Path],
    trunc: usize,
    monomials: &[Path],
) -> Result<Reduction<F>, PresentationError> {
    let mut blocks: Block = BTreeMap::new();
    for p in paths {
        blocks.entry((p.source, p.target)).or_default().push(p.clone());
    }
    for cols in blocks.values_mut() {
        cols.sort();
    }
    let mut rows: BTreeMap<(usize, usize), Vec<Vec<(usize, F)>>> = BTreeMap::new();
    let mut by_target: HashMap<usize, Vec<&Path>> = HashMap::new();
    let mut by_source: HashMap<usize, Vec<&Path>> = HashMap::new();
    for p in paths {
        by_target.entry(p.target).or_default().push(p);
        by_source.entry(p.source).or_default().push(p);
    }
    for rel in &pres.relations {
        if rel.is_monomial() {
            continue;
        }
        let coeffs: Vec<F> = rel
            .terms
            .iter()
            .map(|(c, _)| {
                F::from_rational(c)
                    .ok_or_else(|| PresentationError::invalid(format!("coefficient {c} is undefined over {}", F::kind())))
            })
            .collect::<Result<_, _>>()?;
        let min_len = rel.terms.iter().map(|(_, p)| p.len()).min().unwrap_or(0);
        let empty = Vec::new();
        for v in by_target.get(&rel.source()).unwrap_or(&empty) {
            for u in by_source.get(&rel.target()).unwrap_or(&empty) {
                if u.len() + v.len() + min_len > trunc {
                    continue;
                }
                let key = (v.source, u.target);
                let Some(cols) = blocks.get(&key) else { continue };
                let mut row: Vec<(usize, F)> = Vec::new();
                for ((_, t), c) in rel.terms.iter().zip(&coeffs) {
                    let path = compose_paths(u, &compose_paths(t, v).expect("parallel")).expect("parallel");
                    if path.len() > trunc || contains_any_sub(&path, monomials) {
                        continue;
                    }
                    if c.is_zero() {
                        continue;
                    }
                    let idx = cols.binary_search(&path).expect("enumerated path");
                    row.push((idx, c.clone()));
                }
                if !row.is_empty() {
                    rows.entry(key).or_default().push(row);
                }
            }
        }
    }
    let mut out = Vec::new();
    for (key, cols) in blocks {
        let r = rows.remove(&key).unwrap_or_default();
        let mut m = Matrix::<F>::zeros(r.len(), cols.len());
        for (i, row) in r.into_iter().enumerate() {
            for (j, c) in row {
                let cur = m[(i, j)].clone();
                m[(i, j)] = cur + c;
            }
        }
        let ech = m.rref();
        let rank = ech.pivots.len();
        let reduced = ech.matrix.submatrix(0..rank, 0..cols.len());
        out.push((key, cols, reduced, ech.pivots));
    }
    Ok(Reduction { blocks: out })
}

fn contains_any_sub(p: &Path, forbidden: &[Path]) -> bool {
    forbidden.iter().any(|m| p.arrows.windows(m.arrows.len()).any(|w| w == m.arrows.as_slice()))
}

impl<F: Field> Algebra<F> {
    pub fn new(presentation: Presentation) -> Result<Algebra<F>, PresentationError> {
        Self::with_cap(presentation, DEFAULT_PATH_CAP)
    }

    /// Compute the basis, failing if paths of length `cap` survive.
    pub fn with_cap(presentation: Presentation, cap: usize) -> Result<Algebra<F>, PresentationError> {
        if presentation.field != F::kind() {
            return Err(PresentationError::invalid(format!(
                "presentation is over {} but the algebra was requested over {}",
                presentation.field,
                F::kind()
            )));
        }
        let q = &presentation.quiver;
        let monomials: Vec<Path> =
            presentation.relations.iter().filter(|r| r.is_monomial()).map(|r| r.terms[0].1.clone()).collect();
        let mut loewy = None;
        for len in 1..=cap {
            let paths = enumerate_paths(q, len, &monomials, PATH_BUDGET).ok_or(PresentationError::TooManyPaths(PATH_BUDGET))?;
            if !paths.iter().any(|p| p.len() == len) {
                loewy = Some(len);
                break;
            }
            let red = ideal_rows::<F>(&presentation, &paths, len, &monomials)?;
            let all_top_killed = red.blocks.iter().all(|(_, cols, rows, _)| {
                let top: Vec<usize> = (0..cols.len()).filter(|&j| cols[j].len() == len).collect();
                if top.is_empty() {
                    return true;
                }
                let mut units = Matrix::zeros(top.len(), cols.len());
                for (i, &j) in top.iter().enumerate() {
                    units[(i, j)] = F::one();
                }
                rows.vstack(&units).rank() == rows.rows()
            });
            if all_top_killed {
                loewy = Some(len);
                break;
            }
        }
        let loewy = loewy.ok_or(PresentationError::NotFiniteDimensional { cap })?;
        let paths = enumerate_paths(q, loewy - 1, &monomials, PATH_BUDGET).ok_or(PresentationError::TooManyPaths(PATH_BUDGET))?;
        let red = ideal_rows::<F>(&presentation, &paths, loewy - 1, &monomials)?;

        let mut basis = Vec::new();
        for (_, cols, _, pivots) in &red.blocks {
            for (j, p) in cols.iter().enumerate() {
                if !pivots.contains(&j) {
                    basis.push(p.clone());
                }
            }
        }
        basis.sort();
        let basis_index: HashMap<Path, usize> = basis.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let mut reductions = HashMap::new();
        let mut zero_paths = Vec::new();
        for (_, cols, rows, pivots) in &red.blocks {
            for (j, p) in cols.iter().enumerate() {
                if let Some(&b) = basis_index.get(p) {
                    reductions.insert(p.clone(), vec![(b, F::one())]);
                    continue;
                }
                let r = pivots.iter().position(|&c| c == j).expect("pivot column");
                let mut combo = Vec::new();
                for (k, other) in cols.iter().enumerate() {
                    if k != j && !rows[(r, k)].is_zero() {
                        let b = basis_index[other];
                        combo.push((b, -rows[(r, k)].clone()));
                    }
                }
                combo.sort_by_key(|(b, _)| *b);
                if combo.is_empty() {
                    zero_paths.push(p.clone());
                }
                reductions.insert(p.clone(), combo);
            }
        }
        // The nilpotency degree is one more than the longest surviving basis path.
        let loewy = basis.iter().map(Path::len).max().map_or(1, |m| m + 1);
        let hash = presentation.hash();
        Ok(Algebra { presentation, basis, basis_index, reductions, zero_paths, loewy, hash })
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn quiver(&self) -> &Quiver {
        &self.presentation.quiver
    }

    pub fn num_vertices(&self) -> usize {
        self.quiver().num_vertices()
    }

    pub fn hash(&self) -> &str {
        &self.hash
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn loewy_length(&self) -> usize {
        self.loewy
    }

    /// Basis paths in ascending (length, arrows) order.
    pub fn basis(&self) -> &[Path] {
        &self.basis
    }

    pub fn basis_position(&self, p: &Path) -> Option<usize> {
        self.basis_index.get(p).copied()
    }

    /// Basis paths of `e_j Λ e_i`: from `i` to `j`.
    pub fn block(&self, i: usize, j: usize) -> Vec<&Path> {
        self.basis.iter().filter(|p| p.source == i && p.target == j).collect()
    }

    /// Basis paths starting at `v`, which form a basis of `Λ e_v`.
    pub fn basis_from(&self, v: usize) -> Vec<usize> {
        (0..self.basis.len()).filter(|&i| self.basis[i].source == v).collect()
    }

    /// Residue of a path as a sparse combination of basis indices.
    pub fn reduce(&self, p: &Path) -> Vec<(usize, F)> {
        if p.len() >= self.loewy {
            return Vec::new();
        }
        self.reductions.get(p).cloned().unwrap_or_default()
    }

    pub fn is_zero_path(&self, p: &Path) -> bool {
        self.reduce(p).is_empty()
    }

    /// Paths of positive length whose residue is nonzero, in ascending order.
    pub fn nonzero_paths(&self) -> Vec<Path> {
        let mut out: Vec<Path> =
            self.reductions.iter().filter(|(p, c)| !p.is_trivial() && !c.is_empty()).map(|(p, _)| p.clone()).collect();
        out.sort();
        out
    }

    /// Enumerated paths whose residue is zero even though they avoid the monomial generators.
    pub fn hidden_zero_paths(&self) -> &[Path] {
        &self.zero_paths
    }

    /// Basis paths of length at least `k`; their span is `J^k`.
    pub fn radical_power_basis(&self, k: usize) -> Vec<usize> {
        (0..self.basis.len()).filter(|&i| self.basis[i].len() >= k).collect()
    }

    pub fn classify(&self) -> Classification {
        let q = self.quiver();
        let degree_ok = (0..q.num_vertices()).all(|v| q.arrows_into(v).count() <= 2 && q.arrows_from(v).count() <= 2);
        let continuation_ok = (0..q.arrows().len()).all(|b| {
            let pb = Path::arrow(q, b);
            let after = q
                .arrows_from(q.arrow(b).target)
                .filter(|&a| !self.is_zero_path(&compose_paths(&Path::arrow(q, a), &pb).expect("composable")))
                .count();
            let before = q
                .arrows_into(q.arrow(b).source)
                .filter(|&c| !self.is_zero_path(&compose_paths(&pb, &Path::arrow(q, c)).expect("composable")))
                .count();
            after <= 1 && before <= 1
        });
        Classification {
            monomial: self.presentation.is_monomial(),
            special_biserial: degree_ok && continuation_ok,
            loewy_length: self.loewy,
        }
    }

    pub fn is_special_biserial(&self) -> bool {
        self.classify().special_biserial
    }

    /// Parse a path in composition order against this algebra's quiver.
    pub fn path(&self, text: &str) -> Path {
        self.quiver().parse_path(text).unwrap_or_else(|e| panic!("{e}"))
    }

    pub fn vertex(&self, name: &str) -> usize {
        self.quiver().vertex(name).unwrap_or_else(|| panic!("unknown vertex `{name}`"))
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        self.quiver().vertex_name(v)
    }

    pub fn paths_up_to(&self, max_len: usize) -> Vec<Path> {
        let monomials: Vec<Path> =
            self.presentation.relations.iter().filter(|r| r.is_monomial()).map(|r| r.terms[0].1.clone()).collect();
        enumerate_paths(self.quiver(), max_len, &monomials, usize::MAX).unwrap_or_default()
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_dsl())
    }
}

/// The monomial generators of a presentation, as paths.
pub fn monomial_generators(pres: &Presentation) -> Vec<Path> {
    pres.relations.iter().filter(|r| r.is_monomial()).map(|r| r.terms[0].1.clone()).collect()
}

/// Every path occurring as a term of some relation generator.
pub fn relation_paths(pres: &Presentation) -> Vec<Path> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for r in &pres.relations {
        for (_, p) in &r.terms {
            if seen.insert(p.clone()) {
                out.push(p.clone());
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Fp, Q};
    use proptest::prelude::*;

    const EX2: &str = "vertices: 1 2\narrow alpha: 1 -> 2\narrow beta: 1 -> 2\narrow gamma: 2 -> 1\n\
                       rel: gamma.beta\nrel: alpha.gamma\nrel: beta.gamma\n";

    #[test]
    fn parses_and_round_trips() {
        let p = parse_algebra(EX2).unwrap();
        assert_eq!(p.quiver.num_vertices(), 2);
        assert_eq!(p.relations.len(), 3);
        let again = parse_algebra(&p.to_dsl()).unwrap();
        assert_eq!(again, p);
        assert_eq!(again.hash(), p.hash());
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let err = parse_algebra("vertices: 1 2\narrow a: 1 -> 3\n").unwrap_err();
        assert_eq!(err, PresentationError::Syntax { line: 2, col: 15, message: "unknown vertex `3`".into() });
        let err = parse_algebra("vertices: 1 2\narrow a: 1 -> 2\nrel: a\n").unwrap_err();
        assert!(err.to_string().contains("inadmissible"), "{err}");
        let err = parse_algebra("vertices: 1 2\narrow a: 1 -> 2\narrow b: 2 -> 1\nrel: a.b + b.a\n").unwrap_err();
        assert!(err.to_string().contains("parallel"), "{err}");
        let err = parse_algebra("vertices: 1\narrow x: 1 -> 1\nrel: x.y\n").unwrap_err();
        assert!(matches!(err, PresentationError::Syntax { line: 3, col: 8, .. }), "{err:?}");
    }

    #[test]
    fn coefficients_parse() {
        let p = parse_algebra("vertices: 1 2 3\narrow a: 1 -> 2\narrow b: 2 -> 3\narrow c: 1 -> 2\narrow d: 2 -> 3\nrel: 2*b.a - 3/4*d.c\n")
            .unwrap();
        assert_eq!(p.relations[0].to_dsl(&p.quiver), "2*b.a - 3/4*d.c");
    }

    #[test]
    fn example_two_basis() {
        let alg: Algebra<Q> = Algebra::new(parse_algebra(EX2).unwrap()).unwrap();
        assert_eq!(alg.dim(), 6);
        assert_eq!(alg.block(0, 1).len(), 2);
        assert_eq!(alg.loewy_length(), 3);
        let c = alg.classify();
        assert!(c.monomial && c.special_biserial);
    }

    #[test]
    fn no_relations_no_cycles_gives_all_paths() {
        let p = parse_algebra("vertices: 1 2 3\narrow a: 1 -> 2\narrow b: 2 -> 3\narrow c: 1 -> 3\n").unwrap();
        let alg: Algebra<Q> = Algebra::new(p).unwrap();
        assert_eq!(alg.dim(), 3 + 3 + 1);
    }

    #[test]
    fn loop_without_relations_is_rejected() {
        let p = parse_algebra("vertices: 1\narrow x: 1 -> 1\n").unwrap();
        let err = Algebra::<Q>::with_cap(p, 10).unwrap_err();
        assert_eq!(err, PresentationError::NotFiniteDimensional { cap: 10 });
    }

    #[test]
    fn binomial_relation_identifies_paths() {
        let p = parse_algebra(
            "vertices: 1 2 3 4\narrow a: 1 -> 2\narrow b: 1 -> 3\narrow c: 2 -> 4\narrow d: 3 -> 4\nrel: c.a - d.b\n",
        )
        .unwrap();
        let alg: Algebra<Fp<5>> = Algebra::new(p.with_field(FieldKind::Prime(5))).unwrap();
        assert_eq!(alg.block(0, 3).len(), 1);
        let ca = alg.reduce(&alg.path("c.a"));
        let db = alg.reduce(&alg.path("d.b"));
        assert_eq!(ca, db);
        assert!(!alg.classify().monomial);
    }

    #[test]
    fn single_vertex_classification() {
        let alg: Algebra<Q> = Algebra::new(parse_algebra("vertices: 1\n").unwrap()).unwrap();
        assert_eq!(alg.classify(), Classification { monomial: true, special_biserial: true, loewy_length: 1 });
    }

    fn brute_subpath(q: &Path, p: &Path, quiver: &Quiver) -> (bool, bool, bool) {
        let all = p.arrows();
        let mut any = false;
        for i in 0..=all.len() {
            for j in i..=all.len() {
                let seg = &all[i..j];
                let ok = if q.is_trivial() {
                    seg.is_empty() && p.vertices(quiver)[i] == q.source()
                } else {
                    seg == q.arrows()
                };
                any |= ok;
            }
        }
        let right = (0..=all.len()).any(|j| {
            if q.is_trivial() {
                j == 0 && q.source() == p.source()
            } else {
                &all[..j] == q.arrows()
            }
        });
        let left = (0..=all.len()).any(|i| {
            if q.is_trivial() {
                i == all.len() && q.source() == p.target()
            } else {
                &all[i..] == q.arrows()
            }
        });
        (any, right, left)
    }

    proptest! {
        #[test]
        fn subpath_predicates_match_factorisation_scan(pw in proptest::collection::vec(0usize..3, 0..6), qw in proptest::collection::vec(0usize..3, 0..4), v in 0usize..1) {
            // One vertex with three loops: every word is a path.
            let quiver = Quiver::new(vec!["1".into()], vec![
                ("x".into(), "1".into(), "1".into()),
                ("y".into(), "1".into(), "1".into()),
                ("z".into(), "1".into(), "1".into()),
            ]).unwrap();
            let mk = |w: Vec<usize>| if w.is_empty() { Path::trivial(v) } else { Path::from_arrows(&quiver, w).unwrap() };
            let p = mk(pw);
            let q = mk(qw);
            let (any, right, left) = brute_subpath(&q, &p, &quiver);
            prop_assert_eq!(is_subpath(&q, &p, &quiver), any);
            prop_assert_eq!(is_right_subpath(&q, &p), right);
            prop_assert_eq!(is_left_subpath(&q, &p), left);
        }

        #[test]
        fn composition_is_associative(a in proptest::collection::vec(0usize..2, 0..4), b in proptest::collection::vec(0usize..2, 0..4), c in proptest::collection::vec(0usize..2, 0..4)) {
            // Alternating quiver 1 -> 2 -> 1 with arrows u: 1->2, w: 2->1.
            let quiver = Quiver::new(vec!["1".into(), "2".into()], vec![
                ("u".into(), "1".into(), "2".into()),
                ("w".into(), "2".into(), "1".into()),
            ]).unwrap();
            let mk = |w: Vec<usize>| {
                if w.is_empty() { Some(Path::trivial(0)) } else { Path::from_arrows(&quiver, w) }
            };
            if let (Some(p), Some(q), Some(r)) = (mk(a), mk(b), mk(c)) {
                let left = compose_paths(&p, &q).and_then(|pq| compose_paths(&pq, &r));
                let right = compose_paths(&q, &r).and_then(|qr| compose_paths(&p, &qr));
                prop_assert_eq!(left, right);
            }
        }
    }
}
