//! Block dimensions of the built-in algebras against a brute-force count:
//! paths up to a length cap, minus the rank of the two-sided ideal, mod a large prime.

use std::collections::HashMap;

use finitude::extend::{builtin_algebra, builtin_presentation, BUILTIN_NAMES};
use finitude::field::{FieldKind, Q};
use finitude::presentation::AlgebraRef;

const P: i64 = 1_000_003;
const CAP: usize = 8;

struct RawQuiver {
    vertices: Vec<String>,
    arrows: Vec<(String, usize, usize)>,
}

/// Vertices, arrows and signed relation terms read straight from the DSL text.
fn parse_raw(text: &str) -> (RawQuiver, Vec<Vec<(i64, Vec<usize>)>>) {
    let mut q = RawQuiver { vertices: Vec::new(), arrows: Vec::new() };
    let mut rels = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if let Some(rest) = line.strip_prefix("vertices:") {
            q.vertices = rest.split_whitespace().map(str::to_string).collect();
        } else if let Some(rest) = line.strip_prefix("arrow ") {
            let (label, ends) = rest.split_once(':').unwrap();
            let (s, t) = ends.split_once("->").unwrap();
            let pos = |v: &str| q.vertices.iter().position(|x| x == v.trim()).unwrap();
            let (s, t) = (pos(s), pos(t));
            q.arrows.push((label.trim().to_string(), s, t));
        } else if let Some(rest) = line.strip_prefix("rel:") {
            let mut terms = Vec::new();
            let mut sign = 1;
            for tok in rest.split_whitespace() {
                match tok {
                    "-" => sign = -1,
                    "+" => sign = 1,
                    word => {
                        // `a.b` applies `b` first.
                        let path: Vec<usize> = word
                            .split('.')
                            .rev()
                            .map(|l| q.arrows.iter().position(|a| a.0 == l).unwrap())
                            .collect();
                        terms.push((sign, path));
                        sign = 1;
                    }
                }
            }
            rels.push(terms);
        }
    }
    (q, rels)
}

fn ends(q: &RawQuiver, p: &[usize], v: usize) -> (usize, usize) {
    if p.is_empty() {
        (v, v)
    } else {
        (q.arrows[p[0]].1, q.arrows[p[p.len() - 1]].2)
    }
}

/// All nontrivial paths of length at most `CAP`, with their source.
fn all_paths(q: &RawQuiver) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = (0..q.arrows.len()).map(|a| vec![a]).collect();
    let mut frontier = out.clone();
    for _ in 1..CAP {
        let mut next = Vec::new();
        for p in &frontier {
            let t = q.arrows[*p.last().unwrap()].2;
            for (a, arrow) in q.arrows.iter().enumerate() {
                if arrow.1 == t {
                    let mut e = p.clone();
                    e.push(a);
                    next.push(e);
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

fn pow_mod(mut b: i64, mut e: i64) -> i64 {
    let mut r = 1;
    b %= P;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % P;
        }
        b = b * b % P;
        e >>= 1;
    }
    r
}

/// Incremental row echelon form over `Z/P`, rows keyed by pivot.
#[derive(Default)]
struct Echelon {
    rows: HashMap<usize, HashMap<usize, i64>>,
}

impl Echelon {
    /// Reduce and insert; returns whether the rank grew.
    fn insert(&mut self, mut v: HashMap<usize, i64>) -> bool {
        loop {
            v.retain(|_, c| *c % P != 0);
            let Some(&piv) = v.keys().min() else { return false };
            match self.rows.get(&piv) {
                Some(row) => {
                    let c = v[&piv];
                    for (k, x) in row {
                        let e = v.entry(*k).or_insert(0);
                        *e = ((*e - c * x) % P + P) % P;
                    }
                }
                None => {
                    let inv = pow_mod(v[&piv], P - 2);
                    for x in v.values_mut() {
                        *x = *x * inv % P;
                    }
                    self.rows.insert(piv, v);
                    return true;
                }
            }
        }
    }
}

/// `dim e_j A e_i` for every pair, from the path count and the ideal rank.
fn oracle_blocks(text: &str) -> HashMap<(usize, usize), usize> {
    let (q, rels) = parse_raw(text);
    let paths = all_paths(&q);
    let index: HashMap<Vec<usize>, usize> = paths.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    let mut ideal = Echelon::default();
    let mut contexts: Vec<Vec<usize>> = vec![Vec::new()];
    contexts.extend(paths.iter().cloned());
    for rel in &rels {
        let (s, t) = ends(&q, &rel[0].1, 0);
        for u in contexts.iter().filter(|u| u.is_empty() || ends(&q, u, 0).1 == s) {
            for v in contexts.iter().filter(|v| v.is_empty() || ends(&q, v, 0).0 == t) {
                let mut vec = HashMap::new();
                for (c, term) in rel {
                    let full: Vec<usize> = u.iter().chain(term).chain(v.iter()).copied().collect();
                    if full.len() <= CAP {
                        *vec.entry(index[&full]).or_insert(0) += c;
                    }
                }
                if u.len() + v.len() + rel.iter().map(|t| t.1.len()).max().unwrap() <= CAP {
                    ideal.insert(vec.into_iter().map(|(k, c)| (k, (c % P + P) % P)).collect());
                }
            }
        }
    }
    // Every longest path must already vanish, otherwise the cap is too small.
    for p in paths.iter().filter(|p| p.len() == CAP) {
        assert!(!ideal.insert(HashMap::from([(index[p], 1)])), "cap {CAP} too small");
    }
    let mut blocks: HashMap<(usize, usize), usize> = HashMap::new();
    for v in 0..q.vertices.len() {
        *blocks.entry((v, v)).or_default() += 1;
    }
    for (i, p) in paths.iter().enumerate() {
        // The ideal is spanned block by block, so non-pivot columns per block give the quotient dimension.
        if !ideal.rows.contains_key(&i) {
            *blocks.entry(ends(&q, p, 0)).or_default() += 1;
        }
    }
    blocks
}

#[test]
fn basis_blocks_match_brute_force() {
    for name in BUILTIN_NAMES {
        let pres = builtin_presentation(name, FieldKind::Rational).unwrap();
        let expected = oracle_blocks(&pres.to_dsl());
        let alg: AlgebraRef<Q> = builtin_algebra(name).unwrap();
        let n = alg.num_vertices();
        for i in 0..n {
            for j in 0..n {
                let got = alg.block(i, j).len();
                let want = expected.get(&(i, j)).copied().unwrap_or(0);
                assert_eq!(got, want, "{name}: block from {} to {}", alg.vertex_name(i), alg.vertex_name(j));
            }
        }
    }
}

#[test]
fn published_dimensions() {
    let dims: Vec<(&str, usize)> = vec![("ex2", 6), ("ex7-lambda", 21)];
    for (name, d) in dims {
        let alg: AlgebraRef<Q> = builtin_algebra(name).unwrap();
        assert_eq!(alg.dim(), d, "{name}");
    }
    let lam: AlgebraRef<Q> = builtin_algebra("ex7-lambda").unwrap();
    let proj: Vec<usize> = (0..8).map(|v| lam.basis_from(v).len()).collect();
    assert_eq!(proj, vec![2, 3, 2, 2, 3, 3, 3, 3]);
}
