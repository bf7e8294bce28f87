//! Finite-dimensional representations, homomorphisms, and the structural
//! operators built on them.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{parse_rational, Field, Q};
use crate::linalg::{self, Matrix};
use crate::presentation::{Algebra, AlgebraRef, Path};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModuleError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("relation `{0}` does not act as zero")]
    RelationViolated(String),
    #[error("subspace family is not closed under the arrow actions")]
    NotSubmodule,
    #[error("modules live over different algebras")]
    DifferentAlgebras,
    #[error("not a module homomorphism: arrow `{0}` does not commute")]
    NotHomomorphism(String),
    #[error("decomposition not certified: {0}")]
    NotCertified(String),
    #[error("module file: {0}")]
    File(String),
}

/// A homogeneous element: a vertex together with a vector in that component.
pub type Element<F> = (usize, Vec<F>);

/// A representation: one vector space per vertex and one matrix per arrow.
#[derive(Clone)]
pub struct Representation<F: Field> {
    alg: AlgebraRef<F>,
    dims: Vec<usize>,
    maps: Arc<Vec<Matrix<F>>>,
    name: Option<String>,
}

impl<F: Field> fmt::Debug for Representation<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Representation").field("name", &self.name).field("dims", &self.dims).finish()
    }
}

impl<F: Field> Representation<F> {
    /// Build and check shapes plus relation vanishing.
    pub fn new(alg: AlgebraRef<F>, dims: Vec<usize>, maps: Vec<Matrix<F>>) -> Result<Self, ModuleError> {
        let rep = Self::new_unchecked(alg, dims, maps)?;
        rep.check_relations()?;
        Ok(rep)
    }

    /// Build after checking shapes only.
    pub fn new_unchecked(alg: AlgebraRef<F>, dims: Vec<usize>, maps: Vec<Matrix<F>>) -> Result<Self, ModuleError> {
        let q = alg.quiver();
        if dims.len() != q.num_vertices() {
            return Err(ModuleError::Shape(format!("{} dims for {} vertices", dims.len(), q.num_vertices())));
        }
        if maps.len() != q.arrows().len() {
            return Err(ModuleError::Shape(format!("{} matrices for {} arrows", maps.len(), q.arrows().len())));
        }
        for (a, m) in q.arrows().iter().zip(&maps) {
            if m.rows() != dims[a.target] || m.cols() != dims[a.source] {
                return Err(ModuleError::Shape(format!(
                    "arrow `{}` needs a {}x{} matrix, got {}x{}",
                    a.label,
                    dims[a.target],
                    dims[a.source],
                    m.rows(),
                    m.cols()
                )));
            }
        }
        Ok(Representation { alg, dims, maps: Arc::new(maps), name: None })
    }

    pub fn zero(alg: AlgebraRef<F>) -> Self {
        let n = alg.num_vertices();
        let maps = alg.quiver().arrows().iter().map(|_| Matrix::zeros(0, 0)).collect();
        Representation { alg, dims: vec![0; n], maps: Arc::new(maps), name: None }
    }

    pub fn simple(alg: AlgebraRef<F>, v: usize) -> Self {
        let mut dims = vec![0; alg.num_vertices()];
        dims[v] = 1;
        let maps = alg.quiver().arrows().iter().map(|a| Matrix::zeros(dims[a.target], dims[a.source])).collect();
        let name = Some(format!("S_{}", alg.vertex_name(v)));
        Representation { alg, dims, maps: Arc::new(maps), name }
    }

    pub fn check_relations(&self) -> Result<(), ModuleError> {
        let pres = self.alg.presentation();
        for r in &pres.relations {
            let (s, t) = (r.source(), r.target());
            let mut acc = Matrix::zeros(self.dims[t], self.dims[s]);
            for (c, p) in r.terms() {
                let c = F::from_rational(c).expect("coefficient checked when the algebra was built");
                acc = acc.add(&self.path_action(p).scale(&c));
            }
            if !acc.is_zero() {
                return Err(ModuleError::RelationViolated(r.to_dsl(&pres.quiver)));
            }
        }
        Ok(())
    }

    pub fn relations_hold(&self) -> bool {
        self.check_relations().is_ok()
    }

    pub fn algebra(&self) -> &AlgebraRef<F> {
        &self.alg
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, v: usize) -> usize {
        self.dims[v]
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }

    pub fn arrow_map(&self, a: usize) -> &Matrix<F> {
        &self.maps[a]
    }

    pub fn arrow_maps(&self) -> &[Matrix<F>] {
        &self.maps
    }

    /// Start of each vertex block in global coordinates.
    pub fn offsets(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.dims.len());
        let mut acc = 0;
        for &d in &self.dims {
            out.push(acc);
            acc += d;
        }
        out
    }

    pub fn same_algebra(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.alg, &other.alg) || self.alg.hash() == other.alg.hash()
    }

    /// Composite of arrow matrices along `p`; the identity for a trivial path.
    pub fn path_action(&self, p: &Path) -> Matrix<F> {
        let mut m = Matrix::identity(self.dims[p.source()]);
        for &a in p.arrows() {
            m = self.maps[a].mul(&m);
        }
        m
    }

    /// Intersection of the kernels of all arrows leaving each vertex.
    pub fn socle(&self) -> SubspaceFamily<F> {
        let q = self.alg.quiver();
        let spaces = (0..self.dims.len())
            .map(|v| {
                let outs: Vec<Matrix<F>> = q.arrows_from(v).map(|a| self.maps[a].clone()).collect();
                if outs.is_empty() {
                    Matrix::identity(self.dims[v])
                } else {
                    Matrix::vstack_all(self.dims[v], &outs).kernel()
                }
            })
            .collect();
        SubspaceFamily { spaces }
    }

    /// `JM`: the sum of the images of all arrows.
    pub fn radical(&self) -> SubspaceFamily<F> {
        let q = self.alg.quiver();
        let spaces = (0..self.dims.len())
            .map(|v| {
                let ins: Vec<Matrix<F>> = q.arrows_into(v).map(|a| self.maps[a].clone()).collect();
                Matrix::hstack_all(self.dims[v], &ins).column_basis()
            })
            .collect();
        SubspaceFamily { spaces }
    }

    /// Radical plus a deterministic set of top elements: per vertex (in order), the
    /// standard basis vectors completing the radical.
    pub fn radical_and_top(&self) -> (SubspaceFamily<F>, Vec<Element<F>>) {
        let rad = self.radical();
        let mut tops = Vec::new();
        for v in 0..self.dims.len() {
            let comp = linalg::complement(&rad.spaces[v]);
            for j in 0..comp.cols() {
                tops.push((v, comp.col(j)));
            }
        }
        (rad, tops)
    }

    pub fn top_elements(&self) -> Vec<Element<F>> {
        self.radical_and_top().1
    }

    /// Apply a path to a homogeneous element.
    pub fn act(&self, p: &Path, x: &Element<F>) -> Element<F> {
        assert_eq!(p.source(), x.0, "path does not start at the element's vertex");
        let v = self.path_action(p).mul(&Matrix::column(x.1.clone()));
        (p.target(), v.col(0))
    }

    /// Smallest submodule containing the given homogeneous elements.
    pub fn generated_submodule(&self, gens: &[Element<F>]) -> SubspaceFamily<F> {
        let q = self.alg.quiver();
        let mut spaces: Vec<Matrix<F>> = self.dims.iter().map(|&d| Matrix::zeros(d, 0)).collect();
        let mut queue: Vec<Element<F>> = gens.to_vec();
        while let Some((v, x)) = queue.pop() {
            let col = Matrix::column(x);
            if col.is_zero() || linalg::span_contains(&spaces[v], &col) {
                continue;
            }
            spaces[v] = spaces[v].hstack(&col);
            for a in q.arrows_from(v) {
                let y = self.maps[a].mul(&col);
                if !y.is_zero() {
                    queue.push((q.arrow(a).target, y.col(0)));
                }
            }
        }
        SubspaceFamily { spaces }
    }

    pub fn is_submodule(&self, sub: &SubspaceFamily<F>) -> bool {
        self.alg.quiver().arrows().iter().enumerate().all(|(a, ar)| {
            let img = self.maps[a].mul(&sub.spaces[ar.source]);
            linalg::span_contains(&sub.spaces[ar.target], &img)
        })
    }

    /// The submodule spanned by `sub` as a representation, with its inclusion.
    pub fn subrepresentation(&self, sub: &SubspaceFamily<F>) -> Result<(Self, ModuleMap<F>), ModuleError> {
        let bases: Vec<Matrix<F>> = sub.spaces.iter().map(|s| s.column_basis()).collect();
        let mut maps = Vec::new();
        for (a, ar) in self.alg.quiver().arrows().iter().enumerate() {
            let img = self.maps[a].mul(&bases[ar.source]);
            let x = bases[ar.target].solve(&img).ok_or(ModuleError::NotSubmodule)?;
            maps.push(x);
        }
        let dims = bases.iter().map(Matrix::cols).collect();
        let rep = Representation { alg: self.alg.clone(), dims, maps: Arc::new(maps), name: None };
        let inc = ModuleMap { source: rep.clone(), target: self.clone(), blocks: bases };
        Ok((rep, inc))
    }

    /// `self / sub` with the canonical projection.
    pub fn quotient(&self, sub: &SubspaceFamily<F>) -> Result<(Self, ModuleMap<F>), ModuleError> {
        if !self.is_submodule(sub) {
            return Err(ModuleError::NotSubmodule);
        }
        let mut comps = Vec::new();
        let mut projs = Vec::new();
        for (v, s) in sub.spaces.iter().enumerate() {
            let s = s.column_basis();
            let c = linalg::complement(&s);
            let t = s.hstack(&c);
            let inv = t.inverse().expect("basis plus complement is invertible");
            projs.push(inv.submatrix(s.cols()..self.dims[v], 0..self.dims[v]));
            comps.push(c);
        }
        let maps = self
            .alg
            .quiver()
            .arrows()
            .iter()
            .enumerate()
            .map(|(a, ar)| projs[ar.target].mul(&self.maps[a]).mul(&comps[ar.source]))
            .collect();
        let dims = comps.iter().map(Matrix::cols).collect();
        let rep = Representation { alg: self.alg.clone(), dims, maps: Arc::new(maps), name: None };
        let proj = ModuleMap { source: self.clone(), target: rep.clone(), blocks: projs };
        Ok((rep, proj))
    }

    /// Transport the structure along invertible per-vertex matrices `p_v` (new = p M p^-1).
    pub fn change_basis(&self, p: &[Matrix<F>]) -> Self {
        let inv: Vec<Matrix<F>> = p.iter().map(|m| m.inverse().expect("invertible change of basis")).collect();
        let maps = self
            .alg
            .quiver()
            .arrows()
            .iter()
            .enumerate()
            .map(|(a, ar)| p[ar.target].mul(&self.maps[a]).mul(&inv[ar.source]))
            .collect();
        Representation { alg: self.alg.clone(), dims: self.dims.clone(), maps: Arc::new(maps), name: self.name.clone() }
    }

    pub fn to_file(&self) -> ModuleFile {
        let q = self.alg.quiver();
        ModuleFile {
            algebra_hash: self.alg.hash().to_string(),
            field: F::kind().to_string(),
            name: self.name.clone(),
            dims: q.vertices().iter().cloned().zip(self.dims.iter().copied()).collect(),
            arrows: q
                .arrows()
                .iter()
                .zip(self.maps.iter())
                .map(|(a, m)| {
                    let rows = (0..m.rows()).map(|i| m.row(i).iter().map(|x| x.to_string()).collect()).collect();
                    (a.label.clone(), rows)
                })
                .collect(),
        }
    }

    pub fn from_file(alg: AlgebraRef<F>, file: &ModuleFile) -> Result<Self, ModuleError> {
        if file.algebra_hash != alg.hash() {
            return Err(ModuleError::File(format!(
                "algebra hash mismatch: file has {}, algebra is {}",
                file.algebra_hash,
                alg.hash()
            )));
        }
        let q = alg.quiver();
        let mut dims = vec![0; q.num_vertices()];
        for (name, &d) in &file.dims {
            let v = q.vertex(name).ok_or_else(|| ModuleError::File(format!("unknown vertex `{name}`")))?;
            dims[v] = d;
        }
        let mut maps = Vec::new();
        for a in q.arrows() {
            let (r, c) = (dims[a.target], dims[a.source]);
            let m = match file.arrows.get(&a.label) {
                None if r == 0 || c == 0 => Matrix::zeros(r, c),
                None => return Err(ModuleError::File(format!("missing matrix for arrow `{}`", a.label))),
                Some(rows) => {
                    if rows.len() != r || rows.iter().any(|row| row.len() != c) {
                        return Err(ModuleError::File(format!("matrix for `{}` should be {r}x{c}", a.label)));
                    }
                    let mut data = Vec::with_capacity(r * c);
                    for entry in rows.iter().flatten() {
                        let val = parse_rational(entry)
                            .and_then(|x| F::from_rational(&x))
                            .ok_or_else(|| ModuleError::File(format!("bad entry `{entry}`")))?;
                        data.push(val);
                    }
                    Matrix::from_vec(r, c, data)
                }
            };
            maps.push(m);
        }
        for label in file.arrows.keys() {
            if q.arrow_id(label).is_none() {
                return Err(ModuleError::File(format!("unknown arrow `{label}`")));
            }
        }
        let rep = Representation::new(alg, dims, maps)?;
        Ok(match &file.name {
            Some(n) => rep.with_name(n.clone()),
            None => rep,
        })
    }
}

/// JSON module format.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleFile {
    pub algebra_hash: String,
    pub field: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub dims: BTreeMap<String, usize>,
    /// Row-major matrices with entries written as integers or fractions.
    pub arrows: BTreeMap<String, Vec<Vec<String>>>,
}

/// One subspace per vertex, each given by spanning columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubspaceFamily<F: Field> {
    pub spaces: Vec<Matrix<F>>,
}

impl<F: Field> SubspaceFamily<F> {
    pub fn zero(rep: &Representation<F>) -> Self {
        SubspaceFamily { spaces: rep.dims.iter().map(|&d| Matrix::zeros(d, 0)).collect() }
    }

    pub fn whole(rep: &Representation<F>) -> Self {
        SubspaceFamily { spaces: rep.dims.iter().map(|&d| Matrix::identity(d)).collect() }
    }

    pub fn dims(&self) -> Vec<usize> {
        self.spaces.iter().map(Matrix::rank).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.dims().iter().sum()
    }

    pub fn sum(&self, other: &Self) -> Self {
        let spaces = self.spaces.iter().zip(&other.spaces).map(|(a, b)| a.hstack(b).column_basis()).collect();
        SubspaceFamily { spaces }
    }

    pub fn intersect(&self, other: &Self) -> Self {
        let spaces = self.spaces.iter().zip(&other.spaces).map(|(a, b)| linalg::intersect(a, b)).collect();
        SubspaceFamily { spaces }
    }

    pub fn contains(&self, other: &Self) -> bool {
        self.spaces.iter().zip(&other.spaces).all(|(a, b)| linalg::span_contains(a, b))
    }
}

/// A module homomorphism given by per-vertex matrices.
#[derive(Clone)]
pub struct ModuleMap<F: Field> {
    source: Representation<F>,
    target: Representation<F>,
    blocks: Vec<Matrix<F>>,
}

impl<F: Field> fmt::Debug for ModuleMap<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ModuleMap")
            .field("source", &self.source.dims)
            .field("target", &self.target.dims)
            .field("blocks", &self.blocks)
            .finish()
    }
}

impl<F: Field> ModuleMap<F> {
    pub fn new(source: Representation<F>, target: Representation<F>, blocks: Vec<Matrix<F>>) -> Result<Self, ModuleError> {
        if !source.same_algebra(&target) {
            return Err(ModuleError::DifferentAlgebras);
        }
        if blocks.len() != source.dims.len() {
            return Err(ModuleError::Shape("one block per vertex expected".into()));
        }
        for (v, b) in blocks.iter().enumerate() {
            if b.rows() != target.dims[v] || b.cols() != source.dims[v] {
                return Err(ModuleError::Shape(format!("block at vertex {v} has the wrong shape")));
            }
        }
        let map = ModuleMap { source, target, blocks };
        for (a, ar) in map.source.alg.quiver().arrows().iter().enumerate() {
            let lhs = map.blocks[ar.target].mul(&map.source.maps[a]);
            let rhs = map.target.maps[a].mul(&map.blocks[ar.source]);
            if lhs != rhs {
                return Err(ModuleError::NotHomomorphism(ar.label.clone()));
            }
        }
        Ok(map)
    }

    pub fn identity(rep: &Representation<F>) -> Self {
        let blocks = rep.dims.iter().map(|&d| Matrix::identity(d)).collect();
        ModuleMap { source: rep.clone(), target: rep.clone(), blocks }
    }

    pub fn zero(source: &Representation<F>, target: &Representation<F>) -> Self {
        let blocks = source.dims.iter().zip(&target.dims).map(|(&s, &t)| Matrix::zeros(t, s)).collect();
        ModuleMap { source: source.clone(), target: target.clone(), blocks }
    }

    pub fn source(&self) -> &Representation<F> {
        &self.source
    }

    pub fn target(&self) -> &Representation<F> {
        &self.target
    }

    pub fn blocks(&self) -> &[Matrix<F>] {
        &self.blocks
    }

    pub fn block(&self, v: usize) -> &Matrix<F> {
        &self.blocks[v]
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &ModuleMap<F>) -> ModuleMap<F> {
        let blocks = self.blocks.iter().zip(&inner.blocks).map(|(a, b)| a.mul(b)).collect();
        ModuleMap { source: inner.source.clone(), target: self.target.clone(), blocks }
    }

    pub fn add(&self, other: &ModuleMap<F>) -> ModuleMap<F> {
        let blocks = self.blocks.iter().zip(&other.blocks).map(|(a, b)| a.add(b)).collect();
        ModuleMap { source: self.source.clone(), target: self.target.clone(), blocks }
    }

    pub fn scale(&self, c: &F) -> ModuleMap<F> {
        let blocks = self.blocks.iter().map(|a| a.scale(c)).collect();
        ModuleMap { source: self.source.clone(), target: self.target.clone(), blocks }
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().all(Matrix::is_zero)
    }

    pub fn is_isomorphism(&self) -> bool {
        self.blocks.iter().all(Matrix::is_invertible)
    }

    pub fn is_injective(&self) -> bool {
        self.blocks.iter().all(|b| b.rank() == b.cols())
    }

    pub fn is_surjective(&self) -> bool {
        self.blocks.iter().all(|b| b.rank() == b.rows())
    }

    /// Block-diagonal matrix in global coordinates.
    pub fn global_matrix(&self) -> Matrix<F> {
        Matrix::block_diag(&self.blocks)
    }

    /// Entries of all blocks, concatenated; the coordinates used for hom spaces.
    pub fn flatten(&self) -> Vec<F> {
        self.blocks.iter().flat_map(|b| b.entries().iter().cloned()).collect()
    }

    pub fn kernel(&self) -> (Representation<F>, ModuleMap<F>) {
        let sub = SubspaceFamily { spaces: self.blocks.iter().map(Matrix::kernel).collect() };
        self.source.subrepresentation(&sub).expect("kernels are submodules")
    }

    pub fn image(&self) -> SubspaceFamily<F> {
        SubspaceFamily { spaces: self.blocks.iter().map(Matrix::column_basis).collect() }
    }

    pub fn rank(&self) -> usize {
        self.blocks.iter().map(Matrix::rank).sum()
    }

    /// Check the intertwining equations.
    pub fn is_homomorphism(&self) -> bool {
        self.source.alg.quiver().arrows().iter().enumerate().all(|(a, ar)| {
            self.blocks[ar.target].mul(&self.source.maps[a]) == self.target.maps[a].mul(&self.blocks[ar.source])
        })
    }
}

/// `kernel_of` with its inclusion.
pub fn kernel_of<F: Field>(f: &ModuleMap<F>) -> (Representation<F>, ModuleMap<F>) {
    f.kernel()
}

pub fn quotient<F: Field>(rep: &Representation<F>, sub: &SubspaceFamily<F>) -> Result<Representation<F>, ModuleError> {
    Ok(rep.quotient(sub)?.0)
}

/// A direct sum with its structure maps.
pub struct DirectSum<F: Field> {
    pub rep: Representation<F>,
    pub injections: Vec<ModuleMap<F>>,
    pub projections: Vec<ModuleMap<F>>,
}

pub fn direct_sum<F: Field>(alg: &AlgebraRef<F>, parts: &[Representation<F>]) -> Representation<F> {
    direct_sum_with_maps(alg, parts).rep
}

pub fn direct_sum_with_maps<F: Field>(alg: &AlgebraRef<F>, parts: &[Representation<F>]) -> DirectSum<F> {
    let n = alg.num_vertices();
    let dims: Vec<usize> = (0..n).map(|v| parts.iter().map(|p| p.dims[v]).sum()).collect();
    let maps: Vec<Matrix<F>> = (0..alg.quiver().arrows().len())
        .map(|a| Matrix::block_diag(&parts.iter().map(|p| p.maps[a].clone()).collect::<Vec<_>>()))
        .collect();
    let rep = Representation { alg: alg.clone(), dims: dims.clone(), maps: Arc::new(maps), name: None };
    let mut injections = Vec::new();
    let mut projections = Vec::new();
    let mut offset = vec![0; n];
    for p in parts {
        let mut inj = Vec::new();
        let mut proj = Vec::new();
        for v in 0..n {
            let mut m = Matrix::zeros(dims[v], p.dims[v]);
            for k in 0..p.dims[v] {
                m[(offset[v] + k, k)] = F::one();
            }
            proj.push(m.transpose());
            inj.push(m);
            offset[v] += p.dims[v];
        }
        injections.push(ModuleMap { source: p.clone(), target: rep.clone(), blocks: inj });
        projections.push(ModuleMap { source: rep.clone(), target: p.clone(), blocks: proj });
    }
    DirectSum { rep, injections, projections }
}

/// The indecomposable projective `Λe_v`, with basis the basis paths starting at `v`.
pub fn projective_rep<F: Field>(alg: &AlgebraRef<F>, v: usize) -> Representation<F> {
    ProjectiveModule::new(alg, v).rep
}

/// `Λe_v` together with the coordinates of its basis paths.
#[derive(Clone, Debug)]
pub struct ProjectiveModule<F: Field> {
    pub vertex: usize,
    pub rep: Representation<F>,
    /// For each algebra basis index starting at `vertex`: (target vertex, local coordinate).
    local: BTreeMap<usize, (usize, usize)>,
}

impl<F: Field> ProjectiveModule<F> {
    pub fn new(alg: &AlgebraRef<F>, v: usize) -> Self {
        let q = alg.quiver();
        let members = alg.basis_from(v);
        let mut dims = vec![0; q.num_vertices()];
        let mut local = BTreeMap::new();
        for &b in &members {
            let t = alg.basis()[b].target();
            local.insert(b, (t, dims[t]));
            dims[t] += 1;
        }
        let mut maps: Vec<Matrix<F>> = q.arrows().iter().map(|a| Matrix::zeros(dims[a.target], dims[a.source])).collect();
        for &b in &members {
            let p = &alg.basis()[b];
            let (_, col) = local[&b];
            for a in q.arrows_from(p.target()) {
                let ap = p.then(q, a).expect("composable");
                for (c, coeff) in alg.reduce(&ap) {
                    let (_, row) = local[&c];
                    maps[a][(row, col)] = coeff;
                }
            }
        }
        let rep = Representation {
            alg: alg.clone(),
            dims,
            maps: Arc::new(maps),
            name: Some(format!("P_{}", alg.vertex_name(v))),
        };
        ProjectiveModule { vertex: v, rep, local }
    }

    /// The residue of a path starting at the generator's vertex, as an element.
    pub fn path_element(&self, p: &Path) -> Element<F> {
        assert_eq!(p.source(), self.vertex, "path must start at the projective's vertex");
        let t = p.target();
        let mut v = vec![F::zero(); self.rep.dims[t]];
        for (b, c) in self.rep.alg.reduce(p) {
            let (_, row) = self.local[&b];
            v[row] = v[row].clone() + c;
        }
        (t, v)
    }

    /// Basis paths of the projective with their (target vertex, local coordinate).
    pub fn basis_paths(&self) -> Vec<(Path, usize, usize)> {
        let basis = self.rep.alg.basis();
        self.local.iter().map(|(&b, &(t, l))| (basis[b].clone(), t, l)).collect()
    }

    pub fn generator(&self) -> Element<F> {
        self.path_element(&Path::trivial(self.vertex))
    }
}

/// Basis of `Hom(a, b)` by solving the intertwining equations.
pub fn hom_basis<F: Field>(a: &Representation<F>, b: &Representation<F>) -> Vec<ModuleMap<F>> {
    assert!(a.same_algebra(b), "modules over different algebras");
    let q = a.alg.quiver();
    let n = a.dims.len();
    let mut offs = Vec::with_capacity(n);
    let mut unknowns = 0;
    for v in 0..n {
        offs.push(unknowns);
        unknowns += a.dims[v] * b.dims[v];
    }
    if unknowns == 0 {
        return Vec::new();
    }
    // Unknown f_v[r][c] sits at offs[v] + r * a.dims[v] + c.
    let mut rows: Vec<Vec<(usize, F)>> = Vec::new();
    for (ai, ar) in q.arrows().iter().enumerate() {
        let (i, j) = (ar.source, ar.target);
        let (am, bm) = (&a.maps[ai], &b.maps[ai]);
        // (f_j A)[r][c] - (B f_i)[r][c] = 0 for r < dim b_j, c < dim a_i
        for r in 0..b.dims[j] {
            for c in 0..a.dims[i] {
                let mut row = Vec::new();
                for k in 0..a.dims[j] {
                    let coeff = am[(k, c)].clone();
                    if !coeff.is_zero() {
                        row.push((offs[j] + r * a.dims[j] + k, coeff));
                    }
                }
                for k in 0..b.dims[i] {
                    let coeff = bm[(r, k)].clone();
                    if !coeff.is_zero() {
                        row.push((offs[i] + k * a.dims[i] + c, -coeff));
                    }
                }
                if !row.is_empty() {
                    rows.push(row);
                }
            }
        }
    }
    let mut m = Matrix::<F>::zeros(rows.len(), unknowns);
    for (ri, row) in rows.into_iter().enumerate() {
        for (col, c) in row {
            let cur = m[(ri, col)].clone();
            m[(ri, col)] = cur + c;
        }
    }
    let kernel = m.kernel();
    (0..kernel.cols())
        .map(|k| {
            let blocks = (0..n)
                .map(|v| {
                    let data = (0..a.dims[v] * b.dims[v]).map(|t| kernel[(offs[v] + t, k)].clone()).collect();
                    Matrix::from_vec(b.dims[v], a.dims[v], data)
                })
                .collect();
            ModuleMap { source: a.clone(), target: b.clone(), blocks }
        })
        .collect()
}

pub fn hom_dim<F: Field>(a: &Representation<F>, b: &Representation<F>) -> usize {
    hom_basis(a, b).len()
}

/// Linear combination of maps with the same source and target.
pub fn combine_maps<F: Field>(maps: &[ModuleMap<F>], coeffs: &[F]) -> ModuleMap<F> {
    let mut acc = ModuleMap::zero(&maps[0].source, &maps[0].target);
    for (m, c) in maps.iter().zip(coeffs) {
        if !c.is_zero() {
            acc = acc.add(&m.scale(c));
        }
    }
    acc
}

pub(crate) fn random_scalar<F: Field, R: Rng>(rng: &mut R) -> F {
    match F::elements() {
        Some(all) => all[rng.gen_range(0..all.len())].clone(),
        None => F::from_i64(rng.gen_range(-4..=4)),
    }
}

// ---------------------------------------------------------------------------
// Decomposition

#[derive(Debug, Clone)]
pub struct DecomposeOptions {
    pub seed: u64,
    /// Total dimension above which decomposition is refused.
    pub max_dim: usize,
    pub random_tries: usize,
}

impl Default for DecomposeOptions {
    fn default() -> Self {
        DecomposeOptions { seed: 0x5eed, max_dim: 160, random_tries: 64 }
    }
}

/// An indecomposable summand together with its inclusion into the decomposed module.
#[derive(Clone, Debug)]
pub struct Summand<F: Field> {
    pub rep: Representation<F>,
    pub inclusion: ModuleMap<F>,
}

/// Row-reduced spanning set used for repeated membership tests.
struct SpanReducer<F> {
    rows: Vec<(usize, Vec<F>)>,
}

impl<F: Field> SpanReducer<F> {
    fn new() -> Self {
        SpanReducer { rows: Vec::new() }
    }

    fn reduce(&self, v: &[F]) -> Vec<F> {
        let mut v = v.to_vec();
        for (p, row) in &self.rows {
            if !v[*p].is_zero() {
                let c = v[*p].clone();
                for (x, r) in v.iter_mut().zip(row) {
                    if !r.is_zero() {
                        *x = x.clone() - c.clone() * r.clone();
                    }
                }
            }
        }
        v
    }

    fn contains(&self, v: &[F]) -> bool {
        self.reduce(v).iter().all(F::is_zero)
    }

    /// Insert; returns false if already in the span.
    fn insert(&mut self, v: &[F]) -> bool {
        let r = self.reduce(v);
        let Some(p) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = r[p].inv().expect("nonzero");
        let r: Vec<F> = r.into_iter().map(|x| x * inv.clone()).collect();
        for (_, row) in self.rows.iter_mut() {
            if !row[p].is_zero() {
                let c = row[p].clone();
                for (x, y) in row.iter_mut().zip(&r) {
                    if !y.is_zero() {
                        *x = x.clone() - c.clone() * y.clone();
                    }
                }
            }
        }
        self.rows.push((p, r));
        true
    }

    fn dim(&self) -> usize {
        self.rows.len()
    }
}

/// `(x - λ)^n` as coefficients, constant term first.
fn shifted_power<F: Field>(lambda: &F, n: usize) -> Vec<F> {
    let mut poly = vec![F::one()];
    for _ in 0..n {
        let mut next = vec![F::zero(); poly.len() + 1];
        for (d, c) in poly.iter().enumerate() {
            next[d + 1] = next[d + 1].clone() + c.clone();
            next[d] = next[d].clone() - lambda.clone() * c.clone();
        }
        poly = next;
    }
    poly
}

fn field_roots<F: Field>(cp: &[F]) -> Option<Vec<F>> {
    if let Some(all) = F::elements() {
        return Some(all.into_iter().filter(|x| linalg::eval_poly(cp, x).is_zero()).collect());
    }
    // Over Q: go through the exact rational type.
    let as_q: Vec<Q> =
        cp.iter().map(|c| Q::from_rational(&c.to_rational().expect("characteristic zero")).expect("rational")).collect();
    let roots = linalg::rational_roots(&as_q)?;
    Some(roots.iter().map(|r| F::from_rational(&r.to_big()).expect("rational root")).collect())
}

enum Spectral<F> {
    /// `φ - λ` is nilpotent.
    ScalarPlusNilpotent(F),
    /// `φ - λ` is singular and not nilpotent: a Fitting split exists.
    Split(F),
    Unknown,
}

fn spectral<F: Field>(phi: &Matrix<F>) -> Spectral<F> {
    let n = phi.rows();
    let cp = linalg::char_poly(phi);
    let Some(roots) = field_roots(&cp) else {
        return Spectral::Unknown;
    };
    match roots.into_iter().next() {
        Some(lambda) if shifted_power(&lambda, n) == cp => Spectral::ScalarPlusNilpotent(lambda),
        Some(lambda) => Spectral::Split(lambda),
        None => Spectral::Unknown,
    }
}

fn fitting_split<F: Field>(
    rep: &Representation<F>,
    phi: &Matrix<F>,
    lambda: &F,
) -> Option<(SubspaceFamily<F>, SubspaceFamily<F>)> {
    let n = rep.total_dim();
    let shifted = phi.sub(&Matrix::identity(n).scale(lambda));
    let psi = shifted.pow(n);
    let offs = rep.offsets();
    let mut img = Vec::new();
    let mut ker = Vec::new();
    for v in 0..rep.dims.len() {
        let r = offs[v]..offs[v] + rep.dims[v];
        let block = psi.submatrix(r.clone(), r);
        img.push(block.column_basis());
        ker.push(block.kernel());
    }
    let (img, ker) = (SubspaceFamily { spaces: img }, SubspaceFamily { spaces: ker });
    if img.total_dim() == 0 || ker.total_dim() == 0 {
        return None;
    }
    Some((img, ker))
}

/// Outcome of the endomorphism analysis of one module.
enum EndAnalysis<F: Field> {
    Local,
    Split(SubspaceFamily<F>, SubspaceFamily<F>),
}

fn analyse_endomorphisms<F: Field>(rep: &Representation<F>, opts: &DecomposeOptions) -> Result<EndAnalysis<F>, ModuleError> {
    let ends: Vec<Matrix<F>> = hom_basis(rep, rep).iter().map(ModuleMap::global_matrix).collect();
    if ends.len() <= 1 {
        return Ok(EndAnalysis::Local);
    }
    let n = rep.total_dim();
    let id = Matrix::identity(n);
    let try_split = |phi: &Matrix<F>| -> Option<EndAnalysis<F>> {
        if let Spectral::Split(lambda) = spectral(phi) {
            if let Some((a, b)) = fitting_split(rep, phi, &lambda) {
                return Some(EndAnalysis::Split(a, b));
            }
        }
        None
    };
    let mut nilpotent_parts = Vec::new();
    let mut undecided = false;
    for b in &ends {
        match spectral(b) {
            Spectral::ScalarPlusNilpotent(lambda) => nilpotent_parts.push(b.sub(&id.scale(&lambda))),
            Spectral::Split(lambda) => {
                if let Some((a, c)) = fitting_split(rep, b, &lambda) {
                    return Ok(EndAnalysis::Split(a, c));
                }
                undecided = true;
            }
            Spectral::Unknown => undecided = true,
        }
    }
    let mut extra: Vec<Matrix<F>> = Vec::new();
    if !undecided {
        // Certificate: End = K·1 ⊕ N with N a nilpotent two-sided ideal.
        let mut span = SpanReducer::new();
        for m in &nilpotent_parts {
            span.insert(&m.flatten());
        }
        let full_codim_one = span.dim() + 1 == ends.len() && !span.contains(&id.flatten());
        let mut closed = full_codim_one;
        if closed {
            'outer: for x in &nilpotent_parts {
                for y in &nilpotent_parts {
                    let xy = x.mul(y);
                    if !span.contains(&xy.flatten()) {
                        extra.push(xy);
                        closed = false;
                        break 'outer;
                    }
                }
            }
        }
        if closed {
            // Powers of N must reach zero.
            let mut power: Vec<Matrix<F>> = nilpotent_parts.clone();
            power.retain(|m| !m.is_zero());
            for _ in 0..=n {
                if power.is_empty() {
                    return Ok(EndAnalysis::Local);
                }
                let mut next_span = SpanReducer::new();
                let mut next = Vec::new();
                for x in &power {
                    for y in &nilpotent_parts {
                        let xy = x.mul(y);
                        if next_span.insert(&xy.flatten()) {
                            next.push(xy);
                        }
                    }
                }
                power = next;
            }
        }
    }
    // Search for a splitting element.
    for x in &extra {
        if let Some(s) = try_split(x) {
            return Ok(s);
        }
    }
    for i in 0..ends.len() {
        for j in 0..ends.len() {
            let prod = ends[i].mul(&ends[j]);
            if let Some(s) = try_split(&prod) {
                return Ok(s);
            }
            if i < j {
                if let Some(s) = try_split(&ends[i].add(&ends[j])) {
                    return Ok(s);
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for _ in 0..opts.random_tries {
        let mut phi = Matrix::zeros(n, n);
        for b in &ends {
            let c: F = random_scalar(&mut rng);
            if !c.is_zero() {
                phi = phi.add(&b.scale(&c));
            }
        }
        if let Some(s) = try_split(&phi) {
            return Ok(s);
        }
    }
    Err(ModuleError::NotCertified(format!(
        "no splitting endomorphism found and locality of End (dim {}) not certified",
        ends.len()
    )))
}

/// Split into indecomposable summands; each summand's endomorphism ring is
/// certified local (or one-dimensional).
pub fn decompose<F: Field>(rep: &Representation<F>, opts: &DecomposeOptions) -> Result<Vec<Summand<F>>, ModuleError> {
    if rep.total_dim() > opts.max_dim {
        return Err(ModuleError::NotCertified(format!(
            "dimension {} exceeds the configured limit {}",
            rep.total_dim(),
            opts.max_dim
        )));
    }
    let mut out = Vec::new();
    let mut stack = vec![Summand { rep: rep.clone(), inclusion: ModuleMap::identity(rep) }];
    while let Some(s) = stack.pop() {
        if s.rep.is_zero() {
            continue;
        }
        match analyse_endomorphisms(&s.rep, opts)? {
            EndAnalysis::Local => out.push(s),
            EndAnalysis::Split(a, b) => {
                for part in [b, a] {
                    let (sub, inc) = s.rep.subrepresentation(&part)?;
                    stack.push(Summand { rep: sub, inclusion: s.inclusion.compose(&inc) });
                }
            }
        }
    }
    Ok(out)
}

/// Like [`decompose`] but returns only the summand modules.
pub fn decompose_modules<F: Field>(rep: &Representation<F>, opts: &DecomposeOptions) -> Result<Vec<Representation<F>>, ModuleError> {
    Ok(decompose(rep, opts)?.into_iter().map(|s| s.rep).collect())
}

// ---------------------------------------------------------------------------
// Isomorphism

#[derive(Clone, Debug)]
pub enum IsoVerdict<F: Field> {
    Isomorphic(Option<ModuleMap<F>>),
    NotIsomorphic,
    Inconclusive,
}

impl<F: Field> IsoVerdict<F> {
    pub fn is_iso(&self) -> bool {
        matches!(self, IsoVerdict::Isomorphic(_))
    }

    pub fn as_bool(&self) -> Option<bool> {
        match self {
            IsoVerdict::Isomorphic(_) => Some(true),
            IsoVerdict::NotIsomorphic => Some(false),
            IsoVerdict::Inconclusive => None,
        }
    }
}

/// Exact test for `u ≅ v` when `u` has local endomorphism ring.
pub fn iso_to_local<F: Field>(u: &Representation<F>, v: &Representation<F>) -> Option<ModuleMap<F>> {
    if u.dims != v.dims {
        return None;
    }
    if u.is_zero() {
        return Some(ModuleMap::zero(u, v));
    }
    let fs = hom_basis(u, v);
    if fs.is_empty() {
        return None;
    }
    let gs = hom_basis(v, u);
    for f in &fs {
        if f.is_isomorphism() {
            return Some(f.clone());
        }
    }
    for g in &gs {
        for f in &fs {
            if g.compose(f).is_isomorphism() {
                return Some(f.clone());
            }
        }
    }
    None
}

/// Match two lists of local modules up to isomorphism; true iff they agree as multisets.
pub fn same_summands<F: Field>(a: &[Representation<F>], b: &[Representation<F>]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut used = vec![false; b.len()];
    'outer: for x in a {
        for (j, y) in b.iter().enumerate() {
            if !used[j] && iso_to_local(x, y).is_some() {
                used[j] = true;
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Isomorphism test: random search for an invertible intertwiner, then an exact
/// comparison of certified decompositions, then a small grid.
pub fn is_isomorphic<F: Field>(a: &Representation<F>, b: &Representation<F>, seed: u64) -> IsoVerdict<F> {
    if !a.same_algebra(b) || a.dims != b.dims {
        return IsoVerdict::NotIsomorphic;
    }
    if a.is_zero() {
        return IsoVerdict::Isomorphic(Some(ModuleMap::zero(a, b)));
    }
    let homs = hom_basis(a, b);
    if homs.is_empty() {
        return IsoVerdict::NotIsomorphic;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..32 {
        let coeffs: Vec<F> = homs.iter().map(|_| random_scalar(&mut rng)).collect();
        let f = combine_maps(&homs, &coeffs);
        if f.is_isomorphism() {
            return IsoVerdict::Isomorphic(Some(f));
        }
    }
    let opts = DecomposeOptions { seed, ..DecomposeOptions::default() };
    if let (Ok(da), Ok(db)) = (decompose_modules(a, &opts), decompose_modules(b, &opts)) {
        return if same_summands(&da, &db) { IsoVerdict::Isomorphic(None) } else { IsoVerdict::NotIsomorphic };
    }
    if homs.len() <= 6 {
        let grid: Vec<F> = [-1i64, 0, 1, 2].iter().map(|&x| F::from_i64(x)).collect();
        let mut idx = vec![0usize; homs.len()];
        loop {
            let coeffs: Vec<F> = idx.iter().map(|&i| grid[i].clone()).collect();
            let f = combine_maps(&homs, &coeffs);
            if f.is_isomorphism() {
                return IsoVerdict::Isomorphic(Some(f));
            }
            let mut k = 0;
            while k < idx.len() {
                idx[k] += 1;
                if idx[k] < grid.len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == idx.len() {
                break;
            }
        }
    }
    IsoVerdict::Inconclusive
}

/// Convenience wrapper for callers holding a plain algebra.
pub fn algebra_ref<F: Field>(alg: Algebra<F>) -> AlgebraRef<F> {
    Arc::new(alg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fp;
    use crate::presentation::parse_algebra;

    fn ex2<F: Field>() -> AlgebraRef<F> {
        let text = format!(
            "field: {}\nvertices: 1 2\narrow alpha: 1 -> 2\narrow beta: 1 -> 2\narrow gamma: 2 -> 1\n\
             rel: gamma.beta\nrel: alpha.gamma\nrel: beta.gamma\n",
            F::kind()
        );
        Arc::new(Algebra::new(parse_algebra(&text).unwrap()).unwrap())
    }

    #[test]
    fn projectives_of_example_two() {
        let alg = ex2::<Q>();
        let p1 = projective_rep(&alg, 0);
        assert_eq!(p1.dims(), &[2, 2]);
        assert!(p1.relations_hold());
        let soc = p1.socle();
        assert_eq!(soc.dims(), vec![1, 1]);
        assert_eq!(p1.top_elements().len(), 1);
        assert_eq!(projective_rep(&alg, 1).dims(), &[1, 1]);
    }

    #[test]
    fn hom_from_projective_counts_vertex_dimension() {
        let alg = ex2::<Q>();
        let p1 = projective_rep(&alg, 0);
        let p2 = projective_rep(&alg, 1);
        for b in [&p1, &p2] {
            assert_eq!(hom_dim(&p1, b), b.dim(0));
            assert_eq!(hom_dim(&p2, b), b.dim(1));
            for f in hom_basis(&p1, b) {
                assert!(f.is_homomorphism());
            }
        }
    }

    #[test]
    fn kernel_quotient_and_sum() {
        let alg = ex2::<Fp<3>>();
        let p1 = projective_rep(&alg, 0);
        let (rad, tops) = p1.radical_and_top();
        assert_eq!(rad.total_dim(), 3);
        assert_eq!(tops.len(), 1);
        let (top, proj) = p1.quotient(&rad).unwrap();
        assert_eq!(top.dims(), &[1, 0]);
        let (k, inc) = proj.kernel();
        assert_eq!(k.total_dim(), 3);
        assert!(proj.compose(&inc).is_zero());
        let sum = direct_sum(&alg, &[p1.clone(), top.clone()]);
        assert_eq!(sum.total_dim(), 5);
        let parts = decompose_modules(&sum, &DecomposeOptions::default()).unwrap();
        assert_eq!(parts.len(), 2);
        let (z, _) = ModuleMap::identity(&p1).kernel();
        assert!(z.is_zero());
    }

    #[test]
    fn isomorphism_survives_base_change() {
        let alg = ex2::<Q>();
        let p1 = projective_rep(&alg, 0);
        let s2 = Representation::simple(alg.clone(), 1);
        let m = direct_sum(&alg, &[p1.clone(), s2.clone()]);
        let change = vec![Matrix::from_i64(2, 2, &[2, 1, 1, 1]), Matrix::from_i64(3, 3, &[1, 2, 0, 0, 1, 1, 1, 0, 1])];
        let m2 = m.change_basis(&change);
        assert!(m2.relations_hold());
        assert!(is_isomorphic(&m, &m2, 1).is_iso());
        let other = direct_sum(&alg, &[p1, Representation::simple(alg.clone(), 0)]);
        assert!(!is_isomorphic(&m, &other, 1).is_iso());
    }

    #[test]
    fn module_file_round_trip() {
        let alg = ex2::<Q>();
        let p1 = projective_rep(&alg, 0);
        let file = p1.to_file();
        let json = serde_json::to_string(&file).unwrap();
        let back: ModuleFile = serde_json::from_str(&json).unwrap();
        let rep = Representation::from_file(alg.clone(), &back).unwrap();
        assert_eq!(rep.arrow_maps(), p1.arrow_maps());
        let mut bad = back.clone();
        bad.algebra_hash = "00".into();
        assert!(Representation::from_file(alg, &bad).is_err());
    }

    #[test]
    fn relation_violation_is_detected() {
        let alg = ex2::<Q>();
        let one = Matrix::from_i64(1, 1, &[1]);
        let err = Representation::new(alg, vec![1, 1], vec![one.clone(), one.clone(), one]).unwrap_err();
        assert!(matches!(err, ModuleError::RelationViolated(_)));
    }
}
