//! Exact computations with finitely generated modules over finite-dimensional
//! quiver algebras `KQ/I`: bases, representations, string and band modules,
//! syzygies and projective dimension, approximation checks, and one-point extensions.

pub mod extend;
pub mod field;
pub mod finiteness;
pub mod homalg;
pub mod linalg;
pub mod presentation;
pub mod render;
pub mod repmod;
pub mod strings;

pub use extend::{builtin_algebra, builtin_presentation, one_point_extend, ExtendError, ExtensionSpec};
pub use field::{Field, FieldKind, Fp, Q};
pub use finiteness::{ApproxReport, Criterion3Input, FinitenessError, RefutationReport, ScanReport};
pub use homalg::{findim_probe, pdim, projective_cover, syzygy, FindimReport, PdimResult, SyzygyGraph};
pub use linalg::Matrix;
pub use presentation::{parse_algebra, Algebra, AlgebraRef, Path, Presentation, PresentationError, Quiver};
pub use repmod::{
    decompose_modules, direct_sum, hom_basis, is_isomorphic, projective_rep, IsoVerdict, ModuleError, ModuleFile,
    ModuleMap, Representation,
};
pub use strings::{band_rep, string_rep, BandWord, GraphSpec, StringError, StringWord};
