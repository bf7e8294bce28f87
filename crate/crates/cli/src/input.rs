//! Loading algebras, modules and criterion inputs from command-line arguments.

use std::path::Path;
use std::sync::Arc;

use finitude::extend::{builtin_presentation, BUILTIN_NAMES};
use finitude::field::{Field, FieldKind};
use finitude::finiteness::Criterion3Input;
use finitude::presentation::{parse_algebra, Algebra, AlgebraRef, Presentation};
use finitude::repmod::{projective_rep, Element, ModuleFile, Representation};
use finitude::strings::{band_rep, rep_from_graphspec, string_rep, BandWord, GraphSpec, StringWord};
use thiserror::Error;

use crate::{CriterionArgs, ModuleArgs};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Input(String),
    /// A check ran to completion and failed.
    #[error("{0}")]
    Failed(String),
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// A built-in name or a presentation file; `--field` overrides the file's field line.
pub fn load_presentation(source: &str, field: Option<FieldKind>) -> Result<Presentation, CliError> {
    if BUILTIN_NAMES.contains(&source) {
        return builtin_presentation(source, field.unwrap_or(FieldKind::Rational)).map_err(|e| CliError::Input(e.to_string()));
    }
    let text = read(Path::new(source))?;
    let pres = parse_algebra(&text).map_err(|e| CliError::Input(format!("{source}: {e}")))?;
    Ok(match field {
        Some(f) => pres.with_field(f),
        None => pres,
    })
}

pub fn build_algebra<F: Field>(pres: Presentation) -> Result<AlgebraRef<F>, CliError> {
    Algebra::new(pres).map(Arc::new).map_err(|e| CliError::Input(e.to_string()))
}

pub fn vertex<F: Field>(alg: &AlgebraRef<F>, name: &str) -> Result<usize, CliError> {
    alg.quiver().vertex(name).ok_or_else(|| CliError::Input(format!("unknown vertex `{name}`")))
}

pub struct LoadedModule<F: Field> {
    pub name: String,
    pub rep: Representation<F>,
    pub graph: Option<GraphSpec>,
    /// Named top elements when the module came with a presentation by tops.
    pub tops: Option<Vec<Element<F>>>,
}

pub fn load_module<F: Field>(alg: &AlgebraRef<F>, args: &ModuleArgs) -> Result<LoadedModule<F>, CliError> {
    let given = [args.module.is_some(), args.string.is_some(), args.band.is_some(), args.graph.is_some(), args.projective.is_some(), args.simple.is_some()]
        .iter()
        .filter(|&&b| b)
        .count();
    if given != 1 {
        return Err(CliError::Usage(
            "give exactly one of --module, --string, --band, --graph, --projective, --simple".into(),
        ));
    }
    let q = alg.quiver();
    let bad = |e: String| CliError::Input(e);
    if let Some(path) = &args.module {
        let file: ModuleFile = serde_json::from_str(&read(path)?).map_err(|e| bad(format!("{}: {e}", path.display())))?;
        let rep = Representation::from_file(alg.clone(), &file).map_err(|e| bad(e.to_string()))?;
        let name = file.name.clone().unwrap_or_else(|| path.display().to_string());
        return Ok(LoadedModule { name, rep, graph: None, tops: None });
    }
    if let Some(text) = &args.string {
        let w = StringWord::parse(q, text).map_err(|e| bad(e.to_string()))?;
        let rep = string_rep(alg, &w).map_err(|e| bad(e.to_string()))?;
        let graph = finitude::strings::graphspec_of_string(q, &w);
        return Ok(LoadedModule { name: w.display(q), rep, graph: Some(graph), tops: None });
    }
    if let Some(text) = &args.band {
        let w = StringWord::parse(q, text).map_err(|e| bad(e.to_string()))?;
        let band = BandWord::new(alg, w).map_err(|e| bad(e.to_string()))?;
        let lambda = F::parse(&args.lambda).ok_or_else(|| bad(format!("bad band parameter `{}`", args.lambda)))?;
        let rep = band_rep(alg, &band, &lambda).map_err(|e| bad(e.to_string()))?;
        return Ok(LoadedModule { name: format!("band[{}; {}]", band.display(q), lambda), rep, graph: None, tops: None });
    }
    if let Some(path) = &args.graph {
        let spec: GraphSpec = serde_json::from_str(&read(path)?).map_err(|e| bad(format!("{}: {e}", path.display())))?;
        let m = rep_from_graphspec(alg, &spec).map_err(|e| bad(e.to_string()))?;
        let tops = m.tops.iter().map(|(_, e)| e.clone()).collect();
        return Ok(LoadedModule { name: path.display().to_string(), rep: m.rep, graph: Some(spec), tops: Some(tops) });
    }
    if let Some(v) = &args.projective {
        let rep = projective_rep(alg, vertex(alg, v)?);
        return Ok(LoadedModule { name: format!("P({v})"), rep, graph: None, tops: None });
    }
    let v = args.simple.as_deref().expect("one source given");
    let rep = Representation::simple(alg.clone(), vertex(alg, v)?);
    let mut spec = GraphSpec::default();
    spec.top("t", v);
    Ok(LoadedModule { name: format!("S({v})"), rep, graph: Some(spec), tops: None })
}

pub fn load_criterion(args: &CriterionArgs) -> Result<Criterion3Input, CliError> {
    if let Some(path) = &args.input {
        if !args.p.is_empty() || !args.q.is_empty() {
            return Err(CliError::Usage("--input excludes --p and --q".into()));
        }
        return serde_json::from_str(&read(path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())));
    }
    if args.p.is_empty() || args.q.is_empty() {
        return Err(CliError::Usage("criterion input needs --p and --q, or --input".into()));
    }
    Ok(Criterion3Input { p: args.p.clone(), q: args.q.clone() })
}
