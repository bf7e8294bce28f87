use std::collections::BTreeMap;
use std::fmt::Write;
use std::path::Path;

use finitude::extend::{builtin_presentation, example7_corpus_seeds, map_to_simple, one_point_extend, ExtensionSpec};
use finitude::field::Field;
use finitude::finiteness::{
    closure_corpus, default_lambdas, is_left_approximation, is_right_approximation, minimality_check, refute_left_bounded,
    scan_condition2, search_left_approximation, string_band_corpus, validate_criterion_input,
};
use finitude::homalg::{findim_probe, syzygy, SyzygyGraph, DEFAULT_CUTOFF};
use finitude::presentation::{Algebra, AlgebraRef, Presentation};
use finitude::render::{dims_dot, graphspec_dot};
use finitude::repmod::{combine_maps, hom_basis, projective_rep, Element, Representation};
use finitude::strings::{enumerate_bands, enumerate_strings};
use serde_json::{json, Value};

use crate::input::{build_algebra, load_criterion, load_module, load_presentation, vertex, CliError, LoadedModule};
use crate::{AlgebraCmd, ApproxCmd, Cli, Command, CriterionCmd, FindimCmd, GlobalOpts, ModuleArgs, ModuleCmd, StringsCmd};

pub struct Outcome {
    pub command: String,
    pub parameters: BTreeMap<String, Value>,
    pub algebra_hash: Option<String>,
    pub pass: bool,
    pub text: String,
    pub dot: Option<String>,
    pub results: Value,
}

impl Outcome {
    pub fn new(command: &str, pass: bool, text: String, results: Value) -> Self {
        Outcome { command: command.into(), parameters: BTreeMap::new(), algebra_hash: None, pass, text, dot: None, results }
    }
}

pub const DEFAULT_MAX_LEN: usize = 8;
pub const DEFAULT_DIM_BOUND: usize = 12;
pub const DEFAULT_REFUTE_DIM: usize = 8;
pub const DEFAULT_N_MAX: usize = 9;

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

pub fn base_parameters(o: &GlobalOpts) -> BTreeMap<String, Value> {
    let mut p = BTreeMap::new();
    if let Some(f) = o.field {
        p.insert("field".into(), json!(f.to_string()));
    }
    for (k, v) in [("max_len", o.max_len), ("dim_bound", o.dim_bound), ("cutoff", o.cutoff), ("n_max", o.n_max)] {
        if let Some(v) = v {
            p.insert(k.into(), json!(v));
        }
    }
    p.insert("seed".into(), json!(o.seed));
    p
}

fn command_parts(cmd: &Command) -> (&'static str, &str) {
    match cmd {
        Command::Algebra { action } => match action {
            AlgebraCmd::Validate { algebra } => ("algebra validate", algebra),
            AlgebraCmd::Basis { algebra } => ("algebra basis", algebra),
            AlgebraCmd::Classify { algebra } => ("algebra classify", algebra),
        },
        Command::Projectives { algebra } => ("projectives", algebra),
        Command::Module { action } => match action {
            ModuleCmd::Graph { algebra, .. } => ("module graph", algebra),
            ModuleCmd::Syzygy { algebra, .. } => ("module syzygy", algebra),
            ModuleCmd::Pdim { algebra, .. } => ("module pdim", algebra),
        },
        Command::Strings { action: StringsCmd::Enumerate { algebra, .. } } => ("strings enumerate", algebra),
        Command::Criterion3 { action } => match action {
            CriterionCmd::Validate { algebra, .. } => ("criterion3 validate", algebra),
            CriterionCmd::Scan { algebra, .. } => ("criterion3 scan", algebra),
            CriterionCmd::Refute { algebra, .. } => ("criterion3 refute", algebra),
        },
        Command::Approx { action } => match action {
            ApproxCmd::Right { algebra, .. } => ("approx right", algebra),
            ApproxCmd::Left { algebra, .. } => ("approx left", algebra),
            ApproxCmd::Minimal { algebra, .. } => ("approx minimal", algebra),
        },
        Command::Extend { algebra, .. } => ("extend", algebra),
        Command::Findim { action: FindimCmd::Probe { algebra } } => ("findim probe", algebra),
        Command::Reproduce { .. } => ("reproduce", ""),
    }
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    if let Command::Reproduce { example } = &cli.command {
        let mut out = crate::reproduce::run(*example, &cli.opts)?;
        out.parameters.extend(base_parameters(&cli.opts));
        return Ok(out);
    }
    let (name, source) = command_parts(&cli.command);
    let pres = load_presentation(source, cli.opts.field)?;
    let field = pres.field;
    let mut out = finitude::with_field!(
        field,
        F => run_with::<F>(&cli.command, &cli.opts, pres)?,
        return Err(CliError::Input(format!("unsupported field {field}")))
    );
    out.command = name.to_string();
    let mut params = base_parameters(&cli.opts);
    params.insert("algebra".into(), json!(source));
    params.insert("field".into(), json!(field.to_string()));
    params.append(&mut out.parameters);
    out.parameters = params;
    Ok(out)
}

fn dims_text<F: Field>(alg: &AlgebraRef<F>, dims: &[usize]) -> String {
    let parts: Vec<String> =
        dims.iter().enumerate().filter(|(_, &d)| d > 0).map(|(v, d)| format!("{}:{d}", alg.vertex_name(v))).collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" ")
    }
}

fn dims_json<F: Field>(alg: &AlgebraRef<F>, dims: &[usize]) -> Value {
    let map: BTreeMap<String, usize> = dims.iter().enumerate().map(|(v, &d)| (alg.vertex_name(v).to_string(), d)).collect();
    to_value(&map)
}

fn validate<F: Field>(pres: Presentation) -> Outcome {
    match Algebra::<F>::new(pres) {
        Ok(alg) => {
            let c = alg.classify();
            let text = format!(
                "valid: dimension {}, Loewy length {}, monomial {}, special biserial {}\n",
                alg.dim(),
                c.loewy_length,
                c.monomial,
                c.special_biserial
            );
            let results = json!({"valid": true, "dim": alg.dim(), "hash": alg.hash(), "classification": to_value(&c)});
            let mut o = Outcome::new("", true, text, results);
            o.algebra_hash = Some(alg.hash().to_string());
            o
        }
        Err(e) => Outcome::new("", false, format!("invalid: {e}\n"), json!({"valid": false, "error": e.to_string()})),
    }
}

fn run_with<F: Field>(cmd: &Command, o: &GlobalOpts, pres: Presentation) -> Result<Outcome, CliError> {
    if let Command::Algebra { action: AlgebraCmd::Validate { .. } } = cmd {
        return Ok(validate::<F>(pres));
    }
    let alg: AlgebraRef<F> = build_algebra(pres)?;
    let cutoff = o.cutoff.unwrap_or(DEFAULT_CUTOFF);
    let mut out = match cmd {
        Command::Algebra { action: AlgebraCmd::Basis { .. } } => basis(&alg),
        Command::Algebra { action: AlgebraCmd::Classify { .. } } => {
            let c = alg.classify();
            let text = format!("monomial {}\nspecial biserial {}\nLoewy length {}\n", c.monomial, c.special_biserial, c.loewy_length);
            Outcome::new("", true, text, to_value(&c))
        }
        Command::Projectives { .. } => projectives(&alg),
        Command::Module { action } => module(&alg, action, cutoff)?,
        Command::Strings { action: StringsCmd::Enumerate { bands, .. } } => strings(&alg, *bands, o)?,
        Command::Criterion3 { action } => criterion(&alg, action, o, cutoff)?,
        Command::Approx { action } => approx(&alg, action, o, cutoff)?,
        Command::Extend { spec, out, .. } => extend(&alg, spec, out.as_deref())?,
        Command::Findim { .. } => {
            let max_len = o.max_len.unwrap_or(DEFAULT_MAX_LEN);
            let r = findim_probe(&alg, max_len, cutoff).map_err(|e| CliError::Input(e.to_string()))?;
            let max = r.max_finite_pdim.map_or("none".to_string(), |m| m.to_string());
            let text = format!(
                "max finite pdim {max} (witness {}) over {} strings of length <= {max_len}, verified up to bound\n\
                 exact {}, infinite {}, at least {} (cutoff {cutoff})\n",
                r.witness.as_deref().unwrap_or("-"),
                r.entries.len(),
                r.exact,
                r.infinite,
                r.at_least
            );
            Outcome::new("", true, text, to_value(&r))
        }
        Command::Algebra { action: AlgebraCmd::Validate { .. } } | Command::Reproduce { .. } => unreachable!("handled earlier"),
    };
    out.algebra_hash = Some(alg.hash().to_string());
    Ok(out)
}

fn basis<F: Field>(alg: &AlgebraRef<F>) -> Outcome {
    let q = alg.quiver();
    let mut text = format!("dimension {}\n", alg.dim());
    let mut rows = Vec::new();
    for v in 0..alg.num_vertices() {
        let paths: Vec<String> = alg.basis_from(v).into_iter().map(|i| q.path_string(&alg.basis()[i])).collect();
        let _ = writeln!(text, "from {}: {}", alg.vertex_name(v), paths.join(", "));
        rows.push(json!({"vertex": alg.vertex_name(v), "paths": paths}));
    }
    Outcome::new("", true, text, json!({"dim": alg.dim(), "basis": rows}))
}

fn projectives<F: Field>(alg: &AlgebraRef<F>) -> Outcome {
    let mut text = String::new();
    let mut rows = Vec::new();
    for v in 0..alg.num_vertices() {
        let p = projective_rep(alg, v);
        let _ = writeln!(text, "P({}): dim {} [{}]", alg.vertex_name(v), p.total_dim(), dims_text(alg, p.dims()));
        rows.push(json!({"vertex": alg.vertex_name(v), "dim": p.total_dim(), "dims": dims_json(alg, p.dims())}));
    }
    Outcome::new("", true, text, json!({"projectives": rows}))
}

fn module_summary<F: Field>(m: &LoadedModule<F>) -> (String, Value) {
    let alg = m.rep.algebra();
    let top: Vec<usize> = {
        let rad = m.rep.radical().dims();
        m.rep.dims().iter().zip(&rad).map(|(d, r)| d - r).collect()
    };
    let soc = m.rep.socle().dims();
    let text = format!(
        "{}: dim {} [{}]\ntop [{}]\nsocle [{}]\n",
        m.name,
        m.rep.total_dim(),
        dims_text(alg, m.rep.dims()),
        dims_text(alg, &top),
        dims_text(alg, &soc)
    );
    let v = json!({"name": m.name, "dim": m.rep.total_dim(), "dims": dims_json(alg, m.rep.dims()), "top": dims_json(alg, &top), "socle": dims_json(alg, &soc)});
    (text, v)
}

fn module<F: Field>(alg: &AlgebraRef<F>, cmd: &ModuleCmd, cutoff: usize) -> Result<Outcome, CliError> {
    match cmd {
        ModuleCmd::Graph { module, .. } => {
            let m = load_module(alg, module)?;
            let (text, v) = module_summary(&m);
            let dot = match &m.graph {
                Some(g) => graphspec_dot(g),
                None => dims_dot(&m.rep),
            };
            let mut out = Outcome::new("", true, text, json!({"module": v, "dot": dot}));
            out.dot = Some(dot);
            out.parameters.insert("module".into(), json!(m.name));
            Ok(out)
        }
        ModuleCmd::Syzygy { module, k, .. } => {
            let m = load_module(alg, module)?;
            let omega = syzygy(&m.rep, *k);
            let mut graph = SyzygyGraph::new(alg);
            let ids = graph.add_module(&omega).map_err(|e| CliError::Input(e.to_string()))?;
            let mut text = format!("syzygy {k} of {}: dim {} [{}]\n", m.name, omega.total_dim(), dims_text(alg, omega.dims()));
            let mut summands = Vec::new();
            for id in ids {
                let c = graph.class(id);
                let _ = writeln!(text, "  {} dim {}", c.key, c.rep.total_dim());
                summands.push(json!({"class": c.key.to_string(), "dim": c.rep.total_dim(), "dims": dims_json(alg, c.rep.dims())}));
            }
            let mut out = Outcome::new("", true, text, json!({"k": k, "dim": omega.total_dim(), "summands": summands}));
            out.parameters.insert("module".into(), json!(m.name));
            out.parameters.insert("k".into(), json!(k));
            Ok(out)
        }
        ModuleCmd::Pdim { module, .. } => {
            let m = load_module(alg, module)?;
            let mut graph = SyzygyGraph::new(alg);
            let p = graph.pdim(&m.rep, cutoff).map_err(|e| CliError::Input(e.to_string()))?;
            let text = format!("pdim {} = {p}\n", m.name);
            let mut out = Outcome::new("", true, text, to_value(&p));
            out.parameters.insert("module".into(), json!(m.name));
            Ok(out)
        }
    }
}

fn require_biserial<F: Field>(alg: &AlgebraRef<F>, what: &str) -> Result<(), CliError> {
    if alg.is_special_biserial() {
        Ok(())
    } else {
        Err(CliError::Input(format!("{what} needs a special biserial algebra")))
    }
}

fn strings<F: Field>(alg: &AlgebraRef<F>, bands: bool, o: &GlobalOpts) -> Result<Outcome, CliError> {
    require_biserial(alg, "string enumeration")?;
    let q = alg.quiver();
    let max_len = o.max_len.unwrap_or(DEFAULT_MAX_LEN);
    let mut text = String::new();
    let mut words = Vec::new();
    for w in enumerate_strings(alg, max_len) {
        let dims = w.dim_vector(q);
        let _ = writeln!(text, "string {} [{}]", w.display(q), dims_text(alg, &dims));
        words.push(json!({"word": w.display(q), "dims": dims_json(alg, &dims)}));
    }
    let mut band_rows = Vec::new();
    if bands {
        for b in enumerate_bands(alg, max_len) {
            let dims = b.dim_vector(q);
            let _ = writeln!(text, "band {} [{}]", b.display(q), dims_text(alg, &dims));
            band_rows.push(json!({"word": b.display(q), "dims": dims_json(alg, &dims)}));
        }
    }
    Ok(Outcome::new("", true, text, json!({"max_len": max_len, "strings": words, "bands": band_rows})))
}

fn criterion<F: Field>(alg: &AlgebraRef<F>, cmd: &CriterionCmd, o: &GlobalOpts, cutoff: usize) -> Result<Outcome, CliError> {
    let args = match cmd {
        CriterionCmd::Validate { input, .. } | CriterionCmd::Scan { input, .. } | CriterionCmd::Refute { input, .. } => input,
    };
    let raw = load_criterion(args)?;
    let (inp, report) = validate_criterion_input(alg, &raw).map_err(|e| CliError::Input(e.to_string()))?;
    let mut params = BTreeMap::new();
    params.insert("p".into(), json!(raw.p));
    params.insert("q".into(), json!(raw.q));
    let mut out = match cmd {
        CriterionCmd::Validate { .. } => {
            let mut text = format!(
                "{}: r = {}, valleys {}, tops {}\n",
                if report.valid { "valid" } else { "invalid" },
                report.r,
                report.valleys.join(" "),
                report.tops.join(" ")
            );
            for d in &report.diagnostics {
                let _ = writeln!(text, "  {d}");
            }
            Outcome::new("", report.valid, text, to_value(&report))
        }
        _ if !report.valid => return Err(CliError::Failed(format!("criterion input invalid: {}", report.diagnostics.join("; ")))),
        CriterionCmd::Scan { .. } => {
            require_biserial(alg, "the condition scan")?;
            let max_len = o.max_len.unwrap_or(DEFAULT_MAX_LEN);
            let corpus = string_band_corpus(alg, max_len, &default_lambdas::<F>(), cutoff).map_err(|e| CliError::Input(e.to_string()))?;
            let scan = scan_condition2(&inp, &corpus);
            let mut text = format!(
                "{} modules of finite pdim checked, {} pass, {} excluded as infinite, {} undecided{}\ncorpus: {}\n",
                scan.checked,
                scan.passed,
                scan.excluded_infinite,
                scan.undecided.len(),
                if scan.vacuous { " (vacuous)" } else { "" },
                scan.corpus
            );
            for (m, parts) in &scan.failures {
                let _ = writeln!(text, "  fails {}: {m}", parts.join(" "));
            }
            if scan.all_pass {
                text.push_str("verified up to bound\n");
            }
            Outcome::new("", scan.all_pass, text, to_value(&scan))
        }
        CriterionCmd::Refute { .. } => {
            require_biserial(alg, "the refutation corpus")?;
            if F::elements().is_none() {
                return Err(CliError::Usage("refutation enumerates maps over a finite field; pass --field F2 (or another prime)".into()));
            }
            let dim_bound = o.dim_bound.unwrap_or(DEFAULT_REFUTE_DIM);
            let n_max = o.n_max.unwrap_or(DEFAULT_N_MAX);
            // A band of length L has dimension L, so this length covers every band within the bound.
            let max_len = o.max_len.unwrap_or(dim_bound);
            let corpus = string_band_corpus(alg, max_len, &default_lambdas::<F>(), cutoff).map_err(|e| CliError::Input(e.to_string()))?;
            let reps = corpus.finite_pdim_reps(dim_bound);
            let r = refute_left_bounded(alg, &inp, &reps, &corpus.description, dim_bound, n_max, cutoff)
                .map_err(|e| CliError::Input(e.to_string()))?;
            let verdict = if r.refuted {
                "refuted: no pair (A, f) factors every canonical map, verified up to bound"
            } else if r.degenerate {
                "degenerate: nothing to test within the bounds"
            } else {
                "not refuted: some pair (A, f) survives"
            };
            let mut text = format!(
                "{verdict}\n{} modules of dim <= {dim_bound}, {} maps from S_{}, n <= {n_max}, field {}\n",
                r.modules_checked, r.maps_checked, r.simple, r.field
            );
            for s in r.survivors.iter().take(10) {
                let _ = writeln!(text, "  survivor {} (dim {})", s.module, s.dim);
            }
            Outcome::new("", r.refuted, text, to_value(&r))
        }
    };
    out.parameters = params;
    Ok(out)
}

/// Finite-pdim corpus used by the approximation commands.
fn approx_corpus<F: Field>(
    alg: &AlgebraRef<F>,
    extra: &[(String, Representation<F>)],
    o: &GlobalOpts,
    cutoff: usize,
) -> Result<(Vec<(String, Representation<F>)>, String), CliError> {
    let dim_bound = o.dim_bound.unwrap_or(DEFAULT_DIM_BOUND);
    if alg.is_special_biserial() {
        let max_len = o.max_len.unwrap_or(DEFAULT_MAX_LEN);
        let corpus = string_band_corpus(alg, max_len, &default_lambdas::<F>(), cutoff).map_err(|e| CliError::Input(e.to_string()))?;
        let mut reps = corpus.finite_pdim_reps(dim_bound);
        reps.extend(extra.iter().cloned());
        return Ok((reps, format!("{}, finite pdim, dim <= {dim_bound}", corpus.description)));
    }
    let delta_hash = builtin_presentation("ex7-delta", F::kind()).ok().map(|p| p.hash());
    let mut seeds: Vec<(String, Representation<F>)> = Vec::new();
    let label = if delta_hash.as_deref() == Some(alg.hash()) {
        seeds = example7_corpus_seeds(alg).map_err(|e| CliError::Input(e.to_string()))?;
        "closure of the built-in seed classes"
    } else {
        for v in 0..alg.num_vertices() {
            seeds.push((format!("P({})", alg.vertex_name(v)), projective_rep(alg, v)));
            seeds.push((format!("S({})", alg.vertex_name(v)), Representation::simple(alg.clone(), v)));
        }
        "closure of projectives and simples"
    };
    seeds.extend(extra.iter().cloned());
    let corpus = closure_corpus(alg, &seeds, dim_bound, cutoff).map_err(|e| CliError::Input(e.to_string()))?;
    let reps = corpus.into_iter().map(|(n, r, _)| (n, r)).collect();
    Ok((reps, format!("{label} under syzygies and summands, finite pdim, dim <= {dim_bound}")))
}

fn tops_of_type<F: Field>(m: &LoadedModule<F>, v: usize) -> Vec<Vec<F>> {
    let tops: Vec<Element<F>> = m.tops.clone().unwrap_or_else(|| m.rep.top_elements());
    tops.into_iter().filter(|(w, _)| *w == v).map(|(_, x)| x).collect()
}

fn has_module(args: &ModuleArgs) -> bool {
    args.module.is_some()
        || args.string.is_some()
        || args.band.is_some()
        || args.graph.is_some()
        || args.projective.is_some()
        || args.simple.is_some()
}

fn approx_text(report: &finitude::ApproxReport) -> String {
    let mut text = format!(
        "{}: {} against {} corpus modules ({})\n",
        report.candidate,
        if report.passed { "passes, verified up to bound" } else { "fails" },
        report.checked,
        report.corpus
    );
    for f in &report.failures {
        let _ = writeln!(text, "  no factorization for {f}");
    }
    text
}

fn approx<F: Field>(alg: &AlgebraRef<F>, cmd: &ApproxCmd, o: &GlobalOpts, cutoff: usize) -> Result<Outcome, CliError> {
    let (module_args, vname) = match cmd {
        ApproxCmd::Right { module, vertex, .. } | ApproxCmd::Left { module, vertex, .. } | ApproxCmd::Minimal { module, vertex, .. } => {
            (module, vertex)
        }
    };
    let v = vertex(alg, vname)?;
    let mut params = BTreeMap::new();
    params.insert("vertex".into(), json!(vname));
    let mut out = match cmd {
        ApproxCmd::Right { .. } | ApproxCmd::Minimal { .. } => {
            let m = load_module(alg, module_args)?;
            params.insert("module".into(), json!(m.name));
            let tops = tops_of_type(&m, v);
            if tops.is_empty() {
                return Err(CliError::Input(format!("{} has no top element at vertex {vname}", m.name)));
            }
            let f = map_to_simple(&m.rep, v, &tops).map_err(|e| CliError::Input(e.to_string()))?;
            let (corpus, desc) = approx_corpus(alg, &[(m.name.clone(), m.rep.clone())], o, cutoff)?;
            let mut report = is_right_approximation(&f, &corpus, &desc);
            report.candidate = m.name.clone();
            let mut text = approx_text(&report);
            let mut pass = report.passed;
            if matches!(cmd, ApproxCmd::Minimal { .. }) && report.passed {
                let min = minimality_check(&f, &corpus, &desc).map_err(|e| CliError::Input(e.to_string()))?;
                let _ = writeln!(text, "right minimal {}, minimal {}", min.right_minimal, min.minimal);
                pass = min.minimal;
                report.minimality = Some(min);
            }
            Outcome::new("", pass, text, to_value(&report))
        }
        ApproxCmd::Left { .. } => {
            let s = Representation::simple(alg.clone(), v);
            if has_module(module_args) {
                let m = load_module(alg, module_args)?;
                params.insert("module".into(), json!(m.name));
                let basis = hom_basis(&s, &m.rep);
                if basis.is_empty() {
                    return Err(CliError::Input(format!("no nonzero map from S({vname}) to {}", m.name)));
                }
                let f = combine_maps(&basis, &vec![F::one(); basis.len()]);
                let (corpus, desc) = approx_corpus(alg, &[(m.name.clone(), m.rep.clone())], o, cutoff)?;
                let mut report = is_left_approximation(&f, &corpus, &desc);
                report.candidate = m.name.clone();
                Outcome::new("", report.passed, approx_text(&report), to_value(&report))
            } else {
                let (corpus, desc) = approx_corpus(alg, &[], o, cutoff)?;
                let bound = o.dim_bound.unwrap_or(DEFAULT_REFUTE_DIM);
                match search_left_approximation(alg, v, &corpus, &desc, bound) {
                    Some((_, report)) => {
                        let text = format!("found candidate of dim <= {bound}\n{}", approx_text(&report));
                        Outcome::new("", true, text, to_value(&report))
                    }
                    None => Outcome::new(
                        "",
                        false,
                        format!("no left approximation of S({vname}) among corpus modules of dim <= {bound}\n"),
                        json!({"found": false, "dim_bound": bound, "corpus": desc}),
                    ),
                }
            }
        }
    };
    out.parameters = params;
    Ok(out)
}

fn extend<F: Field>(alg: &AlgebraRef<F>, spec: &str, out_path: Option<&Path>) -> Result<Outcome, CliError> {
    let text = if spec.trim_start().starts_with("extend:") {
        spec.to_string()
    } else {
        std::fs::read_to_string(spec).map_err(|e| CliError::Input(format!("{spec}: {e}")))?
    };
    let spec = ExtensionSpec::parse(&text).map_err(|e| CliError::Input(e.to_string()))?;
    let ext = one_point_extend(alg, &spec).map_err(|e| CliError::Input(e.to_string()))?;
    let dsl = ext.algebra.presentation().to_dsl();
    if let Some(p) = out_path {
        std::fs::write(p, &dsl).map_err(|e| CliError::Input(format!("{}: {e}", p.display())))?;
    }
    let cert = &ext.certificate;
    let changed: Vec<String> = cert
        .blocks
        .iter()
        .filter(|b| b.before != b.after)
        .map(|b| format!("{} -> {}: {} became {}", b.source, b.target, b.before, b.after))
        .collect();
    let mut text = format!(
        "{dsl}\n# new projective dimension {}, old blocks preserved: {}\n",
        cert.new_projective_dim, cert.old_ideal_preserved
    );
    for c in &changed {
        let _ = writeln!(text, "# changed block {c}");
    }
    let results = json!({"presentation": dsl, "hash": ext.algebra.hash(), "certificate": to_value(cert)});
    Ok(Outcome::new("", cert.old_ideal_preserved, text, results))
}
