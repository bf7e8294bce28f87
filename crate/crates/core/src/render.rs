//! DOT output of module graphs.

use std::fmt::Write;

use crate::field::Field;
use crate::presentation::Quiver;
use crate::repmod::Representation;
use crate::strings::{graphspec_of_string, GraphSpec, StringWord};

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Tops on one rank, valley slots below, one edge per path, dependency groups as dotted clusters.
pub fn graphspec_dot(spec: &GraphSpec) -> String {
    let mut out = String::from("digraph module {\n  rankdir=TB;\n  node [shape=plaintext];\n");
    out.push_str("  { rank=same;");
    for t in &spec.tops {
        let _ = write!(out, " {}", quote(&format!("top:{}", t.name)));
    }
    out.push_str(" }\n");
    for t in &spec.tops {
        let _ = writeln!(out, "  {} [label={}];", quote(&format!("top:{}", t.name)), quote(&t.vertex));
    }
    let mut slots: Vec<&str> = Vec::new();
    for e in &spec.edges {
        if !slots.contains(&e.slot.as_str()) {
            slots.push(&e.slot);
        }
    }
    let in_group = |s: &str| spec.deps.iter().any(|g| g.iter().any(|x| x == s));
    for (k, group) in spec.deps.iter().enumerate() {
        let _ = writeln!(out, "  subgraph cluster_dep{k} {{\n    style=dotted;");
        for s in group {
            let _ = writeln!(out, "    {};", quote(&format!("slot:{s}")));
        }
        out.push_str("  }\n");
    }
    for s in &slots {
        let style = if in_group(s) { ", style=dotted" } else { "" };
        let _ = writeln!(out, "  {} [label={}{style}];", quote(&format!("slot:{s}")), quote(s));
    }
    for e in &spec.edges {
        let _ = writeln!(
            out,
            "  {} -> {} [label={}, arrowhead=none];",
            quote(&format!("top:{}", e.top)),
            quote(&format!("slot:{}", e.slot)),
            quote(&e.path)
        );
    }
    out.push_str("}\n");
    out
}

/// DOT for a string module, via its zigzag presentation.
pub fn string_dot(q: &Quiver, w: &StringWord) -> String {
    graphspec_dot(&graphspec_of_string(q, w))
}

/// Fallback for modules without a known graph: a single node listing the dimension vector.
pub fn dims_dot<F: Field>(rep: &Representation<F>) -> String {
    let alg = rep.algebra();
    let dims: Vec<String> = (0..alg.num_vertices())
        .filter(|&v| rep.dim(v) > 0)
        .map(|v| format!("{}:{}", alg.vertex_name(v), rep.dim(v)))
        .collect();
    let name = rep.name().unwrap_or("module");
    format!("digraph module {{\n  summary [shape=box, label={}];\n}}\n", quote(&format!("{name} dims {}", dims.join(" "))))
}

/// Count of (nodes, edges, dotted cluster members) in a DOT string produced here.
pub fn dot_counts(dot: &str) -> (usize, usize, usize) {
    let nodes = dot.lines().filter(|l| l.contains("[label=") && !l.contains("->")).count();
    let edges = dot.lines().filter(|l| l.contains("->")).count();
    let mut members = 0;
    let mut inside = false;
    for l in dot.lines() {
        let t = l.trim();
        if t.starts_with("subgraph cluster_dep") {
            inside = true;
        } else if inside && t == "}" {
            inside = false;
        } else if inside && t.ends_with(';') && !t.starts_with("style") {
            members += 1;
        }
    }
    (nodes, edges, members)
}
