//! Human-readable and Graphviz renderings of reports.

use std::fmt::Write;

use hammap::crosscheck::CrosscheckReport;
use hammap::disc_grow::GrowRule;
use hammap::map::{EdgeKey, PolyhedralMap};
use hammap::report::{SearchReport, Status, Witness};

fn status_name(s: Status) -> &'static str {
    match s {
        Status::Found => "found",
        Status::NotFound => "not found",
        Status::Obstructed => "obstructed",
        Status::Stuck => "stuck",
        Status::Timeout => "timeout",
    }
}

fn labels(map: &PolyhedralMap, vs: &[usize]) -> String {
    vs.iter()
        .map(|&v| map.label(v))
        .collect::<Vec<_>>()
        .join(" ")
}

fn face_name(map: &PolyhedralMap, f: usize) -> String {
    format!("f{f}[{}]", labels(map, map.face(f).vertices()))
}

pub fn human_report(map: &PolyhedralMap, r: &SearchReport) -> String {
    let mut out = String::new();
    writeln!(out, "strategy: {:?}", r.strategy).unwrap();
    writeln!(out, "status: {}", status_name(r.status)).unwrap();
    if let Some(o) = &r.obstruction {
        writeln!(out, "obstruction: {o:?}").unwrap();
    }
    if let Some(w) = &r.witness {
        if let Some(t) = &w.tree {
            let edges: Vec<String> = t
                .edges()
                .iter()
                .map(|e| format!("f{}-f{}", e.lo, e.hi))
                .collect();
            writeln!(out, "tree: k = {}, edges {}", t.len(), edges.join(" ")).unwrap();
        }
        let faces = w
            .disc
            .as_ref()
            .map(|d| &d.faces)
            .or(w.cert.as_ref().map(|c| &c.disc_faces));
        if let Some(faces) = faces {
            let names: Vec<String> = faces.iter().map(|&f| face_name(map, f)).collect();
            writeln!(out, "disc: {}", names.join(" ")).unwrap();
        }
        if let Some(c) = &w.cycle {
            writeln!(out, "cycle: {}", labels(map, &c.order)).unwrap();
        }
    }
    for s in &r.steps {
        let rule = match s.rule {
            GrowRule::A => "rule a",
            GrowRule::B => "rule b",
            GrowRule::Search => "search",
        };
        write!(out, "step {}: {} ({rule}", s.step, face_name(map, s.face)).unwrap();
        if let Some(v) = s.target {
            write!(out, ", target {}", map.label(v)).unwrap();
        }
        if !s.escape_path.is_empty() {
            let path: Vec<String> = s.escape_path.iter().map(|f| format!("f{f}")).collect();
            write!(out, ", escape {}", path.join(" ")).unwrap();
        }
        writeln!(out, "), covered {}", s.covered).unwrap();
    }
    if let (Some(h), Some(c)) = (r.hamiltonian_count, r.contractible_count) {
        writeln!(out, "hamiltonian cycles: {h}, contractible: {c}").unwrap();
    }
    for a in &r.anomalies {
        writeln!(out, "anomaly: {a}").unwrap();
    }
    writeln!(
        out,
        "nodes: {}, time: {:.1} ms",
        r.stats.nodes, r.stats.wall_time_ms
    )
    .unwrap();
    out
}

pub fn human_crosscheck(name: &str, r: &CrosscheckReport) -> String {
    let mut out = format!(
        "{name}: {:?} (search {}, grow {}, brute {}",
        r.verdict,
        status_name(r.search.status),
        r.grow.as_ref().map_or("n/a", |g| status_name(g.status)),
        status_name(r.brute.status),
    );
    if let (Some(h), Some(c)) = (r.brute.hamiltonian_count, r.brute.contractible_count) {
        write!(out, "; {h} hamiltonian, {c} contractible").unwrap();
    }
    out.push_str(")\n");
    for i in &r.issues {
        writeln!(out, "  issue: {i}").unwrap();
    }
    out
}

/// The dual map with tree edges, or disc faces when there is no tree, in bold.
pub fn dot(map: &PolyhedralMap, w: Option<&Witness>) -> String {
    let tree_edges = w
        .and_then(|w| w.tree.as_ref())
        .map(|t| t.edges().clone())
        .unwrap_or_default();
    let disc = w
        .and_then(|w| {
            w.disc
                .as_ref()
                .map(|d| d.faces.clone())
                .or(w.cert.as_ref().map(|c| c.disc_faces.clone()))
        })
        .unwrap_or_default();
    let mut out = String::from("graph dual {\n  node [shape=box];\n");
    for f in 0..map.num_faces() {
        let style = if disc.contains(&f) {
            ", style=bold, color=red"
        } else {
            ""
        };
        writeln!(
            out,
            "  f{f} [label=\"{}\"{style}];",
            labels(map, map.face(f).vertices())
        )
        .unwrap();
    }
    for e in map.edges() {
        let [a, b] = map.edge_faces(*e).unwrap();
        let style = if tree_edges.contains(&EdgeKey::new(a, b)) {
            " [style=bold, color=red]"
        } else {
            ""
        };
        writeln!(out, "  f{a} -- f{b}{style};").unwrap();
    }
    out.push_str("}\n");
    out
}
