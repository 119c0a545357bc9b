//! Graphviz rendering of hypergraphs with interfaces.

use std::fmt::Write;

use diaconf::GraphWithInterface;

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' | '\\' => {
                out.push('\\');
                out.push(c);
            }
            '\n' => out.push_str("\\n"),
            _ => out.push(c),
        }
    }
    out.push('"');
    out
}

/// Nodes are points, hyperedges are boxes, tentacles are numbered arrows.
/// Interface positions appear as node labels.
pub fn render(name: &str, g: &GraphWithInterface) -> String {
    let graph = g.graph();
    let mut ports: Vec<Vec<usize>> = vec![Vec::new(); graph.node_count()];
    for (i, &v) in g.interface_nodes().iter().enumerate() {
        ports[v].push(i);
    }
    let mut s = String::new();
    writeln!(s, "digraph {} {{", quote(name)).unwrap();
    writeln!(s, "  rankdir=LR;").unwrap();
    for v in graph.nodes() {
        let label = ports[v].iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",");
        writeln!(s, "  n{v} [shape=circle, width=0.15, label={}];", quote(&label)).unwrap();
    }
    for (id, e) in graph.edges().iter().enumerate() {
        writeln!(s, "  e{id} [shape=box, label={}];", quote(&e.label)).unwrap();
        for (k, &src) in e.sources.iter().enumerate() {
            writeln!(s, "  n{src} -> e{id} [label=\"{k}\"];").unwrap();
        }
        for (k, &tgt) in e.targets.iter().enumerate() {
            writeln!(s, "  e{id} -> n{tgt} [label=\"{k}\"];").unwrap();
        }
    }
    s.push_str("}\n");
    s
}
