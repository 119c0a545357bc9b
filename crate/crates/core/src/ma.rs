//! Monogamous acyclic hypergraphs, convex matches, boundary complements and
//! convex rewriting.

use std::sync::Arc;

use crate::category::{pushout_complements, Complement};
use crate::error::Error;
use crate::frobenius::Cospan;
use crate::hypergraph::{GraphWithInterface, Homomorphism, Hypergraph, NodeId};
use crate::rewrite::{interface_factorings, RewriteRule, RewriteStep, RewritingSystem};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaAnalysis {
    pub inputs: Vec<NodeId>,
    pub outputs: Vec<NodeId>,
    pub acyclic: bool,
    pub monogamous: bool,
}

impl MaAnalysis {
    pub fn is_ma(&self) -> bool {
        self.acyclic && self.monogamous
    }
}

pub fn analyze_ma(g: &Hypergraph) -> MaAnalysis {
    let mut indeg = vec![0usize; g.node_count()];
    let mut outdeg = vec![0usize; g.node_count()];
    for e in g.edges() {
        for &t in &e.targets {
            indeg[t] += 1;
        }
        for &s in &e.sources {
            outdeg[s] += 1;
        }
    }
    MaAnalysis {
        inputs: g.nodes().filter(|&v| indeg[v] == 0).collect(),
        outputs: g.nodes().filter(|&v| outdeg[v] == 0).collect(),
        acyclic: is_acyclic(g),
        monogamous: g.nodes().all(|v| indeg[v] <= 1 && outdeg[v] <= 1),
    }
}

/// No directed path of edges returns to its first edge.
fn is_acyclic(g: &Hypergraph) -> bool {
    // Kahn's algorithm on edges: e precedes f when a target of e is a source of f
    let n = g.edge_count();
    let mut consumers: Vec<Vec<usize>> = vec![Vec::new(); g.node_count()];
    for (id, e) in g.edges().iter().enumerate() {
        for &s in &e.sources {
            consumers[s].push(id);
        }
    }
    let succ: Vec<Vec<usize>> = g
        .edges()
        .iter()
        .map(|e| {
            let mut v: Vec<usize> = e.targets.iter().flat_map(|&t| consumers[t].iter().copied()).collect();
            v.sort_unstable();
            v.dedup();
            v
        })
        .collect();
    let mut indeg = vec![0usize; n];
    for s in &succ {
        for &f in s {
            indeg[f] += 1;
        }
    }
    let mut stack: Vec<usize> = (0..n).filter(|&e| indeg[e] == 0).collect();
    let mut seen = 0;
    while let Some(e) = stack.pop() {
        seen += 1;
        for &f in &succ[e] {
            indeg[f] -= 1;
            if indeg[f] == 0 {
                stack.push(f);
            }
        }
    }
    seen == n
}

/// `reach[u][v]`: a directed path with at least one edge leads from `u` to `v`.
pub fn reachability(g: &Hypergraph) -> Vec<Vec<bool>> {
    let n = g.node_count();
    let mut next: Vec<Vec<NodeId>> = vec![Vec::new(); n];
    for e in g.edges() {
        for &s in &e.sources {
            next[s].extend(e.targets.iter().copied());
        }
    }
    let mut reach = vec![vec![false; n]; n];
    for (u, row) in reach.iter_mut().enumerate() {
        let mut stack: Vec<NodeId> = next[u].clone();
        while let Some(v) = stack.pop() {
            if !std::mem::replace(&mut row[v], true) {
                stack.extend(next[v].iter().copied());
            }
        }
    }
    reach
}

/// Whether the cospan is monogamous acyclic: the apex is ma and the legs
/// are monos onto exactly the inputs and the outputs.
pub fn is_ma_cospan(c: &Cospan) -> bool {
    legs_are_boundary(c.apex(), c.left.node_map(), c.right.node_map())
}

fn legs_are_boundary(g: &Hypergraph, left: &[NodeId], right: &[NodeId]) -> bool {
    let a = analyze_ma(g);
    a.is_ma() && onto_exactly(left, &a.inputs) && onto_exactly(right, &a.outputs)
}

fn onto_exactly(leg: &[NodeId], set: &[NodeId]) -> bool {
    let mut v = leg.to_vec();
    v.sort_unstable();
    v.windows(2).all(|w| w[0] != w[1]) && v == set
}

/// For an ma graph whose interface lists the inputs and then the outputs,
/// the number of inputs.
pub fn ma_split(g: &GraphWithInterface) -> Option<usize> {
    let a = analyze_ma(g.graph());
    let j = g.interface_nodes();
    let n = a.inputs.len();
    if !a.is_ma() || j.len() != n + a.outputs.len() {
        return None;
    }
    (onto_exactly(&j[..n], &a.inputs) && onto_exactly(&j[n..], &a.outputs)).then_some(n)
}

/// `G ← inputs + outputs`, both sorted by node id.
pub fn canonical_interface(g: Arc<Hypergraph>) -> GraphWithInterface {
    let a = analyze_ma(&g);
    let nodes = a.inputs.iter().chain(&a.outputs).copied().collect();
    GraphWithInterface::from_nodes(g, nodes).expect("nodes exist")
}

/// Whether both sides of the rule are ma-cospans `i → L ← j`, `i → R ← j`.
pub fn is_ma_rule(r: &RewriteRule) -> bool {
    let Some((i, _)) = r.boundary() else {
        return false;
    };
    [r.left(), r.right()].iter().all(|leg| {
        let (a, b) = leg.node_map().split_at(i);
        legs_are_boundary(leg.target(), a, b)
    })
}

/// Mono, and every directed path between two image nodes stays in the image.
pub fn is_convex_match(m: &Homomorphism) -> bool {
    if !m.is_mono() {
        return false;
    }
    let g = m.target();
    let in_n = m.image_nodes();
    let in_e = m.image_edges();
    let reach = reachability(g);
    let from_image = |v: NodeId| g.nodes().any(|u| in_n[u] && (u == v || reach[u][v]));
    let to_image = |v: NodeId| g.nodes().any(|u| in_n[u] && (u == v || reach[v][u]));
    g.edges().iter().enumerate().all(|(id, e)| {
        in_e[id] || !(e.sources.iter().any(|&s| from_image(s)) && e.targets.iter().any(|&t| to_image(t)))
    })
}

/// The pushout complement of a left-linear ma rule at a mono match whose
/// context is again an ma-cospan `j + n → C ← m + i`.
pub fn boundary_complement(rule: &RewriteRule, f: &Homomorphism, g: &GraphWithInterface) -> Option<(Complement, Homomorphism)> {
    let (i, _) = rule.boundary()?;
    let n = ma_split(g)?;
    if !f.is_mono() || !rule.is_left_linear() {
        return None;
    }
    let comps = pushout_complements(rule.left(), f).ok()?;
    let mut found = None;
    for c in comps {
        if !c.k_to_c.is_mono() {
            continue;
        }
        for d in interface_factorings(g, &c.c_to_g) {
            let (c1, c2) = c.k_to_c.node_map().split_at(i);
            let (d1, d2) = d.node_map().split_at(n);
            let left: Vec<NodeId> = c2.iter().chain(d1).copied().collect();
            let right: Vec<NodeId> = d2.iter().chain(c1).copied().collect();
            if legs_are_boundary(c.context(), &left, &right) {
                assert!(found.is_none(), "two boundary complements");
                found = Some((c.clone(), d));
            }
        }
    }
    found
}

/// A convex DPO step: the match must be convex and the boundary complement
/// must exist.
pub fn convex_step(
    _system: &RewritingSystem,
    rule: &RewriteRule,
    matching: &Homomorphism,
    g: &GraphWithInterface,
) -> Result<RewriteStep, Error> {
    if ma_split(g).is_none() {
        return Err(Error::Precondition("graph is not ma with its boundary as interface".into()));
    }
    if !is_convex_match(matching) {
        return Err(Error::NonConvexMatch);
    }
    let (comp, d) = boundary_complement(rule, matching, g).ok_or(Error::NoBoundaryComplement)?;
    let step = RewriteStep::build(rule, g, matching.clone(), comp, d)?;
    debug_assert!(ma_split(&step.result).is_some());
    Ok(step)
}

/// Left-linear ma rules whose left sides connect every input to every output.
pub fn is_left_connected(system: &RewritingSystem) -> bool {
    left_connected_failure(system).is_none()
}

pub(crate) fn left_connected_failure(system: &RewritingSystem) -> Option<String> {
    for r in system.rules() {
        if !r.is_left_linear() || !is_ma_rule(r) {
            return Some(format!("rule `{}` is not a left-linear ma rule", r.name()));
        }
        let (i, _) = r.boundary().unwrap();
        let (ins, outs) = r.left().node_map().split_at(i);
        let reach = reachability(r.lhs());
        for &x in ins {
            for &y in outs {
                if x != y && !reach[x][y] {
                    return Some(format!("in `{}`, an input does not reach an output", r.name()));
                }
            }
        }
    }
    None
}
