//! Σ-labelled directed hypergraphs with ordered tentacles, homomorphisms
//! between them, and graphs with a (discrete) interface.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::Error;

pub type NodeId = usize;
pub type EdgeId = usize;
pub type Label = Arc<str>;

/// Labels of the formal path generators. They cannot collide with user
/// generator names, which the term grammar restricts to identifiers.
pub const PATH_JOIN: &str = "%join";
pub const PATH_SPLIT: &str = "%split";
pub const PATH_LINK: &str = "%link";

pub fn is_path_label(label: &str) -> bool {
    matches!(label, PATH_JOIN | PATH_SPLIT | PATH_LINK)
}

fn path_label_type(label: &str) -> Option<(usize, usize)> {
    match label {
        PATH_JOIN => Some((2, 1)),
        PATH_SPLIT => Some((1, 2)),
        PATH_LINK => Some((1, 1)),
        _ => None,
    }
}

/// Generators with their arity and coarity.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    generators: BTreeMap<String, (usize, usize)>,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a generator. Fails if the name is already taken with another type.
    pub fn add(&mut self, name: &str, arity: usize, coarity: usize) -> Result<(), Error> {
        match self.generators.get(name) {
            Some(&t) if t != (arity, coarity) => Err(Error::SignatureMismatch {
                label: name.to_string(),
            }),
            Some(_) => Err(Error::DuplicateGenerator(name.to_string())),
            None => {
                self.generators.insert(name.to_string(), (arity, coarity));
                Ok(())
            }
        }
    }

    pub fn with(mut self, name: &str, arity: usize, coarity: usize) -> Self {
        self.add(name, arity, coarity).expect("duplicate generator");
        self
    }

    pub fn get(&self, name: &str) -> Option<(usize, usize)> {
        self.generators.get(name).copied()
    }

    pub fn generators(&self) -> impl Iterator<Item = (&str, (usize, usize))> {
        self.generators.iter().map(|(k, &v)| (k.as_str(), v))
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub label: Label,
    pub sources: Vec<NodeId>,
    pub targets: Vec<NodeId>,
}

impl Edge {
    pub fn new(label: &str, sources: Vec<NodeId>, targets: Vec<NodeId>) -> Self {
        Edge {
            label: Arc::from(label),
            sources,
            targets,
        }
    }

    /// Iterates over `(is_target, position, node)` for every tentacle.
    pub fn tentacles(&self) -> impl Iterator<Item = (bool, usize, NodeId)> + '_ {
        self.sources
            .iter()
            .enumerate()
            .map(|(i, &n)| (false, i, n))
            .chain(self.targets.iter().enumerate().map(|(i, &n)| (true, i, n)))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Hypergraph {
    nodes: usize,
    edges: Vec<Edge>,
    path_typed: bool,
}

impl Hypergraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_nodes(n: usize) -> Self {
        Hypergraph {
            nodes: n,
            ..Self::default()
        }
    }

    pub fn add_node(&mut self) -> NodeId {
        self.nodes += 1;
        self.nodes - 1
    }

    pub fn add_nodes(&mut self, n: usize) -> std::ops::Range<NodeId> {
        let start = self.nodes;
        self.nodes += n;
        start..self.nodes
    }

    pub fn add_edge(&mut self, label: &str, sources: Vec<NodeId>, targets: Vec<NodeId>) -> EdgeId {
        self.push_edge(Edge::new(label, sources, targets))
    }

    pub fn push_edge(&mut self, edge: Edge) -> EdgeId {
        if is_path_label(&edge.label) {
            self.path_typed = true;
        }
        self.edges.push(edge);
        self.edges.len() - 1
    }

    pub fn node_count(&self) -> usize {
        self.nodes
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Nodes plus edges, the measure used by size caps.
    pub fn size(&self) -> usize {
        self.nodes + self.edges.len()
    }

    pub fn nodes(&self) -> std::ops::Range<NodeId> {
        0..self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e]
    }

    pub fn is_discrete(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn is_path_typed(&self) -> bool {
        self.path_typed
    }

    pub fn set_path_typed(&mut self, flag: bool) {
        self.path_typed = flag;
    }

    pub fn in_degree(&self, v: NodeId) -> usize {
        self.edges
            .iter()
            .map(|e| e.targets.iter().filter(|&&t| t == v).count())
            .sum()
    }

    pub fn out_degree(&self, v: NodeId) -> usize {
        self.edges
            .iter()
            .map(|e| e.sources.iter().filter(|&&s| s == v).count())
            .sum()
    }

    /// For each node, the edges having it as a tentacle, as
    /// `(edge, is_target, position)`.
    pub fn incidence(&self) -> Vec<Vec<(EdgeId, bool, usize)>> {
        let mut inc = vec![Vec::new(); self.nodes];
        for (id, e) in self.edges.iter().enumerate() {
            for (is_tgt, pos, n) in e.tentacles() {
                if n < self.nodes {
                    inc[n].push((id, is_tgt, pos));
                }
            }
        }
        inc
    }

    /// Label-to-type table of this graph; fails when one label is used with
    /// two different types.
    pub fn label_types(&self) -> Result<BTreeMap<Label, (usize, usize)>, Error> {
        let mut out: BTreeMap<Label, (usize, usize)> = BTreeMap::new();
        for e in &self.edges {
            let t = (e.sources.len(), e.targets.len());
            if let Some(&old) = out.get(&e.label) {
                if old != t {
                    return Err(Error::SignatureMismatch {
                        label: e.label.to_string(),
                    });
                }
            } else {
                out.insert(e.label.clone(), t);
            }
        }
        Ok(out)
    }
}

impl fmt::Display for Hypergraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} nodes;", self.nodes)?;
        for e in &self.edges {
            write!(f, " {}{:?}->{:?}", e.label, e.sources, e.targets)?;
        }
        Ok(())
    }
}

/// The discrete hypergraph with `n` nodes.
pub fn discrete(n: usize) -> Hypergraph {
    Hypergraph::with_nodes(n)
}

/// A broken invariant found by [`validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    DanglingTentacle { edge: EdgeId, node: NodeId },
    UnknownLabel { edge: EdgeId, label: String },
    ArityMismatch { edge: EdgeId, expected: (usize, usize), found: (usize, usize) },
    PathLabelInPlainGraph { edge: EdgeId },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DanglingTentacle { edge, node } => {
                write!(f, "edge {edge} points at missing node {node}")
            }
            Violation::UnknownLabel { edge, label } => {
                write!(f, "edge {edge} has unknown label `{label}`")
            }
            Violation::ArityMismatch {
                edge,
                expected,
                found,
            } => write!(
                f,
                "edge {edge} has type {}->{} but its label is {}->{}",
                found.0, found.1, expected.0, expected.1
            ),
            Violation::PathLabelInPlainGraph { edge } => {
                write!(f, "edge {edge} carries a path label in a graph not typed over paths")
            }
        }
    }
}

pub fn validate(g: &Hypergraph, sig: &Signature) -> Vec<Violation> {
    let mut out = Vec::new();
    for (id, e) in g.edges.iter().enumerate() {
        for (_, _, n) in e.tentacles() {
            if n >= g.nodes {
                out.push(Violation::DanglingTentacle { edge: id, node: n });
            }
        }
        let found = (e.sources.len(), e.targets.len());
        let expected = match path_label_type(&e.label) {
            Some(t) => {
                if !g.path_typed {
                    out.push(Violation::PathLabelInPlainGraph { edge: id });
                }
                Some(t)
            }
            None => sig.get(&e.label),
        };
        match expected {
            None => out.push(Violation::UnknownLabel {
                edge: id,
                label: e.label.to_string(),
            }),
            Some(t) if t != found => out.push(Violation::ArityMismatch {
                edge: id,
                expected: t,
                found,
            }),
            _ => {}
        }
    }
    out
}

/// Disjoint union with its two injections.
pub fn coproduct(
    a: &Hypergraph,
    b: &Hypergraph,
) -> Result<(Arc<Hypergraph>, Homomorphism, Homomorphism), Error> {
    let ta = a.label_types()?;
    for (l, t) in b.label_types()? {
        if let Some(&s) = ta.get(&l) {
            if s != t {
                return Err(Error::SignatureMismatch {
                    label: l.to_string(),
                });
            }
        }
    }
    let mut g = a.clone();
    let off = g.nodes;
    g.nodes += b.nodes;
    for e in &b.edges {
        g.push_edge(Edge {
            label: e.label.clone(),
            sources: e.sources.iter().map(|n| n + off).collect(),
            targets: e.targets.iter().map(|n| n + off).collect(),
        });
    }
    g.path_typed = a.path_typed || b.path_typed;
    let g = Arc::new(g);
    let ia = Homomorphism::new_unchecked(
        Arc::new(a.clone()),
        g.clone(),
        (0..a.nodes).collect(),
        (0..a.edges.len()).collect(),
    );
    let ib = Homomorphism::new_unchecked(
        Arc::new(b.clone()),
        g.clone(),
        (0..b.nodes).map(|n| n + off).collect(),
        (0..b.edges.len()).map(|e| e + a.edges.len()).collect(),
    );
    Ok((g, ia, ib))
}

/// A structure- and label-preserving map between hypergraphs.
#[derive(Clone, Debug)]
pub struct Homomorphism {
    source: Arc<Hypergraph>,
    target: Arc<Hypergraph>,
    nodes: Vec<NodeId>,
    edges: Vec<EdgeId>,
}

impl PartialEq for Homomorphism {
    fn eq(&self, other: &Self) -> bool {
        self.nodes == other.nodes
            && self.edges == other.edges
            && same_graph(&self.source, &other.source)
            && same_graph(&self.target, &other.target)
    }
}

impl Eq for Homomorphism {}

pub(crate) fn same_graph(a: &Arc<Hypergraph>, b: &Arc<Hypergraph>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl Homomorphism {
    pub fn new(
        source: Arc<Hypergraph>,
        target: Arc<Hypergraph>,
        nodes: Vec<NodeId>,
        edges: Vec<EdgeId>,
    ) -> Result<Self, Error> {
        let h = Homomorphism {
            source,
            target,
            nodes,
            edges,
        };
        h.check()?;
        Ok(h)
    }

    pub(crate) fn new_unchecked(
        source: Arc<Hypergraph>,
        target: Arc<Hypergraph>,
        nodes: Vec<NodeId>,
        edges: Vec<EdgeId>,
    ) -> Self {
        let h = Homomorphism {
            source,
            target,
            nodes,
            edges,
        };
        debug_assert!(h.check().is_ok(), "{:?}", h.check());
        h
    }

    fn check(&self) -> Result<(), Error> {
        let bad = |msg: String| Err(Error::InvalidHomomorphism(msg));
        if self.nodes.len() != self.source.node_count() || self.edges.len() != self.source.edge_count() {
            return bad("map sizes differ from the source graph".into());
        }
        if let Some(n) = self.nodes.iter().find(|&&n| n >= self.target.node_count()) {
            return bad(format!("node image {n} out of range"));
        }
        for (id, e) in self.source.edges().iter().enumerate() {
            let Some(t) = self.target.edges().get(self.edges[id]) else {
                return bad(format!("edge image {} out of range", self.edges[id]));
            };
            if t.label != e.label {
                return bad(format!("edge {id} label {} maps to {}", e.label, t.label));
            }
            let srcs: Vec<_> = e.sources.iter().map(|&n| self.nodes[n]).collect();
            let tgts: Vec<_> = e.targets.iter().map(|&n| self.nodes[n]).collect();
            if srcs != t.sources || tgts != t.targets {
                return bad(format!("edge {id} tentacles not preserved"));
            }
        }
        Ok(())
    }

    pub fn identity(g: Arc<Hypergraph>) -> Self {
        let nodes = g.nodes().collect();
        let edges = (0..g.edge_count()).collect();
        Homomorphism {
            source: g.clone(),
            target: g,
            nodes,
            edges,
        }
    }

    /// The unique map out of a discrete graph given by a node assignment.
    pub fn from_discrete(source: Arc<Hypergraph>, target: Arc<Hypergraph>, nodes: Vec<NodeId>) -> Result<Self, Error> {
        if !source.is_discrete() {
            return Err(Error::NonDiscreteInterface);
        }
        Self::new(source, target, nodes, vec![])
    }

    pub fn source(&self) -> &Arc<Hypergraph> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Hypergraph> {
        &self.target
    }

    pub fn node_map(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn edge_map(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn node(&self, n: NodeId) -> NodeId {
        self.nodes[n]
    }

    pub fn edge(&self, e: EdgeId) -> EdgeId {
        self.edges[e]
    }

    /// Diagrammatic composition `self ; next`.
    pub fn then(&self, next: &Homomorphism) -> Result<Homomorphism, Error> {
        if !same_graph(&self.target, &next.source) {
            return Err(Error::NotComposable);
        }
        Ok(self.then_unchecked(next))
    }

    pub(crate) fn then_unchecked(&self, next: &Homomorphism) -> Homomorphism {
        Homomorphism {
            source: self.source.clone(),
            target: next.target.clone(),
            nodes: self.nodes.iter().map(|&n| next.nodes[n]).collect(),
            edges: self.edges.iter().map(|&e| next.edges[e]).collect(),
        }
    }

    pub(crate) fn resource(&self, source: Arc<Hypergraph>) -> Homomorphism {
        debug_assert!(*source == *self.source);
        Homomorphism {
            source,
            ..self.clone()
        }
    }

    pub fn is_node_injective(&self) -> bool {
        injective(&self.nodes, self.target.node_count())
    }

    pub fn is_edge_injective(&self) -> bool {
        injective(&self.edges, self.target.edge_count())
    }

    pub fn is_mono(&self) -> bool {
        self.is_node_injective() && self.is_edge_injective()
    }

    pub fn is_epi(&self) -> bool {
        surjective(&self.nodes, self.target.node_count()) && surjective(&self.edges, self.target.edge_count())
    }

    pub fn is_iso(&self) -> bool {
        self.is_mono() && self.is_epi()
    }

    /// Inverse of an isomorphism.
    pub fn inverse(&self) -> Option<Homomorphism> {
        if !self.is_iso() {
            return None;
        }
        let mut nodes = vec![0; self.nodes.len()];
        for (i, &n) in self.nodes.iter().enumerate() {
            nodes[n] = i;
        }
        let mut edges = vec![0; self.edges.len()];
        for (i, &e) in self.edges.iter().enumerate() {
            edges[e] = i;
        }
        Some(Homomorphism {
            source: self.target.clone(),
            target: self.source.clone(),
            nodes,
            edges,
        })
    }

    /// Membership table of the node image.
    pub fn image_nodes(&self) -> Vec<bool> {
        let mut v = vec![false; self.target.node_count()];
        for &n in &self.nodes {
            v[n] = true;
        }
        v
    }

    pub fn image_edges(&self) -> Vec<bool> {
        let mut v = vec![false; self.target.edge_count()];
        for &e in &self.edges {
            v[e] = true;
        }
        v
    }
}

fn injective(map: &[usize], range: usize) -> bool {
    let mut seen = vec![false; range];
    map.iter().all(|&x| !std::mem::replace(&mut seen[x], true))
}

fn surjective(map: &[usize], range: usize) -> bool {
    let mut seen = vec![false; range];
    for &x in map {
        seen[x] = true;
    }
    seen.into_iter().all(|b| b)
}

/// Copairing `[f, g]: A + B → C` out of a coproduct of discrete graphs.
pub fn copair_discrete(f: &Homomorphism, g: &Homomorphism) -> Result<Homomorphism, Error> {
    if !f.source.is_discrete() || !g.source.is_discrete() {
        return Err(Error::NonDiscreteInterface);
    }
    if !same_graph(&f.target, &g.target) {
        return Err(Error::NotComposable);
    }
    let nodes: Vec<_> = f.nodes.iter().chain(&g.nodes).copied().collect();
    Ok(Homomorphism {
        source: Arc::new(discrete(nodes.len())),
        target: f.target.clone(),
        nodes,
        edges: vec![],
    })
}

/// A hypergraph `G` together with a map from a discrete graph `J` into it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphWithInterface {
    interface: Homomorphism,
}

impl GraphWithInterface {
    pub fn new(interface: Homomorphism) -> Result<Self, Error> {
        if !interface.source.is_discrete() {
            return Err(Error::NonDiscreteInterface);
        }
        Ok(GraphWithInterface { interface })
    }

    /// Builds `G ← J` with `J = discrete(nodes.len())`.
    pub fn from_nodes(graph: Arc<Hypergraph>, nodes: Vec<NodeId>) -> Result<Self, Error> {
        let j = Arc::new(discrete(nodes.len()));
        Self::new(Homomorphism::from_discrete(j, graph, nodes)?)
    }

    /// `G ← 0`.
    pub fn bare(graph: Arc<Hypergraph>) -> Self {
        Self::from_nodes(graph, vec![]).expect("empty interface is valid")
    }

    pub fn graph(&self) -> &Arc<Hypergraph> {
        &self.interface.target
    }

    pub fn interface(&self) -> &Homomorphism {
        &self.interface
    }

    pub fn interface_size(&self) -> usize {
        self.interface.source.node_count()
    }

    pub fn interface_nodes(&self) -> &[NodeId] {
        &self.interface.nodes
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain() -> Hypergraph {
        let mut g = Hypergraph::with_nodes(3);
        g.add_edge("f", vec![0], vec![1]);
        g.add_edge("g", vec![1], vec![2]);
        g
    }

    fn sig() -> Signature {
        Signature::new().with("f", 1, 1).with("g", 1, 1)
    }

    #[test]
    fn discrete_sizes() {
        assert_eq!(discrete(0), Hypergraph::new());
        assert_eq!(discrete(3).node_count(), 3);
        let (g, _, _) = coproduct(&discrete(2), &discrete(3)).unwrap();
        assert_eq!(*g, discrete(5));
    }

    #[test]
    fn validate_reports_each_problem() {
        assert!(validate(&chain(), &sig()).is_empty());
        let mut g = chain();
        g.add_edge("f", vec![7], vec![0]);
        assert_eq!(validate(&g, &sig()).len(), 1);
        let mut g = chain();
        g.add_edge("f", vec![0, 1], vec![2]);
        assert!(matches!(validate(&g, &sig())[..], [Violation::ArityMismatch { .. }]));
        let mut g = chain();
        g.push_edge(Edge::new(PATH_LINK, vec![0], vec![2]));
        assert!(validate(&g, &sig()).is_empty());
        g.set_path_typed(false);
        assert_eq!(validate(&g, &sig()), vec![Violation::PathLabelInPlainGraph { edge: 2 }]);
    }

    #[test]
    fn coproduct_rejects_clashing_labels() {
        let mut a = Hypergraph::with_nodes(1);
        a.add_edge("f", vec![0], vec![]);
        assert!(coproduct(&a, &chain()).is_err());
        let (g, ia, ib) = coproduct(&chain(), &Hypergraph::new()).unwrap();
        assert_eq!(*g, chain());
        assert!(ia.is_iso() && ib.is_mono());
    }

    #[test]
    fn homomorphism_checks_tentacles() {
        let g = Arc::new(chain());
        let mut loop_ = Hypergraph::with_nodes(1);
        loop_.add_edge("f", vec![0], vec![0]);
        let l = Arc::new(loop_);
        assert!(Homomorphism::new(g.clone(), l.clone(), vec![0, 0, 0], vec![0, 0]).is_err());
        let mut two = Hypergraph::with_nodes(1);
        two.add_edge("f", vec![0], vec![0]);
        two.add_edge("g", vec![0], vec![0]);
        let h = Homomorphism::new(g.clone(), Arc::new(two), vec![0, 0, 0], vec![0, 1]).unwrap();
        assert!(!h.is_mono() && h.is_epi());
        let id = Homomorphism::identity(g);
        assert!(id.is_iso());
        assert_eq!(id.then(&h).unwrap(), h);
    }
}
