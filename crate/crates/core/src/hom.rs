//! Backtracking search for homomorphisms, isomorphism of graphs with
//! interface, and iso-invariant certificates.

use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::hypergraph::{EdgeId, GraphWithInterface, Homomorphism, Hypergraph, Label, NodeId};

/// Lookup tables over a host graph used by the matcher.
struct HostIndex {
    by_label: HashMap<Label, Vec<EdgeId>>,
    // (node, is_target, position) -> edges
    by_tentacle: HashMap<(NodeId, bool, usize), Vec<EdgeId>>,
}

impl HostIndex {
    fn new(g: &Hypergraph) -> Self {
        let mut by_label: HashMap<Label, Vec<EdgeId>> = HashMap::new();
        let mut by_tentacle: HashMap<_, Vec<EdgeId>> = HashMap::new();
        for (id, e) in g.edges().iter().enumerate() {
            by_label.entry(e.label.clone()).or_default().push(id);
            for (t, p, n) in e.tentacles() {
                by_tentacle.entry((n, t, p)).or_default().push(id);
            }
        }
        HostIndex { by_label, by_tentacle }
    }
}

/// A homomorphism search problem.
pub(crate) struct Search<'a> {
    pub pattern: &'a Hypergraph,
    pub host: &'a Hypergraph,
    pub injective: bool,
    /// Pre-assigned node images.
    pub fixed: Vec<Option<NodeId>>,
    /// Extra admissibility test for a node assignment.
    pub node_ok: Option<&'a dyn Fn(NodeId, NodeId) -> bool>,
}

impl<'a> Search<'a> {
    pub fn new(pattern: &'a Hypergraph, host: &'a Hypergraph, injective: bool) -> Self {
        Search {
            pattern,
            host,
            injective,
            fixed: vec![None; pattern.node_count()],
            node_ok: None,
        }
    }

    /// Calls `visit(node_map, edge_map)` on each homomorphism until it returns false.
    pub fn run(&self, visit: &mut dyn FnMut(&[NodeId], &[EdgeId]) -> bool) {
        let p = self.pattern;
        let idx = HostIndex::new(self.host);
        let mut st = State {
            nodes: vec![None; p.node_count()],
            edges: vec![usize::MAX; p.edge_count()],
            used_nodes: vec![false; self.host.node_count()],
            used_edges: vec![false; self.host.edge_count()],
        };
        for (pn, f) in self.fixed.iter().enumerate() {
            if let Some(hn) = *f {
                if let Some(prev) = st.nodes[pn] {
                    if prev != hn {
                        return;
                    }
                }
                if self.injective && st.used_nodes[hn] {
                    return;
                }
                if !self.ok(pn, hn) {
                    return;
                }
                st.nodes[pn] = Some(hn);
                st.used_nodes[hn] = true;
            }
        }
        let order = edge_order(p, &st.nodes);
        let mut touched = vec![false; p.node_count()];
        for e in p.edges() {
            for (_, _, n) in e.tentacles() {
                touched[n] = true;
            }
        }
        let free: Vec<NodeId> = p.nodes().filter(|&n| !touched[n] && st.nodes[n].is_none()).collect();
        self.place_edge(0, &order, &free, &idx, &mut st, visit);
    }

    fn ok(&self, pn: NodeId, hn: NodeId) -> bool {
        self.node_ok.map_or(true, |f| f(pn, hn))
    }

    fn place_edge(
        &self,
        k: usize,
        order: &[EdgeId],
        free: &[NodeId],
        idx: &HostIndex,
        st: &mut State,
        visit: &mut dyn FnMut(&[NodeId], &[EdgeId]) -> bool,
    ) -> bool {
        if k == order.len() {
            return self.place_free(0, free, st, visit);
        }
        let pe = order[k];
        let edge = self.pattern.edge(pe);
        let anchored = edge.tentacles().find_map(|(t, pos, n)| st.nodes[n].map(|h| (h, t, pos)));
        let empty = Vec::new();
        let cands = match anchored {
            Some(key) => idx.by_tentacle.get(&key).unwrap_or(&empty),
            None => idx.by_label.get(&edge.label).unwrap_or(&empty),
        };
        for &he in cands {
            if self.injective && st.used_edges[he] {
                continue;
            }
            let host_edge = self.host.edge(he);
            if host_edge.label != edge.label
                || host_edge.sources.len() != edge.sources.len()
                || host_edge.targets.len() != edge.targets.len()
            {
                continue;
            }
            let mut assigned: Vec<NodeId> = Vec::new();
            let mut good = true;
            let pairs = edge
                .sources
                .iter()
                .zip(&host_edge.sources)
                .chain(edge.targets.iter().zip(&host_edge.targets));
            for (&pn, &hn) in pairs {
                match st.nodes[pn] {
                    Some(x) if x == hn => {}
                    Some(_) => {
                        good = false;
                        break;
                    }
                    None => {
                        if (self.injective && st.used_nodes[hn]) || !self.ok(pn, hn) {
                            good = false;
                            break;
                        }
                        st.nodes[pn] = Some(hn);
                        st.used_nodes[hn] = true;
                        assigned.push(pn);
                    }
                }
            }
            let mut cont = true;
            if good {
                st.edges[pe] = he;
                st.used_edges[he] = true;
                cont = self.place_edge(k + 1, order, free, idx, st, visit);
                st.used_edges[he] = false;
                st.edges[pe] = usize::MAX;
            }
            for pn in assigned {
                let hn = st.nodes[pn].take().unwrap();
                st.used_nodes[hn] = false;
            }
            if !cont {
                return false;
            }
        }
        true
    }

    fn place_free(
        &self,
        k: usize,
        free: &[NodeId],
        st: &mut State,
        visit: &mut dyn FnMut(&[NodeId], &[EdgeId]) -> bool,
    ) -> bool {
        if k == free.len() {
            let nodes: Vec<NodeId> = st.nodes.iter().map(|n| n.unwrap()).collect();
            return visit(&nodes, &st.edges);
        }
        let pn = free[k];
        for hn in self.host.nodes() {
            if (self.injective && st.used_nodes[hn]) || !self.ok(pn, hn) {
                continue;
            }
            st.nodes[pn] = Some(hn);
            let was = std::mem::replace(&mut st.used_nodes[hn], true);
            let cont = self.place_free(k + 1, free, st, visit);
            st.used_nodes[hn] = was;
            st.nodes[pn] = None;
            if !cont {
                return false;
            }
        }
        true
    }
}

struct State {
    nodes: Vec<Option<NodeId>>,
    edges: Vec<EdgeId>,
    used_nodes: Vec<bool>,
    used_edges: Vec<bool>,
}

/// Edges in an order where each edge shares a node with earlier ones when possible.
fn edge_order(p: &Hypergraph, fixed: &[Option<NodeId>]) -> Vec<EdgeId> {
    let n = p.edge_count();
    let mut placed = vec![false; n];
    let mut known: Vec<bool> = fixed.iter().map(|f| f.is_some()).collect();
    let mut order = Vec::with_capacity(n);
    while order.len() < n {
        let next = (0..n)
            .filter(|&e| !placed[e])
            .max_by_key(|&e| {
                let k = p.edge(e).tentacles().filter(|&(_, _, v)| known[v]).count();
                (k > 0, std::cmp::Reverse(e))
            })
            .unwrap();
        placed[next] = true;
        for (_, _, v) in p.edge(next).tentacles() {
            known[v] = true;
        }
        order.push(next);
    }
    order
}

/// All homomorphisms `pattern → host`, sorted by (edge map, node map).
pub fn homomorphisms(pattern: &Arc<Hypergraph>, host: &Arc<Hypergraph>, injective: bool) -> Vec<Homomorphism> {
    let mut out = Vec::new();
    Search::new(pattern, host, injective).run(&mut |n, e| {
        out.push((e.to_vec(), n.to_vec()));
        true
    });
    out.sort();
    out.into_iter()
        .map(|(e, n)| Homomorphism::new_unchecked(pattern.clone(), host.clone(), n, e))
        .collect()
}

/// Iso-invariant node colours, refined a few rounds. Interface positions are
/// part of the initial colour since isos must commute with the interface.
pub(crate) fn node_colours(g: &Hypergraph, iface: &[NodeId]) -> Vec<u64> {
    let inc = g.incidence();
    let mut colour: Vec<u64> = g
        .nodes()
        .map(|v| {
            let mut tags: Vec<(&str, bool, usize)> =
                inc[v].iter().map(|&(e, t, p)| (&*g.edge(e).label, t, p)).collect();
            tags.sort();
            let pos: Vec<usize> = iface.iter().enumerate().filter(|&(_, &x)| x == v).map(|(i, _)| i).collect();
            hash_of(&(tags, pos))
        })
        .collect();
    for _ in 0..2 {
        let edge_col: Vec<u64> = g
            .edges()
            .iter()
            .map(|e| {
                let s: Vec<u64> = e.sources.iter().map(|&n| colour[n]).collect();
                let t: Vec<u64> = e.targets.iter().map(|&n| colour[n]).collect();
                hash_of(&(&*e.label, s, t))
            })
            .collect();
        colour = g
            .nodes()
            .map(|v| {
                let mut around: Vec<(u64, bool, usize)> = inc[v].iter().map(|&(e, t, p)| (edge_col[e], t, p)).collect();
                around.sort();
                hash_of(&(colour[v], around))
            })
            .collect();
    }
    colour
}

fn hash_of<T: Hash>(t: &T) -> u64 {
    let mut h = DefaultHasher::new();
    t.hash(&mut h);
    h.finish()
}

/// Iso-invariant hash of a graph with interface. Equal graphs up to iso have
/// equal certificates; the converse is checked by [`are_isomorphic`].
pub fn certificate(g: &GraphWithInterface) -> u64 {
    let graph = g.graph();
    let colours = node_colours(graph, g.interface_nodes());
    certificate_from(graph, g.interface_nodes(), &colours)
}

fn certificate_from(graph: &Hypergraph, iface: &[NodeId], colours: &[u64]) -> u64 {
    let mut sorted = colours.to_vec();
    sorted.sort_unstable();
    let mut labels: Vec<&str> = graph.edges().iter().map(|e| &*e.label).collect();
    labels.sort_unstable();
    let iface_cols: Vec<u64> = iface.iter().map(|&n| colours[n]).collect();
    hash_of(&(graph.node_count(), graph.edge_count(), sorted, labels, iface_cols))
}

/// An isomorphism `φ: G₁ → G₂` with `ι₁ ; φ = ι₂`, if any.
pub fn are_isomorphic(a: &GraphWithInterface, b: &GraphWithInterface) -> Option<Homomorphism> {
    let (ga, gb) = (a.graph(), b.graph());
    if ga.node_count() != gb.node_count()
        || ga.edge_count() != gb.edge_count()
        || a.interface_size() != b.interface_size()
    {
        return None;
    }
    let ca = node_colours(ga, a.interface_nodes());
    let cb = node_colours(gb, b.interface_nodes());
    if certificate_from(ga, a.interface_nodes(), &ca) != certificate_from(gb, b.interface_nodes(), &cb) {
        return None;
    }
    iso_with_colours(a, b, &ca, &cb)
}

fn iso_with_colours(a: &GraphWithInterface, b: &GraphWithInterface, ca: &[u64], cb: &[u64]) -> Option<Homomorphism> {
    let (ga, gb) = (a.graph(), b.graph());
    let mut search = Search::new(ga, gb, true);
    for (&x, &y) in a.interface_nodes().iter().zip(b.interface_nodes()) {
        match search.fixed[x] {
            Some(z) if z != y => return None,
            _ => search.fixed[x] = Some(y),
        }
    }
    let ok = |p: NodeId, h: NodeId| ca[p] == cb[h];
    search.node_ok = Some(&ok);
    let mut found = None;
    search.run(&mut |n, e| {
        found = Some((n.to_vec(), e.to_vec()));
        false
    });
    let (n, e) = found?;
    let phi = Homomorphism::new_unchecked(ga.clone(), gb.clone(), n, e);
    debug_assert!(phi.is_iso());
    Some(phi)
}

/// Iso of plain graphs (empty interface).
pub fn graphs_isomorphic(a: &Arc<Hypergraph>, b: &Arc<Hypergraph>) -> Option<Homomorphism> {
    are_isomorphic(&GraphWithInterface::bare(a.clone()), &GraphWithInterface::bare(b.clone()))
}

/// A set of graphs with interface up to isomorphism, bucketed by certificate.
#[derive(Default)]
pub struct IsoSet {
    items: Vec<GraphWithInterface>,
    colours: Vec<Vec<u64>>,
    buckets: HashMap<u64, Vec<usize>>,
}

impl IsoSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn get(&self, i: usize) -> &GraphWithInterface {
        &self.items[i]
    }

    pub fn iter(&self) -> impl Iterator<Item = &GraphWithInterface> {
        self.items.iter()
    }

    fn key(g: &GraphWithInterface) -> (u64, Vec<u64>) {
        let colours = node_colours(g.graph(), g.interface_nodes());
        (certificate_from(g.graph(), g.interface_nodes(), &colours), colours)
    }

    fn lookup(&self, g: &GraphWithInterface, cert: u64, colours: &[u64]) -> Option<usize> {
        self.buckets.get(&cert)?.iter().copied().find(|&i| {
            let other = &self.items[i];
            other.graph().node_count() == g.graph().node_count()
                && other.graph().edge_count() == g.graph().edge_count()
                && iso_with_colours(g, other, colours, &self.colours[i]).is_some()
        })
    }

    pub fn find(&self, g: &GraphWithInterface) -> Option<usize> {
        let (cert, colours) = Self::key(g);
        self.lookup(g, cert, &colours)
    }

    /// Inserts `g` unless an isomorphic element is present. Returns the index
    /// of the class and whether it was new.
    pub fn insert(&mut self, g: GraphWithInterface) -> (usize, bool) {
        let (cert, colours) = Self::key(&g);
        if let Some(i) = self.lookup(&g, cert, &colours) {
            return (i, false);
        }
        let i = self.items.len();
        self.items.push(g);
        self.colours.push(colours);
        self.buckets.entry(cert).or_default().push(i);
        (i, true)
    }
}
