//! Limits and colimits in the category of Σ-hypergraphs, and pushout
//! complements for the two rule shapes the engine supports.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::Error;
use crate::hypergraph::{same_graph, Edge, EdgeId, Homomorphism, Hypergraph, NodeId};

/// A pushout object with its two injections.
#[derive(Clone, Debug)]
pub struct Pushout {
    pub object: Arc<Hypergraph>,
    /// `L → G`
    pub left: Homomorphism,
    /// `C → G`
    pub right: Homomorphism,
}

/// A pullback object with its two projections.
#[derive(Clone, Debug)]
pub struct Pullback {
    pub object: Arc<Hypergraph>,
    pub left: Homomorphism,
    pub right: Homomorphism,
}

/// `epi ; mono = f`, through the image of `f`.
pub fn epi_mono_factorize(f: &Homomorphism) -> (Homomorphism, Homomorphism) {
    let tgt = f.target();
    let in_nodes = f.image_nodes();
    let in_edges = f.image_edges();
    let mut node_ix = vec![usize::MAX; tgt.node_count()];
    let mut mono_nodes = Vec::new();
    for v in tgt.nodes().filter(|&v| in_nodes[v]) {
        node_ix[v] = mono_nodes.len();
        mono_nodes.push(v);
    }
    let mut edge_ix = vec![usize::MAX; tgt.edge_count()];
    let mut mono_edges = Vec::new();
    let mut image = Hypergraph::with_nodes(mono_nodes.len());
    for e in (0..tgt.edge_count()).filter(|&e| in_edges[e]) {
        edge_ix[e] = mono_edges.len();
        mono_edges.push(e);
        image.push_edge(relabel(tgt.edge(e), &node_ix));
    }
    image.set_path_typed(tgt.is_path_typed());
    let image = Arc::new(image);
    let epi = Homomorphism::new_unchecked(
        f.source().clone(),
        image.clone(),
        f.node_map().iter().map(|&n| node_ix[n]).collect(),
        f.edge_map().iter().map(|&e| edge_ix[e]).collect(),
    );
    let mono = Homomorphism::new_unchecked(image, tgt.clone(), mono_nodes, mono_edges);
    (epi, mono)
}

fn relabel(e: &Edge, node_ix: &[usize]) -> Edge {
    Edge {
        label: e.label.clone(),
        sources: e.sources.iter().map(|&n| node_ix[n]).collect(),
        targets: e.targets.iter().map(|&n| node_ix[n]).collect(),
    }
}

pub(crate) struct UnionFind(Vec<usize>);

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        // keep the smaller id as representative
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.0[hi] = lo;
        true
    }

    /// Dense class numbers in order of first occurrence.
    pub fn classes(&mut self) -> (Vec<usize>, usize) {
        let n = self.0.len();
        let mut num = vec![usize::MAX; n];
        let mut out = vec![0; n];
        let mut k = 0;
        for x in 0..n {
            let r = self.find(x);
            if num[r] == usize::MAX {
                num[r] = k;
                k += 1;
            }
            out[x] = num[r];
        }
        (out, k)
    }
}

/// Pushout of the span `L ← K → C`.
pub fn pushout(f: &Homomorphism, g: &Homomorphism) -> Result<Pushout, Error> {
    if !same_graph(f.source(), g.source()) {
        return Err(Error::Precondition("pushout legs have different sources".into()));
    }
    let (l, c) = (f.target(), g.target());
    let (nl, el) = (l.node_count(), l.edge_count());
    let mut nodes = UnionFind::new(nl + c.node_count());
    for k in f.source().nodes() {
        nodes.union(f.node(k), nl + g.node(k));
    }
    let mut edges = UnionFind::new(el + c.edge_count());
    for k in 0..f.source().edge_count() {
        edges.union(f.edge(k), el + g.edge(k));
    }
    let (ncls, nn) = nodes.classes();
    let (ecls, ne) = edges.classes();
    let mut obj = Hypergraph::with_nodes(nn);
    let mut seen = vec![false; ne];
    let all_edges = l.edges().iter().map(|e| (e, 0)).chain(c.edges().iter().map(|e| (e, nl)));
    for (i, (e, off)) in all_edges.enumerate() {
        if std::mem::replace(&mut seen[ecls[i]], true) {
            continue;
        }
        obj.push_edge(Edge {
            label: e.label.clone(),
            sources: e.sources.iter().map(|&n| ncls[n + off]).collect(),
            targets: e.targets.iter().map(|&n| ncls[n + off]).collect(),
        });
    }
    obj.set_path_typed(l.is_path_typed() || c.is_path_typed());
    let obj = Arc::new(obj);
    let left = Homomorphism::new_unchecked(l.clone(), obj.clone(), ncls[..nl].to_vec(), ecls[..el].to_vec());
    let right = Homomorphism::new_unchecked(c.clone(), obj.clone(), ncls[nl..].to_vec(), ecls[el..].to_vec());
    Ok(Pushout {
        object: obj,
        left,
        right,
    })
}

/// The map out of a pushout induced by a cocone `a: L → Q`, `b: C → Q`.
pub fn pushout_mediator(po: &Pushout, a: &Homomorphism, b: &Homomorphism) -> Result<Homomorphism, Error> {
    let q = a.target().clone();
    if !same_graph(&q, b.target()) {
        return Err(Error::NotComposable);
    }
    let obj = &po.object;
    let mut nodes = vec![usize::MAX; obj.node_count()];
    let mut edges = vec![usize::MAX; obj.edge_count()];
    for (inj, leg) in [(&po.left, a), (&po.right, b)] {
        for (x, &y) in inj.node_map().iter().enumerate() {
            let v = leg.node(x);
            if nodes[y] != usize::MAX && nodes[y] != v {
                return Err(Error::NonCommuting);
            }
            nodes[y] = v;
        }
        for (x, &y) in inj.edge_map().iter().enumerate() {
            let v = leg.edge(x);
            if edges[y] != usize::MAX && edges[y] != v {
                return Err(Error::NonCommuting);
            }
            edges[y] = v;
        }
    }
    Homomorphism::new(obj.clone(), q, nodes, edges)
}

/// Pullback of the cospan `A → C ← B`.
pub fn pullback(f: &Homomorphism, g: &Homomorphism) -> Result<Pullback, Error> {
    if !same_graph(f.target(), g.target()) {
        return Err(Error::Precondition("pullback legs have different targets".into()));
    }
    let (a, b) = (f.source(), g.source());
    let mut by_image: HashMap<NodeId, Vec<NodeId>> = HashMap::new();
    for y in b.nodes() {
        by_image.entry(g.node(y)).or_default().push(y);
    }
    let mut pairs = Vec::new();
    let mut index = HashMap::new();
    for x in a.nodes() {
        for &y in by_image.get(&f.node(x)).map(Vec::as_slice).unwrap_or(&[]) {
            index.insert((x, y), pairs.len());
            pairs.push((x, y));
        }
    }
    let mut obj = Hypergraph::with_nodes(pairs.len());
    let mut edge_pairs: Vec<(EdgeId, EdgeId)> = Vec::new();
    let mut edges_by_image: HashMap<EdgeId, Vec<EdgeId>> = HashMap::new();
    for y in 0..b.edge_count() {
        edges_by_image.entry(g.edge(y)).or_default().push(y);
    }
    for x in 0..a.edge_count() {
        for &y in edges_by_image.get(&f.edge(x)).map(Vec::as_slice).unwrap_or(&[]) {
            let (ea, eb) = (a.edge(x), b.edge(y));
            let zip = |p: &[NodeId], q: &[NodeId]| -> Vec<NodeId> {
                p.iter().zip(q).map(|(&u, &v)| index[&(u, v)]).collect()
            };
            obj.push_edge(Edge {
                label: ea.label.clone(),
                sources: zip(&ea.sources, &eb.sources),
                targets: zip(&ea.targets, &eb.targets),
            });
            edge_pairs.push((x, y));
        }
    }
    obj.set_path_typed(a.is_path_typed() && b.is_path_typed());
    let obj = Arc::new(obj);
    let left = Homomorphism::new_unchecked(
        obj.clone(),
        a.clone(),
        pairs.iter().map(|p| p.0).collect(),
        edge_pairs.iter().map(|p| p.0).collect(),
    );
    let right = Homomorphism::new_unchecked(
        obj.clone(),
        b.clone(),
        pairs.iter().map(|p| p.1).collect(),
        edge_pairs.iter().map(|p| p.1).collect(),
    );
    Ok(Pullback {
        object: obj,
        left,
        right,
    })
}

/// A commuting square
///
/// ```text
///   K --top--> L
///   |          |
///  left      right
///   v          v
///   C --bot--> G
/// ```
#[derive(Clone, Debug)]
pub struct Square {
    pub top: Homomorphism,
    pub left: Homomorphism,
    pub right: Homomorphism,
    pub bottom: Homomorphism,
}

impl Square {
    pub fn new(top: Homomorphism, left: Homomorphism, right: Homomorphism, bottom: Homomorphism) -> Self {
        Square {
            top,
            left,
            right,
            bottom,
        }
    }

    pub fn commutes(&self) -> bool {
        same_graph(self.top.source(), self.left.source())
            && same_graph(self.top.target(), self.right.source())
            && same_graph(self.left.target(), self.bottom.source())
            && same_graph(self.right.target(), self.bottom.target())
            && self.top.then_unchecked(&self.right) == self.left.then_unchecked(&self.bottom)
    }
}

/// Whether the square is a pushout: the comparison map from the computed
/// pushout is an isomorphism.
pub fn is_pushout(sq: &Square) -> Result<bool, Error> {
    if !sq.commutes() {
        return Err(Error::NonCommuting);
    }
    let po = pushout(&sq.top, &sq.left)?;
    let u = pushout_mediator(&po, &sq.right, &sq.bottom)?;
    Ok(u.is_iso())
}

/// Whether the square is a pullback: the comparison map into the computed
/// pullback is an isomorphism.
pub fn is_pullback(sq: &Square) -> Result<bool, Error> {
    if !sq.commutes() {
        return Err(Error::NonCommuting);
    }
    let pb = pullback(&sq.right, &sq.bottom)?;
    let index: HashMap<(NodeId, NodeId), NodeId> = pb
        .left
        .node_map()
        .iter()
        .zip(pb.right.node_map())
        .enumerate()
        .map(|(i, (&a, &b))| ((a, b), i))
        .collect();
    let eindex: HashMap<(EdgeId, EdgeId), EdgeId> = pb
        .left
        .edge_map()
        .iter()
        .zip(pb.right.edge_map())
        .enumerate()
        .map(|(i, (&a, &b))| ((a, b), i))
        .collect();
    let k = sq.top.source();
    let nodes: Vec<_> = k.nodes().map(|x| index[&(sq.top.node(x), sq.left.node(x))]).collect();
    let edges: Vec<_> = (0..k.edge_count()).map(|x| eindex[&(sq.top.edge(x), sq.left.edge(x))]).collect();
    let u = Homomorphism::new(k.clone(), pb.object, nodes, edges)?;
    Ok(u.is_iso())
}

/// A pushout complement `K → C → G` for `K → L → G`.
#[derive(Clone, Debug)]
pub struct Complement {
    pub k_to_c: Homomorphism,
    pub c_to_g: Homomorphism,
}

impl Complement {
    pub fn context(&self) -> &Arc<Hypergraph> {
        self.k_to_c.target()
    }
}

/// Why a pushout complement does not exist.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GluingFailure {
    Dangling { node: NodeId, edge: EdgeId },
    Identification { node: NodeId },
    EdgeIdentification { edge: EdgeId },
}

impl fmt::Display for GluingFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GluingFailure::Dangling { node, edge } => {
                write!(f, "dangling: edge {edge} would lose its tentacle at deleted node {node}")
            }
            GluingFailure::Identification { node } => write!(f, "identification: node {node}"),
            GluingFailure::EdgeIdentification { edge } => write!(f, "identification: edge {edge}"),
        }
    }
}

/// All pushout complements of `l: K → L` and `m: L → G` up to isomorphism.
///
/// Supported when `l` is mono (deletion) or `K` is discrete (enumeration of
/// the ways to split nodes of `G` among `K`); other shapes are rejected.
pub fn pushout_complements(l: &Homomorphism, m: &Homomorphism) -> Result<Vec<Complement>, Error> {
    if !same_graph(l.target(), m.source()) {
        return Err(Error::NotComposable);
    }
    let res = if l.is_mono() {
        deletion_complement(l, m).map(|c| vec![c])
    } else if l.source().is_discrete() {
        discrete_complements(l, m)
    } else {
        return Err(Error::UnsupportedRuleShape(
            "interface has edges and left leg is not mono".into(),
        ));
    };
    match res {
        Ok(cs) => {
            for c in &cs {
                debug_assert!(is_pushout(&Square::new(l.clone(), c.k_to_c.clone(), m.clone(), c.c_to_g.clone())).unwrap());
            }
            Ok(cs)
        }
        Err(why) => {
            log::debug!("no pushout complement: {why}");
            Ok(vec![])
        }
    }
}

/// Checks the gluing condition for a mono `l`.
pub fn check_gluing(l: &Homomorphism, m: &Homomorphism) -> Result<(), GluingFailure> {
    deletion_plan(l, m).map(|_| ())
}

/// Nodes and edges of `G` that the step deletes.
fn deletion_plan(l: &Homomorphism, m: &Homomorphism) -> Result<(Vec<bool>, Vec<bool>), GluingFailure> {
    let (lg, g) = (m.source(), m.target());
    let kept_n = l.image_nodes();
    let kept_e = l.image_edges();
    // items of G hit by L, and whether some preimage is kept
    let mut hit_n: Vec<Option<bool>> = vec![None; g.node_count()];
    for x in lg.nodes() {
        let v = m.node(x);
        match hit_n[v] {
            None => hit_n[v] = Some(kept_n[x]),
            Some(k) if k && kept_n[x] => {}
            Some(_) => return Err(GluingFailure::Identification { node: v }),
        }
    }
    let mut hit_e: Vec<Option<bool>> = vec![None; g.edge_count()];
    for x in 0..lg.edge_count() {
        let v = m.edge(x);
        match hit_e[v] {
            None => hit_e[v] = Some(kept_e[x]),
            Some(k) if k && kept_e[x] => {}
            Some(_) => return Err(GluingFailure::EdgeIdentification { edge: v }),
        }
    }
    let del_n: Vec<bool> = hit_n.iter().map(|h| *h == Some(false)).collect();
    let del_e: Vec<bool> = hit_e.iter().map(|h| *h == Some(false)).collect();
    for (id, e) in g.edges().iter().enumerate() {
        if del_e[id] {
            continue;
        }
        if let Some((_, _, n)) = e.tentacles().find(|&(_, _, n)| del_n[n]) {
            return Err(GluingFailure::Dangling { node: n, edge: id });
        }
    }
    Ok((del_n, del_e))
}

fn deletion_complement(l: &Homomorphism, m: &Homomorphism) -> Result<Complement, GluingFailure> {
    let (del_n, del_e) = deletion_plan(l, m)?;
    let g = m.target();
    let mut node_ix = vec![usize::MAX; g.node_count()];
    let mut c_nodes = Vec::new();
    for v in g.nodes().filter(|&v| !del_n[v]) {
        node_ix[v] = c_nodes.len();
        c_nodes.push(v);
    }
    let mut edge_ix = vec![usize::MAX; g.edge_count()];
    let mut c_edges = Vec::new();
    let mut c = Hypergraph::with_nodes(c_nodes.len());
    for e in (0..g.edge_count()).filter(|&e| !del_e[e]) {
        edge_ix[e] = c_edges.len();
        c_edges.push(e);
        c.push_edge(relabel(g.edge(e), &node_ix));
    }
    c.set_path_typed(g.is_path_typed());
    let c = Arc::new(c);
    let k = l.source();
    let k_to_c = Homomorphism::new_unchecked(
        k.clone(),
        c.clone(),
        k.nodes().map(|x| node_ix[m.node(l.node(x))]).collect(),
        (0..k.edge_count()).map(|x| edge_ix[m.edge(l.edge(x))]).collect(),
    );
    let c_to_g = Homomorphism::new_unchecked(c, g.clone(), c_nodes, c_edges);
    Ok(Complement { k_to_c, c_to_g })
}

/// Complements for a discrete `K` and arbitrary `l`.
///
/// Every node `v` of `G` in the image of `K` splits into blocks of
/// `K_v = (l;m)⁻¹(v)`; each block becomes one node of `C`, and each tentacle
/// of a context edge at `v` picks one block.
fn discrete_complements(l: &Homomorphism, m: &Homomorphism) -> Result<Vec<Complement>, GluingFailure> {
    let (lg, g, k) = (m.source(), m.target(), l.source());
    if let Some(e) = first_repeat(m.edge_map(), g.edge_count()) {
        return Err(GluingFailure::EdgeIdentification { edge: e });
    }
    let in_match = m.image_edges();
    let kept_l = l.image_nodes();
    let mut k_over: Vec<Vec<NodeId>> = vec![Vec::new(); g.node_count()];
    for x in k.nodes() {
        k_over[m.node(l.node(x))].push(x);
    }
    let mut l_over: Vec<Vec<NodeId>> = vec![Vec::new(); g.node_count()];
    for x in lg.nodes() {
        l_over[m.node(x)].push(x);
    }
    // tentacles of context edges at each node
    let mut ctx_tent: Vec<Vec<(EdgeId, bool, usize)>> = vec![Vec::new(); g.node_count()];
    for (id, e) in g.edges().iter().enumerate() {
        if in_match[id] {
            continue;
        }
        for (t, p, n) in e.tentacles() {
            ctx_tent[n].push((id, t, p));
        }
    }
    // per node: the admissible (blocks, block index of each tentacle) choices
    let mut choices: Vec<Vec<(Vec<Vec<NodeId>>, Vec<usize>)>> = Vec::with_capacity(g.node_count());
    for v in g.nodes() {
        if l_over[v].is_empty() {
            choices.push(vec![(vec![], vec![])]);
            continue;
        }
        if k_over[v].is_empty() {
            if l_over[v].len() > 1 {
                return Err(GluingFailure::Identification { node: v });
            }
            if let Some(&(edge, _, _)) = ctx_tent[v].first() {
                return Err(GluingFailure::Dangling { node: v, edge });
            }
            choices.push(vec![]);
            continue;
        }
        if l_over[v].iter().any(|&x| !kept_l[x]) {
            return Err(GluingFailure::Identification { node: v });
        }
        let mut here = Vec::new();
        for blocks in set_partitions(&k_over[v]) {
            if !connects(&blocks, &l_over[v], l) {
                continue;
            }
            for assign in assignments(ctx_tent[v].len(), blocks.len()) {
                here.push((blocks.clone(), assign));
            }
        }
        choices.push(here);
    }
    let mut out = Vec::new();
    let mut pick = vec![0usize; g.node_count()];
    loop {
        out.push(build_discrete_complement(l, m, &choices, &pick, &ctx_tent, &in_match));
        // odometer over per-node choices
        let mut i = 0;
        loop {
            if i == pick.len() {
                return Ok(out);
            }
            if choices[i].is_empty() {
                i += 1;
                continue;
            }
            pick[i] += 1;
            if pick[i] < choices[i].len() {
                break;
            }
            pick[i] = 0;
            i += 1;
        }
    }
}

fn build_discrete_complement(
    l: &Homomorphism,
    m: &Homomorphism,
    choices: &[Vec<(Vec<Vec<NodeId>>, Vec<usize>)>],
    pick: &[usize],
    ctx_tent: &[Vec<(EdgeId, bool, usize)>],
    in_match: &[bool],
) -> Complement {
    let (g, k) = (m.target(), l.source());
    let l_hit = m.image_nodes();
    let mut c_nodes = Vec::new();
    let mut k_map = vec![usize::MAX; k.node_count()];
    // first C node for each G node, and per tentacle the chosen C node
    let mut plain = vec![usize::MAX; g.node_count()];
    let mut tent_node: HashMap<(EdgeId, bool, usize), NodeId> = HashMap::new();
    for v in g.nodes() {
        if !l_hit[v] {
            plain[v] = c_nodes.len();
            c_nodes.push(v);
            continue;
        }
        if choices[v].is_empty() {
            continue;
        }
        let (blocks, assign) = &choices[v][pick[v]];
        let base = c_nodes.len();
        for (b, block) in blocks.iter().enumerate() {
            for &x in block {
                k_map[x] = base + b;
            }
            c_nodes.push(v);
        }
        for (t, &b) in ctx_tent[v].iter().zip(assign) {
            tent_node.insert(*t, base + b);
        }
    }
    let mut c = Hypergraph::with_nodes(c_nodes.len());
    let mut c_edges = Vec::new();
    for (id, e) in g.edges().iter().enumerate() {
        if in_match[id] {
            continue;
        }
        let at = |t: bool, p: usize, n: NodeId| {
            if plain[n] != usize::MAX {
                plain[n]
            } else {
                tent_node[&(id, t, p)]
            }
        };
        c.push_edge(Edge {
            label: e.label.clone(),
            sources: e.sources.iter().enumerate().map(|(p, &n)| at(false, p, n)).collect(),
            targets: e.targets.iter().enumerate().map(|(p, &n)| at(true, p, n)).collect(),
        });
        c_edges.push(id);
    }
    c.set_path_typed(g.is_path_typed());
    let c = Arc::new(c);
    Complement {
        k_to_c: Homomorphism::new_unchecked(k.clone(), c.clone(), k_map, vec![]),
        c_to_g: Homomorphism::new_unchecked(c, g.clone(), c_nodes, c_edges),
    }
}

fn first_repeat(map: &[usize], range: usize) -> Option<usize> {
    let mut seen = vec![false; range];
    map.iter().copied().find(|&x| std::mem::replace(&mut seen[x], true))
}

/// Whether gluing `L` along the blocks yields one class: the bipartite graph
/// between `L`-nodes over `v` and blocks (linked by `K`-nodes) is connected.
fn connects(blocks: &[Vec<NodeId>], l_nodes: &[NodeId], l: &Homomorphism) -> bool {
    let nb = blocks.len();
    let pos = |x: NodeId| nb + l_nodes.iter().position(|&y| y == x).unwrap();
    let mut uf = UnionFind::new(nb + l_nodes.len());
    for (b, block) in blocks.iter().enumerate() {
        for &k in block {
            uf.union(b, pos(l.node(k)));
        }
    }
    let r = uf.find(0);
    (0..nb + l_nodes.len()).all(|i| uf.find(i) == r)
}

/// All set partitions of `items`, blocks ordered by least element.
pub fn set_partitions<T: Clone>(items: &[T]) -> Vec<Vec<Vec<T>>> {
    let mut out = Vec::new();
    let mut cur: Vec<Vec<T>> = Vec::new();
    fn go<T: Clone>(i: usize, items: &[T], cur: &mut Vec<Vec<T>>, out: &mut Vec<Vec<Vec<T>>>) {
        if i == items.len() {
            out.push(cur.clone());
            return;
        }
        for b in 0..cur.len() {
            cur[b].push(items[i].clone());
            go(i + 1, items, cur, out);
            cur[b].pop();
        }
        cur.push(vec![items[i].clone()]);
        go(i + 1, items, cur, out);
        cur.pop();
    }
    go(0, items, &mut cur, &mut out);
    out
}

/// All functions `0..n → 0..k` as vectors.
fn assignments(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..k).map(move |b| {
                    let mut w = v.clone();
                    w.push(b);
                    w
                })
            })
            .collect();
    }
    out
}

/// Two stacked squares sharing the middle row:
///
/// ```text
///   K ----> L
///   |       | m'
///   v       v
///   C' ---> G'
///   |       | m (mono)
///   v       v
///   C ----> G
/// ```
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub k_to_l: Homomorphism,
    pub k_to_cp: Homomorphism,
    pub l_to_gp: Homomorphism,
    pub cp_to_gp: Homomorphism,
    pub cp_to_c: Homomorphism,
    pub gp_to_g: Homomorphism,
    pub c_to_g: Homomorphism,
}

/// Given that the outer rectangle is a pushout and the lower square a
/// pullback with `G' → G` mono, reports whether both squares are pushouts.
pub fn mixed_decomposition_check(d: &Decomposition) -> Result<bool, Error> {
    let upper = Square::new(d.k_to_l.clone(), d.k_to_cp.clone(), d.l_to_gp.clone(), d.cp_to_gp.clone());
    let lower = Square::new(d.cp_to_gp.clone(), d.cp_to_c.clone(), d.gp_to_g.clone(), d.c_to_g.clone());
    let outer = Square::new(
        d.k_to_l.clone(),
        d.k_to_cp.then(&d.cp_to_c)?,
        d.l_to_gp.then(&d.gp_to_g)?,
        d.c_to_g.clone(),
    );
    if !d.gp_to_g.is_mono() {
        return Err(Error::Precondition("G' → G is not mono".into()));
    }
    if !upper.commutes() || !lower.commutes() {
        return Err(Error::NonCommuting);
    }
    if !is_pushout(&outer)? {
        return Err(Error::Precondition("outer rectangle is not a pushout".into()));
    }
    if !is_pullback(&lower)? {
        return Err(Error::Precondition("lower square is not a pullback".into()));
    }
    Ok(is_pushout(&upper)? && is_pushout(&lower)?)
}
