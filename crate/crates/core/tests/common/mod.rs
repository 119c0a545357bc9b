#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use diaconf::category::Square;
use diaconf::frobenius::translate_rule;
use diaconf::hypergraph::{coproduct, discrete, Homomorphism, Hypergraph, NodeId, Signature};
use diaconf::rewrite::{Mode, RewriteRule, RewritingSystem};
use diaconf::term::Term;

/// Seed from `DC_SEED`, or a fixed default.
pub fn seed() -> u64 {
    std::env::var("DC_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(0x5eed_cafe)
}

pub fn rng(salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed() ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

/// Up to three generators with at most two sources and two targets each.
pub fn random_signature(rng: &mut ChaCha8Rng) -> Signature {
    let n = rng.gen_range(1..=3);
    let mut sig = Signature::new();
    for i in 0..n {
        let (a, c) = loop {
            let a = rng.gen_range(0..=2);
            let c = rng.gen_range(0..=2);
            if a + c > 0 {
                break (a, c);
            }
        };
        sig.add(&format!("g{i}"), a, c).unwrap();
    }
    sig
}

pub fn random_graph(rng: &mut ChaCha8Rng, sig: &Signature, nodes: usize, edges: usize) -> Hypergraph {
    let gens: Vec<(String, (usize, usize))> = sig.generators().map(|(n, t)| (n.to_string(), t)).collect();
    let mut g = Hypergraph::with_nodes(nodes.max(1));
    let n = g.node_count();
    for _ in 0..edges {
        let (name, (a, c)) = gens.choose(rng).unwrap().clone();
        let src = (0..a).map(|_| rng.gen_range(0..n)).collect();
        let tgt = (0..c).map(|_| rng.gen_range(0..n)).collect();
        g.add_edge(&name, src, tgt);
    }
    g
}

/// A rule `L ← K → R` with discrete `K`. With `shrinking`, `R` has fewer
/// edges than `L`, so every step removes an edge.
pub fn random_discrete_rule(rng: &mut ChaCha8Rng, sig: &Signature, name: &str, shrinking: bool) -> RewriteRule {
    let le = rng.gen_range(1..=2);
    let ln = rng.gen_range(1..=3);
    let l = Arc::new(random_graph(rng, sig, ln, le));
    let re = if shrinking { rng.gen_range(0..le) } else { rng.gen_range(0..=2) };
    let rn = rng.gen_range(1..=3);
    let r = Arc::new(random_graph(rng, sig, rn, re));
    let k_size = rng.gen_range(0..=l.node_count());
    let k = Arc::new(discrete(k_size));
    let injective = rng.gen_bool(0.8);
    let mut lnodes: Vec<NodeId> = l.nodes().collect();
    lnodes.shuffle(rng);
    let lmap: Vec<NodeId> = (0..k_size)
        .map(|i| if injective { lnodes[i] } else { rng.gen_range(0..l.node_count()) })
        .collect();
    let rmap: Vec<NodeId> = (0..k_size).map(|_| rng.gen_range(0..r.node_count())).collect();
    RewriteRule::new(
        name,
        Homomorphism::from_discrete(k.clone(), l, lmap).unwrap(),
        Homomorphism::from_discrete(k, r, rmap).unwrap(),
    )
    .unwrap()
}

/// At most two rules over at most three generators.
pub fn random_plain_system(rng: &mut ChaCha8Rng, shrinking: bool) -> RewritingSystem {
    let sig = random_signature(rng);
    let n = rng.gen_range(1..=2);
    let rules = (0..n).map(|i| random_discrete_rule(rng, &sig, &format!("r{i}"), shrinking)).collect();
    let mode = if rng.gen_bool(0.5) { Mode::Plain } else { Mode::Frobenius };
    RewritingSystem::new(sig, rules, mode).unwrap()
}

/// A Frobenius-free term built from layers `id + g + id`, optionally
/// interleaved with symmetries.
pub fn layered_term(rng: &mut ChaCha8Rng, gens: &[(String, (usize, usize))], width: usize, layers: usize) -> (Term, usize) {
    let mut t = Term::Id(width);
    let mut w = width;
    for _ in 0..layers {
        let fits: Vec<&(String, (usize, usize))> = gens.iter().filter(|(_, (a, _))| *a <= w).collect();
        let Some((name, (a, c))) = fits.choose(rng).map(|g| (*g).clone()) else { break };
        let before = rng.gen_range(0..=w - a);
        let after = w - a - before;
        let mut layer = Term::gen(&name);
        if before > 0 {
            layer = Term::par(Term::Id(before), layer);
        }
        if after > 0 {
            layer = Term::par(layer, Term::Id(after));
        }
        t = Term::seq(t, layer);
        w = w - a + c;
        if w >= 2 && rng.gen_bool(0.3) {
            let p = rng.gen_range(0..w - 1);
            let mut s = Term::Sym(1, 1);
            if p > 0 {
                s = Term::par(Term::Id(p), s);
            }
            if w - p - 2 > 0 {
                s = Term::par(s, Term::Id(w - p - 2));
            }
            t = Term::seq(t, s);
        }
    }
    (t, w)
}

/// A quotient of `g` merging random nodes, with its node map.
pub fn merge_nodes(rng: &mut impl Rng, g: &Hypergraph, p: f64) -> (Hypergraph, Vec<usize>) {
    let mut map: Vec<usize> = Vec::with_capacity(g.node_count());
    let mut next = 0;
    for v in g.nodes() {
        if v > 0 && rng.gen_bool(p) {
            map.push(map[rng.gen_range(0..v)]);
        } else {
            map.push(next);
            next += 1;
        }
    }
    (relabel(g, &map, next), map)
}

pub fn relabel(g: &Hypergraph, map: &[usize], n: usize) -> Hypergraph {
    let mut out = Hypergraph::with_nodes(n);
    for e in g.edges() {
        out.add_edge(&e.label, e.sources.iter().map(|&v| map[v]).collect(), e.targets.iter().map(|&v| map[v]).collect());
    }
    out
}

/// `K → G` where `G` is `K` plus random extra material, with some nodes merged.
pub fn random_extension(rng: &mut ChaCha8Rng, sig: &Signature, k: &Arc<Hypergraph>, n: usize) -> Homomorphism {
    let room = n.saturating_sub(k.node_count());
    let (nodes, edges) = (rng.gen_range(0..=room), usize::from(room > 0 && rng.gen_bool(0.5)));
    let extra = random_graph(rng, sig, nodes, edges);
    let (sum, inj, _) = coproduct(k, &extra).unwrap();
    let (q, map) = merge_nodes(rng, &sum, 0.2);
    let nodes = inj.node_map().iter().map(|&v| map[v]).collect();
    Homomorphism::new(k.clone(), Arc::new(q), nodes, inj.edge_map().to_vec()).unwrap()
}

/// A convex-mode system whose left sides are layered terms over fresh
/// generators and whose right sides are single generators, with the
/// generators the left sides use.
pub fn convex_system(rng: &mut ChaCha8Rng) -> Option<(RewritingSystem, Vec<(String, (usize, usize))>)> {
    let types = [(1, 1), (2, 1), (1, 2), (2, 2)];
    let mut sig = Signature::new();
    let mut gens = Vec::new();
    for i in 0..rng.gen_range(1..=3) {
        let t = *types.choose(rng).unwrap();
        sig.add(&format!("h{i}"), t.0, t.1).unwrap();
        gens.push((format!("h{i}"), t));
    }
    let mut rules = Vec::new();
    for r in 0..rng.gen_range(1..=2) {
        let width = rng.gen_range(1..=2);
        let layers = rng.gen_range(1..=3);
        let (lhs, out) = layered_term(rng, &gens, width, layers);
        let k = format!("k{r}");
        sig.add(&k, width, out).unwrap();
        rules.push(translate_rule(&format!("r{r}"), &lhs, &Term::gen(&k), &sig).ok()?);
    }
    let sys = RewritingSystem::new(sig, rules, Mode::Convex).ok()?;
    Some((sys, gens))
}

/// Pushout of `f: K → L`, `g: K → C` by merging the disjoint union along
/// `K`, written without the library's union-find.
pub fn naive_pushout(f: &Homomorphism, g: &Homomorphism) -> (Hypergraph, Vec<usize>, Vec<usize>, Vec<usize>, Vec<usize>) {
    let (l, c) = (f.target(), g.target());
    let nl = l.node_count();
    let total = nl + c.node_count();
    let mut class: Vec<usize> = (0..total).collect();
    loop {
        let mut merged = false;
        for k in f.source().nodes() {
            let (a, b) = (f.node(k), nl + g.node(k));
            if class[a] != class[b] {
                let (lo, hi) = (class[a].min(class[b]), class[a].max(class[b]));
                for x in class.iter_mut() {
                    if *x == hi {
                        *x = lo;
                    }
                }
                merged = true;
            }
        }
        if !merged {
            break;
        }
    }
    let reps: BTreeSet<usize> = class.iter().copied().collect();
    let reps: Vec<usize> = reps.into_iter().collect();
    let node_of = |i: usize| reps.iter().position(|&r| r == class[i]).unwrap();
    let mut p = Hypergraph::with_nodes(reps.len());
    let el = l.edge_count();
    let mut eclass: Vec<usize> = (0..el + c.edge_count()).collect();
    loop {
        let mut merged = false;
        for k in 0..f.source().edge_count() {
            let (a, b) = (f.edge(k), el + g.edge(k));
            if eclass[a] != eclass[b] {
                let (lo, hi) = (eclass[a].min(eclass[b]), eclass[a].max(eclass[b]));
                for x in eclass.iter_mut() {
                    if *x == hi {
                        *x = lo;
                    }
                }
                merged = true;
            }
        }
        if !merged {
            break;
        }
    }
    let ereps: Vec<usize> = eclass.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
    for &r in &ereps {
        let (e, off) = if r < el { (l.edge(r), 0) } else { (c.edge(r - el), nl) };
        p.add_edge(
            &e.label,
            e.sources.iter().map(|&v| node_of(v + off)).collect(),
            e.targets.iter().map(|&v| node_of(v + off)).collect(),
        );
    }
    let edge_of = |i: usize| ereps.iter().position(|&r| r == eclass[i]).unwrap();
    (
        p,
        (0..nl).map(node_of).collect(),
        (0..el).map(edge_of).collect(),
        (nl..total).map(node_of).collect(),
        (el..el + c.edge_count()).map(edge_of).collect(),
    )
}

/// Every homomorphism `a → b` whose node map extends `fixed`, by plain
/// backtracking over nodes then edges.
pub fn brute_homs(a: &Hypergraph, b: &Hypergraph, fixed: &[Option<usize>], fixed_e: &[Option<usize>]) -> Vec<(Vec<usize>, Vec<usize>)> {
    let mut out = Vec::new();
    let mut nodes = vec![0; a.node_count()];
    fn go_nodes(
        i: usize,
        a: &Hypergraph,
        b: &Hypergraph,
        fixed: &[Option<usize>],
        fixed_e: &[Option<usize>],
        nodes: &mut Vec<usize>,
        out: &mut Vec<(Vec<usize>, Vec<usize>)>,
    ) {
        if i == a.node_count() {
            let mut edges = vec![0; a.edge_count()];
            go_edges(0, a, b, fixed_e, nodes, &mut edges, out);
            return;
        }
        let choices: Vec<usize> = match fixed[i] {
            Some(v) => vec![v],
            None => b.nodes().collect(),
        };
        for v in choices {
            nodes[i] = v;
            go_nodes(i + 1, a, b, fixed, fixed_e, nodes, out);
        }
    }
    fn go_edges(
        i: usize,
        a: &Hypergraph,
        b: &Hypergraph,
        fixed_e: &[Option<usize>],
        nodes: &[usize],
        edges: &mut Vec<usize>,
        out: &mut Vec<(Vec<usize>, Vec<usize>)>,
    ) {
        if i == a.edge_count() {
            out.push((nodes.to_vec(), edges.clone()));
            return;
        }
        let e = a.edge(i);
        for (j, t) in b.edges().iter().enumerate() {
            if fixed_e[i].is_some_and(|f| f != j) {
                continue;
            }
            let ok = t.label == e.label
                && e.sources.iter().map(|&v| nodes[v]).eq(t.sources.iter().copied())
                && e.targets.iter().map(|&v| nodes[v]).eq(t.targets.iter().copied());
            if ok {
                edges[i] = j;
                go_edges(i + 1, a, b, fixed_e, nodes, edges, out);
            }
        }
    }
    go_nodes(0, a, b, fixed, fixed_e, &mut nodes, &mut out);
    out
}

/// Universal-property check against an independently built pushout `P`:
/// the square is a pushout exactly when some map `G → P` commutes with
/// both legs and is inverse to the canonical `P → G`.
pub fn brute_is_pushout(sq: &Square) -> bool {
    if !sq.commutes() {
        return false;
    }
    let (p, pl_n, pl_e, pc_n, pc_e) = naive_pushout(&sq.top, &sq.left);
    let g = sq.right.target();
    // canonical u: P → G
    let mut u_n = vec![usize::MAX; p.node_count()];
    let mut u_e = vec![usize::MAX; p.edge_count()];
    for (x, &y) in pl_n.iter().enumerate() {
        u_n[y] = sq.right.node(x);
    }
    for (x, &y) in pc_n.iter().enumerate() {
        u_n[y] = sq.bottom.node(x);
    }
    for (x, &y) in pl_e.iter().enumerate() {
        u_e[y] = sq.right.edge(x);
    }
    for (x, &y) in pc_e.iter().enumerate() {
        u_e[y] = sq.bottom.edge(x);
    }
    let mut fixed = vec![None; g.node_count()];
    let mut fixed_e = vec![None; g.edge_count()];
    for (x, &y) in pl_n.iter().enumerate() {
        fixed[sq.right.node(x)] = Some(y);
    }
    for (x, &y) in pc_n.iter().enumerate() {
        fixed[sq.bottom.node(x)] = Some(y);
    }
    for (x, &y) in pl_e.iter().enumerate() {
        fixed_e[sq.right.edge(x)] = Some(y);
    }
    for (x, &y) in pc_e.iter().enumerate() {
        fixed_e[sq.bottom.edge(x)] = Some(y);
    }
    // the legs must agree on where they send G's items in P
    for (x, &y) in pl_n.iter().enumerate() {
        if fixed[sq.right.node(x)] != Some(y) {
            return false;
        }
    }
    for (x, &y) in pc_n.iter().enumerate() {
        if fixed[sq.bottom.node(x)] != Some(y) {
            return false;
        }
    }
    for (x, &y) in pl_e.iter().enumerate() {
        if fixed_e[sq.right.edge(x)] != Some(y) {
            return false;
        }
    }
    for (x, &y) in pc_e.iter().enumerate() {
        if fixed_e[sq.bottom.edge(x)] != Some(y) {
            return false;
        }
    }
    brute_homs(g, &p, &fixed, &fixed_e).into_iter().any(|(vn, ve)| {
        g.nodes().all(|v| u_n[vn[v]] == v) && (0..g.edge_count()).all(|e| u_e[ve[e]] == e)
    })
}

/// The ⊆-maximal valid relations by filtering the whole powerset of
/// `outputs × inputs`.
pub fn powerset_maximal(
    inputs: &[NodeId],
    outputs: &[NodeId],
    paths: &BTreeSet<(NodeId, NodeId)>,
    forbidden: &BTreeSet<(NodeId, NodeId)>,
) -> Vec<BTreeSet<(NodeId, NodeId)>> {
    let all: Vec<(NodeId, NodeId)> = outputs.iter().flat_map(|&y| inputs.iter().map(move |&x| (y, x))).collect();
    // digraph on boundary nodes: links y -> x from R, inside paths x -> y;
    // a bare wire (x, x) is a path of length zero, not a loop
    let valid = |r: &BTreeSet<(NodeId, NodeId)>| {
        if r.iter().any(|p| forbidden.contains(p)) {
            return false;
        }
        let succ = |v: NodeId| -> Vec<NodeId> {
            let mut out: Vec<NodeId> = r.iter().filter(|p| p.0 == v).map(|p| p.1).collect();
            out.extend(paths.iter().filter(|p| p.0 == v && p.1 != v).map(|p| p.1));
            out
        };
        let reach_from = |v: NodeId| -> BTreeSet<NodeId> {
            let mut seen = BTreeSet::new();
            let mut stack = succ(v);
            while let Some(w) = stack.pop() {
                if seen.insert(w) {
                    stack.extend(succ(w));
                }
            }
            seen
        };
        // acyclic, and every input an output reaches is linked directly
        for &y in outputs {
            let reach = reach_from(y);
            if reach.contains(&y) {
                return false;
            }
            if inputs.iter().any(|&x| reach.contains(&x) && !r.contains(&(y, x))) {
                return false;
            }
        }
        true
    };
    let mut good = Vec::new();
    for mask in 0u32..(1 << all.len()) {
        let r: BTreeSet<_> = (0..all.len()).filter(|&i| mask & (1 << i) != 0).map(|i| all[i]).collect();
        if valid(&r) {
            good.push(r);
        }
    }
    let mut maximal: Vec<_> = good
        .iter()
        .filter(|r| !good.iter().any(|s| s.len() > r.len() && r.is_subset(s)))
        .cloned()
        .collect();
    maximal.sort();
    maximal
}
