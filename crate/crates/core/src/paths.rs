//! Path relations, formal path extensions, maximal path relations and
//! path-joinability of ma-pre-critical pairs.

use std::collections::{BTreeSet, HashSet};
use std::sync::Arc;
use std::time::Instant;

use crate::critical::{
    enumerate_pairs, is_parallel_pair, run_parallel, stats_of, verdict_of, CheckOptions, ConfluenceReport,
    OverlapStrategy, Outcome, PairKind, PairReport, PreCriticalPair,
};
use crate::error::Error;
use crate::hypergraph::{Homomorphism, Hypergraph, NodeId, PATH_JOIN, PATH_LINK, PATH_SPLIT};
use crate::ma::{analyze_ma, canonical_interface, convex_step, reachability};
use crate::rewrite::{join, Caps, Joinability, Mode, RewritingSystem};

/// Pairs `(y, x)` of an output `y` and an input `x` of some ma graph.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PathRelation {
    pub pairs: BTreeSet<(NodeId, NodeId)>,
}

impl PathRelation {
    pub fn new(pairs: impl IntoIterator<Item = (NodeId, NodeId)>) -> Self {
        PathRelation {
            pairs: pairs.into_iter().collect(),
        }
    }

    pub fn contains(&self, y: NodeId, x: NodeId) -> bool {
        self.pairs.contains(&(y, x))
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn is_subset(&self, other: &PathRelation) -> bool {
        self.pairs.is_subset(&other.pairs)
    }
}

impl std::fmt::Display for PathRelation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("{")?;
        for (i, (y, x)) in self.pairs.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{y}->{x}")?;
        }
        f.write_str("}")
    }
}

/// Which outputs of the source reach which of its inputs in the target.
pub fn path_relation(m: &Homomorphism) -> PathRelation {
    let a = analyze_ma(m.source());
    let reach = reachability(m.target());
    let mut r = PathRelation::default();
    for &y in &a.outputs {
        for &x in &a.inputs {
            if reach[m.node(y)][m.node(x)] {
                r.pairs.insert((y, x));
            }
        }
    }
    r
}

/// `m ≲ m2`
pub fn path_covers(m: &Homomorphism, m2: &Homomorphism) -> bool {
    path_relation(m).is_subset(&path_relation(m2))
}

#[derive(Clone, Debug)]
pub struct PathExtension {
    pub base: Arc<Hypergraph>,
    pub extended: Arc<Hypergraph>,
    pub embedding: Homomorphism,
    pub relation: PathRelation,
}

/// `inside[x][y]`: input `x` reaches output `y` inside `g` (or is `y`).
fn inside_paths(g: &Hypergraph) -> (Vec<NodeId>, Vec<NodeId>, Vec<Vec<bool>>) {
    let a = analyze_ma(g);
    let reach = reachability(g);
    let mut inside = vec![vec![false; g.node_count()]; g.node_count()];
    for &x in &a.inputs {
        for &y in &a.outputs {
            inside[x][y] = x == y || reach[x][y];
        }
    }
    (a.inputs, a.outputs, inside)
}

/// The extension of `g` by formal path edges realising `r`: per output a
/// fan-out tree of splits, per input a fan-in tree of joins, and one link
/// per pair.
pub fn build_path_extension(g: &Arc<Hypergraph>, r: &PathRelation) -> Result<PathExtension, Error> {
    let (inputs, outputs, inside) = inside_paths(g);
    for &(y, x) in &r.pairs {
        if !outputs.contains(&y) || !inputs.contains(&x) {
            return Err(Error::Precondition(format!("{y}->{x} is not an output-input pair")));
        }
        if inside[x][y] {
            return Err(Error::Unrealizable(format!("{y}->{x} closes a cycle")));
        }
    }
    for &(y, x) in &r.pairs {
        for &(y2, x2) in &r.pairs {
            if inside[x][y2] && !r.contains(y, x2) {
                return Err(Error::Unrealizable(format!("{y}->{x} and {y2}->{x2} imply {y}->{x2}")));
            }
        }
    }
    let mut p = (**g).clone();
    let ports_out = fan(&mut p, r.pairs.iter().map(|&(y, _)| y), true);
    let ports_in = fan(&mut p, r.pairs.iter().map(|&(_, x)| x), false);
    for (i, _) in r.pairs.iter().enumerate() {
        p.add_edge(PATH_LINK, vec![ports_out[i]], vec![ports_in[i]]);
    }
    let extended = Arc::new(p);
    let embedding = Homomorphism::new_unchecked(
        g.clone(),
        extended.clone(),
        g.nodes().collect(),
        (0..g.edge_count()).collect(),
    );
    debug_assert_eq!(&path_relation(&embedding), r);
    Ok(PathExtension {
        base: g.clone(),
        extended,
        embedding,
        relation: r.clone(),
    })
}

/// One port per occurrence of a node, in occurrence order. Outputs fan out
/// through splits, inputs fan in through joins.
fn fan(p: &mut Hypergraph, occurrences: impl Iterator<Item = NodeId>, out: bool) -> Vec<NodeId> {
    let occ: Vec<NodeId> = occurrences.collect();
    let mut ports = vec![0; occ.len()];
    let distinct: BTreeSet<NodeId> = occ.iter().copied().collect();
    for v in distinct {
        let slots: Vec<usize> = (0..occ.len()).filter(|&i| occ[i] == v).collect();
        let mut cur = v;
        for (k, &slot) in slots.iter().enumerate() {
            if k + 1 == slots.len() {
                ports[slot] = cur;
                break;
            }
            let a = p.add_node();
            let b = p.add_node();
            if out {
                p.add_edge(PATH_SPLIT, vec![cur], vec![a, b]);
            } else {
                p.add_edge(PATH_JOIN, vec![a, b], vec![cur]);
            }
            ports[slot] = a;
            cur = b;
        }
    }
    ports
}

/// The ⊆-maximal relations `R ⊆ outputs × inputs` avoiding `forbidden`,
/// closed under composition through `paths` and creating no cycle with it.
/// `paths` holds `(x, y)` when input `x` reaches output `y`.
pub fn find_extensions(
    inputs: &[NodeId],
    outputs: &[NodeId],
    paths: &BTreeSet<(NodeId, NodeId)>,
    forbidden: &BTreeSet<(NodeId, NodeId)>,
) -> Vec<PathRelation> {
    let universe: Vec<(NodeId, NodeId)> = outputs
        .iter()
        .flat_map(|&y| inputs.iter().map(move |&x| (y, x)))
        .filter(|&(y, x)| !forbidden.contains(&(y, x)) && !paths.contains(&(x, y)))
        .collect();
    assert!(universe.len() <= 128, "relation universe too large");
    let index = |p: &(NodeId, NodeId)| universe.iter().position(|q| q == p);
    let bit = |i: usize| 1u128 << i;

    // closure of a set under composition through `paths`; None if it leaves
    // the universe (forbidden or cyclic)
    let close = |mut set: u128| -> Option<u128> {
        loop {
            let mut grown = set;
            for (i, &(y, x)) in universe.iter().enumerate() {
                if set & bit(i) == 0 {
                    continue;
                }
                for (j, &(y2, x2)) in universe.iter().enumerate() {
                    if set & bit(j) != 0 && paths.contains(&(x, y2)) {
                        grown |= bit(index(&(y, x2))?);
                    }
                }
            }
            if grown == set {
                return Some(set);
            }
            set = grown;
        }
    };

    let mut seen: HashSet<u128> = HashSet::new();
    let mut stack = vec![0u128];
    seen.insert(0);
    while let Some(set) = stack.pop() {
        for i in 0..universe.len() {
            if set & bit(i) != 0 {
                continue;
            }
            if let Some(next) = close(set | bit(i)) {
                if seen.insert(next) {
                    stack.push(next);
                }
            }
        }
    }
    let all: Vec<u128> = seen.into_iter().collect();
    let mut maximal: Vec<PathRelation> = all
        .iter()
        .filter(|&&s| !all.iter().any(|&t| t != s && t & s == s))
        .map(|&s| PathRelation::new((0..universe.len()).filter(|&i| s & bit(i) != 0).map(|i| universe[i])))
        .collect();
    maximal.sort();
    maximal
}

/// `(x, y)` for each input `x` reaching output `y` inside the overlap, and
/// the pairs `(y, x)` that would break convexity of either match.
pub fn pair_constraints(p: &PreCriticalPair) -> (BTreeSet<(NodeId, NodeId)>, BTreeSet<(NodeId, NodeId)>) {
    let s = p.source();
    let (inputs, outputs, inside) = inside_paths(s);
    let reach = reachability(s);
    let paths = inputs
        .iter()
        .flat_map(|&x| outputs.iter().map(move |&y| (x, y)))
        .filter(|&(x, y)| inside[x][y])
        .collect();
    let mut forbidden = BTreeSet::new();
    for f in [&p.f1, &p.f2] {
        let img: Vec<NodeId> = f.node_map().to_vec();
        for &y in &outputs {
            if !img.iter().any(|&v| v == y || reach[v][y]) {
                continue;
            }
            for &x in &inputs {
                if img.iter().any(|&v| v == x || reach[x][v]) {
                    forbidden.insert((y, x));
                }
            }
        }
    }
    (paths, forbidden)
}

pub fn enumerate_maximal_path_relations(p: &PreCriticalPair) -> Vec<PathRelation> {
    let (inputs, outputs, _) = inside_paths(p.source());
    let (paths, forbidden) = pair_constraints(p);
    find_extensions(&inputs, &outputs, &paths, &forbidden)
}

#[derive(Clone, Debug)]
pub enum PathJoinability {
    PathJoinable { relations: Vec<PathRelation> },
    NotPathJoinable { relation: PathRelation, extension: PathExtension },
    Truncated { relation: PathRelation },
}

/// Lifts both branches along an extension realising `r` and searches for a
/// join by convex rewriting.
pub fn join_under_extension(
    system: &RewritingSystem,
    p: &PreCriticalPair,
    r: &PathRelation,
    caps: Caps,
) -> Result<(PathExtension, Joinability), Error> {
    let ext = build_path_extension(p.source(), r)?;
    let base = canonical_interface(ext.extended.clone());
    let lift = |rule: &str, f: &Homomorphism| {
        let rule = system.rule(rule).ok_or_else(|| Error::InvalidSystem(format!("unknown rule `{rule}`")))?;
        convex_step(system, rule, &f.then(&ext.embedding)?, &base)
    };
    let s1 = lift(&p.rule1, &p.f1)?;
    let s2 = lift(&p.rule2, &p.f2)?;
    let j = join(system, &s1.result, &s2.result, caps);
    Ok((ext, j))
}

pub fn is_path_joinable(system: &RewritingSystem, p: &PreCriticalPair, caps: Caps) -> Result<PathJoinability, Error> {
    let relations = enumerate_maximal_path_relations(p);
    let mut truncated = None;
    for r in &relations {
        let (ext, j) = join_under_extension(system, p, r, caps)?;
        match j {
            Joinability::Joinable { .. } => {}
            Joinability::NotJoinable => {
                return Ok(PathJoinability::NotPathJoinable {
                    relation: r.clone(),
                    extension: ext,
                })
            }
            Joinability::Truncated => truncated = truncated.or(Some(r.clone())),
        }
    }
    Ok(match truncated {
        Some(relation) => PathJoinability::Truncated { relation },
        None => PathJoinability::PathJoinable { relations },
    })
}

/// Local confluence of a convex system: every ma-pre-critical pair must be
/// path-joinable. A negative verdict holds over the signature extended by
/// the formal path generators.
pub fn decide_local_confluence_convex(system: &RewritingSystem, opts: &CheckOptions) -> Result<ConfluenceReport, Error> {
    let system = if system.mode() == Mode::Convex {
        system.clone()
    } else {
        system.with_mode(Mode::Convex)?
    };
    let t0 = Instant::now();
    let pairs = enumerate_pairs(&system, PairKind::Ma, OverlapStrategy::Exhaustive)?;
    let enumeration_ms = t0.elapsed().as_millis();
    let t1 = Instant::now();
    let caps = opts.caps;
    let reports = run_parallel(opts.jobs, pairs, |pair| {
        let parallel = is_parallel_pair(&pair);
        let nontrivial = !pair.same_match() && !parallel;
        let outcome = match is_path_joinable(&system, &pair, caps) {
            Ok(PathJoinability::PathJoinable { .. }) => Outcome::Joinable {
                witness: None,
                left: vec![],
                right: vec![],
            },
            Ok(PathJoinability::NotPathJoinable { relation, extension }) => Outcome::NotJoinable {
                relation: Some(relation),
                extension: Some(extension),
            },
            Ok(PathJoinability::Truncated { .. }) => Outcome::Truncated,
            Err(e) => {
                log::warn!("pair {}/{}: {e}", pair.rule1, pair.rule2);
                Outcome::Truncated
            }
        };
        PairReport {
            pair,
            parallel,
            nontrivial,
            outcome,
        }
    });
    let checking_ms = t1.elapsed().as_millis();
    let stats = stats_of(&reports, enumeration_ms, checking_ms);
    Ok(ConfluenceReport {
        mode: Mode::Convex,
        kind: PairKind::Ma,
        verdict: Some(verdict_of(&reports)),
        pairs: reports,
        stats,
        caps,
        assumes_termination: true,
        notes: vec!["local confluence through path extensions; failures are witnessed over the signature extended by %join, %split, %link".into()],
    })
}
