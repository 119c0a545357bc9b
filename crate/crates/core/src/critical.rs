//! Pre-critical pairs, parallel pairs, joinability and confluence reports.

use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;

use crate::category::{pullback, pushout_complements, UnionFind};
use crate::error::Error;
use crate::hom::are_isomorphic;
use crate::hypergraph::{discrete, EdgeId, GraphWithInterface, Homomorphism, Hypergraph, NodeId};
use crate::ma;
use crate::paths::{PathExtension, PathRelation};
use crate::rewrite::{apply_step, join, Caps, Derivation, Joinability, Mode, RewriteRule, RewriteStep, RewritingSystem};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PairKind {
    /// Interface is the pullback of the two contexts.
    Plain,
    /// Overlap is ma and the interface is its inputs then outputs.
    Ma,
    /// Classical pairs with an empty interface.
    Ground,
}

#[derive(Clone, Debug)]
pub struct PreCriticalPair {
    pub rule1: String,
    pub rule2: String,
    pub kind: PairKind,
    /// `S ← J`
    pub overlap: GraphWithInterface,
    pub f1: Homomorphism,
    pub f2: Homomorphism,
    pub step1: RewriteStep,
    pub step2: RewriteStep,
}

impl PreCriticalPair {
    pub fn source(&self) -> &Arc<Hypergraph> {
        self.overlap.graph()
    }

    pub fn branches(&self) -> (&GraphWithInterface, &GraphWithInterface) {
        (&self.step1.result, &self.step2.result)
    }

    /// Number of edges of `S` hit by both matches.
    pub fn shared_edges(&self) -> usize {
        let a = self.f1.image_edges();
        let b = self.f2.image_edges();
        a.iter().zip(&b).filter(|(x, y)| **x && **y).count()
    }

    /// The rule names with the pairs of left-side edges sent to the same edge
    /// of `S`.
    pub fn overlap_signature(&self) -> (String, String, Vec<(EdgeId, EdgeId)>) {
        let mut shared = Vec::new();
        for (a, &x) in self.f1.edge_map().iter().enumerate() {
            for (b, &y) in self.f2.edge_map().iter().enumerate() {
                if x == y {
                    shared.push((a, b));
                }
            }
        }
        (self.rule1.clone(), self.rule2.clone(), shared)
    }

    pub fn same_match(&self) -> bool {
        self.rule1 == self.rule2 && self.f1.node_map() == self.f2.node_map() && self.f1.edge_map() == self.f2.edge_map()
    }

    /// Neither parallel nor the same rule applied at the same match.
    pub fn has_nontrivial_overlap(&self) -> bool {
        !self.same_match() && !is_parallel_pair(self)
    }

    /// Checks the structural invariants of a pair.
    pub fn validate(&self, system: &RewritingSystem) -> Result<(), String> {
        let mut node_hit = vec![false; self.source().node_count()];
        let mut edge_hit = vec![false; self.source().edge_count()];
        for f in [&self.f1, &self.f2] {
            for &y in f.node_map() {
                node_hit[y] = true;
            }
            for &e in f.edge_map() {
                edge_hit[e] = true;
            }
        }
        if node_hit.contains(&false) || edge_hit.contains(&false) {
            return Err("matches are not jointly epi".into());
        }
        for (step, name) in [(&self.step1, &self.rule1), (&self.step2, &self.rule2)] {
            let rule = system.rule(name).ok_or("unknown rule")?;
            if !step.verify(rule) {
                return Err(format!("branch for `{name}` is not a valid step"));
            }
        }
        match self.kind {
            PairKind::Plain => {
                let pb = pullback(&self.step1.complement.c_to_g, &self.step2.complement.c_to_g).map_err(|e| e.to_string())?;
                let j = &self.step1.interface_factor;
                let k = &self.step2.interface_factor;
                let iso = pb.object.node_count() == j.source().node_count()
                    && pb.object.edge_count() == j.source().edge_count()
                    && (0..pb.object.node_count()).all(|v| pb.left.node(v) == j.node(v) && pb.right.node(v) == k.node(v));
                if !iso {
                    return Err("interface is not the pullback of the contexts".into());
                }
            }
            PairKind::Ma => {
                if ma::ma_split(&self.overlap).is_none() {
                    return Err("overlap is not an ma graph with its boundary as interface".into());
                }
            }
            PairKind::Ground => {}
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum OverlapStrategy {
    /// Node merges forced by shared edges, plus merges of isolated nodes.
    #[default]
    Minimal,
    /// Every node partition.
    Exhaustive,
}

/// Pre-critical pairs of the system, of the kind its mode fixes.
pub fn enumerate_pre_critical_pairs(system: &RewritingSystem) -> Result<Vec<PreCriticalPair>, Error> {
    match system.mode() {
        Mode::Convex => enumerate_pairs(system, PairKind::Ma, OverlapStrategy::Exhaustive),
        _ => enumerate_pairs(system, PairKind::Plain, OverlapStrategy::Minimal),
    }
}

/// Pre-critical pairs for every ordered rule pair `i <= j`.
pub fn enumerate_pairs(
    system: &RewritingSystem,
    kind: PairKind,
    strategy: OverlapStrategy,
) -> Result<Vec<PreCriticalPair>, Error> {
    let strategy = if kind == PairKind::Ma { OverlapStrategy::Exhaustive } else { strategy };
    let rules = system.rules();
    let mut out = Vec::new();
    for i in 0..rules.len() {
        for j in i..rules.len() {
            overlaps(system, &rules[i], &rules[j], kind, strategy, &mut out)?;
        }
    }
    Ok(out)
}

/// An item of `L1 + L2`: side, and node or edge id within that side.
type Item = (u8, bool, usize);

struct Overlap {
    s: Arc<Hypergraph>,
    f1: Homomorphism,
    f2: Homomorphism,
    key: Vec<Vec<Item>>,
}

fn overlaps(
    system: &RewritingSystem,
    r1: &RewriteRule,
    r2: &RewriteRule,
    kind: PairKind,
    strategy: OverlapStrategy,
    out: &mut Vec<PreCriticalPair>,
) -> Result<(), Error> {
    let mono = kind == PairKind::Ma;
    let same = r1.name() == r2.name();
    for ov in quotients(r1, r2, mono, strategy) {
        if same && swapped_key(&ov.key) < ov.key {
            continue;
        }
        let source = match kind {
            PairKind::Ma => {
                if !ma::analyze_ma(&ov.s).is_ma() {
                    continue;
                }
                ma::canonical_interface(ov.s.clone())
            }
            _ => GraphWithInterface::bare(ov.s.clone()),
        };
        if kind == PairKind::Ma {
            let (Ok(s1), Ok(s2)) = (
                ma::convex_step(system, r1, &ov.f1, &source),
                ma::convex_step(system, r2, &ov.f2, &source),
            ) else {
                continue;
            };
            out.push(PreCriticalPair {
                rule1: r1.name().into(),
                rule2: r2.name().into(),
                kind,
                overlap: source,
                f1: ov.f1,
                f2: ov.f2,
                step1: s1,
                step2: s2,
            });
            continue;
        }
        let comps1 = pushout_complements(r1.left(), &ov.f1)?;
        let comps2 = pushout_complements(r2.left(), &ov.f2)?;
        for c1 in &comps1 {
            for c2 in &comps2 {
                let (iface, j1, j2) = if kind == PairKind::Ground {
                    let j = Arc::new(discrete(0));
                    (
                        Homomorphism::new_unchecked(j.clone(), ov.s.clone(), vec![], vec![]),
                        Homomorphism::new_unchecked(j.clone(), c1.context().clone(), vec![], vec![]),
                        Homomorphism::new_unchecked(j, c2.context().clone(), vec![], vec![]),
                    )
                } else {
                    let pb = pullback(&c1.c_to_g, &c2.c_to_g)?;
                    if !pb.object.is_discrete() {
                        return Err(Error::UnsupportedRuleShape(format!(
                            "overlap of `{}` and `{}` has an interface with edges",
                            r1.name(),
                            r2.name()
                        )));
                    }
                    (pb.left.then(&c1.c_to_g)?, pb.left, pb.right)
                };
                let overlap = GraphWithInterface::new(iface)?;
                let step1 = RewriteStep::build(r1, &overlap, ov.f1.clone(), c1.clone(), j1)?;
                let step2 = RewriteStep::build(r2, &overlap, ov.f2.clone(), c2.clone(), j2)?;
                out.push(PreCriticalPair {
                    rule1: r1.name().into(),
                    rule2: r2.name().into(),
                    kind,
                    overlap,
                    f1: ov.f1.clone(),
                    f2: ov.f2.clone(),
                    step1,
                    step2,
                });
            }
        }
    }
    Ok(())
}

fn swapped_key(key: &[Vec<Item>]) -> Vec<Vec<Item>> {
    let mut k: Vec<Vec<Item>> = key
        .iter()
        .map(|b| {
            let mut b: Vec<Item> = b.iter().map(|&(s, e, i)| (1 - s, e, i)).collect();
            b.sort_unstable();
            b
        })
        .collect();
    k.sort_unstable();
    k
}

/// Jointly epi quotients of `L1 + L2` under the strategy.
fn quotients(r1: &RewriteRule, r2: &RewriteRule, mono: bool, strategy: OverlapStrategy) -> Vec<Overlap> {
    let sides = [r1.lhs().as_ref(), r2.lhs().as_ref()];
    let kept = [r1.left().image_edges(), r2.left().image_edges()];
    let edges: Vec<(u8, EdgeId)> = (0..2u8)
        .flat_map(|s| (0..sides[s as usize].edge_count()).map(move |e| (s, e)))
        .collect();
    let n1 = sides[0].node_count();
    let node_global = |s: u8, v: NodeId| if s == 0 { v } else { n1 + v };
    let total_nodes = n1 + sides[1].node_count();
    let edge_of = |(s, e): (u8, EdgeId)| sides[s as usize].edge(e);

    let mut out = Vec::new();
    let mut blocks: Vec<Vec<(u8, EdgeId)>> = Vec::new();
    let mut edge_partitions: Vec<Vec<Vec<(u8, EdgeId)>>> = Vec::new();
    fn rec(
        i: usize,
        edges: &[(u8, EdgeId)],
        blocks: &mut Vec<Vec<(u8, EdgeId)>>,
        ok: &dyn Fn(&[(u8, EdgeId)], (u8, EdgeId)) -> bool,
        out: &mut Vec<Vec<Vec<(u8, EdgeId)>>>,
    ) {
        if i == edges.len() {
            out.push(blocks.clone());
            return;
        }
        let e = edges[i];
        for b in 0..blocks.len() {
            if ok(&blocks[b], e) {
                blocks[b].push(e);
                rec(i + 1, edges, blocks, ok, out);
                blocks[b].pop();
            }
        }
        blocks.push(vec![e]);
        rec(i + 1, edges, blocks, ok, out);
        blocks.pop();
    }
    let ok = |block: &[(u8, EdgeId)], e: (u8, EdgeId)| {
        if edge_of(block[0]).label != edge_of(e).label {
            return false;
        }
        let same_side: Vec<&(u8, EdgeId)> = block.iter().filter(|x| x.0 == e.0).collect();
        if same_side.is_empty() {
            return true;
        }
        // identifying edges of one side needs them all in the interface
        !mono && kept[e.0 as usize][e.1] && same_side.iter().all(|x| kept[x.0 as usize][x.1])
    };
    rec(0, &edges, &mut blocks, &ok, &mut edge_partitions);

    let isolated: Vec<bool> = (0..2u8)
        .flat_map(|s| {
            let g = sides[s as usize];
            let inc = g.incidence();
            (0..g.node_count()).map(move |v| inc[v].is_empty())
        })
        .collect();
    let side_of = |x: usize| usize::from(x >= n1);

    for eblocks in edge_partitions {
        let mut uf = UnionFind::new(total_nodes);
        for b in &eblocks {
            let first = edge_of(b[0]);
            for &other in &b[1..] {
                let e = edge_of(other);
                for (x, y) in first.sources.iter().zip(&e.sources).chain(first.targets.iter().zip(&e.targets)) {
                    uf.union(node_global(b[0].0, *x), node_global(other.0, *y));
                }
            }
        }
        let (class_of, nclasses) = uf.classes();
        let mut members: Vec<Vec<usize>> = vec![Vec::new(); nclasses];
        for (x, &c) in class_of.iter().enumerate() {
            members[c].push(x);
        }
        let mut sides_in = vec![[0usize; 2]; nclasses];
        for (x, &c) in class_of.iter().enumerate() {
            sides_in[c][side_of(x)] += 1;
        }
        if mono && sides_in.iter().any(|s| s[0] > 1 || s[1] > 1) {
            continue;
        }
        let mut indeg = vec![0usize; nclasses];
        let mut outdeg = vec![0usize; nclasses];
        for b in &eblocks {
            let e = edge_of(b[0]);
            for &t in &e.targets {
                indeg[class_of[node_global(b[0].0, t)]] += 1;
            }
            for &s in &e.sources {
                outdeg[class_of[node_global(b[0].0, s)]] += 1;
            }
        }
        if mono && (indeg.iter().any(|&d| d > 1) || outdeg.iter().any(|&d| d > 1)) {
            continue;
        }
        let free: Vec<bool> = members.iter().map(|m| m.iter().all(|&x| isolated[x])).collect();

        // groups of classes
        let mut groups: Vec<Vec<usize>> = Vec::new();
        let mut groupings = Vec::new();
        group_classes(
            0,
            nclasses,
            &mut groups,
            &mut |g: &[usize], c: usize| {
                let mut s = sides_in[c];
                let (mut i, mut o) = (indeg[c], outdeg[c]);
                let mut nonfree = usize::from(!free[c]);
                for &d in g {
                    s[0] += sides_in[d][0];
                    s[1] += sides_in[d][1];
                    i += indeg[d];
                    o += outdeg[d];
                    nonfree += usize::from(!free[d]);
                }
                if mono && (s[0] > 1 || s[1] > 1 || i > 1 || o > 1) {
                    return false;
                }
                strategy == OverlapStrategy::Exhaustive || nonfree <= 1
            },
            &mut groupings,
        );

        for grouping in groupings {
            let mut node_of_class = vec![0; nclasses];
            for (gi, g) in grouping.iter().enumerate() {
                for &c in g {
                    node_of_class[c] = gi;
                }
            }
            let node_of = |x: usize| node_of_class[class_of[x]];
            let mut s = Hypergraph::with_nodes(grouping.len());
            let mut edge_block = [vec![0; sides[0].edge_count()], vec![0; sides[1].edge_count()]];
            for (bi, b) in eblocks.iter().enumerate() {
                let e = edge_of(b[0]);
                let g = |v: &NodeId| node_of(node_global(b[0].0, *v));
                s.add_edge(&e.label, e.sources.iter().map(g).collect(), e.targets.iter().map(g).collect());
                for &(side, id) in b {
                    edge_block[side as usize][id] = bi;
                }
            }
            let s = Arc::new(s);
            let f1 = Homomorphism::new_unchecked(
                r1.lhs().clone(),
                s.clone(),
                (0..n1).map(node_of).collect(),
                edge_block[0].clone(),
            );
            let f2 = Homomorphism::new_unchecked(
                r2.lhs().clone(),
                s.clone(),
                (0..sides[1].node_count()).map(|v| node_of(n1 + v)).collect(),
                edge_block[1].clone(),
            );
            let mut key: Vec<Vec<Item>> = Vec::new();
            for g in &grouping {
                let mut b: Vec<Item> = g
                    .iter()
                    .flat_map(|&c| members[c].iter())
                    .map(|&x| if x < n1 { (0, false, x) } else { (1, false, x - n1) })
                    .collect();
                b.sort_unstable();
                key.push(b);
            }
            for b in &eblocks {
                let mut b: Vec<Item> = b.iter().map(|&(side, e)| (side, true, e)).collect();
                b.sort_unstable();
                key.push(b);
            }
            key.sort_unstable();
            out.push(Overlap { s, f1, f2, key });
        }
    }
    out
}

fn group_classes(
    c: usize,
    n: usize,
    groups: &mut Vec<Vec<usize>>,
    ok: &mut dyn FnMut(&[usize], usize) -> bool,
    out: &mut Vec<Vec<Vec<usize>>>,
) {
    if c == n {
        out.push(groups.clone());
        return;
    }
    for g in 0..groups.len() {
        if ok(&groups[g], c) {
            groups[g].push(c);
            group_classes(c + 1, n, groups, ok, out);
            groups[g].pop();
        }
    }
    groups.push(vec![c]);
    group_classes(c + 1, n, groups, ok, out);
    groups.pop();
}

/// Both matches survive the other rule's deletion, and both contexts embed.
pub fn is_parallel_pair(p: &PreCriticalPair) -> bool {
    let c1 = &p.step1.complement.c_to_g;
    let c2 = &p.step2.complement.c_to_g;
    if !c1.is_mono() || !c2.is_mono() {
        return false;
    }
    let Ok(x) = pullback(&p.f1, c2) else { return false };
    let Ok(y) = pullback(&p.f2, c1) else { return false };
    x.left.is_iso() && y.left.is_iso()
}

/// One step per branch: the second rule at its match carried into the first
/// result, and symmetrically. Returns the two closing steps if their
/// results agree.
pub fn parallel_join(system: &RewritingSystem, p: &PreCriticalPair) -> Option<(RewriteStep, RewriteStep)> {
    if !is_parallel_pair(p) {
        return None;
    }
    let r1 = system.rule(&p.rule1)?;
    let r2 = system.rule(&p.rule2)?;
    let carry = |f: &Homomorphism, other: &RewriteStep| -> Option<Homomorphism> {
        let pb = pullback(f, &other.complement.c_to_g).ok()?;
        let back = pb.left.inverse()?;
        back.then(&pb.right).ok()?.then(&other.context_to_result).ok()
    };
    let m2 = carry(&p.f2, &p.step1)?;
    let m1 = carry(&p.f1, &p.step2)?;
    let on1 = apply_step(system, r2, &m2, &p.step1.result).ok()?;
    let on2 = apply_step(system, r1, &m1, &p.step2.result).ok()?;
    for a in &on1 {
        for b in &on2 {
            if are_isomorphic(&a.result, &b.result).is_some() {
                return Some((a.clone(), b.clone()));
            }
        }
    }
    None
}

pub fn check_joinable(system: &RewritingSystem, p: &PreCriticalPair, caps: Caps) -> Joinability {
    join(system, &p.step1.result, &p.step2.result, caps)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Confluent,
    NotConfluent,
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Confluent => "confluent",
            Verdict::NotConfluent => "not-confluent",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Clone, Debug)]
pub enum Outcome {
    Joinable {
        /// Common reduct, absent when several path extensions were joined.
        witness: Option<GraphWithInterface>,
        left: Derivation,
        right: Derivation,
    },
    NotJoinable {
        relation: Option<PathRelation>,
        extension: Option<PathExtension>,
    },
    Truncated,
}

impl Outcome {
    pub fn is_joinable(&self) -> bool {
        matches!(self, Outcome::Joinable { .. })
    }

    pub fn from_joinability(j: Joinability) -> Self {
        match j {
            Joinability::Joinable { witness, left, right } => Outcome::Joinable {
                witness: Some(witness),
                left,
                right,
            },
            Joinability::NotJoinable => Outcome::NotJoinable {
                relation: None,
                extension: None,
            },
            Joinability::Truncated => Outcome::Truncated,
        }
    }
}

#[derive(Clone, Debug)]
pub struct PairReport {
    pub pair: PreCriticalPair,
    pub parallel: bool,
    pub nontrivial: bool,
    pub outcome: Outcome,
}

#[derive(Clone, Debug, Default)]
pub struct Stats {
    pub pairs: usize,
    pub nontrivial: usize,
    pub parallel: usize,
    pub joinable: usize,
    pub not_joinable: usize,
    pub truncated: usize,
    pub enumeration_ms: u128,
    pub checking_ms: u128,
}

#[derive(Clone, Debug)]
pub struct ConfluenceReport {
    pub mode: Mode,
    pub kind: PairKind,
    /// Absent for ground pairs, where no verdict is drawn.
    pub verdict: Option<Verdict>,
    pub pairs: Vec<PairReport>,
    pub stats: Stats,
    pub caps: Caps,
    /// Verdicts assume the system terminates.
    pub assumes_termination: bool,
    pub notes: Vec<String>,
}

impl ConfluenceReport {
    pub fn truncated(&self) -> bool {
        self.stats.truncated > 0
    }

    pub fn first_failure(&self) -> Option<&PairReport> {
        self.pairs.iter().find(|p| matches!(p.outcome, Outcome::NotJoinable { .. }))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CheckOptions {
    pub caps: Caps,
    /// Worker threads for joinability checks; 0 picks the default.
    pub jobs: usize,
    pub strategy: OverlapStrategy,
    pub empty_interface: bool,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            caps: Caps::default(),
            jobs: 0,
            strategy: OverlapStrategy::Minimal,
            empty_interface: false,
        }
    }
}

pub(crate) fn run_parallel<T: Send, R: Send>(jobs: usize, items: Vec<T>, f: impl Fn(T) -> R + Sync + Send) -> Vec<R> {
    match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
        Ok(pool) => pool.install(|| items.into_par_iter().map(&f).collect()),
        Err(e) => {
            log::warn!("thread pool: {e}; running sequentially");
            items.into_iter().map(f).collect()
        }
    }
}

pub(crate) fn verdict_of(pairs: &[PairReport]) -> Verdict {
    if pairs.iter().any(|p| matches!(p.outcome, Outcome::NotJoinable { .. })) {
        Verdict::NotConfluent
    } else if pairs.iter().any(|p| matches!(p.outcome, Outcome::Truncated)) {
        Verdict::Inconclusive
    } else {
        Verdict::Confluent
    }
}

pub(crate) fn stats_of(pairs: &[PairReport], enumeration_ms: u128, checking_ms: u128) -> Stats {
    Stats {
        pairs: pairs.len(),
        nontrivial: pairs.iter().filter(|p| p.nontrivial).count(),
        parallel: pairs.iter().filter(|p| p.parallel).count(),
        joinable: pairs.iter().filter(|p| p.outcome.is_joinable()).count(),
        not_joinable: pairs.iter().filter(|p| matches!(p.outcome, Outcome::NotJoinable { .. })).count(),
        truncated: pairs.iter().filter(|p| matches!(p.outcome, Outcome::Truncated)).count(),
        enumeration_ms,
        checking_ms,
    }
}

fn report_pairs(system: &RewritingSystem, kind: PairKind, opts: &CheckOptions) -> Result<ConfluenceReport, Error> {
    let t0 = Instant::now();
    let strategy = if kind == PairKind::Ground { OverlapStrategy::Exhaustive } else { opts.strategy };
    let pairs = enumerate_pairs(system, kind, strategy)?;
    let enumeration_ms = t0.elapsed().as_millis();
    let t1 = Instant::now();
    let caps = opts.caps;
    let reports = run_parallel(opts.jobs, pairs, |pair| {
        let parallel = is_parallel_pair(&pair);
        let nontrivial = !pair.same_match() && !parallel;
        let outcome = Outcome::from_joinability(check_joinable(system, &pair, caps));
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
        mode: system.mode(),
        kind,
        verdict: (kind != PairKind::Ground).then(|| verdict_of(&reports)),
        pairs: reports,
        stats,
        caps,
        assumes_termination: true,
        notes: vec![],
    })
}

/// Confluence of a terminating system through its pre-critical pairs.
/// Convex systems go through [`decide_confluence_left_connected`].
pub fn decide_confluence(system: &RewritingSystem, opts: &CheckOptions) -> Result<ConfluenceReport, Error> {
    if opts.empty_interface {
        let mut r = report_pairs(system, PairKind::Ground, opts)?;
        r.notes.push("ground pairs: joinability listed, no verdict drawn".into());
        return Ok(r);
    }
    if system.mode() == Mode::Convex {
        return decide_confluence_left_connected(system, opts);
    }
    report_pairs(system, PairKind::Plain, opts)
}

/// Confluence of a terminating left-connected convex system through its
/// ma-pre-critical pairs.
pub fn decide_confluence_left_connected(system: &RewritingSystem, opts: &CheckOptions) -> Result<ConfluenceReport, Error> {
    if let Some(why) = ma::left_connected_failure(system) {
        return Err(Error::NotLeftConnected(why));
    }
    let system = if system.mode() == Mode::Convex {
        system.clone()
    } else {
        system.with_mode(Mode::Convex)?
    };
    report_pairs(&system, PairKind::Ma, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frobenius::translate_system;
    use crate::hypergraph::Signature;
    use crate::term::parse_term;

    fn swap_system() -> RewritingSystem {
        let l = {
            let mut g = Hypergraph::with_nodes(2);
            g.add_edge("a", vec![0], vec![1]);
            Arc::new(g)
        };
        let r1 = {
            let mut g = Hypergraph::with_nodes(2);
            g.add_edge("b", vec![0], vec![1]);
            Arc::new(g)
        };
        let r2 = {
            let mut g = Hypergraph::with_nodes(2);
            g.add_edge("b", vec![1], vec![0]);
            Arc::new(g)
        };
        let k = Arc::new(discrete(2));
        let rule = |name: &str, r: &Arc<Hypergraph>| {
            RewriteRule::new(
                name,
                Homomorphism::new(k.clone(), l.clone(), vec![0, 1], vec![]).unwrap(),
                Homomorphism::new(k.clone(), r.clone(), vec![0, 1], vec![]).unwrap(),
            )
            .unwrap()
        };
        let sig = Signature::new().with("a", 1, 1).with("b", 1, 1).with("c", 1, 0);
        RewritingSystem::new(sig, vec![rule("p1", &r1), rule("p2", &r2)], Mode::Plain).unwrap()
    }

    #[test]
    fn swap_with_interfaces_is_not_confluent() {
        let sys = swap_system();
        let rep = decide_confluence(&sys, &CheckOptions::default()).unwrap();
        assert_eq!(rep.verdict, Some(Verdict::NotConfluent));
        let bad = rep.first_failure().unwrap();
        assert_eq!((bad.pair.rule1.as_str(), bad.pair.rule2.as_str()), ("p1", "p2"));
        assert_eq!(bad.pair.overlap.interface_size(), 2);
        for p in &rep.pairs {
            p.pair.validate(&sys).unwrap();
        }
    }

    #[test]
    fn swap_ground_pairs_all_join() {
        let opts = CheckOptions {
            empty_interface: true,
            ..CheckOptions::default()
        };
        let rep = decide_confluence(&swap_system(), &opts).unwrap();
        assert_eq!(rep.verdict, None);
        let nontrivial: Vec<_> = rep.pairs.iter().filter(|p| p.pair.shared_edges() > 0 && !p.pair.same_match()).collect();
        assert_eq!(nontrivial.len(), 2);
        assert!(rep.pairs.iter().all(|p| p.outcome.is_joinable()));
    }

    #[test]
    fn disjoint_labels_give_parallel_pairs() {
        let sig = Signature::new().with("a", 1, 1).with("b", 1, 1).with("c", 1, 1);
        let t = |s: &str| parse_term(s).unwrap();
        let sys = translate_system(&sig, &[("r".into(), t("a"), t("c")), ("s".into(), t("b"), t("c"))]).unwrap();
        let pairs = enumerate_pre_critical_pairs(&sys).unwrap();
        let rs: Vec<_> = pairs.iter().filter(|p| p.rule1 != p.rule2).collect();
        assert!(!rs.is_empty());
        for p in rs {
            assert!(is_parallel_pair(p));
            assert!(parallel_join(&sys, p).is_some());
        }
    }
}
