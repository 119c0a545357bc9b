//! Rules, rewriting systems, single DPO steps on graphs with interface, and
//! breadth-first exploration up to isomorphism.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::category::{is_pushout, pushout, pushout_complements, Complement, Square};
use crate::error::Error;
use crate::hom::{are_isomorphic, homomorphisms, IsoSet};
use crate::hypergraph::{
    discrete, same_graph, validate, GraphWithInterface, Homomorphism, Hypergraph, NodeId, Signature,
};
use crate::ma;

/// A span `L ← K → R`.
#[derive(Clone, Debug)]
pub struct RewriteRule {
    name: String,
    left: Homomorphism,
    right: Homomorphism,
    boundary: Option<(usize, usize)>,
}

impl RewriteRule {
    pub fn new(name: &str, left: Homomorphism, right: Homomorphism) -> Result<Self, Error> {
        if !same_graph(left.source(), right.source()) {
            return Err(Error::InvalidRule(name.into(), "legs have different sources".into()));
        }
        Ok(RewriteRule {
            name: name.into(),
            left,
            right,
            boundary: None,
        })
    }

    /// A rule whose interface is `i + j`, read as the cospans `i → L ← j`
    /// and `i → R ← j`.
    pub fn with_boundary(name: &str, left: Homomorphism, right: Homomorphism, i: usize, j: usize) -> Result<Self, Error> {
        let mut r = Self::new(name, left, right)?;
        if !r.interface().is_discrete() || r.interface().node_count() != i + j {
            return Err(Error::InvalidRule(name.into(), format!("interface is not discrete({})", i + j)));
        }
        r.boundary = Some((i, j));
        Ok(r)
    }

    /// Builds the rule `L ← n → R` from two graphs with interfaces over the
    /// same discrete `J`.
    pub fn from_interfaces(name: &str, lhs: &GraphWithInterface, rhs: &GraphWithInterface) -> Result<Self, Error> {
        if lhs.interface_size() != rhs.interface_size() {
            return Err(Error::InvalidRule(name.into(), "sides have different interfaces".into()));
        }
        let k = Arc::new(discrete(lhs.interface_size()));
        let left = lhs.interface().resource(k.clone());
        let right = rhs.interface().resource(k);
        Self::new(name, left, right)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn left(&self) -> &Homomorphism {
        &self.left
    }

    pub fn right(&self) -> &Homomorphism {
        &self.right
    }

    pub fn lhs(&self) -> &Arc<Hypergraph> {
        self.left.target()
    }

    pub fn rhs(&self) -> &Arc<Hypergraph> {
        self.right.target()
    }

    pub fn interface(&self) -> &Arc<Hypergraph> {
        self.left.source()
    }

    pub fn boundary(&self) -> Option<(usize, usize)> {
        self.boundary
    }

    pub fn is_left_linear(&self) -> bool {
        self.left.is_mono()
    }

    pub fn has_discrete_interface(&self) -> bool {
        self.interface().is_discrete()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Plain,
    Frobenius,
    Convex,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Plain => "plain",
            Mode::Frobenius => "frobenius",
            Mode::Convex => "convex",
        })
    }
}

impl FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "plain" | "plain-dpoi" => Ok(Mode::Plain),
            "frobenius" => Ok(Mode::Frobenius),
            "convex" => Ok(Mode::Convex),
            _ => Err(format!("unknown mode `{s}` (expected plain, frobenius or convex)")),
        }
    }
}

#[derive(Clone, Debug)]
pub struct RewritingSystem {
    signature: Signature,
    rules: Vec<RewriteRule>,
    mode: Mode,
}

impl RewritingSystem {
    pub fn new(signature: Signature, rules: Vec<RewriteRule>, mode: Mode) -> Result<Self, Error> {
        for r in &rules {
            for (side, g) in [("left", r.lhs()), ("right", r.rhs())] {
                if let Some(v) = validate(g, &signature).first() {
                    return Err(Error::InvalidRule(r.name.clone(), format!("{side} side: {v}")));
                }
            }
            match mode {
                Mode::Frobenius if !r.has_discrete_interface() => {
                    return Err(Error::InvalidRule(r.name.clone(), "interface must be discrete".into()));
                }
                Mode::Convex => {
                    if !r.is_left_linear() {
                        return Err(Error::InvalidRule(
                            r.name.clone(),
                            "convex rewriting needs a left-linear rule".into(),
                        ));
                    }
                    if !ma::is_ma_rule(r) {
                        return Err(Error::InvalidRule(r.name.clone(), "sides are not ma-cospans".into()));
                    }
                }
                _ => {}
            }
        }
        let mut names: Vec<&str> = rules.iter().map(|r| r.name()).collect();
        names.sort_unstable();
        if let Some(w) = names.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidSystem(format!("rule `{}` defined twice", w[0])));
        }
        Ok(RewritingSystem { signature, rules, mode })
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn rules(&self) -> &[RewriteRule] {
        &self.rules
    }

    pub fn rule(&self, name: &str) -> Option<&RewriteRule> {
        self.rules.iter().find(|r| r.name == name)
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// Same rules under another mode, re-checking the mode's invariants.
    pub fn with_mode(&self, mode: Mode) -> Result<Self, Error> {
        Self::new(self.signature.clone(), self.rules.clone(), mode)
    }

    pub fn match_constraint(&self) -> MatchConstraint {
        match self.mode {
            Mode::Convex => MatchConstraint::Convex,
            _ => MatchConstraint::Any,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatchConstraint {
    Any,
    Mono,
    Convex,
}

/// One DPO step `G ← J  ⇒  H ← J`.
#[derive(Clone, Debug)]
pub struct RewriteStep {
    pub rule: String,
    pub source: GraphWithInterface,
    pub matching: Homomorphism,
    pub complement: Complement,
    /// `J → C`
    pub interface_factor: Homomorphism,
    /// `R → H`
    pub comatch: Homomorphism,
    /// `C → H`
    pub context_to_result: Homomorphism,
    pub result: GraphWithInterface,
}

impl RewriteStep {
    pub(crate) fn build(
        rule: &RewriteRule,
        source: &GraphWithInterface,
        matching: Homomorphism,
        complement: Complement,
        interface_factor: Homomorphism,
    ) -> Result<Self, Error> {
        let po = pushout(&complement.k_to_c, rule.right())?;
        let result = GraphWithInterface::new(interface_factor.then(&po.left)?)?;
        Ok(RewriteStep {
            rule: rule.name().to_string(),
            source: source.clone(),
            matching,
            complement,
            interface_factor,
            comatch: po.right,
            context_to_result: po.left,
            result,
        })
    }

    pub fn context(&self) -> &Arc<Hypergraph> {
        self.complement.context()
    }

    /// Re-checks the step diagram: both squares are pushouts and the
    /// interface factors through the context on both sides.
    pub fn verify(&self, rule: &RewriteRule) -> bool {
        let c = &self.complement;
        let left = Square::new(rule.left().clone(), c.k_to_c.clone(), self.matching.clone(), c.c_to_g.clone());
        let right = Square::new(
            rule.right().clone(),
            c.k_to_c.clone(),
            self.comatch.clone(),
            self.context_to_result.clone(),
        );
        let tri_in = self.interface_factor.then(&c.c_to_g).ok().as_ref() == Some(self.source.interface());
        let tri_out =
            self.interface_factor.then(&self.context_to_result).ok().as_ref() == Some(self.result.interface());
        tri_in && tri_out && is_pushout(&left).unwrap_or(false) && is_pushout(&right).unwrap_or(false)
    }
}

pub type Derivation = Vec<RewriteStep>;

/// Homomorphisms `L → G` satisfying the constraint, in a fixed order.
pub fn find_matches(rule: &RewriteRule, g: &GraphWithInterface, constraint: MatchConstraint) -> Vec<Homomorphism> {
    let all = homomorphisms(rule.lhs(), g.graph(), constraint != MatchConstraint::Any);
    match constraint {
        MatchConstraint::Convex => all.into_iter().filter(ma::is_convex_match).collect(),
        _ => all,
    }
}

/// All factorisations `J → C` of the interface through `C → G`.
pub(crate) fn interface_factorings(g: &GraphWithInterface, c_to_g: &Homomorphism) -> Vec<Homomorphism> {
    let ctx = c_to_g.source();
    let mut over: Vec<Vec<NodeId>> = vec![Vec::new(); g.graph().node_count()];
    for y in ctx.nodes() {
        over[c_to_g.node(y)].push(y);
    }
    let cands: Vec<&Vec<NodeId>> = g.interface_nodes().iter().map(|&v| &over[v]).collect();
    if cands.iter().any(|c| c.is_empty()) {
        return vec![];
    }
    let j = g.interface().source().clone();
    let mut out = Vec::new();
    let mut pick = vec![0usize; cands.len()];
    loop {
        let nodes = pick.iter().zip(&cands).map(|(&i, c)| c[i]).collect();
        out.push(Homomorphism::new_unchecked(j.clone(), ctx.clone(), nodes, vec![]));
        let mut i = 0;
        loop {
            if i == pick.len() {
                return out;
            }
            pick[i] += 1;
            if pick[i] < cands[i].len() {
                break;
            }
            pick[i] = 0;
            i += 1;
        }
    }
}

/// The steps of `rule` at `matching`, one per complement and interface
/// factorisation, up to isomorphism of the result.
pub fn apply_step(
    system: &RewritingSystem,
    rule: &RewriteRule,
    matching: &Homomorphism,
    g: &GraphWithInterface,
) -> Result<Vec<RewriteStep>, Error> {
    if system.mode() == Mode::Convex {
        return Ok(ma::convex_step(system, rule, matching, g).into_iter().collect());
    }
    let mut out: Vec<RewriteStep> = Vec::new();
    for comp in pushout_complements(rule.left(), matching)? {
        let factors = interface_factorings(g, &comp.c_to_g);
        if factors.is_empty() {
            log::debug!("rule {}: interface does not factor through a complement", rule.name());
        }
        for f in factors {
            let step = RewriteStep::build(rule, g, matching.clone(), comp.clone(), f)?;
            if !out.iter().any(|s| are_isomorphic(&s.result, &step.result).is_some()) {
                out.push(step);
            }
        }
    }
    Ok(out)
}

/// Every step from `g`, de-duplicated up to isomorphism of the result.
pub fn enumerate_steps(system: &RewritingSystem, g: &GraphWithInterface) -> Vec<RewriteStep> {
    let mut seen = IsoSet::new();
    let mut out = Vec::new();
    for rule in system.rules() {
        for m in find_matches(rule, g, system.match_constraint()) {
            let steps = match apply_step(system, rule, &m, g) {
                Ok(s) => s,
                Err(e) => {
                    log::warn!("rule {}: {e}", rule.name());
                    continue;
                }
            };
            for s in steps {
                if seen.insert(s.result.clone()).1 {
                    out.push(s);
                }
            }
        }
    }
    out
}

/// Exploration limits. Termination of the system is assumed; caps turn a
/// runaway search into an inconclusive answer.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    /// Iso-classes visited per search.
    pub max_steps: usize,
    /// Largest graph (nodes + edges) explored; `None` means four times the start.
    pub max_graph_size: Option<usize>,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_steps: 10_000,
            max_graph_size: None,
        }
    }
}

impl Caps {
    pub fn size_limit(&self, start: &Hypergraph) -> usize {
        self.max_graph_size.unwrap_or(4 * start.size().max(1))
    }
}

/// Breadth-first exploration of the graphs reachable from one start.
pub(crate) struct Explorer {
    pub set: IsoSet,
    parent: Vec<Option<(usize, RewriteStep)>>,
    queue: VecDeque<usize>,
    pub truncated: bool,
    pub has_successor: Vec<bool>,
    limit: usize,
}

impl Explorer {
    pub fn new(start: GraphWithInterface, size_limit: usize) -> Self {
        let mut set = IsoSet::new();
        set.insert(start);
        Explorer {
            set,
            parent: vec![None],
            queue: VecDeque::from([0]),
            truncated: false,
            has_successor: vec![false],
            limit: size_limit,
        }
    }

    pub fn done(&self) -> bool {
        self.queue.is_empty()
    }

    /// Expands one queued class; returns the indices of new classes.
    pub fn expand(&mut self, system: &RewritingSystem, max_steps: usize) -> Vec<usize> {
        let Some(i) = self.queue.pop_front() else {
            return vec![];
        };
        let g = self.set.get(i).clone();
        let mut fresh = Vec::new();
        for step in enumerate_steps(system, &g) {
            self.has_successor[i] = true;
            if step.result.graph().size() > self.limit {
                self.truncated = true;
                continue;
            }
            if self.set.find(&step.result).is_some() {
                continue;
            }
            if self.set.len() >= max_steps {
                self.truncated = true;
                continue;
            }
            let (j, _) = self.set.insert(step.result.clone());
            self.parent.push(Some((i, step)));
            self.has_successor.push(false);
            self.queue.push_back(j);
            fresh.push(j);
        }
        fresh
    }

    /// The derivation from the start to class `i`.
    pub fn path_to(&self, mut i: usize) -> Derivation {
        let mut out = Vec::new();
        while let Some((p, step)) = &self.parent[i] {
            out.push(step.clone());
            i = *p;
        }
        out.reverse();
        out
    }
}

#[derive(Clone, Debug)]
pub struct NormalForms {
    pub forms: Vec<GraphWithInterface>,
    pub truncated: bool,
    pub explored: usize,
}

/// Normal forms reachable from `g`, up to isomorphism.
pub fn search_normal_forms(system: &RewritingSystem, g: &GraphWithInterface, caps: Caps) -> NormalForms {
    let mut ex = Explorer::new(g.clone(), caps.size_limit(g.graph()));
    while !ex.done() {
        ex.expand(system, caps.max_steps);
    }
    let forms = (0..ex.set.len())
        .filter(|&i| !ex.has_successor[i])
        .map(|i| ex.set.get(i).clone())
        .collect();
    NormalForms {
        forms,
        truncated: ex.truncated,
        explored: ex.set.len(),
    }
}

/// Outcome of a joinability search.
#[derive(Clone, Debug)]
pub enum Joinability {
    Joinable {
        witness: GraphWithInterface,
        left: Derivation,
        right: Derivation,
    },
    NotJoinable,
    Truncated,
}

impl Joinability {
    pub fn is_joinable(&self) -> bool {
        matches!(self, Joinability::Joinable { .. })
    }
}

/// Searches for a common reduct of `a` and `b`, alternating between the two
/// frontiers.
pub fn join(system: &RewritingSystem, a: &GraphWithInterface, b: &GraphWithInterface, caps: Caps) -> Joinability {
    if are_isomorphic(a, b).is_some() {
        return Joinability::Joinable {
            witness: a.clone(),
            left: vec![],
            right: vec![],
        };
    }
    let limit = caps.size_limit(a.graph()).max(caps.size_limit(b.graph()));
    let mut sides = [Explorer::new(a.clone(), limit), Explorer::new(b.clone(), limit)];
    loop {
        let s = match (sides[0].done(), sides[1].done()) {
            (true, true) => break,
            (false, true) => 0,
            (true, false) => 1,
            _ => usize::from(sides[1].set.len() < sides[0].set.len()),
        };
        let fresh = sides[s].expand(system, caps.max_steps);
        for i in fresh {
            let g = sides[s].set.get(i).clone();
            if let Some(j) = sides[1 - s].set.find(&g) {
                let (li, ri) = if s == 0 { (i, j) } else { (j, i) };
                return Joinability::Joinable {
                    witness: g,
                    left: sides[0].path_to(li),
                    right: sides[1].path_to(ri),
                };
            }
        }
    }
    if sides.iter().any(|s| s.truncated) {
        Joinability::Truncated
    } else {
        Joinability::NotJoinable
    }
}
