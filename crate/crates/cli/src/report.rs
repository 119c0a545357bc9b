//! Text and JSON renderings of reports and traces.

use std::fmt::Write;

use serde::Serialize;

use diaconf::critical::{ConfluenceReport, Outcome, PairKind, PreCriticalPair};
use diaconf::rewrite::{Mode, RewriteStep};
use diaconf::GraphWithInterface;

use crate::dot;

#[derive(Serialize)]
struct EdgeJson {
    label: String,
    sources: Vec<usize>,
    targets: Vec<usize>,
}

#[derive(Serialize)]
struct GraphJson {
    nodes: usize,
    edges: Vec<EdgeJson>,
    interface: Vec<usize>,
}

fn graph_json(g: &GraphWithInterface) -> GraphJson {
    GraphJson {
        nodes: g.graph().node_count(),
        edges: g
            .graph()
            .edges()
            .iter()
            .map(|e| EdgeJson {
                label: e.label.to_string(),
                sources: e.sources.clone(),
                targets: e.targets.clone(),
            })
            .collect(),
        interface: g.interface_nodes().to_vec(),
    }
}

#[derive(Serialize)]
struct CapsJson {
    max_steps: usize,
    max_size: Option<usize>,
}

#[derive(Serialize)]
struct PairJson {
    rules: [String; 2],
    overlap_size: [usize; 2],
    shared_edges: usize,
    parallel: bool,
    nontrivial: bool,
    /// `null` when the search was cut off.
    joinable: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<GraphJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    overlap: Option<GraphJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    relation: Option<String>,
}

#[derive(Serialize)]
struct StatsJson {
    pairs: usize,
    nontrivial: usize,
    parallel: usize,
    joinable: usize,
    not_joinable: usize,
    truncated: usize,
    enumeration_ms: u128,
    checking_ms: u128,
}

#[derive(Serialize)]
struct CheckJson {
    verdict: Option<String>,
    mode: String,
    kind: &'static str,
    pairs: Vec<PairJson>,
    caps: CapsJson,
    truncated: bool,
    assumes_termination: bool,
    notes: Vec<String>,
    stats: StatsJson,
}

fn kind_name(k: PairKind) -> &'static str {
    match k {
        PairKind::Plain => "plain",
        PairKind::Ma => "ma",
        PairKind::Ground => "ground",
    }
}

fn size(p: &PreCriticalPair) -> [usize; 2] {
    [p.source().node_count(), p.source().edge_count()]
}

pub fn check_json(rep: &ConfluenceReport) -> String {
    let pairs = rep
        .pairs
        .iter()
        .map(|p| {
            let (joinable, witness, overlap, relation) = match &p.outcome {
                Outcome::Joinable { witness, .. } => (Some(true), witness.as_ref().map(graph_json), None, None),
                Outcome::NotJoinable { relation, .. } => (
                    Some(false),
                    None,
                    Some(graph_json(&p.pair.overlap)),
                    relation.as_ref().map(|r| r.to_string()),
                ),
                Outcome::Truncated => (None, None, None, None),
            };
            PairJson {
                rules: [p.pair.rule1.clone(), p.pair.rule2.clone()],
                overlap_size: size(&p.pair),
                shared_edges: p.pair.shared_edges(),
                parallel: p.parallel,
                nontrivial: p.nontrivial,
                joinable,
                witness,
                overlap,
                relation,
            }
        })
        .collect();
    let s = &rep.stats;
    let out = CheckJson {
        verdict: rep.verdict.map(|v| v.to_string()),
        mode: rep.mode.to_string(),
        kind: kind_name(rep.kind),
        pairs,
        caps: CapsJson {
            max_steps: rep.caps.max_steps,
            max_size: rep.caps.max_graph_size,
        },
        truncated: rep.truncated(),
        assumes_termination: rep.assumes_termination,
        notes: rep.notes.clone(),
        stats: StatsJson {
            pairs: s.pairs,
            nontrivial: s.nontrivial,
            parallel: s.parallel,
            joinable: s.joinable,
            not_joinable: s.not_joinable,
            truncated: s.truncated,
            enumeration_ms: s.enumeration_ms,
            checking_ms: s.checking_ms,
        },
    };
    serde_json::to_string_pretty(&out).expect("report serializes")
}

pub fn check_text(rep: &ConfluenceReport) -> String {
    let mut s = String::new();
    let s_ = &rep.stats;
    writeln!(
        s,
        "{} pairs ({} kind): {} non-trivial, {} parallel, {} joinable, {} not joinable, {} truncated",
        s_.pairs,
        kind_name(rep.kind),
        s_.nontrivial,
        s_.parallel,
        s_.joinable,
        s_.not_joinable,
        s_.truncated
    )
    .unwrap();
    for (i, p) in rep.pairs.iter().enumerate() {
        let state = match &p.outcome {
            Outcome::Joinable { .. } => "joinable".to_string(),
            Outcome::NotJoinable { relation: Some(r), .. } => format!("NOT joinable under {r}"),
            Outcome::NotJoinable { .. } => "NOT joinable".to_string(),
            Outcome::Truncated => "truncated".to_string(),
        };
        if p.nontrivial || !p.outcome.is_joinable() {
            let [n, e] = size(&p.pair);
            writeln!(s, "  pair {i}: {} / {} on {n} nodes, {e} edges: {state}", p.pair.rule1, p.pair.rule2).unwrap();
        }
    }
    for n in &rep.notes {
        writeln!(s, "note: {n}").unwrap();
    }
    match rep.verdict {
        Some(v) => writeln!(s, "verdict: {v}").unwrap(),
        None => writeln!(s, "verdict: none (empty-interface pairs only)").unwrap(),
    }
    s
}

#[derive(Serialize)]
struct ListedPair {
    rules: [String; 2],
    overlap_size: [usize; 2],
    shared_edges: usize,
    parallel: bool,
    nontrivial: bool,
    overlap: GraphJson,
    branches: [GraphJson; 2],
}

#[derive(Serialize)]
struct PairsJson {
    mode: String,
    pairs: Vec<ListedPair>,
}

fn nontrivial(p: &PreCriticalPair, parallel: bool) -> bool {
    !p.same_match() && !parallel
}

pub fn pairs_json(mode: Mode, pairs: &[PreCriticalPair], parallel: &[bool]) -> String {
    let out = PairsJson {
        mode: mode.to_string(),
        pairs: pairs
            .iter()
            .zip(parallel)
            .map(|(p, &par)| ListedPair {
                rules: [p.rule1.clone(), p.rule2.clone()],
                overlap_size: size(p),
                shared_edges: p.shared_edges(),
                parallel: par,
                nontrivial: nontrivial(p, par),
                overlap: graph_json(&p.overlap),
                branches: [graph_json(&p.step1.result), graph_json(&p.step2.result)],
            })
            .collect(),
    };
    serde_json::to_string_pretty(&out).expect("pairs serialize")
}

pub fn pairs_text(pairs: &[PreCriticalPair], parallel: &[bool]) -> String {
    let mut s = String::new();
    let nt = pairs.iter().zip(parallel).filter(|(p, &par)| nontrivial(p, par)).count();
    let np = parallel.iter().filter(|&&b| b).count();
    writeln!(s, "{} pairs: {nt} non-trivial, {np} parallel", pairs.len()).unwrap();
    for (i, (p, &par)) in pairs.iter().zip(parallel).enumerate() {
        let [n, e] = size(p);
        let mut flags = Vec::new();
        if par {
            flags.push("parallel");
        }
        if nontrivial(p, par) {
            flags.push("non-trivial");
        }
        if p.same_match() {
            flags.push("same-match");
        }
        writeln!(
            s,
            "\n# pair {i}: {} / {} on {n} nodes, {e} edges, {} shared [{}]",
            p.rule1,
            p.rule2,
            p.shared_edges(),
            flags.join(", ")
        )
        .unwrap();
        s.push_str(&dot::render(&format!("pair{i}_overlap"), &p.overlap));
        s.push_str(&dot::render(&format!("pair{i}_left"), &p.step1.result));
        s.push_str(&dot::render(&format!("pair{i}_right"), &p.step2.result));
    }
    s
}

#[derive(Serialize)]
struct Successor {
    rule: String,
    graph: GraphJson,
}

#[derive(Serialize)]
struct TraceStep {
    successors: Vec<Successor>,
    chosen: Option<usize>,
}

/// A rewriting run: every successor at each stage and the one followed.
pub struct Trace {
    start: GraphWithInterface,
    stages: Vec<(Vec<(String, GraphWithInterface)>, Option<usize>)>,
    pub productive: usize,
    end: Option<GraphWithInterface>,
}

#[derive(Serialize)]
struct TraceJson {
    start: GraphJson,
    steps: Vec<TraceStep>,
    productive_steps: usize,
    normal_form: bool,
    result: GraphJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    verify_failures: Option<usize>,
}

impl Trace {
    pub fn new(start: &GraphWithInterface) -> Self {
        Trace {
            start: start.clone(),
            stages: Vec::new(),
            productive: 0,
            end: None,
        }
    }

    pub fn push(&mut self, succ: &[RewriteStep], chosen: Option<usize>) {
        self.stages.push((succ.iter().map(|s| (s.rule.clone(), s.result.clone())).collect(), chosen));
        if chosen.is_some() {
            self.productive += 1;
        }
    }

    pub fn finish(&mut self, g: &GraphWithInterface) {
        self.end = Some(g.clone());
    }

    /// The run ended because nothing productive applied.
    fn normal_form(&self) -> bool {
        self.stages.last().map_or(false, |s| s.1.is_none())
    }

    pub fn json(&self, verify: bool, bad: usize) -> String {
        let out = TraceJson {
            start: graph_json(&self.start),
            steps: self
                .stages
                .iter()
                .map(|(succ, chosen)| TraceStep {
                    successors: succ
                        .iter()
                        .map(|(r, g)| Successor {
                            rule: r.clone(),
                            graph: graph_json(g),
                        })
                        .collect(),
                    chosen: *chosen,
                })
                .collect(),
            productive_steps: self.productive,
            normal_form: self.normal_form(),
            result: graph_json(self.end.as_ref().unwrap_or(&self.start)),
            verify_failures: verify.then_some(bad),
        };
        serde_json::to_string_pretty(&out).expect("trace serializes")
    }

    pub fn text(&self, verify: bool, bad: usize) -> String {
        let mut s = String::new();
        s.push_str(&dot::render("start", &self.start));
        for (i, (succ, chosen)) in self.stages.iter().enumerate() {
            writeln!(s, "\n# stage {i}: {} successor(s)", succ.len()).unwrap();
            for (k, (rule, g)) in succ.iter().enumerate() {
                let mark = if Some(k) == *chosen { " (taken)" } else { "" };
                writeln!(s, "# successor {k} by {rule}{mark}").unwrap();
                s.push_str(&dot::render(&format!("stage{i}_succ{k}"), g));
            }
        }
        let what = if self.normal_form() {
            let only_trivial = self.stages.last().map_or(false, |s| !s.0.is_empty());
            if only_trivial {
                "fixed point"
            } else {
                "normal form"
            }
        } else {
            "step limit reached"
        };
        writeln!(s, "\n{what} after {} productive step(s)", self.productive).unwrap();
        if verify {
            writeln!(s, "verify: {bad} failure(s)").unwrap();
        }
        s
    }
}
