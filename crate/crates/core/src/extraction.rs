//! Clipping a step to a subgraph, extracting the pre-critical pair behind
//! a branching, and embedding derivations back into a larger context.

use std::collections::HashMap;

use crate::category::{
    epi_mono_factorize, is_pushout, pullback, pushout, pushout_complements, pushout_mediator, Complement, Square,
};
use crate::critical::{PairKind, PreCriticalPair};
use crate::error::Error;
use crate::hypergraph::{coproduct, GraphWithInterface, Homomorphism};
use crate::rewrite::{interface_factorings, Derivation, RewriteRule, RewriteStep, RewritingSystem};

/// The clipped complement `K → C' → G'` together with `C' → C`.
#[derive(Clone, Debug)]
pub struct Clipped {
    pub complement: Complement,
    pub to_context: Homomorphism,
}

/// Restricts the left square of `step` along a mono `G' → G` through which
/// the match factors as `factor ; mono`. `C'` is the pullback of `C → G`
/// along the mono.
pub fn clip_complement(
    rule: &RewriteRule,
    step: &RewriteStep,
    factor: &Homomorphism,
    mono: &Homomorphism,
) -> Result<Clipped, Error> {
    if !mono.is_mono() {
        return Err(Error::Precondition("clipping map is not mono".into()));
    }
    if factor.then(mono)? != step.matching {
        return Err(Error::Precondition("match does not factor through the clipping".into()));
    }
    let c_to_g = &step.complement.c_to_g;
    let pb = pullback(c_to_g, mono)?;
    let k_to_c = &step.complement.k_to_c;
    let via_l = rule.left().then(factor)?;
    let node_ix: HashMap<_, _> =
        (0..pb.object.node_count()).map(|v| ((pb.left.node(v), pb.right.node(v)), v)).collect();
    let edge_ix: HashMap<_, _> =
        (0..pb.object.edge_count()).map(|e| ((pb.left.edge(e), pb.right.edge(e)), e)).collect();
    let k = rule.interface();
    let nodes = k.nodes().map(|v| node_ix[&(k_to_c.node(v), via_l.node(v))]).collect();
    let edges = (0..k.edge_count()).map(|e| edge_ix[&(k_to_c.edge(e), via_l.edge(e))]).collect();
    let k_to_cp = Homomorphism::new(k.clone(), pb.object.clone(), nodes, edges)?;
    Ok(Clipped {
        complement: Complement {
            k_to_c: k_to_cp,
            c_to_g: pb.right,
        },
        to_context: pb.left,
    })
}

/// The step restricted to `G'`. Its interface is every node of the clipped
/// context.
pub fn clip_step(
    rule: &RewriteRule,
    step: &RewriteStep,
    factor: &Homomorphism,
    mono: &Homomorphism,
) -> Result<RewriteStep, Error> {
    let clipped = clip_complement(rule, step, factor, mono)?;
    let ctx = clipped.complement.context().clone();
    let src = GraphWithInterface::from_nodes(mono.source().clone(), clipped.complement.c_to_g.node_map().to_vec())?;
    let j_to_c = Homomorphism::from_discrete(src.interface().source().clone(), ctx.clone(), ctx.nodes().collect())?;
    RewriteStep::build(rule, &src, factor.clone(), clipped.complement, j_to_c)
}

/// A pair extracted from a branching at `G0 ← J`, with the data needed to
/// embed derivations from the pair back into `G0`.
#[derive(Clone, Debug)]
pub struct Extraction {
    pub pair: PreCriticalPair,
    pub embedding: Embedding,
}

/// A pushout square `J' → S`, `J' → C0`, `S → G0`, `C0 → G0` and the
/// factorisation `J → C0` of the outer interface.
#[derive(Clone, Debug)]
pub struct Embedding {
    pub target: GraphWithInterface,
    pub overlap_to_target: Homomorphism,
    /// `J' → C0`
    pub glue: Homomorphism,
    /// `C0 → G0`
    pub context_to_target: Homomorphism,
    /// `J → C0`
    pub interface_factor: Homomorphism,
}

fn copair(f1: &Homomorphism, f2: &Homomorphism) -> Result<Homomorphism, Error> {
    let (sum, _, _) = coproduct(f1.source(), f2.source())?;
    let nodes = f1.node_map().iter().chain(f2.node_map()).copied().collect();
    let edges = f1.edge_map().iter().chain(f2.edge_map()).copied().collect();
    Homomorphism::new(sum, f1.target().clone(), nodes, edges)
}

/// Factors both matches through their joint image `S`, clips both steps to
/// `S` and takes the pullback of the clipped contexts as the interface.
pub fn extract_pre_critical_pair(
    system: &RewritingSystem,
    step1: &RewriteStep,
    step2: &RewriteStep,
) -> Result<Extraction, Error> {
    if step1.source != step2.source {
        return Err(Error::Precondition("steps do not share a source".into()));
    }
    let rule = |name: &str| system.rule(name).ok_or_else(|| Error::Precondition(format!("unknown rule `{name}`")));
    let (r1, r2) = (rule(&step1.rule)?, rule(&step2.rule)?);
    let (epi, mono) = epi_mono_factorize(&copair(&step1.matching, &step2.matching)?);
    let n1 = r1.lhs().node_count();
    let e1 = r1.lhs().edge_count();
    let s = epi.target().clone();
    let f1 = Homomorphism::new(r1.lhs().clone(), s.clone(), epi.node_map()[..n1].to_vec(), epi.edge_map()[..e1].to_vec())?;
    let f2 = Homomorphism::new(r2.lhs().clone(), s.clone(), epi.node_map()[n1..].to_vec(), epi.edge_map()[e1..].to_vec())?;

    let c1 = clip_complement(r1, step1, &f1, &mono)?.complement;
    let c2 = clip_complement(r2, step2, &f2, &mono)?.complement;
    let pb = pullback(&c1.c_to_g, &c2.c_to_g)?;
    if !pb.object.is_discrete() {
        return Err(Error::UnsupportedRuleShape("pullback of the clipped contexts has edges".into()));
    }
    let j_to_s = pb.left.then(&c1.c_to_g)?;
    let overlap = GraphWithInterface::new(j_to_s.clone())?;
    let b1 = RewriteStep::build(r1, &overlap, f1.clone(), c1, pb.left.clone())?;
    let b2 = RewriteStep::build(r2, &overlap, f2.clone(), c2, pb.right.clone())?;

    let source = &step1.source;
    let mut glue = None;
    for c0 in pushout_complements(&j_to_s, &mono)? {
        if let Some(d) = interface_factorings(source, &c0.c_to_g).into_iter().next() {
            glue = Some(Embedding {
                target: source.clone(),
                overlap_to_target: mono.clone(),
                glue: c0.k_to_c,
                context_to_target: c0.c_to_g,
                interface_factor: d,
            });
            break;
        }
    }
    let embedding = glue.ok_or_else(|| Error::Precondition("no context for the overlap".into()))?;
    Ok(Extraction {
        pair: PreCriticalPair {
            rule1: r1.name().to_string(),
            rule2: r2.name().to_string(),
            kind: PairKind::Plain,
            overlap,
            f1,
            f2,
            step1: b1,
            step2: b2,
        },
        embedding,
    })
}

/// Replays a derivation from `S ← J'` inside `G0 ← J`, gluing `C0` along
/// `J'` at every stage.
pub fn embed_derivation(
    system: &RewritingSystem,
    derivation: &[RewriteStep],
    emb: &Embedding,
) -> Result<Derivation, Error> {
    let jp_to_s = match derivation.first() {
        Some(s) => s.source.interface().clone(),
        None => return Ok(vec![]),
    };
    let square = Square::new(
        jp_to_s,
        emb.glue.clone(),
        emb.overlap_to_target.clone(),
        emb.context_to_target.clone(),
    );
    if !square.commutes() || !is_pushout(&square)? {
        return Err(Error::Precondition("gluing square is not a pushout".into()));
    }

    let mut current = emb.target.clone();
    let mut small_to_big = emb.overlap_to_target.clone();
    let mut c0_to_big = emb.context_to_target.clone();
    let mut out = Vec::with_capacity(derivation.len());
    for (i, step) in derivation.iter().enumerate() {
        if i > 0 && step.source != derivation[i - 1].result {
            return Err(Error::Precondition(format!("step {i} does not start where step {} ends", i - 1)));
        }
        let rule = system
            .rule(&step.rule)
            .ok_or_else(|| Error::Precondition(format!("unknown rule `{}`", step.rule)))?;
        let matching = step.matching.then(&small_to_big)?;
        // D~ = D +_J' C0
        let d_po = pushout(&step.interface_factor, &emb.glue)?;
        let d_to_big = pushout_mediator(&d_po, &step.complement.c_to_g.then(&small_to_big)?, &c0_to_big)?;
        let complement = Complement {
            k_to_c: step.complement.k_to_c.then(&d_po.left)?,
            c_to_g: d_to_big,
        };
        let factor = emb.interface_factor.then(&d_po.right)?;
        let big = RewriteStep::build(rule, &current, matching, complement, factor)?;
        // H' → H~ out of the pushout H' = D +_K R
        let h_po = pushout(&step.complement.k_to_c, rule.right())?;
        let h_to_big = pushout_mediator(&h_po, &d_po.left.then(&big.context_to_result)?, &big.comatch)?;
        if h_po.object.as_ref() != step.result.graph().as_ref() {
            return Err(Error::Precondition(format!("step {i} result is not the standard pushout")));
        }
        small_to_big = Homomorphism::new(
            step.result.graph().clone(),
            big.result.graph().clone(),
            h_to_big.node_map().to_vec(),
            h_to_big.edge_map().to_vec(),
        )?;
        c0_to_big = d_po.right.then(&big.context_to_result)?;
        current = big.result.clone();
        out.push(big);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::{mixed_decomposition_check, Decomposition};
    use crate::critical::enumerate_pre_critical_pairs;
    use crate::frobenius::{rewire, translate_system};
    use crate::hom::are_isomorphic;
    use crate::hypergraph::Signature;
    use crate::rewrite::enumerate_steps;
    use crate::term::parse_term;

    fn sys() -> RewritingSystem {
        let sig = Signature::new().with("a", 1, 1).with("b", 1, 1);
        let t = |s: &str| parse_term(s).unwrap();
        translate_system(&sig, &[("aa".into(), t("a ; a"), t("b")), ("a".into(), t("a"), t("b ; b"))]).unwrap()
    }

    fn start() -> GraphWithInterface {
        let sig = Signature::new().with("a", 1, 1).with("b", 1, 1);
        rewire(&parse_term("a ; a ; a").unwrap(), &sig).unwrap()
    }

    #[test]
    fn identity_clip_keeps_the_step() {
        let s = sys();
        for step in enumerate_steps(&s, &start()) {
            let rule = s.rule(&step.rule).unwrap();
            let id = Homomorphism::identity(step.source.graph().clone());
            let clipped = clip_step(rule, &step, &step.matching, &id).unwrap();
            assert!(clipped.verify(rule));
            assert_eq!(clipped.result.graph(), step.result.graph());
        }
    }

    #[test]
    fn clipped_squares_decompose() {
        let s = sys();
        let steps = enumerate_steps(&s, &start());
        for a in &steps {
            for b in &steps {
                let ext = extract_pre_critical_pair(&s, a, b).unwrap();
                let rule = s.rule(&a.rule).unwrap();
                let clipped = clip_complement(rule, a, &ext.pair.f1, &ext.embedding.overlap_to_target).unwrap();
                let d = Decomposition {
                    k_to_l: rule.left().clone(),
                    k_to_cp: clipped.complement.k_to_c.clone(),
                    l_to_gp: ext.pair.f1.clone(),
                    cp_to_gp: clipped.complement.c_to_g.clone(),
                    cp_to_c: clipped.to_context.clone(),
                    gp_to_g: ext.embedding.overlap_to_target.clone(),
                    c_to_g: a.complement.c_to_g.clone(),
                };
                assert!(mixed_decomposition_check(&d).unwrap());
                ext.pair.validate(&s).unwrap();
                assert!(ext.pair.overlap.interface().source().is_discrete());
            }
        }
    }

    #[test]
    fn extraction_is_idempotent_on_pairs() {
        let s = sys();
        for p in enumerate_pre_critical_pairs(&s).unwrap() {
            let ext = extract_pre_critical_pair(&s, &p.step1, &p.step2).unwrap();
            assert!(are_isomorphic(&ext.pair.overlap, &p.overlap).is_some());
            assert!(ext.embedding.overlap_to_target.is_iso());
        }
    }

    #[test]
    fn embedded_branches_reproduce_the_originals() {
        let s = sys();
        let steps = enumerate_steps(&s, &start());
        assert!(steps.len() >= 2);
        for a in &steps {
            for b in &steps {
                let ext = extract_pre_critical_pair(&s, a, b).unwrap();
                assert!(embed_derivation(&s, &[], &ext.embedding).unwrap().is_empty());
                let up1 = embed_derivation(&s, std::slice::from_ref(&ext.pair.step1), &ext.embedding).unwrap();
                let up2 = embed_derivation(&s, std::slice::from_ref(&ext.pair.step2), &ext.embedding).unwrap();
                assert!(up1[0].verify(s.rule(&a.rule).unwrap()));
                assert!(are_isomorphic(&up1[0].result, &a.result).is_some());
                assert!(are_isomorphic(&up2[0].result, &b.result).is_some());
            }
        }
    }
}
