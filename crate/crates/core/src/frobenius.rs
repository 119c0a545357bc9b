//! Interpretation of terms as cospans of hypergraphs, rewiring into graphs
//! with a single interface, and translation of term rules into DPO rules.

use std::sync::Arc;

use crate::category::pushout;
use crate::error::Error;
use crate::hypergraph::{copair_discrete, coproduct, discrete, GraphWithInterface, Homomorphism, Hypergraph, Signature};
use crate::rewrite::{Mode, RewriteRule, RewritingSystem};
use crate::term::Term;

/// A cospan `n → G ← m` of discrete legs.
#[derive(Clone, Debug)]
pub struct Cospan {
    pub left: Homomorphism,
    pub right: Homomorphism,
}

impl Cospan {
    pub fn new(left: Homomorphism, right: Homomorphism) -> Result<Self, Error> {
        if !left.source().is_discrete() || !right.source().is_discrete() {
            return Err(Error::NonDiscreteInterface);
        }
        if !Arc::ptr_eq(left.target(), right.target()) && **left.target() != **right.target() {
            return Err(Error::NotComposable);
        }
        Ok(Cospan { left, right })
    }

    pub fn apex(&self) -> &Arc<Hypergraph> {
        self.left.target()
    }

    pub fn arity(&self) -> usize {
        self.left.source().node_count()
    }

    pub fn coarity(&self) -> usize {
        self.right.source().node_count()
    }

    pub fn identity(n: usize) -> Self {
        let g = Arc::new(discrete(n));
        let id = Homomorphism::identity(g);
        Cospan {
            left: id.clone(),
            right: id,
        }
    }

    /// Composition by pushout over the shared boundary.
    pub fn compose(&self, next: &Cospan) -> Result<Cospan, Error> {
        if self.coarity() != next.arity() {
            return Err(Error::NotComposable);
        }
        let mid = self.right.source().clone();
        let po = pushout(&self.right, &next.left.resource(mid))?;
        Ok(Cospan {
            left: self.left.then(&po.left)?,
            right: next.right.then(&po.right)?,
        })
    }

    /// Monoidal product by coproduct.
    pub fn tensor(&self, other: &Cospan) -> Result<Cospan, Error> {
        let (g, ia, ib) = coproduct(self.apex(), other.apex())?;
        let ia = ia.resource(self.apex().clone());
        let ib = ib.resource(other.apex().clone());
        let left = copair_discrete(&self.left.then(&ia)?, &other.left.then(&ib)?)?;
        let right = copair_discrete(&self.right.then(&ia)?, &other.right.then(&ib)?)?;
        debug_assert!(Arc::ptr_eq(left.target(), &g));
        Ok(Cospan { left, right })
    }

    /// The single-interface graph `G ← n + m`.
    pub fn rewire(&self) -> GraphWithInterface {
        let j = copair_discrete(&self.left, &self.right).expect("legs share the apex");
        GraphWithInterface::new(j).expect("discrete legs")
    }
}

fn single_edge(name: &str, arity: usize, coarity: usize) -> Cospan {
    let mut g = Hypergraph::with_nodes(arity + coarity);
    g.add_edge(name, (0..arity).collect(), (arity..arity + coarity).collect());
    let g = Arc::new(g);
    let left = Homomorphism::from_discrete(Arc::new(discrete(arity)), g.clone(), (0..arity).collect()).unwrap();
    let right =
        Homomorphism::from_discrete(Arc::new(discrete(coarity)), g, (arity..arity + coarity).collect()).unwrap();
    Cospan { left, right }
}

fn single_node(arity: usize, coarity: usize) -> Cospan {
    let g = Arc::new(discrete(1));
    let left = Homomorphism::from_discrete(Arc::new(discrete(arity)), g.clone(), vec![0; arity]).unwrap();
    let right = Homomorphism::from_discrete(Arc::new(discrete(coarity)), g, vec![0; coarity]).unwrap();
    Cospan { left, right }
}

/// The cospan denoted by a term.
pub fn interpret(t: &Term, sig: &Signature) -> Result<Cospan, Error> {
    t.type_of(sig, true)?;
    interpret_typed(t, sig)
}

fn interpret_typed(t: &Term, sig: &Signature) -> Result<Cospan, Error> {
    Ok(match t {
        Term::Gen(n) => {
            let (a, c) = sig.get(n).expect("typechecked");
            single_edge(n, a, c)
        }
        Term::Id(n) => Cospan::identity(*n),
        Term::Sym(a, b) => {
            let g = Arc::new(discrete(a + b));
            let left = Homomorphism::identity(g.clone());
            let right_nodes = (0..a + b).map(|j| if j < *b { a + j } else { j - b }).collect();
            let right = Homomorphism::from_discrete(g.clone(), g, right_nodes)?;
            Cospan { left, right }
        }
        Term::Seq(a, b) => interpret_typed(a, sig)?.compose(&interpret_typed(b, sig)?)?,
        Term::Par(a, b) => interpret_typed(a, sig)?.tensor(&interpret_typed(b, sig)?)?,
        Term::Mul => single_node(2, 1),
        Term::Unit => single_node(0, 1),
        Term::Comul => single_node(1, 2),
        Term::Counit => single_node(1, 0),
    })
}

/// `G ← i + j` for a term of type `i → j`.
pub fn rewire(t: &Term, sig: &Signature) -> Result<GraphWithInterface, Error> {
    Ok(interpret(t, sig)?.rewire())
}

/// A rule `L ← i + j → R` from two terms of the same type `i → j`.
pub fn translate_rule(name: &str, lhs: &Term, rhs: &Term, sig: &Signature) -> Result<RewriteRule, Error> {
    let tl = lhs.type_of(sig, true)?;
    let tr = rhs.type_of(sig, true)?;
    if tl != tr {
        return Err(Error::Type {
            term: format!("{lhs} => {rhs}"),
            msg: format!("sides have types {}->{} and {}->{}", tl.0, tl.1, tr.0, tr.1),
        });
    }
    let l = rewire(lhs, sig)?;
    let r = rewire(rhs, sig)?;
    let k = Arc::new(discrete(tl.0 + tl.1));
    RewriteRule::with_boundary(
        name,
        l.interface().resource(k.clone()),
        r.interface().resource(k),
        tl.0,
        tl.1,
    )
}

/// The Frobenius-mode system of a list of named term rules.
pub fn translate_system(sig: &Signature, rules: &[(String, Term, Term)]) -> Result<RewritingSystem, Error> {
    let rules = rules
        .iter()
        .map(|(n, l, r)| translate_rule(n, l, r, sig))
        .collect::<Result<Vec<_>, _>>()?;
    RewritingSystem::new(sig.clone(), rules, Mode::Frobenius)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hom::{are_isomorphic, graphs_isomorphic};
    use crate::term::parse_term;

    fn sig() -> Signature {
        Signature::new().with("g", 2, 2).with("a", 1, 1)
    }

    fn t(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    #[test]
    fn identity_is_discrete() {
        let c = interpret(&t("id:3"), &sig()).unwrap();
        assert_eq!(**c.apex(), discrete(3));
        assert!(c.left.is_iso() && c.right.is_iso());
    }

    #[test]
    fn rewire_identity_wire() {
        let g = rewire(&t("id:1"), &sig()).unwrap();
        assert_eq!(g.graph().node_count(), 1);
        assert_eq!(g.interface_nodes(), &[0, 0]);
    }

    #[test]
    fn yang_baxter_sides() {
        for s in ["(g + id:1) ; (id:1 + g) ; (g + id:1)", "(id:1 + g) ; (g + id:1) ; (id:1 + g)"] {
            let c = interpret(&t(s), &sig()).unwrap();
            assert_eq!((c.apex().node_count(), c.apex().edge_count()), (9, 3));
            assert!(c.left.is_mono() && c.right.is_mono());
        }
        let l = rewire(&t("(g + id:1) ; (id:1 + g) ; (g + id:1)"), &sig()).unwrap();
        let r = rewire(&t("(id:1 + g) ; (g + id:1) ; (id:1 + g)"), &sig()).unwrap();
        assert_eq!(l.interface_size(), 6);
        assert!(graphs_isomorphic(l.graph(), r.graph()).is_none());
        assert!(are_isomorphic(&l, &r).is_none());
    }

    #[test]
    fn feedback_loop() {
        // comul ; (a + id) ; mul would be a 1 -> 1 bubble; the trace closes it
        let term = t("unit ; comul ; (a + id:1) ; mul ; counit");
        let c = interpret(&term, &sig()).unwrap();
        assert_eq!((c.arity(), c.coarity()), (0, 0));
        assert_eq!((c.apex().node_count(), c.apex().edge_count()), (1, 1));
        let e = c.apex().edge(0);
        assert_eq!((e.sources.as_slice(), e.targets.as_slice()), (&[0][..], &[0][..]));
    }

    #[test]
    fn symmetry_legs() {
        let c = interpret(&t("sym:1,2"), &sig()).unwrap();
        assert_eq!(c.right.node_map(), &[1, 2, 0]);
        let twice = interpret(&t("sym:1,1 ; sym:1,1"), &sig()).unwrap();
        let id = interpret(&t("id:2"), &sig()).unwrap();
        assert!(are_isomorphic(&twice.rewire(), &id.rewire()).is_some());
    }

    #[test]
    fn rule_translation_checks_types() {
        assert!(translate_rule("bad", &t("g"), &t("a"), &sig()).is_err());
        let r = translate_rule("id", &t("a"), &t("a"), &sig()).unwrap();
        assert!(r.has_discrete_interface());
        assert_eq!(r.boundary(), Some((1, 1)));
        assert!(graphs_isomorphic(r.lhs(), r.rhs()).is_some());
    }
}
