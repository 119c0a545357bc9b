//! Double-pushout rewriting of hypergraphs with interfaces, and confluence
//! checking by critical pairs.
//!
//! Graphs are Σ-labelled directed hypergraphs whose edges have ordered
//! source and target tentacles. Rewriting acts on graphs with a discrete
//! interface `G ← J`, which every step preserves.

pub mod category;
pub mod critical;
pub mod error;
pub mod extraction;
pub mod frobenius;
pub mod hom;
pub mod hypergraph;
pub mod ma;
pub mod paths;
pub mod rewrite;
pub mod rulefile;
pub mod term;

pub use error::Error;
pub use hom::{are_isomorphic, certificate, graphs_isomorphic, homomorphisms, IsoSet};
pub use hypergraph::{
    coproduct, discrete, validate, Edge, EdgeId, GraphWithInterface, Homomorphism, Hypergraph, Label, NodeId,
    Signature, Violation,
};
