//! Exact optimality certificates and facet synthesis for 0/1 polytopes.
//!
//! A combinatorial optimization instance is a ground set plus the explicit set
//! X of feasible 0/1 incidence vectors. The crate decides whether a vertex
//! maximizes a weight vector by testing membership of the weight vector in
//! the cone spanned by {-1,0,1} generator vectors, builds candidate facet
//! descriptions of conv(X) from minimal generators, and cross-checks every
//! result against an independent double-description hull oracle.

pub mod cone;
pub mod error;
pub mod facets;
pub mod hull;
pub mod instances;
pub mod lattice;
pub mod optimality;
pub mod rational;
pub mod verify;

pub use error::{CopxError, Result};
