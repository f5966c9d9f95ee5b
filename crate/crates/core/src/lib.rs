//! Hamiltonian cycles of Cayley graphs on finite abelian groups, viewed as
//! integer flows, and the quotients of the flow lattices they span.

pub mod cayley;
pub mod constructions;
pub mod dsl;
pub mod flows;
pub mod group;
pub mod ham;
pub mod lattice;
pub mod torus;
pub mod verify;

pub use cayley::{CayleyGraph, ClassificationLabel, ConnectionSet, GraphError, QuotientDescriptor};
pub use dsl::{Bindings, DslError, PathExpr, Walk, WalkKind};
pub use flows::{Flow, FlowError, Weighting};
pub use group::{AbelianGroup, GroupElement, GroupError};
