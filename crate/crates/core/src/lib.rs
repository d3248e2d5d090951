//! Exact labelled growth sequences of structures built from finite permutation
//! groups by direct products and wreath products with the infinite symmetric
//! group, together with brute-force orbit oracles, labelled enumeration of
//! small hereditary graph classes, and witness search for order-property and
//! coding patterns in finite relations.
//!
//! Every count is an unbounded integer and every verdict is decided by exact
//! integer comparison.

pub mod bfile;
pub mod egf;
pub mod error;
pub mod expr;
pub mod graph;
pub mod orbit;
pub mod partition;
pub mod seq;
pub mod witness;

pub use egf::Egf;
pub use error::{Error, Result};
pub use expr::{Classification, GroupExpr};
pub use graph::{ClassMode, ClassSpec, FlipSpec, Graph};
pub use orbit::{Budget, FinPermGroup, OrbitCount, Perm};
pub use seq::{BoundKind, BoundReport, GridPoint, IntSeq, Verdict};
pub use witness::{CodingWitness, FinRelation, OrderWitness, SearchOutcome};
