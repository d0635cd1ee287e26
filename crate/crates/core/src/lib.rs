//! Recognition of betweenness structures of order-theoretic trees, probe
//! cographs and their bounds, for small finite structures.
//!
//! The crate is organised around three kinds of finite structures:
//!
//! * [`Graph`] and [`TwoGraph`] (a graph with a `{1,2}` vertex labelling),
//! * [`TernaryStructure`], a domain `0..n` with a ternary relation `B`,
//! * rooted forests and [`MarkedJoinTree`]s, whose betweenness relations
//!   generate the ternary structures of interest.
//!
//! On top of these sit the deciders: cographs and (partitioned) probe
//! cographs in [`cographs`], the betweenness classes QT, IBQT and IBO in
//! [`betweenness`], exhaustive bound search in [`bounds`] and exact
//! clique-width search in [`cliquewidth`].

pub mod betweenness;
pub mod bounds;
pub mod canon;
pub mod cliquewidth;
pub mod cographs;
mod error;
pub mod fixtures;
pub mod gen;
pub mod graph;
pub mod ternary;
pub mod trees;

pub use betweenness::{decide_ibo, decide_ibo_oracle, Axiom, AxiomReport, IboWitness};
pub use canon::{CanonicalForm, Canonize};
pub use cliquewidth::CwTerm;
pub use cographs::{CographTerm, PPTerm};
pub use error::{Error, Result};
pub use graph::{Graph, Label, PathType, TwoGraph};
pub use ternary::TernaryStructure;
pub use trees::{Mark, MarkedJoinTree, RootedForest};
