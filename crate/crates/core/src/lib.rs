// SPDX-License-Identifier: Apache-2.0

//! Undirected power graphs of finite groups.
//!
//! The crate computes closed-twin classes and the neighbourhood closure
//! `N[N[X]]` of any graph, decides which closed-twin classes of a power graph
//! are single generator classes, and rebuilds the directed power graph, up to
//! isomorphism, from the undirected one alone. Concrete groups given by Cayley
//! tables provide the ground truth every result is checked against.
//!
//! ```
//! use powergraph::groups::{build_group, directed_power_graph, power_graph, GroupSpec};
//! use powergraph::reconstruct::reconstruct;
//! use powergraph::verify::certify;
//!
//! let group = build_group(&"dihedral:18".parse::<GroupSpec>().unwrap()).unwrap();
//! let graph = power_graph(&group);
//! let rebuilt = reconstruct(&graph).unwrap();
//! let verdict = certify(&rebuilt, &directed_power_graph(&group), &graph).unwrap();
//! assert!(verdict.is_pass());
//! ```

pub mod classify;
pub mod corpus;
pub mod graph;
pub mod groups;
pub mod reconstruct;
pub mod verify;

pub use graph::{Digraph, NClassPartition, UndirectedGraph, VertexSet};
