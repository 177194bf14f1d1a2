//! Intersection hypergraphs of pseudo-disk families.
//!
//! The crate builds `H(P, F)`, the hypergraph on a family `P` whose edges are
//! the sets of members met by each range of a second family `F`, and provides
//! the combinatorial checks and solvers that go with it:
//!
//! * [`hypergraph`]: canonical edges, cardinality profiles, traces,
//!   shattering, k-good pairs.
//! * [`geometry`]: disks, circle boundaries, and homothets of a convex
//!   template, with exact predicates and grid-accelerated construction.
//! * [`generators`]: seeded random families and named fixtures.
//! * [`solvers`]: weighted hitting-set / dominating-set solvers.
//! * [`gallery`]: well-behaved subsets, the 2-good-pair graph, and its
//!   Euler edge bound.
//! * [`experiments`]: growth and ratio measurements with CSV output.

pub mod error;
pub mod experiments;
pub mod gallery;
pub mod generators;
pub mod geometry;
pub mod hypergraph;
pub mod solvers;

pub use error::{Error, Result};
pub use geometry::{
    build_intersection_hypergraph, neighborhood_hypergraph, ConvexTemplate, Disk, FamilyKind,
    Homothet, Instance, Point, PseudoDiskFamily,
};
pub use hypergraph::{EdgeCardinalityProfile, ElementId, Hypergraph};
pub use solvers::{DomSetResult, FractionalSolution, Method};
