//! Discrete two-dimensional manifolds given as finite simple graphs.
//!
//! The crate validates the manifold property through unit spheres, applies
//! edge refinements, renders closed surfaces and discs Eulerian, runs the
//! geodesic flow and billiard dynamics on Eulerian surfaces, and 3-colors
//! Eulerian simply connected surfaces.

pub mod coloring;
pub mod dynamics;
pub mod error;
pub mod eulerize;
pub mod generators;
pub mod graph;
pub mod refine;
pub mod surface;

pub use error::{CoreError, Result};
pub use graph::{edge, Edge, Graph, Vertex};
