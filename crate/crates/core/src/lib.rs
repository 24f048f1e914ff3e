//! Vertex-oriented 4-regular plane graphs: o-cycles, o-colourings and the
//! transformations that relate them to edge colourings of cubic graphs.

pub mod catalog;
pub mod cli;
pub mod engine;
pub mod error;
pub mod graph;
pub mod ocycle;
pub mod orientation;
pub(crate) mod sketch;
pub mod symmetry;
pub mod transforms;

pub use error::{Error, Result};
pub use graph::{build_graph, Dart, Graph, PlaneGraph};
pub use orientation::OrientationAssignment;
