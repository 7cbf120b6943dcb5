//! Local complementation, pivots and GF(2) machinery for studying
//! vertex-minor universality of random graphs.

pub mod bippivot;
pub mod f2core;
pub mod gfourier;
pub mod graph;
pub mod harness;
pub mod lcdelta;
pub mod numeric;
pub mod quadpoly;
pub mod rankcensus;
pub mod vminor;

pub use f2core::{F2Error, F2Matrix, F2Vector};
pub use graph::{BitGraph, Graph, GraphError, Label};
