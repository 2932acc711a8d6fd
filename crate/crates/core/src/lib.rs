//! Recognition of distance-regular and distance-biregular graphs.
//!
//! Spectral characterizations (diametral polynomials, local adjacency
//! polynomials, spectral excess) are run side by side with a combinatorial
//! oracle that counts neighbours sphere by sphere; [`characterize::classify`]
//! refuses to answer when they disagree.

pub mod characterize;
pub mod corpus;
pub mod error;
pub mod graph;
pub mod orthopoly;
pub mod spectral;

pub use corpus::{generate, FamilySpec};
pub use error::{Error, Result};
pub use graph::{distance_data, parse_edge_list, Bipartition, DistanceData, Graph, HalvedPair, Side};
pub use orthopoly::{Poly, PolySequence};
pub use spectral::{decompose, Measure, PerronVector, Scope, SpectralDecomposition, DEFAULT_TOL};
