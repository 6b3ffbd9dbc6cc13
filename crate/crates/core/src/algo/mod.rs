//! Reference programs: connected components, single-source shortest paths,
//! accumulative PageRank and graph simulation.

mod cc;
mod gsim;
mod pagerank;
mod sssp;

pub use cc::ConnectedComponents;
pub use gsim::{GraphSimulation, Pattern, MAX_PATTERN_VERTICES};
pub use pagerank::PageRank;
pub use sssp::ShortestPaths;
