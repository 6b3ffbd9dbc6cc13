//! File formats: edge lists and label files, the Kronecker generator, and
//! the per-partition subgraph dump.

mod dump;
mod edgelist;
mod kronecker;

pub use dump::{
    dump_subgraphs, format_subgraph, load_subgraphs, parse_subgraph, part_file_name, read_metrics,
    write_metrics, MetricsFile, METRICS_FILE,
};
pub use edgelist::{
    load_edge_list, load_labels, parse_edge_list, parse_labels, write_edge_list, EdgeListSpec,
};
pub use kronecker::{kronecker_edges, kronecker_generate, KroneckerParams};

use std::path::Path;

use crate::error::FormatError;

pub(crate) fn read_file(path: &Path) -> Result<String, FormatError> {
    std::fs::read_to_string(path).map_err(|source| FormatError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub(crate) fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> FormatError + '_ {
    move |source| FormatError::Io {
        path: path.to_path_buf(),
        source,
    }
}
