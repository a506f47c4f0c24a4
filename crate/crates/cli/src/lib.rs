//! Command-line front end for the flat-wall pipeline: instance files,
//! certificate documents and DOT export.

pub mod cmd;
pub mod doc;
pub mod dot;
pub mod gen;
pub mod io;

pub use cmd::{execute, Cli, EXIT_ERROR, EXIT_FLAT, EXIT_MINOR};
pub use doc::{instance_hash, CertificateDocument, Kind};
pub use dot::{emit_dot, Artifact};
pub use io::{load_instance, parse_graph, parse_wall, WallSource};
