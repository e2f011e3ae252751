//! Library side of the `rigidlab` command: run configuration, document
//! formats, exporters, reference oracles and the acceptance grid behind
//! `verify-all`.

pub mod config;
pub mod export;
pub mod grid;
pub mod io;
pub mod oracle;
