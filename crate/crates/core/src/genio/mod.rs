//! Plain-text hypergraph files, certificates, and instance generators.

pub mod format;
pub mod generators;
