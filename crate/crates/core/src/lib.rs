pub mod embedding;
pub mod error;
pub mod geometry;
pub mod graph;
pub mod pattern;
pub mod pipeline;
pub mod certificate;
pub mod io;
pub mod generators;
