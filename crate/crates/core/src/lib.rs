//! Counting perfect matchings: exact enumeration, Gallai-Edmonds structure,
//! the Broder and Jerrum-Sinclair-Vigoda matching chains with exact kernel
//! analysis, the torpid-mixing gadgets, blossom enumeration, and recursive
//! counting through the Gallai-Edmonds decomposition.

pub mod acceptance;
pub mod blossoms;
pub mod corpus;
pub mod count;
pub mod error;
pub mod experiment;
pub mod gadgets;
pub mod graph;
pub mod io;
pub mod matching;
pub mod mcmc;
pub mod oracle;
pub mod recursive;
pub mod structure;

pub use error::{Error, Result};
pub use graph::{Graph, VertexId};
pub use matching::{HolePattern, Matching};
