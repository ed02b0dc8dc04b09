//! Exact combinatorics of the surviving curve complex of a punctured surface
//! with a marked point.

pub mod arcs;
pub mod audit;
pub mod cut;
pub mod diagram;
pub mod error;
pub mod graph;
pub mod normal;
pub mod registry;
pub mod samples;
pub mod surface;
pub mod survival;
pub mod twist;
pub mod witness;

pub use error::{Error, Result};
