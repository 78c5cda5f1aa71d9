//! Search by a coined quantum walk on the edges of an arbitrary graph.
//!
//! * [`graph`]: graphs, parsing, coloring-based polarity and `starify`.
//! * [`walk`]: exact simulation of the walk and the search algorithms.
//! * [`spectral`]: reduced star-graph dynamics and complete-graph reports.
//! * [`circuit`]: compilation of one step into node/edge-local gates.
//! * [`sim`]: sparse simulation of compiled circuits.

pub mod circuit;
pub mod graph;
pub mod sim;
pub mod spectral;
pub mod walk;

pub use num_complex::Complex64;
