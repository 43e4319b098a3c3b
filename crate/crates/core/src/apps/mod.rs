//! Classical dynamic programs phrased as iterated integral operators.

pub mod convolution;
pub mod shortest_paths;
pub mod viterbi;

pub use convolution::tropical_convolution;
pub use shortest_paths::{shortest_paths, ShortestPaths, WeightedGraph};
pub use viterbi::{viterbi, Hmm, ViterbiPath};
