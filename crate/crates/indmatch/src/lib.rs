//! Exact solvers for deletion to induced matching: given a graph `G` and a
//! budget `k`, find a set `S` of at most `k` vertices such that every
//! component of `G - S` is a single edge.
//!
//! The decision solver branches on vertices of degree 4 or more until the
//! remaining graph has maximum degree 3, prunes hopeless leaves by counting
//! degree-3 vertices, and finishes each surviving leaf with a 3-coloring
//! dynamic program over a path decomposition built by contracting away
//! degree-<=2 structure. The minimization variant reuses the same machinery
//! without budget pruning. A brute-force oracle ([`oracle`]) provides the
//! ground truth everything else is tested against.
//!
//! ```
//! use indmatch::{solve_ind, Graph, SolveConfig};
//!
//! let answer = solve_ind(&Graph::cycle(5), 3, &SolveConfig::default());
//! assert!(answer.decision);
//! let solution = answer.solution.unwrap();
//! assert!(solution.deleted.len() <= 3);
//! assert_eq!(solution.matching.len(), 1);
//! ```

pub mod branching;
pub mod dp;
pub mod graph;
pub mod oracle;
pub mod pathdecomp;
pub mod pipeline;

pub use branching::{branching_number, BranchingVector, SearchStats};
pub use dp::{DpMemory, ForgetRule};
pub use graph::{Graph, GraphError, Vertex, VertexSet};
pub use oracle::Solution;
pub use pathdecomp::{NicePathDecomposition, PathDecomposition};
pub use pipeline::{solve_extend, solve_ind, verify, ExtendAnswer, IndAnswer, SolveConfig};
