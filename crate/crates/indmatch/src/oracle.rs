//! Brute-force reference solver and the validity predicate.
//!
//! Everything here is written to be obviously correct rather than fast; the
//! rest of the crate is tested against it. Intended for graphs up to roughly
//! 20 vertices.

use itertools::Itertools;

use crate::graph::{Graph, Vertex, VertexSet};

/// A certified answer: the deleted set and the edges forming the components
/// of `G - S`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub deleted: VertexSet,
    pub matching: Vec<(Vertex, Vertex)>,
}

impl Solution {
    /// Checks both invariants: the residual graph is an induced matching and
    /// `matching` lists exactly its components.
    pub fn is_valid_for(&self, g: &Graph) -> bool {
        let Ok(residual) = g.delete_vertices(&self.deleted) else {
            return false;
        };
        if !is_induced_matching(&residual) {
            return false;
        }
        match extract_matching(g, &self.deleted) {
            Some(pairs) => pairs == self.matching,
            None => false,
        }
    }
}

/// True iff every connected component of `g` has exactly 2 vertices,
/// equivalently every vertex has degree exactly 1. Vacuously true for the
/// empty graph.
pub fn is_induced_matching(g: &Graph) -> bool {
    g.vertices().all(|v| g.degree(v) == 1)
}

/// The components of `g - deleted` as sorted pairs, or `None` if some
/// component is not a single edge.
pub fn extract_matching(g: &Graph, deleted: &VertexSet) -> Option<Vec<(Vertex, Vertex)>> {
    let residual = g.delete_vertices(deleted).ok()?;
    if !is_induced_matching(&residual) {
        return None;
    }
    Some(residual.edges().collect())
}

/// Decides `(g, k)` by enumerating candidate sets in increasing size,
/// lexicographically within each size. Returns a minimum solution of size
/// at most `k` when one exists.
pub fn brute_force_ind(g: &Graph, k: usize) -> Option<Solution> {
    let vertices: Vec<Vertex> = g.vertices().collect();
    let limit = k.min(vertices.len());
    for size in 0..=limit {
        for subset in vertices.iter().copied().combinations(size) {
            let deleted: VertexSet = subset.into_iter().collect();
            if let Some(matching) = extract_matching(g, &deleted) {
                return Some(Solution { deleted, matching });
            }
        }
    }
    None
}

/// The exact minimization: always succeeds since deleting every vertex is
/// vacuously valid.
pub fn brute_force_extend(g: &Graph) -> Solution {
    brute_force_ind(g, g.vertex_count()).expect("S = V(G) is always valid")
}
