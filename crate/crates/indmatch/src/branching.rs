//! Branch-and-reduce search that eliminates vertices of degree 4 or more.
//!
//! Two rules drive the search. For a vertex `u` with `d(u) >= 4`:
//! dominated rule — if some neighbor `v` has `N[v] ⊆ N[u]`, either `u` joins
//! the deletion set or `u` is paired with `v` and all other neighbors of `u`
//! are deleted; pairing rule — otherwise `u` joins the deletion set or it is
//! paired with one of its `d` neighbors `v`, deleting `(N(u) ∪ N(v)) \ {u,v}`.
//! Leaves of the search tree have maximum degree 3 and are handed to the
//! caller. Degree-0 vertices are forced into the deletion set whenever they
//! appear.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::graph::{Graph, Vertex, VertexSet};

/// Budget semantics for the search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Decision mode: `budget` is the remaining deletion allowance; children
    /// with negative budget are pruned.
    Ind,
    /// Minimization mode: `budget` tracks the remaining vertex count; nothing
    /// is pruned.
    Extend,
}

/// Identifies a search-tree node by the child indices on the path from the
/// root, in branch order.
pub type NodeId = Vec<u32>;

/// A live node of the search tree. The working graph holds exactly the
/// undecided vertices: committed deletions and committed pairs have already
/// been removed.
#[derive(Debug, Clone)]
pub struct BranchNode {
    pub graph: Graph,
    pub budget: i64,
    pub committed: VertexSet,
    pub paired: Vec<(Vertex, Vertex)>,
    pub node_id: NodeId,
}

impl BranchNode {
    pub fn root(graph: Graph, mode: Mode, k: u64) -> Self {
        let budget = match mode {
            Mode::Ind => k as i64,
            Mode::Extend => graph.vertex_count() as i64,
        };
        BranchNode {
            graph,
            budget,
            committed: VertexSet::new(),
            paired: Vec::new(),
            node_id: Vec::new(),
        }
    }

    fn child(&self, index: u32) -> Self {
        let mut node = self.clone();
        node.node_id.push(index);
        node
    }

    /// Deletes `set` into the committed solution, charging the budget in
    /// `Ind` mode.
    fn commit_deletions(&mut self, set: &VertexSet, mode: Mode) {
        self.graph = self.graph.delete_vertices(set).expect("set ⊆ V");
        self.committed.extend(set.iter().copied());
        match mode {
            Mode::Ind => self.budget -= set.len() as i64,
            Mode::Extend => self.budget = self.graph.vertex_count() as i64,
        }
    }

    /// Removes a finished pair from the working graph without charging the
    /// deletion budget.
    fn commit_pair(&mut self, u: Vertex, v: Vertex, mode: Mode) {
        let pair = VertexSet::from([u, v]);
        self.graph = self.graph.delete_vertices(&pair).expect("pair ⊆ V");
        self.paired.push((u.min(v), u.max(v)));
        if mode == Mode::Extend {
            self.budget = self.graph.vertex_count() as i64;
        }
    }
}

/// Counters describing one search run.
#[derive(Debug, Clone, Default, Serialize)]
pub struct SearchStats {
    pub nodes_expanded: u64,
    pub leaves: u64,
    pub max_depth: u32,
    pub rule_fire_counts: BTreeMap<String, u64>,
}

impl SearchStats {
    fn fire(&mut self, rule: &str) {
        *self.rule_fire_counts.entry(rule.to_string()).or_insert(0) += 1;
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("stats serialize")
    }
}

/// The branch vertex: a vertex of degree >= 4 with maximum degree, smallest
/// id on ties. `None` once the graph has maximum degree <= 3.
pub fn find_branch_vertex(g: &Graph) -> Option<Vertex> {
    let mut best: Option<(usize, Vertex)> = None;
    for v in g.vertices() {
        let d = g.degree(v);
        if d >= 4 && best.is_none_or(|(bd, _)| d > bd) {
            best = Some((d, v));
        }
    }
    best.map(|(_, v)| v)
}

/// The smallest neighbor `v` of `u` with `N[v] ⊆ N[u]`, if any. When absent,
/// every neighbor of `u` has a neighbor outside `N[u]`, the precondition of
/// the pairing rule.
pub fn find_dominated_neighbor(g: &Graph, u: Vertex) -> Option<Vertex> {
    debug_assert!(g.degree(u) >= 4);
    let closed = g.closed_neighborhood(u);
    g.neighbors(u)
        .iter()
        .copied()
        .find(|&v| g.neighbors(v).iter().all(|w| closed.contains(w)))
}

/// Dominated-neighbor branch: `u ∈ S`, or `u` pairs with `v` and
/// `N(u) \ {v}` is deleted. Children may carry negative budget in `Ind`
/// mode; the engine prunes them.
///
/// Panics unless `d(u) >= 4` and `N[v] ⊆ N[u]`.
pub fn branch_rule1(node: &BranchNode, u: Vertex, v: Vertex, mode: Mode) -> Vec<BranchNode> {
    let g = &node.graph;
    assert!(g.degree(u) >= 4, "branch vertex must have degree >= 4");
    let closed = g.closed_neighborhood(u);
    assert!(
        v != u && g.neighbors(v).iter().all(|w| closed.contains(w)) && closed.contains(&v),
        "N[v] must be contained in N[u]"
    );

    let mut take_u = node.child(0);
    take_u.commit_deletions(&VertexSet::from([u]), mode);

    let mut pair = node.child(1);
    let others: VertexSet = g.neighbors(u).iter().copied().filter(|&w| w != v).collect();
    pair.commit_deletions(&others, mode);
    pair.commit_pair(u, v, mode);

    vec![take_u, pair]
}

/// Pairing branch for a vertex `u` of degree `d >= 4` whose every neighbor
/// has a private neighbor outside `N[u]`: `d + 1` children, one deleting `u`
/// and one per neighbor `v` pairing `{u, v}` and deleting
/// `(N(u) ∪ N(v)) \ {u, v}` (at least `d` vertices).
///
/// Panics if the precondition fails.
pub fn branch_rule2(node: &BranchNode, u: Vertex, mode: Mode) -> Vec<BranchNode> {
    let g = &node.graph;
    let d = g.degree(u);
    assert!(d >= 4, "branch vertex must have degree >= 4");
    let closed = g.closed_neighborhood(u);
    assert!(
        g.neighbors(u)
            .iter()
            .all(|&v| g.neighbors(v).iter().any(|w| !closed.contains(w))),
        "every neighbor of u must have a neighbor outside N[u]"
    );

    let mut children = Vec::with_capacity(d + 1);
    let mut take_u = node.child(0);
    take_u.commit_deletions(&VertexSet::from([u]), mode);
    children.push(take_u);

    for (i, &v) in g.neighbors(u).iter().enumerate() {
        let mut pair = node.child(i as u32 + 1);
        let doomed: VertexSet = g
            .neighbors(u)
            .iter()
            .chain(g.neighbors(v))
            .copied()
            .filter(|&w| w != u && w != v)
            .collect();
        debug_assert!(doomed.len() >= d, "pair branch deletes at least d vertices");
        pair.commit_deletions(&doomed, mode);
        pair.commit_pair(u, v, mode);
        children.push(pair);
    }
    children
}

/// Forces every degree-0 vertex of the working graph into the deletion set.
/// Idempotent; a no-op when there are none.
pub fn reduce_isolated(node: &mut BranchNode, mode: Mode) -> usize {
    let isolated: VertexSet = node
        .graph
        .vertices()
        .filter(|&v| node.graph.degree(v) == 0)
        .collect();
    if !isolated.is_empty() {
        node.commit_deletions(&isolated, mode);
    }
    isolated.len()
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BranchingVectorError {
    #[error("a branching vector needs at least two decrements")]
    TooShort,
    #[error("decrements must be positive")]
    ZeroDecrement,
}

/// The parameter decrements `(t_1, ..., t_s)` of a branching rule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchingVector(Vec<u32>);

impl BranchingVector {
    pub fn new(decrements: Vec<u32>) -> Result<Self, BranchingVectorError> {
        if decrements.len() < 2 {
            return Err(BranchingVectorError::TooShort);
        }
        if decrements.contains(&0) {
            return Err(BranchingVectorError::ZeroDecrement);
        }
        Ok(BranchingVector(decrements))
    }

    pub fn decrements(&self) -> &[u32] {
        &self.0
    }
}

/// The branching number: the unique root greater than 1 of
/// `x^t = sum_i x^(t - t_i)` with `t = max t_i`, found by bisection on
/// `[1, s + 1]` to absolute tolerance `1e-6`.
pub fn branching_number(b: &BranchingVector) -> f64 {
    let ts = b.decrements();
    let tmax = *ts.iter().max().unwrap() as i32;
    let f = |x: f64| x.powi(tmax) - ts.iter().map(|&t| x.powi(tmax - t as i32)).sum::<f64>();
    let (mut lo, mut hi) = (1.0f64, ts.len() as f64 + 1.0);
    while hi - lo > 1e-7 {
        let mid = (lo + hi) / 2.0;
        if f(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    (lo + hi) / 2.0
}

/// What the leaf callback wants the engine to do next.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LeafAction {
    Continue,
    Stop,
}

/// Depth-first search applying the branch rules until every live node has
/// maximum degree 3, invoking `on_leaf` there. The stack holds only the path
/// from the root plus pending siblings, so space stays polynomial; there is
/// no memoization.
pub fn run_search<F>(graph: &Graph, mode: Mode, k: u64, mut on_leaf: F) -> SearchStats
where
    F: FnMut(&BranchNode) -> LeafAction,
{
    let mut stats = SearchStats::default();
    let mut stack = vec![BranchNode::root(graph.clone(), mode, k)];
    'search: while let Some(mut node) = stack.pop() {
        stats.nodes_expanded += 1;
        stats.max_depth = stats.max_depth.max(node.node_id.len() as u32);

        if reduce_isolated(&mut node, mode) > 0 {
            stats.fire("reduce_isolated");
        }
        if mode == Mode::Ind && node.budget < 0 {
            stats.leaves += 1; // infeasible: forced deletions exceeded k
            continue;
        }

        let Some(u) = find_branch_vertex(&node.graph) else {
            stats.leaves += 1;
            if on_leaf(&node) == LeafAction::Stop {
                break 'search;
            }
            continue;
        };

        let children = match find_dominated_neighbor(&node.graph, u) {
            Some(v) => {
                stats.fire("rule1");
                branch_rule1(&node, u, v, mode)
            }
            None => {
                stats.fire("rule2");
                branch_rule2(&node, u, mode)
            }
        };
        let live: Vec<BranchNode> = children
            .into_iter()
            .filter(|c| mode == Mode::Extend || c.budget >= 0)
            .collect();
        if live.is_empty() {
            stats.leaves += 1; // every branch overspends the budget
            continue;
        }
        // Reverse so the lexicographically first child is explored first.
        stack.extend(live.into_iter().rev());
    }
    stats
}
