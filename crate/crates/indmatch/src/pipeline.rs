//! The two-phase solvers.
//!
//! Decision (`solve_ind`): branch on high-degree vertices until every live
//! leaf has maximum degree 3; at each leaf, answer no outright when the
//! degree-3 count exceeds 2.5 times the residual budget, otherwise decompose
//! and run the DP, accepting when the leaf minimum fits the budget.
//!
//! Minimization (`solve_extend`): the same search without pruning; every
//! leaf is solved exactly and the best assembled solution wins. Disconnected
//! leaf graphs are solved per component and summed.

use serde::Serialize;
use serde_json::json;

use crate::branching::{run_search, LeafAction, Mode, SearchStats};
use crate::dp::{solve_dp, DpMemory, ForgetRule};
use crate::graph::{Graph, GraphError, VertexSet};
use crate::oracle::{extract_matching, is_induced_matching, Solution};
use crate::pathdecomp::{decompose_for_instance, DEFAULT_EXACT_THRESHOLD};

/// Tunables shared by both solvers.
#[derive(Debug, Clone)]
pub struct SolveConfig {
    /// Contracted cores up to this size get exact base decompositions.
    pub exact_threshold: usize,
    pub forget_rule: ForgetRule,
    pub dp_memory: DpMemory,
    /// Record one [`LeafRecord`] per DP-eligible leaf (for instrumentation).
    pub collect_leaf_records: bool,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            exact_threshold: DEFAULT_EXACT_THRESHOLD,
            forget_rule: ForgetRule::default(),
            dp_memory: DpMemory::default(),
            collect_leaf_records: false,
        }
    }
}

/// Per-component decomposition data at one search leaf.
#[derive(Debug, Clone, Serialize)]
pub struct ComponentRecord {
    pub n: usize,
    pub width: i32,
    pub exact_base: bool,
}

/// Instrumentation for one max-degree-3 leaf of the search tree.
#[derive(Debug, Clone, Serialize)]
pub struct LeafRecord {
    pub n: usize,
    pub degree3_count: usize,
    pub residual_budget: i64,
    pub gate_fired: bool,
    pub components: Vec<ComponentRecord>,
}

/// Counters for a whole pipeline run.
#[derive(Debug, Clone, Default, Serialize)]
pub struct PipelineStats {
    pub search: SearchStats,
    pub dp_invocations: u64,
    pub gate_rejections: u64,
    /// widest decomposition seen across all leaves, -1 when none ran
    pub max_width: i32,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub leaf_records: Vec<LeafRecord>,
}

impl PipelineStats {
    fn observe_width(&mut self, w: i32) {
        self.max_width = self.max_width.max(w);
    }
}

/// Outcome of the decision solver.
#[derive(Debug, Clone)]
pub struct IndAnswer {
    pub decision: bool,
    pub solution: Option<Solution>,
    pub stats: PipelineStats,
}

impl IndAnswer {
    /// The documented result schema:
    /// `{decision, solution, matching, stats: {nodes, leaves, max_width, rule_counts}}`.
    pub fn to_json(&self) -> serde_json::Value {
        answer_json(self.decision, self.solution.as_ref(), &self.stats)
    }
}

/// Outcome of the minimization solver.
#[derive(Debug, Clone)]
pub struct ExtendAnswer {
    pub solution: Solution,
    pub stats: PipelineStats,
}

impl ExtendAnswer {
    pub fn to_json(&self) -> serde_json::Value {
        answer_json(true, Some(&self.solution), &self.stats)
    }
}

fn answer_json(decision: bool, solution: Option<&Solution>, stats: &PipelineStats) -> serde_json::Value {
    json!({
        "decision": if decision { "yes" } else { "no" },
        "solution": solution.map(|s| s.deleted.iter().copied().collect::<Vec<_>>()),
        "matching": solution.map(|s| s.matching.iter().map(|&(u, v)| [u, v]).collect::<Vec<_>>()),
        "stats": {
            "nodes": stats.search.nodes_expanded,
            "leaves": stats.search.leaves,
            "max_width": stats.max_width,
            "rule_counts": stats.search.rule_fire_counts,
            "dp_invocations": stats.dp_invocations,
            "gate_rejections": stats.gate_rejections,
        },
    })
}

/// Solves one max-degree-3 leaf graph component by component. Returns the
/// total minimum and the union of the per-component solutions, or bails out
/// early once the running total exceeds `stop_above` (if given).
fn solve_leaf_graph(
    leaf: &Graph,
    config: &SolveConfig,
    stats: &mut PipelineStats,
    components_out: Option<&mut Vec<ComponentRecord>>,
    stop_above: Option<i64>,
) -> (i64, VertexSet, bool) {
    let mut total: i64 = 0;
    let mut deleted = VertexSet::new();
    let mut records = Vec::new();
    let mut complete = true;
    for comp in leaf.components() {
        let sub = leaf.subgraph(&comp);
        let outcome = decompose_for_instance(&sub, config.exact_threshold)
            .expect("leaf graphs have maximum degree 3");
        stats.dp_invocations += 1;
        stats.observe_width(outcome.width);
        records.push(ComponentRecord {
            n: sub.vertex_count(),
            width: outcome.width,
            exact_base: outcome.exact_base,
        });
        let run = solve_dp(&sub, &outcome.nice, config.forget_rule, config.dp_memory);
        total += run.min_size as i64;
        deleted.extend(run.solution.deleted);
        if stop_above.is_some_and(|cap| total > cap) {
            complete = false;
            break;
        }
    }
    if let Some(out) = components_out {
        *out = records;
    }
    (total, deleted, complete)
}

/// Decides whether at most `k` deletions suffice; yes answers carry a
/// verified certificate.
pub fn solve_ind(g: &Graph, k: u64, config: &SolveConfig) -> IndAnswer {
    let mut stats = PipelineStats {
        max_width: -1,
        ..Default::default()
    };
    let mut found: Option<Solution> = None;

    let search_stats = run_search(g, Mode::Ind, k, |node| {
        let leaf = &node.graph;
        let s = node.budget;
        debug_assert!(s >= 0);
        let degree3_count = leaf.vertices().filter(|&v| leaf.degree(v) == 3).count();

        // A yes-subinstance of maximum degree 3 has at most 2.5s degree-3
        // vertices; more than that is a certified no without any DP work.
        let gate_fired = 2 * degree3_count as i64 > 5 * s;
        let mut components = Vec::new();
        let mut accepted = None;
        if gate_fired {
            stats.gate_rejections += 1;
        } else {
            let (total, leaf_deleted, _) = solve_leaf_graph(
                leaf,
                config,
                &mut stats,
                config.collect_leaf_records.then_some(&mut components),
                Some(s),
            );
            if total <= s {
                let mut deleted = node.committed.clone();
                deleted.extend(leaf_deleted);
                let matching =
                    extract_matching(g, &deleted).expect("assembled certificate must verify");
                debug_assert!(deleted.len() as u64 <= k);
                accepted = Some(Solution { deleted, matching });
            }
        }
        if config.collect_leaf_records {
            stats.leaf_records.push(LeafRecord {
                n: leaf.vertex_count(),
                degree3_count,
                residual_budget: s,
                gate_fired,
                components,
            });
        }
        match accepted {
            Some(sol) => {
                found = Some(sol);
                LeafAction::Stop
            }
            None => LeafAction::Continue,
        }
    });

    stats.search = search_stats;
    let decision = found.is_some();
    if let Some(sol) = &found {
        debug_assert!(sol.is_valid_for(g));
    }
    IndAnswer {
        decision,
        solution: found,
        stats,
    }
}

/// Computes a minimum deletion set, certificate included. Always succeeds:
/// deleting every vertex is vacuously valid.
pub fn solve_extend(g: &Graph, config: &SolveConfig) -> ExtendAnswer {
    let mut stats = PipelineStats {
        max_width: -1,
        ..Default::default()
    };
    let mut best: Option<VertexSet> = None;

    let search_stats = run_search(g, Mode::Extend, 0, |node| {
        let committed = node.committed.len() as i64;
        if best.as_ref().is_some_and(|b| committed >= b.len() as i64) {
            return LeafAction::Continue; // cannot improve on the incumbent
        }
        let cap = best.as_ref().map(|b| b.len() as i64 - 1 - committed);
        let mut components = Vec::new();
        let (total, leaf_deleted, complete) = solve_leaf_graph(
            &node.graph,
            config,
            &mut stats,
            config.collect_leaf_records.then_some(&mut components),
            cap,
        );
        if config.collect_leaf_records {
            stats.leaf_records.push(LeafRecord {
                n: node.graph.vertex_count(),
                degree3_count: node
                    .graph
                    .vertices()
                    .filter(|&v| node.graph.degree(v) == 3)
                    .count(),
                residual_budget: node.budget,
                gate_fired: false,
                components,
            });
        }
        if complete {
            let size = committed + total;
            if best.as_ref().is_none_or(|b| size < b.len() as i64) {
                let mut deleted = node.committed.clone();
                deleted.extend(leaf_deleted);
                best = Some(deleted);
            }
        }
        LeafAction::Continue
    });

    stats.search = search_stats;
    let deleted = best.expect("every search has at least one leaf");
    let matching = extract_matching(g, &deleted).expect("assembled certificate must verify");
    let solution = Solution { deleted, matching };
    debug_assert!(solution.is_valid_for(g));
    ExtendAnswer { solution, stats }
}

/// Certificate check: `s ⊆ V(g)`, the residual graph is an induced matching,
/// and, when `k` is given, `|s| <= k`.
pub fn verify(g: &Graph, s: &VertexSet, k: Option<u64>) -> Result<bool, GraphError> {
    let residual = g.delete_vertices(s)?;
    Ok(is_induced_matching(&residual) && k.is_none_or(|k| s.len() as u64 <= k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;

    fn cfg() -> SolveConfig {
        SolveConfig::default()
    }

    #[test]
    fn single_edge_at_budget_zero() {
        let answer = solve_ind(&Graph::path(2), 0, &cfg());
        assert!(answer.decision);
        assert_eq!(answer.solution.unwrap().deleted.len(), 0);
    }

    #[test]
    fn petersen_at_three_is_rejected_by_the_gate() {
        let answer = solve_ind(&Graph::petersen(), 3, &cfg());
        assert!(!answer.decision);
        assert_eq!(answer.stats.gate_rejections, 1);
        assert_eq!(answer.stats.dp_invocations, 0);
    }

    #[test]
    fn c5_needs_three() {
        let answer = solve_ind(&Graph::cycle(5), 3, &cfg());
        assert!(answer.decision);
        let sol = answer.solution.unwrap();
        assert_eq!(sol.deleted.len(), 3);
        assert!(sol.is_valid_for(&Graph::cycle(5)));
        assert!(!solve_ind(&Graph::cycle(5), 2, &cfg()).decision);
    }

    #[test]
    fn k5_uses_the_dominated_rule() {
        let answer = solve_ind(&Graph::complete(5), 3, &cfg());
        assert!(answer.decision);
        assert_eq!(answer.solution.unwrap().deleted.len(), 3);
        assert!(answer.stats.search.rule_fire_counts.get("rule1").copied().unwrap_or(0) >= 1);
    }

    #[test]
    fn extend_matches_oracle_on_named_graphs() {
        for g in [
            Graph::path(4),
            Graph::petersen(),
            Graph::complete(6),
            Graph::star(5),
            Graph::cycle(9),
        ] {
            let answer = solve_extend(&g, &cfg());
            let expected = oracle::brute_force_extend(&g).deleted.len();
            assert_eq!(answer.solution.deleted.len(), expected, "on {g}");
            assert!(answer.solution.is_valid_for(&g));
        }
    }

    #[test]
    fn extend_on_three_disjoint_edges_deletes_nothing() {
        let g = Graph::from_edges([(1, 2), (3, 4), (5, 6)]);
        let answer = solve_extend(&g, &cfg());
        assert_eq!(answer.solution.deleted.len(), 0);
        assert_eq!(answer.solution.matching, vec![(1, 2), (3, 4), (5, 6)]);
    }

    #[test]
    fn extend_handles_the_empty_graph() {
        let answer = solve_extend(&Graph::new(), &cfg());
        assert_eq!(answer.solution.deleted.len(), 0);
        assert!(answer.solution.matching.is_empty());
    }

    #[test]
    fn verify_examples() {
        let p3 = Graph::path(3);
        assert!(verify(&p3, &VertexSet::from([1]), Some(1)).unwrap());
        assert!(!verify(&p3, &VertexSet::from([2]), Some(1)).unwrap());
        let c5 = Graph::cycle(5);
        assert!(verify(&c5, &VertexSet::from([1, 2, 3]), Some(3)).unwrap());
        assert!(!verify(&c5, &VertexSet::from([1, 2, 3]), Some(2)).unwrap());
        assert!(verify(&p3, &VertexSet::from([9]), None).is_err());
    }

    #[test]
    fn json_schema_fields() {
        let answer = solve_ind(&Graph::cycle(5), 3, &cfg());
        let value = answer.to_json();
        assert_eq!(value["decision"], "yes");
        assert!(value["solution"].is_array());
        assert!(value["matching"].is_array());
        assert!(value["stats"]["nodes"].is_u64());
        assert!(value["stats"]["rule_counts"].is_object());

        let no = solve_ind(&Graph::cycle(5), 1, &cfg());
        assert_eq!(no.to_json()["decision"], "no");
        assert!(no.to_json()["solution"].is_null());
    }

    #[test]
    fn disconnected_instances_sum_per_component() {
        // C5 ⊎ P4 ⊎ K2: minimum 3 + 2 + 0
        let mut g = Graph::cycle(5);
        for (u, v) in [(10, 11), (11, 12), (12, 13), (20, 21)] {
            g.add_edge(u, v).unwrap();
        }
        let answer = solve_extend(&g, &cfg());
        assert_eq!(answer.solution.deleted.len(), 5);
        assert!(solve_ind(&g, 5, &cfg()).decision);
        assert!(!solve_ind(&g, 4, &cfg()).decision);
    }

    #[test]
    fn leaf_records_are_collected_on_demand() {
        let mut config = cfg();
        config.collect_leaf_records = true;
        let answer = solve_ind(&Graph::petersen(), 4, &cfg());
        assert!(answer.stats.leaf_records.is_empty());
        let answer = solve_ind(&Graph::petersen(), 4, &config);
        assert_eq!(answer.stats.leaf_records.len(), 1);
        let record = &answer.stats.leaf_records[0];
        assert_eq!(record.n, 10);
        assert_eq!(record.degree3_count, 10);
        assert!(!record.gate_fired);
        assert_eq!(record.components.len(), 1);
        assert_eq!(record.components[0].width, 5);
    }

    #[test]
    fn petersen_minimum_is_four() {
        let answer = solve_extend(&Graph::petersen(), &cfg());
        assert_eq!(answer.solution.deleted.len(), 4);
        assert!(solve_ind(&Graph::petersen(), 4, &cfg()).decision);
    }
}
