//! Dynamic program over a nice path decomposition.
//!
//! Each bag vertex carries one of three colors: 0 — in the partial deletion
//! set; 1 — kept, currently isolated in the processed subgraph, to be paired
//! later; 2 — kept, already of degree exactly one. A table entry `c[t, f]`
//! is the minimum number of deleted vertices among partial solutions that
//! agree with the coloring `f` on the current bag and leave every processed
//! vertex with degree at most one.
//!
//! Forgetting a color-1 vertex would abandon it as an isolated component,
//! which is fine for dissociation-style problems but not here, where every
//! surviving component must be a full edge. The default forget rule
//! therefore only admits colors 0 and 2; the permissive variant is kept as
//! [`ForgetRule::Dissociation`] for comparison tests.

use thiserror::Error;

use crate::graph::{Graph, Vertex, VertexSet};
use crate::oracle::{extract_matching, Solution};
use crate::pathdecomp::{NicePathDecomposition, NiceStep};

/// Infeasibility sentinel: strictly greater than any vertex count, and safe
/// under saturating addition.
pub const INFEASIBLE: u32 = u32::MAX / 2;

const NO_CHILD: u32 = u32::MAX;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DpError {
    #[error("bag mismatch: expected the child bag {expected}, got {got}")]
    BagMismatch { expected: String, got: String },
}

/// Which options a forget node may take.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ForgetRule {
    /// Colors 0 and 2 only: every kept vertex must end up paired.
    #[default]
    Corrected,
    /// Additionally allows forgetting color 1, i.e. tolerating isolated
    /// vertices in the residual graph (the relaxed 2-component-order
    /// condition). Kept for ablation tests; not a valid solver for this
    /// problem.
    Dissociation,
}

/// Table at one nice node: dense over all `3^|bag|` colorings. The coloring
/// code is little-endian base 3 over the sorted bag.
#[derive(Debug, Clone)]
pub struct DpTable {
    pub bag: Vec<Vertex>,
    pub cost: Vec<u32>,
    /// Coloring code in the child table achieving each entry, for
    /// reconstruction. `u32::MAX` marks infeasible entries and the leaf.
    pub child_code: Vec<u32>,
}

fn pow3(n: usize) -> usize {
    3usize.pow(n as u32)
}

fn digit(code: usize, pos: usize) -> u8 {
    (code / pow3(pos) % 3) as u8
}

/// Removes the base-3 digit at `pos`, shifting higher digits down.
fn remove_digit(code: usize, pos: usize) -> usize {
    let low = code % pow3(pos);
    let high = code / pow3(pos + 1);
    high * pow3(pos) + low
}

/// Overwrites the digit at `pos` with `value`.
fn set_digit(code: usize, pos: usize, value: u8) -> usize {
    code - digit(code, pos) as usize * pow3(pos) + value as usize * pow3(pos)
}

impl DpTable {
    /// The table of the leaf node: one empty coloring of cost 0.
    pub fn leaf() -> DpTable {
        DpTable {
            bag: Vec::new(),
            cost: vec![0],
            child_code: vec![NO_CHILD],
        }
    }

    pub fn len(&self) -> usize {
        self.cost.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cost.is_empty()
    }

    /// Minimum over all colorings; the final empty bag has exactly one.
    pub fn best(&self) -> u32 {
        self.cost.iter().copied().min().unwrap_or(INFEASIBLE)
    }
}

fn bag_mismatch(expected: &[Vertex], got: &[Vertex]) -> DpError {
    DpError::BagMismatch {
        expected: format!("{expected:?}"),
        got: format!("{got:?}"),
    }
}

/// Introduce node: extends every child coloring with a color for `v`.
///
/// Color 0 costs one extra deletion. Color 1 requires every bag neighbor of
/// `v` to be deleted. Color 2 pairs `v` with its unique non-deleted bag
/// neighbor `w`, which must show color 2 as well and must have been color 1
/// (unpaired) in the child.
pub fn dp_introduce(
    child: &DpTable,
    bag_after: &[Vertex],
    v: Vertex,
    g: &Graph,
) -> Result<DpTable, DpError> {
    let mut expected: Vec<Vertex> = child.bag.clone();
    match expected.binary_search(&v) {
        Ok(_) => return Err(bag_mismatch(&expected, bag_after)),
        Err(pos) => expected.insert(pos, v),
    }
    if expected != bag_after {
        return Err(bag_mismatch(&expected, bag_after));
    }
    let vpos = bag_after.binary_search(&v).unwrap();
    let neighbor_positions: Vec<usize> = bag_after
        .iter()
        .enumerate()
        .filter(|&(_, &u)| u != v && g.has_edge(u, v))
        .map(|(i, _)| i)
        .collect();

    let size = pow3(bag_after.len());
    let mut cost = vec![INFEASIBLE; size];
    let mut child_code = vec![NO_CHILD; size];
    for code in 0..size {
        let fv = digit(code, vpos);
        let restricted = remove_digit(code, vpos);
        let (c, from) = match fv {
            0 => (child.cost[restricted].saturating_add(1), restricted),
            1 => {
                if neighbor_positions.iter().all(|&p| digit(code, p) == 0) {
                    (child.cost[restricted], restricted)
                } else {
                    (INFEASIBLE, NO_CHILD as usize)
                }
            }
            _ => {
                // v takes color 2: exactly one live bag neighbor w, itself
                // colored 2 now and 1 before v arrived.
                let live: Vec<usize> = neighbor_positions
                    .iter()
                    .copied()
                    .filter(|&p| digit(code, p) != 0)
                    .collect();
                match live.as_slice() {
                    [w] if digit(code, *w) == 2 => {
                        let demoted = set_digit(code, *w, 1);
                        let from = remove_digit(demoted, vpos);
                        (child.cost[from], from)
                    }
                    _ => (INFEASIBLE, NO_CHILD as usize),
                }
            }
        };
        cost[code] = c.min(INFEASIBLE);
        child_code[code] = if c >= INFEASIBLE { NO_CHILD } else { from as u32 };
    }
    Ok(DpTable {
        bag: bag_after.to_vec(),
        cost,
        child_code,
    })
}

/// Forget node: minimizes over the admitted colors of the departing vertex.
pub fn dp_forget(
    child: &DpTable,
    bag_after: &[Vertex],
    v: Vertex,
    rule: ForgetRule,
) -> Result<DpTable, DpError> {
    let Ok(vpos) = child.bag.binary_search(&v) else {
        return Err(bag_mismatch(&child.bag, bag_after));
    };
    let mut expected = child.bag.clone();
    expected.remove(vpos);
    if expected != bag_after {
        return Err(bag_mismatch(&expected, bag_after));
    }

    let colors: &[u8] = match rule {
        ForgetRule::Corrected => &[0, 2],
        ForgetRule::Dissociation => &[0, 1, 2],
    };
    let size = pow3(bag_after.len());
    let mut cost = vec![INFEASIBLE; size];
    let mut child_code = vec![NO_CHILD; size];
    for code in 0..size {
        // re-insert a digit for v at vpos
        let low = code % pow3(vpos);
        let high = code / pow3(vpos);
        let base = high * pow3(vpos + 1) + low;
        for &color in colors {
            let full = base + color as usize * pow3(vpos);
            if child.cost[full] < cost[code] {
                cost[code] = child.cost[full];
                child_code[code] = full as u32;
            }
        }
    }
    Ok(DpTable {
        bag: bag_after.to_vec(),
        cost,
        child_code,
    })
}

/// How much the solver keeps around for reconstruction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DpMemory {
    /// Keep every table; reconstruction walks back-pointers.
    #[default]
    Tables,
    /// Keep only the frontier table and re-derive child tables on the
    /// backward pass. Memory drops to one table; time gains a factor of the
    /// decomposition length.
    Recompute,
}

/// Result of one DP run.
#[derive(Debug, Clone)]
pub struct DpRun {
    pub min_size: u32,
    pub solution: Solution,
    /// table entry counts per nice node, in sweep order
    pub table_sizes: Vec<usize>,
}

fn sweep_once(
    g: &Graph,
    npd: &NicePathDecomposition,
    rule: ForgetRule,
    upto: usize,
    mut sink: Option<&mut Vec<DpTable>>,
) -> DpTable {
    let mut current = DpTable::leaf();
    if let Some(tables) = sink.as_deref_mut() {
        tables.push(current.clone());
    }
    for (step, bag) in npd.steps().iter().take(upto + 1).skip(1) {
        let bag_sorted: Vec<Vertex> = bag.iter().copied().collect();
        current = match step {
            NiceStep::Leaf => DpTable::leaf(),
            NiceStep::Introduce(v) => {
                dp_introduce(&current, &bag_sorted, *v, g).expect("nice steps are consistent")
            }
            NiceStep::Forget(v) => {
                dp_forget(&current, &bag_sorted, *v, rule).expect("nice steps are consistent")
            }
        };
        if let Some(tables) = sink.as_deref_mut() {
            tables.push(current.clone());
        }
    }
    current
}

/// Runs the DP over `npd` and reconstructs a minimum deletion set.
///
/// With [`ForgetRule::Corrected`] the reconstructed residual graph is an
/// induced matching and the returned size matches the brute-force minimum.
pub fn solve_dp(g: &Graph, npd: &NicePathDecomposition, rule: ForgetRule, memory: DpMemory) -> DpRun {
    let steps = npd.steps();
    let last = steps.len() - 1;
    debug_assert!(steps.last().is_none_or(|(_, bag)| bag.is_empty()));

    let mut deleted = VertexSet::new();
    let min_size;
    let mut table_sizes = Vec::with_capacity(steps.len());

    match memory {
        DpMemory::Tables => {
            let mut tables = Vec::with_capacity(steps.len());
            sweep_once(g, npd, rule, last, Some(&mut tables));
            table_sizes.extend(tables.iter().map(DpTable::len));
            min_size = tables[last].best();
            let mut code = 0usize; // the unique coloring of the final empty bag
            for t in (1..=last).rev() {
                let child = tables[t].child_code[code];
                debug_assert_ne!(child, NO_CHILD, "walking a feasible entry");
                if let NiceStep::Forget(v) = steps[t].0 {
                    let vpos = tables[t - 1].bag.binary_search(&v).unwrap();
                    if digit(child as usize, vpos) == 0 {
                        deleted.insert(v);
                    }
                }
                code = child as usize;
            }
        }
        DpMemory::Recompute => {
            let final_table = sweep_once(g, npd, rule, last, None);
            min_size = final_table.best();
            let mut code = 0usize;
            for t in (1..=last).rev() {
                // rebuild the table at t - 1, then redo step t on top of it
                let child_table = sweep_once(g, npd, rule, t - 1, None);
                let bag_sorted: Vec<Vertex> = steps[t].1.iter().copied().collect();
                let parent = match steps[t].0 {
                    NiceStep::Leaf => DpTable::leaf(),
                    NiceStep::Introduce(v) => {
                        dp_introduce(&child_table, &bag_sorted, v, g).expect("consistent steps")
                    }
                    NiceStep::Forget(v) => {
                        dp_forget(&child_table, &bag_sorted, v, rule).expect("consistent steps")
                    }
                };
                let child = parent.child_code[code];
                debug_assert_ne!(child, NO_CHILD);
                if let NiceStep::Forget(v) = steps[t].0 {
                    let vpos = child_table.bag.binary_search(&v).unwrap();
                    if digit(child as usize, vpos) == 0 {
                        deleted.insert(v);
                    }
                }
                code = child as usize;
            }
            table_sizes = steps.iter().map(|(_, bag)| pow3(bag.len())).collect();
        }
    }

    debug_assert!(min_size < INFEASIBLE, "deleting everything is always feasible");
    let matching = match rule {
        ForgetRule::Corrected => extract_matching(g, &deleted)
            .expect("corrected DP reconstructs an induced matching"),
        // The relaxed rule may leave isolated vertices; report the edges.
        ForgetRule::Dissociation => g
            .delete_vertices(&deleted)
            .expect("deleted ⊆ V")
            .edges()
            .collect(),
    };
    DpRun {
        min_size,
        solution: Solution { deleted, matching },
        table_sizes,
    }
}
