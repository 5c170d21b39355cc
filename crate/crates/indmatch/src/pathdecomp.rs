//! Path decompositions of graphs with maximum degree 3.
//!
//! The construction pipeline is: contract away degree-<=2 structure
//! ([`contract`]), decompose the small remainder ([`base_decompose`], exact
//! below a size threshold, greedy above it), splice the contracted paths back
//! in ([`expand`], adding at most 2 to the width), and refine to a nice
//! decomposition ([`make_nice`]) for the dynamic program.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::{Graph, Vertex, VertexSet};

/// Exact pathwidth search is a subset DP; beyond this many vertices the
/// table no longer fits comfortably and the heuristic takes over regardless
/// of the configured threshold.
pub const EXACT_HARD_CAP: usize = 22;

/// Default vertex-count threshold under which [`base_decompose`] is exact.
pub const DEFAULT_EXACT_THRESHOLD: usize = 15;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DecompError {
    #[error("vertex {vertex} has degree {degree}, maximum degree 3 required")]
    MaxDegreeExceeded { vertex: Vertex, degree: usize },
    #[error("decomposition is not valid for the graph")]
    InvalidDecomposition,
}

/// An ordered bag sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathDecomposition {
    pub bags: Vec<VertexSet>,
}

impl PathDecomposition {
    /// Width: maximum bag size minus one. The single empty bag has width -1.
    pub fn width(&self) -> i32 {
        debug_assert!(!self.bags.is_empty(), "width of an empty bag sequence");
        self.bags.iter().map(|b| b.len() as i32 - 1).max().unwrap_or(-1)
    }

    /// Builds the bag sequence induced by a vertex ordering: bag `i` holds
    /// `order[i]` plus every earlier vertex that still has a neighbor at
    /// position `i` or later. Its width equals the ordering's vertex
    /// separation.
    pub fn from_ordering(g: &Graph, order: &[Vertex]) -> PathDecomposition {
        let pos: BTreeMap<Vertex, usize> = order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut bags = Vec::with_capacity(order.len());
        for (i, &v) in order.iter().enumerate() {
            let mut bag = VertexSet::from([v]);
            for (j, &u) in order[..i].iter().enumerate() {
                debug_assert!(j < i);
                if g.neighbors(u).iter().any(|w| pos[w] >= i) {
                    bag.insert(u);
                }
            }
            bags.push(bag);
        }
        if bags.is_empty() {
            bags.push(VertexSet::new());
        }
        PathDecomposition { bags }
    }

    /// Serialization: header `pd r width`, then one sorted bag per line.
    pub fn to_text(&self) -> String {
        let mut out = format!("pd {} {}\n", self.bags.len(), self.width());
        for bag in &self.bags {
            let ids: Vec<String> = bag.iter().map(|v| v.to_string()).collect();
            out.push_str(&ids.join(" "));
            out.push('\n');
        }
        out
    }
}

/// True iff `pd` covers all vertices and edges of `g` and every vertex
/// occupies a contiguous interval of bags.
pub fn validate(g: &Graph, pd: &PathDecomposition) -> bool {
    let mut first: BTreeMap<Vertex, usize> = BTreeMap::new();
    let mut last: BTreeMap<Vertex, usize> = BTreeMap::new();
    for (i, bag) in pd.bags.iter().enumerate() {
        for &v in bag {
            first.entry(v).or_insert(i);
            last.insert(v, i);
        }
    }
    // coverage (both directions: bags may not mention foreign vertices)
    if first.len() != g.vertex_count() || !first.keys().all(|&v| g.contains_vertex(v)) {
        return false;
    }
    // interval property
    for (&v, &lo) in &first {
        for i in lo..=last[&v] {
            if !pd.bags[i].contains(&v) {
                return false;
            }
        }
    }
    // edge coverage
    g.edges()
        .all(|(u, v)| pd.bags.iter().any(|bag| bag.contains(&u) && bag.contains(&v)))
}

/// One step of a nice decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NiceStep {
    Leaf,
    Introduce(Vertex),
    Forget(Vertex),
}

/// A leaf/introduce/forget chain starting and ending at the empty bag.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NicePathDecomposition {
    steps: Vec<(NiceStep, VertexSet)>,
}

impl NicePathDecomposition {
    /// Steps paired with the bag they produce; the first entry is `(Leaf, ∅)`.
    pub fn steps(&self) -> &[(NiceStep, VertexSet)] {
        &self.steps
    }

    pub fn width(&self) -> i32 {
        self.as_path_decomposition().width()
    }

    pub fn as_path_decomposition(&self) -> PathDecomposition {
        PathDecomposition {
            bags: self.steps.iter().map(|(_, bag)| bag.clone()).collect(),
        }
    }

    /// Serialization: the plain header plus one tagged line per step
    /// (`L`, `I v`, `F v`).
    pub fn to_text(&self) -> String {
        let mut out = format!("pd {} {}\n", self.steps.len(), self.width());
        for (step, _) in &self.steps {
            match step {
                NiceStep::Leaf => out.push_str("L\n"),
                NiceStep::Introduce(v) => {
                    let _ = writeln!(out, "I {v}");
                }
                NiceStep::Forget(v) => {
                    let _ = writeln!(out, "F {v}");
                }
            }
        }
        out
    }
}

/// Refines a decomposition into nice form: between consecutive bags the
/// departing vertices are forgotten in ascending order, then the arriving
/// ones introduced in ascending order. Width is preserved.
pub fn make_nice(pd: &PathDecomposition) -> NicePathDecomposition {
    let mut steps = vec![(NiceStep::Leaf, VertexSet::new())];
    let mut current = VertexSet::new();
    let push = |steps: &mut Vec<(NiceStep, VertexSet)>, current: &mut VertexSet, target: &VertexSet| {
        for &v in current.difference(target).copied().collect::<Vec<_>>().iter() {
            current.remove(&v);
            steps.push((NiceStep::Forget(v), current.clone()));
        }
        for &v in target.difference(current).copied().collect::<Vec<_>>().iter() {
            current.insert(v);
            steps.push((NiceStep::Introduce(v), current.clone()));
        }
    };
    for bag in &pd.bags {
        push(&mut steps, &mut current, bag);
    }
    push(&mut steps, &mut current, &VertexSet::new());
    NicePathDecomposition { steps }
}

/// Components with no degree-3 vertex, handled by direct decompositions
/// instead of contraction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DirectComponent {
    Isolated(Vertex),
    /// Vertices in path order.
    Path(Vec<Vertex>),
    /// Vertices in cyclic order.
    Cycle(Vec<Vertex>),
    /// Two degree-3 vertices joined by an edge and two contracted paths;
    /// such a component is closed and has pathwidth at most 3.
    ThetaPlus {
        x: Vertex,
        y: Vertex,
        chains: [Vec<Vertex>; 2],
    },
}

impl DirectComponent {
    fn vertices(&self) -> Vec<Vertex> {
        match self {
            DirectComponent::Isolated(v) => vec![*v],
            DirectComponent::Path(vs) | DirectComponent::Cycle(vs) => vs.clone(),
            DirectComponent::ThetaPlus { x, y, chains } => {
                let mut out = vec![*x, *y];
                out.extend(chains[0].iter().copied());
                out.extend(chains[1].iter().copied());
                out
            }
        }
    }

    fn smallest_vertex(&self) -> Vertex {
        self.vertices().into_iter().min().unwrap()
    }

    fn decomposition(&self) -> Vec<VertexSet> {
        match self {
            DirectComponent::Isolated(v) => vec![VertexSet::from([*v])],
            DirectComponent::Path(vs) => vs
                .windows(2)
                .map(|w| VertexSet::from([w[0], w[1]]))
                .collect(),
            DirectComponent::Cycle(vs) => {
                let pin = vs[0];
                vs[1..]
                    .windows(2)
                    .map(|w| VertexSet::from([pin, w[0], w[1]]))
                    .collect()
            }
            DirectComponent::ThetaPlus { x, y, chains } => {
                let base = VertexSet::from([*x, *y]);
                let mut bags = Vec::new();
                for chain in chains {
                    bags.extend(chain_run(&base, chain));
                }
                bags
            }
        }
    }
}

/// The contraction of all degree-<=2 structure of a max-degree-3 graph.
///
/// Vertices of degree 3 (anchors) survive into the contracted graph; every
/// maximal path of degree-<=2 vertices becomes either a red edge annotation
/// (anchor to anchor, possibly several in parallel and possibly a loop back
/// to the same anchor), a red vertex annotation (a pendant path hanging off
/// an anchor), or part of a direct component when the component has no
/// anchor at all.
#[derive(Debug, Clone)]
pub struct ContractionRecord {
    pub contracted: Graph,
    /// `(x, y)` with `x <= y` mapped to the parallel chains of interior
    /// vertices, each listed from the `x` side to the `y` side.
    pub red_edges: BTreeMap<(Vertex, Vertex), Vec<Vec<Vertex>>>,
    /// Anchor mapped to its pendant chains, each listed from the anchor
    /// outward, ending at the degree-1 tip.
    pub red_vertices: BTreeMap<Vertex, Vec<Vec<Vertex>>>,
    pub direct: Vec<DirectComponent>,
}

impl ContractionRecord {
    /// Every vertex of the original graph, for round-trip checks.
    pub fn covered_vertices(&self) -> VertexSet {
        let mut all: VertexSet = self.contracted.vertices().collect();
        for chains in self.red_edges.values() {
            for chain in chains {
                all.extend(chain.iter().copied());
            }
        }
        for chains in self.red_vertices.values() {
            for chain in chains {
                all.extend(chain.iter().copied());
            }
        }
        for comp in &self.direct {
            all.extend(comp.vertices());
        }
        all
    }

    pub fn has_annotations(&self) -> bool {
        !self.red_edges.is_empty() || !self.red_vertices.is_empty() || !self.direct.is_empty()
    }
}

/// Walks a maximal degree-<=2 thread starting from `anchor` into `first`.
/// Returns the interior vertices and the anchor reached, or `None` as the
/// endpoint when the thread dies at a degree-1 tip.
fn walk_thread(
    g: &Graph,
    is_anchor: impl Fn(Vertex) -> bool,
    anchor: Vertex,
    first: Vertex,
) -> (Vec<Vertex>, Option<Vertex>) {
    let mut chain = Vec::new();
    let mut prev = anchor;
    let mut here = first;
    loop {
        if is_anchor(here) {
            return (chain, Some(here));
        }
        chain.push(here);
        match g.neighbors(here).iter().copied().find(|&w| w != prev) {
            Some(next) => {
                prev = here;
                here = next;
            }
            None => return (chain, None), // degree-1 tip
        }
    }
}

/// Contracts a max-degree-3 graph: anchors (degree-3 vertices) survive,
/// degree-<=2 threads become annotations, anchor-free components become
/// direct records. The contracted graph again has maximum degree 3 and at
/// most as many vertices as `g` has of degree 3.
pub fn contract(g: &Graph) -> Result<ContractionRecord, DecompError> {
    if let Some(v) = g.vertices().find(|&v| g.degree(v) > 3) {
        return Err(DecompError::MaxDegreeExceeded {
            vertex: v,
            degree: g.degree(v),
        });
    }
    let is_anchor = |v: Vertex| g.degree(v) == 3;

    let mut record = ContractionRecord {
        contracted: Graph::new(),
        red_edges: BTreeMap::new(),
        red_vertices: BTreeMap::new(),
        direct: Vec::new(),
    };

    for component in g.components() {
        let anchors: Vec<Vertex> = component.iter().copied().filter(|&v| is_anchor(v)).collect();
        if anchors.is_empty() {
            record.direct.push(trace_anchor_free(g, &component));
            continue;
        }

        let mut plain_edges: Vec<(Vertex, Vertex)> = Vec::new();
        let mut chains: BTreeMap<(Vertex, Vertex), Vec<Vec<Vertex>>> = BTreeMap::new();
        let mut seen_interior = VertexSet::new();
        for &x in &anchors {
            for &w in g.neighbors(x) {
                if is_anchor(w) {
                    if x < w {
                        plain_edges.push((x, w));
                    }
                    continue;
                }
                if seen_interior.contains(&w) {
                    continue; // thread already traced from its other end
                }
                let (chain, end) = walk_thread(g, is_anchor, x, w);
                seen_interior.extend(chain.iter().copied());
                match end {
                    Some(y) => {
                        let (key, oriented) = if x <= y {
                            ((x, y), chain)
                        } else {
                            ((y, x), chain.into_iter().rev().collect())
                        };
                        chains.entry(key).or_default().push(oriented);
                    }
                    None => {
                        record.red_vertices.entry(x).or_default().push(chain);
                    }
                }
            }
        }

        // Two parallel chains next to a direct edge exhaust both anchors'
        // degrees, so the component is exactly that theta-plus shape.
        let theta_keys: Vec<(Vertex, Vertex)> = chains
            .iter()
            .filter(|(&(x, y), cs)| x != y && cs.len() == 2 && g.has_edge(x, y))
            .map(|(&k, _)| k)
            .collect();
        for key in theta_keys {
            let cs = chains.remove(&key).unwrap();
            // degree 3 at both anchors is exhausted, so nothing else fits
            debug_assert_eq!(component.len(), 2 + cs[0].len() + cs[1].len());
            plain_edges.retain(|&e| e != key);
            let mut it = cs.into_iter();
            record.direct.push(DirectComponent::ThetaPlus {
                x: key.0,
                y: key.1,
                chains: [it.next().unwrap(), it.next().unwrap()],
            });
        }

        // Assemble this component's part of the contracted graph.
        let in_theta: VertexSet = record
            .direct
            .iter()
            .filter(|c| matches!(c, DirectComponent::ThetaPlus { .. }))
            .flat_map(|c| c.vertices())
            .collect();
        for &a in &anchors {
            if !in_theta.contains(&a) {
                record.contracted.add_vertex(a);
            }
        }
        for (x, y) in plain_edges {
            record.contracted.add_edge(x, y).expect("anchors differ");
        }
        for (&(x, y), cs) in &chains {
            if x != y {
                record.contracted.add_edge(x, y).expect("anchors differ");
            }
            record.red_edges.entry((x, y)).or_default().extend(cs.iter().cloned());
        }
    }

    record.direct.sort_by_key(|c| c.smallest_vertex());
    debug_assert!(record.contracted.max_degree() <= 3);
    Ok(record)
}

/// Traces a component of maximum degree <= 2 into a direct record.
fn trace_anchor_free(g: &Graph, component: &VertexSet) -> DirectComponent {
    if component.len() == 1 {
        return DirectComponent::Isolated(*component.iter().next().unwrap());
    }
    let endpoints: Vec<Vertex> = component
        .iter()
        .copied()
        .filter(|&v| g.degree(v) <= 1)
        .collect();
    let start = match endpoints.first() {
        Some(&e) => e,                            // a path: walk from its smallest endpoint
        None => *component.iter().next().unwrap(), // a cycle: start anywhere
    };
    let mut order = vec![start];
    let mut prev = start;
    let mut here = *g.neighbors(start).first().expect("component has an edge");
    while here != start {
        order.push(here);
        let next = g.neighbors(here).iter().copied().find(|&w| w != prev);
        match next {
            Some(n) => {
                prev = here;
                here = n;
            }
            None => return DirectComponent::Path(order),
        }
    }
    DirectComponent::Cycle(order)
}

/// The bag run splicing `chain` over `base`: windows of two consecutive
/// chain vertices on top of the base bag. `base` must contain both thread
/// endpoints (or the single anchor for pendants and loops).
fn chain_run(base: &VertexSet, chain: &[Vertex]) -> Vec<VertexSet> {
    if chain.len() == 1 {
        let mut bag = base.clone();
        bag.insert(chain[0]);
        return vec![bag];
    }
    chain
        .windows(2)
        .map(|w| {
            let mut bag = base.clone();
            bag.insert(w[0]);
            bag.insert(w[1]);
            bag
        })
        .collect()
}

/// Splices every annotation of `record` back into a decomposition of the
/// contracted graph, yielding a decomposition of the original graph with
/// width at most `pd_contracted.width() + 2`.
pub fn expand(
    record: &ContractionRecord,
    pd_contracted: &PathDecomposition,
) -> Result<PathDecomposition, DecompError> {
    if !validate(&record.contracted, pd_contracted) {
        return Err(DecompError::InvalidDecomposition);
    }
    let mut bags = pd_contracted.bags.clone();

    let splice_at = |bags: &mut Vec<VertexSet>, needed: &[Vertex], chain: &[Vertex]| {
        let at = bags
            .iter()
            .position(|bag| needed.iter().all(|v| bag.contains(v)))
            .expect("edge coverage guarantees a host bag");
        let run = chain_run(&bags[at], chain);
        bags.splice(at + 1..at + 1, run);
    };

    for ((x, y), chains) in &record.red_edges {
        for chain in chains {
            let needed = if x == y { vec![*x] } else { vec![*x, *y] };
            splice_at(&mut bags, &needed, chain);
        }
    }
    for (x, chains) in &record.red_vertices {
        for chain in chains {
            splice_at(&mut bags, &[*x], chain);
        }
    }
    for comp in &record.direct {
        bags.extend(comp.decomposition());
    }
    // Drop placeholder empty bags when real content exists.
    if bags.len() > 1 {
        bags.retain(|b| !b.is_empty());
        if bags.is_empty() {
            bags.push(VertexSet::new());
        }
    }
    Ok(PathDecomposition { bags })
}

/// Minimum-width decomposition by dynamic programming over vertex subsets:
/// `f[M]` is the best achievable maximum boundary over orderings placing
/// exactly `M` first. Works up to [`EXACT_HARD_CAP`] vertices.
fn exact_decompose(g: &Graph) -> PathDecomposition {
    let vertices: Vec<Vertex> = g.vertices().collect();
    let n = vertices.len();
    assert!(n <= EXACT_HARD_CAP);
    if n == 0 {
        return PathDecomposition {
            bags: vec![VertexSet::new()],
        };
    }
    let index: BTreeMap<Vertex, usize> = vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let nbr: Vec<u32> = vertices
        .iter()
        .map(|&v| g.neighbors(v).iter().fold(0u32, |acc, w| acc | 1 << index[w]))
        .collect();
    let full: u32 = if n == 32 { u32::MAX } else { (1 << n) - 1 };

    let boundary = |mask: u32| -> u8 {
        let mut b = 0u8;
        let mut m = mask;
        while m != 0 {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            if nbr[i] & !mask & full != 0 {
                b += 1;
            }
        }
        b
    };

    let mut f = vec![u8::MAX; 1 << n];
    f[0] = 0;
    for mask in 1u32..=full {
        let b = boundary(mask);
        let mut best = u8::MAX;
        let mut m = mask;
        while m != 0 {
            let i = m.trailing_zeros();
            m &= m - 1;
            best = best.min(f[(mask ^ (1 << i)) as usize].max(b));
        }
        f[mask as usize] = best;
    }

    // Rebuild an optimal ordering back to front, smallest vertex on ties.
    let mut order = vec![0 as Vertex; n];
    let mut mask = full;
    for slot in (0..n).rev() {
        let b = boundary(mask);
        let target = f[mask as usize];
        let mut m = mask;
        let mut chosen = None;
        while m != 0 {
            let i = m.trailing_zeros();
            m &= m - 1;
            if f[(mask ^ (1 << i)) as usize].max(b) == target {
                chosen = Some(i);
                break; // lowest set bit first -> smallest vertex id
            }
        }
        let i = chosen.expect("DP table is consistent");
        order[slot] = vertices[i as usize];
        mask ^= 1 << i;
    }
    PathDecomposition::from_ordering(g, &order)
}

fn vertex_separation(g: &Graph, order: &[Vertex]) -> i32 {
    PathDecomposition::from_ordering(g, order).width()
}

/// Greedy ordering that appends whichever vertex keeps the running boundary
/// smallest; ties by vertex id.
fn greedy_boundary_ordering(g: &Graph) -> Vec<Vertex> {
    let mut placed = VertexSet::new();
    let mut order = Vec::with_capacity(g.vertex_count());
    while placed.len() < g.vertex_count() {
        let best = g
            .vertices()
            .filter(|v| !placed.contains(v))
            .min_by_key(|&v| {
                let mut trial = placed.clone();
                trial.insert(v);
                let boundary = trial
                    .iter()
                    .filter(|&&u| g.neighbors(u).iter().any(|w| !trial.contains(w)))
                    .count();
                (boundary, v)
            })
            .unwrap();
        placed.insert(best);
        order.push(best);
    }
    order
}

/// Repeatedly removes a vertex of minimum remaining degree; ties by id.
fn min_degree_ordering(g: &Graph) -> Vec<Vertex> {
    let mut remaining = g.clone();
    let mut order = Vec::with_capacity(g.vertex_count());
    while !remaining.is_empty() {
        let v = remaining
            .vertices()
            .min_by_key(|&v| (remaining.degree(v), v))
            .unwrap();
        order.push(v);
        remaining = remaining.delete_vertices(&VertexSet::from([v])).unwrap();
    }
    order
}

/// A valid decomposition of `g`: minimum width when `g` has at most
/// `exact_threshold` vertices (an exact subset-DP search), otherwise the
/// better of two greedy orderings. Width only affects downstream running
/// time, never correctness.
pub fn base_decompose(g: &Graph, exact_threshold: usize) -> PathDecomposition {
    let n = g.vertex_count();
    if n == 0 {
        return PathDecomposition {
            bags: vec![VertexSet::new()],
        };
    }
    let pd = if n <= exact_threshold.min(EXACT_HARD_CAP) {
        exact_decompose(g)
    } else {
        let greedy = greedy_boundary_ordering(g);
        let mindeg = min_degree_ordering(g);
        let order = if vertex_separation(g, &greedy) <= vertex_separation(g, &mindeg) {
            greedy
        } else {
            mindeg
        };
        PathDecomposition::from_ordering(g, &order)
    };
    assert!(validate(g, &pd), "base decomposition must be valid");
    pd
}

/// Whether [`base_decompose`] runs exact at this size and threshold.
pub fn exact_mode(n: usize, exact_threshold: usize) -> bool {
    n <= exact_threshold.min(EXACT_HARD_CAP)
}

/// Outcome of [`decompose_for_instance`].
#[derive(Debug, Clone)]
pub struct DecompositionOutcome {
    pub nice: NicePathDecomposition,
    pub width: i32,
    /// True when the whole graph was within the exact threshold, so the
    /// width is the minimum possible (the graph's pathwidth).
    pub exact_base: bool,
}

/// A nice decomposition for one max-degree-3 graph.
///
/// Small graphs (within the exact threshold) are decomposed by exact search
/// directly, giving minimum width. Larger graphs go through the contraction
/// route: contract away degree-<=2 structure, decompose the core (exact when
/// it shrank enough, greedy otherwise), and expand the annotations back in
/// at a cost of at most 2 extra width.
pub fn decompose_for_instance(
    g: &Graph,
    exact_threshold: usize,
) -> Result<DecompositionOutcome, DecompError> {
    if let Some(v) = g.vertices().find(|&v| g.degree(v) > 3) {
        return Err(DecompError::MaxDegreeExceeded {
            vertex: v,
            degree: g.degree(v),
        });
    }
    if exact_mode(g.vertex_count(), exact_threshold) {
        let pd = base_decompose(g, exact_threshold);
        let nice = make_nice(&pd);
        return Ok(DecompositionOutcome {
            width: nice.width(),
            exact_base: true,
            nice,
        });
    }
    let record = contract(g)?;
    let base = base_decompose(&record.contracted, exact_threshold);
    let pd = expand(&record, &base).expect("base decomposition is valid");
    assert!(validate(g, &pd), "expanded decomposition must be valid");
    let nice = make_nice(&pd);
    Ok(DecompositionOutcome {
        width: nice.width(),
        exact_base: false,
        nice,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pd(bags: &[&[Vertex]]) -> PathDecomposition {
        PathDecomposition {
            bags: bags.iter().map(|b| b.iter().copied().collect()).collect(),
        }
    }

    #[test]
    fn validate_p3_decompositions() {
        let p3 = Graph::path(3);
        assert!(validate(&p3, &pd(&[&[1, 2], &[2, 3]])));
        assert!(!validate(&p3, &pd(&[&[1, 2], &[3]]))); // edge 2-3 uncovered
    }

    #[test]
    fn validate_c4_decomposition() {
        let c4 = Graph::cycle(4);
        assert!(validate(&c4, &pd(&[&[1, 2, 4], &[2, 3, 4]])));
    }

    #[test]
    fn validate_rejects_broken_interval() {
        let p3 = Graph::path(3);
        assert!(!validate(&p3, &pd(&[&[1, 2], &[2, 3], &[1, 3]])));
    }

    #[test]
    fn width_values() {
        assert_eq!(pd(&[&[1, 2], &[2, 3]]).width(), 1);
        assert_eq!(pd(&[&[]]).width(), -1);
        assert_eq!(pd(&[&[1, 2, 3], &[1, 2, 3, 4], &[4, 5]]).width(), 3);
    }

    #[test]
    fn contract_c6_yields_direct_cycle() {
        let record = contract(&Graph::cycle(6)).unwrap();
        assert!(record.contracted.is_empty());
        assert_eq!(record.direct.len(), 1);
        assert_eq!(record.covered_vertices().len(), 6);
        assert!(matches!(record.direct[0], DirectComponent::Cycle(ref vs) if vs.len() == 6));
    }

    #[test]
    fn contract_petersen_is_identity() {
        let g = Graph::petersen();
        let record = contract(&g).unwrap();
        assert_eq!(record.contracted, g);
        assert!(record.red_edges.is_empty());
        assert!(record.red_vertices.is_empty());
        assert!(record.direct.is_empty());
    }

    /// Petersen with the outer edge 1-2 subdivided by a fresh vertex 11.
    fn subdivided_petersen() -> Graph {
        let mut h = Graph::new();
        for (u, v) in Graph::petersen().edges().filter(|&e| e != (1, 2)) {
            h.add_edge(u, v).unwrap();
        }
        h.add_edge(1, 11).unwrap();
        h.add_edge(11, 2).unwrap();
        h
    }

    #[test]
    fn contract_subdivided_petersen_records_one_red_edge() {
        let record = contract(&subdivided_petersen()).unwrap();
        assert_eq!(record.contracted.vertex_count(), 10);
        assert_eq!(record.red_edges.len(), 1);
        assert_eq!(record.red_edges[&(1, 2)], vec![vec![11]]);
        assert!(record.red_vertices.is_empty());
    }

    #[test]
    fn contract_rejects_degree_four() {
        let err = contract(&Graph::star(4)).unwrap_err();
        assert!(matches!(err, DecompError::MaxDegreeExceeded { vertex: 1, degree: 4 }));
    }

    #[test]
    fn contract_vertex_bound() {
        // tadpole with a pendant chain: degree-3 count bounds the core
        let mut g = Graph::cycle(5);
        g.add_edge(1, 6).unwrap();
        g.add_edge(6, 7).unwrap();
        let record = contract(&g).unwrap();
        let deg3 = g.vertices().filter(|&v| g.degree(v) == 3).count();
        assert!(record.contracted.vertex_count() <= deg3);
        assert_eq!(record.covered_vertices(), g.vertex_set());
    }

    #[test]
    fn base_decompose_known_widths() {
        assert_eq!(base_decompose(&Graph::path(4), 15).width(), 1);
        assert_eq!(base_decompose(&Graph::cycle(5), 15).width(), 2);
        // complete binary tree on 7 vertices is a caterpillar
        let t7 = Graph::from_edges([(1, 2), (1, 3), (2, 4), (2, 5), (3, 6), (3, 7)]);
        assert_eq!(base_decompose(&t7, 15).width(), 1);
        assert_eq!(base_decompose(&Graph::complete(4), 15).width(), 3);
    }

    #[test]
    fn exact_pathwidth_of_petersen_is_five() {
        assert_eq!(base_decompose(&Graph::petersen(), 15).width(), 5);
    }

    #[test]
    fn heuristic_mode_stays_valid() {
        let g = Graph::cycle(20);
        let pd = base_decompose(&g, 4); // forces the heuristic
        assert!(validate(&g, &pd));
        assert!(pd.width() <= 3);
    }

    #[test]
    fn expand_without_annotations_is_identity() {
        let g = Graph::petersen();
        let record = contract(&g).unwrap();
        let base = base_decompose(&g, 15);
        assert_eq!(expand(&record, &base).unwrap(), base);
    }

    #[test]
    fn expand_single_interior_red_edge_adds_at_most_one() {
        // one red edge 1-11-2, no other annotations
        let g = subdivided_petersen();
        let record = contract(&g).unwrap();
        let base = base_decompose(&record.contracted, 15);
        let expanded = expand(&record, &base).unwrap();
        assert!(validate(&g, &expanded));
        assert!(expanded.width() <= base.width() + 1);
    }

    #[test]
    fn expand_mixed_loops_and_red_edge_within_two() {
        // anchors 1, 2 joined by red edge 1-10-2, each carrying a triangle
        // that contracts to a loop chain
        let g = Graph::from_edges([
            (1, 10),
            (10, 2),
            (1, 3),
            (1, 4),
            (3, 4),
            (2, 5),
            (2, 6),
            (5, 6),
        ]);
        let record = contract(&g).unwrap();
        assert_eq!(record.red_edges[&(1, 2)], vec![vec![10]]);
        assert_eq!(record.red_edges[&(1, 1)], vec![vec![3, 4]]);
        let base = base_decompose(&record.contracted, 15);
        let expanded = expand(&record, &base).unwrap();
        assert!(validate(&g, &expanded));
        assert!(expanded.width() <= base.width() + 2);
    }

    #[test]
    fn expand_pendant_chain_is_valid() {
        // pendant path 8 - 9 hanging off the lone anchor of a tadpole
        let mut g = Graph::cycle(5);
        g.add_edge(1, 8).unwrap();
        g.add_edge(8, 9).unwrap();
        let record = contract(&g).unwrap();
        assert_eq!(record.red_vertices[&1], vec![vec![8, 9]]);
        assert_eq!(record.red_edges[&(1, 1)], vec![vec![2, 3, 4, 5]]);
        let base = base_decompose(&record.contracted, 15);
        let expanded = expand(&record, &base).unwrap();
        assert!(validate(&g, &expanded));
        assert!(expanded.width() <= base.width().max(0) + 2);
    }

    #[test]
    fn expand_rejects_invalid_base() {
        let record = contract(&Graph::petersen()).unwrap();
        let bogus = pd(&[&[1, 2]]);
        assert_eq!(expand(&record, &bogus).unwrap_err(), DecompError::InvalidDecomposition);
    }

    #[test]
    fn theta_plus_component_gets_width_three_decomposition() {
        // edge 1-2, plus chains 1-3-2 and 1-4-5-2
        let g = Graph::from_edges([(1, 2), (1, 3), (3, 2), (1, 4), (4, 5), (5, 2)]);
        let record = contract(&g).unwrap();
        assert!(record.contracted.is_empty());
        assert_eq!(record.direct.len(), 1);
        let out = decompose_for_instance(&g, 15).unwrap();
        assert!(out.width <= 3);
        assert!(validate(&g, &out.nice.as_path_decomposition()));
    }

    #[test]
    fn make_nice_follows_forget_then_introduce() {
        let nice = make_nice(&pd(&[&[1, 2], &[2, 3]]));
        let got: Vec<NiceStep> = nice.steps().iter().map(|(s, _)| *s).collect();
        use NiceStep::*;
        assert_eq!(
            got,
            vec![
                Leaf,
                Introduce(1),
                Introduce(2),
                Forget(1),
                Introduce(3),
                Forget(2),
                Forget(3),
            ]
        );
        let bags: Vec<usize> = nice.steps().iter().map(|(_, b)| b.len()).collect();
        assert_eq!(*bags.last().unwrap(), 0);
    }

    #[test]
    fn make_nice_is_idempotent_up_to_canonical_order() {
        let first = make_nice(&pd(&[&[1, 2], &[2, 3]]));
        let again = make_nice(&first.as_path_decomposition());
        assert_eq!(first, again);
    }

    #[test]
    fn make_nice_preserves_width() {
        let base = base_decompose(&Graph::cycle(5), 15);
        assert_eq!(make_nice(&base).width(), base.width());
    }

    #[test]
    fn decompose_for_instance_examples() {
        let single_edge = decompose_for_instance(&Graph::path(2), 15).unwrap();
        assert_eq!(single_edge.width, 1);

        let p10 = decompose_for_instance(&Graph::path(10), 15).unwrap();
        assert_eq!(p10.width, 1);

        // exact pathwidth of the Petersen graph is 5
        let petersen = decompose_for_instance(&Graph::petersen(), 15).unwrap();
        assert_eq!(petersen.width, 5);
        assert!(petersen.exact_base);
    }

    #[test]
    fn decompose_for_instance_rejects_high_degree() {
        assert!(decompose_for_instance(&Graph::star(4), 15).is_err());
    }

    #[test]
    fn decompose_for_instance_contraction_route_above_threshold() {
        let g = subdivided_petersen(); // 11 vertices, forced past a threshold of 4
        let out = decompose_for_instance(&g, 4).unwrap();
        assert!(!out.exact_base);
        assert!(validate(&g, &out.nice.as_path_decomposition()));
    }

    #[test]
    fn contract_expand_round_trip_covers_everything() {
        let mut g = Graph::cycle(6);
        g.add_edge(1, 7).unwrap();
        g.add_edge(7, 8).unwrap();
        g.add_edge(4, 9).unwrap();
        let record = contract(&g).unwrap();
        let base = base_decompose(&record.contracted, 15);
        let expanded = expand(&record, &base).unwrap();
        assert!(validate(&g, &expanded));
    }

    #[test]
    fn serialization_formats() {
        let text = pd(&[&[1, 2], &[2, 3]]).to_text();
        assert_eq!(text, "pd 2 1\n1 2\n2 3\n");
        let nice = make_nice(&pd(&[&[1, 2]]));
        let nice_text = nice.to_text();
        let lines: Vec<&str> = nice_text.lines().collect();
        assert_eq!(lines[0], "pd 5 1");
        assert_eq!(lines[1], "L");
        assert_eq!(lines[2], "I 1");
        assert_eq!(lines[5], "F 2");
    }

    mod proptests {
        use super::*;
        use proptest::prelude::*;

        /// Random graphs of maximum degree 3 on up to 12 vertices.
        fn arb_subcubic() -> impl Strategy<Value = Graph> {
            (2usize..12, proptest::collection::vec(any::<u32>(), 40)).prop_map(|(n, picks)| {
                let mut g = Graph::new();
                for v in 0..n as Vertex {
                    g.add_vertex(v);
                }
                for (i, pick) in picks.into_iter().enumerate() {
                    let u = (i % n) as Vertex;
                    let v = (pick as usize % n) as Vertex;
                    if u != v && g.degree(u) < 3 && g.degree(v) < 3 {
                        let _ = g.add_edge(u, v);
                    }
                }
                g
            })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn pipeline_produces_valid_decompositions(g in arb_subcubic()) {
                let record = contract(&g).unwrap();
                prop_assert!(record.contracted.max_degree() <= 3);
                prop_assert_eq!(record.covered_vertices(), g.vertex_set());
                let base = base_decompose(&record.contracted, 10);
                let expanded = expand(&record, &base).unwrap();
                prop_assert!(validate(&g, &expanded));
                prop_assert!(expanded.width() <= base.width().max(3) + 2);
                let nice = make_nice(&expanded);
                prop_assert_eq!(nice.width(), expanded.width());
                prop_assert!(validate(&g, &nice.as_path_decomposition()));
                // consecutive nice bags differ by exactly one vertex
                for pair in nice.steps().windows(2) {
                    let a = &pair[0].1;
                    let b = &pair[1].1;
                    let diff = a.symmetric_difference(b).count();
                    prop_assert_eq!(diff, 1);
                }
            }
        }
    }
}
