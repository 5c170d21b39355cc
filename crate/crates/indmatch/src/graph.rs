//! Simple undirected graphs with stable vertex identifiers.
//!
//! Vertex ids survive deletion unchanged so that search-tree bookkeeping and
//! reconstructed solutions always refer to the input graph's names. Neighbor
//! lists are kept sorted; every iteration order is deterministic.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

/// Vertex identifier. Small non-negative integers; 0 is a valid id.
pub type Vertex = u32;

/// A set of vertex ids, ordered for deterministic iteration.
pub type VertexSet = BTreeSet<Vertex>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("self-loop at vertex {0}")]
    SelfLoop(Vertex),
    #[error("vertex {0} is not in the graph")]
    UnknownVertex(Vertex),
}

fn parse_err(line: usize, msg: impl Into<String>) -> GraphError {
    GraphError::Parse {
        line,
        msg: msg.into(),
    }
}

/// Simple undirected graph: no self-loops, no parallel edges.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Graph {
    adj: BTreeMap<Vertex, Vec<Vertex>>,
    edge_count: usize,
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a graph from an edge iterator. Endpoints are added as needed,
    /// duplicate edges are ignored.
    ///
    /// Panics on self-loops; use [`Graph::add_edge`] for fallible insertion.
    pub fn from_edges<I: IntoIterator<Item = (Vertex, Vertex)>>(edges: I) -> Self {
        let mut g = Graph::new();
        for (u, v) in edges {
            g.add_edge(u, v).expect("self-loop in edge list");
        }
        g
    }

    pub fn add_vertex(&mut self, v: Vertex) {
        self.adj.entry(v).or_default();
    }

    /// Inserts the undirected edge `{u, v}`, adding missing endpoints.
    /// Duplicate edges are a no-op.
    pub fn add_edge(&mut self, u: Vertex, v: Vertex) -> Result<(), GraphError> {
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        self.add_vertex(u);
        self.add_vertex(v);
        let nu = self.adj.get_mut(&u).unwrap();
        match nu.binary_search(&v) {
            Ok(_) => return Ok(()), // already present
            Err(pos) => nu.insert(pos, v),
        }
        let nv = self.adj.get_mut(&v).unwrap();
        let pos = nv.binary_search(&u).unwrap_err();
        nv.insert(pos, u);
        self.edge_count += 1;
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn contains_vertex(&self, v: Vertex) -> bool {
        self.adj.contains_key(&v)
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.adj.keys().copied()
    }

    pub fn vertex_set(&self) -> VertexSet {
        self.vertices().collect()
    }

    /// Sorted neighbor list of `v`. Panics if `v` is not a vertex.
    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        self.adj
            .get(&v)
            .unwrap_or_else(|| panic!("vertex {v} is not in the graph"))
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.neighbors(v).len()
    }

    /// `N[v] = {v} ∪ N(v)`.
    pub fn closed_neighborhood(&self, v: Vertex) -> VertexSet {
        let mut set: VertexSet = self.neighbors(v).iter().copied().collect();
        set.insert(v);
        set
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.adj
            .get(&u)
            .is_some_and(|n| n.binary_search(&v).is_ok())
    }

    /// Edges as `(u, v)` pairs with `u < v`, lexicographically sorted.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.adj
            .iter()
            .flat_map(|(&u, nbrs)| nbrs.iter().copied().filter(move |&v| u < v).map(move |v| (u, v)))
    }

    pub fn max_degree(&self) -> usize {
        self.adj.values().map(Vec::len).max().unwrap_or(0)
    }

    /// Map from degree to the number of vertices with that degree.
    pub fn degree_profile(&self) -> BTreeMap<usize, usize> {
        let mut profile = BTreeMap::new();
        for nbrs in self.adj.values() {
            *profile.entry(nbrs.len()).or_insert(0) += 1;
        }
        profile
    }

    /// The induced subgraph `G[V \ s]`. Errors if `s` contains a non-vertex.
    pub fn delete_vertices(&self, s: &VertexSet) -> Result<Graph, GraphError> {
        if let Some(&v) = s.iter().find(|v| !self.contains_vertex(**v)) {
            return Err(GraphError::UnknownVertex(v));
        }
        let mut adj = BTreeMap::new();
        let mut edge_count = 0;
        for (&u, nbrs) in &self.adj {
            if s.contains(&u) {
                continue;
            }
            let kept: Vec<Vertex> = nbrs.iter().copied().filter(|v| !s.contains(v)).collect();
            edge_count += kept.len();
            adj.insert(u, kept);
        }
        Ok(Graph {
            adj,
            edge_count: edge_count / 2,
        })
    }

    /// The induced subgraph `G[keep]`. Panics if `keep ⊄ V`.
    pub fn subgraph(&self, keep: &VertexSet) -> Graph {
        let mut adj = BTreeMap::new();
        let mut edge_count = 0;
        for &u in keep {
            let nbrs: Vec<Vertex> = self
                .neighbors(u)
                .iter()
                .copied()
                .filter(|v| keep.contains(v))
                .collect();
            edge_count += nbrs.len();
            adj.insert(u, nbrs);
        }
        Graph {
            adj,
            edge_count: edge_count / 2,
        }
    }

    /// Connected components, each as a vertex set, ordered by smallest member.
    pub fn components(&self) -> Vec<VertexSet> {
        let mut seen = VertexSet::new();
        let mut out = Vec::new();
        for start in self.vertices() {
            if seen.contains(&start) {
                continue;
            }
            let mut comp = VertexSet::new();
            let mut queue = vec![start];
            seen.insert(start);
            while let Some(v) = queue.pop() {
                comp.insert(v);
                for &w in self.neighbors(v) {
                    if seen.insert(w) {
                        queue.push(w);
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    /// Parses either the plain edge-list format or DIMACS.
    ///
    /// A file whose first non-blank line starts with `c`, `p`, or `e` is
    /// treated as DIMACS (`p edge n m` header, `e u v` lines, vertices
    /// `1..=n`). Anything else is an edge list: `u v` per line, optional
    /// lone-vertex lines `u`, `#` comments, and an optional leading `n m`
    /// header. A two-number first line is accepted as the header only when
    /// the declared counts match the rest of the file; otherwise it is
    /// re-read as an edge.
    pub fn parse(text: &str) -> Result<Graph, GraphError> {
        let first = text
            .lines()
            .map(str::trim)
            .find(|l| !l.is_empty() && !l.starts_with('#'));
        match first {
            Some(l) if l.starts_with('c') || l.starts_with('p') || l.starts_with('e') => {
                Self::parse_dimacs(text)
            }
            _ => Self::parse_edge_list(text),
        }
    }

    fn parse_dimacs(text: &str) -> Result<Graph, GraphError> {
        let mut g = Graph::new();
        let mut declared: Option<(u64, u64)> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('c') {
                continue;
            }
            let tokens: Vec<&str> = line.split_whitespace().collect();
            match tokens[0] {
                "p" => {
                    if declared.is_some() {
                        return Err(parse_err(line_no, "duplicate p line"));
                    }
                    if tokens.len() != 4 {
                        return Err(parse_err(line_no, "expected `p edge n m`"));
                    }
                    let n: u64 = tokens[2]
                        .parse()
                        .map_err(|_| parse_err(line_no, "bad vertex count"))?;
                    let m: u64 = tokens[3]
                        .parse()
                        .map_err(|_| parse_err(line_no, "bad edge count"))?;
                    for v in 1..=n {
                        g.add_vertex(v as Vertex);
                    }
                    declared = Some((n, m));
                }
                "e" => {
                    if tokens.len() != 3 {
                        return Err(parse_err(line_no, "expected `e u v`"));
                    }
                    let u: Vertex = tokens[1]
                        .parse()
                        .map_err(|_| parse_err(line_no, "bad endpoint"))?;
                    let v: Vertex = tokens[2]
                        .parse()
                        .map_err(|_| parse_err(line_no, "bad endpoint"))?;
                    if u == v {
                        return Err(parse_err(line_no, format!("self-loop at vertex {u}")));
                    }
                    let (n, _) = declared
                        .ok_or_else(|| parse_err(line_no, "edge before p line"))?;
                    if u == 0 || v == 0 || u as u64 > n || v as u64 > n {
                        return Err(parse_err(
                            line_no,
                            format!("edge {u} {v} outside declared range 1..={n}"),
                        ));
                    }
                    g.add_edge(u, v).expect("loop checked above");
                }
                other => {
                    return Err(parse_err(line_no, format!("unexpected token `{other}`")));
                }
            }
        }
        Ok(g)
    }

    fn parse_edge_list(text: &str) -> Result<Graph, GraphError> {
        // Lines as (line_no, tokens), comments stripped.
        let mut lines: Vec<(usize, Vec<&str>)> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            lines.push((idx + 1, content.split_whitespace().collect()));
        }

        let build = |items: &[(usize, Vec<&str>)]| -> Result<Graph, GraphError> {
            let mut g = Graph::new();
            for (line_no, tokens) in items {
                match tokens.len() {
                    1 => {
                        let v: Vertex = tokens[0]
                            .parse()
                            .map_err(|_| parse_err(*line_no, "bad vertex id"))?;
                        g.add_vertex(v);
                    }
                    2 => {
                        let u: Vertex = tokens[0]
                            .parse()
                            .map_err(|_| parse_err(*line_no, "bad endpoint"))?;
                        let v: Vertex = tokens[1]
                            .parse()
                            .map_err(|_| parse_err(*line_no, "bad endpoint"))?;
                        if u == v {
                            return Err(parse_err(*line_no, format!("self-loop at vertex {u}")));
                        }
                        g.add_edge(u, v).expect("loop checked above");
                    }
                    _ => return Err(parse_err(*line_no, "expected `u v` or a lone vertex id")),
                }
            }
            Ok(g)
        };

        // Optional header: accept the first line as `n m` only when the rest
        // of the file is consistent with it.
        if let Some((_, first)) = lines.first() {
            if first.len() == 2 {
                if let (Ok(n), Ok(m)) = (first[0].parse::<usize>(), first[1].parse::<usize>()) {
                    if let Ok(g) = build(&lines[1..]) {
                        if g.vertex_count() == n && g.edge_count() == m {
                            return Ok(g);
                        }
                    }
                }
            }
        }
        build(&lines)
    }

    /// Canonical byte-deterministic serialization: `n m` header, lone lines
    /// for isolated vertices, then sorted `u v` edges. Round-trips through
    /// [`Graph::parse`].
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{} {}\n", self.vertex_count(), self.edge_count());
        for v in self.vertices() {
            if self.degree(v) == 0 {
                out.push_str(&format!("{v}\n"));
            }
        }
        for (u, v) in self.edges() {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_edge_list())
    }
}

// Named constructions used throughout tests and benchmarks.
impl Graph {
    /// Path `1 - 2 - ... - n`.
    pub fn path(n: u32) -> Graph {
        let mut g = Graph::new();
        for v in 1..=n {
            g.add_vertex(v);
        }
        for v in 1..n {
            g.add_edge(v, v + 1).unwrap();
        }
        g
    }

    /// Cycle on `1..=n`; requires `n >= 3`.
    pub fn cycle(n: u32) -> Graph {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        let mut g = Graph::path(n);
        g.add_edge(n, 1).unwrap();
        g
    }

    /// Complete graph on `1..=n`.
    pub fn complete(n: u32) -> Graph {
        let mut g = Graph::new();
        for v in 1..=n {
            g.add_vertex(v);
            for u in 1..v {
                g.add_edge(u, v).unwrap();
            }
        }
        g
    }

    /// Star with center `1` and the given number of leaves `2..`.
    pub fn star(leaves: u32) -> Graph {
        let mut g = Graph::new();
        g.add_vertex(1);
        for v in 2..=leaves + 1 {
            g.add_edge(1, v).unwrap();
        }
        g
    }

    /// The Petersen graph on `1..=10`: outer cycle `1..=5`, spokes, inner
    /// pentagram `6..=10`.
    pub fn petersen() -> Graph {
        let mut g = Graph::new();
        for i in 0..5u32 {
            g.add_edge(i + 1, (i + 1) % 5 + 1).unwrap();
            g.add_edge(i + 1, i + 6).unwrap();
            g.add_edge(i + 6, (i + 2) % 5 + 6).unwrap();
        }
        g
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parse_dimacs_single_edge() {
        let g = Graph::parse("p edge 2 1\ne 1 2").unwrap();
        assert_eq!(g.vertex_set(), VertexSet::from([1, 2]));
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(1, 2)]);
    }

    #[test]
    fn parse_empty_text_is_empty_graph() {
        let g = Graph::parse("").unwrap();
        assert!(g.is_empty());
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn parse_rejects_self_loop() {
        let err = Graph::parse("e 1 1").unwrap_err();
        assert!(matches!(err, GraphError::Parse { line: 1, ref msg } if msg.contains("self-loop")));
        let err = Graph::parse("3 3").unwrap_err();
        assert!(matches!(err, GraphError::Parse { ref msg, .. } if msg.contains("self-loop")));
    }

    #[test]
    fn parse_dimacs_range_check() {
        let err = Graph::parse("p edge 2 1\ne 1 3").unwrap_err();
        assert!(matches!(err, GraphError::Parse { line: 2, .. }));
    }

    #[test]
    fn edge_list_header_declares_isolated_vertices() {
        let g = Graph::parse("3 1\n1 2\n7").unwrap();
        assert_eq!(g.vertex_set(), VertexSet::from([1, 2, 7]));
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn edge_list_without_header() {
        let g = Graph::parse("1 2\n3 4\n5 6").unwrap();
        assert_eq!(g.vertex_count(), 6);
        assert_eq!(g.edge_count(), 3);
    }

    #[test]
    fn edge_list_comments_and_dedup() {
        let g = Graph::parse("# a comment\n1 2 # trailing\n2 1\n").unwrap();
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn delete_middle_of_path() {
        let g = Graph::path(3);
        let h = g.delete_vertices(&VertexSet::from([2])).unwrap();
        assert_eq!(h.vertex_set(), VertexSet::from([1, 3]));
        assert_eq!(h.edge_count(), 0);
    }

    #[test]
    fn delete_nothing_is_identity() {
        let g = Graph::cycle(5);
        assert_eq!(g.delete_vertices(&VertexSet::new()).unwrap(), g);
    }

    #[test]
    fn delete_three_from_c5_leaves_one_edge() {
        let g = Graph::cycle(5);
        let h = g.delete_vertices(&VertexSet::from([1, 2, 3])).unwrap();
        assert_eq!(h.edges().collect::<Vec<_>>(), vec![(4, 5)]);
    }

    #[test]
    fn delete_unknown_vertex_is_domain_error() {
        let g = Graph::path(3);
        assert_eq!(
            g.delete_vertices(&VertexSet::from([9])).unwrap_err(),
            GraphError::UnknownVertex(9)
        );
    }

    #[test]
    fn degree_profiles() {
        assert_eq!(Graph::petersen().degree_profile(), BTreeMap::from([(3, 10)]));
        assert_eq!(Graph::path(2).degree_profile(), BTreeMap::from([(1, 2)]));
        assert_eq!(Graph::new().degree_profile(), BTreeMap::new());
    }

    #[test]
    fn profile_counts_sum_to_vertex_count() {
        let g = Graph::petersen();
        assert_eq!(g.degree_profile().values().sum::<usize>(), g.vertex_count());
    }

    #[test]
    fn components_of_two_paths() {
        let mut g = Graph::path(3);
        g.add_edge(10, 11).unwrap();
        let comps = g.components();
        assert_eq!(comps.len(), 2);
        assert_eq!(comps[0], VertexSet::from([1, 2, 3]));
        assert_eq!(comps[1], VertexSet::from([10, 11]));
    }

    fn arb_graph() -> impl Strategy<Value = Graph> {
        // Up to 9 vertices on ids 0..9, arbitrary edge set.
        proptest::collection::vec(any::<bool>(), 36).prop_map(|bits| {
            let mut g = Graph::new();
            let mut idx = 0;
            for u in 0..9u32 {
                g.add_vertex(u);
                for v in (u + 1)..9 {
                    if bits[idx] {
                        g.add_edge(u, v).unwrap();
                    }
                    idx += 1;
                }
            }
            g
        })
    }

    proptest! {
        #[test]
        fn deletion_keeps_exactly_surviving_edges(g in arb_graph(), mask in any::<u16>()) {
            let s: VertexSet = g.vertices().filter(|v| mask >> v & 1 == 1).collect();
            let h = g.delete_vertices(&s).unwrap();
            let expected = g
                .edges()
                .filter(|(u, v)| !s.contains(u) && !s.contains(v))
                .count();
            prop_assert_eq!(h.edge_count(), expected);
            // adjacency stays symmetric
            for u in h.vertices() {
                for &v in h.neighbors(u) {
                    prop_assert!(h.neighbors(v).contains(&u));
                }
            }
        }

        #[test]
        fn serialization_round_trips(g in arb_graph()) {
            let text = g.to_edge_list();
            let back = Graph::parse(&text).unwrap();
            prop_assert_eq!(back, g);
        }
    }
}
