//! Ordered finite graphs and the graph↔tree coding.
//!
//! Vertices are `v_0..v_{n-1}` in a fixed enumeration order; the coding of a
//! graph into a tree depends on that order, so isomorphic graphs presented
//! in different orders are deliberately distinct values.

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;

use crate::bitseq::BitSeq;
use crate::error::{Error, Result};
use crate::tree::{CodingTree, NodeLevels};

/// A finite graph on ordered vertices with symmetric irreflexive adjacency.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGraph {
    n: usize,
    adj: Vec<Vec<bool>>,
}

impl FiniteGraph {
    /// The edgeless graph on `n` vertices.
    pub fn new(n: usize) -> Self {
        FiniteGraph {
            n,
            adj: vec![vec![false; n]; n],
        }
    }

    /// A graph from an edge list.
    pub fn with_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = FiniteGraph::new(n);
        for &(i, j) in edges {
            g.add_edge(i, j)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, i: usize, j: usize) -> Result<()> {
        if i >= self.n || j >= self.n {
            return Err(Error::OutOfRange(format!(
                "edge ({i},{j}) exceeds vertex count {}",
                self.n
            )));
        }
        if i == j {
            return Err(Error::Precondition(format!("loop at vertex {i} not allowed")));
        }
        self.adj[i][j] = true;
        self.adj[j][i] = true;
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adj[i][j]
    }

    /// Edges as (i, j) with i < j, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                if self.adj[i][j] {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// The same graph with vertices renumbered by `order`: vertex `i` of the
    /// result is `order[i]` of `self`.
    pub fn reordered(&self, order: &[usize]) -> Result<FiniteGraph> {
        if order.len() != self.n || !(0..self.n).all(|v| order.contains(&v)) {
            return Err(Error::Precondition(
                "vertex order must be a permutation of the vertex set".into(),
            ));
        }
        let mut g = FiniteGraph::new(self.n);
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                if self.adj[order[i]][order[j]] {
                    g.add_edge(i, j)?;
                }
            }
        }
        Ok(g)
    }
}

/// Whether `g` contains `a` pairwise-adjacent vertices.
pub fn has_clique(g: &FiniteGraph, a: usize) -> Result<bool> {
    if a < 2 {
        return Err(Error::Precondition(format!(
            "clique arity must be at least 2, got {a}"
        )));
    }
    if a > g.vertex_count() {
        return Ok(false);
    }
    Ok((0..g.vertex_count()).combinations(a).any(|c| {
        c.iter()
            .tuple_combinations()
            .all(|(&i, &j)| g.has_edge(i, j))
    }))
}

/// Codes an ordered graph as a tree: coding node `c_n` has length `n` and
/// `c_n(i) = 1` exactly when `v_n` and `v_i` are adjacent.  The node set is
/// the closure of the coding nodes under restriction to every length.
pub fn code_graph(g: &FiniteGraph, k: usize) -> Result<CodingTree> {
    let mut coding = Vec::with_capacity(g.vertex_count());
    let mut nodes = Vec::new();
    for v in 0..g.vertex_count() {
        let c = BitSeq::from_bits((0..v).map(|i| g.has_edge(v, i)));
        for l in 0..=c.len() {
            nodes.push(c.restrict(l));
        }
        coding.push((v as i64, c));
    }
    CodingTree::new(k, NodeLevels::from_nodes(nodes), coding, false)
}

/// Decodes an ordered list of coding nodes back into a graph: vertices in
/// list order, `v_j` adjacent to `v_i` (i < j) exactly when the j-th node
/// carries bit 1 at the i-th node's length.
pub fn decode_graph(coding: &[BitSeq]) -> Result<FiniteGraph> {
    for w in coding.windows(2) {
        if w[1].len() <= w[0].len() {
            return Err(Error::Precondition(format!(
                "coding-node lengths must strictly increase, got {} then {}",
                w[0].len(),
                w[1].len()
            )));
        }
    }
    let mut g = FiniteGraph::new(coding.len());
    for j in 0..coding.len() {
        for i in 0..j {
            if coding[j].bit(coding[i].len()) {
                g.add_edge(i, j)?;
            }
        }
    }
    Ok(g)
}

/// Whether a set of coding nodes codes an `a`-clique: every pair, taken in
/// length order, has passing number 1 at the shorter node's length.
pub fn codes_a_clique(coding: &[BitSeq], a: usize) -> Result<bool> {
    if a < 2 {
        return Err(Error::Precondition(format!(
            "clique arity must be at least 2, got {a}"
        )));
    }
    if coding.len() != a {
        return Err(Error::Precondition(format!(
            "expected exactly {a} coding nodes, got {}",
            coding.len()
        )));
    }
    let mut sorted: Vec<&BitSeq> = coding.iter().collect();
    sorted.sort_by_key(|c| c.len());
    for w in sorted.windows(2) {
        if w[0].len() == w[1].len() {
            return Err(Error::Precondition(
                "coding-node lengths must be pairwise distinct".into(),
            ));
        }
    }
    for j in 1..sorted.len() {
        for i in 0..j {
            if !sorted[j].bit(sorted[i].len()) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

impl fmt::Display for FiniteGraph {
    /// The graph text format: `vertices N` then `edge i j` lines.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "vertices {}", self.n)?;
        for (i, j) in self.edges() {
            writeln!(f, "edge {i} {j}")?;
        }
        Ok(())
    }
}

impl FromStr for FiniteGraph {
    type Err = Error;

    fn from_str(s: &str) -> Result<FiniteGraph> {
        let mut graph: Option<FiniteGraph> = None;
        for (lineno, raw) in s.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let keyword = parts.next().unwrap_or("");
            match keyword {
                "vertices" => {
                    if graph.is_some() {
                        return Err(Error::Parse(format!(
                            "line {}: repeated vertices line",
                            lineno + 1
                        )));
                    }
                    let n: usize = parts
                        .next()
                        .ok_or_else(|| {
                            Error::Parse(format!("line {}: vertices needs a count", lineno + 1))
                        })?
                        .parse()
                        .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))?;
                    graph = Some(FiniteGraph::new(n));
                }
                "edge" => {
                    let g = graph.as_mut().ok_or_else(|| {
                        Error::Parse(format!(
                            "line {}: edge before vertices line",
                            lineno + 1
                        ))
                    })?;
                    let mut num = || -> Result<usize> {
                        parts
                            .next()
                            .ok_or_else(|| {
                                Error::Parse(format!(
                                    "line {}: edge needs two endpoints",
                                    lineno + 1
                                ))
                            })?
                            .parse()
                            .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))
                    };
                    let i = num()?;
                    let j = num()?;
                    if i >= j {
                        return Err(Error::Parse(format!(
                            "line {}: edge endpoints must satisfy i < j, got {i} {j}",
                            lineno + 1
                        )));
                    }
                    g.add_edge(i, j)
                        .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))?;
                }
                other => {
                    return Err(Error::Parse(format!(
                        "line {}: unknown keyword {other:?}",
                        lineno + 1
                    )));
                }
            }
            if parts.next().is_some() {
                return Err(Error::Parse(format!(
                    "line {}: trailing tokens",
                    lineno + 1
                )));
            }
        }
        graph.ok_or_else(|| Error::Parse("missing vertices line".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(s: &str) -> BitSeq {
        s.parse().unwrap()
    }

    /// All labeled graphs on `n` vertices.
    fn all_graphs(n: usize) -> Vec<FiniteGraph> {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
            .collect();
        (0u32..(1 << pairs.len()))
            .map(|mask| {
                let edges: Vec<(usize, usize)> = pairs
                    .iter()
                    .enumerate()
                    .filter(|(b, _)| (mask >> b) & 1 == 1)
                    .map(|(_, &p)| p)
                    .collect();
                FiniteGraph::with_edges(n, &edges).unwrap()
            })
            .collect()
    }

    #[test]
    fn coding_the_path_and_the_cycle() {
        let path = FiniteGraph::with_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let t = code_graph(&path, 3).unwrap();
        assert_eq!(t.coding_node(0), Some(&BitSeq::new()));
        assert_eq!(t.coding_node(1), Some(&seq("1")));
        assert_eq!(t.coding_node(2), Some(&seq("01")));

        let cycle = FiniteGraph::with_edges(4, &[(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap();
        let t4 = code_graph(&cycle, 3).unwrap();
        assert_eq!(t4.coding_node(3), Some(&seq("101")));

        let single = code_graph(&FiniteGraph::new(1), 3).unwrap();
        assert_eq!(single.coding_node(0), Some(&BitSeq::new()));
        assert_eq!(single.coding_count(), 1);
    }

    #[test]
    fn decoding_examples() {
        // Coding nodes with the edge pattern of a path on four vertices.
        let c = vec![seq("1"), seq("01"), seq("101"), seq("0001")];
        let g = decode_graph(&c).unwrap();
        assert_eq!(g.edges(), vec![(0, 1), (1, 2), (2, 3)]);

        let pair = decode_graph(&[seq("1"), seq("00")]).unwrap();
        assert_eq!(pair.edges(), Vec::new());

        assert!(matches!(
            decode_graph(&[seq("01"), seq("1")]),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn round_trip_all_graphs_up_to_five_vertices() {
        for n in 0..=5 {
            for g in all_graphs(n) {
                let t = code_graph(&g, 3).unwrap();
                let coding: Vec<BitSeq> =
                    t.coding_entries(false).map(|(_, c)| c.clone()).collect();
                assert_eq!(decode_graph(&coding).unwrap(), g);
            }
        }
    }

    #[test]
    fn clique_coding_agrees_with_adjacency() {
        for g in all_graphs(5) {
            let t = code_graph(&g, 3).unwrap();
            let coding: Vec<BitSeq> = t.coding_entries(false).map(|(_, c)| c.clone()).collect();
            for a in 2..=5usize {
                for subset in (0..5usize).combinations(a) {
                    let nodes: Vec<BitSeq> =
                        subset.iter().map(|&v| coding[v].clone()).collect();
                    let expect = subset
                        .iter()
                        .tuple_combinations()
                        .all(|(&i, &j)| g.has_edge(i, j));
                    assert_eq!(codes_a_clique(&nodes, a).unwrap(), expect);
                }
            }
        }
    }

    #[test]
    fn codes_a_clique_examples_and_errors() {
        assert!(codes_a_clique(&[seq("1"), seq("01")], 2).unwrap());
        assert!(!codes_a_clique(&[seq("1"), seq("00")], 2).unwrap());
        // Triangle pattern from the k=4 tree: three coding nodes pairwise
        // passing 1.
        assert!(codes_a_clique(&[seq("11"), seq("011"), seq("0011")], 3).unwrap());
        assert!(matches!(
            codes_a_clique(&[seq("1")], 2),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            codes_a_clique(&[seq("1"), seq("0")], 2),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            codes_a_clique(&[seq("1"), seq("01")], 1),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn clique_detection() {
        let triangle = FiniteGraph::with_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert!(has_clique(&triangle, 2).unwrap());
        assert!(has_clique(&triangle, 3).unwrap());
        assert!(!has_clique(&triangle, 4).unwrap());
        let path = FiniteGraph::with_edges(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(!has_clique(&path, 3).unwrap());
        assert!(!has_clique(&FiniteGraph::new(4), 2).unwrap());
        assert!(matches!(has_clique(&path, 1), Err(Error::Precondition(_))));
    }

    #[test]
    fn text_format_round_trip() {
        let g = FiniteGraph::with_edges(4, &[(0, 2), (1, 3), (0, 1)]).unwrap();
        let text = g.to_string();
        assert_eq!(text, "vertices 4\nedge 0 1\nedge 0 2\nedge 1 3\n");
        assert_eq!(text.parse::<FiniteGraph>().unwrap(), g);

        let commented = "# a graph\nvertices 3\n\nedge 0 1 # first\nedge 1 2\n";
        let parsed: FiniteGraph = commented.parse().unwrap();
        assert_eq!(parsed.edges(), vec![(0, 1), (1, 2)]);

        assert!("edge 0 1".parse::<FiniteGraph>().is_err());
        assert!("vertices 2\nedge 1 0".parse::<FiniteGraph>().is_err());
        assert!("vertices 2\nedge 0 2".parse::<FiniteGraph>().is_err());
        assert!("vertices two".parse::<FiniteGraph>().is_err());
        assert!("".parse::<FiniteGraph>().is_err());
    }

    #[test]
    fn reordering_permutes_adjacency() {
        let g = FiniteGraph::with_edges(3, &[(0, 1)]).unwrap();
        let r = g.reordered(&[2, 1, 0]).unwrap();
        assert_eq!(r.edges(), vec![(1, 2)]);
        assert!(g.reordered(&[0, 0, 1]).is_err());
    }
}
