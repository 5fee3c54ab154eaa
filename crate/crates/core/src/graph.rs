//! Graph representation, edge-list and graph6 parsing, and small-n
//! automorphism queries.
//!
//! Vertices are dense 0-based indices. Weights are exact rationals and
//! default to 1. Undirected graphs store each edge once with `u < v`.

use crate::exact::ExactMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use thiserror::Error;

/// Largest vertex count accepted by the automorphism search.
pub const AUTOMORPHISM_BUDGET: usize = 12;

/// Largest graph6 size handled (single-byte size field).
pub const GRAPH6_MAX_N: usize = 62;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("line {line}: malformed edge line {text:?}")]
    MalformedLine { line: usize, text: String },
    #[error("line {line}: vertex index {index} out of range for n={n}")]
    IndexOutOfRange { line: usize, index: usize, n: usize },
    #[error("line {line}: duplicate edge ({u}, {v})")]
    DuplicateEdge { line: usize, u: usize, v: usize },
    #[error("line {line}: self-loop ({v}, {v}) not allowed in simple mode")]
    SelfLoop { line: usize, v: usize },
    #[error("line {line}: malformed header {text:?}")]
    MalformedHeader { line: usize, text: String },
    #[error("empty input: no vertices")]
    Empty,
    #[error("graph6: invalid character {byte:#x} at position {pos}")]
    Graph6InvalidChar { byte: u8, pos: usize },
    #[error("graph6: truncated bit field (need {need} data bytes, got {got})")]
    Graph6Truncated { need: usize, got: usize },
    #[error("graph6: vertex count {n} outside supported range 1..={max}", max = GRAPH6_MAX_N)]
    Graph6Size { n: usize },
    #[error("graph6 encoding requires an undirected, unit-weight graph with n <= {max}", max = GRAPH6_MAX_N)]
    Graph6Unencodable,
    #[error("automorphism search supports n <= {budget}, got n={n}", budget = AUTOMORPHISM_BUDGET)]
    BudgetExceeded { n: usize },
    #[error("vertex pair ({i}, {j}) invalid for n={n}")]
    BadPair { i: usize, j: usize, n: usize },
}

/// An unordered pair of distinct vertices. For undirected use the
/// constructor normalizes to `i < j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct VertexPair {
    pub i: usize,
    pub j: usize,
}

impl VertexPair {
    pub fn new(i: usize, j: usize, n: usize) -> Result<Self, GraphError> {
        if i == j || i >= n || j >= n {
            return Err(GraphError::BadPair { i, j, n });
        }
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        Ok(VertexPair { i, j })
    }
}

/// A vertex-labeled graph with exact rational edge weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    directed: bool,
    edges: Vec<(usize, usize, BigRational)>,
}

impl Graph {
    /// Builds a graph from explicit parts, enforcing the simple-graph
    /// invariants. Self-loops are accepted only for directed graphs, where
    /// the matrix generalization applies.
    pub fn new(
        n: usize,
        directed: bool,
        edges: Vec<(usize, usize, BigRational)>,
    ) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::Empty);
        }
        let mut g = Graph {
            n,
            directed,
            edges: Vec::with_capacity(edges.len()),
        };
        for (idx, (u, v, w)) in edges.into_iter().enumerate() {
            g.push_edge(u, v, w, idx + 1)?;
        }
        g.sort_edges();
        Ok(g)
    }

    fn sort_edges(&mut self) {
        self.edges.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
    }

    fn push_edge(
        &mut self,
        u: usize,
        v: usize,
        w: BigRational,
        line: usize,
    ) -> Result<(), GraphError> {
        if u >= self.n {
            return Err(GraphError::IndexOutOfRange {
                line,
                index: u,
                n: self.n,
            });
        }
        if v >= self.n {
            return Err(GraphError::IndexOutOfRange {
                line,
                index: v,
                n: self.n,
            });
        }
        if u == v && !self.directed {
            return Err(GraphError::SelfLoop { line, v });
        }
        let (a, b) = if self.directed || u < v { (u, v) } else { (v, u) };
        if self.edges.iter().any(|(x, y, _)| *x == a && *y == b) {
            return Err(GraphError::DuplicateEdge { line, u: a, v: b });
        }
        self.edges.push((a, b, w));
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn directed(&self) -> bool {
        self.directed
    }

    pub fn edges(&self) -> &[(usize, usize, BigRational)] {
        &self.edges
    }

    pub fn is_unit_weighted(&self) -> bool {
        self.edges.iter().all(|(_, _, w)| w.is_one())
    }

    /// Degree of each vertex counting incident edges (undirected view).
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0usize; self.n];
        for (u, v, _) in &self.edges {
            deg[*u] += 1;
            if u != v {
                deg[*v] += 1;
            }
        }
        deg
    }

    /// Adjacency matrix export: entry (u, v) is the weight of edge u -> v.
    /// Symmetric exactly when the graph is undirected.
    pub fn adjacency_matrix(&self) -> ExactMatrix {
        let mut m = ExactMatrix::zeros(self.n);
        for (u, v, w) in &self.edges {
            m.set(*u, *v, w.clone());
            if !self.directed {
                m.set(*v, *u, w.clone());
            }
        }
        m
    }

    /// Connectivity of the undirected support (edge directions ignored).
    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return false;
        }
        let mut adj = vec![Vec::new(); self.n];
        for (u, v, _) in &self.edges {
            adj[*u].push(*v);
            adj[*v].push(*u);
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    stack.push(v);
                }
            }
        }
        count == self.n
    }

    /// True iff some adjacency- and weight-preserving permutation maps
    /// `p.i` to `p.j`. Backtracking with degree-partition pruning; bounded
    /// by [`AUTOMORPHISM_BUDGET`].
    pub fn automorphism_maps(&self, p: VertexPair) -> Result<bool, GraphError> {
        if self.n > AUTOMORPHISM_BUDGET {
            return Err(GraphError::BudgetExceeded { n: self.n });
        }
        if p.i >= self.n || p.j >= self.n || p.i == p.j {
            return Err(GraphError::BadPair {
                i: p.i,
                j: p.j,
                n: self.n,
            });
        }
        let adj = self.weight_grid();
        let deg = self.degrees();
        if deg[p.i] != deg[p.j] {
            return Ok(false);
        }
        let mut image: Vec<Option<usize>> = vec![None; self.n];
        let mut used = vec![false; self.n];
        image[p.i] = Some(p.j);
        used[p.j] = true;
        Ok(self.extend_map(&adj, &deg, &mut image, &mut used, 0))
    }

    fn weight_grid(&self) -> Vec<Vec<BigRational>> {
        let mut grid = vec![vec![BigRational::zero(); self.n]; self.n];
        for (u, v, w) in &self.edges {
            grid[*u][*v] = w.clone();
            if !self.directed {
                grid[*v][*u] = w.clone();
            }
        }
        grid
    }

    fn extend_map(
        &self,
        adj: &[Vec<BigRational>],
        deg: &[usize],
        image: &mut Vec<Option<usize>>,
        used: &mut Vec<bool>,
        mut next: usize,
    ) -> bool {
        while next < self.n && image[next].is_some() {
            next += 1;
        }
        if next == self.n {
            return true;
        }
        for cand in 0..self.n {
            if used[cand] || deg[cand] != deg[next] {
                continue;
            }
            let consistent = (0..self.n).all(|u| match image[u] {
                Some(iu) => adj[next][u] == adj[cand][iu] && adj[u][next] == adj[iu][cand],
                None => true,
            });
            if !consistent {
                continue;
            }
            image[next] = Some(cand);
            used[cand] = true;
            if self.extend_map(adj, deg, image, used, next + 1) {
                return true;
            }
            image[next] = None;
            used[cand] = false;
        }
        false
    }

    /// Edge-list serialization with an explicit header, inverse of
    /// [`parse_edge_list`].
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("n={} directed={}\n", self.n, self.directed);
        for (u, v, w) in &self.edges {
            if w.is_one() {
                let _ = writeln!(out, "{u} {v}");
            } else {
                let _ = writeln!(out, "{u} {v} {w}");
            }
        }
        out
    }

    /// graph6 encoding; defined for undirected unit-weight graphs with
    /// `n <= 62`.
    pub fn to_graph6(&self) -> Result<String, GraphError> {
        if self.directed || !self.is_unit_weighted() || self.n > GRAPH6_MAX_N || self.n == 0 {
            return Err(GraphError::Graph6Unencodable);
        }
        let mut bits = Vec::with_capacity(self.n * (self.n - 1) / 2);
        let grid = self.weight_grid();
        for j in 1..self.n {
            for i in 0..j {
                bits.push(!grid[i][j].is_zero());
            }
        }
        let mut out = String::new();
        out.push((self.n as u8 + 63) as char);
        for chunk in bits.chunks(6) {
            let mut v: u8 = 0;
            for (k, bit) in chunk.iter().enumerate() {
                if *bit {
                    v |= 1 << (5 - k);
                }
            }
            out.push((v + 63) as char);
        }
        Ok(out)
    }
}

fn parse_rational(tok: &str) -> Option<BigRational> {
    if let Some((p, q)) = tok.split_once('/') {
        let num: BigInt = p.parse().ok()?;
        let den: BigInt = q.parse().ok()?;
        if den.is_zero() {
            return None;
        }
        return Some(BigRational::new(num, den));
    }
    if let Some((int_part, frac_part)) = tok.split_once('.') {
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let negative = int_part.starts_with('-');
        let int_val: BigInt = if int_part == "-" || int_part.is_empty() {
            BigInt::zero()
        } else {
            int_part.parse().ok()?
        };
        let frac_val: BigInt = frac_part.parse().ok()?;
        let den = BigInt::from(10u32).pow(frac_part.len() as u32);
        let mag = int_val.abs() * &den + frac_val;
        let signed = if negative { -mag } else { mag };
        return Some(BigRational::new(signed, den));
    }
    let num: BigInt = tok.parse().ok()?;
    Some(BigRational::from(num))
}

/// Parses the "p/q", decimal, or integer rational literals accepted on edge
/// lines and CLI flags.
pub fn rational_literal(tok: &str) -> Option<BigRational> {
    parse_rational(tok)
}

/// Parses the line-oriented edge-list format: an optional header
/// `n=<int> directed=<bool>`, then one `u v` or `u v w` edge per line.
/// Blank lines are skipped. Without a header the vertex count is inferred
/// as one past the largest index and the graph is undirected.
pub fn parse_edge_list(text: &str) -> Result<Graph, GraphError> {
    let mut n: Option<usize> = None;
    let mut directed = false;
    let mut raw_edges: Vec<(usize, usize, usize, BigRational)> = Vec::new();
    let mut header_seen = false;

    for (lineno0, raw) in text.lines().enumerate() {
        let line = lineno0 + 1;
        let t = raw.trim();
        if t.is_empty() {
            continue;
        }
        if t.contains('=') {
            if header_seen || !raw_edges.is_empty() {
                return Err(GraphError::MalformedHeader {
                    line,
                    text: t.to_string(),
                });
            }
            for field in t.split_whitespace() {
                match field.split_once('=') {
                    Some(("n", v)) => {
                        n = Some(v.parse().map_err(|_| GraphError::MalformedHeader {
                            line,
                            text: t.to_string(),
                        })?)
                    }
                    Some(("directed", v)) => {
                        directed = v.parse().map_err(|_| GraphError::MalformedHeader {
                            line,
                            text: t.to_string(),
                        })?
                    }
                    _ => {
                        return Err(GraphError::MalformedHeader {
                            line,
                            text: t.to_string(),
                        })
                    }
                }
            }
            header_seen = true;
            continue;
        }
        let toks: Vec<&str> = t.split_whitespace().collect();
        if toks.len() != 2 && toks.len() != 3 {
            return Err(GraphError::MalformedLine {
                line,
                text: t.to_string(),
            });
        }
        let parse_idx = |s: &str| -> Result<usize, GraphError> {
            s.parse().map_err(|_| GraphError::MalformedLine {
                line,
                text: t.to_string(),
            })
        };
        let u = parse_idx(toks[0])?;
        let v = parse_idx(toks[1])?;
        let w = if toks.len() == 3 {
            parse_rational(toks[2]).ok_or_else(|| GraphError::MalformedLine {
                line,
                text: t.to_string(),
            })?
        } else {
            BigRational::one()
        };
        raw_edges.push((line, u, v, w));
    }

    let n = match n {
        Some(v) if v > 0 => v,
        Some(_) => return Err(GraphError::Empty),
        None => {
            let max = raw_edges
                .iter()
                .map(|(_, u, v, _)| (*u).max(*v))
                .max()
                .ok_or(GraphError::Empty)?;
            max + 1
        }
    };

    let mut g = Graph {
        n,
        directed,
        edges: Vec::with_capacity(raw_edges.len()),
    };
    for (line, u, v, w) in raw_edges {
        g.push_edge(u, v, w, line)?;
    }
    g.sort_edges();
    Ok(g)
}

/// Decodes one graph6 line (optionally prefixed by the standard
/// `>>graph6<<` marker) into an undirected unit-weight graph.
pub fn parse_graph6(line: &str) -> Result<Graph, GraphError> {
    let line = line.trim_end_matches(['\r', '\n']);
    let line = line.strip_prefix(">>graph6<<").unwrap_or(line);
    let bytes = line.as_bytes();
    if bytes.is_empty() {
        return Err(GraphError::Graph6Truncated { need: 1, got: 0 });
    }
    for (pos, &b) in bytes.iter().enumerate() {
        if !(63..=126).contains(&b) {
            return Err(GraphError::Graph6InvalidChar { byte: b, pos });
        }
    }
    let n = (bytes[0] - 63) as usize;
    if n == 0 || n > GRAPH6_MAX_N {
        return Err(GraphError::Graph6Size { n });
    }
    let nbits = n * (n - 1) / 2;
    let need = nbits.div_ceil(6);
    let data = &bytes[1..];
    if data.len() != need {
        return Err(GraphError::Graph6Truncated {
            need,
            got: data.len(),
        });
    }
    let mut edges = Vec::new();
    let mut bit_idx = 0usize;
    for j in 1..n {
        for i in 0..j {
            let byte = data[bit_idx / 6] - 63;
            let bit = (byte >> (5 - (bit_idx % 6))) & 1;
            if bit == 1 {
                edges.push((i, j, BigRational::one()));
            }
            bit_idx += 1;
        }
    }
    Graph::new(n, false, edges)
}

/// Groups vertices by degree; used by miner prefilters.
pub fn degree_multiset(g: &Graph) -> BTreeMap<usize, usize> {
    let mut m = BTreeMap::new();
    for d in g.degrees() {
        *m.entry(d).or_insert(0) += 1;
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> Graph {
        parse_edge_list("0 1\n1 2").unwrap()
    }

    #[test]
    fn parses_path_and_k2() {
        let g = path3();
        assert_eq!(g.n(), 3);
        assert!(!g.directed());
        assert_eq!(g.edges().len(), 2);

        let k2 = parse_edge_list("0 1").unwrap();
        assert_eq!(k2.n(), 2);
        assert_eq!(k2.edges().len(), 1);
    }

    #[test]
    fn rejects_self_loop_in_simple_mode() {
        let err = parse_edge_list("0 0").unwrap_err();
        assert_eq!(err, GraphError::SelfLoop { line: 1, v: 0 });
    }

    #[test]
    fn directed_mode_accepts_self_loops_and_antiparallel_edges() {
        let g = parse_edge_list("n=2 directed=true\n0 0 3/2\n0 1\n1 0").unwrap();
        assert_eq!(g.edges().len(), 3);
    }

    #[test]
    fn duplicate_edges_rejected_including_reversed_form() {
        let err = parse_edge_list("0 1\n1 0").unwrap_err();
        assert_eq!(err, GraphError::DuplicateEdge { line: 2, u: 0, v: 1 });
    }

    #[test]
    fn reports_line_numbers_on_malformed_input() {
        let err = parse_edge_list("0 1\nbogus line").unwrap_err();
        assert_eq!(
            err,
            GraphError::MalformedLine {
                line: 2,
                text: "bogus line".to_string()
            }
        );
        let err = parse_edge_list("n=3\n0 5").unwrap_err();
        assert_eq!(
            err,
            GraphError::IndexOutOfRange {
                line: 2,
                index: 5,
                n: 3
            }
        );
    }

    #[test]
    fn header_sets_size_for_isolated_vertices() {
        let g = parse_edge_list("n=4 directed=false\n0 1").unwrap();
        assert_eq!(g.n(), 4);
        assert!(!g.is_connected());
    }

    #[test]
    fn weight_literals_fraction_and_decimal() {
        let g = parse_edge_list("0 1 3/2\n1 2 0.25").unwrap();
        assert_eq!(
            g.edges()[0].2,
            BigRational::new(BigInt::from(3), BigInt::from(2))
        );
        assert_eq!(
            g.edges()[1].2,
            BigRational::new(BigInt::from(1), BigInt::from(4))
        );
    }

    #[test]
    fn graph6_decodes_known_strings() {
        let k2 = parse_graph6("A_").unwrap();
        assert_eq!(k2.n(), 2);
        assert_eq!(k2.edges().len(), 1);

        let k3 = parse_graph6("Bw").unwrap();
        assert_eq!(k3.n(), 3);
        assert_eq!(k3.edges().len(), 3);

        let p3 = parse_graph6("Bg").unwrap();
        assert_eq!(p3.n(), 3);
        let mut e: Vec<(usize, usize)> = p3.edges().iter().map(|(u, v, _)| (*u, *v)).collect();
        e.sort();
        assert_eq!(e, vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn graph6_round_trips_the_petgraph_fixture() {
        // 5 vertices, edges 0-2, 0-4, 1-3, 3-4 encode to "DQc"
        let g = parse_edge_list("n=5\n0 2\n0 4\n1 3\n3 4").unwrap();
        assert_eq!(g.to_graph6().unwrap(), "DQc");
        let back = parse_graph6("DQc").unwrap();
        assert_eq!(back.to_graph6().unwrap(), "DQc");
    }

    #[test]
    fn graph6_rejects_bad_input() {
        assert!(matches!(
            parse_graph6("B"),
            Err(GraphError::Graph6Truncated { .. })
        ));
        assert!(matches!(
            parse_graph6("B\x1f"),
            Err(GraphError::Graph6InvalidChar { .. })
        ));
        assert!(matches!(parse_graph6("?"), Err(GraphError::Graph6Size { n: 0 })));
    }

    #[test]
    fn adjacency_matrix_matches_examples() {
        let k2 = parse_edge_list("0 1").unwrap().adjacency_matrix();
        assert_eq!(k2.get(0, 1), &BigRational::one());
        assert_eq!(k2.get(1, 0), &BigRational::one());
        assert!(k2.get(0, 0).is_zero());

        let p3 = path3().adjacency_matrix();
        assert!(p3.is_symmetric());
        assert!(p3.get(0, 2).is_zero());
        assert_eq!(p3.get(1, 2), &BigRational::one());

        let d = parse_edge_list("n=2 directed=true\n0 1")
            .unwrap()
            .adjacency_matrix();
        assert_eq!(d.get(0, 1), &BigRational::one());
        assert!(d.get(1, 0).is_zero());
        assert!(!d.is_symmetric());
    }

    #[test]
    fn automorphism_swaps_path_ends_only() {
        let g = path3();
        let ends = VertexPair::new(0, 2, 3).unwrap();
        let mixed = VertexPair::new(0, 1, 3).unwrap();
        assert!(g.automorphism_maps(ends).unwrap());
        assert!(!g.automorphism_maps(mixed).unwrap());
    }

    #[test]
    fn automorphism_budget_enforced() {
        let edges: Vec<_> = (0..13)
            .map(|k| (k, (k + 1) % 14, BigRational::one()))
            .collect();
        let g = Graph::new(14, false, edges).unwrap();
        assert!(matches!(
            g.automorphism_maps(VertexPair::new(0, 1, 14).unwrap()),
            Err(GraphError::BudgetExceeded { n: 14 })
        ));
    }

    #[test]
    fn edge_list_round_trip() {
        let g = parse_edge_list("n=4 directed=true\n0 1 3/2\n2 2 -1\n3 0").unwrap();
        let text = g.to_edge_list();
        let back = parse_edge_list(&text).unwrap();
        assert_eq!(g, back);
    }
}
