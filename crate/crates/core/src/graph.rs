//! Simple undirected graphs, their integer matrices, text formats and a
//! handful of named families used as a test corpus.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::SymMatrix;

/// Largest vertex count accepted by the single-byte graph6 size field.
pub const GRAPH6_MAX_N: usize = 62;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("vertex {vertex} out of range for n = {n}")]
    OutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(usize, usize),
    #[error("graph6: byte {0:#04x} outside 63..=126")]
    BadGraph6Char(u8),
    #[error("graph6: truncated bit stream (need {needed} bytes, got {got})")]
    Truncated { needed: usize, got: usize },
    #[error("graph6: n = {0} exceeds the supported maximum of {GRAPH6_MAX_N}")]
    Graph6TooLarge(usize),
    #[error("invalid parameters for {family}: {msg}")]
    InvalidParams { family: &'static str, msg: String },
    #[error("graph must have at least one vertex")]
    NoVertices,
}

/// Simple undirected graph on vertices `0..n`.
///
/// Edges are stored once as `(u, v)` with `u < v`, sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    /// Builds a graph, rejecting loops, repeated edges and out-of-range
    /// endpoints. `{u, v}` and `{v, u}` count as the same edge.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::NoVertices);
        }
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::OutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            let e = (u.min(v), u.max(v));
            if !set.insert(e) {
                return Err(GraphError::DuplicateEdge(e.0, e.1));
            }
        }
        Ok(Graph { n, edges: set.into_iter().collect() })
    }

    pub fn empty(n: usize) -> Result<Self, GraphError> {
        Graph::new(n, [])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of edges.
    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.binary_search(&(u.min(v), u.max(v))).is_ok()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for &(u, v) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }

    pub fn min_degree(&self) -> usize {
        self.degrees().into_iter().min().unwrap_or(0)
    }

    pub fn max_degree(&self) -> usize {
        self.degrees().into_iter().max().unwrap_or(0)
    }

    /// `Some(d)` when every vertex has degree `d`.
    pub fn regular_degree(&self) -> Option<usize> {
        let deg = self.degrees();
        let d = deg[0];
        deg.iter().all(|&x| x == d).then_some(d)
    }

    pub fn neighbors(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    /// Adjacency rows as bit masks. Only valid for `n <= 64`.
    pub(crate) fn adjacency_masks(&self) -> Vec<u64> {
        assert!(self.n <= 64, "bit-mask adjacency needs n <= 64");
        let mut masks = vec![0u64; self.n];
        for &(u, v) in &self.edges {
            masks[u] |= 1 << v;
            masks[v] |= 1 << u;
        }
        masks
    }

    /// Proper 2-colouring by breadth-first search, or `None` when the graph
    /// has an odd cycle.
    pub fn two_coloring(&self) -> Option<Vec<bool>> {
        let adj = self.neighbors();
        let mut color: Vec<Option<bool>> = vec![None; self.n];
        for start in 0..self.n {
            if color[start].is_some() {
                continue;
            }
            color[start] = Some(false);
            let mut queue = std::collections::VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                let cu = color[u].unwrap();
                for &w in &adj[u] {
                    match color[w] {
                        None => {
                            color[w] = Some(!cu);
                            queue.push_back(w);
                        }
                        Some(cw) if cw == cu => return None,
                        Some(_) => {}
                    }
                }
            }
        }
        Some(color.into_iter().map(|c| c.unwrap()).collect())
    }

    pub fn is_bipartite(&self) -> bool {
        self.two_coloring().is_some()
    }

    /// Indices of vertices with at least one neighbour.
    pub fn non_isolated(&self) -> Vec<usize> {
        self.degrees()
            .iter()
            .enumerate()
            .filter(|&(_, &d)| d > 0)
            .map(|(i, _)| i)
            .collect()
    }

    /// Subgraph induced by `vertices`, relabelled `0..vertices.len()` in the
    /// given order.
    pub fn induced(&self, vertices: &[usize]) -> Result<Graph, GraphError> {
        let mut index = vec![usize::MAX; self.n];
        for (k, &v) in vertices.iter().enumerate() {
            if v >= self.n {
                return Err(GraphError::OutOfRange { vertex: v, n: self.n });
            }
            index[v] = k;
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(u, v)| index[u] != usize::MAX && index[v] != usize::MAX)
            .map(|&(u, v)| (index[u], index[v]));
        Graph::new(vertices.len(), edges)
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, m={})", self.n, self.edges.len())
    }
}

/// Complement graph: `{u, v}` is an edge iff it is not one in `g`.
pub fn complement(g: &Graph) -> Graph {
    let n = g.n();
    let mut edges = Vec::with_capacity(n * (n - 1) / 2 - g.m());
    for v in 1..n {
        for u in 0..v {
            if !g.has_edge(u, v) {
                edges.push((u, v));
            }
        }
    }
    edges.sort_unstable();
    Graph { n, edges }
}

/// Dense square integer matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    dim: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(dim: usize) -> Self {
        IntMatrix { dim, data: vec![0; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = 1;
        }
        m
    }

    pub fn ones(dim: usize) -> Self {
        IntMatrix { dim, data: vec![1; dim * dim] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.dim + j]
    }

    fn set_sym(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.dim + j] = v;
        self.data[j * self.dim + i] = v;
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.dim).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn row_sum(&self, i: usize) -> i64 {
        self.data[i * self.dim..(i + 1) * self.dim].iter().sum()
    }

    /// `Σ_ij self_ij · other_ij`, exact.
    pub fn inner(&self, other: &IntMatrix) -> i64 {
        assert_eq!(self.dim, other.dim);
        self.data.iter().zip(&other.data).map(|(a, b)| a * b).sum()
    }

    pub fn zip_with(&self, other: &IntMatrix, f: impl Fn(i64, i64) -> i64) -> IntMatrix {
        assert_eq!(self.dim, other.dim);
        IntMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect(),
        }
    }

    pub fn scale(&self, k: i64) -> IntMatrix {
        IntMatrix { dim: self.dim, data: self.data.iter().map(|&a| a * k).collect() }
    }

    pub fn to_sym(&self) -> SymMatrix {
        SymMatrix::from_fn(self.dim, |i, j| self.get(i, j) as f64)
    }

    pub fn outer(x: &[i64]) -> IntMatrix {
        let dim = x.len();
        IntMatrix {
            dim,
            data: x.iter().flat_map(|&a| x.iter().map(move |&b| a * b)).collect(),
        }
    }
}

impl std::ops::Add for &IntMatrix {
    type Output = IntMatrix;
    fn add(self, rhs: &IntMatrix) -> IntMatrix {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl std::ops::Sub for &IntMatrix {
    type Output = IntMatrix;
    fn sub(self, rhs: &IntMatrix) -> IntMatrix {
        self.zip_with(rhs, |a, b| a - b)
    }
}

/// The integer matrices attached to a graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphMatrices {
    /// Adjacency matrix.
    pub a: IntMatrix,
    /// Diagonal degree matrix.
    pub d: IntMatrix,
    /// Laplacian `D - A`.
    pub l: IntMatrix,
    /// Signless Laplacian `D + A`.
    pub q: IntMatrix,
    /// Adjacency matrix of the complement.
    pub abar: IntMatrix,
}

impl GraphMatrices {
    /// `A_alpha = alpha D + (1 - alpha) A` in floating point.
    pub fn a_alpha(&self, alpha: f64) -> SymMatrix {
        let n = self.a.dim();
        SymMatrix::from_fn(n, |i, j| alpha * self.d.get(i, j) as f64 + (1.0 - alpha) * self.a.get(i, j) as f64)
    }
}

pub fn matrices(g: &Graph) -> GraphMatrices {
    let n = g.n();
    let mut a = IntMatrix::zeros(n);
    for &(u, v) in g.edges() {
        a.set_sym(u, v, 1);
    }
    let mut d = IntMatrix::zeros(n);
    for i in 0..n {
        d.data[i * n + i] = a.row_sum(i);
    }
    let l = &d - &a;
    let q = &d + &a;
    let abar = &(&IntMatrix::ones(n) - &IntMatrix::identity(n)) - &a;
    GraphMatrices { a, d, l, q, abar }
}

/// Parses `"n m"` followed by `m` lines `"u v"`. Blank lines and `#`
/// comments are ignored; CRLF is accepted.
pub fn parse_edge_list(text: &str) -> Result<Graph, GraphError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let parse_pair = |line: usize, l: &str| -> Result<(usize, usize), GraphError> {
        let fields: Vec<&str> = l.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(GraphError::Malformed { line, msg: format!("expected two integers, got {:?}", l) });
        }
        let parse = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| GraphError::Malformed { line, msg: format!("not a non-negative integer: {:?}", s) })
        };
        Ok((parse(fields[0])?, parse(fields[1])?))
    };

    let (hline, header) = lines.next().ok_or(GraphError::Malformed { line: 1, msg: "missing header".into() })?;
    let (n, m) = parse_pair(hline, header)?;
    if n == 0 {
        return Err(GraphError::NoVertices);
    }
    let mut set = BTreeSet::new();
    let mut count = 0;
    for (line, l) in lines {
        let (u, v) = parse_pair(line, l)?;
        count += 1;
        if count > m {
            return Err(GraphError::Malformed { line, msg: format!("more than the declared {} edges", m) });
        }
        for w in [u, v] {
            if w >= n {
                return Err(GraphError::OutOfRange { vertex: w, n });
            }
        }
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        if !set.insert((u.min(v), u.max(v))) {
            return Err(GraphError::DuplicateEdge(u.min(v), u.max(v)));
        }
    }
    if count < m {
        return Err(GraphError::Malformed {
            line: text.lines().count(),
            msg: format!("declared {} edges, found {}", m, count),
        });
    }
    Graph::new(n, set)
}

pub fn write_edge_list(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.n(), g.m());
    for &(u, v) in g.edges() {
        out.push_str(&format!("{} {}\n", u, v));
    }
    out
}

/// Decodes a graph6 string (optionally with the `>>graph6<<` header).
pub fn parse_graph6(text: &str) -> Result<Graph, GraphError> {
    let text = text.trim_end_matches(['\n', '\r']);
    let text = text.strip_prefix(">>graph6<<").unwrap_or(text);
    let bytes = text.as_bytes();
    if let Some(&b) = bytes.iter().find(|&&b| !(63..=126).contains(&b)) {
        return Err(GraphError::BadGraph6Char(b));
    }
    let Some(&first) = bytes.first() else {
        return Err(GraphError::Truncated { needed: 1, got: 0 });
    };
    if first == 126 {
        // multi-byte size field: 63 <= n
        return Err(GraphError::Graph6TooLarge(63));
    }
    let n = (first - 63) as usize;
    if n == 0 {
        return Err(GraphError::NoVertices);
    }
    let nbits = n * (n - 1) / 2;
    let needed = 1 + nbits.div_ceil(6);
    if bytes.len() < needed {
        return Err(GraphError::Truncated { needed, got: bytes.len() });
    }
    if bytes.len() > needed {
        return Err(GraphError::Malformed {
            line: 1,
            msg: format!("graph6: {} trailing bytes", bytes.len() - needed),
        });
    }
    let data = &bytes[1..];
    let bit = |k: usize| (data[k / 6] - 63) >> (5 - k % 6) & 1 == 1;
    let mut edges = Vec::new();
    let mut k = 0;
    for v in 1..n {
        for u in 0..v {
            if bit(k) {
                edges.push((u, v));
            }
            k += 1;
        }
    }
    Graph::new(n, edges)
}

pub fn encode_graph6(g: &Graph) -> Result<String, GraphError> {
    let n = g.n();
    if n > GRAPH6_MAX_N {
        return Err(GraphError::Graph6TooLarge(n));
    }
    let mut out = vec![(n as u8) + 63];
    let mut acc = 0u8;
    let mut filled = 0;
    for v in 1..n {
        for u in 0..v {
            acc = (acc << 1) | g.has_edge(u, v) as u8;
            filled += 1;
            if filled == 6 {
                out.push(acc + 63);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((acc << (6 - filled)) + 63);
    }
    Ok(String::from_utf8(out).expect("graph6 bytes are ASCII"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Cycle,
    Complete,
    Path,
    CompleteBipartite,
    Petersen,
    Empty,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Cycle => "cycle",
            Family::Complete => "complete",
            Family::Path => "path",
            Family::CompleteBipartite => "complete_bipartite",
            Family::Petersen => "petersen",
            Family::Empty => "empty",
        }
    }
}

impl std::str::FromStr for Family {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "cycle" => Family::Cycle,
            "complete" => Family::Complete,
            "path" => Family::Path,
            "complete_bipartite" | "complete-bipartite" => Family::CompleteBipartite,
            "petersen" => Family::Petersen,
            "empty" => Family::Empty,
            _ => {
                return Err(GraphError::InvalidParams { family: "family", msg: format!("unknown family {:?}", s) })
            }
        })
    }
}

/// Named graph families with fixed vertex numbering.
///
/// `cycle(n)` has edges `i ~ i+1 (mod n)`; `path(n)` edges `i ~ i+1`;
/// `complete_bipartite(a, b)` puts the `a` side first. The Petersen graph
/// uses the outer 5-cycle `0..5`, spokes `i ~ i+5` and the inner pentagram
/// `5+i ~ 5+(i+2 mod 5)`.
pub fn named_graph(family: Family, params: &[usize]) -> Result<Graph, GraphError> {
    let name = family.name();
    let arity = |k: usize| {
        if params.len() == k {
            Ok(())
        } else {
            Err(GraphError::InvalidParams { family: name, msg: format!("expected {} parameter(s), got {}", k, params.len()) })
        }
    };
    let bad = |msg: &str| GraphError::InvalidParams { family: name, msg: msg.to_string() };
    match family {
        Family::Cycle => {
            arity(1)?;
            let n = params[0];
            if n < 3 {
                return Err(bad("cycle needs n >= 3"));
            }
            Graph::new(n, (0..n).map(|i| (i, (i + 1) % n)))
        }
        Family::Complete => {
            arity(1)?;
            let n = params[0];
            if n < 1 {
                return Err(bad("complete needs n >= 1"));
            }
            Graph::new(n, (1..n).flat_map(|v| (0..v).map(move |u| (u, v))))
        }
        Family::Path => {
            arity(1)?;
            let n = params[0];
            if n < 1 {
                return Err(bad("path needs n >= 1"));
            }
            Graph::new(n, (1..n).map(|i| (i - 1, i)))
        }
        Family::CompleteBipartite => {
            arity(2)?;
            let (a, b) = (params[0], params[1]);
            if a < 1 || b < 1 {
                return Err(bad("complete_bipartite needs a, b >= 1"));
            }
            Graph::new(a + b, (0..a).flat_map(|u| (a..a + b).map(move |v| (u, v))))
        }
        Family::Petersen => {
            arity(0)?;
            let outer = (0..5).map(|i| (i, (i + 1) % 5));
            let spokes = (0..5).map(|i| (i, i + 5));
            let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
            Graph::new(10, outer.chain(spokes).chain(inner))
        }
        Family::Empty => {
            arity(1)?;
            if params[0] < 1 {
                return Err(bad("empty needs n >= 1"));
            }
            Graph::empty(params[0])
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(n: usize) -> Graph {
        named_graph(Family::Complete, &[n]).unwrap()
    }

    fn cycle(n: usize) -> Graph {
        named_graph(Family::Cycle, &[n]).unwrap()
    }

    #[test]
    fn edge_list_examples() {
        assert_eq!(parse_edge_list("2 1\n0 1").unwrap(), k(2));
        assert_eq!(parse_edge_list("3 3\n0 1\n1 2\n0 2").unwrap(), k(3));
        assert_eq!(parse_edge_list("5 5\n0 1\n1 2\n2 3\n3 4\n4 0").unwrap(), cycle(5));
        assert_eq!(parse_edge_list("3 3\r\n0 1\r\n1 2\r\n0 2\r\n").unwrap(), k(3));
    }

    #[test]
    fn edge_list_errors() {
        assert!(matches!(parse_edge_list("2 1\n0 x"), Err(GraphError::Malformed { line: 2, .. })));
        assert!(matches!(parse_edge_list("2 1\n0 2"), Err(GraphError::OutOfRange { vertex: 2, n: 2 })));
        assert!(matches!(parse_edge_list("2 1\n1 1"), Err(GraphError::SelfLoop(1))));
        assert!(matches!(parse_edge_list("3 2\n0 1\n1 0"), Err(GraphError::DuplicateEdge(0, 1))));
        assert!(matches!(parse_edge_list("3 2\n0 1"), Err(GraphError::Malformed { .. })));
        assert!(matches!(parse_edge_list("3 1\n0 1\n1 2"), Err(GraphError::Malformed { .. })));
        assert!(matches!(parse_edge_list(""), Err(GraphError::Malformed { .. })));
        assert!(matches!(parse_edge_list("1 2 3"), Err(GraphError::Malformed { .. })));
    }

    // Expected strings produced by networkx.to_graph6_bytes.
    #[test]
    fn graph6_reference_strings() {
        assert_eq!(parse_graph6("A_").unwrap(), k(2));
        assert_eq!(parse_graph6("Bw").unwrap(), k(3));
        assert_eq!(parse_graph6("A?").unwrap(), Graph::empty(2).unwrap());
        assert_eq!(parse_graph6("Dhc").unwrap(), cycle(5));
        assert_eq!(parse_graph6("IheA@GUAo").unwrap(), named_graph(Family::Petersen, &[]).unwrap());
        assert_eq!(parse_graph6("D]o").unwrap(), named_graph(Family::CompleteBipartite, &[2, 3]).unwrap());
        assert_eq!(parse_graph6(">>graph6<<Bg\n").unwrap(), named_graph(Family::Path, &[3]).unwrap());
        assert_eq!(encode_graph6(&cycle(4)).unwrap(), "Cl");
        assert_eq!(encode_graph6(&k(4)).unwrap(), "C~");
    }

    #[test]
    fn graph6_errors() {
        assert_eq!(parse_graph6("A "), Err(GraphError::BadGraph6Char(b' ')));
        assert!(matches!(parse_graph6("D"), Err(GraphError::Truncated { needed: 3, got: 1 })));
        assert!(matches!(parse_graph6("~?@A"), Err(GraphError::Graph6TooLarge(_))));
        assert!(matches!(parse_graph6(""), Err(GraphError::Truncated { .. })));
        let big = Graph::empty(63).unwrap();
        assert_eq!(encode_graph6(&big), Err(GraphError::Graph6TooLarge(63)));
    }

    #[test]
    fn named_families() {
        assert_eq!(cycle(5).m(), 5);
        assert_eq!(k(4).m(), 6);
        let p = named_graph(Family::Petersen, &[]).unwrap();
        assert_eq!((p.n(), p.m()), (10, 15));
        assert!(p.degrees().iter().all(|&d| d == 3));
        assert_eq!(p.regular_degree(), Some(3));
        assert!(named_graph(Family::Cycle, &[2]).is_err());
        assert!(named_graph(Family::CompleteBipartite, &[0, 3]).is_err());
        assert!(named_graph(Family::Petersen, &[1]).is_err());
        assert!(named_graph(Family::Path, &[]).is_err());
        assert_eq!("complete-bipartite".parse::<Family>().unwrap(), Family::CompleteBipartite);
        assert!("wheel".parse::<Family>().is_err());
    }

    #[test]
    fn complement_examples() {
        assert_eq!(complement(&k(3)), Graph::empty(3).unwrap());
        let c5 = cycle(5);
        assert_eq!(complement(&complement(&c5)), c5);
        let pent = complement(&c5);
        assert_eq!(pent.m(), 5);
        assert_eq!(pent.regular_degree(), Some(2));
        // 2-regular and connected means a single cycle through all 5 vertices
        let adj = pent.neighbors();
        let (mut prev, mut cur, mut steps) = (0, adj[0][0], 1);
        while cur != 0 {
            let next = if adj[cur][0] == prev { adj[cur][1] } else { adj[cur][0] };
            prev = cur;
            cur = next;
            steps += 1;
        }
        assert_eq!(steps, 5);
    }

    #[test]
    fn matrix_examples() {
        let m = matrices(&k(2));
        assert_eq!(m.a, IntMatrix { dim: 2, data: vec![0, 1, 1, 0] });
        assert_eq!(m.d, IntMatrix::identity(2));
        assert_eq!(m.l, IntMatrix { dim: 2, data: vec![1, -1, -1, 1] });
        let m = matrices(&cycle(5));
        assert_eq!(m.d, IntMatrix::identity(5).scale(2));
        assert!((0..5).all(|i| m.a.row_sum(i) == 2));
        let m = matrices(&Graph::empty(3).unwrap());
        assert_eq!(m.a, IntMatrix::zeros(3));
        assert_eq!(m.l, IntMatrix::zeros(3));
        assert_eq!(&m.abar + &IntMatrix::identity(3), IntMatrix::ones(3));
    }

    #[test]
    fn bipartiteness_and_induced() {
        assert!(cycle(4).is_bipartite());
        assert!(!cycle(5).is_bipartite());
        assert!(Graph::empty(3).unwrap().is_bipartite());
        let g = Graph::new(4, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(g.non_isolated(), vec![0, 1, 2]);
        assert_eq!(g.induced(&[0, 1, 2]).unwrap(), named_graph(Family::Path, &[3]).unwrap());
    }
}
