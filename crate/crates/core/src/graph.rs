//! Static undirected networks and the topology metrics used to compare them.
//!
//! Graphs are simple (no self-loops, no multi-edges) and unweighted. Node
//! indices are 0-based everywhere.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};

/// An undirected simple graph on `n_nodes` nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n_nodes: usize,
    /// Unordered pairs stored as `(i, j)` with `i < j`, sorted.
    edges: Vec<(usize, usize)>,
    /// Row-major `n_nodes × n_nodes` adjacency matrix.
    adjacency: Vec<bool>,
}

impl Graph {
    /// Builds a graph from a list of undirected edges.
    ///
    /// Self-loops and out-of-range endpoints are rejected; repeated edges
    /// (in either orientation) are collapsed.
    pub fn new(n_nodes: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if n_nodes == 0 {
            return Err(Error::InvalidGraph("a graph needs at least one node".into()));
        }
        let mut set = BTreeSet::new();
        for (i, j) in edges {
            if i == j {
                return Err(Error::InvalidGraph(format!("self-loop on node {i}")));
            }
            if i >= n_nodes || j >= n_nodes {
                return Err(Error::InvalidGraph(format!(
                    "edge ({i}, {j}) references a node outside 0..{n_nodes}"
                )));
            }
            set.insert((i.min(j), i.max(j)));
        }
        let edges: Vec<_> = set.into_iter().collect();
        let mut adjacency = vec![false; n_nodes * n_nodes];
        for &(i, j) in &edges {
            adjacency[i * n_nodes + j] = true;
            adjacency[j * n_nodes + i] = true;
        }
        Ok(Self { n_nodes, edges, adjacency })
    }

    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    /// Number of edges `L`.
    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn is_adjacent(&self, i: usize, j: usize) -> bool {
        self.adjacency[i * self.n_nodes + j]
    }

    /// Adjacency matrix entry as an integer (0 or 1).
    pub fn adjacency(&self, i: usize, j: usize) -> u8 {
        u8::from(self.is_adjacent(i, j))
    }

    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        let row = &self.adjacency[i * self.n_nodes..(i + 1) * self.n_nodes];
        row.iter().enumerate().filter(|(_, &a)| a).map(|(j, _)| j)
    }

    /// Degree sequence `k_i = Σ_j A_ij`.
    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n_nodes).map(|i| self.neighbors(i).count()).collect()
    }

    /// Mean degree `2L / N`.
    pub fn mean_degree(&self) -> f64 {
        2.0 * self.n_edges() as f64 / self.n_nodes as f64
    }

    /// Degree disparity: the sample variance of the degree sequence,
    /// `Σ_i (k_i − k̄)² / (N − 1)`.
    pub fn degree_disparity(&self) -> Result<f64> {
        if self.n_nodes < 2 {
            return Err(Error::InvalidGraph(
                "degree disparity needs at least two nodes".into(),
            ));
        }
        let mean = self.mean_degree();
        let ss: f64 = self
            .degrees()
            .iter()
            .map(|&k| (k as f64 - mean).powi(2))
            .sum();
        Ok(ss / (self.n_nodes - 1) as f64)
    }

    /// Relabels nodes so that old node `i` becomes `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n_nodes {
            return Err(Error::SizeMismatch { expected: self.n_nodes, got: perm.len() });
        }
        let mut seen = vec![false; self.n_nodes];
        for &p in perm {
            if p >= self.n_nodes || std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidParameter("not a permutation".into()));
            }
        }
        Self::new(self.n_nodes, self.edges.iter().map(|&(i, j)| (perm[i], perm[j])))
    }

    pub fn stats(&self) -> GraphStats {
        GraphStats {
            n_nodes: self.n_nodes,
            n_edges: self.n_edges(),
            mean_degree: self.mean_degree(),
            degree_disparity: self.degree_disparity().ok(),
            degrees: self.degrees(),
        }
    }

    /// Serializes to the edge-list text format accepted by [`load_edge_list`].
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("nodes {}\n", self.n_nodes);
        for (i, j) in &self.edges {
            out.push_str(&format!("{i} {j}\n"));
        }
        out
    }
}

/// Summary metrics of a graph.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GraphStats {
    #[serde(rename = "N")]
    pub n_nodes: usize,
    #[serde(rename = "L")]
    pub n_edges: usize,
    pub mean_degree: f64,
    /// `None` for single-node graphs, where the sample variance is undefined.
    pub degree_disparity: Option<f64>,
    pub degrees: Vec<usize>,
}

/// Parses the edge-list text format.
///
/// One `i j` pair per line; `#` starts a comment line; an optional
/// `nodes K` line fixes the node count (otherwise it is the largest index
/// plus one). Duplicate edges are accepted once with a warning.
pub fn load_edge_list(text: &str) -> Result<Graph> {
    let mut declared: Option<usize> = None;
    let mut seen = BTreeSet::new();
    let mut edges = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parse_err = |msg: String| Error::Parse { line: line_no, msg };
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens[0] == "nodes" {
            if tokens.len() != 2 {
                return Err(parse_err("expected `nodes K`".into()));
            }
            if declared.is_some() || !edges.is_empty() {
                return Err(parse_err("`nodes` header must appear once, before any edge".into()));
            }
            let k: usize = tokens[1]
                .parse()
                .map_err(|_| parse_err(format!("invalid node count `{}`", tokens[1])))?;
            declared = Some(k);
            continue;
        }
        if tokens.len() != 2 {
            return Err(parse_err(format!("expected two node indices, found `{line}`")));
        }
        let mut idx = [0usize; 2];
        for (slot, tok) in idx.iter_mut().zip(&tokens) {
            let v: i64 = tok
                .parse()
                .map_err(|_| parse_err(format!("invalid node index `{tok}`")))?;
            if v < 0 {
                return Err(parse_err(format!("negative node index {v}")));
            }
            *slot = v as usize;
        }
        let [i, j] = idx;
        if i == j {
            return Err(parse_err(format!("self-loop on node {i}")));
        }
        if !seen.insert((i.min(j), i.max(j))) {
            log::warn!("line {line_no}: duplicate edge ({i}, {j}) ignored");
            continue;
        }
        edges.push((i, j));
    }
    let implied = edges.iter().map(|&(i, j)| i.max(j) + 1).max().unwrap_or(0);
    let n = match declared {
        Some(k) if k < implied => {
            return Err(Error::InvalidGraph(format!(
                "header declares {k} nodes but an edge references node {}",
                implied - 1
            )))
        }
        Some(k) => k,
        None => implied,
    };
    Graph::new(n, edges)
}

/// Complete graph `K_n`.
pub fn complete(n: usize) -> Result<Graph> {
    Graph::new(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))))
}

/// Cycle `C_n`, `n ≥ 3`.
pub fn cycle(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::InvalidGraph("a cycle needs at least three nodes".into()));
    }
    Graph::new(n, (0..n).map(|i| (i, (i + 1) % n)))
}

/// Star with centre 0 and `n − 1` leaves, `n ≥ 2`.
pub fn star(n: usize) -> Result<Graph> {
    if n < 2 {
        return Err(Error::InvalidGraph("a star needs at least two nodes".into()));
    }
    Graph::new(n, (1..n).map(|i| (0, i)))
}

const NAMED: &[(&str, usize, &[(usize, usize)])] = &[
    // K4 without edge {2,3}: the only 4-node, 5-edge simple graph. Degrees (3,3,2,2).
    ("k4-minus-edge", 4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]),
    // Triangle with a pendant. Degrees (3,2,2,1).
    ("paw", 4, &[(0, 1), (0, 2), (1, 2), (0, 3)]),
    // N=7, L=13, degrees (5,5,4,4,3,3,2), disparity 26/21.
    (
        "dense7-low-disparity",
        7,
        &[
            (0, 1), (0, 2), (0, 3), (0, 4), (0, 5), (1, 2), (1, 3),
            (1, 4), (1, 5), (2, 3), (2, 6), (3, 6), (4, 5),
        ],
    ),
    // N=7, L=13, degrees (6,5,4,4,3,3,1), disparity 54/21. Node 0 is a hub.
    (
        "dense7-high-disparity",
        7,
        &[
            (0, 1), (0, 2), (0, 3), (0, 4), (0, 5), (0, 6), (1, 2),
            (1, 3), (1, 4), (1, 5), (2, 3), (2, 4), (3, 5),
        ],
    ),
    // N=7, L=7, degrees (4,3,2,2,1,1,1), disparity 4/3. Connected, one triangle.
    ("sparse7", 7, &[(0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (1, 5), (3, 6)]),
];

/// Resolves a built-in graph by name.
///
/// Fixed graphs: `k4-minus-edge`, `paw`, `dense7-low-disparity`,
/// `dense7-high-disparity`, `sparse7`. Families: `cycle:N`,
/// `complete:N`, `star:N`.
pub fn builtin(name: &str) -> Result<Graph> {
    if let Some((_, n, edges)) = NAMED.iter().find(|(k, _, _)| *k == name) {
        return Graph::new(*n, edges.iter().copied());
    }
    let (family, size) = name
        .split_once(':')
        .ok_or_else(|| Error::UnknownGraph(name.to_string()))?;
    let n: usize = size
        .parse()
        .map_err(|_| Error::UnknownGraph(name.to_string()))?;
    match family {
        "cycle" => cycle(n),
        "complete" => complete(n),
        "star" => star(n),
        _ => Err(Error::UnknownGraph(name.to_string())),
    }
}

/// Names of the fixed built-in graphs.
pub fn builtin_names() -> impl Iterator<Item = &'static str> {
    NAMED.iter().map(|(k, _, _)| *k)
}

/// The shipped graph library: every fixed built-in plus the 4- and
/// 7-node members of each family.
pub fn library() -> Vec<(String, Graph)> {
    let mut names: Vec<String> = builtin_names().map(str::to_string).collect();
    for n in [4, 7] {
        for family in ["cycle", "complete", "star"] {
            names.push(format!("{family}:{n}"));
        }
    }
    names
        .into_iter()
        .map(|name| {
            let g = builtin(&name).expect("library names are valid");
            (name, g)
        })
        .collect()
}
