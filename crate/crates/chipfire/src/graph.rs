//! Graph representation, parsing, generators, and enumeration of small
//! connected graphs up to isomorphism.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Largest vertex count accepted by [`enumerate_connected`] unless a caller
/// raises the limit explicitly.
pub const DEFAULT_ENUM_LIMIT: usize = 6;

/// Stable index into a graph's edge list. Edges are stored sorted by
/// endpoints, so ids are reproducible regardless of input order.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct EdgeId(pub usize);

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("line {line}: malformed input: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("self-loop at vertex {v}")]
    SelfLoop { v: usize },
    #[error("duplicate edge ({u}, {v})")]
    DuplicateEdge { u: usize, v: usize },
    #[error("vertex {v} out of range (n = {n})")]
    VertexOutOfRange { v: usize, n: usize },
    #[error("graph is not connected")]
    Disconnected,
    #[error("invalid parameters for {family}: {msg}")]
    InvalidParams { family: String, msg: String },
    #[error("enumeration limit exceeded: n = {n} > {limit}")]
    EnumerationLimit { n: usize, limit: usize },
}

/// Simple connected undirected graph on vertices `0..n`.
///
/// Immutable after construction; safe to share across worker threads.
#[derive(Clone, Debug)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
    incident: Vec<Vec<EdgeId>>,
    index: HashMap<(usize, usize), EdgeId>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.edges == other.edges
    }
}
impl Eq for Graph {}

impl Graph {
    /// Builds and validates a graph from an edge list. Endpoint order within
    /// a pair does not matter.
    pub fn from_edges(n: usize, raw: &[(usize, usize)]) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::InvalidParams {
                family: "graph".into(),
                msg: "vertex count must be positive".into(),
            });
        }
        let mut seen = HashSet::new();
        let mut edges = Vec::with_capacity(raw.len());
        for &(a, b) in raw {
            if a == b {
                return Err(GraphError::SelfLoop { v: a });
            }
            for &x in &[a, b] {
                if x >= n {
                    return Err(GraphError::VertexOutOfRange { v: x, n });
                }
            }
            let e = (a.min(b), a.max(b));
            if !seen.insert(e) {
                return Err(GraphError::DuplicateEdge { u: e.0, v: e.1 });
            }
            edges.push(e);
        }
        edges.sort_unstable();
        let mut adj = vec![Vec::new(); n];
        let mut incident = vec![Vec::new(); n];
        let mut index = HashMap::new();
        for (k, &(u, v)) in edges.iter().enumerate() {
            adj[u].push(v);
            adj[v].push(u);
            incident[u].push(EdgeId(k));
            incident[v].push(EdgeId(k));
            index.insert((u, v), EdgeId(k));
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        let g = Graph {
            n,
            edges,
            adj,
            incident,
            index,
        };
        if !g.is_connected() {
            return Err(GraphError::Disconnected);
        }
        Ok(g)
    }

    fn is_connected(&self) -> bool {
        let mut visited = vec![false; self.n];
        let mut queue = VecDeque::new();
        visited[0] = true;
        queue.push_back(0);
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for &u in &self.adj[v] {
                if !visited[u] {
                    visited[u] = true;
                    count += 1;
                    queue.push_back(u);
                }
            }
        }
        count == self.n
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Incident edge ids of `v`, ascending.
    pub fn incident_edges(&self, v: usize) -> &[EdgeId] {
        &self.incident[v]
    }

    /// Endpoints of an edge, ordered `u < v`.
    pub fn endpoints(&self, e: EdgeId) -> (usize, usize) {
        self.edges[e.0]
    }

    pub fn other_endpoint(&self, e: EdgeId, v: usize) -> usize {
        let (a, b) = self.endpoints(e);
        if v == a {
            b
        } else {
            a
        }
    }

    pub fn edge_between(&self, u: usize, v: usize) -> Option<EdgeId> {
        self.index.get(&(u.min(v), u.max(v))).copied()
    }

    /// Renders the graph in the text file format accepted by [`parse_graph`].
    pub fn to_file_format(&self) -> String {
        let mut s = format!("{} {}\n", self.n, self.edges.len());
        for &(u, v) in &self.edges {
            s.push_str(&format!("{} {}\n", u, v));
        }
        s
    }

    /// Order-independent fingerprint used to pair a [`crate::CycleSummary`]
    /// with the graph it was computed on.
    pub fn fingerprint(&self) -> u64 {
        use std::hash::{Hash, Hasher};
        let mut h = std::collections::hash_map::DefaultHasher::new();
        self.n.hash(&mut h);
        self.edges.hash(&mut h);
        h.finish()
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_file_format())
    }
}

impl FromStr for Graph {
    type Err = GraphError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_graph(s)
    }
}

/// Parses the graph file format: a header line `n m`, then `m` lines `u v`.
/// Lines starting with `#` are comments; blank lines are skipped.
pub fn parse_graph(text: &str) -> Result<Graph, GraphError> {
    let mut data_lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (header_no, header) = data_lines.next().ok_or(GraphError::Malformed {
        line: 0,
        msg: "empty input".into(),
    })?;
    let mut it = header.split_whitespace();
    let n: usize = parse_token(it.next(), header_no, "vertex count")?;
    let m: usize = parse_token(it.next(), header_no, "edge count")?;
    if it.next().is_some() {
        return Err(GraphError::Malformed {
            line: header_no,
            msg: "expected exactly two header fields".into(),
        });
    }

    let mut edges = Vec::with_capacity(m);
    for _ in 0..m {
        let (line_no, line) = data_lines.next().ok_or(GraphError::Malformed {
            line: header_no,
            msg: format!("expected {} edge lines, found {}", m, edges.len()),
        })?;
        let mut it = line.split_whitespace();
        let u: usize = parse_token(it.next(), line_no, "edge endpoint")?;
        let v: usize = parse_token(it.next(), line_no, "edge endpoint")?;
        if it.next().is_some() {
            return Err(GraphError::Malformed {
                line: line_no,
                msg: "expected exactly two endpoints".into(),
            });
        }
        edges.push((u, v));
    }
    if let Some((line_no, _)) = data_lines.next() {
        return Err(GraphError::Malformed {
            line: line_no,
            msg: format!("unexpected data after {} edges", m),
        });
    }
    Graph::from_edges(n, &edges)
}

fn parse_token(tok: Option<&str>, line: usize, what: &str) -> Result<usize, GraphError> {
    let tok = tok.ok_or_else(|| GraphError::Malformed {
        line,
        msg: format!("missing {}", what),
    })?;
    tok.parse().map_err(|_| GraphError::Malformed {
        line,
        msg: format!("cannot parse {} {:?}", what, tok),
    })
}

/// Named graph families.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    Complete(usize),
    CompleteBipartite(usize, usize),
    Cycle(usize),
    Path(usize),
    RandomConnected { n: usize, m: usize, seed: u64 },
}

impl FromStr for Family {
    type Err = GraphError;

    /// Accepts `complete:5`, `complete_bipartite:2,3`, `cycle:4`, `path:3`,
    /// `random_connected:6,9,42`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |msg: &str| GraphError::InvalidParams {
            family: s.to_string(),
            msg: msg.to_string(),
        };
        let (name, params) = s
            .split_once(':')
            .ok_or_else(|| bad("expected name:params"))?;
        let nums: Vec<u64> = params
            .split(',')
            .map(|p| p.trim().parse::<u64>())
            .collect::<Result<_, _>>()
            .map_err(|_| bad("parameters must be integers"))?;
        match (name, nums.as_slice()) {
            ("complete", [n]) => Ok(Family::Complete(*n as usize)),
            ("complete_bipartite", [a, b]) => {
                Ok(Family::CompleteBipartite(*a as usize, *b as usize))
            }
            ("cycle", [n]) => Ok(Family::Cycle(*n as usize)),
            ("path", [n]) => Ok(Family::Path(*n as usize)),
            ("random_connected", [n, m, seed]) => Ok(Family::RandomConnected {
                n: *n as usize,
                m: *m as usize,
                seed: *seed,
            }),
            _ => Err(bad("unknown family or wrong parameter count")),
        }
    }
}

/// Builds a named graph. `complete_bipartite(a, b)` labels side L as
/// vertices `0..a` and side R as `a..a+b`.
pub fn generate(family: &Family) -> Result<Graph, GraphError> {
    let invalid = |family: &str, msg: &str| GraphError::InvalidParams {
        family: family.into(),
        msg: msg.into(),
    };
    match *family {
        Family::Complete(n) => {
            if n < 2 {
                return Err(invalid("complete", "need n >= 2"));
            }
            let mut edges = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    edges.push((i, j));
                }
            }
            Graph::from_edges(n, &edges)
        }
        Family::CompleteBipartite(a, b) => {
            if a < 1 || b < 1 {
                return Err(invalid("complete_bipartite", "need a, b >= 1"));
            }
            let mut edges = Vec::new();
            for i in 0..a {
                for j in 0..b {
                    edges.push((i, a + j));
                }
            }
            Graph::from_edges(a + b, &edges)
        }
        Family::Cycle(n) => {
            if n < 3 {
                return Err(invalid("cycle", "need n >= 3"));
            }
            let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
            Graph::from_edges(n, &edges)
        }
        Family::Path(n) => {
            if n < 2 {
                return Err(invalid("path", "need n >= 2"));
            }
            let edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
            Graph::from_edges(n, &edges)
        }
        Family::RandomConnected { n, m, seed } => random_connected(n, m, seed),
    }
}

/// Uniform random labeled tree (via a random Prüfer sequence) plus
/// uniformly chosen extra edges until `m` edges total.
pub fn random_connected(n: usize, m: usize, seed: u64) -> Result<Graph, GraphError> {
    if n < 2 {
        return Err(GraphError::InvalidParams {
            family: "random_connected".into(),
            msg: "need n >= 2".into(),
        });
    }
    let max_m = n * (n - 1) / 2;
    if m < n - 1 || m > max_m {
        return Err(GraphError::InvalidParams {
            family: "random_connected".into(),
            msg: format!("need n-1 <= m <= n(n-1)/2, got m = {}", m),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = prufer_tree(n, &mut rng);
    let tree: HashSet<(usize, usize)> = edges.iter().copied().collect();
    let mut non_tree: Vec<(usize, usize)> = Vec::with_capacity(max_m - (n - 1));
    for i in 0..n {
        for j in i + 1..n {
            if !tree.contains(&(i, j)) {
                non_tree.push((i, j));
            }
        }
    }
    let extra = m - (n - 1);
    let picks = rand::seq::index::sample(&mut rng, non_tree.len(), extra);
    for k in picks.iter() {
        edges.push(non_tree[k]);
    }
    Graph::from_edges(n, &edges)
}

fn prufer_tree(n: usize, rng: &mut ChaCha8Rng) -> Vec<(usize, usize)> {
    if n == 2 {
        return vec![(0, 1)];
    }
    let seq: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
    let mut degree = vec![1usize; n];
    for &s in &seq {
        degree[s] += 1;
    }
    let mut leaves: std::collections::BTreeSet<usize> =
        (0..n).filter(|&v| degree[v] == 1).collect();
    let mut edges = Vec::with_capacity(n - 1);
    for &s in &seq {
        let leaf = *leaves.iter().next().unwrap();
        leaves.remove(&leaf);
        edges.push((leaf.min(s), leaf.max(s)));
        degree[s] -= 1;
        if degree[s] == 1 {
            leaves.insert(s);
        }
    }
    let mut last = leaves.into_iter();
    let (a, b) = (last.next().unwrap(), last.next().unwrap());
    edges.push((a.min(b), a.max(b)));
    edges
}

/// Streams every connected simple graph on `n` labeled vertices. With
/// `dedup`, only the canonical representative of each isomorphism class is
/// yielded (minimum adjacency bit-string over all vertex permutations).
pub fn enumerate_connected(n: usize, dedup: bool) -> Result<ConnectedGraphs, GraphError> {
    enumerate_connected_with_limit(n, dedup, DEFAULT_ENUM_LIMIT)
}

pub fn enumerate_connected_with_limit(
    n: usize,
    dedup: bool,
    limit: usize,
) -> Result<ConnectedGraphs, GraphError> {
    if n > limit {
        return Err(GraphError::EnumerationLimit { n, limit });
    }
    if n < 2 {
        return Err(GraphError::InvalidParams {
            family: "enumerate_connected".into(),
            msg: "need n >= 2".into(),
        });
    }
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let perms = permutations(n);
    let mut pair_index = vec![vec![0usize; n]; n];
    for (k, &(i, j)) in pairs.iter().enumerate() {
        pair_index[i][j] = k;
        pair_index[j][i] = k;
    }
    Ok(ConnectedGraphs {
        n,
        dedup,
        pairs,
        perms,
        pair_index,
        mask: 0,
        end: 1u64 << (n * (n - 1) / 2),
    })
}

pub struct ConnectedGraphs {
    n: usize,
    dedup: bool,
    pairs: Vec<(usize, usize)>,
    perms: Vec<Vec<usize>>,
    pair_index: Vec<Vec<usize>>,
    mask: u64,
    end: u64,
}

impl ConnectedGraphs {
    fn mask_connected(&self, mask: u64) -> bool {
        let mut adj = vec![0u64; self.n];
        for (k, &(i, j)) in self.pairs.iter().enumerate() {
            if mask >> k & 1 == 1 {
                adj[i] |= 1 << j;
                adj[j] |= 1 << i;
            }
        }
        let mut reached: u64 = 1;
        loop {
            let mut next = reached;
            let mut bits = reached;
            while bits != 0 {
                let v = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                next |= adj[v];
            }
            if next == reached {
                break;
            }
            reached = next;
        }
        reached.count_ones() as usize == self.n
    }

    fn canonical(&self, mask: u64) -> u64 {
        let mut best = u64::MAX;
        for perm in &self.perms {
            let mut out = 0u64;
            for (k, &(i, j)) in self.pairs.iter().enumerate() {
                if mask >> k & 1 == 1 {
                    out |= 1 << self.pair_index[perm[i]][perm[j]];
                }
            }
            best = best.min(out);
        }
        best
    }
}

impl Iterator for ConnectedGraphs {
    type Item = Graph;

    fn next(&mut self) -> Option<Graph> {
        while self.mask < self.end {
            let mask = self.mask;
            self.mask += 1;
            if !self.mask_connected(mask) {
                continue;
            }
            if self.dedup && self.canonical(mask) != mask {
                continue;
            }
            let edges: Vec<(usize, usize)> = self
                .pairs
                .iter()
                .enumerate()
                .filter(|(k, _)| mask >> k & 1 == 1)
                .map(|(_, &e)| e)
                .collect();
            return Some(Graph::from_edges(self.n, &edges).expect("enumerated graph is valid"));
        }
        None
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut items: Vec<usize> = (0..n).collect();
    heap_permute(&mut items, n, &mut out);
    out
}

fn heap_permute(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k <= 1 {
        out.push(items.clone());
        return;
    }
    for i in 0..k {
        heap_permute(items, k - 1, out);
        if k % 2 == 0 {
            items.swap(i, k - 1);
        } else {
            items.swap(0, k - 1);
        }
    }
}
