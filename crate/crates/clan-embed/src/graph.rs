use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::scalar::{to_f64, Scalar};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge<T> {
    pub u: usize,
    pub v: usize,
    pub w: T,
}

/// Connected undirected graph with positive edge lengths.
#[derive(Debug, Clone)]
pub struct WeightedGraph<T> {
    n: usize,
    edges: Vec<Edge<T>>,
    /// (neighbor, edge id), sorted by neighbor
    adj: Vec<Vec<(usize, usize)>>,
    index: HashMap<(usize, usize), usize>,
}

/// Result of a single-source search.
#[derive(Debug, Clone)]
pub struct ShortestPaths<T> {
    pub source: usize,
    /// infinite for vertices outside the search domain or unreachable
    pub dist: Vec<T>,
    pub pred: Vec<Option<usize>>,
}

impl<T: Scalar> ShortestPaths<T> {
    pub fn reached(&self, v: usize) -> bool {
        self.dist[v].is_finite()
    }

    /// Vertex sequence from the source to `target`, or None if unreachable.
    pub fn path_to(&self, target: usize) -> Option<Vec<usize>> {
        if !self.reached(target) {
            return None;
        }
        let mut path = vec![target];
        let mut cur = target;
        while let Some(p) = self.pred[cur] {
            path.push(p);
            cur = p;
        }
        path.reverse();
        Some(path)
    }
}

fn key(u: usize, v: usize) -> (usize, usize) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

impl<T: Scalar> WeightedGraph<T> {
    /// Validates and builds a graph. Fails on self-loops, duplicate edges,
    /// nonpositive or non-finite weights, out-of-range ids, or disconnection.
    pub fn new(n: usize, edge_list: Vec<(usize, usize, T)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("graph has no vertices"));
        }
        let mut adj = vec![Vec::new(); n];
        let mut index = HashMap::with_capacity(edge_list.len());
        let mut edges = Vec::with_capacity(edge_list.len());
        for (u, v, w) in edge_list {
            if u >= n || v >= n {
                return Err(Error::invalid(format!("edge ({u},{v}) out of range for n={n}")));
            }
            if u == v {
                return Err(Error::invalid(format!("self-loop at vertex {u}")));
            }
            if !(w.is_finite() && w > T::zero()) {
                return Err(Error::invalid(format!("edge ({u},{v}) has nonpositive or non-finite weight {w}")));
            }
            let id = edges.len();
            if index.insert(key(u, v), id).is_some() {
                return Err(Error::invalid(format!("duplicate edge ({u},{v})")));
            }
            edges.push(Edge { u, v, w });
            adj[u].push((v, id));
            adj[v].push((u, id));
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        let g = WeightedGraph { n, edges, adj, index };
        if !g.is_connected() {
            return Err(Error::invalid("graph is disconnected"));
        }
        Ok(g)
    }

    /// Parses the edge-list text format: a header "n m", then m lines "u v w".
    /// Lines starting with '#' and blank lines are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut header: Option<(usize, usize)> = None;
        let mut edges = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let lineno = i + 1;
            let parse_err = |msg: &str| Error::Parse { line: lineno, msg: format!("{msg}: {line:?}") };
            let fields: Vec<&str> = line.split_whitespace().collect();
            match header {
                None => {
                    if fields.len() != 2 {
                        return Err(parse_err("expected header \"n m\""));
                    }
                    let n = fields[0].parse().map_err(|_| parse_err("bad vertex count"))?;
                    let m = fields[1].parse().map_err(|_| parse_err("bad edge count"))?;
                    header = Some((n, m));
                }
                Some(_) => {
                    if fields.len() != 3 {
                        return Err(parse_err("expected \"u v w\""));
                    }
                    let u: usize = fields[0].parse().map_err(|_| parse_err("bad vertex id"))?;
                    let v: usize = fields[1].parse().map_err(|_| parse_err("bad vertex id"))?;
                    let w: f64 = fields[2].parse().map_err(|_| parse_err("bad weight"))?;
                    let w = T::from_f64(w).ok_or_else(|| parse_err("bad weight"))?;
                    edges.push((u, v, w));
                }
            }
        }
        let (n, m) = header.ok_or(Error::Parse { line: 0, msg: "missing header".into() })?;
        if edges.len() != m {
            return Err(Error::Parse { line: 0, msg: format!("header declares {m} edges, found {}", edges.len()) });
        }
        Self::new(n, edges)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        if !path.exists() {
            return Err(Error::NotFound(path.display().to_string()));
        }
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.edges.len());
        for e in &self.edges {
            let w = to_f64(e.w);
            if w.fract() == 0.0 && w.abs() < 1e15 {
                let _ = writeln!(out, "{} {} {}", e.u, e.v, w as i64);
            } else {
                let _ = writeln!(out, "{} {} {:.16e}", e.u, e.v, w);
            }
        }
        out
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge<T>] {
        &self.edges
    }

    pub fn edge(&self, id: usize) -> Edge<T> {
        self.edges[id]
    }

    /// (neighbor, edge id) pairs sorted by neighbor id.
    pub fn neighbors(&self, v: usize) -> &[(usize, usize)] {
        &self.adj[v]
    }

    pub fn edge_between(&self, u: usize, v: usize) -> Option<usize> {
        self.index.get(&key(u, v)).copied()
    }

    pub fn weight(&self, u: usize, v: usize) -> Option<T> {
        self.edge_between(u, v).map(|id| self.edges[id].w)
    }

    /// Original edge weights indexed by edge id.
    pub fn weights(&self) -> Vec<T> {
        self.edges.iter().map(|e| e.w).collect()
    }

    pub fn is_unit_weight(&self) -> bool {
        self.edges.iter().all(|e| e.w == T::one())
    }

    fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &(u, _) in &self.adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    count += 1;
                    stack.push(u);
                }
            }
        }
        count == self.n
    }

    /// Dijkstra from `source` restricted to vertices with `allowed[v]`, using
    /// `weights` (indexed by edge id) in place of the original lengths.
    /// Equal-length relaxations keep the smaller predecessor id.
    pub fn dijkstra(&self, source: usize, allowed: Option<&[bool]>, weights: Option<&[T]>) -> ShortestPaths<T> {
        let inf = T::infinity();
        let mut dist = vec![inf; self.n];
        let mut pred: Vec<Option<usize>> = vec![None; self.n];
        let mut done = vec![false; self.n];
        let ok = |v: usize| allowed.is_none_or(|a| a[v]);
        if !ok(source) {
            return ShortestPaths { source, dist, pred };
        }
        dist[source] = T::zero();
        let mut heap = BinaryHeap::new();
        heap.push(Reverse((Key(dist[source]), source)));
        while let Some(Reverse((Key(d), v))) = heap.pop() {
            if done[v] || d > dist[v] {
                continue;
            }
            done[v] = true;
            for &(u, id) in &self.adj[v] {
                if !ok(u) || done[u] {
                    continue;
                }
                let w = weights.map_or(self.edges[id].w, |ws| ws[id]);
                let nd = d + w;
                if nd < dist[u] {
                    dist[u] = nd;
                    pred[u] = Some(v);
                    heap.push(Reverse((Key(nd), u)));
                } else if nd == dist[u] && pred[u].is_some_and(|p| v < p) {
                    pred[u] = Some(v);
                }
            }
        }
        ShortestPaths { source, dist, pred }
    }
}

/// Membership mask over `n` vertices.
pub fn mask(n: usize, members: &[usize]) -> Vec<bool> {
    let mut m = vec![false; n];
    for &v in members {
        m[v] = true;
    }
    m
}

/// Heap key over finite, non-NaN distances.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Key<T>(T);

impl<T: PartialEq> Eq for Key<T> {}

impl<T: PartialOrd> PartialOrd for Key<T> {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: PartialOrd> Ord for Key<T> {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.partial_cmp(&other.0).expect("distances are never NaN")
    }
}
