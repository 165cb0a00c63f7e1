use rand::Rng;

use super::girth::{girth, shortest_cycle};
use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::metric::Extent;
use crate::rng::stream;
use crate::scalar::Scalar;

pub const MAX_ATTEMPTS: u64 = 64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GirthKind {
    /// random sparse graph with 2n edges and girth ≥ (1/3)log₂ n
    Dense,
    /// dense instance with every edge subdivided into a path of δ+1 edges
    Epsilon,
}

#[derive(Debug, Clone)]
pub struct GirthInstance<T> {
    pub graph: WeightedGraph<T>,
    /// vertex count of the dense base graph
    pub base_n: usize,
    /// interior vertices per subdivided edge
    pub delta: usize,
    pub girth: Extent<usize>,
    /// girth the dense base graph is required to reach
    pub base_target: f64,
    /// number of attempts used, starting at 1
    pub attempts: u64,
}

/// Random graph with large girth. For the epsilon kind `n` is the desired
/// total vertex count and `eps` fixes δ = round((1−ε)/(2ε)).
pub fn gen_girth_instance<T: Scalar>(kind: GirthKind, n: usize, eps: f64, seed: u64) -> Result<GirthInstance<T>> {
    match kind {
        GirthKind::Dense => dense(n, seed),
        GirthKind::Epsilon => {
            if !(eps > 0.0 && eps <= 1.0) {
                return Err(Error::invalid("eps must lie in (0,1]"));
            }
            let delta = ((1.0 - eps) / (2.0 * eps)).round().max(0.0) as usize;
            let base_n = (n as f64 / (1 + 2 * delta) as f64).round() as usize;
            let base = dense::<T>(base_n, seed)?;
            let graph = subdivide(&base.graph, delta)?;
            let girth = girth(&graph)?;
            Ok(GirthInstance { graph, base_n, delta, girth, ..base })
        }
    }
}

struct Attempt {
    edges_after_pruning: usize,
    connected: bool,
}

fn dense<T: Scalar>(n: usize, seed: u64) -> Result<GirthInstance<T>> {
    if n < 2 {
        return Err(Error::invalid("dense girth instance needs n ≥ 2"));
    }
    let target = (n as f64).log2() / 3.0;
    let p = (8.0 / (n - 1) as f64).min(1.0);
    let mut best: Option<Attempt> = None;
    for attempt in 0..MAX_ATTEMPTS {
        let mut rng = stream(seed, attempt);
        let mut adj = vec![Vec::new(); n];
        for u in 0..n {
            for v in u + 1..n {
                if rng.random::<f64>() < p {
                    adj[u].push(v);
                    adj[v].push(u);
                }
            }
        }
        let connected = is_connected(&adj);
        let mut m: usize = adj.iter().map(Vec::len).sum::<usize>() / 2;
        if connected {
            // removing a cycle edge never disconnects the graph
            while let Some((len, (u, v))) = shortest_cycle(&adj) {
                if len as f64 >= target {
                    break;
                }
                remove(&mut adj, u, v);
                m -= 1;
            }
        }
        let record = Attempt { edges_after_pruning: m, connected };
        if !connected || m < 2 * n {
            if best.as_ref().is_none_or(|b| (record.connected, record.edges_after_pruning) > (b.connected, b.edges_after_pruning))
            {
                best = Some(record);
            }
            continue;
        }
        while m > 2 * n {
            let (_, (u, v)) = shortest_cycle(&adj).expect("a connected graph with more than n−1 edges has a cycle");
            remove(&mut adj, u, v);
            m -= 1;
        }
        let mut edges = Vec::with_capacity(m);
        for (u, list) in adj.iter().enumerate() {
            for &v in list {
                if u < v {
                    edges.push((u, v, T::one()));
                }
            }
        }
        let graph = WeightedGraph::new(n, edges)?;
        let g = girth(&graph)?;
        if let Extent::Finite(len) = g {
            if (len as f64) < target {
                return Err(Error::defect(format!("girth generator produced girth {len} below target {target}")));
            }
        }
        return Ok(GirthInstance { graph, base_n: n, delta: 0, girth: g, base_target: target, attempts: attempt + 1 });
    }
    let b = best.expect("at least one attempt");
    Err(Error::invalid(format!(
        "girth generator exhausted {MAX_ATTEMPTS} attempts for n={n}; best attempt: connected={}, edges after pruning={} (need {})",
        b.connected,
        b.edges_after_pruning,
        2 * n
    )))
}

fn remove(adj: &mut [Vec<usize>], u: usize, v: usize) {
    adj[u].retain(|&x| x != v);
    adj[v].retain(|&x| x != u);
}

fn is_connected(adj: &[Vec<usize>]) -> bool {
    let mut seen = vec![false; adj.len()];
    let mut stack = vec![0];
    seen[0] = true;
    let mut count = 1;
    while let Some(v) = stack.pop() {
        for &u in &adj[v] {
            if !seen[u] {
                seen[u] = true;
                count += 1;
                stack.push(u);
            }
        }
    }
    count == adj.len()
}

/// Replaces every edge by a path with `delta` new interior vertices.
pub fn subdivide<T: Scalar>(g: &WeightedGraph<T>, delta: usize) -> Result<WeightedGraph<T>> {
    let mut next = g.n();
    let mut edges = Vec::with_capacity(g.m() * (delta + 1));
    for e in g.edges() {
        let mut prev = e.u;
        for _ in 0..delta {
            edges.push((prev, next, T::one()));
            prev = next;
            next += 1;
        }
        edges.push((prev, e.v, T::one()));
    }
    WeightedGraph::new(next, edges)
}
