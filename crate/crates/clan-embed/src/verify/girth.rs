use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::metric::Extent;
use crate::scalar::Scalar;

/// Length of the shortest cycle of an unweighted graph; infinite for forests.
pub fn girth<T: Scalar>(g: &WeightedGraph<T>) -> Result<Extent<usize>> {
    if !g.is_unit_weight() {
        return Err(Error::invalid("girth is defined for unweighted graphs only"));
    }
    let adj: Vec<Vec<usize>> = (0..g.n()).map(|v| g.neighbors(v).iter().map(|e| e.0).collect()).collect();
    Ok(match shortest_cycle(&adj) {
        Some((len, _)) => Extent::Finite(len),
        None => Extent::Infinite,
    })
}

/// Shortest cycle length together with one of its edges, by breadth-first
/// search from every vertex, cut off once no shorter cycle can appear.
pub(crate) fn shortest_cycle(adj: &[Vec<usize>]) -> Option<(usize, (usize, usize))> {
    let n = adj.len();
    let mut best: Option<(usize, (usize, usize))> = None;
    let mut dist = vec![usize::MAX; n];
    let mut parent = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    for s in 0..n {
        dist.fill(usize::MAX);
        dist[s] = 0;
        parent[s] = usize::MAX;
        queue.clear();
        queue.push_back(s);
        'bfs: while let Some(u) = queue.pop_front() {
            if let Some((b, _)) = best {
                if 2 * dist[u] + 1 >= b {
                    break 'bfs;
                }
            }
            for &v in &adj[u] {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    parent[v] = u;
                    queue.push_back(v);
                } else if parent[u] != v {
                    let len = dist[u] + dist[v] + 1;
                    if best.is_none_or(|(b, _)| len < b) {
                        best = Some((len, (u.min(v), u.max(v))));
                    }
                }
            }
        }
    }
    best
}
