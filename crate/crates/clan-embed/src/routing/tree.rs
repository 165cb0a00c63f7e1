use crate::host::SpanningTree;
use crate::scalar::Scalar;

/// Heavy-path DFS layout of a tree rooted at copy 0: heavy child first, so
/// every heavy path occupies a contiguous DFS range.
#[derive(Debug, Clone)]
pub(crate) struct Layout<T> {
    pub parent: Vec<Option<usize>>,
    pub heavy: Vec<Option<usize>>,
    /// DFS preorder index
    pub dfs: Vec<usize>,
    /// largest DFS index in the subtree
    pub end: Vec<usize>,
    /// distance from the root
    pub depth: Vec<T>,
    /// topmost copy of the heavy path through each copy
    pub head: Vec<usize>,
}

impl<T: Scalar> Layout<T> {
    pub fn new(t: &SpanningTree<T>) -> Self {
        let c = t.copy_count();
        let mut parent = vec![None; c];
        let mut depth = vec![T::zero(); c];
        let mut order = Vec::with_capacity(c);
        let mut stack = vec![0usize];
        let mut seen = vec![false; c];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            order.push(v);
            for &(u, w) in t.neighbors(v) {
                if !seen[u] {
                    seen[u] = true;
                    parent[u] = Some(v);
                    depth[u] = depth[v] + w;
                    stack.push(u);
                }
            }
        }
        let mut size = vec![1usize; c];
        let mut heavy: Vec<Option<usize>> = vec![None; c];
        for &v in order.iter().rev() {
            if let Some(p) = parent[v] {
                size[p] += size[v];
            }
        }
        for (v, slot) in heavy.iter_mut().enumerate() {
            // largest subtree, ties to the smaller copy id
            *slot =
                t.neighbors(v).iter().map(|&(u, _)| u).filter(|&u| parent[u] == Some(v)).fold(None, |best: Option<usize>, u| {
                    match best {
                        Some(b) if size[b] >= size[u] => Some(b),
                        _ => Some(u),
                    }
                });
        }
        let mut dfs = vec![0; c];
        let mut end = vec![0; c];
        let mut head = vec![0; c];
        let mut next = 0;
        // explicit stack of (copy, entered)
        let mut stack = vec![(0usize, false)];
        while let Some((v, entered)) = stack.pop() {
            if entered {
                end[v] = next - 1;
                continue;
            }
            dfs[v] = next;
            next += 1;
            head[v] = match parent[v] {
                Some(p) if heavy[p] == Some(v) => head[p],
                _ => v,
            };
            stack.push((v, true));
            let mut light: Vec<usize> =
                t.neighbors(v).iter().map(|&(u, _)| u).filter(|&u| parent[u] == Some(v) && heavy[v] != Some(u)).collect();
            light.reverse();
            for u in light {
                stack.push((u, false));
            }
            if let Some(h) = heavy[v] {
                stack.push((h, false));
            }
        }
        Layout { parent, heavy, dfs, end, depth, head }
    }

    /// Copies where the root path of `v` leaves each heavy path, root first;
    /// the last is `v` itself.
    pub fn exits(&self, v: usize) -> Vec<usize> {
        let mut out = vec![v];
        let mut cur = self.head[v];
        while let Some(p) = self.parent[cur] {
            out.push(p);
            cur = self.head[p];
        }
        out.reverse();
        out
    }
}

/// Per-copy table: own DFS index, subtree end, parent port, heavy child
/// port, heavy child subtree end.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RoutingTable {
    pub dfs: usize,
    pub end: usize,
    pub parent: Option<usize>,
    pub heavy: Option<usize>,
    pub heavy_end: usize,
}

impl RoutingTable {
    pub const WORDS: usize = 5;
}

/// Destination label: DFS index plus (parent DFS index, child port) for each
/// light edge on the root path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoutingLabel {
    pub dfs: usize,
    pub light: Vec<(usize, usize)>,
}

impl RoutingLabel {
    pub fn words(&self) -> usize {
        1 + 2 * self.light.len()
    }
}

/// Interval routing on a spanning tree: exact next hops from constant-size
/// tables and logarithmic labels.
#[derive(Debug, Clone)]
pub struct TreeRoutingState {
    pub tables: Vec<RoutingTable>,
    pub labels: Vec<RoutingLabel>,
}

impl TreeRoutingState {
    pub fn table_words(&self) -> usize {
        RoutingTable::WORDS
    }

    /// Next copy toward the label's copy, or None on arrival.
    pub fn next_hop(&self, at: usize, dest: &RoutingLabel) -> Option<usize> {
        let t = &self.tables[at];
        if dest.dfs == t.dfs {
            return None;
        }
        if dest.dfs < t.dfs || dest.dfs > t.end {
            return t.parent;
        }
        if let Some(h) = t.heavy {
            if dest.dfs <= t.heavy_end {
                return Some(h);
            }
        }
        dest.light.iter().find(|&&(p, _)| p == t.dfs).map(|&(_, port)| port)
    }
}

pub fn build_tree_routing<T: Scalar>(t: &SpanningTree<T>) -> TreeRoutingState {
    let lay = Layout::new(t);
    let c = t.copy_count();
    let tables = (0..c)
        .map(|v| RoutingTable {
            dfs: lay.dfs[v],
            end: lay.end[v],
            parent: lay.parent[v],
            heavy: lay.heavy[v],
            heavy_end: lay.heavy[v].map_or(lay.dfs[v], |h| lay.end[h]),
        })
        .collect();
    let labels = (0..c)
        .map(|v| {
            let mut light = Vec::new();
            let mut cur = v;
            while let Some(p) = lay.parent[cur] {
                if lay.heavy[p] != Some(cur) {
                    light.push((lay.dfs[p], cur));
                }
                cur = p;
            }
            light.reverse();
            RoutingLabel { dfs: lay.dfs[v], light }
        })
        .collect();
    TreeRoutingState { tables, labels }
}
