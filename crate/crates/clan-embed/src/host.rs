use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::measure::Measure;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct UltraNode<T> {
    pub label: T,
    pub parent: Option<usize>,
    /// original point for leaves, None for internal nodes
    pub owner: Option<usize>,
}

/// Rooted labeled tree whose leaves are copies of metric points; the distance
/// between two leaves is the label of their lowest common ancestor.
#[derive(Debug, Clone, PartialEq)]
pub struct Ultrametric<T> {
    nodes: Vec<UltraNode<T>>,
    depth: Vec<usize>,
    root: usize,
}

impl<T: Scalar> Ultrametric<T> {
    pub fn new(nodes: Vec<UltraNode<T>>) -> Result<Self> {
        let n = nodes.len();
        if n == 0 {
            return Err(Error::invalid("ultrametric has no nodes"));
        }
        let roots: Vec<usize> = (0..n).filter(|&i| nodes[i].parent.is_none()).collect();
        if roots.len() != 1 {
            return Err(Error::invalid(format!("ultrametric has {} roots", roots.len())));
        }
        let mut children = vec![0usize; n];
        for (i, node) in nodes.iter().enumerate() {
            if let Some(p) = node.parent {
                if p >= n || p == i {
                    return Err(Error::invalid(format!("node {i} has invalid parent {p}")));
                }
                children[p] += 1;
            }
            if !(node.label.is_finite() && node.label >= T::zero()) {
                return Err(Error::invalid(format!("node {i} has invalid label")));
            }
        }
        let mut depth = vec![usize::MAX; n];
        depth[roots[0]] = 0;
        for start in 0..n {
            let mut chain = Vec::new();
            let mut cur = start;
            while depth[cur] == usize::MAX {
                chain.push(cur);
                cur = nodes[cur].parent.expect("non-root");
                if chain.len() > n {
                    return Err(Error::invalid("ultrametric parent links contain a cycle"));
                }
            }
            let mut d = depth[cur];
            for &c in chain.iter().rev() {
                d += 1;
                depth[c] = d;
            }
        }
        for (i, node) in nodes.iter().enumerate() {
            let leaf = children[i] == 0;
            if leaf != node.owner.is_some() {
                return Err(Error::invalid(format!("node {i}: exactly the leaves must carry an owner")));
            }
            if leaf != (node.label == T::zero()) {
                return Err(Error::invalid(format!("node {i}: label must be 0 exactly at leaves")));
            }
            if let Some(p) = node.parent {
                if node.label > nodes[p].label {
                    return Err(Error::invalid(format!("node {i}: label exceeds its parent's")));
                }
            }
        }
        Ok(Ultrametric { nodes, depth, root: roots[0] })
    }

    pub fn nodes(&self) -> &[UltraNode<T>] {
        &self.nodes
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn is_leaf(&self, id: usize) -> bool {
        self.nodes.get(id).is_some_and(|n| n.owner.is_some())
    }

    pub fn owner(&self, id: usize) -> Option<usize> {
        self.nodes.get(id).and_then(|n| n.owner)
    }

    pub fn leaves(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.nodes.len()).filter(|&i| self.nodes[i].owner.is_some())
    }

    pub fn lca(&self, mut a: usize, mut b: usize) -> usize {
        while self.depth[a] > self.depth[b] {
            a = self.nodes[a].parent.expect("non-root");
        }
        while self.depth[b] > self.depth[a] {
            b = self.nodes[b].parent.expect("non-root");
        }
        while a != b {
            a = self.nodes[a].parent.expect("non-root");
            b = self.nodes[b].parent.expect("non-root");
        }
        a
    }

    /// Label of the lowest common ancestor of two leaves.
    pub fn distance(&self, a: usize, b: usize) -> Result<T> {
        for c in [a, b] {
            if !self.is_leaf(c) {
                return Err(Error::invalid(format!("unknown copy id {c}")));
            }
        }
        Ok(self.nodes[self.lca(a, b)].label)
    }
}

/// d_U between copies `copy_a` of point `a` and `copy_b` of point `b`.
pub fn ultra_distance<T: Scalar>(u: &Ultrametric<T>, a: usize, b: usize, copy_a: usize, copy_b: usize) -> Result<T> {
    for (p, c) in [(a, copy_a), (b, copy_b)] {
        match u.owner(c) {
            Some(o) if o == p => {}
            Some(o) => return Err(Error::invalid(format!("copy {c} belongs to point {o}, not {p}"))),
            None => return Err(Error::invalid(format!("unknown copy id {c}"))),
        }
    }
    u.distance(copy_a, copy_b)
}

/// Tree whose vertices are copies of graph vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct SpanningTree<T> {
    orig: Vec<usize>,
    edges: Vec<(usize, usize, T)>,
    adj: Vec<Vec<(usize, T)>>,
}

impl<T: Scalar> SpanningTree<T> {
    /// `orig[c]` is the original vertex of copy c. Validates that the edges
    /// form a tree over all copies.
    pub fn new(orig: Vec<usize>, edges: Vec<(usize, usize, T)>) -> Result<Self> {
        let c = orig.len();
        if c == 0 {
            return Err(Error::invalid("tree has no copies"));
        }
        if edges.len() + 1 != c {
            return Err(Error::invalid(format!("tree on {c} copies has {} edges", edges.len())));
        }
        let mut adj = vec![Vec::new(); c];
        for &(a, b, w) in &edges {
            if a >= c || b >= c || a == b {
                return Err(Error::invalid(format!("tree edge ({a},{b}) invalid")));
            }
            if !(w.is_finite() && w > T::zero()) {
                return Err(Error::invalid(format!("tree edge ({a},{b}) has nonpositive length")));
            }
            adj[a].push((b, w));
            adj[b].push((a, w));
        }
        for list in &mut adj {
            list.sort_by_key(|&(v, _)| v);
        }
        let t = SpanningTree { orig, edges, adj };
        let reach = t.distances_from(0).iter().filter(|d| d.is_finite()).count();
        if reach != c {
            return Err(Error::invalid("tree is disconnected"));
        }
        Ok(t)
    }

    pub fn copy_count(&self) -> usize {
        self.orig.len()
    }

    pub fn orig(&self, copy: usize) -> usize {
        self.orig[copy]
    }

    pub fn origs(&self) -> &[usize] {
        &self.orig
    }

    pub fn edges(&self) -> &[(usize, usize, T)] {
        &self.edges
    }

    /// (neighbor copy, length) sorted by neighbor.
    pub fn neighbors(&self, copy: usize) -> &[(usize, T)] {
        &self.adj[copy]
    }

    /// Tree distances from `src` to every copy.
    pub fn distances_from(&self, src: usize) -> Vec<T> {
        let mut dist = vec![T::infinity(); self.orig.len()];
        dist[src] = T::zero();
        let mut stack = vec![src];
        while let Some(v) = stack.pop() {
            for &(u, w) in &self.adj[v] {
                if dist[u].is_infinite() {
                    dist[u] = dist[v] + w;
                    stack.push(u);
                }
            }
        }
        dist
    }

    /// Every tree edge projects to a graph edge of identical weight.
    pub fn check_spanning(&self, g: &WeightedGraph<T>) -> Result<()> {
        if let Some(&o) = self.orig.iter().find(|&&o| o >= g.n()) {
            return Err(Error::invalid(format!("copy of unknown vertex {o}")));
        }
        for &(a, b, w) in &self.edges {
            let (u, v) = (self.orig[a], self.orig[b]);
            match g.weight(u, v) {
                Some(gw) if gw == w => {}
                Some(gw) => {
                    return Err(Error::defect(format!(
                        "spanning condition: tree edge ({a},{b}) has length {w} but graph edge ({u},{v}) has weight {gw}"
                    )))
                }
                None => {
                    return Err(Error::defect(format!("spanning condition: tree edge ({a},{b}) projects to non-edge ({u},{v})")))
                }
            }
        }
        Ok(())
    }
}

/// Per-point copy lists with a designated chief copy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClanEmbedding {
    clans: Vec<Vec<usize>>,
    chief: Vec<usize>,
}

impl ClanEmbedding {
    pub fn new(clans: Vec<Vec<usize>>, chief: Vec<usize>) -> Result<Self> {
        if clans.len() != chief.len() {
            return Err(Error::invalid("clans and chiefs differ in length"));
        }
        let mut seen = std::collections::HashSet::new();
        for (x, clan) in clans.iter().enumerate() {
            if clan.is_empty() {
                return Err(Error::invalid(format!("point {x} has an empty clan")));
            }
            if !clan.contains(&chief[x]) {
                return Err(Error::invalid(format!("chief of point {x} is not in its clan")));
            }
            for &c in clan {
                if !seen.insert(c) {
                    return Err(Error::invalid(format!("copy {c} appears in two clans")));
                }
            }
        }
        Ok(ClanEmbedding { clans, chief })
    }

    pub fn n(&self) -> usize {
        self.clans.len()
    }

    pub fn clan(&self, x: usize) -> &[usize] {
        &self.clans[x]
    }

    pub fn clans(&self) -> &[Vec<usize>] {
        &self.clans
    }

    pub fn chief(&self, x: usize) -> usize {
        self.chief[x]
    }

    pub fn chiefs(&self) -> &[usize] {
        &self.chief
    }

    /// |f(X)|
    pub fn total_copies(&self) -> usize {
        self.clans.iter().map(Vec::len).sum()
    }

    pub fn max_clan(&self) -> usize {
        self.clans.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Σ μ(x)|f(x)|
    pub fn weighted_copies<T: Scalar>(&self, mu: &Measure<T>) -> T {
        self.clans.iter().enumerate().fold(T::zero(), |a, (x, c)| a + mu.get(x) * T::from_usize(c.len()).expect("count"))
    }

    /// Every host leaf has an owner matching the clan it sits in, and the
    /// clans cover exactly the host leaves.
    pub fn check_ultrametric<T: Scalar>(&self, u: &Ultrametric<T>) -> Result<()> {
        let mut covered = 0;
        for (x, clan) in self.clans.iter().enumerate() {
            for &c in clan {
                if u.owner(c) != Some(x) {
                    return Err(Error::invalid(format!("copy {c} in clan of {x} is not a leaf owned by {x}")));
                }
                covered += 1;
            }
        }
        if covered != u.leaves().count() {
            return Err(Error::invalid("some ultrametric leaf belongs to no clan"));
        }
        Ok(())
    }

    pub fn check_tree<T: Scalar>(&self, t: &SpanningTree<T>) -> Result<()> {
        let mut covered = 0;
        for (x, clan) in self.clans.iter().enumerate() {
            for &c in clan {
                if c >= t.copy_count() || t.orig(c) != x {
                    return Err(Error::invalid(format!("copy {c} in clan of {x} is not a copy of {x}")));
                }
                covered += 1;
            }
        }
        if covered != t.copy_count() {
            return Err(Error::invalid("some tree copy belongs to no clan"));
        }
        Ok(())
    }
}
