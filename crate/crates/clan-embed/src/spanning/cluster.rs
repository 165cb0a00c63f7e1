use crate::error::{Error, Result};
use crate::graph::{mask, ShortestPaths, WeightedGraph};
use crate::metric::Extent;
use crate::scalar::Scalar;

/// A cluster being decomposed: vertex set Y with center x0, target t, radius
/// budget Δ and its own edge-weight overlay.
#[derive(Debug, Clone)]
pub struct ClusterState<'g, T> {
    g: &'g WeightedGraph<T>,
    vertices: Vec<usize>,
    member: Vec<bool>,
    pub center: usize,
    pub target: usize,
    pub delta: T,
    weights: Vec<T>,
    halved: Vec<bool>,
}

impl<'g, T: Scalar> ClusterState<'g, T> {
    /// Cluster on `vertices` under the original weights.
    pub fn new(g: &'g WeightedGraph<T>, vertices: Vec<usize>, center: usize, target: usize, delta: T) -> Result<Self> {
        let weights = g.weights();
        let halved = vec![false; g.m()];
        Self::with_overlay(g, vertices, center, target, delta, weights, halved)
    }

    /// Cluster on the whole graph, centered at `x0`, with target x0 and
    /// Δ = Δ_{x0}(V).
    pub fn root(g: &'g WeightedGraph<T>, x0: usize) -> Result<Self> {
        if x0 >= g.n() {
            return Err(Error::invalid(format!("root {x0} out of range")));
        }
        let delta = g.dijkstra(x0, None, None).dist.iter().copied().fold(T::zero(), T::max);
        Self::new(g, (0..g.n()).collect(), x0, x0, delta)
    }

    pub(crate) fn with_overlay(
        g: &'g WeightedGraph<T>,
        mut vertices: Vec<usize>,
        center: usize,
        target: usize,
        delta: T,
        weights: Vec<T>,
        halved: Vec<bool>,
    ) -> Result<Self> {
        vertices.sort_unstable();
        vertices.dedup();
        if vertices.last().is_some_and(|&v| v >= g.n()) {
            return Err(Error::invalid("cluster vertex out of range"));
        }
        let member = mask(g.n(), &vertices);
        if !member[center] || !member[target] {
            return Err(Error::invalid("cluster must contain its center and target"));
        }
        let s = ClusterState { g, vertices, member, center, target, delta, weights, halved };
        let radius = s.radius_from(center);
        match radius {
            Extent::Infinite => return Err(Error::invalid("cluster induces a disconnected subgraph")),
            Extent::Finite(r) if r > delta => {
                return Err(Error::invalid(format!("radius budget {delta} below cluster radius {r}")))
            }
            _ => {}
        }
        Ok(s)
    }

    pub fn graph(&self) -> &'g WeightedGraph<T> {
        self.g
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn contains(&self, v: usize) -> bool {
        self.member.get(v).copied().unwrap_or(false)
    }

    /// Current overlay weight of every edge (by edge id).
    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn halved(&self) -> &[bool] {
        &self.halved
    }

    /// Shortest paths inside G[Y] under the overlay.
    pub fn paths_from(&self, s: usize) -> ShortestPaths<T> {
        self.g.dijkstra(s, Some(&self.member), Some(&self.weights))
    }

    /// Δ_s(Y): max induced distance from s.
    pub fn radius_from(&self, s: usize) -> Extent<T> {
        let sp = self.paths_from(s);
        let r = self.vertices.iter().map(|&v| sp.dist[v]).fold(T::zero(), T::max);
        if r.is_finite() {
            Extent::Finite(r)
        } else {
            Extent::Infinite
        }
    }

    /// Same center and overlay on a subset of the vertices.
    pub(crate) fn restrict(&self, vertices: Vec<usize>, target: usize) -> Result<Self> {
        Self::with_overlay(self.g, vertices, self.center, target, self.delta, self.weights.clone(), self.halved.clone())
    }

    pub(crate) fn require(&self, vs: &[usize]) -> Result<()> {
        match vs.iter().find(|&&v| !self.contains(v)) {
            Some(v) => Err(Error::invalid(format!("vertex {v} outside cluster"))),
            None => Ok(()),
        }
    }

    /// New cluster on `vertices` centered at `center`, with the edges of the
    /// center-to-target shortest path halved (each edge at most once).
    pub(crate) fn child(&self, vertices: Vec<usize>, center: usize, target: usize) -> Result<Self> {
        let mut weights = self.weights.clone();
        let mut halved = self.halved.clone();
        let allowed = mask(self.g.n(), &vertices);
        let sp = self.g.dijkstra(center, Some(&allowed), Some(&self.weights));
        let path = sp.path_to(target).ok_or_else(|| Error::defect("petal target unreachable from its center"))?;
        for w in path.windows(2) {
            let id = self.g.edge_between(w[0], w[1]).expect("path edge");
            if !halved[id] {
                halved[id] = true;
                weights[id] = weights[id] / (T::one() + T::one());
            }
        }
        let probe = ClusterState {
            g: self.g,
            vertices: vertices.clone(),
            member: allowed,
            center,
            target,
            delta: T::zero(),
            weights: weights.clone(),
            halved: halved.clone(),
        };
        let delta = probe.radius_from(center).finite().ok_or_else(|| Error::defect("petal induces a disconnected subgraph"))?;
        Self::with_overlay(self.g, vertices, center, target, delta, weights, halved)
    }
}

/// ρ(u,v) = |(d(x,u) − d(y,u)) − (d(x,v) − d(y,v))| with distances in G[Y].
pub fn cone_distance<T: Scalar>(state: &ClusterState<'_, T>, x: usize, y: usize, u: usize, v: usize) -> Result<T> {
    state.require(&[x, y, u, v])?;
    let dx = state.paths_from(x).dist;
    let dy = state.paths_from(y).dist;
    Ok(((dx[u] - dy[u]) - (dx[v] - dy[v])).abs())
}

/// Path P_{x0,t} of a cluster with the entry value of every member:
/// u ∈ W_r exactly when entry[u] ≤ r.
#[derive(Debug, Clone)]
pub(crate) struct PetalGeometry<T> {
    pub path: Vec<usize>,
    /// indexed by vertex id; infinite outside the cluster
    pub entry: Vec<T>,
}

impl<T: Scalar> PetalGeometry<T> {
    pub fn new(state: &ClusterState<'_, T>) -> Result<Self> {
        let from_x0 = state.paths_from(state.center);
        let path = from_x0.path_to(state.target).ok_or_else(|| Error::invalid("target unreachable from center"))?;
        let mut entry = vec![T::infinity(); state.g.n()];
        let two = T::one() + T::one();
        for &p in &path {
            let from_p = state.paths_from(p);
            let to_t = from_p.dist[state.target];
            for &u in &state.vertices {
                // p's cone ball of radius (r − d(p,t))/2 contains u iff d(p,t) + 2ρ_p(p,u) ≤ r
                let cone = from_x0.dist[p] + from_p.dist[u] - from_x0.dist[u];
                let e = to_t + two * cone;
                if e < entry[u] {
                    entry[u] = e;
                }
            }
        }
        Ok(PetalGeometry { path, entry })
    }

    pub fn petal(&self, vertices: &[usize], r: T) -> Vec<usize> {
        vertices.iter().copied().filter(|&u| self.entry[u] <= r).collect()
    }
}

/// W_r(Y, x0, t): union over path points p with d(p,t) ≤ r of cone balls
/// around p of radius (r − d(p,t))/2.
pub fn petal<T: Scalar>(state: &ClusterState<'_, T>, r: T) -> Result<Vec<usize>> {
    if r < T::zero() {
        return Err(Error::invalid("petal radius must be nonnegative"));
    }
    let geo = PetalGeometry::new(state)?;
    Ok(geo.petal(&state.vertices, r))
}
