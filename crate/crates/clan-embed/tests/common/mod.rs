#![allow(dead_code)]

use clan_embed::rng::stream;
use clan_embed::{MetricSpace, WeightedGraph};
use rand::Rng;

pub fn path(n: usize) -> WeightedGraph<f64> {
    WeightedGraph::new(n, (0..n.saturating_sub(1)).map(|i| (i, i + 1, 1.0)).collect()).unwrap()
}

pub fn cycle(n: usize) -> WeightedGraph<f64> {
    WeightedGraph::new(n, (0..n).map(|i| (i, (i + 1) % n, 1.0)).collect()).unwrap()
}

pub fn grid(a: usize) -> WeightedGraph<f64> {
    let mut e = Vec::new();
    for i in 0..a {
        for j in 0..a {
            let v = i * a + j;
            if j + 1 < a {
                e.push((v, v + 1, 1.0));
            }
            if i + 1 < a {
                e.push((v, v + a, 1.0));
            }
        }
    }
    WeightedGraph::new(a * a, e).unwrap()
}

/// Random spanning tree plus about n extra edges, integer weights in [1, wmax].
pub fn random_graph(n: usize, wmax: u32, seed: u64) -> WeightedGraph<f64> {
    let mut rng = stream(seed, 1 << 20);
    let mut e: Vec<(usize, usize, f64)> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for v in 1..n {
        let u = rng.random_range(0..v);
        seen.insert((u, v));
        e.push((u, v, rng.random_range(1..=wmax) as f64));
    }
    for _ in 0..n {
        let a = rng.random_range(0..n);
        let b = rng.random_range(0..n);
        let (u, v) = (a.min(b), a.max(b));
        if u != v && seen.insert((u, v)) {
            e.push((u, v, rng.random_range(1..=wmax) as f64));
        }
    }
    WeightedGraph::new(n, e).unwrap()
}

/// Shortest-path metric of a random integer-weight graph: integer distances.
pub fn random_metric(n: usize, seed: u64) -> MetricSpace<f64> {
    MetricSpace::from_graph(&random_graph(n, 9, seed))
}

pub fn random_ge1(n: usize, seed: u64) -> clan_embed::Measure<f64> {
    let mut rng = stream(seed, 1 << 21);
    clan_embed::Measure::ge1((0..n).map(|_| rng.random_range(1..=8) as f64).collect()).unwrap()
}

/// Petal membership computed directly from the cone-ball definition on G[Y].
pub struct PetalOracle {
    members: Vec<usize>,
    mask: Vec<bool>,
    from_x0: Vec<f64>,
    /// (p, d(p, t), distances from p) for every p on the x0 → t path
    path: Vec<(usize, f64, Vec<f64>)>,
}

impl PetalOracle {
    pub fn new(g: &WeightedGraph<f64>, members: &[usize], x0: usize, t: usize) -> Self {
        let mut mask = vec![false; g.n()];
        for &v in members {
            mask[v] = true;
        }
        let sp = g.dijkstra(x0, Some(&mask), None);
        let path = sp
            .path_to(t)
            .unwrap()
            .into_iter()
            .map(|p| {
                let d = g.dijkstra(p, Some(&mask), None).dist;
                (p, d[t], d)
            })
            .collect();
        PetalOracle { members: members.to_vec(), mask, from_x0: sp.dist, path }
    }

    pub fn contains(&self, u: usize, r: f64) -> bool {
        let slack = 1e-9 * r.abs().max(1.0);
        self.path.iter().any(|&(p, to_t, ref d)| {
            let cone = self.from_x0[p] + d[u] - self.from_x0[u];
            to_t <= r + slack && 2.0 * cone <= r - to_t + slack
        })
    }

    pub fn petal(&self, r: f64) -> Vec<usize> {
        self.members.iter().copied().filter(|&u| self.contains(u, r)).collect()
    }

    /// Radii where the petal can change: d(p,t) + 2·cone_p(u) over p, u.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut out: Vec<f64> = Vec::new();
        for (p, to_t, d) in &self.path {
            for &u in &self.members {
                out.push(to_t + 2.0 * (self.from_x0[*p] + d[u] - self.from_x0[u]));
            }
        }
        out.sort_by(f64::total_cmp);
        out.dedup();
        out
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }
}

/// Counts (y, l, r) triples where a ball of G[Y] around y ∈ W_r escapes W_{r+4l}.
pub fn ball_containment_violations(g: &WeightedGraph<f64>, oracle: &PetalOracle, grid: &[f64]) -> usize {
    let members = oracle.members.clone();
    let mut bad = 0;
    let breaks = oracle.breakpoints();
    for &y in &members {
        let dy = g.dijkstra(y, Some(oracle.mask()), None).dist;
        for &r in breaks.iter().filter(|&&r| oracle.contains(y, r)) {
            for &l in grid {
                let escaped = members.iter().any(|&u| dy[u] <= l && !oracle.contains(u, r + 4.0 * l));
                bad += usize::from(escaped);
            }
        }
    }
    bad
}
