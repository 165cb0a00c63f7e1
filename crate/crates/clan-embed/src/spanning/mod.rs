//! Spanning clan embeddings of a weighted graph into a tree.

mod cluster;
mod decompose;
mod petal;

pub use cluster::{cone_distance, petal, ClusterState};
pub use decompose::{entry_values, petal_decomposition, Decomposition, Petal};
pub use petal::{create_petal, petal_levels, PetalCase, PetalTriple};

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::host::{ClanEmbedding, SpanningTree};
use crate::measure::{Measure, MeasureKind};
use crate::metric::{Extent, MetricSpace};
use crate::scalar::{from_usize, leq, sc, Scalar};
use crate::ultra::{check_probability_bounds, lift, Mode};
use crate::verify::{verify_clan_distortion, Host, VerifyReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpanParams {
    pub k: usize,
    /// run the brute-force distortion oracle and the per-petal radius check
    pub verify: bool,
}

impl SpanParams {
    pub fn new(k: usize) -> Self {
        SpanParams { k, verify: false }
    }

    pub fn verified(mut self) -> Self {
        self.verify = true;
        self
    }
}

/// 128·k·⌈1 + log₂log₂ μ(V)⌉
pub fn span_distortion_bound<T: Scalar>(k: usize, mu_total: T) -> T {
    from_usize::<T>(128 * k * petal_levels(mu_total))
}

#[derive(Debug, Clone)]
pub struct SpanResult<T> {
    pub tree: SpanningTree<T>,
    pub embedding: ClanEmbedding,
    /// chief copy of the root vertex
    pub root_copy: usize,
    /// max tree distance from the root copy
    pub radius: T,
    /// Δ_{x0}(V)
    pub delta: T,
    pub distortion_bound: T,
    /// present when built with verify
    pub report: Option<VerifyReport<T>>,
}

struct Builder<'a, T> {
    mu: &'a Measure<T>,
    k: usize,
    verify: bool,
    orig: Vec<usize>,
    edges: Vec<(usize, usize, T)>,
    clans: Vec<Vec<usize>>,
}

/// chief copy of every cluster vertex, sorted by vertex
type Chiefs = Vec<(usize, usize)>;

fn lookup(chiefs: &Chiefs, v: usize) -> Option<usize> {
    chiefs.binary_search_by_key(&v, |&(x, _)| x).ok().map(|i| chiefs[i].1)
}

impl<T: Scalar> Builder<'_, T> {
    fn copy(&mut self, v: usize) -> usize {
        let id = self.orig.len();
        self.orig.push(v);
        self.clans[v].push(id);
        id
    }

    fn build(&mut self, state: ClusterState<'_, T>) -> Result<Chiefs> {
        if state.vertices().len() == 1 {
            let c = self.copy(state.center);
            return Ok(vec![(state.center, c)]);
        }
        let g = state.graph();
        let delta = state.delta;
        let dec = petal_decomposition(&state, self.mu, self.k)?;
        if self.verify {
            let cap = sc::<T>(0.75) * delta;
            for (j, p) in dec.petals.iter().enumerate() {
                if !leq(p.child.delta, cap) {
                    return Err(Error::defect(format!(
                        "petal {} radius {} from its center exceeds 3/4 of the budget {delta}",
                        j + 1,
                        p.child.delta
                    )));
                }
            }
        }
        let mut central = dec.central;
        central.delta = match central.radius_from(central.center) {
            Extent::Finite(r) => r,
            Extent::Infinite => return Err(Error::defect("central cluster disconnected")),
        };
        let central_chiefs = self.build(central)?;
        let mut petal_chiefs = Vec::with_capacity(dec.petals.len());
        for p in &dec.petals {
            petal_chiefs.push(self.build(p.child.clone())?);
        }

        // chief inside the structure of Y_j: first later petal whose middle set holds z
        let chief_after = |j: usize, z: usize| -> Option<usize> {
            for (i, p) in dec.petals.iter().enumerate().skip(j) {
                if p.triple.mid.binary_search(&z).is_ok() {
                    return lookup(&petal_chiefs[i], z);
                }
            }
            lookup(&central_chiefs, z)
        };

        for (j, p) in dec.petals.iter().enumerate() {
            let (xj, yj) = p.triple.connector;
            let a = lookup(&petal_chiefs[j], xj).ok_or_else(|| Error::defect("petal center has no copy"))?;
            let b = chief_after(j + 1, yj).ok_or_else(|| Error::defect(format!("connector endpoint {yj} has no copy")))?;
            let w = g.weight(xj, yj).ok_or_else(|| Error::defect("connector is not a graph edge"))?;
            self.edges.push((a, b, w));
        }

        let mut chiefs = Vec::with_capacity(state.vertices().len());
        for &z in state.vertices() {
            let c = chief_after(0, z).ok_or_else(|| Error::defect(format!("vertex {z} received no chief")))?;
            chiefs.push((z, c));
        }
        Ok(chiefs)
    }
}

/// Spanning clan embedding for a ge1 measure with root x0, target x0 and
/// budget Δ_{x0}(V).
pub fn hierarchical_petal_decomposition<T: Scalar>(
    g: &WeightedGraph<T>,
    x0: usize,
    mu: &Measure<T>,
    params: SpanParams,
) -> Result<(SpanningTree<T>, ClanEmbedding)> {
    let r = hierarchical_petal_decomposition_detailed(g, x0, mu, params)?;
    Ok((r.tree, r.embedding))
}

pub fn hierarchical_petal_decomposition_detailed<T: Scalar>(
    g: &WeightedGraph<T>,
    x0: usize,
    mu: &Measure<T>,
    params: SpanParams,
) -> Result<SpanResult<T>> {
    if params.k == 0 {
        return Err(Error::invalid("k must be at least 1"));
    }
    mu.require(MeasureKind::Ge1)?;
    if mu.len() != g.n() {
        return Err(Error::invalid(format!("measure has {} points, graph has {}", mu.len(), g.n())));
    }
    let root = ClusterState::root(g, x0)?;
    let delta = root.delta;
    let mut b =
        Builder { mu, k: params.k, verify: params.verify, orig: Vec::new(), edges: Vec::new(), clans: vec![Vec::new(); g.n()] };
    let chiefs = b.build(root)?;
    let chief: Vec<usize> = chiefs.iter().map(|&(_, c)| c).collect();
    let tree = SpanningTree::new(b.orig, b.edges)?;
    let embedding = ClanEmbedding::new(b.clans, chief)?;
    embedding.check_tree(&tree)?;
    tree.check_spanning(g)?;

    let root_copy = embedding.chief(x0);
    let radius = tree.distances_from(root_copy).into_iter().fold(T::zero(), T::max);
    if !leq(radius, sc::<T>(8.0) * delta) {
        return Err(Error::defect(format!("tree radius {radius} > 8 * Delta = {}", sc::<T>(8.0) * delta)));
    }
    let mu_total = mu.total();
    let cap = mu_total.powf(T::one() + T::one() / from_usize(params.k));
    let weighted = embedding.weighted_copies(mu);
    if !leq(weighted, cap) {
        return Err(Error::defect(format!("measure bound: sum mu(v)|f(v)| = {weighted} > mu(V)^(1+1/k) = {cap}")));
    }
    let distortion_bound = span_distortion_bound(params.k, mu_total);
    let report = if params.verify {
        let m = MetricSpace::from_graph(g);
        let report = verify_clan_distortion(&m, Host::Tree(&tree), &embedding, distortion_bound)?;
        report.ensure()?;
        Some(report)
    } else {
        None
    };
    Ok(SpanResult { tree, embedding, root_copy, radius, delta, distortion_bound, report })
}

/// Probability-measure wrapper with root vertex 0 and the uniform measure.
pub fn spanning_clan_embed<T: Scalar>(g: &WeightedGraph<T>, mode: Mode<T>) -> Result<(SpanningTree<T>, ClanEmbedding)> {
    let r = spanning_clan_embed_with(g, &Measure::uniform(g.n()), 0, mode, false)?;
    Ok((r.tree, r.embedding))
}

/// Lifts the probability measure to 1 + nμ(v) and runs the decomposition
/// with k (or the k derived from ε). Checks the same copy bounds as the
/// ultrametric wrapper.
pub fn spanning_clan_embed_with<T: Scalar>(
    g: &WeightedGraph<T>,
    mu: &Measure<T>,
    root: usize,
    mode: Mode<T>,
    verify: bool,
) -> Result<SpanResult<T>> {
    mode.validate()?;
    mu.require(MeasureKind::Probability)?;
    let n = g.n();
    if mu.len() != n {
        return Err(Error::invalid(format!("measure has {} points, graph has {n}", mu.len())));
    }
    let k = mode.internal_k(n);
    let params = SpanParams { k, verify };
    let r = hierarchical_petal_decomposition_detailed(g, root, &lift(mu), params)?;
    check_probability_bounds(n, mu, &r.embedding, mode)?;
    Ok(r)
}
