//! Compact routing on a spanning clan embedding: tree interval routing,
//! tree distance labels, copy selection by estimated distance, and a
//! hop-by-hop delivery simulator.

mod labels;
mod tree;

pub use labels::{build_distance_labels, estimate, Certificate, DistanceLabel, DistanceLabels, LabelMode};
pub use tree::{build_tree_routing, RoutingLabel, RoutingTable, TreeRoutingState};

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::host::{ClanEmbedding, SpanningTree};
use crate::measure::Measure;
use crate::metric::MetricSpace;
use crate::rng::stream;
use crate::scalar::{from_usize, leq, to_f64, Scalar};
use crate::spanning::spanning_clan_embed_with;
use crate::ultra::Mode;

/// What a graph vertex stores and advertises.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeBundle {
    /// f(v) in increasing copy order; the table holds (τ, ℓ_dl) of each
    pub copies: Vec<usize>,
    pub chief: usize,
    pub table_words: usize,
    pub label_words: usize,
}

/// All bundles with the scheme pieces they are built from.
#[derive(Debug, Clone)]
pub struct Scheme<T> {
    pub routing: TreeRoutingState,
    pub labels: DistanceLabels<T>,
    pub bundles: Vec<NodeBundle>,
    /// τ words plus the widest distance label of the tree
    pub per_copy_words: usize,
    /// destination label plus the chosen copy name
    pub header_words: usize,
}

/// τ_G(v) = concatenation of (τ_crs(v′), ℓ_dl(v′)) over v′ ∈ f(v), each
/// stored as a fixed-width record; ℓ_G(v) = (ℓ_crs(χ(v)), ℓ_dl(χ(v))).
pub fn build_node_bundles<T: Scalar>(t: &SpanningTree<T>, emb: &ClanEmbedding, mode: LabelMode) -> Result<Scheme<T>> {
    emb.check_tree(t)?;
    let routing = build_tree_routing(t);
    let labels = build_distance_labels(t, mode);
    let per_copy_words = routing.table_words() + labels.max_words();
    let bundles: Vec<NodeBundle> = (0..emb.n())
        .map(|v| {
            let chief = emb.chief(v);
            let mut copies = emb.clan(v).to_vec();
            copies.sort_unstable();
            NodeBundle {
                table_words: copies.len() * per_copy_words,
                label_words: routing.labels[chief].words() + labels.labels[chief].words(),
                copies,
                chief,
            }
        })
        .collect();
    let header_words = bundles.iter().map(|b| b.label_words).max().unwrap_or(0) + 1;
    Ok(Scheme { routing, labels, bundles, per_copy_words, header_words })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Packet<T> {
    pub dest: usize,
    /// copy chosen at the source
    pub start: usize,
    pub current: usize,
    /// (from, to, length) per hop
    pub hops: Vec<(usize, usize, T)>,
}

impl<T: Scalar> Packet<T> {
    pub fn length(&self) -> T {
        self.hops.iter().fold(T::zero(), |a, h| a + h.2)
    }
}

/// Picks the source copy with the smallest estimated distance to the
/// destination's chief (ties to the smaller copy id) and forwards hop by
/// hop until the chief is reached.
pub fn route<T: Scalar>(scheme: &Scheme<T>, t: &SpanningTree<T>, src: usize, dst: usize) -> Result<Packet<T>> {
    let n = scheme.bundles.len();
    if src >= n || dst >= n {
        return Err(Error::invalid(format!("unknown vertex {}", src.max(dst))));
    }
    let target = scheme.bundles[dst].chief;
    let mut start = None;
    for &c in &scheme.bundles[src].copies {
        let e = scheme.labels.estimate(c, target);
        if start.is_none_or(|(_, best)| e < best) {
            start = Some((c, e));
        }
    }
    let start = start.expect("clans are nonempty").0;
    let dest_label = &scheme.routing.labels[target];
    let mut hops = Vec::new();
    let mut at = start;
    let limit = t.copy_count();
    while let Some(next) = scheme.routing.next_hop(at, dest_label) {
        let w = t
            .neighbors(at)
            .iter()
            .find(|&&(u, _)| u == next)
            .map(|&(_, w)| w)
            .ok_or_else(|| Error::defect(format!("routing table points from {at} to non-neighbor {next}")))?;
        hops.push((at, next, w));
        at = next;
        if hops.len() > limit {
            return Err(Error::defect("routing loop"));
        }
    }
    if at != target {
        return Err(Error::defect(format!("packet stopped at copy {at}, not at chief {target}")));
    }
    Ok(Packet { dest: dst, start, current: at, hops })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pairs {
    All,
    /// this many ordered pairs drawn per sample
    Sampled(usize),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub mean: f64,
    pub p99: f64,
    pub max: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RoutingReport {
    pub stretch: Summary,
    pub table_words_mean: f64,
    pub table_words_max: usize,
    pub label_words_max: usize,
    pub header_words: usize,
    pub clan_mean: f64,
    pub samples: usize,
    /// s_dl times the spanning distortion bound
    pub stretch_bound: f64,
    pub per_copy_words: usize,
}

/// Routes the requested pairs over `samples` embeddings, each built from a
/// seeded uniformly random root. Every packet is checked for delivery along
/// the tree path and for the stretch bound.
pub fn routing_experiment<T: Scalar>(
    g: &WeightedGraph<T>,
    mode: Mode<T>,
    label_mode: LabelMode,
    pairs: Pairs,
    samples: usize,
    seed: u64,
) -> Result<RoutingReport> {
    let n = g.n();
    if n < 2 {
        return Err(Error::invalid("routing needs at least two vertices"));
    }
    if samples == 0 {
        return Err(Error::invalid("samples must be at least 1"));
    }
    let m = MetricSpace::from_graph(g);
    let mu = Measure::uniform(n);
    let mut stretches: Vec<f64> = Vec::new();
    let mut table_sum = 0usize;
    let mut table_max = 0usize;
    let mut label_max = 0usize;
    let mut header = 0usize;
    let mut clan_sum = 0.0;
    let mut bound = 0.0f64;
    let mut per_copy = 0usize;
    for s in 0..samples as u64 {
        let root = stream(seed, 2 * s).random_range(0..n);
        let span = spanning_clan_embed_with(g, &mu, root, mode, false)?;
        let scheme = build_node_bundles(&span.tree, &span.embedding, label_mode)?;
        let cap = span.distortion_bound * from_usize(label_mode.stretch());
        bound = bound.max(to_f64(cap));
        per_copy = per_copy.max(scheme.per_copy_words);
        let list: Vec<(usize, usize)> = match pairs {
            Pairs::All => (0..n).flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b))).collect(),
            Pairs::Sampled(count) => {
                let mut rng = stream(seed, 2 * s + 1);
                (0..count)
                    .map(|_| {
                        let a = rng.random_range(0..n);
                        let b = (a + rng.random_range(1..n)) % n;
                        (a, b)
                    })
                    .collect()
            }
        };
        let results: Vec<Result<f64>> = list
            .par_iter()
            .map(|&(a, b)| {
                let p = route(&scheme, &span.tree, a, b)?;
                check_delivery(&span.tree, &p)?;
                let len = p.length();
                let d = m.d(a, b);
                if !leq(len, cap * d) {
                    return Err(Error::defect(format!("stretch: route {a}->{b} has length {len} > {cap} * {d}")));
                }
                Ok(to_f64(len / d))
            })
            .collect();
        for r in results {
            stretches.push(r?);
        }
        for b in &scheme.bundles {
            table_sum += b.table_words;
            table_max = table_max.max(b.table_words);
            label_max = label_max.max(b.label_words);
        }
        header = header.max(scheme.header_words);
        clan_sum += span.embedding.total_copies() as f64 / n as f64;
    }
    Ok(RoutingReport {
        stretch: summarize(&mut stretches),
        table_words_mean: table_sum as f64 / (samples * n) as f64,
        table_words_max: table_max,
        label_words_max: label_max,
        header_words: header,
        clan_mean: clan_sum / samples as f64,
        samples,
        stretch_bound: bound,
        per_copy_words: per_copy,
    })
}

/// The hop log is the tree path from the start copy to the destination chief.
pub fn check_delivery<T: Scalar>(t: &SpanningTree<T>, p: &Packet<T>) -> Result<()> {
    let mut at = p.start;
    let mut seen = vec![false; t.copy_count()];
    seen[at] = true;
    for &(a, b, _) in &p.hops {
        if a != at || seen[b] {
            return Err(Error::defect("hop log is not a simple path"));
        }
        seen[b] = true;
        at = b;
    }
    if at != p.current {
        return Err(Error::defect("hop log does not end at the packet position"));
    }
    let d = t.distances_from(p.start)[p.current];
    if p.length() != d {
        return Err(Error::defect(format!("hop length {} differs from tree distance {d}", p.length())));
    }
    Ok(())
}

/// Mean, nearest-rank 99th percentile, and max.
fn summarize(xs: &mut [f64]) -> Summary {
    if xs.is_empty() {
        return Summary { mean: 0.0, p99: 0.0, max: 0.0 };
    }
    xs.sort_by(f64::total_cmp);
    let mean = xs.iter().sum::<f64>() / xs.len() as f64;
    let rank = ((0.99 * xs.len() as f64).ceil() as usize).clamp(1, xs.len());
    Summary { mean, p99: xs[rank - 1], max: xs[xs.len() - 1] }
}
