use super::tree::Layout;
use crate::host::SpanningTree;
use crate::scalar::{sc, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LabelMode {
    /// heavy-path exit depths; exact distances
    Exact,
    /// geometric subset of certified ancestors; within a factor 2
    Approx2,
}

impl LabelMode {
    /// s_dl
    pub fn stretch(self) -> usize {
        match self {
            LabelMode::Exact => 1,
            LabelMode::Approx2 => 2,
        }
    }
}

/// Ancestor certificate: DFS interval and root distance of an ancestor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Certificate<T> {
    pub lo: usize,
    pub hi: usize,
    pub depth: T,
}

#[derive(Debug, Clone, PartialEq)]
pub enum DistanceLabel<T> {
    /// root distance and one (heavy path id, exit root distance) per heavy
    /// path on the root path
    Exact { depth: T, exits: Vec<(usize, T)> },
    /// root distance and the kept ancestor certificates, root side first
    Approx2 { depth: T, dfs: usize, ancestors: Vec<Certificate<T>> },
}

impl<T: Scalar> DistanceLabel<T> {
    pub fn words(&self) -> usize {
        match self {
            DistanceLabel::Exact { exits, .. } => 1 + 2 * exits.len(),
            DistanceLabel::Approx2 { ancestors, .. } => 2 + 3 * ancestors.len(),
        }
    }
}

/// A(ℓ(a), ℓ(b)) with d_T(a,b) ≤ A ≤ s_dl·d_T(a,b). Labels of different
/// modes never mix; mixing returns None.
pub fn estimate<T: Scalar>(a: &DistanceLabel<T>, b: &DistanceLabel<T>) -> Option<T> {
    match (a, b) {
        (DistanceLabel::Exact { depth: da, exits: ea }, DistanceLabel::Exact { depth: db, exits: eb }) => {
            let mut lca = T::zero();
            for (x, y) in ea.iter().zip(eb) {
                if x.0 != y.0 {
                    break;
                }
                lca = x.1.min(y.1);
            }
            Some(*da + *db - (lca + lca))
        }
        (
            DistanceLabel::Approx2 { depth: da, dfs: fa, ancestors: aa },
            DistanceLabel::Approx2 { depth: db, dfs: fb, ancestors: ab },
        ) => {
            let deepest = |list: &[Certificate<T>], other: usize| {
                list.iter().filter(|c| c.lo <= other && other <= c.hi).map(|c| c.depth).fold(T::zero(), T::max)
            };
            let d = deepest(aa, *fb).max(deepest(ab, *fa));
            Some(*da + *db - (d + d))
        }
        _ => None,
    }
}

#[derive(Debug, Clone)]
pub struct DistanceLabels<T> {
    pub mode: LabelMode,
    pub labels: Vec<DistanceLabel<T>>,
}

impl<T: Scalar> DistanceLabels<T> {
    pub fn stretch(&self) -> usize {
        self.mode.stretch()
    }

    pub fn max_words(&self) -> usize {
        self.labels.iter().map(DistanceLabel::words).max().unwrap_or(0)
    }

    pub fn estimate(&self, a: usize, b: usize) -> T {
        estimate(&self.labels[a], &self.labels[b]).expect("labels share a mode")
    }
}

pub fn build_distance_labels<T: Scalar>(t: &SpanningTree<T>, mode: LabelMode) -> DistanceLabels<T> {
    let lay = Layout::new(t);
    let ratio = sc::<T>(1.5);
    let labels = (0..t.copy_count())
        .map(|v| {
            let exits = lay.exits(v);
            let depth = lay.depth[v];
            match mode {
                LabelMode::Exact => {
                    DistanceLabel::Exact { depth, exits: exits.iter().map(|&e| (lay.dfs[lay.head[e]], lay.depth[e])).collect() }
                }
                LabelMode::Approx2 => {
                    // keep an exit only once it is 1.5 times closer than the last kept one
                    let mut kept: Vec<usize> = Vec::new();
                    let last = exits.len() - 1;
                    for (j, &e) in exits.iter().enumerate() {
                        let g = depth - lay.depth[e];
                        let keep = match kept.last() {
                            None => true,
                            Some(_) if j == last => true,
                            Some(&p) => depth - lay.depth[p] > ratio * g,
                        };
                        if keep {
                            kept.push(e);
                        }
                    }
                    let ancestors =
                        kept.into_iter().map(|e| Certificate { lo: lay.dfs[e], hi: lay.end[e], depth: lay.depth[e] }).collect();
                    DistanceLabel::Approx2 { depth, dfs: lay.dfs[v], ancestors }
                }
            }
        })
        .collect();
    DistanceLabels { mode, labels }
}
