use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::host::{ClanEmbedding, SpanningTree, Ultrametric};
use crate::measure::Measure;
use crate::metric::MetricSpace;
use crate::scalar::{leq, to_f64, Scalar};

/// Host of a clan embedding.
#[derive(Debug, Clone, Copy)]
pub enum Host<'a, T> {
    Ultrametric(&'a Ultrametric<T>),
    Tree(&'a SpanningTree<T>),
}

impl<T: Scalar> Host<'_, T> {
    /// Host distance from copy `src` to every copy id (non-leaf ids are
    /// filled with infinity for ultrametrics).
    fn row(&self, src: usize) -> Vec<T> {
        match self {
            Host::Tree(t) => t.distances_from(src),
            Host::Ultrametric(u) => {
                let nodes = u.nodes();
                // lca label from src to c = label of the first ancestor of c that is an ancestor of src
                let mut on_path = vec![false; nodes.len()];
                let mut cur = Some(src);
                while let Some(v) = cur {
                    on_path[v] = true;
                    cur = nodes[v].parent;
                }
                (0..nodes.len())
                    .map(|c| {
                        if nodes[c].owner.is_none() {
                            return T::infinity();
                        }
                        let mut v = c;
                        while !on_path[v] {
                            v = nodes[v].parent.expect("root is on every path");
                        }
                        nodes[v].label
                    })
                    .collect()
            }
        }
    }
}

/// Outcome of the exhaustive pair check.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport<T> {
    pub dominating_ok: bool,
    /// max over x≠y of min_{y'∈f(y)} d(y', χ(x)) / d(x,y)
    pub max_distortion_ratio: T,
    pub bound: T,
    pub distortion_ok: bool,
    /// filled in by [`VerifyReport::with_measure_bound`]
    pub measure_bound_ok: Option<bool>,
    /// pair (x, y) attaining the max ratio
    pub worst_pair: Option<(usize, usize)>,
    /// first pair (x, y) whose copies come closer than d(x,y)
    pub domination_violation: Option<(usize, usize)>,
}

impl<T: Scalar> VerifyReport<T> {
    /// Adds the check Σ μ(x)|f(x)| ≤ cap.
    pub fn with_measure_bound(mut self, emb: &ClanEmbedding, mu: &Measure<T>, cap: T) -> Self {
        self.measure_bound_ok = Some(leq(emb.weighted_copies(mu), cap));
        self
    }

    pub fn passed(&self) -> bool {
        self.dominating_ok && self.distortion_ok && self.measure_bound_ok != Some(false)
    }

    /// Converts a failing report into a defect naming the violated inequality.
    pub fn ensure(&self) -> Result<()> {
        if let Some((x, y)) = self.domination_violation {
            return Err(Error::defect(format!("domination: copies of {x} and {y} are closer than d({x},{y})")));
        }
        if !self.distortion_ok {
            let (x, y) = self.worst_pair.unwrap_or((0, 0));
            return Err(Error::defect(format!(
                "distortion: pair ({x},{y}) has ratio {} > bound {}",
                to_f64(self.max_distortion_ratio),
                to_f64(self.bound)
            )));
        }
        if self.measure_bound_ok == Some(false) {
            return Err(Error::defect("measure bound: sum mu|f| exceeds its cap"));
        }
        Ok(())
    }
}

struct PointResult<T> {
    ratio: T,
    worst: Option<usize>,
    violation: Option<usize>,
}

/// Exhaustive domination and clan-distortion check over all ordered pairs.
/// Host distances are recomputed from the host structure alone.
pub fn verify_clan_distortion<T: Scalar>(
    m: &MetricSpace<T>,
    host: Host<'_, T>,
    emb: &ClanEmbedding,
    bound: T,
) -> Result<VerifyReport<T>> {
    if emb.n() != m.n() {
        return Err(Error::invalid(format!("embedding has {} points, metric has {}", emb.n(), m.n())));
    }
    match host {
        Host::Ultrametric(u) => emb.check_ultrametric(u)?,
        Host::Tree(t) => emb.check_tree(t)?,
    }
    let n = m.n();
    let per_point: Vec<PointResult<T>> = (0..n)
        .into_par_iter()
        .map(|x| {
            let mut closest = vec![T::infinity(); n];
            let mut from_chief = vec![T::infinity(); n];
            for &xc in emb.clan(x) {
                let row = host.row(xc);
                for y in 0..n {
                    let best = emb.clan(y).iter().map(|&c| row[c]).fold(T::infinity(), T::min);
                    closest[y] = closest[y].min(best);
                    if xc == emb.chief(x) {
                        from_chief[y] = best;
                    }
                }
            }
            let mut res = PointResult { ratio: T::zero(), worst: None, violation: None };
            for y in 0..n {
                if y == x {
                    continue;
                }
                let d = m.d(x, y);
                if res.violation.is_none() && !leq(d, closest[y]) {
                    res.violation = Some(y);
                }
                let ratio = from_chief[y] / d;
                if ratio > res.ratio {
                    res.ratio = ratio;
                    res.worst = Some(y);
                }
            }
            res
        })
        .collect();

    let mut report = VerifyReport {
        dominating_ok: true,
        max_distortion_ratio: T::zero(),
        bound,
        distortion_ok: true,
        measure_bound_ok: None,
        worst_pair: None,
        domination_violation: None,
    };
    for (x, r) in per_point.into_iter().enumerate() {
        if let (Some(y), None) = (r.violation, report.domination_violation) {
            report.dominating_ok = false;
            report.domination_violation = Some((x, y));
        }
        if r.ratio > report.max_distortion_ratio {
            report.max_distortion_ratio = r.ratio;
            report.worst_pair = r.worst.map(|y| (x, y));
        }
    }
    report.distortion_ok = leq(report.max_distortion_ratio, bound);
    Ok(report)
}
