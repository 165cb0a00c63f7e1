use super::distortion::{verify_clan_distortion, Host};
use super::girth::girth;
use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::host::{ClanEmbedding, SpanningTree};
use crate::metric::{Extent, MetricSpace};
use crate::scalar::{to_f64, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Violated,
    /// distortion too large for the copy-count bound to apply
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EulerCheck {
    pub total_copies: usize,
    /// n + χ(G) with χ(G) = |E| − |V| + 1
    pub threshold: usize,
    /// g/4 − 3/2, infinite for forests
    pub distortion_threshold: f64,
    pub measured_distortion: f64,
    pub girth: Extent<usize>,
    pub verdict: Verdict,
}

impl EulerCheck {
    pub fn ensure(&self) -> Result<()> {
        if self.verdict == Verdict::Violated {
            return Err(Error::defect(format!(
                "copy count: sum |f(v)| = {} < n + chi(G) = {} at distortion {} < g/4 - 3/2 = {}",
                self.total_copies, self.threshold, self.measured_distortion, self.distortion_threshold
            )));
        }
        Ok(())
    }
}

/// A tree clan embedding of an unweighted graph with girth g and distortion
/// below g/4 − 3/2 must use at least n + χ(G) copies.
pub fn euler_tightness_check<T: Scalar>(g: &WeightedGraph<T>, host: &SpanningTree<T>, emb: &ClanEmbedding) -> Result<EulerCheck> {
    let gi = girth(g)?;
    let m = MetricSpace::from_graph(g);
    let report = verify_clan_distortion(&m, Host::Tree(host), emb, T::infinity())?;
    let measured = to_f64(report.max_distortion_ratio);
    let distortion_threshold = match gi {
        Extent::Finite(len) => len as f64 / 4.0 - 1.5,
        Extent::Infinite => f64::INFINITY,
    };
    let threshold = g.m() + 1;
    let total_copies = emb.total_copies();
    let verdict = if measured < distortion_threshold {
        if total_copies >= threshold {
            Verdict::Holds
        } else {
            Verdict::Violated
        }
    } else {
        Verdict::NotApplicable
    };
    Ok(EulerCheck { total_copies, threshold, distortion_threshold, measured_distortion: measured, girth: gi, verdict })
}
