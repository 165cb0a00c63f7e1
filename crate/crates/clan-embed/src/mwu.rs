//! Uniform distributions of clan embeddings via multiplicative weights.

use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::host::{ClanEmbedding, UltraNode, Ultrametric};
use crate::measure::Measure;
use crate::metric::MetricSpace;
use crate::rng::stream;
use crate::scalar::{from_usize, leq, sc, to_f64, Scalar};
use crate::ultra::{clan_embed_probability, distortion_bound, ClanParams, Mode, Variant};
use crate::verify::{verify_clan_distortion, Host};

/// (ρ, α, β): max clan size, expected clan size under the queried measure,
/// and distortion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleBounds<T> {
    pub rho: T,
    pub alpha: T,
    pub beta: T,
}

pub type Member<T> = Arc<(Ultrametric<T>, ClanEmbedding)>;

/// Produces a clan embedding for any probability measure within its bounds.
pub trait Oracle<T: Scalar> {
    fn n(&self) -> usize;
    fn bounds(&self) -> OracleBounds<T>;
    fn embed(&self, mu: &Measure<T>) -> Result<(Ultrametric<T>, ClanEmbedding)>;
}

/// The probability-measure clan builder. In ε form it is queried with ε/2 so
/// that its expected clan size is at most 1+ε/2.
#[derive(Debug, Clone)]
pub struct UltrametricOracle<'a, T> {
    m: &'a MetricSpace<T>,
    mode: Mode<T>,
}

impl<'a, T: Scalar> UltrametricOracle<'a, T> {
    pub fn new(m: &'a MetricSpace<T>, mode: Mode<T>) -> Result<Self> {
        mode.validate()?;
        Ok(UltrametricOracle { m, mode })
    }

    fn query_mode(&self) -> Mode<T> {
        match self.mode {
            Mode::Eps(e) => Mode::Eps(e / sc(2.0)),
            k => k,
        }
    }
}

impl<T: Scalar> Oracle<T> for UltrametricOracle<'_, T> {
    fn n(&self) -> usize {
        self.m.n()
    }

    fn bounds(&self) -> OracleBounds<T> {
        let n = self.m.n();
        let two_n: T = from_usize(2 * n);
        match self.mode {
            Mode::Eps(e) => {
                let half = T::one() + e / sc(2.0);
                let k = self.query_mode().internal_k(n);
                OracleBounds { rho: half * two_n, alpha: half, beta: distortion_bound(k, Variant::Standard) }
            }
            Mode::K(k) => {
                let root = two_n.powf(T::one() / from_usize(k));
                OracleBounds { rho: two_n * root, alpha: sc::<T>(2.0) * root, beta: distortion_bound(k, Variant::Standard) }
            }
        }
    }

    fn embed(&self, mu: &Measure<T>) -> Result<(Ultrametric<T>, ClanEmbedding)> {
        let params = ClanParams { mode: self.query_mode(), variant: Variant::Standard, verify: false };
        clan_embed_probability(self.m, mu, &params)
    }
}

/// Ignores the measure: every point gets one leaf under a single root
/// labeled with the diameter. Bounds (1, 1, aspect ratio).
#[derive(Debug, Clone)]
pub struct SingletonOracle<T> {
    member: (Ultrametric<T>, ClanEmbedding),
    beta: T,
}

impl<T: Scalar> SingletonOracle<T> {
    pub fn new(m: &MetricSpace<T>) -> Result<Self> {
        let n = m.n();
        if n < 2 {
            return Err(Error::invalid("singleton oracle needs at least two points"));
        }
        let diam = m.weak_diameter(&m.points());
        let mut closest = T::infinity();
        for x in 0..n {
            for y in x + 1..n {
                closest = closest.min(m.d(x, y));
            }
        }
        let mut nodes = vec![UltraNode { label: diam, parent: None, owner: None }];
        nodes.extend((0..n).map(|x| UltraNode { label: T::zero(), parent: Some(0), owner: Some(x) }));
        let emb = ClanEmbedding::new((0..n).map(|x| vec![x + 1]).collect(), (1..=n).collect())?;
        Ok(SingletonOracle { member: (Ultrametric::new(nodes)?, emb), beta: diam / closest })
    }
}

impl<T: Scalar> Oracle<T> for SingletonOracle<T> {
    fn n(&self) -> usize {
        self.member.1.n()
    }

    fn bounds(&self) -> OracleBounds<T> {
        OracleBounds { rho: T::one(), alpha: T::one(), beta: self.beta }
    }

    fn embed(&self, _mu: &Measure<T>) -> Result<(Ultrametric<T>, ClanEmbedding)> {
        Ok(self.member.clone())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistParams<T> {
    /// T
    pub rounds: usize,
    /// δ = eps_slack / α
    pub delta: T,
    pub bounds: OracleBounds<T>,
    pub eps_slack: T,
}

/// Uniform distribution over the member sequence (repeats allowed).
#[derive(Debug, Clone)]
pub struct EmbeddingDistribution<T> {
    pub members: Vec<Member<T>>,
    pub params: DistParams<T>,
}

/// Per-round builder state, recorded on request.
#[derive(Debug, Clone, Default)]
pub struct WeightLog {
    /// w^t for t = 1..T, one row per round
    pub weights: Vec<Vec<f64>>,
    /// ln W^{t+1}
    pub log_total: Vec<f64>,
    /// δ Σ_{s≤t} ⟨g^s, μ^s⟩ + ln n
    pub log_bound: Vec<f64>,
}

impl WeightLog {
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for row in &self.weights {
            let line: Vec<String> = row.iter().map(|w| format!("{w:.16e}")).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }
}

/// T = ⌈4ρα ln n / ε²⌉
pub fn round_count<T: Scalar>(bounds: &OracleBounds<T>, n: usize, eps_slack: T) -> usize {
    let ln_n = from_usize::<T>(n).ln();
    let t = (sc::<T>(4.0) * bounds.rho * bounds.alpha * ln_n / (eps_slack * eps_slack)).ceil();
    t.to_usize().expect("round count fits in usize")
}

/// Multiplicative-weights loop around the ultrametric clan builder.
pub fn build_distribution<T: Scalar>(m: &MetricSpace<T>, mode: Mode<T>, eps_slack: T) -> Result<EmbeddingDistribution<T>> {
    let oracle = UltrametricOracle::new(m, mode)?;
    Ok(build_with_oracle(&oracle, eps_slack, false)?.0)
}

/// Runs the loop against any oracle. Every oracle answer is checked against
/// the oracle's ρ and α, the total-weight inequality is checked each round,
/// and the per-point average bound α + eps_slack is checked at the end.
pub fn build_with_oracle<T: Scalar, O: Oracle<T>>(
    oracle: &O,
    eps_slack: T,
    record: bool,
) -> Result<(EmbeddingDistribution<T>, Option<WeightLog>)> {
    let n = oracle.n();
    if n < 2 {
        return Err(Error::invalid("distribution needs at least two points"));
    }
    if !(eps_slack > T::zero() && eps_slack < sc(0.5)) {
        return Err(Error::invalid("eps_slack must lie in (0, 1/2)"));
    }
    let bounds = oracle.bounds();
    let rounds = round_count(&bounds, n, eps_slack);
    let delta = eps_slack / bounds.alpha;
    let step = (T::one() + delta).ln();
    let ln_n = from_usize::<T>(n).ln();

    let mut log_w = vec![T::zero(); n];
    let mut copies = vec![0usize; n];
    let mut gain = T::zero();
    let mut members: Vec<Member<T>> = Vec::with_capacity(rounds);
    let mut log = record.then(WeightLog::default);

    for t in 0..rounds {
        let top = log_w.iter().copied().fold(T::neg_infinity(), T::max);
        let scaled: Vec<T> = log_w.iter().map(|&l| (l - top).exp()).collect();
        let total = scaled.iter().fold(T::zero(), |a, &b| a + b);
        let mu = Measure::probability(scaled.iter().map(|&w| w / total).collect())?;
        if let Some(log) = log.as_mut() {
            log.weights.push(log_w.iter().map(|&l| to_f64(l.exp())).collect());
        }

        let answer = oracle.embed(&mu)?;
        let emb = &answer.1;
        let worst: T = from_usize(emb.max_clan());
        if !leq(worst, bounds.rho) {
            return Err(Error::defect(format!("oracle round {t}: clan size {worst} > rho = {}", bounds.rho)));
        }
        let expected = emb.weighted_copies(&mu);
        if !leq(expected, bounds.alpha) {
            return Err(Error::defect(format!("oracle round {t}: expected clan size {expected} > alpha = {}", bounds.alpha)));
        }

        let mut inner = T::zero();
        for (i, l) in log_w.iter_mut().enumerate() {
            let size = emb.clan(i).len();
            copies[i] += size;
            let g = from_usize::<T>(size) / bounds.rho;
            inner = inner + g * mu.get(i);
            *l = *l + g * step;
        }
        gain = gain + delta * inner;
        let top = log_w.iter().copied().fold(T::neg_infinity(), T::max);
        let log_total = top + log_w.iter().fold(T::zero(), |a, &l| a + (l - top).exp()).ln();
        let cap = gain + ln_n;
        if !leq(log_total, cap) {
            return Err(Error::defect(format!("round {t}: ln W = {log_total} > delta sum <g,mu> + ln n = {cap}")));
        }
        if let Some(log) = log.as_mut() {
            log.log_total.push(to_f64(log_total));
            log.log_bound.push(to_f64(cap));
        }

        match members.last() {
            Some(prev) if **prev == answer => members.push(Arc::clone(prev)),
            _ => members.push(Arc::new(answer)),
        }
    }

    let cap = bounds.alpha + eps_slack;
    let t_count: T = from_usize(rounds);
    for (i, &c) in copies.iter().enumerate() {
        let avg = from_usize::<T>(c) / t_count;
        if !leq(avg, cap) {
            return Err(Error::defect(format!("point {i}: average clan size {avg} > alpha + eps = {cap}")));
        }
    }
    let params = DistParams { rounds, delta, bounds, eps_slack };
    Ok((EmbeddingDistribution { members, params }, log))
}

/// Uniformly random member.
pub fn sample<T: Scalar>(d: &EmbeddingDistribution<T>, seed: u64) -> Result<&(Ultrametric<T>, ClanEmbedding)> {
    if d.members.is_empty() {
        return Err(Error::invalid("empty distribution"));
    }
    let idx = stream(seed, 0).random_range(0..d.members.len());
    Ok(&d.members[idx])
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistStats<T> {
    pub per_point_average: Vec<T>,
    pub max_clan: usize,
    pub member_distortion: Vec<T>,
}

/// Exact per-point averages and per-member distortion from the oracle check.
pub fn distribution_stats<T: Scalar>(d: &EmbeddingDistribution<T>, m: &MetricSpace<T>) -> Result<DistStats<T>> {
    if d.members.is_empty() {
        return Err(Error::invalid("empty distribution"));
    }
    let n = d.members[0].1.n();
    let mut sums = vec![0usize; n];
    let mut max_clan = 0;
    let mut member_distortion = Vec::with_capacity(d.members.len());
    let mut prev: Option<(&Member<T>, T)> = None;
    for member in &d.members {
        let emb = &member.1;
        for (x, s) in sums.iter_mut().enumerate() {
            *s += emb.clan(x).len();
        }
        max_clan = max_clan.max(emb.max_clan());
        let ratio = match prev {
            Some((p, r)) if Arc::ptr_eq(p, member) => r,
            _ => verify_clan_distortion(m, Host::Ultrametric(&member.0), emb, d.params.bounds.beta)?.max_distortion_ratio,
        };
        member_distortion.push(ratio);
        prev = Some((member, ratio));
    }
    let t: T = from_usize(d.members.len());
    Ok(DistStats { per_point_average: sums.into_iter().map(|s| from_usize::<T>(s) / t).collect(), max_clan, member_distortion })
}
