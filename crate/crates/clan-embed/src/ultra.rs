//! Clan embeddings of a metric space into an ultrametric.

use crate::error::{Error, Result};
use crate::host::{ClanEmbedding, UltraNode, Ultrametric};
use crate::measure::{Measure, MeasureKind};
use crate::metric::MetricSpace;
use crate::scalar::{from_usize, leq, sc, Scalar};
use crate::verify::{verify_clan_distortion, Host};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    Standard,
    /// also keeps both sides of every split at most 2/3 of the measure
    Balanced,
}

/// Distortion parameter, given directly or through a target expected clan size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Mode<T> {
    K(usize),
    Eps(T),
}

impl<T: Scalar> Mode<T> {
    /// k itself, or ⌈ln(2n)/ln(1+ε/2)⌉ for the ε form.
    pub fn internal_k(&self, n: usize) -> usize {
        match *self {
            Mode::K(k) => k,
            Mode::Eps(eps) => {
                let two_n: T = from_usize(2 * n);
                let k = (two_n.ln() / (T::one() + eps / sc(2.0)).ln()).ceil();
                k.to_usize().unwrap_or(1).max(1)
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Mode::K(0) => Err(Error::invalid("k must be at least 1")),
            Mode::Eps(e) if !(e > T::zero() && e <= T::one()) => Err(Error::invalid("eps must lie in (0,1]")),
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClanParams<T> {
    pub mode: Mode<T>,
    pub variant: Variant,
    /// run the brute-force distortion oracle on the result
    pub verify: bool,
}

impl<T: Scalar> ClanParams<T> {
    pub fn k(k: usize) -> Self {
        ClanParams { mode: Mode::K(k), variant: Variant::Standard, verify: false }
    }

    pub fn eps(eps: T) -> Self {
        ClanParams { mode: Mode::Eps(eps), variant: Variant::Standard, verify: false }
    }

    pub fn balanced(mut self) -> Self {
        self.variant = Variant::Balanced;
        self
    }

    pub fn verified(mut self) -> Self {
        self.verify = true;
        self
    }
}

/// Distortion guaranteed by the builder for internal parameter k.
pub fn distortion_bound<T: Scalar>(k: usize, variant: Variant) -> T {
    let k = match variant {
        Variant::Standard => k,
        Variant::Balanced => k + 1,
    };
    from_usize::<T>(16 * k)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PartitionResult<T> {
    pub center: usize,
    pub radius: T,
    /// B(v, R + pad)
    pub p: Vec<usize>,
    /// B(v, R)
    pub q: Vec<usize>,
    pub qbar: Vec<usize>,
    /// spacing between consecutive candidate radii
    pub pad: T,
    pub diam: T,
}

/// Measurements of one recursion node.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeTrace<T> {
    pub depth: usize,
    pub size: usize,
    pub mu_x: T,
    pub mu_p: T,
    pub mu_qbar: T,
    pub diam_x: T,
    pub diam_p: T,
}

/// Ball split around the point with the smallest growth ratio.
pub fn partition_ball<T: Scalar>(m: &MetricSpace<T>, subset: &[usize], mu: &Measure<T>, k: usize) -> Result<PartitionResult<T>> {
    partition(m, subset, mu, k, Variant::Standard)
}

/// As [`partition_ball`] with finer spacing and a shifted index so that
/// min{μ(P), μ(Q̄)} ≤ 2/3 μ(X).
pub fn partition_ball_balanced<T: Scalar>(
    m: &MetricSpace<T>,
    subset: &[usize],
    mu: &Measure<T>,
    k: usize,
) -> Result<PartitionResult<T>> {
    partition(m, subset, mu, k, Variant::Balanced)
}

fn partition<T: Scalar>(
    m: &MetricSpace<T>,
    subset: &[usize],
    mu: &Measure<T>,
    k: usize,
    variant: Variant,
) -> Result<PartitionResult<T>> {
    if subset.len() < 2 {
        return Err(Error::invalid("partition needs at least two points"));
    }
    if k == 0 {
        return Err(Error::invalid("k must be at least 1"));
    }
    mu.require(MeasureKind::Ge1)?;
    let diam = m.weak_diameter(subset);
    let eighth = diam / sc(8.0);
    let quarter = diam / sc(4.0);

    let mut center = subset[0];
    let mut best = T::infinity();
    for &v in subset {
        let ratio = m.ball_measure(subset, v, quarter, mu) / m.ball_measure(subset, v, eighth, mu);
        if ratio < best {
            best = ratio;
            center = v;
        }
    }

    let steps = match variant {
        Variant::Standard => k,
        Variant::Balanced => k + 1,
    };
    let pad = diam / from_usize(8 * steps);
    let radii: Vec<T> = (0..=steps).map(|i| eighth + from_usize::<T>(i) * pad).collect();
    let q: Vec<T> = radii.iter().map(|&r| m.ball_measure(subset, center, r, mu)).collect();
    let mut index = 0;
    let mut best = T::infinity();
    for i in 0..k {
        let ratio = q[i + 1] / q[i];
        if ratio < best {
            best = ratio;
            index = i;
        }
    }
    let mu_x = mu.of(subset);
    if variant == Variant::Balanced {
        let two_thirds = mu_x * sc(2.0) / sc(3.0);
        let third = mu_x / sc(3.0);
        if !(q[index + 1] <= two_thirds || q[index] >= third) {
            index += 1;
        }
    }

    let radius = radii[index];
    let p = m.ball_unchecked(subset, center, radii[index + 1]);
    let q_set = m.ball_unchecked(subset, center, radius);
    let qbar: Vec<usize> = subset.iter().copied().filter(|&x| m.d(center, x) > radius).collect();
    let out = PartitionResult { center, radius, p, q: q_set, qbar, pad, diam };
    check_partition(m, subset, mu, k, variant, &out)?;
    Ok(out)
}

fn check_partition<T: Scalar>(
    m: &MetricSpace<T>,
    subset: &[usize],
    mu: &Measure<T>,
    k: usize,
    variant: Variant,
    part: &PartitionResult<T>,
) -> Result<()> {
    let mu_p = mu.of(&part.p);
    let mu_q = mu.of(&part.q);
    let ratio = m.mu_star_unchecked(subset, mu) / m.mu_star_unchecked(&part.p, mu);
    let rhs = mu_q * ratio.powf(T::one() / from_usize(k));
    if !leq(mu_p, rhs) {
        return Err(Error::defect(format!("ball partition: mu(P)={mu_p} > mu(Q)(mu*(X)/mu*(P))^(1/k)={rhs}")));
    }
    let diam_p = m.weak_diameter(&part.p);
    if !leq(diam_p, part.diam / sc(2.0)) {
        return Err(Error::defect(format!("ball partition: diam(P)={diam_p} > diam(X)/2={}", part.diam / sc(2.0))));
    }
    if variant == Variant::Balanced {
        let small = mu_p.min(mu.of(&part.qbar));
        let cap = mu.of(subset) * sc(2.0) / sc(3.0);
        if !leq(small, cap) {
            return Err(Error::defect(format!("balanced partition: min(mu(P),mu(Qbar))={small} > 2/3 mu(X)={cap}")));
        }
    }
    Ok(())
}

struct Builder<'a, T> {
    m: &'a MetricSpace<T>,
    mu: &'a Measure<T>,
    k: usize,
    variant: Variant,
    nodes: Vec<UltraNode<T>>,
    clans: Vec<Vec<usize>>,
    trace: Vec<NodeTrace<T>>,
}

impl<T: Scalar> Builder<'_, T> {
    /// Embeds `subset` under `parent`; returns (point, chief copy) sorted by point.
    fn build(&mut self, subset: &[usize], parent: Option<usize>, depth: usize) -> Result<Vec<(usize, usize)>> {
        if let [x] = *subset {
            let id = self.nodes.len();
            self.nodes.push(UltraNode { label: T::zero(), parent, owner: Some(x) });
            self.clans[x].push(id);
            return Ok(vec![(x, id)]);
        }
        let part = partition(self.m, subset, self.mu, self.k, self.variant)?;
        self.trace.push(NodeTrace {
            depth,
            size: subset.len(),
            mu_x: self.mu.of(subset),
            mu_p: self.mu.of(&part.p),
            mu_qbar: self.mu.of(&part.qbar),
            diam_x: part.diam,
            diam_p: self.m.weak_diameter(&part.p),
        });
        let id = self.nodes.len();
        self.nodes.push(UltraNode { label: part.diam, parent, owner: None });
        let from_p = self.build(&part.p, Some(id), depth + 1)?;
        let from_qbar = self.build(&part.qbar, Some(id), depth + 1)?;
        let near = part.radius + part.pad / sc(2.0);
        let lookup = |side: &[(usize, usize)], x: usize| side[side.binary_search_by_key(&x, |e| e.0).expect("member")].1;
        Ok(subset
            .iter()
            .map(|&x| {
                let c = if self.m.d(part.center, x) <= near { lookup(&from_p, x) } else { lookup(&from_qbar, x) };
                (x, c)
            })
            .collect())
    }
}

/// Output of the traced builder.
#[derive(Debug, Clone)]
pub struct UltraClan<T> {
    pub ultrametric: Ultrametric<T>,
    pub embedding: ClanEmbedding,
    /// one entry per internal node, in creation order
    pub trace: Vec<NodeTrace<T>>,
}

/// Clan embedding of the sub-metric on `subset` (points renumbered in subset
/// order) for a ge1 measure, with distortion 16k (16(k+1) balanced) and
/// Σμ(x)|f(x)| ≤ μ(X)^{1+1/k}.
pub fn clan_embed_ultrametric<T: Scalar>(
    m: &MetricSpace<T>,
    subset: &[usize],
    mu: &Measure<T>,
    params: &ClanParams<T>,
) -> Result<(Ultrametric<T>, ClanEmbedding)> {
    let out = clan_embed_ultrametric_traced(m, subset, mu, params)?;
    Ok((out.ultrametric, out.embedding))
}

pub fn clan_embed_ultrametric_traced<T: Scalar>(
    m: &MetricSpace<T>,
    subset: &[usize],
    mu: &Measure<T>,
    params: &ClanParams<T>,
) -> Result<UltraClan<T>> {
    params.mode.validate()?;
    mu.require(MeasureKind::Ge1)?;
    if subset.is_empty() {
        return Err(Error::invalid("cannot embed an empty set"));
    }
    if mu.len() != m.n() {
        return Err(Error::invalid(format!("measure has {} points, metric has {}", mu.len(), m.n())));
    }
    let mut sorted = subset.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != subset.len() || *sorted.last().expect("nonempty") >= m.n() {
        return Err(Error::invalid("subset has duplicate or out-of-range points"));
    }
    let (sub, sub_mu) = restrict(m, mu, &sorted);
    let k = params.mode.internal_k(sub.n());
    let mut b = Builder {
        m: &sub,
        mu: &sub_mu,
        k,
        variant: params.variant,
        nodes: Vec::new(),
        clans: vec![Vec::new(); sub.n()],
        trace: Vec::new(),
    };
    let chiefs = b.build(&sub.points(), None, 0)?;
    let Builder { nodes, clans, trace, .. } = b;
    let ultrametric = Ultrametric::new(nodes)?;
    let embedding = ClanEmbedding::new(clans, chiefs.into_iter().map(|e| e.1).collect())?;

    let total = sub_mu.total();
    let spent = embedding.weighted_copies(&sub_mu);
    let cap = total.powf(T::one() + T::one() / from_usize(k));
    if !leq(spent, cap) {
        return Err(Error::defect(format!("measure bound: sum mu|f| = {spent} > mu(X)^(1+1/k) = {cap}")));
    }
    if params.verify {
        let bound = distortion_bound(k, params.variant);
        let report = verify_clan_distortion(&sub, Host::Ultrametric(&ultrametric), &embedding, bound)?;
        report.ensure()?;
    }
    Ok(UltraClan { ultrametric, embedding, trace })
}

fn restrict<T: Scalar>(m: &MetricSpace<T>, mu: &Measure<T>, subset: &[usize]) -> (MetricSpace<T>, Measure<T>) {
    if subset.len() == m.n() {
        return (m.clone(), mu.clone());
    }
    let rows = subset.iter().map(|&x| subset.iter().map(|&y| m.d(x, y)).collect()).collect();
    let sub = MetricSpace::from_rows(rows).expect("restriction of a metric is a metric");
    let sub_mu = Measure::ge1(subset.iter().map(|&x| mu.get(x)).collect()).expect("restriction of a ge1 measure");
    (sub, sub_mu)
}

/// Clan embedding for a probability measure. Case k: distortion 16k and
/// Σμ(x)|f(x)| ≤ 2(2n)^{1/k}. Case ε: distortion 16k' with
/// k' = ⌈ln(2n)/ln(1+ε/2)⌉ and Σμ(x)|f(x)| ≤ 1+ε.
pub fn clan_embed_probability<T: Scalar>(
    m: &MetricSpace<T>,
    mu: &Measure<T>,
    params: &ClanParams<T>,
) -> Result<(Ultrametric<T>, ClanEmbedding)> {
    params.mode.validate()?;
    mu.require(MeasureKind::Probability)?;
    let n = m.n();
    if mu.len() != n {
        return Err(Error::invalid(format!("measure has {} points, metric has {n}", mu.len())));
    }
    let lifted = lift(mu);
    let k = params.mode.internal_k(n);
    let inner = ClanParams { mode: Mode::K(k), ..*params };
    let (u, emb) = clan_embed_ultrametric(m, &m.points(), &lifted, &inner)?;
    check_probability_bounds(n, mu, &emb, params.mode)?;
    Ok((u, emb))
}

/// μ̃_{≥1}(x) = 2n(1/(2n) + μ(x)/2) = 1 + nμ(x)
pub(crate) fn lift<T: Scalar>(mu: &Measure<T>) -> Measure<T> {
    let n: T = from_usize(mu.len());
    Measure::ge1(mu.values().iter().map(|&p| T::one() + n * p).collect()).expect("lifted measure is ge1")
}

pub(crate) fn check_probability_bounds<T: Scalar>(n: usize, mu: &Measure<T>, emb: &ClanEmbedding, mode: Mode<T>) -> Result<()> {
    let two_n: T = from_usize(2 * n);
    let k = mode.internal_k(n);
    let expected = emb.weighted_copies(mu);
    let total: T = from_usize(emb.total_copies());
    let total_cap = two_n.powf(T::one() + T::one() / from_usize(k));
    if !leq(total, total_cap) {
        return Err(Error::defect(format!("copy count: |f(X)| = {total} > (2n)^(1+1/k) = {total_cap}")));
    }
    match mode {
        Mode::K(k) => {
            let cap = sc::<T>(2.0) * two_n.powf(T::one() / from_usize(k));
            if !leq(expected, cap) {
                return Err(Error::defect(format!("expected clan size {expected} > 2(2n)^(1/k) = {cap}")));
            }
        }
        Mode::Eps(eps) => {
            let cap = T::one() + eps;
            if !leq(expected, cap) {
                return Err(Error::defect(format!("expected clan size {expected} > 1+eps = {cap}")));
            }
            let per_point = (T::one() + eps) * from_usize(n) + T::one();
            let worst: T = from_usize(emb.max_clan());
            if !leq(worst, per_point) {
                return Err(Error::defect(format!("clan size {worst} > (1+eps)n+1 = {per_point}")));
            }
        }
    }
    Ok(())
}
