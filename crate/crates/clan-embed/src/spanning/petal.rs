use super::cluster::{ClusterState, PetalGeometry};
use crate::error::{Error, Result};
use crate::measure::{Measure, MeasureKind};
use crate::scalar::{from_usize, leq, sc, Scalar};

/// Which side of the window the petal radius was searched from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PetalCase {
    /// μ(W_mid) ≤ μ(Y)/2: windows scanned on [lo, mid] by petal measure
    Forward,
    /// otherwise: windows on [mid, hi] by the measure outside the petal
    Backward,
}

/// Three nested petals W_{r−h} ⊆ W_r ⊆ W_{r+h}, h = (hi−lo)/(4Lk).
#[derive(Debug, Clone, PartialEq)]
pub struct PetalTriple<T> {
    pub inner: Vec<usize>,
    pub mid: Vec<usize>,
    pub outer: Vec<usize>,
    pub radius: T,
    pub half_gap: T,
    /// (x_j, y_j): path edge with x_j in the petal and y_j left behind
    pub connector: (usize, usize),
    pub target: usize,
    /// shortest path from the cluster center to the target
    pub path: Vec<usize>,
    pub case: PetalCase,
    pub levels: usize,
}

/// ⌈1 + log₂log₂ μ⌉, at least 1.
pub fn petal_levels<T: Scalar>(mu_total: T) -> usize {
    let two = T::one() + T::one();
    if mu_total <= two {
        return 1;
    }
    let l = (T::one() + mu_total.log2().log2()).ceil();
    l.to_usize().unwrap_or(1).max(1)
}

/// Carves a petal toward the cluster target with radius in [lo, hi],
/// choosing the radius so that the measure grows slowly across the gap.
pub fn create_petal<T: Scalar>(state: &ClusterState<'_, T>, mu: &Measure<T>, lo: T, hi: T, k: usize) -> Result<PetalTriple<T>> {
    mu.require(MeasureKind::Ge1)?;
    if k == 0 {
        return Err(Error::invalid("k must be at least 1"));
    }
    if !(lo >= T::zero() && hi > lo) {
        return Err(Error::invalid(format!("petal window [{lo}, {hi}] is empty or negative")));
    }
    let geo = PetalGeometry::new(state)?;
    let ys = state.vertices();
    let mu_y = mu.of(ys);
    let levels = petal_levels(mu_y);
    let span = hi - lo;
    let mid = lo + span / sc(2.0);
    let width = span / from_usize(2 * levels);
    let h = width / from_usize(2 * k);
    let kk: T = from_usize(k);

    let inside = |r: T| ys.iter().filter(|&&u| geo.entry[u] <= r).fold(T::zero(), |a, &u| a + mu.get(u));
    let outside = |r: T| ys.iter().filter(|&&u| geo.entry[u] > r).fold(T::zero(), |a, &u| a + mu.get(u));

    let forward = inside(mid) <= mu_y / sc(2.0);
    let (case, score): (PetalCase, Box<dyn Fn(T) -> T>) =
        if forward { (PetalCase::Forward, Box::new(inside)) } else { (PetalCase::Backward, Box::new(outside)) };

    // Window [s, e] of width R/(2L). Its "small" end is where the score is
    // smaller: e for Forward (score grows with r), s for Backward.
    let mut window = None;
    for i in 0..levels {
        let (s, e) = match case {
            PetalCase::Forward => {
                (lo + from_usize::<T>(i) * width, if i + 1 == levels { mid } else { lo + from_usize::<T>(i + 1) * width })
            }
            PetalCase::Backward => {
                (mid + from_usize::<T>(i) * width, if i + 1 == levels { hi } else { mid + from_usize::<T>(i + 1) * width })
            }
        };
        let (near, far) = match case {
            PetalCase::Forward => (score(s), score(e)),
            PetalCase::Backward => (score(e), score(s)),
        };
        // Forward: w_a ≥ w_b²/μ(Y) with a = s, b = e. Backward: q_a ≥ q_b²/μ(Y) with b = s, a = e.
        if near * mu_y >= far * far {
            window = Some((s, e, near, far));
            break;
        }
    }
    let (s, e, near, far) =
        window.ok_or_else(|| Error::defect("petal interval: no window satisfies the measure-squaring inequality"))?;
    let growth = (far / near).powf(T::one() / kk);

    let mut candidates: Vec<T> = (0..k).map(|i| s + from_usize::<T>(2 * i + 1) * h).collect();
    let (first, last) = (s + h, e - h);
    candidates.extend(ys.iter().map(|&u| geo.entry[u] + h).filter(|&r| r >= first && r <= last));
    candidates.sort_by(|a, b| a.partial_cmp(b).expect("finite radii"));
    candidates.dedup();

    let feasible = |r: T| match case {
        PetalCase::Forward => score(r + h) <= score(r - h) * growth,
        PetalCase::Backward => score(r - h) <= score(r + h) * growth,
    };
    let radius = candidates
        .into_iter()
        .find(|&r| feasible(r))
        .ok_or_else(|| Error::defect("petal radius: no radius in the window keeps the measure growth below (w_b/w_a)^(1/k)"))?;

    let exponent = T::one() + T::one() / kk;
    let scale = mu_y.powf(T::one() / kk);
    let (lhs, rhs) = match case {
        PetalCase::Forward => (inside(radius + h).powf(exponent), inside(radius - h) * scale),
        PetalCase::Backward => (outside(radius - h).powf(exponent), outside(radius + h) * scale),
    };
    if !leq(lhs, rhs) {
        return Err(Error::defect(format!("petal accounting ({case:?}): {lhs} > {rhs}")));
    }

    let inner = geo.petal(ys, radius - h);
    let mid_set = geo.petal(ys, radius);
    let outer = geo.petal(ys, radius + h);
    let connector = boundary_edge(&geo.path, &outer).ok_or_else(|| Error::defect("petal swallowed the cluster center"))?;
    Ok(PetalTriple {
        inner,
        mid: mid_set,
        outer,
        radius,
        half_gap: h,
        connector,
        target: state.target,
        path: geo.path,
        case,
        levels,
    })
}

/// Edge (x, y) of the center-to-target path where x is the set member
/// closest to the center and y its predecessor outside the set.
pub(crate) fn boundary_edge(path: &[usize], set: &[usize]) -> Option<(usize, usize)> {
    let mut i = path.len();
    while i > 0 && set.binary_search(&path[i - 1]).is_ok() {
        i -= 1;
    }
    if i == 0 || i == path.len() {
        return None;
    }
    Some((path[i], path[i - 1]))
}
