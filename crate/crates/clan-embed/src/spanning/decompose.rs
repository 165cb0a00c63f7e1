use super::cluster::{ClusterState, PetalGeometry};
use super::petal::{boundary_edge, create_petal, PetalTriple};
use crate::error::{Error, Result};
use crate::measure::Measure;
use crate::metric::Extent;
use crate::scalar::{leq, sc, Scalar};

/// One carved petal with the cluster its subtree is built on.
#[derive(Debug, Clone)]
pub struct Petal<'g, T> {
    pub triple: PetalTriple<T>,
    /// cluster on the outer petal centered at x_j, path to t_j halved
    pub child: ClusterState<'g, T>,
    /// Δ_{x0} of the remaining set after this petal was removed
    pub remaining_radius: T,
}

#[derive(Debug, Clone)]
pub struct Decomposition<'g, T> {
    pub petals: Vec<Petal<'g, T>>,
    /// whether the first petal was the special one toward the cluster target
    pub special_first: bool,
    /// X0 = Y_s with center x0 and target t0
    pub central: ClusterState<'g, T>,
    /// Δ_{x0}(Y_0), Δ_{x0}(Y_1), …
    pub radii: Vec<T>,
}

/// Carves petals off the cluster until every remaining vertex lies within
/// 3Δ/4 of the center; the remainder is the central cluster.
pub fn petal_decomposition<'g, T: Scalar>(
    state: &ClusterState<'g, T>,
    mu: &Measure<T>,
    k: usize,
) -> Result<Decomposition<'g, T>> {
    let delta = state.delta;
    let x0 = state.center;
    let from_x0 = state.paths_from(x0).dist;
    let mut remaining: Vec<usize> = state.vertices().to_vec();
    let mut petals = Vec::new();
    let mut radii = vec![radius(state)?];
    let mut t0 = state.target;
    let mut special_first = false;

    let d_t = from_x0[state.target];
    if d_t >= delta / sc(2.0) {
        let sub = state.restrict(remaining.clone(), state.target)?;
        let mut triple = create_petal(&sub, mu, d_t - delta / sc(2.0), d_t - delta / sc(4.0), k)?;
        // the first petal hangs off the boundary of its middle set
        triple.connector =
            boundary_edge(&triple.path, &triple.mid).ok_or_else(|| Error::defect("first petal swallowed the center"))?;
        t0 = triple.connector.1;
        special_first = true;
        remaining = carve(state, &remaining, &triple, &from_x0, &mut radii, &mut petals)?;
    }

    let far = sc::<T>(0.75) * delta;
    while let Some(&tj) = remaining.iter().find(|&&v| from_x0[v] > far) {
        let sub = state.restrict(remaining.clone(), tj)?;
        let triple = create_petal(&sub, mu, T::zero(), delta / sc(8.0), k)?;
        remaining = carve(state, &remaining, &triple, &from_x0, &mut radii, &mut petals)?;
    }

    let central = state.restrict(remaining, t0)?;
    Ok(Decomposition { petals, special_first, central, radii })
}

fn radius<T: Scalar>(s: &ClusterState<'_, T>) -> Result<T> {
    match s.radius_from(s.center) {
        Extent::Finite(r) => Ok(r),
        Extent::Infinite => Err(Error::defect("remaining cluster lost connectivity to its center")),
    }
}

/// Removes the inner petal, builds the child cluster on the outer petal,
/// and checks that the remainder keeps every shortest path to the center.
fn carve<'g, T: Scalar>(
    state: &ClusterState<'g, T>,
    remaining: &[usize],
    triple: &PetalTriple<T>,
    from_x0: &[T],
    radii: &mut Vec<T>,
    petals: &mut Vec<Petal<'g, T>>,
) -> Result<Vec<usize>> {
    let next: Vec<usize> = remaining.iter().copied().filter(|v| triple.inner.binary_search(v).is_err()).collect();
    let rest = state.restrict(next.clone(), state.center)?;
    let within = rest.paths_from(state.center).dist;
    for &z in &next {
        if !leq(within[z], from_x0[z]) {
            return Err(Error::defect(format!("path preservation: shortest path from {z} to the center left the remaining set")));
        }
    }
    let r = radius(&rest)?;
    let prev = *radii.last().expect("initial radius");
    if !leq(r, prev) {
        return Err(Error::defect(format!("radius monotonicity: {r} > {prev}")));
    }
    radii.push(r);
    let (xj, _) = triple.connector;
    let child = state.restrict(remaining.to_vec(), triple.target)?.child(triple.outer.clone(), xj, triple.target)?;
    petals.push(Petal { triple: triple.clone(), child, remaining_radius: r });
    Ok(next)
}

/// Entry values of the cluster's own target petal; exposed for tests.
pub fn entry_values<T: Scalar>(state: &ClusterState<'_, T>) -> Result<Vec<T>> {
    Ok(PetalGeometry::new(state)?.entry)
}
