use crate::error::{Error, Result};
use crate::host::{ClanEmbedding, Ultrametric};
use crate::scalar::Scalar;

/// Cheapest walk through copies of `seq` in the ultrametric:
/// min over x'_i ∈ f(x_i) of Σ d_U(x'_i, x'_{i+1}), with one optimal choice.
pub fn path_distortion_eval<T: Scalar>(host: &Ultrametric<T>, emb: &ClanEmbedding, seq: &[usize]) -> Result<(T, Vec<usize>)> {
    if seq.len() < 2 {
        return Err(Error::invalid("path sequence needs at least two points"));
    }
    if let Some(&x) = seq.iter().find(|&&x| x >= emb.n()) {
        return Err(Error::invalid(format!("unknown point {x} in sequence")));
    }
    let mut cost: Vec<T> = vec![T::zero(); emb.clan(seq[0]).len()];
    let mut back: Vec<Vec<usize>> = Vec::with_capacity(seq.len());
    for w in seq.windows(2) {
        let (prev, next) = (emb.clan(w[0]), emb.clan(w[1]));
        let mut next_cost = Vec::with_capacity(next.len());
        let mut choice = Vec::with_capacity(next.len());
        for &b in next {
            let mut best = (T::infinity(), 0);
            for (i, &a) in prev.iter().enumerate() {
                let c = cost[i] + host.distance(a, b)?;
                if c < best.0 {
                    best = (c, i);
                }
            }
            next_cost.push(best.0);
            choice.push(best.1);
        }
        cost = next_cost;
        back.push(choice);
    }
    let (mut idx, total) = cost.iter().enumerate().fold((0, T::infinity()), |acc, (i, &c)| if c < acc.1 { (i, c) } else { acc });
    let mut picks = vec![0; seq.len()];
    for pos in (0..seq.len()).rev() {
        picks[pos] = emb.clan(seq[pos])[idx];
        if pos > 0 {
            idx = back[pos - 1][idx];
        }
    }
    Ok((total, picks))
}
