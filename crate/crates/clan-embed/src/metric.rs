use std::path::Path;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{mask, WeightedGraph};
use crate::measure::Measure;
use crate::scalar::{sc, Scalar};

/// Either a finite length or the distinguished infinite value of a
/// disconnected induced subgraph.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Extent<T> {
    Finite(T),
    Infinite,
}

impl<T> Extent<T> {
    pub fn finite(self) -> Option<T> {
        match self {
            Extent::Finite(x) => Some(x),
            Extent::Infinite => None,
        }
    }
}

impl<T: Scalar> Extent<T> {
    fn from_value(x: T) -> Self {
        if x.is_finite() {
            Extent::Finite(x)
        } else {
            Extent::Infinite
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiameterMode {
    /// ambient distances
    Weak,
    /// distances inside the induced subgraph
    Strong,
}

/// Dense table of pairwise distances.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricSpace<T> {
    n: usize,
    dist: Vec<T>,
}

impl<T: Scalar> MetricSpace<T> {
    /// Shortest-path metric of a graph.
    pub fn from_graph(g: &WeightedGraph<T>) -> Self {
        let n = g.n();
        let rows: Vec<Vec<T>> = (0..n).into_par_iter().map(|s| g.dijkstra(s, None, None).dist).collect();
        MetricSpace { n, dist: rows.concat() }
    }

    /// Validates a full matrix: symmetric, zero diagonal, positive finite
    /// off-diagonal entries, triangle inequality up to the scalar slack.
    #[allow(clippy::needless_range_loop)] // symmetric index pairs read clearer than iterators
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::invalid("metric has no points"));
        }
        if let Some(i) = rows.iter().position(|r| r.len() != n) {
            return Err(Error::invalid(format!("metric row {i} has {} entries, expected {n}", rows[i].len())));
        }
        for i in 0..n {
            if rows[i][i] != T::zero() {
                return Err(Error::invalid(format!("metric diagonal entry {i} is nonzero")));
            }
            for j in 0..n {
                if i != j && !(rows[i][j].is_finite() && rows[i][j] > T::zero()) {
                    return Err(Error::invalid(format!("metric entry ({i},{j}) is not positive")));
                }
                if rows[i][j] != rows[j][i] {
                    return Err(Error::invalid(format!("metric is not symmetric at ({i},{j})")));
                }
            }
        }
        let tol = sc::<T>(T::SLACK);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let via = rows[i][k] + rows[k][j];
                    if rows[i][j] > via + tol * via {
                        return Err(Error::invalid(format!("triangle inequality fails for ({i},{k},{j})")));
                    }
                }
            }
        }
        Ok(MetricSpace { n, dist: rows.concat() })
    }

    /// Comma-separated square matrix, one row per line.
    pub fn parse_csv(text: &str) -> Result<Self> {
        let mut rows = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let row = line
                .split(',')
                .map(|f| {
                    f.trim()
                        .parse::<f64>()
                        .ok()
                        .and_then(T::from_f64)
                        .ok_or_else(|| Error::Parse { line: i + 1, msg: format!("bad entry {f:?}") })
                })
                .collect::<Result<Vec<T>>>()?;
            rows.push(row);
        }
        Self::from_rows(rows)
    }

    pub fn load_csv(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        if !path.exists() {
            return Err(Error::NotFound(path.display().to_string()));
        }
        Self::parse_csv(&std::fs::read_to_string(path)?)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn d(&self, x: usize, y: usize) -> T {
        self.dist[x * self.n + y]
    }

    pub fn points(&self) -> Vec<usize> {
        (0..self.n).collect()
    }

    /// B_A(center, r) for A = `subset`, in the order of `subset`.
    pub fn ball(&self, subset: &[usize], center: usize, r: T) -> Result<Vec<usize>> {
        if !subset.contains(&center) {
            return Err(Error::invalid(format!("ball center {center} outside subset")));
        }
        Ok(self.ball_unchecked(subset, center, r))
    }

    pub(crate) fn ball_unchecked(&self, subset: &[usize], center: usize, r: T) -> Vec<usize> {
        subset.iter().copied().filter(|&y| self.d(center, y) <= r).collect()
    }

    pub(crate) fn ball_measure(&self, subset: &[usize], center: usize, r: T, mu: &Measure<T>) -> T {
        subset.iter().filter(|&&y| self.d(center, y) <= r).fold(T::zero(), |a, &y| a + mu.get(y))
    }

    /// Weak diameter: max ambient distance over pairs of `subset`.
    pub fn weak_diameter(&self, subset: &[usize]) -> T {
        let mut best = T::zero();
        for (i, &x) in subset.iter().enumerate() {
            for &y in &subset[i + 1..] {
                best = best.max(self.d(x, y));
            }
        }
        best
    }

    /// Weak or strong diameter; strong requires the graph the metric came from.
    pub fn diameter(&self, subset: &[usize], mode: DiameterMode, g: Option<&WeightedGraph<T>>) -> Result<Extent<T>> {
        if subset.is_empty() {
            return Err(Error::invalid("diameter of an empty set"));
        }
        match mode {
            DiameterMode::Weak => Ok(Extent::Finite(self.weak_diameter(subset))),
            DiameterMode::Strong => {
                let g = g.ok_or_else(|| Error::invalid("strong diameter needs the graph"))?;
                Ok(strong_diameter(g, subset, None))
            }
        }
    }

    /// μ*(A) = max over x in A of μ(B_A(x, diam(A)/4)).
    pub fn mu_star(&self, subset: &[usize], mu: &Measure<T>) -> Result<T> {
        if subset.is_empty() {
            return Err(Error::invalid("mu_star of an empty set"));
        }
        Ok(self.mu_star_unchecked(subset, mu))
    }

    pub(crate) fn mu_star_unchecked(&self, subset: &[usize], mu: &Measure<T>) -> T {
        let r = self.weak_diameter(subset) / sc(4.0);
        subset.iter().map(|&x| self.ball_measure(subset, x, r, mu)).fold(T::zero(), T::max)
    }
}

/// Max induced-subgraph distance over pairs of `subset` under optional
/// edge-weight overrides.
pub fn strong_diameter<T: Scalar>(g: &WeightedGraph<T>, subset: &[usize], weights: Option<&[T]>) -> Extent<T> {
    let allowed = mask(g.n(), subset);
    let mut best = T::zero();
    for &s in subset {
        let sp = g.dijkstra(s, Some(&allowed), weights);
        for &y in subset {
            best = best.max(sp.dist[y]);
        }
        if best.is_infinite() {
            break;
        }
    }
    Extent::from_value(best)
}
