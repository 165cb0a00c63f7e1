use std::path::Path;

use crate::error::{Error, Result};
use crate::scalar::{from_usize, sc, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasureKind {
    /// every value at least 1
    Ge1,
    /// values sum to 1
    Probability,
}

/// Nonnegative per-point weights.
#[derive(Debug, Clone, PartialEq)]
pub struct Measure<T> {
    values: Vec<T>,
    kind: MeasureKind,
}

impl<T: Scalar> Measure<T> {
    pub fn ge1(values: Vec<T>) -> Result<Self> {
        if let Some((i, v)) = values.iter().enumerate().find(|(_, v)| !(v.is_finite() && **v >= T::one())) {
            return Err(Error::invalid(format!("ge1 measure has value {v} < 1 at point {i}")));
        }
        Ok(Measure { values, kind: MeasureKind::Ge1 })
    }

    pub fn probability(values: Vec<T>) -> Result<Self> {
        if let Some((i, v)) = values.iter().enumerate().find(|(_, v)| !(v.is_finite() && **v >= T::zero())) {
            return Err(Error::invalid(format!("probability measure has invalid value {v} at point {i}")));
        }
        let total = values.iter().fold(T::zero(), |a, &b| a + b);
        if (total - T::one()).abs() > sc(T::MEASURE_TOL) {
            return Err(Error::invalid(format!("probability measure sums to {total}")));
        }
        Ok(Measure { values, kind: MeasureKind::Probability })
    }

    /// All-ones ge1 measure.
    pub fn ones(n: usize) -> Self {
        Measure { values: vec![T::one(); n], kind: MeasureKind::Ge1 }
    }

    pub fn uniform(n: usize) -> Self {
        Measure { values: vec![T::one() / from_usize(n); n], kind: MeasureKind::Probability }
    }

    /// Reads "id value" lines; ids must cover 0..n-1 exactly once. The kind
    /// is ge1 when every value is at least 1, probability otherwise.
    pub fn parse(text: &str, n: usize) -> Result<Self> {
        let mut values: Vec<Option<T>> = vec![None; n];
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |msg: &str| Error::Parse { line: i + 1, msg: format!("{msg}: {line:?}") };
            let f: Vec<&str> = line.split_whitespace().collect();
            if f.len() != 2 {
                return Err(err("expected \"id value\""));
            }
            let id: usize = f[0].parse().map_err(|_| err("bad point id"))?;
            let v: f64 = f[1].parse().map_err(|_| err("bad value"))?;
            if id >= n {
                return Err(err("point id out of range"));
            }
            if values[id].replace(T::from_f64(v).ok_or_else(|| err("bad value"))?).is_some() {
                return Err(err("duplicate point id"));
            }
        }
        let values = values
            .into_iter()
            .enumerate()
            .map(|(i, v)| v.ok_or_else(|| Error::invalid(format!("measure missing point {i}"))))
            .collect::<Result<Vec<T>>>()?;
        if values.iter().all(|&v| v >= T::one()) {
            Self::ge1(values)
        } else {
            Self::probability(values)
        }
    }

    pub fn load(path: impl AsRef<Path>, n: usize) -> Result<Self> {
        let path = path.as_ref();
        if !path.exists() {
            return Err(Error::NotFound(path.display().to_string()));
        }
        Self::parse(&std::fs::read_to_string(path)?, n)
    }

    pub fn kind(&self) -> MeasureKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn get(&self, x: usize) -> T {
        self.values[x]
    }

    pub fn total(&self) -> T {
        self.values.iter().fold(T::zero(), |a, &b| a + b)
    }

    /// μ(A)
    pub fn of(&self, subset: &[usize]) -> T {
        subset.iter().fold(T::zero(), |a, &x| a + self.values[x])
    }

    pub fn require(&self, kind: MeasureKind) -> Result<()> {
        if self.kind == kind {
            Ok(())
        } else {
            Err(Error::invalid(format!("expected a {kind:?} measure, got {:?}", self.kind)))
        }
    }
}
