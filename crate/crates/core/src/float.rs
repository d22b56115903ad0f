//! Finite floating-point vectors and the shared tolerance policy.

use std::fmt;
use std::ops::Index;

use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{Error, Result};

/// Fixed-dimension vector of finite doubles. NaN and infinities are rejected
/// at construction so downstream arithmetic can assume finite inputs.
#[derive(Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct FloatVec(Vec<f64>);

impl FloatVec {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::invalid("zero-dimensional vector"));
        }
        if let Some(bad) = coords.iter().find(|c| !c.is_finite()) {
            return Err(Error::invalid(format!("non-finite coordinate {bad}")));
        }
        Ok(FloatVec(coords))
    }

    /// For intermediate results that may legitimately blow up (diverging
    /// iterations); the caller is responsible for checking `is_finite`.
    pub(crate) fn raw(coords: Vec<f64>) -> Self {
        FloatVec(coords)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }

    pub fn dot(&self, other: &FloatVec) -> f64 {
        debug_assert_eq!(self.dim(), other.dim());
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn dist(&self, other: &FloatVec) -> f64 {
        self.sub(other).norm()
    }

    pub fn add(&self, other: &FloatVec) -> FloatVec {
        FloatVec(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &FloatVec) -> FloatVec {
        FloatVec(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: f64) -> FloatVec {
        FloatVec(self.0.iter().map(|a| a * k).collect())
    }

    /// `self + k * other`, the workhorse of the iteration kernels.
    pub fn axpy(&self, k: f64, other: &FloatVec) -> FloatVec {
        FloatVec(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + k * b)
                .collect(),
        )
    }

    pub fn zeros(dim: usize) -> FloatVec {
        FloatVec(vec![0.0; dim])
    }

    pub fn unit(dim: usize, axis: usize) -> FloatVec {
        let mut v = vec![0.0; dim];
        v[axis] = 1.0;
        FloatVec(v)
    }
}

impl Index<usize> for FloatVec {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl fmt::Debug for FloatVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl<'de> Deserialize<'de> for FloatVec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let coords = Vec::<f64>::deserialize(deserializer)?;
        FloatVec::new(coords).map_err(serde::de::Error::custom)
    }
}

/// Geometric tolerance shared by the floating-point modules.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub eps: f64,
}

impl Tolerance {
    pub fn new(eps: f64) -> Result<Self> {
        if eps.is_nan() || eps <= 0.0 || eps >= 1.0 {
            return Err(Error::invalid(format!(
                "tolerance must lie in (0, 1), got {eps}"
            )));
        }
        Ok(Tolerance { eps })
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { eps: 1e-9 }
    }
}
