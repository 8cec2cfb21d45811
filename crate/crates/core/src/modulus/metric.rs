use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Nonnegative weight per vertex index.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexMetric {
    values: Vec<f64>,
}

impl VertexMetric {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(i) = values.iter().position(|m| !(*m >= 0.0 && m.is_finite())) {
            return Err(invalid(format!("metric value at vertex {i} must be finite and nonnegative")));
        }
        Ok(Self { values })
    }

    pub fn uniform(n: usize, value: f64) -> Result<Self> {
        Self::new(vec![value; n])
    }

    pub(crate) fn from_raw(values: Vec<f64>) -> Self {
        debug_assert!(values.iter().all(|m| *m >= 0.0));
        Self { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, v: usize) -> f64 {
        self.values[v]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `Σ m(v)^p`.
    pub fn energy(&self, p: f64) -> f64 {
        self.values.iter().map(|m| m.powf(p)).sum()
    }

    /// Copy with every entry below `floor` raised to `floor`.
    pub fn floored(&self, floor: f64) -> Self {
        Self {
            values: self.values.iter().map(|&m| m.max(floor)).collect(),
        }
    }
}
