//! Nodal fields on the meridian grid.

use std::sync::Arc;

use super::grid::MeridianGrid;
use crate::error::{Error, Result};
use crate::quadrature::MeridianPoint;

/// An even axisymmetric function on S^{n-1}, stored by its node values.
#[derive(Clone, Debug)]
pub struct AxiFn {
    grid: Arc<MeridianGrid>,
    values: Vec<f64>,
}

impl AxiFn {
    pub fn new(grid: Arc<MeridianGrid>, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Domain(format!(
                "field has {} values for a grid of {} nodes",
                values.len(),
                grid.len()
            )));
        }
        Ok(AxiFn { grid, values })
    }

    pub fn from_fn(grid: &Arc<MeridianGrid>, f: impl Fn(MeridianPoint) -> f64) -> Self {
        let values = (0..grid.len()).map(|i| f(grid.point(i))).collect();
        AxiFn {
            grid: grid.clone(),
            values,
        }
    }

    pub fn constant(grid: &Arc<MeridianGrid>, c: f64) -> Self {
        AxiFn {
            grid: grid.clone(),
            values: vec![c; grid.len()],
        }
    }

    pub fn grid(&self) -> &Arc<MeridianGrid> {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        AxiFn {
            grid: self.grid.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn zip_with(&self, other: &AxiFn, f: impl Fn(f64, f64) -> f64) -> Self {
        debug_assert_eq!(self.len(), other.len());
        AxiFn {
            grid: self.grid.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, lambda: f64) -> Self {
        self.map(|v| lambda * v)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn integral(&self) -> Result<f64> {
        self.grid.integrate(&self.values)
    }

    /// θ-derivatives of the interpolant at the nodes.
    pub fn derivatives(&self) -> (Vec<f64>, Vec<f64>) {
        self.grid.derivatives(&self.values)
    }

    pub fn interpolant(&self) -> Interpolant {
        Interpolant {
            grid: self.grid.clone(),
            coeffs: self.grid.coefficients(&self.values),
        }
    }

    /// Index of the first non-finite value, if any.
    pub fn first_non_finite(&self) -> Option<usize> {
        self.values.iter().position(|v| !v.is_finite())
    }
}

/// Spectral interpolant of a field, evaluable at any angle.
#[derive(Clone, Debug)]
pub struct Interpolant {
    grid: Arc<MeridianGrid>,
    coeffs: Vec<f64>,
}

impl Interpolant {
    pub fn value(&self, theta: f64) -> f64 {
        self.grid.evaluate(&self.coeffs, theta).0
    }

    /// (f, f′, f″) at `theta`.
    pub fn jet(&self, theta: f64) -> (f64, f64, f64) {
        self.grid.evaluate(&self.coeffs, theta)
    }
}
