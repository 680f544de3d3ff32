//! Functions sampled on a grid.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::output::{Header, Table};

/// Which density multiplies the samples when they are integrated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasureTag {
    Lebesgue,
    WeightA,
    PlancherelSigma,
}

/// Complex samples on a strictly increasing grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledFunction1D {
    pub grid: Vec<f64>,
    pub values: Vec<Complex64>,
    pub measure_tag: MeasureTag,
}

pub(crate) fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.iter().any(|x| !x.is_finite()) {
        return Err(Error::domain("grid contains a non-finite point"));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::domain("grid must be strictly increasing"));
    }
    Ok(())
}

impl SampledFunction1D {
    pub fn new(grid: Vec<f64>, values: Vec<Complex64>, measure_tag: MeasureTag) -> Result<Self> {
        check_grid(&grid)?;
        if grid.len() != values.len() {
            return Err(Error::domain(format!(
                "grid has {} points but there are {} values",
                grid.len(),
                values.len()
            )));
        }
        Ok(Self { grid, values, measure_tag })
    }

    /// Sample `f` on `grid`.
    pub fn from_fn<F>(grid: Vec<f64>, measure_tag: MeasureTag, f: F) -> Result<Self>
    where
        F: Fn(f64) -> Result<Complex64> + Sync,
    {
        check_grid(&grid)?;
        let values = crate::quadrature::evaluate_on(f, &grid)?;
        Ok(Self { grid, values, measure_tag })
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    /// Four-point Lagrange interpolation; `None` outside the grid.
    pub fn interpolate(&self, x: f64) -> Option<Complex64> {
        interpolate(&self.grid, &self.values, x)
    }

    /// Largest `|self - other|` over the shared grid.
    pub fn sup_distance(&self, other: &Self) -> Result<f64> {
        if self.grid != other.grid {
            return Err(Error::domain("grids differ"));
        }
        Ok(self.values.iter().zip(&other.values).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max))
    }

    pub fn table(&self) -> Table {
        Table::new(
            &["grid", "re", "im"],
            self.grid.iter().zip(&self.values).map(|(x, v)| vec![*x, v.re, v.im]).collect(),
        )
    }

    pub fn to_csv(&self, header: &Header) -> String {
        self.table().to_csv(header)
    }
}

/// Uniform grid of `n` points on `[a, b]`.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![a],
        _ => (0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect(),
    }
}

/// Four-point Lagrange interpolation on a strictly increasing grid; `None`
/// outside `[grid[0], grid[n-1]]`.
pub fn interpolate(grid: &[f64], values: &[Complex64], x: f64) -> Option<Complex64> {
    let n = grid.len();
    if n == 0 || x < grid[0] || x > grid[n - 1] {
        return None;
    }
    if n < 4 {
        if n == 1 {
            return Some(values[0]);
        }
        let k = grid.partition_point(|g| *g <= x).clamp(1, n - 1);
        let t = (x - grid[k - 1]) / (grid[k] - grid[k - 1]);
        return Some(values[k - 1] * (1.0 - t) + values[k] * t);
    }
    let k = grid.partition_point(|g| *g <= x);
    let start = k.saturating_sub(2).min(n - 4);
    let mut acc = Complex64::new(0.0, 0.0);
    for i in start..start + 4 {
        if grid[i] == x {
            return Some(values[i]);
        }
        let mut l = 1.0;
        for j in start..start + 4 {
            if j != i {
                l *= (x - grid[j]) / (grid[i] - grid[j]);
            }
        }
        acc += values[i] * l;
    }
    Some(acc)
}
