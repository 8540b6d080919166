use serde::{Deserialize, Serialize};

use crate::FieldsError;

/// One periodic axis `[lower, upper)` sampled at `points` nodes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    pub points: usize,
    pub lower: f64,
    pub upper: f64,
}

impl Axis {
    pub fn new(points: usize, lower: f64, upper: f64) -> Self {
        Axis { points, lower, upper }
    }

    pub fn extent(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn spacing(&self) -> f64 {
        self.extent() / self.points as f64
    }

    pub fn coord(&self, j: usize) -> f64 {
        self.lower + j as f64 * self.spacing()
    }

    pub fn coords(&self) -> Vec<f64> {
        (0..self.points).map(|j| self.coord(j)).collect()
    }

    fn validate(&self, which: usize) -> Result<(), FieldsError> {
        let bad = |why: String| Err(FieldsError::InvalidGrid(format!("axis {which}: {why}")));
        if self.points < 8 || !self.points.is_power_of_two() {
            return bad(format!("{} points; need a power of two >= 8", self.points));
        }
        if !(self.lower.is_finite() && self.upper.is_finite()) || self.extent() <= 0.0 {
            return bad(format!("bounds [{}, {}) are not an interval", self.lower, self.upper));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GridSpec {
    axes: Vec<Axis>,
}

/// Uniform periodic grid in one or two dimensions, stored row-major
/// (the last axis varies fastest).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GridSpec", into = "GridSpec")]
pub struct Grid {
    axes: Vec<Axis>,
}

impl TryFrom<GridSpec> for Grid {
    type Error = FieldsError;
    fn try_from(s: GridSpec) -> Result<Self, FieldsError> {
        Grid::new(s.axes)
    }
}

impl From<Grid> for GridSpec {
    fn from(g: Grid) -> Self {
        GridSpec { axes: g.axes }
    }
}

impl Grid {
    pub fn new(axes: Vec<Axis>) -> Result<Self, FieldsError> {
        if !(1..=2).contains(&axes.len()) {
            return Err(FieldsError::InvalidGrid(format!("{} axes; need 1 or 2", axes.len())));
        }
        for (i, a) in axes.iter().enumerate() {
            a.validate(i)?;
        }
        Ok(Grid { axes })
    }

    pub fn line(points: usize, lower: f64, upper: f64) -> Result<Self, FieldsError> {
        Grid::new(vec![Axis::new(points, lower, upper)])
    }

    pub fn plane(x: Axis, y: Axis) -> Result<Self, FieldsError> {
        Grid::new(vec![x, y])
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn axis(&self, a: usize) -> Result<&Axis, FieldsError> {
        self.axes.get(a).ok_or(FieldsError::BadAxis { axis: a, dim: self.dim() })
    }

    pub fn len(&self) -> usize {
        self.axes.iter().map(|a| a.points).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Volume element `h_x` or `h_x h_y`.
    pub fn cell_volume(&self) -> f64 {
        self.axes.iter().map(Axis::spacing).product()
    }

    /// Product of axis lengths after `axis` (the stride of `axis`).
    pub(crate) fn stride(&self, axis: usize) -> usize {
        self.axes[axis + 1..].iter().map(|a| a.points).product()
    }

    /// Per-axis node indices of flat point `p`.
    pub fn multi_index(&self, p: usize) -> Vec<usize> {
        let mut rest = p;
        let mut out = vec![0; self.dim()];
        for a in (0..self.dim()).rev() {
            let n = self.axes[a].points;
            out[a] = rest % n;
            rest /= n;
        }
        out
    }

    pub fn flat_index(&self, idx: &[usize]) -> usize {
        idx.iter().zip(&self.axes).fold(0, |acc, (i, a)| acc * a.points + i)
    }

    /// Coordinates of flat point `p`.
    pub fn point(&self, p: usize) -> Vec<f64> {
        self.multi_index(p).iter().zip(&self.axes).map(|(&j, a)| a.coord(j)).collect()
    }

    /// Iterate over every line parallel to `axis`, yielding the flat indices
    /// of its nodes in order.
    pub(crate) fn lines(&self, axis: usize) -> impl Iterator<Item = Vec<usize>> + '_ {
        let n = self.axes[axis].points;
        let inner = self.stride(axis);
        let outer = self.len() / (n * inner);
        (0..outer).flat_map(move |o| {
            (0..inner).map(move |i| (0..n).map(|j| o * n * inner + j * inner + i).collect())
        })
    }
}
