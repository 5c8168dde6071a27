//! Points with missing coordinates and datasets of them.

use crate::error::{Error, Result};
use crate::mask::IndexSet;

/// A point of `d`-space in which some coordinates may be undefined.
///
/// Values at undefined coordinates are stored as `0.0` and never read.
#[derive(Clone, Debug, PartialEq)]
pub struct MissingPoint {
    values: Vec<f64>,
    mask: IndexSet,
}

/// Borrowed form of a point, either owned or a dataset row.
#[derive(Clone, Copy, Debug)]
pub struct PointView<'a> {
    pub values: &'a [f64],
    pub mask: &'a IndexSet,
}

impl MissingPoint {
    /// The point with every coordinate undefined.
    pub fn null(dim: usize) -> Self {
        MissingPoint {
            values: vec![0.0; dim],
            mask: IndexSet::empty(dim),
        }
    }

    pub fn complete(values: Vec<f64>) -> Self {
        let mask = IndexSet::full(values.len());
        MissingPoint { values, mask }
    }

    pub fn from_options(entries: &[Option<f64>]) -> Self {
        let mut p = MissingPoint::null(entries.len());
        for (i, e) in entries.iter().enumerate() {
            if let Some(v) = *e {
                p.set(i, v);
            }
        }
        p
    }

    /// Builds a point from raw values and a mask; values under undefined
    /// coordinates are zeroed.
    pub fn from_parts(mut values: Vec<f64>, mask: IndexSet) -> Result<Self> {
        if mask.dim() != values.len() {
            return Err(Error::usage(format!(
                "mask dimension {} does not match {} values",
                mask.dim(),
                values.len()
            )));
        }
        for (i, v) in values.iter_mut().enumerate() {
            if !mask.contains(i) {
                *v = 0.0;
            }
        }
        Ok(MissingPoint { values, mask })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// `dom(u)`: the defined coordinates.
    #[inline]
    pub fn domain(&self) -> &IndexSet {
        &self.mask
    }

    #[inline]
    pub fn get(&self, i: usize) -> Option<f64> {
        self.mask.contains(i).then(|| self.values[i])
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: f64) {
        self.values[i] = value;
        self.mask.insert(i);
    }

    pub fn unset(&mut self, i: usize) {
        self.values[i] = 0.0;
        self.mask.remove(i);
    }

    pub fn is_null(&self) -> bool {
        self.mask.is_empty()
    }

    pub fn is_complete(&self) -> bool {
        self.mask.is_full()
    }

    /// Raw storage, including zero placeholders.
    pub fn raw_values(&self) -> &[f64] {
        &self.values
    }

    pub fn to_options(&self) -> Vec<Option<f64>> {
        (0..self.dim()).map(|i| self.get(i)).collect()
    }

    #[inline]
    pub fn view(&self) -> PointView<'_> {
        PointView {
            values: &self.values,
            mask: &self.mask,
        }
    }
}

impl PointView<'_> {
    #[inline]
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    #[inline]
    pub fn get(&self, i: usize) -> Option<f64> {
        self.mask.contains(i).then(|| self.values[i])
    }

    pub fn to_owned(&self) -> MissingPoint {
        MissingPoint {
            values: self.values.to_vec(),
            mask: self.mask.clone(),
        }
    }
}

/// An indexed collection of points sharing one dimension.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    dim: usize,
    values: Vec<f64>,
    masks: Vec<IndexSet>,
    delta: usize,
}

impl Dataset {
    pub fn new(points: Vec<MissingPoint>) -> Result<Self> {
        let dim = points.first().map_or(0, MissingPoint::dim);
        Self::with_dim(dim, points)
    }

    /// Like [`Dataset::new`] but allows an empty collection of known dimension.
    pub fn with_dim(dim: usize, points: Vec<MissingPoint>) -> Result<Self> {
        let mut values = Vec::with_capacity(points.len() * dim);
        let mut masks = Vec::with_capacity(points.len());
        let mut delta = 0;
        for (idx, p) in points.into_iter().enumerate() {
            if p.dim() != dim {
                return Err(Error::usage(format!(
                    "point {idx} has dimension {}, expected {dim}",
                    p.dim()
                )));
            }
            delta = delta.max(dim - p.mask.len());
            values.extend_from_slice(&p.values);
            masks.push(p.mask);
        }
        Ok(Dataset {
            dim,
            values,
            masks,
            delta,
        })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.masks.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.masks.is_empty()
    }

    /// Largest number of undefined coordinates over all points.
    #[inline]
    pub fn delta(&self) -> usize {
        self.delta
    }

    /// Largest number of undefined coordinates over points that define at
    /// least one coordinate.
    pub fn delta_non_null(&self) -> usize {
        self.masks
            .iter()
            .filter(|m| !m.is_empty())
            .map(|m| self.dim - m.len())
            .max()
            .unwrap_or(0)
    }

    #[inline]
    pub fn point(&self, i: usize) -> PointView<'_> {
        PointView {
            values: &self.values[i * self.dim..(i + 1) * self.dim],
            mask: &self.masks[i],
        }
    }

    #[inline]
    pub fn mask(&self, i: usize) -> &IndexSet {
        &self.masks[i]
    }

    pub fn points(&self) -> impl Iterator<Item = PointView<'_>> + '_ {
        (0..self.len()).map(move |i| self.point(i))
    }

    pub fn to_points(&self) -> Vec<MissingPoint> {
        self.points().map(|p| p.to_owned()).collect()
    }

    /// All point indices, `0..n`.
    pub fn all_indices(&self) -> Vec<usize> {
        (0..self.len()).collect()
    }
}
