//! The missing-point calculus.
//!
//! Coordinates undefined in either argument contribute nothing to a distance.
//! Dataset "views" are slices of point indices into a [`Dataset`]; every
//! operation here preserves the order of the view it is given.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mask::IndexSet;
use crate::point::{Dataset, MissingPoint, PointView};

/// A k-clustering of a dataset view: centers, one cluster index per point of
/// the view, and the resulting sum of squared distances.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Clustering {
    #[serde(with = "crate::harness::json::centers_serde")]
    pub centers: Vec<MissingPoint>,
    pub assignment: Vec<usize>,
    pub cost: f64,
}

impl Clustering {
    /// Sum of squared distances of each point of `view` to its assigned center.
    pub fn recompute_cost(&self, data: &Dataset, view: &[usize]) -> f64 {
        view.iter()
            .zip(&self.assignment)
            .map(|(&x, &t)| sq_dist_full(data.point(x), self.centers[t].view()))
            .sum()
    }
}

/// `FD(P, I)`: points whose domain lies inside `set`.
pub fn restrict_fd(data: &Dataset, view: &[usize], set: &IndexSet) -> Vec<usize> {
    view.iter().copied().filter(|&x| data.mask(x).is_subset(set)).collect()
}

/// `PD(P, I)`: points defining at least one coordinate of `set`.
pub fn restrict_pd(data: &Dataset, view: &[usize], set: &IndexSet) -> Vec<usize> {
    view.iter().copied().filter(|&x| data.mask(x).intersects(set)).collect()
}

fn check_dims(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::usage(format!("dimension mismatch: {a} vs {b}")));
    }
    Ok(())
}

/// Squared distance restricted to the coordinates of `set`.
pub fn distance_sq_on(x: PointView<'_>, y: PointView<'_>, set: &IndexSet) -> Result<f64> {
    check_dims(x.dim(), y.dim())?;
    check_dims(x.dim(), set.dim())?;
    Ok(sq_dist_on(x, y, set))
}

/// Distance restricted to the coordinates of `set`.
pub fn distance_on(x: PointView<'_>, y: PointView<'_>, set: &IndexSet) -> Result<f64> {
    distance_sq_on(x, y, set).map(f64::sqrt)
}

/// Squared distance over all coordinates.
pub fn distance_sq(x: PointView<'_>, y: PointView<'_>) -> Result<f64> {
    check_dims(x.dim(), y.dim())?;
    Ok(sq_dist_full(x, y))
}

#[inline]
pub(crate) fn sq_dist_on(x: PointView<'_>, y: PointView<'_>, set: &IndexSet) -> f64 {
    let mut acc = 0.0;
    IndexSet::for_each_common(x.mask, y.mask, set, |i| {
        let diff = x.values[i] - y.values[i];
        acc += diff * diff;
    });
    acc
}

#[inline]
pub(crate) fn sq_dist_full(x: PointView<'_>, y: PointView<'_>) -> f64 {
    let mut acc = 0.0;
    IndexSet::for_each_common2(x.mask, y.mask, |i| {
        let diff = x.values[i] - y.values[i];
        acc += diff * diff;
    });
    acc
}

/// `cost_I(P, y)`: sum of squared distances on `set` from the view to `y`.
pub fn cost_on(data: &Dataset, view: &[usize], y: PointView<'_>, set: &IndexSet) -> Result<f64> {
    check_dims(data.dim(), y.dim())?;
    check_dims(data.dim(), set.dim())?;
    Ok(view.iter().map(|&x| sq_dist_on(data.point(x), y, set)).sum())
}

/// `cost(P, y)` over all coordinates.
pub fn cost(data: &Dataset, view: &[usize], y: PointView<'_>) -> Result<f64> {
    check_dims(data.dim(), y.dim())?;
    Ok(view.iter().map(|&x| sq_dist_full(data.point(x), y)).sum())
}

/// Per-coordinate mean over the points defined at that coordinate; undefined
/// where no point of the view is defined.
pub fn centroid(data: &Dataset, view: &[usize]) -> Result<MissingPoint> {
    if view.is_empty() {
        return Err(Error::usage("centroid of an empty set"));
    }
    Ok(centroid_unchecked(data, view))
}

pub(crate) fn centroid_unchecked(data: &Dataset, view: &[usize]) -> MissingPoint {
    let (sums, counts) = coordinate_sums(data, view);
    let mut c = MissingPoint::null(data.dim());
    for (i, (&s, &n)) in sums.iter().zip(&counts).enumerate() {
        if n > 0 {
            c.set(i, s / n as f64);
        }
    }
    c
}

fn coordinate_sums(data: &Dataset, view: &[usize]) -> (Vec<f64>, Vec<usize>) {
    let d = data.dim();
    let mut sums = vec![0.0; d];
    let mut counts = vec![0usize; d];
    for &x in view {
        let p = data.point(x);
        for i in p.mask.iter() {
            sums[i] += p.values[i];
            counts[i] += 1;
        }
    }
    (sums, counts)
}

/// Index and squared distance of the nearest center, lowest index on ties.
#[inline]
pub(crate) fn nearest_center(x: PointView<'_>, centers: &[MissingPoint]) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (t, c) in centers.iter().enumerate() {
        let dist = sq_dist_full(x, c.view());
        if dist < best.1 {
            best = (t, dist);
        }
    }
    best
}

/// Assigns every point of the view to its nearest center.
pub fn voronoi_assign(data: &Dataset, view: &[usize], centers: &[MissingPoint]) -> Result<Clustering> {
    if centers.is_empty() {
        return Err(Error::usage("voronoi assignment needs at least one center"));
    }
    for c in centers {
        check_dims(data.dim(), c.dim())?;
    }
    let mut assignment = Vec::with_capacity(view.len());
    let mut total = 0.0;
    for &x in view {
        let (t, dist) = nearest_center(data.point(x), centers);
        assignment.push(t);
        total += dist;
    }
    Ok(Clustering {
        centers: centers.to_vec(),
        assignment,
        cost: total,
    })
}

/// Fills the undefined coordinates of each center.
///
/// Coordinate `i` of center `t` becomes the mean of coordinate `i` over the
/// points assigned to `t` that define it, else the mean over the whole view,
/// else `0`. Defined coordinates are left alone.
pub fn complete_centers(
    centers: &[MissingPoint],
    data: &Dataset,
    view: &[usize],
    assignment: &[usize],
) -> Vec<MissingPoint> {
    let d = data.dim();
    let k = centers.len();
    let (global_sums, global_counts) = coordinate_sums(data, view);
    let mut sums = vec![vec![0.0; d]; k];
    let mut counts = vec![vec![0usize; d]; k];
    for (&x, &t) in view.iter().zip(assignment) {
        let p = data.point(x);
        for i in p.mask.iter() {
            sums[t][i] += p.values[i];
            counts[t][i] += 1;
        }
    }
    centers
        .iter()
        .enumerate()
        .map(|(t, c)| {
            let mut filled = c.clone();
            for i in c.domain().complement().iter() {
                let value = if counts[t][i] > 0 {
                    sums[t][i] / counts[t][i] as f64
                } else if global_counts[i] > 0 {
                    global_sums[i] / global_counts[i] as f64
                } else {
                    0.0
                };
                filled.set(i, value);
            }
            filled
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(entries: &[Option<f64>]) -> MissingPoint {
        MissingPoint::from_options(entries)
    }

    fn data(points: &[&[Option<f64>]]) -> Dataset {
        Dataset::new(points.iter().map(|p| pt(p)).collect()).unwrap()
    }

    fn set(dim: usize, one_based: &[usize]) -> IndexSet {
        IndexSet::from_indices(dim, one_based.iter().map(|i| i - 1))
    }

    const X: Option<f64> = None;

    #[test]
    fn fd_examples() {
        let p = data(&[&[Some(1.0), X], &[Some(1.0), Some(2.0)]]);
        assert_eq!(restrict_fd(&p, &[0, 1], &set(2, &[1])), vec![0]);
        assert_eq!(restrict_fd(&p, &[0, 1], &set(2, &[1, 2])), vec![0, 1]);
        let q = data(&[&[Some(1.0), Some(2.0)], &[X, X]]);
        assert_eq!(restrict_fd(&q, &[0], &set(2, &[])), Vec::<usize>::new());
        assert_eq!(restrict_fd(&q, &[1], &set(2, &[])), vec![1]);
    }

    #[test]
    fn pd_examples() {
        let p = data(&[&[Some(1.0), X], &[X, Some(2.0)], &[X, X]]);
        assert_eq!(restrict_pd(&p, &[0, 1], &set(2, &[1])), vec![0]);
        assert_eq!(restrict_pd(&p, &[0, 1, 2], &set(2, &[])), Vec::<usize>::new());
        assert_eq!(restrict_pd(&p, &[0, 1, 2], &set(2, &[1, 2])), vec![0, 1]);
    }

    #[test]
    fn distance_examples() {
        let full = set(2, &[1, 2]);
        let d0 = distance_on(pt(&[Some(1.0), X]).view(), pt(&[X, Some(2.0)]).view(), &full).unwrap();
        assert_eq!(d0, 0.0);
        let d1 = distance_on(
            pt(&[Some(0.0), Some(0.0)]).view(),
            pt(&[Some(3.0), Some(4.0)]).view(),
            &full,
        )
        .unwrap();
        assert_eq!(d1, 5.0);
        let d2 = distance_on(
            pt(&[Some(3.0), Some(1.0), X]).view(),
            pt(&[Some(0.0), Some(1.0), Some(7.0)]).view(),
            &set(3, &[1, 2]),
        )
        .unwrap();
        assert_eq!(d2, 3.0);
    }

    #[test]
    fn distance_dimension_mismatch() {
        let a = pt(&[Some(1.0)]);
        let b = pt(&[Some(1.0), Some(2.0)]);
        assert!(matches!(
            distance_on(a.view(), b.view(), &set(2, &[1])),
            Err(Error::Usage(_))
        ));
        assert!(matches!(distance_sq(a.view(), b.view()), Err(Error::Usage(_))));
    }

    #[test]
    fn cost_examples() {
        let p = data(&[&[Some(0.0), Some(0.0)], &[Some(2.0), Some(0.0)]]);
        let y = pt(&[Some(1.0), Some(0.0)]);
        assert_eq!(cost_on(&p, &[0, 1], y.view(), &IndexSet::full(2)).unwrap(), 2.0);
        assert_eq!(cost_on(&p, &[], y.view(), &IndexSet::full(2)).unwrap(), 0.0);
        let q = data(&[&[X, Some(3.0)]]);
        assert_eq!(cost(&q, &[0], pt(&[Some(5.0), Some(1.0)]).view()).unwrap(), 4.0);
        assert!(cost(&q, &[0], pt(&[Some(5.0)]).view()).is_err());
    }

    #[test]
    fn centroid_examples() {
        let p = data(&[&[Some(1.0), X], &[Some(3.0), Some(4.0)]]);
        assert_eq!(centroid(&p, &[0, 1]).unwrap(), pt(&[Some(2.0), Some(4.0)]));
        let q = data(&[&[X, X]]);
        assert_eq!(centroid(&q, &[0]).unwrap(), pt(&[X, X]));
        let r = data(&[&[Some(0.0), Some(0.0)], &[Some(2.0), Some(0.0)], &[X, Some(6.0)]]);
        assert_eq!(centroid(&r, &[0, 1, 2]).unwrap(), pt(&[Some(1.0), Some(2.0)]));
        assert!(matches!(centroid(&r, &[]), Err(Error::Usage(_))));
    }

    #[test]
    fn voronoi_examples() {
        let p = data(&[&[Some(0.0)], &[Some(10.0)]]);
        let c = voronoi_assign(&p, &[0, 1], &[pt(&[Some(1.0)]), pt(&[Some(9.0)])]).unwrap();
        assert_eq!(c.assignment, vec![0, 1]);
        assert_eq!(c.cost, 2.0);

        let q = data(&[&[X, X]]);
        let c = voronoi_assign(&q, &[0], &[pt(&[Some(3.0), Some(1.0)]), pt(&[Some(0.0), Some(0.0)])]).unwrap();
        assert_eq!(c.assignment, vec![0]);
        assert_eq!(c.cost, 0.0);

        let r = data(&[&[Some(0.0), X]]);
        let c = voronoi_assign(&r, &[0], &[pt(&[Some(5.0), Some(0.0)]), pt(&[Some(1.0), Some(99.0)])]).unwrap();
        assert_eq!(c.assignment, vec![1]);
        assert_eq!(c.cost, 1.0);

        assert!(matches!(voronoi_assign(&r, &[0], &[]), Err(Error::Usage(_))));
    }

    #[test]
    fn voronoi_ties_pick_lowest_index() {
        let p = data(&[&[Some(5.0)]]);
        let c = voronoi_assign(&p, &[0], &[pt(&[Some(4.0)]), pt(&[Some(6.0)])]).unwrap();
        assert_eq!(c.assignment, vec![0]);
    }

    #[test]
    fn completion_examples() {
        let p = data(&[&[Some(2.0), X], &[Some(4.0), X]]);
        let filled = complete_centers(&[pt(&[X, Some(5.0)])], &p, &[0, 1], &[0, 0]);
        assert_eq!(filled[0], pt(&[Some(3.0), Some(5.0)]));

        let untouched = pt(&[Some(1.0), Some(1.0)]);
        assert_eq!(
            complete_centers(std::slice::from_ref(&untouched), &p, &[0, 1], &[0, 0])[0],
            untouched
        );

        let q = data(&[&[Some(7.0)]]);
        let filled = complete_centers(&[pt(&[Some(0.0)]), pt(&[X])], &q, &[0], &[0]);
        assert_eq!(filled[1], pt(&[Some(7.0)]));

        let r = data(&[&[X, Some(1.0)]]);
        let filled = complete_centers(&[pt(&[X, X])], &r, &[0], &[0]);
        assert_eq!(filled[0], pt(&[Some(0.0), Some(1.0)]));
    }
}
