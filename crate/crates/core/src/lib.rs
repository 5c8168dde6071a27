//! k-means clustering for points with missing coordinates.
//!
//! A point may leave any of its coordinates unspecified. Geometrically such a
//! point is an axis-parallel affine subspace, and its distance to another point
//! is measured only over the coordinates both of them define. This crate
//! provides:
//!
//! - the missing-point calculus ([`calculus`]): domains, restrictions,
//!   distances, costs, centroids and Voronoi assignment;
//! - the two randomized center estimators used by the search ([`sampling`]);
//! - the linear-time branch-and-prune approximation search and a
//!   ground-truth-guided idealized variant ([`solver`]);
//! - an exact brute-force optimum and a Lloyd baseline ([`oracle`]);
//! - file formats, instance generators and the CLI driver ([`harness`]).
//!
//! ```
//! use missing_kmeans::{Dataset, MissingPoint, solver::{run_trials, SolveParams}};
//!
//! let data = Dataset::new(vec![
//!     MissingPoint::from_options(&[Some(0.0), None]),
//!     MissingPoint::from_options(&[Some(0.0), Some(0.0)]),
//!     MissingPoint::from_options(&[None, Some(9.0)]),
//!     MissingPoint::from_options(&[Some(9.0), Some(9.0)]),
//! ]).unwrap();
//! let params = SolveParams::new(2, 1.0).with_repeats(4).with_seed(7);
//! let report = run_trials(&data, &params).unwrap();
//! assert!(report.clustering.cost.is_finite());
//! ```

pub mod calculus;
pub mod error;
pub mod harness;
pub mod mask;
pub mod oracle;
pub mod par;
pub mod point;
pub mod rng;
pub mod sampling;
pub mod solver;

pub use calculus::Clustering;
pub use error::{Error, Result};
pub use mask::IndexSet;
pub use par::Execution;
pub use point::{Dataset, MissingPoint, PointView};
