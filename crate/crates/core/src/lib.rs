//! Distributions of random geometric graphs whose nodes are uniform in a disk.
//!
//! The crate covers the whole pipeline from inter-node distances to graph
//! entropy:
//!
//! - [`geometry`]: the disk, triangle quantities (Q, circumdiameter) and the
//!   `phi` segment-area function.
//! - [`distance`]: closed-form distance densities, including the joint
//!   density of the three side lengths of a random triangle in a disk and the
//!   conditional construction it is built from.
//! - [`connection`]: pair connection functions `p(r)`.
//! - [`quadrature`]: deterministic adaptive Gauss–Kronrod integration in up
//!   to three dimensions with coordinate-dependent limits and breakpoints.
//! - [`graph`]: exact graph pmf for two and three nodes, entropy and
//!   connectivity events.
//! - [`montecarlo`]: sampling estimators for any node count, used as the
//!   independent oracle for every closed form.
//! - [`bounds`]: per-edge entropy bounds from Shearer's inequality.
//!
//! All numerical code is generic over [`Scalar`] (`f32` or `f64`); the
//! aliases at the crate root fix the scalar to `f64`.

// Negated comparisons are how NaN inputs get rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod connection;
pub mod distance;
pub mod error;
pub mod geometry;
pub mod graph;
pub mod montecarlo;
pub mod quadrature;
pub mod scalar;
mod union_find;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub use bounds::{bound_chain, shearer_factor, BoundChain, BoundEntry, MeasuredEntropy, Provenance};
pub use connection::ConnectionModel;
pub use distance::{
    angle_pdf_trapezoid, conditional_joint_pdf3, joint_pdf3, joint_pdf3_branch, joint_pdf3_via_conditioning, pair_pdf,
    pair_pdf_on_circle, sbar_cdf, sbar_pdf, vertex_on_circle_pdf3, ConditionalContext, JointPdf, JointPdfCase,
};
pub use geometry::{
    pair_count, pair_from_index, pair_index, phi, sample_point_in_disk, triangle_quantities, DiskDomain, Point2D,
    TriangleQuantities, TriangleShape, TriangleSides,
};
pub use graph::{
    entropy, entropy_error_bound, pmf_exact, pmf_n2, pmf_n3, prob_complete, prob_connected, EdgeVector, GraphPmf,
    PmfMethod,
};
pub use montecarlo::{
    distance_histogram3, estimate_entropy, estimate_pmf, pair_distance_histogram, sample_graph, EntropyEstimate,
    EntropyOptions, Histogram1, Histogram3, McSettings,
};
pub use quadrature::{integrate, Estimate, QuadratureSettings};

/// Disk domain with `f64` lengths.
pub type Disk = DiskDomain<f64>;
/// Triangle side lengths in `f64`.
pub type Sides = TriangleSides<f64>;
/// Planar point in `f64`.
pub type Point = Point2D<f64>;
/// Connection model in `f64`.
pub type Model = ConnectionModel<f64>;
/// Graph pmf with `f64` probabilities.
pub type Pmf = GraphPmf<f64>;
/// Quadrature settings in `f64`.
pub type Quad = QuadratureSettings<f64>;

/// Disk domain with `f32` lengths.
pub type Disk32 = DiskDomain<f32>;
/// Triangle side lengths in `f32`.
pub type Sides32 = TriangleSides<f32>;
