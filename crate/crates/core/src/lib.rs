//! minklab — a numerical laboratory for anisotropic Minkowski content.
//!
//! The library measures (n−1)-dimensional size of sets by dilating them with a
//! convex body C and watching the volume growth rate as the dilation radius
//! ε shrinks.  Four closely related functionals are provided (two-sided
//! content of a set, one-sided outer content of a set relative to an open
//! region, a variant that lets the dilation spill across the region boundary,
//! and the symmetrized average), together with the anisotropic perimeter
//! integrals they converge to for well-behaved sets.
//!
//! Pipeline overview:
//!
//! * [`convex`] — convex bodies with the origin interior: support function,
//!   gauge, polar duality, Minkowski sums, metric constants.
//! * [`shapes`] — an exact boolean algebra of analytic primitives, boundary
//!   meshes with outward normals, anisotropic perimeter integrals, and an
//!   exact 1-D interval engine ([`shapes::set1`]).
//! * [`raster`] — uniform grids, bitset voxel sets, body-stencil dilation,
//!   and anisotropic distance transforms (brute-force oracle + chamfer).
//! * [`content`] — the ε-level functionals, ε-ladder evaluation, limit
//!   extrapolation with convergence brackets, and relation reports that
//!   cross-check the functionals against their perimeter targets.
//! * [`boundary`] — Lebesgue density estimation, essential-interior /
//!   essential-exterior extraction, and voxel density classification.
//! * [`scenario`] — JSON scenario ingestion, deterministic CSV/JSON reports,
//!   and distance-field dumps for the `minklab` command-line tool.
//! * [`suite`] — the built-in verification matrix behind `minklab verify`.
//!
//! All operations are pure and all containers are immutable after
//! construction; everything can be evaluated concurrently without locks.

pub mod boundary;
pub mod content;
pub mod convex;
pub mod geom;
pub mod raster;
pub mod scenario;
pub mod shapes;
pub mod suite;

pub use convex::ConvexBody;
pub use geom::{AxisBox, Point};
pub use shapes::{BoundaryMesh, Domain, Shape};

/// Library version string (mirrors the crate version).
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Hard cap on the spatial dimension handled by the geometry kernels.
///
/// Points are stored as fixed `[f64; 3]` triples with trailing components
/// zero; every module validates its inputs against this cap.
pub const MAX_DIM: usize = 3;
