//! Branched complex affine and dilation surfaces from polygon gluings.
//!
//! The crate models a surface as polygons with complex-affine edge
//! identifications, computes its topology and cone-point data, the holonomy
//! character on a homology basis, integer turning numbers and framings, and
//! classifies the connected components of the corresponding moduli spaces of
//! dilation surfaces.

pub mod classify;
pub mod cli;
pub mod framing;
pub mod geometry;
pub mod holonomy;
pub mod num;
pub mod report;
pub mod surface;
pub mod svg;

pub use surface::{build_surface, check_gauss_bonnet, euler_data, DilationSurface, SurfaceSpec};

/// Library version string.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
