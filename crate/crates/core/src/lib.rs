//! Certified robustness radii for randomized smoothing.
//!
//! The crate is layered bottom-up:
//!
//! - [`specfun`]: incomplete gamma/beta functions, inverses and series.
//! - [`noise`]: smoothing distributions, samplers, densities and scale conversion.
//! - [`radius`]: closed-form radii and the generic `∫ dp / Φ(p)` integral.
//! - [`levelset`]: exact Neyman–Pearson tables for spherical densities.
//! - [`wulff`]: zonotope volumes and growth of standard shapes.
//! - [`harness`]: Monte-Carlo certification against synthetic halfspaces.

pub mod error;
pub mod harness;
pub mod levelset;
pub mod noise;
pub mod quad;
pub mod radius;
pub mod rng;
pub mod specfun;
pub mod wulff;

pub use error::{Error, Result};
pub use noise::{Family, NoiseSpec};
pub use radius::{Adversary, CertifiedRadius, Method};
