//! Minimal space-like surfaces in Minkowski space-time R^4_1 built from
//! Weierstrass data.
//!
//! The crate constructs surfaces from pairs or triples of holomorphic
//! functions, samples positions by contour integration, computes the Gauss
//! and normal curvatures by several independent routes, reparametrizes to
//! canonical coordinates, and realizes motions of R^4_1 as Moebius actions
//! on the generating functions through the spinor map.

pub mod canonical;
pub mod cli;
pub mod error;
pub mod family;
pub mod holo;
pub mod mink4;
pub mod motions;
pub mod surface;
pub mod weier;

pub use error::{Error, Result};
