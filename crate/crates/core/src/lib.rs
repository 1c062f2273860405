//! Logarithmic capacity, Dirichlet eigenvalues and subharmonic witnesses for
//! planar open sets, combined into closed-range and Bergman-space verdicts.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod classify;
pub mod error;
pub mod geometry;
pub mod inradius;
pub mod logcap;
pub mod spectral;
pub mod witness;

pub use error::{Error, Result};
