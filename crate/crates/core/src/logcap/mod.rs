//! Logarithmic capacity of compact sets built from closed primitives.

mod capacity;
mod compact;
mod energy;
mod frostman;
mod kernel;
mod leja;
mod potential;

pub use capacity::{capacity, CapacityReport, QUADRATURE_SLACK};
pub use compact::{Cell, CellShape, CompactSet, MIN_POLYGON_SIDES};
pub use energy::{equilibrium_measure, DiscreteMeasure, Method};
pub use frostman::{frostman_check, frostman_tolerance, FrostmanReport};
pub use leja::{candidate_count, leja_points, transfinite_diameter};
pub use potential::{potential, PotentialEval};
