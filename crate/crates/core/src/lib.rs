//! Exact counting, verification and bound evaluation for crossing-free
//! straight-edge graphs on planar point sets.

pub mod census;
pub mod charging;
pub mod formulas;
pub mod geometry;
pub mod vings;
