//! Exact enumeration of small-step lattice walks in the quadrant and the
//! three-quadrant cone, with executable checks of kernel-method identities.

pub mod algebra;
pub mod enumerate;
pub mod models;
pub mod solve;
pub mod invariants;
pub mod theorems;
