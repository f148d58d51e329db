//! Support code for the `conewalk` binary.

pub mod suite;
