//! Constructs explicit finite trees that have a given totally real algebraic
//! integer as an adjacency eigenvalue, and verifies them exactly.

pub mod cli;
pub mod construct;
pub mod exact;
pub mod fexpr;
pub mod numfield;
pub mod verify;
