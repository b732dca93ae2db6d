//! Asymmetric binary covering codes.
//!
//! A set `C` of vertices of the n-cube `Q_n` downward `R`-covers the cube when
//! every vertex can be reached from some codeword by turning at most `R` ones
//! into zeros. `K+(n, R)` is the minimum size of such a set. This crate provides
//! the bit-level primitives, lower bounds (sphere covering, covering integer
//! programs, difference bounds), constructive upper bounds (diagonal codes,
//! direct and semi-direct sums, greedy and randomized covers), an exact
//! branch-and-bound search for small `n`, the GF(2) linear theory, and a
//! bound table with provenance tags.

pub mod bounds;
pub mod cli;
pub mod codefile;
pub mod constructions;
pub mod cube;
pub mod error;
pub mod exact;
pub mod ip;
pub mod linear;
pub mod rational;
pub mod table;

pub use cube::{Code, Codeword, LevelProfile};
pub use error::{Error, Result};
