//! Circulant complex Hadamard matrices of Butson type.
//!
//! A circulant matrix over the `l`-th roots of unity is stored as the exponent
//! vector of its first row. The crate verifies such rows exactly, builds the
//! classical families, computes the Fourier dual, checks the known existence
//! obstructions and classifies whole cells `C_n(l)` by exhaustive search.

pub mod arith;
pub mod circulant;
pub mod cli;
pub mod constructions;
pub mod cyclotomic;
pub mod duality;
pub mod obstructions;
pub mod rowtext;
pub mod search;
