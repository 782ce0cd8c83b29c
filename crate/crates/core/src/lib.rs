//! Exact homological computations over effectively presented commutative
//! rings: Koszul towers, adic torsion/completion functors, and replayable
//! weak-proregularity certificates.

pub mod adic;
pub mod cert;
pub mod coeff;
pub mod complex;
pub mod error;
pub mod groebner;
pub mod manifest;
pub mod matrix;
pub mod module;
pub mod monomial;
pub mod parse;
pub mod poly;
pub mod ring;
pub mod smith;
pub mod solve;
pub mod tower;
pub mod wpr;
