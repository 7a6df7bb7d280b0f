//! Configuration generators, the trichotomy verifier, sweeps and documents.

pub mod generate;
pub mod io;
pub mod precision;
pub mod sweep;
pub mod trichotomy;
