pub mod bounds;
pub mod coulomb;
pub mod dpp;
pub mod ensemble;
pub mod harness;
pub mod limit;
pub mod linalg;
pub mod quadrature;
pub mod rng;
pub mod stats;
pub mod transport;
