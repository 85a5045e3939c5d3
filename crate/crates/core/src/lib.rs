pub mod boosters;
pub mod data;
pub mod error;
pub mod harness;
pub mod metrics;
pub mod model;
pub mod potentials;
pub mod special;
pub mod solver;
pub mod stumps;
