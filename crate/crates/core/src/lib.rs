//! Symbolic-rewriting laboratory for S-machines: the adding machine Z(A), its mirror, the
//! composed machine M, their computations, the group presentation they induce, and
//! trapezium area bookkeeping for the Dehn function `n² log′n / log′log′n`.

pub mod analysis;
pub mod cli;
pub mod config;
pub mod diagram;
pub mod engine;
pub mod machines;
pub mod presentation;
pub mod sampling;
