pub mod error;
pub mod numerics;
pub mod specfun;
pub mod kernels;
pub mod ids;
pub mod green;
pub mod weylsim;
pub mod cli;
