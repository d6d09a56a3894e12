//! Large-deviation statistics for the ratio z_{n+1}/Z_n of waiting times in a
//! Bernoulli process: rate function, exact series, Laplace approximation and
//! Monte Carlo.

pub mod error;
pub mod exactseries;
pub mod laplace;
pub mod numeric;
pub mod objective;
pub mod process;
pub mod rate;
pub mod specfun;

pub use error::{Error, Result};
