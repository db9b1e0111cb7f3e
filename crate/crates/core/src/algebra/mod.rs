//! Exact arithmetic kernel: rationals, sparse multivariate polynomials,
//! truncated series and interpolation.

pub mod interpolate;
pub mod poly;
pub mod rational;
pub mod series;

pub use interpolate::{falling_factorial, interpolate, interpolate_in_j, j_variable};
pub use poly::{MultiPoly, Variable};
pub use rational::{int, ratio, Rational};
pub use series::Series;
