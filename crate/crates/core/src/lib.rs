pub mod algebra;
pub mod bridge;
pub mod cli;
pub mod configurations;
pub mod error;
pub mod ledger;
pub mod part1;
pub mod part2;
pub mod stirling;

pub use error::{Error, Result};
