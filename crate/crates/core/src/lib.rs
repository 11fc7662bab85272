//! Hat-guessing games: rules, strategies, covering codes, exact and Monte
//! Carlo evaluation, and exhaustive strategy search.

pub mod codes;
mod error;
pub mod eval;
pub mod exec;
pub mod game;
pub mod search;
pub mod strategies;

pub use error::{HatError, Result};
pub use exec::Execution;
pub use game::{Colour, Configuration, GameSpec, Objective, Outcome, Protocol, Response, Trace, View, Visibility};
pub use strategies::StrategyTable;
