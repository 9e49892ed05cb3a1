//! Integer cubical chains on a periodic-in-x, bounded-in-y lattice.

mod chain;
mod grid;

pub use chain::{Axes, Cell, Chain, ChainError};
pub use grid::{Column, Coords, GridError, GridSpec};
