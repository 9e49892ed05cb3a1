//! # leafsup
//!
//! Discrete leaf decomposition of codimension-one integer currents.
//!
//! A current here is an integer n-chain on the cubical lattice of
//! `T^n × [y_min, y_max]` (periodic in `x`, bounded in `y`). When it is closed
//! and its horizontal part is nonnegative, it splits uniquely as a sum of
//! graph currents of pointwise ordered integer leaf functions, and its mass is
//! the sum of the leaves' masses.
//!
//! | Module | Contents |
//! |--------|----------|
//! | [`cubical`] | grids, cells, chains, boundary, mass |
//! | [`current`] | validation, vertical slices, mass split, random currents |
//! | [`zero_current`] | 0-currents on the line, flat functional and distance |
//! | [`graph`] | leaf functions, subgraph prisms, graph currents, total variation |
//! | [`decompose`] | leaf stacks, decomposition, top-leaf peeling, superposition |
//! | [`codec`] | canonical JSON documents |
//!
//! ```
//! use leafsup::cubical::GridSpec;
//! use leafsup::current::generate_random;
//! use leafsup::decompose::{leaf_decomposition, superpose};
//!
//! let grid = GridSpec::uniform(1, 8, (0, 6)).unwrap();
//! let t = generate_random(&grid, 3, 10, 42);
//! let stack = leaf_decomposition(&t).unwrap();
//! assert_eq!(stack.len(), 3);
//! assert_eq!(superpose(&stack).unwrap(), t);
//! assert_eq!(stack.sum_of_leaf_masses(), t.mass());
//! ```

pub mod codec;
pub mod cubical;
pub mod current;
pub mod decompose;
pub mod graph;
pub mod zero_current;
