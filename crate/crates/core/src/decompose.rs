//! Leaf decomposition of positive closed currents and its inverse.
//!
//! Every [`PositiveClosedCurrent`] `T` has a unique monotone family of leaves
//! `u_1 <= ... <= u_N` with `T = Σ_j i(u_j)`. The leaves are read off by
//! sorting the atoms of each vertical slice; equivalently by repeatedly taking
//! the column-wise top atom and subtracting its graph current. Because the
//! graph currents of ordered leaves never carry opposite signs on a shared
//! cell, masses add up exactly.

use thiserror::Error;

use crate::cubical::{Chain, ChainError, Column, GridSpec};
use crate::current::{CurrentError, PositiveClosedCurrent};
use crate::graph::{graph_current, total_variation, GraphError, GridFunction};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecomposeError {
    #[error("leaf {lower} exceeds leaf {upper} at column {column}")]
    MonotonicityViolation {
        column: Column,
        lower: usize,
        upper: usize,
    },
    #[error("leaf {0} is defined on a different grid")]
    GridMismatch(usize),
    #[error("the current is empty, there is no top leaf")]
    EmptyCurrent,
    #[error("superposing the leaves does not reproduce the current")]
    ReconstructionMismatch,
    #[error(transparent)]
    Current(#[from] CurrentError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Chain(#[from] ChainError),
}

/// Pointwise ordered leaves `u_1 <= u_2 <= ... <= u_N` on a common grid.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LeafStack {
    grid: GridSpec,
    leaves: Vec<GridFunction>,
}

impl LeafStack {
    pub fn new(grid: GridSpec, leaves: Vec<GridFunction>) -> Result<Self, DecomposeError> {
        if let Some(i) = leaves.iter().position(|u| u.grid() != &grid) {
            return Err(DecomposeError::GridMismatch(i));
        }
        for (lower, pair) in leaves.windows(2).enumerate() {
            if let Some((idx, _)) = pair[0]
                .values()
                .iter()
                .zip(pair[1].values())
                .enumerate()
                .find(|(_, (a, b))| a > b)
            {
                return Err(DecomposeError::MonotonicityViolation {
                    column: grid.column_at(idx),
                    lower,
                    upper: lower + 1,
                });
            }
        }
        Ok(Self { grid, leaves })
    }

    pub fn empty(grid: GridSpec) -> Self {
        Self {
            grid,
            leaves: Vec::new(),
        }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    /// Number of leaves `N`.
    pub fn len(&self) -> usize {
        self.leaves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.leaves.is_empty()
    }

    pub fn leaves(&self) -> &[GridFunction] {
        &self.leaves
    }

    pub fn total_variations(&self) -> Vec<u128> {
        self.leaves.iter().map(total_variation).collect()
    }

    /// `Σ_j M(i(u_j))`.
    pub fn sum_of_leaf_masses(&self) -> u128 {
        self.leaves.iter().map(|u| graph_current(u).mass()).sum()
    }
}

/// Sums graph currents of arbitrary (possibly crossing) leaves.
pub fn sum_graph_currents(
    grid: &GridSpec,
    leaves: &[GridFunction],
) -> Result<PositiveClosedCurrent, DecomposeError> {
    let mut chain = Chain::zero(grid.clone(), grid.n())?;
    for (i, u) in leaves.iter().enumerate() {
        if u.grid() != grid {
            return Err(DecomposeError::GridMismatch(i));
        }
        chain = chain.add(graph_current(u).chain())?;
    }
    Ok(PositiveClosedCurrent::validate(chain)?)
}

/// Two leaves at heights `y_min` and `y_min + 1` with their values swapped on
/// the columns where `x_0 < extent_0 / 2`, so their graphs cross. `None` when
/// axis 0 has extent 1 and no crossing is possible.
pub fn crossing_pair(grid: &GridSpec) -> Option<[GridFunction; 2]> {
    let half = grid.extents()[0] / 2;
    if half == 0 {
        return None;
    }
    let lo = grid.y_min();
    let swapped = |c: &Column| c.coords()[0] < half;
    let a = GridFunction::from_fn(grid.clone(), |c| if swapped(c) { lo + 1 } else { lo });
    let b = GridFunction::from_fn(grid.clone(), |c| if swapped(c) { lo } else { lo + 1 });
    Some([a.ok()?, b.ok()?])
}

/// `T = Σ_j i(u_j)`.
pub fn superpose(stack: &LeafStack) -> Result<PositiveClosedCurrent, DecomposeError> {
    let grid = &stack.grid;
    let mut chain = Chain::zero(grid.clone(), grid.n())?;
    for u in &stack.leaves {
        chain = chain.add(graph_current(u).chain())?;
    }
    Ok(PositiveClosedCurrent::from_closed_positive(chain))
}

fn sorted_leaves(t: &PositiveClosedCurrent) -> Result<LeafStack, DecomposeError> {
    let grid = t.grid().clone();
    let slices = t.slice_all()?;
    let count = slices.count();
    let mut values = vec![Vec::with_capacity(grid.column_count()); count];
    for (_, stack) in slices.iter() {
        for (j, &h) in stack.heights().iter().enumerate() {
            values[j].push(h);
        }
    }
    let leaves = values
        .into_iter()
        .map(|v| GridFunction::new(grid.clone(), v))
        .collect::<Result<Vec<_>, _>>()?;
    LeafStack::new(grid, leaves)
}

/// The unique monotone leaf stack of `t`: the j-th leaf takes, in every
/// column, the j-th smallest slice height. The result is checked to
/// superpose back to `t`.
pub fn leaf_decomposition(t: &PositiveClosedCurrent) -> Result<LeafStack, DecomposeError> {
    let stack = sorted_leaves(t)?;
    if superpose(&stack)? != *t {
        return Err(DecomposeError::ReconstructionMismatch);
    }
    Ok(stack)
}

/// Splits off the top leaf `u_N(c) = max atom of T_c` and returns it with the
/// remainder `T − i(u_N)`, which has one atom fewer in every slice.
pub fn extract_top_leaf(
    t: &PositiveClosedCurrent,
) -> Result<(GridFunction, PositiveClosedCurrent), DecomposeError> {
    let slices = t.slice_all()?;
    if slices.count() == 0 {
        return Err(DecomposeError::EmptyCurrent);
    }
    let tops = slices
        .iter()
        .map(|(_, s)| s.max_atom().expect("count >= 1"))
        .collect();
    let top = GridFunction::new(t.grid().clone(), tops)?;
    let rest = t.chain().sub(graph_current(&top).chain())?;
    let rest = PositiveClosedCurrent::validate(rest)?;
    Ok((top, rest))
}

/// Decomposition by peeling the top leaf `N` times.
pub fn peel_decomposition(t: &PositiveClosedCurrent) -> Result<LeafStack, DecomposeError> {
    let mut leaves = Vec::new();
    let mut rest = t.clone();
    while !rest.chain().is_empty() {
        let (top, next) = extract_top_leaf(&rest)?;
        leaves.push(top);
        rest = next;
    }
    leaves.reverse();
    LeafStack::new(t.grid().clone(), leaves)
}
