//! Positive closed codimension-one currents and their vertical slices.

mod generate;

use std::fmt;

use thiserror::Error;

use crate::cubical::{Axes, Cell, Chain, ChainError, Column, GridSpec};
use crate::zero_current::{PositiveStack, ZeroCurrent};

pub use generate::{generate_random, random_grid_function};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurrentError {
    #[error("a current on this grid is a {expected}-chain, found a {found}-chain")]
    WrongDimension { expected: usize, found: usize },
    #[error("invalid current: {0}")]
    Invalid(Violations),
    #[error("slice counts differ across columns: {0:?}")]
    SliceCountMismatch(Vec<(Column, usize)>),
    #[error(transparent)]
    Chain(#[from] ChainError),
}

/// Everything that stops a chain from being a positive closed current.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Violations {
    /// Non-vanishing `(n-1)`-cells of the boundary with their coefficients.
    pub nonzero_boundary: Vec<(Cell, i64)>,
    /// Horizontal cells with a negative coefficient.
    pub negative_horizontal: Vec<(Cell, i64)>,
}

impl Violations {
    pub fn is_empty(&self) -> bool {
        self.nonzero_boundary.is_empty() && self.negative_horizontal.is_empty()
    }
}

impl fmt::Display for Violations {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if !self.nonzero_boundary.is_empty() {
            parts.push(format!(
                "NonzeroBoundary on {} cells",
                self.nonzero_boundary.len()
            ));
        }
        if !self.negative_horizontal.is_empty() {
            parts.push(format!(
                "NegativeHorizontal on {} cells",
                self.negative_horizontal.len()
            ));
        }
        write!(f, "{}", parts.join(", "))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MassSplit {
    pub horizontal: u128,
    pub vertical: u128,
}

impl MassSplit {
    pub fn total(&self) -> u128 {
        self.horizontal + self.vertical
    }
}

/// An n-chain in n+1 dimensions with zero boundary and nonnegative
/// horizontal part. Only obtainable through [`PositiveClosedCurrent::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PositiveClosedCurrent {
    chain: Chain,
}

impl PositiveClosedCurrent {
    pub fn validate(chain: Chain) -> Result<Self, CurrentError> {
        let n = chain.grid().n();
        if chain.dim() != n {
            return Err(CurrentError::WrongDimension {
                expected: n,
                found: chain.dim(),
            });
        }
        let boundary = chain.boundary()?;
        let violations = Violations {
            nonzero_boundary: boundary.iter().map(|(c, k)| (c.clone(), k)).collect(),
            negative_horizontal: chain
                .iter()
                .filter(|(c, k)| *k < 0 && c.is_horizontal(n))
                .map(|(c, k)| (c.clone(), k))
                .collect(),
        };
        if !violations.is_empty() {
            return Err(CurrentError::Invalid(violations));
        }
        Ok(Self { chain })
    }

    /// Wraps a chain that is closed and positive by construction.
    pub(crate) fn from_closed_positive(chain: Chain) -> Self {
        debug_assert_eq!(chain.dim(), chain.grid().n());
        Self { chain }
    }

    pub fn empty(grid: GridSpec) -> Self {
        let n = grid.n();
        Self {
            chain: Chain::zero(grid, n).expect("n <= n + 1"),
        }
    }

    pub fn chain(&self) -> &Chain {
        &self.chain
    }

    pub fn into_chain(self) -> Chain {
        self.chain
    }

    pub fn grid(&self) -> &GridSpec {
        self.chain.grid()
    }

    pub fn n(&self) -> usize {
        self.grid().n()
    }

    pub fn mass(&self) -> u128 {
        self.chain.mass()
    }

    fn horizontal_cells(&self) -> impl Iterator<Item = (&Cell, i64)> + '_ {
        let n = self.n();
        self.chain.iter().filter(move |(c, _)| c.is_horizontal(n))
    }

    /// The vertical slice over `column`: one unit atom at height `y` per unit
    /// of multiplicity of the horizontal cell `(column, y)`.
    ///
    /// Panics if `column` is not a column of this grid.
    pub fn slice(&self, column: &Column) -> ZeroCurrent<i64> {
        let grid = self.grid();
        assert!(
            grid.contains_column(column),
            "column {column} not in {grid}"
        );
        let n = grid.n();
        let mut anchor = column.0.clone();
        anchor.push(grid.y_min());
        let start = Cell::new(grid, &anchor, &Axes::new()).expect("lowest vertex is in grid");
        let heights = self
            .chain
            .range_from(&start)
            .take_while(|(c, _)| c.anchor()[..n] == column.coords()[..])
            .filter(|(c, _)| c.is_horizontal(n))
            .flat_map(|(c, k)| std::iter::repeat_n(c.height(grid), k.max(0) as usize));
        ZeroCurrent::positive(heights).expect("integer positions")
    }

    /// Slices every column at once and checks they all carry the same number
    /// of atoms.
    pub fn slice_all(&self) -> Result<Slices, CurrentError> {
        let grid = self.grid();
        let mut heights: Vec<Vec<i64>> = vec![Vec::new(); grid.column_count()];
        for (cell, k) in self.horizontal_cells() {
            let idx = grid.column_index(&cell.column(grid));
            let y = cell.height(grid);
            heights[idx].extend(std::iter::repeat_n(y, k.max(0) as usize));
        }
        let stacks: Vec<PositiveStack<i64>> = heights
            .into_iter()
            .map(|h| PositiveStack::new(h).expect("integer positions"))
            .collect();
        let count = stacks.first().map_or(0, PositiveStack::len);
        if stacks.iter().any(|s| s.len() != count) {
            return Err(CurrentError::SliceCountMismatch(
                grid.columns()
                    .zip(&stacks)
                    .map(|(c, s)| (c, s.len()))
                    .collect(),
            ));
        }
        Ok(Slices {
            grid: grid.clone(),
            count,
            stacks,
        })
    }

    /// Horizontal mass (the sum of horizontal coefficients, which equals the
    /// total slice mass) and vertical mass.
    pub fn mass_split(&self) -> MassSplit {
        let n = self.n();
        self.chain.iter().fold(
            MassSplit {
                horizontal: 0,
                vertical: 0,
            },
            |mut acc, (cell, k)| {
                if cell.is_horizontal(n) {
                    acc.horizontal += k.unsigned_abs() as u128;
                } else {
                    acc.vertical += k.unsigned_abs() as u128;
                }
                acc
            },
        )
    }

    /// `⟨T ⌐ dx, φ⟩` with `φ` sampled at `(column, height)` of horizontal cells.
    pub fn pair_horizontal(&self, phi: impl Fn(&Column, i64) -> f64) -> f64 {
        let grid = self.grid();
        self.horizontal_cells()
            .map(|(c, k)| k as f64 * phi(&c.column(grid), c.height(grid)))
            .sum()
    }
}

/// Every column's slice, in column order, sharing a common atom count.
#[derive(Debug, Clone, PartialEq)]
pub struct Slices {
    grid: GridSpec,
    count: usize,
    stacks: Vec<PositiveStack<i64>>,
}

impl Slices {
    /// The common number of atoms `N`.
    pub fn count(&self) -> usize {
        self.count
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn get(&self, column: &Column) -> &PositiveStack<i64> {
        &self.stacks[self.grid.column_index(column)]
    }

    pub fn iter(&self) -> impl Iterator<Item = (Column, &PositiveStack<i64>)> + '_ {
        self.grid.columns().zip(&self.stacks)
    }

    /// Total slice mass `Σ_x M(T_x)`.
    pub fn total_mass(&self) -> u128 {
        self.stacks.iter().map(|s| s.len() as u128).sum()
    }

    /// `Σ` over adjacent column pairs of the flat distance between slices.
    pub fn flat_variation(&self) -> u128 {
        self.grid
            .adjacent_pairs()
            .map(|(a, b)| {
                self.get(&a)
                    .flat_distance(self.get(&b))
                    .expect("slices share a count") as u128
            })
            .sum()
    }

    /// `Σ` over adjacent column pairs of `|⟨T_c, φ⟩ − ⟨T_c', φ⟩|`.
    pub fn probe_variation(&self, phi: impl Fn(i64) -> f64) -> f64 {
        let pair = |s: &PositiveStack<i64>| s.heights().iter().map(|&h| phi(h)).sum::<f64>();
        self.grid
            .adjacent_pairs()
            .map(|(a, b)| (pair(self.get(&a)) - pair(self.get(&b))).abs())
            .sum()
    }
}
