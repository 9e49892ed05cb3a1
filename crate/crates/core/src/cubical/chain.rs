use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use smallvec::SmallVec;
use thiserror::Error;

use super::grid::{Column, Coords, GridError, GridSpec};

pub type Axes = SmallVec<[usize; 4]>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChainError {
    #[error("the boundary of a 0-chain is undefined")]
    DimensionZero,
    #[error("chains live on different grids")]
    GridMismatch,
    #[error("expected {expected}-cells, found a {found}-cell")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("chain dimension {dim} exceeds ambient dimension {ambient}")]
    DimensionTooLarge { dim: usize, ambient: usize },
    #[error("malformed cell: {0}")]
    MalformedCell(String),
    #[error("cell anchored at {anchor:?} with axes {axes:?} leaves the grid")]
    OutOfGrid { anchor: Vec<i64>, axes: Vec<usize> },
    #[error("integer overflow in chain coefficients")]
    Overflow,
    #[error(transparent)]
    Grid(#[from] GridError),
}

/// An oriented unit cube of the lattice.
///
/// The cube spans `axes` (strictly increasing) from its lowest corner
/// `anchor`. Its canonical orientation is the wedge of the spanned unit
/// vectors in increasing axis order; chain coefficients are relative to it.
///
/// Ordering is lexicographic on `(anchor, axes)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cell {
    anchor: Coords,
    axes: Axes,
}

impl Cell {
    /// Builds a cell, wrapping periodic coordinates and checking it fits in
    /// the height range.
    pub fn new(grid: &GridSpec, anchor: &[i64], axes: &[usize]) -> Result<Self, ChainError> {
        let ambient = grid.ambient_dim();
        if anchor.len() != ambient {
            return Err(ChainError::MalformedCell(format!(
                "anchor has {} coordinates, grid has {ambient} axes",
                anchor.len()
            )));
        }
        if axes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(ChainError::MalformedCell(format!(
                "axes {axes:?} are not strictly increasing"
            )));
        }
        if axes.iter().any(|&a| a >= ambient) {
            return Err(ChainError::MalformedCell(format!(
                "axes {axes:?} reference an axis beyond {}",
                ambient - 1
            )));
        }
        let y_axis = grid.height_axis();
        let y = anchor[y_axis];
        let top = if axes.contains(&y_axis) {
            y.checked_add(1)
        } else {
            Some(y)
        };
        if !grid.contains_height(y) || !top.is_some_and(|t| grid.contains_height(t)) {
            return Err(ChainError::OutOfGrid {
                anchor: anchor.to_vec(),
                axes: axes.to_vec(),
            });
        }
        let mut wrapped: Coords = anchor.iter().copied().collect();
        for (axis, x) in wrapped.iter_mut().enumerate().take(grid.n()) {
            *x = grid.wrap(axis, *x);
        }
        Ok(Self {
            anchor: wrapped,
            axes: axes.iter().copied().collect(),
        })
    }

    /// The horizontal n-cell over `column` at height `y`.
    pub fn horizontal(grid: &GridSpec, column: &Column, y: i64) -> Result<Self, ChainError> {
        let mut anchor: Coords = column.coords().iter().copied().collect();
        anchor.push(y);
        let axes: Axes = (0..grid.n()).collect();
        Self::new(grid, &anchor, &axes)
    }

    /// The full-dimensional cube over `column` spanning heights `[y, y + 1]`.
    pub fn solid(grid: &GridSpec, column: &Column, y: i64) -> Result<Self, ChainError> {
        let mut anchor: Coords = column.coords().iter().copied().collect();
        anchor.push(y);
        let axes: Axes = (0..grid.ambient_dim()).collect();
        Self::new(grid, &anchor, &axes)
    }

    pub fn anchor(&self) -> &[i64] {
        &self.anchor
    }

    pub fn axes(&self) -> &[usize] {
        &self.axes
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    /// Spans exactly the x-axes `0..n`.
    pub fn is_horizontal(&self, n: usize) -> bool {
        self.axes.len() == n && self.axes.iter().enumerate().all(|(i, &a)| i == a)
    }

    pub fn spans(&self, axis: usize) -> bool {
        self.axes.contains(&axis)
    }

    pub fn column(&self, grid: &GridSpec) -> Column {
        Column(self.anchor[..grid.n()].iter().copied().collect())
    }

    pub fn height(&self, grid: &GridSpec) -> i64 {
        self.anchor[grid.height_axis()]
    }

    pub fn lies_in(&self, grid: &GridSpec) -> bool {
        matches!(Cell::new(grid, &self.anchor, &self.axes), Ok(ref c) if c == self)
    }

    /// Signed codimension-one faces: for the k-th spanned axis (k from 0),
    /// `(-1)^k` times the face shifted one step along that axis, and the
    /// opposite sign for the face at the anchor.
    pub fn faces<'a>(&'a self, grid: &'a GridSpec) -> impl Iterator<Item = (Cell, i64)> + 'a {
        self.axes.iter().enumerate().flat_map(move |(k, &axis)| {
            let sign = if k % 2 == 0 { 1 } else { -1 };
            let face_axes: Axes = self.axes.iter().copied().filter(|&a| a != axis).collect();
            let mut shifted = self.anchor.clone();
            shifted[axis] = if axis < grid.n() {
                grid.wrap(axis, shifted[axis] + 1)
            } else {
                shifted[axis] + 1
            };
            let far = Cell {
                anchor: shifted,
                axes: face_axes.clone(),
            };
            let near = Cell {
                anchor: self.anchor.clone(),
                axes: face_axes,
            };
            [(far, sign), (near, -sign)]
        })
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{:?}", self.anchor.as_slice(), self.axes.as_slice())
    }
}

/// A finitely supported integer combination of `dim`-cells.
///
/// Zero coefficients are never stored, so structural equality is equality of
/// chains.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chain {
    grid: GridSpec,
    dim: usize,
    coeffs: BTreeMap<Cell, i64>,
}

impl Chain {
    pub fn zero(grid: GridSpec, dim: usize) -> Result<Self, ChainError> {
        let ambient = grid.ambient_dim();
        if dim > ambient {
            return Err(ChainError::DimensionTooLarge { dim, ambient });
        }
        Ok(Self {
            grid,
            dim,
            coeffs: BTreeMap::new(),
        })
    }

    /// Sums the given terms; repeated cells accumulate.
    pub fn from_terms<I>(grid: GridSpec, dim: usize, terms: I) -> Result<Self, ChainError>
    where
        I: IntoIterator<Item = (Cell, i64)>,
    {
        let mut chain = Self::zero(grid, dim)?;
        for (cell, coeff) in terms {
            chain.add_term(cell, coeff)?;
        }
        Ok(chain)
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, cell: &Cell) -> i64 {
        self.coeffs.get(cell).copied().unwrap_or(0)
    }

    /// Terms in canonical `(anchor, axes)` order.
    pub fn iter(&self) -> impl Iterator<Item = (&Cell, i64)> + '_ {
        self.coeffs.iter().map(|(c, &k)| (c, k))
    }

    pub(crate) fn range_from<'a>(
        &'a self,
        start: &Cell,
    ) -> impl Iterator<Item = (&'a Cell, i64)> + 'a {
        self.coeffs.range(start.clone()..).map(|(c, &k)| (c, k))
    }

    /// Adds `coeff` times `cell` in place.
    pub fn add_term(&mut self, cell: Cell, coeff: i64) -> Result<(), ChainError> {
        if cell.dim() != self.dim {
            return Err(ChainError::DimensionMismatch {
                expected: self.dim,
                found: cell.dim(),
            });
        }
        if !cell.lies_in(&self.grid) {
            return Err(ChainError::OutOfGrid {
                anchor: cell.anchor.to_vec(),
                axes: cell.axes.to_vec(),
            });
        }
        self.accumulate(cell, coeff)
    }

    // Caller guarantees `cell` is a valid `dim`-cell of this grid.
    fn accumulate(&mut self, cell: Cell, coeff: i64) -> Result<(), ChainError> {
        if coeff == 0 {
            return Ok(());
        }
        match self.coeffs.entry(cell) {
            Entry::Vacant(slot) => {
                slot.insert(coeff);
            }
            Entry::Occupied(mut slot) => {
                let sum = slot.get().checked_add(coeff).ok_or(ChainError::Overflow)?;
                if sum == 0 {
                    slot.remove();
                } else {
                    *slot.get_mut() = sum;
                }
            }
        }
        Ok(())
    }

    fn check_compatible(&self, other: &Chain) -> Result<(), ChainError> {
        if self.grid != other.grid {
            return Err(ChainError::GridMismatch);
        }
        if self.dim != other.dim {
            return Err(ChainError::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Chain) -> Result<Chain, ChainError> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (cell, &k) in &other.coeffs {
            out.accumulate(cell.clone(), k)?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Chain) -> Result<Chain, ChainError> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (cell, &k) in &other.coeffs {
            let neg = k.checked_neg().ok_or(ChainError::Overflow)?;
            out.accumulate(cell.clone(), neg)?;
        }
        Ok(out)
    }

    pub fn scale(&self, factor: i64) -> Result<Chain, ChainError> {
        if factor == 0 {
            return Chain::zero(self.grid.clone(), self.dim);
        }
        let coeffs = self
            .coeffs
            .iter()
            .map(|(c, &k)| {
                k.checked_mul(factor)
                    .map(|v| (c.clone(), v))
                    .ok_or(ChainError::Overflow)
            })
            .collect::<Result<_, _>>()?;
        Ok(Chain {
            grid: self.grid.clone(),
            dim: self.dim,
            coeffs,
        })
    }

    /// The cubical boundary, extended linearly from [`Cell::faces`].
    pub fn boundary(&self) -> Result<Chain, ChainError> {
        if self.dim == 0 {
            return Err(ChainError::DimensionZero);
        }
        let mut terms: Vec<(Cell, i64)> = Vec::with_capacity(2 * self.dim * self.len());
        for (cell, &k) in &self.coeffs {
            for (face, sign) in cell.faces(&self.grid) {
                // sign is ±1, so only i64::MIN can overflow here
                terms.push((face, k.checked_mul(sign).ok_or(ChainError::Overflow)?));
            }
        }
        Chain::from_valid_terms(self.grid.clone(), self.dim - 1, terms)
    }

    /// Sort-and-merge constructor for cells already known to be valid
    /// `dim`-cells of `grid`.
    pub(crate) fn from_valid_terms(
        grid: GridSpec,
        dim: usize,
        mut terms: Vec<(Cell, i64)>,
    ) -> Result<Chain, ChainError> {
        debug_assert!(terms.iter().all(|(c, _)| c.dim() == dim));
        terms.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        let mut merged: Vec<(Cell, i64)> = Vec::with_capacity(terms.len());
        for (cell, k) in terms {
            match merged.last_mut() {
                Some((last, acc)) if *last == cell => {
                    *acc = acc.checked_add(k).ok_or(ChainError::Overflow)?
                }
                _ => merged.push((cell, k)),
            }
        }
        Ok(Chain {
            grid,
            dim,
            coeffs: merged.into_iter().filter(|&(_, k)| k != 0).collect(),
        })
    }

    /// Sum of absolute coefficients; every unit cell has unit measure.
    pub fn mass(&self) -> u128 {
        self.coeffs.values().map(|k| k.unsigned_abs() as u128).sum()
    }
}
