use std::fmt;

use smallvec::SmallVec;
use thiserror::Error;

/// Lattice coordinates. Almost every grid used here has at most three axes.
pub type Coords = SmallVec<[i64; 4]>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GridError {
    #[error("spatial dimension must be at least 1")]
    ZeroDimension,
    #[error("expected {expected} extents, found {found}")]
    ExtentCount { expected: usize, found: usize },
    #[error("extent of axis {axis} must be positive, found {extent}")]
    BadExtent { axis: usize, extent: i64 },
    #[error("height range [{min}, {max}] is empty or degenerate")]
    BadHeightRange { min: i64, max: i64 },
    #[error("grid has {0} columns, which does not fit in memory")]
    TooManyColumns(u128),
}

/// A flat torus of `n` periodic x-axes times a bounded height interval.
///
/// Axis `n` is the height axis; it is never periodic.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GridSpec {
    n: usize,
    extents: Vec<i64>,
    y_min: i64,
    y_max: i64,
    column_count: usize,
}

impl GridSpec {
    pub fn new(n: usize, extents: Vec<i64>, y_range: (i64, i64)) -> Result<Self, GridError> {
        if n == 0 {
            return Err(GridError::ZeroDimension);
        }
        if extents.len() != n {
            return Err(GridError::ExtentCount {
                expected: n,
                found: extents.len(),
            });
        }
        if let Some((axis, &extent)) = extents.iter().enumerate().find(|(_, &e)| e < 1) {
            return Err(GridError::BadExtent { axis, extent });
        }
        let (min, max) = y_range;
        if min >= max {
            return Err(GridError::BadHeightRange { min, max });
        }
        let total = extents
            .iter()
            .fold(1u128, |acc, &e| acc.saturating_mul(e as u128));
        let column_count = usize::try_from(total)
            .ok()
            .filter(|&c| c <= isize::MAX as usize)
            .ok_or(GridError::TooManyColumns(total))?;
        Ok(Self {
            n,
            extents,
            y_min: min,
            y_max: max,
            column_count,
        })
    }

    /// Same period on every x-axis.
    pub fn uniform(n: usize, extent: i64, y_range: (i64, i64)) -> Result<Self, GridError> {
        Self::new(n, vec![extent; n], y_range)
    }

    /// Number of spatial (periodic) axes.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Index of the height axis, which equals `n`.
    pub fn height_axis(&self) -> usize {
        self.n
    }

    pub fn ambient_dim(&self) -> usize {
        self.n + 1
    }

    pub fn extents(&self) -> &[i64] {
        &self.extents
    }

    pub fn y_range(&self) -> (i64, i64) {
        (self.y_min, self.y_max)
    }

    pub fn y_min(&self) -> i64 {
        self.y_min
    }

    pub fn y_max(&self) -> i64 {
        self.y_max
    }

    pub fn column_count(&self) -> usize {
        self.column_count
    }

    /// Reduces a coordinate on a periodic axis into `[0, extent)`.
    pub fn wrap(&self, axis: usize, coord: i64) -> i64 {
        coord.rem_euclid(self.extents[axis])
    }

    pub fn contains_height(&self, y: i64) -> bool {
        (self.y_min..=self.y_max).contains(&y)
    }

    /// Columns in lexicographic order, which is also the order of
    /// [`GridSpec::column_index`].
    pub fn columns(&self) -> impl Iterator<Item = Column> + '_ {
        (0..self.column_count).map(move |i| self.column_at(i))
    }

    pub fn column_at(&self, mut index: usize) -> Column {
        let mut coords: Coords = SmallVec::from_elem(0, self.n);
        for axis in (0..self.n).rev() {
            let extent = self.extents[axis] as usize;
            coords[axis] = (index % extent) as i64;
            index /= extent;
        }
        Column(coords)
    }

    /// Row-major position of a column, with axis 0 most significant.
    pub fn column_index(&self, column: &Column) -> usize {
        column
            .0
            .iter()
            .zip(&self.extents)
            .fold(0usize, |acc, (&x, &e)| acc * e as usize + x as usize)
    }

    pub fn contains_column(&self, column: &Column) -> bool {
        column.0.len() == self.n
            && column
                .0
                .iter()
                .zip(&self.extents)
                .all(|(&x, &e)| (0..e).contains(&x))
    }

    /// Wraps raw x-coordinates onto the torus.
    pub fn column(&self, coords: &[i64]) -> Option<Column> {
        if coords.len() != self.n {
            return None;
        }
        Some(Column(
            coords
                .iter()
                .enumerate()
                .map(|(axis, &x)| self.wrap(axis, x))
                .collect(),
        ))
    }

    /// The neighbouring column one step forward along `axis`.
    pub fn step(&self, column: &Column, axis: usize) -> Column {
        let mut coords = column.0.clone();
        coords[axis] = self.wrap(axis, coords[axis] + 1);
        Column(coords)
    }

    /// Every forward-adjacent `(column, neighbour)` pair, one per vertical face
    /// direction. On an axis of extent 1 the neighbour is the column itself.
    pub fn adjacent_pairs(&self) -> impl Iterator<Item = (Column, Column)> + '_ {
        self.columns().flat_map(move |c| {
            (0..self.n).map(move |axis| {
                let next = self.step(&c, axis);
                (c.clone(), next)
            })
        })
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "T^{} {:?} x [{}, {}]",
            self.n, self.extents, self.y_min, self.y_max
        )
    }
}

/// A point of the x-torus: the vertical line over which a slice is taken.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Column(pub(crate) Coords);

impl Column {
    pub fn coords(&self) -> &[i64] {
        &self.0
    }
}

impl fmt::Display for Column {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}
