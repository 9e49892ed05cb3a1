//! Integer-valued leaf functions on the column torus and their graph currents.
//!
//! The graph current of `u` is obtained from the solid prism under its graph:
//! the floor layer plus `(-1)^n` times the prism boundary. The floor cancels
//! against the bottom of the prism, leaving one unit horizontal face per
//! column at height `u(c)` and the vertical faces that close up every jump.
//! Closedness follows from `∂∂ = 0`, so no face signs are chosen by hand.

use thiserror::Error;

use crate::cubical::{Cell, Chain, Column, GridSpec};
use crate::current::PositiveClosedCurrent;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("expected {expected} column values, found {found}")]
    WrongLength { expected: usize, found: usize },
    #[error("height {value} at column {column} is outside [{min}, {max}]")]
    HeightOutOfRange {
        column: Column,
        value: i64,
        min: i64,
        max: i64,
    },
    #[error("leaf functions live on different grids")]
    GridMismatch,
}

/// An integer height for every column of the grid.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GridFunction {
    grid: GridSpec,
    values: Vec<i64>,
}

impl GridFunction {
    /// Values are given in column order (see [`GridSpec::columns`]) and must
    /// lie in the grid's height range.
    pub fn new(grid: GridSpec, values: Vec<i64>) -> Result<Self, GraphError> {
        if values.len() != grid.column_count() {
            return Err(GraphError::WrongLength {
                expected: grid.column_count(),
                found: values.len(),
            });
        }
        let (min, max) = grid.y_range();
        if let Some((i, &value)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !(min..=max).contains(*v))
        {
            return Err(GraphError::HeightOutOfRange {
                column: grid.column_at(i),
                value,
                min,
                max,
            });
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: GridSpec, f: impl Fn(&Column) -> i64) -> Result<Self, GraphError> {
        let values = grid.columns().map(|c| f(&c)).collect();
        Self::new(grid, values)
    }

    pub fn constant(grid: GridSpec, value: i64) -> Result<Self, GraphError> {
        let values = vec![value; grid.column_count()];
        Self::new(grid, values)
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    /// Heights in column order.
    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn value(&self, column: &Column) -> i64 {
        self.values[self.grid.column_index(column)]
    }

    pub fn iter(&self) -> impl Iterator<Item = (Column, i64)> + '_ {
        self.grid.columns().zip(self.values.iter().copied())
    }

    /// `u + k`, if it stays within the height range.
    pub fn shifted(&self, k: i64) -> Result<Self, GraphError> {
        Self::new(
            self.grid.clone(),
            self.values.iter().map(|v| v.saturating_add(k)).collect(),
        )
    }

    /// Pointwise `self <= other`.
    pub fn le(&self, other: &Self) -> bool {
        self.grid == other.grid && self.values.iter().zip(&other.values).all(|(a, b)| a <= b)
    }
}

/// Unit solid cells from the floor up to the graph: `Σ_c Σ_{y_min <= y < u(c)}`.
pub fn subgraph_prism(u: &GridFunction) -> Chain {
    let grid = u.grid();
    let y_min = grid.y_min();
    let cells = u
        .iter()
        .flat_map(|(column, top)| {
            (y_min..top).map(move |y| (Cell::solid(grid, &column, y).expect("below the graph"), 1))
        })
        .collect();
    Chain::from_valid_terms(grid.clone(), grid.ambient_dim(), cells).expect("unit coefficients")
}

/// One positively oriented horizontal face per column at the floor height.
fn floor_layer(grid: &GridSpec) -> Chain {
    let y_min = grid.y_min();
    let faces = grid
        .columns()
        .map(|c| {
            (
                Cell::horizontal(grid, &c, y_min).expect("floor is in grid"),
                1,
            )
        })
        .collect();
    Chain::from_valid_terms(grid.clone(), grid.n(), faces).expect("unit coefficients")
}

/// The boundary-free graph current `i(u)`.
pub fn graph_current(u: &GridFunction) -> PositiveClosedCurrent {
    let grid = u.grid();
    let prism_boundary = subgraph_prism(u).boundary().expect("prism has dim n + 1");
    // The height axis is the last of n + 1, so the top face enters ∂ with sign (-1)^n.
    let oriented = if grid.n().is_multiple_of(2) {
        prism_boundary
    } else {
        prism_boundary.scale(-1).expect("unit coefficients")
    };
    let chain = floor_layer(grid).add(&oriented).expect("same grid and dim");
    PositiveClosedCurrent::from_closed_positive(chain)
}

/// Anisotropic total variation: `Σ` over columns `c` and axes `i` of
/// `|u(c + e_i) − u(c)|`, one term per vertical face direction.
pub fn total_variation(u: &GridFunction) -> u128 {
    u.grid()
        .adjacent_pairs()
        .map(|(a, b)| u.value(&a).abs_diff(u.value(&b)) as u128)
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid4() -> GridSpec {
        GridSpec::uniform(1, 4, (0, 4)).unwrap()
    }

    fn f(g: &GridSpec, v: &[i64]) -> GridFunction {
        GridFunction::new(g.clone(), v.to_vec()).unwrap()
    }

    #[test]
    fn prism_counts() {
        let g = GridSpec::uniform(1, 5, (-1, 4)).unwrap();
        assert_eq!(
            subgraph_prism(&GridFunction::constant(g.clone(), 0).unwrap()).len(),
            5
        );
        assert_eq!(
            subgraph_prism(&GridFunction::constant(g.clone(), 2).unwrap()).len(),
            15
        );
        assert_eq!(subgraph_prism(&f(&grid4(), &[1, 1, 3, 3])).len(), 8);
        assert!(subgraph_prism(&GridFunction::constant(g, -1).unwrap()).is_empty());
    }

    #[test]
    fn constant_graph() {
        let g = GridSpec::uniform(1, 6, (0, 4)).unwrap();
        let t = graph_current(&GridFunction::constant(g.clone(), 2).unwrap());
        assert_eq!(t.chain().len(), 6);
        assert_eq!(t.mass(), 6);
        assert!(t.chain().iter().all(|(c, k)| c.is_horizontal(1) && k == 1));
    }

    #[test]
    fn step_graph_by_hand() {
        let g = grid4();
        let t = graph_current(&f(&g, &[0, 0, 2, 2]));
        assert_eq!(t.mass(), 8);
        let split = t.mass_split();
        assert_eq!((split.horizontal, split.vertical), (4, 4));
        // rise at x = 2, fall across the wrap at x = 0
        let up = [
            Cell::new(&g, &[2, 0], &[1]).unwrap(),
            Cell::new(&g, &[2, 1], &[1]).unwrap(),
        ];
        let down = [
            Cell::new(&g, &[0, 0], &[1]).unwrap(),
            Cell::new(&g, &[0, 1], &[1]).unwrap(),
        ];
        for c in &up {
            assert_eq!(t.chain().coeff(c), 1);
        }
        for c in &down {
            assert_eq!(t.chain().coeff(c), -1);
        }
        assert!(t.chain().boundary().unwrap().is_empty());
    }

    #[test]
    fn graph_slices_are_single_atoms() {
        let g = GridSpec::new(2, vec![3, 2], (0, 5)).unwrap();
        let u =
            GridFunction::from_fn(g.clone(), |c| c.coords()[0] * 2 - c.coords()[1] + 1).unwrap();
        let t = graph_current(&u);
        for (c, h) in u.iter() {
            assert_eq!(t.slice(&c).to_stack().unwrap().heights(), &[h]);
        }
        assert_eq!(t.mass(), 6 + total_variation(&u));
    }

    #[test]
    fn total_variation_examples() {
        let g = grid4();
        assert_eq!(
            total_variation(&GridFunction::constant(g.clone(), 3).unwrap()),
            0
        );
        let u = f(&g, &[0, 0, 2, 2]);
        assert_eq!(total_variation(&u), 4);
        assert_eq!(total_variation(&u.shifted(1).unwrap()), 4);
    }

    #[test]
    fn rejects_out_of_range_heights() {
        let g = grid4();
        assert!(matches!(
            GridFunction::new(g.clone(), vec![0, 5, 0, 0]),
            Err(GraphError::HeightOutOfRange { value: 5, .. })
        ));
        assert!(matches!(
            GridFunction::new(g, vec![0, 0]),
            Err(GraphError::WrongLength { .. })
        ));
    }

    #[test]
    fn two_dimensional_orientation_is_positive() {
        let g = GridSpec::uniform(2, 3, (0, 3)).unwrap();
        let u = GridFunction::from_fn(g, |c| (c.coords()[0] + c.coords()[1]) % 3).unwrap();
        let t = graph_current(&u);
        assert!(t
            .chain()
            .iter()
            .filter(|(c, _)| c.is_horizontal(2))
            .all(|(_, k)| k == 1));
    }
}
