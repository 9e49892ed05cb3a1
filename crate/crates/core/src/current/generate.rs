use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::PositiveClosedCurrent;
use crate::cubical::{Cell, Chain, GridSpec};
use crate::graph::{graph_current, GridFunction};

/// A random leaf over the whole height range. About half the columns sit on
/// a shared base level so that neighbouring leaves often touch or coincide.
pub fn random_grid_function<R: Rng>(grid: &GridSpec, rng: &mut R) -> GridFunction {
    let (lo, hi) = grid.y_range();
    let base = rng.gen_range(lo..=hi);
    let values = (0..grid.column_count())
        .map(|_| {
            if rng.gen_bool(0.5) {
                base
            } else {
                rng.gen_range(lo..=hi)
            }
        })
        .collect();
    GridFunction::new(grid.clone(), values).expect("values drawn inside the range")
}

/// A deterministic test current: the sum of `leaves` random graph currents,
/// followed by up to `perturbations` attempts at adding `±∂` of a random
/// solid cell. An attempt is kept only if no horizontal coefficient turns
/// negative, so the result is always closed and positive.
pub fn generate_random(
    grid: &GridSpec,
    leaves: usize,
    perturbations: usize,
    seed: u64,
) -> PositiveClosedCurrent {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = grid.n();
    let mut chain = Chain::zero(grid.clone(), n).expect("n <= n + 1");
    for _ in 0..leaves {
        let u = random_grid_function(grid, &mut rng);
        chain = chain
            .add(graph_current(&u).chain())
            .expect("same grid, small coefficients");
    }

    let (lo, hi) = grid.y_range();
    for _ in 0..perturbations {
        let column = grid.column_at(rng.gen_range(0..grid.column_count()));
        let y = rng.gen_range(lo..hi);
        let sign: i64 = if rng.gen_bool(0.5) { 1 } else { -1 };
        let solid = Cell::solid(grid, &column, y).expect("y + 1 <= y_max");
        let bump = Chain::from_terms(grid.clone(), n + 1, [(solid, sign)])
            .and_then(|c| c.boundary())
            .expect("single cell boundary");
        let keeps_positivity = bump
            .iter()
            .filter(|(c, _)| c.is_horizontal(n))
            .all(|(c, k)| chain.coeff(c) + k >= 0);
        if keeps_positivity {
            chain = chain.add(&bump).expect("same grid");
        }
    }
    PositiveClosedCurrent::validate(chain).expect("sum of closed positive chains")
}
