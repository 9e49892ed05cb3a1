#![allow(dead_code)]

use leafsup::cubical::GridSpec;
use leafsup::current::{generate_random, random_grid_function, PositiveClosedCurrent};
use leafsup::decompose::LeafStack;
use leafsup::graph::GridFunction;
use rand::Rng;

pub struct Sample {
    pub label: String,
    pub current: PositiveClosedCurrent,
    pub leaves: usize,
}

/// 120 currents with n = 1 (extents 1..=64) and 100 with n = 2 (extents up to
/// 16 x 16), 0-5 leaves and 0-20 perturbation attempts each, fixed seeds.
pub fn corpus() -> Vec<Sample> {
    let mut out = Vec::new();
    for i in 0..120u64 {
        let extent = 1 + ((i * 37) % 64) as i64;
        let height = 2 + (i % 7) as i64;
        let grid = GridSpec::uniform(1, extent, (-(i as i64 % 3), height)).unwrap();
        let leaves = (i % 6) as usize;
        let perturb = ((i * 7) % 21) as usize;
        out.push(Sample {
            label: format!("n1/{i} extent={extent} leaves={leaves} perturb={perturb}"),
            current: generate_random(&grid, leaves, perturb, 1000 + i),
            leaves,
        });
    }
    for i in 0..100u64 {
        let ex = 1 + ((i * 5) % 16) as i64;
        let ey = 1 + ((i * 11 + 3) % 16) as i64;
        let grid = GridSpec::new(2, vec![ex, ey], (0, 2 + (i % 5) as i64)).unwrap();
        let leaves = ((i + 3) % 6) as usize;
        let perturb = ((i * 13) % 21) as usize;
        out.push(Sample {
            label: format!("n2/{i} extents={ex}x{ey} leaves={leaves} perturb={perturb}"),
            current: generate_random(&grid, leaves, perturb, 5000 + i),
            leaves,
        });
    }
    out
}

/// A monotone stack built by sorting independent random leaves per column.
pub fn random_stack<R: Rng>(grid: &GridSpec, count: usize, rng: &mut R) -> LeafStack {
    let raw: Vec<GridFunction> = (0..count)
        .map(|_| random_grid_function(grid, rng))
        .collect();
    let mut columns: Vec<Vec<i64>> = (0..grid.column_count())
        .map(|c| raw.iter().map(|u| u.values()[c]).collect())
        .collect();
    for col in &mut columns {
        col.sort();
    }
    let leaves = (0..count)
        .map(|j| GridFunction::new(grid.clone(), columns.iter().map(|c| c[j]).collect()).unwrap())
        .collect();
    LeafStack::new(grid.clone(), leaves).unwrap()
}
