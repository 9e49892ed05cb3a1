use leafsup::cubical::{Cell, Chain, GridSpec};
use leafsup::current::random_grid_function;
use leafsup::graph::{graph_current, total_variation, GridFunction};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn grid_strategy() -> impl Strategy<Value = GridSpec> {
    prop_oneof![
        (1..=12i64, -2..=0i64, 1..=5i64)
            .prop_map(|(e, lo, hi)| GridSpec::uniform(1, e, (lo, hi)).unwrap()),
        (1..=5i64, 1..=5i64, 1..=4i64)
            .prop_map(|(a, b, h)| GridSpec::new(2, vec![a, b], (0, h)).unwrap()),
        (1..=3i64, 1..=3i64).prop_map(|(e, h)| GridSpec::uniform(3, e, (0, h)).unwrap()),
    ]
}

fn function_on(grid: GridSpec) -> impl Strategy<Value = GridFunction> {
    let (lo, hi) = grid.y_range();
    proptest::collection::vec(lo..=hi, grid.column_count())
        .prop_map(move |v| GridFunction::new(grid.clone(), v).unwrap())
}

fn function() -> impl Strategy<Value = GridFunction> {
    grid_strategy().prop_flat_map(function_on)
}

fn ordered_pair() -> impl Strategy<Value = (GridFunction, GridFunction)> {
    grid_strategy().prop_flat_map(|g| {
        (function_on(g.clone()), function_on(g)).prop_map(|(a, b)| {
            let grid = a.grid().clone();
            let lo = a
                .values()
                .iter()
                .zip(b.values())
                .map(|(x, y)| *x.min(y))
                .collect();
            let hi = a
                .values()
                .iter()
                .zip(b.values())
                .map(|(x, y)| *x.max(y))
                .collect();
            (
                GridFunction::new(grid.clone(), lo).unwrap(),
                GridFunction::new(grid, hi).unwrap(),
            )
        })
    })
}

/// Builds the graph current face by face: the top face of every column, plus
/// the vertical faces between each column `c` and its forward neighbour
/// `c + e_i` covering the heights strictly between their graph values,
/// oriented by `(-1)^(n+i)` times the direction of the step.
fn placed_faces(u: &GridFunction) -> Chain {
    let grid = u.grid();
    let n = grid.n();
    let mut terms = Vec::new();
    for (c, y) in u.iter() {
        terms.push((Cell::horizontal(grid, &c, y).unwrap(), 1));
    }
    for (a, b) in grid.adjacent_pairs() {
        let i = (0..n).find(|&i| grid.step(&a, i) == b).unwrap();
        let axes: Vec<usize> = (0..=n).filter(|&j| j != i).collect();
        let sign = if (n + i).is_multiple_of(2) { 1 } else { -1 };
        let (ua, ub) = (u.value(&a), u.value(&b));
        for y in ua.min(ub)..ua.max(ub) {
            let mut anchor = b.coords().to_vec();
            anchor.push(y);
            let k = if ua > ub { sign } else { -sign };
            terms.push((Cell::new(grid, &anchor, &axes).unwrap(), k));
        }
    }
    Chain::from_terms(grid.clone(), n, terms).unwrap()
}

proptest! {
    #[test]
    fn prism_construction_agrees_with_face_placement(u in function()) {
        let t = graph_current(&u);
        prop_assert_eq!(t.chain(), &placed_faces(&u));
    }

    #[test]
    fn graph_current_is_closed_positive_with_one_atom_per_slice(u in function()) {
        let t = graph_current(&u);
        prop_assert!(t.chain().boundary().unwrap().is_empty());
        let slices = t.slice_all().unwrap();
        prop_assert_eq!(slices.count(), 1);
        for (c, s) in slices.iter() {
            prop_assert_eq!(s.heights(), &[u.value(&c)]);
        }
    }

    #[test]
    fn mass_is_columns_plus_total_variation(u in function()) {
        let t = graph_current(&u);
        let split = t.mass_split();
        prop_assert_eq!(split.horizontal, u.grid().column_count() as u128);
        prop_assert_eq!(split.vertical, total_variation(&u));
        prop_assert_eq!(t.mass(), split.total());
    }

    #[test]
    fn ordered_graphs_never_cancel((v, u) in ordered_pair()) {
        let (a, b) = (graph_current(&v), graph_current(&u));
        for (cell, k) in a.chain().iter() {
            let j = b.chain().coeff(cell);
            prop_assert!(j == 0 || (j > 0) == (k > 0), "{:?}: {} vs {}", cell, k, j);
        }
        prop_assert_eq!(a.chain().add(b.chain()).unwrap().mass(), a.mass() + b.mass());
    }

    #[test]
    fn translation_commutes_with_graph_current(u in function(), k in -3..=3i64) {
        if let Ok(shifted) = u.shifted(k) {
            let grid = u.grid();
            let t = graph_current(&u);
            let moved = t.chain().iter().map(|(c, m)| {
                let mut anchor = c.anchor().to_vec();
                *anchor.last_mut().unwrap() += k;
                (Cell::new(grid, &anchor, c.axes()).unwrap(), m)
            });
            let moved = Chain::from_terms(grid.clone(), grid.n(), moved).unwrap();
            let s = graph_current(&shifted);
            prop_assert_eq!(s.chain(), &moved);
            prop_assert_eq!(total_variation(&shifted), total_variation(&u));
        }
    }

    #[test]
    fn horizontal_pairing_samples_the_graph(u in function()) {
        let phi = |c: &leafsup::cubical::Column, y: i64| {
            (y as f64 * 0.7).sin() + c.coords().iter().sum::<i64>() as f64 * 0.25
        };
        let direct: f64 = u.iter().map(|(c, y)| phi(&c, y)).sum();
        prop_assert!((graph_current(&u).pair_horizontal(phi) - direct).abs() < 1e-9);
    }
}

#[test]
fn random_grid_functions_stay_in_range() {
    let grid = GridSpec::new(2, vec![7, 3], (-4, 2)).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..50 {
        let u = random_grid_function(&grid, &mut rng);
        assert!(u.values().iter().all(|v| (-4..=2).contains(v)));
    }
}
