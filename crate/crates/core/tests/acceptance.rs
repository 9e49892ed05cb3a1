//! Acceptance criteria, one line of output per criterion.
//!
//! Run with `cargo test -p leafsup-core --test acceptance -- --nocapture`.

mod common;

use std::io::{self, Write};
use std::panic::{self, AssertUnwindSafe};
use std::time::{Duration, Instant};

use leafsup::codec::{decode_chain, encode_chain};
use leafsup::cubical::{Cell, Chain, GridSpec};
use leafsup::current::{generate_random, CurrentError, PositiveClosedCurrent};
use leafsup::decompose::{
    crossing_pair, leaf_decomposition, peel_decomposition, sum_graph_currents, superpose,
};
use leafsup::graph::graph_current;
use leafsup::zero_current::{FlatValue, LipschitzProbe, PositiveStack, Weight, ZeroCurrent};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const REAL_TOLERANCE: f64 = 1e-9;
const ROUND_TRIP_BUDGET: Duration = Duration::from_secs(10);

fn int_stack<R: Rng>(rng: &mut R, h: usize) -> PositiveStack<i64> {
    PositiveStack::new((0..h).map(|_| rng.gen_range(-20..=20))).unwrap()
}

fn real_stack<R: Rng>(rng: &mut R, h: usize) -> PositiveStack<f64> {
    PositiveStack::new((0..h).map(|_| rng.gen_range(-20.0..20.0))).unwrap()
}

fn c1_round_trip(corpus: &[common::Sample]) {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    assert!(corpus.len() >= 200);
    for s in corpus {
        let stack = leaf_decomposition(&s.current).unwrap();
        assert_eq!(superpose(&stack).unwrap(), s.current, "{}", s.label);
        assert_eq!(
            leaf_decomposition(&superpose(&stack).unwrap()).unwrap(),
            stack,
            "{}",
            s.label
        );
        // and from the stack side, on an independent random monotone stack
        let other = common::random_stack(s.current.grid(), rng.gen_range(0..=5), &mut rng);
        assert_eq!(
            leaf_decomposition(&superpose(&other).unwrap()).unwrap(),
            other
        );
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed < ROUND_TRIP_BUDGET,
        "round trip took {elapsed:?}, budget {ROUND_TRIP_BUDGET:?}"
    );
}

fn c2_mass_additivity(corpus: &[common::Sample]) {
    for s in corpus {
        let stack = leaf_decomposition(&s.current).unwrap();
        assert_eq!(s.current.mass(), stack.sum_of_leaf_masses(), "{}", s.label);
    }
    for grid in [
        GridSpec::uniform(1, 8, (0, 4)).unwrap(),
        GridSpec::uniform(2, 6, (-1, 3)).unwrap(),
        GridSpec::new(2, vec![2, 1], (0, 1)).unwrap(),
    ] {
        let leaves = crossing_pair(&grid).unwrap();
        let summed = sum_graph_currents(&grid, &leaves).unwrap();
        let separate: u128 = leaves.iter().map(|u| graph_current(u).mass()).sum();
        assert!(summed.mass() < separate, "no cancellation on {grid}");
    }
}

fn c3_flat_distance() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for h in 1..=6 {
        for _ in 0..500 {
            let (a, b) = (int_stack(&mut rng, h), int_stack(&mut rng, h));
            assert_eq!(a.flat_distance(&b), a.flat_distance_oracle(&b));
            let (a, b) = (real_stack(&mut rng, h), real_stack(&mut rng, h));
            let fast = a.flat_distance(&b).unwrap();
            let brute = a.flat_distance_oracle(&b).unwrap();
            assert!((fast - brute).abs() <= REAL_TOLERANCE, "{fast} vs {brute}");
        }
    }
    for _ in 0..200 {
        let h = rng.gen_range(1..=6);
        let (a, b, c) = (
            int_stack(&mut rng, h),
            int_stack(&mut rng, h),
            int_stack(&mut rng, h),
        );
        let d = |x: &PositiveStack<i64>, y: &PositiveStack<i64>| x.flat_distance(y).unwrap();
        assert_eq!(d(&a, &b), d(&b, &a));
        assert_eq!(d(&a, &a), 0);
        assert_eq!(d(&a, &b) == 0, a == b);
        assert!(d(&a, &c) <= d(&a, &b) + d(&b, &c));

        let (a, b, c) = (
            real_stack(&mut rng, h),
            real_stack(&mut rng, h),
            real_stack(&mut rng, h),
        );
        let d = |x: &PositiveStack<f64>, y: &PositiveStack<f64>| x.flat_distance(y).unwrap();
        assert_eq!(d(&a, &b), d(&b, &a));
        assert_eq!(d(&a, &a), 0.0);
        assert!(d(&a, &c) <= d(&a, &b) + d(&b, &c) + REAL_TOLERANCE);
    }
}

fn c4_flat_functional() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..500 {
        let h = rng.gen_range(0..=6);
        let (a, b) = (int_stack(&mut rng, h), int_stack(&mut rng, h));
        let diff = a.to_current().minus(&b.to_current());
        let flat = diff.flat_functional();
        assert_eq!(flat, FlatValue::Finite(a.flat_distance(&b).unwrap()));
        let flat = flat.finite().unwrap();
        assert!(flat as u64 <= diff.mass() * diff.diameter() as u64);
        let family = LipschitzProbe::sampled(-20.0, 20.0, 0.5, 200, rng.gen());
        assert!(LipschitzProbe::best_pairing(&family, &diff) <= flat as f64);

        let (a, b) = (real_stack(&mut rng, h), real_stack(&mut rng, h));
        let diff = a.to_current().minus(&b.to_current());
        let flat = diff.flat_functional().finite().unwrap();
        assert!((flat - a.flat_distance(&b).unwrap()).abs() <= REAL_TOLERANCE);
        assert!(flat <= diff.mass() as f64 * diff.diameter() + REAL_TOLERANCE);
        assert!(LipschitzProbe::best_pairing(&family, &diff) <= flat + REAL_TOLERANCE);
    }
    for _ in 0..500 {
        let len = rng.gen_range(0..=8);
        let s = ZeroCurrent::from_signed((0..len).map(|_| {
            let w = if rng.gen_bool(0.5) {
                Weight::Positive
            } else {
                Weight::Negative
            };
            (rng.gen_range(-5..=5i64), w)
        }))
        .unwrap();
        assert_eq!(s.flat_functional().is_infinite(), s.average() != 0);
    }
}

fn c5_slice_structure(corpus: &[common::Sample]) {
    for s in corpus {
        let slices = s.current.slice_all().unwrap();
        assert_eq!(slices.count(), s.leaves, "{}", s.label);
        assert!(slices.iter().all(|(_, st)| st.len() == s.leaves));
        assert_eq!(s.current.mass_split().horizontal, slices.total_mass());
    }
}

fn c6_max_atom_lipschitz() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..1000 {
        let h = rng.gen_range(1..=8);
        let (a, b) = (int_stack(&mut rng, h), int_stack(&mut rng, h));
        let gap = (a.max_atom().unwrap() - b.max_atom().unwrap()).abs();
        assert!(gap <= a.flat_distance(&b).unwrap());
        let (a, b) = (real_stack(&mut rng, h), real_stack(&mut rng, h));
        let gap = (a.max_atom().unwrap() - b.max_atom().unwrap()).abs();
        assert!(gap <= a.flat_distance(&b).unwrap() + REAL_TOLERANCE);
    }
}

fn c7_flat_variation(corpus: &[common::Sample]) {
    for s in corpus {
        let slices = s.current.slice_all().unwrap();
        let vertical = s.current.mass_split().vertical;
        assert_eq!(slices.flat_variation(), vertical, "{}", s.label);
        assert!(vertical <= s.current.n() as u128 * s.current.mass());
    }
}

fn c8_uniqueness(corpus: &[common::Sample]) {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for s in corpus {
        let stack = leaf_decomposition(&s.current).unwrap();
        assert_eq!(
            peel_decomposition(&s.current).unwrap(),
            stack,
            "{}",
            s.label
        );

        let text = encode_chain(s.current.chain());
        let mut doc: serde_json::Value = serde_json::from_str(&text).unwrap();
        doc["cells"].as_array_mut().unwrap().shuffle(&mut rng);
        let shuffled = decode_chain(&doc.to_string()).unwrap();
        let reparsed = PositiveClosedCurrent::validate(shuffled).unwrap();
        assert_eq!(leaf_decomposition(&reparsed).unwrap(), stack);
        assert_eq!(encode_chain(reparsed.chain()), text);
    }
}

fn c9_validation() {
    let grid = GridSpec::uniform(1, 4, (0, 4)).unwrap();
    let square = Chain::from_terms(
        grid.clone(),
        2,
        [(Cell::new(&grid, &[1, 0], &[0, 1]).unwrap(), 1)],
    )
    .unwrap();
    match PositiveClosedCurrent::validate(square.boundary().unwrap()) {
        Err(CurrentError::Invalid(v)) => {
            assert!(!v.negative_horizontal.is_empty());
            assert!(v.nonzero_boundary.is_empty());
        }
        other => panic!("square loop accepted: {other:?}"),
    }
    let edge = Chain::from_terms(
        grid.clone(),
        1,
        [(Cell::new(&grid, &[0, 2], &[0]).unwrap(), 1)],
    )
    .unwrap();
    match PositiveClosedCurrent::validate(edge) {
        Err(CurrentError::Invalid(v)) => {
            assert!(!v.nonzero_boundary.is_empty());
            assert!(v.negative_horizontal.is_empty());
        }
        other => panic!("open edge accepted: {other:?}"),
    }
    for seed in 0..50 {
        let n = 1 + (seed % 2) as usize;
        let g = GridSpec::uniform(n, 3 + (seed % 5) as i64, (0, 5)).unwrap();
        let t = generate_random(&g, (seed % 6) as usize, 20, seed);
        PositiveClosedCurrent::validate(t.into_chain()).unwrap();
    }
}

type Criterion<'a> = (&'static str, Box<dyn Fn() + 'a>);

#[test]
fn acceptance_criteria() {
    let corpus = common::corpus();
    let criteria: Vec<Criterion> = vec![
        (
            "1 round-trip superpose/decompose",
            Box::new(|| c1_round_trip(&corpus)),
        ),
        (
            "2 mass additivity and crossing anti-example",
            Box::new(|| c2_mass_additivity(&corpus)),
        ),
        (
            "3 sorted flat distance = permutation oracle, metric axioms",
            Box::new(c3_flat_distance),
        ),
        ("4 flat functional", Box::new(c4_flat_functional)),
        (
            "5 constant slice count, sharp slice mass",
            Box::new(|| c5_slice_structure(&corpus)),
        ),
        ("6 max atom is 1-Lipschitz", Box::new(c6_max_atom_lipschitz)),
        (
            "7 flat variation = vertical mass",
            Box::new(|| c7_flat_variation(&corpus)),
        ),
        (
            "8 uniqueness and determinism",
            Box::new(|| c8_uniqueness(&corpus)),
        ),
        ("9 validation", Box::new(c9_validation)),
    ];
    let mut failed = Vec::new();
    for (name, check) in &criteria {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(check));
        let verdict = if outcome.is_ok() { "PASS" } else { "FAIL" };
        // bypasses libtest capture so the verdicts show in every run
        writeln!(
            io::stderr(),
            "[{verdict}] criterion {name} ({:.2?})",
            start.elapsed()
        )
        .unwrap();
        if outcome.is_err() {
            failed.push(*name);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
