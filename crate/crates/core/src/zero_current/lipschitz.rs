use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Position, ZeroCurrent};

/// Most cells [`LipschitzProbe::exhaustive`] will enumerate (3^12 probes).
const MAX_EXHAUSTIVE_CELLS: usize = 12;

/// A bounded, piecewise-linear, 1-Lipschitz test function.
///
/// The function is zero left of `origin`, has slope `slopes[i] ∈ {-1, 0, 1}`
/// on `[origin + i·step, origin + (i+1)·step]`, and is constant to the right of
/// the last cell. Origins and steps are multiples of one half, so on integer
/// atoms every pairing is an exact binary fraction.
#[derive(Debug, Clone, PartialEq)]
pub struct LipschitzProbe {
    origin: f64,
    step: f64,
    slopes: Vec<i8>,
}

fn snap_down(t: f64) -> f64 {
    (t * 2.0).floor() / 2.0
}

fn snap_up(t: f64) -> f64 {
    (t * 2.0).ceil() / 2.0
}

fn cells_in(lo: f64, hi: f64, step: f64) -> usize {
    ((hi - lo) / step).ceil().max(0.0) as usize
}

impl LipschitzProbe {
    pub fn new(origin: f64, step: f64, slopes: Vec<i8>) -> Self {
        assert!(step > 0.0 && step.is_finite(), "step must be positive");
        assert!(
            slopes.iter().all(|s| (-1..=1).contains(s)),
            "slopes must lie in {{-1, 0, 1}}"
        );
        Self {
            origin: snap_down(origin),
            step: snap_up(step).max(0.5),
            slopes,
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        let mut value = 0.0;
        let mut left = self.origin;
        for &slope in &self.slopes {
            if t <= left {
                break;
            }
            let run = (t - left).min(self.step);
            value += slope as f64 * run;
            left += self.step;
        }
        value
    }

    /// `sup |φ|`, attained at one of the breakpoints.
    pub fn sup_norm(&self) -> f64 {
        let mut value: f64 = 0.0;
        let mut best: f64 = 0.0;
        for &slope in &self.slopes {
            value += slope as f64 * self.step;
            best = best.max(value.abs());
        }
        best
    }

    pub fn pair<P: Position>(&self, s: &ZeroCurrent<P>) -> f64 {
        s.pair(|p| self.eval(p.to_f64()))
    }

    /// Every slope pattern over `[lo, hi]` at the given resolution.
    ///
    /// Panics if the window has more than 12 cells.
    pub fn exhaustive(lo: f64, hi: f64, step: f64) -> Vec<Self> {
        let (lo, hi, step) = (snap_down(lo), snap_up(hi), snap_up(step).max(0.5));
        let cells = cells_in(lo, hi, step);
        assert!(
            cells <= MAX_EXHAUSTIVE_CELLS,
            "{cells} cells is too many to enumerate"
        );
        let total = 3usize.pow(cells as u32);
        (0..total)
            .map(|mut code| {
                let slopes = (0..cells)
                    .map(|_| {
                        let s = (code % 3) as i8 - 1;
                        code /= 3;
                        s
                    })
                    .collect();
                Self::new(lo, step, slopes)
            })
            .collect()
    }

    /// `count` probes over `[lo, hi]` with uniformly random slopes,
    /// deterministic in `seed`.
    pub fn sampled(lo: f64, hi: f64, step: f64, count: usize, seed: u64) -> Vec<Self> {
        let (lo, hi, step) = (snap_down(lo), snap_up(hi), snap_up(step).max(0.5));
        let cells = cells_in(lo, hi, step);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count)
            .map(|_| {
                let slopes = (0..cells).map(|_| rng.gen_range(-1..=1)).collect();
                Self::new(lo, step, slopes)
            })
            .collect()
    }

    /// Largest pairing over a family; a lower bound for the flat functional.
    pub fn best_pairing<P: Position>(family: &[Self], s: &ZeroCurrent<P>) -> f64 {
        family
            .iter()
            .map(|phi| phi.pair(s))
            .fold(f64::NEG_INFINITY, f64::max)
    }
}
