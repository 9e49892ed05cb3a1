//! Zero-dimensional integer currents on the real line.
//!
//! A [`ZeroCurrent`] is a finite signed sum of unit Dirac atoms. Positive
//! currents with `h` atoms are kept as a sorted [`PositiveStack`]. The flat
//! functional is evaluated exactly from the cumulative function of the atoms,
//! and the flat distance between stacks of equal size by matching sorted
//! heights. A brute-force assignment oracle cross-checks the latter.
//!
//! Positions are generic over [`Position`]: slices of lattice currents use
//! `i64` and stay exact, standalone use may pass `f64`.

mod lipschitz;

use std::cmp::Ordering;
use std::fmt;

use itertools::Itertools;
use num_traits::Signed;
use thiserror::Error;

pub use lipschitz::LipschitzProbe;

/// Largest stack the permutation oracle accepts by default (8! matchings).
pub const DEFAULT_ORACLE_BOUND: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ZeroCurrentError {
    #[error("stacks have different averages ({left} vs {right})")]
    AverageMismatch { left: usize, right: usize },
    #[error("stack of {size} atoms exceeds the oracle bound {bound}")]
    OracleBoundExceeded { size: usize, bound: usize },
    #[error("the stack has no atoms")]
    EmptyStack,
    #[error("atom position is not a finite number")]
    NonFinitePosition,
}

/// Scalar type for atom positions.
pub trait Position: Copy + PartialOrd + Signed + fmt::Debug + fmt::Display {
    fn from_count(k: i64) -> Self;
    fn is_finite_position(&self) -> bool;
    fn to_f64(self) -> f64;

    fn total_order(&self, other: &Self) -> Ordering {
        self.partial_cmp(other).unwrap_or(Ordering::Equal)
    }
}

impl Position for i64 {
    fn from_count(k: i64) -> Self {
        k
    }
    fn is_finite_position(&self) -> bool {
        true
    }
    fn to_f64(self) -> f64 {
        self as f64
    }
    fn total_order(&self, other: &Self) -> Ordering {
        self.cmp(other)
    }
}

impl Position for f64 {
    fn from_count(k: i64) -> Self {
        k as f64
    }
    fn is_finite_position(&self) -> bool {
        self.is_finite()
    }
    fn to_f64(self) -> f64 {
        self
    }
    fn total_order(&self, other: &Self) -> Ordering {
        self.total_cmp(other)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Weight {
    Negative,
    Positive,
}

impl Weight {
    pub fn value(self) -> i64 {
        match self {
            Weight::Negative => -1,
            Weight::Positive => 1,
        }
    }

    fn flip(self) -> Self {
        match self {
            Weight::Negative => Weight::Positive,
            Weight::Positive => Weight::Negative,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom<P> {
    pub position: P,
    pub weight: Weight,
}

/// Value of the flat functional: finite, or `+inf` for non-zero average.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FlatValue<P> {
    Finite(P),
    Infinite,
}

impl<P: Position> FlatValue<P> {
    pub fn is_infinite(&self) -> bool {
        matches!(self, FlatValue::Infinite)
    }

    pub fn finite(self) -> Option<P> {
        match self {
            FlatValue::Finite(v) => Some(v),
            FlatValue::Infinite => None,
        }
    }

    pub fn to_f64(self) -> f64 {
        match self {
            FlatValue::Finite(v) => v.to_f64(),
            FlatValue::Infinite => f64::INFINITY,
        }
    }
}

impl<P: Position> fmt::Display for FlatValue<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FlatValue::Finite(v) => write!(f, "{v}"),
            FlatValue::Infinite => write!(f, "inf"),
        }
    }
}

/// Finite signed sum of unit Dirac atoms, stored sorted by (position, weight).
///
/// Opposite atoms at the same position stay in storage but are treated as
/// cancelled by equality, [`ZeroCurrent::mass`] and the flat functional.
#[derive(Debug, Clone)]
pub struct ZeroCurrent<P> {
    atoms: Vec<Atom<P>>,
}

impl<P: Position> ZeroCurrent<P> {
    pub fn empty() -> Self {
        Self { atoms: Vec::new() }
    }

    pub fn new(atoms: impl IntoIterator<Item = Atom<P>>) -> Result<Self, ZeroCurrentError> {
        let mut atoms: Vec<_> = atoms.into_iter().collect();
        if atoms.iter().any(|a| !a.position.is_finite_position()) {
            return Err(ZeroCurrentError::NonFinitePosition);
        }
        atoms.sort_by(|a, b| {
            a.position
                .total_order(&b.position)
                .then(a.weight.cmp(&b.weight))
        });
        Ok(Self { atoms })
    }

    /// `Σ weight · δ_position` from `(position, ±1)` pairs.
    pub fn from_signed(
        terms: impl IntoIterator<Item = (P, Weight)>,
    ) -> Result<Self, ZeroCurrentError> {
        Self::new(
            terms
                .into_iter()
                .map(|(position, weight)| Atom { position, weight }),
        )
    }

    pub fn positive(positions: impl IntoIterator<Item = P>) -> Result<Self, ZeroCurrentError> {
        Self::from_signed(positions.into_iter().map(|p| (p, Weight::Positive)))
    }

    pub fn atoms(&self) -> &[Atom<P>] {
        &self.atoms
    }

    /// Number of stored atoms, cancelling pairs included.
    pub fn atom_count(&self) -> usize {
        self.atoms.len()
    }

    pub fn average(&self) -> i64 {
        self.atoms.iter().map(|a| a.weight.value()).sum()
    }

    /// Net multiplicity per distinct position, zeros dropped, ascending.
    pub fn reduced(&self) -> Vec<(P, i64)> {
        let mut out: Vec<(P, i64)> = Vec::new();
        for atom in &self.atoms {
            match out.last_mut() {
                Some((p, k)) if p.total_order(&atom.position) == Ordering::Equal => {
                    *k += atom.weight.value()
                }
                _ => out.push((atom.position, atom.weight.value())),
            }
        }
        out.retain(|&(_, k)| k != 0);
        out
    }

    pub fn mass(&self) -> u64 {
        self.reduced().iter().map(|&(_, k)| k.unsigned_abs()).sum()
    }

    /// Diameter of the (reduced) support; zero when empty.
    pub fn diameter(&self) -> P {
        let reduced = self.reduced();
        match (reduced.first(), reduced.last()) {
            (Some(&(lo, _)), Some(&(hi, _))) => hi - lo,
            _ => P::zero(),
        }
    }

    pub fn negated(&self) -> Self {
        Self::new(self.atoms.iter().map(|a| Atom {
            position: a.position,
            weight: a.weight.flip(),
        }))
        .expect("positions already validated")
    }

    pub fn plus(&self, other: &Self) -> Self {
        Self::new(self.atoms.iter().chain(&other.atoms).copied())
            .expect("positions already validated")
    }

    pub fn minus(&self, other: &Self) -> Self {
        self.plus(&other.negated())
    }

    /// `⟨S, φ⟩ = Σ σ_j φ(A_j)`.
    pub fn pair(&self, phi: impl Fn(P) -> f64) -> f64 {
        self.atoms
            .iter()
            .map(|a| a.weight.value() as f64 * phi(a.position))
            .sum()
    }

    /// The flat functional: `+inf` unless the average vanishes, otherwise the
    /// integral of `|F|` where `F(t) = Σ_{A_j ≤ t} σ_j`.
    pub fn flat_functional(&self) -> FlatValue<P> {
        if self.average() != 0 {
            return FlatValue::Infinite;
        }
        let mut level = 0i64;
        let mut total = P::zero();
        for ((pos, k), (next, _)) in self.reduced().into_iter().tuple_windows() {
            level += k;
            total = total + P::from_count(level.abs()) * (next - pos);
        }
        FlatValue::Finite(total)
    }

    /// The atoms as a positive stack, if every net multiplicity is positive.
    pub fn to_stack(&self) -> Option<PositiveStack<P>> {
        let reduced = self.reduced();
        if reduced.iter().any(|&(_, k)| k < 0) {
            return None;
        }
        Some(PositiveStack {
            heights: reduced
                .into_iter()
                .flat_map(|(p, k)| std::iter::repeat_n(p, k as usize))
                .collect(),
        })
    }
}

impl<P: Position> PartialEq for ZeroCurrent<P> {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = (self.reduced(), other.reduced());
        a.len() == b.len()
            && a.iter()
                .zip(&b)
                .all(|(x, y)| x.0.total_order(&y.0) == Ordering::Equal && x.1 == y.1)
    }
}

impl<P: Position> fmt::Display for ZeroCurrent<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.atoms.is_empty() {
            return write!(f, "0");
        }
        for (i, a) in self.atoms.iter().enumerate() {
            let sign = match (i, a.weight) {
                (0, Weight::Positive) => "",
                (_, Weight::Positive) => " + ",
                (0, Weight::Negative) => "-",
                (_, Weight::Negative) => " - ",
            };
            write!(f, "{sign}δ_{}", a.position)?;
        }
        Ok(())
    }
}

/// A nonnegative 0-current of average `h`: `h` heights, sorted, repeats allowed.
#[derive(Debug, Clone, PartialEq)]
pub struct PositiveStack<P> {
    heights: Vec<P>,
}

impl<P: Position> PositiveStack<P> {
    pub fn new(heights: impl IntoIterator<Item = P>) -> Result<Self, ZeroCurrentError> {
        let mut heights: Vec<P> = heights.into_iter().collect();
        if heights.iter().any(|h| !h.is_finite_position()) {
            return Err(ZeroCurrentError::NonFinitePosition);
        }
        heights.sort_by(|a, b| a.total_order(b));
        Ok(Self { heights })
    }

    pub fn heights(&self) -> &[P] {
        &self.heights
    }

    pub fn len(&self) -> usize {
        self.heights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heights.is_empty()
    }

    pub fn average(&self) -> usize {
        self.heights.len()
    }

    pub fn to_current(&self) -> ZeroCurrent<P> {
        ZeroCurrent {
            atoms: self
                .heights
                .iter()
                .map(|&position| Atom {
                    position,
                    weight: Weight::Positive,
                })
                .collect(),
        }
    }

    fn check_same_size(&self, other: &Self) -> Result<(), ZeroCurrentError> {
        if self.len() != other.len() {
            return Err(ZeroCurrentError::AverageMismatch {
                left: self.len(),
                right: other.len(),
            });
        }
        Ok(())
    }

    /// Flat distance by sorted matching: `Σ_j |A_j − B_j|`.
    pub fn flat_distance(&self, other: &Self) -> Result<P, ZeroCurrentError> {
        self.check_same_size(other)?;
        Ok(self
            .heights
            .iter()
            .zip(&other.heights)
            .fold(P::zero(), |acc, (&a, &b)| acc + (a - b).abs()))
    }

    /// Minimum matching cost over every permutation, for stacks up to
    /// [`DEFAULT_ORACLE_BOUND`] atoms.
    pub fn flat_distance_oracle(&self, other: &Self) -> Result<P, ZeroCurrentError> {
        self.flat_distance_oracle_bounded(other, DEFAULT_ORACLE_BOUND)
    }

    pub fn flat_distance_oracle_bounded(
        &self,
        other: &Self,
        bound: usize,
    ) -> Result<P, ZeroCurrentError> {
        self.check_same_size(other)?;
        let h = self.len();
        if h > bound {
            return Err(ZeroCurrentError::OracleBoundExceeded { size: h, bound });
        }
        if h == 0 {
            return Ok(P::zero());
        }
        let best = (0..h)
            .permutations(h)
            .map(|perm| {
                perm.iter().enumerate().fold(P::zero(), |acc, (i, &j)| {
                    acc + (self.heights[i] - other.heights[j]).abs()
                })
            })
            .min_by(|a, b| a.total_order(b))
            .expect("at least one permutation");
        Ok(best)
    }

    /// The top atom `A_h`.
    pub fn max_atom(&self) -> Result<P, ZeroCurrentError> {
        self.heights
            .last()
            .copied()
            .ok_or(ZeroCurrentError::EmptyStack)
    }
}
