use serde::Serialize;

use leafsup::cubical::Cell;
use leafsup::current::{PositiveClosedCurrent, Violations};
use leafsup::decompose::{
    crossing_pair, leaf_decomposition, peel_decomposition, sum_graph_currents, DecomposeError,
};
use leafsup::graph::graph_current;

#[derive(Serialize)]
pub struct OffendingCell {
    anchor: Vec<i64>,
    axes: Vec<usize>,
    coeff: i64,
}

fn offending(cells: &[(Cell, i64)]) -> Vec<OffendingCell> {
    cells
        .iter()
        .map(|(c, k)| OffendingCell {
            anchor: c.anchor().to_vec(),
            axes: c.axes().to_vec(),
            coeff: *k,
        })
        .collect()
}

#[derive(Serialize)]
pub struct InvalidReport {
    valid: bool,
    reason: String,
    #[serde(rename = "NonzeroBoundary")]
    nonzero_boundary: Vec<OffendingCell>,
    #[serde(rename = "NegativeHorizontal")]
    negative_horizontal: Vec<OffendingCell>,
}

impl InvalidReport {
    pub fn from_violations(v: &Violations) -> Self {
        Self {
            valid: false,
            reason: v.to_string(),
            nonzero_boundary: offending(&v.nonzero_boundary),
            negative_horizontal: offending(&v.negative_horizontal),
        }
    }

    pub fn other(reason: String) -> Self {
        Self {
            valid: false,
            reason,
            nonzero_boundary: Vec::new(),
            negative_horizontal: Vec::new(),
        }
    }
}

#[derive(Serialize)]
pub struct ValidReport {
    valid: bool,
    #[serde(rename = "N")]
    count: usize,
    mass: u128,
}

impl ValidReport {
    pub fn new(t: &PositiveClosedCurrent) -> Self {
        Self {
            valid: true,
            count: t.slice_all().map_or(0, |s| s.count()),
            mass: t.mass(),
        }
    }
}

#[derive(Serialize)]
pub struct Masses {
    horizontal: u128,
    vertical: u128,
    total: u128,
}

#[derive(Serialize)]
pub struct Verdict<T> {
    pass: bool,
    #[serde(flatten)]
    values: T,
}

#[derive(Serialize)]
pub struct Additivity {
    mass: u128,
    sum_of_leaf_masses: u128,
}

#[derive(Serialize)]
pub struct FlatVariation {
    flat_variation: u128,
    sum_of_total_variations: u128,
    vertical_mass: u128,
}

#[derive(Serialize)]
pub struct Cancellation {
    separate_mass: u128,
    combined_mass: u128,
}

#[derive(Serialize)]
pub struct CheckReport {
    valid: bool,
    #[serde(rename = "N")]
    count: usize,
    mass: Masses,
    leaf_total_variation: Vec<u128>,
    reconstruction: Verdict<()>,
    peeling: Verdict<()>,
    mass_additivity: Verdict<Additivity>,
    flat_variation_identity: Verdict<FlatVariation>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cancellation_demo: Option<Verdict<Cancellation>>,
}

impl CheckReport {
    /// Runs every audit on `t`. Library errors other than a failed
    /// reconstruction are invariant violations and propagate.
    pub fn build(t: &PositiveClosedCurrent, demo: bool) -> Result<Self, DecomposeError> {
        let split = t.mass_split();
        let slices = t.slice_all()?;
        let (stack, reconstructed) = match leaf_decomposition(t) {
            Ok(s) => (s, true),
            Err(DecomposeError::ReconstructionMismatch) => (peel_decomposition(t)?, false),
            Err(e) => return Err(e),
        };
        let peeled = peel_decomposition(t)? == stack;
        let tvs = stack.total_variations();
        let tv_sum: u128 = tvs.iter().sum();
        let sum_of_leaf_masses = stack.sum_of_leaf_masses();
        let flat_variation = slices.flat_variation();

        let cancellation_demo = if demo {
            crossing_pair(t.grid())
                .map(|pair| -> Result<_, DecomposeError> {
                    let combined = sum_graph_currents(t.grid(), &pair)?.mass();
                    let separate = pair.iter().map(|u| graph_current(u).mass()).sum();
                    Ok(Verdict {
                        pass: combined < separate,
                        values: Cancellation {
                            separate_mass: separate,
                            combined_mass: combined,
                        },
                    })
                })
                .transpose()?
        } else {
            None
        };

        Ok(Self {
            valid: true,
            count: slices.count(),
            mass: Masses {
                horizontal: split.horizontal,
                vertical: split.vertical,
                total: split.total(),
            },
            leaf_total_variation: tvs,
            reconstruction: Verdict {
                pass: reconstructed,
                values: (),
            },
            peeling: Verdict {
                pass: peeled,
                values: (),
            },
            mass_additivity: Verdict {
                pass: t.mass() == sum_of_leaf_masses,
                values: Additivity {
                    mass: t.mass(),
                    sum_of_leaf_masses,
                },
            },
            flat_variation_identity: Verdict {
                pass: flat_variation == tv_sum && tv_sum == split.vertical,
                values: FlatVariation {
                    flat_variation,
                    sum_of_total_variations: tv_sum,
                    vertical_mass: split.vertical,
                },
            },
            cancellation_demo,
        })
    }

    pub fn passed(&self) -> bool {
        self.reconstruction.pass
            && self.peeling.pass
            && self.mass_additivity.pass
            && self.flat_variation_identity.pass
            && self.cancellation_demo.as_ref().is_none_or(|v| v.pass)
    }
}
