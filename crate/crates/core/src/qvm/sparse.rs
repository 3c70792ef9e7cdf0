use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use super::bits::{format_bits, gather, parse_bits};
use super::circuit::{Circuit, LookupTable, MAX_WIDTH};
use super::gate::{Gate, Polarity};
use crate::error::{invalid_arg, Error, Result};

/// Tolerance on the total probability of a [`SparseState`].
pub const PROBABILITY_TOLERANCE: f64 = 1e-12;

/// A probability ensemble over computational basis states.
///
/// Valid as an exact description of the register only while every gate is a
/// basis permutation or a reset, which holds for everything in this crate.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SparseState {
    width: usize,
    components: BTreeMap<u64, f64>,
}

impl SparseState {
    /// Builds a state from `(basis, probability)` pairs. Basis states must be
    /// distinct, probabilities in (0, 1] and summing to one.
    pub fn new(width: usize, components: impl IntoIterator<Item = (u64, f64)>) -> Result<Self> {
        check_width(width)?;
        let mut map = BTreeMap::new();
        for (basis, p) in components {
            if width < 64 && basis >> width != 0 {
                return invalid_arg(format!("basis state {basis:#x} exceeds {width} wires"));
            }
            if !(p > 0.0 && p <= 1.0) {
                return invalid_arg(format!("probability {p} outside (0, 1]"));
            }
            if map.insert(basis, p).is_some() {
                return invalid_arg(format!("duplicate basis state {}", format_bits(basis, width)));
            }
        }
        let state = SparseState { width, components: map };
        let total = state.total_probability();
        if (total - 1.0).abs() > PROBABILITY_TOLERANCE {
            return invalid_arg(format!("probabilities sum to {total}"));
        }
        Ok(state)
    }

    pub fn basis(width: usize, basis: u64) -> Result<Self> {
        Self::new(width, [(basis, 1.0)])
    }

    /// Builds a state from lsb0 bitstrings, e.g. `[("01", 1.0)]`.
    pub fn from_bitstrings<'a>(
        components: impl IntoIterator<Item = (&'a str, f64)>,
    ) -> Result<Self> {
        let mut width = None;
        let mut parsed = Vec::new();
        for (s, p) in components {
            let (v, n) = parse_bits(s)?;
            if *width.get_or_insert(n) != n {
                return invalid_arg("bitstrings of different lengths");
            }
            parsed.push((v, p));
        }
        match width {
            Some(w) => Self::new(w, parsed),
            None => invalid_arg("empty state"),
        }
    }

    /// Assembles a state without validation; callers guarantee the invariants.
    pub(crate) fn from_map(width: usize, components: BTreeMap<u64, f64>) -> Self {
        SparseState { width, components }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, f64)> + '_ {
        self.components.iter().map(|(&b, &p)| (b, p))
    }

    pub fn probability(&self, basis: u64) -> f64 {
        self.components.get(&basis).copied().unwrap_or(0.0)
    }

    pub fn total_probability(&self) -> f64 {
        self.components.values().sum()
    }

    /// Component map keyed by lsb0 bitstrings.
    pub fn to_bitstrings(&self) -> BTreeMap<String, f64> {
        self.iter().map(|(b, p)| (format_bits(b, self.width), p)).collect()
    }

    /// Distribution of the wires in `qubits`, `qubits[0]` least significant.
    pub fn marginal(&self, qubits: &[usize]) -> Result<BTreeMap<u64, f64>> {
        check_subset(qubits, self.width)?;
        let mut out = BTreeMap::new();
        for (b, p) in self.iter() {
            *out.entry(gather(b, qubits)).or_insert(0.0) += p;
        }
        Ok(out)
    }
}

pub(crate) fn check_width(width: usize) -> Result<()> {
    if width == 0 {
        return invalid_arg("width must be at least 1");
    }
    if width > MAX_WIDTH {
        return Err(Error::Unsupported(format!("width {width} exceeds {MAX_WIDTH}")));
    }
    Ok(())
}

pub(crate) fn check_subset(qubits: &[usize], width: usize) -> Result<()> {
    if qubits.is_empty() {
        return invalid_arg("empty qubit subset");
    }
    let mut seen = 0u64;
    for &q in qubits {
        if q >= width {
            return invalid_arg(format!("qubit {q} outside width {width}"));
        }
        if seen >> q & 1 == 1 {
            return invalid_arg(format!("qubit {q} listed twice"));
        }
        seen |= 1 << q;
    }
    Ok(())
}

/// A gate reduced to bit masks for fast basis-state application.
#[derive(Clone, Debug)]
pub(crate) enum Op {
    Flip { target: u64, cmask: u64, cval: u64 },
    Swap { a: usize, b: usize, cmask: u64, cval: u64 },
    Reset { mask: u64 },
    Load { address: Vec<usize>, targets: Vec<usize>, table: Arc<LookupTable> },
}

impl Op {
    /// Image of a basis state. For `Reset` this is the post-reset state.
    #[inline]
    pub(crate) fn apply(&self, s: u64) -> u64 {
        match self {
            Op::Flip { target, cmask, cval } => {
                if s & cmask == *cval {
                    s ^ target
                } else {
                    s
                }
            }
            Op::Swap { a, b, cmask, cval } => {
                if s & cmask == *cval && (s >> a ^ s >> b) & 1 == 1 {
                    s ^ (1 << a | 1 << b)
                } else {
                    s
                }
            }
            Op::Reset { mask } => s & !mask,
            Op::Load { address, targets, table } => {
                let value = table.get(gather(s, address));
                targets
                    .iter()
                    .enumerate()
                    .fold(s, |acc, (k, &w)| acc ^ (value >> k & 1) << w)
            }
        }
    }
}

pub(crate) fn compile(circuit: &Circuit) -> Result<Vec<Op>> {
    circuit
        .gates()
        .map(|g| {
            let (cmask, cval) = control_masks(g);
            Ok(match g {
                Gate::Flip { target, .. } => Op::Flip { target: 1 << target, cmask, cval },
                Gate::Swap { a, b, .. } => Op::Swap { a: *a, b: *b, cmask, cval },
                Gate::Reset { target } => Op::Reset { mask: 1 << target },
                Gate::Load { address, targets, slot } => Op::Load {
                    address: address.clone(),
                    targets: targets.clone(),
                    table: Arc::new(circuit.table(*slot)?.clone()),
                },
            })
        })
        .collect()
}

fn control_masks(g: &Gate) -> (u64, u64) {
    g.controls().iter().fold((0, 0), |(m, v), c| {
        let bit = 1u64 << c.wire;
        match c.polarity {
            Polarity::Positive => (m | bit, v | bit),
            Polarity::Negative => (m | bit, v),
        }
    })
}

/// Runs `circuit` on a probability ensemble.
///
/// Every gate is a deterministic map on basis states, so the output is the
/// push-forward of `initial`: each component is carried through the whole
/// circuit independently and components landing on the same basis state
/// (only possible through RESET) have their probabilities summed.
pub fn run_sparse(circuit: &Circuit, initial: &SparseState) -> Result<SparseState> {
    if circuit.width() != initial.width() {
        return invalid_arg(format!(
            "state has {} wires but the circuit has {}",
            initial.width(),
            circuit.width()
        ));
    }
    let ops = compile(circuit)?;
    let mut out = BTreeMap::new();
    for (basis, p) in initial.iter() {
        let end = ops.iter().fold(basis, |s, op| op.apply(s));
        *out.entry(end).or_insert(0.0) += p;
    }
    Ok(SparseState::from_map(initial.width(), out))
}

/// Image of a single basis state under `circuit`.
pub fn run_basis(circuit: &Circuit, basis: u64) -> Result<u64> {
    let ops = compile(circuit)?;
    Ok(ops.iter().fold(basis, |s, op| op.apply(s)))
}
