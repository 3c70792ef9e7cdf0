//! Circuit generators for the reusable units of the segmentation circuit.
//!
//! Every generator appends into a [`CircuitBuilder`] under its own block
//! label and takes its registers as wire lists, least significant first.
//! Scratch wires must be zero on entry and are zero again on exit.

mod compare;
mod shift;
mod spec;
mod subtract;

pub use compare::{binarization, comparator, threshold_compare};
pub use shift::{cycle_shift, Direction};
pub use spec::{describe, example_circuit, BlockKind, BlockSpec};
pub use subtract::{abs_subtractor, subtractor};

use crate::error::{invalid_arg, Result};
use crate::qvm::{CircuitBuilder, Gate};

pub const LABEL_COMPARATOR: &str = "QC";
pub const LABEL_SUBTRACTOR: &str = "QS";
pub const LABEL_ABS_SUBTRACTOR: &str = "QAS";
pub const LABEL_COPY: &str = "copy";
pub const LABEL_CYCLE_SHIFT: &str = "CT";
pub const LABEL_THRESHOLD: &str = "threshold";
pub const LABEL_BINARIZATION: &str = "QB";
pub const LABEL_AND: &str = "AND";

/// Fails unless all wire groups are pairwise disjoint.
pub(crate) fn check_disjoint(groups: &[&[usize]]) -> Result<()> {
    let mut all: Vec<usize> = groups.iter().flat_map(|g| g.iter().copied()).collect();
    all.sort_unstable();
    match all.windows(2).find(|w| w[0] == w[1]) {
        Some(w) => invalid_arg(format!("wire {} appears in two registers", w[0])),
        None => Ok(()),
    }
}

pub(crate) fn check_len(name: &str, wires: &[usize], len: usize) -> Result<()> {
    if wires.len() != len {
        return invalid_arg(format!("{name} needs {len} wires, got {}", wires.len()));
    }
    Ok(())
}

/// `dst ^= src` wire by wire: q CNOTs. With `dst` zero this copies `src`.
pub fn copy(b: &mut CircuitBuilder, src: &[usize], dst: &[usize]) -> Result<()> {
    if src.is_empty() {
        return invalid_arg("copy of an empty register");
    }
    check_len("copy destination", dst, src.len())?;
    check_disjoint(&[src, dst])?;
    b.scoped(LABEL_COPY, |b| {
        for (&s, &d) in src.iter().zip(dst) {
            b.append(Gate::cx(s, d))?;
        }
        Ok(())
    })
}

/// `out ^= b1 AND b2` with a single Toffoli.
pub fn and(b: &mut CircuitBuilder, b1: usize, b2: usize, out: usize) -> Result<()> {
    check_disjoint(&[&[b1], &[b2], &[out]])?;
    b.scoped(LABEL_AND, |b| b.append(Gate::ccx(b1, b2, out)).map(|_| ()))
}
