use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::{
    abs_subtractor, and, binarization, comparator, copy, cycle_shift, subtractor, threshold_compare,
    Direction,
};
use crate::error::{Error, Result};
use crate::qvm::{Circuit, CircuitBuilder};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BlockKind {
    Comparator,
    Subtractor,
    AbsSubtractor,
    Copy,
    CycleShift,
    ThresholdCompare,
    Binarization,
    And,
}

impl BlockKind {
    pub const ALL: [BlockKind; 8] = [
        BlockKind::Comparator,
        BlockKind::Subtractor,
        BlockKind::AbsSubtractor,
        BlockKind::Copy,
        BlockKind::CycleShift,
        BlockKind::ThresholdCompare,
        BlockKind::Binarization,
        BlockKind::And,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BlockKind::Comparator => "comparator",
            BlockKind::Subtractor => "subtractor",
            BlockKind::AbsSubtractor => "abs-subtractor",
            BlockKind::Copy => "copy",
            BlockKind::CycleShift => "cycle-shift",
            BlockKind::ThresholdCompare => "threshold-compare",
            BlockKind::Binarization => "binarization",
            BlockKind::And => "and",
        }
    }
}

impl fmt::Display for BlockKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BlockKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.to_ascii_lowercase().replace('_', "-");
        let alias = match key.as_str() {
            "qc" => Some(BlockKind::Comparator),
            "qs" => Some(BlockKind::Subtractor),
            "qas" => Some(BlockKind::AbsSubtractor),
            "ct" => Some(BlockKind::CycleShift),
            "qb" => Some(BlockKind::Binarization),
            _ => None,
        };
        alias
            .or_else(|| BlockKind::ALL.into_iter().find(|k| k.name() == key))
            .ok_or_else(|| {
                let names: Vec<&str> = BlockKind::ALL.iter().map(|k| k.name()).collect();
                Error::InvalidArgument(format!("unknown block {s:?}; expected one of {}", names.join(", ")))
            })
    }
}

/// Named wire slice in a block's standalone wiring.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Slice {
    pub name: &'static str,
    pub wires: Vec<usize>,
}

/// Documentation record of a block: its registers and output contract.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockSpec {
    pub name: &'static str,
    pub label: &'static str,
    pub inputs: Vec<Slice>,
    /// Wires that are zero on entry and zero on exit.
    pub scratch: Vec<Slice>,
    pub output: &'static str,
}

fn slice(name: &'static str, wires: std::ops::Range<usize>) -> Slice {
    Slice { name, wires: wires.collect() }
}

/// Spec of `kind` at bit depth `q` (register length `m` for the cycle shift),
/// in the same wiring as [`example_circuit`]: `a` on `0..q`, `b` on `q..2q`,
/// `anc` on the next three wires and `y` on the two after.
pub fn describe(kind: BlockKind, q: usize) -> BlockSpec {
    let a = || slice("a", 0..q);
    let b = || slice("b", q..2 * q);
    let anc = || slice("anc", 2 * q..2 * q + 3);
    let y = || slice("y", 2 * q + 3..2 * q + 5);
    let (label, inputs, scratch, output) = match kind {
        BlockKind::Comparator => (
            super::LABEL_COMPARATOR,
            vec![a(), b()],
            vec![anc()],
            "y1y0 = 10 if a > b, 01 if a < b, 00 if a = b; a and b preserved",
        ),
        BlockKind::Subtractor => (
            super::LABEL_SUBTRACTOR,
            vec![a(), b()],
            vec![anc()],
            "b <- (a - b) mod 2^q; a preserved; exact difference when a >= b",
        ),
        BlockKind::AbsSubtractor => (
            super::LABEL_ABS_SUBTRACTOR,
            vec![a(), b()],
            vec![anc(), y()],
            "b <- |a - b|; a <- max(a, b)",
        ),
        BlockKind::Copy => (
            super::LABEL_COPY,
            vec![slice("src", 0..q), slice("dst", q..2 * q)],
            vec![],
            "dst <- dst xor src (a copy when dst is zero); q CX gates",
        ),
        BlockKind::CycleShift => (
            super::LABEL_CYCLE_SHIFT,
            vec![slice("frame", 0..q)],
            vec![],
            "frame <- frame + 1 mod 2^m (the -1 direction mirrors it)",
        ),
        BlockKind::ThresholdCompare => (
            super::LABEL_THRESHOLD,
            vec![slice("c", 0..q)],
            vec![anc()],
            "y1y0 = compare(c, T) as for the comparator; c preserved; T folded into control polarities",
        ),
        BlockKind::Binarization => (
            super::LABEL_BINARIZATION,
            vec![slice("c", 0..q)],
            vec![anc(), y()],
            "c0 <- [c >= T]; higher c wires keep their values",
        ),
        BlockKind::And => (
            super::LABEL_AND,
            vec![slice("b1", 0..1), slice("b2", 1..2)],
            vec![],
            "out <- out xor (b1 and b2); one Toffoli",
        ),
    };
    let mut spec = BlockSpec { name: kind.name(), label, inputs, scratch, output };
    if kind == BlockKind::And {
        spec.inputs.push(slice("out", 2..3));
    }
    spec
}

/// The block alone on a fresh circuit wired as in [`describe`]. Threshold
/// blocks use `T = 1`.
pub fn example_circuit(kind: BlockKind, q: usize) -> Result<Circuit> {
    let a: Vec<usize> = (0..q).collect();
    let bb: Vec<usize> = (q..2 * q).collect();
    let anc: Vec<usize> = (2 * q..2 * q + 3).collect();
    let y: Vec<usize> = vec![2 * q + 3, 2 * q + 4];
    let width = match kind {
        BlockKind::Copy => 2 * q,
        BlockKind::CycleShift => q,
        BlockKind::And => 3,
        _ => 2 * q + 5,
    };
    let mut b = CircuitBuilder::new(width)?;
    match kind {
        BlockKind::Comparator => comparator(&mut b, &a, &bb, &anc, &y)?,
        BlockKind::Subtractor => subtractor(&mut b, &a, &bb, &anc)?,
        BlockKind::AbsSubtractor => abs_subtractor(&mut b, &a, &bb, &anc, &y)?,
        BlockKind::Copy => copy(&mut b, &a, &bb)?,
        BlockKind::CycleShift => cycle_shift(&mut b, &a, Direction::Forward)?,
        BlockKind::ThresholdCompare => threshold_compare(&mut b, &a, 1, &anc, &y)?,
        BlockKind::Binarization => binarization(&mut b, &a, 1, &anc, &y)?,
        BlockKind::And => and(&mut b, 0, 1, 2)?,
    }
    Ok(b.build())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for k in BlockKind::ALL {
            assert_eq!(k.name().parse::<BlockKind>().unwrap(), k);
        }
        assert_eq!("QAS".parse::<BlockKind>().unwrap(), BlockKind::AbsSubtractor);
        assert!("adder".parse::<BlockKind>().is_err());
    }

    #[test]
    fn examples_fit_their_described_wires() {
        for k in BlockKind::ALL {
            let spec = describe(k, 3);
            let c = example_circuit(k, 3).unwrap();
            let max = spec.inputs.iter().chain(&spec.scratch).flat_map(|s| &s.wires).max().copied();
            assert!(max.unwrap() < c.width(), "{k}");
            assert!(c.instructions().iter().all(|i| i.block.as_deref() == Some(spec.label)), "{k}");
        }
    }
}
