use super::{check_disjoint, LABEL_CYCLE_SHIFT};
use crate::error::{invalid_arg, Result};
use crate::qvm::{CircuitBuilder, Control, Gate};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    /// `j -> j + 1 mod 2^m`
    Forward,
    /// `j -> j - 1 mod 2^m`
    Backward,
}

impl Direction {
    pub fn step(self) -> i64 {
        match self {
            Direction::Forward => 1,
            Direction::Backward => -1,
        }
    }

    pub fn reverse(self) -> Self {
        match self {
            Direction::Forward => Direction::Backward,
            Direction::Backward => Direction::Forward,
        }
    }
}

/// Modular increment or decrement of `frame` (least significant wire first).
///
/// Cascade from the top bit down: bit `i` flips when every lower bit is 1
/// (increment) or 0 (decrement). Cost is quadratic in `frame.len()`.
pub fn cycle_shift(b: &mut CircuitBuilder, frame: &[usize], dir: Direction) -> Result<()> {
    if frame.is_empty() {
        return invalid_arg("cycle shift of an empty register");
    }
    check_disjoint(&[frame])?;
    let polarity = |w| match dir {
        Direction::Forward => Control::pos(w),
        Direction::Backward => Control::neg(w),
    };
    b.scoped(LABEL_CYCLE_SHIFT, |b| {
        for i in (0..frame.len()).rev() {
            let controls = frame[..i].iter().map(|&w| polarity(w)).collect();
            b.append(Gate::mcx(controls, frame[i]))?;
        }
        Ok(())
    })
}
