use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// Which value a control wire must hold for the gate to fire.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarity {
    Positive,
    Negative,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Control {
    pub wire: usize,
    pub polarity: Polarity,
}

impl Control {
    pub fn pos(wire: usize) -> Self {
        Control { wire, polarity: Polarity::Positive }
    }

    pub fn neg(wire: usize) -> Self {
        Control { wire, polarity: Polarity::Negative }
    }

    /// Control on `wire` that fires when the wire equals `bit`.
    pub fn when(wire: usize, bit: bool) -> Self {
        if bit {
            Self::pos(wire)
        } else {
            Self::neg(wire)
        }
    }
}

/// Gate family as used by the cost convention and the debug dump.
///
/// `CX` and `CCX` are the one- and two-control aliases of the multi-controlled
/// NOT; `MCX(k)` is only produced for `k >= 3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GateKind {
    X,
    CX,
    CCX,
    MCX(usize),
    SWAP,
    CSWAP,
    RESET,
    LOAD,
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GateKind::X => f.write_str("X"),
            GateKind::CX => f.write_str("CX"),
            GateKind::CCX => f.write_str("CCX"),
            GateKind::MCX(k) => write!(f, "MCX{k}"),
            GateKind::SWAP => f.write_str("SWAP"),
            GateKind::CSWAP => f.write_str("CSWAP"),
            GateKind::RESET => f.write_str("RESET"),
            GateKind::LOAD => f.write_str("LOAD"),
        }
    }
}

/// A single reversible gate or reset.
///
/// Every variant maps computational basis states to computational basis
/// states, which is what makes the probability-ensemble simulator exact.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Gate {
    /// NOT on `target` when every control matches its polarity.
    Flip { target: usize, controls: Vec<Control> },
    /// Exchange of two wires, optionally conditioned on a single control.
    Swap { a: usize, b: usize, controls: Vec<Control> },
    /// Non-unitary reset of one wire to |0>.
    Reset { target: usize },
    /// Classical lookup oracle `|addr>|t> -> |addr>|t xor table[addr]>`.
    ///
    /// `address` and `targets` are listed least significant wire first. The
    /// table itself is bound to the circuit under `slot`.
    Load { address: Vec<usize>, targets: Vec<usize>, slot: usize },
}

impl Gate {
    pub fn x(target: usize) -> Self {
        Gate::Flip { target, controls: Vec::new() }
    }

    pub fn cx(control: usize, target: usize) -> Self {
        Gate::Flip { target, controls: vec![Control::pos(control)] }
    }

    pub fn ccx(c0: usize, c1: usize, target: usize) -> Self {
        Gate::Flip { target, controls: vec![Control::pos(c0), Control::pos(c1)] }
    }

    /// Multi-controlled NOT with arbitrary polarities. Zero controls gives a
    /// plain X.
    pub fn mcx(controls: Vec<Control>, target: usize) -> Self {
        Gate::Flip { target, controls }
    }

    pub fn swap(a: usize, b: usize) -> Self {
        Gate::Swap { a, b, controls: Vec::new() }
    }

    pub fn cswap(control: Control, a: usize, b: usize) -> Self {
        Gate::Swap { a, b, controls: vec![control] }
    }

    pub fn reset(target: usize) -> Self {
        Gate::Reset { target }
    }

    pub fn load(address: Vec<usize>, targets: Vec<usize>, slot: usize) -> Self {
        Gate::Load { address, targets, slot }
    }

    pub fn kind(&self) -> GateKind {
        match self {
            Gate::Flip { controls, .. } => match controls.len() {
                0 => GateKind::X,
                1 => GateKind::CX,
                2 => GateKind::CCX,
                k => GateKind::MCX(k),
            },
            Gate::Swap { controls, .. } if controls.is_empty() => GateKind::SWAP,
            Gate::Swap { .. } => GateKind::CSWAP,
            Gate::Reset { .. } => GateKind::RESET,
            Gate::Load { .. } => GateKind::LOAD,
        }
    }

    pub fn targets(&self) -> Vec<usize> {
        match self {
            Gate::Flip { target, .. } | Gate::Reset { target } => vec![*target],
            Gate::Swap { a, b, .. } => vec![*a, *b],
            Gate::Load { targets, .. } => targets.clone(),
        }
    }

    pub fn controls(&self) -> &[Control] {
        match self {
            Gate::Flip { controls, .. } | Gate::Swap { controls, .. } => controls,
            Gate::Reset { .. } | Gate::Load { .. } => &[],
        }
    }

    /// All wires the gate touches, in no particular order.
    pub fn wires(&self) -> Vec<usize> {
        let mut w = self.targets();
        w.extend(self.controls().iter().map(|c| c.wire));
        if let Gate::Load { address, .. } = self {
            w.extend_from_slice(address);
        }
        w
    }

    pub fn is_reset(&self) -> bool {
        matches!(self, Gate::Reset { .. })
    }

    /// Quantum cost under the unit convention: one- and two-qubit gates and
    /// resets cost 1, a Toffoli 5, a Fredkin 3, and a k-control NOT
    /// (k >= 3) is charged as 2k - 3 Toffolis. Loads are state preparation
    /// and cost nothing.
    pub fn cost(&self) -> u64 {
        match self.kind() {
            GateKind::X | GateKind::CX | GateKind::SWAP | GateKind::RESET => 1,
            GateKind::CCX => 5,
            GateKind::CSWAP => 3,
            GateKind::MCX(k) => 5 * (2 * k as u64 - 3),
            GateKind::LOAD => 0,
        }
    }

    /// Checks wire ranges and distinctness against a circuit of `width` wires.
    pub fn validate(&self, width: usize) -> Result<()> {
        let wires = self.wires();
        if wires.is_empty() {
            return Err(Error::InvalidGate(format!("{} touches no wires", self.kind())));
        }
        for &w in &wires {
            if w >= width {
                return Err(Error::InvalidGate(format!(
                    "{} references wire {w} but the circuit has {width} wires",
                    self.kind()
                )));
            }
        }
        let mut sorted = wires.clone();
        sorted.sort_unstable();
        if let Some(pair) = sorted.windows(2).find(|p| p[0] == p[1]) {
            return Err(Error::InvalidGate(format!(
                "{} uses wire {} more than once",
                self.kind(),
                pair[0]
            )));
        }
        match self {
            Gate::Swap { controls, .. } if controls.len() > 1 => Err(Error::InvalidGate(
                "controlled swap supports a single control".into(),
            )),
            Gate::Load { address, targets, .. } => {
                if address.is_empty() || targets.is_empty() {
                    Err(Error::InvalidGate("LOAD needs address and target wires".into()))
                } else if address.len() > 32 || targets.len() > 64 {
                    Err(Error::InvalidGate("LOAD address or data register too wide".into()))
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for Gate {
    /// `KIND targets=[..] controls=[(idx,+|-)..]`, plus `address=[..]
    /// table=<slot>` for loads.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind() {
            GateKind::MCX(_) => "MCX".to_string(),
            k => k.to_string(),
        };
        let targets = self.targets();
        write!(f, "{kind} targets=[{}] controls=[", join(&targets))?;
        for (i, c) in self.controls().iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            let sign = match c.polarity {
                Polarity::Positive => '+',
                Polarity::Negative => '-',
            };
            write!(f, "({},{sign})", c.wire)?;
        }
        f.write_str("]")?;
        if let Gate::Load { address, slot, .. } = self {
            write!(f, " address=[{}] table={slot}", join(address))?;
        }
        Ok(())
    }
}

fn join(ws: &[usize]) -> String {
    ws.iter().map(|w| w.to_string()).collect::<Vec<_>>().join(",")
}
