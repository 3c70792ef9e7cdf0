use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::circuit::Circuit;

/// Label used for gates emitted outside any block scope.
pub const UNLABELED: &str = "-";

/// Quantum cost of a circuit, broken down by block label.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CostReport {
    pub per_block: BTreeMap<String, u64>,
    pub total_cost: u64,
    pub qubit_count: usize,
    /// Gate count per kind (`X`, `CX`, `CCX`, `MCX3`, ...).
    pub gate_census: BTreeMap<String, u64>,
    /// Qubit count under the reference formula, when one applies.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub reference_qubit_count: Option<usize>,
}

impl CostReport {
    pub fn gate_count(&self) -> u64 {
        self.gate_census.values().sum()
    }

    pub fn census(&self, kind: &str) -> u64 {
        self.gate_census.get(kind).copied().unwrap_or(0)
    }
}

/// Prices every gate with [`crate::Gate::cost`] and sums per block label.
pub fn quantum_cost(circuit: &Circuit) -> CostReport {
    let mut per_block = BTreeMap::new();
    let mut census = BTreeMap::new();
    for ins in circuit.instructions() {
        let label = ins.block.as_deref().unwrap_or(UNLABELED).to_string();
        *per_block.entry(label).or_insert(0) += ins.gate.cost();
        *census.entry(ins.gate.kind().to_string()).or_insert(0) += 1;
    }
    CostReport {
        total_cost: per_block.values().sum(),
        per_block,
        qubit_count: circuit.width(),
        gate_census: census,
        reference_qubit_count: None,
    }
}

/// Exact integer fit `y = alpha * x + beta` through every point, if one exists.
pub fn affine_fit(points: &[(i64, i64)]) -> Option<(i64, i64)> {
    let (&(x0, y0), rest) = points.split_first()?;
    let &(x1, y1) = rest.first()?;
    if x1 == x0 || (y1 - y0) % (x1 - x0) != 0 {
        return None;
    }
    let alpha = (y1 - y0) / (x1 - x0);
    let beta = y0 - alpha * x0;
    points.iter().all(|&(x, y)| alpha * x + beta == y).then_some((alpha, beta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qvm::circuit::CircuitBuilder;
    use crate::qvm::gate::{Control, Gate};

    fn one(g: Gate, width: usize) -> CostReport {
        let mut b = CircuitBuilder::new(width).unwrap();
        b.append(g).unwrap();
        quantum_cost(&b.build())
    }

    #[test]
    fn spot_costs() {
        assert_eq!(one(Gate::ccx(0, 1, 2), 3).total_cost, 5);
        assert_eq!(one(Gate::cswap(Control::pos(0), 1, 2), 3).total_cost, 3);
        let four = (0..4).map(Control::pos).collect();
        assert_eq!(one(Gate::mcx(four, 4), 5).total_cost, 25);
    }

    #[test]
    fn per_block_totals() {
        let mut b = CircuitBuilder::new(3).unwrap();
        b.append(Gate::x(0)).unwrap();
        b.scoped("A", |b| b.append(Gate::ccx(0, 1, 2)).map(|_| ())).unwrap();
        b.append_labeled(Gate::reset(2), "B").unwrap();
        let r = quantum_cost(&b.build());
        assert_eq!(r.per_block[UNLABELED], 1);
        assert_eq!(r.per_block["A"], 5);
        assert_eq!(r.per_block["B"], 1);
        assert_eq!(r.total_cost, 7);
        assert_eq!(r.gate_count(), 3);
        assert_eq!(r.census("CCX"), 1);
    }

    #[test]
    fn fits() {
        assert_eq!(affine_fit(&[(2, 20), (3, 27), (4, 34)]), Some((7, 6)));
        assert_eq!(affine_fit(&[(2, 20), (3, 27), (4, 35)]), None);
        assert_eq!(affine_fit(&[(2, 20)]), None);
    }
}
