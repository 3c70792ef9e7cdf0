//! Gate and circuit model, simulators, measurement sampling and cost
//! accounting.

pub mod bits;
pub mod circuit;
pub mod cost;
pub mod dense;
pub mod gate;
pub mod measure;
pub mod sparse;

pub use circuit::{Circuit, CircuitBuilder, Instruction, LookupTable, MAX_WIDTH};
pub use cost::{affine_fit, quantum_cost, CostReport};
pub use dense::{run_dense_trajectory, DenseInit, DenseSimulator, DEFAULT_DENSE_LIMIT};
pub use gate::{Control, Gate, GateKind, Polarity};
pub use measure::{measure, total_variation, Histogram};
pub use sparse::{run_basis, run_sparse, SparseState, PROBABILITY_TOLERANCE};
