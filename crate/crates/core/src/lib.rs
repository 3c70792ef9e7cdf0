//! Moving-target segmentation of grayscale video with a three-frame
//! difference circuit over a QVNEQR-encoded ensemble.
//!
//! [`qvm`] holds the gate model, the exact ensemble simulator, the dense
//! trajectory simulator and cost accounting. [`encoding`] converts videos to
//! and from ensembles, [`blocks`] generates the arithmetic units,
//! [`pipeline`] assembles and runs the full circuit and [`classical`] is the
//! per-pixel reference it is checked against.

pub mod blocks;
pub mod classical;
pub mod encoding;
mod error;
pub mod pipeline;
pub mod qvm;

pub use classical::{classical_three_frame_diff, BoundaryMode};
pub use encoding::{layout_for, validate_video, RegisterLayout, Video};
pub use error::{Error, Result};
pub use pipeline::{build_segmentation_circuit, qubit_and_cost_summary, segment_video, Mode, SegmentationResult};
pub use qvm::{
    measure, quantum_cost, run_dense_trajectory, run_sparse, Circuit, CircuitBuilder, Control, CostReport, Gate,
    GateKind, Histogram, SparseState,
};
