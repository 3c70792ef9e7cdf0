//! The complete three-frame-difference segmentation circuit, its execution
//! on an encoded video, and decoding of the result.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::blocks::{abs_subtractor, and, binarization, copy, cycle_shift, Direction};
use crate::encoding::{
    decode_segmentation, encode_video, layout_for, validate_video, video_table, RegisterLayout, Video,
};
use crate::error::{invalid_arg, Error, Result};
use crate::qvm::{
    measure, quantum_cost, run_sparse, total_variation, Circuit, CircuitBuilder, CostReport, DenseInit,
    DenseSimulator, Gate, Histogram, SparseState,
};

pub const LABEL_LOAD: &str = "load";
pub const LABEL_RESET: &str = "reset";

/// Shots used when a histogram is requested without a count.
pub const DEFAULT_SHOTS: u64 = 1024;

/// Table slot of the video in circuits from [`build_segmentation_circuit`].
pub const VIDEO_SLOT: usize = 0;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Exact ensemble simulation; histograms sampled from it.
    #[default]
    Sparse,
    /// Sparse simulation plus state-vector trajectories that supply the
    /// histogram and are checked against the exact distribution.
    DenseCheck,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Sparse => "sparse",
            Mode::DenseCheck => "dense-check",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sparse" => Ok(Mode::Sparse),
            "dense-check" | "dense" => Ok(Mode::DenseCheck),
            other => invalid_arg(format!("unknown mode {other:?}")),
        }
    }
}

fn check_threshold(q: u32, threshold: u64) -> Result<()> {
    if threshold >> q != 0 {
        return invalid_arg(format!("threshold {threshold} does not fit in {q} bits"));
    }
    Ok(())
}

/// Loads `V_{j+step}(i)` into `dst` by shifting the frame register to the
/// neighbour, reading the video table there, and shifting back.
fn load_neighbour(b: &mut CircuitBuilder, l: &RegisterLayout, dst: &[usize], dir: Direction) -> Result<()> {
    let frame = l.frame.wires();
    cycle_shift(b, &frame, dir)?;
    b.append_labeled(Gate::load(l.address_wires(), dst.to_vec(), VIDEO_SLOT), LABEL_LOAD)?;
    cycle_shift(b, &frame, dir.reverse())
}

/// Builds the segmentation circuit for `2^m` frames of `2^n x 2^n` pixels
/// at depth `q` with threshold `T`.
///
/// The circuit does not depend on the video: it reads pixels through a
/// lookup table in slot [`VIDEO_SLOT`], bound with
/// [`Circuit::bind_table`] and [`video_table`]. Expects the encoded state
/// (color holding `V_j(i)`, all work wires zero) and leaves
/// `[|V_j - V_{j-1}| >= T and |V_j - V_{j+1}| >= T]` on the `seg` wire.
pub fn build_segmentation_circuit(
    m_exp: u32,
    n_exp: u32,
    q: u32,
    threshold: u64,
) -> Result<(Circuit, RegisterLayout)> {
    let l = layout_for(m_exp, n_exp, q)?;
    check_threshold(q, threshold)?;
    let (color, prev, next) = (l.color.wires(), l.diff_prev.wires(), l.diff_next.wires());
    let (anc, y) = (l.anc.wires(), l.cmp.wires());
    let mut b = CircuitBuilder::new(l.width())?;
    let slot = b.declare_table();
    debug_assert_eq!(slot, VIDEO_SLOT);

    // diff_prev <- |V_j - V_{j-1}|, using diff_next as the copy of V_j.
    load_neighbour(&mut b, &l, &prev, Direction::Backward)?;
    copy(&mut b, &color, &next)?;
    abs_subtractor(&mut b, &next, &prev, &anc, &y)?;
    b.scoped(LABEL_RESET, |b| next.iter().try_for_each(|&w| b.append(Gate::reset(w)).map(|_| ())))?;

    // diff_next <- |V_j - V_{j+1}|.
    load_neighbour(&mut b, &l, &next, Direction::Forward)?;
    abs_subtractor(&mut b, &color, &next, &anc, &y)?;

    binarization(&mut b, &prev, threshold, &anc, &y)?;
    binarization(&mut b, &next, threshold, &anc, &y)?;
    and(&mut b, prev[0], next[0], l.seg.start)?;
    Ok((b.build(), l))
}

/// Output of [`segment_video`].
#[derive(Clone, Debug, PartialEq)]
pub struct SegmentationResult {
    /// Binary video, 1 marking moving-target pixels.
    pub result: Video,
    pub histogram: Option<Histogram>,
    pub cost: CostReport,
    pub layout: RegisterLayout,
    /// Total-variation distance between dense trajectories and the exact
    /// distribution on the measured wires, in dense-check mode.
    pub dense_tvd: Option<f64>,
}

impl SegmentationResult {
    pub fn to_json(&self) -> serde_json::Value {
        let mut v = serde_json::json!({
            "bit_order": "lsb0",
            "result": self.result,
            "histogram": self.histogram,
            "cost": self.cost,
            "layout": self.layout.to_json(),
        });
        if let Some(tvd) = self.dense_tvd {
            v["dense_tvd"] = tvd.into();
        }
        v
    }
}

/// Circuit with the video bound, its layout, and the encoded input state.
pub fn prepare(video: &Video, threshold: u64) -> Result<(Circuit, RegisterLayout, SparseState)> {
    validate_video(video).map_err(Error::InvalidVideo)?;
    let (circuit, layout) = build_segmentation_circuit(video.m_exp, video.n_exp, video.q, threshold)?;
    let circuit = circuit.bind_table(VIDEO_SLOT, video_table(video)?)?;
    let initial = encode_video(video, &layout)?;
    Ok((circuit, layout, initial))
}

/// Runs the segmentation circuit on `video` and decodes the result.
///
/// With `shots`, the frame, position and result wires are sampled into a
/// histogram. In [`Mode::DenseCheck`] the histogram comes from state-vector
/// trajectories instead; any outcome outside the exact distribution's
/// support is reported as corrupt state.
pub fn segment_video(
    video: &Video,
    threshold: u64,
    mode: Mode,
    shots: Option<u64>,
    seed: u64,
) -> Result<SegmentationResult> {
    let (circuit, layout, initial) = prepare(video, threshold)?;
    let final_state = run_sparse(&circuit, &initial)?;
    let result = decode_segmentation(&final_state, &layout)?;
    let key = layout.key_wires();
    let (histogram, dense_tvd) = match mode {
        Mode::Sparse => (shots.map(|s| measure(&final_state, &key, s, seed)).transpose()?, None),
        Mode::DenseCheck => {
            let shots = shots.unwrap_or(DEFAULT_SHOTS);
            let samples = DenseSimulator::default().sample(
                &circuit,
                DenseInit::Superposition(&initial),
                shots as usize,
                seed,
            )?;
            let h = Histogram::from_samples(key.clone(), &samples)?;
            let exact = final_state.marginal(&key)?;
            if let Some(bad) = h.counts().keys().find(|o| !exact.contains_key(o)) {
                return Err(Error::CorruptState(format!(
                    "dense trajectory produced outcome {bad:#b}, impossible in the exact distribution"
                )));
            }
            let tvd = total_variation(&h, &exact);
            (Some(h), Some(tvd))
        }
    };
    let mut cost = quantum_cost(&circuit);
    cost.reference_qubit_count = Some(layout.reference_width());
    Ok(SegmentationResult { result, histogram, cost, layout, dense_tvd })
}

/// Cost and width of the segmentation circuit, with the reference qubit
/// count `3q + 2n + m + 3` alongside ours.
pub fn qubit_and_cost_summary(m_exp: u32, n_exp: u32, q: u32, threshold: u64) -> Result<CostReport> {
    let (circuit, layout) = build_segmentation_circuit(m_exp, n_exp, q, threshold)?;
    let mut report = quantum_cost(&circuit);
    report.reference_qubit_count = Some(layout.reference_width());
    Ok(report)
}

/// JSON form of [`qubit_and_cost_summary`].
pub fn cost_summary_json(report: &CostReport, m_exp: u32, n_exp: u32, q: u32, threshold: u64) -> serde_json::Value {
    #[derive(Serialize)]
    struct Summary<'a> {
        bit_order: &'static str,
        m_exp: u32,
        n_exp: u32,
        q: u32,
        threshold: u64,
        gate_count: u64,
        #[serde(flatten)]
        report: &'a CostReport,
    }
    serde_json::to_value(Summary {
        bit_order: "lsb0",
        m_exp,
        n_exp,
        q,
        threshold,
        gate_count: report.gate_count(),
        report,
    })
    .expect("cost summary serializes")
}
