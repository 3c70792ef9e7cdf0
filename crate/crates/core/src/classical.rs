//! Classical three-frame difference, the bit-exact reference for the circuit.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::encoding::{validate_video, Frame, Video};
use crate::error::{invalid_arg, Error, Result};

/// How the first and last frames find their neighbours.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryMode {
    /// Frame indices wrap modulo the frame count, as the cycle shift does.
    #[default]
    Cyclic,
    /// Edge frames use themselves as the missing neighbour, so their
    /// difference on that side is zero.
    Clamp,
}

impl fmt::Display for BoundaryMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundaryMode::Cyclic => "cyclic",
            BoundaryMode::Clamp => "clamp",
        })
    }
}

impl FromStr for BoundaryMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cyclic" => Ok(BoundaryMode::Cyclic),
            "clamp" => Ok(BoundaryMode::Clamp),
            other => invalid_arg(format!("unknown boundary mode {other:?}")),
        }
    }
}

fn same_shape(a: &Frame, b: &Frame) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.len() == y.len())
}

/// Per-pixel `|a - b|`.
pub fn abs_diff_frames(a: &Frame, b: &Frame) -> Result<Frame> {
    if !same_shape(a, b) {
        return invalid_arg("frames differ in size");
    }
    Ok(a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(&x, &y)| x.abs_diff(y)).collect())
        .collect())
}

/// 1 where the value is at least `threshold`, else 0.
pub fn threshold_frame(d: &Frame, threshold: u32) -> Frame {
    d.iter()
        .map(|row| row.iter().map(|&v| (v >= threshold) as u32).collect())
        .collect()
}

fn and_frames(a: &Frame, b: &Frame) -> Frame {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(&x, &y)| x & y).collect())
        .collect()
}

/// Neighbour indices `(previous, next)` of frame `j` among `count` frames.
pub fn neighbours(j: usize, count: usize, boundary: BoundaryMode) -> (usize, usize) {
    match boundary {
        BoundaryMode::Cyclic => ((j + count - 1) % count, (j + 1) % count),
        BoundaryMode::Clamp => (j.saturating_sub(1), (j + 1).min(count - 1)),
    }
}

/// Binary video with 1 wherever a pixel differs from both neighbouring
/// frames by at least `threshold`.
pub fn classical_three_frame_diff(video: &Video, threshold: u32, boundary: BoundaryMode) -> Result<Video> {
    validate_video(video).map_err(Error::InvalidVideo)?;
    let count = video.frame_count();
    let mut frames = Vec::with_capacity(count);
    for j in 0..count {
        let (prev, next) = neighbours(j, count, boundary);
        let current = &video.frames[j];
        let d1 = threshold_frame(&abs_diff_frames(current, &video.frames[prev])?, threshold);
        let d2 = threshold_frame(&abs_diff_frames(current, &video.frames[next])?, threshold);
        frames.push(and_frames(&d1, &d2));
    }
    Ok(Video { m_exp: video.m_exp, n_exp: video.n_exp, q: 1, frames })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn frame(rows: &[&[u32]]) -> Frame {
        rows.iter().map(|r| r.to_vec()).collect()
    }

    #[test]
    fn abs_diff_basics() {
        let a = frame(&[&[3, 0], &[7, 1]]);
        let b = frame(&[&[5, 0], &[2, 1]]);
        assert_eq!(abs_diff_frames(&a, &b).unwrap(), frame(&[&[2, 0], &[5, 0]]));
        assert_eq!(abs_diff_frames(&a, &a).unwrap(), frame(&[&[0, 0], &[0, 0]]));
        assert!(abs_diff_frames(&a, &frame(&[&[1, 2]])).is_err());
        assert!(abs_diff_frames(&a, &frame(&[&[1, 2], &[3]])).is_err());
    }

    #[test]
    fn threshold_edges() {
        let d = frame(&[&[0, 1], &[2, 7]]);
        assert_eq!(threshold_frame(&d, 0), frame(&[&[1, 1], &[1, 1]]));
        assert_eq!(threshold_frame(&d, 8), frame(&[&[0, 0], &[0, 0]]));
        assert_eq!(threshold_frame(&frame(&[&[1]]), 1), frame(&[&[1]]));
    }

    #[test]
    fn static_video_is_background() {
        let v = Video::from_fn(2, 1, 3, |_, y, x| (y * 2 + x) as u32 + 1);
        for t in 1..8 {
            assert_eq!(classical_three_frame_diff(&v, t, BoundaryMode::Cyclic).unwrap().count_nonzero(), 0);
        }
    }

    #[test]
    fn isolated_pixel_fires() {
        let v = Video::from_fn(2, 1, 3, |j, y, x| if (j, y, x) == (2, 1, 0) { 5 } else { 0 });
        let out = classical_three_frame_diff(&v, 3, BoundaryMode::Cyclic).unwrap();
        assert_eq!(out.count_nonzero(), 1);
        assert_eq!(out.pixel(2, 1, 0), 1);
    }

    #[test]
    fn persistent_pixel_does_not_ghost() {
        // Present in frames 1 and 2 only: frame 1 differs from 0 but not from 2.
        let v = Video::from_fn(2, 1, 2, |j, y, x| if (y, x) == (0, 0) && (j == 1 || j == 2) { 3 } else { 0 });
        let out = classical_three_frame_diff(&v, 1, BoundaryMode::Cyclic).unwrap();
        assert_eq!(out.count_nonzero(), 0);
    }

    #[test]
    fn two_frames_wrap_onto_the_same_neighbour() {
        let v = Video::from_fn(1, 1, 2, |j, y, x| if (j, y, x) == (1, 0, 0) { 2 } else { 0 });
        let out = classical_three_frame_diff(&v, 2, BoundaryMode::Cyclic).unwrap();
        assert_eq!(out.pixel(1, 0, 0), 1);
        assert_eq!(out.pixel(0, 0, 0), 1);
    }

    #[test]
    fn clamp_silences_edge_frames() {
        let v = Video::from_fn(2, 1, 1, |j, _, _| (j % 2) as u32);
        let clamp = classical_three_frame_diff(&v, 1, BoundaryMode::Clamp).unwrap();
        assert_eq!(clamp.frames[0], frame(&[&[0, 0], &[0, 0]]));
        assert_eq!(clamp.frames[3], frame(&[&[0, 0], &[0, 0]]));
        assert_eq!(clamp.frames[1], frame(&[&[1, 1], &[1, 1]]));
        let cyclic = classical_three_frame_diff(&v, 1, BoundaryMode::Cyclic).unwrap();
        assert_eq!(cyclic.count_nonzero(), 16);
    }

    #[test]
    fn boundary_parses() {
        assert_eq!("clamp".parse::<BoundaryMode>().unwrap(), BoundaryMode::Clamp);
        assert_eq!(BoundaryMode::default(), BoundaryMode::Cyclic);
        assert!("mirror".parse::<BoundaryMode>().is_err());
    }

    fn video_strategy() -> impl Strategy<Value = Video> {
        (1u32..=2, 1u32..=2, 1u32..=3).prop_flat_map(|(m, n, q)| {
            let len = (1usize << m) << (2 * n);
            proptest::collection::vec(0u32..1 << q, len).prop_map(move |px| {
                let side = 1usize << n;
                Video::from_fn(m, n, q, |j, y, x| px[(j * side + y) * side + x])
            })
        })
    }

    proptest! {
        #[test]
        fn abs_diff_commutes(v in video_strategy()) {
            let (a, b) = (&v.frames[0], &v.frames[1]);
            prop_assert_eq!(abs_diff_frames(a, b).unwrap(), abs_diff_frames(b, a).unwrap());
        }

        #[test]
        fn raising_threshold_only_clears(v in video_strategy(), t in 0u32..8) {
            let lo = classical_three_frame_diff(&v, t, BoundaryMode::Cyclic).unwrap();
            let hi = classical_three_frame_diff(&v, t + 1, BoundaryMode::Cyclic).unwrap();
            for (fl, fh) in lo.frames.iter().zip(&hi.frames) {
                for (rl, rh) in fl.iter().zip(fh) {
                    for (&a, &b) in rl.iter().zip(rh) {
                        prop_assert!(b <= a);
                    }
                }
            }
        }

        #[test]
        fn thresholding_is_idempotent(v in video_strategy(), t in 1u32..8) {
            let d = abs_diff_frames(&v.frames[0], &v.frames[1]).unwrap();
            let once = threshold_frame(&d, t);
            prop_assert_eq!(threshold_frame(&once, 1), once);
        }
    }
}
