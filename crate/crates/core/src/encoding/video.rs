use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One frame, indexed `[row Y][column X]`.
pub type Frame = Vec<Vec<u32>>;

/// A grayscale video of `2^m_exp` frames, each `2^n_exp x 2^n_exp` pixels of
/// `q` bits. Serializes to the JSON manifest `{"m_exp","n_exp","q","frames"}`
/// with `frames[j][Y][X]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Video {
    pub m_exp: u32,
    pub n_exp: u32,
    pub q: u32,
    pub frames: Vec<Frame>,
}

impl Video {
    /// Builds a video by evaluating `f(j, y, x)` for every pixel.
    pub fn from_fn(m_exp: u32, n_exp: u32, q: u32, mut f: impl FnMut(usize, usize, usize) -> u32) -> Self {
        let side = 1usize << n_exp;
        let frames = (0..1usize << m_exp)
            .map(|j| (0..side).map(|y| (0..side).map(|x| f(j, y, x)).collect()).collect())
            .collect();
        Video { m_exp, n_exp, q, frames }
    }

    pub fn zeros(m_exp: u32, n_exp: u32, q: u32) -> Self {
        Self::from_fn(m_exp, n_exp, q, |_, _, _| 0)
    }

    pub fn frame_count(&self) -> usize {
        1 << self.m_exp
    }

    pub fn side(&self) -> usize {
        1 << self.n_exp
    }

    pub fn pixels_per_frame(&self) -> usize {
        1 << (2 * self.n_exp)
    }

    pub fn pixel(&self, j: usize, y: usize, x: usize) -> u32 {
        self.frames[j][y][x]
    }

    /// Pixel by flat position index `i = Y * 2^n + X`.
    pub fn pixel_at(&self, j: usize, i: usize) -> u32 {
        let side = self.side();
        self.frames[j][i / side][i % side]
    }

    pub fn set_pixel_at(&mut self, j: usize, i: usize, value: u32) {
        let side = self.side();
        self.frames[j][i / side][i % side] = value;
    }

    /// Number of non-zero pixels across all frames.
    pub fn count_nonzero(&self) -> usize {
        self.frames.iter().flatten().flatten().filter(|&&p| p != 0).count()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load_json(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| Error::Format {
            path: path.display().to_string(),
            reason: e.to_string(),
        })
    }

    pub fn save_json(&self, path: &Path) -> Result<()> {
        std::fs::write(path, serde_json::to_string(self)?)?;
        Ok(())
    }
}

/// One problem found by [`validate_video`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    BitDepth { q: u32 },
    FrameCountNotPowerOfTwo { found: usize },
    FrameCount { expected: usize, found: usize },
    SideNotPowerOfTwo { frame: usize, found: usize },
    Rows { frame: usize, expected: usize, found: usize },
    Columns { frame: usize, row: usize, expected: usize, found: usize },
    PixelRange { frame: usize, y: usize, x: usize, value: u32, max: u32 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::BitDepth { q } => write!(f, "bit depth q={q} outside 1..=16"),
            Violation::FrameCountNotPowerOfTwo { found } => {
                write!(f, "frame count {found} is not a power of two")
            }
            Violation::FrameCount { expected, found } => {
                write!(f, "expected {expected} frames, found {found}")
            }
            Violation::SideNotPowerOfTwo { frame, found } => {
                write!(f, "frame {frame}: side length {found} is not a power of two")
            }
            Violation::Rows { frame, expected, found } => {
                write!(f, "frame {frame}: expected {expected} rows, found {found}")
            }
            Violation::Columns { frame, row, expected, found } => {
                write!(f, "frame {frame} row {row}: expected {expected} columns, found {found}")
            }
            Violation::PixelRange { frame, y, x, value, max } => {
                write!(f, "frame {frame} ({y},{x}): value {value} out of range [0, {max}]")
            }
        }
    }
}

/// Checks power-of-two dimensions and the pixel range, reporting every
/// violation rather than stopping at the first.
pub fn validate_video(video: &Video) -> Result<(), Vec<Violation>> {
    let mut out = Vec::new();
    let q_ok = (1..=16).contains(&video.q);
    if !q_ok {
        out.push(Violation::BitDepth { q: video.q });
    }
    let found = video.frames.len();
    if !found.is_power_of_two() {
        out.push(Violation::FrameCountNotPowerOfTwo { found });
    } else if video.m_exp >= 32 || found != 1 << video.m_exp {
        out.push(Violation::FrameCount { expected: 1usize << video.m_exp.min(31), found });
    }
    let side = 1usize << video.n_exp.min(31);
    let max = if q_ok { (1u32 << video.q) - 1 } else { u32::MAX };
    for (j, frame) in video.frames.iter().enumerate() {
        if !frame.len().is_power_of_two() {
            out.push(Violation::SideNotPowerOfTwo { frame: j, found: frame.len() });
        } else if frame.len() != side {
            out.push(Violation::Rows { frame: j, expected: side, found: frame.len() });
        }
        for (y, row) in frame.iter().enumerate() {
            if row.len() != side {
                out.push(Violation::Columns { frame: j, row: y, expected: side, found: row.len() });
            }
            for (x, &value) in row.iter().enumerate() {
                if value > max {
                    out.push(Violation::PixelRange { frame: j, y, x, value, max });
                }
            }
        }
    }
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn four_by_four_by_four_is_valid() {
        let v = Video::from_fn(2, 2, 3, |j, y, x| ((j + y + x) % 8) as u32);
        assert_eq!(validate_video(&v), Ok(()));
    }

    #[test]
    fn three_frames_rejected() {
        let mut v = Video::zeros(2, 1, 3);
        v.frames.pop();
        let errs = validate_video(&v).unwrap_err();
        assert_eq!(errs, vec![Violation::FrameCountNotPowerOfTwo { found: 3 }]);
    }

    #[test]
    fn out_of_range_pixel() {
        let mut v = Video::zeros(1, 1, 3);
        v.frames[1][0][1] = 8;
        let errs = validate_video(&v).unwrap_err();
        assert_eq!(
            errs,
            vec![Violation::PixelRange { frame: 1, y: 0, x: 1, value: 8, max: 7 }]
        );
    }

    #[test]
    fn lists_every_violation() {
        let mut v = Video::zeros(1, 1, 1);
        v.frames[0][0][0] = 2;
        v.frames[1][1][1] = 5;
        v.frames[1][0].push(0);
        let errs = validate_video(&v).unwrap_err();
        assert_eq!(errs.len(), 3, "{errs:?}");
    }

    #[test]
    fn manifest_json_shape() {
        let v = Video::from_fn(1, 1, 2, |j, y, x| (j * 2 + y + x) as u32 % 4);
        let json = serde_json::to_value(&v).unwrap();
        assert_eq!(json["frames"][1][0][1], 3);
        assert_eq!(Video::from_json(&json.to_string()).unwrap(), v);
    }
}
