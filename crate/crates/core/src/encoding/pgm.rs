//! Netpbm graymap (P2/P5) reading and writing, and frame-directory videos
//! named `frame_0000.pgm`, `frame_0001.pgm`, ...

use std::fs;
use std::path::{Path, PathBuf};

use super::video::{Frame, Video};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PgmFormat {
    /// ASCII.
    P2,
    /// Binary.
    P5,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pgm {
    pub width: usize,
    pub height: usize,
    pub maxval: u32,
    /// Row-major samples.
    pub data: Vec<u32>,
}

fn format_err(path: &Path, reason: impl Into<String>) -> Error {
    Error::Format { path: path.display().to_string(), reason: reason.into() }
}

struct Header<'a> {
    bytes: &'a [u8],
    at: usize,
}

impl Header<'_> {
    fn skip_space(&mut self) {
        while self.at < self.bytes.len() {
            match self.bytes[self.at] {
                b'#' => {
                    while self.at < self.bytes.len() && self.bytes[self.at] != b'\n' {
                        self.at += 1;
                    }
                }
                c if c.is_ascii_whitespace() => self.at += 1,
                _ => break,
            }
        }
    }

    fn token(&mut self) -> Option<&str> {
        self.skip_space();
        let start = self.at;
        while self.at < self.bytes.len() && !self.bytes[self.at].is_ascii_whitespace() {
            self.at += 1;
        }
        std::str::from_utf8(&self.bytes[start..self.at]).ok().filter(|t| !t.is_empty())
    }

    fn number(&mut self) -> Option<u32> {
        self.token()?.parse().ok()
    }
}

pub fn parse_pgm(bytes: &[u8], path: &Path) -> Result<Pgm> {
    let mut h = Header { bytes, at: 0 };
    let magic = h.token().ok_or_else(|| format_err(path, "empty file"))?;
    let format = match magic {
        "P2" => PgmFormat::P2,
        "P5" => PgmFormat::P5,
        other => return Err(format_err(path, format!("unsupported magic {other:?}"))),
    };
    let mut field = |name: &str| h.number().ok_or_else(|| format_err(path, format!("bad {name}")));
    let width = field("width")? as usize;
    let height = field("height")? as usize;
    let maxval = field("maxval")?;
    if maxval == 0 || maxval > 65535 {
        return Err(format_err(path, format!("maxval {maxval} outside 1..=65535")));
    }
    let count = width * height;
    let data = match format {
        PgmFormat::P2 => {
            let mut data = Vec::with_capacity(count);
            for _ in 0..count {
                data.push(h.number().ok_or_else(|| format_err(path, "truncated pixel data"))?);
            }
            data
        }
        PgmFormat::P5 => {
            // Exactly one whitespace byte separates the header from the raster.
            let start = h.at + 1;
            let wide = maxval > 255;
            let need = count * if wide { 2 } else { 1 };
            let raster = bytes
                .get(start..start + need)
                .ok_or_else(|| format_err(path, "truncated pixel data"))?;
            if wide {
                raster.chunks_exact(2).map(|c| u16::from_be_bytes([c[0], c[1]]) as u32).collect()
            } else {
                raster.iter().map(|&b| b as u32).collect()
            }
        }
    };
    if let Some(v) = data.iter().find(|&&v| v > maxval) {
        return Err(format_err(path, format!("sample {v} exceeds maxval {maxval}")));
    }
    Ok(Pgm { width, height, maxval, data })
}

pub fn read_pgm(path: &Path) -> Result<Pgm> {
    parse_pgm(&fs::read(path)?, path)
}

pub fn encode_pgm(pgm: &Pgm, format: PgmFormat) -> Vec<u8> {
    let magic = match format {
        PgmFormat::P2 => "P2",
        PgmFormat::P5 => "P5",
    };
    let mut out = format!("{magic}\n{} {}\n{}\n", pgm.width, pgm.height, pgm.maxval).into_bytes();
    match format {
        PgmFormat::P2 => {
            for row in pgm.data.chunks(pgm.width.max(1)) {
                let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
                out.extend_from_slice(line.join(" ").as_bytes());
                out.push(b'\n');
            }
        }
        PgmFormat::P5 if pgm.maxval > 255 => {
            for &v in &pgm.data {
                out.extend_from_slice(&(v as u16).to_be_bytes());
            }
        }
        PgmFormat::P5 => out.extend(pgm.data.iter().map(|&v| v as u8)),
    }
    out
}

pub fn write_pgm(path: &Path, pgm: &Pgm, format: PgmFormat) -> Result<()> {
    fs::write(path, encode_pgm(pgm, format))?;
    Ok(())
}

pub fn frame_file_name(j: usize) -> String {
    format!("frame_{j:04}.pgm")
}

fn frame_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    for j in 0.. {
        let p = dir.join(frame_file_name(j));
        if !p.is_file() {
            break;
        }
        files.push(p);
    }
    if files.is_empty() {
        return Err(format_err(dir, "no frame_0000.pgm found"));
    }
    Ok(files)
}

/// Loads `frame_0000.pgm`, `frame_0001.pgm`, ... until the first gap. The
/// bit depth comes from the shared maxval, which must be `2^q - 1`.
/// Dimension problems are left for [`super::validate_video`] to report.
pub fn load_pgm_dir(dir: &Path) -> Result<Video> {
    let files = frame_files(dir)?;
    let mut frames: Vec<Frame> = Vec::with_capacity(files.len());
    let mut maxval = None;
    for path in &files {
        let pgm = read_pgm(path)?;
        if *maxval.get_or_insert(pgm.maxval) != pgm.maxval {
            return Err(format_err(path, "frames disagree on maxval"));
        }
        frames.push(pgm.data.chunks(pgm.width.max(1)).map(<[u32]>::to_vec).collect());
    }
    let maxval = maxval.unwrap_or(1);
    if !(maxval + 1).is_power_of_two() {
        return Err(format_err(&files[0], format!("maxval {maxval} is not 2^q - 1")));
    }
    let log2 = |n: usize| n.max(1).ilog2();
    Ok(Video {
        m_exp: log2(frames.len()),
        n_exp: log2(frames[0].len()),
        q: (maxval + 1).ilog2(),
        frames,
    })
}

/// Writes each frame as `frame_NNNN.pgm`. With `scale_to`, non-zero samples
/// are written as that value and the maxval becomes `scale_to` (binary
/// videos as 0/255); otherwise maxval is `2^q - 1`.
pub fn save_pgm_dir(dir: &Path, video: &Video, format: PgmFormat, scale_to: Option<u32>) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let maxval = scale_to.unwrap_or((1 << video.q) - 1);
    let mut written = Vec::new();
    for (j, frame) in video.frames.iter().enumerate() {
        let data = frame
            .iter()
            .flatten()
            .map(|&v| match scale_to {
                Some(s) if v != 0 => s,
                _ => v,
            })
            .collect();
        let pgm = Pgm { width: video.side(), height: frame.len(), maxval, data };
        let path = dir.join(frame_file_name(j));
        write_pgm(&path, &pgm, format)?;
        written.push(path);
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_ascii_with_comments() {
        let text = b"P2\n# a comment\n2 2\n# another\n7\n0 1\n6 7\n";
        let p = parse_pgm(text, Path::new("x.pgm")).unwrap();
        assert_eq!((p.width, p.height, p.maxval), (2, 2, 7));
        assert_eq!(p.data, vec![0, 1, 6, 7]);
    }

    #[test]
    fn binary_round_trip() {
        let p = Pgm { width: 3, height: 1, maxval: 255, data: vec![0, 128, 255] };
        let bytes = encode_pgm(&p, PgmFormat::P5);
        assert_eq!(parse_pgm(&bytes, Path::new("x")).unwrap(), p);
        let wide = Pgm { width: 2, height: 1, maxval: 1023, data: vec![1000, 3] };
        assert_eq!(parse_pgm(&encode_pgm(&wide, PgmFormat::P5), Path::new("x")).unwrap(), wide);
    }

    #[test]
    fn rejects_bad_files() {
        assert!(parse_pgm(b"P6\n1 1\n255\n\0\0\0", Path::new("x")).is_err());
        assert!(parse_pgm(b"P2\n2 1\n7\n3\n", Path::new("x")).is_err());
        assert!(parse_pgm(b"P2\n1 1\n7\n9\n", Path::new("x")).is_err());
    }

    #[test]
    fn directory_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let v = Video::from_fn(2, 1, 3, |j, y, x| ((3 * j + y * 2 + x) % 8) as u32);
        for format in [PgmFormat::P2, PgmFormat::P5] {
            save_pgm_dir(dir.path(), &v, format, None).unwrap();
            assert_eq!(load_pgm_dir(dir.path()).unwrap(), v);
        }
    }

    #[test]
    fn scaled_binary_output() {
        let dir = tempfile::tempdir().unwrap();
        let v = Video::from_fn(1, 1, 1, |j, _, x| (j ^ x) as u32);
        save_pgm_dir(dir.path(), &v, PgmFormat::P2, Some(255)).unwrap();
        let p = read_pgm(&dir.path().join("frame_0001.pgm")).unwrap();
        assert_eq!(p.maxval, 255);
        assert_eq!(p.data, vec![255, 0, 255, 0]);
    }
}
