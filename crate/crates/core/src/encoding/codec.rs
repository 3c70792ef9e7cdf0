use std::collections::BTreeMap;

use super::layout::RegisterLayout;
use super::video::{validate_video, Video};
use crate::error::{invalid_arg, Error, Result};
use crate::qvm::bits::{gather, scatter};
use crate::qvm::{Histogram, LookupTable, SparseState};

fn check_matches(video: &Video, layout: &RegisterLayout) -> Result<()> {
    validate_video(video).map_err(Error::InvalidVideo)?;
    if (video.m_exp, video.n_exp, video.q) != (layout.m_exp, layout.n_exp, layout.q) {
        return invalid_arg(format!(
            "video (m={}, n={}, q={}) does not match layout (m={}, n={}, q={})",
            video.m_exp, video.n_exp, video.q, layout.m_exp, layout.n_exp, layout.q
        ));
    }
    Ok(())
}

/// Flat cell index `j * 4^n + i`, which is also the video-table address.
fn cell(layout: &RegisterLayout, j: usize, i: usize) -> usize {
    (j << (2 * layout.n_exp)) | i
}

/// The video as a lookup table addressed by `pos + (frame << 2n)`.
pub fn video_table(video: &Video) -> Result<LookupTable> {
    validate_video(video).map_err(Error::InvalidVideo)?;
    let pixels = video.pixels_per_frame();
    let values = (0..video.frame_count())
        .flat_map(|j| (0..pixels).map(move |i| video.pixel_at(j, i) as u64))
        .collect();
    LookupTable::new(
        (video.m_exp + 2 * video.n_exp) as usize,
        video.q as usize,
        values,
    )
}

/// Prepares the uniform ensemble over all `(frame j, position i)` with the
/// color register holding `pixel(j, i)` and every other wire zero.
pub fn encode_video(video: &Video, layout: &RegisterLayout) -> Result<SparseState> {
    check_matches(video, layout)?;
    let cells = layout.cells();
    let p = 1.0 / cells as f64;
    let (pos, frame, color) = (layout.pos.wires(), layout.frame.wires(), layout.color.wires());
    let mut map = BTreeMap::new();
    for j in 0..video.frame_count() {
        for i in 0..video.pixels_per_frame() {
            let mut b = scatter(0, &frame, j as u64);
            b = scatter(b, &pos, i as u64);
            b = scatter(b, &color, video.pixel_at(j, i) as u64);
            map.insert(b, p);
        }
    }
    Ok(SparseState::from_map(layout.width(), map))
}

/// Reads one register per `(j, i)` cell into a video of the given depth.
/// Every cell must be present exactly once with a single value.
fn decode_register(
    state: &SparseState,
    layout: &RegisterLayout,
    wires: &[usize],
    q: u32,
) -> Result<Video> {
    if state.width() != layout.width() {
        return invalid_arg(format!(
            "state has {} wires, layout has {}",
            state.width(),
            layout.width()
        ));
    }
    let (pos, frame) = (layout.pos.wires(), layout.frame.wires());
    let mut seen: Vec<Option<u32>> = vec![None; layout.cells()];
    for (b, _) in state.iter() {
        let (j, i) = (gather(b, &frame) as usize, gather(b, &pos) as usize);
        let value = gather(b, wires) as u32;
        let slot = &mut seen[cell(layout, j, i)];
        match *slot {
            Some(v) if v != value => {
                return Err(Error::CorruptState(format!(
                    "cell (frame {j}, position {i}) holds both {v} and {value}"
                )))
            }
            _ => *slot = Some(value),
        }
    }
    let mut out = Video::zeros(layout.m_exp, layout.n_exp, q);
    let per_frame = out.pixels_per_frame();
    for (c, v) in seen.into_iter().enumerate() {
        let (j, i) = (c / per_frame, c % per_frame);
        match v {
            Some(v) => out.set_pixel_at(j, i, v),
            None => {
                return Err(Error::CorruptState(format!(
                    "cell (frame {j}, position {i}) missing from the state"
                )))
            }
        }
    }
    Ok(out)
}

/// Inverse of [`encode_video`]: reads the color register of every cell.
pub fn decode_color(state: &SparseState, layout: &RegisterLayout) -> Result<Video> {
    decode_register(state, layout, &layout.color.wires(), layout.q)
}

/// Reads the segmentation result bit of every cell into a binary video.
pub fn decode_segmentation(state: &SparseState, layout: &RegisterLayout) -> Result<Video> {
    decode_register(state, layout, &layout.seg.wires(), 1)
}

/// Rebuilds the binary result video from measured frame, position and
/// result wires. Every cell must have been observed at least once.
pub fn decode_histogram(h: &Histogram, layout: &RegisterLayout) -> Result<Video> {
    let locate = |wires: Vec<usize>| -> Result<Vec<usize>> {
        wires
            .into_iter()
            .map(|w| {
                h.qubits().iter().position(|&q| q == w).ok_or_else(|| {
                    Error::InvalidArgument(format!("histogram does not measure wire {w}"))
                })
            })
            .collect()
    };
    let pos = locate(layout.pos.wires())?;
    let frame = locate(layout.frame.wires())?;
    let seg = locate(layout.seg.wires())?;
    let mut seen: Vec<Option<u32>> = vec![None; layout.cells()];
    for (&outcome, &count) in h.counts() {
        if count == 0 {
            continue;
        }
        let (j, i) = (gather(outcome, &frame) as usize, gather(outcome, &pos) as usize);
        let bit = gather(outcome, &seg) as u32;
        let slot = &mut seen[cell(layout, j, i)];
        match *slot {
            Some(v) if v != bit => {
                return Err(Error::CorruptState(format!(
                    "cell (frame {j}, position {i}) measured as both 0 and 1"
                )))
            }
            _ => *slot = Some(bit),
        }
    }
    let mut out = Video::zeros(layout.m_exp, layout.n_exp, 1);
    let per_frame = out.pixels_per_frame();
    let mut missing = Vec::new();
    for (c, v) in seen.into_iter().enumerate() {
        let (j, i) = (c / per_frame, c % per_frame);
        match v {
            Some(v) => out.set_pixel_at(j, i, v),
            None => missing.push((j, i)),
        }
    }
    if missing.is_empty() {
        Ok(out)
    } else {
        Err(Error::IncompleteSampling(missing))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoding::layout_for;
    use crate::qvm::measure;

    #[test]
    fn zero_video_encodes_uniformly() {
        let v = Video::zeros(1, 1, 1);
        let l = layout_for(1, 1, 1).unwrap();
        let s = encode_video(&v, &l).unwrap();
        assert_eq!(s.len(), 8);
        assert!(s.iter().all(|(b, p)| p == 0.125 && gather(b, &l.color.wires()) == 0));
    }

    #[test]
    fn pixel_lands_on_its_cell() {
        let mut v = Video::zeros(1, 1, 2);
        v.frames[0][0][1] = 3;
        let l = layout_for(1, 1, 2).unwrap();
        let s = encode_video(&v, &l).unwrap();
        let hit: Vec<u64> = s
            .iter()
            .map(|(b, _)| b)
            .filter(|&b| gather(b, &l.frame.wires()) == 0 && gather(b, &l.pos.wires()) == 0b01)
            .collect();
        assert_eq!(hit.len(), 1);
        assert_eq!(gather(hit[0], &l.color.wires()), 0b11);
    }

    #[test]
    fn y_occupies_high_position_bits() {
        let mut v = Video::zeros(1, 1, 1);
        v.frames[1][1][0] = 1; // Y=1, X=0 -> i = 2
        let l = layout_for(1, 1, 1).unwrap();
        let s = encode_video(&v, &l).unwrap();
        let lit: Vec<(u64, u64)> = s
            .iter()
            .filter(|&(b, _)| gather(b, &l.color.wires()) == 1)
            .map(|(b, _)| (gather(b, &l.frame.wires()), gather(b, &l.pos.wires())))
            .collect();
        assert_eq!(lit, vec![(1, 2)]);
    }

    #[test]
    fn mismatched_layout() {
        let v = Video::zeros(1, 1, 2);
        assert!(encode_video(&v, &layout_for(1, 1, 3).unwrap()).is_err());
    }

    #[test]
    fn segmentation_decode() {
        let l = layout_for(1, 1, 1).unwrap();
        let v = Video::zeros(1, 1, 1);
        let s = encode_video(&v, &l).unwrap();
        assert_eq!(decode_segmentation(&s, &l).unwrap(), Video::zeros(1, 1, 1));

        let seg = l.seg.start;
        let marked: Vec<(u64, f64)> = s
            .iter()
            .map(|(b, p)| {
                let hit = gather(b, &l.frame.wires()) == 1 && gather(b, &l.pos.wires()) == 3;
                (if hit { b | 1 << seg } else { b }, p)
            })
            .collect();
        let s = SparseState::new(l.width(), marked).unwrap();
        let out = decode_segmentation(&s, &l).unwrap();
        assert_eq!(out.count_nonzero(), 1);
        assert_eq!(out.pixel_at(1, 3), 1);
    }

    #[test]
    fn conflicting_cell_is_corrupt() {
        let l = layout_for(1, 1, 1).unwrap();
        let s = encode_video(&Video::zeros(1, 1, 1), &l).unwrap();
        let first = s.iter().next().unwrap().0;
        let comps: Vec<(u64, f64)> = s
            .iter()
            .chain(std::iter::once((first | 1 << l.seg.start, 0.0)))
            .map(|(b, _)| (b, 1.0 / 9.0))
            .collect();
        let bad = SparseState::new(l.width(), comps).unwrap();
        assert!(matches!(decode_segmentation(&bad, &l), Err(Error::CorruptState(_))));
    }

    #[test]
    fn histogram_decode_and_missing_cells() {
        let l = layout_for(1, 1, 1).unwrap();
        let s = encode_video(&Video::zeros(1, 1, 1), &l).unwrap();
        let key = l.key_wires();
        let full: BTreeMap<u64, u64> = (0..8u64).map(|c| (c, 3)).collect();
        let h = Histogram::new(key.clone(), full.clone()).unwrap();
        assert_eq!(decode_histogram(&h, &l).unwrap(), Video::zeros(1, 1, 1));

        let mut partial = full;
        partial.remove(&0);
        let h = Histogram::new(key, partial).unwrap();
        match decode_histogram(&h, &l) {
            Err(Error::IncompleteSampling(cells)) => assert_eq!(cells, vec![(0, 0)]),
            other => panic!("{other:?}"),
        }

        let sampled = measure(&s, &l.key_wires(), 512, 3).unwrap();
        assert_eq!(decode_histogram(&sampled, &l).unwrap(), Video::zeros(1, 1, 1));
    }

    #[test]
    fn table_addresses_match_layout() {
        let v = Video::from_fn(1, 1, 3, |j, y, x| (4 * j + 2 * y + x) as u32);
        let t = video_table(&v).unwrap();
        assert_eq!(t.address_bits(), 3);
        for c in 0..8 {
            assert_eq!(t.get(c), c);
        }
    }
}
