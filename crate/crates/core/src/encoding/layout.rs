use serde::{Deserialize, Serialize};

use crate::error::{invalid_arg, Error, Result};

/// Largest supported bit depth (8-bit grayscale).
pub const MAX_BIT_DEPTH: u32 = 8;

/// A contiguous, named run of wires.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Register {
    pub name: String,
    pub start: usize,
    pub len: usize,
}

impl Register {
    fn new(name: &str, start: usize, len: usize) -> Self {
        Register { name: name.to_string(), start, len }
    }

    /// Wire indices, least significant first.
    pub fn wires(&self) -> Vec<usize> {
        (self.start..self.start + self.len).collect()
    }

    pub fn wire(&self, k: usize) -> usize {
        assert!(k < self.len, "wire {k} outside register {}", self.name);
        self.start + k
    }

    pub fn end(&self) -> usize {
        self.start + self.len
    }
}

/// Wire assignment for the segmentation circuit.
///
/// In wire order: `color` (q), `pos` (2n, `|Y>|X>` with Y in the high
/// bits), `frame` (m), `diff_prev` (q), `diff_next` (q), `anc` (3),
/// `cmp` (2, `y0` then `y1`), `seg` (1). Width is `3q + 2n + m + 6`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegisterLayout {
    pub m_exp: u32,
    pub n_exp: u32,
    pub q: u32,
    pub color: Register,
    pub pos: Register,
    pub frame: Register,
    pub diff_prev: Register,
    pub diff_next: Register,
    pub anc: Register,
    pub cmp: Register,
    pub seg: Register,
}

pub fn layout_for(m_exp: u32, n_exp: u32, q: u32) -> Result<RegisterLayout> {
    if m_exp < 1 || n_exp < 1 || q < 1 {
        return invalid_arg(format!(
            "layout needs m, n, q >= 1 (got m={m_exp}, n={n_exp}, q={q})"
        ));
    }
    if q > MAX_BIT_DEPTH {
        return Err(Error::Unsupported(format!(
            "bit depth {q} exceeds the grayscale maximum of {MAX_BIT_DEPTH}"
        )));
    }
    let (m, n, q) = (m_exp as usize, n_exp as usize, q as usize);
    let mut next = 0;
    let mut take = |name: &str, len: usize| {
        let r = Register::new(name, next, len);
        next += len;
        r
    };
    let layout = RegisterLayout {
        m_exp,
        n_exp,
        q: q as u32,
        color: take("color", q),
        pos: take("pos", 2 * n),
        frame: take("frame", m),
        diff_prev: take("diff_prev", q),
        diff_next: take("diff_next", q),
        anc: take("anc", 3),
        cmp: take("cmp", 2),
        seg: take("seg", 1),
    };
    if layout.width() > crate::qvm::MAX_WIDTH {
        return Err(Error::Unsupported(format!(
            "layout needs {} wires, more than {}",
            layout.width(),
            crate::qvm::MAX_WIDTH
        )));
    }
    Ok(layout)
}

impl RegisterLayout {
    pub fn registers(&self) -> [&Register; 8] {
        [
            &self.color,
            &self.pos,
            &self.frame,
            &self.diff_prev,
            &self.diff_next,
            &self.anc,
            &self.cmp,
            &self.seg,
        ]
    }

    pub fn width(&self) -> usize {
        self.seg.end()
    }

    /// Qubit count of the original construction, `q + 2n + m + q + q + 3`,
    /// which has no dedicated comparator-output or result wires.
    pub fn reference_width(&self) -> usize {
        3 * self.q as usize + 2 * self.n_exp as usize + self.m_exp as usize + 3
    }

    /// Address wires of the video table: position bits, then frame bits.
    pub fn address_wires(&self) -> Vec<usize> {
        let mut w = self.pos.wires();
        w.extend(self.frame.wires());
        w
    }

    /// Wires measured to read out a result: position, frame, result bit.
    pub fn key_wires(&self) -> Vec<usize> {
        let mut w = self.address_wires();
        w.push(self.seg.start);
        w
    }

    pub fn cells(&self) -> usize {
        1 << (self.m_exp + 2 * self.n_exp)
    }

    /// Layout as written to `layout.json`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "bit_order": "lsb0",
            "m_exp": self.m_exp,
            "n_exp": self.n_exp,
            "q": self.q,
            "width": self.width(),
            "reference_width": self.reference_width(),
            "registers": self.registers(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn widths() {
        let l = layout_for(2, 2, 3).unwrap();
        assert_eq!(l.width(), 21);
        assert_eq!(l.reference_width(), 18);
        assert_eq!(layout_for(1, 1, 1).unwrap().width(), 12);
    }

    #[test]
    fn registers_tile_the_width() {
        for (m, n, q) in [(1, 1, 1), (2, 2, 3), (3, 4, 8)] {
            let l = layout_for(m, n, q).unwrap();
            let mut next = 0;
            for r in l.registers() {
                assert_eq!(r.start, next);
                next = r.end();
            }
            assert_eq!(next, l.width());
            let sizes: Vec<usize> = l.registers().iter().map(|r| r.len).collect();
            let (m, n, q) = (m as usize, n as usize, q as usize);
            assert_eq!(sizes, vec![q, 2 * n, m, q, q, 3, 2, 1]);
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(layout_for(1, 1, 9), Err(Error::Unsupported(_))));
        assert!(matches!(layout_for(0, 1, 1), Err(Error::InvalidArgument(_))));
        assert!(matches!(layout_for(1, 0, 1), Err(Error::InvalidArgument(_))));
    }
}
