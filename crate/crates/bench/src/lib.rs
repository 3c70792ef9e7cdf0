//! Benchmark fixtures shared by the criterion targets.

use qvseg::Video;

/// Deterministic moving-square video: a bright 2x2 block stepping one
/// column per frame over a dim gradient.
pub fn moving_square(m_exp: u32, n_exp: u32, q: u32) -> Video {
    let side = 1usize << n_exp;
    let top = (1u32 << q) - 1;
    Video::from_fn(m_exp, n_exp, q, |j, y, x| {
        let left = j % side;
        if y < 2 && (x == left || x == (left + 1) % side) {
            top
        } else {
            ((x + y) as u32) % (top / 2 + 1)
        }
    })
}
