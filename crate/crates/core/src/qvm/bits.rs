//! Bitstring helpers. Wire 0 is the least significant bit everywhere, so in a
//! printed bitstring wire 0 is the rightmost character.

use crate::error::{invalid_arg, Result};

/// Formats the low `n` bits of `value`, most significant first.
pub fn format_bits(value: u64, n: usize) -> String {
    (0..n).rev().map(|k| if value >> k & 1 == 1 { '1' } else { '0' }).collect()
}

/// Parses a bitstring written most significant first. Returns the value and
/// the number of bits.
pub fn parse_bits(s: &str) -> Result<(u64, usize)> {
    if s.is_empty() || s.len() > 64 {
        return invalid_arg(format!("bitstring {s:?} must have 1..=64 characters"));
    }
    let mut v = 0u64;
    for ch in s.chars() {
        v = (v << 1)
            | match ch {
                '0' => 0,
                '1' => 1,
                _ => return invalid_arg(format!("bitstring {s:?} contains {ch:?}")),
            };
    }
    Ok((v, s.len()))
}

/// Reads `wires` out of `basis`, `wires[0]` becoming bit 0 of the result.
#[inline]
pub fn gather(basis: u64, wires: &[usize]) -> u64 {
    wires
        .iter()
        .enumerate()
        .fold(0, |acc, (k, &w)| acc | (basis >> w & 1) << k)
}

/// Writes the low bits of `value` onto `wires` of `basis`.
#[inline]
pub fn scatter(basis: u64, wires: &[usize], value: u64) -> u64 {
    wires.iter().enumerate().fold(basis, |acc, (k, &w)| {
        (acc & !(1 << w)) | (value >> k & 1) << w
    })
}
