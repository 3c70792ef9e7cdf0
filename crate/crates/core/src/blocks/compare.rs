use super::{check_disjoint, check_len, LABEL_BINARIZATION, LABEL_COMPARATOR, LABEL_THRESHOLD};
use crate::error::{invalid_arg, Result};
use crate::qvm::{CircuitBuilder, Control, Gate};

/// Two-register comparator.
///
/// Writes `y1 y0 = 10` when `a > b`, `01` when `a < b` and `00` when they
/// are equal (`y[0]` is `y0`). Scans from the most significant bit; `y0`
/// doubles as the "already decided" flag during the scan and is fixed up at
/// the end. Uses `anc[0]` as a per-bit scratch wire. Cost `14q + 1`.
pub fn comparator(
    b: &mut CircuitBuilder,
    a: &[usize],
    bb: &[usize],
    anc: &[usize],
    y: &[usize],
) -> Result<()> {
    let q = a.len();
    if q == 0 {
        return invalid_arg("comparator on empty registers");
    }
    check_len("comparator b", bb, q)?;
    check_len("comparator anc", anc, 3)?;
    check_len("comparator y", y, 2)?;
    check_disjoint(&[a, bb, anc, y])?;
    let (t, y0, y1) = (anc[0], y[0], y[1]);
    b.scoped(LABEL_COMPARATOR, |b| {
        for i in (0..q).rev() {
            // b_i <- a_i xor b_i
            b.append(Gate::cx(a[i], bb[i]))?;
            // t <- undecided and a_i != b_i
            b.append(Gate::mcx(vec![Control::neg(y0), Control::pos(bb[i])], t))?;
            b.append(Gate::cx(t, y0))?;
            b.append(Gate::ccx(t, a[i], y1))?;
            b.append(Gate::reset(t))?;
            b.append(Gate::cx(a[i], bb[i]))?;
        }
        // y0 held "decided"; decided and not greater is less.
        b.append(Gate::cx(y1, y0))?;
        Ok(())
    })
}

/// Compares register `c` with the classical constant `threshold`.
///
/// Same output convention as [`comparator`]. The constant is folded into
/// control polarities, so no register holds it.
pub fn threshold_compare(
    b: &mut CircuitBuilder,
    c: &[usize],
    threshold: u64,
    anc: &[usize],
    y: &[usize],
) -> Result<()> {
    let q = c.len();
    if q == 0 {
        return invalid_arg("threshold compare on an empty register");
    }
    if q < 64 && threshold >> q != 0 {
        return invalid_arg(format!("threshold {threshold} does not fit in {q} bits"));
    }
    check_len("threshold anc", anc, 3)?;
    check_len("threshold y", y, 2)?;
    check_disjoint(&[c, anc, y])?;
    let (t, y0, y1) = (anc[0], y[0], y[1]);
    b.scoped(LABEL_THRESHOLD, |b| {
        for i in (0..q).rev() {
            let t_bit = threshold >> i & 1 == 1;
            // Decided at this bit iff c_i differs from the constant's bit.
            b.append(Gate::mcx(vec![Control::neg(y0), Control::when(c[i], !t_bit)], t))?;
            b.append(Gate::cx(t, y0))?;
            if !t_bit {
                // c_i = 1 against a 0 bit: greater.
                b.append(Gate::cx(t, y1))?;
            }
            b.append(Gate::reset(t))?;
        }
        b.append(Gate::cx(y1, y0))?;
        Ok(())
    })
}

/// Sets `c[0]` to `[c >= threshold]`. The higher wires of `c` keep their
/// input values; `anc` and `y` end at zero.
pub fn binarization(
    b: &mut CircuitBuilder,
    c: &[usize],
    threshold: u64,
    anc: &[usize],
    y: &[usize],
) -> Result<()> {
    b.scoped(LABEL_BINARIZATION, |b| {
        threshold_compare(b, c, threshold, anc, y)?;
        // y1 y0 = 01 exactly when c < T.
        b.append(Gate::reset(c[0]))?;
        b.append(Gate::mcx(vec![Control::neg(y[0])], c[0]))?;
        b.append(Gate::reset(y[0]))?;
        b.append(Gate::reset(y[1]))?;
        Ok(())
    })
}
