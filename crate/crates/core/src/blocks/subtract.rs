use super::{check_disjoint, check_len, comparator, LABEL_ABS_SUBTRACTOR, LABEL_SUBTRACTOR};
use crate::error::{invalid_arg, Result};
use crate::qvm::{CircuitBuilder, Control, Gate};

/// Ripple-borrow subtractor: `b <- (a - b) mod 2^q`, `a` unchanged.
///
/// The borrow into bit `i` lives on one of `anc[0]`/`anc[1]`, alternating.
/// Once a bit's difference is written the spent borrow is reset; it is a
/// function of `a` and the difference, so nothing is lost.
pub fn subtractor(b: &mut CircuitBuilder, a: &[usize], bb: &[usize], anc: &[usize]) -> Result<()> {
    let q = a.len();
    if q == 0 {
        return invalid_arg("subtractor on empty registers");
    }
    check_len("subtractor b", bb, q)?;
    check_len("subtractor anc", anc, 3)?;
    check_disjoint(&[a, bb, anc])?;
    b.scoped(LABEL_SUBTRACTOR, |b| {
        let (mut borrow_in, mut borrow_out) = (anc[0], anc[1]);
        for i in 0..q {
            // b_i <- x = a_i xor b_i
            b.append(Gate::cx(a[i], bb[i]))?;
            if i + 1 < q {
                // borrow_out = x ? !a_i : borrow_in, two exclusive terms.
                b.append(Gate::mcx(vec![Control::pos(bb[i]), Control::neg(a[i])], borrow_out))?;
                if i > 0 {
                    b.append(Gate::mcx(vec![Control::neg(bb[i]), Control::pos(borrow_in)], borrow_out))?;
                }
            }
            if i > 0 {
                b.append(Gate::cx(borrow_in, bb[i]))?;
                b.append(Gate::reset(borrow_in))?;
            }
            std::mem::swap(&mut borrow_in, &mut borrow_out);
        }
        Ok(())
    })
}

/// Absolute-value subtractor: `b <- |a - b|`, `a <- max(a, b)`.
///
/// Compares, swaps the registers when `a < b`, subtracts, then resets the
/// comparator outputs.
pub fn abs_subtractor(
    b: &mut CircuitBuilder,
    a: &[usize],
    bb: &[usize],
    anc: &[usize],
    y: &[usize],
) -> Result<()> {
    b.scoped(LABEL_ABS_SUBTRACTOR, |b| {
        comparator(b, a, bb, anc, y)?;
        for (&ai, &bi) in a.iter().zip(bb) {
            b.append(Gate::cswap(Control::pos(y[0]), ai, bi))?;
        }
        subtractor(b, a, bb, anc)?;
        b.append(Gate::reset(y[0]))?;
        b.append(Gate::reset(y[1]))?;
        Ok(())
    })
}
