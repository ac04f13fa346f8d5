use crate::circuit::{Circuit, CircuitBuilder, Wire};
use crate::error::Result;

/// Square-and-multiply over the groupoid operation `f` (a `2l → l` circuit),
/// computing `bd(I_G(bc(x)))` for the `l`-bit word `x`.
///
/// Leading zero bits of `x` are skipped; the last bit is always processed so
/// that `x = 0` still performs one squaring.
pub fn index_gadget(
    b: &mut CircuitBuilder,
    f: &Circuit,
    id: u64,
    g: u64,
    x: &[Wire],
) -> Result<Vec<Wire>> {
    let l = x.len();
    let gw = b.const_word(g, l);
    let mut r = b.const_word(id, l);
    let mut started = b.constant(false);
    for (i, &bit) in x.iter().enumerate() {
        let active = if i + 1 == l {
            b.constant(true)
        } else {
            b.or(started, bit)
        };
        let sq = b.embed(f, &[r.as_slice(), r.as_slice()].concat())?;
        let r1 = b.mux_word(active, &sq, &r);
        let mul = b.embed(f, &[gw.as_slice(), r1.as_slice()].concat())?;
        r = b.mux_word(bit, &mul, &r1);
        started = b.or(started, bit);
    }
    Ok(r)
}
