use super::{Circuit, CircuitBuilder, Wire};
use crate::encoding::ceil_log2;
use crate::error::{Error, Result};
use crate::number::is_prime;

/// Multiplication in `Z_p^*` under the representation `e ↦ e − 1`.
///
/// The result is a `2l → l` circuit, `l = ⌈log2(p − 1)⌉`, mapping
/// `bd(a) || bd(b)` to `bd(((a+1)(b+1) mod p) − 1)` for `a, b < p − 1`.
/// Shift-and-add over the bits of `b + 1`, reducing after every doubling and
/// every addition; intermediates stay below `2p` and fit in `l + 2` bits.
pub fn build_modmul(p: u64) -> Result<Circuit> {
    if p < 3 || !is_prime(p) {
        return Err(Error::Invalid(vec![format!("modulus {p} is not a prime ≥ 3")]));
    }
    let l = ceil_log2(p - 1);
    let w = l + 2;
    let mut b = CircuitBuilder::new(2 * l);
    let x = b.inputs();
    let zero = b.constant(false);
    let widen = |word: &[Wire], width: usize| -> Vec<Wire> {
        let mut out = vec![zero; width - word.len()];
        out.extend_from_slice(word);
        out
    };

    let a1 = b.add_const(&widen(&x[..l], w), 1);
    let a1 = reduce_once(&mut b, &a1, p);
    let b1 = b.add_const(&widen(&x[l..], l + 1), 1);

    let mut r = b.const_word(0, w);
    for &bit in &b1 {
        let mut doubled = b.rotl(&r);
        doubled[w - 1] = zero;
        let doubled = reduce_once(&mut b, &doubled, p);
        let (added, _) = b.add(&doubled, &a1);
        let added = reduce_once(&mut b, &added, p);
        r = b.mux_word(bit, &added, &doubled);
    }
    let out = b.sub_const(&r, 1);
    Ok(b.finish(&out[w - l..]))
}

fn reduce_once(b: &mut CircuitBuilder, v: &[Wire], p: u64) -> Vec<Wire> {
    let ge = b.ge_const(v, p);
    let less = b.sub_const(v, p);
    b.mux_word(ge, &less, v)
}
