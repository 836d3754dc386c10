//! The difference map `φ_ℓ` that turns duplication errors into insertions
//! of `0^ℓ` blocks, and its inverse.

use crate::word::{ChannelParams, Symbol, Word};

/// `x_i = x̃_i − x̃_{i−ℓ} (mod q)`, with `x̃_k = 0` for `k ≤ 0`.
pub fn phi(params: &ChannelParams, xt: &Word) -> Word {
    let q = params.q();
    let ell = params.ell() as usize;
    let src = xt.symbols();
    let out = (0..src.len())
        .map(|i| {
            let prev = if i >= ell { u32::from(src[i - ell]) } else { 0 };
            ((u32::from(src[i]) + q - prev) % q) as Symbol
        })
        .collect();
    Word::new(out)
}

/// `x̃_i = x_i + x̃_{i−ℓ} (mod q)`.
pub fn phi_inverse(params: &ChannelParams, x: &Word) -> Word {
    let mut out = x.symbols().to_vec();
    phi_inverse_in_place(params, &mut out);
    Word::new(out)
}

pub(crate) fn phi_inverse_in_place(params: &ChannelParams, s: &mut [Symbol]) {
    let q = params.q();
    let ell = params.ell() as usize;
    for i in ell..s.len() {
        s[i] = ((u32::from(s[i]) + u32::from(s[i - ell])) % q) as Symbol;
    }
}
