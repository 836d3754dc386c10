//! Zero-error decoding: every zero-run of the received word is shortened,
//! by removing whole `0^ℓ` blocks, to the largest admissible run
//! `L(i, j) − 1` not exceeding it.
//!
//! For a run `u`, `i ∈ {1..ℓ}` is fixed by `i ≡ u + 1 (mod ℓ)` and `j` is the
//! largest level with `L(i, j) ≤ u + 1`, found by stepping the integer
//! recurrence rather than taking a floating-point logarithm. The map is
//! total on `S_q(n)` and sends every word to a codeword.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::word::{segments_of, ChannelParams, Repetition, RunForm, Segment, Symbol, Word};

/// Result of decoding a single zero-run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunDecision {
    pub class: u32,
    pub level: u32,
    /// The shortened run `L(i, j) − 1`.
    pub run: u64,
}

pub fn decode_run(params: &ChannelParams, u: u64) -> RunDecision {
    let ell = u64::from(params.ell());
    let target = u + 1;
    let class = ((target - 1) % ell + 1) as u32;
    match params.r() {
        Repetition::Unbounded => RunDecision { class, level: 0, run: u64::from(class) - 1 },
        Repetition::Finite(r) => {
            let factor = u64::from(r) * ell + 1;
            let mut len = u64::from(class);
            let mut level = 0;
            while let Some(next) = len.checked_mul(factor).and_then(|v| v.checked_add(ell)) {
                if next > target {
                    break;
                }
                len = next;
                level += 1;
            }
            RunDecision { class, level, run: len - 1 }
        }
    }
}

fn decode_segments(params: &ChannelParams, segments: &[Segment]) -> Vec<Segment> {
    segments
        .iter()
        .map(|s| Segment::new(s.sigma, decode_run(params, s.run as u64).run as usize))
        .collect()
}

/// Decodes a received word of the 0-insertion channel. The word must be
/// non-empty and start with a nonzero symbol.
pub fn decode(params: &ChannelParams, z: &Word) -> Result<Word> {
    let mut out = Vec::with_capacity(z.len());
    decode_into(params, z.symbols(), &mut out)?;
    Ok(Word::new(out))
}

/// [`decode`] writing into a caller-owned buffer.
pub fn decode_into(params: &ChannelParams, z: &[Symbol], out: &mut Vec<Symbol>) -> Result<()> {
    out.clear();
    match z.first() {
        None => return Err(Error::InvalidWord("empty word has no run form".into())),
        Some(0) => return Err(Error::InvalidWord("word starts with 0".into())),
        Some(_) => {}
    }
    let q = params.q();
    let mut run = 0u64;
    for (k, &s) in z.iter().enumerate() {
        if u32::from(s) >= q {
            return Err(Error::InvalidWord(format!("symbol {s} is out of range for q = {q}")));
        }
        if s == 0 {
            run += 1;
            continue;
        }
        if k > 0 {
            out.resize(out.len() + decode_run(params, run).run as usize, 0);
        }
        out.push(s);
        run = 0;
    }
    out.resize(out.len() + decode_run(params, run).run as usize, 0);
    Ok(())
}

/// Decoder for `C′(n)`: keeps the length-`ℓ` prefix, shortens the zero-run
/// that follows it, then decodes the remaining segments as usual.
pub fn decode_prime(params: &ChannelParams, z: &Word) -> Result<Word> {
    params.check_word(z)?;
    let ell = params.ell() as usize;
    if z.len() < ell {
        return Err(Error::InvalidWord(format!("received word shorter than the prefix length {ell}")));
    }
    let (prefix, tail) = z.symbols().split_at(ell);
    let lead = tail.iter().take_while(|&&s| s == 0).count();
    let mut out = prefix.to_vec();
    out.resize(ell + decode_run(params, lead as u64).run as usize, 0);
    let body = RunForm::new(decode_segments(params, &segments_of(tail)))?.to_word();
    out.extend_from_slice(body.symbols());
    Ok(Word::new(out))
}
