//! The block alphabet `B_{q,ℓ,r}`: a nonzero symbol followed by a zero-run
//! of length `L(i, j) − 1`, where
//!
//! ```text
//! L(i, 0) = i,   L(i, j+1) = L(i, j)·(rℓ + 1) + ℓ,   i ∈ {1..ℓ}, j ≥ 0
//! ```
//!
//! which is the integer form of `((ri + 1)(rℓ + 1)^j − 1) / r`. With `r`
//! unbounded only the level-0 blocks `L = 1..ℓ` remain.

use serde::{Deserialize, Serialize};

use crate::channel::reachable_runs;
use crate::error::{Error, Result};
use crate::word::{ChannelParams, Repetition, Symbol, Word};

/// One element `σ 0^{L(i,j) − 1}` of the block alphabet.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BlockId {
    pub sigma: Symbol,
    /// Residue class `i ∈ {1, .., ℓ}`.
    pub class: u32,
    /// Level `j ≥ 0`.
    pub level: u32,
}

impl BlockId {
    pub fn len(&self, params: &ChannelParams) -> u64 {
        block_len(params, self.class, self.level).expect("block length overflows u64")
    }

    pub fn word(&self, params: &ChannelParams) -> Word {
        Word::block(self.sigma, self.len(params) as usize - 1)
    }
}

/// A block length together with its `(i, j)` index, shared by all `σ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BlockLen {
    pub len: u64,
    pub class: u32,
    pub level: u32,
}

impl BlockLen {
    pub fn run(&self) -> u64 {
        self.len - 1
    }
}

/// `L(i, j)`, or `None` on overflow. For unbounded `r` only `j = 0` exists.
pub fn block_len(params: &ChannelParams, class: u32, level: u32) -> Option<u64> {
    let ell = u64::from(params.ell());
    match params.r() {
        Repetition::Unbounded => (level == 0).then_some(u64::from(class)),
        Repetition::Finite(r) => {
            let factor = u64::from(r).checked_mul(ell)?.checked_add(1)?;
            let mut len = u64::from(class);
            for _ in 0..level {
                len = len.checked_mul(factor)?.checked_add(ell)?;
            }
            Some(len)
        }
    }
}

/// Distinct block lengths `≤ max_len`, sorted ascending.
pub fn block_lengths(params: &ChannelParams, max_len: u64) -> Vec<BlockLen> {
    let ell = params.ell();
    let mut out = Vec::new();
    for class in 1..=ell {
        match params.r() {
            Repetition::Unbounded => {
                if u64::from(class) <= max_len {
                    out.push(BlockLen { len: u64::from(class), class, level: 0 });
                }
            }
            Repetition::Finite(r) => {
                let factor = u64::from(r) * u64::from(ell) + 1;
                let mut len = Some(u64::from(class));
                let mut level = 0;
                while let Some(l) = len.filter(|&l| l <= max_len) {
                    out.push(BlockLen { len: l, class, level });
                    len = l.checked_mul(factor).and_then(|v| v.checked_add(u64::from(ell)));
                    level += 1;
                }
            }
        }
    }
    out.sort();
    out
}

/// All blocks of length `≤ n`, ordered by `(L, σ)`.
pub fn blocks_up_to(params: &ChannelParams, n: u64) -> Vec<BlockId> {
    let mut out: Vec<(u64, BlockId)> = Vec::new();
    for bl in block_lengths(params, n) {
        for sigma in 1..params.q() {
            out.push((bl.len, BlockId { sigma: sigma as Symbol, class: bl.class, level: bl.level }));
        }
    }
    out.sort_by_key(|&(len, b)| (len, b.sigma));
    out.into_iter().map(|(_, b)| b).collect()
}

/// The `(i, j)` index of a zero-run if `run + 1` is a block length.
pub fn admissible_run(params: &ChannelParams, run: u64) -> Option<BlockLen> {
    let ell = u64::from(params.ell());
    let len = run.checked_add(1)?;
    let class = ((len - 1) % ell + 1) as u32;
    match params.r() {
        Repetition::Unbounded => (len <= ell).then_some(BlockLen { len, class, level: 0 }),
        Repetition::Finite(r) => {
            let factor = u64::from(r) * ell + 1;
            let mut cur = u64::from(class);
            let mut level = 0;
            while cur < len {
                cur = cur.checked_mul(factor).and_then(|v| v.checked_add(ell))?;
                level += 1;
            }
            (cur == len).then_some(BlockLen { len, class, level })
        }
    }
}

/// One candidate run visited by the greedy sweep.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GreedyStep {
    pub class: u32,
    /// Block length `u + 1` of the candidate.
    pub len: u64,
    /// Length of the selected block whose fan-out covers this candidate;
    /// equal to `len` when the candidate itself was selected.
    pub covered_by: u64,
}

impl GreedyStep {
    pub fn selected(&self) -> bool {
        self.len == self.covered_by
    }
}

/// Runs the greedy sweep on every residue class: list blocks by length,
/// take the shortest one not yet covered, strike out everything it can
/// produce at the channel output, repeat. Visits every block length up to
/// `max_len`.
pub fn greedy_trace(params: &ChannelParams, max_len: u64) -> Result<Vec<GreedyStep>> {
    params.finite_r("greedy construction")?;
    let ell = u64::from(params.ell());
    let mut steps = Vec::new();
    for class in 1..=params.ell() {
        let mut cover: Vec<Option<u64>> = vec![None; max_len as usize + 1];
        let mut len = u64::from(class);
        while len <= max_len {
            let covered_by = match cover[len as usize] {
                Some(c) => c,
                None => {
                    for out_run in reachable_runs(params, (len - 1) as usize)?.iter() {
                        let out_len = out_run as u64 + 1;
                        if out_len > max_len {
                            break;
                        }
                        cover[out_len as usize].get_or_insert(len);
                    }
                    len
                }
            };
            steps.push(GreedyStep { class, len, covered_by });
            len += ell;
        }
    }
    steps.sort_by_key(|s| (s.len, s.class));
    Ok(steps)
}

/// Block lengths picked by the greedy sweep, ascending.
pub fn greedy_block_construction(params: &ChannelParams, max_len: u64) -> Result<Vec<BlockLen>> {
    let mut levels = vec![0u32; params.ell() as usize + 1];
    greedy_trace(params, max_len)?
        .into_iter()
        .filter(GreedyStep::selected)
        .map(|s| {
            let level = &mut levels[s.class as usize];
            let b = BlockLen { len: s.len, class: s.class, level: *level };
            *level += 1;
            Ok(b)
        })
        .collect::<Result<Vec<_>>>()
        .and_then(|v| {
            if v.windows(2).all(|w| w[0].len < w[1].len) {
                Ok(v)
            } else {
                Err(Error::Invariant("greedy sweep produced duplicate lengths".into()))
            }
        })
}
