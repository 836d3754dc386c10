//! The optimal zero-error code `C_{q,ℓ,r}(n)`: every word of length `≤ n`
//! that starts with a nonzero symbol and whose zero-runs all have lengths
//! `L(i, j) − 1`. Optionally restricted to a fixed Hamming weight.
//!
//! Codewords are ordered by length, then lexicographically. Within one
//! length a word starting with block `(σ, L)` precedes one starting with
//! `(σ', L')` iff `σ < σ'`, or `σ = σ'` and `L > L'` (the longer zero-run
//! wins, since the shorter block is followed by a nonzero symbol). This is
//! what [`Codebook::rank`] and [`Codebook::unrank`] walk.

mod blocks;
mod count;
mod prime;

pub use blocks::{
    admissible_run, block_len, block_lengths, blocks_up_to, greedy_block_construction, greedy_trace, BlockId,
    BlockLen, GreedyStep,
};
pub use count::{count, CountTable};
pub use prime::{code_prime, CodePrime};

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::word::{to_run_form, ChannelParams, SpaceSq, Symbol, Word};

/// Default cap on materialised codebooks.
pub const DEFAULT_ENUMERATION_BUDGET: u64 = 1_000_000;

#[derive(Clone, Debug)]
pub struct Codebook {
    params: ChannelParams,
    n: usize,
    weight: Option<usize>,
    table: CountTable,
}

impl Codebook {
    pub fn new(params: ChannelParams, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("codebook needs n >= 1".into()));
        }
        Ok(Codebook { params, n, weight: None, table: CountTable::new(&params, n) })
    }

    /// The constant-weight subcode `C(n; w)`.
    pub fn with_weight(params: ChannelParams, n: usize, weight: usize) -> Result<Self> {
        if n == 0 || weight == 0 {
            return Err(Error::InvalidArgument("constant-weight codebook needs n >= 1 and w >= 1".into()));
        }
        let table = CountTable::with_weights(&params, n, weight);
        Ok(Codebook { params, n, weight: Some(weight), table })
    }

    pub fn params(&self) -> &ChannelParams {
        &self.params
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn weight(&self) -> Option<usize> {
        self.weight
    }

    pub fn table(&self) -> &CountTable {
        &self.table
    }

    pub fn size(&self) -> BigUint {
        match self.weight {
            Some(w) => self.table.code_size_weight(w),
            None => self.table.code_size(),
        }
    }

    /// Membership in `C(n)` (or `C(n; w)`).
    pub fn contains(&self, w: &Word) -> bool {
        let space = SpaceSq { params: self.params, n: self.n };
        if !space.contains(w) {
            return false;
        }
        let Ok(rf) = to_run_form(w) else { return false };
        if self.weight.is_some_and(|wt| wt != rf.weight()) {
            return false;
        }
        rf.segments().iter().all(|s| admissible_run(&self.params, s.run as u64).is_some())
    }

    /// Words with exactly `rem` symbols and `blocks` blocks still to place.
    fn completions(&self, rem: usize, blocks: Option<usize>) -> BigUint {
        match blocks {
            None => self.table.exact(rem).clone(),
            Some(k) => self.table.exact_weighted(rem, k).clone(),
        }
    }

    fn layer(&self, m: usize) -> BigUint {
        self.completions(m, self.weight)
    }

    /// Completions after placing one more block of length `len`.
    fn after_block(&self, rem: usize, len: usize, blocks: Option<usize>) -> BigUint {
        match blocks {
            Some(0) => BigUint::zero(),
            _ => self.completions(rem - len, blocks.map(|k| k - 1)),
        }
    }

    /// Position of a codeword in the canonical order.
    pub fn rank(&self, w: &Word) -> Result<BigUint> {
        if !self.contains(w) {
            return Err(Error::NotCodeword(w.to_text(self.params.q())));
        }
        let mut index: BigUint = (1..w.len()).map(|m| self.layer(m)).sum();
        let lengths = self.table.block_lengths();
        let mut rem = w.len();
        let mut blocks = self.weight;
        for seg in to_run_form(w)?.segments() {
            let len = seg.len();
            let mut per_sigma = BigUint::zero();
            for &l in lengths.iter().take_while(|&&l| l <= rem) {
                let c = self.after_block(rem, l, blocks);
                if l > len {
                    index += &c;
                }
                per_sigma += c;
            }
            index += per_sigma * BigUint::from(seg.sigma - 1);
            rem -= len;
            blocks = blocks.map(|k| k - 1);
        }
        Ok(index)
    }

    /// The codeword at position `k` in the canonical order.
    pub fn unrank(&self, k: &BigUint) -> Result<Word> {
        let size = self.size();
        if *k >= size {
            return Err(Error::IndexOutOfRange { index: k.to_string(), size: size.to_string() });
        }
        let mut idx = k.clone();
        let mut len = 0;
        for m in 1..=self.n {
            let layer = self.layer(m);
            if idx < layer {
                len = m;
                break;
            }
            idx -= layer;
        }
        if len == 0 {
            return Err(Error::Invariant("rank tables do not cover the code".into()));
        }
        let lengths = self.table.block_lengths();
        let mut out: Vec<Symbol> = Vec::with_capacity(len);
        let mut rem = len;
        let mut blocks = self.weight;
        while rem > 0 {
            let options: Vec<(usize, BigUint)> = lengths
                .iter()
                .filter(|&&l| l <= rem)
                .rev()
                .map(|&l| (l, self.after_block(rem, l, blocks)))
                .collect();
            let per_sigma: BigUint = options.iter().map(|(_, c)| c).sum();
            if per_sigma.is_zero() {
                return Err(Error::Invariant(format!("no completion of length {rem}")));
            }
            let sigma = (&idx / &per_sigma)
                .to_u32()
                .filter(|&s| s < self.params.q() - 1)
                .ok_or_else(|| Error::Invariant("unrank index escaped the symbol range".into()))?;
            idx %= &per_sigma;
            let mut chosen = None;
            for (l, c) in options {
                if idx < c {
                    chosen = Some(l);
                    break;
                }
                idx -= c;
            }
            let l = chosen.ok_or_else(|| Error::Invariant("unrank index escaped the block range".into()))?;
            out.push((sigma + 1) as Symbol);
            out.resize(out.len() + l - 1, 0);
            rem -= l;
            blocks = blocks.map(|k| k - 1);
        }
        Ok(Word::new(out))
    }

    /// Every codeword in canonical order; refuses codes larger than `budget`.
    pub fn enumerate(&self, budget: u64) -> Result<Vec<Word>> {
        let size = self.size();
        if size > BigUint::from(budget) {
            return Err(Error::BudgetExceeded {
                what: "codebook",
                size: size.to_u128().unwrap_or(u128::MAX),
                limit: u128::from(budget),
            });
        }
        let mut out = Vec::with_capacity(size.to_usize().unwrap_or(0));
        let mut prefix = Vec::with_capacity(self.n);
        for m in 1..=self.n {
            self.walk(m, self.weight, &mut prefix, &mut out);
        }
        Ok(out)
    }

    fn walk(&self, rem: usize, blocks: Option<usize>, prefix: &mut Vec<Symbol>, out: &mut Vec<Word>) {
        if rem == 0 {
            if blocks.is_none_or(|k| k == 0) {
                out.push(Word::new(prefix.clone()));
            }
            return;
        }
        if blocks == Some(0) || self.completions(rem, blocks).is_zero() {
            return;
        }
        let lengths = self.table.block_lengths();
        for sigma in 1..self.params.q() {
            for &l in lengths.iter().filter(|&&l| l <= rem).rev() {
                let mark = prefix.len();
                prefix.push(sigma as Symbol);
                prefix.resize(mark + l, 0);
                self.walk(rem - l, blocks.map(|k| k - 1), prefix, out);
                prefix.truncate(mark);
            }
        }
    }
}

/// `true` iff `w ∈ C(n)`.
pub fn is_codeword(cb: &Codebook, w: &Word) -> bool {
    cb.contains(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn texts(words: &[Word], q: u32) -> Vec<String> {
        words.iter().map(|w| w.to_text(q)).collect()
    }

    /// Independent reference: all concatenations of blocks of total length
    /// `≤ n`, sorted by (length, symbols).
    fn brute_code(params: &ChannelParams, n: usize, weight: Option<usize>) -> Vec<Word> {
        let blocks: Vec<Word> = blocks_up_to(params, n as u64).iter().map(|b| b.word(params)).collect();
        let mut found = BTreeSet::new();
        let mut frontier = vec![Vec::<u16>::new()];
        while let Some(cur) = frontier.pop() {
            for b in &blocks {
                if cur.len() + b.len() <= n {
                    let mut next = cur.clone();
                    next.extend_from_slice(b.symbols());
                    found.insert(next.clone());
                    frontier.push(next);
                }
            }
        }
        let mut words: Vec<Word> = found
            .into_iter()
            .map(Word::new)
            .filter(|w| weight.is_none_or(|k| w.weight() == k))
            .collect();
        words.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        words
    }

    #[test]
    fn is_codeword_examples() {
        let p = ChannelParams::finite(2, 1, 1).unwrap();
        let cb = Codebook::new(p, 19).unwrap();
        let mut w = Word::block(1, 2).into_symbols();
        w.extend(Word::block(1, 14).into_symbols());
        assert!(is_codeword(&cb, &Word::new(w)));
        assert!(!is_codeword(&cb, &Word::parse("10", 2).unwrap()));
        assert!(!is_codeword(&cb, &Word::empty()));
        assert!(!is_codeword(&cb, &Word::parse("011", 2).unwrap()));
    }

    #[test]
    fn enumerate_examples() {
        let p = ChannelParams::finite(2, 1, 1).unwrap();
        let cb = Codebook::new(p, 3).unwrap();
        assert_eq!(texts(&cb.enumerate(100).unwrap(), 2), ["1", "11", "100", "111"]);
        assert_eq!(texts(&Codebook::new(p, 1).unwrap().enumerate(100).unwrap(), 2), ["1"]);
        let inf = ChannelParams::unbounded(2, 1).unwrap();
        let cw = Codebook::with_weight(inf, 19, 2).unwrap();
        assert_eq!(texts(&cw.enumerate(100).unwrap(), 2), ["11"]);
        assert!(matches!(
            Codebook::new(p, 30).unwrap().enumerate(1000),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn enumerate_matches_brute_force() {
        for (q, ell, r) in [(2, 1, 1), (3, 1, 2), (2, 2, 1), (3, 2, 2), (2, 3, 1)] {
            let p = ChannelParams::finite(q, ell, r).unwrap();
            for n in 1..=9 {
                let cb = Codebook::new(p, n).unwrap();
                let listed = cb.enumerate(1_000_000).unwrap();
                assert_eq!(listed, brute_code(&p, n, None), "q={q} ell={ell} r={r} n={n}");
                assert_eq!(BigUint::from(listed.len()), cb.size());
                assert!(listed.iter().all(|w| cb.contains(w)));
            }
            let n = 10;
            for wt in 1..=4 {
                let cb = Codebook::with_weight(p, n, wt).unwrap();
                assert_eq!(cb.enumerate(1_000_000).unwrap(), brute_code(&p, n, Some(wt)));
            }
        }
    }

    #[test]
    fn rank_unrank_examples() {
        let p = ChannelParams::finite(2, 1, 1).unwrap();
        let cb = Codebook::new(p, 3).unwrap();
        assert_eq!(cb.unrank(&BigUint::from(2u32)).unwrap().to_text(2), "100");
        assert_eq!(cb.rank(&Word::parse("1", 2).unwrap()).unwrap(), BigUint::zero());
        assert!(matches!(cb.unrank(&BigUint::from(4u32)), Err(Error::IndexOutOfRange { .. })));
        assert!(matches!(cb.rank(&Word::parse("10", 2).unwrap()), Err(Error::NotCodeword(_))));
    }

    #[test]
    fn rank_follows_enumeration_order() {
        for (q, ell, r) in [(2, 1, 1), (3, 2, 1), (4, 1, 2)] {
            let p = ChannelParams::finite(q, ell, r).unwrap();
            let cb = Codebook::new(p, 8).unwrap();
            for (i, w) in cb.enumerate(1_000_000).unwrap().iter().enumerate() {
                assert_eq!(cb.rank(w).unwrap(), BigUint::from(i));
                assert_eq!(&cb.unrank(&BigUint::from(i)).unwrap(), w);
            }
            let cw = Codebook::with_weight(p, 9, 3).unwrap();
            for (i, w) in cw.enumerate(1_000_000).unwrap().iter().enumerate() {
                assert_eq!(cw.rank(w).unwrap(), BigUint::from(i));
                assert_eq!(&cw.unrank(&BigUint::from(i)).unwrap(), w);
            }
        }
    }

    #[test]
    fn large_codebook_round_trip_without_materialising() {
        let p = ChannelParams::finite(2, 1, 1).unwrap();
        let cb = Codebook::new(p, 500).unwrap();
        let size = cb.size();
        for k in [BigUint::zero(), &size / 3u32, &size - 1u32] {
            let w = cb.unrank(&k).unwrap();
            assert!(cb.contains(&w));
            assert_eq!(cb.rank(&w).unwrap(), k);
        }
    }
}
