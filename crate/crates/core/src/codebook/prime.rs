//! The code `C′(n) = (A_q^ℓ × B̄ × B*) ∩ {length ≤ n}` for the channel that
//! never inserts after the first `ℓ − 1` symbols and puts no restriction on
//! the first symbol: an arbitrary length-`ℓ` prefix, then a zero-run of
//! admissible length, then block concatenations.

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use super::blocks::{admissible_run, block_lengths};
use super::count::CountTable;
use super::Codebook;
use crate::error::{Error, Result};
use crate::word::{segments_of, ChannelParams, LexWords, Word};

#[derive(Clone, Debug)]
pub struct CodePrime {
    params: ChannelParams,
    n: usize,
    tail: CountTable,
}

/// Builds `C′(n)`. Only defined for `n ≥ ℓ`.
pub fn code_prime(params: &ChannelParams, n: usize) -> Result<CodePrime> {
    let ell = params.ell() as usize;
    if n < ell {
        return Err(Error::InvalidArgument(format!("C'(n) needs n >= ell = {ell}, got n = {n}")));
    }
    Ok(CodePrime { params: *params, n, tail: CountTable::new(params, n - ell) })
}

impl CodePrime {
    pub fn params(&self) -> &ChannelParams {
        &self.params
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn contains(&self, w: &Word) -> bool {
        let ell = self.params.ell() as usize;
        if w.len() < ell || w.len() > self.n || self.params.check_word(w).is_err() {
            return false;
        }
        let tail = &w.symbols()[ell..];
        let lead = tail.iter().take_while(|&&s| s == 0).count();
        admissible_run(&self.params, lead as u64).is_some()
            && segments_of(tail)
                .iter()
                .all(|s| admissible_run(&self.params, s.run as u64).is_some())
    }

    /// `|C′(n)| = q^ℓ · Σ_{L} N(n − ℓ − (L − 1))`.
    pub fn size(&self) -> BigUint {
        let room = self.n - self.params.ell() as usize;
        let tails: BigUint = block_lengths(&self.params, room as u64 + 1)
            .iter()
            .map(|b| self.tail.cumulative(room - b.run() as usize))
            .sum();
        BigUint::from(self.params.q()).pow(self.params.ell()) * tails
    }

    /// All members, sorted by length then lexicographically.
    pub fn enumerate(&self, budget: u64) -> Result<Vec<Word>> {
        let size = self.size();
        if size > BigUint::from(budget) {
            return Err(Error::BudgetExceeded {
                what: "codebook",
                size: size.to_u128().unwrap_or(u128::MAX),
                limit: u128::from(budget),
            });
        }
        let ell = self.params.ell() as usize;
        let room = self.n - ell;
        let mut bodies: Vec<Vec<u16>> = vec![Vec::new()];
        if room > 0 {
            let cb = Codebook::new(self.params, room)?;
            bodies.extend(cb.enumerate(budget)?.into_iter().map(Word::into_symbols));
        }
        let mut out = Vec::with_capacity(size.to_usize().unwrap_or(0));
        for prefix in LexWords::new(self.params.q() as u16, ell, false) {
            for b in block_lengths(&self.params, room as u64 + 1) {
                let lead = b.run() as usize;
                for body in bodies.iter().filter(|body| body.len() + lead <= room) {
                    let mut w = prefix.symbols().to_vec();
                    w.resize(ell + lead, 0);
                    w.extend_from_slice(body);
                    out.push(Word::new(w));
                }
            }
        }
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        if BigUint::from(out.len()) != size {
            return Err(Error::Invariant("C' enumeration disagrees with its count".into()));
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::Repetition;

    /// Reference: test every word of length `ℓ..=n` against the definition.
    fn brute_size(params: &ChannelParams, n: usize) -> usize {
        let cp = code_prime(params, n).unwrap();
        (params.ell() as usize..=n)
            .flat_map(|len| LexWords::new(params.q() as u16, len, false))
            .filter(|w| cp.contains(w))
            .count()
    }

    #[test]
    fn small_cases() {
        let p = ChannelParams::finite(2, 1, 1).unwrap();
        let cp = code_prime(&p, 3).unwrap();
        let words: Vec<String> = cp.enumerate(100).unwrap().iter().map(|w| w.to_text(2)).collect();
        assert_eq!(words, ["0", "1", "01", "11", "000", "011", "100", "111"]);
        assert_eq!(cp.size(), BigUint::from(8u32));
    }

    #[test]
    fn minimal_member_has_length_ell() {
        for ell in 1..=3 {
            let p = ChannelParams::finite(2, ell, 1).unwrap();
            let cp = code_prime(&p, 6).unwrap();
            let shortest = cp.enumerate(10_000).unwrap().into_iter().map(|w| w.len()).min();
            assert_eq!(shortest, Some(ell as usize));
            assert!(code_prime(&p, ell as usize - 1).is_err());
        }
    }

    #[test]
    fn count_matches_definition() {
        for (q, ell, r) in [(2, 1, 1), (2, 2, 1), (3, 1, 2), (2, 3, 2)] {
            for rep in [Repetition::Finite(r), Repetition::Unbounded] {
                let p = ChannelParams::new(q, ell, rep).unwrap();
                for n in ell as usize..=8 {
                    let cp = code_prime(&p, n).unwrap();
                    assert_eq!(cp.size(), BigUint::from(brute_size(&p, n)), "{p} n={n}");
                    assert_eq!(BigUint::from(cp.enumerate(1_000_000).unwrap().len()), cp.size());
                }
            }
        }
    }
}
