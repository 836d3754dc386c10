use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::blocks::block_lengths;
use crate::word::ChannelParams;

/// Exact codeword counts for `C_{q,ℓ,r}(n)`.
///
/// `exact[m]` is the number of block concatenations of length exactly `m`
/// (`exact[0] = 1` for the empty word), so that
/// `N(m) = Σ_{k ≤ m} exact[k] = 1 + (q−1)·Σ_{L ≤ m} N(m − L)` and
/// `|C(n)| = N(n) − 1`. When built with weights, `by_weight[m][w]` counts
/// concatenations of exactly `w` blocks with total length exactly `m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountTable {
    params: ChannelParams,
    n: usize,
    lengths: Vec<usize>,
    exact: Vec<BigUint>,
    cumulative: Vec<BigUint>,
    by_weight: Option<Vec<Vec<BigUint>>>,
}

impl CountTable {
    pub fn new(params: &ChannelParams, n: usize) -> Self {
        let lengths: Vec<usize> = block_lengths(params, n as u64).iter().map(|b| b.len as usize).collect();
        let mult = BigUint::from(params.q() - 1);
        let mut exact: Vec<BigUint> = Vec::with_capacity(n + 1);
        exact.push(BigUint::one());
        for m in 1..=n {
            let sum: BigUint = lengths.iter().take_while(|&&l| l <= m).map(|&l| &exact[m - l]).sum();
            exact.push(sum * &mult);
        }
        let mut cumulative = Vec::with_capacity(n + 1);
        let mut acc = BigUint::zero();
        for e in &exact {
            acc += e;
            cumulative.push(acc.clone());
        }
        CountTable { params: *params, n, lengths, exact, cumulative, by_weight: None }
    }

    /// Also tabulates counts by weight for weights `0..=max_weight`.
    pub fn with_weights(params: &ChannelParams, n: usize, max_weight: usize) -> Self {
        let mut table = Self::new(params, n);
        let mult = BigUint::from(params.q() - 1);
        let mut by_weight = vec![vec![BigUint::zero(); max_weight + 1]; n + 1];
        by_weight[0][0] = BigUint::one();
        for m in 1..=n {
            for w in 1..=max_weight.min(m) {
                let sum: BigUint = table
                    .lengths
                    .iter()
                    .take_while(|&&l| l <= m)
                    .map(|&l| &by_weight[m - l][w - 1])
                    .sum();
                by_weight[m][w] = sum * &mult;
            }
        }
        table.by_weight = Some(by_weight);
        table
    }

    pub fn params(&self) -> &ChannelParams {
        &self.params
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Distinct block lengths `≤ n`, ascending.
    pub fn block_lengths(&self) -> &[usize] {
        &self.lengths
    }

    /// `N(m)`: concatenations of length `≤ m`, including the empty word.
    pub fn cumulative(&self, m: usize) -> &BigUint {
        &self.cumulative[m]
    }

    /// Concatenations of length exactly `m`.
    pub fn exact(&self, m: usize) -> &BigUint {
        &self.exact[m]
    }

    /// `|C(n)| = N(n) − 1`.
    pub fn code_size(&self) -> BigUint {
        &self.cumulative[self.n] - 1u32
    }

    pub fn max_weight(&self) -> Option<usize> {
        self.by_weight.as_ref().map(|t| t[0].len() - 1)
    }

    /// Concatenations of exactly `w` blocks with length exactly `m`.
    /// Panics if the table was built without weights or `w` is too large.
    pub fn exact_weighted(&self, m: usize, w: usize) -> &BigUint {
        &self.by_weight.as_ref().expect("table built without weights")[m][w]
    }

    /// `|C(m; w)|`: codewords of length `≤ m` and weight `w`.
    pub fn code_size_weight_at(&self, m: usize, w: usize) -> BigUint {
        let t = self.by_weight.as_ref().expect("table built without weights");
        if w == 0 {
            return BigUint::zero();
        }
        (0..=m).map(|k| &t[k][w]).sum()
    }

    /// `|C(n; w)|`.
    pub fn code_size_weight(&self, w: usize) -> BigUint {
        self.code_size_weight_at(self.n, w)
    }
}

/// Count table for `C_{q,ℓ,r}(n)`; see [`CountTable`].
pub fn count(params: &ChannelParams, n: usize) -> CountTable {
    CountTable::new(params, n)
}
