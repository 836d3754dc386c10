//! The `(ℓ, r)`-duplication and `(ℓ, r)`-0-insertion channels.
//!
//! Both channels act position by position: after input position `i` they
//! insert `c_i ∈ {0, .., r}` copies of something. The duplication channel
//! copies the length-`ℓ` substring ending at `i` (only for `i ≥ ℓ`); the
//! 0-insertion channel inserts blocks `0^ℓ` after every position.
//!
//! Output sets can be computed two ways. [`Backend::Enumerate`] walks every
//! insertion pattern and is model-agnostic; it is the reference. The
//! [`Backend::RunArithmetic`] path works on zero-runs: each run of `u` zeros
//! with `a` active positions (the symbol heading the run plus its zeros)
//! can grow to any of `u, u + ℓ, .., u + a·r·ℓ`, independently of the other
//! runs. The duplication channel is handled there through `φ_ℓ`, where it
//! becomes 0-insertion with the first `ℓ − 1` positions frozen.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::weighted::WeightedIndex;
use rand_distr::Distribution;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::transform::{phi, phi_inverse};
use crate::word::{ChannelParams, Symbol, Word};

/// Which of the two equivalent channel descriptions to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Model {
    Duplication,
    ZeroInsertion,
}

impl Model {
    /// Number of leading positions after which nothing can be inserted.
    pub(crate) fn frozen_prefix(self, params: &ChannelParams) -> usize {
        match self {
            Model::Duplication => params.ell() as usize - 1,
            Model::ZeroInsertion => 0,
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Model::Duplication => "dup",
            Model::ZeroInsertion => "zero",
        })
    }
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dup" | "duplication" => Ok(Model::Duplication),
            "zero" | "zero-insertion" | "0-insertion" => Ok(Model::ZeroInsertion),
            _ => Err(Error::InvalidArgument(format!("unknown channel model `{s}` (expected dup|zero)"))),
        }
    }
}

/// Per-position insertion counts `c_1, .., c_n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InsertionPattern {
    counts: Vec<u32>,
}

impl InsertionPattern {
    pub fn new(counts: Vec<u32>) -> Self {
        InsertionPattern { counts }
    }

    pub fn zeros(len: usize) -> Self {
        InsertionPattern { counts: vec![0; len] }
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().map(|&c| u64::from(c)).sum()
    }

    /// Checks the pattern against a word length and a bound on each count.
    /// `bound` is `r`, or the sampling cap when `r` is unbounded.
    pub fn validate(&self, len: usize, bound: Option<u32>, frozen: usize) -> Result<()> {
        if self.counts.len() != len {
            return Err(Error::InvalidPattern(format!(
                "pattern has {} entries but the word has length {len}",
                self.counts.len()
            )));
        }
        for (i, &c) in self.counts.iter().enumerate() {
            if let Some(b) = bound {
                if c > b {
                    return Err(Error::InvalidPattern(format!("count {c} at position {} exceeds {b}", i + 1)));
                }
            }
            if i < frozen && c != 0 {
                return Err(Error::InvalidPattern(format!(
                    "position {} precedes the first full length-{} window",
                    i + 1,
                    frozen + 1
                )));
            }
        }
        Ok(())
    }
}

/// Inserts `c_i` blocks `0^ℓ` immediately after position `i`.
pub fn apply_zero_insertion(params: &ChannelParams, x: &Word, pattern: &InsertionPattern) -> Result<Word> {
    params.check_word(x)?;
    pattern.validate(x.len(), params.r().finite(), 0)?;
    let ell = params.ell() as usize;
    let mut out = Vec::with_capacity(x.len() + ell * pattern.total() as usize);
    for (&s, &c) in x.symbols().iter().zip(pattern.counts()) {
        out.push(s);
        out.resize(out.len() + ell * c as usize, 0);
    }
    Ok(Word::new(out))
}

/// Inserts `c_i` copies of the original substring `x̃_{i−ℓ+1} .. x̃_i` after
/// position `i`. Counts for `i < ℓ` must be zero.
pub fn apply_duplication(params: &ChannelParams, xt: &Word, pattern: &InsertionPattern) -> Result<Word> {
    params.check_word(xt)?;
    let ell = params.ell() as usize;
    pattern.validate(xt.len(), params.r().finite(), ell - 1)?;
    let src = xt.symbols();
    let mut out = Vec::with_capacity(xt.len() + ell * pattern.total() as usize);
    for (i, (&s, &c)) in src.iter().zip(pattern.counts()).enumerate() {
        out.push(s);
        if c > 0 {
            let window = &src[i + 1 - ell..=i];
            for _ in 0..c {
                out.extend_from_slice(window);
            }
        }
    }
    Ok(Word::new(out))
}

pub fn apply(params: &ChannelParams, x: &Word, pattern: &InsertionPattern, model: Model) -> Result<Word> {
    match model {
        Model::Duplication => apply_duplication(params, x, pattern),
        Model::ZeroInsertion => apply_zero_insertion(params, x, pattern),
    }
}

/// Law of the per-position insertion counts.
#[derive(Clone, Debug, Default, PartialEq)]
pub enum CountLaw {
    /// Uniform on `{0, .., bound}`.
    #[default]
    Uniform,
    /// Explicit probabilities for `0, .., bound`; all must be positive.
    Weights(Vec<f64>),
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SampleConfig {
    /// Largest count drawn when `r` is unbounded.
    pub cap: Option<u32>,
    pub law: CountLaw,
}

/// Seeded random channel. Successive calls to [`ChannelSampler::transmit`]
/// draw from one stream, so a fixed seed fixes the whole output sequence.
pub struct ChannelSampler {
    params: ChannelParams,
    model: Model,
    bound: u32,
    counts: WeightedIndex<f64>,
    rng: ChaCha8Rng,
}

impl ChannelSampler {
    pub fn new(params: ChannelParams, model: Model, seed: u64, config: &SampleConfig) -> Result<Self> {
        let bound = match (params.r(), config.cap) {
            (crate::word::Repetition::Finite(r), _) => r,
            (crate::word::Repetition::Unbounded, Some(cap)) => cap,
            (crate::word::Repetition::Unbounded, None) => {
                return Err(Error::UnboundedRepetition("sampling without an explicit cap"))
            }
        };
        let weights = match &config.law {
            CountLaw::Uniform => vec![1.0; bound as usize + 1],
            CountLaw::Weights(w) => {
                if w.len() != bound as usize + 1 {
                    return Err(Error::InvalidArgument(format!(
                        "count law needs {} probabilities, got {}",
                        bound + 1,
                        w.len()
                    )));
                }
                if w.iter().any(|&p| !(p > 0.0 && p.is_finite())) {
                    return Err(Error::InvalidArgument("count probabilities must be strictly positive".into()));
                }
                let total: f64 = w.iter().sum();
                if (total - 1.0).abs() > 1e-9 {
                    return Err(Error::InvalidArgument(format!("count probabilities sum to {total}, not 1")));
                }
                w.clone()
            }
        };
        let counts = WeightedIndex::new(weights).map_err(|e| Error::InvalidArgument(e.to_string()))?;
        Ok(ChannelSampler { params, model, bound, counts, rng: ChaCha8Rng::seed_from_u64(seed) })
    }

    pub fn draw_pattern(&mut self, len: usize) -> InsertionPattern {
        let frozen = self.model.frozen_prefix(&self.params);
        let counts = (0..len)
            .map(|i| if i < frozen { 0 } else { self.counts.sample(&mut self.rng) as u32 })
            .collect();
        InsertionPattern::new(counts)
    }

    pub fn transmit(&mut self, x: &Word) -> Result<Word> {
        let pattern = self.draw_pattern(x.len());
        pattern.validate(x.len(), Some(self.bound), self.model.frozen_prefix(&self.params))?;
        // Patterns under an explicit cap exceed nothing the channel could do,
        // so the capped word goes straight through the insertion routines.
        let capped = ChannelParams::new(
            self.params.q(),
            self.params.ell(),
            crate::word::Repetition::Finite(self.bound.max(1)),
        )?;
        apply(&capped, x, &pattern, self.model)
    }
}

/// One random channel output for `x`.
pub fn sample_output(params: &ChannelParams, x: &Word, model: Model, seed: u64, config: &SampleConfig) -> Result<Word> {
    ChannelSampler::new(*params, model, seed, config)?.transmit(x)
}

/// Limits on exhaustive output-set enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Largest allowed `|x|·r·ℓ`, the width of the output-length range.
    pub max_extra_len: u128,
    pub max_set: u128,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_extra_len: 64, max_set: 10_000_000 }
    }
}

/// How an output set is computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Backend {
    /// Walk every insertion pattern, deduplicating prefixes level by level.
    Enumerate,
    /// Per-run arithmetic progressions.
    RunArithmetic,
}

/// All outputs a word can produce.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OutputSet {
    pub words: BTreeSet<Word>,
    pub source: Word,
    pub params: ChannelParams,
    pub model: Model,
}

impl OutputSet {
    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.words.contains(w)
    }
}

fn check_extra_len(params: &ChannelParams, x: &Word, r: u32, budget: &Budget) -> Result<()> {
    let extra = x.len() as u128 * u128::from(r) * u128::from(params.ell());
    if extra > budget.max_extra_len {
        return Err(Error::BudgetExceeded { what: "output length range", size: extra, limit: budget.max_extra_len });
    }
    Ok(())
}

/// Exact output set using the default backend for the model: run
/// arithmetic for 0-insertion, pattern enumeration for duplication.
pub fn output_set(params: &ChannelParams, x: &Word, model: Model) -> Result<OutputSet> {
    let backend = match model {
        Model::ZeroInsertion => Backend::RunArithmetic,
        Model::Duplication => Backend::Enumerate,
    };
    output_set_with(params, x, model, backend, &Budget::default())
}

pub fn output_set_with(
    params: &ChannelParams,
    x: &Word,
    model: Model,
    backend: Backend,
    budget: &Budget,
) -> Result<OutputSet> {
    let r = params.finite_r("output set enumeration")?;
    params.check_word(x)?;
    check_extra_len(params, x, r, budget)?;
    let words = match backend {
        Backend::Enumerate => enumerate_outputs(params, x, model, r, budget)?,
        Backend::RunArithmetic => {
            let base = match model {
                Model::ZeroInsertion => x.clone(),
                Model::Duplication => phi(params, x),
            };
            let profile = RunProfile::new(&base, model.frozen_prefix(params));
            let size = profile.output_count(r, params.ell());
            if size > budget.max_set {
                return Err(Error::BudgetExceeded { what: "output set", size, limit: budget.max_set });
            }
            let outs = profile.outputs(r, params.ell());
            match model {
                Model::ZeroInsertion => outs,
                Model::Duplication => outs.iter().map(|y| phi_inverse(params, y)).collect(),
            }
        }
    };
    Ok(OutputSet { words, source: x.clone(), params: *params, model })
}

fn enumerate_outputs(params: &ChannelParams, x: &Word, model: Model, r: u32, budget: &Budget) -> Result<BTreeSet<Word>> {
    let ell = params.ell() as usize;
    let frozen = model.frozen_prefix(params);
    let src = x.symbols();
    let mut level: HashSet<Vec<Symbol>> = HashSet::from([Vec::new()]);
    for (i, &s) in src.iter().enumerate() {
        let max_c = if i < frozen { 0 } else { r as usize };
        let insert: Vec<Symbol> = match model {
            Model::ZeroInsertion => vec![0; ell],
            Model::Duplication if i < frozen => Vec::new(),
            Model::Duplication => src[i + 1 - ell..=i].to_vec(),
        };
        let mut next = HashSet::with_capacity(level.len() * (max_c + 1));
        for prefix in &level {
            let mut cur = prefix.clone();
            cur.push(s);
            for _ in 0..max_c {
                next.insert(cur.clone());
                cur.extend_from_slice(&insert);
            }
            next.insert(cur);
        }
        if next.len() as u128 > budget.max_set {
            return Err(Error::BudgetExceeded { what: "output set", size: next.len() as u128, limit: budget.max_set });
        }
        level = next;
    }
    Ok(level.into_iter().map(Word::new).collect())
}

/// Calls `visit` once for every distinct output of `x` without collecting
/// them; returns how many there were.
pub fn for_each_output<F: FnMut(&[Symbol])>(params: &ChannelParams, x: &Word, model: Model, mut visit: F) -> Result<u64> {
    let r = params.finite_r("output set enumeration")?;
    params.check_word(x)?;
    let base = match model {
        Model::ZeroInsertion => x.clone(),
        Model::Duplication => phi(params, x),
    };
    let profile = RunProfile::new(&base, model.frozen_prefix(params));
    let progs: Vec<RunProgression> = (0..profile.runs.len()).map(|k| profile.progression(k, r, params.ell())).collect();
    let mut buf = Vec::with_capacity(progs.iter().map(|p| p.end + 1).sum());
    let mut mapped = Vec::new();
    let mut count = 0u64;
    let mut emit = |w: &[Symbol]| {
        count += 1;
        match model {
            Model::ZeroInsertion => visit(w),
            Model::Duplication => {
                mapped.clear();
                mapped.extend_from_slice(w);
                crate::transform::phi_inverse_in_place(params, &mut mapped);
                visit(&mapped);
            }
        }
    };
    walk_runs(&profile.symbols, &progs, 0, &mut buf, &mut emit);
    Ok(count)
}

fn walk_runs(symbols: &[Symbol], progs: &[RunProgression], k: usize, buf: &mut Vec<Symbol>, emit: &mut impl FnMut(&[Symbol])) {
    let mark = buf.len();
    let prog = progs[k];
    buf.resize(mark + prog.start, 0);
    let mut u = prog.start;
    loop {
        match symbols.get(k) {
            None => emit(buf),
            Some(&sigma) => {
                buf.push(sigma);
                walk_runs(symbols, progs, k + 1, buf, emit);
                buf.pop();
            }
        }
        if u + prog.step > prog.end {
            break;
        }
        u += prog.step;
        buf.resize(mark + u, 0);
    }
    buf.truncate(mark);
}

/// `true` iff `x` and `y` can produce a common output.
pub fn confusable(params: &ChannelParams, x: &Word, y: &Word, model: Model) -> Result<bool> {
    confusable_with(params, x, y, model, Backend::RunArithmetic, &Budget::default())
}

pub fn confusable_with(
    params: &ChannelParams,
    x: &Word,
    y: &Word,
    model: Model,
    backend: Backend,
    budget: &Budget,
) -> Result<bool> {
    let r = params.finite_r("confusability")?;
    params.check_word(x)?;
    params.check_word(y)?;
    match backend {
        Backend::Enumerate => {
            let a = output_set_with(params, x, model, backend, budget)?;
            let b = output_set_with(params, y, model, backend, budget)?;
            Ok(!a.words.is_disjoint(&b.words))
        }
        Backend::RunArithmetic => {
            let frozen = model.frozen_prefix(params);
            let (a, b) = match model {
                Model::ZeroInsertion => (RunProfile::new(x, frozen), RunProfile::new(y, frozen)),
                Model::Duplication => {
                    (RunProfile::new(&phi(params, x), frozen), RunProfile::new(&phi(params, y), frozen))
                }
            };
            Ok(a.confusable(&b, r, params.ell()))
        }
    }
}

/// Run lengths `σ 0^u` can grow to: `u, u + ℓ, .., u + (u+1)·r·ℓ`.
pub fn reachable_runs(params: &ChannelParams, run: usize) -> Result<RunProgression> {
    let r = params.finite_r("reachable runs")? as usize;
    let ell = params.ell() as usize;
    Ok(RunProgression { start: run, step: ell, end: run + (run + 1) * r * ell })
}

/// An arithmetic progression `start, start + step, .., end` of run lengths.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RunProgression {
    pub start: usize,
    pub step: usize,
    pub end: usize,
}

impl RunProgression {
    pub fn contains(&self, u: usize) -> bool {
        u >= self.start && u <= self.end && (u - self.start).is_multiple_of(self.step)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> {
        (self.start..=self.end).step_by(self.step)
    }
}

/// Zero-runs of a word together with how many positions of each run can
/// receive insertions.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) struct RunProfile {
    /// Nonzero symbols in order.
    symbols: Vec<Symbol>,
    /// `runs[0]` is the leading zero-run; `runs[k]` follows `symbols[k-1]`.
    runs: Vec<usize>,
    active: Vec<usize>,
}

impl RunProfile {
    pub(crate) fn new(w: &Word, frozen: usize) -> Self {
        let mut symbols = Vec::new();
        let mut runs = vec![0usize];
        let mut active = vec![0usize];
        for (pos, &s) in w.symbols().iter().enumerate() {
            if s != 0 {
                symbols.push(s);
                runs.push(0);
                active.push(0);
            } else {
                *runs.last_mut().unwrap() += 1;
            }
            if pos >= frozen {
                *active.last_mut().unwrap() += 1;
            }
        }
        RunProfile { symbols, runs, active }
    }

    pub(crate) fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub(crate) fn output_count(&self, r: u32, _ell: u32) -> u128 {
        self.active
            .iter()
            .map(|&a| a as u128 * u128::from(r) + 1)
            .fold(1u128, |acc, k| acc.saturating_mul(k))
    }

    fn progression(&self, k: usize, r: u32, ell: u32) -> RunProgression {
        let step = ell as usize;
        RunProgression { start: self.runs[k], step, end: self.runs[k] + self.active[k] * r as usize * step }
    }

    pub(crate) fn outputs(&self, r: u32, ell: u32) -> BTreeSet<Word> {
        let progs: Vec<RunProgression> = (0..self.runs.len()).map(|k| self.progression(k, r, ell)).collect();
        let mut partial: Vec<Vec<Symbol>> = progs[0].iter().map(|u| vec![0; u]).collect();
        for (k, &sigma) in self.symbols.iter().enumerate() {
            let prog = progs[k + 1];
            let mut next = Vec::with_capacity(partial.len() * (prog.iter().count()));
            for prefix in &partial {
                for u in prog.iter() {
                    let mut w = prefix.clone();
                    w.push(sigma);
                    w.resize(w.len() + u, 0);
                    next.push(w);
                }
            }
            partial = next;
        }
        partial.into_iter().map(Word::new).collect()
    }

    pub(crate) fn confusable(&self, other: &RunProfile, r: u32, ell: u32) -> bool {
        if self.symbols != other.symbols {
            return false;
        }
        (0..self.runs.len()).all(|k| {
            let a = self.progression(k, r, ell);
            let b = other.progression(k, r, ell);
            a.start % a.step == b.start % b.step && a.start <= b.end && b.start <= a.end
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::Repetition;

    fn w(s: &str) -> Word {
        Word::parse(s, 10).unwrap()
    }

    fn pat(c: &[u32]) -> InsertionPattern {
        InsertionPattern::new(c.to_vec())
    }

    fn words(set: &OutputSet) -> Vec<String> {
        set.words.iter().map(|w| w.to_text(10)).collect()
    }

    #[test]
    fn zero_insertion_examples() {
        let p = ChannelParams::finite(3, 1, 2).unwrap();
        let y = apply_zero_insertion(&p, &w("1211021"), &pat(&[0, 1, 2, 0, 1, 0, 0])).unwrap();
        assert_eq!(y, w("12010010021"));
        assert_eq!(apply_zero_insertion(&p, &w("1211021"), &InsertionPattern::zeros(7)).unwrap(), w("1211021"));
        let p2 = ChannelParams::finite(2, 2, 1).unwrap();
        assert_eq!(apply_zero_insertion(&p2, &w("11"), &pat(&[1, 0])).unwrap(), w("1001"));
    }

    #[test]
    fn duplication_examples() {
        let p1 = ChannelParams::finite(3, 1, 2).unwrap();
        let y = apply_duplication(&p1, &w("1012212"), &pat(&[0, 1, 2, 0, 1, 0, 0])).unwrap();
        assert_eq!(y, w("10011122212"));
        let p3 = ChannelParams::finite(3, 3, 2).unwrap();
        let y3 = apply_duplication(&p3, &w("1012212"), &pat(&[0, 0, 0, 1, 0, 2, 0])).unwrap();
        assert_eq!(y3, w("1012012212212212"));
        assert_eq!(y3.len(), 16);
        assert_eq!(apply_duplication(&p3, &w("1012212"), &InsertionPattern::zeros(7)).unwrap(), w("1012212"));
    }

    #[test]
    fn duplication_and_zero_insertion_commute_with_phi() {
        let p3 = ChannelParams::finite(3, 3, 2).unwrap();
        let y3 = apply_duplication(&p3, &w("1012212"), &pat(&[0, 0, 0, 1, 0, 2, 0])).unwrap();
        let z = apply_zero_insertion(&p3, &w("1011200"), &pat(&[0, 0, 0, 1, 0, 2, 0])).unwrap();
        assert_eq!(phi(&p3, &y3), z);
        assert_eq!(z, w("1011000200000000"));
    }

    #[test]
    fn pattern_errors() {
        let p = ChannelParams::finite(2, 2, 1).unwrap();
        assert!(matches!(
            apply_zero_insertion(&p, &w("11"), &pat(&[1])),
            Err(Error::InvalidPattern(_))
        ));
        assert!(matches!(
            apply_zero_insertion(&p, &w("11"), &pat(&[2, 0])),
            Err(Error::InvalidPattern(_))
        ));
        assert!(matches!(
            apply_duplication(&p, &w("11"), &pat(&[1, 0])),
            Err(Error::InvalidPattern(_))
        ));
        assert!(apply_duplication(&p, &w("11"), &pat(&[0, 1])).is_ok());
    }

    #[test]
    fn sampling_stays_in_fan_out() {
        let p = ChannelParams::finite(2, 1, 1).unwrap();
        for seed in 0..20 {
            let y = sample_output(&p, &w("1"), Model::ZeroInsertion, seed, &SampleConfig::default()).unwrap();
            assert!(y == w("1") || y == w("10"));
        }
        let a = sample_output(&p, &w("111"), Model::ZeroInsertion, 7, &SampleConfig::default()).unwrap();
        let b = sample_output(&p, &w("111"), Model::ZeroInsertion, 7, &SampleConfig::default()).unwrap();
        assert_eq!(a, b);
        assert!((3..=6).contains(&a.len()));
    }

    #[test]
    fn sampled_lengths_within_exhaustive_range() {
        let p = ChannelParams::finite(3, 1, 2).unwrap();
        let x = w("1012212");
        let all = output_set(&p, &x, Model::Duplication).unwrap();
        let lens: Vec<usize> = all.words.iter().map(Word::len).collect();
        assert_eq!(lens.iter().min(), Some(&7));
        assert_eq!(lens.iter().max(), Some(&21));
        let mut sampler = ChannelSampler::new(p, Model::Duplication, 3, &SampleConfig::default()).unwrap();
        for _ in 0..200 {
            let y = sampler.transmit(&x).unwrap();
            assert!(all.contains(&y));
        }
    }

    #[test]
    fn sampling_config_errors() {
        let inf = ChannelParams::unbounded(2, 1).unwrap();
        assert!(matches!(
            sample_output(&inf, &w("1"), Model::ZeroInsertion, 0, &SampleConfig::default()),
            Err(Error::UnboundedRepetition(_))
        ));
        let capped = SampleConfig { cap: Some(3), law: CountLaw::Uniform };
        let y = sample_output(&inf, &w("11"), Model::ZeroInsertion, 0, &capped).unwrap();
        assert!(y.len() <= 8);
        let p = ChannelParams::finite(2, 1, 2).unwrap();
        let bad = SampleConfig { cap: None, law: CountLaw::Weights(vec![0.5, 0.5, 0.0]) };
        assert!(ChannelSampler::new(p, Model::ZeroInsertion, 0, &bad).is_err());
        let short = SampleConfig { cap: None, law: CountLaw::Weights(vec![0.5, 0.5]) };
        assert!(ChannelSampler::new(p, Model::ZeroInsertion, 0, &short).is_err());
        let ok = SampleConfig { cap: None, law: CountLaw::Weights(vec![0.2, 0.3, 0.5]) };
        assert!(ChannelSampler::new(p, Model::ZeroInsertion, 0, &ok).is_ok());
    }

    #[test]
    fn output_set_examples() {
        let p = ChannelParams::finite(2, 1, 1).unwrap();
        let s = output_set(&p, &w("10"), Model::ZeroInsertion).unwrap();
        assert_eq!(words(&s), ["10", "100", "1000"]);
        let s1 = output_set(&p, &w("1"), Model::ZeroInsertion).unwrap();
        assert_eq!(words(&s1), ["1", "10"]);
        let brute = output_set_with(&p, &w("101"), Model::ZeroInsertion, Backend::Enumerate, &Budget::default()).unwrap();
        let runs = output_set_with(&p, &w("101"), Model::ZeroInsertion, Backend::RunArithmetic, &Budget::default()).unwrap();
        assert_eq!(brute.words, runs.words);
        // runs: 1 0^{1..3} then 1 0^{0..1}
        assert_eq!(brute.len(), 6);
    }

    #[test]
    fn output_set_refuses_unbounded_and_large() {
        let inf = ChannelParams::unbounded(2, 1).unwrap();
        assert!(matches!(output_set(&inf, &w("1"), Model::ZeroInsertion), Err(Error::UnboundedRepetition(_))));
        let p = ChannelParams::finite(2, 2, 2).unwrap();
        let long = Word::new(vec![1; 17]);
        assert!(matches!(output_set(&p, &long, Model::ZeroInsertion), Err(Error::BudgetExceeded { .. })));
        let tight = Budget { max_extra_len: 64, max_set: 10 };
        assert!(matches!(
            output_set_with(&p, &w("1111"), Model::ZeroInsertion, Backend::RunArithmetic, &tight),
            Err(Error::BudgetExceeded { .. })
        ));
        assert!(matches!(
            output_set_with(&p, &w("1111"), Model::ZeroInsertion, Backend::Enumerate, &tight),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn single_segment_fan_out_matches_progression() {
        for (q, ell, r) in [(2, 1, 1), (3, 2, 2), (2, 3, 1), (4, 1, 3)] {
            let p = ChannelParams::finite(q, ell, r).unwrap();
            for u in 0..6 {
                let set = output_set_with(&p, &Word::block(1, u), Model::ZeroInsertion, Backend::Enumerate, &Budget::default())
                    .unwrap();
                let runs: Vec<usize> = set.words.iter().map(|y| y.len() - 1).collect();
                let expected: Vec<usize> = reachable_runs(&p, u).unwrap().iter().collect();
                assert_eq!(runs, expected, "q={q} ell={ell} r={r} u={u}");
            }
        }
    }

    #[test]
    fn streamed_outputs_match_output_set() {
        for (q, ell, r) in [(2, 1, 1), (3, 1, 2), (2, 2, 1), (3, 2, 2), (2, 3, 2)] {
            let p = ChannelParams::finite(q, ell, r).unwrap();
            for x in crate::word::LexWords::new(q as Symbol, 5, false) {
                for model in [Model::ZeroInsertion, Model::Duplication] {
                    let mut seen = Vec::new();
                    let n = for_each_output(&p, &x, model, |z| seen.push(Word::from(z))).unwrap();
                    let set = output_set(&p, &x, model).unwrap();
                    assert_eq!(n as usize, seen.len());
                    let streamed: BTreeSet<Word> = seen.into_iter().collect();
                    assert_eq!(streamed.len(), set.len(), "duplicates for {x:?}");
                    assert_eq!(streamed, set.words);
                }
            }
        }
    }

    #[test]
    fn confusable_examples() {
        let p = ChannelParams::finite(2, 1, 1).unwrap();
        for model in [Model::ZeroInsertion, Model::Duplication] {
            assert!(!confusable(&p, &w("1"), &w("100"), Model::ZeroInsertion).unwrap());
            assert!(confusable(&p, &w("10"), &w("100"), Model::ZeroInsertion).unwrap());
            assert!(confusable(&p, &w("1101"), &w("1101"), model).unwrap());
        }
        let inf = ChannelParams::new(2, 1, Repetition::Unbounded).unwrap();
        assert!(confusable(&inf, &w("1"), &w("1"), Model::ZeroInsertion).is_err());
    }

    #[test]
    fn leading_zero_runs_are_handled() {
        let p = ChannelParams::finite(2, 1, 1).unwrap();
        let brute = output_set_with(&p, &w("001"), Model::ZeroInsertion, Backend::Enumerate, &Budget::default()).unwrap();
        let runs = output_set_with(&p, &w("001"), Model::ZeroInsertion, Backend::RunArithmetic, &Budget::default()).unwrap();
        assert_eq!(brute.words, runs.words);
        let e = output_set(&p, &Word::empty(), Model::ZeroInsertion).unwrap();
        assert_eq!(e.words.into_iter().collect::<Vec<_>>(), vec![Word::empty()]);
    }
}
