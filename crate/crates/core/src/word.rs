//! Words, channel parameters and the segment (run-form) decomposition.
//!
//! A word over `{0, .., q-1}` that starts with a nonzero symbol splits uniquely
//! into segments `σ 0^u`, a nonzero symbol followed by a (possibly empty) run
//! of zeros. The zero-insertion channel acts on each segment independently,
//! so most of the crate works on [`RunForm`] rather than on raw symbols.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported alphabet size.
pub const MAX_Q: u32 = 1 << 16;

pub type Symbol = u16;

/// Upper bound on the number of inserted blocks per position.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Repetition {
    Finite(u32),
    Unbounded,
}

impl Repetition {
    pub fn finite(self) -> Option<u32> {
        match self {
            Repetition::Finite(r) => Some(r),
            Repetition::Unbounded => None,
        }
    }

    pub fn is_unbounded(self) -> bool {
        matches!(self, Repetition::Unbounded)
    }
}

impl fmt::Display for Repetition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Repetition::Finite(r) => write!(f, "{r}"),
            Repetition::Unbounded => f.write_str("inf"),
        }
    }
}

impl FromStr for Repetition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("inf") || s == "∞" {
            return Ok(Repetition::Unbounded);
        }
        let r: u32 = s
            .parse()
            .map_err(|_| Error::InvalidParams(format!("r must be a positive integer or `inf`, got `{s}`")))?;
        if r == 0 {
            return Err(Error::InvalidParams("r must be at least 1".into()));
        }
        Ok(Repetition::Finite(r))
    }
}

/// The channel triple `(q, ell, r)`: alphabet size, duplication length and
/// the per-position repetition bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ChannelParams {
    q: u32,
    ell: u32,
    r: Repetition,
}

impl ChannelParams {
    pub fn new(q: u32, ell: u32, r: Repetition) -> Result<Self> {
        if !(2..=MAX_Q).contains(&q) {
            return Err(Error::InvalidParams(format!("q must be in 2..={MAX_Q}, got {q}")));
        }
        if ell == 0 {
            return Err(Error::InvalidParams("ell must be at least 1".into()));
        }
        if r == Repetition::Finite(0) {
            return Err(Error::InvalidParams("r must be at least 1".into()));
        }
        Ok(ChannelParams { q, ell, r })
    }

    /// Shorthand for finite `r`.
    pub fn finite(q: u32, ell: u32, r: u32) -> Result<Self> {
        Self::new(q, ell, Repetition::Finite(r))
    }

    pub fn unbounded(q: u32, ell: u32) -> Result<Self> {
        Self::new(q, ell, Repetition::Unbounded)
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    pub fn r(&self) -> Repetition {
        self.r
    }

    pub(crate) fn finite_r(&self, op: &'static str) -> Result<u32> {
        self.r.finite().ok_or(Error::UnboundedRepetition(op))
    }

    pub(crate) fn check_word(&self, w: &Word) -> Result<()> {
        match w.symbols().iter().find(|&&s| u32::from(s) >= self.q) {
            Some(s) => Err(Error::InvalidWord(format!("symbol {s} is out of range for q = {}", self.q))),
            None => Ok(()),
        }
    }
}

impl fmt::Display for ChannelParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q={} ell={} r={}", self.q, self.ell, self.r)
    }
}

/// A finite string over the channel alphabet.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Word(Vec<Symbol>);

impl Word {
    pub fn new(symbols: Vec<Symbol>) -> Self {
        Word(symbols)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// Builds a word checking every symbol against the alphabet size.
    pub fn with_alphabet(symbols: Vec<Symbol>, q: u32) -> Result<Self> {
        if let Some(s) = symbols.iter().find(|&&s| u32::from(s) >= q) {
            return Err(Error::InvalidWord(format!("symbol {s} is out of range for q = {q}")));
        }
        Ok(Word(symbols))
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn into_symbols(self) -> Vec<Symbol> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of nonzero symbols.
    pub fn weight(&self) -> usize {
        self.0.iter().filter(|&&s| s != 0).count()
    }

    /// Parses the text format: a contiguous digit string when `q <= 10`,
    /// whitespace-separated decimal symbols otherwise.
    pub fn parse(text: &str, q: u32) -> Result<Self> {
        let text = text.trim();
        let symbols = if q <= 10 {
            text.chars()
                .filter(|c| !c.is_whitespace())
                .map(|c| {
                    c.to_digit(10)
                        .map(|d| d as Symbol)
                        .ok_or_else(|| Error::InvalidWord(format!("unexpected character `{c}`")))
                })
                .collect::<Result<Vec<_>>>()?
        } else {
            text.split_whitespace()
                .map(|tok| {
                    tok.parse::<Symbol>()
                        .map_err(|_| Error::InvalidWord(format!("unexpected token `{tok}`")))
                })
                .collect::<Result<Vec<_>>>()?
        };
        Word::with_alphabet(symbols, q)
    }

    /// Renders the word in the text format used by [`Word::parse`].
    pub fn to_text(&self, q: u32) -> String {
        if q <= 10 {
            self.0.iter().map(|&s| char::from(b'0' + s as u8)).collect()
        } else {
            let parts: Vec<String> = self.0.iter().map(|s| s.to_string()).collect();
            parts.join(" ")
        }
    }

    /// `σ 0^run`.
    pub fn block(sigma: Symbol, run: usize) -> Self {
        let mut v = Vec::with_capacity(run + 1);
        v.push(sigma);
        v.resize(run + 1, 0);
        Word(v)
    }
}

impl From<Vec<Symbol>> for Word {
    fn from(v: Vec<Symbol>) -> Self {
        Word(v)
    }
}

impl From<&[Symbol]> for Word {
    fn from(v: &[Symbol]) -> Self {
        Word(v.to_vec())
    }
}

/// One `σ 0^run` segment.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Segment {
    pub sigma: Symbol,
    pub run: usize,
}

impl Segment {
    pub fn new(sigma: Symbol, run: usize) -> Self {
        Segment { sigma, run }
    }

    /// Length of the segment as a string, `1 + run`; never zero.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.run + 1
    }
}

/// Segment decomposition `σ_1 0^{u_1} ... σ_w 0^{u_w}` of a word that starts
/// with a nonzero symbol.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RunForm {
    segments: Vec<Segment>,
}

impl RunForm {
    pub fn new(segments: Vec<Segment>) -> Result<Self> {
        if segments.iter().any(|s| s.sigma == 0) {
            return Err(Error::InvalidWord("segment symbols must be nonzero".into()));
        }
        Ok(RunForm { segments })
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    /// Number of segments, which is the Hamming weight of the word.
    pub fn weight(&self) -> usize {
        self.segments.len()
    }

    /// Length of the word this run form spells.
    pub fn word_len(&self) -> usize {
        self.segments.iter().map(Segment::len).sum()
    }

    pub fn to_word(&self) -> Word {
        let mut out = Vec::with_capacity(self.word_len());
        for seg in &self.segments {
            out.push(seg.sigma);
            out.resize(out.len() + seg.run, 0);
        }
        Word(out)
    }
}

/// Decomposes a word into segments. The word must be non-empty and begin
/// with a nonzero symbol.
pub fn to_run_form(w: &Word) -> Result<RunForm> {
    match w.symbols().first() {
        None => return Err(Error::InvalidWord("empty word has no run form".into())),
        Some(0) => return Err(Error::InvalidWord("word starts with 0".into())),
        Some(_) => {}
    }
    Ok(RunForm { segments: segments_of(w.symbols()) })
}

/// Segments of `symbols` after its leading zeros.
pub(crate) fn segments_of(symbols: &[Symbol]) -> Vec<Segment> {
    let mut segments: Vec<Segment> = Vec::new();
    for &s in symbols.iter().skip_while(|&&s| s == 0) {
        match (s, segments.last_mut()) {
            (0, Some(seg)) => seg.run += 1,
            _ => segments.push(Segment::new(s, 0)),
        }
    }
    segments
}

/// Inverse of [`to_run_form`].
pub fn to_word(rf: &RunForm) -> Word {
    rf.to_word()
}

/// The space `S_q(n)`: words of length `1..=n` whose first symbol is nonzero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceSq {
    pub params: ChannelParams,
    pub n: usize,
}

impl SpaceSq {
    pub fn new(params: ChannelParams, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("S_q(n) needs n >= 1".into()));
        }
        Ok(SpaceSq { params, n })
    }

    pub fn contains(&self, w: &Word) -> bool {
        (1..=self.n).contains(&w.len())
            && w.symbols()[0] != 0
            && w.symbols().iter().all(|&s| u32::from(s) < self.params.q())
    }

    /// `|S_q(n)| = Σ_{m=1}^{n} (q-1) q^{m-1}`, saturating.
    pub fn size(&self) -> u128 {
        let q = u128::from(self.params.q());
        let mut total: u128 = 0;
        let mut layer: u128 = q - 1;
        for _ in 0..self.n {
            total = total.saturating_add(layer);
            layer = layer.saturating_mul(q);
        }
        total
    }

    /// All members in canonical order: by length, then lexicographically.
    pub fn words(&self) -> impl Iterator<Item = Word> + '_ {
        let q = self.params.q() as Symbol;
        (1..=self.n).flat_map(move |len| LexWords::new(q, len, true))
    }
}

/// Lexicographic enumeration of all words of a fixed length, optionally
/// requiring a nonzero first symbol.
pub(crate) struct LexWords {
    q: Symbol,
    current: Option<Vec<Symbol>>,
}

impl LexWords {
    pub(crate) fn new(q: Symbol, len: usize, nonzero_first: bool) -> Self {
        let mut first = vec![0; len];
        if nonzero_first {
            if len == 0 {
                return LexWords { q, current: None };
            }
            first[0] = 1;
        }
        LexWords { q, current: Some(first) }
    }
}

impl Iterator for LexWords {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        let cur = self.current.take()?;
        let mut next = cur.clone();
        let mut advanced = false;
        for pos in (0..next.len()).rev() {
            if next[pos] + 1 < self.q {
                next[pos] += 1;
                advanced = true;
                break;
            }
            next[pos] = 0;
        }
        if advanced {
            self.current = Some(next);
        }
        Some(Word(cur))
    }
}
