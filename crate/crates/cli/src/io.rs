use std::fs::File;
use std::io::{self, BufRead, BufReader, Write};
use std::path::Path;

use dupzero_core::{ChannelParams, Repetition, Word};

use crate::error::CliError;

/// Non-empty, non-comment lines of a reader.
pub fn data_lines(reader: impl BufRead) -> impl Iterator<Item = io::Result<String>> {
    reader.lines().filter(|line| match line {
        Ok(l) => {
            let t = l.trim();
            !t.is_empty() && !t.starts_with('#')
        }
        Err(_) => true,
    })
}

pub fn parse_word(line: &str, q: u32) -> Result<Word, CliError> {
    Word::parse(line, q).map_err(|e| CliError::Usage(format!("cannot parse `{}`: {e}", line.trim())))
}

/// Parameters recorded in a codebook file header.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Header {
    pub params: ChannelParams,
    pub n: usize,
    pub w: Option<usize>,
}

impl Header {
    pub fn render(&self) -> String {
        let mut s = format!("# q={} ell={} r={} n={}", self.params.q(), self.params.ell(), self.params.r(), self.n);
        if let Some(w) = self.w {
            s.push_str(&format!(" w={w}"));
        }
        s
    }

    /// Parses `# q=.. ell=.. r=.. n=.. [w=..]`; `None` if the line is not a header.
    pub fn parse(line: &str) -> Result<Option<Header>, CliError> {
        let Some(body) = line.trim().strip_prefix('#') else { return Ok(None) };
        let (mut q, mut ell, mut r, mut n, mut w) = (None, None, None, None, None);
        for field in body.split_whitespace() {
            let Some((key, value)) = field.split_once('=') else { return Ok(None) };
            let bad = || CliError::Usage(format!("bad header field `{field}`"));
            match key {
                "q" => q = Some(value.parse::<u32>().map_err(|_| bad())?),
                "ell" => ell = Some(value.parse::<u32>().map_err(|_| bad())?),
                "r" => r = Some(value.parse::<Repetition>().map_err(|_| bad())?),
                "n" => n = Some(value.parse::<usize>().map_err(|_| bad())?),
                "w" => w = Some(value.parse::<usize>().map_err(|_| bad())?),
                _ => return Ok(None),
            }
        }
        match (q, ell, r, n) {
            (Some(q), Some(ell), Some(r), Some(n)) => {
                Ok(Some(Header { params: ChannelParams::new(q, ell, r)?, n, w }))
            }
            _ => Ok(None),
        }
    }
}

/// A codebook file: optional header plus one word per line.
pub struct CodeFile {
    pub header: Option<Header>,
    pub lines: Vec<String>,
}

pub fn read_code_file(path: &Path) -> Result<CodeFile, CliError> {
    let reader = BufReader::new(File::open(path)?);
    let mut header = None;
    let mut lines = Vec::new();
    for line in reader.lines() {
        let line = line?;
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        if t.starts_with('#') {
            if header.is_none() {
                header = Header::parse(t)?;
            }
            continue;
        }
        lines.push(t.to_string());
    }
    Ok(CodeFile { header, lines })
}

pub fn write_words<'a>(out: &mut impl Write, q: u32, words: impl IntoIterator<Item = &'a Word>) -> io::Result<()> {
    for w in words {
        writeln!(out, "{}", w.to_text(q))?;
    }
    Ok(())
}
