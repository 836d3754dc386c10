use std::fs::File;
use std::io::{BufRead, BufWriter, Write};

use num_bigint::BigUint;
use serde::Serialize;

use dupzero_core::capacity::{capacity_table, grid, CapacityRow};
use dupzero_core::channel::{ChannelSampler, SampleConfig};
use dupzero_core::codebook::{block_lengths, greedy_trace, Codebook};
use dupzero_core::oracle::{brute_zero_error_check, build_graph, max_independent_set};
use dupzero_core::{
    cw_capacity, decode, decode_prime, omega_star, phi, phi_inverse, ChannelParams, Repetition, RunForm, Segment, Word,
};

use crate::args::{CodeArgs, Command, FigureKind, Format, VerifyCheck};
use crate::error::CliError;
use crate::io::{data_lines, parse_word, read_code_file, write_words, Header};

pub fn run(command: Command, format: Format, input: impl BufRead, out: &mut impl Write) -> Result<(), CliError> {
    match command {
        Command::Blocks { params, n } => blocks(params.params()?, n, format, out),
        Command::Enumerate { code, out: path, budget } => {
            let cb = codebook(&code)?;
            let words = cb.enumerate(budget)?;
            let header = Header { params: *cb.params(), n: cb.n(), w: cb.weight() };
            match path {
                Some(path) => {
                    let mut file = BufWriter::new(File::create(path)?);
                    writeln!(file, "{}", header.render())?;
                    write_words(&mut file, header.params.q(), &words)?;
                    file.flush()?;
                }
                None => {
                    writeln!(out, "{}", header.render())?;
                    write_words(out, header.params.q(), &words)?;
                }
            }
            Ok(())
        }
        Command::Count { code, table } => count(&code, table, format, out),
        Command::Rank { code, words } => {
            let cb = codebook(&code)?;
            let q = cb.params().q();
            for line in args_or_lines(words, input) {
                let w = parse_word(&line?, q)?;
                writeln!(out, "{}", cb.rank(&w)?)?;
            }
            Ok(())
        }
        Command::Unrank { code, indices } => {
            let cb = codebook(&code)?;
            for line in args_or_lines(indices, input) {
                let line = line?;
                let k: BigUint = line
                    .trim()
                    .parse()
                    .map_err(|_| CliError::Usage(format!("`{}` is not a non-negative integer", line.trim())))?;
                writeln!(out, "{}", cb.unrank(&k)?.to_text(cb.params().q()))?;
            }
            Ok(())
        }
        Command::Decode { params, prime } => {
            let p = params.params()?;
            for line in data_lines(input) {
                let z = parse_word(&line?, p.q())?;
                let x = if prime { decode_prime(&p, &z)? } else { decode(&p, &z)? };
                writeln!(out, "{}", x.to_text(p.q()))?;
            }
            Ok(())
        }
        Command::Transform { params, inverse } => {
            let p = params.params()?;
            for line in data_lines(input) {
                let w = parse_word(&line?, p.q())?;
                let t = if inverse { phi_inverse(&p, &w) } else { phi(&p, &w) };
                writeln!(out, "{}", t.to_text(p.q()))?;
            }
            Ok(())
        }
        Command::Simulate { params, seed, model, copies, cap } => {
            let p = params.params()?;
            let config = SampleConfig { cap, ..SampleConfig::default() };
            let mut sampler = ChannelSampler::new(p, model, seed, &config)?;
            for line in data_lines(input) {
                let x = parse_word(&line?, p.q())?;
                for _ in 0..copies {
                    writeln!(out, "{}", sampler.transmit(&x)?.to_text(p.q()))?;
                }
            }
            Ok(())
        }
        Command::Capacity { params, tol } => {
            let row = dupzero_core::capacity::capacity_row(&params.params()?, tol)?;
            emit(&[row], format, out)
        }
        Command::CwCapacity { params, omega, points, tol } => cw(params.params()?, omega, points, tol, format, out),
        Command::Verify { check } => verify(check, out),
        Command::Figure { which } => figure(which, format, out),
    }
}

fn codebook(code: &CodeArgs) -> Result<Codebook, CliError> {
    let p = code.params.params()?;
    Ok(match code.w {
        Some(w) => Codebook::with_weight(p, code.n, w)?,
        None => Codebook::new(p, code.n)?,
    })
}

/// Positional arguments when given, stdin data lines otherwise.
fn args_or_lines(args: Vec<String>, input: impl BufRead) -> Box<dyn Iterator<Item = std::io::Result<String>>> {
    if args.is_empty() {
        let lines: Vec<_> = data_lines(input).collect();
        Box::new(lines.into_iter())
    } else {
        Box::new(args.into_iter().map(Ok))
    }
}

/// Writes rows as CSV with a header, a JSON array, or `key=value` text lines.
fn emit<T: Serialize>(rows: &[T], format: Format, out: &mut impl Write) -> Result<(), CliError> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            for row in rows {
                w.serialize(row)?;
            }
            w.flush()?;
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, rows)?;
            writeln!(out)?;
        }
        Format::Text => {
            for row in rows {
                let serde_json::Value::Object(map) = serde_json::to_value(row)? else {
                    unreachable!("rows serialize as maps")
                };
                let fields: Vec<String> = map
                    .iter()
                    .map(|(k, v)| match v {
                        serde_json::Value::String(s) => format!("{k}={s}"),
                        other => format!("{k}={other}"),
                    })
                    .collect();
                writeln!(out, "{}", fields.join(" "))?;
            }
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct BlockRow {
    class: u32,
    level: u32,
    len: u64,
    run: u64,
}

fn blocks(p: ChannelParams, n: u64, format: Format, out: &mut impl Write) -> Result<(), CliError> {
    let rows: Vec<BlockRow> = block_lengths(&p, n)
        .iter()
        .map(|b| BlockRow { class: b.class, level: b.level, len: b.len, run: b.run() })
        .collect();
    emit(&rows, format, out)
}

#[derive(Serialize)]
struct CountRow {
    n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    w: Option<usize>,
    count: String,
}

fn count(code: &CodeArgs, table: bool, format: Format, out: &mut impl Write) -> Result<(), CliError> {
    let cb = codebook(code)?;
    let t = cb.table();
    let size_at = |m: usize| match code.w {
        Some(w) => t.code_size_weight_at(m, w),
        None => t.cumulative(m) - 1u32,
    };
    let ms: Vec<usize> = if table { (1..=code.n).collect() } else { vec![code.n] };
    if format == Format::Text && !table {
        writeln!(out, "{}", cb.size())?;
        return Ok(());
    }
    let rows: Vec<CountRow> = ms.into_iter().map(|m| CountRow { n: m, w: code.w, count: size_at(m).to_string() }).collect();
    emit(&rows, format, out)
}

#[derive(Serialize)]
struct CwRow {
    q: u32,
    ell: u32,
    r: String,
    omega: f64,
    rho_omega: f64,
    c0_omega: f64,
}

fn cw(
    p: ChannelParams,
    omega: Option<f64>,
    points: Option<usize>,
    tol: f64,
    format: Format,
    out: &mut impl Write,
) -> Result<(), CliError> {
    let row = |omega: f64, rho_omega: f64, c0_omega: f64| CwRow {
        q: p.q(),
        ell: p.ell(),
        r: p.r().to_string(),
        omega,
        rho_omega,
        c0_omega,
    };
    let rows = match (omega, points) {
        (Some(omega), _) => {
            let c = cw_capacity(&p, omega, tol)?;
            vec![row(c.omega, c.rho_omega, c.c0_omega)]
        }
        (None, Some(k)) => {
            if k < 2 {
                return Err(CliError::Usage("--points needs at least 2".into()));
            }
            (0..k)
                .map(|i| {
                    let c = cw_capacity(&p, i as f64 / (k - 1) as f64, tol)?;
                    Ok(row(c.omega, c.rho_omega, c.c0_omega))
                })
                .collect::<Result<_, CliError>>()?
        }
        (None, None) => {
            let s = omega_star(&p, tol)?;
            vec![row(s.omega, s.rho, s.c0)]
        }
    };
    emit(&rows, format, out)
}

fn verify(check: VerifyCheck, out: &mut impl Write) -> Result<(), CliError> {
    match check {
        VerifyCheck::ZeroError { params, code, model } => {
            let file = read_code_file(&code)?;
            let p = match file.header {
                Some(h) => h.params,
                None => params.params()?,
            };
            let words: Vec<Word> = file.lines.iter().map(|l| parse_word(l, p.q())).collect::<Result<_, _>>()?;
            let report = brute_zero_error_check(&p, &words, model)?;
            match report.witness {
                None => {
                    writeln!(out, "ok: {} codewords, {} pairs checked", words.len(), report.pairs_checked)?;
                    Ok(())
                }
                Some((a, b)) => Err(CliError::Check(format!(
                    "not zero-error: {} and {} share a channel output",
                    a.to_text(p.q()),
                    b.to_text(p.q())
                ))),
            }
        }
        VerifyCheck::Optimal { params, n, model } => {
            let p = params.params()?;
            let g = build_graph(&p, n, model)?;
            let mis = max_independent_set(&g)?;
            let dp = Codebook::new(p, n)?.size();
            writeln!(out, "mis={} code={} vertices={} edges={}", mis.size, dp, g.len(), g.edge_count())?;
            if BigUint::from(mis.size) == dp {
                Ok(())
            } else {
                Err(CliError::Check(format!("maximum independent set {} differs from |C(n)| = {dp}", mis.size)))
            }
        }
    }
}

#[derive(Serialize)]
struct GreedyRow {
    class: u32,
    len: u64,
    run: u64,
    selected: bool,
    covered_by: u64,
}

#[derive(Serialize)]
struct WeightTwoRow {
    u: usize,
    v: usize,
    word: String,
    codeword: bool,
}

fn figure(which: FigureKind, format: Format, out: &mut impl Write) -> Result<(), CliError> {
    // Figures are CSV unless JSON was asked for explicitly.
    let format = if format == Format::Json { Format::Json } else { Format::Csv };
    match which {
        FigureKind::Greedy { params, n } => {
            let p = params.params()?;
            let rows: Vec<GreedyRow> = greedy_trace(&p, n)?
                .iter()
                .map(|s| GreedyRow { class: s.class, len: s.len, run: s.len - 1, selected: s.selected(), covered_by: s.covered_by })
                .collect();
            emit(&rows, format, out)
        }
        FigureKind::WeightTwo { params, n } => {
            let p = params.params()?;
            let cb = Codebook::with_weight(p, n, 2)?;
            let mut rows = Vec::new();
            for u in 1..n {
                for v in 1..=n - u {
                    let rf = RunForm::new(vec![Segment::new(1, u - 1), Segment::new(1, v - 1)])?;
                    let w = rf.to_word();
                    rows.push(WeightTwoRow { u, v, word: w.to_text(p.q()), codeword: cb.contains(&w) });
                }
            }
            emit(&rows, format, out)
        }
        FigureKind::Capacity { qs, ells, r_max, tol } => {
            if r_max == 0 {
                return Err(CliError::Usage("--r-max must be at least 1".into()));
            }
            let reps: Vec<Repetition> = (1..=r_max).map(Repetition::Finite).collect();
            let mut rows: Vec<CapacityRow> = Vec::new();
            for q in qs {
                rows.extend(capacity_table(&grid(q, ells.iter().copied(), &reps)?, tol)?);
            }
            emit(&rows, format, out)
        }
    }
}
