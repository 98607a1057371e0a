use std::io::{self, BufWriter, Write};
use std::path::Path;

use super::{Assignment, Cnf};
use crate::error::{Error, Result};

/// Writes `c` comment lines, the `p cnf` header and one zero-terminated
/// clause per line, LF line endings.
pub fn emit_dimacs(cnf: &Cnf, out: &mut impl Write) -> io::Result<()> {
    let mut w = BufWriter::with_capacity(1 << 16, out);
    for c in cnf.comments() {
        writeln!(w, "c {c}")?;
    }
    writeln!(w, "p cnf {} {}", cnf.num_vars(), cnf.num_clauses())?;
    let mut line = String::with_capacity(128);
    for clause in cnf.clauses() {
        line.clear();
        for &l in clause {
            line.push_str(itoa(l, &mut [0u8; 12]));
            line.push(' ');
        }
        line.push_str("0\n");
        w.write_all(line.as_bytes())?;
    }
    w.flush()
}

fn itoa(v: i32, buf: &mut [u8; 12]) -> &str {
    let mut i = buf.len();
    let neg = v < 0;
    let mut u = v.unsigned_abs();
    loop {
        i -= 1;
        buf[i] = b'0' + (u % 10) as u8;
        u /= 10;
        if u == 0 {
            break;
        }
    }
    if neg {
        i -= 1;
        buf[i] = b'-';
    }
    std::str::from_utf8(&buf[i..]).expect("ascii digits")
}

pub fn write_dimacs_file(cnf: &Cnf, path: impl AsRef<Path>) -> Result<()> {
    let mut f = std::fs::File::create(path)?;
    emit_dimacs(cnf, &mut f)?;
    Ok(())
}

/// Reads a DIMACS CNF file. Comment lines are kept.
pub fn parse_dimacs(text: &str) -> Result<Cnf> {
    let mut cnf: Option<Cnf> = None;
    let mut comments = Vec::new();
    let mut declared = 0;
    let mut clause = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        if let Some(c) = t.strip_prefix('c') {
            if cnf.is_none() {
                comments.push(c.strip_prefix(' ').unwrap_or(c).to_string());
            }
            continue;
        }
        if let Some(h) = t.strip_prefix("p ") {
            let f: Vec<&str> = h.split_whitespace().collect();
            if cnf.is_some() || f.len() != 3 || f[0] != "cnf" {
                return Err(Error::parse(line_no, format!("bad header {t:?}")));
            }
            let nv = f[1]
                .parse()
                .map_err(|_| Error::parse(line_no, "bad variable count"))?;
            declared = f[2]
                .parse()
                .map_err(|_| Error::parse(line_no, "bad clause count"))?;
            cnf = Some(Cnf::new(nv));
            continue;
        }
        let cnf = cnf
            .as_mut()
            .ok_or_else(|| Error::parse(line_no, "clause before header"))?;
        for tok in t.split_whitespace() {
            let l: i32 = tok
                .parse()
                .map_err(|_| Error::parse(line_no, format!("bad literal {tok:?}")))?;
            if l == 0 {
                cnf.try_push(&clause)
                    .map_err(|e| Error::parse(line_no, e.to_string()))?;
                clause.clear();
            } else {
                clause.push(l);
            }
        }
    }
    let mut cnf = cnf.ok_or_else(|| Error::parse(0, "missing header"))?;
    if !clause.is_empty() {
        return Err(Error::parse(0, "unterminated last clause"));
    }
    if cnf.num_clauses() != declared {
        return Err(Error::parse(
            0,
            format!(
                "header declares {declared} clauses, found {}",
                cnf.num_clauses()
            ),
        ));
    }
    cnf.set_comments(comments);
    Ok(cnf)
}

/// Reads a solver model: whitespace-separated signed literals. `v`
/// prefixes, `c`/`s` lines and zeros are skipped. Every variable in
/// `1..=num_vars` must be assigned exactly once.
pub fn parse_model(text: &str, num_vars: usize) -> Result<Assignment> {
    let mut values: Vec<Option<bool>> = vec![None; num_vars];
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let t = line.trim();
        if t.starts_with('c') || t.starts_with('s') {
            continue;
        }
        let t = t.strip_prefix('v').unwrap_or(t);
        for tok in t.split_whitespace() {
            let l: i64 = tok
                .parse()
                .map_err(|_| Error::parse(line_no, format!("bad literal {tok:?}")))?;
            if l == 0 {
                continue;
            }
            let var = l.unsigned_abs() as usize;
            if var > num_vars {
                return Err(Error::parse(
                    line_no,
                    format!("variable {var} exceeds {num_vars}"),
                ));
            }
            let v = l > 0;
            match values[var - 1] {
                Some(old) if old != v => {
                    return Err(Error::parse(
                        line_no,
                        format!("variable {var} assigned both ways"),
                    ))
                }
                _ => values[var - 1] = Some(v),
            }
        }
    }
    let values = values
        .into_iter()
        .enumerate()
        .map(|(i, v)| v.ok_or(Error::IncompleteModel(i + 1)))
        .collect::<Result<Vec<bool>>>()?;
    Ok(Assignment::new(values))
}
