//! Line-oriented helpers shared by the text formats.

use thiserror::Error;

use crate::formula::{parse, Formula};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct SerialError {
    pub line: usize,
    pub message: String,
}

pub(crate) struct Lines<'a> {
    inner: std::iter::Peekable<std::iter::Enumerate<std::str::Lines<'a>>>,
    pub(crate) last: usize,
}

impl<'a> Lines<'a> {
    pub(crate) fn new(text: &'a str) -> Self {
        Lines {
            inner: text.lines().enumerate().peekable(),
            last: 0,
        }
    }

    pub(crate) fn next(&mut self) -> Result<(usize, &'a str), SerialError> {
        loop {
            match self.inner.next() {
                Some((i, l)) => {
                    self.last = i + 1;
                    let t = l.trim();
                    if t.is_empty() || t.starts_with('#') {
                        continue;
                    }
                    return Ok((i + 1, t));
                }
                None => {
                    return Err(SerialError {
                        line: self.last + 1,
                        message: "unexpected end of input".into(),
                    })
                }
            }
        }
    }

    pub(crate) fn finish(&mut self) -> Result<(), SerialError> {
        match self.next() {
            Ok((line, _)) => Err(SerialError {
                line,
                message: "trailing content".into(),
            }),
            Err(_) => Ok(()),
        }
    }
}

pub(crate) fn bad(line: usize, message: impl Into<String>) -> SerialError {
    SerialError {
        line,
        message: message.into(),
    }
}

pub(crate) fn header_count(lines: &mut Lines<'_>, key: &str) -> Result<usize, SerialError> {
    let (line, l) = lines.next()?;
    let mut parts = l.split_whitespace();
    if parts.next() != Some(key) {
        return Err(bad(line, format!("expected `{key} <count>`")));
    }
    let count = parts
        .next()
        .and_then(|c| c.parse().ok())
        .ok_or_else(|| bad(line, format!("expected `{key} <count>`")))?;
    if parts.next().is_some() {
        return Err(bad(line, "unexpected tokens"));
    }
    Ok(count)
}

pub(crate) fn parse_formula_table(lines: &mut Lines<'_>) -> Result<Vec<Formula>, SerialError> {
    let count = header_count(lines, "formulas")?;
    let mut out = Vec::with_capacity(count.min(1 << 16));
    for i in 0..count {
        let (line, l) = lines.next()?;
        let (idx, text) = l
            .split_once(char::is_whitespace)
            .ok_or_else(|| bad(line, "expected `<index> <formula>`"))?;
        if idx.parse::<usize>().ok() != Some(i) {
            return Err(bad(line, format!("expected formula index {i}")));
        }
        out.push(parse(text).map_err(|e| bad(line, e.to_string()))?);
    }
    Ok(out)
}
