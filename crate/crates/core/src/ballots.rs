//! Plain-text ballot files.
//!
//! ```text
//! # comments start with '#'
//! candidates: a b c d
//! k: 2
//! 3: a > {b, c}
//! d > a
//! ```
//!
//! Each ballot line is `[<count>:] <group> (> <group>)*`, where a group is a
//! single id or a braced, comma-separated set of ids. Candidates a ballot
//! leaves out form its final equivalence class.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::profile::{Candidate, CandidateSet, Profile, WeakOrder};

fn is_id_char(c: char) -> bool {
    !c.is_whitespace() && !matches!(c, '{' | '}' | ',' | '>' | ':' | '#')
}

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
    line: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str, line: usize) -> Self {
        Cursor { text, pos: 0, line }
    }

    fn column(&self) -> usize {
        self.text[..self.pos].chars().count() + 1
    }

    fn err(&self, message: impl Into<String>) -> Error {
        Error::parse(self.line, self.column(), message)
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn eat(&mut self, expected: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(expected) {
            self.pos += expected.len_utf8();
            true
        } else {
            false
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos >= self.text.len()
    }

    /// Reads an identifier, returning it with its starting column.
    fn ident(&mut self) -> Result<(&'a str, usize)> {
        self.skip_ws();
        let start = self.pos;
        let column = self.column();
        while let Some(c) = self.peek() {
            if is_id_char(c) {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
        if self.pos == start {
            return Err(self.err("expected a candidate id"));
        }
        Ok((&self.text[start..self.pos], column))
    }
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(idx) => &line[..idx],
        None => line,
    }
}

/// Splits `<count>:` off a ballot line, if present.
fn split_count(line: &str, line_no: usize) -> Result<(usize, &str, usize)> {
    let trimmed = line.trim_start();
    let lead = line.len() - trimmed.len();
    let digits = trimmed.chars().take_while(|c| c.is_ascii_digit()).count();
    if digits > 0 && trimmed[digits..].trim_start().starts_with(':') {
        let count: usize = trimmed[..digits]
            .parse()
            .map_err(|_| Error::parse(line_no, lead + 1, "multiplicity too large"))?;
        if count == 0 {
            return Err(Error::parse(
                line_no,
                lead + 1,
                "multiplicity must be at least 1",
            ));
        }
        let colon = trimmed.find(':').expect("checked above");
        let rest_offset = lead + colon + 1;
        return Ok((count, &line[rest_offset..], rest_offset));
    }
    Ok((1, line, 0))
}

fn parse_ballot(
    body: &str,
    offset_cols: usize,
    line_no: usize,
    candidates: &CandidateSet,
) -> Result<WeakOrder> {
    let mut cur = Cursor::new(body, line_no);
    let shift = |e: Error| match e {
        Error::Parse {
            line,
            column,
            message,
        } => Error::Parse {
            line,
            column: column + offset_cols,
            message,
        },
        other => other,
    };
    let mut seen = vec![false; candidates.len()];
    let mut classes: Vec<Vec<Candidate>> = Vec::new();
    let resolve = |name: &str, column: usize, seen: &mut Vec<bool>| -> Result<Candidate> {
        let c = candidates.get(name).ok_or_else(|| {
            Error::parse(
                line_no,
                column + offset_cols,
                format!("unknown candidate `{name}`"),
            )
        })?;
        if std::mem::replace(&mut seen[c.index()], true) {
            return Err(Error::parse(
                line_no,
                column + offset_cols,
                format!("candidate `{name}` appears twice in this ballot"),
            ));
        }
        Ok(c)
    };
    loop {
        let mut class = Vec::new();
        if cur.eat('{') {
            loop {
                let (name, column) = cur.ident().map_err(shift)?;
                class.push(resolve(name, column, &mut seen)?);
                if cur.eat(',') {
                    continue;
                }
                if cur.eat('}') {
                    break;
                }
                return Err(shift(cur.err("expected `,` or `}`")));
            }
        } else {
            let (name, column) = cur.ident().map_err(shift)?;
            class.push(resolve(name, column, &mut seen)?);
        }
        classes.push(class);
        if cur.at_end() {
            break;
        }
        if !cur.eat('>') {
            return Err(shift(cur.err("expected `>`")));
        }
    }
    WeakOrder::new(classes, candidates.len())
}

/// Parses a ballot file into a profile.
pub fn parse_ballots(text: &str) -> Result<Profile> {
    let mut candidates: Option<CandidateSet> = None;
    let mut k: Option<(usize, usize, usize)> = None;
    let mut voters = Vec::new();
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let line = strip_comment(raw);
        if line.trim().is_empty() {
            continue;
        }
        let trimmed = line.trim_start();
        let lead = line.len() - trimmed.len();
        if let Some(rest) = trimmed.strip_prefix("candidates:") {
            if candidates.is_some() {
                return Err(Error::parse(
                    line_no,
                    lead + 1,
                    "candidate list given twice",
                ));
            }
            if !voters.is_empty() {
                return Err(Error::parse(
                    line_no,
                    lead + 1,
                    "candidate list must precede ballots",
                ));
            }
            let mut names = Vec::new();
            let mut cur = Cursor::new(rest, line_no);
            while !cur.at_end() {
                let (name, column) = match cur.ident() {
                    Ok(found) => found,
                    Err(_) => {
                        return Err(Error::parse(
                            line_no,
                            lead + "candidates:".len() + cur.column(),
                            "invalid candidate id",
                        ))
                    }
                };
                if names.contains(&name) {
                    return Err(Error::parse(
                        line_no,
                        lead + "candidates:".len() + column,
                        format!("duplicate candidate id `{name}`"),
                    ));
                }
                names.push(name);
            }
            candidates = Some(
                CandidateSet::new(names)
                    .map_err(|e| Error::parse(line_no, lead + 1, e.to_string()))?,
            );
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix("k:") {
            if k.is_some() {
                return Err(Error::parse(
                    line_no,
                    lead + 1,
                    "committee size given twice",
                ));
            }
            let column = lead + 3 + (rest.len() - rest.trim_start().len());
            let value: usize = rest.trim().parse().map_err(|_| {
                Error::parse(line_no, column, "committee size must be a positive integer")
            })?;
            k = Some((value, line_no, column));
            continue;
        }
        let Some(set) = candidates.as_ref() else {
            return Err(Error::parse(
                line_no,
                lead + 1,
                "ballot before `candidates:` header",
            ));
        };
        let (count, body, offset) = split_count(line, line_no)?;
        let order = parse_ballot(body, offset, line_no, set)?;
        voters.extend(std::iter::repeat_n(order, count));
    }

    let candidates = candidates
        .ok_or_else(|| Error::parse(last_line.max(1), 1, "missing `candidates:` header"))?;
    let (k, k_line, k_col) =
        k.ok_or_else(|| Error::parse(last_line.max(1), 1, "missing `k:` header"))?;
    if k == 0 || k > candidates.len() {
        return Err(Error::parse(
            k_line,
            k_col,
            format!("k = {k} out of range 1..={}", candidates.len()),
        ));
    }
    if voters.is_empty() {
        return Err(Error::parse(last_line.max(1), 1, "no ballots"));
    }
    Profile::new(candidates, voters, k)
}

fn write_order(out: &mut String, profile: &Profile, order: &WeakOrder) {
    let explicit = if order.explicit_classes() == 0 {
        order.classes()
    } else {
        &order.classes()[..order.explicit_classes()]
    };
    for (idx, class) in explicit.iter().enumerate() {
        if idx > 0 {
            out.push_str(" > ");
        }
        if class.len() == 1 {
            out.push_str(profile.name(class[0]));
        } else {
            out.push('{');
            let names: Vec<&str> = class.iter().map(|&c| profile.name(c)).collect();
            out.push_str(&names.join(", "));
            out.push('}');
        }
    }
}

/// Writes a profile in normalized ballot-file form. Consecutive identical
/// ballots are merged into one counted line; voter order is preserved.
pub fn serialize_ballots(profile: &Profile) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "candidates: {}",
        profile.candidates().names().join(" ")
    );
    let _ = writeln!(out, "k: {}", profile.k());
    let voters = profile.voters();
    let mut i = 0;
    while i < voters.len() {
        let mut j = i + 1;
        while j < voters.len() && voters[j] == voters[i] {
            j += 1;
        }
        if j - i > 1 {
            let _ = write!(out, "{}: ", j - i);
        }
        write_order(&mut out, profile, &voters[i]);
        out.push('\n');
        i = j;
    }
    out
}

/// One ballot in file syntax, e.g. `a > {b, c}`.
pub fn format_order(profile: &Profile, order: &WeakOrder) -> String {
    let mut out = String::new();
    write_order(&mut out, profile, order);
    out
}
