//! Text formats for families and deletion sequences.
//!
//! A family block is a header `n K` followed by one member per line as
//! comma-separated one-based elements. Lines starting with `#` and blank
//! lines are ignored. A sequence file is a family block (the target), then
//! `delete a,b,...` lines in order, then an optional `kind ...` line.

use std::fmt::Write as _;

use ucsets::sequences::{DeletionSequence, SequenceKind};
use ucsets::{Family, SetMask};

use crate::CliError;

/// Tokens accepted for the empty set on a member line.
const EMPTY_TOKENS: [&str; 3] = ["{}", "∅", "empty"];

#[derive(Debug, Clone, Copy, Default)]
pub struct ParseOptions {
    /// Drop empty-set members with a warning instead of failing.
    pub strip_empty: bool,
}

/// A parsed document plus the warnings raised along the way.
#[derive(Debug)]
pub struct Parsed<T> {
    pub value: T,
    pub warnings: Vec<String>,
}

fn parse_error(line: usize, message: impl Into<String>) -> CliError {
    CliError::Parse {
        line,
        message: message.into(),
    }
}

fn is_skipped(line: &str) -> bool {
    let t = line.trim();
    t.is_empty() || t.starts_with('#')
}

fn parse_header(line: usize, text: &str) -> Result<usize, CliError> {
    let mut words = text.split_whitespace();
    match (words.next(), words.next(), words.next()) {
        (Some("n"), Some(k), None) => k
            .parse()
            .map_err(|_| parse_error(line, format!("bad universe size `{k}`"))),
        _ => Err(parse_error(
            line,
            format!("expected header `n <integer>`, found `{}`", text.trim()),
        )),
    }
}

/// Elements of a comma-separated list; `None` for the empty-set token.
pub fn parse_elements(text: &str) -> Result<Option<Vec<usize>>, String> {
    let t = text.trim();
    if EMPTY_TOKENS.contains(&t) {
        return Ok(None);
    }
    let t = t.trim_start_matches('{').trim_end_matches('}');
    t.split(',')
        .map(|e| {
            let e = e.trim();
            e.parse::<usize>().map_err(|_| format!("bad element `{e}`"))
        })
        .collect::<Result<Vec<_>, _>>()
        .map(Some)
}

/// A nonempty set on `[n]` from a command-line value such as `1,3`.
pub fn parse_set(text: &str, n: usize) -> Result<SetMask, CliError> {
    match parse_elements(text).map_err(CliError::Usage)? {
        None => Err(CliError::Usage("the empty set is not allowed here".into())),
        Some(e) => Ok(SetMask::nonempty(&e, n)?),
    }
}

struct BlockParser<'a> {
    lines: Vec<(usize, &'a str)>,
    pos: usize,
    options: ParseOptions,
    warnings: Vec<String>,
}

impl<'a> BlockParser<'a> {
    fn new(text: &'a str, options: ParseOptions) -> Self {
        let lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !is_skipped(l))
            .map(|(k, l)| (k + 1, l))
            .collect();
        BlockParser {
            lines,
            pos: 0,
            options,
            warnings: Vec::new(),
        }
    }

    fn peek(&self) -> Option<(usize, &'a str)> {
        self.lines.get(self.pos).copied()
    }

    fn starts_with_word(text: &str, word: &str) -> bool {
        text.split_whitespace().next() == Some(word)
    }

    /// Header plus member lines up to the next header or sequence line.
    fn family(&mut self) -> Result<Family, CliError> {
        let (line, text) = self
            .peek()
            .ok_or_else(|| parse_error(0, "missing header `n <integer>`"))?;
        let n = parse_header(line, text)?;
        self.pos += 1;
        let mut masks: Vec<SetMask> = Vec::new();
        while let Some((line, text)) = self.peek() {
            if ["n", "delete", "kind"]
                .iter()
                .any(|w| Self::starts_with_word(text, w))
            {
                break;
            }
            self.pos += 1;
            let mask = match parse_elements(text).map_err(|m| parse_error(line, m))? {
                None if self.options.strip_empty => {
                    self.warnings
                        .push(format!("line {line}: dropped the empty set"));
                    continue;
                }
                None => {
                    return Err(parse_error(
                        line,
                        "the empty set is not a member of A (use --strip-empty to drop it)",
                    ))
                }
                Some(e) => {
                    SetMask::from_elements(&e, n).map_err(|e| parse_error(line, e.to_string()))?
                }
            };
            if masks.contains(&mask) {
                self.warnings
                    .push(format!("line {line}: duplicate member {mask} collapsed"));
                continue;
            }
            masks.push(mask);
        }
        Family::from_masks(n, masks).map_err(|e| parse_error(line, e.to_string()))
    }

    fn finish(&self) -> Result<(), CliError> {
        match self.peek() {
            None => Ok(()),
            Some((line, text)) => Err(parse_error(
                line,
                format!("unexpected line `{}`", text.trim()),
            )),
        }
    }
}

pub fn parse_family(text: &str, options: ParseOptions) -> Result<Parsed<Family>, CliError> {
    let mut p = BlockParser::new(text, options);
    let value = p.family()?;
    p.finish()?;
    Ok(Parsed {
        value,
        warnings: p.warnings,
    })
}

/// Consecutive family blocks, as written by `enumerate`.
pub fn parse_family_stream(
    text: &str,
    options: ParseOptions,
) -> Result<Parsed<Vec<Family>>, CliError> {
    let mut p = BlockParser::new(text, options);
    let mut value = Vec::new();
    while p.peek().is_some() {
        value.push(p.family()?);
    }
    Ok(Parsed {
        value,
        warnings: p.warnings,
    })
}

pub fn parse_sequence(
    text: &str,
    options: ParseOptions,
) -> Result<Parsed<DeletionSequence>, CliError> {
    let mut p = BlockParser::new(text, options);
    let target = p.family()?;
    let n = target.universe_size();
    let mut deletions = Vec::new();
    let mut kind = SequenceKind::Plain;
    let mut seen_kind = false;
    while let Some((line, text)) = p.peek() {
        let mut split = text.trim().splitn(2, char::is_whitespace);
        let word = split.next().unwrap_or("");
        let rest = split.next().unwrap_or("").trim();
        match word {
            "delete" if !seen_kind => {
                let e = parse_elements(rest)
                    .map_err(|m| parse_error(line, m))?
                    .ok_or_else(|| parse_error(line, "cannot delete the empty set"))?;
                deletions
                    .push(SetMask::nonempty(&e, n).map_err(|e| parse_error(line, e.to_string()))?);
            }
            "kind" if !seen_kind => {
                kind = rest.parse().map_err(|m: String| parse_error(line, m))?;
                seen_kind = true;
            }
            _ => {
                return Err(parse_error(
                    line,
                    format!("unexpected line `{}`", text.trim()),
                ))
            }
        }
        p.pos += 1;
    }
    let value = DeletionSequence::new(target, deletions, kind)
        .map_err(|e| parse_error(0, e.to_string()))?;
    Ok(Parsed {
        value,
        warnings: p.warnings,
    })
}

/// `1,3` for `{1,3}`.
pub fn render_set(m: SetMask) -> String {
    let parts: Vec<String> = m.elements().map(|e| e.to_string()).collect();
    parts.join(",")
}

pub fn render_family(f: &Family) -> String {
    let mut out = format!("n {}\n", f.universe_size());
    for m in f.iter() {
        out.push_str(&render_set(m));
        out.push('\n');
    }
    out
}

pub fn render_sequence(seq: &DeletionSequence) -> String {
    let mut out = render_family(seq.target());
    for &d in seq.deletions() {
        let _ = writeln!(out, "delete {}", render_set(d));
    }
    let _ = writeln!(out, "kind {}", seq.kind());
    out
}
