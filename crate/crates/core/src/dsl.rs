//! The line-oriented bound-quiver format and the string literal syntax.
//!
//! ```text
//! # comment
//! vertices 1 2 3
//! arrow a 1 2
//! arrow b 2 3
//! rel a b        # the path ab is zero
//! ```
//!
//! String literals separate letters by whitespace, mark inverses with `^-1`
//! (or a trailing `-`), and write the trivial string at `v` as `e(v)`.

use std::fmt;

use thiserror::Error;

use crate::quiver::{BoundQuiver, Quiver, QuiverError};
use crate::walks::{is_valid_string, BandDefect, BandWord, Letter, StringViolation, StringWord};

/// A position in the input; line and column are 1-based, column counts
/// characters.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SourceSpan {
    pub line: usize,
    pub column: usize,
    pub offset: usize,
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{span}: {message}")]
pub struct ParseError {
    pub span: SourceSpan,
    pub message: String,
}

struct Token<'a> {
    text: &'a str,
    span: SourceSpan,
}

fn tokens(line: &str, line_no: usize, line_offset: usize) -> Vec<Token<'_>> {
    let code = line.split('#').next().unwrap_or("");
    let mut out = Vec::new();
    let mut start: Option<usize> = None;
    for (i, ch) in code.char_indices().chain(std::iter::once((code.len(), ' '))) {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push(Token {
                    text: &code[s..i],
                    span: SourceSpan { line: line_no, column: code[..s].chars().count() + 1, offset: line_offset + s },
                });
                start = None;
            }
            _ => {}
        }
    }
    out
}

fn err(span: SourceSpan, message: impl Into<String>) -> ParseError {
    ParseError { span, message: message.into() }
}

fn quiver_err(span: SourceSpan, e: QuiverError) -> ParseError {
    err(span, e.to_string())
}

/// Parses the bound-quiver format. Relations longer than two arrows are
/// kept so that validation can report them.
pub fn parse_bound_quiver(text: &str) -> Result<BoundQuiver, ParseError> {
    let mut quiver = Quiver::new();
    let mut rels: Vec<Vec<Token<'_>>> = Vec::new();
    let mut offset = 0;
    for (i, line) in text.split_inclusive('\n').enumerate() {
        let toks = tokens(line, i + 1, offset);
        offset += line.len();
        let Some((head, args)) = toks.split_first() else {
            continue;
        };
        match head.text {
            "vertices" => {
                if args.is_empty() {
                    return Err(err(head.span, "`vertices` needs at least one name"));
                }
                for t in args {
                    quiver.add_vertex(t.text).map_err(|e| quiver_err(t.span, e))?;
                }
            }
            "arrow" => {
                let [name, src, tgt] = args else {
                    return Err(err(head.span, "expected `arrow <name> <source> <target>`"));
                };
                quiver.vertex(src.text).map_err(|e| quiver_err(src.span, e))?;
                quiver.vertex(tgt.text).map_err(|e| quiver_err(tgt.span, e))?;
                quiver.add_arrow(name.text, src.text, tgt.text).map_err(|e| quiver_err(name.span, e))?;
            }
            "rel" => {
                if args.is_empty() {
                    return Err(err(head.span, "`rel` needs at least one arrow"));
                }
                rels.push(args.iter().map(|t| Token { text: t.text, span: t.span }).collect());
            }
            other => return Err(err(head.span, format!("unknown directive `{other}`"))),
        }
    }
    let mut bq = BoundQuiver::new(quiver);
    for rel in rels {
        let mut ids = Vec::new();
        for t in &rel {
            ids.push(bq.arrow_id(t.text).map_err(|e| quiver_err(t.span, e))?);
        }
        for (k, w) in ids.windows(2).enumerate() {
            if bq.target(w[0]) != bq.source(w[1]) {
                return Err(err(
                    rel[k + 1].span,
                    format!("relation not composable: t({}) != s({})", rel[k].text, rel[k + 1].text),
                ));
            }
        }
        bq.add_relation(&ids).map_err(|e| quiver_err(rel[0].span, e))?;
    }
    Ok(bq)
}

/// Canonical text for a bound quiver; parsing it gives the same value.
pub fn print_bound_quiver(bq: &BoundQuiver) -> String {
    let mut out = String::new();
    let names: Vec<&str> = bq.vertex_ids().map(|v| bq.vertex_name(v)).collect();
    if !names.is_empty() {
        out.push_str(&format!("vertices {}\n", names.join(" ")));
    }
    for a in bq.arrow_ids() {
        out.push_str(&format!(
            "arrow {} {} {}\n",
            bq.arrow_name(a),
            bq.vertex_name(bq.source(a)),
            bq.vertex_name(bq.target(a))
        ));
    }
    for (a, b) in bq.relations() {
        out.push_str(&format!("rel {} {}\n", bq.arrow_name(a), bq.arrow_name(b)));
    }
    for g in bq.other_generators() {
        let names: Vec<&str> = g.iter().map(|&a| bq.arrow_name(a)).collect();
        out.push_str(&format!("rel {}\n", names.join(" ")));
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("empty word")]
    Empty,
    #[error("unknown arrow `{0}`")]
    UnknownArrow(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("a trivial string stands alone")]
    TrivialInsideWord,
    #[error("not a string: {0}")]
    Invalid(#[from] StringViolation),
    #[error("not a band: {0}")]
    NotBand(#[from] BandDefect),
}

fn parse_letter(bq: &BoundQuiver, tok: &str) -> Result<Letter, WordError> {
    if let Some(name) = tok.strip_suffix("^-1") {
        return bq.arrow_id(name).map(Letter::inverse).map_err(|_| WordError::UnknownArrow(name.into()));
    }
    if let Ok(a) = bq.arrow_id(tok) {
        return Ok(Letter::forward(a));
    }
    match tok.strip_suffix('-') {
        Some(name) => bq.arrow_id(name).map(Letter::inverse).map_err(|_| WordError::UnknownArrow(name.into())),
        None => Err(WordError::UnknownArrow(tok.into())),
    }
}

/// Parses a string literal without checking the string axioms.
pub fn parse_word(bq: &BoundQuiver, text: &str) -> Result<StringWord, WordError> {
    let toks: Vec<&str> = text.split_whitespace().collect();
    fn trivial(t: &str) -> Option<&str> {
        t.strip_prefix("e(").and_then(|r| r.strip_suffix(')'))
    }
    match toks.as_slice() {
        [] => Err(WordError::Empty),
        [t] if trivial(t).is_some() => {
            let v = trivial(t).unwrap_or_default();
            bq.vertex(v).map(StringWord::Trivial).map_err(|_| WordError::UnknownVertex(v.into()))
        }
        _ if toks.iter().any(|t| trivial(t).is_some()) => Err(WordError::TrivialInsideWord),
        _ => Ok(StringWord::Walk(toks.iter().map(|t| parse_letter(bq, t)).collect::<Result<_, _>>()?)),
    }
}

/// Parses a string literal and checks that it is a string.
pub fn parse_string(bq: &BoundQuiver, text: &str) -> Result<StringWord, WordError> {
    let w = parse_word(bq, text)?;
    is_valid_string(bq, w.letters())?;
    Ok(w)
}

pub fn parse_band(bq: &BoundQuiver, text: &str) -> Result<BandWord, WordError> {
    match parse_word(bq, text)? {
        StringWord::Trivial(_) => Err(WordError::NotBand(BandDefect::Empty)),
        StringWord::Walk(letters) => Ok(BandWord::new(bq, letters)?),
    }
}
