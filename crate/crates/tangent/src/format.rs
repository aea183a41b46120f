//! The line-oriented presentation format.
//!
//! ```text
//! space <name>
//! object <oid> dim <n> [separated]
//! morphism <mid> : <oid> -> <oid> jac [[r,...],[...]]
//! compose <mid_g> <mid_f> = <mid_h>
//! ```
//!
//! Functor files use `functor <name> : <space> -> <space>`, then
//! `objmap <oid> -> <oid>` and `mormap <mid> -> <mid>` lines. `#` starts a
//! comment. Scalars are `int` or `int/int` with an optional leading minus.

use std::fmt::{self, Write as _};

use num_bigint::BigInt;
use num_traits::Zero;
use tangent_core::{FormalTangentVector, Rational, RationalMatrix, RawFunctor, RawPresentation};

/// Syntax error at a 1-based line and column.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

fn err<T>(line: usize, column: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { line, column, message: message.into() })
}

#[derive(Clone, Copy)]
struct Token<'a> {
    text: &'a str,
    column: usize,
}

struct Line<'a> {
    number: usize,
    text: &'a str,
    tokens: Vec<Token<'a>>,
}

impl<'a> Line<'a> {
    fn end_column(&self) -> usize {
        self.text.chars().count() + 1
    }

    fn token(&self, i: usize, what: &str) -> Result<Token<'a>, ParseError> {
        match self.tokens.get(i) {
            Some(t) => Ok(*t),
            None => err(self.number, self.end_column(), format!("expected {what}")),
        }
    }

    fn keyword(&self, i: usize, word: &str) -> Result<(), ParseError> {
        let t = self.token(i, &format!("`{word}`"))?;
        if t.text != word {
            return err(self.number, t.column, format!("expected `{word}`, found `{}`", t.text));
        }
        Ok(())
    }

    fn name(&self, i: usize, what: &str) -> Result<String, ParseError> {
        Ok(self.token(i, what)?.text.to_string())
    }

    fn finish(&self, count: usize) -> Result<(), ParseError> {
        match self.tokens.get(count) {
            Some(t) => err(self.number, t.column, format!("unexpected `{}`", t.text)),
            None => Ok(()),
        }
    }
}

fn lines(text: &str) -> impl Iterator<Item = Line<'_>> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let text = raw.split('#').next().unwrap_or("");
        let mut tokens = Vec::new();
        let mut start = None;
        for (col, c) in text.chars().enumerate().chain(std::iter::once((text.chars().count(), ' '))) {
            match (c.is_whitespace(), start) {
                (false, None) => start = Some(col),
                (true, Some(s)) => {
                    let (a, b) = (char_offset(text, s), char_offset(text, col));
                    tokens.push(Token { text: &text[a..b], column: s + 1 });
                    start = None;
                }
                _ => {}
            }
        }
        (!tokens.is_empty()).then_some(Line { number: i + 1, text, tokens })
    })
}

fn char_offset(s: &str, chars: usize) -> usize {
    s.char_indices().nth(chars).map_or(s.len(), |(i, _)| i)
}

/// Parses `int` or `int/int`; decimals are rejected.
pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let integer = |t: &str| -> Result<BigInt, String> {
        let digits = t.strip_prefix('-').unwrap_or(t);
        if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
            return Err(if t.contains('.') {
                format!("`{s}` is not exact; write rationals as int or int/int")
            } else {
                format!("`{s}` is not a rational (expected int or int/int)")
            });
        }
        t.parse().map_err(|_| format!("`{s}` is not a rational"))
    };
    match s.split_once('/') {
        None => Ok(Rational::from_integer(integer(s)?)),
        Some((n, d)) => {
            if d.starts_with('-') {
                return Err(format!("`{s}`: the denominator must be positive"));
            }
            let d = integer(d)?;
            if d.is_zero() {
                return Err(format!("`{s}`: zero denominator"));
            }
            Ok(Rational::new(integer(n)?, d))
        }
    }
}

/// Character cursor over the tail of a line, for matrix and vector literals.
struct Cursor {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    first_column: usize,
}

impl Cursor {
    fn new(text: &str, line: usize, first_column: usize) -> Self {
        Cursor { chars: text.chars().collect(), pos: 0, line, first_column }
    }

    fn column(&self) -> usize {
        self.first_column + self.pos
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        match self.peek() {
            Some(found) if found == c => {
                self.pos += 1;
                Ok(())
            }
            Some(found) => err(self.line, self.column(), format!("expected `{c}`, found `{found}`")),
            None => err(self.line, self.column(), format!("expected `{c}`")),
        }
    }

    /// A scalar runs up to the next `,`, `]`, `;` or whitespace.
    fn rational(&mut self) -> Result<Rational, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|c| !matches!(c, ',' | ']' | ';') && !c.is_whitespace()) {
            self.pos += 1;
        }
        let word: String = self.chars[start..self.pos].iter().collect();
        if word.is_empty() {
            return err(self.line, self.first_column + start, "expected a rational");
        }
        parse_rational(&word).or_else(|m| err(self.line, self.first_column + start, m))
    }

    fn end(&mut self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(c) => err(self.line, self.column(), format!("unexpected `{c}`")),
        }
    }
}

fn matrix(c: &mut Cursor) -> Result<Vec<Vec<Rational>>, ParseError> {
    c.expect('[')?;
    let mut rows = Vec::new();
    if c.peek() == Some(']') {
        c.pos += 1;
        return Ok(rows);
    }
    loop {
        c.expect('[')?;
        let mut row = Vec::new();
        if c.peek() != Some(']') {
            loop {
                row.push(c.rational()?);
                if c.peek() != Some(',') {
                    break;
                }
                c.pos += 1;
            }
        }
        c.expect(']')?;
        rows.push(row);
        if c.peek() != Some(',') {
            break;
        }
        c.pos += 1;
    }
    c.expect(']')?;
    Ok(rows)
}

/// Parses one space presentation. Validation is left to the core crate.
pub fn parse_presentation(text: &str) -> Result<RawPresentation, ParseError> {
    let mut raw: Option<RawPresentation> = None;
    for line in lines(text) {
        let head = line.tokens[0];
        if head.text == "space" {
            if raw.is_some() {
                return err(line.number, head.column, "a file holds exactly one `space` line");
            }
            raw = Some(RawPresentation::new(line.name(1, "a space name")?));
            line.finish(2)?;
            continue;
        }
        let Some(raw) = raw.as_mut() else {
            return err(line.number, head.column, format!("expected `space`, found `{}`", head.text));
        };
        match head.text {
            "object" => {
                let name = line.name(1, "an object id")?;
                line.keyword(2, "dim")?;
                let dim_token = line.token(3, "a dimension")?;
                let dim = dim_token.text.parse::<usize>().or_else(|_| {
                    err(line.number, dim_token.column, format!("`{}` is not a dimension", dim_token.text))
                })?;
                let separated = match line.tokens.get(4) {
                    None => false,
                    Some(t) if t.text == "separated" => {
                        line.finish(5)?;
                        true
                    }
                    Some(t) => return err(line.number, t.column, format!("expected `separated`, found `{}`", t.text)),
                };
                let next = std::mem::take(raw);
                *raw = if separated { next.separated_object(&name, dim) } else { next.object(&name, dim) };
            }
            "morphism" => {
                let name = line.name(1, "a morphism id")?;
                line.keyword(2, ":")?;
                let src = line.name(3, "a source object")?;
                line.keyword(4, "->")?;
                let dst = line.name(5, "a target object")?;
                line.keyword(6, "jac")?;
                let start = line.token(7, "a Jacobian matrix")?.column;
                let tail = &line.text[char_offset(line.text, start - 1)..];
                let mut cursor = Cursor::new(tail, line.number, start);
                let jac = matrix(&mut cursor)?;
                cursor.end()?;
                *raw = std::mem::take(raw).morphism(&name, &src, &dst, jac);
            }
            "compose" => {
                let g = line.name(1, "a morphism id")?;
                let f = line.name(2, "a morphism id")?;
                line.keyword(3, "=")?;
                let h = line.name(4, "a morphism id")?;
                line.finish(5)?;
                *raw = std::mem::take(raw).compose(&g, &f, &h);
            }
            other => return err(line.number, head.column, format!("unknown declaration `{other}`")),
        }
    }
    raw.ok_or(ParseError { line: 1, column: 1, message: "missing `space` line".into() })
}

/// Parses a functor file.
pub fn parse_functor(text: &str) -> Result<RawFunctor, ParseError> {
    let mut raw: Option<RawFunctor> = None;
    for line in lines(text) {
        let head = line.tokens[0];
        if head.text == "functor" {
            if raw.is_some() {
                return err(line.number, head.column, "a file holds exactly one `functor` line");
            }
            let name = line.name(1, "a functor name")?;
            line.keyword(2, ":")?;
            let src = line.name(3, "a source space")?;
            line.keyword(4, "->")?;
            let dst = line.name(5, "a target space")?;
            line.finish(6)?;
            raw = Some(RawFunctor::new(name, src, dst));
            continue;
        }
        let Some(raw) = raw.as_mut() else {
            return err(line.number, head.column, format!("expected `functor`, found `{}`", head.text));
        };
        let (what, object) = match head.text {
            "objmap" => ("an object id", true),
            "mormap" => ("a morphism id", false),
            other => return err(line.number, head.column, format!("unknown declaration `{other}`")),
        };
        let from = line.name(1, what)?;
        line.keyword(2, "->")?;
        let to = line.name(3, what)?;
        line.finish(4)?;
        let next = std::mem::take(raw);
        *raw = if object { next.map_object(&from, &to) } else { next.map_morphism(&from, &to) };
    }
    raw.ok_or(ParseError { line: 1, column: 1, message: "missing `functor` line".into() })
}

/// Parses `<oid>:r,r,...;<oid>:...`. A dimension-0 term is written `<oid>:`.
pub fn parse_vector(text: &str) -> Result<FormalTangentVector, ParseError> {
    let mut w = FormalTangentVector::new();
    let mut c = Cursor::new(text, 1, 1);
    if c.peek().is_none() {
        return Ok(w);
    }
    loop {
        c.skip_ws();
        let start = c.pos;
        while c.chars.get(c.pos).is_some_and(|&ch| ch != ':' && ch != ';' && !ch.is_whitespace()) {
            c.pos += 1;
        }
        let object: String = c.chars[start..c.pos].iter().collect();
        if object.is_empty() {
            return err(1, c.column(), "expected an object id");
        }
        c.expect(':')?;
        let mut v = Vec::new();
        if !matches!(c.peek(), None | Some(';')) {
            loop {
                v.push(c.rational()?);
                if c.peek() != Some(',') {
                    break;
                }
                c.pos += 1;
            }
        }
        w = w.term(&object, v);
        match c.peek() {
            None => return Ok(w),
            Some(';') => c.pos += 1,
            Some(ch) => return err(1, c.column(), format!("unexpected `{ch}`")),
        }
    }
}

pub fn write_rows(rows: &[Vec<Rational>]) -> String {
    let mut s = String::from("[");
    for (i, row) in rows.iter().enumerate() {
        if i > 0 {
            s.push(',');
        }
        s.push_str(&write_vector(row));
    }
    s.push(']');
    s
}

pub fn write_vector(v: &[Rational]) -> String {
    let items: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("[{}]", items.join(","))
}

/// `[[..],..]`, or `[]` when the matrix has no entries.
pub fn write_matrix(m: &RationalMatrix) -> String {
    if m.rows() * m.cols() == 0 {
        "[]".into()
    } else {
        write_rows(&m.to_rows())
    }
}

pub fn write_presentation(raw: &RawPresentation) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "space {}", raw.name);
    for o in &raw.objects {
        let flag = if o.separated { " separated" } else { "" };
        let _ = writeln!(s, "object {} dim {}{flag}", o.name, o.dim);
    }
    for m in &raw.morphisms {
        let _ = writeln!(s, "morphism {} : {} -> {} jac {}", m.name, m.src, m.dst, write_rows(&m.jac));
    }
    for c in &raw.composites {
        let _ = writeln!(s, "compose {} {} = {}", c.outer, c.inner, c.result);
    }
    s
}

pub fn write_functor(raw: &RawFunctor) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "functor {} : {} -> {}", raw.name, raw.src, raw.dst);
    for (a, b) in &raw.object_map {
        let _ = writeln!(s, "objmap {a} -> {b}");
    }
    for (a, b) in &raw.morphism_map {
        let _ = writeln!(s, "mormap {a} -> {b}");
    }
    s
}

/// Writes a formal vector in the `--vec` syntax.
pub struct VectorDisplay<'a>(pub &'a FormalTangentVector);

impl fmt::Display for VectorDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (o, v)) in self.0.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            let items: Vec<String> = v.iter().map(ToString::to_string).collect();
            write!(f, "{o}:{}", items.join(","))?;
        }
        Ok(())
    }
}
