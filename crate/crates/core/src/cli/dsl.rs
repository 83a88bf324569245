//! The `.gfk` constraint-system format.
//!
//! ```text
//! # Example: λ1 ≥ 2λ2 − λ3, λ2 ≥ 2λ3 − λ4, λ3 ≥ 2λ4
//! k=4
//! L1 >= 2 L2 - L3
//! L2 >= 2 L3 - L4
//! L3 >= 2 L4
//! ```
//!
//! Other modes: `ratios: 4/3 3/2 2/1` (optionally `first: c1 ... ck`),
//! `lhv: k l j` and `alphabeta: alpha beta k`. `equal: i,...` and
//! `offset: d1,...,dk` apply to matrix mode; `equal: 1` is also accepted in
//! `lhv` mode.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::exactmat::ConstraintMatrix;
use crate::gfengine::{EqualitySpec, RationalSystem};
use crate::oracle::{ConstraintSystem, SystemKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax,
    Semantic,
}

/// Diagnostic with a 1-based position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub line: usize,
    pub column: usize,
    pub message: String,
    pub expected: Vec<String>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            ParseErrorKind::Syntax => "syntax error",
            ParseErrorKind::Semantic => "semantic error",
        };
        write!(f, "{}:{}: {kind}: {}", self.line, self.column, self.message)?;
        if !self.expected.is_empty() {
            write!(f, " (expected {})", self.expected.join(", "))?;
        }
        Ok(())
    }
}

impl std::error::Error for ParseError {}

/// A parsed `.gfk` file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SystemDocument {
    pub system: ConstraintSystem,
}

impl SystemDocument {
    pub fn render(&self) -> String {
        render_system(&self.system)
    }
}

fn syntax(line: usize, column: usize, message: impl Into<String>, expected: &[&str]) -> ParseError {
    ParseError {
        kind: ParseErrorKind::Syntax,
        line,
        column,
        message: message.into(),
        expected: expected.iter().map(|s| s.to_string()).collect(),
    }
}

fn semantic(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        kind: ParseErrorKind::Semantic,
        line,
        column,
        message: message.into(),
        expected: Vec::new(),
    }
}

/// Character cursor over one line; columns are 1-based and count chars.
struct Cursor {
    chars: Vec<char>,
    pos: usize,
    line: usize,
}

impl Cursor {
    fn new(src: &str, line: usize) -> Self {
        Self {
            chars: src.chars().collect(),
            pos: 0,
            line,
        }
    }

    fn column(&self) -> usize {
        self.pos + 1
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos >= self.chars.len()
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_str(&mut self, s: &str) -> Result<(), ParseError> {
        self.skip_ws();
        let col = self.column();
        for c in s.chars() {
            if self.peek() != Some(c) {
                return Err(syntax(self.line, col, format!("expected '{s}'"), &[s]));
            }
            self.pos += 1;
        }
        Ok(())
    }

    fn unexpected(&self, expected: &[&str]) -> ParseError {
        let found = match self.peek() {
            Some(c) => format!("unexpected '{c}'"),
            None => "unexpected end of line".to_string(),
        };
        syntax(self.line, self.column(), found, expected)
    }

    fn expect_end(&mut self) -> Result<(), ParseError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.unexpected(&["end of line"]))
        }
    }

    /// Unsigned decimal integer, returned with its starting column.
    fn number(&mut self) -> Result<(u64, usize), ParseError> {
        self.skip_ws();
        let col = self.column();
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.unexpected(&["integer"]));
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        text.parse::<u64>()
            .map(|v| (v, col))
            .map_err(|_| syntax(self.line, col, format!("integer {text} is out of range"), &[]))
    }

    fn signed(&mut self) -> Result<(i64, usize), ParseError> {
        self.skip_ws();
        let col = self.column();
        let negative = self.eat('-');
        if !negative {
            self.eat('+');
        }
        let (v, _) = self.number()?;
        let v = i64::try_from(v).map_err(|_| syntax(self.line, col, format!("integer {v} is out of range"), &[]))?;
        Ok((if negative { -v } else { v }, col))
    }

    /// Comma- or whitespace-separated list until end of line.
    fn list<T>(&mut self, mut item: impl FnMut(&mut Self) -> Result<T, ParseError>) -> Result<Vec<T>, ParseError> {
        let mut out = Vec::new();
        while !self.at_end() {
            if !out.is_empty() {
                self.eat(',');
            }
            out.push(item(self)?);
        }
        Ok(out)
    }
}

struct Row {
    line: usize,
    column: usize,
    index: u64,
    terms: Vec<(i64, u64, usize)>,
}

/// A directive's value and the line it appeared on.
type OnLine<T> = Option<(T, usize)>;

#[derive(Default)]
struct Raw {
    k: Option<(u64, usize, usize)>,
    rows: Vec<Row>,
    equal: OnLine<Vec<(u64, usize)>>,
    offset: OnLine<Vec<(u64, usize)>>,
    ratios: OnLine<Vec<(u64, u64, usize)>>,
    first: OnLine<Vec<i64>>,
    lhv: OnLine<[i64; 3]>,
    alphabeta: OnLine<[i64; 3]>,
}

const KEYWORDS: &[&str] = &[
    "k=",
    "L<i> >=",
    "equal:",
    "offset:",
    "ratios:",
    "first:",
    "lhv:",
    "alphabeta:",
];

fn parse_row(cur: &mut Cursor) -> Result<Row, ParseError> {
    let column = cur.column();
    cur.expect_str("L")?;
    let (index, _) = cur.number()?;
    cur.expect_str(">=")?;
    let mut terms = Vec::new();
    let mut first = true;
    loop {
        if cur.at_end() {
            if first {
                return Err(cur.unexpected(&["term"]));
            }
            break;
        }
        let col = cur.column();
        let sign = if cur.eat('-') {
            -1
        } else if cur.eat('+') || first {
            1
        } else {
            return Err(cur.unexpected(&["'+'", "'-'", "end of line"]));
        };
        cur.skip_ws();
        let coeff = if cur.peek().is_some_and(|c| c.is_ascii_digit()) {
            let (v, vcol) = cur.number()?;
            let v =
                i64::try_from(v).map_err(|_| syntax(cur.line, vcol, format!("integer {v} is out of range"), &[]))?;
            cur.eat('*');
            cur.skip_ws();
            if cur.peek() != Some('L') {
                // a bare constant: only 0 is meaningful
                if v != 0 {
                    return Err(semantic(
                        cur.line,
                        vcol,
                        "constant terms are not supported; use 'offset:'",
                    ));
                }
                first = false;
                continue;
            }
            v
        } else {
            1
        };
        cur.skip_ws();
        if cur.peek() != Some('L') {
            return Err(cur.unexpected(&["L<j>"]));
        }
        cur.pos += 1;
        let (j, _) = cur.number()?;
        terms.push((sign * coeff, j, col));
        first = false;
    }
    Ok(Row {
        line: cur.line,
        column,
        index,
        terms,
    })
}

fn parse_lines(text: &str) -> Result<Raw, ParseError> {
    let mut raw = Raw::default();
    for (n, line) in text.split('\n').enumerate() {
        let lineno = n + 1;
        let line = line.strip_suffix('\r').unwrap_or(line);
        let line = match line.find('#') {
            Some(p) => &line[..p],
            None => line,
        };
        let mut cur = Cursor::new(line, lineno);
        if cur.at_end() {
            continue;
        }
        let col = cur.column();
        let dup = |what: &str| semantic(lineno, col, format!("duplicate '{what}' line"));
        match cur.peek() {
            Some('L') => {
                raw.rows.push(parse_row(&mut cur)?);
                continue;
            }
            Some('k') => {
                cur.pos += 1;
                cur.expect_str("=")?;
                let (k, kcol) = cur.number()?;
                cur.expect_end()?;
                if raw.k.is_some() {
                    return Err(dup("k="));
                }
                raw.k = Some((k, lineno, kcol));
                continue;
            }
            _ => {}
        }
        let start = cur.pos;
        while cur.peek().is_some_and(|c| c.is_ascii_alphabetic()) {
            cur.pos += 1;
        }
        let word: String = cur.chars[start..cur.pos].iter().collect();
        if word.is_empty() || !cur.eat(':') {
            cur.pos = start;
            return Err(syntax(lineno, col, "unrecognized line", KEYWORDS));
        }
        match word.as_str() {
            "equal" => {
                let items = cur.list(|c| c.number())?;
                if raw.equal.replace((items, lineno)).is_some() {
                    return Err(dup("equal:"));
                }
            }
            "offset" => {
                let items = cur.list(|c| c.number())?;
                if raw.offset.replace((items, lineno)).is_some() {
                    return Err(dup("offset:"));
                }
            }
            "ratios" => {
                let items = cur.list(|c| {
                    let (n, col) = c.number()?;
                    c.expect_str("/")?;
                    let (d, _) = c.number()?;
                    Ok((n, d, col))
                })?;
                if raw.ratios.replace((items, lineno)).is_some() {
                    return Err(dup("ratios:"));
                }
            }
            "first" => {
                let items = cur.list(|c| c.signed().map(|(v, _)| v))?;
                if raw.first.replace((items, lineno)).is_some() {
                    return Err(dup("first:"));
                }
            }
            "lhv" | "alphabeta" => {
                let mut vals = [0i64; 3];
                for v in &mut vals {
                    *v = cur.signed()?.0;
                }
                cur.expect_end()?;
                let slot = if word == "lhv" {
                    &mut raw.lhv
                } else {
                    &mut raw.alphabeta
                };
                if slot.replace((vals, lineno)).is_some() {
                    return Err(dup(&format!("{word}:")));
                }
            }
            _ => {
                return Err(syntax(lineno, col, format!("unknown keyword '{word}'"), KEYWORDS));
            }
        }
    }
    Ok(raw)
}

fn build(raw: Raw) -> Result<ConstraintSystem, ParseError> {
    let modes: Vec<(&str, usize)> = [
        raw.rows.first().map(|r| ("matrix rows", r.line)),
        raw.ratios.as_ref().map(|r| ("ratios:", r.1)),
        raw.lhv.as_ref().map(|r| ("lhv:", r.1)),
        raw.alphabeta.as_ref().map(|r| ("alphabeta:", r.1)),
    ]
    .into_iter()
    .flatten()
    .collect();
    if modes.len() > 1 {
        return Err(semantic(
            modes[1].1,
            1,
            format!("'{}' cannot be combined with '{}'", modes[1].0, modes[0].0),
        ));
    }
    let only_matrix = |what: Option<usize>, name: &str| match what {
        Some(line) => Err(semantic(line, 1, format!("'{name}' only applies to matrix systems"))),
        None => Ok(()),
    };

    if let Some((items, line)) = raw.ratios {
        only_matrix(raw.equal.as_ref().map(|e| e.1), "equal:")?;
        only_matrix(raw.offset.as_ref().map(|e| e.1), "offset:")?;
        let k = items.len() + 1;
        if let Some((kv, kline, kcol)) = raw.k {
            if kv as usize != k {
                return Err(semantic(
                    kline,
                    kcol,
                    format!("k = {kv} but {} ratios give k = {k}", items.len()),
                ));
            }
        }
        let mut ratios = Vec::with_capacity(items.len());
        for (n, d, col) in items {
            if n == 0 || d == 0 {
                return Err(semantic(line, col, "ratio terms must be positive"));
            }
            ratios.push((n, d));
        }
        let c = match raw.first {
            Some((c, fline)) => {
                if c.len() != k {
                    return Err(semantic(
                        fline,
                        1,
                        format!("'first:' needs {k} coefficients, got {}", c.len()),
                    ));
                }
                Some(c)
            }
            None => None,
        };
        let sys = RationalSystem::from_ratios(&ratios, c).map_err(|e| semantic(line, 1, e.to_string()))?;
        return Ok(ConstraintSystem::rational(sys));
    }
    if let Some((_, line)) = &raw.first {
        return Err(semantic(*line, 1, "'first:' requires 'ratios:'"));
    }
    if let (Some((_, kline, kcol)), true) = (raw.k, raw.lhv.is_some() || raw.alphabeta.is_some()) {
        return Err(semantic(
            kline,
            kcol,
            "'k=' is not used with lhv:/alphabeta: (k is given inline)",
        ));
    }
    if let Some(([k, l, j], line)) = raw.lhv {
        only_matrix(raw.offset.as_ref().map(|e| e.1), "offset:")?;
        let equality = match raw.equal {
            None => false,
            Some((items, eline)) => {
                if items.iter().map(|x| x.0).collect::<Vec<_>>() != [1] {
                    return Err(semantic(eline, 1, "lhv systems only accept 'equal: 1'"));
                }
                true
            }
        };
        if k < 1 {
            return Err(semantic(line, 1, "k must be at least 1"));
        }
        return ConstraintSystem::lecture_hall_variant(k as usize, l, j, equality)
            .map_err(|e| semantic(line, 1, e.to_string()));
    }
    if let Some(([alpha, beta, k], line)) = raw.alphabeta {
        only_matrix(raw.equal.as_ref().map(|e| e.1), "equal:")?;
        only_matrix(raw.offset.as_ref().map(|e| e.1), "offset:")?;
        if k < 1 {
            return Err(semantic(line, 1, "k must be at least 1"));
        }
        return ConstraintSystem::alpha_beta(alpha, beta, k as usize).map_err(|e| semantic(line, 1, e.to_string()));
    }

    let Some((k, kline, kcol)) = raw.k else {
        let line = raw.rows.first().map_or(1, |r| r.line);
        return Err(semantic(line, 1, "missing 'k=' header"));
    };
    if k == 0 {
        return Err(semantic(kline, kcol, "k must be at least 1"));
    }
    let k = k as usize;
    let mut entries: BTreeMap<(usize, usize), BigInt> = BTreeMap::new();
    let mut seen = BTreeSet::new();
    for row in &raw.rows {
        let i = row.index as usize;
        if i == 0 || i > k {
            return Err(semantic(row.line, row.column, format!("L{i} is outside 1..{k}")));
        }
        if !seen.insert(i) {
            return Err(semantic(row.line, row.column, format!("second constraint for L{i}")));
        }
        for &(coeff, j, col) in &row.terms {
            let j = j as usize;
            if j <= i {
                return Err(semantic(
                    row.line,
                    col,
                    format!("L{j} may not appear in the constraint for L{i}; use L<j> with j > {i}"),
                ));
            }
            if j > k {
                return Err(semantic(row.line, col, format!("L{j} is outside 1..{k}")));
            }
            *entries.entry((i - 1, j - 1)).or_default() += coeff;
        }
    }
    let matrix = ConstraintMatrix::from_fn(k, |i, j| entries.get(&(i, j)).cloned().unwrap_or_default())
        .map_err(|e| semantic(kline, 1, e.to_string()))?;
    let mut equal = Vec::new();
    if let Some((items, line)) = raw.equal {
        for (i, col) in items {
            if i == 0 || i as usize > k {
                return Err(semantic(line, col, format!("equality index {i} is outside 1..{k}")));
            }
            equal.push(i as usize - 1);
        }
    }
    let offsets = match raw.offset {
        None => Vec::new(),
        Some((items, line)) => {
            if items.len() != k {
                return Err(semantic(
                    line,
                    1,
                    format!("'offset:' needs {k} values, got {}", items.len()),
                ));
            }
            items.into_iter().map(|x| x.0).collect()
        }
    };
    ConstraintSystem::integer(matrix, EqualitySpec::new(equal, offsets)).map_err(|e| semantic(kline, 1, e.to_string()))
}

/// Parses one constraint system.
pub fn parse_system(text: &str) -> Result<SystemDocument, ParseError> {
    let raw = parse_lines(text)?;
    let empty =
        raw.k.is_none() && raw.rows.is_empty() && raw.ratios.is_none() && raw.lhv.is_none() && raw.alphabeta.is_none();
    if empty {
        return Err(semantic(1, 1, "document defines no system"));
    }
    Ok(SystemDocument { system: build(raw)? })
}

fn join<T: fmt::Display>(items: impl IntoIterator<Item = T>, sep: &str) -> String {
    items.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(sep)
}

/// Canonical text for a system; `parse_system` reads it back unchanged.
pub fn render_system(sys: &ConstraintSystem) -> String {
    let mut out = String::new();
    match sys.kind() {
        SystemKind::IntegerMatrix { matrix, spec } => {
            let k = matrix.k();
            out.push_str(&format!("k={k}\n"));
            for i in 0..k {
                let mut row = String::new();
                for j in i + 1..k {
                    let v = matrix.entry(i, j);
                    if v.is_zero() {
                        continue;
                    }
                    let mag = v.abs();
                    let coeff = if mag == BigInt::from(1) {
                        String::new()
                    } else {
                        format!("{mag} ")
                    };
                    if row.is_empty() {
                        if v.is_negative() {
                            row.push('-');
                        }
                    } else {
                        row.push_str(if v.is_negative() { " - " } else { " + " });
                    }
                    row.push_str(&format!("{coeff}L{}", j + 1));
                }
                if !row.is_empty() {
                    out.push_str(&format!("L{} >= {row}\n", i + 1));
                }
            }
            if !spec.equal().is_empty() {
                out.push_str(&format!("equal: {}\n", join(spec.equal().iter().map(|i| i + 1), ",")));
            }
            if !spec.offsets().is_empty() {
                out.push_str(&format!("offset: {}\n", join(spec.offsets(), ",")));
            }
        }
        SystemKind::Rational(r) => {
            let a = r.a();
            let ratios = a.windows(2).map(|w| format!("{}/{}", w[0], w[1]));
            out.push_str(format!("ratios: {}", join(ratios, " ")).trim_end());
            out.push('\n');
            if !r.has_default_first_row() {
                out.push_str(&format!("first: {}\n", join(r.c(), " ")));
            }
        }
        SystemKind::LectureHallVariant { k, l, j, equality } => {
            out.push_str(&format!("lhv: {k} {l} {j}\n"));
            if *equality {
                out.push_str("equal: 1\n");
            }
        }
        SystemKind::AlphaBeta { alpha, beta, k } => {
            out.push_str(&format!("alphabeta: {alpha} {beta} {k}\n"));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tetrahedral() {
        let doc = parse_system("k=4\nL1 >= 2 L2 - L3\nL2 >= 2 L3 - L4\nL3 >= 2 L4").unwrap();
        let SystemKind::IntegerMatrix { matrix, spec } = doc.system.kind() else {
            panic!()
        };
        assert!(spec.is_trivial());
        assert_eq!(matrix.entry(0, 1), &BigInt::from(2));
        assert_eq!(matrix.entry(0, 2), &BigInt::from(-1));
        assert_eq!(matrix.entry(2, 3), &BigInt::from(2));
        assert_eq!(parse_system(&doc.render()).unwrap(), doc);
    }

    #[test]
    fn ratios() {
        let doc = parse_system("ratios: 4/3 3/2 2/1").unwrap();
        let SystemKind::Rational(r) = doc.system.kind() else {
            panic!()
        };
        assert_eq!(r.a(), &[4, 3, 2, 1]);
        assert_eq!(r.c(), &[1, 0, 0, 0]);
        assert_eq!(parse_system(&doc.render()).unwrap(), doc);
    }

    #[test]
    fn trivial() {
        let doc = parse_system("k=1\n").unwrap();
        assert_eq!(doc.system.k(), 1);
        assert_eq!(doc.render(), "k=1\n");
    }

    #[test]
    fn comments_crlf_and_options() {
        let text =
            "# odd parts\r\nk=4\r\nL1 >= L2 # tail\r\nL2 >= L4\r\nL3 >= +1*L4\r\nequal: 1, 3\r\noffset: 1,0,1,0\r\n";
        let doc = parse_system(text).unwrap();
        let SystemKind::IntegerMatrix { spec, .. } = doc.system.kind() else {
            panic!()
        };
        assert!(spec.is_equal(0) && spec.is_equal(2));
        assert_eq!(spec.offsets(), &[1, 0, 1, 0]);
        assert_eq!(parse_system(&doc.render()).unwrap(), doc);
    }

    #[test]
    fn variant_modes() {
        let doc = parse_system("lhv: 4 3 -1\nequal: 1").unwrap();
        assert_eq!(
            doc.system.kind(),
            &SystemKind::LectureHallVariant {
                k: 4,
                l: 3,
                j: -1,
                equality: true
            }
        );
        assert_eq!(parse_system(&doc.render()).unwrap(), doc);
        let ab = parse_system("alphabeta: 1 -1 6").unwrap();
        assert_eq!(
            ab.system.kind(),
            &SystemKind::AlphaBeta {
                alpha: 1,
                beta: -1,
                k: 6
            }
        );
        let r = parse_system("ratios: 7/3 3/2 2/1\nfirst: 2 3 1 5").unwrap();
        assert_eq!(parse_system(&r.render()).unwrap(), r);
    }

    #[test]
    fn backward_reference_is_semantic() {
        let e = parse_system("k=3\nL2 >= L1").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::Semantic);
        assert_eq!((e.line, e.column), (2, 7));
    }

    #[test]
    fn syntax_errors_have_positions() {
        let e = parse_system("k=3\nL1 >= 2 L2 L3").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::Syntax);
        assert_eq!((e.line, e.column), (2, 12));
        let e = parse_system("k=3\nfoo bar").unwrap_err();
        assert_eq!((e.kind, e.line, e.column), (ParseErrorKind::Syntax, 2, 1));
        let e = parse_system("k=\n").unwrap_err();
        assert_eq!((e.line, e.column), (1, 3));
        let e = parse_system("ratios: 4/").unwrap_err();
        assert_eq!((e.line, e.column), (1, 11));
    }

    #[test]
    fn semantic_errors() {
        assert!(parse_system("").is_err());
        assert!(parse_system("L1 >= L2").is_err());
        assert!(parse_system("k=2\nL1 >= L3").is_err());
        assert!(parse_system("k=2\nequal: 3").is_err());
        assert!(parse_system("k=2\noffset: 1").is_err());
        assert!(parse_system("ratios: 1/2\nL1 >= L2").is_err());
        assert!(parse_system("ratios: 0/2").is_err());
        assert!(parse_system("ratios: 1/2\nfirst: 1").is_err());
        assert!(parse_system("lhv: 3 0 2").is_err());
        assert!(parse_system("alphabeta: 1 2 3").is_err());
        assert!(parse_system("k=2\nL1 >= L2\nL1 >= 2 L2").is_err());
    }
}
