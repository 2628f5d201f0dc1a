//! The system-file language.
//!
//! ```text
//! title "Burgers"
//! base t x
//! fields u
//! F[u,t] = u
//! F[u,x] = -(u^2/2 + u_x)
//! Pi[u] = 0
//! ```
//!
//! Statements end at a newline or `;`; newlines inside parentheses are
//! ignored and `#` starts a comment. Jet coordinates are written `u_tx`
//! (suffix letters name base coordinates) or `d(u; 1,1)` with explicit
//! derivative counts. Higher-order blocks use `F[u,xx]` or `F[u,(2,0)]`.

use std::collections::BTreeMap;

use balvar_core::render::poly_text_with;
use balvar_core::{
    BalanceError, BalanceSystem, ChartSpec, HigherBalanceData, MultiIndex, Poly, Rational, VarRef,
};
use num_traits::Zero;
use thiserror::Error;

/// `d(` opens a numeric jet token, so `d` cannot name a coordinate.
const RESERVED: &[&str] = &["d"];
const MAX_EXPONENT: u32 = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InputError {
    #[error("{line}:{col}: expected {}, found {found}", expected.join(" or "))]
    Parse {
        line: usize,
        col: usize,
        expected: Vec<String>,
        found: String,
    },
    #[error("{line}:{col}: undeclared name `{name}`")]
    UndeclaredName { line: usize, col: usize, name: String },
    #[error("{line}:{col}: duplicate relation {what}")]
    DuplicateRelation { line: usize, col: usize, what: String },
    #[error("{line}:{col}: {message}")]
    Invalid {
        line: usize,
        col: usize,
        code: &'static str,
        message: String,
    },
    #[error("{message}")]
    Usage { code: &'static str, message: String },
    #[error(transparent)]
    Balance(#[from] BalanceError),
}

impl InputError {
    /// Whether the message starts with a `line:col` position.
    pub fn has_position(&self) -> bool {
        !matches!(self, InputError::Usage { .. } | InputError::Balance(_))
    }

    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            InputError::Parse { .. } => "E_PARSE",
            InputError::UndeclaredName { .. } => "E_UNDECLARED",
            InputError::DuplicateRelation { .. } => "E_DUPLICATE",
            InputError::Invalid { code, .. } | InputError::Usage { code, .. } => code,
            InputError::Balance(_) => "E_SYSTEM",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(String),
    Str(String),
    Sym(char),
    Newline,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(s) => format!("`{s}`"),
            Tok::Str(_) => "string".into(),
            Tok::Sym(c) => format!("`{c}`"),
            Tok::Newline => "end of line".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, InputError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let mut depth = 0usize;
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        let push = |out: &mut Vec<Token>, tok| out.push(Token { tok, line: tl, col: tc });
        match c {
            '\n' => {
                if depth == 0 {
                    push(&mut out, Tok::Newline);
                }
                i += 1;
                line += 1;
                col = 1;
                continue;
            }
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
                continue;
            }
            c if c.is_whitespace() => {}
            c if c.is_ascii_alphabetic() => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                col += i - start;
                push(&mut out, Tok::Ident(s));
                continue;
            }
            c if c.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                col += i - start;
                push(&mut out, Tok::Int(s));
                continue;
            }
            '"' => {
                let mut s = String::new();
                i += 1;
                col += 1;
                loop {
                    match chars.get(i) {
                        None | Some('\n') => {
                            return Err(InputError::Parse {
                                line,
                                col,
                                expected: vec!["`\"`".into()],
                                found: "end of line".into(),
                            })
                        }
                        Some('"') => break,
                        Some('\\') if matches!(chars.get(i + 1), Some('"' | '\\')) => {
                            s.push(chars[i + 1]);
                            i += 2;
                            col += 2;
                        }
                        Some(&ch) => {
                            s.push(ch);
                            i += 1;
                            col += 1;
                        }
                    }
                }
                push(&mut out, Tok::Str(s));
            }
            '(' | '[' => {
                depth += 1;
                push(&mut out, Tok::Sym(c));
            }
            ')' | ']' => {
                depth = depth.saturating_sub(1);
                push(&mut out, Tok::Sym(c));
            }
            '+' | '-' | '*' | '/' | '^' | ',' | ';' | '=' => push(&mut out, Tok::Sym(c)),
            _ => {
                return Err(InputError::Parse {
                    line,
                    col,
                    expected: vec!["a valid token".into()],
                    found: format!("`{c}`"),
                })
            }
        }
        i += 1;
        col += 1;
    }
    out.push(Token { tok: Tok::Eof, line, col });
    Ok(out)
}

/// A parsed system file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SystemDocument {
    pub title: Option<String>,
    pub notes: Vec<String>,
    pub chart: ChartSpec,
    /// First-order blocks `F[field, coord]`.
    pub flux: BTreeMap<(usize, usize), Poly>,
    pub sources: BTreeMap<usize, Poly>,
    /// Blocks `F[field, Σ]` with `|Σ| ≥ 2`.
    pub higher: BTreeMap<(usize, MultiIndex), Poly>,
}

impl SystemDocument {
    pub fn has_higher_blocks(&self) -> bool {
        !self.higher.is_empty()
    }

    pub fn balance_system(&self) -> Result<BalanceSystem, BalanceError> {
        let (n, m) = (self.chart.n(), self.chart.m());
        let mut flux = vec![vec![Poly::zero(); n]; m];
        for ((i, mu), p) in &self.flux {
            flux[*i][*mu] = p.clone();
        }
        let mut sources = vec![Poly::zero(); m];
        for (i, p) in &self.sources {
            sources[*i] = p.clone();
        }
        BalanceSystem::new(self.chart.clone(), flux, sources)
    }

    /// All blocks, with `Pi` as the `Σ = 0` entry.
    pub fn higher_data(&self) -> HigherBalanceData {
        let n = self.chart.n();
        let mut data = HigherBalanceData::new(self.chart.clone());
        for ((i, mu), p) in &self.flux {
            data.coefficients.insert((*i, MultiIndex::unit(n, *mu)), p.clone());
        }
        for ((i, idx), p) in &self.higher {
            data.coefficients.insert((*i, idx.clone()), p.clone());
        }
        for (i, p) in &self.sources {
            data.coefficients.insert((*i, MultiIndex::zero(n)), p.clone());
        }
        data
    }

    /// Name of a coordinate that re-parses to the same coordinate.
    pub fn var_token(&self, v: &VarRef) -> String {
        match v {
            VarRef::Jet(i, idx) if !idx.is_zero() => {
                let suffix: String = idx
                    .directions()
                    .iter()
                    .map(|&mu| self.chart.base_names()[mu].as_str())
                    .collect();
                if segmentations(&suffix, self.chart.base_names()).len() == 1 {
                    self.chart.var_name(v)
                } else {
                    let counts: Vec<String> = idx.counts().iter().map(u32::to_string).collect();
                    format!("d({}; {})", self.chart.field_names()[*i], counts.join(","))
                }
            }
            _ => self.chart.var_name(v),
        }
    }

    pub fn poly_source(&self, p: &Poly) -> String {
        poly_text_with(&self.chart, p, &|v| self.var_token(v))
    }

    /// Block index that re-parses: coordinate letters or `(counts)`.
    pub fn index_token(&self, idx: &MultiIndex) -> String {
        let suffix: String = idx
            .directions()
            .iter()
            .map(|&mu| self.chart.base_names()[mu].as_str())
            .collect();
        if segmentations(&suffix, self.chart.base_names()).len() == 1 {
            suffix
        } else {
            let counts: Vec<String> = idx.counts().iter().map(u32::to_string).collect();
            format!("({})", counts.join(","))
        }
    }

    /// Canonical source text; parsing it gives back `self`.
    pub fn to_source(&self) -> String {
        let c = &self.chart;
        let mut out = String::new();
        if let Some(t) = &self.title {
            out.push_str(&format!("title {}\n", quote(t)));
        }
        for note in &self.notes {
            out.push_str(&format!("note {}\n", quote(note)));
        }
        out.push_str(&format!("base {}\n", c.base_names().join(" ")));
        out.push_str(&format!("fields {}\n", c.field_names().join(" ")));
        if c.rho() != &Poly::one() {
            out.push_str(&format!("density {}\n", self.poly_source(c.rho())));
        }
        for ((i, mu), p) in &self.flux {
            out.push_str(&format!(
                "F[{},{}] = {}\n",
                c.field_names()[*i],
                self.index_token(&MultiIndex::unit(c.n(), *mu)),
                self.poly_source(p)
            ));
        }
        for ((i, idx), p) in &self.higher {
            out.push_str(&format!(
                "F[{},{}] = {}\n",
                c.field_names()[*i],
                self.index_token(idx),
                self.poly_source(p)
            ));
        }
        for (i, p) in &self.sources {
            out.push_str(&format!("Pi[{}] = {}\n", c.field_names()[*i], self.poly_source(p)));
        }
        out
    }
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// All ways of writing `s` as a concatenation of `names`.
fn segmentations(s: &str, names: &[String]) -> Vec<Vec<usize>> {
    let mut ways: Vec<Vec<Vec<usize>>> = vec![Vec::new(); s.len() + 1];
    ways[0].push(Vec::new());
    for end in 1..=s.len() {
        for (mu, name) in names.iter().enumerate() {
            if end >= name.len() && s[..end].ends_with(name.as_str()) {
                let prev = ways[end - name.len()].clone();
                for mut w in prev {
                    w.push(mu);
                    ways[end].push(w);
                    if ways[end].len() > 2 {
                        break;
                    }
                }
            }
        }
    }
    ways.pop().unwrap_or_default()
}

fn is_plain_name(s: &str) -> bool {
    !s.contains('_')
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

struct Names<'a> {
    base: &'a [String],
    fields: &'a [String],
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, expected: &[&str]) -> Result<T, InputError> {
        let t = self.peek();
        Err(InputError::Parse {
            line: t.line,
            col: t.col,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: t.tok.describe(),
        })
    }

    fn eat_sym(&mut self, c: char) -> bool {
        if self.peek().tok == Tok::Sym(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, c: char) -> Result<(), InputError> {
        if self.eat_sym(c) {
            Ok(())
        } else {
            self.error(&[&format!("`{c}`")])
        }
    }

    fn at_statement_end(&self) -> bool {
        matches!(self.peek().tok, Tok::Newline | Tok::Eof | Tok::Sym(';'))
    }

    fn end_statement(&mut self) -> Result<(), InputError> {
        if self.at_statement_end() {
            if self.peek().tok != Tok::Eof {
                self.bump();
            }
            Ok(())
        } else {
            self.error(&["end of statement"])
        }
    }

    fn names(&mut self, what: &str) -> Result<Vec<(String, usize, usize)>, InputError> {
        let mut out = Vec::new();
        while let Tok::Ident(s) = &self.peek().tok {
            let t = self.peek().clone();
            if !is_plain_name(s) || RESERVED.contains(&s.as_str()) {
                return Err(InputError::Invalid {
                    line: t.line,
                    col: t.col,
                    code: "E_RESERVED",
                    message: format!("`{s}` cannot be declared as a {what} name"),
                });
            }
            out.push((s.clone(), t.line, t.col));
            self.bump();
        }
        if out.is_empty() {
            return self.error(&[&format!("{what} name")]);
        }
        Ok(out)
    }

    fn string(&mut self) -> Result<String, InputError> {
        match self.peek().tok.clone() {
            Tok::Str(s) => {
                self.bump();
                Ok(s)
            }
            _ => self.error(&["string"]),
        }
    }

    fn expr(&mut self, names: &Names) -> Result<Poly, InputError> {
        let mut acc = self.term(names)?;
        loop {
            if self.eat_sym('+') {
                acc += &self.term(names)?;
            } else if self.eat_sym('-') {
                acc -= &self.term(names)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn starts_primary(&self) -> bool {
        matches!(self.peek().tok, Tok::Int(_) | Tok::Ident(_) | Tok::Sym('('))
    }

    fn term(&mut self, names: &Names) -> Result<Poly, InputError> {
        let mut acc = self.factor(names)?;
        loop {
            if self.eat_sym('*') {
                acc = &acc * &self.factor(names)?;
            } else if self.peek().tok == Tok::Sym('/') {
                self.bump();
                let at = self.peek().clone();
                let d = self.factor(names)?;
                match d.as_constant() {
                    Some(c) if !c.is_zero() => acc = acc.scale(&c.recip()),
                    _ => {
                        return Err(InputError::Invalid {
                            line: at.line,
                            col: at.col,
                            code: "E_DIVISION",
                            message: "division is only allowed by a nonzero constant".into(),
                        })
                    }
                }
            } else if self.starts_primary() {
                acc = &acc * &self.factor(names)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self, names: &Names) -> Result<Poly, InputError> {
        if self.eat_sym('-') {
            return Ok(-self.factor(names)?);
        }
        if self.eat_sym('+') {
            return self.factor(names);
        }
        let base = self.primary(names)?;
        if self.eat_sym('^') {
            let t = self.peek().clone();
            let Tok::Int(s) = &t.tok else {
                return self.error(&["exponent"]);
            };
            let e = s.parse::<u32>().ok().filter(|&e| e <= MAX_EXPONENT).ok_or_else(|| {
                InputError::Invalid {
                    line: t.line,
                    col: t.col,
                    code: "E_EXPONENT",
                    message: format!("exponent must be at most {MAX_EXPONENT}"),
                }
            })?;
            self.bump();
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn primary(&mut self, names: &Names) -> Result<Poly, InputError> {
        let t = self.peek().clone();
        match &t.tok {
            Tok::Int(s) => {
                self.bump();
                let c: Rational = s.parse().expect("digits parse as an integer");
                Ok(Poly::constant(c))
            }
            Tok::Sym('(') => {
                self.bump();
                let p = self.expr(names)?;
                self.expect_sym(')')?;
                Ok(p)
            }
            Tok::Ident(s) if s == "d" => {
                self.bump();
                self.expect_sym('(')?;
                let field = self.field_ref(names)?;
                self.expect_sym(';')?;
                let idx = self.counts(names.base.len())?;
                Ok(Poly::var(VarRef::Jet(field, idx)))
            }
            Tok::Ident(s) => {
                self.bump();
                resolve(s, t.line, t.col, names).map(Poly::var)
            }
            _ => self.error(&["number", "name", "`(`"]),
        }
    }

    fn field_ref(&mut self, names: &Names) -> Result<usize, InputError> {
        let t = self.peek().clone();
        let Tok::Ident(s) = &t.tok else {
            return self.error(&["field name"]);
        };
        self.bump();
        names.fields.iter().position(|f| f == s).ok_or(InputError::UndeclaredName {
            line: t.line,
            col: t.col,
            name: s.clone(),
        })
    }

    /// `int ("," int)* ")"` with exactly `n` entries; the opening
    /// parenthesis is already consumed.
    fn counts(&mut self, n: usize) -> Result<MultiIndex, InputError> {
        let start = self.peek().clone();
        let mut counts = Vec::new();
        loop {
            let t = self.peek().clone();
            let Tok::Int(s) = &t.tok else {
                return self.error(&["derivative count"]);
            };
            let c = s.parse::<u32>().ok().filter(|&c| c <= MAX_EXPONENT).ok_or_else(|| {
                InputError::Invalid {
                    line: t.line,
                    col: t.col,
                    code: "E_INDEX",
                    message: format!("derivative count must be at most {MAX_EXPONENT}"),
                }
            })?;
            self.bump();
            counts.push(c);
            if !self.eat_sym(',') {
                break;
            }
        }
        self.expect_sym(')')?;
        if counts.len() != n {
            return Err(InputError::Invalid {
                line: start.line,
                col: start.col,
                code: "E_INDEX",
                message: format!("multi-index needs {n} counts, got {}", counts.len()),
            });
        }
        Ok(MultiIndex::from_counts(counts))
    }

    /// Block index after `F[field,`: coordinate letters or `(counts)`.
    fn block_index(&mut self, names: &Names) -> Result<MultiIndex, InputError> {
        let t = self.peek().clone();
        match &t.tok {
            Tok::Sym('(') => {
                self.bump();
                self.counts(names.base.len())
            }
            Tok::Ident(s) => {
                self.bump();
                suffix_index(s, t.line, t.col, names.base)
            }
            _ => self.error(&["coordinate", "`(`"]),
        }
    }
}

fn suffix_index(suffix: &str, line: usize, col: usize, base: &[String]) -> Result<MultiIndex, InputError> {
    let ways = segmentations(suffix, base);
    match ways.as_slice() {
        [] => Err(InputError::UndeclaredName { line, col, name: suffix.to_string() }),
        [dirs] => {
            let mut idx = MultiIndex::zero(base.len());
            for &mu in dirs {
                idx = idx.raised(mu);
            }
            Ok(idx)
        }
        _ => Err(InputError::Invalid {
            line,
            col,
            code: "E_AMBIGUOUS_JET",
            message: format!("`{suffix}` splits into coordinate names in more than one way; use d(field; counts)"),
        }),
    }
}

fn resolve(token: &str, line: usize, col: usize, names: &Names) -> Result<VarRef, InputError> {
    let n = names.base.len();
    let undeclared = || InputError::UndeclaredName { line, col, name: token.to_string() };
    match token.split_once('_') {
        None => {
            if let Some(mu) = names.base.iter().position(|b| b == token) {
                Ok(VarRef::Base(mu))
            } else if let Some(i) = names.fields.iter().position(|f| f == token) {
                Ok(VarRef::field(i, n))
            } else {
                Err(undeclared())
            }
        }
        Some((field, suffix)) => {
            let i = names.fields.iter().position(|f| f == field).ok_or_else(undeclared)?;
            if suffix.is_empty() || suffix.contains('_') {
                return Err(undeclared());
            }
            let idx = suffix_index(suffix, line, col + field.len() + 1, names.base)?;
            Ok(VarRef::Jet(i, idx))
        }
    }
}

const STATEMENTS: &[&str] = &["`base`", "`fields`", "`density`", "`F[`", "`Pi[`", "`title`", "`note`"];

/// Parses a system file.
pub fn parse_system(text: &str) -> Result<SystemDocument, InputError> {
    let mut p = Parser { toks: lex(text)?, pos: 0 };
    let mut title = None;
    let mut notes = Vec::new();
    let mut base: Option<Vec<String>> = None;
    let mut fields: Option<Vec<String>> = None;
    let mut density: Option<(Poly, usize, usize)> = None;
    let mut flux = BTreeMap::new();
    let mut sources = BTreeMap::new();
    let mut higher = BTreeMap::new();
    let empty: Vec<String> = Vec::new();

    loop {
        let t = p.peek().clone();
        let kw = match &t.tok {
            Tok::Eof => break,
            Tok::Newline | Tok::Sym(';') => {
                p.bump();
                continue;
            }
            Tok::Ident(s) => s.clone(),
            _ => return p.error(STATEMENTS),
        };
        let duplicate = |what: &str| InputError::DuplicateRelation {
            line: t.line,
            col: t.col,
            what: what.to_string(),
        };
        let needs_chart = |b: &Option<Vec<String>>, f: &Option<Vec<String>>| {
            if b.is_none() || f.is_none() {
                Err(InputError::Invalid {
                    line: t.line,
                    col: t.col,
                    code: "E_MISSING_CHART",
                    message: "`base` and `fields` must be declared first".into(),
                })
            } else {
                Ok(())
            }
        };
        p.bump();
        match kw.as_str() {
            "title" => {
                if title.is_some() {
                    return Err(duplicate("`title`"));
                }
                title = Some(p.string()?);
            }
            "note" => notes.push(p.string()?),
            "base" => {
                if base.is_some() {
                    return Err(duplicate("`base`"));
                }
                base = Some(p.names("coordinate")?.into_iter().map(|n| n.0).collect());
            }
            "fields" => {
                if fields.is_some() {
                    return Err(duplicate("`fields`"));
                }
                fields = Some(p.names("field")?.into_iter().map(|n| n.0).collect());
            }
            "density" => {
                needs_chart(&base, &fields)?;
                if density.is_some() {
                    return Err(duplicate("`density`"));
                }
                p.eat_sym('=');
                let names = Names { base: base.as_deref().unwrap_or(&empty), fields: fields.as_deref().unwrap_or(&empty) };
                density = Some((p.expr(&names)?, t.line, t.col));
            }
            "F" => {
                needs_chart(&base, &fields)?;
                let names = Names { base: base.as_deref().unwrap_or(&empty), fields: fields.as_deref().unwrap_or(&empty) };
                p.expect_sym('[')?;
                let i = p.field_ref(&names)?;
                p.expect_sym(',')?;
                let idx = p.block_index(&names)?;
                p.expect_sym(']')?;
                p.expect_sym('=')?;
                let e = p.expr(&names)?;
                let what = format!("F[{}]", names.fields[i]);
                match idx.order() {
                    0 => {
                        return Err(InputError::Invalid {
                            line: t.line,
                            col: t.col,
                            code: "E_INDEX",
                            message: "zero-order blocks are written Pi[field]".into(),
                        })
                    }
                    1 => {
                        let mu = idx.directions()[0];
                        if flux.insert((i, mu), e).is_some() {
                            return Err(duplicate(&format!("{what} along `{}`", names.base[mu])));
                        }
                    }
                    _ => {
                        if higher.insert((i, idx.clone()), e).is_some() {
                            return Err(duplicate(&format!("{what} with index {idx}")));
                        }
                    }
                }
            }
            "Pi" => {
                needs_chart(&base, &fields)?;
                let names = Names { base: base.as_deref().unwrap_or(&empty), fields: fields.as_deref().unwrap_or(&empty) };
                p.expect_sym('[')?;
                let i = p.field_ref(&names)?;
                p.expect_sym(']')?;
                p.expect_sym('=')?;
                let e = p.expr(&names)?;
                if sources.insert(i, e).is_some() {
                    return Err(duplicate(&format!("Pi[{}]", names.fields[i])));
                }
            }
            _ => {
                p.pos -= 1;
                return p.error(STATEMENTS);
            }
        }
        p.end_statement()?;
    }

    let (Some(base), Some(fields)) = (base, fields) else {
        return Err(InputError::Invalid {
            line: 1,
            col: 1,
            code: "E_MISSING_CHART",
            message: "a system needs `base` and `fields` declarations".into(),
        });
    };
    let (rho, line, col) = density.unwrap_or((Poly::one(), 1, 1));
    let chart = ChartSpec::with_density(base, fields, rho).map_err(|e| InputError::Invalid {
        line,
        col,
        code: "E_CHART",
        message: e.to_string(),
    })?;
    Ok(SystemDocument { title, notes, chart, flux, sources, higher })
}

/// Parses a section file: one `field = expr` line per field, expressions
/// in the base coordinates only.
pub fn parse_section(text: &str, chart: &ChartSpec) -> Result<Vec<Poly>, InputError> {
    let mut p = Parser { toks: lex(text)?, pos: 0 };
    let no_fields: Vec<String> = Vec::new();
    let names = Names { base: chart.base_names(), fields: &no_fields };
    let mut parts: Vec<Option<Poly>> = vec![None; chart.m()];
    loop {
        let t = p.peek().clone();
        match &t.tok {
            Tok::Eof => break,
            Tok::Newline | Tok::Sym(';') => {
                p.bump();
                continue;
            }
            Tok::Ident(_) => {}
            _ => return p.error(&["field name"]),
        }
        let field_names = Names { base: chart.base_names(), fields: chart.field_names() };
        let i = p.field_ref(&field_names)?;
        p.expect_sym('=')?;
        let e = p.expr(&names)?;
        if parts[i].replace(e).is_some() {
            return Err(InputError::DuplicateRelation {
                line: t.line,
                col: t.col,
                what: format!("section component `{}`", chart.field_names()[i]),
            });
        }
        p.end_statement()?;
    }
    parts
        .into_iter()
        .enumerate()
        .map(|(i, p)| {
            p.ok_or_else(|| InputError::Usage {
                code: "E_SECTION",
                message: format!("section gives no value for field `{}`", chart.field_names()[i]),
            })
        })
        .collect()
}
