//! Bra-ket expressions such as `(1/sqrt(2))|00> + (1/sqrt(2))|11>`.
//!
//! Coefficients use decimals, `i`, `sqrt(...)`, parentheses, `*`, `/`,
//! unary minus and Grassmann symbols `g<k>` / `g<k>#`. Juxtaposition
//! multiplies, so `(1/sqrt(8))(|000> + |111>)` is accepted.

use num_complex::Complex64;
use thiserror::Error;

use crate::grassmann::{AlgebraContext, GrassmannError, GrassmannNumber};
use crate::states::{ket_count, ket_index, StateError, SuperState};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("syntax error at {position}: expected {}, found {found}", expected.join(" or "))]
    SyntaxError { position: usize, expected: Vec<String>, found: String },
    #[error("ket |{label}> has {found} slots, expected {expected}")]
    LengthMismatch { label: String, expected: usize, found: usize },
    #[error("parity violation at ket |{ket}>")]
    ParityViolation { ket: String },
    #[error("cannot evaluate at {position}: {message}")]
    Eval { position: usize, message: String },
}

impl ParseError {
    pub fn kind(&self) -> &'static str {
        match self {
            ParseError::SyntaxError { .. } => "SyntaxError",
            ParseError::LengthMismatch { .. } => "LengthMismatch",
            ParseError::ParityViolation { .. } => "ParityViolation",
            ParseError::Eval { .. } => "EvalError",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    I,
    Sqrt,
    Gen(usize, bool),
    Ket(String),
    Plus,
    Minus,
    Star,
    Slash,
    LParen,
    RParen,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(x) => format!("number {x}"),
            Tok::I => "'i'".into(),
            Tok::Sqrt => "'sqrt'".into(),
            Tok::Gen(k, s) => format!("'g{k}{}'", if *s { "#" } else { "" }),
            Tok::Ket(l) => format!("'|{l}>'"),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Slash => "'/'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::End => "end of input".into(),
        }
    }

    fn starts_atom(&self) -> bool {
        matches!(self, Tok::Num(_) | Tok::I | Tok::Sqrt | Tok::Gen(..) | Tok::Ket(_) | Tok::LParen)
    }
}

fn syntax(position: usize, expected: &[&str], found: String) -> ParseError {
    ParseError::SyntaxError { position, expected: expected.iter().map(|s| s.to_string()).collect(), found }
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut k = 0;
    while k < chars.len() {
        let (pos, ch) = chars[k];
        match ch {
            c if c.is_whitespace() => k += 1,
            '+' | '-' | '*' | '/' | '(' | ')' => {
                let tok = match ch {
                    '+' => Tok::Plus,
                    '-' => Tok::Minus,
                    '*' => Tok::Star,
                    '/' => Tok::Slash,
                    '(' => Tok::LParen,
                    _ => Tok::RParen,
                };
                out.push((pos, tok));
                k += 1;
            }
            '|' => {
                let mut label = String::new();
                k += 1;
                while k < chars.len() && matches!(chars[k].1, '0' | '1' | '*' | '•') {
                    label.push(if chars[k].1 == '•' { '*' } else { chars[k].1 });
                    k += 1;
                }
                match chars.get(k) {
                    Some((_, '>')) if !label.is_empty() => {
                        out.push((pos, Tok::Ket(label)));
                        k += 1;
                    }
                    Some((p, c)) => {
                        let expected: &[&str] = if label.is_empty() { &["'0'", "'1'", "'*'"] } else { &["'0'", "'1'", "'*'", "'>'"] };
                        return Err(syntax(*p, expected, format!("{c:?}")));
                    }
                    None => return Err(syntax(text.len(), &["'>'"], "end of input".into())),
                }
            }
            c if c.is_ascii_digit() || c == '.' => {
                let start = k;
                while k < chars.len() && (chars[k].1.is_ascii_digit() || chars[k].1 == '.') {
                    k += 1;
                }
                if k < chars.len() && matches!(chars[k].1, 'e' | 'E') {
                    let mut j = k + 1;
                    if j < chars.len() && matches!(chars[j].1, '+' | '-') {
                        j += 1;
                    }
                    if j < chars.len() && chars[j].1.is_ascii_digit() {
                        k = j;
                        while k < chars.len() && chars[k].1.is_ascii_digit() {
                            k += 1;
                        }
                    }
                }
                let end = chars.get(k).map_or(text.len(), |c| c.0);
                let lit = &text[pos..end];
                let value = lit.parse::<f64>().map_err(|_| syntax(chars[start].0, &["number"], format!("{lit:?}")))?;
                out.push((pos, Tok::Num(value)));
            }
            c if c.is_ascii_alphabetic() => {
                while k < chars.len() && chars[k].1.is_ascii_alphabetic() {
                    k += 1;
                }
                let end = chars.get(k).map_or(text.len(), |c| c.0);
                match &text[pos..end] {
                    "i" => out.push((pos, Tok::I)),
                    "sqrt" => out.push((pos, Tok::Sqrt)),
                    "g" => {
                        let dstart = k;
                        while k < chars.len() && chars[k].1.is_ascii_digit() {
                            k += 1;
                        }
                        if k == dstart {
                            let found = chars.get(k).map_or("end of input".to_string(), |c| format!("{:?}", c.1));
                            return Err(syntax(chars.get(k).map_or(text.len(), |c| c.0), &["generator index"], found));
                        }
                        let dend = chars.get(k).map_or(text.len(), |c| c.0);
                        let index: usize = text[chars[dstart].0..dend]
                            .parse()
                            .map_err(|_| syntax(chars[dstart].0, &["generator index"], "overflow".into()))?;
                        let star = chars.get(k).is_some_and(|c| c.1 == '#');
                        if star {
                            k += 1;
                        }
                        out.push((pos, Tok::Gen(index, star)));
                    }
                    word => {
                        return Err(syntax(pos, &["'i'", "'sqrt'", "'g<k>'"], format!("{word:?}")));
                    }
                }
            }
            c => return Err(syntax(pos, &["coefficient", "'|'"], format!("{c:?}"))),
        }
    }
    out.push((text.len(), Tok::End));
    Ok(out)
}

#[derive(Debug, Clone)]
enum Val {
    Scalar(GrassmannNumber),
    Kets(Vec<GrassmannNumber>),
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    ctx: AlgebraContext,
    n: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].1
    }

    fn pos(&self) -> usize {
        self.toks[self.at].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].1.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn eval_err(&self, position: usize, message: impl Into<String>) -> ParseError {
        ParseError::Eval { position, message: message.into() }
    }

    fn expr(&mut self) -> Result<Val, ParseError> {
        let mut acc = self.term()?;
        loop {
            let sub = match self.peek() {
                Tok::Plus => false,
                Tok::Minus => true,
                _ => return Ok(acc),
            };
            let pos = self.pos();
            self.bump();
            let rhs = self.term()?;
            let rhs = if sub { self.negate(rhs) } else { rhs };
            acc = self.add(acc, rhs, pos)?;
        }
    }

    fn term(&mut self) -> Result<Val, ParseError> {
        let mut acc = self.unary()?;
        loop {
            let pos = self.pos();
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    let rhs = self.unary()?;
                    acc = self.mul(acc, rhs, pos)?;
                }
                Tok::Slash => {
                    self.bump();
                    let rhs = self.unary()?;
                    acc = self.div(acc, rhs, pos)?;
                }
                t if t.starts_atom() => {
                    let rhs = self.unary()?;
                    acc = self.mul(acc, rhs, pos)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Val, ParseError> {
        match self.peek() {
            Tok::Minus => {
                self.bump();
                let v = self.unary()?;
                Ok(self.negate(v))
            }
            Tok::Plus => {
                self.bump();
                self.unary()
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Val, ParseError> {
        let pos = self.pos();
        let ctx = self.ctx;
        match self.bump() {
            Tok::Num(x) => Ok(Val::Scalar(GrassmannNumber::real(ctx, x))),
            Tok::I => Ok(Val::Scalar(GrassmannNumber::scalar(ctx, Complex64::new(0.0, 1.0)))),
            Tok::Gen(k, star) => {
                let g = GrassmannNumber::generator(ctx, 2 * k + usize::from(star))
                    .map_err(|e| self.eval_err(pos, e.to_string()))?;
                Ok(Val::Scalar(g))
            }
            Tok::Ket(label) => {
                if label.chars().count() != self.n {
                    return Err(ParseError::LengthMismatch { found: label.chars().count(), expected: self.n, label });
                }
                let symbols: Vec<u8> = label.chars().map(|c| match c {
                    '0' => 0,
                    '1' => 1,
                    _ => 2,
                }).collect();
                let mut kets = vec![GrassmannNumber::zero(ctx); ket_count(self.n)];
                kets[ket_index(&symbols)] = GrassmannNumber::one(ctx);
                Ok(Val::Kets(kets))
            }
            Tok::Sqrt => {
                self.expect(Tok::LParen, "'('")?;
                let inner = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                match inner {
                    Val::Scalar(s) => s.sqrt().map(Val::Scalar).map_err(|e| self.eval_err(pos, e.to_string())),
                    Val::Kets(_) => Err(self.eval_err(pos, "sqrt of a state")),
                }
            }
            Tok::LParen => {
                let inner = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(inner)
            }
            other => {
                self.at -= usize::from(other != Tok::End);
                Err(syntax(pos, &["number", "'i'", "'sqrt'", "'g<k>'", "'('", "'|'"], other.describe()))
            }
        }
    }

    fn expect(&mut self, tok: Tok, name: &str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(syntax(self.pos(), &[name], self.peek().describe()))
        }
    }

    fn negate(&self, v: Val) -> Val {
        match v {
            Val::Scalar(s) => Val::Scalar(-s),
            Val::Kets(k) => Val::Kets(k.into_iter().map(|c| -c).collect()),
        }
    }

    fn add(&self, a: Val, b: Val, pos: usize) -> Result<Val, ParseError> {
        match (a, b) {
            (Val::Scalar(x), Val::Scalar(y)) => Ok(Val::Scalar(x + y)),
            (Val::Kets(x), Val::Kets(y)) => Ok(Val::Kets(x.into_iter().zip(y).map(|(p, q)| p + q).collect())),
            _ => Err(self.eval_err(pos, "cannot add a number to a state")),
        }
    }

    fn mul(&self, a: Val, b: Val, pos: usize) -> Result<Val, ParseError> {
        match (a, b) {
            (Val::Scalar(x), Val::Scalar(y)) => Ok(Val::Scalar(x * y)),
            (Val::Scalar(x), Val::Kets(k)) => Ok(Val::Kets(k.iter().map(|c| &x * c).collect())),
            (Val::Kets(_), Val::Scalar(_)) => Err(self.eval_err(pos, "coefficients go to the left of kets")),
            (Val::Kets(_), Val::Kets(_)) => Err(self.eval_err(pos, "cannot multiply two states")),
        }
    }

    fn div(&self, a: Val, b: Val, pos: usize) -> Result<Val, ParseError> {
        let inv = match b {
            Val::Scalar(y) => y.inverse().map_err(|e: GrassmannError| self.eval_err(pos, e.to_string()))?,
            Val::Kets(_) => return Err(self.eval_err(pos, "cannot divide by a state")),
        };
        match a {
            Val::Scalar(x) => Ok(Val::Scalar(x * inv)),
            Val::Kets(k) => Ok(Val::Kets(k.iter().map(|c| &inv * c).collect())),
        }
    }
}

/// Parses a state; `n` defaults to the length of the first ket label. The
/// context holds one pair per symbol index used plus one pair per superqubit.
pub fn parse_state(text: &str, n: Option<usize>) -> Result<SuperState, ParseError> {
    let toks = tokenize(text)?;
    let max_gen = toks.iter().filter_map(|(_, t)| if let Tok::Gen(k, _) = t { Some(*k + 1) } else { None }).max();
    let first_len = toks.iter().find_map(|(_, t)| if let Tok::Ket(l) = t { Some(l.chars().count()) } else { None });
    let n = match (n, first_len) {
        (Some(n), _) => n,
        (None, Some(len)) => len,
        (None, None) => return Err(syntax(text.len(), &["'|'"], "no kets".into())),
    };
    let pairs = (max_gen.unwrap_or(0) + n).clamp(1, 32);
    parse_state_in(text, n, AlgebraContext::new(pairs))
}

/// Parses a state into a given context.
pub fn parse_state_in(text: &str, n: usize, ctx: AlgebraContext) -> Result<SuperState, ParseError> {
    let toks = tokenize(text)?;
    let mut p = Parser { toks, at: 0, ctx, n };
    let value = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(syntax(p.pos(), &["'+'", "'-'", "'*'", "'/'", "end of input"], p.peek().describe()));
    }
    let coeffs = match value {
        Val::Kets(k) => k,
        Val::Scalar(_) => return Err(syntax(text.len(), &["'|'"], "a number without kets".into())),
    };
    SuperState::new(n, ctx, 0, coeffs).map_err(|e| match e {
        StateError::ParityViolation { ket } => ParseError::ParityViolation { ket },
        other => ParseError::Eval { position: 0, message: other.to_string() },
    })
}
