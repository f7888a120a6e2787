//! Text grammars: series and polynomials, symbol products, discriminant
//! lists, and batch files.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary ('*' unary)*
//! unary   := '-' unary | power
//! power   := atom ('^' exponent)?
//! atom    := integer | variable | '(' expr ')'
//! symbols := symbol ('*' symbol)*
//! symbol  := '{' frac ';' frac '}' ('^' signed)?
//! frac    := expr ('/' expr)?
//! ```

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::padic::PadicRing;
use crate::powerseries::{SeriesRing, TruncatedSeries, UniPoly};

/// Largest accepted exponent in `^`; larger ones only produce zero series or
/// enormous polynomials.
pub const MAX_EXPONENT: u32 = 4096;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Int(BigInt),
    /// Zero-based variable index (`t` and `t1` are both index 0).
    Var(usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

impl Expr {
    /// Largest variable index used, if any.
    pub fn max_var(&self) -> Option<usize> {
        match self {
            Expr::Int(_) => None,
            Expr::Var(i) => Some(*i),
            Expr::Neg(a) | Expr::Pow(a, _) => a.max_var(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => a.max_var().max(b.max_var()),
        }
    }
}

/// Fraction `num / den` of two expressions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FracExpr {
    pub num: Expr,
    pub den: Option<Expr>,
}

/// One parsed `{f ; g}^e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolExpr {
    pub f: FracExpr,
    pub g: FracExpr,
    pub exponent: i64,
}

fn parse_error(column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line: 1,
        column,
        message: message.into(),
    }
}

/// Shift a single-line parse error to a position inside a larger document.
pub fn relocate(err: Error, line: usize, column_offset: usize) -> Error {
    match err {
        Error::Parse {
            column, message, ..
        } => Error::Parse {
            line,
            column: column + column_offset,
            message,
        },
        other => other,
    }
}

/// Variable names of series text: `t` and `t1` are the same variable.
pub const SERIES_VARS: &[(&str, usize)] = &[("t", 0), ("t1", 0), ("t2", 1), ("t3", 2)];
/// Variable names of polynomials over `F_p`.
pub const POLY_VARS: &[(&str, usize)] = &[("x", 0), ("y", 1), ("z", 2)];

struct Parser {
    chars: Vec<char>,
    pos: usize,
    vars: &'static [(&'static str, usize)],
}

impl Parser {
    fn new(src: &str, vars: &'static [(&'static str, usize)]) -> Self {
        Parser {
            chars: src.chars().collect(),
            pos: 0,
            vars,
        }
    }

    fn column(&self) -> usize {
        self.pos + 1
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

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.unexpected(&format!("expected '{c}'")))
        }
    }

    fn unexpected(&mut self, what: &str) -> Error {
        let col = {
            self.skip_ws();
            self.column()
        };
        match self.chars.get(self.pos) {
            Some(c) => parse_error(col, format!("{what}, found '{c}'")),
            None => parse_error(col, format!("{what}, found end of input")),
        }
    }

    fn finish(&mut self) -> Result<()> {
        if self.peek().is_some() {
            Err(self.unexpected("unexpected trailing input"))
        } else {
            Ok(())
        }
    }

    fn digits(&mut self) -> Option<(String, usize)> {
        self.skip_ws();
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            None
        } else {
            Some((self.chars[start..self.pos].iter().collect(), start + 1))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        while self.eat('*') {
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.eat('^') {
            let e = self.exponent()?;
            return Ok(Expr::Pow(Box::new(base), e));
        }
        Ok(base)
    }

    fn exponent(&mut self) -> Result<u32> {
        let parenthesised = self.eat('(');
        let Some((text, col)) = self.digits() else {
            return Err(self.unexpected("malformed exponent: expected a non-negative integer"));
        };
        let e: u32 = text
            .parse()
            .ok()
            .filter(|&e| e <= MAX_EXPONENT)
            .ok_or_else(|| parse_error(col, format!("exponent exceeds {MAX_EXPONENT}")))?;
        if parenthesised {
            self.expect(')')?;
        }
        Ok(e)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let col = self.column();
                let start = self.pos;
                while self
                    .chars
                    .get(self.pos)
                    .is_some_and(|c| c.is_ascii_alphanumeric())
                {
                    self.pos += 1;
                }
                let name: String = self.chars[start..self.pos].iter().collect();
                self.vars
                    .iter()
                    .find(|(n, _)| *n == name)
                    .map(|&(_, i)| Expr::Var(i))
                    .ok_or_else(|| parse_error(col, format!("unknown variable '{name}'")))
            }
            Some(c) if c.is_ascii_digit() => {
                let (text, _) = self.digits().expect("digit present");
                Ok(Expr::Int(text.parse().expect("decimal digits")))
            }
            _ => Err(self.unexpected("expected an integer, a variable or '('")),
        }
    }

    fn frac(&mut self) -> Result<FracExpr> {
        let num = self.expr()?;
        let den = if self.eat('/') {
            Some(self.expr()?)
        } else {
            None
        };
        Ok(FracExpr { num, den })
    }

    fn signed(&mut self) -> Result<i64> {
        let parenthesised = self.eat('(');
        let neg = self.eat('-');
        let Some((text, col)) = self.digits() else {
            return Err(self.unexpected("malformed exponent: expected an integer"));
        };
        let v: i64 = text
            .parse()
            .ok()
            .filter(|&v: &i64| v <= MAX_EXPONENT as i64)
            .ok_or_else(|| parse_error(col, format!("exponent exceeds {MAX_EXPONENT}")))?;
        if parenthesised {
            self.expect(')')?;
        }
        Ok(if neg { -v } else { v })
    }

    fn symbol(&mut self) -> Result<SymbolExpr> {
        self.expect('{')?;
        let f = self.frac()?;
        self.expect(';')?;
        let g = self.frac()?;
        self.expect('}')?;
        let exponent = if self.eat('^') { self.signed()? } else { 1 };
        Ok(SymbolExpr { f, g, exponent })
    }

    fn symbols(&mut self) -> Result<Vec<SymbolExpr>> {
        let mut out = vec![self.symbol()?];
        while self.eat('*') {
            out.push(self.symbol()?);
        }
        Ok(out)
    }
}

/// Parse an expression without interpreting it in a ring.
pub fn parse_expr(text: &str) -> Result<Expr> {
    parse_expr_in(text, SERIES_VARS)
}

/// Parse an expression over the given variable names.
pub fn parse_expr_in(text: &str, vars: &'static [(&'static str, usize)]) -> Result<Expr> {
    let mut p = Parser::new(text, vars);
    let e = p.expr()?;
    p.finish()?;
    Ok(e)
}

/// Parse a product of Steinberg symbols such as `{t ; 5}^-1 * {t-5 ; 1/(1+t)}`.
pub fn parse_symbols(text: &str) -> Result<Vec<SymbolExpr>> {
    let mut p = Parser::new(text, SERIES_VARS);
    let s = p.symbols()?;
    p.finish()?;
    Ok(s)
}

fn reduce_big(n: &BigInt, modulus: u64) -> i128 {
    let m = BigInt::from(modulus);
    let mut r = n % &m;
    if r.is_negative() {
        r += &m;
    }
    r.to_i128().expect("reduced below the modulus")
}

/// Interpret an expression in a series ring.
pub fn eval_series(ring: &SeriesRing, e: &Expr) -> Result<TruncatedSeries> {
    Ok(match e {
        Expr::Int(n) => ring.from_int(reduce_big(n, ring.base().modulus())),
        Expr::Var(i) => ring.var(*i)?,
        Expr::Neg(a) => eval_series(ring, a)?.neg(),
        Expr::Add(a, b) => eval_series(ring, a)?.add(&eval_series(ring, b)?)?,
        Expr::Sub(a, b) => eval_series(ring, a)?.sub(&eval_series(ring, b)?)?,
        Expr::Mul(a, b) => eval_series(ring, a)?.mul(&eval_series(ring, b)?)?,
        Expr::Pow(a, k) => eval_series(ring, a)?.pow(*k as u64),
    })
}

/// Interpret an expression as an exact univariate polynomial in `t`.
pub fn eval_poly(ring: &PadicRing, e: &Expr) -> Result<UniPoly> {
    Ok(match e {
        Expr::Int(n) => UniPoly::from_ints(ring, &[reduce_big(n, ring.modulus())]),
        Expr::Var(0) => UniPoly::monomial(ring, 1),
        Expr::Var(i) => {
            return Err(Error::invalid(format!(
                "polynomial must be in t alone, found t{}",
                i + 1
            )))
        }
        Expr::Neg(a) => eval_poly(ring, a)?.neg(),
        Expr::Add(a, b) => eval_poly(ring, a)?.add(&eval_poly(ring, b)?),
        Expr::Sub(a, b) => eval_poly(ring, a)?.sub(&eval_poly(ring, b)?),
        Expr::Mul(a, b) => eval_poly(ring, a)?.mul(&eval_poly(ring, b)?),
        Expr::Pow(a, k) => {
            let base = eval_poly(ring, a)?;
            if base.degree().unwrap_or(0) * (*k as usize) > 4 * MAX_EXPONENT as usize {
                return Err(Error::invalid("polynomial degree too large"));
            }
            let mut acc = UniPoly::constant(ring.one());
            for _ in 0..*k {
                acc = acc.mul(&base);
            }
            acc
        }
    })
}

/// Parse and interpret a series.
pub fn parse_series(ring: &SeriesRing, text: &str) -> Result<TruncatedSeries> {
    let e = parse_expr(text)?;
    if let Some(i) = e.max_var() {
        if i >= ring.vars() {
            return Err(Error::invalid(format!(
                "t{} used in a ring with {} variable(s)",
                i + 1,
                ring.vars()
            )));
        }
    }
    eval_series(ring, &e)
}

/// Parse and interpret a univariate polynomial exactly.
pub fn parse_poly(ring: &PadicRing, text: &str) -> Result<UniPoly> {
    eval_poly(ring, &parse_expr(text)?)
}

/// Parse a comma-separated list of integers such as `-3,-4,-7`.
pub fn parse_int_list(text: &str) -> Result<Vec<i64>> {
    let mut out = Vec::new();
    let mut col = 1;
    for piece in text.split(',') {
        let trimmed = piece.trim();
        let lead = piece.len() - piece.trim_start().len();
        match trimmed.parse::<i64>() {
            Ok(v) => out.push(v),
            Err(_) => {
                return Err(parse_error(
                    col + lead,
                    format!("expected an integer, found '{trimmed}'"),
                ))
            }
        }
        col += piece.chars().count() + 1;
    }
    Ok(out)
}

/// One token of a batch line, with its 1-based starting column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub text: String,
    pub column: usize,
}

/// One non-empty batch line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BatchLine {
    pub line: usize,
    pub tokens: Vec<Token>,
}

impl BatchLine {
    pub fn args(&self) -> Vec<String> {
        self.tokens.iter().map(|t| t.text.clone()).collect()
    }
}

/// Flags whose values are series expressions and are checked syntactically
/// while reading a batch file.
pub const SERIES_FLAGS: &[&str] = &["--f", "--g", "--f1", "--f2"];
pub const SYMBOL_FLAGS: &[&str] = &["--symbol"];
/// Flags holding `;`-separated height-one primes (`p` or a polynomial in `t`).
pub const PRIME_LIST_FLAGS: &[&str] = &["--primes", "--at"];

/// Split on `sep`, returning trimmed pieces with their 0-based start offsets.
fn split_with_offsets(text: &str, sep: char) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = 0;
    for piece in text.split(sep) {
        let lead = piece.len() - piece.trim_start().len();
        out.push((start + lead, piece.trim()));
        start += piece.len() + sep.len_utf8();
    }
    out
}

/// Comma-separated polynomials in `x, y, z`.
pub fn parse_poly_list(text: &str) -> Result<Vec<Expr>> {
    let mut out = Vec::new();
    for (offset, piece) in split_with_offsets(text, ',') {
        if piece.is_empty() {
            return Err(parse_error(offset + 1, "empty list entry"));
        }
        out.push(parse_expr_in(piece, POLY_VARS).map_err(|e| relocate(e, 1, offset))?);
    }
    Ok(out)
}

/// `;`-separated primes: `p` stands for `(p)` and is returned as `None`.
pub fn parse_prime_list(text: &str) -> Result<Vec<Option<Expr>>> {
    let mut out = Vec::new();
    for (offset, piece) in split_with_offsets(text, ';') {
        if piece.is_empty() {
            return Err(parse_error(offset + 1, "empty list entry"));
        }
        if piece == "p" || piece == "P" {
            out.push(None);
        } else {
            out.push(Some(parse_expr(piece).map_err(|e| relocate(e, 1, offset))?));
        }
    }
    Ok(out)
}

fn tokenize_line(text: &str, line: usize) -> Result<Vec<Token>> {
    let chars: Vec<char> = text.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        if chars[i].is_whitespace() {
            i += 1;
            continue;
        }
        if chars[i] == '#' {
            break;
        }
        let start = i;
        let mut buf = String::new();
        // Column of the token's first content character (inside quotes).
        let mut content_col = None;
        while i < chars.len() && !chars[i].is_whitespace() {
            if chars[i] == '"' {
                let open = i;
                i += 1;
                content_col.get_or_insert(i + 1);
                loop {
                    match chars.get(i) {
                        None => {
                            return Err(Error::Parse {
                                line,
                                column: open + 1,
                                message: "unterminated quote".into(),
                            })
                        }
                        Some('"') => {
                            i += 1;
                            break;
                        }
                        Some('\\') if matches!(chars.get(i + 1), Some('"') | Some('\\')) => {
                            buf.push(chars[i + 1]);
                            i += 2;
                        }
                        Some(&c) => {
                            buf.push(c);
                            i += 1;
                        }
                    }
                }
            } else {
                content_col.get_or_insert(i + 1);
                buf.push(chars[i]);
                i += 1;
            }
        }
        tokens.push(Token {
            text: buf,
            column: content_col.unwrap_or(start + 1),
        });
    }
    Ok(tokens)
}

/// Split a batch file into jobs: one per non-blank line, `#` starts a
/// comment, double quotes group words. Series and symbol arguments are parsed
/// here so that syntax errors are reported with their position in the file.
pub fn parse_batch(text: &str) -> Result<Vec<BatchLine>> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let tokens = tokenize_line(raw, line)?;
        if tokens.is_empty() {
            continue;
        }
        let polys = tokens[0].text == "ext-koszul";
        for pair in tokens.windows(2) {
            let (flag, value) = (&pair[0].text, &pair[1]);
            let offset = value.column - 1;
            if polys && flag == "--f" {
                parse_poly_list(&value.text).map_err(|e| relocate(e, line, offset))?;
            } else if PRIME_LIST_FLAGS.contains(&flag.as_str()) {
                parse_prime_list(&value.text).map_err(|e| relocate(e, line, offset))?;
            } else if SERIES_FLAGS.contains(&flag.as_str()) {
                parse_expr(&value.text).map_err(|e| relocate(e, line, offset))?;
            } else if SYMBOL_FLAGS.contains(&flag.as_str()) {
                parse_symbols(&value.text).map_err(|e| relocate(e, line, offset))?;
            } else if flag == "--kappa-discs" {
                parse_int_list(&value.text).map_err(|e| relocate(e, line, offset))?;
            }
        }
        out.push(BatchLine { line, tokens });
    }
    Ok(out)
}

impl std::fmt::Display for Expr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Expr::Int(n) => write!(f, "{n}"),
            Expr::Var(i) => write!(f, "t{}", i + 1),
            Expr::Neg(a) => write!(f, "-({a})"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
            Expr::Pow(a, k) => write!(f, "({a})^{k}"),
        }
    }
}

/// True when the expression is a literal zero (used to reject `{0 ; g}`).
pub fn is_literal_zero(e: &Expr) -> bool {
    matches!(e, Expr::Int(n) if n.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring() -> SeriesRing {
        SeriesRing::new(&PadicRing::new(5, 4).unwrap(), 1, 8).unwrap()
    }

    #[test]
    fn series_round_trip() {
        let r = ring();
        let f = parse_series(&r, "t^2 + 5*t + 25").unwrap();
        assert_eq!(f.canonical_string(), "t^2 + 5*t + 25");
        let g = parse_series(&r, "-(1+t)^2").unwrap();
        assert_eq!(g.canonical_string(), "-t^2 - 2*t - 1");
        // coefficients are reduced modulo p^N
        assert_eq!(parse_series(&r, "626").unwrap(), r.one());
        assert_eq!(
            parse_series(&r, "100000000000000000000000000000000000000001")
                .unwrap()
                .canonical_string(),
            "1"
        );
    }

    #[test]
    fn error_columns() {
        let r = ring();
        match parse_series(&r, "t^x + 1") {
            Err(Error::Parse {
                line: 1, column: 3, ..
            }) => {}
            other => panic!("{other:?}"),
        }
        match parse_series(&r, "(t + 1") {
            Err(Error::Parse { column: 7, .. }) => {}
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_series(&r, "t2"),
            Err(Error::InvalidInput(_))
        ));
        assert!(matches!(
            parse_series(&r, "tt"),
            Err(Error::Parse { column: 1, .. })
        ));
        assert!(matches!(
            parse_series(&r, ""),
            Err(Error::Parse { column: 1, .. })
        ));
    }

    #[test]
    fn symbols() {
        let s = parse_symbols("{t ; 5}^-1 * {t - 5; 1/(1+t)}").unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s[0].exponent, -1);
        assert_eq!(s[1].exponent, 1);
        assert!(s[1].g.den.is_some());
        assert!(matches!(
            parse_symbols("{t ; 5}^"),
            Err(Error::Parse { column: 9, .. })
        ));
        assert!(parse_symbols("{t, 5}").is_err());
    }

    #[test]
    fn int_lists() {
        assert_eq!(parse_int_list("-3, -4,-7").unwrap(), vec![-3, -4, -7]);
        assert!(matches!(
            parse_int_list("-3,x"),
            Err(Error::Parse { column: 4, .. })
        ));
    }

    #[test]
    fn batch_files() {
        assert!(parse_batch("").unwrap().is_empty());
        assert!(parse_batch("# only a comment\n\n").unwrap().is_empty());
        let jobs =
            parse_batch("prop29 --p 5 --prec 8 --trunc 16 --f1 \"t\" --f2 \"5\"  # c2\n").unwrap();
        assert_eq!(jobs.len(), 1);
        assert_eq!(jobs[0].args()[8], "t");
        assert_eq!(jobs[0].args().len(), 11);
        match parse_batch("\nchern1 --p 5 --prec 4 --trunc 8 --f \"t^ + 1\"") {
            Err(Error::Parse {
                line: 2,
                column: 41,
                ..
            }) => {}
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_batch("tame \"open"),
            Err(Error::Parse {
                line: 1,
                column: 6,
                ..
            })
        ));
        assert_eq!(
            parse_batch("ext-koszul --p 5 --vars 2 --f \"x^2, y^3\"")
                .unwrap()
                .len(),
            1
        );
        match parse_batch("chern1 --f t --primes \"p; t^2 -\"") {
            Err(Error::Parse {
                line: 1,
                column: 32,
                ..
            }) => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn lists() {
        assert_eq!(parse_poly_list("x^2, y").unwrap().len(), 2);
        assert!(matches!(
            parse_poly_list("x,,y"),
            Err(Error::Parse { column: 3, .. })
        ));
        assert!(matches!(
            parse_poly_list("x, t"),
            Err(Error::Parse { column: 4, .. })
        ));
        let primes = parse_prime_list("p ; t^2 - 5").unwrap();
        assert_eq!(primes[0], None);
        assert!(primes[1].is_some());
        assert!(matches!(
            parse_prime_list("p; t^"),
            Err(Error::Parse { column: 6, .. })
        ));
    }
}
