//! Expression grammar for functions and forms.
//!
//! Literals are Gaussian rationals (`3`, `1/2`, `i`, `2*i`). The angle
//! variables `t1..tn` appear only inside `sin(...)`, `cos(...)` and
//! `exp(i*(...))`, whose arguments are integer linear forms — a bare `t_j`
//! is not a ring element (not periodic), so the parser rejects it anywhere
//! else. `dt1..dtn` are the coordinate 1-forms.
//!
//! Operators: `^` (non-negative integer powers of degree-zero values) binds
//! tightest, then `*` (needs a degree-zero factor), then `+`/`-`, and the
//! wedge binds loosest (written `∧` or `/\`). Division exists only inside
//! rational literals; everything else about the grammar is rejected with a
//! line/column position.
//!
//! Printing a value with `Display` produces a string this parser maps back
//! to the same value.

use crate::form::DifferentialForm;
use crate::scalar::Scalar;
use crate::trig::TrigPoly;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(i64),
    Imag,
    Var(usize),
    Dt(usize),
    Sin,
    Cos,
    Exp,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Wedge,
    LParen,
    RParen,
    End,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn err_at(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, col, msg: msg.into() }
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer { chars: src.chars().peekable(), line: 1, col: 1 }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn tokens(mut self) -> Result<Vec<Token>> {
        let mut out = Vec::new();
        loop {
            while matches!(self.chars.peek(), Some(c) if c.is_whitespace()) {
                self.bump();
            }
            let (line, col) = (self.line, self.col);
            let Some(&c) = self.chars.peek() else {
                out.push(Token { tok: Tok::End, line, col });
                return Ok(out);
            };
            let tok = match c {
                '+' => {
                    self.bump();
                    Tok::Plus
                }
                '-' => {
                    self.bump();
                    Tok::Minus
                }
                '*' => {
                    self.bump();
                    Tok::Star
                }
                '^' => {
                    self.bump();
                    Tok::Caret
                }
                '(' => {
                    self.bump();
                    Tok::LParen
                }
                ')' => {
                    self.bump();
                    Tok::RParen
                }
                '∧' => {
                    self.bump();
                    Tok::Wedge
                }
                '/' => {
                    self.bump();
                    if self.chars.peek() == Some(&'\\') {
                        self.bump();
                        Tok::Wedge
                    } else {
                        Tok::Slash
                    }
                }
                '0'..='9' => {
                    let mut digits = String::new();
                    while matches!(self.chars.peek(), Some(c) if c.is_ascii_digit()) {
                        digits.push(self.bump().unwrap());
                    }
                    let n = digits
                        .parse::<i64>()
                        .map_err(|_| err_at(line, col, format!("integer {digits} out of range")))?;
                    Tok::Int(n)
                }
                c if c.is_ascii_alphabetic() => {
                    let mut word = String::new();
                    while matches!(self.chars.peek(), Some(c) if c.is_ascii_alphabetic()) {
                        word.push(self.bump().unwrap());
                    }
                    let mut digits = String::new();
                    while matches!(self.chars.peek(), Some(c) if c.is_ascii_digit()) {
                        digits.push(self.bump().unwrap());
                    }
                    match (word.as_str(), digits.as_str()) {
                        ("i", "") => Tok::Imag,
                        ("sin", "") => Tok::Sin,
                        ("cos", "") => Tok::Cos,
                        ("exp", "") => Tok::Exp,
                        ("t", d) if !d.is_empty() => {
                            let j: usize = d
                                .parse()
                                .map_err(|_| err_at(line, col, format!("bad index in t{d}")))?;
                            if j == 0 {
                                return Err(err_at(line, col, "variables are numbered from t1"));
                            }
                            Tok::Var(j - 1)
                        }
                        ("dt", d) if !d.is_empty() => {
                            let j: usize = d
                                .parse()
                                .map_err(|_| err_at(line, col, format!("bad index in dt{d}")))?;
                            if j == 0 {
                                return Err(err_at(line, col, "form symbols are numbered from dt1"));
                            }
                            Tok::Dt(j - 1)
                        }
                        _ => {
                            return Err(err_at(line, col, format!("unknown symbol {word}{digits}")))
                        }
                    }
                }
                other => return Err(err_at(line, col, format!("unexpected character {other:?}"))),
            };
            out.push(Token { tok, line, col });
        }
    }
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    dim: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<Token> {
        let t = self.next();
        if t.tok != tok {
            return Err(err_at(t.line, t.col, format!("expected {what}")));
        }
        Ok(t)
    }

    fn fail<T>(&self, msg: impl Into<String>) -> Result<T> {
        let t = self.peek();
        Err(err_at(t.line, t.col, msg))
    }

    // wedge binds loosest
    fn expr(&mut self) -> Result<DifferentialForm> {
        let mut acc = self.sum()?;
        while self.peek().tok == Tok::Wedge {
            self.next();
            let rhs = self.sum()?;
            acc = acc.wedge(&rhs)?;
        }
        Ok(acc)
    }

    fn sum(&mut self) -> Result<DifferentialForm> {
        let mut acc = match self.peek().tok {
            Tok::Minus => {
                self.next();
                self.product()?.neg()
            }
            Tok::Plus => {
                self.next();
                self.product()?
            }
            _ => self.product()?,
        };
        loop {
            match self.peek().tok {
                Tok::Plus => {
                    self.next();
                    acc = acc.add(&self.product()?)?;
                }
                Tok::Minus => {
                    self.next();
                    acc = acc.sub(&self.product()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn product(&mut self) -> Result<DifferentialForm> {
        let mut acc = self.power()?;
        loop {
            match self.peek().tok {
                Tok::Star => {
                    let at = self.next();
                    let rhs = self.power()?;
                    acc = multiply(&acc, &rhs, at.line, at.col)?;
                }
                Tok::Slash => {
                    return self.fail("division is only available inside rational literals p/q")
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<DifferentialForm> {
        let base = self.atom()?;
        if self.peek().tok != Tok::Caret {
            return Ok(base);
        }
        let at = self.next();
        let exp = match self.next() {
            Token { tok: Tok::Int(n), .. } if n >= 0 => n as u32,
            t => return Err(err_at(t.line, t.col, "expected a non-negative integer exponent")),
        };
        if base.degree() != 0 {
            return Err(err_at(at.line, at.col, "powers apply to degree-zero values only"));
        }
        Ok(DifferentialForm::from_poly(base.into_poly()?.pow(exp)))
    }

    fn atom(&mut self) -> Result<DifferentialForm> {
        let t = self.next();
        match t.tok {
            Tok::Int(n) => {
                let den = if self.peek().tok == Tok::Slash {
                    self.next();
                    match self.next() {
                        Token { tok: Tok::Int(d), .. } if d > 0 => d,
                        u => {
                            return Err(err_at(u.line, u.col, "expected a positive integer denominator"))
                        }
                    }
                } else {
                    1
                };
                Ok(DifferentialForm::from_poly(TrigPoly::constant(
                    self.dim,
                    Scalar::from_ratio(n, den),
                )))
            }
            Tok::Imag => Ok(DifferentialForm::from_poly(TrigPoly::constant(self.dim, Scalar::i()))),
            Tok::Dt(j) => {
                if j >= self.dim {
                    return Err(err_at(
                        t.line,
                        t.col,
                        format!("dt{} does not exist on t{}", j + 1, self.dim),
                    ));
                }
                DifferentialForm::dt(self.dim, j)
            }
            Tok::Var(j) => Err(err_at(
                t.line,
                t.col,
                format!(
                    "t{} is not a ring element; use it inside sin, cos or exp(i*(...))",
                    j + 1
                ),
            )),
            Tok::Sin => {
                let k = self.paren_linear_form()?;
                Ok(DifferentialForm::from_poly(TrigPoly::sin_lin(self.dim, &k)?))
            }
            Tok::Cos => {
                let k = self.paren_linear_form()?;
                Ok(DifferentialForm::from_poly(TrigPoly::cos_lin(self.dim, &k)?))
            }
            Tok::Exp => {
                self.expect(Tok::LParen, "( after exp")?;
                self.expect(Tok::Imag, "i: exponentials are exp(i*(...))")?;
                self.expect(Tok::Star, "* after i")?;
                let k = if self.peek().tok == Tok::LParen {
                    self.next();
                    let k = self.linear_form()?;
                    self.expect(Tok::RParen, ") closing the linear form")?;
                    k
                } else {
                    let mut k = vec![0; self.dim];
                    self.linear_term(&mut k, 1)?;
                    k
                };
                self.expect(Tok::RParen, ") after exp argument")?;
                Ok(DifferentialForm::from_poly(TrigPoly::exp_lin(self.dim, &k)?))
            }
            Tok::LParen => {
                let inner = self.expr()?;
                self.expect(Tok::RParen, ")")?;
                Ok(inner)
            }
            _ => Err(err_at(t.line, t.col, "expected a value")),
        }
    }

    fn paren_linear_form(&mut self) -> Result<Vec<i64>> {
        self.expect(Tok::LParen, "(")?;
        let k = self.linear_form()?;
        self.expect(Tok::RParen, ") closing the linear form")?;
        Ok(k)
    }

    /// `[±] term (± term)*` with `term := [INT *] t_j`.
    fn linear_form(&mut self) -> Result<Vec<i64>> {
        let mut k = vec![0; self.dim];
        let mut sign = 1i64;
        if matches!(self.peek().tok, Tok::Minus) {
            self.next();
            sign = -1;
        } else if matches!(self.peek().tok, Tok::Plus) {
            self.next();
        }
        self.linear_term(&mut k, sign)?;
        loop {
            match self.peek().tok {
                Tok::Plus => {
                    self.next();
                    self.linear_term(&mut k, 1)?;
                }
                Tok::Minus => {
                    self.next();
                    self.linear_term(&mut k, -1)?;
                }
                _ => return Ok(k),
            }
        }
    }

    fn linear_term(&mut self, k: &mut [i64], sign: i64) -> Result<()> {
        let t = self.next();
        let (coeff, var) = match t.tok {
            Tok::Int(n) => {
                self.expect(Tok::Star, "* between coefficient and variable")?;
                let v = self.next();
                match v.tok {
                    Tok::Var(j) => (n, (v.line, v.col, j)),
                    _ => {
                        return Err(err_at(
                            v.line,
                            v.col,
                            "expected a variable t1..tn in the linear form",
                        ))
                    }
                }
            }
            Tok::Var(j) => (1, (t.line, t.col, j)),
            _ => {
                return Err(err_at(
                    t.line,
                    t.col,
                    "linear forms admit only integer multiples of t1..tn",
                ))
            }
        };
        let (line, col, j) = var;
        if j >= k.len() {
            return Err(err_at(line, col, format!("t{} does not exist on t{}", j + 1, k.len())));
        }
        k[j] += sign * coeff;
        Ok(())
    }
}

fn multiply(
    a: &DifferentialForm,
    b: &DifferentialForm,
    line: usize,
    col: usize,
) -> Result<DifferentialForm> {
    if a.degree() == 0 {
        b.scale_poly(&a.into_poly()?)
    } else if b.degree() == 0 {
        a.scale_poly(&b.into_poly()?)
    } else {
        Err(err_at(line, col, "cannot * two positive-degree forms; use the wedge"))
    }
}

/// Parse an expression into a differential form on the `dim`-torus.
pub fn parse_form(src: &str, dim: usize) -> Result<DifferentialForm> {
    let tokens = Lexer::new(src).tokens()?;
    let mut p = Parser { tokens, pos: 0, dim };
    let value = p.expr()?;
    let end = p.next();
    if end.tok != Tok::End {
        return Err(err_at(end.line, end.col, "trailing input after expression"));
    }
    Ok(value)
}

/// Parse an expression that must lower to a function (a degree-zero form).
pub fn parse_poly(src: &str, dim: usize) -> Result<TrigPoly> {
    parse_form(src, dim)?.into_poly()
}
