//! Recursive-descent parser for polynomials, derivations and automorphisms.
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := unary (('*' | '/' | <juxtaposition>) unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' ['-'] INT)?
//! atom   := INT | 'x' | 'y' | 'sqrt2' | 'dx' | 'dy' | 'E'
//!         | 'D' '[' ['-'] INT ',' ['-'] INT ']' | 'delta' '[' expr ',' expr ']'
//!         | '(' expr ')'
//! ```

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::poly::BiPoly;
use crate::scalar::Scalar;
use crate::vecfield::{from_graded, Derivation, GradedForm, PolyAutomorphism};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
    Arrow,
    End,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    pos: usize,
}

fn syntax<T>(pos: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Syntax { pos, msg: msg.into() })
}

fn tokenize(src: &str) -> Result<Vec<Token>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let n: BigInt = src[start..i].parse().expect("digits");
            out.push(Token { tok: Tok::Int(n), pos: start });
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            let word = &src[start..i];
            // "xy", "xxy": a run of variables written without '*'
            if word.len() > 1 && word.chars().all(|ch| ch == 'x' || ch == 'y') {
                for (k, ch) in word.char_indices() {
                    out.push(Token { tok: Tok::Ident(ch.to_string()), pos: start + k });
                }
            } else {
                out.push(Token { tok: Tok::Ident(word.to_string()), pos: start });
            }
        } else if c == '-' && bytes.get(i + 1) == Some(&b'>') {
            out.push(Token { tok: Tok::Arrow, pos: i });
            i += 2;
        } else if "+-*/^()[],;".contains(c) {
            out.push(Token { tok: Tok::Sym(c), pos: i });
            i += 1;
        } else {
            return syntax(i, format!("unexpected character '{c}'"));
        }
    }
    out.push(Token { tok: Tok::End, pos: src.len() });
    Ok(out)
}

#[derive(Clone, Debug)]
enum Value {
    Poly(BiPoly),
    Field(Derivation),
}

struct Parser {
    toks: Vec<Token>,
    at: usize,
}

impl Parser {
    fn new(src: &str) -> Result<Self> {
        Ok(Parser { toks: tokenize(src)?, at: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.at].tok
    }

    fn pos(&self) -> usize {
        self.toks[self.at].pos
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn eat_sym(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Sym(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, c: char) -> Result<()> {
        if self.eat_sym(c) {
            Ok(())
        } else {
            syntax(self.pos(), format!("expected '{c}'"))
        }
    }

    fn expect_ident(&mut self, name: &str) -> Result<()> {
        if *self.peek() == Tok::Ident(name.to_string()) {
            self.bump();
            Ok(())
        } else {
            syntax(self.pos(), format!("expected '{name}'"))
        }
    }

    fn expect_end(&self) -> Result<()> {
        match self.peek() {
            Tok::End => Ok(()),
            _ => syntax(self.pos(), "unexpected trailing input"),
        }
    }

    fn expr(&mut self) -> Result<Value> {
        let mut acc = if self.eat_sym('-') {
            negate(self.term()?)
        } else {
            self.eat_sym('+');
            self.term()?
        };
        loop {
            let pos = self.pos();
            if self.eat_sym('+') {
                acc = combine(acc, self.term()?, false, pos)?;
            } else if self.eat_sym('-') {
                acc = combine(acc, self.term()?, true, pos)?;
            } else {
                break;
            }
        }
        Ok(acc)
    }

    fn starts_atom(&self) -> bool {
        matches!(self.peek(), Tok::Int(_) | Tok::Ident(_) | Tok::Sym('('))
    }

    fn term(&mut self) -> Result<Value> {
        let mut acc = self.unary()?;
        loop {
            let pos = self.pos();
            if self.eat_sym('*') {
                acc = multiply(acc, self.unary()?, pos)?;
            } else if self.eat_sym('/') {
                let rhs = self.unary()?;
                acc = divide(acc, rhs, pos)?;
            } else if self.starts_atom() {
                acc = multiply(acc, self.unary()?, pos)?;
            } else {
                break;
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Value> {
        if self.eat_sym('-') {
            Ok(negate(self.unary()?))
        } else {
            self.power()
        }
    }

    fn signed_int(&mut self) -> Result<BigInt> {
        let neg = self.eat_sym('-');
        let pos = self.pos();
        match self.bump().tok {
            Tok::Int(n) => Ok(if neg { -n } else { n }),
            _ => syntax(pos, "expected an integer"),
        }
    }

    fn small_int(&mut self) -> Result<i32> {
        let pos = self.pos();
        let n = self.signed_int()?;
        n.to_i32().map_or_else(|| syntax(pos, "integer out of range"), Ok)
    }

    fn power(&mut self) -> Result<Value> {
        let base = self.atom()?;
        let pos = self.pos();
        if !self.eat_sym('^') {
            return Ok(base);
        }
        let parens = self.eat_sym('(');
        let e = self.small_int()?;
        if parens {
            self.expect_sym(')')?;
        }
        let p = match base {
            Value::Poly(p) => p,
            Value::Field(_) => return syntax(pos, "cannot raise a vector field to a power"),
        };
        if e >= 0 {
            return Ok(Value::Poly(p.pow(e as u32)));
        }
        // negative exponents only for c * y^j
        let mut terms = p.terms();
        match (terms.next(), terms.next()) {
            (Some((&(i, j), c)), None) => {
                if i != 0 {
                    return Err(Error::ModeViolation(format!("negative power of x at byte {pos}")));
                }
                let n = (-e) as u32;
                let c = c.inv()?.pow(n);
                let exp = j.checked_mul(e).ok_or(Error::Syntax { pos, msg: "exponent overflow".into() })?;
                Ok(Value::Poly(BiPoly::monomial((0, exp), c)?))
            }
            _ => syntax(pos, "negative exponent needs a single monomial in y"),
        }
    }

    fn atom(&mut self) -> Result<Value> {
        let pos = self.pos();
        let t = self.bump();
        match t.tok {
            Tok::Int(n) => Ok(Value::Poly(BiPoly::constant(Scalar::from(BigRational::from_integer(n))))),
            Tok::Sym('(') => {
                let v = self.expr()?;
                self.expect_sym(')')?;
                Ok(v)
            }
            Tok::Ident(name) => match name.as_str() {
                "x" => Ok(Value::Poly(BiPoly::x())),
                "y" => Ok(Value::Poly(BiPoly::y())),
                "sqrt2" => Ok(Value::Poly(BiPoly::constant(Scalar::sqrt2()))),
                "dx" => Ok(Value::Field(Derivation::dx())),
                "dy" => Ok(Value::Field(Derivation::dy())),
                "E" => Ok(Value::Field(Derivation::euler())),
                "D" => {
                    self.expect_sym('[')?;
                    let a = self.small_int()?;
                    self.expect_sym(',')?;
                    let b = self.small_int()?;
                    self.expect_sym(']')?;
                    let g = GradedForm::basis(a, b).map_err(|_| Error::Syntax {
                        pos,
                        msg: format!("D[{a},{b}] is outside the bigrading lattice"),
                    })?;
                    Ok(Value::Field(from_graded(&g)))
                }
                "delta" => {
                    self.expect_sym('[')?;
                    let alpha = self.scalar_expr()?;
                    self.expect_sym(',')?;
                    let beta = self.scalar_expr()?;
                    self.expect_sym(']')?;
                    Ok(Value::Field(from_graded(&GradedForm::delta(&alpha, &beta))))
                }
                other => syntax(pos, format!("unknown identifier '{other}'")),
            },
            Tok::End => syntax(pos, "unexpected end of input"),
            _ => syntax(pos, "expected a term"),
        }
    }

    fn scalar_expr(&mut self) -> Result<Scalar> {
        let pos = self.pos();
        match self.expr()? {
            Value::Poly(p) => p.as_constant().map_or_else(|| syntax(pos, "expected a constant"), Ok),
            Value::Field(_) => syntax(pos, "expected a constant"),
        }
    }

    fn poly_expr(&mut self) -> Result<BiPoly> {
        let pos = self.pos();
        match self.expr()? {
            Value::Poly(p) => Ok(p),
            Value::Field(_) => syntax(pos, "expected a polynomial"),
        }
    }

    fn assignment(&mut self, var: &str) -> Result<BiPoly> {
        self.expect_ident(var)?;
        if *self.peek() != Tok::Arrow {
            return syntax(self.pos(), "expected '->'");
        }
        self.bump();
        self.poly_expr()
    }
}

fn negate(v: Value) -> Value {
    match v {
        Value::Poly(p) => Value::Poly(-&p),
        Value::Field(d) => Value::Field(-&d),
    }
}

fn combine(a: Value, b: Value, subtract: bool, pos: usize) -> Result<Value> {
    let b = if subtract { negate(b) } else { b };
    match (a, b) {
        (Value::Poly(p), Value::Poly(q)) => Ok(Value::Poly(&p + &q)),
        (Value::Field(d), Value::Field(e)) => Ok(Value::Field(&d + &e)),
        (Value::Poly(p), Value::Field(d)) | (Value::Field(d), Value::Poly(p)) => {
            if p.is_zero() {
                Ok(Value::Field(d))
            } else {
                syntax(pos, "cannot add a polynomial and a vector field")
            }
        }
    }
}

fn multiply(a: Value, b: Value, pos: usize) -> Result<Value> {
    match (a, b) {
        (Value::Poly(p), Value::Poly(q)) => Ok(Value::Poly(&p * &q)),
        (Value::Poly(p), Value::Field(d)) | (Value::Field(d), Value::Poly(p)) => Ok(Value::Field(d.mul_poly(&p))),
        (Value::Field(_), Value::Field(_)) => syntax(pos, "cannot multiply two vector fields"),
    }
}

fn divide(a: Value, b: Value, pos: usize) -> Result<Value> {
    let c = match b {
        Value::Poly(q) => match q.as_constant() {
            Some(c) if !c.is_zero() => c,
            Some(_) => return Err(Error::DivisionByZero),
            None => return syntax(pos, "can only divide by a constant"),
        },
        Value::Field(_) => return syntax(pos, "cannot divide by a vector field"),
    };
    let inv = c.inv()?;
    Ok(match a {
        Value::Poly(p) => Value::Poly(p.scale(&inv)),
        Value::Field(d) => Value::Field(d.scale(&inv)),
    })
}

pub fn parse_poly(src: &str) -> Result<BiPoly> {
    let mut p = Parser::new(src)?;
    let v = p.poly_expr()?;
    p.expect_end()?;
    Ok(v)
}

pub fn parse_scalar(src: &str) -> Result<Scalar> {
    let mut p = Parser::new(src)?;
    let v = p.scalar_expr()?;
    p.expect_end()?;
    Ok(v)
}

pub fn parse_derivation(src: &str) -> Result<Derivation> {
    let mut p = Parser::new(src)?;
    let v = p.expr()?;
    p.expect_end()?;
    match v {
        Value::Field(d) => Ok(d),
        Value::Poly(q) if q.is_zero() => Ok(Derivation::zero()),
        Value::Poly(_) => syntax(0, "expected a vector field (use dx, dy, D[a,b], E or delta[a,b])"),
    }
}

/// `auto(x->f, y->g; inverse x->f', y->g')`.
pub fn parse_automorphism(src: &str) -> Result<PolyAutomorphism> {
    let mut p = Parser::new(src)?;
    p.expect_ident("auto")?;
    p.expect_sym('(')?;
    let fx = p.assignment("x")?;
    p.expect_sym(',')?;
    let fy = p.assignment("y")?;
    p.expect_sym(';')?;
    p.expect_ident("inverse")?;
    let gx = p.assignment("x")?;
    p.expect_sym(',')?;
    let gy = p.assignment("y")?;
    p.expect_sym(')')?;
    p.expect_end()?;
    PolyAutomorphism::new((fx, fy), (gx, gy))
}

impl std::str::FromStr for BiPoly {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_poly(s)
    }
}

impl std::str::FromStr for Derivation {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_derivation(s)
    }
}

impl std::str::FromStr for Scalar {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_scalar(s)
    }
}
