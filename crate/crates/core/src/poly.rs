//! Sparse bivariate polynomials over [`Scalar`], Laurent in `y` when needed.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Exponent pair `(i, j)` of the monomial `x^i y^j`.
pub type Exp = (i32, i32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Var {
    X,
    Y,
}

/// `Polynomial` means k[x,y]; `LaurentY` means k[x,y,1/y].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mode {
    Polynomial,
    LaurentY,
}

impl Mode {
    pub fn join(self, other: Mode) -> Mode {
        self.max(other)
    }
}

/// A polynomial stored as a map from exponents to nonzero coefficients.
///
/// The mode is not stored: a polynomial is in `LaurentY` mode exactly when
/// some term has a negative `y` exponent. Negative `x` exponents are never
/// representable.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct BiPoly {
    terms: BTreeMap<Exp, Scalar>,
}

impl BiPoly {
    pub fn zero() -> Self {
        BiPoly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        let mut p = Self::zero();
        p.add_term((0, 0), &c);
        p
    }

    pub fn x() -> Self {
        Self::monomial((1, 0), Scalar::one()).unwrap()
    }

    pub fn y() -> Self {
        Self::monomial((0, 1), Scalar::one()).unwrap()
    }

    pub fn var(v: Var) -> Self {
        match v {
            Var::X => Self::x(),
            Var::Y => Self::y(),
        }
    }

    pub fn monomial(exp: Exp, c: Scalar) -> Result<Self> {
        Self::from_terms([(exp, c)])
    }

    pub fn from_terms<I: IntoIterator<Item = (Exp, Scalar)>>(terms: I) -> Result<Self> {
        let mut p = Self::zero();
        for (e, c) in terms {
            if e.0 < 0 {
                return Err(Error::ModeViolation(format!("negative x exponent {}", e.0)));
            }
            p.add_term(e, &c);
        }
        Ok(p)
    }

    /// Adds `c * x^i y^j` in place, keeping the map free of zeros.
    pub(crate) fn add_term(&mut self, e: Exp, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        debug_assert!(e.0 >= 0);
        match self.terms.get_mut(&e) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c.clone());
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exp, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, e: Exp) -> Scalar {
        self.terms.get(&e).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The constant value if the polynomial has no nonconstant term.
    pub fn as_constant(&self) -> Option<Scalar> {
        match self.terms.len() {
            0 => Some(Scalar::zero()),
            1 => self.terms.get(&(0, 0)).cloned(),
            _ => None,
        }
    }

    pub fn mode(&self) -> Mode {
        if self.terms.keys().any(|&(_, j)| j < 0) {
            Mode::LaurentY
        } else {
            Mode::Polynomial
        }
    }

    /// Largest `i + j` over the support, `None` for zero.
    pub fn total_degree(&self) -> Option<i32> {
        self.terms.keys().map(|&(i, j)| i + j).max()
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        BiPoly { terms: self.terms.iter().map(|(e, v)| (*e, v * c)).collect() }
    }

    pub fn diff(&self, v: Var) -> Self {
        let mut out = Self::zero();
        for (&(i, j), c) in &self.terms {
            match v {
                Var::X if i != 0 => out.add_term((i - 1, j), &(c * &Scalar::from_int(i as i64))),
                Var::Y if j != 0 => out.add_term((i, j - 1), &(c * &Scalar::from_int(j as i64))),
                _ => {}
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Substitutes `x -> fx`, `y -> fy`. Requires nonnegative exponents in `self`.
    pub fn compose(&self, fx: &BiPoly, fy: &BiPoly) -> Result<Self> {
        if self.mode() == Mode::LaurentY {
            return Err(Error::ModeViolation("cannot substitute into a Laurent polynomial".into()));
        }
        let mut out = Self::zero();
        let mut xpows: Vec<BiPoly> = vec![Self::one()];
        let mut ypows: Vec<BiPoly> = vec![Self::one()];
        for (&(i, j), c) in &self.terms {
            while xpows.len() <= i as usize {
                let next = xpows.last().unwrap() * fx;
                xpows.push(next);
            }
            while ypows.len() <= j as usize {
                let next = ypows.last().unwrap() * fy;
                ypows.push(next);
            }
            let t = &xpows[i as usize] * &ypows[j as usize];
            out = &out + &t.scale(c);
        }
        Ok(out)
    }

    /// Terms in printing order: graded lexicographic, x > y, descending.
    pub fn sorted_terms(&self) -> Vec<(Exp, Scalar)> {
        let mut v: Vec<(Exp, Scalar)> = self.terms.iter().map(|(e, c)| (*e, c.clone())).collect();
        v.sort_by(|a, b| grlex_desc(a.0, b.0));
        v
    }
}

/// Descending graded lexicographic order with x > y.
pub fn grlex_desc(a: Exp, b: Exp) -> std::cmp::Ordering {
    (b.0 + b.1, b.0).cmp(&(a.0 + a.1, a.0))
}

impl<'a> Add<&'a BiPoly> for &'a BiPoly {
    type Output = BiPoly;
    fn add(self, rhs: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c);
        }
        out
    }
}

impl<'a> Sub<&'a BiPoly> for &'a BiPoly {
    type Output = BiPoly;
    fn sub(self, rhs: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, &-c);
        }
        out
    }
}

impl<'a> Mul<&'a BiPoly> for &'a BiPoly {
    type Output = BiPoly;
    fn mul(self, rhs: &BiPoly) -> BiPoly {
        let mut out = BiPoly::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                out.add_term((ea.0 + eb.0, ea.1 + eb.1), &(ca * cb));
            }
        }
        out
    }
}

impl Neg for &BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        BiPoly { terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<BiPoly> for BiPoly {
            type Output = BiPoly;
            fn $m(self, rhs: BiPoly) -> BiPoly {
                (&self).$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// How a scalar coefficient is rendered in front of a monomial.
pub(crate) enum CoeffText {
    /// Positive and equal to one: nothing is printed.
    One,
    /// A factor with an explicit sign flag; `text` never starts with '-'.
    Factor { negative: bool, text: String },
}

pub(crate) fn coeff_text(c: &Scalar) -> CoeffText {
    let rat = c.rat_part();
    let surd = c.surd_part();
    if surd.is_zero() {
        let negative = rat.is_negative();
        let a = rat.abs();
        if a.is_one() {
            CoeffText::One.with_sign(negative)
        } else {
            CoeffText::Factor { negative, text: a.to_string() }
        }
    } else if rat.is_zero() {
        let negative = surd.is_negative();
        let a = surd.abs();
        let text = if a.is_one() { "sqrt2".to_string() } else { format!("{a}*sqrt2") };
        CoeffText::Factor { negative, text }
    } else {
        CoeffText::Factor { negative: false, text: format!("({})", c.to_exact_string()) }
    }
}

impl CoeffText {
    fn with_sign(self, negative: bool) -> CoeffText {
        if negative {
            CoeffText::Factor { negative: true, text: String::new() }
        } else {
            self
        }
    }
}

pub(crate) fn monomial_text(e: Exp) -> String {
    let mut parts = Vec::new();
    for (name, k) in [("x", e.0), ("y", e.1)] {
        match k {
            0 => {}
            1 => parts.push(name.to_string()),
            k => parts.push(format!("{name}^{k}")),
        }
    }
    parts.join("*")
}

/// Renders `c * mono` (where `mono` may be empty for 1) and returns the sign separately.
pub(crate) fn term_text(c: &Scalar, mono: &str) -> (bool, String) {
    match coeff_text(c) {
        CoeffText::One => (false, if mono.is_empty() { "1".into() } else { mono.to_string() }),
        CoeffText::Factor { negative, text } => {
            let body = match (text.is_empty(), mono.is_empty()) {
                (true, true) => "1".to_string(),
                (true, false) => mono.to_string(),
                (false, true) => text,
                (false, false) => format!("{text}*{mono}"),
            };
            (negative, body)
        }
    }
}

pub(crate) fn join_signed(items: impl IntoIterator<Item = (bool, String)>) -> String {
    let mut out = String::new();
    for (k, (neg, body)) in items.into_iter().enumerate() {
        match (k, neg) {
            (0, false) => {}
            (0, true) => out.push('-'),
            (_, false) => out.push_str(" + "),
            (_, true) => out.push_str(" - "),
        }
        out.push_str(&body);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items = self.sorted_terms().into_iter().map(|(e, c)| term_text(&c, &monomial_text(e)));
        f.write_str(&join_signed(items))
    }
}
