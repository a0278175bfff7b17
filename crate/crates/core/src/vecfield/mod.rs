//! Polynomial vector fields `P d/dx + Q d/dy` on the plane (and on the
//! Laurent cylinder `Spec k[x,y,1/y]`), their bigraded coordinates, Newton
//! polygons and polynomial automorphisms.

mod automorphism;
mod graded;
mod newton;

pub use automorphism::{ad_conjugate, exp_lnd, PolyAutomorphism};
pub use graded::{
    bracket_graded, bracket_graded_with, from_graded, in_lattice, structure_constant, to_graded, GradedForm, Weight,
};
pub use newton::{classify_lf_shape, is_demazure, newton_polygon, NewtonPolygon, ShapeVerdict};

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::Zero;

use crate::poly::{join_signed, monomial_text, term_text, BiPoly, Mode, Var};
use crate::scalar::Scalar;

#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Derivation {
    p: BiPoly,
    q: BiPoly,
}

impl Derivation {
    pub fn new(p: BiPoly, q: BiPoly) -> Self {
        Derivation { p, q }
    }

    pub fn zero() -> Self {
        Derivation::default()
    }

    pub fn dx() -> Self {
        Derivation::new(BiPoly::one(), BiPoly::zero())
    }

    pub fn dy() -> Self {
        Derivation::new(BiPoly::zero(), BiPoly::one())
    }

    /// `x d/dx + y d/dy`.
    pub fn euler() -> Self {
        Derivation::new(BiPoly::x(), BiPoly::y())
    }

    /// Coefficient of `d/dx`.
    pub fn p(&self) -> &BiPoly {
        &self.p
    }

    /// Coefficient of `d/dy`.
    pub fn q(&self) -> &BiPoly {
        &self.q
    }

    pub fn component(&self, v: Var) -> &BiPoly {
        match v {
            Var::X => &self.p,
            Var::Y => &self.q,
        }
    }

    pub fn mode(&self) -> Mode {
        self.p.mode().join(self.q.mode())
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }

    pub fn apply(&self, f: &BiPoly) -> BiPoly {
        &(&self.p * &f.diff(Var::X)) + &(&self.q * &f.diff(Var::Y))
    }

    /// `d^k(f)`.
    pub fn apply_n(&self, f: &BiPoly, k: usize) -> BiPoly {
        let mut g = f.clone();
        for _ in 0..k {
            if g.is_zero() {
                break;
            }
            g = self.apply(&g);
        }
        g
    }

    pub fn divergence(&self) -> BiPoly {
        &self.p.diff(Var::X) + &self.q.diff(Var::Y)
    }

    /// Lie bracket of vector fields, computed by differentiation.
    pub fn bracket(&self, other: &Derivation) -> Derivation {
        Derivation {
            p: &self.apply(&other.p) - &other.apply(&self.p),
            q: &self.apply(&other.q) - &other.apply(&self.q),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Derivation {
        Derivation { p: self.p.scale(c), q: self.q.scale(c) }
    }

    /// `f * self`.
    pub fn mul_poly(&self, f: &BiPoly) -> Derivation {
        Derivation { p: f * &self.p, q: f * &self.q }
    }

    /// Mirror image under the coordinate swap `(x, y) -> (y, x)`.
    pub fn swap_xy(&self) -> Derivation {
        let sw = |f: &BiPoly| {
            BiPoly::from_terms(f.terms().map(|(&(i, j), c)| ((j, i), c.clone())))
                .expect("swap of a polynomial-mode field")
        };
        Derivation { p: sw(&self.q), q: sw(&self.p) }
    }

    /// Proportionality test `self = c * other` for some scalar `c`.
    pub fn ratio_to(&self, other: &Derivation) -> Option<Scalar> {
        let lambda = match other.p.terms().next() {
            Some((e, c)) => self.p.coeff(*e).checked_div(c).ok()?,
            None => {
                let (e, c) = other.q.terms().next()?;
                self.q.coeff(*e).checked_div(c).ok()?
            }
        };
        (other.scale(&lambda) == *self).then_some(lambda)
    }
}

impl<'a> Add<&'a Derivation> for &'a Derivation {
    type Output = Derivation;
    fn add(self, rhs: &Derivation) -> Derivation {
        Derivation { p: &self.p + &rhs.p, q: &self.q + &rhs.q }
    }
}

impl<'a> Sub<&'a Derivation> for &'a Derivation {
    type Output = Derivation;
    fn sub(self, rhs: &Derivation) -> Derivation {
        Derivation { p: &self.p - &rhs.p, q: &self.q - &rhs.q }
    }
}

impl Neg for &Derivation {
    type Output = Derivation;
    fn neg(self) -> Derivation {
        Derivation { p: -&self.p, q: -&self.q }
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut items = Vec::new();
        for (poly, tag) in [(&self.p, "dx"), (&self.q, "dy")] {
            for (e, c) in poly.sorted_terms() {
                let m = monomial_text(e);
                let mono = if m.is_empty() { tag.to_string() } else { format!("{m}*{tag}") };
                items.push(term_text(&c, &mono));
            }
        }
        f.write_str(&join_signed(items))
    }
}

impl Zero for Derivation {
    fn zero() -> Self {
        Derivation::default()
    }
    fn is_zero(&self) -> bool {
        Derivation::is_zero(self)
    }
}

impl Add for Derivation {
    type Output = Derivation;
    fn add(self, rhs: Derivation) -> Derivation {
        &self + &rhs
    }
}
