#![allow(dead_code)]

use num_traits::Zero;
use planevec_core::parse::parse_derivation;
use planevec_core::vecfield::in_lattice;
use planevec_core::{BiPoly, Derivation, GradedForm, Scalar, Weight};
use proptest::prelude::*;

pub fn scalar() -> impl Strategy<Value = Scalar> {
    (-30i64..=30, 1i64..=12, -8i64..=8, 1i64..=6)
        .prop_map(|(a, b, c, d)| &Scalar::frac(a, b) + &(&Scalar::frac(c, d) * &Scalar::sqrt2()))
}

pub fn nonzero_scalar() -> impl Strategy<Value = Scalar> {
    scalar().prop_filter("nonzero", |s| !s.is_zero())
}

pub fn small_int() -> impl Strategy<Value = Scalar> {
    (-3i64..=3).prop_filter("nonzero", |n| *n != 0).prop_map(Scalar::from_int)
}

pub fn poly(max_deg: i32) -> impl Strategy<Value = BiPoly> {
    prop::collection::vec(((0..=max_deg, 0..=max_deg), scalar()), 0..6)
        .prop_map(|terms| BiPoly::from_terms(terms).expect("polynomial exponents"))
}

pub fn weight(max: i32) -> impl Strategy<Value = Weight> {
    (-1..=max, -1..=max).prop_filter("lattice", |w| in_lattice(*w))
}

pub fn basis(w: Weight) -> GradedForm {
    GradedForm::basis(w.0, w.1).expect("lattice weight")
}

pub fn graded(max: i32) -> impl Strategy<Value = GradedForm> {
    (prop::option::of(scalar()), prop::collection::vec((weight(max), scalar()), 1..5)).prop_map(|(e, terms)| {
        let mut g = GradedForm::euler_field().scale(&e.unwrap_or_else(Scalar::zero));
        for (w, c) in terms {
            g = &g + &basis(w).scale(&c);
        }
        g
    })
}

pub fn field(s: &str) -> Derivation {
    parse_derivation(s).expect("literal parses")
}

/// Upper triangular basis: k[y] dx (degree <= 3), x dx, y dy, dy.
pub const TRIANGULAR: [&str; 7] = ["dx", "y*dx", "y^2*dx", "y^3*dx", "x*dx", "y*dy", "dy"];

/// A combination of one to three upper triangular basis fields with small
/// integer coefficients. Every such field is locally finite.
pub fn triangular() -> impl Strategy<Value = Derivation> {
    prop::collection::vec((0..TRIANGULAR.len(), small_int()), 1..=3).prop_map(|parts| {
        parts.into_iter().fold(Derivation::zero(), |acc, (i, c)| &acc + &field(TRIANGULAR[i]).scale(&c))
    })
}
