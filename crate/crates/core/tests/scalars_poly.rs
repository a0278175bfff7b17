mod common;

use common::{nonzero_scalar, poly, scalar};
use num_traits::{One, Zero};
use planevec_core::parse::{parse_poly, parse_scalar};
use planevec_core::{Scalar, Var};
use proptest::prelude::*;

proptest! {
    #[test]
    fn addition_and_multiplication_are_associative(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
    }

    #[test]
    fn multiplication_distributes(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
    }

    #[test]
    fn inverses_exist(a in nonzero_scalar()) {
        prop_assert_eq!(&a * &a.inv().unwrap(), Scalar::one());
        prop_assert_eq!(&a + &(-&a), Scalar::zero());
    }

    #[test]
    fn scalar_text_round_trips(a in scalar()) {
        prop_assert_eq!(parse_scalar(&a.to_exact_string()).unwrap(), a);
    }

    #[test]
    fn polynomial_text_round_trips(p in poly(4)) {
        prop_assert_eq!(parse_poly(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn partial_derivatives_commute(p in poly(5)) {
        prop_assert_eq!(p.diff(Var::X).diff(Var::Y), p.diff(Var::Y).diff(Var::X));
    }
}
