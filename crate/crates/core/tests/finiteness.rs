mod common;

use common::{graded, triangular};
use planevec_core::finiteness::{
    certify_locally_finite, certify_locally_nilpotent, jordan_decompose, products_invariant, Certificate, OrbitBudget,
    OrbitClosure,
};
use planevec_core::linalg::minimal_polynomial;
use planevec_core::vecfield::{classify_lf_shape, from_graded};
use planevec_core::{BiPoly, Derivation, Scalar};
use proptest::prelude::*;

fn small_budget() -> OrbitBudget {
    OrbitBudget { max_dim: 24, max_deg: 12 }
}

/// `d(basis[j]) = sum_i matrix[i][j] basis[i]`, exactly.
fn matrix_is_exact(d: &Derivation, orbit: &OrbitClosure) -> bool {
    (0..orbit.dim()).all(|j| {
        let image = d.apply(&orbit.basis[j]);
        let combo =
            (0..orbit.dim()).fold(BiPoly::zero(), |acc, i| &acc + &orbit.basis[i].scale(orbit.matrix.get(i, j)));
        image == combo
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn locally_finite_certificates_are_invariant_spans(d in triangular()) {
        let cert = certify_locally_finite(&d, &OrbitBudget::default()).unwrap();
        let Certificate::LocallyFinite { orbit_x, orbit_y } = cert else {
            return Err(TestCaseError::fail(format!("triangular field {d} not certified")));
        };
        prop_assert!(matrix_is_exact(&d, &orbit_x));
        prop_assert!(matrix_is_exact(&d, &orbit_y));
        let mut factors: Vec<BiPoly> = orbit_x.basis.iter().chain(orbit_y.basis.iter()).cloned().collect();
        let left = factors.clone();
        factors.push(BiPoly::one());
        prop_assert!(products_invariant(&d, &left, &factors));
    }

    #[test]
    fn jordan_parts_satisfy_their_invariants(d in triangular()) {
        let b = OrbitBudget::default();
        let j = jordan_decompose(&d, &b).unwrap();
        prop_assert_eq!(&j.semisimple + &j.nilpotent, d.clone());
        prop_assert!(j.semisimple.bracket(&j.nilpotent).is_zero());
        let nc = certify_locally_nilpotent(&j.nilpotent, &b).unwrap();
        prop_assert!(j.nilpotent.is_zero() || matches!(nc, Certificate::LocallyNilpotent { .. }), "{}", nc.kind());
        if let Certificate::LocallyFinite { orbit_x, orbit_y } = certify_locally_finite(&j.semisimple, &b).unwrap() {
            prop_assert!(minimal_polynomial(&orbit_x.matrix).is_squarefree());
            prop_assert!(minimal_polynomial(&orbit_y.matrix).is_squarefree());
        } else {
            return Err(TestCaseError::fail("semisimple part not certified"));
        }
        let js = jordan_decompose(&j.semisimple, &b).unwrap();
        prop_assert_eq!(js.semisimple, j.semisimple.clone());
        prop_assert!(js.nilpotent.is_zero());
        let jn = jordan_decompose(&j.nilpotent, &b).unwrap();
        prop_assert!(jn.semisimple.is_zero());
        prop_assert_eq!(jn.nilpotent, j.nilpotent);
    }

    #[test]
    fn shape_filter_is_sound(g in graded(3)) {
        prop_assume!(!g.is_zero());
        let d = from_graded(&g);
        let shape = classify_lf_shape(&g).unwrap();
        if let Certificate::LocallyNilpotent { .. } = certify_locally_nilpotent(&d, &small_budget()).unwrap() {
            prop_assert!(shape.passes_lnd(), "{d}: {shape:?}");
        }
        if let Certificate::LocallyFinite { .. } = certify_locally_finite(&d, &small_budget()).unwrap() {
            prop_assert!(shape.passes_lf(), "{d}: {shape:?}");
        }
    }

    #[test]
    fn nilpotency_order_kills_the_generators(d in triangular()) {
        if let Certificate::LocallyNilpotent { order } = certify_locally_nilpotent(&d, &OrbitBudget::default()).unwrap() {
            prop_assert!(d.apply_n(&BiPoly::x(), order).is_zero());
            prop_assert!(d.apply_n(&BiPoly::y(), order).is_zero());
        }
    }
}

#[test]
fn scaling_keeps_certificates() {
    let d = common::field("y^2*dx + dy");
    let c = certify_locally_nilpotent(&d.scale(&Scalar::from_int(3)), &OrbitBudget::default()).unwrap();
    assert!(matches!(c, Certificate::LocallyNilpotent { order: 4 }), "{c:?}");
}
