mod common;

use common::{basis, graded, nonzero_scalar, triangular};
use num_traits::Zero;
use planevec_core::finiteness::{certify_locally_nilpotent, Certificate, OrbitBudget};
use planevec_core::scalar::is_rational_ratio;
use planevec_core::spectral::{
    centralizer_basis, eigencomponents, opportune_pair, principal_part, toral_from_opportune,
};
use planevec_core::vecfield::{bracket_graded, from_graded, in_lattice, to_graded};
use planevec_core::{Error, GradedForm, Scalar};
use proptest::prelude::*;

fn coprime() -> impl Strategy<Value = (i64, i64)> {
    (-7i64..=7, -7i64..=7).prop_filter("coprime", |&(m, n)| num_integer::gcd(m, n) == 1)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn components_reconstruct_and_are_eigenvectors(g in graded(6), alpha in nonzero_scalar(), beta in nonzero_scalar()) {
        let s = eigencomponents(&g, &alpha, &beta).unwrap();
        prop_assert_eq!(s.reconstruct(), g);
        let delta = GradedForm::delta(&alpha, &beta);
        for (lambda, part) in &s.components {
            prop_assert!(!part.is_zero());
            prop_assert_eq!(bracket_graded(&delta, part), part.scale(lambda));
        }
    }

    #[test]
    fn irrational_ratio_gives_one_dimensional_components(g in graded(8), alpha in nonzero_scalar(), beta in nonzero_scalar()) {
        prop_assume!(!is_rational_ratio(&alpha, &beta).unwrap());
        let s = eigencomponents(&g, &alpha, &beta).unwrap();
        for (lambda, part) in &s.components {
            if !lambda.is_zero() {
                prop_assert!(part.num_terms() == 1 && part.euler_coef().is_zero(), "{lambda}: {part}");
            }
        }
    }

    #[test]
    fn centralizers_are_sound_and_complete((m, n) in coprime(), bound in 1i64..=9) {
        let c = centralizer_basis(m, n, bound).unwrap();
        let delta = GradedForm::delta(&Scalar::from_int(-m), &Scalar::from_int(n));
        prop_assert_eq!(&c[0], &GradedForm::euler_field());
        prop_assert_eq!(&c[1], &basis((0, 0)));
        for z in &c {
            prop_assert!(bracket_graded(&delta, z).is_zero(), "{z}");
        }
        let b = bound as i32;
        for k in -1..=b {
            for l in -1..=b {
                if in_lattice((k, l)) && (k, l) != (0, 0) && bracket_graded(&delta, &basis((k, l))).is_zero() {
                    prop_assert!(c.contains(&basis((k, l))), "D[{k},{l}] missing for ({m},{n})");
                }
            }
        }
    }

    #[test]
    fn principal_parts_are_nilpotent_with_nonzero_eigenvalue(d in triangular()) {
        let (alpha, beta) = (Scalar::from_int(1), Scalar::sqrt2());
        match principal_part(&d, &alpha, &beta, &OrbitBudget::default()) {
            Ok((lambda, part)) => {
                prop_assert!(!lambda.is_zero());
                let cert = certify_locally_nilpotent(&from_graded(&part), &OrbitBudget::default()).unwrap();
                prop_assert!(matches!(cert, Certificate::LocallyNilpotent { .. }), "{part}");
                prop_assert_eq!(bracket_graded(&GradedForm::delta(&alpha, &beta), &part), part.scale(&lambda));
            }
            Err(Error::CentralizesDelta) => {
                let g = to_graded(&d).unwrap();
                prop_assert!(bracket_graded(&GradedForm::delta(&alpha, &beta), &g).is_zero());
            }
            Err(e) => return Err(TestCaseError::fail(format!("{d}: {e}"))),
        }
    }

    #[test]
    fn toral_pairs_commute_and_are_independent(
        a in -3i64..=3, b in -3i64..=3, k in 0i32..=3, c in 1i64..=3, upper in any::<bool>(),
    ) {
        let s = common::field(&format!("{a}*x*dx + {b}*y*dy"));
        let dn = common::field(&if upper { format!("{c}*y^{k}*dx") } else { format!("{c}*x^{k}*dy") });
        if let Some(pair) = opportune_pair(&s, &dn, &OrbitBudget::default()).unwrap() {
            if let Ok((s0, s1)) = toral_from_opportune(&pair) {
                prop_assert!(s0.bracket(&s1).is_zero());
                prop_assert!(s1.ratio_to(&s0).is_none() && !s0.is_zero());
            }
        }
    }
}

#[test]
fn centralizer_rejects_common_factors() {
    assert!(matches!(centralizer_basis(2, 4, 3), Err(Error::NotCoprime(..))));
}
