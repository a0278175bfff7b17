use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::Derivation;
use crate::error::{Error, Result};
use crate::finiteness::{nilpotency_order, Certificate};
use crate::poly::{BiPoly, Mode};
use crate::scalar::Scalar;

/// A polynomial automorphism given by the images of `x` and `y` under the
/// comorphism, together with its inverse. Both directions are checked on
/// construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyAutomorphism {
    fwd: (BiPoly, BiPoly),
    inv: (BiPoly, BiPoly),
}

impl PolyAutomorphism {
    pub fn new(fwd: (BiPoly, BiPoly), inv: (BiPoly, BiPoly)) -> Result<Self> {
        for f in [&fwd.0, &fwd.1, &inv.0, &inv.1] {
            if f.mode() != Mode::Polynomial {
                return Err(Error::ModeViolation("automorphisms act on k[x,y]".into()));
            }
        }
        let a = PolyAutomorphism { fwd, inv };
        let x = BiPoly::x();
        let y = BiPoly::y();
        let there_and_back = (a.apply(&a.inv.0)?, a.apply(&a.inv.1)?);
        let back_and_there = (a.apply_inverse(&a.fwd.0)?, a.apply_inverse(&a.fwd.1)?);
        if there_and_back != (x.clone(), y.clone()) || back_and_there != (x, y) {
            return Err(Error::InvalidAutomorphism("supplied inverse does not compose to the identity".into()));
        }
        Ok(a)
    }

    pub fn identity() -> Self {
        PolyAutomorphism { fwd: (BiPoly::x(), BiPoly::y()), inv: (BiPoly::x(), BiPoly::y()) }
    }

    /// The involution `(x, y) -> (y, x)`.
    pub fn swap() -> Self {
        PolyAutomorphism { fwd: (BiPoly::y(), BiPoly::x()), inv: (BiPoly::y(), BiPoly::x()) }
    }

    pub fn fwd(&self) -> &(BiPoly, BiPoly) {
        &self.fwd
    }

    pub fn inv(&self) -> &(BiPoly, BiPoly) {
        &self.inv
    }

    /// `f -> f(fwd_x, fwd_y)`.
    pub fn apply(&self, f: &BiPoly) -> Result<BiPoly> {
        f.compose(&self.fwd.0, &self.fwd.1)
    }

    pub fn apply_inverse(&self, f: &BiPoly) -> Result<BiPoly> {
        f.compose(&self.inv.0, &self.inv.1)
    }

    /// Ring-map composition `self ∘ other` (apply `other` first, then `self`).
    pub fn compose(&self, other: &PolyAutomorphism) -> Result<Self> {
        let fwd = (self.apply(&other.fwd.0)?, self.apply(&other.fwd.1)?);
        let inv = (other.apply_inverse(&self.inv.0)?, other.apply_inverse(&self.inv.1)?);
        PolyAutomorphism::new(fwd, inv)
    }
}

/// `exp(t d)` for a certified locally nilpotent `d`.
pub fn exp_lnd(d: &Derivation, t: &Scalar, cert: &Certificate) -> Result<PolyAutomorphism> {
    let order = match cert {
        Certificate::LocallyNilpotent { order } => *order,
        _ => return Err(Error::NotCertified),
    };
    if d.mode() != Mode::Polynomial {
        return Err(Error::ModeViolation("exponential needs a polynomial field".into()));
    }
    // the certificate must describe this very derivation
    if nilpotency_order(d, order) != Some(order) {
        return Err(Error::NotCertified);
    }
    let series = |f: &BiPoly, t: &Scalar| -> BiPoly {
        let mut acc = BiPoly::zero();
        let mut term = f.clone();
        let mut fact = BigInt::one();
        for k in 0..order {
            if k > 0 {
                term = d.apply(&term);
                fact *= BigInt::from(k);
            }
            if term.is_zero() {
                break;
            }
            let c = &t.pow(k as u32) * &Scalar::from(BigRational::new(1.into(), fact.clone()));
            acc = &acc + &term.scale(&c);
        }
        acc
    };
    if t.is_zero() {
        return Ok(PolyAutomorphism::identity());
    }
    let fwd = (series(&BiPoly::x(), t), series(&BiPoly::y(), t));
    let inv = (series(&BiPoly::x(), &-t), series(&BiPoly::y(), &-t));
    PolyAutomorphism::new(fwd, inv)
}

/// Pushforward `phi ∘ d ∘ phi^{-1}` of a polynomial field.
pub fn ad_conjugate(phi: &PolyAutomorphism, d: &Derivation) -> Result<Derivation> {
    if d.mode() != Mode::Polynomial {
        return Err(Error::ModeViolation("conjugation acts on polynomial fields".into()));
    }
    let p = phi.apply(&d.apply(&phi.inv.0))?;
    let q = phi.apply(&d.apply(&phi.inv.1))?;
    Ok(Derivation::new(p, q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finiteness::{certify_locally_nilpotent, OrbitBudget};
    use crate::parse::{parse_derivation, parse_poly};

    fn d(s: &str) -> Derivation {
        parse_derivation(s).unwrap()
    }

    fn lnd(s: &str) -> (Derivation, Certificate) {
        let f = d(s);
        let c = certify_locally_nilpotent(&f, &OrbitBudget::default()).unwrap();
        (f, c)
    }

    #[test]
    fn exp_of_shear() {
        let (f, c) = lnd("y*dx");
        let t = Scalar::from_int(3);
        let phi = exp_lnd(&f, &t, &c).unwrap();
        assert_eq!(phi.fwd(), &(parse_poly("x + 3y").unwrap(), BiPoly::y()));
        assert_eq!(phi.inv(), &(parse_poly("x - 3y").unwrap(), BiPoly::y()));
        let (g, cg) = lnd("x*dy");
        let psi = exp_lnd(&g, &Scalar::one(), &cg).unwrap();
        assert_eq!(psi.fwd(), &(BiPoly::x(), parse_poly("y + x").unwrap()));
        assert_eq!(exp_lnd(&g, &Scalar::zero(), &cg).unwrap(), PolyAutomorphism::identity());
    }

    #[test]
    fn certificate_must_match() {
        let (_, c) = lnd("y*dx");
        assert_eq!(exp_lnd(&d("y^2*dx + x*dy"), &Scalar::one(), &c), Err(Error::NotCertified));
        let bad = Certificate::Inconclusive { budget_spent: Default::default() };
        assert_eq!(exp_lnd(&d("y*dx"), &Scalar::one(), &bad), Err(Error::NotCertified));
    }

    #[test]
    fn ad_orbit_identity() {
        let (n, c) = lnd("y*dx");
        let s = d("x*dx - y*dy");
        for t in [1, 2, 5] {
            let t = Scalar::from_int(t);
            let phi = exp_lnd(&n, &t, &c).unwrap();
            let lhs = ad_conjugate(&phi, &s).unwrap();
            let rhs = &s + &n.bracket(&s).scale(&t);
            assert_eq!(lhs, rhs);
        }
        assert_eq!(ad_conjugate(&PolyAutomorphism::identity(), &s).unwrap(), s);
    }

    #[test]
    fn swap_conjugation() {
        let tau = PolyAutomorphism::swap();
        assert_eq!(ad_conjugate(&tau, &d("(y^3 - 2y)*dx")).unwrap(), d("(x^3 - 2x)*dy"));
    }

    #[test]
    fn bad_inverse_rejected() {
        let r = PolyAutomorphism::new((parse_poly("x + y^2").unwrap(), BiPoly::y()), (BiPoly::x(), BiPoly::y()));
        assert!(matches!(r, Err(Error::InvalidAutomorphism(_))));
    }
}
