//! Exact arithmetic in the real quadratic field Q(sqrt2).
//!
//! A [`Scalar`] is `rat + surd*sqrt2` with both parts reduced rationals.
//! Scalars are totally ordered through the real embedding, which the
//! spectral code relies on when it picks extreme eigenvalues.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Scalar {
    rat: BigRational,
    surd: BigRational,
}

impl Scalar {
    pub fn new(rat: BigRational, surd: BigRational) -> Self {
        Scalar { rat, surd }
    }

    pub fn from_rational(rat: BigRational) -> Self {
        Scalar { rat, surd: BigRational::zero() }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    /// `num/den` as a rational scalar. Panics if `den == 0`.
    pub fn frac(num: i64, den: i64) -> Self {
        Self::from_rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn sqrt2() -> Self {
        Scalar { rat: BigRational::zero(), surd: BigRational::one() }
    }

    pub fn rat_part(&self) -> &BigRational {
        &self.rat
    }

    pub fn surd_part(&self) -> &BigRational {
        &self.surd
    }

    pub fn is_rational(&self) -> bool {
        self.surd.is_zero()
    }

    /// Galois conjugate `rat - surd*sqrt2`.
    pub fn conjugate(&self) -> Self {
        Scalar { rat: self.rat.clone(), surd: -self.surd.clone() }
    }

    /// Field norm `rat^2 - 2 surd^2`, nonzero for every nonzero scalar.
    pub fn norm(&self) -> BigRational {
        &self.rat * &self.rat - BigRational::from_integer(BigInt::from(2)) * &self.surd * &self.surd
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.norm();
        let c = self.conjugate();
        Ok(Scalar { rat: c.rat / &n, surd: c.surd / n })
    }

    pub fn checked_div(&self, other: &Scalar) -> Result<Self> {
        Ok(self * &other.inv()?)
    }

    /// Sign of the real number `rat + surd*sqrt2`.
    pub fn signum(&self) -> Ordering {
        let sa = self.rat.cmp(&BigRational::zero());
        let sb = self.surd.cmp(&BigRational::zero());
        match (sa, sb) {
            (a, Ordering::Equal) => a,
            (Ordering::Equal, b) => b,
            (a, b) if a == b => a,
            (a, b) => {
                // opposite signs: the larger magnitude wins; a^2 = 2 b^2 has no rational solution
                let two = BigRational::from_integer(BigInt::from(2));
                if &self.rat * &self.rat > two * &self.surd * &self.surd {
                    a
                } else {
                    b
                }
            }
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Scalar::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    pub fn abs(&self) -> Self {
        if self.signum() == Ordering::Less {
            -self
        } else {
            self.clone()
        }
    }

    /// Exact textual form `INT(/INT)?((+|-)INT(/INT)?*sqrt2)?`.
    pub fn to_exact_string(&self) -> String {
        if self.surd.is_zero() {
            return self.rat.to_string();
        }
        let sign = if self.surd.is_negative() { '-' } else { '+' };
        format!("{}{}{}*sqrt2", self.rat, sign, self.surd.abs())
    }
}

/// True iff `alpha / beta` is rational.
pub fn is_rational_ratio(alpha: &Scalar, beta: &Scalar) -> Result<bool> {
    if beta.is_zero() {
        return Err(Error::ZeroDenominator);
    }
    // (a + b r)(c - d r) has surd part b c - a d
    let cross = &alpha.surd * &beta.rat - &alpha.rat * &beta.surd;
    Ok(cross.is_zero())
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_exact_string())
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).signum()
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<BigRational> for Scalar {
    fn from(r: BigRational) -> Self {
        Scalar::from_rational(r)
    }
}

impl Zero for Scalar {
    fn zero() -> Self {
        Scalar { rat: BigRational::zero(), surd: BigRational::zero() }
    }

    fn is_zero(&self) -> bool {
        self.rat.is_zero() && self.surd.is_zero()
    }
}

impl One for Scalar {
    fn one() -> Self {
        Scalar::from_int(1)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        Scalar { rat: &self.rat + &rhs.rat, surd: &self.surd + &rhs.surd }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        Scalar { rat: &self.rat - &rhs.rat, surd: &self.surd - &rhs.surd }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        let two = BigRational::from_integer(BigInt::from(2));
        Scalar {
            rat: &self.rat * &rhs.rat + two * &self.surd * &rhs.surd,
            surd: &self.rat * &rhs.surd + &self.surd * &rhs.rat,
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { rat: -self.rat.clone(), surd: -self.surd.clone() }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { rat: -self.rat, surd: -self.surd }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        self.rat += &rhs.rat;
        self.surd += &rhs.surd;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        self.rat -= &rhs.rat;
        self.surd -= &rhs.surd;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(r: i64, q: i64) -> Scalar {
        &Scalar::from_int(r) + &(&Scalar::from_int(q) * &Scalar::sqrt2())
    }

    #[test]
    fn conjugate_product_is_norm() {
        assert_eq!(&s(1, 1) * &s(1, -1), Scalar::from_int(-1));
    }

    #[test]
    fn inverse_of_sqrt2() {
        let q = Scalar::one().checked_div(&Scalar::sqrt2()).unwrap();
        assert_eq!(q, Scalar::new(BigRational::zero(), BigRational::new(1.into(), 2.into())));
        assert_eq!(&q * &Scalar::sqrt2(), Scalar::one());
    }

    #[test]
    fn division_by_zero() {
        assert_eq!(s(3, 2).checked_div(&Scalar::zero()), Err(Error::DivisionByZero));
    }

    #[test]
    fn rational_ratio() {
        assert!(!is_rational_ratio(&Scalar::one(), &Scalar::sqrt2()).unwrap());
        assert!(is_rational_ratio(&Scalar::from_int(2), &Scalar::from_int(4)).unwrap());
        assert!(is_rational_ratio(&s(0, 3), &Scalar::sqrt2()).unwrap());
        assert_eq!(is_rational_ratio(&Scalar::one(), &Scalar::zero()), Err(Error::ZeroDenominator));
    }

    #[test]
    fn real_order() {
        assert!(s(-1, 1) > Scalar::zero());
        assert!(s(2, -1) > Scalar::zero());
        assert!(s(1, -1) < Scalar::zero());
        assert!(Scalar::sqrt2() > s(1, 0));
        assert!(s(-1, 2) > Scalar::sqrt2());
    }

    #[test]
    fn exact_strings() {
        assert_eq!(Scalar::frac(-1, 3).to_string(), "-1/3");
        assert_eq!(Scalar::sqrt2().to_string(), "0+1*sqrt2");
        assert_eq!(s(2, -1).to_string(), "2-1*sqrt2");
    }
}
