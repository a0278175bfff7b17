//! Eigen-decomposition of graded fields under a diagonal field
//! `delta = alpha x d/dx + beta y d/dy`, centralizers, principal parts and
//! opportune pairs.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::finiteness::{
    certify_locally_finite, certify_locally_nilpotent, jordan_decompose, Certificate, OrbitBudget,
};
use crate::scalar::{is_rational_ratio, Scalar};
use crate::vecfield::{ad_conjugate, exp_lnd, in_lattice, to_graded, Derivation, GradedForm, Weight};

/// Eigenvalue of `ad(delta)` on `D[a,b]`.
pub fn weight_eigenvalue(alpha: &Scalar, beta: &Scalar, w: Weight) -> Scalar {
    &(alpha * &Scalar::from_int(w.0 as i64)) + &(beta * &Scalar::from_int(w.1 as i64))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectralDecomposition {
    pub alpha: Scalar,
    pub beta: Scalar,
    /// Nonzero components keyed by eigenvalue, ascending in the real order.
    pub components: BTreeMap<Scalar, GradedForm>,
}

impl SpectralDecomposition {
    pub fn delta(&self) -> GradedForm {
        GradedForm::delta(&self.alpha, &self.beta)
    }

    pub fn spectrum(&self) -> Vec<Scalar> {
        self.components.keys().cloned().collect()
    }

    pub fn reconstruct(&self) -> GradedForm {
        self.components.values().fold(GradedForm::zero(), |acc, c| &acc + c)
    }
}

fn check_delta(alpha: &Scalar, beta: &Scalar) -> Result<()> {
    if alpha.is_zero() && beta.is_zero() {
        Err(Error::ZeroDelta)
    } else {
        Ok(())
    }
}

pub fn eigencomponents(g: &GradedForm, alpha: &Scalar, beta: &Scalar) -> Result<SpectralDecomposition> {
    check_delta(alpha, beta)?;
    let mut components: BTreeMap<Scalar, GradedForm> = BTreeMap::new();
    if !g.euler_coef().is_zero() {
        components.insert(Scalar::zero(), GradedForm::from_parts(g.euler_coef().clone(), [])?);
    }
    for (&w, c) in g.terms() {
        let lambda = weight_eigenvalue(alpha, beta, w);
        components.entry(lambda).or_default().add_term(w, c);
    }
    Ok(SpectralDecomposition { alpha: alpha.clone(), beta: beta.clone(), components })
}

/// Splits `g` into single-term eigenvectors plus the weight-zero remainder.
/// Only valid when `alpha / beta` is irrational, so that every nonzero
/// eigenspace is one-dimensional.
pub fn homogeneous_pieces(g: &GradedForm, alpha: &Scalar, beta: &Scalar) -> Result<Vec<GradedForm>> {
    check_delta(alpha, beta)?;
    if alpha.is_zero() || beta.is_zero() || is_rational_ratio(alpha, beta)? {
        return Err(Error::RationalRatio);
    }
    let spec = eigencomponents(g, alpha, beta)?;
    let mut pieces = Vec::new();
    let mut rest = GradedForm::zero();
    for (lambda, c) in &spec.components {
        if lambda.is_zero() {
            rest = c.clone();
        } else if c.num_terms() != 1 {
            return Err(Error::Inconsistency(format!("eigenvalue {lambda} has {} terms", c.num_terms())));
        }
    }
    for (&w, c) in g.terms() {
        if !weight_eigenvalue(alpha, beta, w).is_zero() {
            pieces.push(GradedForm::from_parts(Scalar::zero(), [(w, c.clone())])?);
        }
    }
    if !rest.is_zero() {
        pieces.push(rest);
    }
    Ok(pieces)
}

/// Basis of the centralizer of `delta(-m, n)`, cut off at `|i| <= bound`
/// along the ray of weights `i (n, m)`.
pub fn centralizer_basis(m: i64, n: i64, bound: i64) -> Result<Vec<GradedForm>> {
    if m.gcd(&n) != 1 {
        return Err(Error::NotCoprime(m, n));
    }
    if bound < 1 {
        return Err(Error::BudgetZero);
    }
    let mut out = vec![GradedForm::euler_field(), GradedForm::basis(0, 0)?];
    for i in -bound..=bound {
        if i == 0 {
            continue;
        }
        let (k, l) = (i * n, i * m);
        let fits = |v: i64| v >= -1 && v <= i32::MAX as i64;
        if fits(k) && fits(l) && in_lattice((k as i32, l as i32)) {
            out.push(GradedForm::basis(k as i32, l as i32)?);
        }
    }
    Ok(out)
}

/// Extreme eigencomponent of a locally finite field: the component at the
/// largest eigenvalue, or at the smallest one when the largest is zero.
pub fn principal_part(
    d: &Derivation,
    alpha: &Scalar,
    beta: &Scalar,
    budget: &OrbitBudget,
) -> Result<(Scalar, GradedForm)> {
    let spec = eigencomponents(&to_graded(d)?, alpha, beta)?;
    let (Some(max), Some(min)) = (spec.components.keys().next_back(), spec.components.keys().next()) else {
        return Err(Error::CentralizesDelta);
    };
    let lambda = if max.is_zero() { min.clone() } else { max.clone() };
    if lambda.is_zero() {
        return Err(Error::CentralizesDelta);
    }
    let part = spec.components[&lambda].clone();
    match certify_locally_nilpotent(&part.to_derivation(), budget)? {
        Certificate::LocallyNilpotent { .. } => Ok((lambda, part)),
        _ => Err(Error::NotCertified),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpportunePair {
    pub semisimple: Derivation,
    pub nilpotent: Derivation,
    /// `lambda` with `[s, dn] = lambda dn`, when `dn` is an eigenvector.
    pub eigenvalue: Option<Scalar>,
    pub nilpotency_order: usize,
}

/// Three-valued semisimplicity test; `None` means the budget ran out.
fn semisimple_verdict(s: &Derivation, budget: &OrbitBudget) -> Result<Option<bool>> {
    match certify_locally_finite(s, budget)? {
        Certificate::LocallyFinite { .. } => Ok(Some(jordan_decompose(s, budget)?.nilpotent.is_zero())),
        Certificate::Refuted { .. } => Ok(Some(false)),
        _ => Ok(None),
    }
}

/// Checks the opportune relations and certifies both members; returns the
/// assembled pair on success.
pub fn opportune_pair(s: &Derivation, dn: &Derivation, budget: &OrbitBudget) -> Result<Option<OpportunePair>> {
    let c = dn.bracket(s);
    if c.is_zero() || !dn.bracket(&c).is_zero() {
        return Ok(None);
    }
    let order = match certify_locally_nilpotent(dn, budget)? {
        Certificate::LocallyNilpotent { order } => order,
        Certificate::Refuted { .. } => return Ok(None),
        _ => return Err(Error::Inconclusive),
    };
    match semisimple_verdict(s, budget)? {
        Some(true) => {}
        Some(false) => return Ok(None),
        None => return Err(Error::Inconclusive),
    }
    Ok(Some(OpportunePair {
        semisimple: s.clone(),
        nilpotent: dn.clone(),
        eigenvalue: s.bracket(dn).ratio_to(dn),
        nilpotency_order: order,
    }))
}

pub fn is_opportune(s: &Derivation, dn: &Derivation, budget: &OrbitBudget) -> Result<bool> {
    Ok(opportune_pair(s, dn, budget)?.is_some())
}

/// `s_t = s + t [dn, s]`, checked against the pushforward of `s` by `exp(t dn)`.
pub fn adjoint_orbit_point(pair: &OpportunePair, t: &Scalar) -> Result<Derivation> {
    let s = &pair.semisimple;
    let st = s + &pair.nilpotent.bracket(s).scale(t);
    let cert = Certificate::LocallyNilpotent { order: pair.nilpotency_order };
    let phi = exp_lnd(&pair.nilpotent, t, &cert)?;
    if ad_conjugate(&phi, s)? != st {
        return Err(Error::Inconsistency("adjoint orbit differs from s + t[dn, s]".into()));
    }
    Ok(st)
}

/// The pair `(s, s + [dn, s])`, required to be independent and commuting.
pub fn toral_from_opportune(pair: &OpportunePair) -> Result<(Derivation, Derivation)> {
    let s0 = pair.semisimple.clone();
    let s1 = adjoint_orbit_point(pair, &Scalar::one())?;
    if s0.is_zero() || s1.is_zero() || s1.ratio_to(&s0).is_some() {
        return Err(Error::DependentResult("s0 and s1 are proportional".into()));
    }
    let c = s0.bracket(&s1);
    if !c.is_zero() {
        return Err(Error::DependentResult(format!("s0 and s1 do not commute: [s0, s1] = {c}")));
    }
    Ok((s0, s1))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Pair(OpportunePair),
    /// The semisimple element found commutes with every element.
    CentralDelta(Derivation),
    NotFound,
}

/// First certified semisimple element, or first nonzero Jordan semisimple part.
fn find_semisimple(elements: &[Derivation], budget: &OrbitBudget) -> Result<Option<Derivation>> {
    for e in elements {
        if e.is_zero() {
            continue;
        }
        if !matches!(certify_locally_finite(e, budget)?, Certificate::LocallyFinite { .. }) {
            continue;
        }
        let j = match jordan_decompose(e, budget) {
            Ok(j) => j,
            Err(Error::FieldExtensionRequired) => continue,
            Err(err) => return Err(err),
        };
        if !j.semisimple.is_zero() {
            return Ok(Some(j.semisimple));
        }
    }
    Ok(None)
}

fn pair_for(delta: &Derivation, d: &Derivation, budget: &OrbitBudget) -> Result<Option<OpportunePair>> {
    if let Ok(g) = to_graded(delta) {
        if g.is_diagonal() {
            let (alpha, beta) = g.delta_part();
            return match principal_part(d, &alpha, &beta, budget) {
                Ok((_, part)) => opportune_pair(delta, &part.to_derivation(), budget),
                Err(Error::CentralizesDelta | Error::NotCertified | Error::NotConstantDivergence) => Ok(None),
                Err(e) => Err(e),
            };
        }
    }
    if let Some(p) = opportune_pair(delta, d, budget)? {
        return Ok(Some(p));
    }
    match jordan_decompose(d, budget) {
        Ok(j) if !j.nilpotent.is_zero() => opportune_pair(delta, &j.nilpotent, budget),
        _ => Ok(None),
    }
}

/// Scans `elements` in order for an opportune pair built on the first
/// semisimple element (or semisimple Jordan part) found.
pub fn opportune_search(elements: &[Derivation], budget: &OrbitBudget) -> Result<SearchOutcome> {
    if elements.is_empty() {
        return Err(Error::EmptyGenerators);
    }
    let Some(delta) = find_semisimple(elements, budget)? else {
        return Ok(SearchOutcome::NotFound);
    };
    let mut central = true;
    for d in elements {
        if delta.bracket(d).is_zero() {
            continue;
        }
        central = false;
        match pair_for(&delta, d, budget) {
            Ok(Some(p)) => return Ok(SearchOutcome::Pair(p)),
            Ok(None) | Err(Error::Inconclusive) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(if central { SearchOutcome::CentralDelta(delta) } else { SearchOutcome::NotFound })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_derivation;

    fn d(s: &str) -> Derivation {
        parse_derivation(s).unwrap()
    }

    fn g(s: &str) -> GradedForm {
        to_graded(&d(s)).unwrap()
    }

    fn basis(a: i32, b: i32) -> GradedForm {
        GradedForm::basis(a, b).unwrap()
    }

    fn r2() -> Scalar {
        Scalar::sqrt2()
    }

    #[test]
    fn spectrum_of_worked_example() {
        let one = Scalar::one();
        let spec = eigencomponents(&g("(x-y)^2*(dx+dy)"), &one, &r2()).unwrap();
        let expect: Vec<Scalar> =
            [(-1, 2), (0, 1), (1, 0), (2, -1)].iter().map(|&w| weight_eigenvalue(&one, &r2(), w)).collect();
        let mut sorted = expect.clone();
        sorted.sort();
        assert_eq!(spec.spectrum(), sorted);
        let delta = spec.delta();
        for (lambda, c) in &spec.components {
            assert_eq!(delta.bracket(c), c.scale(lambda));
        }
    }

    #[test]
    fn zero_weight_components() {
        let one = Scalar::one();
        let t = GradedForm::delta(&Scalar::from_int(2), &Scalar::from_int(3));
        let spec = eigencomponents(&t, &one, &r2()).unwrap();
        assert_eq!(spec.spectrum(), vec![Scalar::zero()]);
        let h = &basis(-1, 1) + &basis(1, -1);
        let spec = eigencomponents(&h, &one, &one).unwrap();
        assert_eq!(spec.components.len(), 1);
        assert_eq!(spec.components[&Scalar::zero()], h);
        assert_eq!(eigencomponents(&h, &Scalar::zero(), &Scalar::zero()), Err(Error::ZeroDelta));
    }

    #[test]
    fn pieces_of_worked_example() {
        let pieces = homogeneous_pieces(&g("(x-y)^2*(dx+dy)"), &Scalar::one(), &r2()).unwrap();
        let third = Scalar::frac(1, 3);
        let expect = vec![
            basis(-1, 2).scale(&third),
            basis(0, 1).scale(&-Scalar::one()),
            basis(1, 0),
            basis(2, -1).scale(&-third),
        ];
        assert_eq!(pieces, expect);
        assert_eq!(homogeneous_pieces(&basis(3, 1), &Scalar::one(), &r2()).unwrap(), vec![basis(3, 1)]);
        assert_eq!(homogeneous_pieces(&basis(3, 1), &Scalar::one(), &Scalar::from_int(2)), Err(Error::RationalRatio));
    }

    #[test]
    fn centralizers() {
        let diag = [GradedForm::euler_field(), basis(0, 0)];
        let c = centralizer_basis(1, 1, 3).unwrap();
        let mut expect = diag.to_vec();
        expect.extend([basis(1, 1), basis(2, 2), basis(3, 3)]);
        assert_eq!(c, expect);
        let c = centralizer_basis(-2, 1, 5).unwrap();
        let mut expect = diag.to_vec();
        expect.push(basis(-1, 2));
        assert_eq!(c, expect);
        assert_eq!(centralizer_basis(2, 4, 3), Err(Error::NotCoprime(2, 4)));
        for (m, n) in [(2, 1), (1, 2), (3, -1), (-1, 3), (1, -1), (2, 3)] {
            let delta = GradedForm::delta(&Scalar::from_int(-m), &Scalar::from_int(n));
            for z in centralizer_basis(m, n, 4).unwrap() {
                assert!(delta.bracket(&z).is_zero(), "({m},{n}) {z}");
            }
        }
    }

    #[test]
    fn principal_parts() {
        let b = OrbitBudget::default();
        let (lambda, part) = principal_part(&d("x*dx + y*dx"), &Scalar::one(), &r2(), &b).unwrap();
        assert_eq!(lambda, &r2() - &Scalar::one());
        assert_eq!(part.to_derivation(), d("y*dx"));
        let one = Scalar::one();
        let (lambda, part) = principal_part(&basis(-1, 2).to_derivation(), &one, &one, &b).unwrap();
        assert_eq!((lambda, part), (one.clone(), basis(-1, 2)));
        assert_eq!(principal_part(&Derivation::euler(), &one, &r2(), &b), Err(Error::CentralizesDelta));
    }

    #[test]
    fn opportune_examples() {
        let b = OrbitBudget::default();
        assert!(is_opportune(&d("x*dx - y*dy"), &d("y*dx"), &b).unwrap());
        assert!(!is_opportune(&Derivation::euler(), &d("y*dx"), &b).unwrap());
        assert!(!is_opportune(&d("y*dx"), &d("y*dx"), &b).unwrap());
    }

    #[test]
    fn adjoint_orbit_points() {
        let b = OrbitBudget::default();
        let s = d("x*dx - y*dy");
        let p = opportune_pair(&s, &d("y*dx"), &b).unwrap().unwrap();
        assert_eq!(p.eigenvalue, Some(Scalar::from_int(-2)));
        assert_eq!(adjoint_orbit_point(&p, &Scalar::one()).unwrap(), d("x*dx - y*dy + 2y*dx"));
        assert_eq!(adjoint_orbit_point(&p, &Scalar::zero()).unwrap(), s);
        let p = opportune_pair(&s, &d("x*dy"), &b).unwrap().unwrap();
        assert_eq!(adjoint_orbit_point(&p, &Scalar::one()).unwrap(), d("x*dx - y*dy - 2x*dy"));
    }

    #[test]
    fn orbit_points_of_an_eigenvector_pair_do_not_commute() {
        // [s, s + [dn, s]] = [s, [dn, s]] = -lambda^2 dn when [s, dn] = lambda dn
        let p = opportune_pair(&d("x*dx - y*dy"), &d("y*dx"), &OrbitBudget::default()).unwrap().unwrap();
        match toral_from_opportune(&p) {
            Err(Error::DependentResult(msg)) => assert!(msg.contains("-4*y*dx"), "{msg}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn search_outcomes() {
        let b = OrbitBudget::default();
        let s = d("x*dx - y*dy");
        match opportune_search(&[s.clone(), d("y*dx + y^2*dx")], &b).unwrap() {
            SearchOutcome::Pair(p) => {
                assert_eq!(p.semisimple, s);
                assert_eq!(p.nilpotent, d("y*dx"));
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(
            opportune_search(&[Derivation::euler()], &b).unwrap(),
            SearchOutcome::CentralDelta(Derivation::euler())
        );
        assert_eq!(opportune_search(&[d("y*dx"), d("x*dy")], &b).unwrap(), SearchOutcome::NotFound);
    }
}
