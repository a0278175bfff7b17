//! Bounded certification of local finiteness and local nilpotency, and the
//! Jordan–Chevalley splitting of locally finite fields.
//!
//! Everything here is a semi-decision: a positive answer carries an exact
//! invariant subspace, a negative one carries a witness, and running out of
//! budget yields `Inconclusive`.

use std::cmp::Ordering;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{semisimple_part, Echelon, Matrix, SparseVec};
use crate::poly::{grlex_desc, BiPoly, Exp, Mode, Var};
use crate::vecfield::{classify_lf_shape, to_graded, Derivation, ShapeVerdict, Weight};

/// Monomial key whose smallest element is the grlex-leading monomial, so the
/// echelon pivot of a polynomial is its leading term.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct MonoKey(pub Exp);

impl Ord for MonoKey {
    fn cmp(&self, other: &Self) -> Ordering {
        grlex_desc(self.0, other.0)
    }
}

impl PartialOrd for MonoKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub(crate) fn poly_vec(f: &BiPoly) -> SparseVec<MonoKey> {
    f.terms().map(|(e, c)| (MonoKey(*e), c.clone())).collect()
}

pub(crate) fn vec_poly(v: &SparseVec<MonoKey>) -> BiPoly {
    BiPoly::from_terms(v.iter().map(|(k, c)| (k.0, c.clone()))).expect("keys come from polynomials")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OrbitBudget {
    pub max_dim: usize,
    pub max_deg: i32,
}

impl Default for OrbitBudget {
    fn default() -> Self {
        OrbitBudget { max_dim: 64, max_deg: 32 }
    }
}

/// What an orbit computation used before giving up.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BudgetSpent {
    pub dim: usize,
    pub max_degree: i32,
    /// Dimension after each round of applying the field.
    pub growth: Vec<usize>,
}

/// A finite-dimensional invariant subspace containing `seed`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitClosure {
    pub seed: BiPoly,
    /// Echelon basis, leading monomials strictly descending.
    pub basis: Vec<BiPoly>,
    /// Column `j` holds the coordinates of `d(basis[j])`.
    pub matrix: Matrix,
}

impl OrbitClosure {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrbitOutcome {
    Closed(OrbitClosure),
    Inconclusive(BudgetSpent),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// A Newton polygon vertex excluded by the shape filter.
    Vertex(Weight),
    /// A closed orbit on which the field acts by a non-nilpotent matrix.
    NonNilpotent(Box<OrbitClosure>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    LocallyFinite { orbit_x: Box<OrbitClosure>, orbit_y: Box<OrbitClosure> },
    LocallyNilpotent { order: usize },
    Inconclusive { budget_spent: BudgetSpent },
    Refuted { witness: Witness },
}

impl Certificate {
    pub fn kind(&self) -> &'static str {
        match self {
            Certificate::LocallyFinite { .. } => "LocallyFinite",
            Certificate::LocallyNilpotent { .. } => "LocallyNilpotent",
            Certificate::Inconclusive { .. } => "Inconclusive",
            Certificate::Refuted { .. } => "Refuted",
        }
    }
}

fn require_polynomial(d: &Derivation) -> Result<()> {
    match d.mode() {
        Mode::Polynomial => Ok(()),
        Mode::LaurentY => Err(Error::ModeViolation("orbit certificates need a polynomial field".into())),
    }
}

/// Saturates `span(seeds)` under `d` by exact echelonization.
fn saturate(
    d: &Derivation,
    seeds: &[BiPoly],
    budget: &OrbitBudget,
) -> std::result::Result<Echelon<MonoKey>, BudgetSpent> {
    let mut span = Echelon::new();
    let mut spent = BudgetSpent::default();
    let mut frontier = Vec::new();
    for s in seeds {
        if let Some(row) = span.insert(&poly_vec(s)) {
            frontier.push(vec_poly(&row));
        }
    }
    let note = |spent: &mut BudgetSpent, f: &BiPoly| {
        spent.max_degree = spent.max_degree.max(f.total_degree().unwrap_or(0));
    };
    for f in &frontier {
        note(&mut spent, f);
    }
    spent.dim = span.dim();
    spent.growth.push(span.dim());
    while !frontier.is_empty() {
        if span.dim() > budget.max_dim || spent.max_degree > budget.max_deg {
            return Err(spent);
        }
        let mut next = Vec::new();
        for f in &frontier {
            if let Some(row) = span.insert(&poly_vec(&d.apply(f))) {
                let g = vec_poly(&row);
                note(&mut spent, &g);
                next.push(g);
            }
        }
        frontier = next;
        spent.dim = span.dim();
        spent.growth.push(span.dim());
    }
    if span.dim() > budget.max_dim || spent.max_degree > budget.max_deg {
        return Err(spent);
    }
    Ok(span)
}

fn action_matrix(d: &Derivation, span: &Echelon<MonoKey>) -> Result<Matrix> {
    let cols = span
        .rows()
        .map(|r| {
            span.coordinates(&poly_vec(&d.apply(&vec_poly(r))))
                .ok_or_else(|| Error::Inconsistency("saturated span is not invariant".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Matrix::from_columns(span.dim(), &cols))
}

fn closure_of(d: &Derivation, seed: &BiPoly, span: &Echelon<MonoKey>) -> Result<OrbitClosure> {
    Ok(OrbitClosure { seed: seed.clone(), basis: span.rows().map(vec_poly).collect(), matrix: action_matrix(d, span)? })
}

/// Smallest invariant subspace containing `f`, within budget.
pub fn invariant_subspace(d: &Derivation, f: &BiPoly, budget: &OrbitBudget) -> Result<OrbitOutcome> {
    require_polynomial(d)?;
    match saturate(d, std::slice::from_ref(f), budget) {
        Ok(span) => Ok(OrbitOutcome::Closed(closure_of(d, f, &span)?)),
        Err(spent) => Ok(OrbitOutcome::Inconclusive(spent)),
    }
}

fn merge(a: BudgetSpent, b: BudgetSpent) -> BudgetSpent {
    if a.dim >= b.dim {
        a
    } else {
        b
    }
}

fn generator_orbits(
    d: &Derivation,
    budget: &OrbitBudget,
) -> Result<std::result::Result<(OrbitClosure, OrbitClosure), BudgetSpent>> {
    let ox = invariant_subspace(d, &BiPoly::x(), budget)?;
    let oy = invariant_subspace(d, &BiPoly::y(), budget)?;
    Ok(match (ox, oy) {
        (OrbitOutcome::Closed(a), OrbitOutcome::Closed(b)) => Ok((a, b)),
        (OrbitOutcome::Inconclusive(s), OrbitOutcome::Inconclusive(t)) => Err(merge(s, t)),
        (OrbitOutcome::Inconclusive(s), _) | (_, OrbitOutcome::Inconclusive(s)) => Err(s),
    })
}

/// Shape verdict when `d` has a bigraded form.
fn shape(d: &Derivation) -> Option<ShapeVerdict> {
    if d.is_zero() {
        return None;
    }
    to_graded(d).ok().and_then(|g| classify_lf_shape(&g).ok())
}

/// Orbits of `x` and `y` suffice: by the product rule every polynomial then
/// lies in a finite-dimensional invariant subspace.
pub fn certify_locally_finite(d: &Derivation, budget: &OrbitBudget) -> Result<Certificate> {
    require_polynomial(d)?;
    if let Some(ShapeVerdict::FailsLf { witness }) = shape(d) {
        return Ok(Certificate::Refuted { witness: Witness::Vertex(witness) });
    }
    Ok(match generator_orbits(d, budget)? {
        Ok((x, y)) => Certificate::LocallyFinite { orbit_x: Box::new(x), orbit_y: Box::new(y) },
        Err(spent) => Certificate::Inconclusive { budget_spent: spent },
    })
}

pub fn certify_locally_nilpotent(d: &Derivation, budget: &OrbitBudget) -> Result<Certificate> {
    require_polynomial(d)?;
    match generator_orbits(d, budget)? {
        Ok((x, y)) => {
            for orbit in [x, y] {
                if !orbit.matrix.is_nilpotent() {
                    return Ok(Certificate::Refuted { witness: Witness::NonNilpotent(Box::new(orbit)) });
                }
            }
            let order = nilpotency_order(d, budget.max_dim + 1)
                .ok_or_else(|| Error::Inconsistency("nilpotent orbit matrices but d^N(x) != 0".into()))?;
            Ok(Certificate::LocallyNilpotent { order })
        }
        Err(spent) => Ok(match shape(d) {
            Some(ShapeVerdict::FailsLf { witness }) | Some(ShapeVerdict::PassesLf { lnd_witness: witness }) => {
                Certificate::Refuted { witness: Witness::Vertex(witness) }
            }
            _ => Certificate::Inconclusive { budget_spent: spent },
        }),
    }
}

/// Least `N <= max` with `d^N(x) = d^N(y) = 0`.
pub fn nilpotency_order(d: &Derivation, max: usize) -> Option<usize> {
    let (mut fx, mut fy) = (BiPoly::x(), BiPoly::y());
    for n in 1..=max {
        fx = d.apply(&fx);
        fy = d.apply(&fy);
        if fx.is_zero() && fy.is_zero() {
            return Some(n);
        }
    }
    None
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JordanDecomposition {
    pub semisimple: Derivation,
    pub nilpotent: Derivation,
}

/// Jordan–Chevalley splitting `d = d_s + d_n` read off the action on
/// `span(orbit(x) + orbit(y) + 1)`.
pub fn jordan_decompose(d: &Derivation, budget: &OrbitBudget) -> Result<JordanDecomposition> {
    require_polynomial(d)?;
    if !matches!(certify_locally_finite(d, budget)?, Certificate::LocallyFinite { .. }) {
        return Err(Error::NotLocallyFinite);
    }
    let span = saturate(d, &[BiPoly::one(), BiPoly::x(), BiPoly::y()], budget).map_err(|_| Error::NotLocallyFinite)?;
    let basis: Vec<BiPoly> = span.rows().map(vec_poly).collect();
    let m = action_matrix(d, &span)?;
    let s = semisimple_part(&m)?;
    let image = |f: &BiPoly| -> BiPoly {
        let coords = span.coordinates(&poly_vec(f)).expect("generator lies in the span");
        s.mul_vec(&coords)
            .iter()
            .zip(&basis)
            .filter(|(c, _)| !c.is_zero())
            .fold(BiPoly::zero(), |acc, (c, b)| &acc + &b.scale(c))
    };
    let semisimple = Derivation::new(image(&BiPoly::x()), image(&BiPoly::y()));
    // the matrix splitting must come from a derivation on the whole span
    for (j, b) in basis.iter().enumerate() {
        if span.coordinates(&poly_vec(&semisimple.apply(b))) != Some(s.column(j)) {
            return Err(Error::Inconsistency("semisimple part does not extend to a derivation".into()));
        }
    }
    let nilpotent = d - &semisimple;
    if !semisimple.bracket(&nilpotent).is_zero() {
        return Err(Error::Inconsistency("Jordan parts do not commute".into()));
    }
    Ok(JordanDecomposition { semisimple, nilpotent })
}

/// Locally finite with vanishing nilpotent part.
pub fn is_semisimple(d: &Derivation, budget: &OrbitBudget) -> Result<bool> {
    Ok(jordan_decompose(d, budget)?.nilpotent.is_zero())
}

/// Coordinates of a field keyed by component and monomial; works in both modes.
pub(crate) fn field_vec(d: &Derivation) -> SparseVec<(u8, MonoKey)> {
    let mut v = SparseVec::new();
    for (tag, var) in [(0u8, Var::X), (1u8, Var::Y)] {
        for (e, c) in d.component(var).terms() {
            v.insert((tag, MonoKey(*e)), c.clone());
        }
    }
    v
}

/// Iterated brackets `seed, [d, seed], [d, [d, seed]], ...`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdOrbit {
    pub elements: Vec<Derivation>,
    /// True when an iterate fell into the span of the previous ones.
    pub closed: bool,
}

impl AdOrbit {
    pub fn dim(&self) -> usize {
        self.elements.len()
    }
}

/// Up to `max_len` linearly independent iterates of `ad_d` on `seed`.
pub fn ad_orbit(d: &Derivation, seed: &Derivation, max_len: usize) -> Result<AdOrbit> {
    if max_len == 0 {
        return Err(Error::BudgetZero);
    }
    let mut span = Echelon::new();
    let mut elements = Vec::new();
    let mut cur = seed.clone();
    while elements.len() < max_len {
        if span.insert(&field_vec(&cur)).is_none() {
            return Ok(AdOrbit { elements, closed: true });
        }
        let next = d.bracket(&cur);
        elements.push(cur);
        cur = next;
    }
    Ok(AdOrbit { elements, closed: false })
}

/// True when `d` maps the span of the products `l * r` into itself.
pub fn products_invariant(d: &Derivation, left: &[BiPoly], right: &[BiPoly]) -> bool {
    let mut span = Echelon::new();
    for a in left {
        for b in right {
            span.insert(&poly_vec(&(a * b)));
        }
    }
    let ok = span.rows().all(|r| span.contains(&poly_vec(&d.apply(&vec_poly(r)))));
    ok
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_derivation, parse_poly};
    use crate::scalar::Scalar;

    fn d(s: &str) -> Derivation {
        parse_derivation(s).unwrap()
    }

    fn p(s: &str) -> BiPoly {
        parse_poly(s).unwrap()
    }

    fn closed(o: OrbitOutcome) -> OrbitClosure {
        match o {
            OrbitOutcome::Closed(c) => c,
            other => panic!("expected a closed orbit, got {other:?}"),
        }
    }

    #[test]
    fn orbit_of_shear() {
        let c = closed(invariant_subspace(&d("y*dx"), &BiPoly::x(), &OrbitBudget::default()).unwrap());
        assert_eq!(c.basis, vec![BiPoly::x(), BiPoly::y()]);
        assert!(c.matrix.is_nilpotent() && !c.matrix.is_zero());
    }

    #[test]
    fn euler_eigenvector() {
        let c = closed(invariant_subspace(&Derivation::euler(), &p("x^2*y"), &OrbitBudget::default()).unwrap());
        assert_eq!(c.basis, vec![p("x^2*y")]);
        assert_eq!(c.matrix.get(0, 0), &Scalar::from_int(3));
    }

    #[test]
    fn small_budget_is_enough_for_closed_orbit() {
        let budget = OrbitBudget { max_dim: 5, ..Default::default() };
        let c = closed(invariant_subspace(&d("x^2*dy"), &BiPoly::y(), &budget).unwrap());
        assert_eq!(c.basis, vec![p("x^2"), BiPoly::y()]);
    }

    #[test]
    fn growing_orbit_is_inconclusive() {
        let budget = OrbitBudget { max_dim: 10, max_deg: 32 };
        match certify_locally_finite(&d("x^2*dx"), &budget).unwrap() {
            Certificate::Inconclusive { budget_spent } => {
                assert!(budget_spent.growth.windows(2).all(|w| w[1] > w[0]));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn local_finiteness_examples() {
        let b = OrbitBudget::default();
        let c = certify_locally_finite(&d("(x-y)^2*(dx+dy)"), &b).unwrap();
        let Certificate::LocallyFinite { orbit_x, .. } = c else { panic!() };
        assert_eq!(orbit_x.basis, vec![p("x^2 - 2x*y + y^2"), BiPoly::x()]);
        assert_eq!(
            certify_locally_finite(&d("2x^2*y*dx - 2x*y^2*dy"), &b).unwrap(),
            Certificate::Refuted { witness: Witness::Vertex((1, 1)) }
        );
    }

    #[test]
    fn local_nilpotency_examples() {
        let b = OrbitBudget::default();
        assert_eq!(certify_locally_nilpotent(&d("y*dx"), &b).unwrap(), Certificate::LocallyNilpotent { order: 2 });
        assert_eq!(
            certify_locally_nilpotent(&d("(x-y)^2*(dx+dy)"), &b).unwrap(),
            Certificate::LocallyNilpotent { order: 2 }
        );
        assert!(matches!(
            certify_locally_nilpotent(&d("x*dx - y*dy"), &b).unwrap(),
            Certificate::Refuted { witness: Witness::NonNilpotent(_) }
        ));
        assert_eq!(
            certify_locally_nilpotent(&Derivation::zero(), &b).unwrap(),
            Certificate::LocallyNilpotent { order: 1 }
        );
    }

    #[test]
    fn laurent_fields_are_rejected() {
        let r = certify_locally_finite(&d("y^-1*dx"), &OrbitBudget::default());
        assert!(matches!(r, Err(Error::ModeViolation(_))));
    }

    #[test]
    fn jordan_of_euler_plus_shear() {
        let b = OrbitBudget::default();
        let j = jordan_decompose(&d("x*dx + y*dy + x*dy"), &b).unwrap();
        assert_eq!(j.semisimple, Derivation::euler());
        assert_eq!(j.nilpotent, d("x*dy"));
        let again = jordan_decompose(&j.semisimple, &b).unwrap();
        assert!(again.nilpotent.is_zero());
        let n = jordan_decompose(&j.nilpotent, &b).unwrap();
        assert!(n.semisimple.is_zero());
    }

    #[test]
    fn jordan_trivial_cases() {
        let b = OrbitBudget::default();
        let s = d("x*dx - y*dy");
        assert_eq!(
            jordan_decompose(&s, &b).unwrap(),
            JordanDecomposition { semisimple: s.clone(), nilpotent: Derivation::zero() }
        );
        let n = d("y*dx");
        assert_eq!(
            jordan_decompose(&n, &b).unwrap(),
            JordanDecomposition { semisimple: Derivation::zero(), nilpotent: n }
        );
        assert_eq!(
            jordan_decompose(&d("x^2*dx"), &OrbitBudget { max_dim: 8, max_deg: 8 }),
            Err(Error::NotLocallyFinite)
        );
    }

    #[test]
    fn product_spaces_stay_invariant() {
        let f = d("x*dx + y*dy + x*dy");
        let b = OrbitBudget::default();
        let Certificate::LocallyFinite { orbit_x, orbit_y } = certify_locally_finite(&f, &b).unwrap() else { panic!() };
        let mut both = orbit_x.basis.clone();
        both.extend(orbit_y.basis.iter().cloned());
        assert!(products_invariant(&f, &both, &both));
    }

    #[test]
    fn laurent_ad_orbit_grows() {
        let o = ad_orbit(&Derivation::dy(), &d("y^-1*dx"), 20).unwrap();
        assert_eq!(o.dim(), 20);
        assert!(!o.closed);
        let o = ad_orbit(&Derivation::dy(), &d("y^3*dx"), 20).unwrap();
        assert!(o.closed && o.dim() == 4);
    }
}
