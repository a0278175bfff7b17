//! Bigraded coordinates on the constant-divergence fields.
//!
//! Every constant-divergence field decomposes uniquely as
//! `c0 * E + sum c_{a,b} D[a,b]`, where `E` is the Euler field and
//! `D[a,b] = (b+1) x^{a+1} y^b d/dx - (a+1) x^a y^{b+1} d/dy` for `(a,b)` in
//! the lattice `a, b >= -1`, `(a,b) != (-1,-1)`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{One, Zero};

use super::Derivation;
use crate::error::{Error, Result};
use crate::poly::{join_signed, term_text, BiPoly, Mode};
use crate::scalar::Scalar;

/// A bidegree `(a, b)`.
pub type Weight = (i32, i32);

pub fn in_lattice(w: Weight) -> bool {
    w.0 >= -1 && w.1 >= -1 && w != (-1, -1)
}

#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct GradedForm {
    euler: Scalar,
    graded: BTreeMap<Weight, Scalar>,
}

impl GradedForm {
    pub fn zero() -> Self {
        GradedForm::default()
    }

    /// The basis field `D[a,b]`.
    pub fn basis(a: i32, b: i32) -> Result<Self> {
        if !in_lattice((a, b)) {
            return Err(Error::NotInLattice(a, b));
        }
        let mut g = Self::zero();
        g.graded.insert((a, b), Scalar::one());
        Ok(g)
    }

    pub fn euler_field() -> Self {
        GradedForm { euler: Scalar::one(), graded: BTreeMap::new() }
    }

    /// `alpha x d/dx + beta y d/dy`, stored in the weight-(0,0) plane.
    pub fn delta(alpha: &Scalar, beta: &Scalar) -> Self {
        let half = Scalar::frac(1, 2);
        let mut g = GradedForm { euler: &(alpha + beta) * &half, graded: BTreeMap::new() };
        g.add_term((0, 0), &(&(alpha - beta) * &half));
        g
    }

    pub fn from_parts<I: IntoIterator<Item = (Weight, Scalar)>>(euler: Scalar, terms: I) -> Result<Self> {
        let mut g = GradedForm { euler, graded: BTreeMap::new() };
        for (w, c) in terms {
            if !in_lattice(w) {
                return Err(Error::NotInLattice(w.0, w.1));
            }
            g.add_term(w, &c);
        }
        Ok(g)
    }

    pub(crate) fn add_term(&mut self, w: Weight, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        debug_assert!(in_lattice(w));
        match self.graded.get_mut(&w) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.graded.remove(&w);
                }
            }
            None => {
                self.graded.insert(w, c.clone());
            }
        }
    }

    pub fn euler_coef(&self) -> &Scalar {
        &self.euler
    }

    pub fn coeff(&self, w: Weight) -> Scalar {
        self.graded.get(&w).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Graded terms in ascending weight order.
    pub fn terms(&self) -> impl Iterator<Item = (&Weight, &Scalar)> {
        self.graded.iter()
    }

    pub fn support(&self) -> Vec<Weight> {
        self.graded.keys().copied().collect()
    }

    pub fn num_terms(&self) -> usize {
        self.graded.len() + usize::from(!self.euler.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.euler.is_zero() && self.graded.is_empty()
    }

    /// `(alpha, beta)` of the weight-(0,0) part `alpha x d/dx + beta y d/dy`.
    pub fn delta_part(&self) -> (Scalar, Scalar) {
        let c00 = self.coeff((0, 0));
        (&self.euler + &c00, &self.euler - &c00)
    }

    /// True when the form lies in the diagonal torus algebra t2.
    pub fn is_diagonal(&self) -> bool {
        self.graded.keys().all(|&w| w == (0, 0))
    }

    /// Largest total weight `a + b` in the support (the Euler part has weight 0).
    pub fn max_total_weight(&self) -> Option<i32> {
        let g = self.graded.keys().map(|&(a, b)| a + b).max();
        if self.euler.is_zero() {
            g
        } else {
            Some(g.map_or(0, |m| m.max(0)))
        }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        GradedForm { euler: &self.euler * c, graded: self.graded.iter().map(|(w, v)| (*w, v * c)).collect() }
    }

    pub fn to_derivation(&self) -> Derivation {
        from_graded(self)
    }

    pub fn bracket(&self, other: &GradedForm) -> GradedForm {
        bracket_graded(self, other)
    }
}

/// Coefficient of `D[a+a', b+b']` in `[D[a,b], D[a',b']]`.
pub fn structure_constant(w1: Weight, w2: Weight) -> i64 {
    let (a, b) = (w1.0 as i64, w1.1 as i64);
    let (a2, b2) = (w2.0 as i64, w2.1 as i64);
    (a2 + 1) * (b + 1) - (a + 1) * (b2 + 1)
}

/// Bracket computed only from structure constants.
pub fn bracket_graded(g1: &GradedForm, g2: &GradedForm) -> GradedForm {
    bracket_graded_with(g1, g2, structure_constant)
}

/// Same as [`bracket_graded`] with a caller-supplied table of structure
/// constants; used to check that the oracle sweep detects corrupted tables.
pub fn bracket_graded_with(g1: &GradedForm, g2: &GradedForm, constant: fn(Weight, Weight) -> i64) -> GradedForm {
    let mut out = GradedForm::zero();
    for (&w1, c1) in &g1.graded {
        for (&w2, c2) in &g2.graded {
            let target = (w1.0 + w2.0, w1.1 + w2.1);
            // D[-1,-1] := 0, and weights off the lattice never carry a nonzero constant
            if !in_lattice(target) {
                continue;
            }
            let k = constant(w1, w2);
            if k != 0 {
                out.add_term(target, &(&(c1 * c2) * &Scalar::from_int(k)));
            }
        }
    }
    // [E, D[a,b]] = (a + b) D[a,b]
    if !g1.euler.is_zero() {
        for (&(a, b), c2) in &g2.graded {
            out.add_term((a, b), &(&(&g1.euler * c2) * &Scalar::from_int((a + b) as i64)));
        }
    }
    if !g2.euler.is_zero() {
        for (&(a, b), c1) in &g1.graded {
            out.add_term((a, b), &-(&(&g2.euler * c1) * &Scalar::from_int((a + b) as i64)));
        }
    }
    out
}

fn basis_derivation(a: i32, b: i32) -> Derivation {
    let mut p = BiPoly::zero();
    let mut q = BiPoly::zero();
    if b + 1 != 0 {
        p.add_term((a + 1, b), &Scalar::from_int((b + 1) as i64));
    }
    if a + 1 != 0 {
        q.add_term((a, b + 1), &Scalar::from_int(-((a + 1) as i64)));
    }
    Derivation::new(p, q)
}

pub fn from_graded(g: &GradedForm) -> Derivation {
    let mut p = BiPoly::zero();
    let mut q = BiPoly::zero();
    if !g.euler.is_zero() {
        p.add_term((1, 0), &g.euler);
        q.add_term((0, 1), &g.euler);
    }
    for (&(a, b), c) in &g.graded {
        let d = basis_derivation(a, b);
        for (e, v) in d.p().terms() {
            p.add_term(*e, &(v * c));
        }
        for (e, v) in d.q().terms() {
            q.add_term(*e, &(v * c));
        }
    }
    Derivation::new(p, q)
}

/// Bigraded decomposition of a constant-divergence polynomial field.
pub fn to_graded(d: &Derivation) -> Result<GradedForm> {
    if d.mode() == Mode::LaurentY {
        return Err(Error::ModeViolation("bigraded form needs a polynomial field".into()));
    }
    let c = d.divergence().as_constant().ok_or(Error::NotConstantDivergence)?;
    let euler = &c * &Scalar::frac(1, 2);
    let rest = d - &from_graded(&GradedForm { euler: euler.clone(), graded: BTreeMap::new() });

    let mut out = GradedForm { euler, graded: BTreeMap::new() };
    let mut weights: Vec<Weight> = rest.p().terms().map(|(&(i, j), _)| (i - 1, j)).collect();
    weights.extend(rest.q().terms().map(|(&(i, j), _)| (i, j - 1)));
    weights.sort_unstable();
    weights.dedup();
    for (a, b) in weights {
        let c = if b + 1 != 0 {
            rest.p().coeff((a + 1, b)).checked_div(&Scalar::from_int((b + 1) as i64))?
        } else {
            -rest.q().coeff((a, b + 1)).checked_div(&Scalar::from_int((a + 1) as i64))?
        };
        out.add_term((a, b), &c);
    }
    if from_graded(&out) != *d {
        return Err(Error::Inconsistency("bigraded decomposition does not reconstruct the field".into()));
    }
    Ok(out)
}

impl<'a> Add<&'a GradedForm> for &'a GradedForm {
    type Output = GradedForm;
    fn add(self, rhs: &GradedForm) -> GradedForm {
        let mut out = self.clone();
        out.euler += &rhs.euler;
        for (w, c) in &rhs.graded {
            out.add_term(*w, c);
        }
        out
    }
}

impl<'a> Sub<&'a GradedForm> for &'a GradedForm {
    type Output = GradedForm;
    fn sub(self, rhs: &GradedForm) -> GradedForm {
        self + &-rhs
    }
}

impl Neg for &GradedForm {
    type Output = GradedForm;
    fn neg(self) -> GradedForm {
        self.scale(&-Scalar::one())
    }
}

impl fmt::Display for GradedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut items = Vec::new();
        if !self.euler.is_zero() {
            items.push(term_text(&self.euler, "E"));
        }
        let mut keys: Vec<&Weight> = self.graded.keys().collect();
        keys.sort_by_key(|&&(a, b)| (a + b, a));
        for w in keys {
            items.push(term_text(&self.graded[w], &format!("D[{},{}]", w.0, w.1)));
        }
        f.write_str(&join_signed(items))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_derivation;

    fn d(a: i32, b: i32) -> GradedForm {
        GradedForm::basis(a, b).unwrap()
    }

    #[test]
    fn paper_example_decomposition() {
        let f = parse_derivation("(x-y)^2*(dx+dy)").unwrap();
        let g = to_graded(&f).unwrap();
        assert!(g.euler_coef().is_zero());
        let expected = GradedForm::from_parts(
            Scalar::zero(),
            [
                ((-1, 2), Scalar::frac(1, 3)),
                ((0, 1), Scalar::from_int(-1)),
                ((1, 0), Scalar::from_int(1)),
                ((2, -1), Scalar::frac(-1, 3)),
            ],
        )
        .unwrap();
        assert_eq!(g, expected);
        assert_eq!(g.to_string(), "1/3*D[-1,2] - D[0,1] + D[1,0] - 1/3*D[2,-1]");
    }

    #[test]
    fn euler_and_errors() {
        assert_eq!(to_graded(&Derivation::euler()).unwrap(), GradedForm::euler_field());
        assert_eq!(to_graded(&parse_derivation("x^2*dx").unwrap()), Err(Error::NotConstantDivergence));
        assert!(matches!(to_graded(&parse_derivation("y^-1*dx").unwrap()), Err(Error::ModeViolation(_))));
    }

    #[test]
    fn structure_constant_examples() {
        assert_eq!(bracket_graded(&d(-1, 1), &d(1, -1)), d(0, 0).scale(&Scalar::from_int(4)));
        assert_eq!(bracket_graded(&d(0, 1), &d(1, 0)), d(1, 1).scale(&Scalar::from_int(3)));
        let delta = GradedForm::delta(&Scalar::one(), &Scalar::one());
        assert_eq!(bracket_graded(&delta, &d(-1, 2)), d(-1, 2));
        // D[-1,0] and D[0,-1] would land on D[-1,-1] := 0
        assert!(bracket_graded(&d(-1, 0), &d(0, -1)).is_zero());
    }

    #[test]
    fn delta_roundtrip() {
        let g = GradedForm::delta(&Scalar::from_int(2), &Scalar::from_int(3));
        assert_eq!(g.delta_part(), (Scalar::from_int(2), Scalar::from_int(3)));
        assert_eq!(from_graded(&g), parse_derivation("2*x*dx + 3*y*dy").unwrap());
    }

    #[test]
    fn basis_fields_are_divergence_free() {
        for a in -1..5 {
            for b in -1..5 {
                if (a, b) != (-1, -1) {
                    assert!(from_graded(&d(a, b)).divergence().is_zero());
                }
            }
        }
        assert_eq!(GradedForm::basis(-1, -1), Err(Error::NotInLattice(-1, -1)));
    }
}
