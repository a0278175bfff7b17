//! Bounded Lie closure of graded generators and the structural verdicts
//! built on it: derived and lower central series, finite dimensionality,
//! rank, triangularity and the Demazure-pair exclusion test.

use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::finiteness::{certify_locally_finite, jordan_decompose, Certificate, OrbitBudget};
use crate::linalg::{Echelon, SparseVec};
use crate::scalar::Scalar;
use crate::spectral::{homogeneous_pieces, opportune_search, OpportunePair, SearchOutcome};
use crate::vecfield::{bracket_graded, to_graded, Derivation, GradedForm, Weight};

/// Echelon coordinate: graded terms by (total weight, a), Euler last.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Coord {
    W(i32, i32),
    Euler,
}

fn to_vec(g: &GradedForm) -> SparseVec<Coord> {
    let mut v: SparseVec<Coord> = g.terms().map(|(&(a, b), c)| (Coord::W(a + b, a), c.clone())).collect();
    if !g.euler_coef().is_zero() {
        v.insert(Coord::Euler, g.euler_coef().clone());
    }
    v
}

fn from_vec(v: &SparseVec<Coord>) -> GradedForm {
    let mut euler = Scalar::zero();
    let mut terms = Vec::new();
    for (k, c) in v {
        match *k {
            Coord::W(t, a) => terms.push(((a, t - a), c.clone())),
            Coord::Euler => euler = c.clone(),
        }
    }
    GradedForm::from_parts(euler, terms).expect("coordinates come from lattice points")
}

/// A finite-dimensional span of graded fields in reduced echelon form.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LieSpan {
    ech: Echelon<Coord>,
}

impl LieSpan {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_elements<'a, I: IntoIterator<Item = &'a GradedForm>>(elements: I) -> Self {
        let mut s = Self::new();
        for g in elements {
            s.insert(g);
        }
        s
    }

    pub fn dim(&self) -> usize {
        self.ech.dim()
    }

    pub fn is_zero(&self) -> bool {
        self.ech.is_empty()
    }

    /// Basis rows in pivot order; pivot coefficients are one.
    pub fn basis(&self) -> Vec<GradedForm> {
        self.ech.rows().map(from_vec).collect()
    }

    pub fn contains(&self, g: &GradedForm) -> bool {
        self.ech.contains(&to_vec(g))
    }

    /// Adds `g`; returns the new reduced element when the span grew.
    pub fn insert(&mut self, g: &GradedForm) -> Option<GradedForm> {
        self.ech.insert(&to_vec(g)).map(|r| from_vec(&r))
    }

    pub fn is_subspace_of(&self, other: &LieSpan) -> bool {
        self.ech.is_subspace_of(&other.ech)
    }

    /// True when every bracket of basis elements stays in the span.
    pub fn is_closed(&self) -> bool {
        let b = self.basis();
        (0..b.len()).all(|i| (i + 1..b.len()).all(|j| self.contains(&bracket_graded(&b[i], &b[j]))))
    }

    pub fn derivations(&self) -> Vec<Derivation> {
        self.basis().iter().map(GradedForm::to_derivation).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClosureBudget {
    pub max_dim: usize,
    pub max_total_weight: i32,
    pub max_rounds: usize,
}

impl Default for ClosureBudget {
    fn default() -> Self {
        ClosureBudget { max_dim: 96, max_total_weight: 40, max_rounds: 32 }
    }
}

/// How deep derived and lower central series are followed.
pub const SERIES_DEPTH: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Closure {
    pub span: LieSpan,
    pub stabilized: bool,
    /// `(round, dim)`, starting with the generators at round 0.
    pub growth_trace: Vec<(usize, usize)>,
    /// New elements in the order they entered the span.
    pub discoveries: Vec<(usize, GradedForm)>,
    /// Brackets dropped for exceeding the weight cap.
    pub truncations: usize,
    pub hit_max_dim: bool,
}

fn weight_ok(g: &GradedForm, cap: i32) -> bool {
    g.max_total_weight().is_none_or(|w| w <= cap)
}

fn check_budget(b: &ClosureBudget) -> Result<()> {
    if b.max_dim == 0 || b.max_rounds == 0 {
        Err(Error::BudgetZero)
    } else {
        Ok(())
    }
}

/// Round-based saturation under the bracket. Each round brackets the
/// elements found in the previous round against everything found so far.
pub fn lie_closure(gens: &[GradedForm], budget: &ClosureBudget) -> Result<Closure> {
    check_budget(budget)?;
    if gens.is_empty() {
        return Err(Error::EmptyGenerators);
    }
    let mut span = LieSpan::new();
    let mut found: Vec<GradedForm> = Vec::new();
    let mut discoveries = Vec::new();
    let mut truncations = 0;
    let mut hit_max_dim = false;
    for g in gens {
        if !weight_ok(g, budget.max_total_weight) {
            truncations += 1;
            continue;
        }
        if span.dim() >= budget.max_dim {
            hit_max_dim = true;
            break;
        }
        if let Some(r) = span.insert(g) {
            discoveries.push((0, r.clone()));
            found.push(r);
        }
    }
    let mut trace = vec![(0, span.dim())];
    let mut start = 0;
    let mut round = 0;
    while start < found.len() && !hit_max_dim && round < budget.max_rounds {
        round += 1;
        let end = found.len();
        let pairs: Vec<(usize, usize)> =
            (start..end).flat_map(|i| (0..end).filter(move |&j| j < start || j > i).map(move |j| (i, j))).collect();
        let brackets: Vec<GradedForm> = pairs.par_iter().map(|&(i, j)| bracket_graded(&found[i], &found[j])).collect();
        for b in brackets {
            if b.is_zero() {
                continue;
            }
            if !weight_ok(&b, budget.max_total_weight) {
                truncations += 1;
                continue;
            }
            if span.contains(&b) {
                continue;
            }
            if span.dim() >= budget.max_dim {
                hit_max_dim = true;
                break;
            }
            let r = span.insert(&b).expect("element outside the span");
            discoveries.push((round, r.clone()));
            found.push(r);
        }
        start = end;
        trace.push((round, span.dim()));
    }
    let stabilized = start == found.len() && !hit_max_dim && truncations == 0;
    Ok(Closure { span, stabilized, growth_trace: trace, discoveries, truncations, hit_max_dim })
}

/// One term of a derived or lower central series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesTerm {
    pub span: LieSpan,
    /// False once any budget cut affected this term or an earlier one.
    pub exact: bool,
}

fn pairwise_brackets(left: &[GradedForm], right: &[GradedForm], symmetric: bool) -> Vec<GradedForm> {
    let pairs: Vec<(usize, usize)> = (0..left.len())
        .flat_map(|i| (0..right.len()).filter(move |&j| !symmetric || j > i).map(move |j| (i, j)))
        .collect();
    pairs.par_iter().map(|&(i, j)| bracket_graded(&left[i], &right[j])).filter(|g| !g.is_zero()).collect()
}

/// `h, [h,h], [[h,h],[h,h]], ...` up to `depth` steps, stopping at zero.
pub fn derived_series(h: &LieSpan, exact: bool, depth: usize, budget: &ClosureBudget) -> Result<Vec<SeriesTerm>> {
    check_budget(budget)?;
    let mut out = vec![SeriesTerm { span: h.clone(), exact }];
    for _ in 0..depth {
        let last = out.last().unwrap();
        if last.span.is_zero() {
            break;
        }
        let basis = last.span.basis();
        let brackets = pairwise_brackets(&basis, &basis, true);
        let next = if brackets.is_empty() {
            SeriesTerm { span: LieSpan::new(), exact: last.exact }
        } else {
            let c = lie_closure(&brackets, budget)?;
            SeriesTerm { span: c.span, exact: last.exact && c.stabilized }
        };
        let done = next.span == last.span && next.exact;
        out.push(next);
        if done {
            break;
        }
    }
    Ok(out)
}

/// `C^1 = span`, `C^{k+1} = [ambient, C^k]`.
pub fn lower_central_series(
    span: &LieSpan,
    ambient: &LieSpan,
    depth: usize,
    budget: &ClosureBudget,
) -> Result<Vec<SeriesTerm>> {
    check_budget(budget)?;
    let amb = ambient.basis();
    let mut out = vec![SeriesTerm { span: span.clone(), exact: true }];
    for _ in 0..depth {
        let last = out.last().unwrap();
        if last.span.is_zero() {
            break;
        }
        let mut next = LieSpan::new();
        let mut exact = last.exact;
        for g in pairwise_brackets(&amb, &last.span.basis(), false) {
            if !weight_ok(&g, budget.max_total_weight) {
                exact = false;
                continue;
            }
            if next.dim() >= budget.max_dim && !next.contains(&g) {
                exact = false;
                break;
            }
            next.insert(&g);
        }
        let done = next == last.span && exact;
        out.push(SeriesTerm { span: next, exact });
        if done {
            break;
        }
    }
    Ok(out)
}

/// Number of steps `k` with `C^{k+1} = 0`, when the series is exact.
pub fn nilpotency_step(lcs: &[SeriesTerm]) -> Option<usize> {
    let pos = lcs.iter().position(|t| t.span.is_zero())?;
    lcs[pos].exact.then_some(pos)
}

/// Derived length `n` with `h^(n) = 0`, when exact.
pub fn derived_length(series: &[SeriesTerm]) -> Option<usize> {
    nilpotency_step(series)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FiniteDimVerdict {
    FiniteDim(usize),
    LikelyInfinite { growth: Vec<usize> },
    Unknown,
}

/// Strict growth over the last five recorded rounds.
fn persistent_growth(trace: &[(usize, usize)]) -> bool {
    trace.len() >= 5 && trace[trace.len() - 5..].windows(2).all(|w| w[1].1 > w[0].1)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RankVerdict {
    Rank2(Box<OpportunePair>),
    AtMost1,
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Triangular {
    InJplus,
    InJminus,
    Neither,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triangularity {
    pub shape: Triangular,
    pub filtration_degree: Option<i32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exclusion {
    Clean,
    /// Smallest `k` and `l` with `D[-1,k]` and `D[l,-1]` both in the span.
    Violation(i32, i32),
}

/// Degree of the `p(y) d/dx` part when `d` has the upper triangular shape.
fn jplus_degree(d: &Derivation) -> Option<i32> {
    let mut deg = 0;
    for (&(i, j), _) in d.p().terms() {
        match (i, j) {
            (0, k) if k >= 0 => deg = deg.max(k),
            (1, 0) => {}
            _ => return None,
        }
    }
    d.q().terms().all(|(&e, _)| e == (0, 1) || e == (0, 0)).then_some(deg)
}

pub fn triangular_analysis(span: &LieSpan) -> Triangularity {
    let fields = span.derivations();
    let degree = |fs: &mut dyn Iterator<Item = Derivation>| -> Option<i32> {
        fs.map(|d| jplus_degree(&d)).try_fold(0, |acc, d| d.map(|d| acc.max(d)))
    };
    if let Some(deg) = degree(&mut fields.iter().cloned()) {
        return Triangularity { shape: Triangular::InJplus, filtration_degree: Some(deg) };
    }
    if let Some(deg) = degree(&mut fields.iter().map(Derivation::swap_xy)) {
        return Triangularity { shape: Triangular::InJminus, filtration_degree: Some(deg) };
    }
    Triangularity { shape: Triangular::Neither, filtration_degree: None }
}

pub fn exclusion_check(span: &LieSpan) -> Exclusion {
    let mut ks: Vec<i32> = Vec::new();
    let mut ls: Vec<i32> = Vec::new();
    for g in span.basis() {
        for (&(a, b), _) in g.terms() {
            if a == -1 && b >= 1 {
                ks.push(b);
            }
            if b == -1 && a >= 1 {
                ls.push(a);
            }
        }
    }
    let member = |w: Weight| GradedForm::basis(w.0, w.1).map(|g| span.contains(&g)).unwrap_or(false);
    ks.sort_unstable();
    ls.sort_unstable();
    let k = ks.into_iter().find(|&k| member((-1, k)));
    let l = ls.into_iter().find(|&l| member((l, -1)));
    match (k, l) {
        (Some(k), Some(l)) => Exclusion::Violation(k, l),
        _ => Exclusion::Clean,
    }
}

/// Candidates for the opportune-pair search: the elements themselves, their
/// Jordan parts and their homogeneous pieces under an irrational diagonal
/// field. Pieces and parts outside `span` (when given) are skipped.
fn rank_candidates(elements: &[Derivation], span: Option<&LieSpan>, budget: &OrbitBudget) -> Result<Vec<Derivation>> {
    let mut out: Vec<Derivation> = elements.to_vec();
    let keep = |d: &Derivation| -> bool {
        match (span, to_graded(d)) {
            (None, _) => true,
            (Some(s), Ok(g)) => s.contains(&g),
            (Some(_), Err(_)) => false,
        }
    };
    let push = |out: &mut Vec<Derivation>, d: Derivation| {
        if !d.is_zero() && !out.contains(&d) && keep(&d) {
            out.push(d);
        }
    };
    for e in elements {
        if let Certificate::LocallyFinite { .. } = certify_locally_finite(e, budget)? {
            if let Ok(j) = jordan_decompose(e, budget) {
                push(&mut out, j.semisimple);
                push(&mut out, j.nilpotent);
            }
        }
    }
    for e in elements {
        if let Ok(g) = to_graded(e) {
            for piece in homogeneous_pieces(&g, &Scalar::from_int(1), &Scalar::sqrt2())? {
                push(&mut out, piece.to_derivation());
            }
        }
    }
    Ok(out)
}

pub fn rank_analysis(elements: &[Derivation], span: Option<&LieSpan>, budget: &OrbitBudget) -> Result<RankVerdict> {
    let candidates = rank_candidates(elements, span, budget)?;
    Ok(match opportune_search(&candidates, budget)? {
        SearchOutcome::Pair(p) => RankVerdict::Rank2(Box::new(p)),
        SearchOutcome::CentralDelta(_) => RankVerdict::AtMost1,
        SearchOutcome::NotFound => RankVerdict::Unknown,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdicts {
    /// Derived length when the derived series provably reaches zero.
    pub solvable: Option<usize>,
    /// Nilpotency step of the derived ideal when its lower central series reaches zero.
    pub nilpotent_derived: Option<usize>,
    pub finite_dim: FiniteDimVerdict,
    pub rank: RankVerdict,
    /// Set when the rank result falls outside the solvable, locally finite setting.
    pub rank_heuristic: bool,
    pub triangular: Triangularity,
    pub exclusion: Exclusion,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureReport {
    pub closure: Closure,
    pub derived: Vec<SeriesTerm>,
    pub lcs: Vec<SeriesTerm>,
    pub verdicts: Verdicts,
}

impl ClosureReport {
    pub fn derived_dims(&self) -> Vec<usize> {
        self.derived.iter().map(|t| t.span.dim()).collect()
    }

    pub fn lcs_dims(&self) -> Vec<usize> {
        self.lcs.iter().map(|t| t.span.dim()).collect()
    }
}

fn finite_dim_from(
    closure: &Closure,
    solvable: Option<usize>,
    nilpotent_derived: Option<usize>,
) -> Result<FiniteDimVerdict> {
    if closure.stabilized {
        if solvable.is_some() && nilpotent_derived.is_none() {
            return Err(Error::Inconsistency(
                "finite-dimensional solvable span with non-nilpotent derived ideal".into(),
            ));
        }
        return Ok(FiniteDimVerdict::FiniteDim(closure.span.dim()));
    }
    if persistent_growth(&closure.growth_trace) && nilpotent_derived.is_none() {
        return Ok(FiniteDimVerdict::LikelyInfinite { growth: closure.growth_trace.iter().map(|t| t.1).collect() });
    }
    Ok(FiniteDimVerdict::Unknown)
}

/// Closure plus derived and lower central series, without the verdicts
/// that need orbit certificates.
fn structure(gens: &[GradedForm], budget: &ClosureBudget) -> Result<(Closure, Vec<SeriesTerm>, Vec<SeriesTerm>)> {
    let closure = lie_closure(gens, budget)?;
    let derived = derived_series(&closure.span, closure.stabilized, SERIES_DEPTH, budget)?;
    let lcs = match derived.get(1) {
        Some(h1) => {
            let mut l = lower_central_series(&h1.span, &h1.span, SERIES_DEPTH, budget)?;
            if !h1.exact {
                l.iter_mut().for_each(|t| t.exact = false);
            }
            l
        }
        None => vec![SeriesTerm { span: LieSpan::new(), exact: true }],
    };
    Ok((closure, derived, lcs))
}

pub fn finite_dim_verdict(gens: &[GradedForm], budget: &ClosureBudget) -> Result<FiniteDimVerdict> {
    let (closure, derived, lcs) = structure(gens, budget)?;
    finite_dim_from(&closure, derived_length(&derived), nilpotency_step(&lcs))
}

/// Full pipeline on constant-divergence generators.
pub fn analyze(gens: &[Derivation], budget: &ClosureBudget, orbit: &OrbitBudget) -> Result<ClosureReport> {
    let graded = gens.iter().map(to_graded).collect::<Result<Vec<_>>>()?;
    let (closure, derived, lcs) = structure(&graded, budget)?;
    let solvable = derived_length(&derived);
    let nilpotent_derived = nilpotency_step(&lcs);
    let finite_dim = finite_dim_from(&closure, solvable, nilpotent_derived)?;
    let rank = rank_analysis(gens, Some(&closure.span), orbit)?;
    let mut all_lf = true;
    for g in gens {
        all_lf &= matches!(certify_locally_finite(g, orbit)?, Certificate::LocallyFinite { .. });
    }
    let toral = closure.span.basis().iter().all(GradedForm::is_diagonal);
    let rank_heuristic = !(solvable.is_some() && all_lf && !toral);
    let verdicts = Verdicts {
        solvable,
        nilpotent_derived,
        finite_dim,
        rank,
        rank_heuristic,
        triangular: triangular_analysis(&closure.span),
        exclusion: exclusion_check(&closure.span),
    };
    Ok(ClosureReport { closure, derived, lcs, verdicts })
}
