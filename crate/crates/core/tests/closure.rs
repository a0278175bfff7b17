mod common;

use common::{field, triangular};
use planevec_core::closure::{
    analyze, derived_length, derived_series, lie_closure, lower_central_series, nilpotency_step, ClosureBudget, LieSpan,
};
use planevec_core::finiteness::{jordan_decompose, OrbitBudget};
use planevec_core::vecfield::to_graded;
use planevec_core::{Derivation, GradedForm};
use proptest::prelude::*;

fn graded_all(ds: &[Derivation]) -> Vec<GradedForm> {
    ds.iter().map(|d| to_graded(d).unwrap()).collect()
}

fn generators() -> impl Strategy<Value = Vec<Derivation>> {
    prop::collection::vec(triangular(), 1..=3)
}

/// Stabilized closure of the generators, or `None` when the budget ran out.
fn closed_span(gens: &[GradedForm]) -> Option<LieSpan> {
    let c = lie_closure(gens, &ClosureBudget::default()).unwrap();
    c.stabilized.then_some(c.span)
}

/// Triangular generator sets used as worked examples.
const EXAMPLES: [&[&str]; 5] = [
    &["x*dx - y*dy", "y*dx"],
    &["y^2*dx", "x*dx - y*dy", "dy"],
    &["y*dx", "dy"],
    &["y^3*dx", "dy", "x*dx"],
    &["x*dx + y*dy", "y^2*dx + dy"],
];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn closure_is_deterministic_across_schedules(gens in generators()) {
        let g = graded_all(&gens);
        let budget = ClosureBudget::default();
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let four = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
        let a = one.install(|| lie_closure(&g, &budget).unwrap());
        let b = four.install(|| lie_closure(&g, &budget).unwrap());
        prop_assert_eq!(a.span.basis(), b.span.basis());
        prop_assert_eq!(a.growth_trace, b.growth_trace);
        prop_assert_eq!(a.discoveries, b.discoveries);
    }

    #[test]
    fn stabilized_spans_are_closed(gens in generators()) {
        let g = graded_all(&gens);
        let Some(span) = closed_span(&g) else { return Ok(()) };
        let basis = span.basis();
        for a in &basis {
            for b in &basis {
                prop_assert!(span.contains(&a.bracket(b)));
            }
        }
        for x in &g {
            prop_assert!(span.contains(x));
        }
    }

    #[test]
    fn derived_series_is_decreasing(gens in generators()) {
        let Some(span) = closed_span(&graded_all(&gens)) else { return Ok(()) };
        let s = derived_series(&span, true, 8, &ClosureBudget::default()).unwrap();
        for w in s.windows(2) {
            prop_assert!(w[1].span.is_subspace_of(&w[0].span));
        }
    }

    #[test]
    fn solvable_spans_have_nilpotent_derived_ideals(gens in generators()) {
        let r = analyze(&gens, &ClosureBudget::default(), &OrbitBudget::default()).unwrap();
        if r.closure.stabilized && r.verdicts.solvable.is_some() {
            prop_assert_eq!(r.lcs_dims().last().copied(), Some(0));
        }
    }

    #[test]
    fn triangular_spans_have_derived_length_at_most_three(gens in generators()) {
        let r = analyze(&gens, &ClosureBudget::default(), &OrbitBudget::default()).unwrap();
        prop_assert!(r.closure.stabilized);
        let length = r.verdicts.solvable;
        prop_assert!(length.is_some_and(|n| n <= 3), "{:?}", r.derived_dims());
    }

    #[test]
    fn adding_a_semisimple_part_shifts_the_derived_series(gens in generators(), pick in 0usize..3) {
        let budget = ClosureBudget::default();
        let d = &gens[pick % gens.len()];
        let s = jordan_decompose(d, &OrbitBudget::default()).unwrap().semisimple;
        let g = graded_all(&gens);
        let mut wider = g.clone();
        wider.push(to_graded(&s).unwrap());
        let (Some(h), Some(hat)) = (closed_span(&g), closed_span(&wider)) else { return Ok(()) };
        let hs = derived_series(&h, true, 6, &budget).unwrap();
        let hats = derived_series(&hat, true, 7, &budget).unwrap();
        for n in 0..hs.len().min(hats.len() - 1) {
            prop_assert!(hats[n + 1].span.is_subspace_of(&hs[n].span), "step {n}");
        }
        prop_assert!(derived_length(&hats).is_some());
    }
}

#[test]
fn derived_ideal_is_at_most_two_step_nilpotent_on_examples() {
    let budget = ClosureBudget::default();
    let mut failures = Vec::new();
    for ex in EXAMPLES {
        let gens: Vec<Derivation> = ex.iter().map(|s| field(s)).collect();
        let span = closed_span(&graded_all(&gens)).expect("examples stabilize");
        let series = derived_series(&span, true, 8, &budget).unwrap();
        let h1 = &series[1].span;
        let lcs = lower_central_series(h1, h1, 8, &budget).unwrap();
        let step = nilpotency_step(&lcs);
        if !step.is_some_and(|s| s <= 2) {
            let dims: Vec<usize> = lcs.iter().map(|t| t.span.dim()).collect();
            failures.push(format!("{ex:?}: lower central dims of the derived ideal {dims:?}"));
        }
    }
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}

#[test]
fn closure_of_examples_is_deterministic_and_exact() {
    let gens = graded_all(&[field("y^2*dx"), field("x*dx - y*dy"), field("dy")]);
    let a = lie_closure(&gens, &ClosureBudget::default()).unwrap();
    let b = lie_closure(&gens, &ClosureBudget::default()).unwrap();
    assert_eq!(a, b);
    assert!(a.stabilized);
    assert_eq!(a.span.dim(), 5);
}
