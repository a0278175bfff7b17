//! JSON rendering. Every scalar is written as an exact string, so documents
//! contain no floating-point values.

use planevec_core::closure::{
    Closure, ClosureReport, Exclusion, FiniteDimVerdict, LieSpan, RankVerdict, SeriesTerm, Triangular,
};
use planevec_core::finiteness::{BudgetSpent, Certificate, OrbitClosure, Witness};
use planevec_core::linalg::Matrix;
use planevec_core::spectral::{OpportunePair, SpectralDecomposition};
use planevec_core::vecfield::{NewtonPolygon, ShapeVerdict};
use planevec_core::{BiPoly, Derivation, GradedForm, Scalar, Weight};
use serde_json::{json, Value};

pub const SCHEMA: u32 = 1;

pub fn scalar(s: &Scalar) -> Value {
    Value::String(s.to_exact_string())
}

pub fn weight(w: Weight) -> Value {
    json!([w.0, w.1])
}

pub fn poly(p: &BiPoly) -> Value {
    let terms: Vec<Value> =
        p.sorted_terms().iter().map(|(e, c)| json!({"exp": [e.0, e.1], "coeff": scalar(c)})).collect();
    json!({"expr": p.to_string(), "terms": terms})
}

pub fn graded(g: &GradedForm) -> Value {
    let terms: Vec<Value> = g.terms().map(|(w, c)| json!({"weight": weight(*w), "coeff": scalar(c)})).collect();
    json!({"expr": g.to_string(), "euler": scalar(g.euler_coef()), "terms": terms})
}

/// Expression string plus the graded map when the field has constant divergence.
pub fn derivation(d: &Derivation) -> Value {
    let g = planevec_core::vecfield::to_graded(d).ok();
    json!({"expr": d.to_string(), "graded": g.as_ref().map(graded)})
}

pub fn matrix(m: &Matrix) -> Value {
    let rows: Vec<Value> = (0..m.rows()).map(|i| (0..m.cols()).map(|j| scalar(m.get(i, j))).collect()).collect();
    Value::Array(rows)
}

pub fn orbit(o: &OrbitClosure) -> Value {
    json!({
        "seed": o.seed.to_string(),
        "basis": o.basis.iter().map(poly).collect::<Vec<_>>(),
        "matrix": matrix(&o.matrix),
    })
}

fn spent(b: &BudgetSpent) -> Value {
    json!({"dim": b.dim, "max_degree": b.max_degree, "growth": b.growth})
}

pub fn certificate(c: &Certificate) -> Value {
    match c {
        Certificate::LocallyFinite { orbit_x, orbit_y } => {
            json!({"kind": c.kind(), "orbit_x": orbit(orbit_x), "orbit_y": orbit(orbit_y)})
        }
        Certificate::LocallyNilpotent { order } => json!({"kind": c.kind(), "order": order}),
        Certificate::Inconclusive { budget_spent } => json!({"kind": c.kind(), "budget_spent": spent(budget_spent)}),
        Certificate::Refuted { witness } => {
            let w = match witness {
                Witness::Vertex(v) => json!({"vertex": weight(*v)}),
                Witness::NonNilpotent(o) => json!({"non_nilpotent_orbit": orbit(o)}),
            };
            json!({"kind": c.kind(), "witness": w})
        }
    }
}

pub fn shape(s: &ShapeVerdict) -> Value {
    match s {
        ShapeVerdict::PassesLnd => json!({"verdict": "PassesLND"}),
        ShapeVerdict::PassesLf { lnd_witness } => json!({"verdict": "PassesLF", "lnd_witness": weight(*lnd_witness)}),
        ShapeVerdict::FailsLf { witness } => json!({"verdict": "FailsLF", "witness": weight(*witness)}),
    }
}

pub fn newton(p: &NewtonPolygon) -> Value {
    json!({
        "support": p.support.iter().map(|w| weight(*w)).collect::<Vec<_>>(),
        "vertices": p.vertices.iter().map(|w| weight(*w)).collect::<Vec<_>>(),
    })
}

pub fn spectral(s: &SpectralDecomposition) -> Value {
    let comps: Vec<Value> =
        s.components.iter().map(|(l, g)| json!({"eigenvalue": scalar(l), "component": graded(g)})).collect();
    json!({"delta": [scalar(&s.alpha), scalar(&s.beta)], "components": comps})
}

pub fn pair(p: &OpportunePair) -> Value {
    json!({
        "semisimple": derivation(&p.semisimple),
        "nilpotent": derivation(&p.nilpotent),
        "eigenvalue": p.eigenvalue.as_ref().map(scalar),
        "nilpotency_order": p.nilpotency_order,
    })
}

pub fn span(s: &LieSpan) -> Value {
    json!({"dim": s.dim(), "basis": s.basis().iter().map(graded).collect::<Vec<_>>()})
}

fn series(terms: &[SeriesTerm]) -> Value {
    Value::Array(terms.iter().map(|t| json!({"dim": t.span.dim(), "exact": t.exact})).collect())
}

pub fn closure(c: &Closure) -> Value {
    json!({
        "span": span(&c.span),
        "stabilized": c.stabilized,
        "growth_trace": c.growth_trace.iter().map(|(r, d)| json!([r, d])).collect::<Vec<_>>(),
        "truncations": c.truncations,
        "hit_max_dim": c.hit_max_dim,
    })
}

pub fn exclusion(e: &Exclusion) -> Value {
    match e {
        Exclusion::Clean => json!({"verdict": "Clean"}),
        Exclusion::Violation(k, l) => json!({"verdict": "Violation", "k": k, "l": l}),
    }
}

pub fn closure_report(r: &ClosureReport) -> Value {
    let v = &r.verdicts;
    let finite_dim = match &v.finite_dim {
        FiniteDimVerdict::FiniteDim(d) => json!({"verdict": "FiniteDim", "dim": d}),
        FiniteDimVerdict::LikelyInfinite { growth } => json!({"verdict": "LikelyInfinite", "growth": growth}),
        FiniteDimVerdict::Unknown => json!({"verdict": "Unknown"}),
    };
    let rank = match &v.rank {
        RankVerdict::Rank2(p) => json!({"verdict": "Rank2", "pair": pair(p), "heuristic": v.rank_heuristic}),
        RankVerdict::AtMost1 => json!({"verdict": "AtMost1", "heuristic": v.rank_heuristic}),
        RankVerdict::Unknown => json!({"verdict": "Unknown", "heuristic": v.rank_heuristic}),
    };
    let triangular = match v.triangular.shape {
        Triangular::InJplus => "InJplus",
        Triangular::InJminus => "InJminus",
        Triangular::Neither => "Neither",
    };
    let yes_or_budget = |x: Option<usize>, key: &str| match x {
        Some(n) => json!({"verdict": "Yes", key: n}),
        None => json!({"verdict": "NoWithinBudget"}),
    };
    json!({
        "closure": closure(&r.closure),
        "derived": series(&r.derived),
        "derived_dims": r.derived_dims(),
        "lcs_dims": r.lcs_dims(),
        "verdicts": {
            "solvable": yes_or_budget(v.solvable, "depth"),
            "nilpotent_derived": yes_or_budget(v.nilpotent_derived, "step"),
            "finite_dim": finite_dim,
            "rank": rank,
            "triangular": triangular,
            "filtration_degree": v.triangular.filtration_degree,
            "exclusion": exclusion(&v.exclusion),
        },
    })
}

/// Serialized text with a trailing newline; keys are sorted, so output is stable.
pub fn to_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}
