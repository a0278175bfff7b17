//! Subcommand dispatch. Exit codes: 0 on completion, 2 when a refutation or
//! exclusion violation is found (or a verification scenario fails), 1 on
//! input errors.

use std::ffi::OsString;
use std::fmt::Write;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use num_traits::Zero;
use planevec_core::closure::{self, ClosureBudget, ClosureReport, Exclusion, FiniteDimVerdict, RankVerdict};
use planevec_core::finiteness::{
    certify_locally_finite, certify_locally_nilpotent, jordan_decompose, Certificate, OrbitBudget,
};
use planevec_core::spectral::eigencomponents;
use planevec_core::vecfield::{classify_lf_shape, newton_polygon, structure_constant, to_graded};
use planevec_core::Derivation;
use serde_json::{json, Map, Value};

use crate::input::{load_generators, parse_delta, parse_field, CliError};
use crate::report;
use crate::svg::newton_svg;
use crate::verify;

#[derive(Debug, Parser)]
#[command(name = "planevec", version, about = "Exact Lie-algebra analysis of polynomial vector fields on the plane")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct BudgetArgs {
    /// Largest closure dimension
    #[arg(long, default_value_t = 96)]
    pub max_dim: usize,
    /// Largest total weight a+b kept in a closure
    #[arg(long, default_value_t = 40)]
    pub max_weight: i32,
    /// Largest number of bracket rounds
    #[arg(long, default_value_t = 32)]
    pub max_rounds: usize,
    /// Largest orbit dimension when certifying a single field
    #[arg(long, default_value_t = 64)]
    pub orbit_dim: usize,
    /// Largest polynomial degree when certifying a single field
    #[arg(long, default_value_t = 32)]
    pub orbit_deg: i32,
}

impl BudgetArgs {
    fn closure(&self) -> Result<ClosureBudget, CliError> {
        if self.max_dim == 0 || self.max_weight < 0 || self.max_rounds == 0 {
            return Err(CliError::Input("budgets must be positive".into()));
        }
        Ok(ClosureBudget { max_dim: self.max_dim, max_total_weight: self.max_weight, max_rounds: self.max_rounds })
    }

    fn orbit(&self) -> Result<OrbitBudget, CliError> {
        if self.orbit_dim == 0 || self.orbit_deg <= 0 {
            return Err(CliError::Input("budgets must be positive".into()));
        }
        Ok(OrbitBudget { max_dim: self.orbit_dim, max_deg: self.orbit_deg })
    }

    fn to_json(&self) -> Value {
        json!({
            "max_dim": self.max_dim,
            "max_weight": self.max_weight,
            "max_rounds": self.max_rounds,
            "orbit_dim": self.orbit_dim,
            "orbit_deg": self.orbit_deg,
        })
    }
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Write the JSON report to this path (`-` for standard output)
    #[arg(long)]
    pub json: Option<String>,
    /// Leave the timing field out of the report
    #[arg(long)]
    pub no_timing: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Certify generators, close them under the bracket and report verdicts
    Analyze {
        /// File with one field per line, or a comma-separated list
        #[arg(long)]
        gens: String,
        #[command(flatten)]
        budgets: BudgetArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Bounded Lie closure with derived and lower central series
    Closure {
        #[arg(long)]
        gens: String,
        #[command(flatten)]
        budgets: BudgetArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Lie bracket of two fields
    Bracket {
        left: String,
        right: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Jordan decomposition of a locally finite field
    Jordan {
        field: String,
        #[command(flatten)]
        budgets: BudgetArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Eigencomponents under alpha*x*dx + beta*y*dy
    Spectral {
        field: String,
        /// `alpha,beta`
        #[arg(long)]
        delta: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Newton polygon, optionally drawn as SVG
    Newton {
        field: String,
        #[arg(long)]
        svg: Option<String>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Replay the verification scenarios
    VerifyPaper {
        /// Run the oracle sweep with a sign-flipped structure constant
        #[arg(long, hide = true)]
        mutate: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn input_error(e: CliError) -> Self {
        Outcome { code: 1, stdout: String::new(), stderr: format!("error: {}\n", e.render()) }
    }
}

/// Parses arguments, executes, prints, and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let out = match Cli::try_parse_from(args) {
        Ok(cli) => execute(cli),
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            }
        }
    };
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    out.code
}

pub fn execute(cli: Cli) -> Outcome {
    let started = Instant::now();
    let result = match &cli.command {
        Command::Analyze { gens, budgets, output } => analyze(gens, budgets, output, true),
        Command::Closure { gens, budgets, output } => analyze(gens, budgets, output, false),
        Command::Bracket { left, right, output } => bracket(left, right).map(|r| (r, output)),
        Command::Jordan { field, budgets, output } => jordan(field, budgets).map(|r| (r, output)),
        Command::Spectral { field, delta, output } => spectral(field, delta).map(|r| (r, output)),
        Command::Newton { field, svg, output } => newton(field, svg.as_deref()).map(|r| (r, output)),
        Command::VerifyPaper { mutate, output } => Ok((verify_paper(*mutate), output)),
    };
    match result {
        Ok((r, output)) => finish(r, output, started),
        Err(e) => Outcome::input_error(e),
    }
}

/// A finished command: human text, JSON body and exit code.
struct Rendered {
    text: String,
    doc: Map<String, Value>,
    code: i32,
}

fn document(command: &str) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("schema".into(), json!(report::SCHEMA));
    m.insert("tool_version".into(), json!(env!("CARGO_PKG_VERSION")));
    m.insert("command".into(), json!(command));
    m
}

fn finish(mut r: Rendered, output: &OutputArgs, started: Instant) -> Outcome {
    if !output.no_timing {
        r.doc.insert("timing".into(), json!({"elapsed_ms": started.elapsed().as_millis() as u64}));
    }
    let json_text = report::to_text(&Value::Object(r.doc));
    match output.json.as_deref() {
        Some("-") => Outcome { code: r.code, stdout: json_text, stderr: String::new() },
        Some(path) => match std::fs::write(path, json_text) {
            Ok(()) => Outcome { code: r.code, stdout: r.text, stderr: String::new() },
            Err(e) => Outcome::input_error(e.into()),
        },
        None => Outcome { code: r.code, stdout: r.text, stderr: String::new() },
    }
}

fn err_json(e: impl std::fmt::Display) -> Value {
    json!({"error": e.to_string()})
}

fn generator_entry(
    src: &str,
    d: &Derivation,
    orbit: &OrbitBudget,
    text: &mut String,
    findings: &mut Vec<String>,
    idx: usize,
) -> Value {
    let _ = writeln!(text, "generator {idx}: {d}");
    let graded = to_graded(d);
    let shape = graded.as_ref().ok().filter(|g| !g.is_zero()).and_then(|g| classify_lf_shape(g).ok());
    match &graded {
        Ok(g) => {
            let _ = writeln!(text, "  graded: {g}");
        }
        Err(e) => {
            let _ = writeln!(text, "  graded: unavailable ({e})");
        }
    }
    let lf = certify_locally_finite(d, orbit);
    let lnd = certify_locally_nilpotent(d, orbit);
    let kind = |c: &planevec_core::Result<Certificate>| match c {
        Ok(c) => c.kind().to_string(),
        Err(e) => format!("error ({e})"),
    };
    let _ = writeln!(text, "  locally finite: {}; locally nilpotent: {}", kind(&lf), kind(&lnd));
    if let Ok(Certificate::Refuted { witness }) = &lf {
        findings.push(format!("generator {idx} is not locally finite: {witness:?}"));
    }
    let jordan = match &lf {
        Ok(Certificate::LocallyFinite { .. }) => match jordan_decompose(d, orbit) {
            Ok(j) => {
                let _ = writeln!(text, "  jordan: s = {}, n = {}", j.semisimple, j.nilpotent);
                json!({"semisimple": report::derivation(&j.semisimple), "nilpotent": report::derivation(&j.nilpotent)})
            }
            Err(e) => err_json(e),
        },
        _ => Value::Null,
    };
    let cert = |c: planevec_core::Result<Certificate>| c.map(|c| report::certificate(&c)).unwrap_or_else(err_json);
    json!({
        "input": src,
        "field": report::derivation(d),
        "divergence": report::poly(&d.divergence()),
        "shape": shape.as_ref().map(report::shape),
        "locally_finite": cert(lf),
        "locally_nilpotent": cert(lnd),
        "jordan": jordan,
    })
}

fn summarize(r: &ClosureReport, text: &mut String) {
    let c = &r.closure;
    let dims: Vec<String> = c.growth_trace.iter().map(|t| t.1.to_string()).collect();
    let _ = writeln!(
        text,
        "closure: dim {}, {}, growth {}",
        c.span.dim(),
        if c.stabilized { "stabilized" } else { "not stabilized" },
        dims.join(" -> ")
    );
    let _ =
        writeln!(text, "derived dims: {:?}; lower central dims of derived ideal: {:?}", r.derived_dims(), r.lcs_dims());
    let v = &r.verdicts;
    let _ = writeln!(
        text,
        "solvable: {}; derived ideal nilpotent: {}",
        v.solvable.map_or("no (within budget)".to_string(), |n| format!("yes, length {n}")),
        v.nilpotent_derived.map_or("no (within budget)".to_string(), |n| format!("yes, step {n}")),
    );
    let fd = match &v.finite_dim {
        FiniteDimVerdict::FiniteDim(d) => format!("finite, dim {d}"),
        FiniteDimVerdict::LikelyInfinite { .. } => "likely infinite".into(),
        FiniteDimVerdict::Unknown => "unknown".into(),
    };
    let _ = writeln!(text, "dimension: {fd}");
    let rank = match &v.rank {
        RankVerdict::Rank2(p) => format!("2, pair ({}, {})", p.semisimple, p.nilpotent),
        RankVerdict::AtMost1 => "at most 1".into(),
        RankVerdict::Unknown => "unknown".into(),
    };
    let _ = writeln!(text, "rank: {rank}{}", if v.rank_heuristic { " (heuristic)" } else { "" });
    let _ =
        writeln!(text, "triangular: {:?}, filtration degree {:?}", v.triangular.shape, v.triangular.filtration_degree);
    let _ = writeln!(text, "exclusion: {:?}", v.exclusion);
}

fn analyze<'a>(
    gens: &str,
    budgets: &BudgetArgs,
    output: &'a OutputArgs,
    with_generators: bool,
) -> Result<(Rendered, &'a OutputArgs), CliError> {
    let gens = load_generators(gens)?;
    let cb = budgets.closure()?;
    let ob = budgets.orbit()?;
    let mut doc = document(if with_generators { "analyze" } else { "closure" });
    let mut text = String::new();
    let mut findings = Vec::new();
    doc.insert(
        "input".into(),
        json!({"generators": gens.iter().map(|g| g.0.clone()).collect::<Vec<_>>(), "budgets": budgets.to_json()}),
    );
    if with_generators {
        let entries: Vec<Value> = gens
            .iter()
            .enumerate()
            .map(|(i, (src, d))| generator_entry(src, d, &ob, &mut text, &mut findings, i + 1))
            .collect();
        doc.insert("generators".into(), Value::Array(entries));
    }
    let fields: Vec<Derivation> = gens.iter().map(|g| g.1.clone()).collect();
    let analysis = match closure::analyze(&fields, &cb, &ob) {
        Ok(r) => {
            summarize(&r, &mut text);
            if let Exclusion::Violation(k, l) = r.verdicts.exclusion {
                findings.push(format!("span contains D[-1,{k}] and D[{l},-1]"));
            }
            report::closure_report(&r)
        }
        Err(e) => {
            let _ = writeln!(text, "closure skipped: {e}");
            json!({"skipped": e.to_string()})
        }
    };
    doc.insert("analysis".into(), analysis);
    for f in &findings {
        let _ = writeln!(text, "finding: {f}");
    }
    doc.insert("findings".into(), json!(findings));
    let code = if findings.is_empty() { 0 } else { 2 };
    Ok((Rendered { text, doc, code }, output))
}

fn bracket(left: &str, right: &str) -> Result<Rendered, CliError> {
    let (a, b) = (parse_field(left)?, parse_field(right)?);
    let c = a.bracket(&b);
    let mut doc = document("bracket");
    doc.insert("left".into(), report::derivation(&a));
    doc.insert("right".into(), report::derivation(&b));
    doc.insert("bracket".into(), report::derivation(&c));
    Ok(Rendered { text: format!("{c}\n"), doc, code: 0 })
}

fn jordan(field: &str, budgets: &BudgetArgs) -> Result<Rendered, CliError> {
    let d = parse_field(field)?;
    let ob = budgets.orbit()?;
    let j = jordan_decompose(&d, &ob)?;
    let order = certify_locally_nilpotent(&j.nilpotent, &ob)?;
    let mut doc = document("jordan");
    doc.insert("field".into(), report::derivation(&d));
    doc.insert("semisimple".into(), report::derivation(&j.semisimple));
    doc.insert("nilpotent".into(), report::derivation(&j.nilpotent));
    doc.insert("nilpotent_certificate".into(), report::certificate(&order));
    Ok(Rendered { text: format!("semisimple: {}\nnilpotent: {}\n", j.semisimple, j.nilpotent), doc, code: 0 })
}

fn spectral(field: &str, delta: &str) -> Result<Rendered, CliError> {
    let d = parse_field(field)?;
    let (alpha, beta) = parse_delta(delta)?;
    let s = eigencomponents(&to_graded(&d)?, &alpha, &beta)?;
    let mut text = String::new();
    for (l, g) in &s.components {
        let _ = writeln!(text, "{l}: {g}");
    }
    let mut doc = document("spectral");
    doc.insert("field".into(), report::derivation(&d));
    doc.insert("spectral".into(), report::spectral(&s));
    Ok(Rendered { text, doc, code: 0 })
}

fn newton(field: &str, svg: Option<&str>) -> Result<Rendered, CliError> {
    let d = parse_field(field)?;
    let g = to_graded(&d)?;
    let p = newton_polygon(&g)?;
    if let Some(path) = svg {
        std::fs::write(path, newton_svg(&p, !g.euler_coef().is_zero()))?;
    }
    let verts: Vec<String> = p.vertices.iter().map(|v| format!("({},{})", v.0, v.1)).collect();
    let mut doc = document("newton");
    doc.insert("field".into(), report::derivation(&d));
    doc.insert("polygon".into(), report::newton(&p));
    let verdict = classify_lf_shape(&g)?;
    doc.insert("shape".into(), report::shape(&verdict));
    Ok(Rendered { text: format!("vertices: {}\n", verts.join(" ")), doc, code: 0 })
}

fn verify_paper(mutate: bool) -> Rendered {
    let constant = if mutate { verify::flipped_constant } else { structure_constant };
    let results = verify::run_all(constant);
    let mut text = String::new();
    for s in &results {
        let _ = writeln!(text, "{} {}: {}", if s.passed { "PASS" } else { "FAIL" }, s.name, s.detail);
    }
    let passed = results.iter().filter(|s| s.passed).count();
    let _ = writeln!(text, "{passed}/{} scenarios passed", results.len());
    let mut doc = document("verify-paper");
    doc.insert(
        "scenarios".into(),
        Value::Array(results.iter().map(|s| json!({"name": s.name, "passed": s.passed, "detail": s.detail})).collect()),
    );
    let code = if passed == results.len() { 0 } else { 2 };
    Rendered { text, doc, code }
}
