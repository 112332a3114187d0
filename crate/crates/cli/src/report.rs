//! Running a job and emitting the result as text or versioned JSON.

use serde::Serialize;

use ppv_core::algebra::{DiffOperator, RatFun};
use ppv_core::galois::{
    cleared_coordinates, compute_presentation, render_a_equation, render_b_equation, render_derivation,
    GroupPresentation, PipelineOptions, UnipotentClass,
};
use ppv_core::riccati::normalize_to_unimodular;
use ppv_core::Error;

use crate::job::{EquationSpec, JobSpec};
use crate::parser::{parse_expression, ParseError};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ErrorReport {
    pub kind: String,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GaugeReport {
    pub r1: String,
    pub r0: String,
    pub shift: String,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DerivationReport {
    pub name: String,
    pub rendered: String,
    /// Coefficients on d1..dm, denominators cleared.
    pub coefficients: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TermReport {
    pub monomial: Vec<u32>,
    pub coefficient: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquationReport {
    pub rendered: String,
    /// The rendered operator over d1..dm, denominators cleared.
    pub terms: Vec<TermReport>,
    /// The operator over the commuting basis dp1..dpk (unipotent part only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pi_prime_terms: Option<Vec<TermReport>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OperatorReport {
    pub max_order: u32,
    pub space_dimension: usize,
    pub equations: Vec<EquationReport>,
    pub consequences: Vec<EquationReport>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub job: Option<JobSpec>,
    pub q: Option<String>,
    pub gauge: Option<GaugeReport>,
    pub riccati_solutions: Vec<String>,
    pub u: Option<String>,
    pub lie_basis: Vec<DerivationReport>,
    pub pi_prime_dimension: Option<usize>,
    pub reductive: Option<OperatorReport>,
    pub unipotent: Option<OperatorReport>,
    pub unipotent_class: Option<String>,
    pub complete_up_to_bound: Option<bool>,
    pub error: Option<ErrorReport>,
}

impl Report {
    pub fn failed(job: Option<JobSpec>, kind: &str, message: String) -> Report {
        Report {
            schema_version: SCHEMA_VERSION,
            job,
            q: None,
            gauge: None,
            riccati_solutions: Vec::new(),
            u: None,
            lie_basis: Vec::new(),
            pi_prime_dimension: None,
            reductive: None,
            unipotent: None,
            unipotent_class: None,
            complete_up_to_bound: None,
            error: Some(ErrorReport { kind: kind.to_string(), message }),
        }
    }

    pub fn exit_code(&self) -> i32 {
        if self.error.is_some() {
            1
        } else {
            0
        }
    }
}

pub fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::DivisionByZero => "DivisionByZero",
        Error::InvalidInput(_) => "InvalidInput",
        Error::UnsupportedPoleStructure(_) => "UnsupportedPoleStructure",
        Error::NoRationalRiccatiSolution => "NoRationalRiccatiSolution",
        Error::InvalidRiccatiSolution => "InvalidRiccatiSolution",
        Error::NoncommutingBasis(_) => "NoncommutingBasis",
        Error::InternalInconsistency(_) => "InternalInconsistency",
        Error::WellDefinednessFailure(_) => "WellDefinednessFailure",
        Error::ConsistencyViolation(_) => "ConsistencyViolation",
    }
}

fn parse_error(job: &JobSpec, field: &str, e: ParseError) -> Box<Report> {
    let kind = match e {
        ParseError::Syntax { .. } => "SyntaxError",
        ParseError::UnknownSymbol { .. } => "UnknownSymbol",
        ParseError::DivisionByZero { .. } => "DivisionByZero",
    };
    Box::new(Report::failed(Some(job.clone()), kind, format!("{field}: {e}")))
}

fn terms(op: &DiffOperator, names: &[String]) -> Vec<TermReport> {
    op.terms()
        .rev()
        .map(|(mm, c)| TermReport { monomial: mm.exponents().to_vec(), coefficient: c.to_expr(names) })
        .collect()
}

fn reductive_report(ops: &[DiffOperator], m: usize, names: &[String]) -> Vec<EquationReport> {
    ops.iter()
        .map(|op| EquationReport {
            rendered: render_a_equation(op, m, names),
            terms: terms(&cleared_coordinates(op, m), names),
            pi_prime_terms: None,
        })
        .collect()
}

fn unipotent_report(ops: &[DiffOperator], m: usize, names: &[String]) -> Vec<EquationReport> {
    ops.iter()
        .map(|op| EquationReport {
            rendered: render_b_equation(op, m, names),
            terms: terms(&cleared_coordinates(op, m), names),
            pi_prime_terms: Some(terms(&op.cleared(), names)),
        })
        .collect()
}

/// Parses, normalizes and runs the pipeline; failures land in `error`.
pub fn run_job(job: &JobSpec) -> Report {
    if let Err(msg) = job.validate() {
        return Report::failed(Some(job.clone()), "InvalidJob", msg);
    }
    let names = &job.parameters;
    let m = names.len();
    let parse = |field: &str, src: &str| parse_expression(src, names).map_err(|e| parse_error(job, field, e));
    let (q, gauge) = match &job.equation {
        EquationSpec::Unimodular { q } => match parse("q", q) {
            Ok(q) => (q, None),
            Err(r) => return *r,
        },
        EquationSpec::General { r1, r0 } => {
            let r1 = match parse("r1", r1) {
                Ok(v) => v,
                Err(r) => return *r,
            };
            let r0 = match parse("r0", r0) {
                Ok(v) => v,
                Err(r) => return *r,
            };
            let (q, note) = normalize_to_unimodular(&r1, &r0);
            (q, Some(note))
        }
    };
    let supplied = match &job.riccati_solution {
        Some(s) => match parse("riccati_solution", s) {
            Ok(u) => Some(u),
            Err(r) => return *r,
        },
        None => None,
    };
    let options = PipelineOptions {
        max_order_reductive: job.max_order_reductive,
        max_order_unipotent: job.max_order_unipotent,
        base: None,
    };
    match compute_presentation(&q, m, supplied.as_ref(), gauge, &options) {
        Ok(p) => build_report(job, &p),
        Err(e) => {
            let mut r = Report::failed(Some(job.clone()), error_kind(&e), e.to_string());
            r.q = Some(q.to_expr(names));
            r
        }
    }
}

fn build_report(job: &JobSpec, p: &GroupPresentation) -> Report {
    let names = &job.parameters;
    let m = p.m;
    let expr = |f: &RatFun| f.to_expr(names);
    let gauge = p.gauge.as_ref().map(|g| GaugeReport {
        r1: expr(&g.r1),
        r0: expr(&g.r0),
        shift: expr(&g.shift),
        note: "Y = Z*exp(-integral(shift))".to_string(),
    });
    let lie_basis = p
        .lie
        .cleared_basis
        .iter()
        .enumerate()
        .map(|(i, d)| DerivationReport {
            name: format!("dp{}", i + 1),
            rendered: render_derivation(d, names),
            coefficients: d.coeffs().iter().map(|c| c.to_expr(names)).collect(),
        })
        .collect();
    Report {
        schema_version: SCHEMA_VERSION,
        job: Some(job.clone()),
        q: Some(expr(&p.q)),
        gauge,
        riccati_solutions: p.riccati_solutions.iter().map(expr).collect(),
        u: Some(expr(&p.u)),
        lie_basis,
        pi_prime_dimension: Some(p.lie.dimension()),
        reductive: Some(OperatorReport {
            max_order: p.max_order_reductive,
            space_dimension: p.reductive.basis.len(),
            equations: reductive_report(&p.reductive.defining, m, names),
            consequences: reductive_report(&p.reductive.consequences, m, names),
        }),
        unipotent: Some(OperatorReport {
            max_order: p.max_order_unipotent,
            space_dimension: p.unipotent.basis.len(),
            equations: unipotent_report(&p.unipotent.defining, m, names),
            consequences: unipotent_report(&p.unipotent.consequences, m, names),
        }),
        unipotent_class: Some(p.unipotent_class.as_str().to_string()),
        complete_up_to_bound: Some(p.complete_up_to_bound),
        error: None,
    }
}

pub fn emit_json(report: &Report) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

pub fn emit_text(report: &Report) -> String {
    let mut out = String::new();
    let mut line = |s: String| {
        out.push_str(&s);
        out.push('\n');
    };
    if let Some(job) = &report.job {
        if !job.parameters.is_empty() {
            line(format!("parameters: {}", job.parameters.join(", ")));
        }
    }
    if let Some(q) = &report.q {
        line("equation: Y'' = q*Y".to_string());
        line(format!("  q = {q}"));
    }
    if let Some(g) = &report.gauge {
        line(format!("  normalized from Y'' + r1*Y' + r0*Y = 0 with r1 = {}, r0 = {}", g.r1, g.r0));
        line(format!("  Y = Z*exp(-integral({}))", g.shift));
    }
    if let Some(err) = &report.error {
        line(format!("error ({}): {}", err.kind, err.message));
        return out;
    }
    line("Riccati solutions:".to_string());
    for s in &report.riccati_solutions {
        line(format!("  {s}"));
    }
    if let Some(u) = &report.u {
        line(format!("u = {u}"));
    }
    line(format!("Lie subspace: dimension {}", report.pi_prime_dimension.unwrap_or(0)));
    for d in &report.lie_basis {
        line(format!("  {} = {}", d.name, d.rendered));
    }
    line("H = { [[a, b], [0, 1/a]] : a in A, b in B }".to_string());
    if let Some(r) = &report.reductive {
        line(format!("A (operators up to order {}, space dimension {}):", r.max_order, r.space_dimension));
        if r.equations.is_empty() {
            line("  no equations".to_string());
        }
        for e in &r.equations {
            line(format!("  {}", e.rendered));
        }
        if !r.consequences.is_empty() {
            line("  consequences:".to_string());
            for e in &r.consequences {
                line(format!("    {}", e.rendered));
            }
        }
    }
    if let Some(u) = &report.unipotent {
        line(format!("B (operators up to order {}, space dimension {}):", u.max_order, u.space_dimension));
        for e in &u.equations {
            line(format!("  {}", e.rendered));
        }
        if !u.consequences.is_empty() {
            line("  consequences:".to_string());
            for e in &u.consequences {
                line(format!("    {}", e.rendered));
            }
        }
        let class = report.unipotent_class.as_deref().unwrap_or("");
        let summary = match class {
            c if c == UnipotentClass::Trivial.as_str() => "R_u(H) = {0}".to_string(),
            c if c == UnipotentClass::FullAdditiveGroup.as_str() => "R_u(H) = Ga".to_string(),
            c if c == UnipotentClass::ProperSubgroup.as_str() => "R_u(H) = { b in Ga : the equations for B }".to_string(),
            _ => format!("R_u(H): no defining operator up to order {}", u.max_order),
        };
        line(format!("unipotent class: {class}"));
        line(summary);
        if report.complete_up_to_bound == Some(true) {
            line("complete only up to the order bounds".to_string());
        }
    }
    out
}
