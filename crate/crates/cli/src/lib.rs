//! Command-line front end: problem files in, structured documents out.

pub mod problem;

use std::fmt::Write as _;
use std::str::FromStr;

use parastd::comprehensive::{comprehensive_basis, Cell, ComprehensiveError};
use parastd::division::{divide, divide_series, divide_truncated, DivisionError};
use parastd::genstd::{
    generic_basis, generic_reduced_basis, sample_admissible, staircase_of, verify_specialization,
    FactoredScalar, GenError, GenericBasis, PrimeContext, Staircase,
};
use parastd::hilbert::{hilbert_partition, HilbertData, HilbertError};
use parastd::orders::Exponent;
use parastd::polyring::text::{parse_poly_at, render_poly, render_qpoly, render_scalar, Names};
use parastd::polyring::{AScalar, ParamPoint, ParamPoly, Poly, PolyError, QPoly, Rat};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use thiserror::Error;

pub use problem::{parse_problem, Problem, ProblemError};

pub const SCHEMA: &str = "parastd/1";
pub const DEFAULT_MAX_DEPTH: usize = 16;
pub const DEFAULT_SAMPLES: usize = 10;
/// Free sample coordinates are drawn from `[-SAMPLE_RANGE, SAMPLE_RANGE]`.
pub const SAMPLE_RANGE: i64 = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Gsb,
    Reduce,
    Comprehensive,
    Hilbert,
    Divide,
    Specialize,
    Verify,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Gsb => "gsb",
            Command::Reduce => "reduce",
            Command::Comprehensive => "comprehensive",
            Command::Hilbert => "hilbert",
            Command::Divide => "divide",
            Command::Specialize => "specialize",
            Command::Verify => "verify",
        }
    }
}

/// Flags that override the problem's `options` section.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub trunc: Option<u64>,
    pub max_depth: Option<usize>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    /// Raw `name=value,...` assignments.
    pub points: Vec<String>,
    pub dividend: Option<String>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Problem(#[from] ProblemError),
    #[error("bad point `{0}`: {1}")]
    Point(String, String),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Gen(#[from] GenError),
    #[error(transparent)]
    Division(#[from] DivisionError),
    #[error(transparent)]
    Comprehensive(#[from] ComprehensiveError),
    #[error(transparent)]
    Hilbert(#[from] HilbertError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

impl CliError {
    /// Stable identifier printed with the message.
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Problem(e) => e.code(),
            CliError::Point(..) => "bad_point",
            CliError::Usage(_) => "usage",
            CliError::Gen(e) => match e {
                GenError::QContainsOne => "q_contains_one",
                GenError::TruncationTooSmall { .. } => "truncation_too_small",
                GenError::SampleOffVariety(_) => "sample_off_variety",
                GenError::SampleOnExcludedLocus(_) => "sample_on_excluded_locus",
                GenError::SamplerUnsupported | GenError::SamplerExhausted(_) => "sampler",
                _ => "basis",
            },
            CliError::Division(_) => "division",
            CliError::Comprehensive(ComprehensiveError::DepthExceeded { .. }) => "depth_exceeded",
            CliError::Comprehensive(_) => "comprehensive",
            CliError::Hilbert(HilbertError::NotDegreeCompatible) => "order_not_degree_compatible",
            CliError::Hilbert(_) => "hilbert",
            CliError::Poly(_) => "polynomial",
        }
    }
}

/// A finished command: the structured document, its text rendering and
/// whether every verification it ran passed.
#[derive(Debug, Clone)]
pub struct Report {
    pub doc: Value,
    pub text: String,
    pub verified: bool,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        if self.verified {
            0
        } else {
            2
        }
    }

    pub fn json(&self) -> String {
        serde_json::to_string_pretty(&self.doc).expect("values serialize")
    }
}

struct Ctx<'a> {
    problem: &'a Problem,
    opts: &'a RunOptions,
}

impl Ctx<'_> {
    fn names(&self) -> &Names {
        &self.problem.names
    }

    fn poly(&self, p: &ParamPoly) -> String {
        render_poly(p, self.names(), &self.problem.order)
    }

    fn qpoly(&self, p: &QPoly) -> String {
        render_qpoly(p, self.names(), &self.problem.order)
    }

    fn scalar(&self, s: &AScalar) -> String {
        render_scalar(s, self.names())
    }

    fn trunc(&self) -> Option<u64> {
        self.opts.trunc.or(self.problem.options.trunc)
    }

    fn max_depth(&self) -> usize {
        self.opts
            .max_depth
            .or(self.problem.options.max_depth)
            .unwrap_or(DEFAULT_MAX_DEPTH)
    }

    fn samples(&self) -> usize {
        self.opts
            .samples
            .or(self.problem.options.samples)
            .unwrap_or(DEFAULT_SAMPLES)
    }

    fn seed(&self) -> u64 {
        self.opts.seed.or(self.problem.options.seed).unwrap_or(0)
    }

    fn prime_context(&self) -> Result<PrimeContext, GenError> {
        PrimeContext::new(self.problem.nparams(), self.problem.q.clone())
    }

    fn points(&self) -> Result<Vec<ParamPoint>, CliError> {
        self.opts
            .points
            .iter()
            .map(|s| parse_point(s, self.names()))
            .collect()
    }

    fn point_doc(&self, c: &ParamPoint) -> Value {
        let mut m = serde_json::Map::new();
        for (name, v) in self.names().params.iter().zip(&c.coords) {
            m.insert(name.clone(), Value::String(v.to_string()));
        }
        Value::Object(m)
    }

    fn point_text(&self, c: &ParamPoint) -> String {
        let parts: Vec<String> = self
            .names()
            .params
            .iter()
            .zip(&c.coords)
            .map(|(n, v)| format!("{n}={v}"))
            .collect();
        parts.join(",")
    }

    fn h_doc(&self, h: &FactoredScalar) -> Value {
        let factors: Vec<Value> = h
            .factors()
            .iter()
            .map(|(p, k)| json!({"factor": self.scalar(p), "multiplicity": k}))
            .collect();
        json!({"product": self.scalar(&h.product()), "factors": factors})
    }

    fn h_text(&self, h: &FactoredScalar) -> String {
        if h.is_one() {
            return "1".to_string();
        }
        let parts: Vec<String> = h
            .factors()
            .iter()
            .map(|(p, k)| {
                let s = self.scalar(p);
                let s = if p.len() > 1 { format!("({s})") } else { s };
                if *k > 1 {
                    format!("{s}^{k}")
                } else {
                    s
                }
            })
            .collect();
        parts.join("*")
    }
}

/// Parses `a=2,b=-1/3`; every parameter must be assigned exactly once.
pub fn parse_point(s: &str, names: &Names) -> Result<ParamPoint, CliError> {
    let bad = |msg: String| CliError::Point(s.to_string(), msg);
    let mut coords: Vec<Option<Rat>> = vec![None; names.params.len()];
    for item in s.split(',').filter(|t| !t.trim().is_empty()) {
        let (name, value) = item
            .split_once('=')
            .ok_or_else(|| bad(format!("expected name=value, found `{item}`")))?;
        let i = names
            .params
            .iter()
            .position(|p| p == name.trim())
            .ok_or_else(|| bad(format!("unknown parameter `{}`", name.trim())))?;
        let v = Rat::from_str(value.trim()).map_err(|_| bad(format!("`{}` is not a rational", value.trim())))?;
        if coords[i].replace(v).is_some() {
            return Err(bad(format!("parameter `{}` assigned twice", name.trim())));
        }
    }
    let coords = coords
        .into_iter()
        .zip(&names.params)
        .map(|(c, n)| c.ok_or_else(|| bad(format!("parameter `{n}` not assigned"))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ParamPoint::new(coords))
}

fn staircase_doc(s: &Staircase) -> Value {
    json!(s.generators().iter().map(|e| e.as_slice().to_vec()).collect::<Vec<_>>())
}

fn staircase_text(s: &Staircase) -> String {
    let parts: Vec<String> = s.generators().iter().map(exponent_text).collect();
    format!("[{}]", parts.join(", "))
}

fn exponent_text(e: &Exponent) -> String {
    let parts: Vec<String> = e.iter().map(u32::to_string).collect();
    format!("({})", parts.join(","))
}

fn polynomial_in_r(data: &HilbertData) -> String {
    let names = Names::new::<&str>(&[], &["r"]);
    let p: QPoly = Poly::from_terms(
        1,
        data.polynomial
            .iter()
            .enumerate()
            .map(|(d, c)| (Exponent::new(vec![d as u32]), c.clone())),
    );
    render_qpoly(&p, &names, &parastd::orders::MonomialOrder::grevlex(1))
}

fn cell_doc(cx: &Ctx<'_>, cell: &Cell) -> Value {
    json!({
        "vanish": cell.vanish.iter().map(|p| cx.scalar(p)).collect::<Vec<_>>(),
        "nonvanish": cell.nonvanish.iter().map(|p| cx.scalar(p)).collect::<Vec<_>>(),
    })
}

fn cell_text(cx: &Ctx<'_>, cell: &Cell) -> String {
    let mut parts: Vec<String> = cell.vanish.iter().map(|p| format!("{} = 0", cx.scalar(p))).collect();
    parts.extend(cell.nonvanish.iter().map(|p| format!("{} != 0", cx.scalar(p))));
    if parts.is_empty() {
        "everywhere".to_string()
    } else {
        parts.join(", ")
    }
}

fn basis_doc(cx: &Ctx<'_>, b: &GenericBasis, leading: &[Exponent]) -> Value {
    json!({
        "gens": b.gens.iter().map(|g| cx.poly(g)).collect::<Vec<_>>(),
        "leading": leading.iter().map(|e| e.as_slice().to_vec()).collect::<Vec<_>>(),
        "h": cx.h_doc(&b.h),
        "staircase": staircase_doc(&b.staircase),
    })
}

fn basis_text(cx: &Ctx<'_>, b: &GenericBasis, out: &mut String) {
    writeln!(out, "h = {}", cx.h_text(&b.h)).unwrap();
    writeln!(out, "staircase: {}", staircase_text(&b.staircase)).unwrap();
    writeln!(out, "basis:").unwrap();
    for g in &b.gens {
        writeln!(out, "  {}", cx.poly(g)).unwrap();
    }
}

pub fn run(command: Command, problem: &Problem, opts: &RunOptions) -> Result<Report, CliError> {
    let cx = Ctx { problem, opts };
    let mut text = String::new();
    let mut verified = true;
    let mut extra = serde_json::Map::new();
    let result = match command {
        Command::Gsb => {
            let b = generic_basis(&problem.ideal, &problem.order, &cx.prime_context()?)?;
            basis_text(&cx, &b, &mut text);
            basis_doc(&cx, &b, &b.leading_exponents()?)
        }
        Command::Reduce => {
            let b = generic_basis(&problem.ideal, &problem.order, &cx.prime_context()?)?;
            let d = cx.trunc().unwrap_or_else(|| b.staircase.max_degree());
            let r = generic_reduced_basis(&b, d)?;
            if let Some(t) = r.truncation {
                writeln!(text, "truncated at degree {t}").unwrap();
            }
            basis_text(&cx, &r, &mut text);
            let mut doc = basis_doc(&cx, &r, &r.leading_exponents()?);
            doc["truncation"] = json!(r.truncation);
            if !r.ctx.is_zero_ideal() {
                let reduced: Vec<String> = r.gens.iter().map(|g| cx.poly(&r.ctx.reduce_poly(g))).collect();
                writeln!(text, "basis modulo Q:").unwrap();
                for g in &reduced {
                    writeln!(text, "  {g}").unwrap();
                }
                doc["gens_mod_q"] = json!(reduced);
            }
            doc
        }
        Command::Comprehensive => {
            let r = comprehensive_basis(&problem.ideal, &problem.order, problem.nparams(), cx.max_depth())?;
            let mut cells = Vec::new();
            for (i, cb) in r.cells.iter().enumerate() {
                let gens = cb.reduced_gens();
                writeln!(text, "cell {i}: {}", cell_text(&cx, &cb.cell)).unwrap();
                writeln!(text, "  staircase: {}", staircase_text(&cb.staircase)).unwrap();
                for g in &gens {
                    writeln!(text, "  {}", cx.poly(g)).unwrap();
                }
                let mut doc = cell_doc(&cx, &cb.cell);
                doc["basis"] = json!(gens.iter().map(|g| cx.poly(g)).collect::<Vec<_>>());
                doc["staircase"] = staircase_doc(&cb.staircase);
                cells.push(doc);
            }
            json!({"cells": cells})
        }
        Command::Hilbert => {
            let strata = hilbert_partition(&problem.ideal, &problem.order, problem.nparams(), cx.max_depth())?;
            let mut docs = Vec::new();
            for (i, s) in strata.iter().enumerate() {
                let poly = polynomial_in_r(&s.data);
                let mu = s.milnor.map_or(json!("infinite"), |m| json!(m));
                writeln!(text, "stratum {i}: HSP(r) = {poly}, milnor = {mu}").unwrap();
                for c in &s.cells {
                    writeln!(text, "  {}", cell_text(&cx, c)).unwrap();
                }
                docs.push(json!({
                    "cells": s.cells.iter().map(|c| cell_doc(&cx, c)).collect::<Vec<_>>(),
                    "staircases": s.staircases.iter().map(staircase_doc).collect::<Vec<_>>(),
                    "polynomial": poly,
                    "values": s.data.values,
                    "stabilization": s.data.stabilization,
                    "milnor": mu,
                }));
            }
            json!({"strata": docs})
        }
        Command::Divide => run_divide(&cx, &mut text)?,
        Command::Specialize => {
            let points = cx.points()?;
            let [c] = points.as_slice() else {
                return Err(CliError::Usage("specialize needs exactly one --point".into()));
            };
            let polys = problem
                .ideal
                .iter()
                .map(|f| f.specialize(c))
                .collect::<Result<Vec<_>, _>>()?;
            let st = staircase_of(&polys, &problem.order)?;
            writeln!(text, "point: {}", cx.point_text(c)).unwrap();
            for p in &polys {
                writeln!(text, "  {}", cx.qpoly(p)).unwrap();
            }
            writeln!(text, "staircase: {}", staircase_text(&st)).unwrap();
            json!({
                "point": cx.point_doc(c),
                "polys": polys.iter().map(|p| cx.qpoly(p)).collect::<Vec<_>>(),
                "staircase": staircase_doc(&st),
            })
        }
        Command::Verify => {
            let b = generic_basis(&problem.ideal, &problem.order, &cx.prime_context()?)?;
            let mut points = cx.points()?;
            if points.is_empty() {
                let seed = cx.seed();
                extra.insert("seed".into(), json!(seed));
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                points = sample_admissible(&b.ctx, &b.h, cx.samples(), SAMPLE_RANGE, &mut rng)?;
            }
            let rep = verify_specialization(&b, &points)?;
            verified = rep.all_pass();
            writeln!(text, "expected staircase: {}", staircase_text(&rep.expected)).unwrap();
            let mut samples = Vec::new();
            for s in &rep.samples {
                let verdict = if s.pass { "pass" } else { "FAIL" };
                writeln!(text, "  {verdict} at {}: {}", cx.point_text(&s.point), staircase_text(&s.staircase)).unwrap();
                samples.push(json!({
                    "point": cx.point_doc(&s.point),
                    "staircase": staircase_doc(&s.staircase),
                    "pass": s.pass,
                }));
            }
            writeln!(text, "{}", if verified { "all samples pass" } else { "verification failed" }).unwrap();
            json!({"expected": staircase_doc(&rep.expected), "samples": samples, "pass": verified})
        }
    };
    let mut doc = serde_json::Map::new();
    doc.insert("schema".into(), json!(SCHEMA));
    doc.insert("command".into(), json!(command.name()));
    doc.insert("problem".into(), json!(problem.render()));
    doc.extend(extra);
    doc.insert("result".into(), result);
    Ok(Report {
        doc: Value::Object(doc),
        text,
        verified,
    })
}

/// Divides `--dividend` by the ideal generators, or else the first
/// generator by the others. Global orders (and homogeneous input) use full
/// division; other orders use series division when a truncation degree is
/// set and truncated division otherwise.
fn run_divide(cx: &Ctx<'_>, text: &mut String) -> Result<Value, CliError> {
    let problem = cx.problem;
    let (f, divisors) = match &cx.opts.dividend {
        Some(src) => (parse_poly_at(src, cx.names(), 1, 1).map_err(ProblemError::from)?, &problem.ideal[..]),
        None => (problem.ideal[0].clone(), &problem.ideal[1..]),
    };
    if divisors.is_empty() {
        return Err(CliError::Usage("divide needs at least one divisor".into()));
    }
    let homogeneous = f.is_homogeneous() && divisors.iter().all(Poly::is_homogeneous);
    let (mode, res) = if problem.order.is_global() || homogeneous {
        ("full".to_string(), divide(&f, divisors, &problem.order)?)
    } else if let Some(d) = cx.trunc() {
        (format!("series({d})"), divide_series(&f, divisors, &problem.order, d)?)
    } else {
        ("truncated".to_string(), divide_truncated(&f, divisors, &problem.order)?)
    };
    writeln!(text, "mode: {mode}").unwrap();
    writeln!(text, "dividend: {}", cx.poly(&f)).unwrap();
    for (i, q) in res.quotients.iter().enumerate() {
        writeln!(text, "  q{} = {}", i + 1, cx.poly(q)).unwrap();
    }
    writeln!(text, "remainder: {}", cx.poly(&res.remainder)).unwrap();
    Ok(json!({
        "mode": mode,
        "dividend": cx.poly(&f),
        "divisors": divisors.iter().map(|g| cx.poly(g)).collect::<Vec<_>>(),
        "quotients": res.quotients.iter().map(|q| cx.poly(q)).collect::<Vec<_>>(),
        "remainder": cx.poly(&res.remainder),
    }))
}
