//! Problem files: one `key: value` section per line, `#` starts a comment.
//!
//! ```text
//! params: a
//! vars: x1, x2
//! order: matrix [[-1,-1],[-1,0]]
//! ideal: a*x2 - x1*x2 + x1
//! Q: a
//! options: trunc=3, max_depth=8, samples=10, seed=1
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;

use parastd::orders::MonomialOrder;
use parastd::polyring::text::{parse_poly_at, parse_scalar_at, render_poly, render_scalar, Names, ParseError, ParseErrorKind};
use parastd::polyring::{AScalar, ParamPoly};
use thiserror::Error;

const SECTIONS: [&str; 6] = ["params", "vars", "order", "ideal", "Q", "options"];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProblemError {
    #[error("{line}:{col}: syntax error: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("{line}:{col}: unknown identifier `{name}`")]
    UnknownIdentifier { line: usize, col: usize, name: String },
    #[error("{line}: duplicate section `{name}`")]
    DuplicateSection { line: usize, name: String },
    #[error("missing section `{0}`")]
    MissingSection(&'static str),
}

impl ProblemError {
    pub fn code(&self) -> &'static str {
        match self {
            ProblemError::Syntax { .. } => "syntax_error",
            ProblemError::UnknownIdentifier { .. } => "unknown_identifier",
            ProblemError::DuplicateSection { .. } => "duplicate_section",
            ProblemError::MissingSection(_) => "missing_section",
        }
    }
}

impl From<ParseError> for ProblemError {
    fn from(e: ParseError) -> Self {
        match e.kind {
            ParseErrorKind::Syntax(msg) => ProblemError::Syntax {
                line: e.line,
                col: e.col,
                msg,
            },
            ParseErrorKind::UnknownIdentifier(name) => ProblemError::UnknownIdentifier {
                line: e.line,
                col: e.col,
                name,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrderSpec {
    Preset(String),
    Matrix(Vec<Vec<i64>>),
}

impl OrderSpec {
    pub fn render(&self) -> String {
        match self {
            OrderSpec::Preset(name) => name.clone(),
            OrderSpec::Matrix(rows) => {
                format!("matrix {}", serde_json::to_string(rows).expect("integers serialize"))
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ProblemOptions {
    pub trunc: Option<u64>,
    pub max_depth: Option<usize>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Problem {
    pub names: Names,
    pub order_spec: OrderSpec,
    pub order: MonomialOrder,
    pub ideal: Vec<ParamPoly>,
    pub q: Vec<AScalar>,
    pub options: ProblemOptions,
}

impl Problem {
    pub fn nparams(&self) -> usize {
        self.names.params.len()
    }

    pub fn nvars(&self) -> usize {
        self.names.vars.len()
    }

    /// Canonical problem text; parsing it gives back an equal problem.
    pub fn render(&self) -> String {
        let mut out = String::new();
        if !self.names.params.is_empty() {
            writeln!(out, "params: {}", self.names.params.join(", ")).unwrap();
        }
        writeln!(out, "vars: {}", self.names.vars.join(", ")).unwrap();
        writeln!(out, "order: {}", self.order_spec.render()).unwrap();
        let ideal: Vec<String> = self
            .ideal
            .iter()
            .map(|f| render_poly(f, &self.names, &self.order))
            .collect();
        writeln!(out, "ideal: {}", ideal.join(", ")).unwrap();
        if !self.q.is_empty() {
            let q: Vec<String> = self.q.iter().map(|s| render_scalar(s, &self.names)).collect();
            writeln!(out, "Q: {}", q.join(", ")).unwrap();
        }
        let o = &self.options;
        let opts: Vec<String> = [
            o.trunc.map(|v| format!("trunc={v}")),
            o.max_depth.map(|v| format!("max_depth={v}")),
            o.samples.map(|v| format!("samples={v}")),
            o.seed.map(|v| format!("seed={v}")),
        ]
        .into_iter()
        .flatten()
        .collect();
        if !opts.is_empty() {
            writeln!(out, "options: {}", opts.join(", ")).unwrap();
        }
        out
    }
}

struct Section<'a> {
    line: usize,
    col: usize,
    body: &'a str,
}

fn syntax(line: usize, col: usize, msg: impl Into<String>) -> ProblemError {
    ProblemError::Syntax {
        line,
        col,
        msg: msg.into(),
    }
}

/// Comma-separated items with their 1-based columns.
fn items<'a>(s: &Section<'a>) -> Vec<(&'a str, usize)> {
    let mut out = Vec::new();
    let mut start = 0;
    for (i, ch) in s.body.char_indices().chain([(s.body.len(), ',')]) {
        if ch != ',' {
            continue;
        }
        let raw = &s.body[start..i];
        let lead = raw.len() - raw.trim_start().len();
        out.push((raw.trim(), s.col + start + lead));
        start = i + 1;
    }
    out
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    chars
        .next()
        .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn names_of(s: Option<&Section<'_>>, taken: &[String]) -> Result<Vec<String>, ProblemError> {
    let Some(s) = s else {
        return Ok(Vec::new());
    };
    if s.body.trim().is_empty() {
        return Ok(Vec::new());
    }
    let mut out: Vec<String> = Vec::new();
    for (name, col) in items(s) {
        if !is_identifier(name) {
            return Err(syntax(s.line, col, format!("`{name}` is not an identifier")));
        }
        if out.iter().chain(taken).any(|n| n == name) {
            return Err(syntax(s.line, col, format!("name `{name}` declared twice")));
        }
        out.push(name.to_string());
    }
    Ok(out)
}

fn parse_order(s: &Section<'_>, nvars: usize) -> Result<(OrderSpec, MonomialOrder), ProblemError> {
    let body = s.body.trim();
    let col = s.col + (s.body.len() - s.body.trim_start().len());
    let spec = match body.strip_prefix("matrix") {
        Some(rest) => {
            let rows: Vec<Vec<i64>> = serde_json::from_str(rest.trim())
                .map_err(|e| syntax(s.line, col, format!("bad weight matrix: {e}")))?;
            OrderSpec::Matrix(rows)
        }
        None => OrderSpec::Preset(body.to_string()),
    };
    let order = match &spec {
        OrderSpec::Preset(name) => MonomialOrder::preset(name, nvars),
        OrderSpec::Matrix(rows) => MonomialOrder::new(nvars, rows.clone()),
    }
    .map_err(|e| syntax(s.line, col, e.to_string()))?;
    Ok((spec, order))
}

fn parse_options(s: Option<&Section<'_>>) -> Result<ProblemOptions, ProblemError> {
    let mut o = ProblemOptions::default();
    let Some(s) = s else {
        return Ok(o);
    };
    if s.body.trim().is_empty() {
        return Ok(o);
    }
    for (item, col) in items(s) {
        let Some((key, value)) = item.split_once('=') else {
            return Err(syntax(s.line, col, format!("expected key=value, found `{item}`")));
        };
        let value = value.trim();
        let bad = |_| syntax(s.line, col, format!("bad value `{value}` for `{}`", key.trim()));
        match key.trim() {
            "trunc" => o.trunc = Some(value.parse().map_err(bad)?),
            "max_depth" => o.max_depth = Some(value.parse().map_err(bad)?),
            "samples" => o.samples = Some(value.parse().map_err(bad)?),
            "seed" => o.seed = Some(value.parse().map_err(bad)?),
            other => return Err(syntax(s.line, col, format!("unknown option `{other}`"))),
        }
    }
    Ok(o)
}

pub fn parse_problem(text: &str) -> Result<Problem, ProblemError> {
    let mut sections: BTreeMap<&str, Section<'_>> = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let key_col = content.len() - content.trim_start().len() + 1;
        let Some((key, body)) = content.split_once(':') else {
            return Err(syntax(line, key_col, "expected `section: value`"));
        };
        let key = key.trim();
        let Some(&name) = SECTIONS.iter().find(|s| **s == key) else {
            return Err(syntax(line, key_col, format!("unknown section `{key}`")));
        };
        if sections.contains_key(name) {
            return Err(ProblemError::DuplicateSection {
                line,
                name: name.to_string(),
            });
        }
        let col = content.find(':').expect("split above") + 2;
        sections.insert(name, Section { line, col, body });
    }
    let params = names_of(sections.get("params"), &[])?;
    let vars_section = sections.get("vars").ok_or(ProblemError::MissingSection("vars"))?;
    let vars = names_of(Some(vars_section), &params)?;
    if vars.is_empty() {
        return Err(syntax(vars_section.line, vars_section.col, "no variables declared"));
    }
    let names = Names::new(&params, &vars);
    let order_section = sections.get("order").ok_or(ProblemError::MissingSection("order"))?;
    let (order_spec, order) = parse_order(order_section, vars.len())?;
    let ideal_section = sections.get("ideal").ok_or(ProblemError::MissingSection("ideal"))?;
    if ideal_section.body.trim().is_empty() {
        return Err(syntax(ideal_section.line, ideal_section.col, "empty ideal"));
    }
    let ideal = items(ideal_section)
        .into_iter()
        .map(|(src, col)| parse_poly_at(src, &names, ideal_section.line, col))
        .collect::<Result<Vec<_>, _>>()?;
    let q = match sections.get("Q") {
        Some(s) if !s.body.trim().is_empty() => items(s)
            .into_iter()
            .map(|(src, col)| parse_scalar_at(src, &names, s.line, col))
            .collect::<Result<Vec<_>, _>>()?,
        _ => Vec::new(),
    };
    let options = parse_options(sections.get("options"))?;
    Ok(Problem {
        names,
        order_spec,
        order,
        ideal,
        q,
        options,
    })
}
