//! Sectioned problem files: declarations, named objects and tasks.

use std::collections::BTreeMap;

use super::parse::{parse_expression_at, Declarations};
use super::FrontendError;
use crate::jet::VectorField;
use crate::matrix::Matrix;
use crate::symbolic::Expr;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Named<T> {
    pub name: String,
    pub value: T,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoveringDef {
    pub name: String,
    pub base: String,
    /// `h[β][i]`.
    pub rules: Vec<Vec<Expr>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixCoveringDef {
    pub name: String,
    pub base: String,
    pub a: Matrix,
    pub b: Matrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Task {
    pub kind: TaskKind,
    pub params: BTreeMap<String, String>,
}

impl Task {
    pub fn new(kind: TaskKind) -> Self {
        Task {
            kind,
            params: BTreeMap::new(),
        }
    }

    pub fn with(mut self, key: &str, value: &str) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    pub fn param(&self, key: &str) -> Option<&str> {
        self.params.get(key).map(String::as_str)
    }

    /// `key=value` pairs in key order.
    pub fn args(&self) -> String {
        self.params
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TaskKind {
    Prolong,
    CheckSymmetry,
    CheckCovering,
    CheckMatrixCovering,
    CheckMch,
    GaugeDiagram,
    Reconstruct,
    CheckAugmentedSymmetry,
    CheckSemiclassical,
}

impl TaskKind {
    pub const ALL: [TaskKind; 9] = [
        TaskKind::Prolong,
        TaskKind::CheckSymmetry,
        TaskKind::CheckCovering,
        TaskKind::CheckMatrixCovering,
        TaskKind::CheckMch,
        TaskKind::GaugeDiagram,
        TaskKind::Reconstruct,
        TaskKind::CheckAugmentedSymmetry,
        TaskKind::CheckSemiclassical,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TaskKind::Prolong => "prolong",
            TaskKind::CheckSymmetry => "check-symmetry",
            TaskKind::CheckCovering => "check-covering",
            TaskKind::CheckMatrixCovering => "check-matrix-covering",
            TaskKind::CheckMch => "check-mch",
            TaskKind::GaugeDiagram => "gauge-diagram",
            TaskKind::Reconstruct => "reconstruct",
            TaskKind::CheckAugmentedSymmetry => "check-augmented-symmetry",
            TaskKind::CheckSemiclassical => "check-semiclassical",
        }
    }

    pub fn parse(s: &str) -> Option<TaskKind> {
        Self::ALL.into_iter().find(|k| k.name() == s)
    }

    /// Parameter keys naming document objects, with the section they refer to.
    fn references(self) -> &'static [(&'static str, Section)] {
        use Section::*;
        match self {
            TaskKind::Prolong => &[("field", Field), ("lambda", Lambda), ("mu", Mu)],
            TaskKind::CheckSymmetry => &[
                ("field", Field),
                ("equation", Equation),
                ("lambda", Lambda),
                ("mu", Mu),
            ],
            TaskKind::CheckCovering => &[("covering", Covering)],
            TaskKind::CheckMatrixCovering => &[("name", MatrixCovering)],
            TaskKind::CheckMch => &[("mu", Mu)],
            TaskKind::GaugeDiagram => &[("gauge", Gauge), ("field", Field)],
            TaskKind::Reconstruct => &[("field", Field), ("covering", Covering), ("gauge", Gauge)],
            TaskKind::CheckAugmentedSymmetry | TaskKind::CheckSemiclassical => {
                &[("field", Field), ("covering", Covering)]
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Section {
    Equation,
    Covering,
    MatrixCovering,
    Field,
    Lambda,
    Mu,
    Gauge,
}

/// A validated problem file.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ProblemDocument {
    pub decl: Declarations,
    /// Residuals `F^ℓ` of each named system.
    pub equations: Vec<Named<Vec<Expr>>>,
    pub coverings: Vec<CoveringDef>,
    pub matrix_coverings: Vec<MatrixCoveringDef>,
    pub fields: Vec<Named<VectorField>>,
    pub lambdas: Vec<Named<Expr>>,
    /// One matrix per independent variable.
    pub mus: Vec<Named<Vec<Matrix>>>,
    pub gauges: Vec<Named<Matrix>>,
    pub tasks: Vec<Task>,
}

fn lookup<'a, T>(items: &'a [Named<T>], name: &str) -> Option<&'a T> {
    items.iter().find(|n| n.name == name).map(|n| &n.value)
}

impl ProblemDocument {
    pub fn equation(&self, name: &str) -> Option<&Vec<Expr>> {
        lookup(&self.equations, name)
    }

    pub fn covering(&self, name: &str) -> Option<&CoveringDef> {
        self.coverings.iter().find(|c| c.name == name)
    }

    pub fn matrix_covering(&self, name: &str) -> Option<&MatrixCoveringDef> {
        self.matrix_coverings.iter().find(|c| c.name == name)
    }

    pub fn field(&self, name: &str) -> Option<&VectorField> {
        lookup(&self.fields, name)
    }

    pub fn lambda(&self, name: &str) -> Option<&Expr> {
        lookup(&self.lambdas, name)
    }

    pub fn mu(&self, name: &str) -> Option<&Vec<Matrix>> {
        lookup(&self.mus, name)
    }

    pub fn gauge(&self, name: &str) -> Option<&Matrix> {
        lookup(&self.gauges, name)
    }

    fn has(&self, section: Section, name: &str) -> bool {
        match section {
            Section::Equation => self.equation(name).is_some(),
            Section::Covering => self.covering(name).is_some(),
            Section::MatrixCovering => self.matrix_covering(name).is_some(),
            Section::Field => self.field(name).is_some(),
            Section::Lambda => self.lambda(name).is_some(),
            Section::Mu => self.mu(name).is_some(),
            Section::Gauge => self.gauge(name).is_some(),
        }
    }

    /// Every object a task names must exist.
    pub fn validate_task(&self, task: &Task) -> Result<(), FrontendError> {
        for (key, section) in task.kind.references() {
            if let Some(name) = task.param(key) {
                if !self.has(*section, name) {
                    return Err(FrontendError::UndeclaredReference(name.to_string()));
                }
            }
        }
        Ok(())
    }
}

struct Line<'a> {
    no: usize,
    text: &'a str,
    /// Column of `text` within the source line, 0-based.
    offset: usize,
}

struct RawSection<'a> {
    header: Vec<&'a str>,
    line: usize,
    body: Vec<Line<'a>>,
}

fn syntax(line: usize, col: usize, message: impl Into<String>) -> FrontendError {
    FrontendError::Syntax {
        line,
        col,
        message: message.into(),
    }
}

fn split_sections(src: &str) -> Result<Vec<RawSection<'_>>, FrontendError> {
    let mut out: Vec<RawSection> = Vec::new();
    for (k, raw) in src.lines().enumerate() {
        let no = k + 1;
        let content = raw.split('#').next().unwrap_or("");
        let trimmed = content.trim();
        if trimmed.is_empty() {
            continue;
        }
        let offset = content.len() - content.trim_start().len();
        if trimmed.starts_with('[') && !trimmed.starts_with("[[") {
            let inner = trimmed
                .strip_prefix('[')
                .and_then(|t| t.strip_suffix(']'))
                .ok_or_else(|| syntax(no, offset + 1, "unterminated section header"))?;
            let header: Vec<&str> = inner.split_whitespace().collect();
            if header.is_empty() {
                return Err(syntax(no, offset + 1, "empty section header"));
            }
            out.push(RawSection {
                header,
                line: no,
                body: Vec::new(),
            });
        } else {
            let sec = out
                .last_mut()
                .ok_or_else(|| syntax(no, offset + 1, "content before the first section"))?;
            sec.body.push(Line {
                no,
                text: trimmed,
                offset,
            });
        }
    }
    Ok(out)
}

fn expr_at(src: &str, decl: &Declarations, line: &Line, start: usize) -> Result<Expr, FrontendError> {
    let shift = line.offset + start;
    parse_expression_at(src, decl, line.no).map_err(|e| match e {
        FrontendError::Syntax { line, col, message } => FrontendError::Syntax {
            line,
            col: col + shift,
            message,
        },
        FrontendError::Math { line, col, source } => FrontendError::Math {
            line,
            col: col + shift,
            source,
        },
        other => other,
    })
}

/// Splits `lhs = rhs`; the returned index is where `rhs` starts in `text`.
fn split_assignment(text: &str) -> Option<(&str, &str, usize)> {
    let eq = text.find('=')?;
    let rhs = &text[eq + 1..];
    let start = eq + 1 + (rhs.len() - rhs.trim_start().len());
    Some((text[..eq].trim(), rhs.trim(), start))
}

/// Top-level comma split that respects brackets and parentheses.
fn split_top(s: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            ',' if depth == 0 => {
                out.push((start, &s[start..i]));
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push((start, &s[start..]));
    out
}

/// `[[a, b], [c, d]]`, or a bare expression for a `1 x 1` matrix.
fn parse_matrix(text: &str, decl: &Declarations, line: &Line, start: usize) -> Result<Matrix, FrontendError> {
    let t = text.trim();
    let Some(inner) = t.strip_prefix('[') else {
        let e = expr_at(t, decl, line, start)?;
        return Ok(Matrix::diagonal(vec![e]));
    };
    let inner = inner
        .strip_suffix(']')
        .ok_or_else(|| syntax(line.no, line.offset + start + 1, "unterminated matrix"))?;
    let mut rows = Vec::new();
    for (roff, row) in split_top(inner) {
        let lead = row.len() - row.trim_start().len();
        let r = row.trim();
        let col0 = start + 1 + roff + lead;
        let body = r
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| syntax(line.no, line.offset + col0 + 1, "expected a bracketed row"))?;
        let mut entries = Vec::new();
        for (eoff, e) in split_top(body) {
            let elead = e.len() - e.trim_start().len();
            entries.push(expr_at(e.trim(), decl, line, col0 + 1 + eoff + elead)?);
        }
        rows.push(entries);
    }
    Matrix::from_rows(rows).map_err(|source| FrontendError::Math {
        line: line.no,
        col: line.offset + start + 1,
        source,
    })
}

fn section_name(sec: &RawSection) -> Result<String, FrontendError> {
    match sec.header.as_slice() {
        [_, name] => Ok(name.to_string()),
        _ => Err(syntax(sec.line, 1, format!("[{}] needs exactly one name", sec.header[0]))),
    }
}

/// Splits `w_x` into the variable name and its subscript.
fn split_subscript(s: &str) -> (&str, &str) {
    match s.split_once('_') {
        Some((v, sub)) => (v, sub),
        None => (s, ""),
    }
}

fn direction(decl: &Declarations, sub: &str) -> Option<usize> {
    decl.names.indep.iter().position(|n| n == sub)
}

/// Parses a problem file.
pub fn parse_problem(src: &str) -> Result<ProblemDocument, FrontendError> {
    let sections = split_sections(src)?;
    let mut doc = ProblemDocument::default();
    let mut seen: Vec<String> = Vec::new();
    let declare = |name: &str, seen: &mut Vec<String>| -> Result<(), FrontendError> {
        if seen.iter().any(|s| s == name) {
            return Err(FrontendError::DuplicateDeclaration(name.to_string()));
        }
        seen.push(name.to_string());
        Ok(())
    };

    for sec in &sections {
        let kind = sec.header[0];
        let target = match kind {
            "vars" => &mut doc.decl.names.indep,
            "deps" => &mut doc.decl.names.dep,
            "aux" => &mut doc.decl.names.aux,
            "constants" => &mut doc.decl.constants,
            "functions" => {
                for line in &sec.body {
                    for tok in line.text.split([' ', ',']).filter(|t| !t.is_empty()) {
                        let (name, arity) = tok
                            .split_once('/')
                            .and_then(|(n, a)| Some((n, a.parse::<usize>().ok()?)))
                            .ok_or_else(|| syntax(line.no, line.offset + 1, format!("expected name/arity, found '{tok}'")))?;
                        declare(name, &mut seen)?;
                        doc.decl.functions.push((name.to_string(), arity));
                    }
                }
                continue;
            }
            _ => continue,
        };
        for line in &sec.body {
            for tok in line.text.split([' ', ',']).filter(|t| !t.is_empty()) {
                if !tok.chars().all(|c| c.is_alphanumeric()) || !tok.starts_with(char::is_alphabetic) {
                    return Err(syntax(line.no, line.offset + 1, format!("invalid name '{tok}'")));
                }
                declare(tok, &mut seen)?;
                target.push(tok.to_string());
            }
        }
    }
    if doc.decl.names.indep.is_empty() {
        return Err(syntax(1, 1, "no independent variables declared in [vars]"));
    }
    if doc.decl.names.dep.is_empty() {
        return Err(syntax(1, 1, "no dependent variables declared in [deps]"));
    }

    let decl = doc.decl.clone();
    let (p, q, r) = (decl.names.indep.len(), decl.names.dep.len(), decl.names.aux.len());
    let mut objects: Vec<String> = Vec::new();
    let object = |sec: &RawSection, objects: &mut Vec<String>| -> Result<String, FrontendError> {
        let name = section_name(sec)?;
        let key = format!("{} {}", sec.header[0], name);
        if objects.contains(&key) {
            return Err(FrontendError::DuplicateDeclaration(name));
        }
        objects.push(key);
        Ok(name)
    };

    for sec in &sections {
        match sec.header[0] {
            "vars" | "deps" | "aux" | "constants" | "functions" => {}
            "equation" => {
                let name = object(sec, &mut objects)?;
                let mut residuals = Vec::new();
                for line in &sec.body {
                    let e = match split_assignment(line.text) {
                        Some((lhs, rhs, start)) => {
                            let l = expr_at(lhs, &decl, line, 0)?;
                            l.sub(&expr_at(rhs, &decl, line, start)?)
                        }
                        None => expr_at(line.text, &decl, line, 0)?,
                    };
                    residuals.push(e);
                }
                doc.equations.push(Named { name, value: residuals });
            }
            "covering" => {
                let name = object(sec, &mut objects)?;
                let mut base = None;
                let mut rules: Vec<Vec<Option<Expr>>> = vec![vec![None; p]; r];
                for line in &sec.body {
                    let (lhs, rhs, start) = split_assignment(line.text)
                        .ok_or_else(|| syntax(line.no, line.offset + 1, "expected 'w_x = expression'"))?;
                    if lhs == "base" {
                        base = Some(rhs.to_string());
                        continue;
                    }
                    let (var, sub) = split_subscript(lhs);
                    let beta = decl
                        .names
                        .aux
                        .iter()
                        .position(|n| n == var)
                        .ok_or_else(|| FrontendError::UndeclaredReference(var.to_string()))?;
                    let i = direction(&decl, sub).ok_or_else(|| {
                        syntax(line.no, line.offset + 1, format!("'{lhs}' is not a first derivative"))
                    })?;
                    rules[beta][i] = Some(expr_at(rhs, &decl, line, start)?);
                }
                let base = base.ok_or_else(|| syntax(sec.line, 1, "covering needs 'base = <equation>'"))?;
                let rules = rules
                    .into_iter()
                    .enumerate()
                    .map(|(beta, row)| {
                        row.into_iter()
                            .enumerate()
                            .map(|(i, e)| {
                                e.ok_or_else(|| {
                                    syntax(
                                        sec.line,
                                        1,
                                        format!("missing rule {}_{}", decl.names.aux[beta], decl.names.indep[i]),
                                    )
                                })
                            })
                            .collect::<Result<Vec<_>, _>>()
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                doc.coverings.push(CoveringDef { name, base, rules });
            }
            "matrix-covering" => {
                let name = object(sec, &mut objects)?;
                let (mut base, mut a, mut b) = (None, None, None);
                for line in &sec.body {
                    let (lhs, rhs, start) = split_assignment(line.text)
                        .ok_or_else(|| syntax(line.no, line.offset + 1, "expected 'key = value'"))?;
                    match lhs {
                        "base" => base = Some(rhs.to_string()),
                        "A" => a = Some(parse_matrix(rhs, &decl, line, start)?),
                        "B" => b = Some(parse_matrix(rhs, &decl, line, start)?),
                        other => return Err(syntax(line.no, line.offset + 1, format!("unknown key '{other}'"))),
                    }
                }
                let missing = |k: &str| syntax(sec.line, 1, format!("matrix covering needs '{k}'"));
                doc.matrix_coverings.push(MatrixCoveringDef {
                    name,
                    base: base.ok_or_else(|| missing("base"))?,
                    a: a.ok_or_else(|| missing("A"))?,
                    b: b.ok_or_else(|| missing("B"))?,
                });
            }
            "field" => {
                let name = object(sec, &mut objects)?;
                let mut f = VectorField::new(vec![Expr::zero(); p], vec![Expr::zero(); q], vec![Expr::zero(); r]);
                for line in &sec.body {
                    let (lhs, rhs, start) = split_assignment(line.text)
                        .ok_or_else(|| syntax(line.no, line.offset + 1, "expected 'variable = coefficient'"))?;
                    let e = expr_at(rhs, &decl, line, start)?;
                    let pos = |v: &[String]| v.iter().position(|n| n == lhs);
                    if let Some(i) = pos(&decl.names.indep) {
                        f.xi[i] = e;
                    } else if let Some(a) = pos(&decl.names.dep) {
                        f.phi[a] = e;
                    } else if let Some(b) = pos(&decl.names.aux) {
                        f.eta[b] = e;
                    } else {
                        return Err(FrontendError::UndeclaredReference(lhs.to_string()));
                    }
                }
                doc.fields.push(Named { name, value: f });
            }
            "lambda" => {
                let name = object(sec, &mut objects)?;
                let [line] = sec.body.as_slice() else {
                    return Err(syntax(sec.line, 1, "lambda needs exactly one expression"));
                };
                doc.lambdas.push(Named {
                    name,
                    value: expr_at(line.text, &decl, line, 0)?,
                });
            }
            "mu" => {
                let name = object(sec, &mut objects)?;
                let mut lambdas = vec![Matrix::zero(q, q); p];
                for line in &sec.body {
                    let (lhs, rhs, start) = split_assignment(line.text)
                        .ok_or_else(|| syntax(line.no, line.offset + 1, "expected 'x = matrix'"))?;
                    let i = direction(&decl, lhs)
                        .ok_or_else(|| FrontendError::UndeclaredReference(lhs.to_string()))?;
                    let m = parse_matrix(rhs, &decl, line, start)?;
                    if m.rows() != q || m.cols() != q {
                        return Err(syntax(line.no, line.offset + start + 1, format!("expected a {q} x {q} matrix")));
                    }
                    lambdas[i] = m;
                }
                doc.mus.push(Named { name, value: lambdas });
            }
            "gauge" => {
                let name = object(sec, &mut objects)?;
                let [line] = sec.body.as_slice() else {
                    return Err(syntax(sec.line, 1, "gauge needs exactly one matrix"));
                };
                let (text, start) = match split_assignment(line.text) {
                    Some((_, rhs, start)) => (rhs, start),
                    None => (line.text, 0),
                };
                doc.gauges.push(Named {
                    name,
                    value: parse_matrix(text, &decl, line, start)?,
                });
            }
            "task" => {
                let kind_name = sec
                    .header
                    .get(1)
                    .ok_or_else(|| syntax(sec.line, 1, "task needs a kind"))?;
                let kind = TaskKind::parse(kind_name)
                    .ok_or_else(|| syntax(sec.line, 1, format!("unknown task kind '{kind_name}'")))?;
                let mut task = Task::new(kind);
                for kv in &sec.header[2..] {
                    let (k, v) = kv
                        .split_once('=')
                        .ok_or_else(|| syntax(sec.line, 1, format!("expected key=value, found '{kv}'")))?;
                    task.params.insert(k.to_string(), v.to_string());
                }
                for line in &sec.body {
                    let (k, v, _) = split_assignment(line.text)
                        .ok_or_else(|| syntax(line.no, line.offset + 1, "expected 'key = value'"))?;
                    task.params.insert(k.to_string(), v.to_string());
                }
                doc.tasks.push(task);
            }
            other => return Err(syntax(sec.line, 1, format!("unknown section '{other}'"))),
        }
    }

    for c in &doc.coverings {
        if doc.equation(&c.base).is_none() {
            return Err(FrontendError::UndeclaredReference(c.base.clone()));
        }
    }
    for c in &doc.matrix_coverings {
        if doc.equation(&c.base).is_none() {
            return Err(FrontendError::UndeclaredReference(c.base.clone()));
        }
    }
    for t in &doc.tasks {
        doc.validate_task(t)?;
    }
    Ok(doc)
}

fn render_matrix(m: &Matrix, decl: &Declarations) -> String {
    let rows: Vec<String> = (0..m.rows())
        .map(|i| {
            let entries: Vec<String> = m.row(i).iter().map(|e| decl.print(e)).collect();
            format!("[{}]", entries.join(", "))
        })
        .collect();
    format!("[{}]", rows.join(", "))
}

/// Canonical text of a document; `parse_problem(render_problem(d)) == d`.
pub fn render_problem(doc: &ProblemDocument) -> String {
    let d = &doc.decl;
    let mut out = String::new();
    let mut list = |header: &str, items: &[String]| {
        if !items.is_empty() {
            out.push_str(&format!("[{header}]\n{}\n", items.join(" ")));
        }
    };
    list("vars", &d.names.indep);
    list("deps", &d.names.dep);
    list("aux", &d.names.aux);
    list("constants", &d.constants);
    let funcs: Vec<String> = d.functions.iter().map(|(n, a)| format!("{n}/{a}")).collect();
    list("functions", &funcs);

    for eq in &doc.equations {
        out.push_str(&format!("\n[equation {}]\n", eq.name));
        for f in &eq.value {
            out.push_str(&format!("{}\n", d.print(f)));
        }
    }
    for c in &doc.coverings {
        out.push_str(&format!("\n[covering {}]\nbase = {}\n", c.name, c.base));
        for (beta, row) in c.rules.iter().enumerate() {
            for (i, h) in row.iter().enumerate() {
                out.push_str(&format!(
                    "{}_{} = {}\n",
                    d.names.aux[beta],
                    d.names.indep[i],
                    d.print(h)
                ));
            }
        }
    }
    for c in &doc.matrix_coverings {
        out.push_str(&format!(
            "\n[matrix-covering {}]\nbase = {}\nA = {}\nB = {}\n",
            c.name,
            c.base,
            render_matrix(&c.a, d),
            render_matrix(&c.b, d)
        ));
    }
    for f in &doc.fields {
        out.push_str(&format!("\n[field {}]\n", f.name));
        let v = &f.value;
        let names = d.names.indep.iter().chain(&d.names.dep).chain(&d.names.aux);
        for (n, e) in names.zip(v.xi.iter().chain(&v.phi).chain(&v.eta)) {
            if !e.is_zero() {
                out.push_str(&format!("{n} = {}\n", d.print(e)));
            }
        }
    }
    for l in &doc.lambdas {
        out.push_str(&format!("\n[lambda {}]\n{}\n", l.name, d.print(&l.value)));
    }
    for m in &doc.mus {
        out.push_str(&format!("\n[mu {}]\n", m.name));
        for (i, l) in m.value.iter().enumerate() {
            if !l.is_zero() {
                out.push_str(&format!("{} = {}\n", d.names.indep[i], render_matrix(l, d)));
            }
        }
    }
    for g in &doc.gauges {
        out.push_str(&format!("\n[gauge {}]\nR = {}\n", g.name, render_matrix(&g.value, d)));
    }
    for t in &doc.tasks {
        out.push_str(&format!("\n[task {}]\n", t.kind.name()));
        for (k, v) in &t.params {
            out.push_str(&format!("{k} = {v}\n"));
        }
    }
    out
}

/// Order of the highest jet of a dependent variable in `e`.
pub(crate) fn jet_order(e: &Expr) -> usize {
    e.coordinates()
        .iter()
        .filter(|a| a.as_jet().is_some() || a.as_aux().is_some())
        .map(|a| a.jet_order())
        .max()
        .unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    const GT: &str = "
# Gibbons-Tsarev
[vars]
x t
[deps]
u
[aux]
w

[equation gt]
u_xx + u_t*u_xt - u_x*u_tt + 1 = 0

[covering gtc]
base = gt
w_t = 1/(u_x + u_t*w - w^2)
w_x = (w - u_t)/(u_x + u_t*w - w^2)

[task check-covering covering=gtc]
";

    #[test]
    fn parses_gibbons_tsarev() {
        let doc = parse_problem(GT).unwrap();
        assert_eq!(doc.equations.len(), 1);
        assert_eq!(doc.coverings[0].rules[0].len(), 2);
        assert_eq!(doc.tasks[0].kind, TaskKind::CheckCovering);
        assert_eq!(doc.tasks[0].param("covering"), Some("gtc"));
    }

    #[test]
    fn render_round_trip() {
        let doc = parse_problem(GT).unwrap();
        let text = render_problem(&doc);
        assert_eq!(parse_problem(&text).unwrap(), doc);
    }

    #[test]
    fn empty_task_list_is_valid() {
        let doc = parse_problem("[vars]\nx\n[deps]\nu\n").unwrap();
        assert!(doc.tasks.is_empty());
    }

    #[test]
    fn undeclared_aux_in_covering() {
        let src = "[vars]\nx\n[deps]\nu\n[aux]\nw\n[equation e]\nu_x\n[covering c]\nbase = e\nw_x = u\nw2_x = u\n";
        assert_eq!(
            parse_problem(src),
            Err(FrontendError::UndeclaredReference("w2".into()))
        );
    }

    #[test]
    fn duplicate_names_rejected() {
        assert_eq!(
            parse_problem("[vars]\nx\n[deps]\nx\n"),
            Err(FrontendError::DuplicateDeclaration("x".into()))
        );
    }

    #[test]
    fn task_reference_checked() {
        let src = "[vars]\nx\n[deps]\nu\n[task check-symmetry field=nope]\n";
        assert_eq!(
            parse_problem(src),
            Err(FrontendError::UndeclaredReference("nope".into()))
        );
    }

    #[test]
    fn matrix_literal_with_function_orders() {
        let src = "[vars]\nx t\n[deps]\nu\n[functions]\nalpha/2\n[gauge r]\nR = [[1, alpha[1,0](x, t)], [0, 1]]\n";
        let doc = parse_problem(src).unwrap();
        let g = &doc.gauges[0].value;
        assert_eq!(g.rows(), 2);
        assert!(g.get(0, 1).as_atom().is_some());
        assert_eq!(parse_problem(&render_problem(&doc)).unwrap(), doc);
    }

    #[test]
    fn error_column_is_absolute() {
        let src = "[vars]\nx\n[deps]\nu\n[lambda l]\n  u + * 2\n";
        match parse_problem(src) {
            Err(FrontendError::Syntax { line, col, .. }) => assert_eq!((line, col), (6, 7)),
            other => panic!("{other:?}"),
        }
    }
}
