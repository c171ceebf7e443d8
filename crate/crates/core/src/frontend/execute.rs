//! Runs the tasks of a problem document and collects per-task verdicts.

use std::time::{Duration, Instant};

use rayon::prelude::*;

use super::problem::{jet_order, ProblemDocument, Task, TaskKind};
use crate::covering::{
    check_augmented_symmetry, check_compatibility, check_matrix_covering, check_semiclassical,
    reconstruct_lambda, reconstruct_mu, CoveringSystem, MatrixCovering,
};
use crate::error::Error;
use crate::forms::{check_mch, MatrixOneForm};
use crate::gauge::{check_gauge_diagram, GaugeMap};
use crate::jet::{
    check_symmetry, prolong_twisted, EquationSystem, JetSpace, ProlongedField, Twist, VectorField,
};
use crate::matrix::Matrix;
use crate::symbolic::{confirm_zero, Atom, Expr, Names};

/// Sample points used to cross-check exact zero tests.
pub const ORACLE_POINTS: usize = 30;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    Error,
}

impl Verdict {
    pub fn word(self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Error => "ERROR",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TaskReport {
    pub index: usize,
    pub kind: TaskKind,
    /// The task parameters as `key=value` pairs.
    pub args: String,
    pub verdict: Verdict,
    /// Keyed residuals, printed.
    pub residuals: Vec<(String, String)>,
    pub cofactors: Vec<(String, String)>,
    pub details: Vec<(String, String)>,
    pub error: Option<String>,
    pub elapsed: Duration,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub tasks: Vec<TaskReport>,
}

impl Report {
    pub fn count(&self, v: Verdict) -> usize {
        self.tasks.iter().filter(|t| t.verdict == v).count()
    }

    /// 0 when every task passes, 1 if any fails, 2 if any errors.
    pub fn exit_code(&self) -> i32 {
        if self.count(Verdict::Error) > 0 {
            2
        } else if self.count(Verdict::Fail) > 0 {
            1
        } else {
            0
        }
    }
}

#[derive(Debug)]
enum TaskError {
    Missing(&'static str),
    Bad(String),
    Math(Error),
}

impl From<Error> for TaskError {
    fn from(e: Error) -> Self {
        TaskError::Math(e)
    }
}

type TResult<T> = std::result::Result<T, TaskError>;

#[derive(Default)]
struct Outcome {
    pass: bool,
    residuals: Vec<(String, Expr)>,
    cofactors: Vec<(String, String)>,
    details: Vec<(String, String)>,
}

struct Ctx<'a> {
    doc: &'a ProblemDocument,
    task: &'a Task,
    names: &'a Names,
    p: usize,
    q: usize,
    r: usize,
}

impl<'a> Ctx<'a> {
    fn print(&self, e: &Expr) -> String {
        self.names.print_factored(e)
    }

    fn matrix(&self, m: &Matrix) -> String {
        let rows: Vec<String> = (0..m.rows())
            .map(|i| {
                let v: Vec<String> = m.row(i).iter().map(|e| self.print(e)).collect();
                format!("[{}]", v.join(", "))
            })
            .collect();
        format!("[{}]", rows.join(", "))
    }

    fn required(&self, key: &'static str) -> TResult<&'a str> {
        self.task.param(key).ok_or(TaskError::Missing(key))
    }

    fn order(&self) -> TResult<Option<usize>> {
        self.task
            .param("order")
            .map(|o| o.parse().map_err(|_| TaskError::Bad(format!("order '{o}' is not a number"))))
            .transpose()
    }

    fn space(&self, n: usize) -> TResult<JetSpace> {
        Ok(JetSpace::new(self.p, self.q, self.r, n)?)
    }

    fn field(&self) -> TResult<&'a VectorField> {
        let name = self.required("field")?;
        self.doc.field(name).ok_or_else(|| TaskError::Bad(format!("no field {name}")))
    }

    fn residuals_of(&self, name: &str) -> TResult<&'a Vec<Expr>> {
        self.doc.equation(name).ok_or_else(|| TaskError::Bad(format!("no equation {name}")))
    }

    fn mu(&self, name: &str) -> TResult<MatrixOneForm> {
        let m = self.doc.mu(name).ok_or_else(|| TaskError::Bad(format!("no mu {name}")))?;
        Ok(MatrixOneForm::new(m.clone())?)
    }

    fn twist(&self) -> TResult<Twist> {
        let mode = match self.task.param("mode") {
            Some(m) => m,
            None if self.task.param("lambda").is_some() => "lambda",
            None if self.task.param("mu").is_some() => "mu",
            None => "standard",
        };
        match mode {
            "standard" => Ok(Twist::Standard),
            "lambda" => {
                let name = self.required("lambda")?;
                let l = self.doc.lambda(name).ok_or_else(|| TaskError::Bad(format!("no lambda {name}")))?;
                Ok(Twist::Lambda(l.clone()))
            }
            "mu" => Ok(Twist::Mu(self.mu(self.required("mu")?)?)),
            other => Err(TaskError::Bad(format!("unknown mode '{other}'"))),
        }
    }

    fn twist_order(&self, t: &Twist) -> usize {
        match t {
            Twist::Standard => 0,
            Twist::Lambda(l) => jet_order(l),
            Twist::Mu(m) => m.lambdas().iter().map(matrix_order).max().unwrap_or(0),
        }
    }

    fn covering(&self, name: &str, min_order: usize) -> TResult<CoveringSystem> {
        let c = self.doc.covering(name).ok_or_else(|| TaskError::Bad(format!("no covering {name}")))?;
        let base = self.residuals_of(&c.base)?;
        let rules = c.rules.iter().flatten().map(jet_order).max().unwrap_or(0);
        let n = max_order(base).max(rules + 1).max(min_order).max(1);
        let space = self.space(n)?;
        let sys = EquationSystem::from_residuals(base.clone(), &space)?;
        Ok(CoveringSystem::new(sys, c.rules.clone(), space)?)
    }

    fn components(&self, prefix: &str, y: &ProlongedField, out: &mut Vec<(String, String)>) {
        for (n, e) in y.components(self.names) {
            out.push((format!("{prefix}{n}"), self.print(&e)));
        }
    }

    fn field_components(&self, prefix: &str, v: &VectorField, out: &mut Vec<(String, String)>) {
        self.components(prefix, &v.as_prolonged(self.p), out);
    }

    fn differences(&self, a: &ProlongedField, b: &ProlongedField) -> Vec<(String, Expr)> {
        a.sub(b).components(self.names)
    }
}

fn max_order(es: &[Expr]) -> usize {
    es.iter().map(jet_order).max().unwrap_or(0)
}

fn matrix_order(m: &Matrix) -> usize {
    max_order(m.entries())
}

fn run(ctx: &Ctx) -> TResult<Outcome> {
    let mut out = Outcome::default();
    match ctx.task.kind {
        TaskKind::Prolong => {
            let x = ctx.field()?;
            let twist = ctx.twist()?;
            let n = ctx.order()?.unwrap_or(1);
            let space = ctx.space(n + ctx.twist_order(&twist))?;
            let y = prolong_twisted(x, &twist, n, &space)?;
            ctx.components("", &y, &mut out.details);
            out.pass = true;
        }
        TaskKind::CheckSymmetry => {
            let x = ctx.field()?;
            let base = ctx.residuals_of(ctx.required("equation")?)?;
            let twist = ctx.twist()?;
            let n = ctx.order()?.unwrap_or(max_order(base)).max(max_order(base));
            let field_order = x.xi.iter().chain(&x.phi).chain(&x.eta).map(jet_order).max().unwrap_or(0);
            let space = ctx.space(n + ctx.twist_order(&twist).max(field_order))?;
            let sys = EquationSystem::from_residuals(base.clone(), &space)?;
            let rep = check_symmetry(x, &sys, &twist, n, &space)?;
            out.residuals = rep.residuals.into_iter().enumerate().map(|(k, e)| (k.to_string(), e)).collect();
            out.pass = rep.pass;
        }
        TaskKind::CheckCovering => {
            let cov = ctx.covering(ctx.required("covering")?, 0)?;
            let rep = check_compatibility(&cov)?;
            let aux = &ctx.names.aux;
            let indep = &ctx.names.indep;
            for (k, res) in rep.residuals.iter().enumerate() {
                out.details.push((
                    format!("residual.{k}.pair"),
                    format!("{}: {},{}", aux[res.beta], indep[res.i], indep[res.j]),
                ));
                out.residuals.push((k.to_string(), res.residual.clone()));
                if res.cofactors.len() == 1 {
                    out.cofactors.push((k.to_string(), ctx.print(&res.cofactors[0])));
                } else {
                    for (l, c) in res.cofactors.iter().enumerate() {
                        out.cofactors.push((format!("{k}.{l}"), ctx.print(c)));
                    }
                }
            }
            out.details.push(("trivial".into(), rep.trivial.to_string()));
            out.pass = rep.pass;
        }
        TaskKind::CheckMatrixCovering => {
            let name = ctx.required("name")?;
            let mc = ctx
                .doc
                .matrix_covering(name)
                .ok_or_else(|| TaskError::Bad(format!("no matrix covering {name}")))?;
            let base = ctx.residuals_of(&mc.base)?;
            let n = max_order(base).max(matrix_order(&mc.a).max(matrix_order(&mc.b)) + 1);
            let space = ctx.space(n)?;
            let sys = EquationSystem::from_residuals(base.clone(), &space)?;
            let rep = check_matrix_covering(&MatrixCovering::new(mc.a.clone(), mc.b.clone())?, &sys, &space)?;
            for i in 0..rep.reduced.rows() {
                for j in 0..rep.reduced.cols() {
                    out.residuals.push((format!("{i}.{j}"), rep.reduced.get(i, j).clone()));
                }
            }
            for ((i, j), c) in &rep.cofactors {
                let v = match c {
                    Some(c) => c.iter().map(|e| ctx.print(e)).collect::<Vec<_>>().join("; "),
                    None => "none".into(),
                };
                out.cofactors.push((format!("{i}.{j}"), v));
            }
            out.details.push(("z".into(), ctx.matrix(&rep.z)));
            out.details.push(("trivial".into(), rep.trivial.to_string()));
            out.pass = rep.pass;
        }
        TaskKind::CheckMch => {
            let mu = ctx.mu(ctx.required("mu")?)?;
            let n = mu.lambdas().iter().map(matrix_order).max().unwrap_or(0) + 1;
            let rep = check_mch(&mu, &ctx.space(n)?)?;
            for ((i, j), m) in &rep.residuals {
                out.details.push((
                    format!("curvature.{}{}", ctx.names.indep[*i], ctx.names.indep[*j]),
                    ctx.matrix(m),
                ));
                for a in 0..m.rows() {
                    for b in 0..m.cols() {
                        out.residuals.push((format!("{i}.{j}.{a}.{b}"), m.get(a, b).clone()));
                    }
                }
            }
            out.pass = rep.pass;
        }
        TaskKind::GaugeDiagram => {
            let name = ctx.required("gauge")?;
            let r = ctx.doc.gauge(name).ok_or_else(|| TaskError::Bad(format!("no gauge {name}")))?;
            let g = GaugeMap::new(r.clone())?;
            let x = ctx.field()?;
            let n = ctx.order()?.unwrap_or(1);
            let space = ctx.space(n + matrix_order(r) + 1)?;
            let rep = check_gauge_diagram(&g, x, n, &space)?;
            for (i, l) in rep.mu.lambdas().iter().enumerate() {
                out.details.push((format!("mu.{}", ctx.names.indep[i]), ctx.matrix(l)));
            }
            out.residuals = ctx.differences(&rep.twisted, &rep.gauged);
            out.pass = rep.pass;
        }
        TaskKind::Reconstruct => {
            let x = ctx.field()?;
            let cov = ctx.covering(ctx.required("covering")?, ctx.order()?.unwrap_or(0))?;
            let n = ctx.order()?.unwrap_or(cov.base.max_order().max(1));
            let mode = ctx.task.param("mode").unwrap_or(if ctx.task.param("gauge").is_some() {
                "mu"
            } else {
                "lambda"
            });
            match mode {
                "lambda" => {
                    let rec = reconstruct_lambda(x, &cov, n)?;
                    ctx.field_components("x0.", &rec.x0, &mut out.details);
                    out.details.push(("lambda".into(), ctx.print(&rec.lambda)));
                    out.residuals = ctx.differences(&rec.restricted, &rec.expected);
                    out.pass = rec.matched;
                }
                "mu" => {
                    let name = ctx.required("gauge")?;
                    let g = ctx.doc.gauge(name).ok_or_else(|| TaskError::Bad(format!("no gauge {name}")))?;
                    let rec = reconstruct_mu(x, g, &cov, n)?;
                    ctx.field_components("x0.", &rec.x0, &mut out.details);
                    for (i, l) in rec.mu.lambdas().iter().enumerate() {
                        out.details.push((format!("mu.{}", ctx.names.indep[i]), ctx.matrix(l)));
                    }
                    out.details.push(("mch".into(), rec.mch.pass.to_string()));
                    out.residuals = ctx.differences(&rec.restricted, &rec.expected);
                    out.pass = rec.matched;
                }
                other => return Err(TaskError::Bad(format!("unknown reconstruction mode '{other}'"))),
            }
        }
        TaskKind::CheckAugmentedSymmetry => {
            let x = ctx.field()?;
            let cov = ctx.covering(ctx.required("covering")?, ctx.order()?.unwrap_or(0))?;
            let n = ctx.order()?.unwrap_or(cov.base.max_order().max(1));
            let rep = check_augmented_symmetry(x, &cov, n)?;
            for (k, e) in rep.base_residuals.into_iter().enumerate() {
                out.residuals.push((k.to_string(), e));
            }
            for ((b, i), e) in rep.aux_residuals {
                let w = ctx.names.atom(&Atom::aux(b, crate::symbolic::MultiIndex::unit(ctx.p, i)));
                out.residuals.push((w, e));
            }
            out.pass = rep.pass;
        }
        TaskKind::CheckSemiclassical => {
            let x = ctx.field()?;
            let cov = ctx.covering(ctx.required("covering")?, 0)?;
            let rep = check_semiclassical(x, &cov);
            out.details.push(("semiclassical".into(), rep.is_semiclassical.to_string()));
            out.details.push(("exponential_form".into(), rep.exponential_form.to_string()));
            if rep.exponential_form {
                let x0 = VectorField::new(rep.xi0, rep.phi0, rep.eta0);
                ctx.field_components("x0.", &x0, &mut out.details);
            }
            out.pass = rep.is_semiclassical;
        }
    }
    Ok(out)
}

/// Every printed residual is cross-checked at random points; an exact nonzero
/// that samples as zero everywhere means the simplifier and evaluator disagree.
fn cross_check(residuals: &[(String, Expr)], seed: u64) -> TResult<()> {
    for (k, e) in residuals {
        if !e.is_zero() && confirm_zero(e, ORACLE_POINTS, seed)? {
            return Err(TaskError::Math(Error::Inconsistent(format!(
                "residual {k} is nonzero but vanishes at every sample point"
            ))));
        }
    }
    Ok(())
}

fn execute_task(doc: &ProblemDocument, index: usize, task: &Task, seed: u64) -> TaskReport {
    let names = &doc.decl.names;
    let ctx = Ctx {
        doc,
        task,
        names,
        p: names.indep.len(),
        q: names.dep.len(),
        r: names.aux.len(),
    };
    let start = Instant::now();
    let result = run(&ctx).and_then(|o| cross_check(&o.residuals, seed).map(|_| o));
    let elapsed = start.elapsed();
    let mut report = TaskReport {
        index,
        kind: task.kind,
        args: task.args(),
        verdict: Verdict::Error,
        residuals: Vec::new(),
        cofactors: Vec::new(),
        details: Vec::new(),
        error: None,
        elapsed,
    };
    match result {
        Ok(o) => {
            report.verdict = if o.pass { Verdict::Pass } else { Verdict::Fail };
            report.residuals = o.residuals.iter().map(|(k, e)| (k.clone(), ctx.print(e))).collect();
            report.cofactors = o.cofactors;
            report.details = o.details;
        }
        Err(TaskError::Math(Error::NoDecomposition(what))) => {
            report.verdict = Verdict::Fail;
            report.details.push(("reason".into(), "no decomposition modulo the base system".into()));
            report.details.push(("undecomposed".into(), what));
        }
        Err(TaskError::Missing(key)) => report.error = Some(format!("missing parameter '{key}'")),
        Err(TaskError::Bad(m)) => report.error = Some(m),
        Err(TaskError::Math(e)) => report.error = Some(e.to_string()),
    }
    report
}

/// Runs every task in parallel; reports keep document order and one task's
/// failure never affects another.
pub fn execute(doc: &ProblemDocument, seed: u64) -> Report {
    let tasks = doc
        .tasks
        .par_iter()
        .enumerate()
        .map(|(k, t)| execute_task(doc, k, t, seed))
        .collect();
    Report { tasks }
}

/// One line per task ending in its verdict, residuals and details indented below.
pub fn render_human(report: &Report, timing: bool) -> String {
    let mut out = format!(
        "twistkit: {} task(s), {} pass, {} fail, {} error\n",
        report.tasks.len(),
        report.count(Verdict::Pass),
        report.count(Verdict::Fail),
        report.count(Verdict::Error)
    );
    let heads: Vec<String> = report
        .tasks
        .iter()
        .map(|t| format!("[{}] {} {}", t.index, t.kind.name(), t.args).trim_end().to_string())
        .collect();
    let width = heads.iter().map(|h| h.chars().count()).max().unwrap_or(0);
    for (t, head) in report.tasks.iter().zip(&heads) {
        if timing {
            out.push_str(&format!("{head:<width$}  {:>8.3} ms  {}\n", t.elapsed.as_secs_f64() * 1e3, t.verdict.word()));
        } else {
            out.push_str(&format!("{head:<width$}  {}\n", t.verdict.word()));
        }
        if let Some(e) = &t.error {
            out.push_str(&format!("    error: {e}\n"));
        }
        for (k, v) in &t.residuals {
            if v != "0" {
                out.push_str(&format!("    residual {k}: {v}\n"));
            }
        }
        for (k, v) in &t.cofactors {
            out.push_str(&format!("    cofactor {k}: {v}\n"));
        }
        for (k, v) in &t.details {
            out.push_str(&format!("    {k}: {v}\n"));
        }
    }
    out
}

/// Line-oriented `key=value` form, stable across runs when timing is off.
pub fn render_structured(report: &Report, timing: bool) -> String {
    let mut out = String::from("twistkit-report 1\n");
    out.push_str(&format!("tasks={}\n", report.tasks.len()));
    for t in &report.tasks {
        let n = t.index;
        out.push_str(&format!("task.{n}.kind={}\n", t.kind.name()));
        out.push_str(&format!("task.{n}.args={}\n", t.args));
        out.push_str(&format!("task.{n}.verdict={}\n", t.verdict.word().to_lowercase()));
        if let Some(e) = &t.error {
            out.push_str(&format!("task.{n}.error={e}\n"));
        }
        for (k, v) in &t.residuals {
            out.push_str(&format!("task.{n}.residual.{k}={v}\n"));
        }
        for (k, v) in &t.cofactors {
            out.push_str(&format!("task.{n}.cofactor.{k}={v}\n"));
        }
        for (k, v) in &t.details {
            out.push_str(&format!("task.{n}.detail.{k}={v}\n"));
        }
        if timing {
            out.push_str(&format!("task.{n}.time_us={}\n", t.elapsed.as_micros()));
        }
    }
    out
}
