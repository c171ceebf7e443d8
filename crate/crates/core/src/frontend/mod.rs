//! Expression and problem-file parsing, task execution and report rendering.

mod execute;
mod parse;
mod problem;

#[cfg(test)]
mod props;

pub use execute::{
    execute, render_human, render_structured, Report, TaskReport, Verdict, ORACLE_POINTS,
};
pub use parse::{parse_expression, parse_expression_at, Declarations};
pub use problem::{
    parse_problem, render_problem, CoveringDef, MatrixCoveringDef, Named, ProblemDocument, Task,
    TaskKind,
};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrontendError {
    #[error("unknown symbol {0}")]
    UnknownSymbol(String),
    #[error("syntax error at line {line}, column {col}: {message}")]
    Syntax {
        line: usize,
        col: usize,
        message: String,
    },
    #[error("{name} expects {expected} argument(s), found {found}")]
    Arity {
        name: String,
        expected: usize,
        found: usize,
    },
    #[error("line {line}, column {col}: {source}")]
    Math {
        line: usize,
        col: usize,
        source: crate::Error,
    },
    #[error("undeclared reference {0}")]
    UndeclaredReference(String),
    #[error("duplicate declaration {0}")]
    DuplicateDeclaration(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Human,
    Structured,
}

pub fn render_report(r: &Report, format: Format, timing: bool) -> String {
    match format {
        Format::Human => render_human(r, timing),
        Format::Structured => render_structured(r, timing),
    }
}
