//! The `.opt` circuit language: lexer, recursive-descent parser, semantic
//! analysis against the kernel validators, a canonical printer and an
//! executor for `eval` statements.
//!
//! ```text
//! system A = 2 |> 2
//! state r : A = {0 -> 1}
//! effect a : A = [v = 0; E = {1}]
//! test P : prep = {r, ...}
//! circuit C = P ; A * D
//! eval C @ 0, _
//! ```
//!
//! `;` is diagram order (left output feeds right input). `_` in an outcome
//! list sums over that test's outcomes.

pub mod analyze;
pub mod ast;
pub mod exec;
pub mod lexer;
pub mod parser;
pub mod print;

use std::fmt;

use serde::Serialize;

pub use analyze::{analyze, CircuitExpr, Item, Model, SystemDef};
pub use exec::{execute, EvalOutput};
pub use parser::parse;
pub use print::print;

/// 1-based source position.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Span {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

/// A located error. `expected` lists the tokens that would have been accepted
/// (empty for semantic errors).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub span: Span,
    pub message: String,
    pub expected: Vec<String>,
}

impl Diagnostic {
    pub fn new(span: Span, message: impl Into<String>) -> Self {
        Diagnostic {
            span,
            message: message.into(),
            expected: Vec::new(),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: error: {}", self.span, self.message)?;
        if !self.expected.is_empty() {
            write!(f, " (expected {})", self.expected.join(", "))?;
        }
        Ok(())
    }
}

impl std::error::Error for Diagnostic {}

/// Parses and analyzes in one step.
pub fn load(src: &str) -> Result<Model, Vec<Diagnostic>> {
    let unit = parse(src)?;
    analyze(&unit)
}
