//! Syntax tree as written, with source positions.

use crate::circuit::TestKind;

use super::Span;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ident {
    pub name: String,
    pub span: Span,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Nat {
    pub value: usize,
    pub span: Span,
}

/// A transform cell `(s', t) -> (f(t), g(t, s'))`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CellLit {
    pub input_value: Nat,
    pub output_pointer: Nat,
    pub anchor: Nat,
    pub output_value: Nat,
}

/// `None` stands for `_`, an outcome summed over.
pub type OutcomeLit = Option<Nat>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Name(Ident),
    /// `a ; b ; ...`, diagram order.
    Seq(Vec<Expr>),
    /// `a * b * ...`
    Par(Vec<Expr>),
}

impl Expr {
    pub fn span(&self) -> Span {
        match self {
            Expr::Name(id) => id.span,
            Expr::Seq(parts) | Expr::Par(parts) => parts[0].span(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StmtKind {
    SystemLit {
        name: Ident,
        n: Nat,
        m: Nat,
    },
    SystemProduct {
        name: Ident,
        left: Ident,
        right: Ident,
    },
    State {
        name: Ident,
        system: Ident,
        pairs: Vec<(Nat, Nat)>,
    },
    Effect {
        name: Ident,
        system: Ident,
        pointer: Nat,
        values: Vec<Nat>,
    },
    Transform {
        name: Ident,
        input: Ident,
        output: Ident,
        cells: Vec<CellLit>,
    },
    Test {
        name: Ident,
        kind: TestKind,
        events: Vec<Ident>,
    },
    Circuit {
        name: Ident,
        expr: Expr,
    },
    Eval {
        name: Ident,
        outcomes: Option<Vec<OutcomeLit>>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stmt {
    pub kind: StmtKind,
    pub span: Span,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SourceUnit {
    pub stmts: Vec<Stmt>,
}
