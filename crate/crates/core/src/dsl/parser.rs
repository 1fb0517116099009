use crate::circuit::TestKind;

use super::ast::{CellLit, Expr, Ident, Nat, OutcomeLit, SourceUnit, Stmt, StmtKind};
use super::lexer::{lex, Token, TokenKind};
use super::{Diagnostic, Span};

type PResult<T> = Result<T, Diagnostic>;

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

/// Parses a whole source file. After a syntax error the parser skips to the
/// next statement keyword, so one run can report several problems.
pub fn parse(src: &str) -> Result<SourceUnit, Vec<Diagnostic>> {
    let tokens = lex(src).map_err(|d| vec![d])?;
    let mut p = Parser { tokens, pos: 0 };
    let mut stmts = Vec::new();
    let mut errors = Vec::new();
    while p.peek() != &TokenKind::Eof {
        let start = p.pos;
        match p.statement() {
            Ok(s) => stmts.push(s),
            Err(d) => {
                errors.push(d);
                p.recover(start);
            }
        }
    }
    if errors.is_empty() {
        Ok(SourceUnit { stmts })
    } else {
        Err(errors)
    }
}

const STATEMENT_START: &[&str] = &[
    "`system`",
    "`state`",
    "`effect`",
    "`transform`",
    "`test`",
    "`circuit`",
    "`eval`",
];

impl Parser {
    fn peek(&self) -> &TokenKind {
        &self.tokens[self.pos].kind
    }

    fn span(&self) -> Span {
        self.tokens[self.pos].span
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if t.kind != TokenKind::Eof {
            self.pos += 1;
        }
        t
    }

    fn recover(&mut self, start: usize) {
        if self.pos == start {
            self.bump();
        }
        while !self.peek().is_statement_start() && self.peek() != &TokenKind::Eof {
            self.bump();
        }
    }

    fn error(&self, expected: &[&str]) -> Diagnostic {
        let found = self.peek();
        let mut d = Diagnostic::new(self.span(), format!("unexpected {found}"));
        d.expected = expected.iter().map(|s| s.to_string()).collect();
        d
    }

    fn eat(&mut self, kind: &TokenKind) -> bool {
        if self.peek() == kind {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, kind: TokenKind) -> PResult<Span> {
        if self.peek() == &kind {
            Ok(self.bump().span)
        } else {
            Err(self.error(&[&kind.to_string()]))
        }
    }

    fn ident(&mut self) -> PResult<Ident> {
        match self.peek().clone() {
            TokenKind::Ident(name) => {
                let span = self.bump().span;
                Ok(Ident { name, span })
            }
            _ => Err(self.error(&["identifier"])),
        }
    }

    /// An identifier that must be spelled `word` (`v`, `E`).
    fn word(&mut self, word: &str) -> PResult<()> {
        match self.peek() {
            TokenKind::Ident(name) if name == word => {
                self.bump();
                Ok(())
            }
            _ => Err(self.error(&[&format!("`{word}`")])),
        }
    }

    fn nat(&mut self) -> PResult<Nat> {
        match *self.peek() {
            TokenKind::Nat(value) => {
                let span = self.bump().span;
                Ok(Nat { value, span })
            }
            _ => Err(self.error(&["number"])),
        }
    }

    /// `open [item ("," item)*] close`
    fn list<T>(
        &mut self,
        open: TokenKind,
        close: TokenKind,
        item_name: &str,
        mut item: impl FnMut(&mut Self) -> PResult<T>,
    ) -> PResult<Vec<T>> {
        self.expect(open)?;
        let mut items = Vec::new();
        if self.eat(&close) {
            return Ok(items);
        }
        loop {
            items.push(item(self)?);
            if self.eat(&close) {
                return Ok(items);
            }
            if !self.eat(&TokenKind::Comma) {
                let close_s = close.to_string();
                return Err(self.error(&["`,`", &close_s]));
            }
            if matches!(self.peek(), TokenKind::Eof) {
                return Err(self.error(&[item_name]));
            }
        }
    }

    fn statement(&mut self) -> PResult<Stmt> {
        let span = self.span();
        let kind = match self.peek() {
            TokenKind::System => self.system()?,
            TokenKind::State => self.state()?,
            TokenKind::Effect => self.effect()?,
            TokenKind::Transform => self.transform()?,
            TokenKind::Test => self.test()?,
            TokenKind::Circuit => {
                self.bump();
                let name = self.ident()?;
                self.expect(TokenKind::Eq)?;
                let expr = self.expr()?;
                StmtKind::Circuit { name, expr }
            }
            TokenKind::Eval => self.eval()?,
            _ => return Err(self.error(STATEMENT_START)),
        };
        Ok(Stmt { kind, span })
    }

    fn system(&mut self) -> PResult<StmtKind> {
        self.bump();
        let name = self.ident()?;
        self.expect(TokenKind::Eq)?;
        match self.peek() {
            TokenKind::Nat(_) => {
                let n = self.nat()?;
                self.expect(TokenKind::Triangle)?;
                let m = self.nat()?;
                Ok(StmtKind::SystemLit { name, n, m })
            }
            TokenKind::Ident(_) => {
                let left = self.ident()?;
                self.expect(TokenKind::Star)?;
                let right = self.ident()?;
                Ok(StmtKind::SystemProduct { name, left, right })
            }
            _ => Err(self.error(&["number", "identifier"])),
        }
    }

    fn state(&mut self) -> PResult<StmtKind> {
        self.bump();
        let name = self.ident()?;
        self.expect(TokenKind::Colon)?;
        let system = self.ident()?;
        self.expect(TokenKind::Eq)?;
        let pairs = self.list(TokenKind::LBrace, TokenKind::RBrace, "number", |p| {
            let i = p.nat()?;
            p.expect(TokenKind::Arrow)?;
            let v = p.nat()?;
            Ok((i, v))
        })?;
        Ok(StmtKind::State {
            name,
            system,
            pairs,
        })
    }

    fn effect(&mut self) -> PResult<StmtKind> {
        self.bump();
        let name = self.ident()?;
        self.expect(TokenKind::Colon)?;
        let system = self.ident()?;
        self.expect(TokenKind::Eq)?;
        self.expect(TokenKind::LBracket)?;
        self.word("v")?;
        self.expect(TokenKind::Eq)?;
        let pointer = self.nat()?;
        self.expect(TokenKind::Semi)?;
        self.word("E")?;
        self.expect(TokenKind::Eq)?;
        let values = self.list(TokenKind::LBrace, TokenKind::RBrace, "number", Self::nat)?;
        self.expect(TokenKind::RBracket)?;
        Ok(StmtKind::Effect {
            name,
            system,
            pointer,
            values,
        })
    }

    fn pair_of_nats(&mut self) -> PResult<(Nat, Nat)> {
        self.expect(TokenKind::LParen)?;
        let a = self.nat()?;
        self.expect(TokenKind::Comma)?;
        let b = self.nat()?;
        self.expect(TokenKind::RParen)?;
        Ok((a, b))
    }

    fn transform(&mut self) -> PResult<StmtKind> {
        self.bump();
        let name = self.ident()?;
        self.expect(TokenKind::Colon)?;
        let input = self.ident()?;
        self.expect(TokenKind::Arrow)?;
        let output = self.ident()?;
        self.expect(TokenKind::Eq)?;
        let cells = self.list(TokenKind::LBrace, TokenKind::RBrace, "`(`", |p| {
            let (input_value, output_pointer) = p.pair_of_nats()?;
            p.expect(TokenKind::Arrow)?;
            let (anchor, output_value) = p.pair_of_nats()?;
            Ok(CellLit {
                input_value,
                output_pointer,
                anchor,
                output_value,
            })
        })?;
        Ok(StmtKind::Transform {
            name,
            input,
            output,
            cells,
        })
    }

    fn test(&mut self) -> PResult<StmtKind> {
        self.bump();
        let name = self.ident()?;
        self.expect(TokenKind::Colon)?;
        let kind = match self.peek() {
            TokenKind::Ident(k) if k == "prep" => TestKind::Preparation,
            TokenKind::Ident(k) if k == "obs" => TestKind::Observation,
            TokenKind::Ident(k) if k == "chan" => TestKind::Transformation,
            _ => return Err(self.error(&["`prep`", "`obs`", "`chan`"])),
        };
        self.bump();
        self.expect(TokenKind::Eq)?;
        if self.peek() == &TokenKind::LBrace && self.tokens[self.pos + 1].kind == TokenKind::RBrace
        {
            self.bump();
            return Err(self.error(&["identifier"]));
        }
        let events = self.list(
            TokenKind::LBrace,
            TokenKind::RBrace,
            "identifier",
            Self::ident,
        )?;
        Ok(StmtKind::Test { name, kind, events })
    }

    fn eval(&mut self) -> PResult<StmtKind> {
        self.bump();
        let name = self.ident()?;
        if !self.eat(&TokenKind::At) {
            return Ok(StmtKind::Eval {
                name,
                outcomes: None,
            });
        }
        let mut outcomes: Vec<OutcomeLit> = Vec::new();
        loop {
            match self.peek() {
                TokenKind::Nat(_) => outcomes.push(Some(self.nat()?)),
                TokenKind::Underscore => {
                    self.bump();
                    outcomes.push(None);
                }
                _ => return Err(self.error(&["number", "`_`"])),
            }
            if !self.eat(&TokenKind::Comma) {
                break;
            }
        }
        Ok(StmtKind::Eval {
            name,
            outcomes: Some(outcomes),
        })
    }

    fn expr(&mut self) -> PResult<Expr> {
        let mut terms = vec![self.term()?];
        while self.eat(&TokenKind::Semi) {
            terms.push(self.term()?);
        }
        Ok(if terms.len() == 1 {
            terms.pop().unwrap()
        } else {
            Expr::Seq(terms)
        })
    }

    fn term(&mut self) -> PResult<Expr> {
        let mut factors = vec![self.factor()?];
        while self.eat(&TokenKind::Star) {
            factors.push(self.factor()?);
        }
        Ok(if factors.len() == 1 {
            factors.pop().unwrap()
        } else {
            Expr::Par(factors)
        })
    }

    fn factor(&mut self) -> PResult<Expr> {
        match self.peek() {
            TokenKind::Ident(_) => Ok(Expr::Name(self.ident()?)),
            TokenKind::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(TokenKind::RParen)?;
                Ok(e)
            }
            _ => Err(self.error(&["identifier", "`(`"])),
        }
    }
}
