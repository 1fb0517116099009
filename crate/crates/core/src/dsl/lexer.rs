use std::fmt;

use super::{Diagnostic, Span};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TokenKind {
    Ident(String),
    Nat(usize),
    // reserved words
    System,
    State,
    Effect,
    Transform,
    Test,
    Circuit,
    Eval,
    // punctuation
    Eq,
    Triangle,
    Star,
    Colon,
    Semi,
    Comma,
    Arrow,
    At,
    Underscore,
    LBrace,
    RBrace,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Eof,
}

impl TokenKind {
    pub fn is_statement_start(&self) -> bool {
        matches!(
            self,
            TokenKind::System
                | TokenKind::State
                | TokenKind::Effect
                | TokenKind::Transform
                | TokenKind::Test
                | TokenKind::Circuit
                | TokenKind::Eval
        )
    }
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TokenKind::Ident(name) => return write!(f, "identifier `{name}`"),
            TokenKind::Nat(n) => return write!(f, "number `{n}`"),
            TokenKind::System => "`system`",
            TokenKind::State => "`state`",
            TokenKind::Effect => "`effect`",
            TokenKind::Transform => "`transform`",
            TokenKind::Test => "`test`",
            TokenKind::Circuit => "`circuit`",
            TokenKind::Eval => "`eval`",
            TokenKind::Eq => "`=`",
            TokenKind::Triangle => "`|>`",
            TokenKind::Star => "`*`",
            TokenKind::Colon => "`:`",
            TokenKind::Semi => "`;`",
            TokenKind::Comma => "`,`",
            TokenKind::Arrow => "`->`",
            TokenKind::At => "`@`",
            TokenKind::Underscore => "`_`",
            TokenKind::LBrace => "`{`",
            TokenKind::RBrace => "`}`",
            TokenKind::LParen => "`(`",
            TokenKind::RParen => "`)`",
            TokenKind::LBracket => "`[`",
            TokenKind::RBracket => "`]`",
            TokenKind::Eof => "end of input",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub span: Span,
}

fn keyword(word: &str) -> Option<TokenKind> {
    Some(match word {
        "system" => TokenKind::System,
        "state" => TokenKind::State,
        "effect" => TokenKind::Effect,
        "transform" => TokenKind::Transform,
        "test" => TokenKind::Test,
        "circuit" => TokenKind::Circuit,
        "eval" => TokenKind::Eval,
        "_" => TokenKind::Underscore,
        _ => return None,
    })
}

/// Splits source text into tokens. `#` starts a comment running to the end
/// of the line; `\r\n` and `\n` both end lines.
pub fn lex(src: &str) -> Result<Vec<Token>, Diagnostic> {
    let chars: Vec<char> = src.chars().collect();
    let mut tokens = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        let span = Span { line, col };
        let advance = |n: usize, i: &mut usize, col: &mut usize| {
            *i += n;
            *col += n;
        };
        match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
            }
            '\r' if chars.get(i + 1) == Some(&'\n') => {
                i += 2;
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => advance(1, &mut i, &mut col),
            '#' => {
                while i < chars.len() && chars[i] != '\n' && chars[i] != '\r' {
                    i += 1;
                    col += 1;
                }
            }
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                let value = text
                    .parse::<usize>()
                    .map_err(|_| Diagnostic::new(span, format!("number `{text}` is too large")))?;
                col += i - start;
                tokens.push(Token {
                    kind: TokenKind::Nat(value),
                    span,
                });
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                col += i - start;
                let kind = keyword(&word).unwrap_or(TokenKind::Ident(word));
                tokens.push(Token { kind, span });
            }
            _ => {
                let two: String = chars[i..chars.len().min(i + 2)].iter().collect();
                let (kind, len) = match (two.as_str(), c) {
                    ("|>", _) => (TokenKind::Triangle, 2),
                    ("->", _) => (TokenKind::Arrow, 2),
                    (_, '=') => (TokenKind::Eq, 1),
                    (_, '*') => (TokenKind::Star, 1),
                    (_, ':') => (TokenKind::Colon, 1),
                    (_, ';') => (TokenKind::Semi, 1),
                    (_, ',') => (TokenKind::Comma, 1),
                    (_, '@') => (TokenKind::At, 1),
                    (_, '{') => (TokenKind::LBrace, 1),
                    (_, '}') => (TokenKind::RBrace, 1),
                    (_, '(') => (TokenKind::LParen, 1),
                    (_, ')') => (TokenKind::RParen, 1),
                    (_, '[') => (TokenKind::LBracket, 1),
                    (_, ']') => (TokenKind::RBracket, 1),
                    _ => {
                        return Err(Diagnostic::new(span, format!("unexpected character {c:?}")));
                    }
                };
                advance(len, &mut i, &mut col);
                tokens.push(Token { kind, span });
            }
        }
    }
    tokens.push(Token {
        kind: TokenKind::Eof,
        span: Span { line, col },
    });
    Ok(tokens)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(src: &str) -> Vec<TokenKind> {
        lex(src).unwrap().into_iter().map(|t| t.kind).collect()
    }

    #[test]
    fn basic_tokens() {
        assert_eq!(
            kinds("system A = 2 |> 2 # comment"),
            vec![
                TokenKind::System,
                TokenKind::Ident("A".into()),
                TokenKind::Eq,
                TokenKind::Nat(2),
                TokenKind::Triangle,
                TokenKind::Nat(2),
                TokenKind::Eof
            ]
        );
        assert_eq!(
            kinds("(0,1)->(1,0) @ _"),
            vec![
                TokenKind::LParen,
                TokenKind::Nat(0),
                TokenKind::Comma,
                TokenKind::Nat(1),
                TokenKind::RParen,
                TokenKind::Arrow,
                TokenKind::LParen,
                TokenKind::Nat(1),
                TokenKind::Comma,
                TokenKind::Nat(0),
                TokenKind::RParen,
                TokenKind::At,
                TokenKind::Underscore,
                TokenKind::Eof
            ]
        );
    }

    #[test]
    fn positions_with_crlf() {
        let toks = lex("system A\r\n  = 2").unwrap();
        assert_eq!(toks[2].span, Span { line: 2, col: 3 });
        assert_eq!(toks[3].span, Span { line: 2, col: 5 });
    }

    #[test]
    fn bad_character() {
        let err = lex("system A = 2 |> 2\nstate $").unwrap_err();
        assert_eq!(err.span, Span { line: 2, col: 7 });
        let err = lex("x = 99999999999999999999999999").unwrap_err();
        assert!(err.message.contains("too large"));
    }
}
