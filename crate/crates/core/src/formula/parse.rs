//! Formula text parsing.
//!
//! Grammar (UTF-8 text, `#` starts a comment running to end of line):
//!
//! ```text
//! formula := iff
//! iff     := implies ( "<->" iff )?            right-associative
//! implies := or ( "->" implies )?              right-associative
//! or      := and ( "|" and )*                  left-associative
//! and     := until ( "&" until )*              left-associative
//! until   := unary ( ("U"|"R"|"W") until )?    right-associative
//! unary   := ("!"|"X"|"N"|"F"|"G") unary | primary
//! primary := "true" | "false" | ident | "(" formula ")"
//! ident   := [A-Za-z_][A-Za-z0-9_]*            except reserved words
//! ```
//!
//! `true`, `false`, `X`, `N`, `F`, `G`, `U`, `R` and `W` are reserved.

use super::{Dialect, Formula};

/// Syntax error with 1-based line and column of the offending token.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    True,
    False,
    Ident(String),
    Not,
    And,
    Or,
    Implies,
    Iff,
    Next,
    WeakNext,
    Until,
    Release,
    WeakUntil,
    Eventually,
    Globally,
    LParen,
    RParen,
}

struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

type CharStream<'a> = std::iter::Peekable<std::str::Chars<'a>>;

fn bump(chars: &mut CharStream<'_>, line: &mut usize, col: &mut usize) -> Option<char> {
    let c = chars.next();
    if c == Some('\n') {
        *line += 1;
        *col = 1;
    } else if c.is_some() {
        *col += 1;
    }
    c
}

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let mut line = 1usize;
    let mut col = 1usize;
    while let Some(&c) = chars.peek() {
        let (tline, tcol) = (line, col);
        match c {
            ' ' | '\t' | '\r' | '\n' => {
                bump(&mut chars, &mut line, &mut col);
            }
            '#' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    bump(&mut chars, &mut line, &mut col);
                }
            }
            '(' => {
                bump(&mut chars, &mut line, &mut col);
                out.push(Token { tok: Tok::LParen, line: tline, col: tcol });
            }
            ')' => {
                bump(&mut chars, &mut line, &mut col);
                out.push(Token { tok: Tok::RParen, line: tline, col: tcol });
            }
            '!' => {
                bump(&mut chars, &mut line, &mut col);
                out.push(Token { tok: Tok::Not, line: tline, col: tcol });
            }
            '&' => {
                bump(&mut chars, &mut line, &mut col);
                out.push(Token { tok: Tok::And, line: tline, col: tcol });
            }
            '|' => {
                bump(&mut chars, &mut line, &mut col);
                out.push(Token { tok: Tok::Or, line: tline, col: tcol });
            }
            '-' => {
                bump(&mut chars, &mut line, &mut col);
                if chars.peek() == Some(&'>') {
                    bump(&mut chars, &mut line, &mut col);
                    out.push(Token { tok: Tok::Implies, line: tline, col: tcol });
                } else {
                    return Err(ParseError {
                        line: tline,
                        col: tcol,
                        message: "expected `->`".into(),
                    });
                }
            }
            '<' => {
                bump(&mut chars, &mut line, &mut col);
                if chars.peek() == Some(&'-') {
                    bump(&mut chars, &mut line, &mut col);
                    if chars.peek() == Some(&'>') {
                        bump(&mut chars, &mut line, &mut col);
                        out.push(Token { tok: Tok::Iff, line: tline, col: tcol });
                        continue;
                    }
                }
                return Err(ParseError {
                    line: tline,
                    col: tcol,
                    message: "expected `<->`".into(),
                });
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut word = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        word.push(c);
                        bump(&mut chars, &mut line, &mut col);
                    } else {
                        break;
                    }
                }
                let tok = match word.as_str() {
                    "true" => Tok::True,
                    "false" => Tok::False,
                    "X" => Tok::Next,
                    "N" => Tok::WeakNext,
                    "F" => Tok::Eventually,
                    "G" => Tok::Globally,
                    "U" => Tok::Until,
                    "R" => Tok::Release,
                    "W" => Tok::WeakUntil,
                    _ => Tok::Ident(word),
                };
                out.push(Token { tok, line: tline, col: tcol });
            }
            other => {
                return Err(ParseError {
                    line: tline,
                    col: tcol,
                    message: format!("unexpected character `{other}`"),
                });
            }
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    end_line: usize,
    end_col: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|t| &t.tok)
    }

    fn advance(&mut self) -> Option<&Token> {
        let t = self.tokens.get(self.pos);
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn here(&self) -> (usize, usize) {
        match self.tokens.get(self.pos) {
            Some(t) => (t.line, t.col),
            None => (self.end_line, self.end_col),
        }
    }

    fn err(&self, message: impl Into<String>) -> ParseError {
        let (line, col) = self.here();
        ParseError { line, col, message: message.into() }
    }

    fn iff(&mut self) -> Result<Formula, ParseError> {
        let left = self.implies()?;
        if self.peek() == Some(&Tok::Iff) {
            self.advance();
            let right = self.iff()?;
            Ok(Formula::iff(left, right))
        } else {
            Ok(left)
        }
    }

    fn implies(&mut self) -> Result<Formula, ParseError> {
        let left = self.or_expr()?;
        if self.peek() == Some(&Tok::Implies) {
            self.advance();
            let right = self.implies()?;
            Ok(Formula::implies(left, right))
        } else {
            Ok(left)
        }
    }

    fn or_expr(&mut self) -> Result<Formula, ParseError> {
        let mut left = self.and_expr()?;
        while self.peek() == Some(&Tok::Or) {
            self.advance();
            let right = self.and_expr()?;
            left = Formula::or(left, right);
        }
        Ok(left)
    }

    fn and_expr(&mut self) -> Result<Formula, ParseError> {
        let mut left = self.until_expr()?;
        while self.peek() == Some(&Tok::And) {
            self.advance();
            let right = self.until_expr()?;
            left = Formula::and(left, right);
        }
        Ok(left)
    }

    fn until_expr(&mut self) -> Result<Formula, ParseError> {
        let left = self.unary()?;
        match self.peek() {
            Some(Tok::Until) => {
                self.advance();
                let right = self.until_expr()?;
                Ok(Formula::until(left, right))
            }
            Some(Tok::Release) => {
                self.advance();
                let right = self.until_expr()?;
                Ok(Formula::release(left, right))
            }
            Some(Tok::WeakUntil) => {
                self.advance();
                let right = self.until_expr()?;
                Ok(Formula::weak_until(left, right))
            }
            _ => Ok(left),
        }
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Some(Tok::Not) => {
                self.advance();
                Ok(Formula::not(self.unary()?))
            }
            Some(Tok::Next) => {
                self.advance();
                Ok(Formula::next(self.unary()?))
            }
            Some(Tok::WeakNext) => {
                self.advance();
                Ok(Formula::weak_next(self.unary()?))
            }
            Some(Tok::Eventually) => {
                self.advance();
                Ok(Formula::eventually(self.unary()?))
            }
            Some(Tok::Globally) => {
                self.advance();
                Ok(Formula::globally(self.unary()?))
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().cloned() {
            Some(Tok::True) => {
                self.advance();
                Ok(Formula::True)
            }
            Some(Tok::False) => {
                self.advance();
                Ok(Formula::False)
            }
            Some(Tok::Ident(name)) => {
                self.advance();
                Ok(Formula::Atom(name))
            }
            Some(Tok::LParen) => {
                self.advance();
                let inner = self.iff()?;
                if self.peek() == Some(&Tok::RParen) {
                    self.advance();
                    Ok(inner)
                } else {
                    Err(self.err("expected `)`"))
                }
            }
            Some(other) => Err(self.err(format!("unexpected token {other:?}"))),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

/// Parses a formula. Both dialects share the same grammar; the dialect
/// only records how the result should be interpreted.
pub fn parse_formula(text: &str, _dialect: Dialect) -> Result<Formula, ParseError> {
    let tokens = lex(text)?;
    let mut end_line = 1;
    let mut end_col = 1;
    for c in text.chars() {
        if c == '\n' {
            end_line += 1;
            end_col = 1;
        } else {
            end_col += 1;
        }
    }
    let mut parser = Parser { tokens, pos: 0, end_line, end_col };
    let f = parser.iff()?;
    if parser.peek().is_some() {
        return Err(parser.err("unexpected trailing input"));
    }
    Ok(f)
}
