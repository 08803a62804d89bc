//! Lexer and recursive-descent parser for the concrete syntax.
//!
//! Surface files look like:
//!
//! ```text
//! -- one definition per entry
//! let id : []Str -> Str = \x:[]Str. x ;
//! main = id ;
//! ```
//!
//! Sugar (`if`, `=`, `~`, numerals `1^n`, bare digits) survives parsing as
//! surface nodes and is expanded by the desugarer.

use std::fmt;

use serde::Serialize;

use super::ast::{Aspect, Type};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Span {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, thiserror::Error)]
#[error("{span}: {message}")]
pub struct ParseError {
    pub message: String,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Tok {
    Ident(String),
    Str(String),
    Digit(char),
    /// A digit run of length >= 2, kept verbatim (leading zeros matter for
    /// bare binary strings in view sets).
    Digits(String),
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Hash,
    Backslash,
    Colon,
    Dot,
    Semi,
    Comma,
    Arrow,
    Pipe,
    Eq,
    Tilde,
    Caret,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Str(s) => write!(f, "\"{s}\""),
            Tok::Digit(c) => write!(f, "`{c}`"),
            Tok::Int(n) => write!(f, "`{n}`"),
            Tok::LParen => write!(f, "`(`"),
            Tok::RParen => write!(f, "`)`"),
            Tok::LBrace => write!(f, "`{{`"),
            Tok::RBrace => write!(f, "`}}`"),
            Tok::LBracket => write!(f, "`[`"),
            Tok::RBracket => write!(f, "`]`"),
            Tok::Hash => write!(f, "`#`"),
            Tok::Backslash => write!(f, "`\\`"),
            Tok::Colon => write!(f, "`:`"),
            Tok::Dot => write!(f, "`.`"),
            Tok::Semi => write!(f, "`;`"),
            Tok::Comma => write!(f, "`,`"),
            Tok::Arrow => write!(f, "`->`"),
            Tok::Pipe => write!(f, "`|`"),
            Tok::Eq => write!(f, "`=`"),
            Tok::Tilde => write!(f, "`~`"),
            Tok::Caret => write!(f, "`^`"),
        }
    }
}

pub fn lex(src: &str) -> Result<Vec<(Tok, Span)>, ParseError> {
    let mut out = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut chars = src.chars().peekable();

    macro_rules! bump {
        () => {{
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                col = 1;
            } else if c.is_some() {
                col += 1;
            }
            c
        }};
    }

    while let Some(&c) = chars.peek() {
        let span = Span { line, col };
        match c {
            ' ' | '\t' | '\r' | '\n' => {
                bump!();
            }
            '-' => {
                bump!();
                match chars.peek() {
                    Some('-') => {
                        while let Some(&c2) = chars.peek() {
                            if c2 == '\n' {
                                break;
                            }
                            bump!();
                        }
                    }
                    Some('>') => {
                        bump!();
                        out.push((Tok::Arrow, span));
                    }
                    _ => {
                        return Err(ParseError {
                            message: "expected `--` comment or `->`".into(),
                            span,
                        })
                    }
                }
            }
            '"' => {
                bump!();
                let mut s = String::new();
                loop {
                    match bump!() {
                        Some('"') => break,
                        Some(c2 @ ('0' | '1')) => s.push(c2),
                        Some(c2) => {
                            return Err(ParseError {
                                message: format!(
                                    "string literals may only contain 0 and 1, found {c2:?}"
                                ),
                                span,
                            })
                        }
                        None => {
                            return Err(ParseError {
                                message: "unterminated string literal".into(),
                                span,
                            })
                        }
                    }
                }
                out.push((Tok::Str(s), span));
            }
            '0'..='9' => {
                let mut digits = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_digit() {
                        digits.push(d);
                        bump!();
                    } else {
                        break;
                    }
                }
                if digits.len() == 1 && (digits == "0" || digits == "1") {
                    out.push((Tok::Digit(digits.chars().next().unwrap()), span));
                } else {
                    let n: usize = digits.parse().map_err(|_| ParseError {
                        message: format!("integer literal `{digits}` out of range"),
                        span,
                    })?;
                    out.push((Tok::Int(n), span));
                }
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let mut s = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_alphanumeric() || d == '_' || d == '\'' {
                        s.push(d);
                        bump!();
                    } else {
                        break;
                    }
                }
                out.push((Tok::Ident(s), span));
            }
            _ => {
                bump!();
                let tok = match c {
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    '{' => Tok::LBrace,
                    '}' => Tok::RBrace,
                    '[' => Tok::LBracket,
                    ']' => Tok::RBracket,
                    '#' => Tok::Hash,
                    '\\' | 'λ' => Tok::Backslash,
                    ':' => Tok::Colon,
                    '.' => Tok::Dot,
                    ';' => Tok::Semi,
                    ',' => Tok::Comma,
                    '|' => Tok::Pipe,
                    '=' => Tok::Eq,
                    '~' | '¬' => Tok::Tilde,
                    '^' => Tok::Caret,
                    other => {
                        return Err(ParseError {
                            message: format!("unexpected character {other:?}"),
                            span,
                        })
                    }
                };
                out.push((tok, span));
            }
        }
    }
    Ok(out)
}

/// Surface terms: the core constructors plus sugar nodes.
#[derive(Debug, Clone, PartialEq)]
pub enum Surface {
    Var(String),
    StrLit(String),
    Rand,
    Prepend0(Box<STerm>),
    Prepend1(Box<STerm>),
    Tail(Box<STerm>),
    App(Box<STerm>, Box<STerm>),
    Case(Type, Box<STerm>, Box<STerm>, Box<STerm>, Box<STerm>),
    Rec(Type, Box<STerm>, Box<STerm>, Box<STerm>, Box<STerm>),
    Lam(String, Aspect, Type, Box<STerm>),
    If(Type, Box<STerm>, Box<STerm>, Box<STerm>),
    EqSugar(Box<STerm>, Box<STerm>),
    NegSugar(Box<STerm>),
    /// `1^n`: the string of n ones.
    Numeral(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct STerm {
    pub node: Surface,
    pub span: Span,
}

impl STerm {
    fn new(node: Surface, span: Span) -> Self {
        STerm { node, span }
    }
}

#[derive(Debug, Clone)]
pub struct SurfaceDef {
    pub name: String,
    pub declared: Type,
    pub body: STerm,
    pub span: Span,
}

#[derive(Debug, Clone)]
pub struct SurfaceProgram {
    pub defs: Vec<SurfaceDef>,
    pub main: Option<(String, Span)>,
}

pub struct Parser {
    toks: Vec<(Tok, Span)>,
    pos: usize,
}

impl Parser {
    pub fn new(src: &str) -> Result<Self, ParseError> {
        Ok(Parser {
            toks: lex(src)?,
            pos: 0,
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn peek2(&self) -> Option<&Tok> {
        self.toks.get(self.pos + 1).map(|(t, _)| t)
    }

    fn span(&self) -> Span {
        self.toks
            .get(self.pos)
            .map(|(_, s)| *s)
            .unwrap_or_else(|| {
                self.toks
                    .last()
                    .map(|(_, s)| *s)
                    .unwrap_or(Span { line: 1, col: 1 })
            })
    }

    fn next(&mut self) -> Option<(Tok, Span)> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            message: message.into(),
            span: self.span(),
        })
    }

    fn expect(&mut self, tok: Tok) -> Result<Span, ParseError> {
        match self.next() {
            Some((t, s)) if t == tok => Ok(s),
            Some((t, s)) => Err(ParseError {
                message: format!("expected {tok}, found {t}"),
                span: s,
            }),
            None => self.err(format!("expected {tok}, found end of input")),
        }
    }

    fn expect_ident(&mut self) -> Result<(String, Span), ParseError> {
        match self.next() {
            Some((Tok::Ident(s), sp)) => Ok((s, sp)),
            Some((t, s)) => Err(ParseError {
                message: format!("expected identifier, found {t}"),
                span: s,
            }),
            None => self.err("expected identifier, found end of input"),
        }
    }

    fn eat_keyword(&mut self, kw: &str) -> bool {
        if let Some(Tok::Ident(s)) = self.peek() {
            if s == kw {
                self.pos += 1;
                return true;
            }
        }
        false
    }

    fn expect_keyword(&mut self, kw: &str) -> Result<Span, ParseError> {
        let sp = self.span();
        if self.eat_keyword(kw) {
            Ok(sp)
        } else {
            self.err(format!("expected `{kw}`"))
        }
    }

    // ---- types ----

    fn parse_aspect(&mut self) -> Result<Aspect, ParseError> {
        self.expect(Tok::LBracket)?;
        let aspect = if matches!(self.peek(), Some(Tok::Hash)) {
            self.next();
            Aspect::Fixed
        } else {
            Aspect::Poly
        };
        self.expect(Tok::RBracket)?;
        Ok(aspect)
    }

    fn parse_type_atom(&mut self) -> Result<Type, ParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) if s == "Str" => {
                self.next();
                Ok(Type::Str)
            }
            Some(Tok::LParen) => {
                self.next();
                let ty = self.parse_type()?;
                self.expect(Tok::RParen)?;
                Ok(ty)
            }
            _ => self.err("expected a type (`Str`, `[a]T -> T`, or parentheses)"),
        }
    }

    pub fn parse_type(&mut self) -> Result<Type, ParseError> {
        if matches!(self.peek(), Some(Tok::LBracket)) {
            let aspect = self.parse_aspect()?;
            let arg = self.parse_type_atom()?;
            self.expect(Tok::Arrow)?;
            let res = self.parse_type()?;
            Ok(Type::arrow(aspect, arg, res))
        } else {
            let ty = self.parse_type_atom()?;
            if matches!(self.peek(), Some(Tok::Arrow)) {
                return self.err("arrow types need an aspect: write `[]A -> B` or `[#]A -> B`");
            }
            Ok(ty)
        }
    }

    // ---- terms ----

    pub fn parse_term(&mut self) -> Result<STerm, ParseError> {
        match self.peek() {
            Some(Tok::Backslash) => self.parse_lambda(),
            Some(Tok::Ident(s)) if s == "if" => self.parse_if(),
            _ => self.parse_cmp(),
        }
    }

    fn parse_lambda(&mut self) -> Result<STerm, ParseError> {
        let span = self.expect(Tok::Backslash)?;
        let (name, _) = self.expect_ident()?;
        self.expect(Tok::Colon)?;
        let aspect = self.parse_aspect()?;
        let ty = {
            // The binder annotation is a full type; arrows may be written
            // bare (`\f:[#][]Str -> Str. t`) or parenthesized.
            if matches!(self.peek(), Some(Tok::LBracket)) {
                let a2 = self.parse_aspect()?;
                let arg = self.parse_type_atom()?;
                self.expect(Tok::Arrow)?;
                let res = self.parse_type()?;
                Type::arrow(a2, arg, res)
            } else {
                let atom = self.parse_type_atom()?;
                if matches!(self.peek(), Some(Tok::Arrow)) {
                    return self.err("arrow types need an aspect annotation");
                }
                atom
            }
        };
        self.expect(Tok::Dot)?;
        let body = self.parse_term()?;
        Ok(STerm::new(Surface::Lam(name, aspect, ty, Box::new(body)), span))
    }

    fn parse_if(&mut self) -> Result<STerm, ParseError> {
        let span = self.expect_keyword("if")?;
        let annot = if matches!(self.peek(), Some(Tok::LBracket)) {
            self.expect(Tok::LBracket)?;
            let ty = self.parse_type()?;
            self.expect(Tok::RBracket)?;
            ty
        } else {
            Type::Str
        };
        let cond = self.parse_term()?;
        self.expect_keyword("then")?;
        let then_branch = self.parse_term()?;
        self.expect_keyword("else")?;
        let else_branch = self.parse_term()?;
        Ok(STerm::new(
            Surface::If(
                annot,
                Box::new(cond),
                Box::new(then_branch),
                Box::new(else_branch),
            ),
            span,
        ))
    }

    fn parse_cmp(&mut self) -> Result<STerm, ParseError> {
        let lhs = self.parse_app()?;
        if matches!(self.peek(), Some(Tok::Eq)) {
            let span = self.span();
            self.next();
            let rhs = self.parse_app()?;
            return Ok(STerm::new(Surface::EqSugar(Box::new(lhs), Box::new(rhs)), span));
        }
        Ok(lhs)
    }

    fn starts_atom(&self) -> bool {
        match self.peek() {
            Some(Tok::Ident(s)) => !matches!(
                s.as_str(),
                "of" | "then" | "else" | "let" | "main" | "if"
            ),
            Some(Tok::Str(_) | Tok::Digit(_) | Tok::LParen | Tok::Tilde | Tok::Backslash) => true,
            _ => false,
        }
    }

    fn parse_app(&mut self) -> Result<STerm, ParseError> {
        let mut head = self.parse_prefix()?;
        while self.starts_atom() {
            let arg = self.parse_prefix()?;
            let span = head.span;
            head = STerm::new(Surface::App(Box::new(head), Box::new(arg)), span);
        }
        Ok(head)
    }

    fn parse_prefix(&mut self) -> Result<STerm, ParseError> {
        if matches!(self.peek(), Some(Tok::Tilde)) {
            let span = self.span();
            self.next();
            let inner = self.parse_prefix()?;
            return Ok(STerm::new(Surface::NegSugar(Box::new(inner)), span));
        }
        if matches!(self.peek(), Some(Tok::Backslash)) {
            // Lambdas in argument position must be parenthesized, but a
            // trailing lambda is convenient: `f \x:[]Str. x` parses as the
            // lambda being the final argument.
            return self.parse_lambda();
        }
        self.parse_atom()
    }

    fn parse_atom(&mut self) -> Result<STerm, ParseError> {
        let span = self.span();
        match self.peek().cloned() {
            Some(Tok::Str(s)) => {
                self.next();
                Ok(STerm::new(Surface::StrLit(s), span))
            }
            Some(Tok::Digit(d)) => {
                self.next();
                match self.peek() {
                    Some(Tok::LParen) => {
                        self.next();
                        let inner = self.parse_term()?;
                        self.expect(Tok::RParen)?;
                        let node = if d == '0' {
                            Surface::Prepend0(Box::new(inner))
                        } else {
                            Surface::Prepend1(Box::new(inner))
                        };
                        Ok(STerm::new(node, span))
                    }
                    Some(Tok::Caret) if d == '1' => {
                        self.next();
                        let n = match self.next() {
                            Some((Tok::Int(n), _)) => n,
                            Some((Tok::Digit(c), _)) => c.to_digit(10).unwrap() as usize,
                            _ => return self.err("expected a count after `1^`"),
                        };
                        Ok(STerm::new(Surface::Numeral(n), span))
                    }
                    _ => Ok(STerm::new(Surface::StrLit(d.to_string()), span)),
                }
            }
            Some(Tok::LParen) => {
                self.next();
                let t = self.parse_term()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            Some(Tok::Ident(s)) => match s.as_str() {
                "rand" => {
                    self.next();
                    Ok(STerm::new(Surface::Rand, span))
                }
                "tail" => {
                    self.next();
                    self.expect(Tok::LParen)?;
                    let inner = self.parse_term()?;
                    self.expect(Tok::RParen)?;
                    Ok(STerm::new(Surface::Tail(Box::new(inner)), span))
                }
                "case" | "rec" => {
                    self.next();
                    let annot = self.parse_type()?;
                    let scrut = self.parse_app()?;
                    self.expect_keyword("of")?;
                    self.expect(Tok::LBrace)?;
                    match self.next() {
                        Some((Tok::Digit('0'), _)) => {}
                        _ => return self.err("expected branch label `0`"),
                    }
                    self.expect(Tok::Arrow)?;
                    let t0 = self.parse_term()?;
                    self.expect(Tok::Pipe)?;
                    match self.next() {
                        Some((Tok::Digit('1'), _)) => {}
                        _ => return self.err("expected branch label `1`"),
                    }
                    self.expect(Tok::Arrow)?;
                    let t1 = self.parse_term()?;
                    self.expect(Tok::Pipe)?;
                    self.expect_keyword("e")?;
                    self.expect(Tok::Arrow)?;
                    let te = self.parse_term()?;
                    self.expect(Tok::RBrace)?;
                    let node = if s == "case" {
                        Surface::Case(
                            annot,
                            Box::new(scrut),
                            Box::new(t0),
                            Box::new(t1),
                            Box::new(te),
                        )
                    } else {
                        Surface::Rec(
                            annot,
                            Box::new(scrut),
                            Box::new(t0),
                            Box::new(t1),
                            Box::new(te),
                        )
                    };
                    Ok(STerm::new(node, span))
                }
                "of" | "then" | "else" | "let" | "main" | "if" => {
                    self.err(format!("unexpected keyword `{s}`"))
                }
                _ => {
                    self.next();
                    Ok(STerm::new(Surface::Var(s), span))
                }
            },
            Some(t) => self.err(format!("unexpected {t}")),
            None => self.err("unexpected end of input"),
        }
    }

    // ---- programs ----

    pub fn parse_program(&mut self) -> Result<SurfaceProgram, ParseError> {
        let mut defs = Vec::new();
        let mut main = None;
        while self.peek().is_some() {
            let span = self.span();
            if self.eat_keyword("let") {
                let (name, _) = self.expect_ident()?;
                self.expect(Tok::Colon)?;
                let declared = self.parse_type()?;
                self.expect(Tok::Eq)?;
                let body = self.parse_term()?;
                self.expect(Tok::Semi)?;
                defs.push(SurfaceDef {
                    name,
                    declared,
                    body,
                    span,
                });
            } else if self.eat_keyword("main") {
                self.expect(Tok::Eq)?;
                let (name, nspan) = self.expect_ident()?;
                self.expect(Tok::Semi)?;
                if main.is_some() {
                    return Err(ParseError {
                        message: "duplicate `main` entry".into(),
                        span,
                    });
                }
                main = Some((name, nspan));
            } else {
                return self.err("expected `let` or `main`");
            }
        }
        Ok(SurfaceProgram { defs, main })
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }
}

/// Parse a single term from a string, requiring all input to be consumed.
pub fn parse_term_str(src: &str) -> Result<STerm, ParseError> {
    let mut p = Parser::new(src)?;
    let t = p.parse_term()?;
    if !p.at_end() {
        return Err(ParseError {
            message: "trailing input after term".into(),
            span: p.span(),
        });
    }
    Ok(t)
}

pub fn parse_type_str(src: &str) -> Result<Type, ParseError> {
    let mut p = Parser::new(src)?;
    let ty = p.parse_type()?;
    if !p.at_end() {
        return Err(ParseError {
            message: "trailing input after type".into(),
            span: p.span(),
        });
    }
    Ok(ty)
}

pub fn parse_program_str(src: &str) -> Result<SurfaceProgram, ParseError> {
    Parser::new(src)?.parse_program()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keywords_and_atoms() {
        assert!(matches!(parse_term_str("rand").unwrap().node, Surface::Rand));
        assert!(matches!(
            parse_term_str("\"010\"").unwrap().node,
            Surface::StrLit(s) if s == "010"
        ));
    }

    #[test]
    fn lambda_with_aspect() {
        let t = parse_term_str("\\x:[]Str. x").unwrap();
        match t.node {
            Surface::Lam(name, aspect, ty, body) => {
                assert_eq!(name, "x");
                assert_eq!(aspect, Aspect::Poly);
                assert_eq!(ty, Type::Str);
                assert!(matches!(body.node, Surface::Var(v) if v == "x"));
            }
            other => panic!("unexpected parse: {other:?}"),
        }
    }

    #[test]
    fn arrow_types_are_right_associative() {
        let ty = parse_type_str("[]Str -> [#]Str -> Str").unwrap();
        assert_eq!(
            ty,
            Type::arrow(
                Aspect::Poly,
                Type::Str,
                Type::arrow(Aspect::Fixed, Type::Str, Type::Str)
            )
        );
    }

    #[test]
    fn numeral_and_bare_digits() {
        assert!(matches!(
            parse_term_str("1^3").unwrap().node,
            Surface::Numeral(3)
        ));
        assert!(matches!(
            parse_term_str("0").unwrap().node,
            Surface::StrLit(s) if s == "0"
        ));
    }

    #[test]
    fn application_is_left_associative() {
        let t = parse_term_str("f a b").unwrap();
        match t.node {
            Surface::App(fa, b) => {
                assert!(matches!(b.node, Surface::Var(v) if v == "b"));
                assert!(matches!(fa.node, Surface::App(_, _)));
            }
            other => panic!("unexpected parse: {other:?}"),
        }
    }

    #[test]
    fn case_with_annotation() {
        let t = parse_term_str("case Str rand of {0 -> \"0\" | 1 -> \"1\" | e -> \"\"}").unwrap();
        assert!(matches!(t.node, Surface::Case(Type::Str, ..)));
    }

    #[test]
    fn syntax_error_carries_position() {
        let err = parse_term_str("case Str rand of {0 ->").unwrap_err();
        assert_eq!(err.span.line, 1);
        assert!(err.span.col > 1);
    }

    #[test]
    fn parse_small_program() {
        let p = parse_program_str("let id : []Str -> Str = \\x:[]Str. x ;\nmain = id ;").unwrap();
        assert_eq!(p.defs.len(), 1);
        assert_eq!(p.main.as_ref().unwrap().0, "id");
    }
}
