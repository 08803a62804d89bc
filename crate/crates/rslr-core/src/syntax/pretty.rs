//! Pretty-printer for core terms. Output re-parses to an alpha-equivalent
//! term; the printer emits single-line concrete syntax.

use std::fmt::Write;

use super::ast::{Term, Type};
use super::context::CtxTerm;

#[derive(Clone, Copy, PartialEq)]
enum Pos {
    Top,
    AppFun,
    AppArg,
    Scrut,
}

pub fn pretty(t: &Term) -> String {
    let mut out = String::new();
    go(t, Pos::Top, &mut out);
    out
}

pub fn pretty_type(ty: &Type) -> String {
    ty.to_string()
}

fn atom_type(ty: &Type) -> String {
    if ty.is_arrow() {
        format!("({ty})")
    } else {
        ty.to_string()
    }
}

fn is_atom(t: &Term) -> bool {
    matches!(
        t,
        Term::Var(_) | Term::StrLit(_) | Term::Rand | Term::Prepend0(_) | Term::Prepend1(_) | Term::Tail(_)
    )
}

fn go(t: &Term, pos: Pos, out: &mut String) {
    match t {
        Term::Var(x) => out.push_str(x),
        Term::StrLit(s) => {
            let _ = write!(out, "\"{s}\"");
        }
        Term::Rand => out.push_str("rand"),
        Term::Prepend0(s) => {
            out.push_str("0(");
            go(s, Pos::Top, out);
            out.push(')');
        }
        Term::Prepend1(s) => {
            out.push_str("1(");
            go(s, Pos::Top, out);
            out.push(')');
        }
        Term::Tail(s) => {
            out.push_str("tail(");
            go(s, Pos::Top, out);
            out.push(')');
        }
        Term::App(f, a) => {
            let parens = pos == Pos::AppArg || pos == Pos::Scrut;
            if parens {
                out.push('(');
            }
            go(f, Pos::AppFun, out);
            out.push(' ');
            go(a, Pos::AppArg, out);
            if parens {
                out.push(')');
            }
        }
        Term::Lam(x, aspect, ty, body) => {
            let parens = pos != Pos::Top;
            if parens {
                out.push('(');
            }
            let _ = write!(out, "\\{x}:{aspect}{}. ", atom_type(ty));
            go(body, Pos::Top, out);
            if parens {
                out.push(')');
            }
        }
        Term::Case(an, s, t0, t1, te) => case_like("case", an, s, t0, t1, te, pos, out),
        Term::Rec(an, s, t0, t1, te) => case_like("rec", an, s, t0, t1, te, pos, out),
    }
}

#[allow(clippy::too_many_arguments)]
fn case_like(
    kw: &str,
    an: &Type,
    s: &Term,
    t0: &Term,
    t1: &Term,
    te: &Term,
    pos: Pos,
    out: &mut String,
) {
    let parens = pos != Pos::Top;
    if parens {
        out.push('(');
    }
    let _ = write!(out, "{kw} {} ", atom_type(an));
    if is_atom(s) {
        go(s, Pos::Top, out);
    } else {
        out.push('(');
        go(s, Pos::Top, out);
        out.push(')');
    }
    out.push_str(" of {0 -> ");
    go(t0, Pos::Top, out);
    out.push_str(" | 1 -> ");
    go(t1, Pos::Top, out);
    out.push_str(" | e -> ");
    go(te, Pos::Top, out);
    out.push('}');
    if parens {
        out.push(')');
    }
}

/// Render a context with `[.]` marking the hole; used in reports only (the
/// hole marker is not part of the input grammar).
pub fn pretty_ctx(c: &CtxTerm) -> String {
    match c {
        CtxTerm::Term(t) => pretty(t),
        CtxTerm::Hole => "[.]".to_string(),
        CtxTerm::Lam(x, aspect, ty, b) => {
            format!("\\{x}:{aspect}{}. {}", atom_type(ty), pretty_ctx(b))
        }
        CtxTerm::AppL(c, t) => format!("({}) ({})", pretty_ctx(c), pretty(t)),
        CtxTerm::AppR(t, c) => format!("({}) ({})", pretty(t), pretty_ctx(c)),
        CtxTerm::Prepend0(c) => format!("0({})", pretty_ctx(c)),
        CtxTerm::Prepend1(c) => format!("1({})", pretty_ctx(c)),
        CtxTerm::Tail(c) => format!("tail({})", pretty_ctx(c)),
        CtxTerm::CaseScrut(an, c, t0, t1, te) => format!(
            "case {} ({}) of {{0 -> {} | 1 -> {} | e -> {}}}",
            atom_type(an),
            pretty_ctx(c),
            pretty(t0),
            pretty(t1),
            pretty(te)
        ),
        CtxTerm::CaseBranch(an, s, c0, c1, ce) => format!(
            "case {} ({}) of {{0 -> {} | 1 -> {} | e -> {}}}",
            atom_type(an),
            pretty(s),
            pretty_ctx(c0),
            pretty_ctx(c1),
            pretty_ctx(ce)
        ),
        CtxTerm::RecScrut(an, c, t0, t1, te) => format!(
            "rec {} ({}) of {{0 -> {} | 1 -> {} | e -> {}}}",
            atom_type(an),
            pretty_ctx(c),
            pretty(t0),
            pretty(t1),
            pretty(te)
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::ast::Aspect;
    use crate::syntax::desugar::desugar;
    use crate::syntax::parser::parse_term_str;

    fn roundtrip(t: &Term) {
        let printed = pretty(t);
        let reparsed = desugar(&parse_term_str(&printed).unwrap_or_else(|e| {
            panic!("pretty output failed to parse: {printed}: {e}");
        }));
        assert_eq!(&reparsed, t, "round-trip changed term: {printed}");
    }

    #[test]
    fn prints_keywords() {
        assert_eq!(pretty(&Term::Rand), "rand");
        assert_eq!(
            pretty(&Term::lam("x", Aspect::Poly, Type::Str, Term::var("x"))),
            "\\x:[]Str. x"
        );
    }

    #[test]
    fn roundtrips_nested_terms() {
        let t = Term::app(
            Term::lam(
                "x",
                Aspect::Fixed,
                Type::arrow(Aspect::Poly, Type::Str, Type::Str),
                Term::app(Term::var("x"), Term::lit("01")),
            ),
            Term::lam("y", Aspect::Poly, Type::Str, Term::Prepend0(Box::new(Term::var("y")))),
        );
        roundtrip(&t);
        let c = Term::case(
            Type::Str,
            Term::app(Term::var("f"), Term::lit("")),
            Term::Rand,
            Term::Tail(Box::new(Term::lit("10"))),
            Term::lit(""),
        );
        roundtrip(&c);
    }
}
