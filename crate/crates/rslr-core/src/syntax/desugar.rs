//! Expansion of surface sugar into core terms.
//!
//! `if c then a else b` becomes a case on `c` with the 1-branch taking the
//! `then` side and both the 0- and empty-branches taking the `else` side.
//! `=` and `~` inline fixed library terms (string equality returning
//! "1"/"0", and bitwise negation); `1^n` becomes the literal of n ones.

use std::sync::OnceLock;

use super::ast::Term;
use super::parser::{parse_term_str, STerm, Surface};

/// Bitwise negation, `[]Str -> Str`. Recursion on the input prepends the
/// flipped head bit to the negated tail.
pub const NEG_SRC: &str = "\\x:[]Str. rec Str x of {\
 0 -> (\\w:[]Str. \\z:[#]Str. 1(z))\
 | 1 -> (\\w:[]Str. \\z:[#]Str. 0(z))\
 | e -> \"\"}";

/// String equality, `[]Str -> []Str -> Str`, returning \"1\" or \"0\".
/// Recursion on the first string builds a comparator consuming the second.
pub const EQ_SRC: &str = "\\x:[]Str. \\y:[]Str. (rec ([#]Str -> Str) x of {\
 0 -> (\\w:[]Str. \\r:[#]([#]Str -> Str). \\z:[#]Str. case Str z of {0 -> r (tail(z)) | 1 -> \"0\" | e -> \"0\"})\
 | 1 -> (\\w:[]Str. \\r:[#]([#]Str -> Str). \\z:[#]Str. case Str z of {0 -> \"0\" | 1 -> r (tail(z)) | e -> \"0\"})\
 | e -> (\\z:[#]Str. case Str z of {0 -> \"0\" | 1 -> \"0\" | e -> \"1\"})}) y";

fn parse_library(src: &str) -> Term {
    desugar(&parse_term_str(src).expect("library term parses"))
}

pub fn neg_term() -> &'static Term {
    static NEG: OnceLock<Term> = OnceLock::new();
    NEG.get_or_init(|| parse_library(NEG_SRC))
}

pub fn eq_term() -> &'static Term {
    static EQ: OnceLock<Term> = OnceLock::new();
    EQ.get_or_init(|| parse_library(EQ_SRC))
}

pub fn desugar(t: &STerm) -> Term {
    match &t.node {
        Surface::Var(x) => Term::Var(x.clone()),
        Surface::StrLit(s) => Term::StrLit(s.clone()),
        Surface::Rand => Term::Rand,
        Surface::Prepend0(s) => Term::Prepend0(Box::new(desugar(s))),
        Surface::Prepend1(s) => Term::Prepend1(Box::new(desugar(s))),
        Surface::Tail(s) => Term::Tail(Box::new(desugar(s))),
        Surface::App(f, a) => Term::app(desugar(f), desugar(a)),
        Surface::Case(an, s, t0, t1, te) => Term::case(
            an.clone(),
            desugar(s),
            desugar(t0),
            desugar(t1),
            desugar(te),
        ),
        Surface::Rec(an, s, t0, t1, te) => Term::rec(
            an.clone(),
            desugar(s),
            desugar(t0),
            desugar(t1),
            desugar(te),
        ),
        Surface::Lam(x, aspect, ty, body) => {
            Term::Lam(x.clone(), *aspect, ty.clone(), Box::new(desugar(body)))
        }
        Surface::If(an, cond, then_branch, else_branch) => {
            let e = desugar(else_branch);
            Term::case(an.clone(), desugar(cond), e.clone(), desugar(then_branch), e)
        }
        Surface::EqSugar(a, b) => {
            Term::app(Term::app(eq_term().clone(), desugar(a)), desugar(b))
        }
        Surface::NegSugar(a) => Term::app(neg_term().clone(), desugar(a)),
        Surface::Numeral(n) => Term::StrLit("1".repeat(*n)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::ast::Type;

    #[test]
    fn if_expands_to_case() {
        let t = desugar(&parse_term_str("if rand then \"1\" else \"0\"").unwrap());
        assert_eq!(
            t,
            Term::case(
                Type::Str,
                Term::Rand,
                Term::lit("0"),
                Term::lit("1"),
                Term::lit("0")
            )
        );
    }

    #[test]
    fn numerals_expand_to_ones() {
        assert_eq!(desugar(&parse_term_str("1^3").unwrap()), Term::lit("111"));
        assert_eq!(desugar(&parse_term_str("1^0").unwrap()), Term::lit(""));
    }

    #[test]
    fn library_terms_are_closed() {
        assert!(neg_term().is_closed());
        assert!(eq_term().is_closed());
    }
}
