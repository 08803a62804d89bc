//! Traces and their acceptance probabilities on term distributions.
//!
//! A trace is a sequence of `pass(v)` actions followed by at most one
//! terminal observation. Observations come in three flavors — a single
//! string, a finite string set, or a distinguisher term — and all reduce
//! internally to a weighting function from strings to rationals.

use std::collections::BTreeSet;

use crate::dist::{rat_one, Dist, Rat};
use crate::eval::{eval, normalize, string_dist, EvalError, StepBudget};
use crate::syntax::ast::{Term, Type};
use crate::syntax::parser::{ParseError, Parser, Span, Tok};
use crate::syntax::pretty::pretty;
use crate::syntax::program::Program;
use crate::types::{subtype, typecheck, TypeError, TypingContext};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum TraceAction {
    /// Pass a closed value to the function under test.
    Pass(Term),
    /// Observe one string.
    ViewStr(String),
    /// Observe a finite, duplicate-free string set.
    ViewSet(BTreeSet<String>),
    /// Observe through a distinguisher: a closed term of string-to-string
    /// function type; the weight of an outcome is the distinguisher's
    /// probability of answering the empty string.
    ViewDist(Term),
}

impl TraceAction {
    pub fn is_view(&self) -> bool {
        !matches!(self, TraceAction::Pass(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Trace {
    actions: Vec<TraceAction>,
}

#[derive(Debug, Clone, thiserror::Error, PartialEq)]
pub enum TraceError {
    #[error("malformed trace: {0}")]
    Malformed(String),
    #[error("trace is not compatible with type `{ty}`: {reason}")]
    Incompatible { ty: String, reason: String },
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("distinguisher does not have string-to-string type: {0}")]
    BadDistinguisher(TypeError),
}

impl Trace {
    /// Build a trace, enforcing the shape invariant: passes first, at most
    /// one view, and only in terminal position. Pass payloads must be
    /// values; set views nonempty; distinguishers string-to-string.
    pub fn new(actions: Vec<TraceAction>) -> Result<Trace, TraceError> {
        for (i, a) in actions.iter().enumerate() {
            match a {
                TraceAction::Pass(v) => {
                    if !v.is_value() {
                        return Err(TraceError::Malformed(format!(
                            "pass payload `{}` is not a value",
                            pretty(v)
                        )));
                    }
                    if !v.is_closed() {
                        return Err(TraceError::Malformed(format!(
                            "pass payload `{}` is not closed",
                            pretty(v)
                        )));
                    }
                }
                TraceAction::ViewSet(m) => {
                    if m.is_empty() {
                        return Err(TraceError::Malformed("empty view set".into()));
                    }
                    if i + 1 != actions.len() {
                        return Err(TraceError::Malformed("view before end of trace".into()));
                    }
                }
                TraceAction::ViewStr(_) => {
                    if i + 1 != actions.len() {
                        return Err(TraceError::Malformed("view before end of trace".into()));
                    }
                }
                TraceAction::ViewDist(d) => {
                    if i + 1 != actions.len() {
                        return Err(TraceError::Malformed("view before end of trace".into()));
                    }
                    check_distinguisher(d)?;
                }
            }
        }
        Ok(Trace { actions })
    }

    pub fn actions(&self) -> &[TraceAction] {
        &self.actions
    }

    pub fn passes(&self) -> impl Iterator<Item = &Term> {
        self.actions.iter().filter_map(|a| match a {
            TraceAction::Pass(v) => Some(v),
            _ => None,
        })
    }

    pub fn view(&self) -> Option<&TraceAction> {
        self.actions.last().filter(|a| a.is_view())
    }

    pub fn pass_count(&self) -> usize {
        self.passes().count()
    }
}

pub fn check_distinguisher(d: &Term) -> Result<(), TraceError> {
    let ty = typecheck(&TypingContext::new(), d).map_err(TraceError::BadDistinguisher)?;
    match ty {
        Type::Arrow(_, arg, res) if *arg == Type::Str && *res == Type::Str => Ok(()),
        other => Err(TraceError::Malformed(format!(
            "distinguisher has type `{other}`, expected an arrow from Str to Str"
        ))),
    }
}

/// Compatibility of a trace with a type: at `Str` the trace is exactly one
/// view; at an arrow it is a pass whose payload has the argument type,
/// followed by a trace compatible with the result.
pub fn compatible(tr: &Trace, ty: &Type) -> bool {
    compatible_actions(tr.actions(), ty)
}

fn compatible_actions(actions: &[TraceAction], ty: &Type) -> bool {
    match ty {
        Type::Str => actions.len() == 1 && actions[0].is_view(),
        Type::Arrow(_, arg, res) => match actions.split_first() {
            Some((TraceAction::Pass(v), rest)) => {
                let vt = match typecheck(&TypingContext::new(), v) {
                    Ok(t) => t,
                    Err(_) => return false,
                };
                subtype(&vt, arg) && compatible_actions(rest, res)
            }
            _ => false,
        },
    }
}

/// A prefix (pass-only) trace is structurally valid for a type when each
/// pass payload matches the successive argument types.
pub fn prefix_compatible(tr: &Trace, ty: &Type) -> bool {
    if tr.view().is_some() {
        return compatible(tr, ty);
    }
    let mut ty = ty.clone();
    for v in tr.passes() {
        let Type::Arrow(_, arg, res) = ty else {
            return false;
        };
        match typecheck(&TypingContext::new(), v) {
            Ok(vt) if subtype(&vt, &arg) => ty = *res,
            _ => return false,
        }
    }
    true
}

/// Run the pass actions of a trace over a term distribution: normalize to
/// function values, substitute the passed value, repeat; the result is
/// normalized.
pub fn run_prefix(
    td: &Dist<Term>,
    passes: &[&Term],
    budget: StepBudget,
) -> Result<Dist<Term>, TraceError> {
    let mut cur = normalize(td, budget)?;
    for v in passes {
        let mut pairs = Vec::new();
        for (t, p) in cur.iter() {
            let Term::Lam(x, _, _, body) = t else {
                return Err(TraceError::Incompatible {
                    ty: "Str".into(),
                    reason: format!("pass action on non-function value `{}`", pretty(t)),
                });
            };
            pairs.push((body.subst(x, v), p.clone()));
        }
        cur = normalize(&Dist::from_entries(pairs), budget)?;
    }
    Ok(cur)
}

/// The weight an observation assigns to a string outcome.
pub fn view_weight(view: &TraceAction, m: &str, budget: StepBudget) -> Result<Rat, TraceError> {
    match view {
        TraceAction::ViewStr(s) => Ok(if s == m { rat_one() } else { crate::dist::rat_zero() }),
        TraceAction::ViewSet(set) => Ok(if set.contains(m) {
            rat_one()
        } else {
            crate::dist::rat_zero()
        }),
        TraceAction::ViewDist(d) => {
            let out = eval(&Term::app(d.clone(), Term::lit(m)), budget)?;
            Ok(string_dist(&out)?.mass(&String::new()))
        }
        TraceAction::Pass(_) => Err(TraceError::Malformed("pass is not a view".into())),
    }
}

/// Acceptance probability of a trace on a term distribution. A trace with
/// no terminal view accepts with probability one (after checking that its
/// passes run).
pub fn prob(td: &Dist<Term>, tr: &Trace, budget: StepBudget) -> Result<Rat, TraceError> {
    let passes: Vec<&Term> = tr.passes().collect();
    let after = run_prefix(td, &passes, budget)?;
    let Some(view) = tr.view() else {
        return Ok(rat_one());
    };
    let strings = string_dist(&after).map_err(|_| TraceError::Incompatible {
        ty: "arrow".into(),
        reason: "view action on a function-valued distribution".into(),
    })?;
    let mut acc = crate::dist::rat_zero();
    for (m, p) in strings.iter() {
        acc += p * view_weight(view, m, budget)?;
    }
    Ok(acc)
}

/// Probability for a single closed term.
pub fn prob_term(t: &Term, tr: &Trace, budget: StepBudget) -> Result<Rat, TraceError> {
    prob(&Dist::point(t.clone()), tr, budget)
}

// ---- trace literal syntax ----
//
// `pass("01");view("0")`, `view({00,11})`, `view(dist NAME)`; pass payloads
// may be arbitrary closed value terms in the scope of a program, e.g.
// `pass(\x:[]Str. x)` or `pass(id)`.

pub fn parse_trace(src: &str, scope: &Program) -> Result<Trace, TraceError> {
    let mut p = Parser::new(src).map_err(parse_to_trace_err)?;
    let mut actions = Vec::new();
    loop {
        let t = p.next_tok().ok_or_else(|| {
            TraceError::Malformed("expected `pass(...)` or `view(...)`".into())
        })?;
        match t {
            (Tok::Ident(kw), _) if kw == "pass" => {
                let inner = p.parenthesized_source()?;
                let term = scope
                    .term_in_scope(&inner)
                    .map_err(|e| TraceError::Malformed(e.to_string()))?;
                actions.push(TraceAction::Pass(term));
            }
            (Tok::Ident(kw), _) if kw == "view" => {
                let action = parse_view(&mut p, scope)?;
                actions.push(action);
            }
            (tok, _) => {
                return Err(TraceError::Malformed(format!(
                    "expected `pass` or `view`, found {tok}"
                )))
            }
        }
        if p.at_end() {
            break;
        }
        p.expect_tok(Tok::Semi)?;
        if p.at_end() {
            break;
        }
    }
    Trace::new(actions)
}

fn parse_view(p: &mut Parser, scope: &Program) -> Result<TraceAction, TraceError> {
    p.expect_tok(Tok::LParen)?;
    let action = match p.peek_tok() {
        Some(Tok::Str(_)) => {
            let Some((Tok::Str(s), _)) = p.next_tok() else {
                unreachable!()
            };
            TraceAction::ViewStr(s)
        }
        Some(Tok::LBrace) => {
            p.next_tok();
            let mut set = BTreeSet::new();
            loop {
                match p.next_tok() {
                    Some((Tok::Str(s), _)) => {
                        set.insert(s);
                    }
                    Some((Tok::Digit(d), _)) => {
                        // Bare binary strings: glue successive digit tokens.
                        let mut s = d.to_string();
                        while let Some(Tok::Digit(d2) | Tok::Int(_)) = p.peek_tok() {
                            match (d2, p.peek_tok()) {
                                _ => {}
                            }
                            if let Some((Tok::Digit(d2), _)) = p.next_tok() {
                                s.push(d2);
                            }
                        }
                        set.insert(s);
                    }
                    Some((Tok::Int(n), _)) => {
                        // A digit run like `00` or `11` lexes as an integer
                        // token; recover its binary spelling.
                        set.insert(binary_spelling(n)?);
                    }
                    Some((Tok::Ident(e), _)) if e == "e" => {
                        set.insert(String::new());
                    }
                    Some((tok, _)) => {
                        return Err(TraceError::Malformed(format!(
                            "unexpected {tok} in view set"
                        )))
                    }
                    None => return Err(TraceError::Malformed("unterminated view set".into())),
                }
                match p.next_tok() {
                    Some((Tok::Comma, _)) => continue,
                    Some((Tok::RBrace, _)) => break,
                    _ => return Err(TraceError::Malformed("expected `,` or `}` in set".into())),
                }
            }
            TraceAction::ViewSet(set)
        }
        Some(Tok::Ident(kw)) if kw == "dist" => {
            p.next_tok();
            let inner = p.rest_of_parenthesized()?;
            let term = scope
                .term_in_scope(&inner)
                .map_err(|e| TraceError::Malformed(e.to_string()))?;
            return Ok(TraceAction::ViewDist(term));
        }
        _ => {
            return Err(TraceError::Malformed(
                "expected a string, `{...}`, or `dist NAME` in view".into(),
            ))
        }
    };
    p.expect_tok(Tok::RParen)?;
    Ok(action)
}

fn binary_spelling(mut n: usize) -> Result<String, TraceError> {
    // Digit runs consisting only of 0/1 characters are valid; anything else
    // cannot be a binary string.
    let mut digits = Vec::new();
    if n == 0 {
        return Ok("00".into());
    }
    while n > 0 {
        digits.push((n % 10) as u8);
        n /= 10;
    }
    if digits.iter().any(|d| *d > 1) {
        return Err(TraceError::Malformed(
            "view-set entries must be binary strings".into(),
        ));
    }
    Ok(digits.iter().rev().map(|d| char::from(b'0' + d)).collect())
}

fn parse_to_trace_err(e: ParseError) -> TraceError {
    TraceError::Malformed(e.to_string())
}

// Small extensions to the token-level parser used only by trace literals.
impl Parser {
    fn next_tok(&mut self) -> Option<(Tok, Span)> {
        self.next_raw()
    }

    fn peek_tok(&self) -> Option<Tok> {
        self.peek_raw().cloned()
    }

    fn expect_tok(&mut self, tok: Tok) -> Result<(), TraceError> {
        match self.next_raw() {
            Some((t, _)) if t == tok => Ok(()),
            Some((t, s)) => Err(TraceError::Malformed(format!(
                "{s}: expected {tok}, found {t}"
            ))),
            None => Err(TraceError::Malformed(format!(
                "expected {tok}, found end of input"
            ))),
        }
    }

    /// Consume `( ... )` and return the raw source inside, by re-rendering
    /// the token stream. Used for pass payloads, which are full terms.
    fn parenthesized_source(&mut self) -> Result<String, TraceError> {
        self.expect_tok(Tok::LParen)?;
        self.rest_of_parenthesized()
    }

    /// Render tokens until the matching `)` of an already-open group.
    fn rest_of_parenthesized(&mut self) -> Result<String, TraceError> {
        let mut depth = 1usize;
        let mut out = String::new();
        loop {
            let Some((tok, _)) = self.next_raw() else {
                return Err(TraceError::Malformed("unbalanced parentheses".into()));
            };
            match &tok {
                Tok::LParen => depth += 1,
                Tok::RParen => {
                    depth -= 1;
                    if depth == 0 {
                        return Ok(out);
                    }
                }
                _ => {}
            }
            out.push_str(&render_tok(&tok));
            out.push(' ');
        }
    }
}

fn render_tok(tok: &Tok) -> String {
    match tok {
        Tok::Ident(s) => s.clone(),
        Tok::Str(s) => format!("\"{s}\""),
        Tok::Digit(c) => c.to_string(),
        Tok::Int(n) => n.to_string(),
        Tok::LParen => "(".into(),
        Tok::RParen => ")".into(),
        Tok::LBrace => "{".into(),
        Tok::RBrace => "}".into(),
        Tok::LBracket => "[".into(),
        Tok::RBracket => "]".into(),
        Tok::Hash => "#".into(),
        Tok::Backslash => "\\".into(),
        Tok::Colon => ":".into(),
        Tok::Dot => ".".into(),
        Tok::Semi => ";".into(),
        Tok::Comma => ",".into(),
        Tok::Arrow => "->".into(),
        Tok::Pipe => "|".into(),
        Tok::Eq => "=".into(),
        Tok::Tilde => "~".into(),
        Tok::Caret => "^".into(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::rat;
    use crate::syntax::ast::Aspect;

    fn id() -> Term {
        Term::lam("x", Aspect::Poly, Type::Str, Term::var("x"))
    }

    fn view(s: &str) -> Trace {
        Trace::new(vec![TraceAction::ViewStr(s.into())]).unwrap()
    }

    #[test]
    fn compatibility() {
        assert!(compatible(&view("0"), &Type::Str));
        let arrow = Type::arrow(Aspect::Poly, Type::Str, Type::Str);
        assert!(!compatible(&view("0"), &arrow));
        let t = Trace::new(vec![
            TraceAction::Pass(Term::lit("1")),
            TraceAction::ViewStr(String::new()),
        ])
        .unwrap();
        assert!(compatible(&t, &arrow));
        assert_eq!(t.pass_count(), arrow.arrow_depth());
    }

    #[test]
    fn prob_of_rand() {
        let td = Dist::point(Term::Rand);
        assert_eq!(prob(&td, &view("0"), StepBudget::default()).unwrap(), rat(1, 2));
        assert_eq!(prob(&td, &view("1"), StepBudget::default()).unwrap(), rat(1, 2));
        assert_eq!(prob(&td, &view("00"), StepBudget::default()).unwrap(), rat(0, 1));
    }

    #[test]
    fn identity_passes_through() {
        let tr = Trace::new(vec![
            TraceAction::Pass(Term::lit("0")),
            TraceAction::ViewStr("0".into()),
        ])
        .unwrap();
        assert_eq!(prob_term(&id(), &tr, StepBudget::default()).unwrap(), rat_one());
    }

    #[test]
    fn passless_trace_accepts_with_probability_one() {
        let tr = Trace::new(vec![TraceAction::Pass(Term::lit("0"))]).unwrap();
        assert_eq!(prob_term(&id(), &tr, StepBudget::default()).unwrap(), rat_one());
    }

    #[test]
    fn view_set_adds_masses() {
        let td = Dist::point(Term::Rand);
        let tr = Trace::new(vec![TraceAction::ViewSet(
            ["0".to_string(), "1".to_string()].into_iter().collect(),
        )])
        .unwrap();
        assert_eq!(prob(&td, &tr, StepBudget::default()).unwrap(), rat_one());
    }

    #[test]
    fn trace_shape_is_validated() {
        let bad = Trace::new(vec![
            TraceAction::ViewStr("0".into()),
            TraceAction::Pass(Term::lit("0")),
        ]);
        assert!(bad.is_err());
        let nonvalue = Trace::new(vec![TraceAction::Pass(Term::Rand)]);
        assert!(nonvalue.is_err());
    }

    #[test]
    fn parse_trace_literals() {
        let scope = Program::default();
        let tr = parse_trace("pass(\"01\");view(\"0\")", &scope).unwrap();
        assert_eq!(tr.pass_count(), 1);
        assert!(matches!(tr.view(), Some(TraceAction::ViewStr(s)) if s == "0"));

        let tr = parse_trace("view({00,11})", &scope).unwrap();
        match tr.view() {
            Some(TraceAction::ViewSet(s)) => {
                assert!(s.contains("00") && s.contains("11") && s.len() == 2);
            }
            other => panic!("unexpected view {other:?}"),
        }

        let tr = parse_trace("pass(\\x:[]Str. x);view(\"\")", &scope).unwrap();
        assert_eq!(tr.pass_count(), 1);

        let tr = parse_trace("view({e,0})", &scope).unwrap();
        match tr.view() {
            Some(TraceAction::ViewSet(s)) => {
                assert!(s.contains("") && s.contains("0"));
            }
            other => panic!("unexpected view {other:?}"),
        }
    }
}
