//! Subtyping, the typing judgment, and context typing.
//!
//! Checking is syntax-directed: a minimal type is synthesized bottom-up and
//! subtyping is consulted at application arguments, case/rec branch joins,
//! and declared-type checks. Side conditions enforced along the way:
//!
//! - higher-order variables occur free at most once, and never inside the
//!   step functions of a recursion;
//! - every variable free in a recursion scrutinee has the poly aspect;
//! - arguments passed through a `[]`-arrow only mention poly variables
//!   (aspect conditions are read pointwise over the variables actually
//!   free in the argument);
//! - recursion result types are `[]`-free.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::syntax::ast::{Aspect, Name, Term, Type};
use crate::syntax::context::CtxTerm;
use crate::syntax::parser::Span;
use crate::syntax::pretty::{pretty, pretty_ctx};

/// The aspect order as a standalone operation.
pub fn aspect_leq(a: Aspect, b: Aspect) -> bool {
    a.leq(b)
}

/// Structural subtyping: contravariant arguments, covariant results, and
/// the aspect order on the arrow annotation.
pub fn subtype(a: &Type, b: &Type) -> bool {
    match (a, b) {
        (Type::Str, Type::Str) => true,
        (Type::Arrow(a1, arg1, res1), Type::Arrow(a2, arg2, res2)) => {
            aspect_leq(*a1, *a2) && subtype(arg2, arg1) && subtype(res1, res2)
        }
        _ => false,
    }
}

/// True iff no arrow in the type carries the `[]` aspect; required of
/// recursion result types.
pub fn box_free(ty: &Type) -> bool {
    match ty {
        Type::Str => true,
        Type::Arrow(a, arg, res) => *a != Aspect::Poly && box_free(arg) && box_free(res),
    }
}

#[derive(Debug, Clone, Default)]
pub struct TypingContext {
    entries: Vec<(Name, Aspect, Type)>,
}

impl TypingContext {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, name: &str, aspect: Aspect, ty: Type) -> Self {
        self.entries.push((name.to_string(), aspect, ty));
        self
    }

    pub fn push(&mut self, name: &str, aspect: Aspect, ty: Type) {
        self.entries.push((name.to_string(), aspect, ty));
    }

    pub fn pop(&mut self) {
        self.entries.pop();
    }

    pub fn lookup(&self, name: &str) -> Option<(Aspect, &Type)> {
        self.entries
            .iter()
            .rev()
            .find(|(n, _, _)| n == name)
            .map(|(_, a, t)| (*a, t))
    }

    pub fn contains(&self, name: &str) -> bool {
        self.lookup(name).is_some()
    }

    pub fn names(&self) -> impl Iterator<Item = &Name> {
        self.entries.iter().map(|(n, _, _)| n)
    }
}

#[derive(Debug, Clone, thiserror::Error, PartialEq)]
pub enum TypeError {
    #[error("unbound variable `{name}`")]
    Unbound { name: Name },
    #[error("higher-order variable `{name}` occurs free more than once in `{at}`")]
    Linearity { name: Name, at: String },
    #[error("higher-order variable `{name}` occurs inside a recursion step function in `{at}`")]
    HigherOrderInRec { name: Name, at: String },
    #[error("variable `{name}` has aspect {found} but position requires at most {required} in `{at}`")]
    AspectViolation {
        name: Name,
        found: Aspect,
        required: Aspect,
        at: String,
    },
    #[error("recursion result type `{ty}` is not []-free in `{at}`")]
    NotBoxFree { ty: String, at: String },
    #[error("expected a subtype of `{expected}`, found `{found}` in `{at}`")]
    Mismatch {
        expected: String,
        found: String,
        at: String,
    },
    #[error("expected a function, found `{found}` of type `{ty}`")]
    NotAFunction { found: String, ty: String },
    #[error("context has more than one hole")]
    NonLinearContext,
}

impl TypeError {
    pub fn code(&self) -> &'static str {
        match self {
            TypeError::Unbound { .. } => "unbound",
            TypeError::Linearity { .. } => "linearity",
            TypeError::HigherOrderInRec { .. } => "linearity-rec",
            TypeError::AspectViolation { .. } => "aspect",
            TypeError::NotBoxFree { .. } => "box-free",
            TypeError::Mismatch { .. } => "shape",
            TypeError::NotAFunction { .. } => "shape",
            TypeError::NonLinearContext => "nonlinear-context",
        }
    }

    pub fn variable(&self) -> Option<&str> {
        match self {
            TypeError::Unbound { name }
            | TypeError::Linearity { name, .. }
            | TypeError::HigherOrderInRec { name, .. }
            | TypeError::AspectViolation { name, .. } => Some(name),
            _ => None,
        }
    }
}

/// Machine-readable diagnostic record.
#[derive(Debug, Clone, Serialize)]
pub struct Diagnostic {
    pub code: String,
    pub message: String,
    pub span: Span,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub variable: Option<String>,
}

impl Diagnostic {
    pub fn from_error(err: &TypeError, span: Span) -> Self {
        Diagnostic {
            code: err.code().to_string(),
            message: err.to_string(),
            span,
            variable: err.variable().map(|s| s.to_string()),
        }
    }
}

/// Free-occurrence counts for variables of the enclosing context.
type Usage = BTreeMap<Name, usize>;

fn merge_usage(
    ctx: &TypingContext,
    at: &dyn Fn() -> String,
    parts: Vec<Usage>,
) -> Result<Usage, TypeError> {
    let mut total = Usage::new();
    for part in parts {
        for (name, count) in part {
            *total.entry(name).or_insert(0) += count;
        }
    }
    for (name, count) in &total {
        if *count > 1 {
            if let Some((_, ty)) = ctx.lookup(name) {
                if ty.is_arrow() {
                    return Err(TypeError::Linearity {
                        name: name.clone(),
                        at: at(),
                    });
                }
            }
        }
    }
    Ok(total)
}

fn check_aspect_bound(
    ctx: &TypingContext,
    usage: &Usage,
    bound: Aspect,
    at: &dyn Fn() -> String,
) -> Result<(), TypeError> {
    for name in usage.keys() {
        if let Some((aspect, _)) = ctx.lookup(name) {
            if !aspect_leq(aspect, bound) {
                return Err(TypeError::AspectViolation {
                    name: name.clone(),
                    found: aspect,
                    required: bound,
                    at: at(),
                });
            }
        }
    }
    Ok(())
}

fn forbid_higher_order(
    ctx: &TypingContext,
    usage: &Usage,
    at: &dyn Fn() -> String,
) -> Result<(), TypeError> {
    for name in usage.keys() {
        if let Some((_, ty)) = ctx.lookup(name) {
            if ty.is_arrow() {
                return Err(TypeError::HigherOrderInRec {
                    name: name.clone(),
                    at: at(),
                });
            }
        }
    }
    Ok(())
}

/// Synthesize the minimal type of `t`, enforcing all side conditions.
pub fn typecheck(ctx: &TypingContext, t: &Term) -> Result<Type, TypeError> {
    let mut ctx = ctx.clone();
    synth(&mut ctx, t).map(|(ty, _)| ty)
}

fn rec_step_type(annot: &Type) -> Type {
    Type::arrow(
        Aspect::Poly,
        Type::Str,
        Type::arrow(Aspect::Fixed, annot.clone(), annot.clone()),
    )
}

fn synth(ctx: &mut TypingContext, t: &Term) -> Result<(Type, Usage), TypeError> {
    match t {
        Term::Var(x) => {
            let (_, ty) = ctx
                .lookup(x)
                .ok_or_else(|| TypeError::Unbound { name: x.clone() })?;
            let ty = ty.clone();
            let mut usage = Usage::new();
            usage.insert(x.clone(), 1);
            Ok((ty, usage))
        }
        Term::StrLit(_) | Term::Rand => Ok((Type::Str, Usage::new())),
        Term::Prepend0(s) | Term::Prepend1(s) | Term::Tail(s) => {
            let (ty, usage) = synth(ctx, s)?;
            if ty != Type::Str {
                return Err(TypeError::Mismatch {
                    expected: "Str".into(),
                    found: ty.to_string(),
                    at: pretty(t),
                });
            }
            Ok((Type::Str, usage))
        }
        Term::App(f, a) => {
            let (fty, fuse) = synth(ctx, f)?;
            let Type::Arrow(aspect, arg_ty, res_ty) = fty else {
                return Err(TypeError::NotAFunction {
                    found: pretty(f),
                    ty: fty.to_string(),
                });
            };
            let (aty, ause) = synth(ctx, a)?;
            if !subtype(&aty, &arg_ty) {
                return Err(TypeError::Mismatch {
                    expected: arg_ty.to_string(),
                    found: aty.to_string(),
                    at: pretty(t),
                });
            }
            let at = || pretty(t);
            check_aspect_bound(ctx, &ause, aspect, &at)?;
            let usage = merge_usage(ctx, &at, vec![fuse, ause])?;
            Ok(((*res_ty).clone(), usage))
        }
        Term::Lam(x, aspect, ty, body) => {
            // Rename shadowing binders so usage maps stay unambiguous.
            if ctx.contains(x) {
                let mut avoid: std::collections::BTreeSet<Name> =
                    ctx.names().cloned().collect();
                avoid.extend(body.free_vars());
                let x2 = crate::syntax::ast::fresh_name(x, &avoid);
                let body2 = body.subst(x, &Term::Var(x2.clone()));
                let renamed = Term::Lam(x2, *aspect, ty.clone(), Box::new(body2));
                return synth(ctx, &renamed);
            }
            ctx.push(x, *aspect, ty.clone());
            let result = synth(ctx, body);
            ctx.pop();
            let (bty, mut usage) = result?;
            usage.remove(x);
            Ok((Type::arrow(*aspect, ty.clone(), bty), usage))
        }
        Term::Case(annot, s, t0, t1, te) => {
            let (sty, suse) = synth(ctx, s)?;
            if sty != Type::Str {
                return Err(TypeError::Mismatch {
                    expected: "Str".into(),
                    found: sty.to_string(),
                    at: pretty(t),
                });
            }
            let mut usages = vec![suse];
            for branch in [t0, t1, te] {
                let (bty, buse) = synth(ctx, branch)?;
                if !subtype(&bty, annot) {
                    return Err(TypeError::Mismatch {
                        expected: annot.to_string(),
                        found: bty.to_string(),
                        at: pretty(branch),
                    });
                }
                usages.push(buse);
            }
            let at = || pretty(t);
            let usage = merge_usage(ctx, &at, usages)?;
            Ok((annot.clone(), usage))
        }
        Term::Rec(annot, s, t0, t1, te) => {
            let at = || pretty(t);
            if !box_free(annot) {
                return Err(TypeError::NotBoxFree {
                    ty: annot.to_string(),
                    at: at(),
                });
            }
            let (sty, suse) = synth(ctx, s)?;
            if sty != Type::Str {
                return Err(TypeError::Mismatch {
                    expected: "Str".into(),
                    found: sty.to_string(),
                    at: at(),
                });
            }
            check_aspect_bound(ctx, &suse, Aspect::Poly, &at)?;
            let want = rec_step_type(annot);
            for step in [t0, t1] {
                let (ty, use_) = synth(ctx, step)?;
                if !subtype(&ty, &want) {
                    return Err(TypeError::Mismatch {
                        expected: want.to_string(),
                        found: ty.to_string(),
                        at: pretty(step),
                    });
                }
                forbid_higher_order(ctx, &use_, &at)?;
            }
            let (ety, euse) = synth(ctx, te)?;
            if !subtype(&ety, annot) {
                return Err(TypeError::Mismatch {
                    expected: annot.to_string(),
                    found: ety.to_string(),
                    at: pretty(te),
                });
            }
            // Step functions carry no higher-order variables, so linearity
            // merges only the scrutinee and base case.
            let usage = merge_usage(ctx, &at, vec![suse, euse])?;
            Ok((annot.clone(), usage))
        }
    }
}

/// Type a linear context against a hole type: the result `B` is such that
/// filling the hole with any closed term of the hole type yields a term of
/// a subtype of `B`.
pub fn typecheck_context(
    ctx: &TypingContext,
    c: &CtxTerm,
    hole_ty: &Type,
) -> Result<Type, TypeError> {
    if !c.is_linear() {
        return Err(TypeError::NonLinearContext);
    }
    let mut ctx = ctx.clone();
    synth_ctx(&mut ctx, c, hole_ty).map(|(ty, _)| ty)
}

fn synth_ctx(
    ctx: &mut TypingContext,
    c: &CtxTerm,
    hole_ty: &Type,
) -> Result<(Type, Usage), TypeError> {
    match c {
        CtxTerm::Term(t) => synth(ctx, t),
        CtxTerm::Hole => Ok((hole_ty.clone(), Usage::new())),
        CtxTerm::Lam(x, aspect, ty, body) => {
            if ctx.contains(x) {
                let mut avoid: std::collections::BTreeSet<Name> =
                    ctx.names().cloned().collect();
                avoid.extend(body.term_names());
                let x2 = crate::syntax::ast::fresh_name(x, &avoid);
                let body2 = body.subst_term(x, &Term::Var(x2.clone()));
                let renamed = CtxTerm::Lam(x2, *aspect, ty.clone(), Box::new(body2));
                return synth_ctx(ctx, &renamed, hole_ty);
            }
            ctx.push(x, *aspect, ty.clone());
            let result = synth_ctx(ctx, body, hole_ty);
            ctx.pop();
            let (bty, mut usage) = result?;
            usage.remove(x);
            Ok((Type::arrow(*aspect, ty.clone(), bty), usage))
        }
        CtxTerm::AppL(f, a) => {
            let (fty, fuse) = synth_ctx(ctx, f, hole_ty)?;
            let Type::Arrow(aspect, arg_ty, res_ty) = fty else {
                return Err(TypeError::NotAFunction {
                    found: pretty_ctx(f),
                    ty: fty.to_string(),
                });
            };
            let (aty, ause) = synth(ctx, a)?;
            if !subtype(&aty, &arg_ty) {
                return Err(TypeError::Mismatch {
                    expected: arg_ty.to_string(),
                    found: aty.to_string(),
                    at: pretty_ctx(c),
                });
            }
            let at = || pretty_ctx(c);
            check_aspect_bound(ctx, &ause, aspect, &at)?;
            let usage = merge_usage(ctx, &at, vec![fuse, ause])?;
            Ok(((*res_ty).clone(), usage))
        }
        CtxTerm::AppR(f, a) => {
            let (fty, fuse) = synth(ctx, f)?;
            let Type::Arrow(aspect, arg_ty, res_ty) = fty else {
                return Err(TypeError::NotAFunction {
                    found: pretty(f),
                    ty: fty.to_string(),
                });
            };
            let (aty, ause) = synth_ctx(ctx, a, hole_ty)?;
            if !subtype(&aty, &arg_ty) {
                return Err(TypeError::Mismatch {
                    expected: arg_ty.to_string(),
                    found: aty.to_string(),
                    at: pretty_ctx(c),
                });
            }
            let at = || pretty_ctx(c);
            check_aspect_bound(ctx, &ause, aspect, &at)?;
            let usage = merge_usage(ctx, &at, vec![fuse, ause])?;
            Ok(((*res_ty).clone(), usage))
        }
        CtxTerm::Prepend0(inner) | CtxTerm::Prepend1(inner) | CtxTerm::Tail(inner) => {
            let (ty, usage) = synth_ctx(ctx, inner, hole_ty)?;
            if ty != Type::Str {
                return Err(TypeError::Mismatch {
                    expected: "Str".into(),
                    found: ty.to_string(),
                    at: pretty_ctx(c),
                });
            }
            Ok((Type::Str, usage))
        }
        CtxTerm::CaseScrut(annot, s, t0, t1, te) => {
            let (sty, suse) = synth_ctx(ctx, s, hole_ty)?;
            if sty != Type::Str {
                return Err(TypeError::Mismatch {
                    expected: "Str".into(),
                    found: sty.to_string(),
                    at: pretty_ctx(c),
                });
            }
            let mut usages = vec![suse];
            for branch in [t0, t1, te] {
                let (bty, buse) = synth(ctx, branch)?;
                if !subtype(&bty, annot) {
                    return Err(TypeError::Mismatch {
                        expected: annot.to_string(),
                        found: bty.to_string(),
                        at: pretty(branch),
                    });
                }
                usages.push(buse);
            }
            let at = || pretty_ctx(c);
            let usage = merge_usage(ctx, &at, usages)?;
            Ok((annot.clone(), usage))
        }
        CtxTerm::CaseBranch(annot, s, c0, c1, ce) => {
            let (sty, suse) = synth(ctx, s)?;
            if sty != Type::Str {
                return Err(TypeError::Mismatch {
                    expected: "Str".into(),
                    found: sty.to_string(),
                    at: pretty_ctx(c),
                });
            }
            let mut usages = vec![suse];
            for branch in [c0, c1, ce] {
                let (bty, buse) = synth_ctx(ctx, branch, hole_ty)?;
                if !subtype(&bty, annot) {
                    return Err(TypeError::Mismatch {
                        expected: annot.to_string(),
                        found: bty.to_string(),
                        at: pretty_ctx(branch),
                    });
                }
                usages.push(buse);
            }
            let at = || pretty_ctx(c);
            let usage = merge_usage(ctx, &at, usages)?;
            Ok((annot.clone(), usage))
        }
        CtxTerm::RecScrut(annot, s, t0, t1, te) => {
            let at = || pretty_ctx(c);
            if !box_free(annot) {
                return Err(TypeError::NotBoxFree {
                    ty: annot.to_string(),
                    at: at(),
                });
            }
            let (sty, suse) = synth_ctx(ctx, s, hole_ty)?;
            if sty != Type::Str {
                return Err(TypeError::Mismatch {
                    expected: "Str".into(),
                    found: sty.to_string(),
                    at: at(),
                });
            }
            check_aspect_bound(ctx, &suse, Aspect::Poly, &at)?;
            let want = rec_step_type(annot);
            for step in [t0, t1] {
                let (ty, use_) = synth(ctx, step)?;
                if !subtype(&ty, &want) {
                    return Err(TypeError::Mismatch {
                        expected: want.to_string(),
                        found: ty.to_string(),
                        at: pretty(step),
                    });
                }
                forbid_higher_order(ctx, &use_, &at)?;
            }
            let (ety, euse) = synth(ctx, te)?;
            if !subtype(&ety, annot) {
                return Err(TypeError::Mismatch {
                    expected: annot.to_string(),
                    found: ety.to_string(),
                    at: pretty(te),
                });
            }
            let usage = merge_usage(ctx, &at, vec![suse, euse])?;
            Ok((annot.clone(), usage))
        }
    }
}

/// Shared type for a pair of terms: their synthesized types if related by
/// subtyping, preferring the larger.
pub fn shared_type(left: &Term, right: &Term) -> Result<Type, TypeError> {
    let ctx = TypingContext::new();
    let lt = typecheck(&ctx, left)?;
    let rt = typecheck(&ctx, right)?;
    if subtype(&lt, &rt) {
        Ok(rt)
    } else if subtype(&rt, &lt) {
        Ok(lt)
    } else {
        Err(TypeError::Mismatch {
            expected: lt.to_string(),
            found: rt.to_string(),
            at: "shared type of compared terms".into(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::ast::Term;

    fn str_ty() -> Type {
        Type::Str
    }

    fn poly_arrow(arg: Type, res: Type) -> Type {
        Type::arrow(Aspect::Poly, arg, res)
    }

    #[test]
    fn aspect_order_is_exactly_the_three_pairs() {
        assert!(aspect_leq(Aspect::Poly, Aspect::Fixed));
        assert!(aspect_leq(Aspect::Fixed, Aspect::Fixed));
        assert!(aspect_leq(Aspect::Poly, Aspect::Poly));
        assert!(!aspect_leq(Aspect::Fixed, Aspect::Poly));
    }

    #[test]
    fn subtype_arrow_rule() {
        assert!(subtype(&str_ty(), &str_ty()));
        let poly = poly_arrow(str_ty(), str_ty());
        let fixed = Type::arrow(Aspect::Fixed, str_ty(), str_ty());
        assert!(subtype(&poly, &fixed));
        assert!(!subtype(&fixed, &poly));
        assert!(!subtype(&str_ty(), &poly));
    }

    #[test]
    fn box_free_checks_nested_arrows() {
        assert!(box_free(&str_ty()));
        assert!(box_free(&Type::arrow(Aspect::Fixed, str_ty(), str_ty())));
        let nested = Type::arrow(
            Aspect::Fixed,
            poly_arrow(str_ty(), str_ty()),
            str_ty(),
        );
        assert!(!box_free(&nested));
    }

    #[test]
    fn rand_and_identity_typecheck() {
        let ctx = TypingContext::new();
        assert_eq!(typecheck(&ctx, &Term::Rand).unwrap(), str_ty());
        let id = Term::lam("x", Aspect::Poly, str_ty(), Term::var("x"));
        assert_eq!(typecheck(&ctx, &id).unwrap(), poly_arrow(str_ty(), str_ty()));
    }

    #[test]
    fn higher_order_variable_used_twice_is_rejected() {
        // \f:[#]([]Str -> Str). case Str (f "") of {0 -> f "" | 1 -> "" | e -> ""}
        let fty = poly_arrow(str_ty(), str_ty());
        let body = Term::case(
            str_ty(),
            Term::app(Term::var("f"), Term::lit("")),
            Term::app(Term::var("f"), Term::lit("")),
            Term::lit(""),
            Term::lit(""),
        );
        let t = Term::lam("f", Aspect::Fixed, fty, body);
        let err = typecheck(&TypingContext::new(), &t).unwrap_err();
        assert!(matches!(err, TypeError::Linearity { name, .. } if name == "f"));
    }

    #[test]
    fn base_variable_may_repeat() {
        let body = Term::case(
            str_ty(),
            Term::var("x"),
            Term::var("x"),
            Term::var("x"),
            Term::lit(""),
        );
        let t = Term::lam("x", Aspect::Poly, str_ty(), body);
        assert!(typecheck(&TypingContext::new(), &t).is_ok());
    }

    #[test]
    fn rec_requires_poly_scrutinee_variables() {
        // \x:[#]Str. rec Str x of ... must fail: x has the fixed aspect.
        let step = Term::lam(
            "w",
            Aspect::Poly,
            str_ty(),
            Term::lam("z", Aspect::Fixed, str_ty(), Term::var("z")),
        );
        let t = Term::lam(
            "x",
            Aspect::Fixed,
            str_ty(),
            Term::rec(str_ty(), Term::var("x"), step.clone(), step.clone(), Term::lit("")),
        );
        let err = typecheck(&TypingContext::new(), &t).unwrap_err();
        assert!(matches!(err, TypeError::AspectViolation { name, .. } if name == "x"));
    }

    #[test]
    fn rec_rejects_non_box_free_annotation() {
        let bad = poly_arrow(str_ty(), str_ty());
        let t = Term::rec(
            bad,
            Term::lit("0"),
            Term::lit(""),
            Term::lit(""),
            Term::lam("x", Aspect::Poly, str_ty(), Term::var("x")),
        );
        let err = typecheck(&TypingContext::new(), &t).unwrap_err();
        assert!(matches!(err, TypeError::NotBoxFree { .. }));
    }

    #[test]
    fn rec_rejects_higher_order_variables_in_steps() {
        let fty = Type::arrow(Aspect::Fixed, str_ty(), str_ty());
        // \f. rec Str "0" of {0 -> \w.\z. f z | ...}
        let step = Term::lam(
            "w",
            Aspect::Poly,
            str_ty(),
            Term::lam(
                "z",
                Aspect::Fixed,
                str_ty(),
                Term::app(Term::var("f"), Term::var("z")),
            ),
        );
        let t = Term::lam(
            "f",
            Aspect::Fixed,
            fty,
            Term::rec(str_ty(), Term::lit("0"), step.clone(), step, Term::lit("")),
        );
        let err = typecheck(&TypingContext::new(), &t).unwrap_err();
        assert!(matches!(err, TypeError::HigherOrderInRec { name, .. } if name == "f"));
    }

    #[test]
    fn poly_argument_position_rejects_fixed_variables() {
        // \f:[]Str -> Str. \x:[#]Str. f x : the [] arrow cannot take x.
        let fty = poly_arrow(str_ty(), str_ty());
        let t = Term::lam(
            "f",
            Aspect::Fixed,
            fty,
            Term::lam(
                "x",
                Aspect::Fixed,
                str_ty(),
                Term::app(Term::var("f"), Term::var("x")),
            ),
        );
        let err = typecheck(&TypingContext::new(), &t).unwrap_err();
        assert!(matches!(err, TypeError::AspectViolation { name, .. } if name == "x"));
    }

    #[test]
    fn context_typing_hole_axiom_and_prefix() {
        let ctx = TypingContext::new();
        assert_eq!(
            typecheck_context(&ctx, &CtxTerm::Hole, &str_ty()).unwrap(),
            str_ty()
        );
        let c = CtxTerm::Prepend0(Box::new(CtxTerm::Hole));
        assert_eq!(typecheck_context(&ctx, &c, &str_ty()).unwrap(), str_ty());
        let arrow_hole = typecheck_context(&ctx, &CtxTerm::Hole, &poly_arrow(str_ty(), str_ty()));
        assert_eq!(arrow_hole.unwrap(), poly_arrow(str_ty(), str_ty()));
    }

    #[test]
    fn context_typing_rejects_two_holes() {
        let c = CtxTerm::CaseBranch(
            str_ty(),
            Term::Rand,
            Box::new(CtxTerm::Hole),
            Box::new(CtxTerm::Hole),
            Box::new(CtxTerm::Term(Term::lit(""))),
        );
        assert_eq!(
            typecheck_context(&TypingContext::new(), &c, &str_ty()).unwrap_err(),
            TypeError::NonLinearContext
        );
    }
}
