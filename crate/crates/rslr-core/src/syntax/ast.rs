//! Core AST: aspects, types, terms, and the operations on them that the
//! rest of the workbench relies on (free variables, substitution,
//! alpha-aware comparison).

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

/// Argument-use annotation on function arrows. `Poly` arguments may drive
/// polynomial work (e.g. recursion); `Fixed` arguments may only be used in
/// constant time. The order `Poly <= Fixed` is the aspect subtyping order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Aspect {
    Poly,
    Fixed,
}

impl Aspect {
    /// The aspect order: `Poly <= Poly`, `Poly <= Fixed`, `Fixed <= Fixed`.
    pub fn leq(self, other: Aspect) -> bool {
        self <= other
    }
}

impl fmt::Display for Aspect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Aspect::Poly => write!(f, "[]"),
            Aspect::Fixed => write!(f, "[#]"),
        }
    }
}

/// Types: the base type of binary strings, and aspect-annotated arrows.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Type {
    Str,
    Arrow(Aspect, Box<Type>, Box<Type>),
}

impl Type {
    pub fn arrow(aspect: Aspect, arg: Type, res: Type) -> Type {
        Type::Arrow(aspect, Box::new(arg), Box::new(res))
    }

    pub fn is_arrow(&self) -> bool {
        matches!(self, Type::Arrow(..))
    }

    /// Number of leading arrows.
    pub fn arrow_depth(&self) -> usize {
        match self {
            Type::Str => 0,
            Type::Arrow(_, _, res) => 1 + res.arrow_depth(),
        }
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Type::Str => write!(f, "Str"),
            Type::Arrow(a, arg, res) => {
                if arg.is_arrow() {
                    write!(f, "{a}({arg}) -> {res}")
                } else {
                    write!(f, "{a}{arg} -> {res}")
                }
            }
        }
    }
}

pub type Name = String;

/// Core terms. String payloads contain only the characters `0` and `1`.
#[derive(Debug, Clone)]
pub enum Term {
    Var(Name),
    /// Binary string literal, possibly empty.
    StrLit(String),
    Prepend0(Box<Term>),
    Prepend1(Box<Term>),
    Tail(Box<Term>),
    App(Box<Term>, Box<Term>),
    /// `Case(annot, scrut, t0, t1, te)`: dispatch on the first character.
    Case(Type, Box<Term>, Box<Term>, Box<Term>, Box<Term>),
    /// `Rec(annot, scrut, t0, t1, te)`: structural recursion on the scrutinee.
    Rec(Type, Box<Term>, Box<Term>, Box<Term>, Box<Term>),
    Rand,
    Lam(Name, Aspect, Type, Box<Term>),
}

impl Term {
    pub fn lit(s: &str) -> Term {
        debug_assert!(s.chars().all(|c| c == '0' || c == '1'));
        Term::StrLit(s.to_string())
    }

    pub fn var(x: &str) -> Term {
        Term::Var(x.to_string())
    }

    pub fn app(f: Term, a: Term) -> Term {
        Term::App(Box::new(f), Box::new(a))
    }

    pub fn lam(x: &str, aspect: Aspect, ty: Type, body: Term) -> Term {
        Term::Lam(x.to_string(), aspect, ty, Box::new(body))
    }

    pub fn case(annot: Type, scrut: Term, t0: Term, t1: Term, te: Term) -> Term {
        Term::Case(annot, Box::new(scrut), Box::new(t0), Box::new(t1), Box::new(te))
    }

    pub fn rec(annot: Type, scrut: Term, t0: Term, t1: Term, te: Term) -> Term {
        Term::Rec(annot, Box::new(scrut), Box::new(t0), Box::new(t1), Box::new(te))
    }

    /// A term is a value iff it is a string literal or an abstraction.
    pub fn is_value(&self) -> bool {
        matches!(self, Term::StrLit(_) | Term::Lam(..))
    }

    pub fn as_lit(&self) -> Option<&str> {
        match self {
            Term::StrLit(s) => Some(s),
            _ => None,
        }
    }

    /// Free variables of the term.
    pub fn free_vars(&self) -> BTreeSet<Name> {
        let mut acc = BTreeSet::new();
        let mut bound = Vec::new();
        collect_free(self, &mut bound, &mut acc);
        acc
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Capture-avoiding substitution of `v` for `x`. The common case in the
    /// semantics has `v` closed, in which case no renaming ever happens.
    pub fn subst(&self, x: &str, v: &Term) -> Term {
        let fv: BTreeSet<Name> = v.free_vars();
        subst_in(self, x, v, &fv)
    }
}

fn collect_free(t: &Term, bound: &mut Vec<Name>, acc: &mut BTreeSet<Name>) {
    match t {
        Term::Var(x) => {
            if !bound.iter().any(|b| b == x) {
                acc.insert(x.clone());
            }
        }
        Term::StrLit(_) | Term::Rand => {}
        Term::Prepend0(s) | Term::Prepend1(s) | Term::Tail(s) => collect_free(s, bound, acc),
        Term::App(f, a) => {
            collect_free(f, bound, acc);
            collect_free(a, bound, acc);
        }
        Term::Case(_, s, t0, t1, te) | Term::Rec(_, s, t0, t1, te) => {
            collect_free(s, bound, acc);
            collect_free(t0, bound, acc);
            collect_free(t1, bound, acc);
            collect_free(te, bound, acc);
        }
        Term::Lam(x, _, _, body) => {
            bound.push(x.clone());
            collect_free(body, bound, acc);
            bound.pop();
        }
    }
}

/// Pick a name based on `base` that clashes with nothing in `avoid`.
pub fn fresh_name(base: &str, avoid: &BTreeSet<Name>) -> Name {
    if !avoid.contains(base) {
        return base.to_string();
    }
    let stem: String = base.chars().take_while(|c| !c.is_ascii_digit()).collect();
    let stem = if stem.is_empty() { "x".to_string() } else { stem };
    for i in 1.. {
        let cand = format!("{stem}{i}");
        if !avoid.contains(&cand) {
            return cand;
        }
    }
    unreachable!()
}

fn subst_in(t: &Term, x: &str, v: &Term, fv_v: &BTreeSet<Name>) -> Term {
    match t {
        Term::Var(y) => {
            if y == x {
                v.clone()
            } else {
                t.clone()
            }
        }
        Term::StrLit(_) | Term::Rand => t.clone(),
        Term::Prepend0(s) => Term::Prepend0(Box::new(subst_in(s, x, v, fv_v))),
        Term::Prepend1(s) => Term::Prepend1(Box::new(subst_in(s, x, v, fv_v))),
        Term::Tail(s) => Term::Tail(Box::new(subst_in(s, x, v, fv_v))),
        Term::App(f, a) => Term::app(subst_in(f, x, v, fv_v), subst_in(a, x, v, fv_v)),
        Term::Case(annot, s, t0, t1, te) => Term::case(
            annot.clone(),
            subst_in(s, x, v, fv_v),
            subst_in(t0, x, v, fv_v),
            subst_in(t1, x, v, fv_v),
            subst_in(te, x, v, fv_v),
        ),
        Term::Rec(annot, s, t0, t1, te) => Term::rec(
            annot.clone(),
            subst_in(s, x, v, fv_v),
            subst_in(t0, x, v, fv_v),
            subst_in(t1, x, v, fv_v),
            subst_in(te, x, v, fv_v),
        ),
        Term::Lam(y, aspect, ty, body) => {
            if y == x {
                t.clone()
            } else if fv_v.contains(y) {
                // Binder would capture a free variable of v: rename it first.
                let mut avoid: BTreeSet<Name> = fv_v.clone();
                avoid.extend(body.free_vars());
                avoid.insert(x.to_string());
                let y2 = fresh_name(y, &avoid);
                let renamed = subst_in(body, y, &Term::Var(y2.clone()), &BTreeSet::new());
                Term::Lam(y2, *aspect, ty.clone(), Box::new(subst_in(&renamed, x, v, fv_v)))
            } else {
                Term::Lam(y.clone(), *aspect, ty.clone(), Box::new(subst_in(body, x, v, fv_v)))
            }
        }
    }
}

// Alpha-aware structural comparison. Bound variables are compared by binder
// position, free variables by name; equality and ordering on `Term` are
// therefore alpha-equivalence and a total order on alpha-classes.

fn var_key<'a>(x: &'a str, binders: &[&'a str]) -> Result<usize, &'a str> {
    for (i, b) in binders.iter().rev().enumerate() {
        if *b == x {
            return Ok(i);
        }
    }
    Err(x)
}

fn tag(t: &Term) -> u8 {
    match t {
        Term::Var(_) => 0,
        Term::StrLit(_) => 1,
        Term::Prepend0(_) => 2,
        Term::Prepend1(_) => 3,
        Term::Tail(_) => 4,
        Term::App(..) => 5,
        Term::Case(..) => 6,
        Term::Rec(..) => 7,
        Term::Rand => 8,
        Term::Lam(..) => 9,
    }
}

fn alpha_cmp<'a>(a: &'a Term, b: &'a Term, ba: &mut Vec<&'a str>, bb: &mut Vec<&'a str>) -> Ordering {
    let t = tag(a).cmp(&tag(b));
    if t != Ordering::Equal {
        return t;
    }
    match (a, b) {
        (Term::Var(x), Term::Var(y)) => match (var_key(x, ba), var_key(y, bb)) {
            (Ok(i), Ok(j)) => i.cmp(&j),
            (Ok(_), Err(_)) => Ordering::Less,
            (Err(_), Ok(_)) => Ordering::Greater,
            (Err(x), Err(y)) => x.cmp(y),
        },
        (Term::StrLit(x), Term::StrLit(y)) => x.cmp(y),
        (Term::Rand, Term::Rand) => Ordering::Equal,
        (Term::Prepend0(x), Term::Prepend0(y))
        | (Term::Prepend1(x), Term::Prepend1(y))
        | (Term::Tail(x), Term::Tail(y)) => alpha_cmp(x, y, ba, bb),
        (Term::App(f1, a1), Term::App(f2, a2)) => {
            alpha_cmp(f1, f2, ba, bb).then_with(|| alpha_cmp(a1, a2, ba, bb))
        }
        (Term::Case(an1, s1, x0, x1, xe), Term::Case(an2, s2, y0, y1, ye))
        | (Term::Rec(an1, s1, x0, x1, xe), Term::Rec(an2, s2, y0, y1, ye)) => an1
            .cmp(an2)
            .then_with(|| alpha_cmp(s1, s2, ba, bb))
            .then_with(|| alpha_cmp(x0, y0, ba, bb))
            .then_with(|| alpha_cmp(x1, y1, ba, bb))
            .then_with(|| alpha_cmp(xe, ye, ba, bb)),
        (Term::Lam(x, asp1, ty1, body1), Term::Lam(y, asp2, ty2, body2)) => {
            asp1.cmp(asp2).then_with(|| ty1.cmp(ty2)).then_with(|| {
                ba.push(x);
                bb.push(y);
                let r = alpha_cmp(body1, body2, ba, bb);
                ba.pop();
                bb.pop();
                r
            })
        }
        _ => unreachable!("tags matched"),
    }
}

impl PartialEq for Term {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Term {}

impl PartialOrd for Term {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Term {
    fn cmp(&self, other: &Self) -> Ordering {
        alpha_cmp(self, other, &mut Vec::new(), &mut Vec::new())
    }
}

/// Head-removal on binary strings; the empty string is its own tail.
pub fn str_tail(s: &str) -> &str {
    if s.is_empty() {
        s
    } else {
        &s[1..]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn id(aspect: Aspect) -> Term {
        Term::lam("x", aspect, Type::Str, Term::var("x"))
    }

    #[test]
    fn alpha_equivalence_ignores_binder_names() {
        let a = Term::lam("x", Aspect::Poly, Type::Str, Term::var("x"));
        let b = Term::lam("y", Aspect::Poly, Type::Str, Term::var("y"));
        assert_eq!(a, b);
        assert_ne!(id(Aspect::Poly), id(Aspect::Fixed));
    }

    #[test]
    fn alpha_distinguishes_free_variables() {
        let a = Term::lam("x", Aspect::Poly, Type::Str, Term::var("z"));
        let b = Term::lam("y", Aspect::Poly, Type::Str, Term::var("w"));
        assert_ne!(a, b);
    }

    #[test]
    fn subst_replaces_free_occurrences_only() {
        let v = Term::lit("01");
        let t = Term::var("x");
        assert_eq!(t.subst("x", &v), v);
        let under = Term::lam("y", Aspect::Poly, Type::Str, Term::var("x"));
        assert_eq!(
            under.subst("x", &v),
            Term::lam("y", Aspect::Poly, Type::Str, Term::lit("01"))
        );
        let shadowed = Term::lam("x", Aspect::Poly, Type::Str, Term::var("x"));
        assert_eq!(shadowed.subst("x", &v), shadowed);
    }

    #[test]
    fn subst_avoids_capture() {
        // (\y. x)[y/x] must not capture: result binds a renamed variable.
        let t = Term::lam("y", Aspect::Poly, Type::Str, Term::var("x"));
        let r = t.subst("x", &Term::var("y"));
        match &r {
            Term::Lam(b, _, _, body) => {
                assert_ne!(b, "y");
                assert_eq!(**body, Term::var("y"));
            }
            _ => panic!("expected lambda"),
        }
    }

    #[test]
    fn tail_of_empty_is_empty() {
        assert_eq!(str_tail(""), "");
        assert_eq!(str_tail("011"), "11");
    }
}
