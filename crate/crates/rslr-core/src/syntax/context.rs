//! Linear one-hole contexts. The hole occurs at most once and never inside
//! the step functions of a recursion; `case` may carry the hole either in
//! scrutinee position or in one of its three branches.

use std::collections::BTreeSet;

use super::ast::{Aspect, Name, Term, Type};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum CtxTerm {
    /// Hole-free leaf.
    Term(Term),
    Hole,
    Lam(Name, Aspect, Type, Box<CtxTerm>),
    /// Application with the context on the function side.
    AppL(Box<CtxTerm>, Term),
    /// Application with the context on the argument side.
    AppR(Term, Box<CtxTerm>),
    Prepend0(Box<CtxTerm>),
    Prepend1(Box<CtxTerm>),
    Tail(Box<CtxTerm>),
    /// Case with the context in scrutinee position.
    CaseScrut(Type, Box<CtxTerm>, Term, Term, Term),
    /// Case with contexts in branch positions (jointly at most one hole).
    CaseBranch(Type, Term, Box<CtxTerm>, Box<CtxTerm>, Box<CtxTerm>),
    /// Rec admits the hole in scrutinee position only.
    RecScrut(Type, Box<CtxTerm>, Term, Term, Term),
}

impl CtxTerm {
    pub fn hole_count(&self) -> usize {
        match self {
            CtxTerm::Term(_) => 0,
            CtxTerm::Hole => 1,
            CtxTerm::Lam(_, _, _, c)
            | CtxTerm::AppL(c, _)
            | CtxTerm::AppR(_, c)
            | CtxTerm::Prepend0(c)
            | CtxTerm::Prepend1(c)
            | CtxTerm::Tail(c)
            | CtxTerm::CaseScrut(_, c, _, _, _)
            | CtxTerm::RecScrut(_, c, _, _, _) => c.hole_count(),
            CtxTerm::CaseBranch(_, _, c0, c1, ce) => {
                c0.hole_count() + c1.hole_count() + ce.hole_count()
            }
        }
    }

    /// Linearity: at most one hole overall. Holes inside rec step functions
    /// are unrepresentable by construction.
    pub fn is_linear(&self) -> bool {
        self.hole_count() <= 1
    }

    /// Substitute `t` for every hole occurrence. Intended for closed `t`;
    /// the grammar is non-binding in that sense.
    pub fn fill(&self, t: &Term) -> Term {
        match self {
            CtxTerm::Term(u) => u.clone(),
            CtxTerm::Hole => t.clone(),
            CtxTerm::Lam(x, a, ty, c) => {
                Term::Lam(x.clone(), *a, ty.clone(), Box::new(c.fill(t)))
            }
            CtxTerm::AppL(c, u) => Term::app(c.fill(t), u.clone()),
            CtxTerm::AppR(u, c) => Term::app(u.clone(), c.fill(t)),
            CtxTerm::Prepend0(c) => Term::Prepend0(Box::new(c.fill(t))),
            CtxTerm::Prepend1(c) => Term::Prepend1(Box::new(c.fill(t))),
            CtxTerm::Tail(c) => Term::Tail(Box::new(c.fill(t))),
            CtxTerm::CaseScrut(an, c, t0, t1, te) => Term::case(
                an.clone(),
                c.fill(t),
                t0.clone(),
                t1.clone(),
                te.clone(),
            ),
            CtxTerm::CaseBranch(an, s, c0, c1, ce) => Term::case(
                an.clone(),
                s.clone(),
                c0.fill(t),
                c1.fill(t),
                ce.fill(t),
            ),
            CtxTerm::RecScrut(an, c, t0, t1, te) => Term::rec(
                an.clone(),
                c.fill(t),
                t0.clone(),
                t1.clone(),
                te.clone(),
            ),
        }
    }

    /// Collapse hole-free subtrees into `Term` leaves. The machine assumes
    /// this canonical shape: every non-`Term` node is on the hole path.
    pub fn canon(&self) -> CtxTerm {
        if self.hole_count() == 0 {
            return CtxTerm::Term(self.fill(&Term::lit("")));
        }
        match self {
            CtxTerm::Term(_) | CtxTerm::Hole => self.clone(),
            CtxTerm::Lam(x, a, ty, c) => {
                CtxTerm::Lam(x.clone(), *a, ty.clone(), Box::new(c.canon()))
            }
            CtxTerm::AppL(c, u) => CtxTerm::AppL(Box::new(c.canon()), u.clone()),
            CtxTerm::AppR(u, c) => CtxTerm::AppR(u.clone(), Box::new(c.canon())),
            CtxTerm::Prepend0(c) => CtxTerm::Prepend0(Box::new(c.canon())),
            CtxTerm::Prepend1(c) => CtxTerm::Prepend1(Box::new(c.canon())),
            CtxTerm::Tail(c) => CtxTerm::Tail(Box::new(c.canon())),
            CtxTerm::CaseScrut(an, c, t0, t1, te) => CtxTerm::CaseScrut(
                an.clone(),
                Box::new(c.canon()),
                t0.clone(),
                t1.clone(),
                te.clone(),
            ),
            CtxTerm::CaseBranch(an, s, c0, c1, ce) => CtxTerm::CaseBranch(
                an.clone(),
                s.clone(),
                Box::new(c0.canon()),
                Box::new(c1.canon()),
                Box::new(ce.canon()),
            ),
            CtxTerm::RecScrut(an, c, t0, t1, te) => CtxTerm::RecScrut(
                an.clone(),
                Box::new(c.canon()),
                t0.clone(),
                t1.clone(),
                te.clone(),
            ),
        }
    }

    /// Substitute a closed value for `x` in the term parts of the context.
    /// Used by the machine when a lambda context consumes a passed value.
    pub fn subst_term(&self, x: &str, v: &Term) -> CtxTerm {
        match self {
            CtxTerm::Term(u) => CtxTerm::Term(u.subst(x, v)),
            CtxTerm::Hole => CtxTerm::Hole,
            CtxTerm::Lam(y, a, ty, c) => {
                if y == x {
                    self.clone()
                } else {
                    CtxTerm::Lam(y.clone(), *a, ty.clone(), Box::new(c.subst_term(x, v)))
                }
            }
            CtxTerm::AppL(c, u) => CtxTerm::AppL(Box::new(c.subst_term(x, v)), u.subst(x, v)),
            CtxTerm::AppR(u, c) => CtxTerm::AppR(u.subst(x, v), Box::new(c.subst_term(x, v))),
            CtxTerm::Prepend0(c) => CtxTerm::Prepend0(Box::new(c.subst_term(x, v))),
            CtxTerm::Prepend1(c) => CtxTerm::Prepend1(Box::new(c.subst_term(x, v))),
            CtxTerm::Tail(c) => CtxTerm::Tail(Box::new(c.subst_term(x, v))),
            CtxTerm::CaseScrut(an, c, t0, t1, te) => CtxTerm::CaseScrut(
                an.clone(),
                Box::new(c.subst_term(x, v)),
                t0.subst(x, v),
                t1.subst(x, v),
                te.subst(x, v),
            ),
            CtxTerm::CaseBranch(an, s, c0, c1, ce) => CtxTerm::CaseBranch(
                an.clone(),
                s.subst(x, v),
                Box::new(c0.subst_term(x, v)),
                Box::new(c1.subst_term(x, v)),
                Box::new(ce.subst_term(x, v)),
            ),
            CtxTerm::RecScrut(an, c, t0, t1, te) => CtxTerm::RecScrut(
                an.clone(),
                Box::new(c.subst_term(x, v)),
                t0.subst(x, v),
                t1.subst(x, v),
                te.subst(x, v),
            ),
        }
    }

    /// Names bound or free anywhere in the context's term parts.
    pub fn term_names(&self) -> BTreeSet<Name> {
        fn go(c: &CtxTerm, acc: &mut BTreeSet<Name>) {
            match c {
                CtxTerm::Term(u) => {
                    acc.extend(u.free_vars());
                }
                CtxTerm::Hole => {}
                CtxTerm::Lam(x, _, _, b) => {
                    acc.insert(x.clone());
                    go(b, acc);
                }
                CtxTerm::AppL(c, u) => {
                    go(c, acc);
                    acc.extend(u.free_vars());
                }
                CtxTerm::AppR(u, c) => {
                    acc.extend(u.free_vars());
                    go(c, acc);
                }
                CtxTerm::Prepend0(c) | CtxTerm::Prepend1(c) | CtxTerm::Tail(c) => go(c, acc),
                CtxTerm::CaseScrut(_, c, t0, t1, te) | CtxTerm::RecScrut(_, c, t0, t1, te) => {
                    go(c, acc);
                    acc.extend(t0.free_vars());
                    acc.extend(t1.free_vars());
                    acc.extend(te.free_vars());
                }
                CtxTerm::CaseBranch(_, s, c0, c1, ce) => {
                    acc.extend(s.free_vars());
                    go(c0, acc);
                    go(c1, acc);
                    go(ce, acc);
                }
            }
        }
        let mut acc = BTreeSet::new();
        go(self, &mut acc);
        acc
    }
}

/// Substitute the context `c` for the (at most one, by typing) free
/// occurrence of `x` in `body`, producing a context. If `x` is base-typed
/// and occurs several times this would duplicate the hole, so callers must
/// only use it for variables known to occur at most once.
pub fn subst_ctx_for_var(body: &Term, x: &str, c: &CtxTerm) -> CtxTerm {
    match body {
        Term::Var(y) if y == x => c.clone(),
        Term::Var(_) | Term::StrLit(_) | Term::Rand => CtxTerm::Term(body.clone()),
        Term::Prepend0(s) => wrap1(s, x, c, body, CtxTerm::Prepend0),
        Term::Prepend1(s) => wrap1(s, x, c, body, CtxTerm::Prepend1),
        Term::Tail(s) => wrap1(s, x, c, body, CtxTerm::Tail),
        Term::App(f, a) => {
            if f.free_vars().contains(x) {
                CtxTerm::AppL(Box::new(subst_ctx_for_var(f, x, c)), (**a).clone())
            } else if a.free_vars().contains(x) {
                CtxTerm::AppR((**f).clone(), Box::new(subst_ctx_for_var(a, x, c)))
            } else {
                CtxTerm::Term(body.clone())
            }
        }
        Term::Lam(y, asp, ty, b) => {
            if y == x || !b.free_vars().contains(x) {
                CtxTerm::Term(body.clone())
            } else {
                CtxTerm::Lam(y.clone(), *asp, ty.clone(), Box::new(subst_ctx_for_var(b, x, c)))
            }
        }
        Term::Case(an, s, t0, t1, te) => {
            if s.free_vars().contains(x) {
                CtxTerm::CaseScrut(
                    an.clone(),
                    Box::new(subst_ctx_for_var(s, x, c)),
                    (**t0).clone(),
                    (**t1).clone(),
                    (**te).clone(),
                )
            } else if t0.free_vars().contains(x)
                || t1.free_vars().contains(x)
                || te.free_vars().contains(x)
            {
                CtxTerm::CaseBranch(
                    an.clone(),
                    (**s).clone(),
                    Box::new(subst_ctx_for_var(t0, x, c)),
                    Box::new(subst_ctx_for_var(t1, x, c)),
                    Box::new(subst_ctx_for_var(te, x, c)),
                )
            } else {
                CtxTerm::Term(body.clone())
            }
        }
        Term::Rec(an, s, t0, t1, te) => {
            if s.free_vars().contains(x) {
                CtxTerm::RecScrut(
                    an.clone(),
                    Box::new(subst_ctx_for_var(s, x, c)),
                    (**t0).clone(),
                    (**t1).clone(),
                    (**te).clone(),
                )
            } else {
                // Typing keeps higher-order variables out of rec step
                // functions and the hole out of the base case here.
                CtxTerm::Term(body.clone())
            }
        }
    }
}

fn wrap1(
    s: &Term,
    x: &str,
    c: &CtxTerm,
    whole: &Term,
    mk: fn(Box<CtxTerm>) -> CtxTerm,
) -> CtxTerm {
    if s.free_vars().contains(x) {
        mk(Box::new(subst_ctx_for_var(s, x, c)))
    } else {
        CtxTerm::Term(whole.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fill_and_count() {
        let c = CtxTerm::Prepend0(Box::new(CtxTerm::Hole));
        assert_eq!(c.hole_count(), 1);
        assert!(c.is_linear());
        assert_eq!(c.fill(&Term::lit("1")), Term::Prepend0(Box::new(Term::lit("1"))));
    }

    #[test]
    fn canon_collapses_pure_subtrees() {
        let c = CtxTerm::AppL(
            Box::new(CtxTerm::Term(Term::lam(
                "x",
                Aspect::Poly,
                Type::Str,
                Term::var("x"),
            ))),
            Term::lit("0"),
        );
        assert!(matches!(c.canon(), CtxTerm::Term(_)));
    }

    #[test]
    fn case_branch_holes_add_up() {
        let c = CtxTerm::CaseBranch(
            Type::Str,
            Term::Rand,
            Box::new(CtxTerm::Hole),
            Box::new(CtxTerm::Hole),
            Box::new(CtxTerm::Term(Term::lit(""))),
        );
        assert_eq!(c.hole_count(), 2);
        assert!(!c.is_linear());
    }
}
