//! Exact evaluation of closed terms to value distributions, and the
//! single-step reduction on term distributions used by the trace and
//! context machines.
//!
//! Big-step evaluation follows the distribution semantics rule for rule:
//! values are point masses, `rand` the fair coin, application convolves
//! function, argument, and body distributions, the string operators map over
//! supports (`tail` merges), `case` mixes branch distributions by head-bit
//! mass, and `rec` unrolls structurally. Branches with zero guard mass are
//! skipped, which agrees with the small-step discipline. Evaluation
//! memoizes on alpha-canonical closed subterms within one top-level call.

use serde::Serialize;

use crate::dist::{rat, rat_json, rat_one, Dist, Rat, RatJson};
use crate::syntax::ast::{str_tail, Term};
use crate::syntax::pretty::pretty;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StepBudget(pub u64);

impl StepBudget {
    pub const DEFAULT: StepBudget = StepBudget(10_000_000);
}

impl Default for StepBudget {
    fn default() -> Self {
        Self::DEFAULT
    }
}

#[derive(Debug, Clone, thiserror::Error, PartialEq)]
pub enum EvalError {
    #[error("step budget of {budget} exhausted while evaluating `{at}`")]
    BudgetExhausted { budget: u64, at: String },
    #[error("stuck term `{at}`: {reason}")]
    Stuck { at: String, reason: String },
    #[error("term is not closed: free variable `{name}`")]
    Open { name: String },
}

struct Evaluator {
    memo: std::collections::BTreeMap<Term, Dist<Term>>,
    remaining: u64,
    budget: u64,
}

impl Evaluator {
    fn new(budget: StepBudget) -> Self {
        Evaluator {
            memo: std::collections::BTreeMap::new(),
            remaining: budget.0,
            budget: budget.0,
        }
    }

    fn tick(&mut self, at: &Term) -> Result<(), EvalError> {
        if self.remaining == 0 {
            return Err(EvalError::BudgetExhausted {
                budget: self.budget,
                at: pretty(at),
            });
        }
        self.remaining -= 1;
        Ok(())
    }

    fn eval(&mut self, t: &Term) -> Result<Dist<Term>, EvalError> {
        self.tick(t)?;
        if t.is_value() {
            return Ok(Dist::point(t.clone()));
        }
        if let Some(d) = self.memo.get(t) {
            return Ok(d.clone());
        }
        let result = self.eval_uncached(t)?;
        self.memo.insert(t.clone(), result.clone());
        Ok(result)
    }

    fn eval_uncached(&mut self, t: &Term) -> Result<Dist<Term>, EvalError> {
        match t {
            Term::Var(x) => Err(EvalError::Open { name: x.clone() }),
            Term::StrLit(_) | Term::Lam(..) => unreachable!("values handled by caller"),
            Term::Rand => Ok(Dist::from_entries(vec![
                (Term::lit("0"), rat(1, 2)),
                (Term::lit("1"), rat(1, 2)),
            ])),
            Term::Prepend0(s) => self.eval_prefix(t, s, |m| format!("0{m}")),
            Term::Prepend1(s) => self.eval_prefix(t, s, |m| format!("1{m}")),
            Term::Tail(s) => self.eval_prefix(t, s, |m| str_tail(m).to_string()),
            Term::App(f, a) => {
                let df = self.eval(f)?;
                let da = self.eval(a)?;
                let mut parts = Vec::new();
                for (fv, pf) in df.iter() {
                    let Term::Lam(x, _, _, body) = fv else {
                        return Err(EvalError::Stuck {
                            at: pretty(t),
                            reason: format!("applied non-function `{}`", pretty(fv)),
                        });
                    };
                    for (av, pa) in da.iter() {
                        let res = self.eval(&body.subst(x, av))?;
                        parts.push((pf * pa, res));
                    }
                }
                Ok(Dist::mix(parts))
            }
            Term::Case(_, scrut, t0, t1, te) => {
                let ds = self.eval(scrut)?;
                let (p0, p1, pe) = head_masses(&ds, t)?;
                let mut parts = Vec::new();
                for (p, branch) in [(p0, t0), (p1, t1), (pe, te)] {
                    if !p.is_zero() {
                        parts.push((p, self.eval(branch)?));
                    }
                }
                Ok(Dist::mix(parts))
            }
            Term::Rec(annot, scrut, t0, t1, te) => {
                let ds = self.eval(scrut)?;
                let mut parts = Vec::new();
                for (v, p) in ds.iter() {
                    let Term::StrLit(m) = v else {
                        return Err(EvalError::Stuck {
                            at: pretty(t),
                            reason: format!("recursion on non-string `{}`", pretty(v)),
                        });
                    };
                    let unrolled = if m.is_empty() {
                        (**te).clone()
                    } else {
                        let step = if m.starts_with('0') { t0 } else { t1 };
                        let rest = Term::rec(
                            annot.clone(),
                            Term::lit(str_tail(m)),
                            (**t0).clone(),
                            (**t1).clone(),
                            (**te).clone(),
                        );
                        Term::app(Term::app((**step).clone(), Term::lit(m)), rest)
                    };
                    parts.push((p.clone(), self.eval(&unrolled)?));
                }
                Ok(Dist::mix(parts))
            }
        }
    }

    fn eval_prefix(
        &mut self,
        whole: &Term,
        inner: &Term,
        f: impl Fn(&str) -> String,
    ) -> Result<Dist<Term>, EvalError> {
        let d = self.eval(inner)?;
        let mut pairs = Vec::new();
        for (v, p) in d.iter() {
            let Term::StrLit(m) = v else {
                return Err(EvalError::Stuck {
                    at: pretty(whole),
                    reason: format!("string operation on `{}`", pretty(v)),
                });
            };
            pairs.push((Term::StrLit(f(m)), p.clone()));
        }
        Ok(Dist::from_entries(pairs))
    }
}

fn head_masses(ds: &Dist<Term>, at: &Term) -> Result<(Rat, Rat, Rat), EvalError> {
    let mut p0 = crate::dist::rat_zero();
    let mut p1 = crate::dist::rat_zero();
    let mut pe = crate::dist::rat_zero();
    for (v, p) in ds.iter() {
        let Term::StrLit(m) = v else {
            return Err(EvalError::Stuck {
                at: pretty(at),
                reason: format!("case on non-string `{}`", pretty(v)),
            });
        };
        match m.chars().next() {
            Some('0') => p0 += p,
            Some('1') => p1 += p,
            _ => pe += p,
        }
    }
    Ok((p0, p1, pe))
}

/// The unique value distribution of a closed term.
pub fn eval(t: &Term, budget: StepBudget) -> Result<Dist<Term>, EvalError> {
    if let Some(name) = t.free_vars().into_iter().next() {
        return Err(EvalError::Open { name });
    }
    Evaluator::new(budget).eval(t)
}

/// Normalize a term distribution by evaluating every support element and
/// mixing the results.
pub fn normalize(td: &Dist<Term>, budget: StepBudget) -> Result<Dist<Term>, EvalError> {
    let mut evaluator = Evaluator::new(budget);
    let parts = td
        .iter()
        .map(|(t, p)| Ok((p.clone(), evaluator.eval(t)?)))
        .collect::<Result<Vec<_>, EvalError>>()?;
    Ok(Dist::mix(parts))
}

/// One reduction of a single term at the leftmost-innermost redex under
/// call-by-value, left-to-right order. Returns the successor terms with
/// their probabilities, or `None` for values.
pub fn step_term(t: &Term) -> Result<Option<Vec<(Term, Rat)>>, EvalError> {
    if t.is_value() {
        return Ok(None);
    }
    let res = match t {
        Term::Var(x) => return Err(EvalError::Open { name: x.clone() }),
        Term::StrLit(_) | Term::Lam(..) => unreachable!(),
        Term::Rand => vec![
            (Term::lit("0"), rat(1, 2)),
            (Term::lit("1"), rat(1, 2)),
        ],
        Term::Prepend0(s) => step_under(s, t, |i| Term::Prepend0(Box::new(i)), |m| {
            Term::StrLit(format!("0{m}"))
        })?,
        Term::Prepend1(s) => step_under(s, t, |i| Term::Prepend1(Box::new(i)), |m| {
            Term::StrLit(format!("1{m}"))
        })?,
        Term::Tail(s) => step_under(s, t, |i| Term::Tail(Box::new(i)), |m| {
            Term::StrLit(str_tail(m).to_string())
        })?,
        Term::App(f, a) => {
            if let Some(steps) = step_term(f)? {
                steps
                    .into_iter()
                    .map(|(fi, p)| (Term::app(fi, (**a).clone()), p))
                    .collect()
            } else if let Some(steps) = step_term(a)? {
                steps
                    .into_iter()
                    .map(|(ai, p)| (Term::app((**f).clone(), ai), p))
                    .collect()
            } else {
                match &**f {
                    Term::Lam(x, _, _, body) => vec![(body.subst(x, a), rat_one())],
                    other => {
                        return Err(EvalError::Stuck {
                            at: pretty(t),
                            reason: format!("applied non-function `{}`", pretty(other)),
                        })
                    }
                }
            }
        }
        Term::Case(an, scrut, t0, t1, te) => {
            if let Some(steps) = step_term(scrut)? {
                steps
                    .into_iter()
                    .map(|(si, p)| {
                        (
                            Term::case(an.clone(), si, (**t0).clone(), (**t1).clone(), (**te).clone()),
                            p,
                        )
                    })
                    .collect()
            } else {
                let m = scrut.as_lit().ok_or_else(|| EvalError::Stuck {
                    at: pretty(t),
                    reason: "case on non-string value".into(),
                })?;
                let branch = match m.chars().next() {
                    Some('0') => t0,
                    Some('1') => t1,
                    _ => te,
                };
                vec![((**branch).clone(), rat_one())]
            }
        }
        Term::Rec(an, scrut, t0, t1, te) => {
            if let Some(steps) = step_term(scrut)? {
                steps
                    .into_iter()
                    .map(|(si, p)| {
                        (
                            Term::rec(an.clone(), si, (**t0).clone(), (**t1).clone(), (**te).clone()),
                            p,
                        )
                    })
                    .collect()
            } else {
                let m = scrut.as_lit().ok_or_else(|| EvalError::Stuck {
                    at: pretty(t),
                    reason: "recursion on non-string value".into(),
                })?;
                if m.is_empty() {
                    vec![((**te).clone(), rat_one())]
                } else {
                    let step = if m.starts_with('0') { t0 } else { t1 };
                    let rest = Term::rec(
                        an.clone(),
                        Term::lit(str_tail(m)),
                        (**t0).clone(),
                        (**t1).clone(),
                        (**te).clone(),
                    );
                    vec![(
                        Term::app(Term::app((**step).clone(), Term::lit(m)), rest),
                        rat_one(),
                    )]
                }
            }
        }
    };
    Ok(Some(res))
}

fn step_under(
    inner: &Term,
    _whole: &Term,
    wrap: impl Fn(Term) -> Term,
    on_lit: impl Fn(&str) -> Term,
) -> Result<Vec<(Term, Rat)>, EvalError> {
    if let Some(steps) = step_term(inner)? {
        Ok(steps.into_iter().map(|(i, p)| (wrap(i), p)).collect())
    } else {
        match inner.as_lit() {
            Some(m) => Ok(vec![(on_lit(m), rat_one())]),
            None => Err(EvalError::Stuck {
                at: pretty(inner),
                reason: "string operation on a function value".into(),
            }),
        }
    }
}

/// Result of stepping a term distribution.
#[derive(Debug, Clone, PartialEq)]
pub enum StepOutcome {
    Stepped(Dist<Term>),
    /// Every support element is a value; the distribution is returned
    /// unchanged.
    Normal(Dist<Term>),
}

/// One internal move: the first non-value support element (in key order) is
/// reduced once and its mass redistributed.
pub fn step(td: &Dist<Term>) -> Result<StepOutcome, EvalError> {
    let picked = td.iter().find(|(t, _)| !t.is_value());
    let Some((t, p)) = picked else {
        return Ok(StepOutcome::Normal(td.clone()));
    };
    let succs = step_term(t)?.expect("picked element is not a value");
    let t = t.clone();
    let p = p.clone();
    let mut pairs: Vec<(Term, Rat)> = Vec::new();
    for (u, q) in td.iter() {
        if *u != t {
            pairs.push((u.clone(), q.clone()));
        }
    }
    for (ti, pi) in succs {
        pairs.push((ti, &p * pi));
    }
    Ok(StepOutcome::Stepped(Dist::from_entries(pairs)))
}

/// Iterate `step` to the value-only fixpoint.
pub fn step_to_normal(td: &Dist<Term>, max_steps: u64) -> Result<Dist<Term>, EvalError> {
    let mut cur = td.clone();
    for _ in 0..max_steps {
        match step(&cur)? {
            StepOutcome::Stepped(next) => cur = next,
            StepOutcome::Normal(done) => return Ok(done),
        }
    }
    Err(EvalError::BudgetExhausted {
        budget: max_steps,
        at: "step_to_normal".into(),
    })
}

/// View a value distribution as a string distribution; fails if any support
/// element is a function value.
pub fn string_dist(d: &Dist<Term>) -> Result<Dist<String>, EvalError> {
    let mut pairs = Vec::new();
    for (v, p) in d.iter() {
        match v.as_lit() {
            Some(m) => pairs.push((m.to_string(), p.clone())),
            None => {
                return Err(EvalError::Stuck {
                    at: pretty(v),
                    reason: "expected a string value".into(),
                })
            }
        }
    }
    Ok(Dist::from_entries(pairs))
}

/// Canonical JSON rendering of a value distribution: entries sorted by
/// pretty-printed value, exact rational masses.
#[derive(Debug, Clone, Serialize)]
pub struct DistJson {
    pub dist: Vec<DistEntryJson>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DistEntryJson {
    pub value: String,
    pub num: serde_json::Value,
    pub den: serde_json::Value,
    pub approx: f64,
}

pub fn dist_json(d: &Dist<Term>) -> DistJson {
    let mut rows: Vec<DistEntryJson> = d
        .iter()
        .map(|(v, p)| {
            let RatJson { num, den, approx } = rat_json(p);
            DistEntryJson {
                value: pretty(v),
                num,
                den,
                approx,
            }
        })
        .collect();
    rows.sort_by(|a, b| a.value.cmp(&b.value));
    DistJson { dist: rows }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::ast::{Aspect, Type};

    fn ev(t: &Term) -> Dist<Term> {
        eval(t, StepBudget::default()).unwrap()
    }

    #[test]
    fn rand_is_the_fair_coin() {
        let d = ev(&Term::Rand);
        assert_eq!(d.mass(&Term::lit("0")), rat(1, 2));
        assert_eq!(d.mass(&Term::lit("1")), rat(1, 2));
    }

    #[test]
    fn values_are_point_masses() {
        let v = Term::lam("x", Aspect::Poly, Type::Str, Term::var("x"));
        assert_eq!(ev(&v), Dist::point(v));
    }

    #[test]
    fn identity_application() {
        let t = Term::app(
            Term::lam("x", Aspect::Poly, Type::Str, Term::var("x")),
            Term::lit("0"),
        );
        assert_eq!(ev(&t), Dist::point(Term::lit("0")));
    }

    #[test]
    fn tail_merges_mass() {
        // tail(rand) sends both "0" and "1" to the empty string.
        let t = Term::Tail(Box::new(Term::Rand));
        assert_eq!(ev(&t), Dist::point(Term::lit("")));
    }

    #[test]
    fn tail_of_empty_is_empty() {
        let t = Term::Tail(Box::new(Term::lit("")));
        assert_eq!(ev(&t), Dist::point(Term::lit("")));
    }

    #[test]
    fn case_dispatches_on_head_bit() {
        let t = Term::case(
            Type::Str,
            Term::Rand,
            Term::lit("a0".replace('a', "0").as_str()),
            Term::lit("1"),
            Term::lit(""),
        );
        let d = ev(&t);
        assert_eq!(d.mass(&Term::lit("00")), rat(1, 2));
        assert_eq!(d.mass(&Term::lit("1")), rat(1, 2));
    }

    #[test]
    fn budget_exhaustion_reports() {
        let t = Term::app(
            Term::lam("x", Aspect::Poly, Type::Str, Term::var("x")),
            Term::lit("0"),
        );
        let err = eval(&t, StepBudget(1)).unwrap_err();
        assert!(matches!(err, EvalError::BudgetExhausted { .. }));
    }

    #[test]
    fn open_terms_are_rejected() {
        assert!(matches!(
            eval(&Term::var("x"), StepBudget::default()),
            Err(EvalError::Open { .. })
        ));
    }

    #[test]
    fn step_rand_splits() {
        let td = Dist::point(Term::Rand);
        match step(&td).unwrap() {
            StepOutcome::Stepped(d) => {
                assert_eq!(d.mass(&Term::lit("0")), rat(1, 2));
                assert_eq!(d.mass(&Term::lit("1")), rat(1, 2));
            }
            StepOutcome::Normal(_) => panic!("rand must step"),
        }
    }

    #[test]
    fn step_fixpoint_on_values() {
        let td = Dist::point(Term::lit("0"));
        assert!(matches!(step(&td).unwrap(), StepOutcome::Normal(_)));
    }

    #[test]
    fn beta_step() {
        let t = Term::app(
            Term::lam("x", Aspect::Poly, Type::Str, Term::var("x")),
            Term::lit("0"),
        );
        match step(&Dist::point(t)).unwrap() {
            StepOutcome::Stepped(d) => assert_eq!(d, Dist::point(Term::lit("0"))),
            _ => panic!("expected a step"),
        }
    }
}
