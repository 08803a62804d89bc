//! Programs: ordered named definitions plus an optional entry point.
//! Elaboration desugars each body and inlines references to earlier
//! definitions, so every elaborated body is closed.

use std::collections::BTreeMap;

use super::ast::{Term, Type};
use super::desugar::desugar;
use super::parser::{parse_program_str, ParseError, Span, SurfaceProgram};

#[derive(Debug, Clone)]
pub struct Def {
    pub name: String,
    pub declared: Type,
    /// Core term with earlier definitions inlined; closed for well-formed
    /// programs.
    pub body: Term,
    pub span: Span,
}

#[derive(Debug, Clone, Default)]
pub struct Program {
    pub defs: Vec<Def>,
    pub main: Option<String>,
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum ProgramError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("{span}: duplicate definition of `{name}`")]
    Duplicate { name: String, span: Span },
    #[error("{span}: unbound name `{name}`")]
    Unbound { name: String, span: Span },
}

impl Program {
    pub fn parse(src: &str) -> Result<Program, ProgramError> {
        Self::elaborate(parse_program_str(src)?)
    }

    pub fn elaborate(surface: SurfaceProgram) -> Result<Program, ProgramError> {
        let mut env: BTreeMap<String, Term> = BTreeMap::new();
        let mut defs = Vec::new();
        for d in &surface.defs {
            if env.contains_key(&d.name) {
                return Err(ProgramError::Duplicate {
                    name: d.name.clone(),
                    span: d.span,
                });
            }
            let mut body = desugar(&d.body);
            body = inline(&body, &env);
            if let Some(free) = body.free_vars().into_iter().next() {
                return Err(ProgramError::Unbound {
                    name: free,
                    span: d.span,
                });
            }
            env.insert(d.name.clone(), body.clone());
            defs.push(Def {
                name: d.name.clone(),
                declared: d.declared.clone(),
                body,
                span: d.span,
            });
        }
        if let Some((name, span)) = &surface.main {
            if !env.contains_key(name) {
                return Err(ProgramError::Unbound {
                    name: name.clone(),
                    span: *span,
                });
            }
        }
        Ok(Program {
            defs,
            main: surface.main.map(|(n, _)| n),
        })
    }

    pub fn get(&self, name: &str) -> Option<&Def> {
        self.defs.iter().find(|d| d.name == name)
    }

    /// Parse a standalone term in this program's scope: desugar, then
    /// inline any program names it mentions.
    pub fn term_in_scope(&self, src: &str) -> Result<Term, ProgramError> {
        let surface = super::parser::parse_term_str(src)?;
        let core = desugar(&surface);
        let env: BTreeMap<String, Term> = self
            .defs
            .iter()
            .map(|d| (d.name.clone(), d.body.clone()))
            .collect();
        let inlined = inline(&core, &env);
        if let Some(free) = inlined.free_vars().into_iter().next() {
            return Err(ProgramError::Unbound {
                name: free,
                span: surface.span,
            });
        }
        Ok(inlined)
    }

    /// Append another program's definitions after this one's (used to put a
    /// user file in scope of the prelude). Duplicate names are an error.
    pub fn extended_with(&self, other: &SurfaceProgram) -> Result<Program, ProgramError> {
        let mut env: BTreeMap<String, Term> = self
            .defs
            .iter()
            .map(|d| (d.name.clone(), d.body.clone()))
            .collect();
        let mut defs = self.defs.clone();
        for d in &other.defs {
            if env.contains_key(&d.name) {
                return Err(ProgramError::Duplicate {
                    name: d.name.clone(),
                    span: d.span,
                });
            }
            let mut body = desugar(&d.body);
            body = inline(&body, &env);
            if let Some(free) = body.free_vars().into_iter().next() {
                return Err(ProgramError::Unbound {
                    name: free,
                    span: d.span,
                });
            }
            env.insert(d.name.clone(), body.clone());
            defs.push(Def {
                name: d.name.clone(),
                declared: d.declared.clone(),
                body,
                span: d.span,
            });
        }
        let main = other
            .main
            .as_ref()
            .map(|(n, _)| n.clone())
            .or_else(|| self.main.clone());
        Ok(Program { defs, main })
    }
}

fn inline(t: &Term, env: &BTreeMap<String, Term>) -> Term {
    let mut out = t.clone();
    // Free occurrences of defined names become the (closed) definition.
    for name in t.free_vars() {
        if let Some(body) = env.get(&name) {
            out = out.subst(&name, body);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn definitions_inline_in_order() {
        let p = Program::parse(
            "let id : []Str -> Str = \\x:[]Str. x ;\nlet two : Str = id \"01\" ;",
        )
        .unwrap();
        assert!(p.get("two").unwrap().body.is_closed());
        assert_eq!(
            p.get("two").unwrap().body,
            Term::app(
                Term::lam(
                    "x",
                    crate::syntax::ast::Aspect::Poly,
                    Type::Str,
                    Term::var("x")
                ),
                Term::lit("01")
            )
        );
    }

    #[test]
    fn unbound_reference_is_reported() {
        let err = Program::parse("let a : Str = missing ;").unwrap_err();
        assert!(matches!(err, ProgramError::Unbound { name, .. } if name == "missing"));
    }

    #[test]
    fn later_definitions_do_not_leak_backwards() {
        let err = Program::parse("let a : Str = b ;\nlet b : Str = \"0\" ;").unwrap_err();
        assert!(matches!(err, ProgramError::Unbound { name, .. } if name == "b"));
    }
}
