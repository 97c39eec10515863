use super::ast::{Declaration, Op, Script, Sort, Term, TermKind};
use super::SortError;

/// Result sort of an operator application, or a message describing the
/// mismatch.
pub(crate) fn app_sort(op: &Op, args: &[Sort], decl: Option<&Declaration>) -> Result<Sort, String> {
    let same = |what: &str| -> Result<Sort, String> {
        let first = args[0];
        if let Some(bad) = args.iter().find(|s| **s != first) {
            return Err(format!("`{what}` applied to mixed sorts {first} and {bad}"));
        }
        Ok(first)
    };
    let arity = |min: usize| -> Result<(), String> {
        if args.len() < min {
            Err(format!(
                "`{}` expects at least {min} argument(s), got {}",
                op.symbol(),
                args.len()
            ))
        } else {
            Ok(())
        }
    };
    match op {
        Op::Add | Op::Mul | Op::Sub => {
            arity(if matches!(op, Op::Sub) { 1 } else { 2 })?;
            let s = same(op.symbol())?;
            if !s.is_numeric() {
                return Err(format!("`{}` expects numeric arguments, got {s}", op.symbol()));
            }
            Ok(s)
        }
        Op::Lt | Op::Le | Op::Gt | Op::Ge => {
            arity(2)?;
            let s = same(op.symbol())?;
            if !s.is_numeric() {
                return Err(format!("`{}` expects numeric arguments, got {s}", op.symbol()));
            }
            Ok(Sort::Bool)
        }
        Op::Eq | Op::Distinct => {
            arity(2)?;
            same(op.symbol())?;
            Ok(Sort::Bool)
        }
        Op::Not | Op::And | Op::Or | Op::Implies => {
            match op {
                Op::Not if args.len() != 1 => {
                    return Err(format!("`not` expects 1 argument, got {}", args.len()))
                }
                Op::Implies => arity(2)?,
                _ => arity(1)?,
            }
            if let Some(bad) = args.iter().find(|s| **s != Sort::Bool) {
                return Err(format!("`{}` expects Bool arguments, got {bad}", op.symbol()));
            }
            Ok(Sort::Bool)
        }
        Op::Apply(name) => {
            let decl = decl.ok_or_else(|| format!("undeclared function `{name}`"))?;
            if decl.args.as_slice() != args {
                let want: Vec<_> = decl.args.iter().map(|s| s.name()).collect();
                let got: Vec<_> = args.iter().map(|s| s.name()).collect();
                return Err(format!(
                    "`{name}` expects ({}) but is applied to ({})",
                    want.join(" "),
                    got.join(" ")
                ));
            }
            Ok(decl.result)
        }
    }
}

pub(crate) fn div_sort(num: Sort, den: Sort) -> Result<Sort, String> {
    if num != den || !num.is_numeric() {
        return Err(format!("`/` applied to {num} and {den}"));
    }
    Ok(num)
}

pub(crate) fn ite_sort(cond: Sort, then: Sort, els: Sort) -> Result<Sort, String> {
    if cond != Sort::Bool {
        return Err(format!("`ite` condition has sort {cond}"));
    }
    if then != els {
        return Err(format!("`ite` branches have sorts {then} and {els}"));
    }
    Ok(then)
}

/// Recomputes the sort of `t` bottom-up against `decls`, checking it
/// against every stored annotation.
pub fn sort_of(t: &Term, decls: &[Declaration]) -> Result<Sort, SortError> {
    check(t, decls, &mut Vec::new())
}

fn check(t: &Term, decls: &[Declaration], bound: &mut Vec<(String, Sort)>) -> Result<Sort, SortError> {
    let err = |msg: String| SortError::new(t.loc, msg);
    let computed = match &t.kind {
        TermKind::Num(_) => {
            if !t.sort.is_numeric() {
                return Err(err(format!("numeric literal annotated {}", t.sort)));
            }
            t.sort
        }
        TermKind::Bool(_) => Sort::Bool,
        TermKind::Var(name) => {
            if let Some((_, s)) = bound.iter().rev().find(|(n, _)| n == name) {
                *s
            } else {
                match decls.iter().find(|d| &d.name == name) {
                    Some(d) if d.args.is_empty() => d.result,
                    Some(_) => return Err(err(format!("function `{name}` used as a constant"))),
                    None => return Err(err(format!("undeclared symbol `{name}`"))),
                }
            }
        }
        TermKind::App(op, args) => {
            let sorts = args
                .iter()
                .map(|a| check(a, decls, bound))
                .collect::<Result<Vec<_>, _>>()?;
            let decl = match op {
                Op::Apply(name) => decls.iter().find(|d| &d.name == name),
                _ => None,
            };
            app_sort(op, &sorts, decl).map_err(err)?
        }
        TermKind::Div(n, d) => {
            let ns = check(n, decls, bound)?;
            let ds = check(d, decls, bound)?;
            div_sort(ns, ds).map_err(err)?
        }
        TermKind::Ite(c, a, b) => {
            let cs = check(c, decls, bound)?;
            let a_s = check(a, decls, bound)?;
            let bs = check(b, decls, bound)?;
            ite_sort(cs, a_s, bs).map_err(err)?
        }
        TermKind::Quant(_, vars, body) => {
            let depth = bound.len();
            bound.extend(vars.iter().cloned());
            let bs = check(body, decls, bound);
            bound.truncate(depth);
            if bs? != Sort::Bool {
                return Err(err("quantifier body is not Bool".into()));
            }
            Sort::Bool
        }
    };
    if computed != t.sort {
        return Err(err(format!(
            "term annotated {} but computes to {computed}",
            t.sort
        )));
    }
    Ok(computed)
}

/// Checks every assertion is well-sorted and Bool.
pub fn check_script(s: &Script) -> Result<(), SortError> {
    for a in &s.assertions {
        if sort_of(a, &s.declarations)? != Sort::Bool {
            return Err(SortError::new(a.loc, "assertion is not Bool"));
        }
    }
    Ok(())
}
