use std::collections::{HashMap, HashSet};

use super::ast::{
    Attribute, AttributeCommand, Declaration, Loc, Op, Quantifier, Script, Sort, Term, TermKind,
    UnsupportedCommand,
};
use super::sexpr::{read_all, Atom, SExpr, SExprKind};
use super::sorts::{app_sort, div_sort, ite_sort};
use super::{ParseError, SortError};
use crate::rational::Rational;

/// Sort given to bare numerals under `logic`: `Real` for pure real
/// logics (and when no logic is set), `Int` otherwise.
pub fn numeral_sort(logic: Option<&str>) -> Sort {
    match logic {
        None => Sort::Real,
        Some(l) => {
            let arith = arith_part(l);
            if arith.contains('R') && !arith.contains('I') {
                Sort::Real
            } else {
                Sort::Int
            }
        }
    }
}

/// Logics whose arithmetic is over integers only (`QF_NIA`, `LIA`, ...).
pub fn is_integer_logic(logic: Option<&str>) -> bool {
    logic.is_some_and(|l| {
        let arith = arith_part(l);
        arith.contains('I') && !arith.contains('R')
    })
}

fn arith_part(logic: &str) -> &str {
    let l = logic.strip_prefix("QF_").unwrap_or(logic);
    let l = l.strip_prefix("AX").unwrap_or(l);
    let l = l.strip_prefix("UF").unwrap_or(l);
    let l = l.strip_prefix("BV").unwrap_or(l);
    l.strip_prefix("DT").unwrap_or(l)
}

struct Define {
    params: Vec<(String, Sort)>,
    body: Term,
}

struct Elaborator<'s> {
    src: &'s str,
    script: Script,
    decls: HashMap<String, Declaration>,
    defines: HashMap<String, Define>,
    /// Symbols introduced by commands we do not interpret.
    opaque: HashSet<String>,
    bound: Vec<(String, Sort)>,
}

/// Parses and sort-checks an SMT-LIB2 script.
pub fn parse_script(text: &str) -> Result<Script, ParseError> {
    let mut el = Elaborator {
        src: text,
        script: Script::default(),
        decls: HashMap::new(),
        defines: HashMap::new(),
        opaque: HashSet::new(),
        bound: Vec::new(),
    };
    for cmd in read_all(text)? {
        if !el.command(&cmd)? {
            break;
        }
    }
    Ok(el.script)
}

/// Parses a single term against the declarations and logic of `context`.
pub fn parse_term(text: &str, context: &Script) -> Result<Term, ParseError> {
    let mut el = Elaborator {
        src: text,
        script: Script {
            logic: context.logic.clone(),
            ..Script::default()
        },
        decls: context
            .declarations
            .iter()
            .map(|d| (d.name.clone(), d.clone()))
            .collect(),
        defines: HashMap::new(),
        opaque: HashSet::new(),
        bound: Vec::new(),
    };
    let exprs = read_all(text)?;
    match exprs.as_slice() {
        [e] => el.term(e),
        _ => Err(ParseError::syntax(Loc::new(1, 1), "expected exactly one term")),
    }
}

fn sort_err(loc: Loc, msg: impl Into<String>) -> ParseError {
    ParseError::Sort(SortError::new(loc, msg))
}

impl<'s> Elaborator<'s> {
    fn logic(&self) -> Option<&str> {
        self.script.logic.as_deref()
    }

    /// Returns `false` on `(exit)`.
    fn command(&mut self, cmd: &SExpr) -> Result<bool, ParseError> {
        let items = cmd
            .list()
            .ok_or_else(|| ParseError::syntax(cmd.loc, "expected a command"))?;
        let head = items
            .first()
            .and_then(|h| h.symbol())
            .ok_or_else(|| ParseError::syntax(cmd.loc, "expected a command name"))?;
        let args = &items[1..];
        match head {
            "set-logic" => {
                let [name] = args else {
                    return Err(ParseError::syntax(cmd.loc, "set-logic expects one symbol"));
                };
                let name = name
                    .symbol()
                    .ok_or_else(|| ParseError::syntax(name.loc, "expected logic name"))?;
                self.script.logic = Some(name.to_string());
            }
            "set-info" | "set-option" => {
                let key = match args.first().map(|a| &a.kind) {
                    Some(SExprKind::Atom(Atom::Keyword(k))) => k.clone(),
                    _ => return Err(ParseError::syntax(cmd.loc, format!("{head} expects a keyword"))),
                };
                let value = match args {
                    [_] => None,
                    [_, v] => Some(v.text(self.src).to_string()),
                    _ => return Err(ParseError::syntax(cmd.loc, format!("malformed {head}"))),
                };
                self.script.metadata.push(Attribute {
                    command: if head == "set-info" {
                        AttributeCommand::SetInfo
                    } else {
                        AttributeCommand::SetOption
                    },
                    key,
                    value,
                });
            }
            "declare-fun" | "declare-const" => {
                let (name, arg_sorts, result) = match (head, args) {
                    ("declare-fun", [n, a, r]) => {
                        let a = a
                            .list()
                            .ok_or_else(|| ParseError::syntax(a.loc, "expected argument sorts"))?;
                        (n, a.iter().collect::<Vec<_>>(), r)
                    }
                    ("declare-const", [n, r]) => (n, vec![], r),
                    _ => return Err(ParseError::syntax(cmd.loc, format!("malformed {head}"))),
                };
                let name = name
                    .symbol()
                    .ok_or_else(|| ParseError::syntax(name.loc, "expected a symbol"))?
                    .to_string();
                let sorts: Option<Vec<Sort>> = arg_sorts.iter().map(|s| self.sort(s).ok()).collect();
                match (sorts, self.sort(result)) {
                    (Some(args), Ok(result)) => {
                        self.declare(Declaration::function(name, args, result), cmd.loc)?;
                    }
                    _ => {
                        self.opaque.insert(name);
                        self.record_unsupported(cmd);
                    }
                }
            }
            "define-fun" => {
                let [name, params, result, body] = args else {
                    return Err(ParseError::syntax(cmd.loc, "malformed define-fun"));
                };
                let name = name
                    .symbol()
                    .ok_or_else(|| ParseError::syntax(name.loc, "expected a symbol"))?
                    .to_string();
                if self.is_declared(&name) {
                    return Err(ParseError::Duplicate { loc: cmd.loc, name });
                }
                let params = self.sorted_vars(params)?;
                let result = self.sort(result)?;
                let saved = std::mem::replace(&mut self.bound, params.clone());
                let body = self.term(body);
                self.bound = saved;
                let body = coerce_to(body?, result)?;
                self.defines.insert(name, Define { params, body });
            }
            "assert" => {
                let [t] = args else {
                    return Err(ParseError::syntax(cmd.loc, "assert expects one term"));
                };
                let t = self.term(t)?;
                if t.sort != Sort::Bool {
                    return Err(sort_err(t.loc, format!("assertion has sort {}", t.sort)));
                }
                self.script.assertions.push(t);
            }
            "check-sat" => self.script.check_sat = true,
            "exit" => return Ok(false),
            _ => self.record_unsupported(cmd),
        }
        Ok(true)
    }

    fn record_unsupported(&mut self, cmd: &SExpr) {
        self.script.unsupported.push(UnsupportedCommand {
            text: cmd.text(self.src).to_string(),
            loc: cmd.loc,
        });
    }

    fn is_declared(&self, name: &str) -> bool {
        self.decls.contains_key(name) || self.defines.contains_key(name)
    }

    fn declare(&mut self, d: Declaration, loc: Loc) -> Result<(), ParseError> {
        if self.is_declared(&d.name) {
            return Err(ParseError::Duplicate { loc, name: d.name });
        }
        self.decls.insert(d.name.clone(), d.clone());
        self.script.declarations.push(d);
        Ok(())
    }

    fn sort(&self, e: &SExpr) -> Result<Sort, ParseError> {
        e.symbol()
            .and_then(Sort::from_name)
            .ok_or_else(|| ParseError::Unsupported {
                loc: e.loc,
                what: format!("sort {}", e.text(self.src)),
            })
    }

    fn sorted_vars(&self, e: &SExpr) -> Result<Vec<(String, Sort)>, ParseError> {
        let items = e
            .list()
            .ok_or_else(|| ParseError::syntax(e.loc, "expected a list of sorted variables"))?;
        items
            .iter()
            .map(|v| match v.list() {
                Some([n, s]) => {
                    let name = n
                        .symbol()
                        .ok_or_else(|| ParseError::syntax(n.loc, "expected a variable name"))?;
                    Ok((name.to_string(), self.sort(s)?))
                }
                _ => Err(ParseError::syntax(v.loc, "expected (name Sort)")),
            })
            .collect()
    }

    fn term(&mut self, e: &SExpr) -> Result<Term, ParseError> {
        match &e.kind {
            SExprKind::Atom(atom) => self.atom(atom, e),
            SExprKind::List(items) => self.list(items, e),
        }
    }

    fn atom(&mut self, atom: &Atom, e: &SExpr) -> Result<Term, ParseError> {
        let loc = e.loc;
        match atom {
            Atom::Numeral(n) => {
                let v: Rational = n.parse().map_err(|_| ParseError::syntax(loc, "bad numeral"))?;
                Ok(Term::num(v, numeral_sort(self.logic())).at(loc))
            }
            Atom::Decimal(d) => {
                let v: Rational = d.parse().map_err(|_| ParseError::syntax(loc, "bad decimal"))?;
                Ok(Term::num(v, Sort::Real).at(loc))
            }
            Atom::Symbol(s) => self.symbol(s, loc),
            Atom::Keyword(_) | Atom::Str(_) | Atom::Bits(_) => Err(ParseError::Unsupported {
                loc,
                what: e.text(self.src).to_string(),
            }),
        }
    }

    fn symbol(&mut self, name: &str, loc: Loc) -> Result<Term, ParseError> {
        match name {
            "true" => return Ok(Term::bool(true).at(loc)),
            "false" => return Ok(Term::bool(false).at(loc)),
            _ => {}
        }
        if let Some((_, s)) = self.bound.iter().rev().find(|(n, _)| n == name) {
            return Ok(Term::var(name, *s).at(loc));
        }
        if let Some(def) = self.defines.get(name) {
            if !def.params.is_empty() {
                return Err(sort_err(loc, format!("`{name}` expects arguments")));
            }
            return Ok(def.body.clone());
        }
        if let Some(d) = self.decls.get(name) {
            if !d.args.is_empty() {
                return Err(sort_err(loc, format!("function `{name}` used as a constant")));
            }
            return Ok(Term::var(name, d.result).at(loc));
        }
        if self.opaque.contains(name) {
            return Err(ParseError::Unsupported {
                loc,
                what: format!("symbol {name} of unsupported sort"),
            });
        }
        Err(ParseError::Undeclared {
            loc,
            name: name.to_string(),
        })
    }

    fn list(&mut self, items: &[SExpr], e: &SExpr) -> Result<Term, ParseError> {
        let loc = e.loc;
        let Some(head) = items.first() else {
            return Err(ParseError::syntax(loc, "empty application"));
        };
        let Some(head) = head.symbol() else {
            return Err(ParseError::Unsupported {
                loc,
                what: e.text(self.src).to_string(),
            });
        };
        let args = &items[1..];
        match head {
            "let" => self.let_binding(args, loc),
            "forall" | "exists" => {
                let [vars, body] = args else {
                    return Err(ParseError::syntax(loc, format!("malformed {head}")));
                };
                let vars = self.sorted_vars(vars)?;
                if vars.is_empty() {
                    return Err(ParseError::syntax(loc, "quantifier binds no variables"));
                }
                let depth = self.bound.len();
                self.bound.extend(vars.iter().cloned());
                let body = self.term(body);
                self.bound.truncate(depth);
                let body = body?;
                if body.sort != Sort::Bool {
                    return Err(sort_err(body.loc, "quantifier body is not Bool"));
                }
                let q = if head == "forall" {
                    Quantifier::Forall
                } else {
                    Quantifier::Exists
                };
                Ok(Term::new(TermKind::Quant(q, vars, Box::new(body)), Sort::Bool).at(loc))
            }
            "!" => {
                let Some(t) = args.first() else {
                    return Err(ParseError::syntax(loc, "empty annotation"));
                };
                self.term(t)
            }
            "ite" => {
                let [c, t, f] = args else {
                    return Err(ParseError::syntax(loc, "ite expects 3 arguments"));
                };
                let c = self.term(c)?;
                let mut branches = unify_numeric(vec![self.term(t)?, self.term(f)?]);
                let f = branches.pop().unwrap();
                let t = branches.pop().unwrap();
                let sort = ite_sort(c.sort, t.sort, f.sort).map_err(|m| sort_err(loc, m))?;
                Ok(Term::new(TermKind::Ite(Box::new(c), Box::new(t), Box::new(f)), sort).at(loc))
            }
            "/" => {
                if args.len() < 2 {
                    return Err(ParseError::syntax(loc, "`/` expects at least 2 arguments"));
                }
                let terms = self.terms(args)?;
                let terms = unify_numeric(terms);
                let mut it = terms.into_iter();
                let mut acc = it.next().unwrap();
                for den in it {
                    let sort = div_sort(acc.sort, den.sort).map_err(|m| sort_err(loc, m))?;
                    if sort == Sort::Int && !is_integer_logic(self.logic()) {
                        return Err(sort_err(
                            loc,
                            format!(
                                "`/` over Int operands is not real division (logic {})",
                                self.logic().unwrap_or("unset")
                            ),
                        ));
                    }
                    acc = Term::new(TermKind::Div(Box::new(acc), Box::new(den)), sort).at(loc);
                }
                Ok(acc)
            }
            _ => {
                let op = match head {
                    "+" => Op::Add,
                    "-" => Op::Sub,
                    "*" => Op::Mul,
                    "<" => Op::Lt,
                    "<=" => Op::Le,
                    ">" => Op::Gt,
                    ">=" => Op::Ge,
                    "=" => Op::Eq,
                    "distinct" => Op::Distinct,
                    "not" => Op::Not,
                    "and" => Op::And,
                    "or" => Op::Or,
                    "=>" => Op::Implies,
                    name => return self.function_application(name, args, loc),
                };
                let terms = self.terms(args)?;
                let terms = unify_numeric(terms);
                let sorts: Vec<Sort> = terms.iter().map(|t| t.sort).collect();
                let sort = app_sort(&op, &sorts, None).map_err(|m| sort_err(loc, m))?;
                Ok(Term::new(TermKind::App(op, terms), sort).at(loc))
            }
        }
    }

    fn terms(&mut self, args: &[SExpr]) -> Result<Vec<Term>, ParseError> {
        args.iter().map(|a| self.term(a)).collect()
    }

    fn function_application(&mut self, name: &str, args: &[SExpr], loc: Loc) -> Result<Term, ParseError> {
        if self.bound.iter().any(|(n, _)| n == name) {
            return Err(sort_err(loc, format!("variable `{name}` applied to arguments")));
        }
        if self.defines.contains_key(name) {
            let actual = self.terms(args)?;
            let def = &self.defines[name];
            if def.params.len() != actual.len() {
                return Err(sort_err(
                    loc,
                    format!("`{name}` expects {} argument(s), got {}", def.params.len(), actual.len()),
                ));
            }
            let mut map = HashMap::new();
            for ((p, s), a) in def.params.iter().zip(actual) {
                map.insert(p.clone(), coerce_to(a, *s)?);
            }
            return Ok(def.body.substitute(&map));
        }
        if let Some(decl) = self.decls.get(name).cloned() {
            if decl.args.is_empty() {
                return Err(sort_err(loc, format!("constant `{name}` applied to arguments")));
            }
            let actual = self.terms(args)?;
            if actual.len() != decl.args.len() {
                return Err(sort_err(
                    loc,
                    format!("`{name}` expects {} argument(s), got {}", decl.args.len(), actual.len()),
                ));
            }
            let actual = actual
                .into_iter()
                .zip(&decl.args)
                .map(|(a, s)| coerce_to(a, *s))
                .collect::<Result<Vec<_>, _>>()?;
            return Ok(Term::apply(name, actual, decl.result).at(loc));
        }
        if self.opaque.contains(name) {
            return Err(ParseError::Unsupported {
                loc,
                what: format!("symbol {name} of unsupported sort"),
            });
        }
        match name {
            "div" | "mod" | "abs" | "to_real" | "to_int" | "is_int" | "xor" => {
                Err(ParseError::Unsupported {
                    loc,
                    what: name.to_string(),
                })
            }
            _ if self.is_known_builtin(name) => Err(ParseError::Unsupported {
                loc,
                what: name.to_string(),
            }),
            _ => Err(ParseError::Undeclared {
                loc,
                name: name.to_string(),
            }),
        }
    }

    fn is_known_builtin(&self, name: &str) -> bool {
        matches!(name, "select" | "store" | "match" | "_" | "as" | "str.++" | "bvadd")
    }

    /// Parallel `let`: values are elaborated in the outer scope, then
    /// substituted into the body.
    fn let_binding(&mut self, args: &[SExpr], loc: Loc) -> Result<Term, ParseError> {
        let [bindings, body] = args else {
            return Err(ParseError::syntax(loc, "malformed let"));
        };
        let items = bindings
            .list()
            .ok_or_else(|| ParseError::syntax(bindings.loc, "expected let bindings"))?;
        let mut values = Vec::with_capacity(items.len());
        for b in items {
            let Some([n, v]) = b.list() else {
                return Err(ParseError::syntax(b.loc, "expected (name term)"));
            };
            let name = n
                .symbol()
                .ok_or_else(|| ParseError::syntax(n.loc, "expected a symbol"))?;
            values.push((name.to_string(), self.term(v)?));
        }
        let depth = self.bound.len();
        self.bound
            .extend(values.iter().map(|(n, t)| (n.clone(), t.sort)));
        let body = self.term(body);
        self.bound.truncate(depth);
        let map: HashMap<String, Term> = values.into_iter().collect();
        Ok(body?.substitute(&map))
    }
}

/// Closed arithmetic over numerals may change numeric sort to fit its
/// context.
fn retype_literal(t: &Term, target: Sort) -> Option<Term> {
    if t.sort == target {
        return Some(t.clone());
    }
    if !target.is_numeric() || !t.sort.is_numeric() {
        return None;
    }
    let kind = match &t.kind {
        TermKind::Num(v) => {
            if target == Sort::Int && !v.is_integer() {
                return None;
            }
            TermKind::Num(v.clone())
        }
        TermKind::App(op @ (Op::Add | Op::Sub | Op::Mul), args) => TermKind::App(
            op.clone(),
            args.iter()
                .map(|a| retype_literal(a, target))
                .collect::<Option<Vec<_>>>()?,
        ),
        _ => return None,
    };
    Some(Term {
        kind,
        sort: target,
        loc: t.loc,
    })
}

fn coerce_to(t: Term, target: Sort) -> Result<Term, ParseError> {
    retype_literal(&t, target)
        .ok_or_else(|| sort_err(t.loc, format!("expected {target}, found {}", t.sort)))
}

/// When numeric arguments mix `Int` and `Real`, literal arguments are
/// retyped to the sort of the non-literal ones. Mismatches that remain are
/// reported by the caller's sort check.
fn unify_numeric(terms: Vec<Term>) -> Vec<Term> {
    let sorts: HashSet<Sort> = terms.iter().map(|t| t.sort).collect();
    if !(sorts.contains(&Sort::Int) && sorts.contains(&Sort::Real)) || sorts.contains(&Sort::Bool) {
        return terms;
    }
    let fixed: HashSet<Sort> = terms
        .iter()
        .filter(|t| retype_literal(t, other(t.sort)).is_none())
        .map(|t| t.sort)
        .collect();
    let target = match (fixed.len(), fixed.iter().next()) {
        (0, _) => Sort::Real,
        (1, Some(s)) => *s,
        _ => return terms,
    };
    terms
        .into_iter()
        .map(|t| retype_literal(&t, target).unwrap_or(t))
        .collect()
}

fn other(s: Sort) -> Sort {
    match s {
        Sort::Int => Sort::Real,
        _ => Sort::Int,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fixpoint_conjunct() {
        let s = parse_script("(set-logic NRA)(declare-fun a () Real)(assert (= (/ a 0) a))").unwrap();
        assert_eq!(s.logic.as_deref(), Some("NRA"));
        assert_eq!(s.assertions.len(), 1);
        let a = Term::var("a", Sort::Real);
        let expected = Term::eq(Term::div(a.clone(), Term::int(0, Sort::Real)), a);
        assert_eq!(s.assertions[0], expected);
    }

    #[test]
    fn boolean_in_arithmetic_is_a_sort_error_at_the_application() {
        let err = parse_script("(set-logic NRA)\n(assert (+ true 1))").unwrap_err();
        match err {
            ParseError::Sort(e) => assert_eq!(e.loc, Loc::new(2, 9)),
            other => panic!("expected sort error, got {other:?}"),
        }
    }

    #[test]
    fn non_bool_assertion_rejected() {
        let err = parse_script("(declare-fun x () Real)(assert (+ x 1))").unwrap_err();
        assert!(matches!(err, ParseError::Sort(_)));
    }

    #[test]
    fn undeclared_symbols_rejected() {
        let err = parse_script("(set-logic NRA)(assert (> y 0))").unwrap_err();
        assert_eq!(
            err,
            ParseError::Undeclared {
                loc: Loc::new(1, 27),
                name: "y".into()
            }
        );
    }

    #[test]
    fn decimals_are_exact() {
        let s = parse_script("(declare-const x Real)(assert (= x 1.5))").unwrap();
        let rhs = s.assertions[0].child(1).unwrap();
        assert_eq!(rhs.as_num(), Some(&Rational::new(3, 2)));
    }

    #[test]
    fn let_is_expanded() {
        let s = parse_script(
            "(declare-const x Real)(assert (let ((y (+ x 1))) (let ((y (* y y))) (> y 0))))",
        )
        .unwrap();
        let x = Term::var("x", Sort::Real);
        let y = Term::add(vec![x, Term::int(1, Sort::Real)]);
        let expected = Term::app(
            Op::Gt,
            vec![Term::mul(vec![y.clone(), y]), Term::int(0, Sort::Real)],
        );
        assert_eq!(s.assertions[0], expected);
    }

    #[test]
    fn let_under_quantifier_avoids_capture() {
        let s = parse_script(
            "(declare-const y Real)(assert (let ((z y)) (forall ((y Real)) (< z y))))",
        )
        .unwrap();
        assert_eq!(
            s.assertions[0].free_vars(),
            ["y".to_string()].into_iter().collect()
        );
    }

    #[test]
    fn define_fun_is_inlined() {
        let s = parse_script(
            "(set-logic NRA)(declare-const a Real)\
             (define-fun sq ((t Real)) Real (* t t))\
             (define-fun one () Real 1)\
             (assert (= (sq a) one))",
        )
        .unwrap();
        let a = Term::var("a", Sort::Real);
        assert_eq!(
            s.assertions[0],
            Term::eq(Term::mul(vec![a.clone(), a]), Term::int(1, Sort::Real))
        );
        assert!(s.declaration("sq").is_none());
    }

    #[test]
    fn integer_division_depends_on_logic() {
        let src = |logic: &str| format!("(set-logic {logic})(declare-const x Int)(assert (= (/ x 2) 1))");
        assert!(parse_script(&src("QF_NIA")).is_ok());
        assert!(matches!(parse_script(&src("NRA")), Err(ParseError::Sort(_))));
    }

    #[test]
    fn unsupported_commands_are_recorded() {
        let s = parse_script(
            "(set-logic QF_NRA)(declare-const x Real)(push 1)(assert (> x 0))(check-sat)(get-model)",
        )
        .unwrap();
        let texts: Vec<_> = s.unsupported.iter().map(|u| u.text.as_str()).collect();
        assert_eq!(texts, ["(push 1)", "(get-model)"]);
        assert_eq!(s.unsupported[0].loc, Loc::new(1, 41));
        assert!(s.check_sat);
    }

    #[test]
    fn unsupported_construct_in_assertion_fails() {
        let err = parse_script("(set-logic QF_NIA)(declare-const x Int)(assert (= (mod x 2) 1))")
            .unwrap_err();
        assert!(matches!(err, ParseError::Unsupported { .. }));
        let err = parse_script("(declare-sort U 0)(declare-const u U)(assert (= u u))").unwrap_err();
        assert!(matches!(err, ParseError::Unsupported { .. }));
    }

    #[test]
    fn literals_adapt_to_context_sort() {
        let s = parse_script("(set-logic QF_NIRA)(declare-const x Real)(assert (< x (+ 1 2)))").unwrap();
        assert_eq!(s.assertions[0].child(1).unwrap().sort, Sort::Real);
        let s = parse_script("(set-logic NRA)(declare-const n Int)(assert (< n 2))").unwrap();
        assert_eq!(s.assertions[0].child(1).unwrap().sort, Sort::Int);
    }

    #[test]
    fn exit_stops_reading() {
        let s = parse_script("(declare-const x Real)(exit)(assert (> x 0))").unwrap();
        assert!(s.assertions.is_empty());
    }

    #[test]
    fn duplicate_declaration_rejected() {
        let err = parse_script("(declare-const x Real)(declare-fun x () Real)").unwrap_err();
        assert!(matches!(err, ParseError::Duplicate { .. }));
    }

    #[test]
    fn logic_numeral_sorts() {
        assert_eq!(numeral_sort(Some("QF_NRA")), Sort::Real);
        assert_eq!(numeral_sort(Some("UFNRA")), Sort::Real);
        assert_eq!(numeral_sort(Some("QF_NIA")), Sort::Int);
        assert_eq!(numeral_sort(Some("QF_NIRA")), Sort::Int);
        assert_eq!(numeral_sort(None), Sort::Real);
        assert!(is_integer_logic(Some("QF_LIA")));
        assert!(!is_integer_logic(Some("QF_UFNRA")));
    }
}
