//! Rewrites that take real division out of its unconstrained case.
//!
//! - [`totalize`] fixes the value of `t/0` to a chosen constant by guarding
//!   every division as `(ite (= u 0) c (/ t u))`.
//! - [`lift_to_uf`] replaces `/` by a fresh binary function `d` together
//!   with the axiom `∀x y. y ≠ 0 ⇒ x = d(x, y)·y`, moving the script to a
//!   UF logic.
//! - [`emit_nonzero_vcs`] states, per division, that its divisor is nonzero
//!   under the enclosing `ite` guards.

use std::collections::BTreeSet;

use log::warn;

use crate::analysis::{fold_constant, is_real_division};
use crate::rational::Rational;
use crate::smtlib::ast::fresh_name;
use crate::smtlib::{Declaration, Loc, Op, Script, Sort, Term, TermKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TotalizeStyle {
    #[default]
    BranchInline,
    FreshSymbol,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TotalizeConfig {
    /// Value assigned to `t/0`.
    pub div0_value: Rational,
    pub style: TotalizeStyle,
    /// Constant-fold the result.
    pub fold: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PassWarning {
    pub loc: Loc,
    pub message: String,
}

/// Guards every real division. Divisions already in the guard shape are
/// left alone, which makes the pass idempotent (inline style, no folding).
pub fn totalize(s: &Script, cfg: &TotalizeConfig) -> Script {
    let (out, warnings) = totalize_with_warnings(s, cfg);
    for w in warnings {
        warn!("{}: {}", w.loc, w.message);
    }
    out
}

pub fn totalize_with_warnings(s: &Script, cfg: &TotalizeConfig) -> (Script, Vec<PassWarning>) {
    let mut out = s.clone();
    let mut warnings = Vec::new();
    match cfg.style {
        TotalizeStyle::BranchInline => {
            out.assertions = s
                .assertions
                .iter()
                .map(|a| guard_inline(a, &cfg.div0_value))
                .collect();
        }
        TotalizeStyle::FreshSymbol => {
            let mut ctx = FreshCtx {
                value: &cfg.div0_value,
                taken: s.used_names(),
                declarations: Vec::new(),
                definitions: Vec::new(),
                warnings: &mut warnings,
            };
            let rewritten: Vec<Term> = s
                .assertions
                .iter()
                .map(|a| ctx.rewrite(a, false))
                .collect();
            let FreshCtx {
                declarations,
                definitions,
                ..
            } = ctx;
            out.assertions = rewritten;
            out.declarations.extend(declarations);
            out.assertions.extend(definitions);
        }
    }
    if cfg.fold {
        out.assertions = out.assertions.iter().map(fold_constants).collect();
    }
    (out, warnings)
}

fn zero() -> Term {
    Term::int(0, Sort::Real)
}

fn is_zero_literal(t: &Term) -> bool {
    t.as_num().is_some_and(|v| v.is_zero())
}

/// Recognizes `(ite (= u 0) c (/ t u))`.
fn guard_parts(t: &Term) -> Option<(&Term, &Term, &Term, &Term)> {
    let TermKind::Ite(cond, then, els) = &t.kind else {
        return None;
    };
    let TermKind::App(Op::Eq, eq_args) = &cond.kind else {
        return None;
    };
    let [u, z] = eq_args.as_slice() else {
        return None;
    };
    if !is_zero_literal(z) || !is_real_division(els) {
        return None;
    }
    let TermKind::Div(num, den) = &els.kind else {
        return None;
    };
    (**den == *u).then_some((u, then, num, els))
}

/// The guard's value branch: closed constants (the pass's own `c`, possibly
/// written `(/ p q)`) are left as they are.
fn value_branch(then: &Term, rewrite: impl FnOnce(&Term) -> Term) -> Term {
    if fold_constant(then).is_some() {
        then.clone()
    } else {
        rewrite(then)
    }
}

fn guarded(u: Term, then: Term, num: Term, div: &Term, guard_loc: Loc) -> Term {
    let eq = Term::eq(u.clone(), zero()).at(guard_loc);
    let d = Term {
        kind: TermKind::Div(Box::new(num), Box::new(u)),
        sort: Sort::Real,
        loc: div.loc,
    };
    Term::ite(eq, then, d).at(guard_loc)
}

fn guard_inline(t: &Term, c: &Rational) -> Term {
    if let Some((u, then, num, div)) = guard_parts(t) {
        let u = guard_inline(u, c);
        let then = value_branch(then, |x| guard_inline(x, c));
        return guarded(u, then, guard_inline(num, c), div, t.loc);
    }
    if is_real_division(t) {
        let TermKind::Div(num, den) = &t.kind else {
            unreachable!()
        };
        let u = guard_inline(den, c);
        let n = guard_inline(num, c);
        return guarded(u, Term::rational_literal(c, Sort::Real).at(t.loc), n, t, t.loc);
    }
    t.map_children(|ch| guard_inline(ch, c))
}

struct FreshCtx<'a> {
    value: &'a Rational,
    taken: BTreeSet<String>,
    declarations: Vec<Declaration>,
    definitions: Vec<Term>,
    warnings: &'a mut Vec<PassWarning>,
}

impl FreshCtx<'_> {
    fn rewrite(&mut self, t: &Term, under_quantifier: bool) -> Term {
        if let Some((u, then, num, div)) = guard_parts(t) {
            let u = self.rewrite(u, under_quantifier);
            let then = value_branch(then, |x| self.rewrite(x, under_quantifier));
            let num = self.rewrite(num, under_quantifier);
            return guarded(u, then, num, div, t.loc);
        }
        if is_real_division(t) {
            let TermKind::Div(num, den) = &t.kind else {
                unreachable!()
            };
            let u = self.rewrite(den, under_quantifier);
            let n = self.rewrite(num, under_quantifier);
            let total = guarded(
                u,
                Term::rational_literal(self.value, Sort::Real).at(t.loc),
                n,
                t,
                t.loc,
            );
            if under_quantifier {
                self.warnings.push(PassWarning {
                    loc: t.loc,
                    message: "division under a quantifier: guarded inline instead of a fresh symbol"
                        .into(),
                });
                return total;
            }
            let name = fresh_name("tdiv", |c| self.taken.contains(c));
            self.taken.insert(name.clone());
            self.declarations.push(Declaration::constant(&name, Sort::Real));
            let sym = Term::var(&name, Sort::Real).at(t.loc);
            self.definitions.push(Term::eq(sym.clone(), total).at(t.loc));
            return sym;
        }
        let q = under_quantifier || matches!(t.kind, TermKind::Quant(..));
        t.map_children(|ch| self.rewrite(ch, q))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct UfLiftResult {
    pub script: Script,
    /// `None` when the script had no real division (the pass is a no-op).
    pub div_symbol: Option<String>,
    pub guard_axiom: Option<Term>,
}

/// `∀x y. (y ≠ 0) ⇒ (x = (x/y)·y)` with `/` realized by `div`.
pub fn division_axiom_with(div: impl Fn(Term, Term) -> Term) -> Term {
    let x = || Term::var("x", Sort::Real);
    let y = || Term::var("y", Sort::Real);
    Term::forall(
        vec![("x".into(), Sort::Real), ("y".into(), Sort::Real)],
        Term::implies(
            Term::not(Term::eq(y(), zero())),
            Term::eq(x(), Term::mul(vec![div(x(), y()), y()])),
        ),
    )
}

/// The axiom of real division itself.
pub fn division_axiom() -> Term {
    division_axiom_with(Term::div)
}

/// `NRA → UFNRA`, `QF_NRA → QF_UFNRA`; logics that already have UF, and
/// `ALL`, are unchanged.
pub fn uf_logic(logic: &str) -> String {
    if logic.contains("UF") || logic == "ALL" {
        return logic.to_string();
    }
    match logic.strip_prefix("QF_") {
        Some(rest) => format!("QF_UF{rest}"),
        None => format!("UF{logic}"),
    }
}

pub fn lift_to_uf(s: &Script) -> UfLiftResult {
    if s.count_nodes(is_real_division) == 0 {
        return UfLiftResult {
            script: s.clone(),
            div_symbol: None,
            guard_axiom: None,
        };
    }
    let d = s.fresh_symbol("d");
    let apply = |x: Term, y: Term| Term::apply(&d, vec![x, y], Sort::Real);
    let mut out = s.clone();
    out.assertions = s.assertions.iter().map(|a| lift(a, &d)).collect();
    out.declarations
        .push(Declaration::function(&d, vec![Sort::Real, Sort::Real], Sort::Real));
    let axiom = division_axiom_with(apply);
    out.assertions.push(axiom.clone());
    out.logic = s.logic.as_deref().map(uf_logic);
    UfLiftResult {
        script: out,
        div_symbol: Some(d),
        guard_axiom: Some(axiom),
    }
}

fn lift(t: &Term, d: &str) -> Term {
    let inner = t.map_children(|c| lift(c, d));
    if !is_real_division(t) {
        return inner;
    }
    let TermKind::Div(n, u) = inner.kind else {
        unreachable!()
    };
    Term::apply(d, vec![*n, *u], Sort::Real).at(t.loc)
}

/// One verification condition per real division, in source order: the
/// divisor is nonzero under the conjunction of enclosing `ite` guards,
/// universally closed over enclosing bound variables.
pub fn emit_nonzero_vcs(s: &Script) -> Vec<Term> {
    let mut out = Vec::new();
    for a in &s.assertions {
        vcs(a, &mut Vec::new(), &mut Vec::new(), &mut out);
    }
    out
}

fn vcs(t: &Term, guards: &mut Vec<Term>, bound: &mut Vec<Vec<(String, Sort)>>, out: &mut Vec<Term>) {
    match &t.kind {
        TermKind::Div(_, den) if is_real_division(t) => {
            let nonzero = Term::not(Term::eq(den.as_ref().clone(), zero())).at(t.loc);
            let mut vc = match guards.len() {
                0 => nonzero,
                1 => Term::implies(guards[0].clone(), nonzero),
                _ => Term::implies(Term::and(guards.clone()), nonzero),
            }
            .at(t.loc);
            for vars in bound.iter().rev() {
                vc = Term::forall(vars.clone(), vc).at(t.loc);
            }
            out.push(vc);
            for c in t.children() {
                vcs(c, guards, bound, out);
            }
        }
        TermKind::Ite(c, a, b) => {
            vcs(c, guards, bound, out);
            guards.push(c.as_ref().clone());
            vcs(a, guards, bound, out);
            guards.pop();
            guards.push(Term::not(c.as_ref().clone()));
            vcs(b, guards, bound, out);
            guards.pop();
        }
        TermKind::Quant(_, vars, body) => {
            bound.push(vars.clone());
            vcs(body, guards, bound, out);
            bound.pop();
        }
        _ => {
            for c in t.children() {
                vcs(c, guards, bound, out);
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VcStatus {
    /// Holds syntactically after folding.
    Valid,
    /// Folds to `false`: the division reaches `x/0` unconditionally.
    Violated,
    /// Needs a solver.
    Open,
}

/// Cheap syntactic triage of a verification condition.
pub fn vc_status(vc: &Term) -> VcStatus {
    let mut t = fold_constants(vc);
    while let TermKind::Quant(_, _, body) = &t.kind {
        t = body.as_ref().clone();
    }
    match &t.kind {
        TermKind::Bool(true) => VcStatus::Valid,
        TermKind::Bool(false) => VcStatus::Violated,
        TermKind::App(Op::Implies, args) => {
            let (concl, premises) = args.split_last().unwrap();
            let mut hyps = Vec::new();
            for p in premises {
                match &p.kind {
                    TermKind::App(Op::And, cs) => hyps.extend(cs.iter()),
                    _ => hyps.push(p),
                }
            }
            if hyps.contains(&concl) {
                VcStatus::Valid
            } else {
                VcStatus::Open
            }
        }
        _ => VcStatus::Open,
    }
}

/// Bottom-up constant folding over literals. Division by a literal zero is
/// never folded.
pub fn fold_constants(t: &Term) -> Term {
    let t = t.map_children(fold_constants);
    let lit_bool = |x: &Term| match x.kind {
        TermKind::Bool(b) => Some(b),
        _ => None,
    };
    let numeric_literal = |x: &Term| -> Option<Rational> {
        if x.sort.is_numeric() {
            crate::analysis::fold_constant(x)
        } else {
            None
        }
    };
    let loc = t.loc;
    match &t.kind {
        TermKind::App(Op::Add | Op::Sub | Op::Mul, _) | TermKind::Div(..) => {
            match numeric_literal(&t) {
                Some(v) => Term::rational_literal(&v, t.sort).at(loc),
                None => t,
            }
        }
        TermKind::App(op @ (Op::Lt | Op::Le | Op::Gt | Op::Ge | Op::Eq | Op::Distinct), args) => {
            let nums: Option<Vec<Rational>> = args.iter().map(numeric_literal).collect();
            let bools: Option<Vec<bool>> = args.iter().map(lit_bool).collect();
            let result = match (nums, bools) {
                (Some(v), _) => Some(match op {
                    Op::Lt => v.windows(2).all(|w| w[0] < w[1]),
                    Op::Le => v.windows(2).all(|w| w[0] <= w[1]),
                    Op::Gt => v.windows(2).all(|w| w[0] > w[1]),
                    Op::Ge => v.windows(2).all(|w| w[0] >= w[1]),
                    Op::Eq => v.windows(2).all(|w| w[0] == w[1]),
                    _ => v.iter().enumerate().all(|(i, x)| !v[i + 1..].contains(x)),
                }),
                (None, Some(b)) => match op {
                    Op::Eq => Some(b.windows(2).all(|w| w[0] == w[1])),
                    Op::Distinct => Some(b.len() <= 2 && b.windows(2).all(|w| w[0] != w[1])),
                    _ => None,
                },
                _ => None,
            };
            result.map_or(t.clone(), |b| Term::bool(b).at(loc))
        }
        TermKind::App(Op::Not, args) => match lit_bool(&args[0]) {
            Some(b) => Term::bool(!b).at(loc),
            None => t,
        },
        TermKind::App(op @ (Op::And | Op::Or), args) => {
            let absorbing = *op == Op::Or;
            if args.iter().any(|a| lit_bool(a) == Some(absorbing)) {
                return Term::bool(absorbing).at(loc);
            }
            let rest: Vec<Term> = args
                .iter()
                .filter(|a| lit_bool(a) != Some(!absorbing))
                .cloned()
                .collect();
            match rest.len() {
                0 => Term::bool(!absorbing).at(loc),
                1 => rest.into_iter().next().unwrap(),
                n if n == args.len() => t,
                _ => Term::new(TermKind::App(op.clone(), rest), Sort::Bool).at(loc),
            }
        }
        TermKind::App(Op::Implies, args) => {
            let (concl, premises) = args.split_last().unwrap();
            if premises.iter().any(|p| lit_bool(p) == Some(false)) || lit_bool(concl) == Some(true) {
                return Term::bool(true).at(loc);
            }
            let rest: Vec<Term> = premises
                .iter()
                .filter(|p| lit_bool(p) != Some(true))
                .cloned()
                .collect();
            if rest.is_empty() {
                return concl.clone();
            }
            if rest.len() == premises.len() {
                return t;
            }
            let mut all = rest;
            all.push(concl.clone());
            Term::new(TermKind::App(Op::Implies, all), Sort::Bool).at(loc)
        }
        TermKind::Ite(c, a, b) => match lit_bool(c) {
            Some(true) => a.as_ref().clone(),
            Some(false) => b.as_ref().clone(),
            None => t,
        },
        _ => t,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{classify_script, collect_divisions, VerdictLabel};
    use crate::eval::{Assignment, DivInterpretation, Evaluator};
    use crate::smtlib::{parse_script, parse_term, print_script};

    fn script(body: &str) -> Script {
        parse_script(&format!(
            "(set-logic NRA)(declare-const a Real)(declare-const x Real)(declare-const y Real){body}"
        ))
        .unwrap()
    }

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn totalize_fixpoint_conjunct() {
        let s = script("(assert (= (/ a 0) a))");
        let out = totalize(&s, &TotalizeConfig::default());
        assert_eq!(out.assertions[0].to_string(), "(= (ite (= 0 0) 0 (/ a 0)) a)");
        let folded = totalize(
            &s,
            &TotalizeConfig {
                fold: true,
                ..Default::default()
            },
        );
        assert_eq!(folded.assertions[0].to_string(), "(= 0 a)");
        assert_eq!(out.logic, s.logic);
    }

    #[test]
    fn totalize_without_divisions_is_identity() {
        let s = script("(assert (> (* x y) 1))");
        assert_eq!(totalize(&s, &TotalizeConfig::default()), s);
    }

    #[test]
    fn totalized_value_at_zero() {
        let s = script("(assert (= (/ x y) a))");
        let cfg = TotalizeConfig {
            div0_value: r(7, 1),
            ..Default::default()
        };
        let out = totalize(&s, &cfg);
        let TermKind::App(_, args) = &out.assertions[0].kind else {
            panic!()
        };
        let ev = Evaluator::new(DivInterpretation::identity());
        let at = |y| Assignment::new().with("x", r(3, 1)).with("y", y);
        assert_eq!(ev.eval_num(&args[0], &at(r(0, 1))).unwrap(), r(7, 1));
        assert_eq!(ev.eval_num(&args[0], &at(r(2, 1))).unwrap(), r(3, 2));
    }

    #[test]
    fn totalize_guards_innermost_first() {
        let s = script("(assert (> (/ x (/ y a)) 0))");
        let out = totalize(&s, &TotalizeConfig::default());
        assert_eq!(
            out.assertions[0].to_string(),
            "(> (ite (= (ite (= a 0) 0 (/ y a)) 0) 0 (/ x (ite (= a 0) 0 (/ y a)))) 0)"
        );
        assert_eq!(totalize(&out, &TotalizeConfig::default()), out);
    }

    #[test]
    fn existing_guards_are_respected() {
        let s = script("(assert (= (ite (= y 0) 1 (/ x y)) a))");
        assert_eq!(totalize(&s, &TotalizeConfig::default()), s);
    }

    #[test]
    fn fresh_symbol_style() {
        let s = script("(assert (> (/ x y) 1))(assert (forall ((z Real)) (> (/ z y) 0)))");
        let (out, warnings) = totalize_with_warnings(
            &s,
            &TotalizeConfig {
                style: TotalizeStyle::FreshSymbol,
                ..Default::default()
            },
        );
        assert_eq!(warnings.len(), 1);
        let text = print_script(&out);
        assert!(text.contains("(declare-fun tdiv () Real)"), "{text}");
        assert!(text.contains("(assert (> tdiv 1))"), "{text}");
        assert!(text.contains("(assert (= tdiv (ite (= y 0) 0 (/ x y))))"), "{text}");
        assert!(text.contains("(forall ((z Real)) (> (ite (= y 0) 0 (/ z y)) 0))"), "{text}");
        assert_eq!(parse_script(&text).unwrap(), out);
    }

    #[test]
    fn uf_lift_of_fixpoint() {
        let s = script("(assert (= (/ a 0) a))(assert (> (/ (/ x 2) y) 0))");
        let res = lift_to_uf(&s);
        assert_eq!(res.div_symbol.as_deref(), Some("d"));
        assert_eq!(res.script.logic.as_deref(), Some("UFNRA"));
        assert_eq!(res.script.assertions[0].to_string(), "(= (d a 0) a)");
        assert_eq!(res.script.assertions[1].to_string(), "(> (d (d x 2) y) 0)");
        assert_eq!(
            res.guard_axiom.as_ref().unwrap().to_string(),
            "(forall ((x Real) (y Real)) (=> (not (= y 0)) (= x (* (d x y) y))))"
        );
        assert_eq!(res.script.assertions.last(), res.guard_axiom.as_ref());
        assert_eq!(classify_script(&res.script).label, VerdictLabel::PolynomialOnly);
        crate::smtlib::check_script(&res.script).unwrap();
    }

    #[test]
    fn uf_lift_no_op() {
        let s = script("(assert (> (* x y) 1))");
        let res = lift_to_uf(&s);
        assert_eq!(res.script, s);
        assert!(res.guard_axiom.is_none());
    }

    #[test]
    fn uf_lift_picks_fresh_name() {
        let s = parse_script("(set-logic QF_NRA)(declare-const d Real)(assert (> (/ d 2) 0))").unwrap();
        let res = lift_to_uf(&s);
        assert_eq!(res.div_symbol.as_deref(), Some("d!1"));
        assert_eq!(res.script.logic.as_deref(), Some("QF_UFNRA"));
    }

    #[test]
    fn logic_relabeling() {
        assert_eq!(uf_logic("NRA"), "UFNRA");
        assert_eq!(uf_logic("QF_NRA"), "QF_UFNRA");
        assert_eq!(uf_logic("QF_UFNRA"), "QF_UFNRA");
        assert_eq!(uf_logic("ALL"), "ALL");
    }

    #[test]
    fn vcs() {
        let s = script(
            "(assert (> (/ x y) 0))(assert (= (ite (= y 0) 1 (/ x y)) a))(assert (= (/ a 0) a))\
             (assert (forall ((z Real)) (> (/ x z) 0)))",
        );
        let vcs = emit_nonzero_vcs(&s);
        let text: Vec<String> = vcs.iter().map(|t| t.to_string()).collect();
        assert_eq!(
            text,
            [
                "(not (= y 0))",
                "(=> (not (= y 0)) (not (= y 0)))",
                "(not (= 0 0))",
                "(forall ((z Real)) (not (= z 0)))"
            ]
        );
        let status: Vec<VcStatus> = vcs.iter().map(vc_status).collect();
        assert_eq!(
            status,
            [VcStatus::Open, VcStatus::Valid, VcStatus::Violated, VcStatus::Open]
        );
        assert_eq!(vcs.len(), collect_divisions(&s).len());
        for vc in &vcs {
            crate::smtlib::sort_of(vc, &s.declarations).unwrap();
        }
    }

    #[test]
    fn folding() {
        let s = script("");
        let f = |src: &str| fold_constants(&parse_term(src, &s).unwrap()).to_string();
        assert_eq!(f("(+ 1 (* 2 3))"), "7");
        assert_eq!(f("(- 1 3)"), "(- 2)");
        assert_eq!(f("(/ 1 3)"), "(/ 1 3)");
        assert_eq!(f("(/ x 0)"), "(/ x 0)");
        assert_eq!(f("(/ 1 0)"), "(/ 1 0)");
        assert_eq!(f("(and (< 1 2) (> x 0))"), "(> x 0)");
        assert_eq!(f("(or (< 2 1) (= 1 1))"), "true");
        assert_eq!(f("(=> (= 0 1) (> x 0))"), "true");
        assert_eq!(f("(ite (distinct 1 2) x y)"), "x");
    }
}
