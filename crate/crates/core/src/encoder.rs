//! Integer arithmetic encoded into real arithmetic.
//!
//! A unary function `f` is pinned to `⌊·⌋` by two axioms, `f(x) + 1 =
//! f(x + 1)` and `0 ≤ x < 1 ⇒ f(x) = 0`. An integer formula `F(x₁..xₙ)` is
//! then equisatisfiable with the real formula `A ∧ ⋀ (f(xᵢ) = xᵢ) ∧ F`.
//! [`EncodingMode::Uf`] declares `f` as an uninterpreted function (UFNRA);
//! [`EncodingMode::Div0`] realizes `f(t)` as `t/0` and needs nothing beyond
//! NRA.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

use crate::eval::{default_sample_grid, Assignment, DivInterpretation, EvalError, Evaluator};
use crate::rational::Rational;
use crate::smtlib::ast::fresh_name;
use crate::smtlib::{
    is_integer_logic, print_term, Attribute, Declaration, Loc, Op, Script, Sort, Term, TermKind,
};

/// Metadata key recording the sorts of the source variables.
pub const ORIGINAL_SORTS_KEY: &str = "original-sorts";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EncodingMode {
    Uf,
    Div0,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EncodeError {
    #[error("{0}: quantifiers are not allowed in an integer formula")]
    Quantifier(Loc),
    #[error("{0}: division is not allowed in an integer formula")]
    Division(Loc),
    #[error("{loc}: function application `{name}` is not allowed in an integer formula")]
    Function { loc: Loc, name: String },
    #[error("free symbol `{0}` is not one of the formula's variables")]
    FreeSymbol(String),
    #[error("variable `{name}` has sort {sort}, expected Int")]
    NotInt { name: String, sort: Sort },
    #[error("integer formula body has sort {0}, expected Bool")]
    NotBool(Sort),
    #[error("logic {0} is not an integer logic")]
    Logic(String),
    #[error("function name `{0}` collides with a symbol of the formula")]
    NameCollision(String),
}

/// A quantifier-free, division-free formula over integer variables.
#[derive(Debug, Clone, PartialEq)]
pub struct IntFormula {
    pub variables: Vec<String>,
    pub body: Term,
}

impl IntFormula {
    pub fn new(variables: Vec<String>, body: Term) -> Result<Self, EncodeError> {
        let f = IntFormula { variables, body };
        f.validate()?;
        Ok(f)
    }

    /// The conjunction of a script's assertions, over its declared `Int`
    /// constants (in declaration order).
    pub fn from_script(s: &Script) -> Result<Self, EncodeError> {
        if let Some(logic) = s.logic.as_deref() {
            if !is_integer_logic(Some(logic)) {
                return Err(EncodeError::Logic(logic.to_string()));
            }
        }
        let mut variables = Vec::new();
        for d in &s.declarations {
            if !d.args.is_empty() {
                return Err(EncodeError::Function {
                    loc: Loc::default(),
                    name: d.name.clone(),
                });
            }
            if d.result != Sort::Int {
                return Err(EncodeError::NotInt {
                    name: d.name.clone(),
                    sort: d.result,
                });
            }
            variables.push(d.name.clone());
        }
        let body = match s.assertions.as_slice() {
            [] => Term::bool(true),
            [one] => one.clone(),
            many => Term::and(many.to_vec()),
        };
        IntFormula::new(variables, body)
    }

    fn validate(&self) -> Result<(), EncodeError> {
        if self.body.sort != Sort::Bool {
            return Err(EncodeError::NotBool(self.body.sort));
        }
        let mut err = None;
        self.body.visit(&mut |t| {
            if err.is_some() {
                return;
            }
            err = match &t.kind {
                TermKind::Quant(..) => Some(EncodeError::Quantifier(t.loc)),
                TermKind::Div(..) => Some(EncodeError::Division(t.loc)),
                TermKind::App(Op::Apply(name), _) => Some(EncodeError::Function {
                    loc: t.loc,
                    name: name.clone(),
                }),
                TermKind::Var(name) if !self.variables.contains(name) => {
                    Some(EncodeError::FreeSymbol(name.clone()))
                }
                TermKind::Var(name) if t.sort != Sort::Int => Some(EncodeError::NotInt {
                    name: name.clone(),
                    sort: t.sort,
                }),
                _ => None,
            };
        });
        err.map_or(Ok(()), Err)
    }
}

/// The two axioms that force `f` to be the floor function.
#[derive(Debug, Clone, PartialEq)]
pub struct FloorAxioms {
    /// `∀x. f(x) + 1 = f(x + 1)`
    pub shift_axiom: Term,
    /// `∀x. (0 ≤ x ∧ x < 1) ⇒ f(x) = 0`
    pub base_axiom: Term,
    /// `None` when `f` is realized as `x/0`.
    pub f_name: Option<String>,
}

impl FloorAxioms {
    pub fn terms(&self) -> [&Term; 2] {
        [&self.shift_axiom, &self.base_axiom]
    }
}

/// `f(t)` for the given realization of `f`.
pub fn apply_floor_function(mode: EncodingMode, f_name: &str, t: Term) -> Term {
    match mode {
        EncodingMode::Uf => Term::apply(f_name, vec![t], Sort::Real),
        EncodingMode::Div0 => Term::div(t, Term::int(0, Sort::Real)),
    }
}

/// Builds the floor axioms. In [`EncodingMode::Uf`], `f_name` must not be
/// among `reserved`; in [`EncodingMode::Div0`] it is ignored.
pub fn floor_axioms(mode: EncodingMode, f_name: &str, reserved: &[String]) -> Result<FloorAxioms, EncodeError> {
    if mode == EncodingMode::Uf && reserved.iter().any(|r| r == f_name) {
        return Err(EncodeError::NameCollision(f_name.to_string()));
    }
    let x = || Term::var("x", Sort::Real);
    let num = |n| Term::int(n, Sort::Real);
    let f = |t| apply_floor_function(mode, f_name, t);
    let bind = || vec![("x".to_string(), Sort::Real)];
    let shift_axiom = Term::forall(
        bind(),
        Term::eq(Term::add(vec![f(x()), num(1)]), f(Term::add(vec![x(), num(1)]))),
    );
    let base_axiom = Term::forall(
        bind(),
        Term::implies(
            Term::and(vec![Term::le(num(0), x()), Term::lt(x(), num(1))]),
            Term::eq(f(x()), num(0)),
        ),
    );
    Ok(FloorAxioms {
        shift_axiom,
        base_axiom,
        f_name: (mode == EncodingMode::Uf).then(|| f_name.to_string()),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct EncodedProblem {
    pub script: Script,
    pub source: IntFormula,
    pub mode: EncodingMode,
    /// Name of the declared floor function in [`EncodingMode::Uf`].
    pub f_name: Option<String>,
}

impl EncodedProblem {
    /// Number of leading axiom assertions.
    pub const AXIOM_COUNT: usize = 2;

    pub fn fixpoint_conjuncts(&self) -> &[Term] {
        let n = self.source.variables.len();
        &self.script.assertions[Self::AXIOM_COUNT..Self::AXIOM_COUNT + n]
    }

    pub fn body(&self) -> &Term {
        self.script.assertions.last().expect("encoded body")
    }

    /// Evaluator for this encoding with `f` (or `x/0`) interpreted by `d`.
    pub fn evaluator(&self, d: &DivInterpretation) -> Evaluator {
        let ev = Evaluator::new(d.clone()).with_samples(default_sample_grid());
        match &self.f_name {
            Some(f) => {
                let d = d.clone();
                ev.with_unary(f.clone(), move |x| d.at_zero(x))
            }
            None => ev,
        }
    }
}

/// Uninterpreted form: `f` is a declared `Real → Real` function, logic UFNRA.
pub fn encode_integer_formula(f: &IntFormula) -> Result<EncodedProblem, EncodeError> {
    encode(f, EncodingMode::Uf)
}

/// Division-by-zero form: `f(t)` is written `t/0`, logic NRA.
pub fn encode_via_div0(f: &IntFormula) -> Result<EncodedProblem, EncodeError> {
    encode(f, EncodingMode::Div0)
}

pub fn encode(f: &IntFormula, mode: EncodingMode) -> Result<EncodedProblem, EncodeError> {
    f.validate()?;
    let mut taken: BTreeSet<String> = f.variables.iter().cloned().collect();
    taken.insert("x".into());
    let f_name = fresh_name("f", |c| taken.contains(c));
    let axioms = floor_axioms(mode, &f_name, &f.variables)?;

    let mut script = Script::with_logic(match mode {
        EncodingMode::Uf => "UFNRA",
        EncodingMode::Div0 => "NRA",
    });
    if !f.variables.is_empty() {
        let sorts: Vec<String> = f.variables.iter().map(|v| format!("({v} Int)")).collect();
        script
            .metadata
            .push(Attribute::info(ORIGINAL_SORTS_KEY, format!("\"{}\"", sorts.join(" "))));
    }
    if mode == EncodingMode::Uf {
        script
            .declarations
            .push(Declaration::function(&f_name, vec![Sort::Real], Sort::Real));
    }
    for v in &f.variables {
        script.declarations.push(Declaration::constant(v, Sort::Real));
    }
    let [shift, base] = axioms.terms();
    script.assertions.push(shift.clone());
    script.assertions.push(base.clone());
    for v in &f.variables {
        let x = Term::var(v, Sort::Real);
        script
            .assertions
            .push(Term::eq(apply_floor_function(mode, &f_name, x.clone()), x));
    }
    script.assertions.push(to_real(&f.body));
    script.check_sat = true;
    Ok(EncodedProblem {
        script,
        source: f.clone(),
        mode,
        f_name: axioms.f_name,
    })
}

fn to_real(t: &Term) -> Term {
    let mut out = t.map_children(to_real);
    if out.sort == Sort::Int {
        out.sort = Sort::Real;
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecodeError {
    #[error("assertion {index} is violated: {assertion}")]
    Violated { index: usize, assertion: String },
    #[error("value of `{name}` is not an integer: {value}")]
    NotInteger { name: String, value: Rational },
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Maps a model of the encoded script back to integers. Every assertion is
/// re-checked under `d` (axioms on the default sample grid) first.
pub fn decode_witness(
    p: &EncodedProblem,
    real_assignment: &Assignment,
    d: &DivInterpretation,
) -> Result<Vec<(String, BigInt)>, DecodeError> {
    let ev = p.evaluator(d);
    if let Some(index) = ev.first_falsified(&p.script.assertions, real_assignment)? {
        return Err(DecodeError::Violated {
            index,
            assertion: print_term(&p.script.assertions[index], Sort::Real),
        });
    }
    p.source
        .variables
        .iter()
        .map(|v| {
            let value = real_assignment
                .get(v)
                .and_then(|x| x.as_num())
                .ok_or_else(|| EvalError::Unbound(v.clone()))?;
            value
                .to_integer()
                .map(|i| (v.clone(), i))
                .ok_or_else(|| DecodeError::NotInteger {
                    name: v.clone(),
                    value: value.clone(),
                })
        })
        .collect()
}

impl fmt::Display for EncodingMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EncodingMode::Uf => "uf",
            EncodingMode::Div0 => "div0",
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smtlib::{parse_script, print_script};

    fn formula(src: &str) -> IntFormula {
        IntFormula::from_script(&parse_script(src).unwrap()).unwrap()
    }

    fn fermat() -> IntFormula {
        formula(
            "(set-logic QF_NIA)(declare-const a Int)(declare-const b Int)(declare-const c Int)\
             (assert (= (+ (* a a a) (* b b b)) (* c c c)))",
        )
    }

    #[test]
    fn uf_axioms_print_as_expected() {
        let ax = floor_axioms(EncodingMode::Uf, "f", &[]).unwrap();
        assert_eq!(
            ax.shift_axiom.to_string(),
            "(forall ((x Real)) (= (+ (f x) 1) (f (+ x 1))))"
        );
        assert_eq!(
            ax.base_axiom.to_string(),
            "(forall ((x Real)) (=> (and (<= 0 x) (< x 1)) (= (f x) 0)))"
        );
    }

    #[test]
    fn div0_axioms_match_example_shape() {
        let ax = floor_axioms(EncodingMode::Div0, "ignored", &["ignored".into()]).unwrap();
        assert_eq!(
            ax.shift_axiom.to_string(),
            "(forall ((x Real)) (= (+ (/ x 0) 1) (/ (+ x 1) 0)))"
        );
        assert_eq!(ax.f_name, None);
    }

    #[test]
    fn uf_name_collision() {
        assert_eq!(
            floor_axioms(EncodingMode::Uf, "f", &["f".into()]),
            Err(EncodeError::NameCollision("f".into()))
        );
    }

    #[test]
    fn uf_encoding_of_fermat() {
        let p = encode_integer_formula(&fermat()).unwrap();
        assert_eq!(p.script.logic.as_deref(), Some("UFNRA"));
        let lines: Vec<String> = p.script.assertions.iter().map(|t| t.to_string()).collect();
        assert_eq!(lines[2], "(= (f a) a)");
        assert_eq!(lines[3], "(= (f b) b)");
        assert_eq!(lines[4], "(= (f c) c)");
        assert_eq!(lines[5], "(= (+ (* a a a) (* b b b)) (* c c c))");
        assert_eq!(p.script.declarations[0], Declaration::function("f", vec![Sort::Real], Sort::Real));
        crate::smtlib::check_script(&p.script).unwrap();
    }

    #[test]
    fn f_name_avoids_formula_variables() {
        let p = encode_integer_formula(&formula(
            "(set-logic QF_LIA)(declare-const f Int)(assert (= f 1))",
        ))
        .unwrap();
        assert_eq!(p.f_name.as_deref(), Some("f!1"));
    }

    #[test]
    fn empty_formula() {
        let f = IntFormula::new(vec![], Term::bool(true)).unwrap();
        let p = encode_integer_formula(&f).unwrap();
        assert_eq!(p.script.assertions.len(), 3);
        assert!(p.script.metadata.is_empty());
        let ev = p.evaluator(&DivInterpretation::floor());
        assert_eq!(ev.first_falsified(&p.script.assertions, &Assignment::new()), Ok(None));
    }

    #[test]
    fn x_equals_two_satisfied_by_floor() {
        let f = formula("(set-logic QF_NIA)(declare-const x Int)(assert (= x 2))");
        for p in [encode_integer_formula(&f).unwrap(), encode_via_div0(&f).unwrap()] {
            let ev = p.evaluator(&DivInterpretation::floor());
            let a = Assignment::new().with("x", Rational::from(2));
            assert_eq!(ev.first_falsified(&p.script.assertions, &a), Ok(None));
        }
    }

    #[test]
    fn rejects_non_integer_formulas() {
        let s = parse_script("(set-logic QF_NRA)(declare-const x Real)(assert (> x 0))").unwrap();
        assert!(matches!(IntFormula::from_script(&s), Err(EncodeError::Logic(_))));
        let s = parse_script("(declare-const x Real)(assert (> x 0))").unwrap();
        assert!(matches!(IntFormula::from_script(&s), Err(EncodeError::NotInt { .. })));
        let s = parse_script("(set-logic NIA)(declare-const x Int)(assert (exists ((y Int)) (> x y)))").unwrap();
        assert!(matches!(IntFormula::from_script(&s), Err(EncodeError::Quantifier(_))));
        let s = parse_script("(set-logic QF_NIA)(declare-const x Int)(assert (= (/ x 2) 1))").unwrap();
        assert!(matches!(IntFormula::from_script(&s), Err(EncodeError::Division(_))));
    }

    #[test]
    fn decode_examples() {
        let p = encode_via_div0(&fermat()).unwrap();
        let floor = DivInterpretation::floor();
        let a: Assignment = [("a", 0), ("b", 1), ("c", 1)]
            .into_iter()
            .map(|(n, v)| (n, Rational::from(v)))
            .collect();
        let w = decode_witness(&p, &a, &floor).unwrap();
        assert_eq!(
            w,
            vec![
                ("a".to_string(), BigInt::from(0)),
                ("b".to_string(), BigInt::from(1)),
                ("c".to_string(), BigInt::from(1))
            ]
        );
        let bad = a.clone().with("a", Rational::new(1, 2));
        assert_eq!(
            decode_witness(&p, &bad, &floor),
            Err(DecodeError::Violated {
                index: 2,
                assertion: "(= (/ a 0) a)".into()
            })
        );
        let empty = encode_via_div0(&IntFormula::new(vec![], Term::bool(true)).unwrap()).unwrap();
        assert_eq!(decode_witness(&empty, &Assignment::new(), &floor), Ok(vec![]));
    }

    #[test]
    fn encoded_script_reparses() {
        let p = encode_via_div0(&fermat()).unwrap();
        let text = print_script(&p.script);
        assert_eq!(parse_script(&text).unwrap(), p.script);
    }
}
