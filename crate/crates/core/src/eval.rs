//! Exact rational semantics.
//!
//! Division by a nonzero rational is exact. Division by zero is delegated to
//! a [`DivInterpretation`], the only place the value of `x/0` comes from.
//! Quantifiers are never decided; an [`Evaluator`] configured with a sample
//! set checks them instance by instance, otherwise they are an error.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use serde::Serialize;
use thiserror::Error;

use crate::encoder::IntFormula;
use crate::rational::Rational;
use crate::smtlib::{Loc, Op, Quantifier, Sort, Term, TermKind};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    Num(Rational),
    Bool(bool),
}

impl Value {
    pub fn as_num(&self) -> Option<&Rational> {
        match self {
            Value::Num(r) => Some(r),
            Value::Bool(_) => None,
        }
    }

    pub fn as_bool(&self) -> Option<bool> {
        match self {
            Value::Bool(b) => Some(*b),
            Value::Num(_) => None,
        }
    }
}

impl From<Rational> for Value {
    fn from(r: Rational) -> Self {
        Value::Num(r)
    }
}

impl From<bool> for Value {
    fn from(b: bool) -> Self {
        Value::Bool(b)
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Num(r) => write!(f, "{r}"),
            Value::Bool(b) => write!(f, "{b}"),
        }
    }
}

/// Values of free variables.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Assignment(BTreeMap<String, Value>);

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, name: impl Into<String>, v: impl Into<Value>) -> &mut Self {
        self.0.insert(name.into(), v.into());
        self
    }

    pub fn with(mut self, name: impl Into<String>, v: impl Into<Value>) -> Self {
        self.set(name, v);
        self
    }

    pub fn get(&self, name: &str) -> Option<&Value> {
        self.0.get(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Value)> {
        self.0.iter()
    }
}

impl<S: Into<String>> FromIterator<(S, Rational)> for Assignment {
    fn from_iter<I: IntoIterator<Item = (S, Rational)>>(iter: I) -> Self {
        Assignment(
            iter.into_iter()
                .map(|(k, v)| (k.into(), Value::Num(v)))
                .collect(),
        )
    }
}

type AtZero = dyn Fn(&Rational) -> Rational + Send + Sync;

/// The value of `x/0` as a total function of `x`.
#[derive(Clone)]
pub struct DivInterpretation {
    name: String,
    at_zero: Arc<AtZero>,
}

impl DivInterpretation {
    pub fn new(
        name: impl Into<String>,
        at_zero: impl Fn(&Rational) -> Rational + Send + Sync + 'static,
    ) -> Self {
        DivInterpretation {
            name: name.into(),
            at_zero: Arc::new(at_zero),
        }
    }

    /// `x/0 = ⌊x⌋`, the interpretation the floor axioms force.
    pub fn floor() -> Self {
        Self::new("floor", floor_oracle)
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(format!("const {c}"), move |_| c.clone())
    }

    pub fn identity() -> Self {
        Self::new("identity", |x| x.clone())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn at_zero(&self, x: &Rational) -> Rational {
        (self.at_zero)(x)
    }
}

impl fmt::Debug for DivInterpretation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("DivInterpretation").field(&self.name).finish()
    }
}

pub type FunctionInterpretation = Arc<dyn Fn(&[Value]) -> Value + Send + Sync>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("unbound variable `{0}`")]
    Unbound(String),
    #[error("{0}: quantifier cannot be evaluated without a sample set")]
    Quantifier(Loc),
    #[error("no interpretation for function `{0}`")]
    UnknownFunction(String),
    #[error("{0}: `/` over Int is outside the evaluated fragment")]
    IntegerDivision(Loc),
    #[error("{loc}: expected a {expected} value")]
    Type { loc: Loc, expected: &'static str },
}

/// Term evaluator. Cheap to clone.
#[derive(Clone)]
pub struct Evaluator {
    div: DivInterpretation,
    functions: HashMap<String, FunctionInterpretation>,
    samples: Option<Arc<Vec<Rational>>>,
}

impl Evaluator {
    pub fn new(div: DivInterpretation) -> Self {
        Evaluator {
            div,
            functions: HashMap::new(),
            samples: None,
        }
    }

    pub fn with_function(
        mut self,
        name: impl Into<String>,
        f: impl Fn(&[Value]) -> Value + Send + Sync + 'static,
    ) -> Self {
        self.functions.insert(name.into(), Arc::new(f));
        self
    }

    /// Interprets a unary Real function by a rational map.
    pub fn with_unary(
        self,
        name: impl Into<String>,
        f: impl Fn(&Rational) -> Rational + Send + Sync + 'static,
    ) -> Self {
        self.with_function(name, move |args| match args {
            [Value::Num(x)] => Value::Num(f(x)),
            _ => panic!("unary function applied to {args:?}"),
        })
    }

    /// Interprets a binary Real function as division whose zero case is
    /// this evaluator's [`DivInterpretation`].
    pub fn with_division_function(self, name: impl Into<String>) -> Self {
        let div = self.div.clone();
        self.with_function(name, move |args| match args {
            [Value::Num(x), Value::Num(y)] => Value::Num(match x.checked_div(y) {
                Some(q) => q,
                None => div.at_zero(x),
            }),
            _ => panic!("division function applied to {args:?}"),
        })
    }

    /// Checks quantified subterms on every instantiation of their bound
    /// variables drawn from `samples` (integral samples only for `Int`).
    pub fn with_samples(mut self, samples: Vec<Rational>) -> Self {
        self.samples = Some(Arc::new(samples));
        self
    }

    pub fn div_interpretation(&self) -> &DivInterpretation {
        &self.div
    }

    pub fn eval(&self, t: &Term, a: &Assignment) -> Result<Value, EvalError> {
        let mut env = Env {
            assignment: a,
            bound: Vec::new(),
        };
        self.eval_in(t, &mut env)
    }

    pub fn eval_bool(&self, t: &Term, a: &Assignment) -> Result<bool, EvalError> {
        self.eval(t, a)?.as_bool().ok_or(EvalError::Type {
            loc: t.loc,
            expected: "Bool",
        })
    }

    pub fn eval_num(&self, t: &Term, a: &Assignment) -> Result<Rational, EvalError> {
        match self.eval(t, a)? {
            Value::Num(r) => Ok(r),
            Value::Bool(_) => Err(EvalError::Type {
                loc: t.loc,
                expected: "numeric",
            }),
        }
    }

    /// Index of the first assertion that evaluates to false, if any.
    pub fn first_falsified(&self, assertions: &[Term], a: &Assignment) -> Result<Option<usize>, EvalError> {
        for (i, t) in assertions.iter().enumerate() {
            if !self.eval_bool(t, a)? {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }

    fn eval_in(&self, t: &Term, env: &mut Env<'_>) -> Result<Value, EvalError> {
        let num = |v: Value, loc: Loc| -> Result<Rational, EvalError> {
            match v {
                Value::Num(r) => Ok(r),
                Value::Bool(_) => Err(EvalError::Type {
                    loc,
                    expected: "numeric",
                }),
            }
        };
        let boolean = |v: Value, loc: Loc| -> Result<bool, EvalError> {
            v.as_bool().ok_or(EvalError::Type {
                loc,
                expected: "Bool",
            })
        };
        Ok(match &t.kind {
            TermKind::Num(r) => Value::Num(r.clone()),
            TermKind::Bool(b) => Value::Bool(*b),
            TermKind::Var(name) => env.lookup(name)?,
            TermKind::Div(n, d) => {
                if t.sort == Sort::Int {
                    return Err(EvalError::IntegerDivision(t.loc));
                }
                let x = num(self.eval_in(n, env)?, n.loc)?;
                let y = num(self.eval_in(d, env)?, d.loc)?;
                Value::Num(match x.checked_div(&y) {
                    Some(q) => q,
                    None => self.div.at_zero(&x),
                })
            }
            TermKind::Ite(c, a, b) => {
                if boolean(self.eval_in(c, env)?, c.loc)? {
                    self.eval_in(a, env)?
                } else {
                    self.eval_in(b, env)?
                }
            }
            TermKind::Quant(q, vars, body) => self.eval_quantifier(t, *q, vars, body, env)?,
            TermKind::App(op, args) => match op {
                Op::Add | Op::Mul | Op::Sub => {
                    let vals = args
                        .iter()
                        .map(|a| num(self.eval_in(a, env)?, a.loc))
                        .collect::<Result<Vec<_>, _>>()?;
                    Value::Num(arith(op, vals))
                }
                Op::Lt | Op::Le | Op::Gt | Op::Ge => {
                    let vals = args
                        .iter()
                        .map(|a| num(self.eval_in(a, env)?, a.loc))
                        .collect::<Result<Vec<_>, _>>()?;
                    Value::Bool(vals.windows(2).all(|w| match op {
                        Op::Lt => w[0] < w[1],
                        Op::Le => w[0] <= w[1],
                        Op::Gt => w[0] > w[1],
                        _ => w[0] >= w[1],
                    }))
                }
                Op::Eq | Op::Distinct => {
                    let vals = args
                        .iter()
                        .map(|a| self.eval_in(a, env))
                        .collect::<Result<Vec<_>, _>>()?;
                    if *op == Op::Eq {
                        Value::Bool(vals.windows(2).all(|w| w[0] == w[1]))
                    } else {
                        let distinct = vals
                            .iter()
                            .enumerate()
                            .all(|(i, v)| vals[i + 1..].iter().all(|w| v != w));
                        Value::Bool(distinct)
                    }
                }
                Op::Not => Value::Bool(!boolean(self.eval_in(&args[0], env)?, args[0].loc)?),
                Op::And => {
                    for a in args {
                        if !boolean(self.eval_in(a, env)?, a.loc)? {
                            return Ok(Value::Bool(false));
                        }
                    }
                    Value::Bool(true)
                }
                Op::Or => {
                    for a in args {
                        if boolean(self.eval_in(a, env)?, a.loc)? {
                            return Ok(Value::Bool(true));
                        }
                    }
                    Value::Bool(false)
                }
                Op::Implies => {
                    // right-associative: a => (b => c)
                    let (last, premises) = args.split_last().expect("=> has arguments");
                    for p in premises {
                        if !boolean(self.eval_in(p, env)?, p.loc)? {
                            return Ok(Value::Bool(true));
                        }
                    }
                    Value::Bool(boolean(self.eval_in(last, env)?, last.loc)?)
                }
                Op::Apply(name) => {
                    let f = self
                        .functions
                        .get(name)
                        .ok_or_else(|| EvalError::UnknownFunction(name.clone()))?
                        .clone();
                    let vals = args
                        .iter()
                        .map(|a| self.eval_in(a, env))
                        .collect::<Result<Vec<_>, _>>()?;
                    f(&vals)
                }
            },
        })
    }

    fn eval_quantifier(
        &self,
        t: &Term,
        q: Quantifier,
        vars: &[(String, Sort)],
        body: &Term,
        env: &mut Env<'_>,
    ) -> Result<Value, EvalError> {
        let Some(samples) = &self.samples else {
            return Err(EvalError::Quantifier(t.loc));
        };
        let domains: Vec<Vec<Value>> = vars
            .iter()
            .map(|(_, s)| match s {
                Sort::Bool => vec![Value::Bool(false), Value::Bool(true)],
                Sort::Int => samples
                    .iter()
                    .filter(|r| r.is_integer())
                    .cloned()
                    .map(Value::Num)
                    .collect(),
                Sort::Real => samples.iter().cloned().map(Value::Num).collect(),
            })
            .collect();
        let want = q == Quantifier::Forall;
        let depth = env.bound.len();
        let mut idx = vec![0usize; vars.len()];
        if domains.iter().any(|d| d.is_empty()) {
            return Ok(Value::Bool(want));
        }
        let result = loop {
            env.bound.truncate(depth);
            for ((name, _), (dom, &i)) in vars.iter().zip(domains.iter().zip(&idx)) {
                env.bound.push((name.clone(), dom[i].clone()));
            }
            let holds = match self.eval_in(body, env) {
                Ok(v) => v.as_bool().ok_or(EvalError::Type {
                    loc: body.loc,
                    expected: "Bool",
                }),
                Err(e) => Err(e),
            };
            let holds = match holds {
                Ok(h) => h,
                Err(e) => {
                    env.bound.truncate(depth);
                    return Err(e);
                }
            };
            if holds != want {
                break !want;
            }
            // odometer increment
            let mut k = vars.len();
            loop {
                if k == 0 {
                    break;
                }
                k -= 1;
                idx[k] += 1;
                if idx[k] < domains[k].len() {
                    break;
                }
                idx[k] = 0;
                if k == 0 {
                    k = usize::MAX;
                    break;
                }
            }
            if k == usize::MAX {
                break want;
            }
        };
        env.bound.truncate(depth);
        Ok(Value::Bool(result))
    }
}

struct Env<'a> {
    assignment: &'a Assignment,
    bound: Vec<(String, Value)>,
}

impl Env<'_> {
    fn lookup(&self, name: &str) -> Result<Value, EvalError> {
        if let Some((_, v)) = self.bound.iter().rev().find(|(n, _)| n == name) {
            return Ok(v.clone());
        }
        self.assignment
            .get(name)
            .cloned()
            .ok_or_else(|| EvalError::Unbound(name.to_string()))
    }
}

fn arith(op: &Op, vals: Vec<Rational>) -> Rational {
    let mut it = vals.into_iter();
    let first = it.next().expect("arithmetic has arguments");
    match op {
        Op::Add => it.fold(first, |a, b| a + b),
        Op::Mul => it.fold(first, |a, b| a * b),
        _ => {
            let rest: Vec<Rational> = it.collect();
            if rest.is_empty() {
                -first
            } else {
                rest.into_iter().fold(first, |a, b| a - b)
            }
        }
    }
}

/// Evaluates a quantifier-free term.
pub fn eval_term(t: &Term, a: &Assignment, d: &DivInterpretation) -> Result<Value, EvalError> {
    Evaluator::new(d.clone()).eval(t, a)
}

/// Greatest integer not above `x`.
pub fn floor_oracle(x: &Rational) -> Rational {
    x.floor()
}

/// The value the floor axioms force on `f(x)`: shift by ±1 through
/// `f(x) + 1 = f(x + 1)` until the argument lands in `[0, 1)`, where
/// `f = 0`, and return the accumulated shift.
pub fn forced_value(x: &Rational) -> Rational {
    let one = Rational::one();
    let zero = Rational::zero();
    let mut arg = x.clone();
    let mut shift = Rational::zero();
    while arg >= one {
        // f(arg) = f(arg - 1) + 1
        arg = &arg - &one;
        shift = &shift + &one;
    }
    while arg < zero {
        // f(arg) = f(arg + 1) - 1
        arg = &arg + &one;
        shift = &shift - &one;
    }
    shift
}

/// `{k/q : |k| ≤ 70, q ∈ {1, 2, 3, 7}}`, deduplicated and sorted.
pub fn default_sample_grid() -> Vec<Rational> {
    rational_grid(70, &[1, 2, 3, 7])
}

pub fn rational_grid(max_abs_numer: i64, denominators: &[i64]) -> Vec<Rational> {
    let mut pts: Vec<Rational> = denominators
        .iter()
        .flat_map(|&q| (-max_abs_numer..=max_abs_numer).map(move |k| Rational::new(k, q)))
        .collect();
    pts.sort();
    pts.dedup();
    pts
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FloorAxiom {
    /// `f(x) + 1 = f(x + 1)`
    Shift,
    /// `0 ≤ x < 1 ⇒ f(x) = 0`
    Base,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomViolation {
    pub axiom: FloorAxiom,
    pub x: Rational,
    pub lhs: Rational,
    pub rhs: Rational,
}

impl fmt::Display for AxiomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.axiom {
            FloorAxiom::Shift => "shift",
            FloorAxiom::Base => "base",
        };
        write!(f, "{name} axiom fails at x = {}: {} ≠ {}", self.x, self.lhs, self.rhs)
    }
}

/// Instances of the floor axioms, with `f` read as `x ↦ x/0` under `d`,
/// that fail at the given sample points.
pub fn check_axiom_samples(d: &DivInterpretation, samples: &[Rational]) -> Vec<AxiomViolation> {
    let one = Rational::one();
    let zero = Rational::zero();
    let mut out = Vec::new();
    for x in samples {
        let lhs = &d.at_zero(x) + &one;
        let rhs = d.at_zero(&(x + &one));
        if lhs != rhs {
            out.push(AxiomViolation {
                axiom: FloorAxiom::Shift,
                x: x.clone(),
                lhs,
                rhs,
            });
        }
        if *x >= zero && *x < one {
            let fx = d.at_zero(x);
            if !fx.is_zero() {
                out.push(AxiomViolation {
                    axiom: FloorAxiom::Base,
                    x: x.clone(),
                    lhs: fx,
                    rhs: zero.clone(),
                });
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("search budget of {budget} assignments exhausted")]
pub struct BudgetExceeded {
    pub budget: u64,
}

pub const DEFAULT_SEARCH_BUDGET: u64 = 50_000_000;

/// First assignment, in lexicographic order over `[-bound, bound]^n` (in the
/// formula's variable order), that satisfies `f`. `Ok(None)` means no
/// solution inside the box.
pub fn brute_force_int_sat(
    f: &IntFormula,
    bound: u64,
    budget: u64,
) -> Result<Option<Vec<BigInt>>, BudgetExceeded> {
    let n = f.variables.len();
    let lo = -(bound as i64);
    let hi = bound as i64;
    let ev = Evaluator::new(DivInterpretation::constant(Rational::zero()));
    let mut point = vec![lo; n];
    let mut steps = 0u64;
    loop {
        if steps >= budget {
            return Err(BudgetExceeded { budget });
        }
        steps += 1;
        let a: Assignment = f
            .variables
            .iter()
            .zip(&point)
            .map(|(v, &x)| (v.as_str(), Rational::from(x)))
            .collect();
        // IntFormula bodies are division- and quantifier-free, so this
        // cannot fail.
        if ev.eval_bool(&f.body, &a).expect("IntFormula body evaluates") {
            return Ok(Some(point.into_iter().map(BigInt::from).collect()));
        }
        let mut k = n;
        loop {
            if k == 0 {
                return Ok(None);
            }
            k -= 1;
            if point[k] < hi {
                point[k] += 1;
                break;
            }
            point[k] = lo;
        }
    }
}
