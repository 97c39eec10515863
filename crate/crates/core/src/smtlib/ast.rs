//! Sorted term and script representation for the supported SMT-LIB2 subset.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::Serialize;

use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Sort {
    Real,
    Int,
    Bool,
}

impl Sort {
    pub fn is_numeric(self) -> bool {
        matches!(self, Sort::Real | Sort::Int)
    }

    pub fn name(self) -> &'static str {
        match self {
            Sort::Real => "Real",
            Sort::Int => "Int",
            Sort::Bool => "Bool",
        }
    }

    pub fn from_name(name: &str) -> Option<Sort> {
        match name {
            "Real" => Some(Sort::Real),
            "Int" => Some(Sort::Int),
            "Bool" => Some(Sort::Bool),
            _ => None,
        }
    }
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// 1-based line and column of the token a term originates from.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Loc {
    pub line: u32,
    pub column: u32,
}

impl Loc {
    pub fn new(line: u32, column: u32) -> Self {
        Loc { line, column }
    }
}

impl fmt::Display for Loc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Op {
    Add,
    /// Binary-or-more subtraction, or unary negation with one argument.
    Sub,
    Mul,
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Distinct,
    Not,
    And,
    Or,
    Implies,
    /// Application of a declared (uninterpreted) function of arity ≥ 1.
    Apply(String),
}

impl Op {
    pub fn symbol(&self) -> &str {
        match self {
            Op::Add => "+",
            Op::Sub => "-",
            Op::Mul => "*",
            Op::Lt => "<",
            Op::Le => "<=",
            Op::Gt => ">",
            Op::Ge => ">=",
            Op::Eq => "=",
            Op::Distinct => "distinct",
            Op::Not => "not",
            Op::And => "and",
            Op::Or => "or",
            Op::Implies => "=>",
            Op::Apply(name) => name,
        }
    }

    pub fn is_arith(&self) -> bool {
        matches!(self, Op::Add | Op::Sub | Op::Mul)
    }

    pub fn is_comparison(&self) -> bool {
        matches!(self, Op::Lt | Op::Le | Op::Gt | Op::Ge)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quantifier {
    Forall,
    Exists,
}

impl Quantifier {
    pub fn keyword(self) -> &'static str {
        match self {
            Quantifier::Forall => "forall",
            Quantifier::Exists => "exists",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum TermKind {
    Num(Rational),
    Bool(bool),
    /// Declared constant or bound variable.
    Var(String),
    App(Op, Vec<Term>),
    Div(Box<Term>, Box<Term>),
    Ite(Box<Term>, Box<Term>, Box<Term>),
    Quant(Quantifier, Vec<(String, Sort)>, Box<Term>),
}

/// A sort-annotated term. `let` never appears here: it is expanded while
/// parsing.
///
/// Equality is structural and ignores source locations.
#[derive(Debug, Clone)]
pub struct Term {
    pub kind: TermKind,
    pub sort: Sort,
    pub loc: Loc,
}

impl PartialEq for Term {
    fn eq(&self, other: &Self) -> bool {
        self.sort == other.sort && self.kind == other.kind
    }
}

// builders are named after the SMT-LIB operators they construct
#[allow(clippy::should_implement_trait)]
impl Term {
    pub fn new(kind: TermKind, sort: Sort) -> Term {
        Term {
            kind,
            sort,
            loc: Loc::default(),
        }
    }

    pub fn at(mut self, loc: Loc) -> Term {
        self.loc = loc;
        self
    }

    /// A raw literal node. Negative or non-terminating values print in a
    /// compound form; use [`Term::rational_literal`] for the parsed shape.
    pub fn num(value: Rational, sort: Sort) -> Term {
        debug_assert!(sort.is_numeric());
        Term::new(TermKind::Num(value), sort)
    }

    /// Integer literal in the parsed shape (`(- n)` for negatives).
    pub fn int(n: i64, sort: Sort) -> Term {
        Term::rational_literal(&Rational::from(n), sort)
    }

    /// Literal for an arbitrary rational in the shape the parser produces:
    /// a plain numeral or decimal, `(- n)` for negatives, and `(/ p q)` when
    /// the decimal expansion does not terminate.
    pub fn rational_literal(value: &Rational, sort: Sort) -> Term {
        if value.is_negative() {
            return Term::neg(Term::rational_literal(&-value, sort));
        }
        if value.is_integer() || value.to_terminating_decimal().is_some() {
            return Term::num(value.clone(), sort);
        }
        Term::div(
            Term::num(Rational::from_integer(value.numer().clone()), sort),
            Term::num(Rational::from_integer(value.denom().clone()), sort),
        )
    }

    pub fn bool(b: bool) -> Term {
        Term::new(TermKind::Bool(b), Sort::Bool)
    }

    pub fn var(name: impl Into<String>, sort: Sort) -> Term {
        Term::new(TermKind::Var(name.into()), sort)
    }

    pub fn app(op: Op, args: Vec<Term>) -> Term {
        let sort = match &op {
            Op::Add | Op::Sub | Op::Mul => args.first().map(|a| a.sort).unwrap_or(Sort::Real),
            Op::Apply(_) => panic!("use Term::apply for uninterpreted functions"),
            _ => Sort::Bool,
        };
        Term::new(TermKind::App(op, args), sort)
    }

    pub fn apply(name: impl Into<String>, args: Vec<Term>, result: Sort) -> Term {
        Term::new(TermKind::App(Op::Apply(name.into()), args), result)
    }

    pub fn add(args: Vec<Term>) -> Term {
        Term::app(Op::Add, args)
    }

    pub fn mul(args: Vec<Term>) -> Term {
        Term::app(Op::Mul, args)
    }

    pub fn neg(t: Term) -> Term {
        Term::app(Op::Sub, vec![t])
    }

    pub fn eq(a: Term, b: Term) -> Term {
        Term::app(Op::Eq, vec![a, b])
    }

    pub fn le(a: Term, b: Term) -> Term {
        Term::app(Op::Le, vec![a, b])
    }

    pub fn lt(a: Term, b: Term) -> Term {
        Term::app(Op::Lt, vec![a, b])
    }

    pub fn not(t: Term) -> Term {
        Term::app(Op::Not, vec![t])
    }

    pub fn and(args: Vec<Term>) -> Term {
        Term::app(Op::And, args)
    }

    pub fn implies(a: Term, b: Term) -> Term {
        Term::app(Op::Implies, vec![a, b])
    }

    pub fn div(num: Term, den: Term) -> Term {
        let sort = num.sort;
        Term::new(TermKind::Div(Box::new(num), Box::new(den)), sort)
    }

    pub fn ite(cond: Term, then: Term, els: Term) -> Term {
        let sort = then.sort;
        Term::new(
            TermKind::Ite(Box::new(cond), Box::new(then), Box::new(els)),
            sort,
        )
    }

    pub fn forall(vars: Vec<(String, Sort)>, body: Term) -> Term {
        Term::new(
            TermKind::Quant(Quantifier::Forall, vars, Box::new(body)),
            Sort::Bool,
        )
    }

    pub fn as_num(&self) -> Option<&Rational> {
        match &self.kind {
            TermKind::Num(r) => Some(r),
            _ => None,
        }
    }

    pub fn is_div(&self) -> bool {
        matches!(self.kind, TermKind::Div(..))
    }

    /// Children in a fixed order; this order defines AST paths.
    pub fn children(&self) -> Vec<&Term> {
        match &self.kind {
            TermKind::Num(_) | TermKind::Bool(_) | TermKind::Var(_) => vec![],
            TermKind::App(_, args) => args.iter().collect(),
            TermKind::Div(n, d) => vec![n, d],
            TermKind::Ite(c, t, e) => vec![c, t, e],
            TermKind::Quant(_, _, body) => vec![body],
        }
    }

    pub fn child(&self, index: usize) -> Option<&Term> {
        self.children().get(index).copied()
    }

    /// Rebuilds this node with every child replaced by `f(child)`.
    pub fn map_children(&self, mut f: impl FnMut(&Term) -> Term) -> Term {
        let kind = match &self.kind {
            TermKind::Num(_) | TermKind::Bool(_) | TermKind::Var(_) => self.kind.clone(),
            TermKind::App(op, args) => TermKind::App(op.clone(), args.iter().map(f).collect()),
            TermKind::Div(n, d) => TermKind::Div(Box::new(f(n)), Box::new(f(d))),
            TermKind::Ite(c, t, e) => {
                TermKind::Ite(Box::new(f(c)), Box::new(f(t)), Box::new(f(e)))
            }
            TermKind::Quant(q, vars, body) => TermKind::Quant(*q, vars.clone(), Box::new(f(body))),
        };
        Term {
            kind,
            sort: self.sort,
            loc: self.loc,
        }
    }

    /// Pre-order visit of every subterm.
    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a Term)) {
        f(self);
        for c in self.children() {
            c.visit(f);
        }
    }

    pub fn count_nodes(&self, mut pred: impl FnMut(&Term) -> bool) -> usize {
        let mut n = 0;
        self.visit(&mut |t| {
            if pred(t) {
                n += 1
            }
        });
        n
    }

    pub fn size(&self) -> usize {
        self.count_nodes(|_| true)
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        collect_free(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn contains_quantifier(&self) -> bool {
        self.count_nodes(|t| matches!(t.kind, TermKind::Quant(..))) > 0
    }

    /// Capture-avoiding simultaneous substitution of free variables.
    pub fn substitute(&self, map: &HashMap<String, Term>) -> Term {
        if map.is_empty() {
            return self.clone();
        }
        match &self.kind {
            TermKind::Var(name) => match map.get(name) {
                Some(t) => t.clone(),
                None => self.clone(),
            },
            TermKind::Quant(q, vars, body) => {
                let mut inner: HashMap<String, Term> = map
                    .iter()
                    .filter(|(k, _)| !vars.iter().any(|(v, _)| v == *k))
                    .map(|(k, v)| (k.clone(), v.clone()))
                    .collect();
                let body_free = body.free_vars();
                inner.retain(|k, _| body_free.contains(k));
                let incoming: BTreeSet<String> =
                    inner.values().flat_map(|t| t.free_vars()).collect();
                let mut new_vars = Vec::with_capacity(vars.len());
                let mut renames = HashMap::new();
                for (v, s) in vars {
                    if incoming.contains(v) {
                        let avoid: BTreeSet<&String> = incoming
                            .iter()
                            .chain(body_free.iter())
                            .chain(vars.iter().map(|(n, _)| n))
                            .collect();
                        let fresh = fresh_name(v, |c| avoid.contains(&c.to_string()));
                        renames.insert(v.clone(), Term::var(fresh.clone(), *s));
                        new_vars.push((fresh, *s));
                    } else {
                        new_vars.push((v.clone(), *s));
                    }
                }
                let body = if renames.is_empty() {
                    body.as_ref().clone()
                } else {
                    body.substitute(&renames)
                };
                Term {
                    kind: TermKind::Quant(*q, new_vars, Box::new(body.substitute(&inner))),
                    sort: self.sort,
                    loc: self.loc,
                }
            }
            _ => self.map_children(|c| c.substitute(map)),
        }
    }
}

fn collect_free(t: &Term, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
    match &t.kind {
        TermKind::Var(name) => {
            if !bound.contains(name) {
                out.insert(name.clone());
            }
        }
        TermKind::Quant(_, vars, body) => {
            let depth = bound.len();
            bound.extend(vars.iter().map(|(v, _)| v.clone()));
            collect_free(body, bound, out);
            bound.truncate(depth);
        }
        _ => {
            for c in t.children() {
                collect_free(c, bound, out);
            }
        }
    }
}

/// `base` itself if unused, otherwise `base!1`, `base!2`, ...
pub fn fresh_name(base: &str, mut taken: impl FnMut(&str) -> bool) -> String {
    if !taken(base) {
        return base.to_string();
    }
    (1u64..)
        .map(|i| format!("{base}!{i}"))
        .find(|c| !taken(c))
        .expect("fresh name space exhausted")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Declaration {
    pub name: String,
    pub args: Vec<Sort>,
    pub result: Sort,
}

impl Declaration {
    pub fn constant(name: impl Into<String>, sort: Sort) -> Self {
        Declaration {
            name: name.into(),
            args: vec![],
            result: sort,
        }
    }

    pub fn function(name: impl Into<String>, args: Vec<Sort>, result: Sort) -> Self {
        Declaration {
            name: name.into(),
            args,
            result,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AttributeCommand {
    SetInfo,
    SetOption,
}

/// A `set-info` / `set-option` entry. `value` is kept as raw SMT-LIB text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Attribute {
    pub command: AttributeCommand,
    pub key: String,
    pub value: Option<String>,
}

impl Attribute {
    pub fn info(key: impl Into<String>, value: impl Into<String>) -> Self {
        Attribute {
            command: AttributeCommand::SetInfo,
            key: key.into(),
            value: Some(value.into()),
        }
    }
}

/// A command outside the supported subset, kept verbatim.
#[derive(Debug, Clone)]
pub struct UnsupportedCommand {
    pub text: String,
    pub loc: Loc,
}

impl PartialEq for UnsupportedCommand {
    fn eq(&self, other: &Self) -> bool {
        self.text == other.text
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Script {
    pub logic: Option<String>,
    pub declarations: Vec<Declaration>,
    pub assertions: Vec<Term>,
    pub metadata: Vec<Attribute>,
    pub unsupported: Vec<UnsupportedCommand>,
    pub check_sat: bool,
}

impl Script {
    pub fn with_logic(logic: impl Into<String>) -> Self {
        Script {
            logic: Some(logic.into()),
            ..Script::default()
        }
    }

    pub fn declaration(&self, name: &str) -> Option<&Declaration> {
        self.declarations.iter().find(|d| d.name == name)
    }

    pub fn info(&self, key: &str) -> Option<&str> {
        self.metadata
            .iter()
            .find(|a| a.command == AttributeCommand::SetInfo && a.key == key)
            .and_then(|a| a.value.as_deref())
    }

    /// Every symbol the script uses, declared or bound.
    pub fn used_names(&self) -> BTreeSet<String> {
        let mut names: BTreeSet<String> =
            self.declarations.iter().map(|d| d.name.clone()).collect();
        for a in &self.assertions {
            a.visit(&mut |t| match &t.kind {
                TermKind::Var(n) | TermKind::App(Op::Apply(n), _) => {
                    names.insert(n.clone());
                }
                TermKind::Quant(_, vars, _) => {
                    names.extend(vars.iter().map(|(v, _)| v.clone()));
                }
                _ => {}
            });
        }
        names
    }

    pub fn fresh_symbol(&self, base: &str) -> String {
        let used = self.used_names();
        fresh_name(base, |c| used.contains(c))
    }

    /// Resolves a path whose first element indexes the assertions and whose
    /// remainder indexes [`Term::children`].
    pub fn term_at(&self, path: &[usize]) -> Option<&Term> {
        let (first, rest) = path.split_first()?;
        let mut t = self.assertions.get(*first)?;
        for &i in rest {
            t = t.child(i)?;
        }
        Some(t)
    }

    pub fn count_nodes(&self, mut pred: impl FnMut(&Term) -> bool) -> usize {
        self.assertions
            .iter()
            .map(|a| a.count_nodes(&mut pred))
            .sum()
    }

    pub fn node_count(&self) -> usize {
        self.count_nodes(|_| true)
    }

    pub fn div_count(&self) -> usize {
        self.count_nodes(|t| t.is_div())
    }
}
