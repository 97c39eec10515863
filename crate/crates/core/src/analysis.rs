//! Division census: find every real division, classify its divisor, and
//! label the script.
//!
//! A divisor is constant when it folds to a literal through `+ - * /` over
//! numerals; folding refuses to divide by zero, so `(/ x (/ 1 0))` has a
//! non-constant divisor while the inner `(/ 1 0)` is a constant-zero
//! division. Zero divisors are grouped with non-constant ones: `x/0` is the
//! unconstrained point of real division.
//!
//! Divisions with `Int` operands (accepted only in integer logics) are a
//! different operator and are not counted.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::rational::Rational;
use crate::smtlib::{Loc, Op, Script, Sort, Term, TermKind};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum DivisorClass {
    ConstantNonzero(Rational),
    ConstantZero,
    NonConstant,
}

impl DivisorClass {
    pub fn is_constant(&self) -> bool {
        !matches!(self, DivisorClass::NonConstant)
    }

    /// Divisions that may reach the point where `/` is unconstrained.
    pub fn is_undecidable_fragment(&self) -> bool {
        matches!(self, DivisorClass::ConstantZero | DivisorClass::NonConstant)
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DivisorClass::ConstantNonzero(v) => write!(f, "constant-nonzero({v})"),
            DivisorClass::ConstantZero => f.write_str("constant-zero"),
            DivisorClass::NonConstant => f.write_str("non-constant"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DivOccurrence {
    /// Assertion index followed by child indices (see [`Script::term_at`]).
    pub path: Vec<usize>,
    pub divisor_class: DivisorClass,
    pub location: Loc,
    pub under_quantifier: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictLabel {
    PolynomialOnly,
    ConstantDivisionOnly,
    NonConstantDivision,
}

impl VerdictLabel {
    pub const ALL: [VerdictLabel; 3] = [
        VerdictLabel::PolynomialOnly,
        VerdictLabel::ConstantDivisionOnly,
        VerdictLabel::NonConstantDivision,
    ];

    pub fn name(self) -> &'static str {
        match self {
            VerdictLabel::PolynomialOnly => "PolynomialOnly",
            VerdictLabel::ConstantDivisionOnly => "ConstantDivisionOnly",
            VerdictLabel::NonConstantDivision => "NonConstantDivision",
        }
    }
}

impl fmt::Display for VerdictLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FragmentVerdict {
    pub label: VerdictLabel,
    pub occurrences: Vec<DivOccurrence>,
}

/// Value of a closed term built from numerals with `+ - * /`, or `None`.
/// Division by a zero-valued subterm is refused.
pub fn fold_constant(t: &Term) -> Option<Rational> {
    match &t.kind {
        TermKind::Num(v) => Some(v.clone()),
        TermKind::App(op @ (Op::Add | Op::Sub | Op::Mul), args) => {
            let vals = args.iter().map(fold_constant).collect::<Option<Vec<_>>>()?;
            let mut it = vals.into_iter();
            let first = it.next()?;
            Some(match op {
                Op::Add => it.fold(first, |a, b| a + b),
                Op::Mul => it.fold(first, |a, b| a * b),
                _ => {
                    let rest: Vec<_> = it.collect();
                    if rest.is_empty() {
                        -first
                    } else {
                        rest.into_iter().fold(first, |a, b| a - b)
                    }
                }
            })
        }
        TermKind::Div(n, d) => fold_constant(n)?.checked_div(&fold_constant(d)?),
        _ => None,
    }
}

pub fn classify_divisor(d: &Term) -> DivisorClass {
    match fold_constant(d) {
        Some(v) if v.is_zero() => DivisorClass::ConstantZero,
        Some(v) => DivisorClass::ConstantNonzero(v),
        None => DivisorClass::NonConstant,
    }
}

/// Real division nodes (the ones the analysis and the passes act on).
pub fn is_real_division(t: &Term) -> bool {
    t.is_div() && t.sort == Sort::Real
}

/// One record per real division, in source (pre-)order, including
/// divisions nested inside divisors.
pub fn collect_divisions(s: &Script) -> Vec<DivOccurrence> {
    let mut out = Vec::new();
    for (i, a) in s.assertions.iter().enumerate() {
        let mut path = vec![i];
        walk(a, &mut path, false, &mut out);
    }
    out
}

fn walk(t: &Term, path: &mut Vec<usize>, under_quantifier: bool, out: &mut Vec<DivOccurrence>) {
    if is_real_division(t) {
        let TermKind::Div(_, d) = &t.kind else {
            unreachable!()
        };
        out.push(DivOccurrence {
            path: path.clone(),
            divisor_class: classify_divisor(d),
            location: t.loc,
            under_quantifier,
        });
    }
    let quantified = under_quantifier || matches!(t.kind, TermKind::Quant(..));
    for (i, c) in t.children().into_iter().enumerate() {
        path.push(i);
        walk(c, path, quantified, out);
        path.pop();
    }
}

pub fn verdict_of(occurrences: Vec<DivOccurrence>) -> FragmentVerdict {
    let label = if occurrences.is_empty() {
        VerdictLabel::PolynomialOnly
    } else if occurrences
        .iter()
        .any(|o| o.divisor_class.is_undecidable_fragment())
    {
        VerdictLabel::NonConstantDivision
    } else {
        VerdictLabel::ConstantDivisionOnly
    };
    FragmentVerdict { label, occurrences }
}

pub fn classify_script(s: &Script) -> FragmentVerdict {
    verdict_of(collect_divisions(s))
}

/// Occurrence counts per divisor class.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCounts {
    pub constant_nonzero: usize,
    pub constant_zero: usize,
    pub non_constant: usize,
}

impl ClassCounts {
    pub fn of(occurrences: &[DivOccurrence]) -> Self {
        let mut c = ClassCounts::default();
        for o in occurrences {
            match o.divisor_class {
                DivisorClass::ConstantNonzero(_) => c.constant_nonzero += 1,
                DivisorClass::ConstantZero => c.constant_zero += 1,
                DivisorClass::NonConstant => c.non_constant += 1,
            }
        }
        c
    }

    pub fn total(&self) -> usize {
        self.constant_nonzero + self.constant_zero + self.non_constant
    }

    pub fn add(&mut self, other: &ClassCounts) {
        self.constant_nonzero += other.constant_nonzero;
        self.constant_zero += other.constant_zero;
        self.non_constant += other.non_constant;
    }
}
