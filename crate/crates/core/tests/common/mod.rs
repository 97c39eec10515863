#![allow(dead_code)]

use std::path::{Path, PathBuf};

use proptest::prelude::*;
use rand::Rng;

use nradiv::eval::{Assignment, Value};
use nradiv::smtlib::{Declaration, Op, Script, Sort, Term};
use nradiv::{parse_script, Rational};

pub const VARS: [&str; 3] = ["x", "y", "z"];

pub fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data")
}

pub fn corpus_dir() -> PathBuf {
    data_dir().join("corpus")
}

/// Every `.smt2` file of the mini-corpus, sorted.
pub fn corpus_files() -> Vec<PathBuf> {
    let mut out: Vec<PathBuf> = walkdir::WalkDir::new(corpus_dir())
        .into_iter()
        .map(|e| e.unwrap().into_path())
        .filter(|p| p.extension().is_some_and(|x| x == "smt2"))
        .collect();
    out.sort();
    out
}

/// The corpus files that parse, with their scripts.
pub fn corpus_scripts() -> Vec<(PathBuf, Script)> {
    corpus_files()
        .into_iter()
        .filter_map(|p| {
            let text = std::fs::read_to_string(&p).unwrap();
            parse_script(&text).ok().map(|s| (p, s))
        })
        .collect()
}

pub fn fermat_source() -> Script {
    parse_script(
        "(set-logic QF_NIA)(declare-const a Int)(declare-const b Int)(declare-const c Int)\
         (assert (= (+ (* a a a) (* b b b)) (* c c c)))",
    )
    .unwrap()
}

/// A QF_NRA script over x, y, z asserting `assertions`.
pub fn script_over_xyz(assertions: Vec<Term>) -> Script {
    let mut s = Script::with_logic("QF_NRA");
    for v in VARS {
        s.declarations.push(Declaration::constant(v, Sort::Real));
    }
    s.assertions = assertions;
    s.check_sat = true;
    s
}

pub fn small_rational(rng: &mut impl Rng) -> Rational {
    let n: i64 = rng.gen_range(-12..=12);
    let d: i64 = rng.gen_range(1..=4);
    Rational::new(n, d)
}

/// Random values for every declared constant of `s`. Zero is drawn often
/// so that divisions by variables actually hit it.
pub fn random_assignment(s: &Script, rng: &mut impl Rng) -> Assignment {
    let mut a = Assignment::new();
    for d in &s.declarations {
        if !d.args.is_empty() {
            continue;
        }
        let v: Value = match d.result {
            Sort::Bool => rng.gen_bool(0.5).into(),
            Sort::Int => Rational::from(rng.gen_range(-6i64..=6)).into(),
            Sort::Real if rng.gen_bool(0.25) => Rational::zero().into(),
            Sort::Real => small_rational(rng).into(),
        };
        a.set(d.name.clone(), v);
    }
    a
}

pub fn arb_rational() -> impl Strategy<Value = Rational> {
    (-30i64..=30, 1i64..=7).prop_map(|(n, d)| Rational::new(n, d))
}

pub fn arb_nonzero_rational() -> impl Strategy<Value = Rational> {
    arb_rational().prop_filter("nonzero", |r| !r.is_zero())
}

fn real_leaf() -> impl Strategy<Value = Term> {
    prop_oneof![
        3 => prop::sample::select(VARS.to_vec()).prop_map(|v| Term::var(v, Sort::Real)),
        2 => arb_rational().prop_map(|r| Term::rational_literal(&r, Sort::Real)),
        1 => Just(Term::int(0, Sort::Real)),
    ]
}

/// Real-sorted terms over x, y, z with every arithmetic operator, division
/// (including by literal zero) and `ite`.
pub fn arb_real_term() -> BoxedStrategy<Term> {
    real_leaf()
        .prop_recursive(4, 32, 3, |inner| {
            prop_oneof![
                prop::collection::vec(inner.clone(), 2..=3).prop_map(Term::add),
                prop::collection::vec(inner.clone(), 2..=3).prop_map(Term::mul),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::app(Op::Sub, vec![a, b])),
                inner.clone().prop_map(Term::neg),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::div(a, b)),
                (inner.clone(), inner.clone(), inner.clone(), inner)
                    .prop_map(|(l, r, a, b)| Term::ite(Term::lt(l, r), a, b)),
            ]
        })
        .boxed()
}

/// Real terms without division.
pub fn arb_polynomial() -> BoxedStrategy<Term> {
    prop_oneof![
        prop::sample::select(VARS.to_vec()).prop_map(|v| Term::var(v, Sort::Real)),
        arb_rational().prop_map(|r| Term::rational_literal(&r, Sort::Real)),
    ]
    .prop_recursive(3, 16, 3, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 2..=3).prop_map(Term::add),
            prop::collection::vec(inner.clone(), 2..=3).prop_map(Term::mul),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::app(Op::Sub, vec![a, b])),
            inner.prop_map(Term::neg),
        ]
    })
    .boxed()
}

/// Bool-sorted formulas built from comparisons of real terms.
pub fn arb_formula() -> BoxedStrategy<Term> {
    let atom = (arb_real_term(), arb_real_term(), 0..3u8).prop_map(|(a, b, k)| match k {
        0 => Term::eq(a, b),
        1 => Term::le(a, b),
        _ => Term::lt(a, b),
    });
    atom.prop_recursive(2, 6, 2, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 2..=2).prop_map(Term::and),
            inner.clone().prop_map(Term::not),
            (inner.clone(), inner).prop_map(|(a, b)| Term::implies(a, b)),
        ]
    })
    .boxed()
}

pub fn arb_script() -> impl Strategy<Value = Script> {
    prop::collection::vec(arb_formula(), 1..=3).prop_map(script_over_xyz)
}

pub fn arb_xyz_assignment() -> impl Strategy<Value = Assignment> {
    (arb_rational(), arb_rational(), arb_rational()).prop_map(|(x, y, z)| {
        Assignment::new().with("x", x).with("y", y).with("z", z)
    })
}
