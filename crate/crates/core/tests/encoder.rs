mod common;

use num_bigint::BigInt;
use proptest::prelude::*;

use common::*;
use nradiv::encoder::{
    decode_witness, encode, encode_integer_formula, encode_via_div0, DecodeError, EncodingMode, IntFormula,
};
use nradiv::eval::{brute_force_int_sat, Assignment, DivInterpretation};
use nradiv::smtlib::{Op, Script, Sort, Term, TermKind};
use nradiv::{parse_script, print_script, Rational};

const INT_VARS: [&str; 3] = ["a", "b", "c"];

fn int_poly() -> BoxedStrategy<Term> {
    prop_oneof![
        prop::sample::select(INT_VARS.to_vec()).prop_map(|v| Term::var(v, Sort::Int)),
        (-4i64..=4).prop_map(|n| Term::int(n, Sort::Int)),
    ]
    .prop_recursive(3, 12, 3, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 2..=3).prop_map(Term::add),
            prop::collection::vec(inner.clone(), 2..=3).prop_map(Term::mul),
            (inner.clone(), inner).prop_map(|(a, b)| Term::app(Op::Sub, vec![a, b])),
        ]
    })
    .boxed()
}

fn int_formula() -> impl Strategy<Value = IntFormula> {
    let atom = (int_poly(), int_poly(), 0..3u8).prop_map(|(a, b, k)| match k {
        0 => Term::eq(a, b),
        1 => Term::le(a, b),
        _ => Term::lt(a, b),
    });
    let body = atom.prop_recursive(2, 4, 2, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 2..=2).prop_map(Term::and),
            inner.prop_map(Term::not),
        ]
    });
    body.prop_map(|b| IntFormula::new(INT_VARS.iter().map(|v| v.to_string()).collect(), b).unwrap())
}

/// `f(t)` ↦ `t/0` everywhere.
fn f_to_div0(t: &Term, f: &str) -> Term {
    let t = t.map_children(|c| f_to_div0(c, f));
    match &t.kind {
        TermKind::App(Op::Apply(name), args) if name == f => Term::div(args[0].clone(), Term::int(0, Sort::Real)),
        _ => t,
    }
}

fn witness_assignment(vars: &[String], w: &[BigInt]) -> Assignment {
    vars.iter()
        .zip(w)
        .map(|(v, x)| (v.as_str(), Rational::from(x.clone())))
        .collect()
}

fn all_hold(p: &nradiv::encoder::EncodedProblem, a: &Assignment) -> bool {
    p.evaluator(&DivInterpretation::floor())
        .first_falsified(&p.script.assertions, a)
        .unwrap()
        .is_none()
}

#[test]
fn golden_example_file_is_reproduced() {
    let golden = std::fs::read_to_string(data_dir().join("fermat-cubic.smt2")).unwrap();
    let p = encode_via_div0(&IntFormula::from_script(&fermat_source()).unwrap()).unwrap();
    assert_eq!(print_script(&p.script), golden);
}

#[test]
fn fermat_uf_encoding_lists_axioms_fixpoints_body() {
    let p = encode_integer_formula(&IntFormula::from_script(&fermat_source()).unwrap()).unwrap();
    let lines: Vec<String> = p.script.assertions.iter().map(|a| a.to_string()).collect();
    assert_eq!(
        lines,
        [
            "(forall ((x Real)) (= (+ (f x) 1) (f (+ x 1))))",
            "(forall ((x Real)) (=> (and (<= 0 x) (< x 1)) (= (f x) 0)))",
            "(= (f a) a)",
            "(= (f b) b)",
            "(= (f c) c)",
            "(= (+ (* a a a) (* b b b)) (* c c c))",
        ]
    );
    assert_eq!(p.script.logic.as_deref(), Some("UFNRA"));
}

#[test]
fn decoding_fermat_models() {
    let p = encode_via_div0(&IntFormula::from_script(&fermat_source()).unwrap()).unwrap();
    let floor = DivInterpretation::floor();
    let a = Assignment::new().with("a", Rational::zero()).with("b", Rational::one()).with("c", Rational::one());
    let w = decode_witness(&p, &a, &floor).unwrap();
    assert_eq!(w.iter().map(|(_, v)| v.clone()).collect::<Vec<_>>(), [0, 1, 1].map(BigInt::from));

    let half = a.clone().with("a", Rational::new(1, 2));
    // a/0 = a is the first fixpoint conjunct, right after the two axioms
    assert!(matches!(decode_witness(&p, &half, &floor), Err(DecodeError::Violated { index: 2, .. })));
}

#[test]
fn doubled_x_equals_four_is_witnessed_by_two() {
    let s = parse_script("(set-logic QF_NIA)(declare-const x Int)(assert (= (* 2 x) 4))").unwrap();
    let f = IntFormula::from_script(&s).unwrap();
    let w = brute_force_int_sat(&f, 10, 1000).unwrap().unwrap();
    assert_eq!(w, [BigInt::from(2)]);
    for mode in [EncodingMode::Uf, EncodingMode::Div0] {
        let p = encode(&f, mode).unwrap();
        assert!(all_hold(&p, &witness_assignment(&f.variables, &w)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn div0_encoding_is_the_uf_encoding_with_division(f in int_formula()) {
        let uf = encode(&f, EncodingMode::Uf).unwrap();
        let d0 = encode(&f, EncodingMode::Div0).unwrap();
        let fname = uf.f_name.clone().unwrap();
        let mut expected: Script = uf.script.clone();
        expected.logic = Some("NRA".into());
        expected.declarations.retain(|d| d.name != fname);
        expected.assertions = expected.assertions.iter().map(|a| f_to_div0(a, &fname)).collect();
        prop_assert_eq!(&d0.script, &expected);
    }

    #[test]
    fn encodings_round_trip(f in int_formula()) {
        for mode in [EncodingMode::Uf, EncodingMode::Div0] {
            let p = encode(&f, mode).unwrap();
            let text = print_script(&p.script);
            prop_assert_eq!(parse_script(&text).unwrap(), p.script);
        }
    }

    #[test]
    fn witnesses_satisfy_both_encodings(f in int_formula()) {
        if let Some(w) = brute_force_int_sat(&f, 3, 1_000_000).unwrap() {
            let a = witness_assignment(&f.variables, &w);
            for mode in [EncodingMode::Uf, EncodingMode::Div0] {
                prop_assert!(all_hold(&encode(&f, mode).unwrap(), &a));
            }
        }
    }

    #[test]
    fn non_integer_values_break_a_fixpoint(f in int_formula(), i in 0usize..3, vals in prop::collection::vec(arb_rational(), 3)) {
        let mut vals = vals;
        if vals[i].is_integer() {
            vals[i] = vals[i].clone() + Rational::new(1, 3);
        }
        let a: Assignment = INT_VARS.iter().copied().zip(vals).collect();
        for mode in [EncodingMode::Uf, EncodingMode::Div0] {
            let p = encode(&f, mode).unwrap();
            let ev = p.evaluator(&DivInterpretation::floor());
            prop_assert!(!ev.eval_bool(&p.fixpoint_conjuncts()[i], &a).unwrap());
        }
    }
}
