mod common;

use proptest::prelude::*;

use common::*;
use nradiv::smtlib::{check_script, parse_term, sort_of, ParseError, Sort, Term, TermKind};
use nradiv::{parse_script, print_script};

fn all_terms(t: &Term, out: &mut Vec<Term>) {
    t.visit(&mut |s| out.push(s.clone()));
}

#[test]
fn corpus_round_trips() {
    for (path, s) in corpus_scripts() {
        let text = print_script(&s);
        let back = parse_script(&text).unwrap_or_else(|e| panic!("{}: {e}\n{text}", path.display()));
        assert_eq!(back, s, "{}", path.display());
        assert_eq!(print_script(&back), text, "{}", path.display());
    }
}

#[test]
fn malformed_corpus_file_reports_a_location() {
    let text = std::fs::read_to_string(corpus_dir().join("malformed.smt2")).unwrap();
    let err = parse_script(&text).unwrap_err();
    assert!(matches!(err, ParseError::Syntax { .. }));
    assert!(err.loc().is_some());
}

#[test]
fn corpus_assertions_are_bool_and_resorts_agree() {
    for (path, s) in corpus_scripts() {
        check_script(&s).unwrap();
        for a in &s.assertions {
            assert_eq!(a.sort, Sort::Bool, "{}", path.display());
            assert_eq!(sort_of(a, &s.declarations).unwrap(), Sort::Bool);
        }
    }
}

#[test]
fn locations_point_at_the_originating_token() {
    for (path, s) in corpus_scripts() {
        let text = std::fs::read_to_string(&path).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        let mut terms = Vec::new();
        for a in &s.assertions {
            all_terms(a, &mut terms);
        }
        for t in terms {
            let line = lines[t.loc.line as usize - 1];
            let rest: String = line.chars().skip(t.loc.column as usize - 1).collect();
            let ok = match &t.kind {
                TermKind::Var(name) => rest.starts_with(name.as_str()) || rest.starts_with('('),
                TermKind::Num(_) | TermKind::Bool(_) => {
                    rest.starts_with(|c: char| c.is_ascii_alphanumeric() || c == '(')
                }
                _ => rest.starts_with('('),
            };
            assert!(ok, "{}:{} `{t}` points at `{rest}`", path.display(), t.loc);
        }
    }
}

#[test]
fn ill_sorted_application_is_rejected_at_the_operator() {
    let err = parse_script("(assert (+ true 1))").unwrap_err();
    let ParseError::Sort(e) = err else {
        panic!("expected a sort error, got {err:?}")
    };
    assert_eq!((e.loc.line, e.loc.column), (1, 9));
}

#[test]
fn let_bindings_are_gone_after_parsing() {
    let s = parse_script(
        "(declare-const x Real)(assert (let ((y (* x x))) (let ((x (+ y 1))) (> x y))))",
    )
    .unwrap();
    let expected = parse_term("(> (+ (* x x) 1) (* x x))", &s).unwrap();
    assert_eq!(s.assertions[0], expected);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn print_then_parse_is_identity(s in arb_script()) {
        let text = print_script(&s);
        let back = parse_script(&text).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
        prop_assert_eq!(&back, &s);
        prop_assert_eq!(print_script(&back), text);
    }

    #[test]
    fn generated_terms_are_well_sorted(s in arb_script()) {
        for a in &s.assertions {
            prop_assert_eq!(sort_of(a, &s.declarations).unwrap(), Sort::Bool);
        }
    }

    #[test]
    fn reparsed_terms_keep_the_parsed_sort(t in arb_real_term()) {
        let ctx = script_over_xyz(vec![]);
        let text = format!("{t}");
        let back = parse_term(&text, &ctx).unwrap();
        prop_assert_eq!(back.sort, Sort::Real);
        prop_assert_eq!(back, t);
    }
}
