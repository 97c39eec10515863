use std::fmt::{self, Write};

use super::ast::{AttributeCommand, Script, Sort, Term, TermKind};
use super::parser::numeral_sort;
use super::sexpr::is_simple_symbol;

/// Renders `s` as SMT-LIB2 text, one command per line:
/// attributes, `set-logic`, declarations, assertions, unsupported commands
/// (verbatim) and finally `check-sat` if the script had one.
pub fn print_script(s: &Script) -> String {
    let mut out = String::new();
    for a in &s.metadata {
        let cmd = match a.command {
            AttributeCommand::SetInfo => "set-info",
            AttributeCommand::SetOption => "set-option",
        };
        match &a.value {
            Some(v) => writeln!(out, "({cmd} :{} {v})", a.key),
            None => writeln!(out, "({cmd} :{})", a.key),
        }
        .unwrap();
    }
    if let Some(logic) = &s.logic {
        writeln!(out, "(set-logic {logic})").unwrap();
    }
    for d in &s.declarations {
        let args: Vec<&str> = d.args.iter().map(|a| a.name()).collect();
        writeln!(
            out,
            "(declare-fun {} ({}) {})",
            symbol(&d.name),
            args.join(" "),
            d.result
        )
        .unwrap();
    }
    let numerals = numeral_sort(s.logic.as_deref());
    for a in &s.assertions {
        out.push_str("(assert ");
        write_term(&mut out, a, numerals).unwrap();
        out.push_str(")\n");
    }
    for u in &s.unsupported {
        writeln!(out, "{}", u.text).unwrap();
    }
    if s.check_sat {
        out.push_str("(check-sat)\n");
    }
    out
}

/// Renders a term; `numerals` is the sort bare numerals take in the
/// surrounding logic, so integral `Real` constants print as `2.0` where a
/// bare `2` would read back as `Int`.
pub fn print_term(t: &Term, numerals: Sort) -> String {
    let mut out = String::new();
    write_term(&mut out, t, numerals).unwrap();
    out
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        write_term(&mut out, self, Sort::Real)?;
        f.write_str(&out)
    }
}

fn symbol(name: &str) -> String {
    if is_simple_symbol(name) {
        name.to_string()
    } else {
        format!("|{name}|")
    }
}

fn write_term(out: &mut String, t: &Term, numerals: Sort) -> fmt::Result {
    match &t.kind {
        TermKind::Num(v) => {
            if v.is_negative() {
                out.push_str("(- ");
                write_term(out, &Term::num(-v, t.sort), numerals)?;
                out.push(')');
            } else if v.is_integer() {
                write!(out, "{}", v.numer())?;
                if t.sort == Sort::Real && numerals != Sort::Real {
                    out.push_str(".0");
                }
            } else if let Some(dec) = v.to_terminating_decimal() {
                out.push_str(&dec);
            } else {
                write!(out, "(/ {} {})", v.numer(), v.denom())?;
            }
        }
        TermKind::Bool(b) => write!(out, "{b}")?,
        TermKind::Var(name) => out.push_str(&symbol(name)),
        TermKind::App(op, args) => {
            out.push('(');
            out.push_str(&symbol(op.symbol()));
            for a in args {
                out.push(' ');
                write_term(out, a, numerals)?;
            }
            out.push(')');
        }
        TermKind::Div(n, d) => {
            out.push_str("(/ ");
            write_term(out, n, numerals)?;
            out.push(' ');
            write_term(out, d, numerals)?;
            out.push(')');
        }
        TermKind::Ite(c, a, b) => {
            out.push_str("(ite ");
            write_term(out, c, numerals)?;
            out.push(' ');
            write_term(out, a, numerals)?;
            out.push(' ');
            write_term(out, b, numerals)?;
            out.push(')');
        }
        TermKind::Quant(q, vars, body) => {
            write!(out, "({} (", q.keyword())?;
            for (i, (v, s)) in vars.iter().enumerate() {
                if i > 0 {
                    out.push(' ');
                }
                write!(out, "({} {s})", symbol(v))?;
            }
            out.push_str(") ");
            write_term(out, body, numerals)?;
            out.push(')');
        }
    }
    Ok(())
}
