//! Tokenizer and s-expression reader with source positions.

use super::ast::Loc;
use super::ParseError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Atom {
    Symbol(String),
    Numeral(String),
    Decimal(String),
    Keyword(String),
    Str(String),
    /// `#x..` / `#b..` literals, not interpreted.
    Bits(String),
}

#[derive(Debug, Clone)]
pub enum SExprKind {
    Atom(Atom),
    List(Vec<SExpr>),
}

#[derive(Debug, Clone)]
pub struct SExpr {
    pub kind: SExprKind,
    pub loc: Loc,
    /// Byte range in the source text.
    pub span: (usize, usize),
}

impl SExpr {
    pub fn symbol(&self) -> Option<&str> {
        match &self.kind {
            SExprKind::Atom(Atom::Symbol(s)) => Some(s),
            _ => None,
        }
    }

    pub fn list(&self) -> Option<&[SExpr]> {
        match &self.kind {
            SExprKind::List(items) => Some(items),
            _ => None,
        }
    }

    pub fn text<'a>(&self, src: &'a str) -> &'a str {
        &src[self.span.0..self.span.1]
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Open,
    Close,
    Atom(Atom),
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
    line: u32,
    col: u32,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src,
            pos: 0,
            line: 1,
            col: 1,
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn loc(&self) -> Loc {
        Loc::new(self.line, self.col)
    }

    fn skip_trivia(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.bump();
            } else if c == ';' {
                while let Some(c) = self.bump() {
                    if c == '\n' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
    }

    fn take_while(&mut self, pred: impl Fn(char) -> bool) -> &'a str {
        let start = self.pos;
        while self.peek().is_some_and(&pred) {
            self.bump();
        }
        &self.src[start..self.pos]
    }

    fn next(&mut self) -> Result<Option<(Tok, Loc, usize, usize)>, ParseError> {
        self.skip_trivia();
        let loc = self.loc();
        let start = self.pos;
        let Some(c) = self.peek() else {
            return Ok(None);
        };
        let tok = match c {
            '(' => {
                self.bump();
                Tok::Open
            }
            ')' => {
                self.bump();
                Tok::Close
            }
            '|' => {
                self.bump();
                let body = self.take_while(|c| c != '|');
                if self.bump() != Some('|') {
                    return Err(ParseError::syntax(loc, "unterminated quoted symbol"));
                }
                Tok::Atom(Atom::Symbol(body.to_string()))
            }
            '"' => {
                self.bump();
                let mut s = String::new();
                loop {
                    match self.bump() {
                        Some('"') if self.peek() == Some('"') => {
                            self.bump();
                            s.push('"');
                        }
                        Some('"') => break,
                        Some(c) => s.push(c),
                        None => return Err(ParseError::syntax(loc, "unterminated string literal")),
                    }
                }
                Tok::Atom(Atom::Str(s))
            }
            ':' => {
                self.bump();
                let k = self.take_while(is_symbol_char);
                Tok::Atom(Atom::Keyword(k.to_string()))
            }
            '#' => {
                let text = self.take_while(|c| c == '#' || c.is_ascii_alphanumeric());
                Tok::Atom(Atom::Bits(text.to_string()))
            }
            c if c.is_ascii_digit() => {
                let text = self.take_while(|c| c.is_ascii_digit() || c == '.');
                if self.peek().is_some_and(is_symbol_char) {
                    return Err(ParseError::syntax(loc, format!("malformed numeral `{text}`")));
                }
                let valid = match text.split_once('.') {
                    None => text == "0" || !text.starts_with('0'),
                    Some((i, f)) => {
                        !f.is_empty() && !f.contains('.') && (i == "0" || !i.starts_with('0'))
                    }
                };
                if !valid {
                    return Err(ParseError::syntax(loc, format!("malformed numeral `{text}`")));
                }
                if text.contains('.') {
                    Tok::Atom(Atom::Decimal(text.to_string()))
                } else {
                    Tok::Atom(Atom::Numeral(text.to_string()))
                }
            }
            c if is_symbol_char(c) => {
                let s = self.take_while(is_symbol_char);
                Tok::Atom(Atom::Symbol(s.to_string()))
            }
            other => {
                return Err(ParseError::syntax(
                    loc,
                    format!("unexpected character `{other}`"),
                ))
            }
        };
        Ok(Some((tok, loc, start, self.pos)))
    }
}

fn is_symbol_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || "~!@$%^&*_-+=<>.?/".contains(c)
}

/// True if `s` can be printed without `|...|` quoting.
pub fn is_simple_symbol(s: &str) -> bool {
    !s.is_empty()
        && !s.starts_with(|c: char| c.is_ascii_digit())
        && s.chars().all(is_symbol_char)
}

/// Reads every top-level s-expression in `src`.
pub fn read_all(src: &str) -> Result<Vec<SExpr>, ParseError> {
    let mut lexer = Lexer::new(src);
    let mut stack: Vec<(Loc, usize, Vec<SExpr>)> = Vec::new();
    let mut out = Vec::new();
    while let Some((tok, loc, start, end)) = lexer.next()? {
        match tok {
            Tok::Open => stack.push((loc, start, Vec::new())),
            Tok::Close => {
                let Some((open_loc, open_start, items)) = stack.pop() else {
                    return Err(ParseError::syntax(loc, "unbalanced `)`"));
                };
                let e = SExpr {
                    kind: SExprKind::List(items),
                    loc: open_loc,
                    span: (open_start, end),
                };
                match stack.last_mut() {
                    Some((_, _, parent)) => parent.push(e),
                    None => out.push(e),
                }
            }
            Tok::Atom(a) => {
                let e = SExpr {
                    kind: SExprKind::Atom(a),
                    loc,
                    span: (start, end),
                };
                match stack.last_mut() {
                    Some((_, _, parent)) => parent.push(e),
                    None => out.push(e),
                }
            }
        }
    }
    if let Some((loc, _, _)) = stack.pop() {
        return Err(ParseError::syntax(loc, "unclosed `(`"));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_nested_lists_with_locations() {
        let src = "; header\n(assert\n  (< x 1.5))";
        let es = read_all(src).unwrap();
        assert_eq!(es.len(), 1);
        assert_eq!(es[0].loc, Loc::new(2, 1));
        let items = es[0].list().unwrap();
        assert_eq!(items[0].symbol(), Some("assert"));
        let inner = items[1].list().unwrap();
        assert_eq!(items[1].loc, Loc::new(3, 3));
        assert_eq!(inner[2].kind_atom(), Some(&Atom::Decimal("1.5".into())));
        assert_eq!(items[1].text(src), "(< x 1.5)");
    }

    #[test]
    fn quoted_symbols_and_strings() {
        let es = read_all(r#"(|a b| "say ""hi""" :named)"#).unwrap();
        let items = es[0].list().unwrap();
        assert_eq!(items[0].symbol(), Some("a b"));
        assert_eq!(items[1].kind_atom(), Some(&Atom::Str("say \"hi\"".into())));
        assert_eq!(items[2].kind_atom(), Some(&Atom::Keyword("named".into())));
    }

    #[test]
    fn unbalanced_input_reports_position() {
        let err = read_all("(assert (= x 1)").unwrap_err();
        assert_eq!(err.loc(), Some(Loc::new(1, 1)));
        let err = read_all("(a))").unwrap_err();
        assert_eq!(err.loc(), Some(Loc::new(1, 4)));
        assert!(read_all("(a 01)").is_err());
        assert!(read_all("(a 1.)").is_err());
    }

    impl SExpr {
        fn kind_atom(&self) -> Option<&Atom> {
            match &self.kind {
                SExprKind::Atom(a) => Some(a),
                _ => None,
            }
        }
    }
}
