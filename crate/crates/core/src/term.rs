//! Terms of the free PROP over a signature, optionally with the Frobenius
//! generators, with a parser and printer.
//!
//! Grammar, where `;` binds looser than `+` and both associate left:
//!
//! ```text
//! term := atom | term ";" term | term "+" term
//! atom := NAME | "id:" NAT | "sym:" NAT "," NAT
//!       | "mul" | "unit" | "comul" | "counit" | "(" term ")"
//! ```

use std::fmt;

use crate::error::Error;
use crate::hypergraph::Signature;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Gen(String),
    Id(usize),
    Sym(usize, usize),
    Seq(Box<Term>, Box<Term>),
    Par(Box<Term>, Box<Term>),
    Mul,
    Unit,
    Comul,
    Counit,
}

const KEYWORDS: [&str; 6] = ["id", "sym", "mul", "unit", "comul", "counit"];

impl Term {
    pub fn gen(name: &str) -> Term {
        Term::Gen(name.to_string())
    }

    pub fn seq(a: Term, b: Term) -> Term {
        Term::Seq(Box::new(a), Box::new(b))
    }

    pub fn par(a: Term, b: Term) -> Term {
        Term::Par(Box::new(a), Box::new(b))
    }

    pub fn uses_frobenius(&self) -> bool {
        match self {
            Term::Mul | Term::Unit | Term::Comul | Term::Counit => true,
            Term::Seq(a, b) | Term::Par(a, b) => a.uses_frobenius() || b.uses_frobenius(),
            _ => false,
        }
    }

    /// The type `n → m` of the term, checked bottom-up.
    pub fn type_of(&self, sig: &Signature, frobenius: bool) -> Result<(usize, usize), Error> {
        let err = |msg: String| Error::Type {
            term: self.to_string(),
            msg,
        };
        match self {
            Term::Gen(n) => sig.get(n).ok_or_else(|| err(format!("unknown generator `{n}`"))),
            Term::Id(n) => Ok((*n, *n)),
            Term::Sym(a, b) => Ok((a + b, a + b)),
            Term::Seq(a, b) => {
                let (i, j) = a.type_of(sig, frobenius)?;
                let (k, l) = b.type_of(sig, frobenius)?;
                if j != k {
                    return Err(err(format!("composing {i}->{j} with {k}->{l}")));
                }
                Ok((i, l))
            }
            Term::Par(a, b) => {
                let (i, j) = a.type_of(sig, frobenius)?;
                let (k, l) = b.type_of(sig, frobenius)?;
                Ok((i + k, j + l))
            }
            t if !frobenius => Err(err(format!("`{t}` needs a Frobenius structure"))),
            Term::Mul => Ok((2, 1)),
            Term::Unit => Ok((0, 1)),
            Term::Comul => Ok((1, 2)),
            Term::Counit => Ok((1, 0)),
        }
    }

    fn prec(&self) -> u8 {
        match self {
            Term::Seq(..) => 0,
            Term::Par(..) => 1,
            _ => 2,
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let operand = |f: &mut fmt::Formatter<'_>, t: &Term, min: u8| {
            if t.prec() < min {
                write!(f, "({t})")
            } else {
                write!(f, "{t}")
            }
        };
        match self {
            Term::Gen(n) => f.write_str(n),
            Term::Id(n) => write!(f, "id:{n}"),
            Term::Sym(a, b) => write!(f, "sym:{a},{b}"),
            Term::Mul => f.write_str("mul"),
            Term::Unit => f.write_str("unit"),
            Term::Comul => f.write_str("comul"),
            Term::Counit => f.write_str("counit"),
            Term::Seq(a, b) => {
                operand(f, a, 0)?;
                f.write_str(" ; ")?;
                operand(f, b, 1)
            }
            Term::Par(a, b) => {
                operand(f, a, 1)?;
                f.write_str(" + ")?;
                operand(f, b, 2)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Name(String),
    Nat(usize),
    Semi,
    Plus,
    Colon,
    Comma,
    LParen,
    RParen,
}

struct Lexer {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
    end: (usize, usize),
}

fn lex(src: &str, line0: usize, col0: usize) -> Result<Lexer, Error> {
    let mut toks = Vec::new();
    let (mut line, mut col) = (line0, col0);
    let mut chars = src.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (l, cl) = (line, col);
        if c == '\n' {
            chars.next();
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            chars.next();
            col += 1;
            continue;
        }
        let simple = match c {
            ';' => Some(Tok::Semi),
            '+' => Some(Tok::Plus),
            ':' => Some(Tok::Colon),
            ',' => Some(Tok::Comma),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(t) = simple {
            chars.next();
            col += 1;
            toks.push((t, l, cl));
        } else if c.is_ascii_digit() {
            let mut s = String::new();
            while let Some(&d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                s.push(d);
                chars.next();
                col += 1;
            }
            let n = s.parse().map_err(|_| Error::Parse {
                line: l,
                col: cl,
                msg: format!("number `{s}` too large"),
            })?;
            toks.push((Tok::Nat(n), l, cl));
        } else if c.is_alphabetic() || c == '_' {
            let mut s = String::new();
            while let Some(&d) = chars.peek().filter(|d| d.is_alphanumeric() || **d == '_' || **d == '\'') {
                s.push(d);
                chars.next();
                col += 1;
            }
            toks.push((Tok::Name(s), l, cl));
        } else {
            return Err(Error::Parse {
                line: l,
                col: cl,
                msg: format!("unexpected character `{c}`"),
            });
        }
    }
    Ok(Lexer {
        toks,
        pos: 0,
        end: (line, col),
    })
}

impl Lexer {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn here(&self) -> (usize, usize) {
        self.toks.get(self.pos).map_or(self.end, |t| (t.1, t.2))
    }

    fn fail<T>(&self, msg: impl Into<String>) -> Result<T, Error> {
        let (line, col) = self.here();
        Err(Error::Parse {
            line,
            col,
            msg: msg.into(),
        })
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<(), Error> {
        if self.peek() == Some(&t) {
            self.pos += 1;
            Ok(())
        } else {
            self.fail(format!("expected {what}"))
        }
    }

    fn nat(&mut self) -> Result<usize, Error> {
        match self.peek() {
            Some(&Tok::Nat(n)) => {
                self.pos += 1;
                Ok(n)
            }
            _ => self.fail("expected a number"),
        }
    }

    fn seq(&mut self) -> Result<Term, Error> {
        let mut t = self.par()?;
        while self.peek() == Some(&Tok::Semi) {
            self.pos += 1;
            t = Term::seq(t, self.par()?);
        }
        Ok(t)
    }

    fn par(&mut self) -> Result<Term, Error> {
        let mut t = self.atom()?;
        while self.peek() == Some(&Tok::Plus) {
            self.pos += 1;
            t = Term::par(t, self.atom()?);
        }
        Ok(t)
    }

    fn atom(&mut self) -> Result<Term, Error> {
        match self.peek().cloned() {
            Some(Tok::LParen) => {
                self.pos += 1;
                let t = self.seq()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(t)
            }
            Some(Tok::Name(n)) => {
                self.pos += 1;
                match n.as_str() {
                    "id" => {
                        self.expect(Tok::Colon, "`:` after `id`")?;
                        Ok(Term::Id(self.nat()?))
                    }
                    "sym" => {
                        self.expect(Tok::Colon, "`:` after `sym`")?;
                        let a = self.nat()?;
                        self.expect(Tok::Comma, "`,` in `sym:a,b`")?;
                        Ok(Term::Sym(a, self.nat()?))
                    }
                    "mul" => Ok(Term::Mul),
                    "unit" => Ok(Term::Unit),
                    "comul" => Ok(Term::Comul),
                    "counit" => Ok(Term::Counit),
                    _ => Ok(Term::Gen(n)),
                }
            }
            _ => self.fail("expected a term"),
        }
    }
}

/// Parses a term; positions in errors are relative to line 1, column 1.
pub fn parse_term(src: &str) -> Result<Term, Error> {
    parse_term_at(src, 1, 1)
}

/// Parses a term that starts at the given position of a larger file.
pub fn parse_term_at(src: &str, line: usize, col: usize) -> Result<Term, Error> {
    let mut lx = lex(src, line, col)?;
    let t = lx.seq()?;
    if lx.pos != lx.toks.len() {
        return lx.fail("unexpected input after term");
    }
    Ok(t)
}

/// Whether `name` may be used as a generator name.
pub fn is_generator_name(name: &str) -> bool {
    let mut cs = name.chars();
    cs.next().is_some_and(|c| c.is_alphabetic() || c == '_')
        && name.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '\'')
        && !KEYWORDS.contains(&name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn yb_sig() -> Signature {
        Signature::new().with("g", 2, 2)
    }

    #[test]
    fn atoms() {
        assert_eq!(parse_term("id:1").unwrap(), Term::Id(1));
        assert_eq!(parse_term("sym:2,1").unwrap(), Term::Sym(2, 1));
        assert_eq!(parse_term(" mul ").unwrap(), Term::Mul);
    }

    #[test]
    fn precedence_and_associativity() {
        let t = parse_term("a ; b + c ; d").unwrap();
        let expect = Term::seq(
            Term::seq(Term::gen("a"), Term::par(Term::gen("b"), Term::gen("c"))),
            Term::gen("d"),
        );
        assert_eq!(t, expect);
        let t = parse_term("a + b + c").unwrap();
        assert_eq!(t, Term::par(Term::par(Term::gen("a"), Term::gen("b")), Term::gen("c")));
    }

    #[test]
    fn yang_baxter_left_side_types() {
        let t = parse_term("(g + id:1) ; (id:1 + g) ; (g + id:1)").unwrap();
        assert_eq!(t.type_of(&yb_sig(), false).unwrap(), (3, 3));
        assert_eq!(t.to_string(), "g + id:1 ; id:1 + g ; g + id:1");
    }

    #[test]
    fn errors_carry_positions() {
        match parse_term("g ;\n  ( g") {
            Err(Error::Parse { line, col, .. }) => assert_eq!((line, col), (2, 6)),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_term("g $"), Err(Error::Parse { line: 1, col: 3, .. })));
        let bad = parse_term("g ; id:1").unwrap();
        match bad.type_of(&yb_sig(), false) {
            Err(Error::Type { term, .. }) => assert_eq!(term, "g ; id:1"),
            other => panic!("{other:?}"),
        }
        assert!(Term::Mul.type_of(&yb_sig(), false).is_err());
        assert_eq!(Term::Mul.type_of(&yb_sig(), true).unwrap(), (2, 1));
    }

    fn arb_term() -> impl Strategy<Value = Term> {
        let leaf = prop_oneof![
            prop::sample::select(vec!["f", "g", "h2"]).prop_map(Term::gen),
            (0usize..4).prop_map(Term::Id),
            (0usize..3, 0usize..3).prop_map(|(a, b)| Term::Sym(a, b)),
            Just(Term::Mul),
            Just(Term::Unit),
            Just(Term::Comul),
            Just(Term::Counit),
        ];
        leaf.prop_recursive(4, 24, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::seq(a, b)),
                (inner.clone(), inner).prop_map(|(a, b)| Term::par(a, b)),
            ]
        })
    }

    proptest! {
        #[test]
        fn print_then_parse_round_trips(t in arb_term()) {
            prop_assert_eq!(parse_term(&t.to_string()).unwrap(), t);
        }
    }
}
