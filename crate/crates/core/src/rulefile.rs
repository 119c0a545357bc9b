//! The rule-file format.
//!
//! ```text
//! # comment
//! signature {
//!   gen g : 2 -> 2
//! }
//! frobenius
//! mode frobenius
//! rule yb : (g + id:1) ; (id:1 + g) ; (g + id:1) => (id:1 + g) ; (g + id:1) ; (id:1 + g)
//! rule drop {
//!   left { node a b; edge f [a] [b]; inputs [a]; outputs [b] }
//!   right { node a; inputs [a]; outputs [a] }
//! }
//! ```
//!
//! Graph sides list their interface either as `inputs` and `outputs`, or as
//! a single `interface` list. Node names are identifiers or numbers.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::Error;
use crate::frobenius::{rewire, translate_rule};
use crate::hypergraph::{GraphWithInterface, Hypergraph, Signature};
use crate::rewrite::{Mode, RewriteRule, RewritingSystem};
use crate::term::{parse_term_at, Term};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Num(usize),
    Sym(&'static str),
    Newline,
    Other(char),
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
    start: usize,
    end: usize,
}

fn lex(src: &str) -> Vec<Token> {
    let mut out = Vec::new();
    let (mut line, mut col) = (1, 1);
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (start, c) = chars[i];
        let (tl, tc) = (line, col);
        if c == '\n' {
            out.push(Token { tok: Tok::Newline, line, col, start, end: start + 1 });
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i].1 != '\n' {
                i += 1;
            }
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let mut j = i;
        let tok = if c.is_ascii_alphabetic() || c == '_' {
            while j < chars.len() && (chars[j].1.is_ascii_alphanumeric() || chars[j].1 == '_') {
                j += 1;
            }
            Tok::Ident(chars[i..j].iter().map(|p| p.1).collect())
        } else if c.is_ascii_digit() {
            while j < chars.len() && chars[j].1.is_ascii_digit() {
                j += 1;
            }
            let s: String = chars[i..j].iter().map(|p| p.1).collect();
            Tok::Num(s.parse().unwrap_or(usize::MAX))
        } else {
            let next = chars.get(i + 1).map(|p| p.1);
            j = i + 1;
            match (c, next) {
                ('-', Some('>')) => {
                    j += 1;
                    Tok::Sym("->")
                }
                ('=', Some('>')) => {
                    j += 1;
                    Tok::Sym("=>")
                }
                ('{', _) => Tok::Sym("{"),
                ('}', _) => Tok::Sym("}"),
                ('[', _) => Tok::Sym("["),
                (']', _) => Tok::Sym("]"),
                (':', _) => Tok::Sym(":"),
                (';', _) => Tok::Sym(";"),
                (',', _) => Tok::Sym(","),
                _ => Tok::Other(c),
            }
        };
        let end = chars.get(j).map_or(src.len(), |p| p.0);
        out.push(Token { tok, line: tl, col: tc, start, end });
        col += j - i;
        i = j;
    }
    out
}

/// One side of a rule as written.
#[derive(Clone, Debug)]
pub enum Side {
    Term(Term),
    /// A graph with its interface, and the number of inputs when the
    /// interface was given as inputs then outputs.
    Graph(GraphWithInterface, Option<usize>),
}

#[derive(Clone, Debug)]
pub struct RuleDecl {
    pub name: String,
    pub lhs: Side,
    pub rhs: Side,
    pub line: usize,
}

#[derive(Clone, Debug, Default)]
pub struct RuleFile {
    pub signature: Signature,
    pub frobenius: bool,
    pub mode: Option<Mode>,
    pub rules: Vec<RuleDecl>,
}

impl RuleFile {
    /// The rewriting system under `mode`, or the file's own mode, or
    /// Frobenius mode.
    pub fn system(&self, mode: Option<Mode>) -> Result<RewritingSystem, Error> {
        let mode = mode.or(self.mode).unwrap_or(Mode::Frobenius);
        let mut rules = Vec::new();
        for d in &self.rules {
            let at = |e: Error| match e {
                Error::Parse { .. } => e,
                other => Error::Parse {
                    line: d.line,
                    col: 1,
                    msg: other.to_string(),
                },
            };
            let rule = match (&d.lhs, &d.rhs) {
                (Side::Term(l), Side::Term(r)) => translate_rule(&d.name, l, r, &self.signature).map_err(at)?,
                (Side::Graph(l, li), Side::Graph(r, ri)) => {
                    let rule = match (li, ri) {
                        (Some(i), Some(i2)) if i == i2 => {
                            let base = RewriteRule::from_interfaces(&d.name, l, r).map_err(at)?;
                            let j = l.interface_size() - i;
                            RewriteRule::with_boundary(&d.name, base.left().clone(), base.right().clone(), *i, j)
                        }
                        (None, None) => RewriteRule::from_interfaces(&d.name, l, r),
                        _ => Err(Error::InvalidRule(d.name.clone(), "sides declare different boundaries".into())),
                    };
                    rule.map_err(at)?
                }
                _ => return Err(at(Error::InvalidRule(d.name.clone(), "mixes a term side and a graph side".into()))),
            };
            rules.push(rule);
        }
        RewritingSystem::new(self.signature.clone(), rules, mode)
    }
}

struct Parser<'a> {
    src: &'a str,
    toks: Vec<Token>,
    pos: usize,
}

fn err<T>(line: usize, col: usize, msg: impl Into<String>) -> Result<T, Error> {
    Err(Error::Parse {
        line,
        col,
        msg: msg.into(),
    })
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser {
            src,
            toks: lex(src),
            pos: 0,
        }
    }

    fn skip_newlines(&mut self) {
        while matches!(self.peek(), Some(Tok::Newline)) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn here(&self) -> (usize, usize) {
        match self.toks.get(self.pos) {
            Some(t) => (t.line, t.col),
            None => {
                let lines = self.src.split('\n').count();
                (lines, self.src.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1)
            }
        }
    }

    fn fail<T>(&self, msg: impl Into<String>) -> Result<T, Error> {
        let (l, c) = self.here();
        err(l, c, msg)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expect(&mut self, sym: &'static str) -> Result<(), Error> {
        if self.peek() == Some(&Tok::Sym(sym)) {
            self.pos += 1;
            Ok(())
        } else {
            self.fail(format!("expected `{sym}`"))
        }
    }

    fn ident(&mut self, what: &str) -> Result<String, Error> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => self.fail(format!("expected {what}")),
        }
    }

    fn num(&mut self) -> Result<usize, Error> {
        match self.peek() {
            Some(Tok::Num(n)) => {
                let n = *n;
                self.pos += 1;
                Ok(n)
            }
            _ => self.fail("expected a number"),
        }
    }

    fn end_of_statement(&mut self) -> Result<(), Error> {
        match self.peek() {
            None | Some(Tok::Newline) => {
                self.skip_newlines();
                Ok(())
            }
            Some(Tok::Sym("}")) => Ok(()),
            Some(Tok::Sym(";")) => {
                self.pos += 1;
                self.skip_newlines();
                Ok(())
            }
            _ => self.fail("expected end of line"),
        }
    }

    fn file(&mut self) -> Result<RuleFile, Error> {
        let mut f = RuleFile::default();
        self.skip_newlines();
        while let Some(t) = self.next() {
            let Tok::Ident(kw) = &t.tok else {
                return err(t.line, t.col, "expected `signature`, `frobenius`, `mode` or `rule`");
            };
            match kw.as_str() {
                "signature" => self.signature(&mut f.signature)?,
                "frobenius" => {
                    f.frobenius = true;
                    self.end_of_statement()?;
                }
                "mode" => {
                    let (l, c) = self.here();
                    let m = self.ident("a mode")?;
                    let m = m.replace('_', "-");
                    f.mode = Some(m.parse::<Mode>().or_else(|e| err(l, c, e))?);
                    self.end_of_statement()?;
                }
                "rule" => {
                    let d = self.rule(&f, t.line)?;
                    if f.rules.iter().any(|r| r.name == d.name) {
                        return err(t.line, t.col, format!("rule `{}` defined twice", d.name));
                    }
                    f.rules.push(d);
                }
                other => return err(t.line, t.col, format!("unknown declaration `{other}`")),
            }
            self.skip_newlines();
        }
        Ok(f)
    }

    fn signature(&mut self, sig: &mut Signature) -> Result<(), Error> {
        self.expect("{")?;
        self.skip_newlines();
        while self.peek() != Some(&Tok::Sym("}")) {
            let (l, c) = self.here();
            if self.ident("`gen`")? != "gen" {
                return err(l, c, "expected `gen`");
            }
            let (l, c) = self.here();
            let name = self.ident("a generator name")?;
            if matches!(name.as_str(), "id" | "sym" | "mul" | "unit" | "comul" | "counit") {
                return err(l, c, format!("`{name}` is reserved"));
            }
            self.expect(":")?;
            let a = self.num()?;
            self.expect("->")?;
            let b = self.num()?;
            sig.add(&name, a, b).or_else(|e| err(l, c, e.to_string()))?;
            self.end_of_statement()?;
        }
        self.expect("}")?;
        self.end_of_statement()
    }

    fn rule(&mut self, f: &RuleFile, line: usize) -> Result<RuleDecl, Error> {
        let name = self.ident("a rule name")?;
        if self.peek() == Some(&Tok::Sym("{")) {
            self.pos += 1;
            self.skip_newlines();
            let mut sides = HashMap::new();
            while self.peek() != Some(&Tok::Sym("}")) {
                let (l, c) = self.here();
                let which = self.ident("`left` or `right`")?;
                if which != "left" && which != "right" {
                    return err(l, c, "expected `left` or `right`");
                }
                let g = self.graph_block(&f.signature)?;
                if sides.insert(which.clone(), g).is_some() {
                    return err(l, c, format!("`{which}` given twice"));
                }
                self.skip_newlines();
            }
            self.expect("}")?;
            self.end_of_statement()?;
            let (Some(lhs), Some(rhs)) = (sides.remove("left"), sides.remove("right")) else {
                return err(line, 1, format!("rule `{name}` needs a left and a right side"));
            };
            return Ok(RuleDecl { name, lhs, rhs, line });
        }
        self.expect(":")?;
        let lhs = self.term_until(f, true)?;
        let rhs = self.term_until(f, false)?;
        self.end_of_statement()?;
        Ok(RuleDecl {
            name,
            lhs: Side::Term(lhs),
            rhs: Side::Term(rhs),
            line,
        })
    }

    /// Raw text up to `=>` (or the end of the line), parsed as a term.
    fn term_until(&mut self, f: &RuleFile, arrow: bool) -> Result<Term, Error> {
        let first = self.pos;
        while let Some(t) = self.peek() {
            if matches!(t, Tok::Newline) || (arrow && *t == Tok::Sym("=>")) {
                break;
            }
            self.pos += 1;
        }
        if first == self.pos {
            return self.fail("expected a term");
        }
        let (a, b) = (self.toks[first].clone(), &self.toks[self.pos - 1]);
        let text = &self.src[a.start..b.end];
        let t = parse_term_at(text, a.line, a.col)?;
        if arrow {
            self.expect("=>")?;
        }
        t.type_of(&f.signature, f.frobenius).map_err(|e| Error::Parse {
            line: a.line,
            col: a.col,
            msg: e.to_string(),
        })?;
        Ok(t)
    }

    fn graph_block(&mut self, sig: &Signature) -> Result<Side, Error> {
        self.expect("{")?;
        self.skip_newlines();
        let mut g = Hypergraph::new();
        let mut names: HashMap<String, usize> = HashMap::new();
        let mut inputs = None;
        let mut outputs = None;
        let mut interface = None;
        while self.peek() != Some(&Tok::Sym("}")) {
            let (l, c) = self.here();
            let kw = self.ident("`node`, `edge`, `inputs`, `outputs` or `interface`")?;
            match kw.as_str() {
                "node" => {
                    while let Some(Tok::Ident(_) | Tok::Num(_)) = self.peek() {
                        let (l, c) = self.here();
                        let n = self.node_name()?;
                        if names.insert(n.clone(), g.add_node()).is_some() {
                            return err(l, c, format!("node `{n}` declared twice"));
                        }
                    }
                }
                "edge" => {
                    let (el, ec) = self.here();
                    let label = self.ident("an edge label")?;
                    let srcs = self.node_list(&names)?;
                    let tgts = self.node_list(&names)?;
                    match sig.get(&label) {
                        None => return err(el, ec, format!("unknown generator `{label}`")),
                        Some((a, b)) if (a, b) != (srcs.len(), tgts.len()) => {
                            return err(
                                el,
                                ec,
                                format!("`{label}` has type {a} -> {b} but is used as {} -> {}", srcs.len(), tgts.len()),
                            )
                        }
                        _ => {}
                    }
                    g.add_edge(&label, srcs, tgts);
                }
                "inputs" => inputs = Some(self.node_list(&names)?),
                "outputs" => outputs = Some(self.node_list(&names)?),
                "interface" => interface = Some(self.node_list(&names)?),
                other => return err(l, c, format!("unknown graph statement `{other}`")),
            }
            self.end_of_statement()?;
        }
        let (l, c) = self.here();
        self.expect("}")?;
        let g = Arc::new(g);
        let (nodes, split) = match (inputs, outputs, interface) {
            (Some(i), Some(o), None) => {
                let n = i.len();
                (i.into_iter().chain(o).collect(), Some(n))
            }
            (None, None, Some(j)) => (j, None),
            (None, None, None) => (vec![], None),
            _ => return err(l, c, "give either `inputs` and `outputs`, or `interface`"),
        };
        Ok(Side::Graph(GraphWithInterface::from_nodes(g, nodes)?, split))
    }

    fn node_name(&mut self) -> Result<String, Error> {
        match self.next().map(|t| t.tok) {
            Some(Tok::Ident(s)) => Ok(s),
            Some(Tok::Num(n)) => Ok(n.to_string()),
            _ => {
                self.pos -= 1;
                self.fail("expected a node name")
            }
        }
    }

    fn node_list(&mut self, names: &HashMap<String, usize>) -> Result<Vec<usize>, Error> {
        self.expect("[")?;
        let mut out = Vec::new();
        while self.peek() != Some(&Tok::Sym("]")) {
            if self.peek() == Some(&Tok::Sym(",")) {
                self.pos += 1;
                continue;
            }
            let (l, c) = self.here();
            let n = self.node_name()?;
            match names.get(&n) {
                Some(&v) => out.push(v),
                None => return err(l, c, format!("unknown node `{n}`")),
            }
        }
        self.expect("]")?;
        Ok(out)
    }
}

pub fn parse_rule_file(src: &str) -> Result<RuleFile, Error> {
    Parser::new(src).file()
}

/// A start graph: a term, rewired, or a `graph { ... }` block.
pub fn parse_graph_input(src: &str, file: &RuleFile) -> Result<GraphWithInterface, Error> {
    let mut p = Parser::new(src);
    p.skip_newlines();
    if p.peek() == Some(&Tok::Ident("graph".into())) {
        p.pos += 1;
        let Side::Graph(g, _) = p.graph_block(&file.signature)? else {
            unreachable!()
        };
        p.skip_newlines();
        if p.peek().is_some() {
            return p.fail("trailing input after graph");
        }
        return Ok(g);
    }
    let t = parse_term_at(src.trim(), 1, 1 + src.len() - src.trim_start().len())?;
    t.type_of(&file.signature, file.frobenius)?;
    rewire(&t, &file.signature)
}
