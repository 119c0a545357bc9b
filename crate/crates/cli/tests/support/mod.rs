//! A recognizer for the Graphviz DOT language (graph, stmt_list, node,
//! edge and attribute statements, subgraphs, the four ID forms).

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    /// Text, and whether it was quoted.
    Id(String, bool),
    Sym(char),
    Arrow(&'static str),
}

fn lex(src: &str) -> Result<Vec<Tok>, String> {
    let c: Vec<char> = src.chars().collect();
    let mut i = 0;
    let mut out = Vec::new();
    while i < c.len() {
        let ch = c[i];
        if ch.is_whitespace() {
            i += 1;
        } else if ch == '/' && c.get(i + 1) == Some(&'/') || ch == '#' {
            while i < c.len() && c[i] != '\n' {
                i += 1;
            }
        } else if ch == '/' && c.get(i + 1) == Some(&'*') {
            i += 2;
            while i + 1 < c.len() && !(c[i] == '*' && c[i + 1] == '/') {
                i += 1;
            }
            if i + 1 >= c.len() {
                return Err("unterminated comment".into());
            }
            i += 2;
        } else if ch == '-' && matches!(c.get(i + 1), Some('>') | Some('-')) {
            out.push(Tok::Arrow(if c[i + 1] == '>' { "->" } else { "--" }));
            i += 2;
        } else if "{}[];=,:".contains(ch) {
            out.push(Tok::Sym(ch));
            i += 1;
        } else if ch == '"' {
            let mut s = String::new();
            i += 1;
            loop {
                match c.get(i) {
                    None => return Err("unterminated string".into()),
                    Some('"') => break,
                    Some('\\') => {
                        s.push(c[i]);
                        if let Some(&n) = c.get(i + 1) {
                            s.push(n);
                        }
                        i += 2;
                    }
                    Some(&x) => {
                        s.push(x);
                        i += 1;
                    }
                }
            }
            i += 1;
            out.push(Tok::Id(s, true));
        } else if ch == '<' {
            let mut depth = 0;
            let start = i;
            while i < c.len() {
                if c[i] == '<' {
                    depth += 1;
                } else if c[i] == '>' {
                    depth -= 1;
                    if depth == 0 {
                        break;
                    }
                }
                i += 1;
            }
            if i >= c.len() {
                return Err("unterminated html string".into());
            }
            i += 1;
            out.push(Tok::Id(c[start..i].iter().collect(), true));
        } else if ch.is_alphabetic() || ch == '_' {
            let start = i;
            while i < c.len() && (c[i].is_alphanumeric() || c[i] == '_') {
                i += 1;
            }
            out.push(Tok::Id(c[start..i].iter().collect(), false));
        } else if ch.is_ascii_digit() || ch == '.' || ch == '-' {
            let start = i;
            i += 1;
            while i < c.len() && (c[i].is_ascii_digit() || c[i] == '.') {
                i += 1;
            }
            let s: String = c[start..i].iter().collect();
            if s.matches('.').count() > 1 || s == "-" || s == "." {
                return Err(format!("bad numeral {s}"));
            }
            out.push(Tok::Id(s, false));
        } else {
            return Err(format!("unexpected character {ch:?}"));
        }
    }
    Ok(out)
}

struct P {
    t: Vec<Tok>,
    i: usize,
    directed: bool,
}

fn keyword(t: &Tok, k: &str) -> bool {
    matches!(t, Tok::Id(s, false) if s.eq_ignore_ascii_case(k))
}

impl P {
    fn peek(&self) -> Option<&Tok> {
        self.t.get(self.i)
    }

    fn sym(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), String> {
        if self.sym(c) {
            Ok(())
        } else {
            Err(format!("expected {c:?} at token {}", self.i))
        }
    }

    fn id(&mut self) -> Option<String> {
        match self.peek() {
            Some(Tok::Id(s, quoted))
                if *quoted || !["node", "edge", "graph", "digraph", "subgraph", "strict"].iter().any(|k| s.eq_ignore_ascii_case(k)) =>
            {
                let s = s.clone();
                self.i += 1;
                Some(s)
            }
            _ => None,
        }
    }

    fn graph(&mut self) -> Result<(), String> {
        if self.peek().is_some_and(|t| keyword(t, "strict")) {
            self.i += 1;
        }
        match self.peek() {
            Some(t) if keyword(t, "digraph") => self.directed = true,
            Some(t) if keyword(t, "graph") => self.directed = false,
            _ => return Err("expected graph or digraph".into()),
        }
        self.i += 1;
        self.id();
        self.expect('{')?;
        self.stmt_list()?;
        self.expect('}')
    }

    fn stmt_list(&mut self) -> Result<(), String> {
        while self.peek().is_some() && self.peek() != Some(&Tok::Sym('}')) {
            self.stmt()?;
            self.sym(';');
        }
        Ok(())
    }

    fn attr_list(&mut self) -> Result<(), String> {
        while self.sym('[') {
            while !self.sym(']') {
                self.id().ok_or("expected attribute name")?;
                if self.sym('=') {
                    self.id().ok_or("expected attribute value")?;
                }
                if !self.sym(';') {
                    self.sym(',');
                }
            }
        }
        Ok(())
    }

    fn node_id(&mut self) -> Result<(), String> {
        self.id().ok_or("expected node id")?;
        if self.sym(':') {
            self.id().ok_or("expected port")?;
            if self.sym(':') {
                self.id().ok_or("expected compass point")?;
            }
        }
        Ok(())
    }

    fn subgraph(&mut self) -> Result<(), String> {
        if self.peek().is_some_and(|t| keyword(t, "subgraph")) {
            self.i += 1;
            self.id();
        }
        self.expect('{')?;
        self.stmt_list()?;
        self.expect('}')
    }

    fn endpoint(&mut self) -> Result<(), String> {
        if self.peek() == Some(&Tok::Sym('{')) || self.peek().is_some_and(|t| keyword(t, "subgraph")) {
            self.subgraph()
        } else {
            self.node_id()
        }
    }

    fn edge_rhs(&mut self) -> Result<bool, String> {
        let mut any = false;
        while let Some(Tok::Arrow(a)) = self.peek() {
            if (*a == "->") != self.directed {
                return Err(format!("edge operator {a} in the wrong kind of graph"));
            }
            self.i += 1;
            self.endpoint()?;
            any = true;
        }
        Ok(any)
    }

    fn stmt(&mut self) -> Result<(), String> {
        let t = self.peek().cloned().ok_or("unexpected end")?;
        if keyword(&t, "graph") || keyword(&t, "node") || keyword(&t, "edge") {
            self.i += 1;
            return self.attr_list();
        }
        if t == Tok::Sym('{') || keyword(&t, "subgraph") {
            self.subgraph()?;
            self.edge_rhs()?;
            return self.attr_list();
        }
        let save = self.i;
        if self.id().is_some() && self.sym('=') {
            self.id().ok_or("expected value")?;
            return Ok(());
        }
        self.i = save;
        self.node_id()?;
        self.edge_rhs()?;
        self.attr_list()
    }
}

/// Whether `src` is a single well-formed DOT graph.
pub fn check_dot(src: &str) -> Result<(), String> {
    let mut p = P {
        t: lex(src)?,
        i: 0,
        directed: false,
    };
    p.graph()?;
    if p.i != p.t.len() {
        return Err(format!("trailing tokens from {}", p.i));
    }
    Ok(())
}

/// Splits concatenated DOT graphs out of mixed text output; lines outside a
/// graph are skipped.
pub fn dot_blocks(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur: Option<String> = None;
    for line in text.lines() {
        if let Some(buf) = cur.as_mut() {
            buf.push_str(line);
            buf.push('\n');
            if line == "}" {
                out.push(cur.take().unwrap());
            }
        } else if line.starts_with("digraph ") || line.starts_with("graph ") {
            cur = Some(format!("{line}\n"));
        }
    }
    out
}
