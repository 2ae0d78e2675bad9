//! A small text language for node-level Boolean network descriptions and
//! its compiler down to the algebraic form of [`crate::dynamics::Bcn`].
//!
//! A source file declares node counts and then gives one update equation
//! per state node and one equation per output node:
//!
//! ```text
//! # toggle with external set line
//! states 2 inputs 1 outputs 1
//! x1' = u1 ^ x2
//! x2' = x1
//! y1  = x1 & x2
//! ```
//!
//! Operators, loosest-binding last: `<->` (iff), `->` (implies,
//! right-associative), `|`/`∨` (or), `^` (xor), `&`/`∧` (and), `!`/`¬`
//! (not). Atoms are state variables `xK`, input variables `uK`, and the
//! constants `1` (true) and `0` (false); `#` starts a comment. Compilation
//! evaluates each equation over all assignments — variables ordered
//! `u1..um, x1..xn`, true before false — to obtain its structure matrix in
//! `L_{2 × 2^{m+n}}`, then stacks the per-node matrices with the
//! Khatri–Rao product into the network's transition and output matrices.

use crate::dynamics::{pow2, Bcn};
use crate::error::{Error, Result};
use crate::stp::{khatri_rao, LogicalMatrix};

/// A Boolean expression over state variables, input variables and
/// constants. Variable indices are 1-based node numbers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Const(bool),
    State(usize),
    Input(usize),
    Not(Box<Expr>),
    And(Box<Expr>, Box<Expr>),
    Or(Box<Expr>, Box<Expr>),
    Xor(Box<Expr>, Box<Expr>),
    Implies(Box<Expr>, Box<Expr>),
    Iff(Box<Expr>, Box<Expr>),
}

impl Expr {
    /// Evaluates under a truth assignment; slices are indexed by node
    /// number minus one and must be long enough for every variable used.
    pub fn eval(&self, state: &[bool], input: &[bool]) -> bool {
        match self {
            Expr::Const(b) => *b,
            Expr::State(k) => state[*k - 1],
            Expr::Input(k) => input[*k - 1],
            Expr::Not(e) => !e.eval(state, input),
            Expr::And(a, b) => a.eval(state, input) && b.eval(state, input),
            Expr::Or(a, b) => a.eval(state, input) || b.eval(state, input),
            Expr::Xor(a, b) => a.eval(state, input) ^ b.eval(state, input),
            Expr::Implies(a, b) => !a.eval(state, input) || b.eval(state, input),
            Expr::Iff(a, b) => a.eval(state, input) == b.eval(state, input),
        }
    }
}

/// The structure matrix of `e` in `L_{2 × 2^{m+n}}`: column `c` holds the
/// truth value of `e` (`1` = true, `2` = false) under the assignment
/// encoded by `c` over the variable order `u1..um, x1..xn`, where variable
/// at position `i` (1-based) is true iff bit `m+n−i` of `c−1` is zero.
pub fn structure_matrix(e: &Expr, m: usize, n: usize) -> Result<LogicalMatrix> {
    let k = m + n;
    let cols = pow2(k)?;
    let mut idx = Vec::with_capacity(cols);
    let mut input = vec![false; m];
    let mut state = vec![false; n];
    for t in 0..cols {
        for (i, slot) in input.iter_mut().enumerate() {
            *slot = (t >> (k - 1 - i)) & 1 == 0;
        }
        for (j, slot) in state.iter_mut().enumerate() {
            *slot = (t >> (n - 1 - j)) & 1 == 0;
        }
        idx.push(if e.eval(&state, &input) { 1 } else { 2 });
    }
    LogicalMatrix::new(2, idx)
}

/// Stacks per-node structure matrices (all sharing a column count) into
/// one logical matrix via a Khatri–Rao fold; row counts multiply.
pub fn assemble(nodes: &[LogicalMatrix]) -> Result<LogicalMatrix> {
    let first = nodes.first().ok_or(Error::EmptyData {
        context: "assemble".into(),
    })?;
    let mut acc = LogicalMatrix::new(1, vec![1; first.cols()])?;
    for node in nodes {
        acc = khatri_rao(&acc, node)?;
    }
    Ok(acc)
}

/// A parsed source file: `updates[i]` is the right-hand side of
/// `x(i+1)'`, `outputs[j]` of `y(j+1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Program {
    pub n: usize,
    pub m: usize,
    pub l: usize,
    pub updates: Vec<Expr>,
    pub outputs: Vec<Expr>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(usize),
    Prime,
    Equals,
    LParen,
    RParen,
    Not,
    And,
    Or,
    Xor,
    Implies,
    Iff,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("'{s}'"),
            Tok::Int(v) => format!("'{v}'"),
            Tok::Prime => "'''".into(),
            Tok::Equals => "'='".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Not => "'!'".into(),
            Tok::And => "'&'".into(),
            Tok::Or => "'|'".into(),
            Tok::Xor => "'^'".into(),
            Tok::Implies => "'->'".into(),
            Tok::Iff => "'<->'".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Self {
            chars: src.chars().peekable(),
            line: 1,
            col: 1,
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn err(&self, line: usize, col: usize, message: impl Into<String>) -> Error {
        Error::Syntax {
            line,
            col,
            message: message.into(),
        }
    }

    /// Tokenizes the whole source; the second return value is the position
    /// just past the end, used for end-of-input diagnostics.
    fn lex(mut self) -> Result<(Vec<Spanned>, (usize, usize))> {
        let mut out = Vec::new();
        while let Some(&c) = self.chars.peek() {
            if c == '#' {
                while let Some(&c) = self.chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    self.bump();
                }
                continue;
            }
            if c.is_whitespace() {
                self.bump();
                continue;
            }
            let (line, col) = (self.line, self.col);
            let tok = if c.is_alphabetic() && c != '¬' && c != '∧' && c != '∨' {
                let mut name = String::new();
                while let Some(&c) = self.chars.peek() {
                    if c.is_alphabetic() && c != '¬' && c != '∧' && c != '∨' {
                        name.push(c);
                        self.bump();
                    } else {
                        break;
                    }
                }
                Tok::Ident(name)
            } else if c.is_ascii_digit() {
                let mut digits = String::new();
                while let Some(&c) = self.chars.peek() {
                    if c.is_ascii_digit() {
                        digits.push(c);
                        self.bump();
                    } else {
                        break;
                    }
                }
                let v: usize = digits
                    .parse()
                    .map_err(|_| self.err(line, col, format!("number '{digits}' too large")))?;
                Tok::Int(v)
            } else {
                self.bump();
                match c {
                    '\'' => Tok::Prime,
                    '=' => Tok::Equals,
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    '!' | '¬' => Tok::Not,
                    '&' | '∧' => Tok::And,
                    '|' | '∨' => Tok::Or,
                    '^' => Tok::Xor,
                    '-' => {
                        if self.chars.peek() == Some(&'>') {
                            self.bump();
                            Tok::Implies
                        } else {
                            return Err(self.err(line, col, "expected '->'"));
                        }
                    }
                    '<' => {
                        if self.chars.peek() == Some(&'-') {
                            self.bump();
                            if self.chars.peek() == Some(&'>') {
                                self.bump();
                                Tok::Iff
                            } else {
                                return Err(self.err(line, col, "expected '<->'"));
                            }
                        } else {
                            return Err(self.err(line, col, "expected '<->'"));
                        }
                    }
                    other => {
                        return Err(self.err(line, col, format!("unexpected character '{other}'")))
                    }
                }
            };
            out.push(Spanned { tok, line, col });
        }
        Ok((out, (self.line, self.col)))
    }
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    end: (usize, usize),
    n: usize,
    m: usize,
    /// True while parsing an output equation, where input variables are
    /// not allowed (outputs observe the state only).
    in_output: bool,
}

impl Parser {
    fn here(&self) -> (usize, usize) {
        match self.toks.get(self.pos) {
            Some(t) => (t.line, t.col),
            None => self.end,
        }
    }

    fn err_here(&self, message: impl Into<String>) -> Error {
        let (line, col) = self.here();
        Error::Syntax {
            line,
            col,
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn next(&mut self, expected: &str) -> Result<Spanned> {
        let t = self
            .toks
            .get(self.pos)
            .cloned()
            .ok_or_else(|| self.err_here(format!("expected {expected}, found end of input")))?;
        self.pos += 1;
        Ok(t)
    }

    fn expect(&mut self, want: Tok) -> Result<()> {
        let desc = want.describe();
        let t = self.next(&desc)?;
        if t.tok != want {
            return Err(Error::Syntax {
                line: t.line,
                col: t.col,
                message: format!("expected {desc}, found {}", t.tok.describe()),
            });
        }
        Ok(())
    }

    fn expect_keyword(&mut self, kw: &str) -> Result<()> {
        let t = self.next(&format!("'{kw}'"))?;
        match &t.tok {
            Tok::Ident(s) if s == kw => Ok(()),
            other => Err(Error::Syntax {
                line: t.line,
                col: t.col,
                message: format!("expected '{kw}', found {}", other.describe()),
            }),
        }
    }

    fn expect_int(&mut self, what: &str) -> Result<(usize, usize, usize)> {
        let t = self.next(what)?;
        match t.tok {
            Tok::Int(v) => Ok((v, t.line, t.col)),
            other => Err(Error::Syntax {
                line: t.line,
                col: t.col,
                message: format!("expected {what}, found {}", other.describe()),
            }),
        }
    }

    /// Variable atom `xK`/`uK`; the leading identifier has been consumed.
    fn finish_var(&mut self, head: Spanned, name: &str) -> Result<Expr> {
        let (k, _, _) = self.expect_int(&format!("node index after '{name}'"))?;
        let bound = if name == "x" { self.n } else { self.m };
        if k == 0 || k > bound {
            return Err(Error::UndeclaredVariable {
                line: head.line,
                col: head.col,
                name: format!("{name}{k}"),
            });
        }
        if name == "u" {
            if self.in_output {
                return Err(Error::Syntax {
                    line: head.line,
                    col: head.col,
                    message: format!("input u{k} cannot appear in an output equation"),
                });
            }
            Ok(Expr::Input(k))
        } else {
            Ok(Expr::State(k))
        }
    }

    fn parse_atom(&mut self) -> Result<Expr> {
        let t = self.next("an atom")?;
        match &t.tok {
            Tok::Not => Ok(Expr::Not(Box::new(self.parse_atom()?))),
            Tok::LParen => {
                let e = self.parse_expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Tok::Int(0) => Ok(Expr::Const(false)),
            Tok::Int(1) => Ok(Expr::Const(true)),
            Tok::Int(v) => Err(Error::Syntax {
                line: t.line,
                col: t.col,
                message: format!("expected constant 0 or 1, found '{v}'"),
            }),
            Tok::Ident(s) if s == "x" || s == "u" => {
                let name = s.clone();
                self.finish_var(t, &name)
            }
            Tok::Ident(s) => Err(Error::UndeclaredVariable {
                line: t.line,
                col: t.col,
                name: s.clone(),
            }),
            other => Err(Error::Syntax {
                line: t.line,
                col: t.col,
                message: format!("expected an atom, found {}", other.describe()),
            }),
        }
    }

    fn parse_and(&mut self) -> Result<Expr> {
        let mut e = self.parse_atom()?;
        while self.peek() == Some(&Tok::And) {
            self.pos += 1;
            e = Expr::And(Box::new(e), Box::new(self.parse_atom()?));
        }
        Ok(e)
    }

    fn parse_xor(&mut self) -> Result<Expr> {
        let mut e = self.parse_and()?;
        while self.peek() == Some(&Tok::Xor) {
            self.pos += 1;
            e = Expr::Xor(Box::new(e), Box::new(self.parse_and()?));
        }
        Ok(e)
    }

    fn parse_or(&mut self) -> Result<Expr> {
        let mut e = self.parse_xor()?;
        while self.peek() == Some(&Tok::Or) {
            self.pos += 1;
            e = Expr::Or(Box::new(e), Box::new(self.parse_xor()?));
        }
        Ok(e)
    }

    fn parse_implies(&mut self) -> Result<Expr> {
        let e = self.parse_or()?;
        if self.peek() == Some(&Tok::Implies) {
            self.pos += 1;
            // Right-associative: a -> b -> c is a -> (b -> c).
            return Ok(Expr::Implies(Box::new(e), Box::new(self.parse_implies()?)));
        }
        Ok(e)
    }

    fn parse_expr(&mut self) -> Result<Expr> {
        let mut e = self.parse_implies()?;
        while self.peek() == Some(&Tok::Iff) {
            self.pos += 1;
            e = Expr::Iff(Box::new(e), Box::new(self.parse_implies()?));
        }
        Ok(e)
    }

    fn parse_program(&mut self) -> Result<Program> {
        self.expect_keyword("states")?;
        let (n, line, col) = self.expect_int("state node count")?;
        if n == 0 {
            return Err(Error::Syntax {
                line,
                col,
                message: "a network needs at least one state node".into(),
            });
        }
        self.expect_keyword("inputs")?;
        let (m, _, _) = self.expect_int("input node count")?;
        self.expect_keyword("outputs")?;
        let (l, _, _) = self.expect_int("output node count")?;
        self.n = n;
        self.m = m;

        let mut updates: Vec<Option<Expr>> = vec![None; n];
        let mut outputs: Vec<Option<Expr>> = vec![None; l];
        while self.pos < self.toks.len() {
            let head = self.next("an equation")?;
            let is_update = match &head.tok {
                Tok::Ident(s) if s == "x" => true,
                Tok::Ident(s) if s == "y" => false,
                other => {
                    return Err(Error::Syntax {
                        line: head.line,
                        col: head.col,
                        message: format!(
                            "expected an equation starting with 'x' or 'y', found {}",
                            other.describe()
                        ),
                    })
                }
            };
            let side = if is_update { "x" } else { "y" };
            let (k, _, _) = self.expect_int(&format!("node index after '{side}'"))?;
            let (slots, display): (&mut Vec<Option<Expr>>, String) = if is_update {
                self.expect(Tok::Prime)?;
                (&mut updates, format!("x{k}'"))
            } else {
                (&mut outputs, format!("y{k}"))
            };
            if k == 0 || k > slots.len() {
                return Err(Error::UndeclaredVariable {
                    line: head.line,
                    col: head.col,
                    name: display,
                });
            }
            if slots[k - 1].is_some() {
                return Err(Error::DuplicateEquation {
                    line: head.line,
                    col: head.col,
                    name: display,
                });
            }
            self.expect(Tok::Equals)?;
            self.in_output = !is_update;
            let e = self.parse_expr()?;
            self.in_output = false;
            let slots = if is_update { &mut updates } else { &mut outputs };
            slots[k - 1] = Some(e);
        }

        let updates = updates
            .into_iter()
            .enumerate()
            .map(|(i, e)| {
                e.ok_or(Error::MissingEquation {
                    name: format!("x{}'", i + 1),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let outputs = outputs
            .into_iter()
            .enumerate()
            .map(|(j, e)| {
                e.ok_or(Error::MissingEquation {
                    name: format!("y{}", j + 1),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Program {
            n,
            m,
            l,
            updates,
            outputs,
        })
    }
}

/// Parses a source file into a [`Program`], checking that every declared
/// node has exactly one equation and that all variable references are in
/// range.
pub fn parse(src: &str) -> Result<Program> {
    let (toks, end) = Lexer::new(src).lex()?;
    let mut parser = Parser {
        toks,
        pos: 0,
        end,
        n: 0,
        m: 0,
        in_output: false,
    };
    parser.parse_program()
}

/// Compiles a parsed program to algebraic form: per-node structure
/// matrices over `u1..um, x1..xn` are stacked into `F`, per-output ones
/// over `x1..xn` into `H`.
pub fn compile(p: &Program) -> Result<Bcn> {
    let f_nodes = p
        .updates
        .iter()
        .map(|e| structure_matrix(e, p.m, p.n))
        .collect::<Result<Vec<_>>>()?;
    let h_nodes = p
        .outputs
        .iter()
        .map(|e| structure_matrix(e, 0, p.n))
        .collect::<Result<Vec<_>>>()?;
    let f = assemble(&f_nodes)?;
    let h = if h_nodes.is_empty() {
        LogicalMatrix::new(1, vec![1; pow2(p.n)?])?
    } else {
        assemble(&h_nodes)?
    };
    Bcn::new(p.n, p.m, p.l, f.col_indices().to_vec(), h.col_indices().to_vec())
}

/// Convenience wrapper: [`parse`] followed by [`compile`].
pub fn compile_source(src: &str) -> Result<Bcn> {
    compile(&parse(src)?)
}
