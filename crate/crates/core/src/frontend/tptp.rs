//! Parser and printer for the CNF fragment of TPTP.
//!
//! Supported: `cnf(name, role, formula).` with `|`, `~`, `=`, `!=`,
//! parenthesised formulas, `$true`/`$false` literals, `%` and `/* */`
//! comments, and `include('file').` resolved relative to the including file.

use std::collections::HashMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use thiserror::Error;

use crate::clause::{display_literals, Clause, Literal};
use crate::term::{Signature, SignatureError, Term, Var};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Role {
    Axiom,
    Hypothesis,
    NegatedConjecture,
    Other(String),
}

impl Role {
    fn parse(s: &str) -> Role {
        match s {
            "axiom" => Role::Axiom,
            "hypothesis" => Role::Hypothesis,
            "negated_conjecture" => Role::NegatedConjecture,
            other => Role::Other(other.to_string()),
        }
    }

    pub fn as_str(&self) -> &str {
        match self {
            Role::Axiom => "axiom",
            Role::Hypothesis => "hypothesis",
            Role::NegatedConjecture => "negated_conjecture",
            Role::Other(s) => s,
        }
    }
}

#[derive(Debug, Clone)]
pub struct InputClause {
    pub name: String,
    pub role: Role,
    pub clause: Arc<Clause>,
}

#[derive(Debug, Clone)]
pub struct Problem {
    pub name: String,
    pub path: Option<PathBuf>,
    pub signature: Signature,
    pub clauses: Vec<InputClause>,
}

impl Problem {
    pub fn clauses(&self) -> Vec<Arc<Clause>> {
        self.clauses.iter().map(|c| c.clause.clone()).collect()
    }

    /// Prints the problem back as TPTP CNF.
    pub fn to_tptp(&self) -> String {
        let mut out = String::new();
        for c in &self.clauses {
            out.push_str(&format!(
                "cnf({}, {}, {}).\n",
                c.name,
                c.role.as_str(),
                display_literals(c.clause.literals(), &self.signature)
            ));
        }
        out
    }
}

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("{line}:{column}: {message} (found `{token}`)")]
    Syntax {
        line: usize,
        column: usize,
        token: String,
        message: String,
    },
    #[error("{line}:{column}: {source}")]
    Signature {
        line: usize,
        column: usize,
        #[source]
        source: SignatureError,
    },
    #[error("cannot read `{path}`: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    LowerWord(String),
    UpperWord(String),
    Quoted(String),
    Dollar(String),
    LParen,
    RParen,
    Comma,
    Dot,
    Pipe,
    Tilde,
    Eq,
    Neq,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::LowerWord(s) | Tok::UpperWord(s) => write!(f, "{s}"),
            Tok::Quoted(s) => write!(f, "'{s}'"),
            Tok::Dollar(s) => write!(f, "${s}"),
            Tok::LParen => write!(f, "("),
            Tok::RParen => write!(f, ")"),
            Tok::Comma => write!(f, ","),
            Tok::Dot => write!(f, "."),
            Tok::Pipe => write!(f, "|"),
            Tok::Tilde => write!(f, "~"),
            Tok::Eq => write!(f, "="),
            Tok::Neq => write!(f, "!="),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

struct Lexer<'a> {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    column: usize,
    _src: &'a str,
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            chars: src.chars().collect(),
            pos: 0,
            line: 1,
            column: 1,
            _src: src,
        }
    }

    fn peek_char(&self, k: usize) -> Option<char> {
        self.chars.get(self.pos + k).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.get(self.pos).copied()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn error(&self, line: usize, column: usize, token: String, message: &str) -> ParseError {
        ParseError::Syntax {
            line,
            column,
            token,
            message: message.to_string(),
        }
    }

    fn tokenize(mut self) -> Result<Vec<Spanned>, ParseError> {
        let mut out = Vec::new();
        loop {
            // whitespace and comments
            loop {
                match self.peek_char(0) {
                    Some(c) if c.is_whitespace() => {
                        self.bump();
                    }
                    Some('%') => {
                        while let Some(c) = self.bump() {
                            if c == '\n' {
                                break;
                            }
                        }
                    }
                    Some('/') if self.peek_char(1) == Some('*') => {
                        let (line, column) = (self.line, self.column);
                        self.bump();
                        self.bump();
                        loop {
                            match self.bump() {
                                Some('*') if self.peek_char(0) == Some('/') => {
                                    self.bump();
                                    break;
                                }
                                Some(_) => {}
                                None => {
                                    return Err(self.error(
                                        line,
                                        column,
                                        "/*".into(),
                                        "unterminated block comment",
                                    ))
                                }
                            }
                        }
                    }
                    _ => break,
                }
            }
            let (line, column) = (self.line, self.column);
            let Some(c) = self.peek_char(0) else {
                out.push(Spanned {
                    tok: Tok::Eof,
                    line,
                    column,
                });
                return Ok(out);
            };
            let tok = match c {
                '(' => {
                    self.bump();
                    Tok::LParen
                }
                ')' => {
                    self.bump();
                    Tok::RParen
                }
                ',' => {
                    self.bump();
                    Tok::Comma
                }
                '.' => {
                    self.bump();
                    Tok::Dot
                }
                '|' => {
                    self.bump();
                    Tok::Pipe
                }
                '~' => {
                    self.bump();
                    Tok::Tilde
                }
                '=' => {
                    self.bump();
                    Tok::Eq
                }
                '!' if self.peek_char(1) == Some('=') => {
                    self.bump();
                    self.bump();
                    Tok::Neq
                }
                '\'' => {
                    self.bump();
                    let mut s = String::new();
                    loop {
                        match self.bump() {
                            Some('\\') => {
                                if let Some(c) = self.bump() {
                                    s.push(c);
                                }
                            }
                            Some('\'') => break,
                            Some(c) => s.push(c),
                            None => {
                                return Err(self.error(
                                    line,
                                    column,
                                    format!("'{s}"),
                                    "unterminated quoted atom",
                                ))
                            }
                        }
                    }
                    Tok::Quoted(s)
                }
                '$' => {
                    self.bump();
                    Tok::Dollar(self.word())
                }
                c if c.is_ascii_uppercase() || c == '_' => Tok::UpperWord(self.word()),
                c if c.is_ascii_alphanumeric() => Tok::LowerWord(self.word()),
                other => {
                    return Err(self.error(line, column, other.to_string(), "unexpected character"))
                }
            };
            out.push(Spanned { tok, line, column });
        }
    }

    fn word(&mut self) -> String {
        let mut s = String::new();
        while let Some(c) = self.peek_char(0) {
            if c.is_ascii_alphanumeric() || c == '_' {
                s.push(c);
                self.bump();
            } else {
                break;
            }
        }
        s
    }
}

/// Clause-scoped variable names.
#[derive(Debug, Default, Clone)]
pub struct VarMap {
    names: HashMap<String, Var>,
}

impl VarMap {
    pub fn new() -> Self {
        Self::default()
    }

    fn get(&mut self, name: &str) -> Var {
        let next = Var(self.names.len() as u32);
        *self.names.entry(name.to_string()).or_insert(next)
    }
}

struct Parser<'s> {
    toks: Vec<Spanned>,
    pos: usize,
    sig: &'s mut Signature,
}

enum Statement {
    Cnf(InputClause),
    Include(String),
}

impl<'s> Parser<'s> {
    fn new(src: &str, sig: &'s mut Signature) -> Result<Self, ParseError> {
        Ok(Parser {
            toks: Lexer::new(src).tokenize()?,
            pos: 0,
            sig,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn next(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn err_here(&self, message: &str) -> ParseError {
        let s = &self.toks[self.pos];
        ParseError::Syntax {
            line: s.line,
            column: s.column,
            token: s.tok.to_string(),
            message: message.to_string(),
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.next();
            Ok(())
        } else {
            Err(self.err_here(&format!("expected `{tok}`")))
        }
    }

    fn name(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::LowerWord(s) | Tok::Quoted(s) => {
                self.next();
                Ok(s)
            }
            _ => Err(self.err_here("expected a name")),
        }
    }

    fn statement(&mut self) -> Result<Option<Statement>, ParseError> {
        match self.peek().clone() {
            Tok::Eof => Ok(None),
            Tok::LowerWord(w) if w == "cnf" => {
                self.next();
                self.expect(Tok::LParen)?;
                let name = self.name()?;
                self.expect(Tok::Comma)?;
                let role = Role::parse(&self.name()?);
                self.expect(Tok::Comma)?;
                let mut vars = VarMap::new();
                let literals = self.formula(&mut vars)?;
                // optional annotations are skipped
                while *self.peek() == Tok::Comma {
                    self.next();
                    self.skip_annotation()?;
                }
                self.expect(Tok::RParen)?;
                self.expect(Tok::Dot)?;
                Ok(Some(Statement::Cnf(InputClause {
                    name,
                    role,
                    clause: Arc::new(Clause::input(literals)),
                })))
            }
            Tok::LowerWord(w) if w == "include" => {
                self.next();
                self.expect(Tok::LParen)?;
                let file = match self.peek().clone() {
                    Tok::Quoted(s) => {
                        self.next();
                        s
                    }
                    _ => return Err(self.err_here("expected a quoted file name")),
                };
                self.expect(Tok::RParen)?;
                self.expect(Tok::Dot)?;
                Ok(Some(Statement::Include(file)))
            }
            Tok::LowerWord(w) if w == "fof" || w == "tff" || w == "thf" => {
                Err(self.err_here("only cnf formulas are supported"))
            }
            _ => Err(self.err_here("expected `cnf` or `include`")),
        }
    }

    fn skip_annotation(&mut self) -> Result<(), ParseError> {
        let mut depth = 0usize;
        loop {
            match self.peek() {
                Tok::Eof => return Err(self.err_here("unterminated annotation")),
                Tok::LParen => depth += 1,
                Tok::RParen if depth == 0 => return Ok(()),
                Tok::RParen => depth -= 1,
                Tok::Comma if depth == 0 => return Ok(()),
                _ => {}
            }
            self.next();
        }
    }

    /// Disjunction of literals, possibly parenthesised.
    fn formula(&mut self, vars: &mut VarMap) -> Result<Vec<Literal>, ParseError> {
        if *self.peek() == Tok::LParen {
            self.next();
            let lits = self.formula(vars)?;
            self.expect(Tok::RParen)?;
            if *self.peek() == Tok::Pipe {
                self.next();
                let mut rest = self.formula(vars)?;
                let mut lits = lits;
                lits.append(&mut rest);
                return Ok(lits);
            }
            return Ok(lits);
        }
        let mut lits = Vec::new();
        loop {
            if let Some(l) = self.literal(vars)? {
                lits.push(l);
            }
            if *self.peek() == Tok::Pipe {
                self.next();
                if *self.peek() == Tok::LParen {
                    let mut rest = self.formula(vars)?;
                    lits.append(&mut rest);
                    return Ok(lits);
                }
            } else {
                return Ok(lits);
            }
        }
    }

    /// `None` for `$false` (and for `~$true`); `$true` yields a tautology.
    fn literal(&mut self, vars: &mut VarMap) -> Result<Option<Literal>, ParseError> {
        let mut positive = true;
        while *self.peek() == Tok::Tilde {
            self.next();
            positive = !positive;
        }
        if let Tok::Dollar(w) = self.peek().clone() {
            match w.as_str() {
                "false" | "true" => {
                    self.next();
                    let truth = (w == "true") == positive;
                    if truth {
                        let t = self.symbol_term("$true_", 0)?;
                        return Ok(Some(Literal::eq(true, t.clone(), t)));
                    }
                    return Ok(None);
                }
                _ => return Err(self.err_here("unsupported defined symbol")),
            }
        }
        let start = self.pos;
        let lhs = self.raw_term(vars)?;
        match self.peek() {
            Tok::Eq | Tok::Neq => {
                let eq_positive = *self.peek() == Tok::Eq;
                self.next();
                let rhs = self.raw_term(vars)?;
                let lhs = self.build_term(lhs, start)?;
                let rhs_start = self.pos;
                let rhs = self.build_term(rhs, rhs_start)?;
                Ok(Some(Literal::eq(positive == eq_positive, lhs, rhs)))
            }
            _ => {
                let atom = self.build_atom(lhs, start)?;
                Ok(Some(Literal::pred(positive, atom)))
            }
        }
    }

    fn symbol_term(&mut self, name: &str, arity: usize) -> Result<Term, ParseError> {
        let s = &self.toks[self.pos];
        let (line, column) = (s.line, s.column);
        let sym = self
            .sig
            .function(name, arity)
            .map_err(|source| ParseError::Signature {
                line,
                column,
                source,
            })?;
        Ok(Term::constant(sym))
    }

    fn raw_term(&mut self, vars: &mut VarMap) -> Result<RawTerm, ParseError> {
        let start = self.pos;
        match self.peek().clone() {
            Tok::UpperWord(name) => {
                self.next();
                Ok(RawTerm::Var(vars.get(&name)))
            }
            Tok::LowerWord(name) | Tok::Quoted(name) => {
                self.next();
                let mut args = Vec::new();
                if *self.peek() == Tok::LParen {
                    self.next();
                    loop {
                        args.push(self.raw_term(vars)?);
                        match self.peek() {
                            Tok::Comma => {
                                self.next();
                            }
                            Tok::RParen => {
                                self.next();
                                break;
                            }
                            _ => return Err(self.err_here("expected `,` or `)`")),
                        }
                    }
                }
                Ok(RawTerm::App(name, args, start))
            }
            _ => Err(self.err_here("expected a term")),
        }
    }

    fn sig_err(&self, at: usize, source: SignatureError) -> ParseError {
        let s = &self.toks[at.min(self.toks.len() - 1)];
        ParseError::Signature {
            line: s.line,
            column: s.column,
            source,
        }
    }

    fn build_term(&mut self, raw: RawTerm, _at: usize) -> Result<Term, ParseError> {
        match raw {
            RawTerm::Var(v) => Ok(Term::Var(v)),
            RawTerm::App(name, args, at) => {
                let sym = self
                    .sig
                    .function(&name, args.len())
                    .map_err(|e| self.sig_err(at, e))?;
                let args = args
                    .into_iter()
                    .map(|a| self.build_term(a, at))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(Term::app(sym, args))
            }
        }
    }

    fn build_atom(&mut self, raw: RawTerm, at: usize) -> Result<Term, ParseError> {
        match raw {
            RawTerm::Var(_) => {
                let s = &self.toks[at];
                Err(ParseError::Syntax {
                    line: s.line,
                    column: s.column,
                    token: s.tok.to_string(),
                    message: "a variable is not a literal".to_string(),
                })
            }
            RawTerm::App(name, args, at) => {
                let sym = self
                    .sig
                    .predicate(&name, args.len())
                    .map_err(|e| self.sig_err(at, e))?;
                let args = args
                    .into_iter()
                    .map(|a| self.build_term(a, at))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(Term::app(sym, args))
            }
        }
    }
}

enum RawTerm {
    Var(Var),
    App(String, Vec<RawTerm>, usize),
}

/// Parses TPTP CNF text. `include` directives are resolved against `base_dir`.
pub fn parse_problem(
    text: &str,
    name: &str,
    base_dir: Option<&Path>,
) -> Result<Problem, ParseError> {
    let mut problem = Problem {
        name: name.to_string(),
        path: None,
        signature: Signature::new(),
        clauses: Vec::new(),
    };
    parse_into(text, base_dir, &mut problem)?;
    Ok(problem)
}

pub fn parse_file(path: &Path) -> Result<Problem, ParseError> {
    let text = std::fs::read_to_string(path).map_err(|source| ParseError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "problem".to_string());
    let mut problem = parse_problem(&text, &name, path.parent())?;
    problem.path = Some(path.to_path_buf());
    Ok(problem)
}

fn parse_into(
    text: &str,
    base_dir: Option<&Path>,
    problem: &mut Problem,
) -> Result<(), ParseError> {
    let mut parser = Parser::new(text, &mut problem.signature)?;
    let mut statements = Vec::new();
    while let Some(st) = parser.statement()? {
        statements.push(st);
    }
    drop(parser);
    for st in statements {
        match st {
            Statement::Cnf(c) => problem.clauses.push(c),
            Statement::Include(file) => {
                let path = base_dir
                    .map(|d| d.join(&file))
                    .unwrap_or_else(|| PathBuf::from(&file));
                let text = std::fs::read_to_string(&path).map_err(|source| ParseError::Io {
                    path: path.clone(),
                    source,
                })?;
                parse_into(&text, path.parent(), problem)?;
            }
        }
    }
    Ok(())
}

/// Parses a bare disjunction such as `~p(X) | f(X) = a`, sharing `vars`
/// across calls so that the same name denotes the same variable.
pub fn parse_literals(
    sig: &mut Signature,
    vars: &mut VarMap,
    text: &str,
) -> Result<Vec<Literal>, ParseError> {
    let mut parser = Parser::new(text, sig)?;
    let lits = parser.formula(vars)?;
    if *parser.peek() != Tok::Eof {
        return Err(parser.err_here("trailing input"));
    }
    Ok(lits)
}

/// Parses a single term.
pub fn parse_term(sig: &mut Signature, vars: &mut VarMap, text: &str) -> Result<Term, ParseError> {
    let mut parser = Parser::new(text, sig)?;
    let raw = parser.raw_term(vars)?;
    if *parser.peek() != Tok::Eof {
        return Err(parser.err_here("trailing input"));
    }
    parser.build_term(raw, 0)
}
