//! Terms, substitutions, syntactic unification and one-way matching.
//!
//! Symbols and variables are interned as integers. A [`Signature`] owns the
//! symbol table and fixes each symbol's arity and kind the first time it is
//! seen; symbol ids are handed out in declaration order, which the term
//! ordering uses for precedence tie-breaks.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Interned function or predicate symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sym(pub u32);

/// Clause-local variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymbolKind {
    Function,
    Predicate,
}

#[derive(Debug, Clone)]
pub struct SymbolInfo {
    pub name: String,
    pub arity: usize,
    pub kind: SymbolKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SignatureError {
    #[error("symbol `{name}` used with arity {found}, but earlier with arity {expected}")]
    ArityConflict {
        name: String,
        expected: usize,
        found: usize,
    },
    #[error("symbol `{name}` used both as a function and as a predicate")]
    KindConflict { name: String },
}

/// Symbol table with globally fixed arities.
#[derive(Debug, Clone, Default)]
pub struct Signature {
    symbols: Vec<SymbolInfo>,
    by_name: HashMap<String, Sym>,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns the symbol for `name`, declaring it on first use.
    pub fn intern(
        &mut self,
        name: &str,
        arity: usize,
        kind: SymbolKind,
    ) -> Result<Sym, SignatureError> {
        if let Some(&sym) = self.by_name.get(name) {
            let info = &self.symbols[sym.0 as usize];
            if info.kind != kind {
                return Err(SignatureError::KindConflict {
                    name: name.to_string(),
                });
            }
            if info.arity != arity {
                return Err(SignatureError::ArityConflict {
                    name: name.to_string(),
                    expected: info.arity,
                    found: arity,
                });
            }
            return Ok(sym);
        }
        let sym = Sym(self.symbols.len() as u32);
        self.symbols.push(SymbolInfo {
            name: name.to_string(),
            arity,
            kind,
        });
        self.by_name.insert(name.to_string(), sym);
        Ok(sym)
    }

    pub fn function(&mut self, name: &str, arity: usize) -> Result<Sym, SignatureError> {
        self.intern(name, arity, SymbolKind::Function)
    }

    pub fn predicate(&mut self, name: &str, arity: usize) -> Result<Sym, SignatureError> {
        self.intern(name, arity, SymbolKind::Predicate)
    }

    pub fn lookup(&self, name: &str) -> Option<Sym> {
        self.by_name.get(name).copied()
    }

    pub fn info(&self, sym: Sym) -> &SymbolInfo {
        &self.symbols[sym.0 as usize]
    }

    pub fn name(&self, sym: Sym) -> &str {
        &self.info(sym).name
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }
}

/// First-order term: a variable or a symbol applied to arguments.
///
/// Arguments are reference counted so that cloning and substitution share
/// unchanged subterms.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(Var),
    App(Sym, Arc<[Term]>),
}

/// Path from a root term to one of its subterms (argument indices).
pub type TermPath = Vec<usize>;

impl Term {
    pub fn var(v: u32) -> Term {
        Term::Var(Var(v))
    }

    pub fn constant(sym: Sym) -> Term {
        Term::App(sym, Arc::from(Vec::new()))
    }

    pub fn app(sym: Sym, args: Vec<Term>) -> Term {
        Term::App(sym, Arc::from(args))
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    pub fn as_var(&self) -> Option<Var> {
        match self {
            Term::Var(v) => Some(*v),
            Term::App(..) => None,
        }
    }

    pub fn head(&self) -> Option<Sym> {
        match self {
            Term::Var(_) => None,
            Term::App(f, _) => Some(*f),
        }
    }

    pub fn args(&self) -> &[Term] {
        match self {
            Term::Var(_) => &[],
            Term::App(_, args) => args,
        }
    }

    /// Number of symbol and variable occurrences.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::App(_, args) => args.iter().map(|a| a.depth() + 1).max().unwrap_or(0),
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::App(_, args) => args.iter().all(Term::is_ground),
        }
    }

    pub fn contains_var(&self, v: Var) -> bool {
        match self {
            Term::Var(w) => *w == v,
            Term::App(_, args) => args.iter().any(|a| a.contains_var(v)),
        }
    }

    pub fn collect_vars(&self, out: &mut Vec<Var>) {
        match self {
            Term::Var(v) => out.push(*v),
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    pub fn max_var(&self) -> Option<u32> {
        match self {
            Term::Var(v) => Some(v.0),
            Term::App(_, args) => args.iter().filter_map(Term::max_var).max(),
        }
    }

    /// Adds `offset` to every variable id.
    pub fn shift_vars(&self, offset: u32) -> Term {
        if offset == 0 {
            return self.clone();
        }
        self.map_vars(&mut |v| Term::Var(Var(v.0 + offset)))
    }

    pub fn map_vars(&self, f: &mut impl FnMut(Var) -> Term) -> Term {
        match self {
            Term::Var(v) => f(*v),
            Term::App(s, args) if args.is_empty() => Term::App(*s, args.clone()),
            Term::App(s, args) => Term::app(*s, args.iter().map(|a| a.map_vars(f)).collect()),
        }
    }

    /// Visits every subterm in pre-order (outermost first, arguments left to right).
    pub fn for_each_subterm<'a>(&'a self, f: &mut impl FnMut(&TermPath, &'a Term)) {
        fn go<'a>(t: &'a Term, path: &mut TermPath, f: &mut impl FnMut(&TermPath, &'a Term)) {
            f(path, t);
            for (i, a) in t.args().iter().enumerate() {
                path.push(i);
                go(a, path, f);
                path.pop();
            }
        }
        go(self, &mut Vec::new(), f);
    }

    /// All `(path, subterm)` pairs in pre-order.
    pub fn subterms(&self) -> Vec<(TermPath, &Term)> {
        let mut out = Vec::new();
        self.for_each_subterm(&mut |p, t| out.push((p.clone(), t)));
        out
    }

    pub fn subterm_at(&self, path: &[usize]) -> Option<&Term> {
        let mut t = self;
        for &i in path {
            t = t.args().get(i)?;
        }
        Some(t)
    }

    /// Returns a copy with the subterm at `path` replaced by `new`.
    pub fn replace_at(&self, path: &[usize], new: &Term) -> Term {
        match path.split_first() {
            None => new.clone(),
            Some((&i, rest)) => match self {
                Term::Var(_) => panic!("invalid term path"),
                Term::App(s, args) => {
                    let mut args: Vec<Term> = args.to_vec();
                    args[i] = args[i].replace_at(rest, new);
                    Term::app(*s, args)
                }
            },
        }
    }

    pub fn display<'a>(&'a self, sig: &'a Signature) -> TermDisplay<'a> {
        TermDisplay { term: self, sig }
    }
}

pub struct TermDisplay<'a> {
    term: &'a Term,
    sig: &'a Signature,
}

impl fmt::Display for TermDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.term {
            Term::Var(v) => write!(f, "X{}", v.0),
            Term::App(s, args) => {
                write!(f, "{}", self.sig.name(*s))?;
                if !args.is_empty() {
                    write!(f, "(")?;
                    for (i, a) in args.iter().enumerate() {
                        if i > 0 {
                            write!(f, ",")?;
                        }
                        write!(f, "{}", a.display(self.sig))?;
                    }
                    write!(f, ")")?;
                }
                Ok(())
            }
        }
    }
}

/// Finite map from variables to terms, applied simultaneously.
///
/// Bindings are kept sorted by variable so that equal substitutions compare
/// equal. Values are immutable: [`Substitution::bind`] returns an extended copy.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Substitution {
    bindings: Vec<(Var, Term)>,
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a substitution from pairs; identity bindings are dropped.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (Var, Term)>) -> Self {
        let mut s = Substitution::new();
        for (v, t) in pairs {
            if t != Term::Var(v) {
                s.insert(v, t);
            }
        }
        s
    }

    pub fn get(&self, v: Var) -> Option<&Term> {
        self.bindings
            .binary_search_by_key(&v, |(w, _)| *w)
            .ok()
            .map(|i| &self.bindings[i].1)
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Var, &Term)> {
        self.bindings.iter().map(|(v, t)| (*v, t))
    }

    pub fn domain(&self) -> impl Iterator<Item = Var> + '_ {
        self.bindings.iter().map(|(v, _)| *v)
    }

    /// Extended copy of `self` with `v ↦ t`. `v` must be unbound.
    pub fn bind(&self, v: Var, t: Term) -> Substitution {
        let mut s = self.clone();
        s.insert(v, t);
        s
    }

    fn insert(&mut self, v: Var, t: Term) {
        match self.bindings.binary_search_by_key(&v, |(w, _)| *w) {
            Ok(i) => self.bindings[i].1 = t,
            Err(i) => self.bindings.insert(i, (v, t)),
        }
    }

    /// True if every binding of `other` is also a binding of `self`.
    pub fn extends(&self, other: &Substitution) -> bool {
        other.iter().all(|(v, t)| self.get(v) == Some(t))
    }

    pub fn apply_term(&self, t: &Term) -> Term {
        if self.is_empty() {
            return t.clone();
        }
        match t {
            Term::Var(v) => self.get(*v).cloned().unwrap_or_else(|| t.clone()),
            Term::App(_, args) if args.is_empty() => t.clone(),
            Term::App(s, args) => {
                let new: Vec<Term> = args.iter().map(|a| self.apply_term(a)).collect();
                if new.iter().zip(args.iter()).all(|(a, b)| a == b) {
                    t.clone()
                } else {
                    Term::app(*s, new)
                }
            }
        }
    }
}

/// Anything a substitution can be applied to and that can be paired up
/// term-by-term with another value of the same shape.
pub trait Expression: Sized {
    fn apply(&self, sigma: &Substitution) -> Self;

    /// Pushes corresponding term pairs of `self` and `other`. Returns `false`
    /// if the two expressions have different shapes.
    fn term_pairs<'a>(&'a self, other: &'a Self, out: &mut Vec<(&'a Term, &'a Term)>) -> bool;
}

impl Expression for Term {
    fn apply(&self, sigma: &Substitution) -> Self {
        sigma.apply_term(self)
    }

    fn term_pairs<'a>(&'a self, other: &'a Self, out: &mut Vec<(&'a Term, &'a Term)>) -> bool {
        out.push((self, other));
        true
    }
}

impl<E: Expression> Expression for Vec<E> {
    fn apply(&self, sigma: &Substitution) -> Self {
        self.iter().map(|e| e.apply(sigma)).collect()
    }

    fn term_pairs<'a>(&'a self, other: &'a Self, out: &mut Vec<(&'a Term, &'a Term)>) -> bool {
        self.len() == other.len() && self.iter().zip(other).all(|(a, b)| a.term_pairs(b, out))
    }
}

/// Most general unifier of two expressions, in fully applied form.
pub fn unify<E: Expression>(a: &E, b: &E) -> Option<Substitution> {
    let mut pairs = Vec::new();
    if !a.term_pairs(b, &mut pairs) {
        return None;
    }
    unify_pairs(pairs.into_iter().map(|(s, t)| (s.clone(), t.clone())))
}

pub fn unify_terms(a: &Term, b: &Term) -> Option<Substitution> {
    unify_pairs(std::iter::once((a.clone(), b.clone())))
}

/// Unifies all pairs simultaneously using an explicit work stack and an eager
/// occurs check.
pub fn unify_pairs(pairs: impl IntoIterator<Item = (Term, Term)>) -> Option<Substitution> {
    let mut bindings: HashMap<Var, Term> = HashMap::new();
    let mut stack: Vec<(Term, Term)> = pairs.into_iter().collect();

    while let Some((a, b)) = stack.pop() {
        let a = walk(&a, &bindings);
        let b = walk(&b, &bindings);
        match (&a, &b) {
            (Term::Var(x), Term::Var(y)) if x == y => {}
            (Term::Var(x), _) => {
                if occurs(*x, &b, &bindings) {
                    return None;
                }
                bindings.insert(*x, b);
            }
            (_, Term::Var(y)) => {
                if occurs(*y, &a, &bindings) {
                    return None;
                }
                bindings.insert(*y, a);
            }
            (Term::App(f, fa), Term::App(g, ga)) => {
                if f != g || fa.len() != ga.len() {
                    return None;
                }
                stack.extend(fa.iter().cloned().zip(ga.iter().cloned()));
            }
        }
    }

    let vars: Vec<Var> = bindings.keys().copied().collect();
    Some(Substitution::from_pairs(
        vars.into_iter()
            .map(|v| (v, resolve(&Term::Var(v), &bindings))),
    ))
}

fn walk(t: &Term, bindings: &HashMap<Var, Term>) -> Term {
    let mut cur = t;
    while let Term::Var(v) = cur {
        match bindings.get(v) {
            Some(next) => cur = next,
            None => break,
        }
    }
    cur.clone()
}

fn occurs(v: Var, t: &Term, bindings: &HashMap<Var, Term>) -> bool {
    let mut stack = vec![t.clone()];
    while let Some(t) = stack.pop() {
        match walk(&t, bindings) {
            Term::Var(w) => {
                if w == v {
                    return true;
                }
            }
            Term::App(_, args) => stack.extend(args.iter().cloned()),
        }
    }
    false
}

fn resolve(t: &Term, bindings: &HashMap<Var, Term>) -> Term {
    match walk(t, bindings) {
        Term::Var(v) => Term::Var(v),
        Term::App(s, args) if args.is_empty() => Term::App(s, args),
        Term::App(s, args) => Term::app(s, args.iter().map(|a| resolve(a, bindings)).collect()),
    }
}

/// One-way match of `pattern` onto `target` extending `base`.
///
/// Variables of `target` are treated as constants. When pattern and target
/// share variables the result may contain a binding `x ↦ x`; it is kept so
/// that later occurrences of `x` in the pattern stay consistent.
pub fn match_expr<E: Expression>(
    pattern: &E,
    target: &E,
    base: &Substitution,
) -> Option<Substitution> {
    let mut pairs = Vec::new();
    if !pattern.term_pairs(target, &mut pairs) {
        return None;
    }
    let mut sigma = base.clone();
    for (p, t) in pairs {
        if !match_into(p, t, &mut sigma) {
            return None;
        }
    }
    Some(sigma)
}

pub fn match_term(pattern: &Term, target: &Term, base: &Substitution) -> Option<Substitution> {
    let mut sigma = base.clone();
    match_into(pattern, target, &mut sigma).then_some(sigma)
}

/// Extends `sigma` in place. On failure `sigma` may hold partial bindings.
pub fn match_into(pattern: &Term, target: &Term, sigma: &mut Substitution) -> bool {
    let mut stack = vec![(pattern, target)];
    while let Some((p, t)) = stack.pop() {
        match p {
            Term::Var(v) => match sigma.get(*v) {
                Some(bound) => {
                    if bound != t {
                        return false;
                    }
                }
                None => sigma.insert(*v, t.clone()),
            },
            Term::App(f, pa) => match t {
                Term::App(g, ta) if f == g && pa.len() == ta.len() => {
                    stack.extend(pa.iter().zip(ta.iter()));
                }
                _ => return false,
            },
        }
    }
    true
}
