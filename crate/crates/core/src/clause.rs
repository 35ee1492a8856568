//! Literals, clauses and literal selection.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};
use std::sync::OnceLock;

use crate::ordering::{compare_literals, OrderResult};
use crate::term::{Expression, Signature, Substitution, Sym, Term, TermPath, Var};

/// Atom of a literal. Equality atoms are unordered pairs for identity.
#[derive(Debug, Clone)]
pub enum Atom {
    /// Predicate application; the term's head is the predicate symbol.
    Pred(Term),
    Eq(Term, Term),
}

impl PartialEq for Atom {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Atom::Pred(p), Atom::Pred(q)) => p == q,
            (Atom::Eq(a, b), Atom::Eq(c, d)) => (a == c && b == d) || (a == d && b == c),
            _ => false,
        }
    }
}

impl Eq for Atom {}

impl Hash for Atom {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match self {
            Atom::Pred(p) => {
                0u8.hash(state);
                p.hash(state);
            }
            Atom::Eq(a, b) => {
                1u8.hash(state);
                let (ha, hb) = (hash_of(a), hash_of(b));
                ha.min(hb).hash(state);
                ha.max(hb).hash(state);
            }
        }
    }
}

fn hash_of(t: &Term) -> u64 {
    let mut h = std::collections::hash_map::DefaultHasher::new();
    t.hash(&mut h);
    h.finish()
}

/// Position of a subterm inside a literal: which top-level term (a predicate
/// argument or an equation side) and the path below it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LiteralPos {
    pub root: usize,
    pub path: TermPath,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Literal {
    pub positive: bool,
    pub atom: Atom,
}

impl Literal {
    pub fn pred(positive: bool, atom: Term) -> Literal {
        debug_assert!(!atom.is_var());
        Literal {
            positive,
            atom: Atom::Pred(atom),
        }
    }

    pub fn eq(positive: bool, lhs: Term, rhs: Term) -> Literal {
        Literal {
            positive,
            atom: Atom::Eq(lhs, rhs),
        }
    }

    pub fn is_equality(&self) -> bool {
        matches!(self.atom, Atom::Eq(..))
    }

    pub fn is_positive_equality(&self) -> bool {
        self.positive && self.is_equality()
    }

    pub fn predicate(&self) -> Option<Sym> {
        match &self.atom {
            Atom::Pred(p) => p.head(),
            Atom::Eq(..) => None,
        }
    }

    /// Symbol count, counting the predicate or the equality sign once.
    pub fn weight(&self) -> usize {
        match &self.atom {
            Atom::Pred(p) => p.size(),
            Atom::Eq(l, r) => 1 + l.size() + r.size(),
        }
    }

    pub fn complement(&self) -> Literal {
        Literal {
            positive: !self.positive,
            atom: self.atom.clone(),
        }
    }

    pub fn sides(&self) -> Option<(&Term, &Term)> {
        match &self.atom {
            Atom::Eq(l, r) => Some((l, r)),
            Atom::Pred(_) => None,
        }
    }

    /// Every subterm position in scan order: roots left to right, each
    /// traversed outermost first.
    pub fn positions(&self) -> Vec<(LiteralPos, &Term)> {
        let mut out = Vec::new();
        for (root, t) in self.root_terms().into_iter().enumerate() {
            t.for_each_subterm(&mut |path, sub| {
                out.push((
                    LiteralPos {
                        root,
                        path: path.clone(),
                    },
                    sub,
                ))
            });
        }
        out
    }

    /// Top-level terms: predicate arguments, or the two equation sides.
    pub fn root_terms(&self) -> Vec<&Term> {
        match &self.atom {
            Atom::Pred(p) => p.args().iter().collect(),
            Atom::Eq(l, r) => vec![l, r],
        }
    }

    pub fn subterm_at(&self, pos: &LiteralPos) -> Option<&Term> {
        self.root_terms().get(pos.root)?.subterm_at(&pos.path)
    }

    /// Copy with the subterm at `pos` replaced by `new`.
    pub fn replace_at(&self, pos: &LiteralPos, new: &Term) -> Literal {
        let atom = match &self.atom {
            Atom::Pred(p) => {
                let mut path = vec![pos.root];
                path.extend_from_slice(&pos.path);
                Atom::Pred(p.replace_at(&path, new))
            }
            Atom::Eq(l, r) => {
                if pos.root == 0 {
                    Atom::Eq(l.replace_at(&pos.path, new), r.clone())
                } else {
                    Atom::Eq(l.clone(), r.replace_at(&pos.path, new))
                }
            }
        };
        Literal {
            positive: self.positive,
            atom,
        }
    }

    pub fn map_terms(&self, mut f: impl FnMut(&Term) -> Term) -> Literal {
        let atom = match &self.atom {
            Atom::Pred(p) => Atom::Pred(f(p)),
            Atom::Eq(l, r) => Atom::Eq(f(l), f(r)),
        };
        Literal {
            positive: self.positive,
            atom,
        }
    }

    pub fn shift_vars(&self, offset: u32) -> Literal {
        self.map_terms(|t| t.shift_vars(offset))
    }

    pub fn collect_vars(&self, out: &mut Vec<Var>) {
        match &self.atom {
            Atom::Pred(p) => p.collect_vars(out),
            Atom::Eq(l, r) => {
                l.collect_vars(out);
                r.collect_vars(out);
            }
        }
    }

    pub fn is_ground(&self) -> bool {
        match &self.atom {
            Atom::Pred(p) => p.is_ground(),
            Atom::Eq(l, r) => l.is_ground() && r.is_ground(),
        }
    }

    pub fn display<'a>(&'a self, sig: &'a Signature) -> LiteralDisplay<'a> {
        LiteralDisplay { lit: self, sig }
    }
}

impl Expression for Literal {
    fn apply(&self, sigma: &Substitution) -> Self {
        self.map_terms(|t| sigma.apply_term(t))
    }

    fn term_pairs<'a>(&'a self, other: &'a Self, out: &mut Vec<(&'a Term, &'a Term)>) -> bool {
        if self.positive != other.positive {
            return false;
        }
        match (&self.atom, &other.atom) {
            (Atom::Pred(p), Atom::Pred(q)) => {
                out.push((p, q));
                true
            }
            (Atom::Eq(a, b), Atom::Eq(c, d)) => {
                out.push((a, c));
                out.push((b, d));
                true
            }
            _ => false,
        }
    }
}

pub struct LiteralDisplay<'a> {
    lit: &'a Literal,
    sig: &'a Signature,
}

impl fmt::Display for LiteralDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.lit.atom {
            Atom::Pred(p) => {
                if !self.lit.positive {
                    write!(f, "~")?;
                }
                write!(f, "{}", p.display(self.sig))
            }
            Atom::Eq(l, r) => {
                let op = if self.lit.positive { "=" } else { "!=" };
                write!(f, "{} {} {}", l.display(self.sig), op, r.display(self.sig))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClauseId(pub u64);

impl fmt::Display for ClauseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

static NEXT_CLAUSE_ID: AtomicU64 = AtomicU64::new(1);

fn fresh_clause_id() -> ClauseId {
    ClauseId(NEXT_CLAUSE_ID.fetch_add(1, AtomicOrdering::Relaxed))
}

/// Name of the rule that produced a clause.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    Input,
    Resolution,
    Factoring,
    Superposition,
    EqResolution,
    EqFactoring,
    Demodulation,
    Fsd,
    Bsd,
    Subsumption,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::Input => "input",
            Rule::Resolution => "resolution",
            Rule::Factoring => "factoring",
            Rule::Superposition => "superposition",
            Rule::EqResolution => "eq_resolution",
            Rule::EqFactoring => "eq_factoring",
            Rule::Demodulation => "demodulation",
            Rule::Fsd => "fsd",
            Rule::Bsd => "bsd",
            Rule::Subsumption => "subsumption",
        }
    }

    pub fn is_simplification(self) -> bool {
        matches!(self, Rule::Demodulation | Rule::Fsd | Rule::Bsd)
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Provenance of a clause.
///
/// `literals` holds, per parent, the literal position the inference acted on.
/// For simplifications the parents are `[main, side]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Inference {
    pub rule: Rule,
    pub parents: Vec<ClauseId>,
    pub literals: Vec<usize>,
}

impl Inference {
    pub fn input() -> Inference {
        Inference {
            rule: Rule::Input,
            parents: Vec::new(),
            literals: Vec::new(),
        }
    }

    pub fn new(rule: Rule, parents: Vec<ClauseId>, literals: Vec<usize>) -> Inference {
        Inference {
            rule,
            parents,
            literals,
        }
    }
}

/// A multiset of literals with a unique id and its provenance.
///
/// Variables are renamed to `0..n` in order of first occurrence on
/// construction, so every clause's variables start at zero.
#[derive(Debug)]
pub struct Clause {
    id: ClauseId,
    literals: Vec<Literal>,
    inference: Inference,
    var_count: u32,
    weight: usize,
    selected: OnceLock<Vec<usize>>,
}

impl Clause {
    /// Renames variables canonically and assigns a fresh id. Duplicate
    /// literals are kept.
    pub fn normalize(literals: Vec<Literal>, inference: Inference) -> Clause {
        let (literals, var_count) = canonical_rename(literals);
        let weight = literals.iter().map(Literal::weight).sum();
        Clause {
            id: fresh_clause_id(),
            literals,
            inference,
            var_count,
            weight,
            selected: OnceLock::new(),
        }
    }

    pub fn input(literals: Vec<Literal>) -> Clause {
        Clause::normalize(literals, Inference::input())
    }

    pub fn id(&self) -> ClauseId {
        self.id
    }

    pub fn literals(&self) -> &[Literal] {
        &self.literals
    }

    pub fn inference(&self) -> &Inference {
        &self.inference
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    /// Number of distinct variables; they are numbered `0..var_count`.
    pub fn var_count(&self) -> u32 {
        self.var_count
    }

    pub fn weight(&self) -> usize {
        self.weight
    }

    pub fn is_unit_equality(&self) -> bool {
        self.literals.len() == 1 && self.literals[0].is_positive_equality()
    }

    pub fn has_positive_equality(&self) -> bool {
        self.literals.iter().any(Literal::is_positive_equality)
    }

    pub fn is_ground(&self) -> bool {
        self.literals.iter().all(Literal::is_ground)
    }

    /// Literals with variables shifted by `offset`, for renaming apart.
    pub fn shifted_literals(&self, offset: u32) -> Vec<Literal> {
        self.literals.iter().map(|l| l.shift_vars(offset)).collect()
    }

    /// Literal positions chosen by the selection function (cached).
    pub fn selected(&self) -> &[usize] {
        self.selected.get_or_init(|| select(&self.literals))
    }

    /// Contains `s = s` or a literal together with its complement.
    pub fn is_tautology(&self) -> bool {
        self.literals.iter().enumerate().any(|(i, l)| {
            if let Atom::Eq(a, b) = &l.atom {
                if l.positive && a == b {
                    return true;
                }
            }
            self.literals[i + 1..]
                .iter()
                .any(|m| m.positive != l.positive && m.atom == l.atom)
        })
    }

    pub fn display<'a>(&'a self, sig: &'a Signature) -> ClauseDisplay<'a> {
        ClauseDisplay {
            lits: &self.literals,
            sig,
        }
    }
}

pub fn display_literals<'a>(lits: &'a [Literal], sig: &'a Signature) -> ClauseDisplay<'a> {
    ClauseDisplay { lits, sig }
}

pub struct ClauseDisplay<'a> {
    lits: &'a [Literal],
    sig: &'a Signature,
}

impl fmt::Display for ClauseDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lits.is_empty() {
            return write!(f, "$false");
        }
        for (i, l) in self.lits.iter().enumerate() {
            if i > 0 {
                write!(f, " | ")?;
            }
            write!(f, "{}", l.display(self.sig))?;
        }
        Ok(())
    }
}

/// Renames variables to `0..n` by first occurrence.
pub fn canonical_rename(literals: Vec<Literal>) -> (Vec<Literal>, u32) {
    let mut order: Vec<Var> = Vec::new();
    for l in &literals {
        let mut vs = Vec::new();
        l.collect_vars(&mut vs);
        for v in vs {
            if !order.contains(&v) {
                order.push(v);
            }
        }
    }
    let already_canonical = order.iter().enumerate().all(|(i, v)| v.0 == i as u32);
    let n = order.len() as u32;
    if already_canonical {
        return (literals, n);
    }
    let sigma = Substitution::from_pairs(
        order
            .iter()
            .enumerate()
            .map(|(i, v)| (*v, Term::var(i as u32))),
    );
    (literals.iter().map(|l| l.apply(&sigma)).collect(), n)
}

/// Well-behaved selection: the heaviest negative literal (leftmost on ties) if
/// there is one, otherwise every literal that no other literal exceeds.
pub fn select(literals: &[Literal]) -> Vec<usize> {
    let mut best_negative: Option<usize> = None;
    for (i, l) in literals.iter().enumerate() {
        if !l.positive {
            match best_negative {
                Some(j) if literals[j].weight() >= l.weight() => {}
                _ => best_negative = Some(i),
            }
        }
    }
    if let Some(i) = best_negative {
        return vec![i];
    }
    maximal_literals(literals)
}

/// Positions of literals that are not exceeded by any other literal.
pub fn maximal_literals(literals: &[Literal]) -> Vec<usize> {
    (0..literals.len())
        .filter(|&i| {
            literals
                .iter()
                .enumerate()
                .all(|(j, m)| j == i || compare_literals(m, &literals[i]) != OrderResult::Greater)
        })
        .collect()
}
