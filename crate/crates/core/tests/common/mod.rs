//! Shared helpers for the integration tests: clause builders, random
//! generators and reference oracles written independently of the library's
//! matching, indexing and simplification code.

#![allow(dead_code)]

use std::collections::HashMap;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;
use sdprover::clause::{Atom, Clause, Inference, Literal};
use sdprover::frontend::tptp::{parse_literals, parse_term, VarMap};
use sdprover::{compare_clauses, compare_terms, OrderResult, Signature, Sym, Term, Var};

/// Builds terms and clauses from TPTP text over one signature.
pub struct Ctx {
    pub sig: Signature,
    pub vars: VarMap,
}

impl Ctx {
    pub fn new() -> Self {
        Ctx {
            sig: Signature::new(),
            vars: VarMap::new(),
        }
    }

    /// A term whose variable names are shared with other `term` calls.
    pub fn term(&mut self, text: &str) -> Term {
        parse_term(&mut self.sig, &mut self.vars, text).unwrap()
    }

    /// Literals whose variable names are shared with other `lits` calls.
    pub fn lits(&mut self, text: &str) -> Vec<Literal> {
        parse_literals(&mut self.sig, &mut self.vars, text).unwrap()
    }

    /// A normalized input clause with its own variable scope.
    pub fn clause(&mut self, text: &str) -> Clause {
        Clause::input(parse_literals(&mut self.sig, &mut VarMap::new(), text).unwrap())
    }

    pub fn show(&self, lits: &[Literal]) -> String {
        sdprover::clause::display_literals(lits, &self.sig).to_string()
    }
}

pub fn sym_of(sig: &Signature, name: &str) -> Sym {
    sig.lookup(name)
        .unwrap_or_else(|| panic!("unknown symbol {name}"))
}

// ---------------------------------------------------------------------------
// Random generation

/// A small random signature with a fixed variable pool.
pub struct Gen {
    pub sig: Signature,
    pub constants: Vec<Sym>,
    pub unary: Vec<Sym>,
    pub binary: Vec<Sym>,
    pub preds: Vec<(Sym, usize)>,
    /// Variables `0..vars` may occur; zero gives ground terms.
    pub vars: u32,
    /// Maximal nesting of function symbols above a leaf.
    pub depth: usize,
    /// Percentage of equality literals.
    pub eq_percent: u32,
}

impl Gen {
    /// Two constants, two unary functions and two unary predicates; ground,
    /// depth at most 2.
    pub fn ground_small() -> Gen {
        let mut sig = Signature::new();
        let constants = vec![sig.function("a", 0).unwrap(), sig.function("b", 0).unwrap()];
        let unary = vec![sig.function("f", 1).unwrap(), sig.function("g", 1).unwrap()];
        let preds = vec![
            (sig.predicate("p", 1).unwrap(), 1),
            (sig.predicate("q", 1).unwrap(), 1),
        ];
        Gen {
            sig,
            constants,
            unary,
            binary: Vec::new(),
            preds,
            vars: 0,
            depth: 2,
            eq_percent: 45,
        }
    }

    /// Three constants, unary and binary functions, unary and binary
    /// predicates, up to three variables.
    pub fn with_vars() -> Gen {
        let mut sig = Signature::new();
        let constants = vec![
            sig.function("a", 0).unwrap(),
            sig.function("b", 0).unwrap(),
            sig.function("c", 0).unwrap(),
        ];
        let unary = vec![sig.function("f", 1).unwrap(), sig.function("g", 1).unwrap()];
        let binary = vec![sig.function("h", 2).unwrap()];
        let preds = vec![
            (sig.predicate("p", 1).unwrap(), 1),
            (sig.predicate("q", 2).unwrap(), 2),
        ];
        Gen {
            sig,
            constants,
            unary,
            binary,
            preds,
            vars: 3,
            depth: 2,
            eq_percent: 40,
        }
    }

    pub fn term(&self, rng: &mut StdRng, depth: usize) -> Term {
        let leaf = depth == 0 || rng.gen_ratio(2, 5);
        if leaf {
            if self.vars > 0 && rng.gen_ratio(2, 5) {
                return Term::var(rng.gen_range(0..self.vars));
            }
            return Term::constant(*self.constants.choose(rng).unwrap());
        }
        if !self.binary.is_empty() && rng.gen_ratio(1, 4) {
            let f = *self.binary.choose(rng).unwrap();
            Term::app(
                f,
                vec![self.term(rng, depth - 1), self.term(rng, depth - 1)],
            )
        } else {
            let f = *self.unary.choose(rng).unwrap();
            Term::app(f, vec![self.term(rng, depth - 1)])
        }
    }

    pub fn literal(&self, rng: &mut StdRng) -> Literal {
        let positive = rng.gen_bool(0.5);
        if rng.gen_ratio(self.eq_percent, 100) {
            Literal::eq(
                positive,
                self.term(rng, self.depth),
                self.term(rng, self.depth),
            )
        } else {
            self.pred_literal(rng, positive, None)
        }
    }

    /// A predicate literal, optionally with `inner` as one of its arguments.
    pub fn pred_literal(&self, rng: &mut StdRng, positive: bool, inner: Option<Term>) -> Literal {
        let (p, arity) = *self.preds.choose(rng).unwrap();
        let mut args: Vec<Term> = (0..arity).map(|_| self.term(rng, self.depth)).collect();
        if let Some(t) = inner {
            let k = rng.gen_range(0..arity);
            args[k] = t;
        }
        Literal::pred(positive, Term::app(p, args))
    }

    /// A predicate literal of random polarity with `inner` as an argument.
    pub fn pred_with(&self, rng: &mut StdRng, inner: Term) -> Literal {
        let positive = rng.gen_bool(0.5);
        self.pred_literal(rng, positive, Some(inner))
    }

    pub fn literals(&self, rng: &mut StdRng, min: usize, max: usize) -> Vec<Literal> {
        let n = rng.gen_range(min..=max);
        (0..n).map(|_| self.literal(rng)).collect()
    }

    /// A positive equation whose left side is not a variable.
    pub fn equation(&self, rng: &mut StdRng) -> Literal {
        loop {
            let l = self.term(rng, self.depth);
            if l.is_var() {
                continue;
            }
            let r = self.term(rng, self.depth);
            return Literal::eq(true, l, r);
        }
    }

    /// A ground substitution for the variables `0..self.vars`.
    pub fn ground_subst(&self, rng: &mut StdRng) -> HashMap<Var, Term> {
        let ground = Gen {
            sig: Signature::new(),
            constants: self.constants.clone(),
            unary: self.unary.clone(),
            binary: self.binary.clone(),
            preds: Vec::new(),
            vars: 0,
            depth: 1,
            eq_percent: 0,
        };
        (0..self.vars)
            .map(|v| (Var(v), ground.term(rng, 1)))
            .collect()
    }

    /// Wraps `t` in a random context of depth at most one.
    pub fn context(&self, rng: &mut StdRng, t: Term) -> Term {
        if rng.gen_bool(0.5) {
            t
        } else {
            let f = *self.unary.choose(rng).unwrap();
            Term::app(f, vec![t])
        }
    }
}

// ---------------------------------------------------------------------------
// Reference matching

pub type Bindings = HashMap<Var, Term>;

pub fn apply(s: &Bindings, t: &Term) -> Term {
    match t {
        Term::Var(v) => s.get(v).cloned().unwrap_or_else(|| t.clone()),
        Term::App(f, args) => Term::app(*f, args.iter().map(|a| apply(s, a)).collect()),
    }
}

pub fn apply_literal(s: &Bindings, l: &Literal) -> Literal {
    match &l.atom {
        Atom::Pred(p) => Literal::pred(l.positive, apply(s, p)),
        Atom::Eq(a, b) => Literal::eq(l.positive, apply(s, a), apply(s, b)),
    }
}

/// One-way matching: binds variables of `pattern` only.
pub fn match_onto(pattern: &Term, target: &Term, s: &mut Bindings) -> bool {
    match pattern {
        Term::Var(v) => match s.get(v) {
            Some(bound) => bound == target,
            None => {
                s.insert(*v, target.clone());
                true
            }
        },
        Term::App(f, args) => match target {
            Term::App(g, targs) if f == g && args.len() == targs.len() => args
                .iter()
                .zip(targs.iter())
                .all(|(a, b)| match_onto(a, b, s)),
            _ => false,
        },
    }
}

/// Every extension of `s` matching `pattern` onto `target`; equations in both
/// orientations.
pub fn match_literal_all(pattern: &Literal, target: &Literal, s: &Bindings) -> Vec<Bindings> {
    if pattern.positive != target.positive {
        return Vec::new();
    }
    let pairs: Vec<(Vec<&Term>, Vec<&Term>)> = match (&pattern.atom, &target.atom) {
        (Atom::Pred(p), Atom::Pred(q)) => vec![(vec![p], vec![q])],
        (Atom::Eq(a, b), Atom::Eq(c, d)) => {
            vec![(vec![a, b], vec![c, d]), (vec![a, b], vec![d, c])]
        }
        _ => Vec::new(),
    };
    let mut out = Vec::new();
    for (ps, ts) in pairs {
        let mut t = s.clone();
        if ps
            .iter()
            .zip(ts.iter())
            .all(|(p, q)| match_onto(p, q, &mut t))
            && !out.contains(&t)
        {
            out.push(t);
        }
    }
    out
}

/// Rebuilds a literal with one subterm replaced.
pub type Rebuild<'a> = Box<dyn Fn(&Term) -> Literal + 'a>;

/// Every subterm of a literal's top-level terms with a rebuild function.
pub fn literal_subterms(l: &Literal) -> Vec<(Term, Rebuild<'_>)> {
    let mut out: Vec<(Term, Rebuild<'_>)> = Vec::new();
    match &l.atom {
        Atom::Pred(p) => {
            for (i, arg) in p.args().iter().enumerate() {
                for (path, sub) in arg.subterms() {
                    let path = path.clone();
                    out.push((
                        sub.clone(),
                        Box::new(move |new: &Term| {
                            let mut args: Vec<Term> = p.args().to_vec();
                            args[i] = args[i].replace_at(&path, new);
                            Literal::pred(l.positive, Term::app(p.head().unwrap(), args))
                        }),
                    ));
                }
            }
        }
        Atom::Eq(a, b) => {
            for (path, sub) in a.subterms() {
                let path = path.clone();
                out.push((
                    sub.clone(),
                    Box::new(move |new: &Term| {
                        Literal::eq(l.positive, a.replace_at(&path, new), b.clone())
                    }),
                ));
            }
            for (path, sub) in b.subterms() {
                let path = path.clone();
                out.push((
                    sub.clone(),
                    Box::new(move |new: &Term| {
                        Literal::eq(l.positive, a.clone(), b.replace_at(&path, new))
                    }),
                ));
            }
        }
    }
    out
}

/// Injective assignments of `k` items into `0..n`.
pub fn injections(k: usize, n: usize) -> Vec<Vec<usize>> {
    fn go(k: usize, n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for j in 0..n {
            if !cur.contains(&j) {
                cur.push(j);
                go(k, n, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(k, n, &mut Vec::new(), &mut out);
    out
}

/// All ways the literals of `pattern` map injectively onto `target` under
/// one substitution extending `base`, with the image positions.
pub fn multi_matches(
    pattern: &[&Literal],
    target: &[Literal],
    base: &Bindings,
) -> Vec<(Bindings, Vec<usize>)> {
    let mut out = Vec::new();
    for image in injections(pattern.len(), target.len()) {
        let mut substs = vec![base.clone()];
        for (p, &j) in pattern.iter().zip(image.iter()) {
            substs = substs
                .iter()
                .flat_map(|s| match_literal_all(p, &target[j], s))
                .collect();
            if substs.is_empty() {
                break;
            }
        }
        for s in substs {
            out.push((s, image.clone()));
        }
    }
    out
}

/// Conclusions of every subsumption demodulation of `main` by `side`, found
/// by exhaustive enumeration and checked against the full multiset form of
/// the redundancy condition. `side` must not share variables with `main`.
pub fn brute_force_sd(side: &[Literal], main: &[Literal]) -> Vec<Vec<Literal>> {
    let mut out = Vec::new();
    for (e_pos, e) in side.iter().enumerate() {
        if !e.is_positive_equality() {
            continue;
        }
        let (a, b) = e.sides().unwrap();
        let rest: Vec<&Literal> = side
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != e_pos)
            .map(|(_, l)| l)
            .collect();
        for (sigma, image) in multi_matches(&rest, main, &Bindings::new()) {
            let image_lits: Vec<Literal> = image.iter().map(|&j| main[j].clone()).collect();
            for (i, lit) in main.iter().enumerate() {
                if image.contains(&i) {
                    continue;
                }
                for (t, rebuild) in literal_subterms(lit) {
                    for (l, r) in [(a, b), (b, a)] {
                        let mut s = sigma.clone();
                        if !match_onto(l, &t, &mut s) {
                            continue;
                        }
                        let r_sigma = apply(&s, r);
                        if compare_terms(&t, &r_sigma) != OrderResult::Greater {
                            continue;
                        }
                        let mut smaller = vec![Literal::eq(true, t.clone(), r_sigma.clone())];
                        smaller.extend(image_lits.iter().cloned());
                        if compare_clauses(main, &smaller) != OrderResult::Greater {
                            continue;
                        }
                        let mut concl = main.to_vec();
                        concl[i] = rebuild(&r_sigma);
                        out.push(concl);
                    }
                }
            }
        }
    }
    out
}

pub fn normalized(lits: Vec<Literal>) -> Clause {
    Clause::normalize(lits, Inference::input())
}

// ---------------------------------------------------------------------------
// Ground entailment by congruence closure

/// Decides whether a set of ground literals has a model in which `=` is a
/// congruence. Predicate atoms are encoded as terms equal, or not equal, to
/// a distinguished `true` node.
pub fn ground_consistent(lits: &[Literal]) -> bool {
    struct Graph {
        nodes: Vec<(Option<Sym>, Vec<usize>)>,
        ids: HashMap<Term, usize>,
        parent: Vec<usize>,
    }
    impl Graph {
        fn add(&mut self, t: &Term) -> usize {
            if let Some(&id) = self.ids.get(t) {
                return id;
            }
            let (head, args) = match t {
                Term::App(f, args) => (*f, args),
                Term::Var(_) => panic!("congruence closure expects ground literals"),
            };
            let kids: Vec<usize> = args.iter().map(|a| self.add(a)).collect();
            let id = self.nodes.len();
            self.nodes.push((Some(head), kids));
            self.parent.push(id);
            self.ids.insert(t.clone(), id);
            id
        }
        fn find(&mut self, mut x: usize) -> usize {
            while self.parent[x] != x {
                self.parent[x] = self.parent[self.parent[x]];
                x = self.parent[x];
            }
            x
        }
        fn union(&mut self, x: usize, y: usize) -> bool {
            let (rx, ry) = (self.find(x), self.find(y));
            if rx == ry {
                return false;
            }
            self.parent[rx] = ry;
            true
        }
    }
    let mut g = Graph {
        nodes: vec![(None, Vec::new())],
        ids: HashMap::new(),
        parent: vec![0],
    };
    let truth = 0;
    let mut equal = Vec::new();
    let mut distinct = Vec::new();
    for l in lits {
        let (x, y) = match &l.atom {
            Atom::Pred(p) => (g.add(p), truth),
            Atom::Eq(a, b) => (g.add(a), g.add(b)),
        };
        if l.positive {
            equal.push((x, y));
        } else {
            distinct.push((x, y));
        }
    }
    for (x, y) in equal {
        g.union(x, y);
    }
    loop {
        let mut changed = false;
        let n = g.nodes.len();
        for i in 0..n {
            for j in (i + 1)..n {
                let (hi, ki) = g.nodes[i].clone();
                let (hj, kj) = g.nodes[j].clone();
                if hi.is_none() || hi != hj || ki.len() != kj.len() {
                    continue;
                }
                if g.find(i) == g.find(j) {
                    continue;
                }
                if ki
                    .iter()
                    .zip(kj.iter())
                    .all(|(&a, &b)| g.find(a) == g.find(b))
                {
                    changed |= g.union(i, j);
                }
            }
        }
        if !changed {
            break;
        }
    }
    distinct.iter().all(|&(x, y)| g.find(x) != g.find(y))
}

/// Ground entailment `premises ⊨ conclusion`: every way of picking one
/// literal per premise, together with the negated conclusion, is
/// inconsistent.
pub fn entails(premises: &[&[Literal]], conclusion: &[Literal]) -> bool {
    fn go(premises: &[&[Literal]], chosen: &mut Vec<Literal>) -> bool {
        let Some((first, rest)) = premises.split_first() else {
            return !ground_consistent(chosen);
        };
        for l in first.iter() {
            chosen.push(l.clone());
            let ok = go(rest, chosen);
            chosen.pop();
            if !ok {
                return false;
            }
        }
        true
    }
    let mut chosen: Vec<Literal> = conclusion.iter().map(Literal::complement).collect();
    go(premises, &mut chosen)
}
