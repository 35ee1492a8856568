//! Knuth-Bendix ordering on terms and its extensions to literals and clauses.
//!
//! Every symbol and every variable weighs 1. Precedence puts symbols of higher
//! arity first; among symbols of equal arity the one declared earlier is
//! greater. Predicate atoms are compared as terms with the predicate as head.

use std::cmp::Ordering;

use crate::clause::{Atom, Literal};
use crate::term::{Sym, Term, Var};

const SYMBOL_WEIGHT: i64 = 1;
const VARIABLE_WEIGHT: i64 = 1;

/// Outcome of comparing two values under a partial ordering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OrderResult {
    Greater,
    Less,
    Equal,
    Incomparable,
}

impl OrderResult {
    pub fn reverse(self) -> OrderResult {
        match self {
            OrderResult::Greater => OrderResult::Less,
            OrderResult::Less => OrderResult::Greater,
            other => other,
        }
    }

    pub fn is_greater(self) -> bool {
        self == OrderResult::Greater
    }
}

/// Symbol precedence: higher arity first, then earlier declaration.
#[derive(Debug, Clone, Copy, Default)]
pub struct Precedence;

impl Precedence {
    pub fn compare(&self, f: Sym, f_arity: usize, g: Sym, g_arity: usize) -> Ordering {
        f_arity.cmp(&g_arity).then_with(|| g.0.cmp(&f.0))
    }
}

#[derive(Default)]
struct VarBalance(Vec<(Var, i64)>);

impl VarBalance {
    fn add(&mut self, v: Var, delta: i64) {
        match self.0.iter_mut().find(|(w, _)| *w == v) {
            Some((_, n)) => *n += delta,
            None => self.0.push((v, delta)),
        }
    }

    fn all_nonneg(&self) -> bool {
        self.0.iter().all(|(_, n)| *n >= 0)
    }

    fn all_nonpos(&self) -> bool {
        self.0.iter().all(|(_, n)| *n <= 0)
    }
}

fn weigh(t: &Term, sign: i64, balance: &mut VarBalance) -> i64 {
    match t {
        Term::Var(v) => {
            balance.add(*v, sign);
            VARIABLE_WEIGHT
        }
        Term::App(_, args) => {
            SYMBOL_WEIGHT + args.iter().map(|a| weigh(a, sign, balance)).sum::<i64>()
        }
    }
}

pub fn compare_terms(s: &Term, t: &Term) -> OrderResult {
    if s == t {
        return OrderResult::Equal;
    }
    match (s, t) {
        (Term::Var(x), _) => {
            if t.contains_var(*x) {
                OrderResult::Less
            } else {
                OrderResult::Incomparable
            }
        }
        (_, Term::Var(y)) => {
            if s.contains_var(*y) {
                OrderResult::Greater
            } else {
                OrderResult::Incomparable
            }
        }
        (Term::App(f, sa), Term::App(g, ta)) => {
            let mut balance = VarBalance::default();
            let ws = weigh(s, 1, &mut balance);
            let wt = weigh(t, -1, &mut balance);
            let s_dominates = balance.all_nonneg();
            let t_dominates = balance.all_nonpos();
            let decide = |r: OrderResult| match r {
                OrderResult::Greater if s_dominates => OrderResult::Greater,
                OrderResult::Less if t_dominates => OrderResult::Less,
                _ => OrderResult::Incomparable,
            };
            match ws.cmp(&wt) {
                Ordering::Greater => decide(OrderResult::Greater),
                Ordering::Less => decide(OrderResult::Less),
                Ordering::Equal => match Precedence.compare(*f, sa.len(), *g, ta.len()) {
                    Ordering::Greater => decide(OrderResult::Greater),
                    Ordering::Less => decide(OrderResult::Less),
                    Ordering::Equal => {
                        let first_diff = sa
                            .iter()
                            .zip(ta.iter())
                            .map(|(a, b)| compare_terms(a, b))
                            .find(|r| *r != OrderResult::Equal)
                            .unwrap_or(OrderResult::Equal);
                        decide(first_diff)
                    }
                },
            }
        }
    }
}

/// True iff the two sides are strictly comparable.
pub fn is_oriented(l: &Term, r: &Term) -> bool {
    matches!(
        compare_terms(l, r),
        OrderResult::Greater | OrderResult::Less
    )
}

/// Multiset extension of `cmp`: shared elements cancel, then the remainder of
/// one side must dominate every leftover element of the other side.
pub fn multiset_compare<T>(m: &[T], n: &[T], cmp: impl Fn(&T, &T) -> OrderResult) -> OrderResult {
    let mut n_used = vec![false; n.len()];
    let mut m_rest: Vec<&T> = Vec::new();
    for x in m {
        match (0..n.len()).find(|&j| !n_used[j] && cmp(x, &n[j]) == OrderResult::Equal) {
            Some(j) => n_used[j] = true,
            None => m_rest.push(x),
        }
    }
    let n_rest: Vec<&T> = n
        .iter()
        .zip(&n_used)
        .filter(|(_, used)| !**used)
        .map(|(y, _)| y)
        .collect();

    if m_rest.is_empty() && n_rest.is_empty() {
        return OrderResult::Equal;
    }

    let table: Vec<Vec<OrderResult>> = m_rest
        .iter()
        .map(|x| n_rest.iter().map(|y| cmp(x, y)).collect())
        .collect();

    let m_greater = !m_rest.is_empty()
        && (0..n_rest.len())
            .all(|j| (0..m_rest.len()).any(|i| table[i][j] == OrderResult::Greater));
    if m_greater {
        return OrderResult::Greater;
    }
    let n_greater = !n_rest.is_empty()
        && (0..m_rest.len()).all(|i| (0..n_rest.len()).any(|j| table[i][j] == OrderResult::Less));
    if n_greater {
        return OrderResult::Less;
    }
    OrderResult::Incomparable
}

/// Literal ordering: non-equality literals sit above equality literals;
/// predicate literals compare by atom, then negative above positive;
/// `s ≃ t` is the multiset `{s, t}` and `s ≄ t` the multiset `{s, s, t, t}`.
pub fn compare_literals(a: &Literal, b: &Literal) -> OrderResult {
    match (&a.atom, &b.atom) {
        (Atom::Pred(_), Atom::Eq(..)) => OrderResult::Greater,
        (Atom::Eq(..), Atom::Pred(_)) => OrderResult::Less,
        (Atom::Pred(p), Atom::Pred(q)) => match compare_terms(p, q) {
            OrderResult::Equal => match (a.positive, b.positive) {
                (false, true) => OrderResult::Greater,
                (true, false) => OrderResult::Less,
                _ => OrderResult::Equal,
            },
            r => r,
        },
        (Atom::Eq(s, t), Atom::Eq(u, v)) => {
            let enc = |pos: bool, l: &Term, r: &Term| -> Vec<Term> {
                if pos {
                    vec![l.clone(), r.clone()]
                } else {
                    vec![l.clone(), l.clone(), r.clone(), r.clone()]
                }
            };
            multiset_compare(
                &enc(a.positive, s, t),
                &enc(b.positive, u, v),
                compare_terms,
            )
        }
    }
}

pub fn compare_clauses(c1: &[Literal], c2: &[Literal]) -> OrderResult {
    multiset_compare(c1, c2, compare_literals)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::test_support::*;

    #[test]
    fn subterm_property_example() {
        let mut ctx = Ctx::new();
        let s = ctx.term("f(g(c))");
        let t = ctx.term("g(c)");
        assert_eq!(compare_terms(&s, &t), OrderResult::Greater);
        assert_eq!(compare_terms(&t, &s), OrderResult::Less);
    }

    #[test]
    fn different_variables_make_terms_incomparable() {
        let mut ctx = Ctx::new();
        let s = ctx.term("f(g(X))");
        let t = ctx.term("g(Y)");
        assert_eq!(compare_terms(&s, &t), OrderResult::Incomparable);
        let x = ctx.term("X");
        assert_eq!(compare_terms(&x, &x), OrderResult::Equal);
    }

    #[test]
    fn orientation() {
        let mut ctx = Ctx::new();
        assert!(is_oriented(&ctx.term("f(g(X))"), &ctx.term("g(X)")));
        assert!(!is_oriented(&ctx.term("f(g(c))"), &ctx.term("g(Z)")));
        assert!(!is_oriented(&ctx.term("c"), &ctx.term("c")));
    }

    #[test]
    fn precedence_prefers_earlier_symbols_of_equal_arity() {
        let mut ctx = Ctx::new();
        // f declared before g
        let fi = ctx.term("f(I)");
        let gi = ctx.term("g(I)");
        assert_eq!(compare_terms(&fi, &gi), OrderResult::Greater);
        // higher arity wins at equal weight
        let h = ctx.term("h(a,b)");
        let k = ctx.term("k(k(a))");
        assert_eq!(compare_terms(&h, &k), OrderResult::Greater);
    }

    #[test]
    fn literal_layers() {
        let mut ctx = Ctx::new();
        let p = ctx.lit("p(f(g(c)))");
        let e = ctx.lit("f(g(c)) = g(c)");
        assert_eq!(compare_literals(&p, &e), OrderResult::Greater);
        let np = ctx.lit("~q(c)");
        let pp = ctx.lit("q(c)");
        assert_eq!(compare_literals(&np, &pp), OrderResult::Greater);
        let ne = ctx.lit("a != b");
        let pe = ctx.lit("a = b");
        assert_eq!(compare_literals(&ne, &pe), OrderResult::Greater);
        let sym = ctx.lit("b = a");
        assert_eq!(compare_literals(&pe, &sym), OrderResult::Equal);
    }

    #[test]
    fn demodulation_condition_example() {
        let mut ctx = Ctx::new();
        let main = ctx.clause("p(f(f(c))) | q(d)");
        let eq = ctx.clause("f(f(c)) = f(c)");
        assert_eq!(compare_clauses(&main, &eq), OrderResult::Greater);
    }

    #[test]
    fn clause_multiset_extension() {
        let mut ctx = Ctx::new();
        let c1 = ctx.clause("p(f(g(c))) | q(c) | q(d) | r(f(g(d)))");
        let c2 = ctx.clause("f(g(c)) = g(c) | q(c) | r(f(g(d)))");
        assert_eq!(compare_clauses(&c1, &c2), OrderResult::Greater);
        assert_eq!(compare_clauses(&c1, &c1), OrderResult::Equal);
        let a = ctx.clause("p(c) | q(c)");
        let b = ctx.clause("p(c)");
        assert_eq!(compare_clauses(&a, &b), OrderResult::Greater);
        assert_eq!(compare_clauses(&b, &a), OrderResult::Less);
    }

    #[test]
    fn multiset_keeps_duplicates() {
        let mut ctx = Ctx::new();
        let two = ctx.clause("p(c) | p(c)");
        let one = ctx.clause("p(c)");
        assert_eq!(compare_clauses(&two, &one), OrderResult::Greater);
    }
}
