//! Multi-literal matching: subsumption and the matcher behind subsumption
//! demodulation.
//!
//! A solution maps the literals of a side clause `C` injectively onto
//! literal occurrences of a main clause `D` with one common substitution.
//! In rewriting mode exactly one positive equality of `C` is instead set
//! aside as the rewriting equality and left unmatched. Only `C` is
//! instantiated; the variables of `D` behave as constants, so the two clauses
//! must not share variables.

use crate::clause::{Atom, Clause, Literal};
use crate::term::{match_into, match_term, Substitution};

/// One solution of multi-literal matching.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MlMatch {
    /// Position in `C` of the rewriting equality (`None` in subsumption mode).
    pub rewriting_equality: Option<usize>,
    /// Substitution matching `C` minus the rewriting equality into `D`.
    pub subst: Substitution,
    /// `(position in C, position in D)` for every matched literal, ordered
    /// by position in `C`.
    pub assignment: Vec<(usize, usize)>,
}

impl MlMatch {
    /// Positions of `D` consumed by the match, ascending.
    pub fn matched_image(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.assignment.iter().map(|&(_, j)| j).collect();
        v.sort_unstable();
        v
    }
}

/// All ways `pattern` matches `target` extending `base`; equations are tried
/// in both orientations and duplicate results dropped.
pub fn match_literal(
    pattern: &Literal,
    target: &Literal,
    base: &Substitution,
) -> Vec<Substitution> {
    if pattern.positive != target.positive {
        return Vec::new();
    }
    match (&pattern.atom, &target.atom) {
        (Atom::Pred(p), Atom::Pred(q)) => match_term(p, q, base).into_iter().collect(),
        (Atom::Eq(a, b), Atom::Eq(c, d)) => {
            let mut out: Vec<Substitution> = Vec::with_capacity(2);
            for (x, y) in [(c, d), (d, c)] {
                let mut s = base.clone();
                if match_into(a, x, &mut s) && match_into(b, y, &mut s) && !out.contains(&s) {
                    out.push(s);
                }
            }
            out
        }
        _ => Vec::new(),
    }
}

#[derive(Debug, Clone)]
enum Alt {
    Rewrite,
    Match { target: usize, subst: Substitution },
}

#[derive(Debug)]
struct Frame {
    alts: Vec<Alt>,
    next: usize,
}

/// Resumable enumeration of multi-literal matches of `side` into `main`.
///
/// Side literals are visited by decreasing weight (ties leftmost). At each
/// step a positive equality may be taken as the rewriting equality instead of
/// being matched. Every solution is produced exactly once.
pub struct MatchCursor<'a> {
    side: &'a [Literal],
    main: &'a [Literal],
    order: Vec<usize>,
    rewriting: bool,
    limit: Option<usize>,
    emitted: usize,
    stack: Vec<Frame>,
    started: bool,
    done: bool,
}

impl<'a> MatchCursor<'a> {
    /// Enumerates matches in rewriting mode (one equality set aside).
    pub fn rewriting(side: &'a [Literal], main: &'a [Literal], limit: Option<usize>) -> Self {
        Self::new(side, main, true, limit)
    }

    /// Enumerates plain subsumption matches.
    pub fn subsumption(side: &'a [Literal], main: &'a [Literal]) -> Self {
        Self::new(side, main, false, None)
    }

    fn new(
        side: &'a [Literal],
        main: &'a [Literal],
        rewriting: bool,
        limit: Option<usize>,
    ) -> Self {
        let mut order: Vec<usize> = (0..side.len()).collect();
        order.sort_by(|&a, &b| side[b].weight().cmp(&side[a].weight()));
        let matched = side.len().saturating_sub(usize::from(rewriting));
        let impossible =
            (rewriting && !side.iter().any(Literal::is_positive_equality)) || matched > main.len();
        MatchCursor {
            side,
            main,
            order,
            rewriting,
            limit,
            emitted: 0,
            stack: Vec::new(),
            started: false,
            done: impossible,
        }
    }

    /// Substitution, used targets and rewriting choice along the current path.
    fn state(&self) -> (Substitution, Vec<bool>, Option<usize>) {
        let mut subst = Substitution::new();
        let mut used = vec![false; self.main.len()];
        let mut rewrite = None;
        for (depth, frame) in self.stack.iter().enumerate() {
            match &frame.alts[frame.next - 1] {
                Alt::Rewrite => rewrite = Some(self.order[depth]),
                Alt::Match { target, subst: s } => {
                    used[*target] = true;
                    subst = s.clone();
                }
            }
        }
        (subst, used, rewrite)
    }

    fn frame_for(&self, depth: usize) -> Frame {
        let (subst, used, rewrite) = if depth == 0 {
            (Substitution::new(), vec![false; self.main.len()], None)
        } else {
            self.state()
        };
        let lit = &self.side[self.order[depth]];
        let mut alts = Vec::new();
        let rest = &self.order[depth + 1..];
        let must_rewrite_here = self.rewriting
            && rewrite.is_none()
            && !rest.iter().any(|&i| self.side[i].is_positive_equality());
        if self.rewriting && rewrite.is_none() && lit.is_positive_equality() {
            alts.push(Alt::Rewrite);
        }
        if !must_rewrite_here {
            for (j, target) in self.main.iter().enumerate() {
                if used[j] {
                    continue;
                }
                for s in match_literal(lit, target, &subst) {
                    alts.push(Alt::Match {
                        target: j,
                        subst: s,
                    });
                }
            }
        }
        Frame { alts, next: 0 }
    }

    fn solution(&self) -> MlMatch {
        let mut assignment = Vec::new();
        let mut subst = Substitution::new();
        let mut rewriting_equality = None;
        for (depth, frame) in self.stack.iter().enumerate() {
            match &frame.alts[frame.next - 1] {
                Alt::Rewrite => rewriting_equality = Some(self.order[depth]),
                Alt::Match { target, subst: s } => {
                    assignment.push((self.order[depth], *target));
                    subst = s.clone();
                }
            }
        }
        assignment.sort_unstable();
        MlMatch {
            rewriting_equality,
            subst,
            assignment,
        }
    }
}

impl Iterator for MatchCursor<'_> {
    type Item = MlMatch;

    fn next(&mut self) -> Option<MlMatch> {
        if self.done || self.limit.is_some_and(|l| self.emitted >= l) {
            return None;
        }
        if !self.started {
            self.started = true;
            if self.side.is_empty() {
                self.done = true;
                if self.rewriting {
                    return None;
                }
                self.emitted += 1;
                return Some(MlMatch {
                    rewriting_equality: None,
                    subst: Substitution::new(),
                    assignment: Vec::new(),
                });
            }
            let f = self.frame_for(0);
            self.stack.push(f);
        }
        loop {
            let Some(top) = self.stack.last_mut() else {
                self.done = true;
                return None;
            };
            if top.next >= top.alts.len() {
                self.stack.pop();
                continue;
            }
            top.next += 1;
            let depth = self.stack.len();
            if depth == self.side.len() {
                self.emitted += 1;
                return Some(self.solution());
            }
            let f = self.frame_for(depth);
            self.stack.push(f);
        }
    }
}

/// Convenience wrapper over [`MatchCursor::rewriting`].
pub fn find_ml_matches(side: &[Literal], main: &[Literal], limit: Option<usize>) -> Vec<MlMatch> {
    MatchCursor::rewriting(side, main, limit).collect()
}

/// `∃σ. cσ ⊆_M d` for literal lists with disjoint variables.
pub fn subsumes_literals(c: &[Literal], d: &[Literal]) -> bool {
    c.len() <= d.len() && MatchCursor::subsumption(c, d).next().is_some()
}

/// Clause-level subsumption; `c` is renamed apart from `d` first.
pub fn subsumes(c: &Clause, d: &Clause) -> bool {
    if c.len() > d.len() {
        return false;
    }
    let shifted = c.shifted_literals(d.var_count());
    subsumes_literals(&shifted, d.literals())
}

/// True if the two literal lists are equal as multisets up to a renaming of
/// variables.
pub fn is_variant(a: &[Literal], b: &[Literal]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let offset = b
        .iter()
        .flat_map(|l| {
            let mut vs = Vec::new();
            l.collect_vars(&mut vs);
            vs
        })
        .map(|v| v.0 + 1)
        .max()
        .unwrap_or(0);
    let a_shifted: Vec<Literal> = a.iter().map(|l| l.shift_vars(offset)).collect();
    MatchCursor::subsumption(&a_shifted, b).any(|m| is_renaming(&m.subst))
}

fn is_renaming(s: &Substitution) -> bool {
    let mut images = Vec::new();
    for (_, t) in s.iter() {
        match t.as_var() {
            Some(v) if !images.contains(&v) => images.push(v),
            _ => return false,
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::{Expression, Term, Var};
    use crate::test_support::*;

    #[test]
    fn partial_substitution_of_the_rewriting_match() {
        let mut ctx = Ctx::new();
        let side = ctx.clause("f(X, Y) = Y | q(X)");
        let main = ctx.clause("p(f(c, d)) | q(c)");
        let m = MatchCursor::rewriting(&side, &main, None).next().unwrap();
        assert_eq!(m.rewriting_equality, Some(0));
        let x = ctx.term("X").as_var().unwrap();
        assert_eq!(m.subst, Substitution::from_pairs([(x, ctx.term("c"))]));
        assert_eq!(m.assignment, vec![(1, 1)]);
    }

    #[test]
    fn no_match_when_main_has_a_variable_where_side_has_a_constant() {
        let mut ctx = Ctx::new();
        let side = ctx.clause("f(c) = c | q(d)");
        let main = ctx.clause("p(f(c)) | q(X)");
        assert!(MatchCursor::rewriting(&side, &main, None).next().is_none());
    }

    #[test]
    fn multi_literal_match_binds_all_residual_variables() {
        let mut ctx = Ctx::new();
        let side = ctx.clause("f(g(X)) = g(X) | q(X) | r(Y)");
        let main = ctx.clause("p(f(g(c))) | q(c) | q(d) | r(f(g(d)))");
        let sols: Vec<MlMatch> = MatchCursor::rewriting(&side, &main, None).collect();
        let expected = Substitution::from_pairs([
            (ctx.term("X").as_var().unwrap(), ctx.term("c")),
            (ctx.term("Y").as_var().unwrap(), ctx.term("f(g(d))")),
        ]);
        assert!(sols
            .iter()
            .any(|m| m.subst == expected && m.rewriting_equality == Some(0)));
        for m in &sols {
            let image = m.matched_image();
            for &(i, j) in &m.assignment {
                assert_eq!(side[i].apply(&m.subst), main[j]);
            }
            let mut dedup = image.clone();
            dedup.dedup();
            assert_eq!(dedup, image);
        }
    }

    #[test]
    fn enumeration_is_duplicate_free() {
        let mut ctx = Ctx::new();
        let side = ctx.clause("X = Y | p(X)");
        let main = ctx.clause("a = a | p(a) | p(a)");
        let sols: Vec<MlMatch> = MatchCursor::rewriting(&side, &main, None).collect();
        for (i, a) in sols.iter().enumerate() {
            for b in &sols[i + 1..] {
                assert_ne!(a, b);
            }
        }
        // equality set aside with p(X) onto either occurrence, or the
        // equality matched (once: both orientations coincide) with nothing to
        // set aside
        assert_eq!(sols.len(), 2);
    }

    #[test]
    fn limit_caps_solutions() {
        let mut ctx = Ctx::new();
        let side = ctx.clause("f(X) = X | p(Y)");
        let main = ctx.clause("p(a) | p(b) | p(c)");
        assert_eq!(MatchCursor::rewriting(&side, &main, None).count(), 3);
        assert_eq!(MatchCursor::rewriting(&side, &main, Some(2)).count(), 2);
    }

    #[test]
    fn subsumption_examples() {
        let mut ctx = Ctx::new();
        let c = ctx.input("p(X) | q(f(X))");
        let d = ctx.input("p(f(c)) | p(g(c)) | q(f(c)) | q(f(g(c))) | r(Y)");
        assert!(subsumes(&c, &d));

        let c = ctx.input("s(X, Y) | t(X, Y)");
        let d = ctx.input("s(c, d) | t(c, Z)");
        assert!(!subsumes(&c, &d));

        let c = ctx.input("p(X) | ~u(X, a)");
        assert!(subsumes(&c, &c));
    }

    #[test]
    fn subsumption_is_multiset_inclusion() {
        let mut ctx = Ctx::new();
        let c = ctx.input("p(X) | p(Y)");
        let d = ctx.input("p(a)");
        assert!(!subsumes(&c, &d));
        let d = ctx.input("p(a) | p(a)");
        assert!(subsumes(&c, &d));
    }

    #[test]
    fn variants() {
        let mut ctx = Ctx::new();
        let a = ctx.clause("p(X, Y) | q(Y)");
        let b = ctx.clause("q(Z) | p(W, Z)");
        assert!(is_variant(&a, &b));
        let c = ctx.clause("p(Z, Z) | q(Z)");
        assert!(!is_variant(&a, &c));
        let x = Var(0);
        assert!(is_renaming(&Substitution::from_pairs([(x, Term::var(3))])));
    }
}
