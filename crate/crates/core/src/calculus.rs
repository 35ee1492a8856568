//! Generating inferences of the superposition calculus.
//!
//! Every rule acts only on selected literals. The plain functions use the
//! clause's own selection; the `_at` variants take explicit selections. The
//! second premise of a binary rule is renamed apart by shifting its variables
//! past those of the first premise. `Inference::literals` records the literal
//! positions the rule acted on, one per premise (two for the unary
//! equality factoring).

use crate::clause::{Atom, Clause, Inference, Literal, Rule};
use crate::ordering::{compare_terms, OrderResult};
use crate::term::{unify_terms, Expression, Substitution, Term};

fn conclusion(literals: Vec<Literal>, rule: Rule, parents: &[&Clause], at: Vec<usize>) -> Clause {
    Clause::normalize(
        literals,
        Inference::new(rule, parents.iter().map(|c| c.id()).collect(), at),
    )
}

fn others(lits: &[Literal], skip: &[usize], sigma: &Substitution) -> Vec<Literal> {
    lits.iter()
        .enumerate()
        .filter(|(i, _)| !skip.contains(i))
        .map(|(_, l)| l.apply(sigma))
        .collect()
}

/// Both readings of an equation, or one if its sides coincide.
pub(crate) fn orientations<'a>(a: &'a Term, b: &'a Term) -> Vec<(&'a Term, &'a Term)> {
    if a == b {
        vec![(a, b)]
    } else {
        vec![(a, b), (b, a)]
    }
}

fn not_greater(a: &Term, b: &Term) -> bool {
    compare_terms(a, b) != OrderResult::Greater
}

pub fn resolution(c1: &Clause, c2: &Clause) -> Vec<Clause> {
    resolution_at(c1, c1.selected(), c2, c2.selected())
}

/// Resolves a selected positive non-equality literal of `c1` against a
/// selected negative non-equality literal of `c2`.
pub fn resolution_at(c1: &Clause, sel1: &[usize], c2: &Clause, sel2: &[usize]) -> Vec<Clause> {
    let lits2 = c2.shifted_literals(c1.var_count());
    let mut out = Vec::new();
    for &i in sel1 {
        let l = &c1.literals()[i];
        let Atom::Pred(p) = &l.atom else { continue };
        if !l.positive {
            continue;
        }
        for &j in sel2 {
            let m = &lits2[j];
            let Atom::Pred(q) = &m.atom else { continue };
            if m.positive {
                continue;
            }
            if let Some(sigma) = unify_terms(p, q) {
                let mut lits = others(c1.literals(), &[i], &sigma);
                lits.extend(others(&lits2, &[j], &sigma));
                out.push(conclusion(lits, Rule::Resolution, &[c1, c2], vec![i, j]));
            }
        }
    }
    out
}

pub fn factoring(c: &Clause) -> Vec<Clause> {
    factoring_at(c, c.selected())
}

/// Unifies two selected non-equality literals of equal polarity and keeps
/// the first of them.
pub fn factoring_at(c: &Clause, sel: &[usize]) -> Vec<Clause> {
    let lits = c.literals();
    let mut out = Vec::new();
    for (a, &i) in sel.iter().enumerate() {
        for &j in &sel[a + 1..] {
            let (l, m) = (&lits[i], &lits[j]);
            let (Atom::Pred(p), Atom::Pred(q)) = (&l.atom, &m.atom) else {
                continue;
            };
            if l.positive != m.positive {
                continue;
            }
            if let Some(sigma) = unify_terms(p, q) {
                out.push(conclusion(
                    others(lits, &[j], &sigma),
                    Rule::Factoring,
                    &[c],
                    vec![i, j],
                ));
            }
        }
    }
    out
}

pub fn superposition(c1: &Clause, c2: &Clause) -> Vec<Clause> {
    superposition_at(c1, c1.selected(), c2, c2.selected())
}

/// Rewrites a non-variable subterm `s'` of a selected literal of `c2` with a
/// selected positive equality `s = t` of `c1`, where `θ = mgu(s, s')` and
/// `tθ` is not greater than `sθ`. Into an equality `l[s'] ≃ l'` (of either
/// polarity) the side condition `l'θ ⊁ l[s']θ` applies as well.
pub fn superposition_at(c1: &Clause, sel1: &[usize], c2: &Clause, sel2: &[usize]) -> Vec<Clause> {
    let lits2 = c2.shifted_literals(c1.var_count());
    let mut out = Vec::new();
    for &i in sel1 {
        let eq = &c1.literals()[i];
        let (Some((a, b)), true) = (eq.sides(), eq.positive) else {
            continue;
        };
        for (s, t) in orientations(a, b) {
            for &j in sel2 {
                let target = &lits2[j];
                for (pos, sub) in target.positions() {
                    if sub.is_var() {
                        continue;
                    }
                    let Some(theta) = unify_terms(s, sub) else {
                        continue;
                    };
                    let s_theta = theta.apply_term(s);
                    let t_theta = theta.apply_term(t);
                    if !not_greater(&t_theta, &s_theta) {
                        continue;
                    }
                    if let Atom::Eq(..) = &target.atom {
                        let roots = target.root_terms();
                        let (l, other) = (roots[pos.root], roots[1 - pos.root]);
                        if !not_greater(&theta.apply_term(other), &theta.apply_term(l)) {
                            continue;
                        }
                    }
                    let rewritten = target.replace_at(&pos, t).apply(&theta);
                    let mut lits = vec![rewritten];
                    lits.extend(others(c1.literals(), &[i], &theta));
                    lits.extend(others(&lits2, &[j], &theta));
                    out.push(conclusion(lits, Rule::Superposition, &[c1, c2], vec![i, j]));
                }
            }
        }
    }
    out
}

pub fn equality_resolution(c: &Clause) -> Vec<Clause> {
    equality_resolution_at(c, c.selected())
}

/// Removes a selected disequation `s ≄ s'` whose sides unify.
pub fn equality_resolution_at(c: &Clause, sel: &[usize]) -> Vec<Clause> {
    let lits = c.literals();
    let mut out = Vec::new();
    for &i in sel {
        let l = &lits[i];
        let (Some((s, t)), false) = (l.sides(), l.positive) else {
            continue;
        };
        if let Some(theta) = unify_terms(s, t) {
            out.push(conclusion(
                others(lits, &[i], &theta),
                Rule::EqResolution,
                &[c],
                vec![i],
            ));
        }
    }
    out
}

pub fn equality_factoring(c: &Clause) -> Vec<Clause> {
    equality_factoring_at(c, c.selected())
}

/// From a selected `s ≃ t` and another positive equality `s' ≃ t'` with
/// `θ = mgu(s, s')`, `tθ ⊁ sθ` and `t'θ ⊁ tθ`, derives
/// `(s ≃ t ∨ t ≄ t' ∨ C)θ`.
pub fn equality_factoring_at(c: &Clause, sel: &[usize]) -> Vec<Clause> {
    let lits = c.literals();
    let mut out = Vec::new();
    for &i in sel {
        let first = &lits[i];
        let (Some((a, b)), true) = (first.sides(), first.positive) else {
            continue;
        };
        for (j, second) in lits.iter().enumerate() {
            if j == i || !second.is_positive_equality() {
                continue;
            }
            let (a2, b2) = second.sides().unwrap();
            for (s, t) in orientations(a, b) {
                for (s2, t2) in orientations(a2, b2) {
                    let Some(theta) = unify_terms(s, s2) else {
                        continue;
                    };
                    let (s_t, t_t, t2_t) = (
                        theta.apply_term(s),
                        theta.apply_term(t),
                        theta.apply_term(t2),
                    );
                    if !not_greater(&t_t, &s_t) || !not_greater(&t2_t, &t_t) {
                        continue;
                    }
                    let mut new_lits = Vec::with_capacity(lits.len());
                    for (k, l) in lits.iter().enumerate() {
                        if k == i {
                            new_lits.push(Literal::eq(true, s_t.clone(), t_t.clone()));
                            new_lits.push(Literal::eq(false, t_t.clone(), t2_t.clone()));
                        } else if k != j {
                            new_lits.push(l.apply(&theta));
                        }
                    }
                    out.push(conclusion(new_lits, Rule::EqFactoring, &[c], vec![i, j]));
                }
            }
        }
    }
    out
}

/// All unary inferences of `c`.
pub fn unary_inferences(c: &Clause) -> Vec<Clause> {
    let mut out = factoring(c);
    out.extend(equality_resolution(c));
    out.extend(equality_factoring(c));
    out
}

/// All binary inferences with `c1` as first and `c2` as second premise.
pub fn binary_inferences(c1: &Clause, c2: &Clause) -> Vec<Clause> {
    let mut out = resolution(c1, c2);
    out.extend(superposition(c1, c2));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matching::is_variant;
    use crate::test_support::*;

    fn has_variant(results: &[Clause], expected: &Clause) -> bool {
        results
            .iter()
            .any(|c| is_variant(c.literals(), expected.literals()))
    }

    #[test]
    fn unit_resolution() {
        let mut ctx = Ctx::new();
        let c1 = ctx.input("p(X)");
        let c2 = ctx.input("~p(c) | q(c)");
        let r = resolution(&c1, &c2);
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].literals(), ctx.input("q(c)").literals());
        assert_eq!(r[0].inference().parents, vec![c1.id(), c2.id()]);
    }

    #[test]
    fn resolution_without_unifiable_pair() {
        let mut ctx = Ctx::new();
        let c1 = ctx.input("p(c)");
        let c2 = ctx.input("~q(c)");
        assert!(resolution(&c1, &c2).is_empty());
    }

    #[test]
    fn resolution_instantiates_remaining_literals() {
        let mut ctx = Ctx::new();
        let c1 = ctx.input("p(f(X)) | r(X)");
        let c2 = ctx.input("~p(f(c))");
        let r = resolution(&c1, &c2);
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].literals(), ctx.input("r(c)").literals());
    }

    #[test]
    fn resolution_renames_apart() {
        let mut ctx = Ctx::new();
        let c1 = ctx.input("p(X, a) | q(X)");
        let c2 = ctx.input("~p(b, X) | r(X)");
        let r = resolution(&c1, &c2);
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].literals(), ctx.input("q(b) | r(a)").literals());
    }

    #[test]
    fn factoring_examples() {
        let mut ctx = Ctx::new();
        let c = ctx.input("p(X) | p(c)");
        let r = factoring(&c);
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].literals(), ctx.input("p(c)").literals());

        assert!(factoring(&ctx.input("p(c) | q(c)")).is_empty());

        let c = ctx.input("p(X) | p(Y) | r(X, Y)");
        let r = factoring_at(&c, &[0, 1]);
        assert_eq!(r.len(), 1);
        assert!(is_variant(
            r[0].literals(),
            ctx.input("p(Y) | r(Y, Y)").literals()
        ));
    }

    #[test]
    fn superposition_ground_rewrite() {
        let mut ctx = Ctx::new();
        let c1 = ctx.input("f(c) = c");
        let c2 = ctx.input("p(f(c))");
        let r = superposition(&c1, &c2);
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].literals(), ctx.input("p(c)").literals());
    }

    #[test]
    fn superposition_into_equality() {
        let mut ctx = Ctx::new();
        let c1 = ctx.input("f(X) = X");
        let c2 = ctx.input("g(f(c)) = d | q(c)");
        let r = superposition_at(&c1, &[0], &c2, &[0, 1]);
        assert!(has_variant(&r, &ctx.input("g(c) = d | q(c)")), "{r:?}");
    }

    #[test]
    fn superposition_never_into_variables() {
        let mut ctx = Ctx::new();
        let c1 = ctx.input("c = d");
        let c2 = ctx.input("p(X)");
        assert!(superposition(&c1, &c2).is_empty());
    }

    #[test]
    fn superposition_respects_orientation() {
        let mut ctx = Ctx::new();
        // f(c) ≻ c, so the equation may only rewrite f(c) into c
        let c1 = ctx.input("f(c) = c");
        let c2 = ctx.input("p(c)");
        assert!(superposition(&c1, &c2).is_empty());
    }

    #[test]
    fn equality_resolution_examples() {
        let mut ctx = Ctx::new();
        let r = equality_resolution(&ctx.input("c != c | p(c)"));
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].literals(), ctx.input("p(c)").literals());

        let c = ctx.input("f(X) != f(c) | q(X)");
        let r = equality_resolution(&c);
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].literals(), ctx.input("q(c)").literals());

        assert!(equality_resolution(&ctx.input("c != d")).is_empty());
    }

    #[test]
    fn equality_factoring_examples() {
        let mut ctx = Ctx::new();
        let c = ctx.input("f(c) = c | f(c) = d");
        let r = equality_factoring(&c);
        assert!(has_variant(&r, &ctx.input("f(c) = c | c != d")), "{r:?}");
        assert_eq!(r.len(), 1);

        assert!(equality_factoring(&ctx.input("f(c) = c | q(d)")).is_empty());
    }

    #[test]
    fn equality_factoring_with_variable_sides_matches_schema() {
        let mut ctx = Ctx::new();
        let c = ctx.input("X = c | Y = d");
        let r = equality_factoring(&c);
        // brute-force application of the schema
        let lits = c.literals();
        let mut expected = Vec::new();
        for &i in c.selected() {
            for j in 0..2 {
                if i == j {
                    continue;
                }
                let (a, b) = lits[i].sides().unwrap();
                let (a2, b2) = lits[j].sides().unwrap();
                for (s, t) in [(a, b), (b, a)] {
                    for (s2, t2) in [(a2, b2), (b2, a2)] {
                        if let Some(th) = unify_terms(s, s2) {
                            let (s_, t_, t2_) =
                                (th.apply_term(s), th.apply_term(t), th.apply_term(t2));
                            if compare_terms(&t_, &s_) != OrderResult::Greater
                                && compare_terms(&t2_, &t_) != OrderResult::Greater
                            {
                                expected.push(vec![
                                    Literal::eq(true, s_.clone(), t_.clone()),
                                    Literal::eq(false, t_, t2_),
                                ]);
                            }
                        }
                    }
                }
            }
        }
        assert_eq!(r.len(), expected.len());
        for e in &expected {
            assert!(r.iter().any(|c| is_variant(c.literals(), e)));
        }
    }

    #[test]
    fn conclusions_record_selected_positions() {
        let mut ctx = Ctx::new();
        let c1 = ctx.input("f(X) = X | p(X)");
        let c2 = ctx.input("~q(a) | r(f(b))");
        for concl in superposition(&c1, &c2)
            .iter()
            .chain(resolution(&c1, &c2).iter())
        {
            let at = &concl.inference().literals;
            assert!(c1.selected().contains(&at[0]));
            assert!(c2.selected().contains(&at[1]));
        }
    }
}
