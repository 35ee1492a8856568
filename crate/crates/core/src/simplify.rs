//! Simplification and deletion: demodulation, subsumption, and forward and
//! backward subsumption demodulation.
//!
//! Subsumption demodulation with side premise `C = l ≃ r ∨ C'` and main
//! premise `D = L[t] ∨ D''` rewrites `t` to `rσ` when `lσ = t`, `C'σ ⊆_M D`
//! outside `L[t]`, `lσ ≻ rσ`, and the literals of `D` left after removing
//! `C'σ` are greater than `(l ≃ r)σ` as a multiset. Both readings of the
//! equation are tried. One occurrence is rewritten per step; occurrences are
//! scanned literal by literal, outermost first.

use std::ops::ControlFlow;
use std::sync::Arc;

use crate::calculus::orientations;
use crate::clause::{Clause, ClauseId, Inference, Literal, LiteralPos, Rule};
use crate::index::{BackwardIndex, FsdIndex, UnitEqualityIndex};
use crate::matching::{subsumes, MatchCursor, MlMatch};
use crate::ordering::{compare_clauses, compare_literals, compare_terms, OrderResult};
use crate::term::{match_term, Substitution, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    LeftToRight,
    RightToLeft,
}

/// One rewrite of a main premise by a (conditional) equation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RewriteStep {
    pub side_premise: ClauseId,
    /// Position of the rewriting equality in the side premise.
    pub rewriting_equality: usize,
    pub orientation: Orientation,
    pub target_literal: usize,
    pub target_occurrence: LiteralPos,
    /// Over the side premise's variables shifted past the main premise's.
    pub subst: Substitution,
    /// Positions of the main premise matched by the side premise's other
    /// literals.
    pub matched_image: Vec<usize>,
}

/// A simplified clause together with the step that produced it.
#[derive(Debug)]
pub struct Rewrite {
    pub clause: Clause,
    pub step: RewriteStep,
}

#[derive(Debug)]
#[allow(clippy::large_enum_variant)]
pub enum SimplifyOutcome {
    Unchanged,
    Replaced {
        new_clause: Clause,
        step: RewriteStep,
        deleted: ClauseId,
    },
    Deleted {
        by: ClauseId,
    },
}

/// A candidate rewrite before its ordering conditions are checked.
#[derive(Debug, Clone)]
pub struct SdCandidate {
    pub ml_match: MlMatch,
    pub orientation: Orientation,
    pub target_literal: usize,
    pub target_occurrence: LiteralPos,
    pub subst: Substitution,
    /// `lσ` (equal to the rewritten occurrence `t`) and `rσ`.
    pub l_sigma: Term,
    pub r_sigma: Term,
}

/// Enumerates candidate rewrites of `main` by `side` in search order: match
/// by match, then literal, occurrence and orientation. `side` must already be
/// renamed apart from `main`. Stops when `f` breaks.
pub fn for_each_sd_candidate<R>(
    side: &[Literal],
    main: &[Literal],
    limit: Option<usize>,
    mut f: impl FnMut(SdCandidate) -> ControlFlow<R>,
) -> Option<R> {
    for m in MatchCursor::rewriting(side, main, limit) {
        let eq_pos = m
            .rewriting_equality
            .expect("rewriting mode sets the equality");
        let (a, b) = side[eq_pos]
            .sides()
            .expect("rewriting equality is an equation");
        let image = m.matched_image();
        for (i, lit) in main.iter().enumerate() {
            if image.binary_search(&i).is_ok() {
                continue;
            }
            for (pos, t) in lit.positions() {
                for (l, r) in orientations(a, b) {
                    let Some(sigma) = match_term(l, t, &m.subst) else {
                        continue;
                    };
                    let orientation = if std::ptr::eq(l, a) {
                        Orientation::LeftToRight
                    } else {
                        Orientation::RightToLeft
                    };
                    let cand = SdCandidate {
                        ml_match: m.clone(),
                        orientation,
                        target_literal: i,
                        target_occurrence: pos.clone(),
                        l_sigma: t.clone(),
                        r_sigma: sigma.apply_term(r),
                        subst: sigma,
                    };
                    if let ControlFlow::Break(res) = f(cand) {
                        return Some(res);
                    }
                }
            }
        }
    }
    None
}

/// `lσ ≻ rσ` and the redundancy condition on the literals of `main` outside
/// `matched_image`.
pub fn check_ordering_conditions(
    main: &[Literal],
    l_sigma: &Term,
    r_sigma: &Term,
    t: &Term,
    matched_image: &[usize],
) -> bool {
    debug_assert_eq!(l_sigma, t);
    if compare_terms(l_sigma, r_sigma) != OrderResult::Greater {
        return false;
    }
    let rest: Vec<&Literal> = main
        .iter()
        .enumerate()
        .filter(|(i, _)| !matched_image.contains(i))
        .map(|(_, l)| l)
        .collect();
    redundancy_condition(&rest, &Literal::eq(true, l_sigma.clone(), r_sigma.clone()))
}

/// `rest ≻ {e}` under the multiset extension: some literal of `rest` is
/// greater than `e`, or `e` occurs in `rest` next to at least one other
/// literal.
pub fn redundancy_condition(rest: &[&Literal], e: &Literal) -> bool {
    rest.iter()
        .any(|m| compare_literals(m, e) == OrderResult::Greater)
        || (rest.len() >= 2 && rest.contains(&e))
}

/// Replaces the single occurrence named by `step` with `rσ`.
pub fn build_simplified_clause(
    main: &Clause,
    step: &RewriteStep,
    r_sigma: &Term,
    rule: Rule,
) -> Clause {
    let mut lits = main.literals().to_vec();
    lits[step.target_literal] =
        lits[step.target_literal].replace_at(&step.target_occurrence, r_sigma);
    Clause::normalize(
        lits,
        Inference::new(
            rule,
            vec![main.id(), step.side_premise],
            vec![step.target_literal, step.rewriting_equality],
        ),
    )
}

fn rewrite_from(side: &Clause, main: &Clause, cand: &SdCandidate, rule: Rule) -> Rewrite {
    let step = RewriteStep {
        side_premise: side.id(),
        rewriting_equality: cand.ml_match.rewriting_equality.unwrap(),
        orientation: cand.orientation,
        target_literal: cand.target_literal,
        target_occurrence: cand.target_occurrence.clone(),
        subst: cand.subst.clone(),
        matched_image: cand.ml_match.matched_image(),
    };
    Rewrite {
        clause: build_simplified_clause(main, &step, &cand.r_sigma, rule),
        step,
    }
}

/// Pair-level subsumption demodulation: the first valid rewrite of `main`
/// with side premise `side`, recorded under `rule` (`Fsd` or `Bsd`).
pub fn subsumption_demodulation(
    side: &Clause,
    main: &Clause,
    limit: Option<usize>,
    rule: Rule,
) -> Option<Rewrite> {
    let shifted = side.shifted_literals(main.var_count());
    for_each_sd_candidate(&shifted, main.literals(), limit, |cand| {
        let image = cand.ml_match.matched_image();
        if check_ordering_conditions(
            main.literals(),
            &cand.l_sigma,
            &cand.r_sigma,
            &cand.l_sigma,
            &image,
        ) {
            ControlFlow::Break(rewrite_from(side, main, &cand, rule))
        } else {
            ControlFlow::Continue(())
        }
    })
}

/// Every valid subsumption demodulation rewrite of `main` by `side`.
pub fn all_subsumption_demodulations(side: &Clause, main: &Clause, rule: Rule) -> Vec<Rewrite> {
    let shifted = side.shifted_literals(main.var_count());
    let mut out = Vec::new();
    for_each_sd_candidate::<()>(&shifted, main.literals(), None, |cand| {
        let image = cand.ml_match.matched_image();
        if check_ordering_conditions(
            main.literals(),
            &cand.l_sigma,
            &cand.r_sigma,
            &cand.l_sigma,
            &image,
        ) {
            out.push(rewrite_from(side, main, &cand, rule));
        }
        ControlFlow::Continue(())
    });
    out
}

/// Forward subsumption demodulation of `d` by the side premises in `ix`; the
/// first applicable one in insertion order wins.
pub fn forward_subsumption_demodulation(
    d: &Clause,
    ix: &FsdIndex,
    limit: Option<usize>,
) -> Option<Rewrite> {
    ix.retrieve_fsd_candidates(d.literals())
        .into_iter()
        .filter(|c| c.id() != d.id())
        .find_map(|c| subsumption_demodulation(&c, d, limit, Rule::Fsd))
}

/// Backward subsumption demodulation: every active clause that `c` can
/// rewrite, with its replacement.
pub fn backward_subsumption_demodulation(
    c: &Clause,
    active: &BackwardIndex,
    limit: Option<usize>,
) -> Vec<(Arc<Clause>, Rewrite)> {
    if c.len() < 2 || !c.has_positive_equality() {
        return Vec::new();
    }
    active
        .retrieve_bsd_candidates(c.literals())
        .into_iter()
        .filter(|d| d.id() != c.id())
        .filter_map(|d| subsumption_demodulation(c, &d, limit, Rule::Bsd).map(|rw| (d, rw)))
        .collect()
}

fn demodulation_candidates<R>(
    unit: &Clause,
    main: &Clause,
    mut f: impl FnMut(usize, LiteralPos, Orientation, Substitution, &Term) -> ControlFlow<R>,
) -> Option<R> {
    assert!(
        unit.is_unit_equality(),
        "demodulator must be a unit equality"
    );
    let eq = unit.literals()[0].shift_vars(main.var_count());
    let (a, b) = eq.sides().unwrap();
    for (i, lit) in main.literals().iter().enumerate() {
        for (pos, t) in lit.positions() {
            for (l, r) in orientations(a, b) {
                let Some(sigma) = match_term(l, t, &Substitution::new()) else {
                    continue;
                };
                let r_sigma = sigma.apply_term(r);
                if compare_terms(t, &r_sigma) != OrderResult::Greater {
                    continue;
                }
                let e = vec![Literal::eq(true, t.clone(), r_sigma.clone())];
                if compare_clauses(main.literals(), &e) != OrderResult::Greater {
                    continue;
                }
                let orientation = if std::ptr::eq(l, a) {
                    Orientation::LeftToRight
                } else {
                    Orientation::RightToLeft
                };
                if let ControlFlow::Break(res) = f(i, pos.clone(), orientation, sigma, &r_sigma) {
                    return Some(res);
                }
            }
        }
    }
    None
}

fn demod_rewrite(
    unit: &Clause,
    main: &Clause,
    i: usize,
    pos: LiteralPos,
    orientation: Orientation,
    subst: Substitution,
    r_sigma: &Term,
) -> Rewrite {
    let step = RewriteStep {
        side_premise: unit.id(),
        rewriting_equality: 0,
        orientation,
        target_literal: i,
        target_occurrence: pos,
        subst,
        matched_image: Vec::new(),
    };
    Rewrite {
        clause: build_simplified_clause(main, &step, r_sigma, Rule::Demodulation),
        step,
    }
}

/// Rewrites the first eligible occurrence in `main` with the unit equality
/// `unit` when `lσ ≻ rσ` and `main ≻ (l ≃ r)σ`.
pub fn demodulate(unit: &Clause, main: &Clause) -> Option<Rewrite> {
    demodulation_candidates(unit, main, |i, pos, o, s, r| {
        ControlFlow::Break(demod_rewrite(unit, main, i, pos, o, s, r))
    })
}

/// Every single-step demodulation of `main` by `unit`.
pub fn all_demodulations(unit: &Clause, main: &Clause) -> Vec<Rewrite> {
    let mut out = Vec::new();
    demodulation_candidates::<()>(unit, main, |i, pos, o, s, r| {
        out.push(demod_rewrite(unit, main, i, pos, o, s, r));
        ControlFlow::Continue(())
    });
    out
}

/// Demodulation of `d` by the stored unit equalities: the first occurrence in
/// scan order that some unit can rewrite, by the earliest such unit.
pub fn forward_demodulation(d: &Clause, ix: &UnitEqualityIndex) -> Option<Rewrite> {
    if ix.is_empty() {
        return None;
    }
    for lit in d.literals() {
        for (_, t) in lit.positions() {
            for unit in ix.retrieve(t) {
                if unit.id() == d.id() {
                    continue;
                }
                if let Some(rw) = demodulate(&unit, d) {
                    return Some(rw);
                }
            }
        }
    }
    None
}

/// Every active clause that the unit equality `unit` can rewrite, with its
/// replacement.
pub fn backward_demodulation(unit: &Clause, active: &BackwardIndex) -> Vec<(Arc<Clause>, Rewrite)> {
    if !unit.is_unit_equality() {
        return Vec::new();
    }
    active
        .clauses()
        .filter(|d| d.id() != unit.id())
        .filter_map(|d| demodulate(unit, d).map(|rw| (d.clone(), rw)))
        .collect()
}

/// Id of an active clause subsuming `d`, if any.
pub fn forward_subsumption_delete(d: &Clause, active: &BackwardIndex) -> Option<ClauseId> {
    active
        .retrieve_subsuming_candidates(d.literals())
        .into_iter()
        .find(|c| c.id() != d.id() && subsumes(c, d))
        .map(|c| c.id())
}

/// Active clauses subsumed by `c`.
pub fn backward_subsumption_delete(c: &Clause, active: &BackwardIndex) -> Vec<ClauseId> {
    active
        .retrieve_subsumed_candidates(c.literals())
        .into_iter()
        .filter(|d| d.id() != c.id() && subsumes(c, d))
        .map(|d| d.id())
        .collect()
}

/// Forward simplification of `d` by one rule application, in the fixed order
/// subsumption, demodulation, subsumption demodulation.
pub fn simplify_once(
    d: &Clause,
    active: &BackwardIndex,
    units: &UnitEqualityIndex,
    fsd: Option<(&FsdIndex, Option<usize>)>,
) -> SimplifyOutcome {
    if let Some(by) = forward_subsumption_delete(d, active) {
        return SimplifyOutcome::Deleted { by };
    }
    let rw = forward_demodulation(d, units)
        .or_else(|| fsd.and_then(|(ix, limit)| forward_subsumption_demodulation(d, ix, limit)));
    match rw {
        Some(Rewrite { clause, step }) => SimplifyOutcome::Replaced {
            new_clause: clause,
            step,
            deleted: d.id(),
        },
        None => SimplifyOutcome::Unchanged,
    }
}
