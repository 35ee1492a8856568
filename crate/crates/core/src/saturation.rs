//! Given-clause saturation (Discount style) with forward and backward
//! simplification, and an independent proof checker.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap, HashMap, HashSet};
use std::fmt;
use std::sync::atomic::{AtomicBool, Ordering as AtomicOrdering};
use std::sync::Arc;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::calculus::{
    equality_factoring, equality_resolution, factoring, resolution, superposition,
};
use crate::clause::{Clause, ClauseId, Rule};
use crate::index::{BackwardIndex, FsdIndex, UnitEqualityIndex};
use crate::matching::is_variant;
use crate::simplify::{
    all_demodulations, all_subsumption_demodulations, backward_demodulation,
    backward_subsumption_delete, backward_subsumption_demodulation, simplify_once, Rewrite,
    SimplifyOutcome,
};

#[derive(Debug, Clone)]
pub struct ProverConfig {
    pub fsd: bool,
    pub bsd: bool,
    pub time_limit: Duration,
    /// Upper bound on the number of clauses created.
    pub clause_limit: usize,
    /// Bound on multi-literal matching solutions per clause pair.
    pub match_limit: Option<usize>,
    /// Given clauses picked by age versus by weight.
    pub age_weight_ratio: (u32, u32),
    /// Set from outside to stop the loop between steps.
    pub cancel: Option<Arc<AtomicBool>>,
}

impl Default for ProverConfig {
    fn default() -> Self {
        ProverConfig {
            fsd: true,
            bsd: true,
            time_limit: Duration::from_secs(60),
            clause_limit: 100_000,
            match_limit: None,
            age_weight_ratio: (1, 5),
            cancel: None,
        }
    }
}

impl ProverConfig {
    /// Plain superposition with subsumption demodulation switched off.
    pub fn baseline() -> Self {
        ProverConfig {
            fsd: false,
            bsd: false,
            ..Default::default()
        }
    }
}

/// A refutation: every clause it depends on, ordered by id, ending in the
/// empty clause.
#[derive(Debug, Clone)]
pub struct Proof {
    pub steps: Vec<Arc<Clause>>,
}

impl Proof {
    pub fn empty_clause(&self) -> &Clause {
        self.steps.last().expect("a proof has at least one step")
    }

    pub fn uses_rule(&self, rule: Rule) -> bool {
        self.steps.iter().any(|c| c.inference().rule == rule)
    }
}

#[derive(Debug, Clone)]
pub enum SaturationResult {
    Unsatisfiable(Proof),
    Saturated,
    ResourceOut,
}

impl SaturationResult {
    pub fn is_unsatisfiable(&self) -> bool {
        matches!(self, SaturationResult::Unsatisfiable(_))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Stats {
    pub iterations: usize,
    pub generated: usize,
    pub activated: usize,
    pub forward_subsumed: usize,
    pub backward_subsumed: usize,
    pub tautologies: usize,
    pub demodulations: usize,
    pub backward_demodulations: usize,
    pub fsd: usize,
    pub bsd: usize,
}

impl fmt::Display for Stats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "iterations {} generated {} activated {} subsumed {}+{} tautologies {} \
             demodulations {}+{} fsd {} bsd {}",
            self.iterations,
            self.generated,
            self.activated,
            self.forward_subsumed,
            self.backward_subsumed,
            self.tautologies,
            self.demodulations,
            self.backward_demodulations,
            self.fsd,
            self.bsd
        )
    }
}

#[derive(Default)]
struct Passive {
    by_weight: BinaryHeap<Reverse<(usize, ClauseId)>>,
    by_age: BinaryHeap<Reverse<ClauseId>>,
    members: HashMap<ClauseId, Arc<Clause>>,
    tick: u32,
}

impl Passive {
    fn push(&mut self, c: Arc<Clause>) {
        self.by_weight.push(Reverse((c.weight(), c.id())));
        self.by_age.push(Reverse(c.id()));
        self.members.insert(c.id(), c);
    }

    fn pop(&mut self, ratio: (u32, u32)) -> Option<Arc<Clause>> {
        if self.members.is_empty() {
            return None;
        }
        let (age, weight) = ratio;
        let by_age = self.tick % (age + weight).max(1) < age;
        self.tick = self.tick.wrapping_add(1);
        loop {
            let id = if by_age {
                self.by_age.pop()?.0
            } else {
                self.by_weight.pop()?.0 .1
            };
            if let Some(c) = self.members.remove(&id) {
                return Some(c);
            }
        }
    }

    fn len(&self) -> usize {
        self.members.len()
    }
}

/// The prover state: passive queue, active set and indexes, and the log of
/// every clause created.
pub struct Prover {
    config: ProverConfig,
    passive: Passive,
    active: BackwardIndex,
    fsd_index: FsdIndex,
    units: UnitEqualityIndex,
    log: BTreeMap<ClauseId, Arc<Clause>>,
    stats: Stats,
    started: Instant,
}

enum Stop {
    Refuted(Arc<Clause>),
    ResourceOut,
}

impl Prover {
    pub fn new(input: Vec<Arc<Clause>>, config: ProverConfig) -> Prover {
        let mut p = Prover {
            config,
            passive: Passive::default(),
            active: BackwardIndex::new(),
            fsd_index: FsdIndex::new(),
            units: UnitEqualityIndex::new(),
            log: BTreeMap::new(),
            stats: Stats::default(),
            started: Instant::now(),
        };
        for c in input {
            p.log.insert(c.id(), c.clone());
            p.passive.push(c);
        }
        p
    }

    pub fn stats(&self) -> &Stats {
        &self.stats
    }

    /// Every clause created so far, by id.
    pub fn log(&self) -> impl Iterator<Item = &Arc<Clause>> {
        self.log.values()
    }

    pub fn clause(&self, id: ClauseId) -> Option<&Arc<Clause>> {
        self.log.get(&id)
    }

    pub fn active(&self) -> impl Iterator<Item = &Arc<Clause>> {
        self.active.clauses()
    }

    pub fn passive_len(&self) -> usize {
        self.passive.len()
    }

    fn out_of_resources(&self) -> bool {
        self.log.len() > self.config.clause_limit
            || self.started.elapsed() >= self.config.time_limit
            || self
                .config
                .cancel
                .as_ref()
                .is_some_and(|c| c.load(AtomicOrdering::Relaxed))
    }

    fn record(&mut self, c: Clause) -> Arc<Clause> {
        let c = Arc::new(c);
        self.log.insert(c.id(), c.clone());
        c
    }

    pub fn run(&mut self) -> SaturationResult {
        self.started = Instant::now();
        match self.run_inner() {
            Ok(()) => SaturationResult::Saturated,
            Err(Stop::ResourceOut) => SaturationResult::ResourceOut,
            Err(Stop::Refuted(empty)) => SaturationResult::Unsatisfiable(self.proof_of(&empty)),
        }
    }

    fn run_inner(&mut self) -> Result<(), Stop> {
        // an empty input clause refutes immediately
        if let Some(c) = self.log.values().find(|c| c.is_empty()) {
            return Err(Stop::Refuted(c.clone()));
        }
        while let Some(given) = self.passive.pop(self.config.age_weight_ratio) {
            if self.out_of_resources() {
                return Err(Stop::ResourceOut);
            }
            self.stats.iterations += 1;
            let Some(given) = self.forward_simplify(given) else {
                continue;
            };
            if given.is_empty() {
                return Err(Stop::Refuted(given));
            }
            self.backward_simplify(&given)?;
            self.activate(given.clone());
            self.generate(&given)?;
        }
        Ok(())
    }

    /// Forward simplification to a fixpoint; `None` if the clause is deleted.
    pub fn forward_simplify(&mut self, mut g: Arc<Clause>) -> Option<Arc<Clause>> {
        loop {
            if g.is_tautology() {
                self.stats.tautologies += 1;
                return None;
            }
            let fsd = self
                .config
                .fsd
                .then_some((&self.fsd_index, self.config.match_limit));
            match simplify_once(&g, &self.active, &self.units, fsd) {
                SimplifyOutcome::Unchanged => return Some(g),
                SimplifyOutcome::Deleted { .. } => {
                    self.stats.forward_subsumed += 1;
                    return None;
                }
                SimplifyOutcome::Replaced { new_clause, .. } => {
                    match new_clause.inference().rule {
                        Rule::Fsd => self.stats.fsd += 1,
                        _ => self.stats.demodulations += 1,
                    }
                    g = self.record(new_clause);
                }
            }
        }
    }

    fn remove_active(&mut self, id: ClauseId) {
        self.active.remove(id);
        self.fsd_index.remove(id);
        self.units.remove(id);
    }

    /// Uses `g` to delete or rewrite active clauses; rewritten ones go back
    /// to passive.
    fn backward_simplify(&mut self, g: &Arc<Clause>) -> Result<(), Stop> {
        for id in backward_subsumption_delete(g, &self.active) {
            self.remove_active(id);
            self.stats.backward_subsumed += 1;
        }
        let mut replaced: Vec<(Arc<Clause>, Rewrite)> = Vec::new();
        if g.is_unit_equality() {
            let rws = backward_demodulation(g, &self.active);
            self.stats.backward_demodulations += rws.len();
            replaced.extend(rws);
        }
        if self.config.bsd {
            let rws: Vec<_> =
                backward_subsumption_demodulation(g, &self.active, self.config.match_limit)
                    .into_iter()
                    .filter(|(old, _)| !replaced.iter().any(|(o, _)| o.id() == old.id()))
                    .collect();
            self.stats.bsd += rws.len();
            replaced.extend(rws);
        }
        for (old, rw) in replaced {
            self.remove_active(old.id());
            let new = self.record(rw.clause);
            if new.is_empty() {
                return Err(Stop::Refuted(new));
            }
            self.passive.push(new);
        }
        Ok(())
    }

    fn activate(&mut self, g: Arc<Clause>) {
        self.stats.activated += 1;
        self.active.insert(g.clone());
        if self.config.fsd {
            self.fsd_index.insert(g.clone());
        }
        if g.is_unit_equality() {
            self.units.insert(g);
        }
    }

    fn generate(&mut self, g: &Arc<Clause>) -> Result<(), Stop> {
        let mut conclusions = factoring(g);
        conclusions.extend(equality_resolution(g));
        conclusions.extend(equality_factoring(g));
        let partners: Vec<Arc<Clause>> = self.active.clauses().cloned().collect();
        for a in &partners {
            if self.out_of_resources() {
                return Err(Stop::ResourceOut);
            }
            conclusions.extend(resolution(g, a));
            conclusions.extend(superposition(g, a));
            if a.id() != g.id() {
                conclusions.extend(resolution(a, g));
                conclusions.extend(superposition(a, g));
            }
            self.push_conclusions(&mut conclusions)?;
        }
        self.push_conclusions(&mut conclusions)
    }

    fn push_conclusions(&mut self, conclusions: &mut Vec<Clause>) -> Result<(), Stop> {
        for c in conclusions.drain(..) {
            self.stats.generated += 1;
            if c.is_tautology() {
                self.stats.tautologies += 1;
                continue;
            }
            let c = self.record(c);
            if c.is_empty() {
                return Err(Stop::Refuted(c));
            }
            self.passive.push(c);
        }
        Ok(())
    }

    fn proof_of(&self, empty: &Arc<Clause>) -> Proof {
        let mut seen: HashSet<ClauseId> = HashSet::new();
        let mut stack = vec![empty.id()];
        while let Some(id) = stack.pop() {
            if seen.insert(id) {
                if let Some(c) = self.log.get(&id) {
                    stack.extend(c.inference().parents.iter().copied());
                }
            }
        }
        let mut steps: Vec<Arc<Clause>> = seen
            .iter()
            .filter_map(|id| self.log.get(id).cloned())
            .collect();
        steps.sort_by_key(|c| c.id());
        Proof { steps }
    }
}

pub fn saturate(input: Vec<Arc<Clause>>, config: ProverConfig) -> SaturationResult {
    Prover::new(input, config).run()
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ProofError {
    #[error("proof is empty or does not end in the empty clause")]
    NoRefutation,
    #[error("clause {clause} cites parent {parent} that is missing or not earlier")]
    MissingParent { clause: ClauseId, parent: ClauseId },
    #[error("clause {clause} is not reproduced by {rule}")]
    NotReproduced { clause: ClauseId, rule: Rule },
    #[error("clause {clause} has {found} parents, {rule} needs {expected}")]
    Arity {
        clause: ClauseId,
        rule: Rule,
        expected: usize,
        found: usize,
    },
}

/// Re-runs every inference of the proof on its parents and checks that the
/// recorded conclusion is among the results up to variable renaming.
pub fn check_proof(proof: &Proof) -> Result<(), ProofError> {
    let last = proof.steps.last().ok_or(ProofError::NoRefutation)?;
    if !last.is_empty() {
        return Err(ProofError::NoRefutation);
    }
    let mut by_id: HashMap<ClauseId, &Clause> = HashMap::new();
    for step in &proof.steps {
        let inf = step.inference();
        let mut parents = Vec::with_capacity(inf.parents.len());
        for p in &inf.parents {
            match by_id.get(p) {
                Some(c) => parents.push(*c),
                None => {
                    return Err(ProofError::MissingParent {
                        clause: step.id(),
                        parent: *p,
                    })
                }
            }
        }
        let expected = match inf.rule {
            Rule::Input => 0,
            Rule::Factoring | Rule::EqResolution | Rule::EqFactoring => 1,
            _ => 2,
        };
        if parents.len() != expected {
            return Err(ProofError::Arity {
                clause: step.id(),
                rule: inf.rule,
                expected,
                found: parents.len(),
            });
        }
        let candidates: Vec<Clause> = match inf.rule {
            Rule::Input => Vec::new(),
            Rule::Resolution => resolution(parents[0], parents[1]),
            Rule::Superposition => superposition(parents[0], parents[1]),
            Rule::Factoring => factoring(parents[0]),
            Rule::EqResolution => equality_resolution(parents[0]),
            Rule::EqFactoring => equality_factoring(parents[0]),
            Rule::Demodulation => all_demodulations(parents[1], parents[0])
                .into_iter()
                .map(|r| r.clause)
                .collect(),
            Rule::Fsd | Rule::Bsd => {
                all_subsumption_demodulations(parents[1], parents[0], inf.rule)
                    .into_iter()
                    .map(|r| r.clause)
                    .collect()
            }
            Rule::Subsumption => Vec::new(),
        };
        let ok = inf.rule == Rule::Input
            || candidates
                .iter()
                .any(|c| is_variant(c.literals(), step.literals()));
        if !ok {
            return Err(ProofError::NotReproduced {
                clause: step.id(),
                rule: inf.rule,
            });
        }
        by_id.insert(step.id(), step);
    }
    Ok(())
}
