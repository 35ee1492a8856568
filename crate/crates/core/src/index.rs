//! Literal-keyed clause indexes.
//!
//! Keys are a literal's predicate symbol and polarity, or an equality tag
//! with polarity. Keys are stable under substitution, so retrieval by key
//! never misses a clause that a later match check would accept. Retrieval
//! returns candidates in insertion order.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::clause::{Atom, Clause, ClauseId, Literal};
use crate::term::{Sym, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LiteralKey {
    Pred { symbol: Sym, positive: bool },
    Eq { positive: bool },
}

pub fn literal_key(l: &Literal) -> LiteralKey {
    match &l.atom {
        Atom::Pred(p) => LiteralKey::Pred {
            symbol: p.head().expect("predicate atom has a head symbol"),
            positive: l.positive,
        },
        Atom::Eq(..) => LiteralKey::Eq {
            positive: l.positive,
        },
    }
}

/// Position of the heaviest literal, leftmost on ties, skipping `except`.
fn heaviest(lits: &[Literal], except: Option<usize>) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, l) in lits.iter().enumerate() {
        if Some(i) == except {
            continue;
        }
        match best {
            Some(b) if lits[b].weight() >= l.weight() => {}
            _ => best = Some(i),
        }
    }
    best
}

/// Literal positions a clause is indexed under for subsumption demodulation.
///
/// With best and second-best literal by weight: if exactly one of them is a
/// positive equality the clause is indexed by the other; if both are, by
/// both; otherwise by the best. Empty when the clause has no positive
/// equality.
pub fn best_literal_positions(lits: &[Literal]) -> Vec<usize> {
    if !lits.iter().any(Literal::is_positive_equality) {
        return Vec::new();
    }
    let best = heaviest(lits, None).expect("non-empty clause");
    let Some(second) = heaviest(lits, Some(best)) else {
        return vec![best];
    };
    match (
        lits[best].is_positive_equality(),
        lits[second].is_positive_equality(),
    ) {
        (true, false) => vec![second],
        (false, true) => vec![best],
        (true, true) => vec![best, second],
        (false, false) => vec![best],
    }
}

pub fn best_literal_keys(lits: &[Literal]) -> Vec<LiteralKey> {
    best_literal_positions(lits)
        .into_iter()
        .map(|i| literal_key(&lits[i]))
        .collect()
}

#[derive(Debug, Default)]
struct KeyedStore {
    next_seq: u64,
    by_key: HashMap<LiteralKey, BTreeMap<u64, Arc<Clause>>>,
    members: HashMap<ClauseId, (u64, Vec<LiteralKey>)>,
    all: BTreeMap<u64, Arc<Clause>>,
}

impl KeyedStore {
    fn insert(&mut self, c: Arc<Clause>, mut keys: Vec<LiteralKey>) -> bool {
        if self.members.contains_key(&c.id()) {
            return false;
        }
        keys.sort();
        keys.dedup();
        let seq = self.next_seq;
        self.next_seq += 1;
        for k in &keys {
            self.by_key.entry(*k).or_default().insert(seq, c.clone());
        }
        self.all.insert(seq, c.clone());
        self.members.insert(c.id(), (seq, keys));
        true
    }

    fn remove(&mut self, id: ClauseId) -> bool {
        let Some((seq, keys)) = self.members.remove(&id) else {
            return false;
        };
        for k in keys {
            if let Some(m) = self.by_key.get_mut(&k) {
                m.remove(&seq);
                if m.is_empty() {
                    self.by_key.remove(&k);
                }
            }
        }
        self.all.remove(&seq);
        true
    }

    fn retrieve(&self, keys: &[LiteralKey]) -> Vec<Arc<Clause>> {
        let mut hits: BTreeMap<u64, Arc<Clause>> = BTreeMap::new();
        for k in keys {
            if let Some(m) = self.by_key.get(k) {
                for (seq, c) in m {
                    hits.entry(*seq).or_insert_with(|| c.clone());
                }
            }
        }
        hits.into_values().collect()
    }

    fn keys_of(&self, id: ClauseId) -> Option<&[LiteralKey]> {
        self.members.get(&id).map(|(_, k)| k.as_slice())
    }
}

/// Side premises for forward subsumption demodulation: non-unit clauses with
/// a positive equality, each under its best/second-best literal key(s).
#[derive(Debug, Default)]
pub struct FsdIndex {
    store: KeyedStore,
}

impl FsdIndex {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns `false` if the clause was not stored (no positive equality,
    /// unit clause, or already present).
    pub fn insert(&mut self, c: Arc<Clause>) -> bool {
        if c.len() < 2 {
            return false;
        }
        let keys = best_literal_keys(c.literals());
        if keys.is_empty() {
            return false;
        }
        self.store.insert(c, keys)
    }

    pub fn remove(&mut self, id: ClauseId) -> bool {
        self.store.remove(id)
    }

    pub fn contains(&self, id: ClauseId) -> bool {
        self.store.members.contains_key(&id)
    }

    pub fn len(&self) -> usize {
        self.store.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.store.members.is_empty()
    }

    /// Stored clauses whose indexed key equals the key of some literal of `d`.
    pub fn retrieve_fsd_candidates(&self, d: &[Literal]) -> Vec<Arc<Clause>> {
        let keys: Vec<LiteralKey> = d.iter().map(literal_key).collect();
        self.store.retrieve(&keys)
    }
}

/// Active clauses keyed by the keys of all their literals.
#[derive(Debug, Default)]
pub struct BackwardIndex {
    store: KeyedStore,
}

impl BackwardIndex {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, c: Arc<Clause>) -> bool {
        let keys = c.literals().iter().map(literal_key).collect();
        self.store.insert(c, keys)
    }

    pub fn remove(&mut self, id: ClauseId) -> bool {
        self.store.remove(id)
    }

    pub fn contains(&self, id: ClauseId) -> bool {
        self.store.members.contains_key(&id)
    }

    pub fn len(&self) -> usize {
        self.store.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.store.members.is_empty()
    }

    /// All stored clauses in insertion order.
    pub fn clauses(&self) -> impl Iterator<Item = &Arc<Clause>> {
        self.store.all.values()
    }

    /// Main-premise candidates for backward subsumption demodulation with side
    /// premise `c`: clauses containing a literal with one of `c`'s best
    /// literal keys.
    pub fn retrieve_bsd_candidates(&self, c: &[Literal]) -> Vec<Arc<Clause>> {
        self.store.retrieve(&best_literal_keys(c))
    }

    /// Clauses that may be subsumed by `c`: they carry every key of `c`.
    pub fn retrieve_subsumed_candidates(&self, c: &[Literal]) -> Vec<Arc<Clause>> {
        let Some(first) = c.first() else {
            return self.clauses().cloned().collect();
        };
        let keys: Vec<LiteralKey> = c.iter().map(literal_key).collect();
        self.store
            .retrieve(&[literal_key(first)])
            .into_iter()
            .filter(|d| {
                d.len() >= c.len()
                    && self
                        .store
                        .keys_of(d.id())
                        .is_some_and(|dk| keys.iter().all(|k| dk.contains(k)))
            })
            .collect()
    }

    /// Clauses that may subsume `d`: all their keys occur in `d`.
    pub fn retrieve_subsuming_candidates(&self, d: &[Literal]) -> Vec<Arc<Clause>> {
        let keys: Vec<LiteralKey> = d.iter().map(literal_key).collect();
        self.store
            .retrieve(&keys)
            .into_iter()
            .filter(|c| {
                c.len() <= d.len()
                    && self
                        .store
                        .keys_of(c.id())
                        .is_some_and(|ck| ck.iter().all(|k| keys.contains(k)))
            })
            .collect()
    }
}

/// Unit equalities by the head symbol of each side; a variable side goes
/// under `None` and is returned for every query.
#[derive(Debug, Default)]
pub struct UnitEqualityIndex {
    next_seq: u64,
    by_head: HashMap<Option<Sym>, BTreeMap<u64, Arc<Clause>>>,
    members: HashMap<ClauseId, (u64, Vec<Option<Sym>>)>,
}

impl UnitEqualityIndex {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, c: Arc<Clause>) -> bool {
        if !c.is_unit_equality() || self.members.contains_key(&c.id()) {
            return false;
        }
        let (l, r) = c.literals()[0].sides().unwrap();
        let mut heads = vec![l.head(), r.head()];
        heads.dedup();
        let seq = self.next_seq;
        self.next_seq += 1;
        for h in &heads {
            self.by_head.entry(*h).or_default().insert(seq, c.clone());
        }
        self.members.insert(c.id(), (seq, heads));
        true
    }

    pub fn remove(&mut self, id: ClauseId) -> bool {
        let Some((seq, heads)) = self.members.remove(&id) else {
            return false;
        };
        for h in heads {
            if let Some(m) = self.by_head.get_mut(&h) {
                m.remove(&seq);
            }
        }
        true
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Unit equalities with a side that could match `t`.
    pub fn retrieve(&self, t: &Term) -> Vec<Arc<Clause>> {
        let mut hits: BTreeMap<u64, Arc<Clause>> = BTreeMap::new();
        for key in [t.head(), None] {
            if let Some(m) = self.by_head.get(&key) {
                for (seq, c) in m {
                    hits.entry(*seq).or_insert_with(|| c.clone());
                }
            }
            if t.head().is_none() {
                break;
            }
        }
        hits.into_values().collect()
    }
}
