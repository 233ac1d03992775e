use std::fmt;

use fixedbitset::FixedBitSet;

use super::StateId;

/// A subset of the states of one system, stored as a dense bitset.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct StateSet {
    bits: FixedBitSet,
}

/// A target subset `A ⊆ Y` (for example a good or a bad cluster).
pub type TargetSet = StateSet;

impl StateSet {
    pub fn empty(universe: usize) -> Self {
        StateSet { bits: FixedBitSet::with_capacity(universe) }
    }

    pub fn full(universe: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(universe);
        bits.insert_range(..);
        StateSet { bits }
    }

    /// Panics if an id is out of range.
    pub fn from_ids(universe: usize, ids: impl IntoIterator<Item = StateId>) -> Self {
        let mut set = StateSet::empty(universe);
        for id in ids {
            set.insert(id);
        }
        set
    }

    pub fn from_predicate(universe: usize, mut pred: impl FnMut(StateId) -> bool) -> Self {
        StateSet::from_ids(universe, (0..universe).filter(|&id| pred(id)))
    }

    pub fn universe(&self) -> usize {
        self.bits.len()
    }

    pub fn insert(&mut self, id: StateId) -> bool {
        assert!(id < self.bits.len(), "state {id} outside universe of {}", self.bits.len());
        !self.bits.put(id)
    }

    pub fn remove(&mut self, id: StateId) {
        self.bits.set(id, false);
    }

    pub fn contains(&self, id: StateId) -> bool {
        self.bits.contains(id)
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn iter(&self) -> impl Iterator<Item = StateId> + '_ {
        self.bits.ones()
    }

    pub fn to_vec(&self) -> Vec<StateId> {
        self.iter().collect()
    }

    pub fn is_subset(&self, other: &StateSet) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn is_disjoint(&self, other: &StateSet) -> bool {
        self.bits.is_disjoint(&other.bits)
    }

    pub fn union(&self, other: &StateSet) -> StateSet {
        let mut bits = self.bits.clone();
        bits.union_with(&other.bits);
        StateSet { bits }
    }

    pub fn intersection(&self, other: &StateSet) -> StateSet {
        let mut bits = self.bits.clone();
        bits.intersect_with(&other.bits);
        StateSet { bits }
    }

    pub fn difference(&self, other: &StateSet) -> StateSet {
        let mut bits = self.bits.clone();
        bits.difference_with(&other.bits);
        StateSet { bits }
    }

    pub fn complement(&self) -> StateSet {
        let mut bits = self.bits.clone();
        bits.toggle_range(..);
        StateSet { bits }
    }

    pub fn union_with(&mut self, other: &StateSet) {
        self.bits.union_with(&other.bits);
    }
}

impl fmt::Debug for StateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
