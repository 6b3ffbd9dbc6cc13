use std::collections::HashMap;

use crate::graph::VertexId;
use crate::runtime::aggregate::Aggregator;

/// `(vertex id, value)` pairs with at most one pair per key. Duplicate keys
/// are coalesced with the algorithm's aggregator as they are added.
#[derive(Debug, Clone)]
pub struct PairVector<V> {
    pairs: Vec<(VertexId, V)>,
    index: HashMap<VertexId, usize>,
}

impl<V> Default for PairVector<V> {
    fn default() -> Self {
        PairVector {
            pairs: Vec::new(),
            index: HashMap::new(),
        }
    }
}

impl<V: Clone> PairVector<V> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, key: VertexId, value: V, agg: &dyn Aggregator<V>) {
        match self.index.get(&key) {
            Some(&i) => {
                let merged = agg.merge(&self.pairs[i].1, &value);
                self.pairs[i].1 = merged;
            }
            None => {
                self.index.insert(key, self.pairs.len());
                self.pairs.push((key, value));
            }
        }
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &(VertexId, V)> {
        self.pairs.iter()
    }

    /// Pairs ordered by key.
    pub fn into_sorted(mut self) -> Vec<(VertexId, V)> {
        self.pairs.sort_by_key(|p| p.0);
        self.pairs
    }
}
