//! Memo table for series keyed by a family or table descriptor.
//!
//! A stored series of order `N` answers every request of order `≤ N`.
//! Concurrent callers may build the same entry twice; the first stored
//! entry of sufficient order wins and entries are never mutated in place.

use std::collections::HashMap;
use std::hash::Hash;
use std::sync::{Arc, RwLock};

use crate::series::Series;

#[derive(Debug)]
pub struct SeriesMemo<K> {
    entries: RwLock<HashMap<K, Arc<Series>>>,
}

impl<K> Default for SeriesMemo<K> {
    fn default() -> Self {
        SeriesMemo {
            entries: RwLock::new(HashMap::new()),
        }
    }
}

impl<K: Eq + Hash + Clone> SeriesMemo<K> {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns a cached series of order at least `order`, building it with
    /// `build(order)` on a miss. The result may have a higher order than asked.
    pub fn get_or_build<E>(
        &self,
        key: &K,
        order: usize,
        build: impl FnOnce(usize) -> Result<Series, E>,
    ) -> Result<Arc<Series>, E> {
        if let Some(hit) = self.lookup(key, order) {
            return Ok(hit);
        }
        let built = Arc::new(build(order)?);
        let mut entries = self.entries.write().expect("memo lock poisoned");
        match entries.get(key) {
            Some(existing) if existing.order() >= order => Ok(existing.clone()),
            _ => {
                entries.insert(key.clone(), built.clone());
                Ok(built)
            }
        }
    }

    fn lookup(&self, key: &K, order: usize) -> Option<Arc<Series>> {
        let entries = self.entries.read().expect("memo lock poisoned");
        entries.get(key).filter(|s| s.order() >= order).cloned()
    }

    pub fn len(&self) -> usize {
        self.entries.read().expect("memo lock poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
