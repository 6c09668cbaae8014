//! Textbook weighted set-cover greedy.

use std::collections::BTreeSet;

/// A weighted subset of the ground set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedSet {
    pub id: u32,
    pub weight: usize,
    pub elements: BTreeSet<u32>,
}

/// Repeatedly picks the set minimizing `weight / |new elements|` (lowest id on
/// ties) until `universe` is covered or no set adds anything. Returns the ids
/// in selection order.
pub fn weighted_set_cover_greedy(universe: &BTreeSet<u32>, sets: &[WeightedSet]) -> Vec<u32> {
    let mut sets: Vec<&WeightedSet> = sets.iter().collect();
    sets.sort_by_key(|s| s.id);
    let mut left = universe.clone();
    let mut used = BTreeSet::new();
    let mut order = Vec::new();
    while !left.is_empty() {
        let mut best: Option<(&WeightedSet, usize)> = None;
        for s in &sets {
            if used.contains(&s.id) {
                continue;
            }
            let new = s.elements.intersection(&left).count();
            if new == 0 {
                continue;
            }
            if best.is_none_or(|(b, bn)| s.weight * bn < b.weight * new) {
                best = Some((s, new));
            }
        }
        let Some((s, _)) = best else { break };
        used.insert(s.id);
        order.push(s.id);
        for e in &s.elements {
            left.remove(e);
        }
    }
    order
}
