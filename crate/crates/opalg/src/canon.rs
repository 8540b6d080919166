//! Canonical renaming of summed (dummy) indices.
//!
//! A term's dummies are the index names occurring exactly twice. Canonical
//! form tries every assignment of dummies onto the fixed name pool (and, for
//! spacetime pairs, both up/down orientations) and keeps the smallest key.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use itertools::Itertools;

use crate::index::{pool, IndexKey, IndexKind, Rename};

pub(crate) trait Indexed: Sized {
    type Key: Ord;

    /// Every index occurrence, weighted by multiplicity.
    fn occurrences(&self) -> Vec<(IndexKey, usize)>;
    fn renamed(&self, map: &HashMap<IndexKey, Rename>) -> Self;
    /// Sort and merge without touching index names.
    fn tidy(self) -> Self;
    fn key(&self) -> Self::Key;
}

pub(crate) fn index_counts<T: Indexed>(t: &T) -> BTreeMap<IndexKey, usize> {
    let mut counts = BTreeMap::new();
    for (k, w) in t.occurrences() {
        *counts.entry(k).or_insert(0) += w;
    }
    counts
}

pub(crate) fn dummies<T: Indexed>(t: &T) -> Vec<IndexKey> {
    index_counts(t)
        .into_iter()
        .filter(|(_, c)| *c == 2)
        .map(|(k, _)| k)
        .collect()
}

pub(crate) fn all_keys<T: Indexed>(t: &T) -> BTreeSet<IndexKey> {
    index_counts(t).into_keys().collect()
}

/// Rename the dummies of `t` that collide with `avoid` to fresh pool names.
pub(crate) fn rename_apart<T: Indexed>(t: &T, avoid: &BTreeSet<IndexKey>) -> T {
    let own = all_keys(t);
    let clashing: Vec<IndexKey> = dummies(t).into_iter().filter(|d| avoid.contains(d)).collect();
    if clashing.is_empty() {
        return t.renamed(&HashMap::new());
    }
    let mut taken: BTreeSet<IndexKey> = avoid.union(&own).cloned().collect();
    let mut map = HashMap::new();
    for d in clashing {
        let fresh = fresh_name(d.kind, &taken);
        taken.insert(IndexKey {
            name: fresh.clone(),
            kind: d.kind,
        });
        map.insert(
            d,
            Rename {
                name: fresh,
                flip: false,
            },
        );
    }
    t.renamed(&map)
}

pub(crate) fn fresh_name(kind: IndexKind, taken: &BTreeSet<IndexKey>) -> String {
    pool(kind)
        .iter()
        .find(|n| {
            !taken.contains(&IndexKey {
                name: n.to_string(),
                kind,
            })
        })
        .map(|n| n.to_string())
        .expect("index name pool exhausted")
}

pub(crate) fn canonical_rename<T: Indexed>(t: T) -> T {
    let counts = index_counts(&t);
    let dummy_keys: Vec<IndexKey> = counts
        .iter()
        .filter(|(_, c)| **c == 2)
        .map(|(k, _)| k.clone())
        .collect();
    if dummy_keys.is_empty() {
        return t.tidy();
    }
    let free: BTreeSet<IndexKey> = counts
        .keys()
        .filter(|k| counts[*k] != 2)
        .cloned()
        .collect();

    let mut by_kind: BTreeMap<IndexKind, Vec<IndexKey>> = BTreeMap::new();
    for d in &dummy_keys {
        by_kind.entry(d.kind).or_default().push(d.clone());
    }

    // Candidate target names per kind, skipping names held by free indices.
    let mut groups: Vec<(Vec<IndexKey>, Vec<String>)> = Vec::new();
    for (kind, ds) in &by_kind {
        let targets: Vec<String> = pool(*kind)
            .iter()
            .filter(|n| {
                !free.contains(&IndexKey {
                    name: n.to_string(),
                    kind: *kind,
                })
            })
            .take(ds.len())
            .map(|n| n.to_string())
            .collect();
        if targets.len() < ds.len() {
            return t.tidy();
        }
        groups.push((ds.clone(), targets));
    }

    let greek: Vec<IndexKey> = dummy_keys
        .iter()
        .filter(|k| k.kind == IndexKind::Spacetime)
        .cloned()
        .collect();

    let per_group: Vec<Vec<Vec<String>>> = groups
        .iter()
        .map(|(ds, targets)| targets.iter().cloned().permutations(ds.len()).collect())
        .collect();

    let mut best: Option<T> = None;
    for choice in per_group.iter().map(|v| v.iter()).multi_cartesian_product() {
        for flips in 0u32..(1u32 << greek.len()) {
            let mut map = HashMap::new();
            for ((ds, _), names) in groups.iter().zip(choice.iter()) {
                for (d, n) in ds.iter().zip(names.iter()) {
                    let flip = greek
                        .iter()
                        .position(|g| g == d)
                        .map(|p| flips & (1 << p) != 0)
                        .unwrap_or(false);
                    map.insert(
                        d.clone(),
                        Rename {
                            name: n.clone(),
                            flip,
                        },
                    );
                }
            }
            let cand = t.renamed(&map).tidy();
            match &best {
                Some(b) if b.key() <= cand.key() => {}
                _ => best = Some(cand),
            }
        }
    }
    best.unwrap_or_else(|| t.tidy())
}
