//! Exhaustive enumeration of finite posets up to isomorphism, used by the
//! verification sweeps. Posets are grown one element at a time by choosing a
//! compatible (down-set, up-set) pair for the new element; duplicates are
//! collapsed through a canonical form minimized over all permutations.

use crate::poset::PolarizedPoset;
use std::collections::HashSet;

/// Strict-order adjacency on `n` elements, `rel[i] >> j & 1 == 1` iff `i < j`.
#[derive(Clone)]
struct Strict {
    n: usize,
    rel: Vec<u16>,
}

impl Strict {
    fn key(&self) -> u64 {
        let mut perm: Vec<usize> = (0..self.n).collect();
        let mut best = u64::MAX;
        permute(&mut perm, 0, &mut |p| {
            let mut bits = 0u64;
            for i in 0..self.n {
                for j in 0..self.n {
                    if self.rel[p[i]] >> p[j] & 1 == 1 {
                        bits |= 1 << (i * self.n + j);
                    }
                }
            }
            best = best.min(bits);
        });
        best
    }
}

fn permute(items: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, visit);
        items.swap(k, i);
    }
}

/// All posets with exactly `n` elements, one representative per isomorphism
/// class, in a deterministic order. Elements are named `a`, `b`, ... and the
/// polar subset is empty.
pub fn posets_of_size(n: usize) -> Vec<PolarizedPoset> {
    assert!((1..=7).contains(&n), "enumeration supports 1..=7 elements");
    let mut level: Vec<Strict> = vec![Strict {
        n: 0,
        rel: Vec::new(),
    }];
    for m in 0..n {
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        for base in &level {
            for down in 0u16..1 << m {
                // The chosen down-set must be downward closed.
                if (0..m).any(|d| {
                    down >> d & 1 == 1 && {
                        let preds = (0..m).fold(0u16, |acc, x| {
                            if base.rel[x] >> d & 1 == 1 {
                                acc | 1 << x
                            } else {
                                acc
                            }
                        });
                        preds & !down != 0
                    }
                }) {
                    continue;
                }
                'upper: for up in 0u16..1 << m {
                    if down & up != 0 {
                        continue;
                    }
                    for u in 0..m {
                        if up >> u & 1 == 1 {
                            // Upward closed, and everything below the new
                            // element must already sit below everything above.
                            if base.rel[u] & !up != 0 {
                                continue 'upper;
                            }
                            for d in 0..m {
                                if down >> d & 1 == 1 && base.rel[d] >> u & 1 == 0 {
                                    continue 'upper;
                                }
                            }
                        }
                    }
                    let mut rel = base.rel.clone();
                    rel.push(up);
                    for (d, r) in rel.iter_mut().take(m).enumerate() {
                        if down >> d & 1 == 1 {
                            *r |= 1 << m;
                        }
                    }
                    let cand = Strict { n: m + 1, rel };
                    if seen.insert(cand.key()) {
                        next.push(cand);
                    }
                }
            }
        }
        level = next;
    }
    let mut keyed: Vec<(u64, Strict)> = level.into_iter().map(|s| (s.key(), s)).collect();
    keyed.sort_by_key(|(k, _)| *k);
    keyed
        .into_iter()
        .map(|(_, s)| {
            let names: Vec<String> = (0..n)
                .map(|i| ((b'a' + i as u8) as char).to_string())
                .collect();
            let name_refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
            let mut relations = Vec::new();
            for i in 0..n {
                for j in 0..n {
                    if s.rel[i] >> j & 1 == 1 {
                        relations.push((name_refs[i], name_refs[j]));
                    }
                }
            }
            PolarizedPoset::from_relations(&name_refs, &relations, &[])
                .expect("enumerated order is valid")
        })
        .collect()
}

/// All posets with `1..=n` elements up to isomorphism.
pub fn posets_up_to_size(n: usize) -> Vec<PolarizedPoset> {
    (1..=n).flat_map(posets_of_size).collect()
}
