//! Finite polarized posets: layer filtration, maximal chains, chain classes
//! and the transport maps between them, plus the shelter predicates the ring
//! construction keys on.
//!
//! Elements are kept as bit positions in `u64` masks; the public API speaks
//! both indices and names. The *polar* subset is an arbitrary lower set used
//! as metadata by the ring layer (it selects the row-finite flavor of a
//! component); nothing here depends on it beyond validation.

use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PosetError {
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("duplicate element `{0}`")]
    DuplicateElement(String),
    #[error("order contains a cycle through `{0}` and `{1}`")]
    Cycle(String, String),
    #[error("polar subset is not a lower set: `{0}` is polar but `{1}` <= `{0}` is not")]
    PolarNotLower(String, String),
    #[error("the empty poset is not admitted")]
    Empty,
    #[error("at most 64 elements are supported, got {0}")]
    TooLarge(usize),
    #[error("subset is not a lower set")]
    NotLowerSet,
    #[error("subset is not an upper set")]
    NotUpperSet,
    #[error("chain {0} does not belong to the source class")]
    ChainNotInClass(usize),
    #[error("classes belong to different owners")]
    ClassOwnerMismatch,
    #[error("poset has {n} elements, exceeding the enumeration bound {bound}")]
    ResourceBound { n: usize, bound: usize },
}

/// JSON document shape for poset input and output.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PosetDoc {
    pub elements: Vec<String>,
    pub relations: Vec<(String, String)>,
    #[serde(default)]
    pub polar: Vec<String>,
}

/// A maximal-chain inventory with constant-time lookup by element set.
#[derive(Debug, Clone)]
pub struct ChainSet {
    chains: Vec<Vec<usize>>,
    masks: Vec<u64>,
    by_mask: HashMap<u64, usize>,
}

impl ChainSet {
    pub fn len(&self) -> usize {
        self.chains.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chains.is_empty()
    }

    /// Elements of chain `chi` in ascending order.
    pub fn chain(&self, chi: usize) -> &[usize] {
        &self.chains[chi]
    }

    pub fn mask(&self, chi: usize) -> u64 {
        self.masks[chi]
    }

    pub fn index_of_mask(&self, mask: u64) -> Option<usize> {
        self.by_mask.get(&mask).copied()
    }

    /// Chains passing through element `i`, ascending.
    pub fn through(&self, i: usize) -> Vec<usize> {
        (0..self.len())
            .filter(|&c| self.masks[c] >> i & 1 == 1)
            .collect()
    }
}

/// One equivalence class of maximal chains through an element: all chains
/// that agree below the owner.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainClass {
    pub owner: usize,
    /// Common part of the member chains at or below the owner.
    pub below: u64,
    /// Member chain indices, ascending.
    pub chis: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct PolarizedPoset {
    names: Vec<String>,
    index: BTreeMap<String, usize>,
    /// `up[i]` has bit `j` set iff `i <= j`.
    up: Vec<u64>,
    /// `down[i]` has bit `j` set iff `j <= i`.
    down: Vec<u64>,
    polar: u64,
    lambda_min: Vec<u32>,
}

impl PolarizedPoset {
    /// Builds a poset from generating relations; the reflexive-transitive
    /// closure is computed here. Rejects cycles, unknown or duplicate
    /// elements, an empty element list and a polar set that is not lower.
    pub fn from_relations(
        elements: &[&str],
        relations: &[(&str, &str)],
        polar: &[&str],
    ) -> Result<Self, PosetError> {
        if elements.is_empty() {
            return Err(PosetError::Empty);
        }
        if elements.len() > 64 {
            return Err(PosetError::TooLarge(elements.len()));
        }
        let mut index = BTreeMap::new();
        for (i, name) in elements.iter().enumerate() {
            if index.insert(name.to_string(), i).is_some() {
                return Err(PosetError::DuplicateElement(name.to_string()));
            }
        }
        let n = elements.len();
        let look = |name: &str| -> Result<usize, PosetError> {
            index
                .get(name)
                .copied()
                .ok_or_else(|| PosetError::UnknownElement(name.to_string()))
        };
        let mut up: Vec<u64> = (0..n).map(|i| 1u64 << i).collect();
        for (a, b) in relations {
            let (a, b) = (look(a)?, look(b)?);
            up[a] |= 1 << b;
        }
        // Reflexive-transitive closure.
        for k in 0..n {
            for i in 0..n {
                if up[i] >> k & 1 == 1 {
                    up[i] |= up[k];
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && up[i] >> j & 1 == 1 && up[j] >> i & 1 == 1 {
                    return Err(PosetError::Cycle(
                        elements[i].to_string(),
                        elements[j].to_string(),
                    ));
                }
            }
        }
        let mut down = vec![0u64; n];
        // Bit-matrix transpose; the indices double as bit positions.
        #[allow(clippy::needless_range_loop)]
        for i in 0..n {
            for j in 0..n {
                if up[j] >> i & 1 == 1 {
                    down[i] |= 1 << j;
                }
            }
        }
        let mut polar_mask = 0u64;
        for p in polar {
            polar_mask |= 1 << look(p)?;
        }
        for i in 0..n {
            if polar_mask >> i & 1 == 1 {
                for j in 0..n {
                    if down[i] >> j & 1 == 1 && polar_mask >> j & 1 == 0 {
                        return Err(PosetError::PolarNotLower(
                            elements[i].to_string(),
                            elements[j].to_string(),
                        ));
                    }
                }
            }
        }
        // Minimal layer index: 0 on minimal elements, else one past the
        // largest value strictly below. Processing by down-set size makes
        // every predecessor available.
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| down[i].count_ones());
        let mut lambda_min = vec![0u32; n];
        for &i in &order {
            let mut lam = 0;
            #[allow(clippy::needless_range_loop)]
            for j in 0..n {
                if j != i && down[i] >> j & 1 == 1 {
                    lam = lam.max(lambda_min[j] + 1);
                }
            }
            lambda_min[i] = lam;
        }
        Ok(PolarizedPoset {
            names: elements.iter().map(|s| s.to_string()).collect(),
            index,
            up,
            down,
            polar: polar_mask,
            lambda_min,
        })
    }

    pub fn from_doc(doc: &PosetDoc) -> Result<Self, PosetError> {
        let elements: Vec<&str> = doc.elements.iter().map(|s| s.as_str()).collect();
        let relations: Vec<(&str, &str)> = doc
            .relations
            .iter()
            .map(|(a, b)| (a.as_str(), b.as_str()))
            .collect();
        let polar: Vec<&str> = doc.polar.iter().map(|s| s.as_str()).collect();
        Self::from_relations(&elements, &relations, &polar)
    }

    /// Canonical document: covering relations only.
    pub fn to_doc(&self) -> PosetDoc {
        let mut relations = Vec::new();
        for i in 0..self.n() {
            for j in self.iter_mask(self.covers(i)) {
                relations.push((self.names[i].clone(), self.names[j].clone()));
            }
        }
        PosetDoc {
            elements: self.names.clone(),
            relations,
            polar: self
                .iter_mask(self.polar)
                .map(|i| self.names[i].clone())
                .collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn idx(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn full_mask(&self) -> u64 {
        if self.n() == 64 {
            u64::MAX
        } else {
            (1u64 << self.n()) - 1
        }
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.up[i] >> j & 1 == 1
    }

    pub fn lt(&self, i: usize, j: usize) -> bool {
        i != j && self.leq(i, j)
    }

    pub fn comparable(&self, i: usize, j: usize) -> bool {
        self.leq(i, j) || self.leq(j, i)
    }

    /// `{j : i <= j}` as a mask, including `i`.
    pub fn up_mask(&self, i: usize) -> u64 {
        self.up[i]
    }

    /// `{j : j <= i}` as a mask, including `i`.
    pub fn down_mask(&self, i: usize) -> u64 {
        self.down[i]
    }

    /// `{x : x <= s for some s in set}`.
    pub fn below_mask(&self, set: u64) -> u64 {
        self.iter_mask(set).fold(0, |m, i| m | self.down[i])
    }

    /// `{x : s <= x for some s in set}`.
    pub fn above_mask(&self, set: u64) -> u64 {
        self.iter_mask(set).fold(0, |m, i| m | self.up[i])
    }

    pub fn is_polar(&self, i: usize) -> bool {
        self.polar >> i & 1 == 1
    }

    pub fn polar_mask(&self) -> u64 {
        self.polar
    }

    pub fn is_maximal(&self, i: usize) -> bool {
        self.up[i] == 1 << i
    }

    pub fn is_minimal(&self, i: usize) -> bool {
        self.down[i] == 1 << i
    }

    pub fn maximal_mask(&self) -> u64 {
        (0..self.n())
            .filter(|&i| self.is_maximal(i))
            .fold(0, |m, i| m | 1 << i)
    }

    pub fn iter_mask(&self, mask: u64) -> impl Iterator<Item = usize> + '_ {
        (0..self.n()).filter(move |&i| mask >> i & 1 == 1)
    }

    pub fn is_lower_set(&self, mask: u64) -> bool {
        self.iter_mask(mask).all(|i| self.down[i] & !mask == 0)
    }

    pub fn is_upper_set(&self, mask: u64) -> bool {
        self.iter_mask(mask).all(|i| self.up[i] & !mask == 0)
    }

    /// Zero-based minimal layer index.
    pub fn lambda_min(&self, i: usize) -> u32 {
        self.lambda_min[i]
    }

    /// One-based canonical length: the index of the layer containing `i`.
    pub fn lambda_canonical(&self, i: usize) -> u32 {
        self.lambda_min[i] + 1
    }

    /// Number of layers.
    pub fn xi(&self) -> u32 {
        1 + self.lambda_min.iter().copied().max().unwrap_or(0)
    }

    /// Layers in order; layer `k` (zero-based) holds the elements of
    /// canonical length `k + 1`. They partition the element set.
    pub fn layers(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.xi() as usize];
        for i in 0..self.n() {
            out[self.lambda_min[i] as usize].push(i);
        }
        out
    }

    /// Mask of the lower subset swallowed by the first `alpha` layers.
    pub fn filtration_mask(&self, alpha: u32) -> u64 {
        (0..self.n())
            .filter(|&i| self.lambda_min[i] < alpha)
            .fold(0, |m, i| m | 1 << i)
    }

    /// Restriction of `self` to `mask`, with the original indices of the
    /// kept elements.
    pub fn induced(&self, mask: u64) -> (PolarizedPoset, Vec<usize>) {
        let kept: Vec<usize> = self.iter_mask(mask).collect();
        let names: Vec<&str> = kept.iter().map(|&i| self.name(i)).collect();
        let mut rel = Vec::new();
        for (a, &i) in kept.iter().enumerate() {
            for (b, &j) in kept.iter().enumerate() {
                if a != b && self.leq(i, j) {
                    rel.push((names[a], names[b]));
                }
            }
        }
        let polar: Vec<&str> = kept
            .iter()
            .filter(|&&i| self.is_polar(i))
            .map(|&i| self.name(i))
            .collect();
        let sub = PolarizedPoset::from_relations(&names, &rel, &polar)
            .expect("restriction of a valid poset is valid");
        (sub, kept)
    }

    /// Checks that the layers of a lower subset are the traces of the
    /// ambient layers on it. Errs when `mask` is not a lower set.
    pub fn layer_restriction_agrees(&self, mask: u64) -> Result<bool, PosetError> {
        if !self.is_lower_set(mask) {
            return Err(PosetError::NotLowerSet);
        }
        if mask == 0 {
            return Ok(true);
        }
        let (sub, kept) = self.induced(mask);
        Ok(kept
            .iter()
            .enumerate()
            .all(|(s, &i)| sub.lambda_min(s) == self.lambda_min(i)))
    }

    /// Elements covering `i`.
    pub fn covers(&self, i: usize) -> u64 {
        let strict_up = self.up[i] & !(1 << i);
        let mut out = 0;
        for j in self.iter_mask(strict_up) {
            let between = strict_up & self.down[j] & !(1 << j);
            if between == 0 {
                out |= 1 << j;
            }
        }
        out
    }

    /// All maximal chains, each ascending, listed in lexicographic order of
    /// their sorted member names.
    pub fn maximal_chains(&self) -> ChainSet {
        let mut starts: Vec<usize> = (0..self.n()).filter(|&i| self.is_minimal(i)).collect();
        starts.sort_by_key(|&i| (self.lambda_min[i], self.name(i).to_string()));
        let mut chains: Vec<Vec<usize>> = Vec::new();
        let mut stack: Vec<Vec<usize>> = starts.into_iter().map(|i| vec![i]).collect();
        stack.reverse();
        while let Some(chain) = stack.pop() {
            let top = *chain.last().unwrap();
            if self.is_maximal(top) {
                chains.push(chain);
                continue;
            }
            let mut nexts: Vec<usize> = self.iter_mask(self.covers(top)).collect();
            nexts.sort_by_key(|&i| (self.lambda_min[i], self.name(i).to_string()));
            for j in nexts.into_iter().rev() {
                let mut c = chain.clone();
                c.push(j);
                stack.push(c);
            }
        }
        chains.sort_by_key(|c| {
            let mut names: Vec<&str> = c.iter().map(|&i| self.name(i)).collect();
            names.sort();
            names.into_iter().map(|s| s.to_string()).collect::<Vec<_>>()
        });
        let masks: Vec<u64> = chains
            .iter()
            .map(|c| c.iter().fold(0u64, |m, &i| m | 1 << i))
            .collect();
        let by_mask = masks.iter().enumerate().map(|(k, &m)| (m, k)).collect();
        ChainSet {
            chains,
            masks,
            by_mask,
        }
    }

    /// Classes of maximal chains through `i`: two chains are identified when
    /// they agree at and below `i`. Classes are ordered by least member
    /// chain; together they partition the chains through `i`.
    pub fn chain_classes(&self, chains: &ChainSet, i: usize) -> Vec<ChainClass> {
        let mut classes: Vec<ChainClass> = Vec::new();
        for chi in chains.through(i) {
            let below = chains.mask(chi) & self.down[i];
            match classes.iter_mut().find(|c| c.below == below) {
                Some(c) => c.chis.push(chi),
                None => classes.push(ChainClass {
                    owner: i,
                    below,
                    chis: vec![chi],
                }),
            }
        }
        classes.sort_by_key(|c| c.chis[0]);
        classes
    }

    /// Transports a member chain of `from` to the class `to` by swapping the
    /// part at or below the shared owner. Returns the index of the image
    /// chain.
    pub fn class_transport(
        &self,
        chains: &ChainSet,
        from: &ChainClass,
        to: &ChainClass,
        chi: usize,
    ) -> Result<usize, PosetError> {
        if from.owner != to.owner {
            return Err(PosetError::ClassOwnerMismatch);
        }
        if !from.chis.contains(&chi) {
            return Err(PosetError::ChainNotInClass(chi));
        }
        let image = to.below | (chains.mask(chi) & self.up[from.owner]);
        Ok(chains
            .index_of_mask(image)
            .expect("transported chain is maximal"))
    }

    /// Connected components of the comparability graph, each as a mask,
    /// ordered by least element.
    pub fn connected_components(&self) -> Vec<u64> {
        let n = self.n();
        let mut seen = 0u64;
        let mut out = Vec::new();
        for i in 0..n {
            if seen >> i & 1 == 1 {
                continue;
            }
            let mut comp = 1u64 << i;
            loop {
                let mut grown = comp;
                for j in self.iter_mask(comp) {
                    grown |= self.up[j] | self.down[j];
                }
                if grown == comp {
                    break;
                }
                comp = grown;
            }
            seen |= comp;
            out.push(comp);
        }
        out
    }

    pub fn is_chain(&self) -> bool {
        (0..self.n()).all(|i| (0..self.n()).all(|j| self.comparable(i, j)))
    }

    pub fn is_antichain(&self) -> bool {
        (0..self.n()).all(|i| (0..self.n()).all(|j| i == j || !self.comparable(i, j)))
    }

    /// True when the poset is a disjoint union of chains.
    pub fn is_forest_of_chains(&self) -> bool {
        self.connected_components()
            .into_iter()
            .all(|m| self.induced(m).0.is_chain())
    }

    /// Maximal elements of the whole poset lying above the subset.
    pub fn max_of(&self, mask: u64) -> u64 {
        self.maximal_mask() & self.above_mask(mask)
    }

    /// Literal three-clause evaluation: `max J` finite (always, here), every
    /// member of `J` lies below `max J`, and `max J` is contained in `J`.
    pub fn is_finitely_sheltered(&self, mask: u64) -> bool {
        if mask == 0 {
            return true;
        }
        let maxes = self.max_of(mask);
        let sheltered = self.below_mask(maxes);
        mask & !sheltered == 0 && maxes & !mask == 0
    }

    /// All upper subsets as masks, ordered by (size, mask). The bound caps
    /// the number of elements, since enumeration walks `2^n` subsets.
    pub fn upper_sets(&self, bound: usize) -> Result<Vec<u64>, PosetError> {
        if self.n() > bound {
            return Err(PosetError::ResourceBound { n: self.n(), bound });
        }
        let mut out: Vec<u64> = (0..=self.full_mask())
            .filter(|&m| self.is_upper_set(m))
            .collect();
        out.sort_by_key(|&m| (m.count_ones(), m));
        Ok(out)
    }

    /// Hasse diagram in DOT form (covering edges only, drawn upward).
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph hasse {\n  rankdir=BT;\n  node [shape=ellipse];\n");
        for i in 0..self.n() {
            let style = if self.is_polar(i) {
                " [peripheries=2]"
            } else {
                ""
            };
            let _ = writeln!(s, "  \"{}\"{};", self.name(i), style);
        }
        for i in 0..self.n() {
            for j in self.iter_mask(self.covers(i)) {
                let _ = writeln!(s, "  \"{}\" -> \"{}\";", self.name(i), self.name(j));
            }
        }
        s.push_str("}\n");
        s
    }
}
