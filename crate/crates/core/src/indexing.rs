//! The interval atlas: a coordinate space of extent `B^(xi+1) * beth` (one
//! top-level interval per maximal chain), aligned sub-intervals of length
//! `B^level` at every level, and the chain-indexed coordinate changes that
//! let one block family per poset element act across all of its chain
//! classes.
//!
//! The base `B` is either the first infinite ordinal (exact semantics) or a
//! finite `n >= 2` (the dense-evaluation shadow). All block arithmetic is
//! positional and identical in both; at a finite base the representative
//! pairing is injective rather than bijective, and the valid block indices of
//! an element form the proper subset [`ChainAtlas::in_index_range`] accepts.

use crate::ordinal::{Ordinal, OrdinalError};
use crate::poset::{ChainClass, ChainSet, PolarizedPoset, PosetError};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IndexError {
    #[error("finite base must be at least 2, got {0}")]
    BadBase(u64),
    #[error("level {level} exceeds the maximum {max}")]
    LevelOutOfRange { level: u32, max: u32 },
    #[error("block index {block} out of range {range} at level {level}")]
    BlockOutOfRange {
        block: Ordinal,
        range: Ordinal,
        level: u32,
    },
    #[error("coordinate {x} lies outside the addressed set")]
    OutsideDomain { x: Ordinal },
    #[error("index {index} is not in the image of the pairing at this base")]
    NotAddressable { index: Ordinal },
    #[error("chain {0} is not a member of the class")]
    ChainNotInClass(usize),
    #[error("refinement target {target} is not below level {level}")]
    BadRefinement { target: u32, level: u32 },
    #[error(transparent)]
    Ordinal(#[from] OrdinalError),
    #[error(transparent)]
    Poset(#[from] PosetError),
}

/// Positional base of the coordinate space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Base {
    Omega,
    Finite(u64),
}

impl Base {
    pub fn as_ordinal(&self) -> Ordinal {
        match self {
            Base::Omega => Ordinal::omega(),
            Base::Finite(n) => Ordinal::from_nat(*n),
        }
    }

    pub fn finite(&self) -> Option<u64> {
        match self {
            Base::Omega => None,
            Base::Finite(n) => Some(*n),
        }
    }
}

/// An aligned interval: `[B^level * block, B^level * (block + 1))`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Interval {
    pub level: u32,
    pub block: Ordinal,
}

impl Interval {
    pub fn new(level: u32, block: Ordinal) -> Self {
        Interval { level, block }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntervalRelation {
    Disjoint,
    Equal,
    FirstContainsSecond,
    SecondContainsFirst,
}

/// Lazy refinement of an interval into its level-`level` sub-blocks; the
/// sub-block indices are `first + mu` for `mu < count`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Refinement {
    pub level: u32,
    pub first: Ordinal,
    pub count: Ordinal,
}

impl Refinement {
    pub fn nth(&self, mu: &Ordinal) -> Result<Interval, IndexError> {
        if mu >= &self.count {
            return Err(IndexError::BlockOutOfRange {
                block: mu.clone(),
                range: self.count.clone(),
                level: self.level,
            });
        }
        Ok(Interval::new(self.level, self.first.add(mu)))
    }

    /// Concrete block list; only when the count is finite.
    pub fn blocks(&self) -> Option<Vec<Interval>> {
        let count = self.count.nat()?;
        Some(
            (0..count)
                .map(|mu| Interval::new(self.level, self.first.add(&Ordinal::from_nat(mu))))
                .collect(),
        )
    }
}

/// The ambient coordinate space.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexSpace {
    base: Base,
    xi: u32,
    beth: u64,
}

impl IndexSpace {
    pub fn new(base: Base, xi: u32, beth: u64) -> Result<Self, IndexError> {
        if let Base::Finite(n) = base {
            if n < 2 {
                return Err(IndexError::BadBase(n));
            }
        }
        assert!(beth >= 1, "at least one maximal chain");
        Ok(IndexSpace { base, xi, beth })
    }

    pub fn base(&self) -> Base {
        self.base
    }

    pub fn xi(&self) -> u32 {
        self.xi
    }

    pub fn beth(&self) -> u64 {
        self.beth
    }

    /// Top level: intervals of this level are the per-chain slices.
    pub fn top_level(&self) -> u32 {
        self.xi + 1
    }

    /// `B^k`.
    pub fn bp(&self, k: u32) -> Ordinal {
        Ordinal::pow_nat(&self.base.as_ordinal(), k).expect("base power in range")
    }

    /// Total extent `B^(xi+1) * beth`.
    pub fn extent(&self) -> Ordinal {
        self.bp(self.top_level())
            .multiply(&Ordinal::from_nat(self.beth))
    }

    /// Number of blocks at a level: `B^(xi+1-level) * beth`.
    pub fn block_range(&self, level: u32) -> Result<Ordinal, IndexError> {
        if level > self.top_level() {
            return Err(IndexError::LevelOutOfRange {
                level,
                max: self.top_level(),
            });
        }
        Ok(self
            .bp(self.top_level() - level)
            .multiply(&Ordinal::from_nat(self.beth)))
    }

    pub fn check_interval(&self, iv: &Interval) -> Result<(), IndexError> {
        let range = self.block_range(iv.level)?;
        if iv.block >= range {
            return Err(IndexError::BlockOutOfRange {
                block: iv.block.clone(),
                range,
                level: iv.level,
            });
        }
        Ok(())
    }

    /// Splits `x = B^level * q + r`.
    pub fn split(&self, x: &Ordinal, level: u32) -> (Ordinal, Ordinal) {
        let (q, r) = x.divide(&self.bp(level)).expect("base power is nonzero");
        (q, r)
    }

    pub fn interval_start(&self, iv: &Interval) -> Ordinal {
        self.bp(iv.level).multiply(&iv.block)
    }

    /// The level-`level` block containing `x`, with the offset of `x` in it.
    pub fn locate(&self, x: &Ordinal, level: u32) -> (Interval, Ordinal) {
        let (q, r) = self.split(x, level);
        (Interval::new(level, q), r)
    }

    pub fn contains(&self, outer: &Interval, inner: &Interval) -> bool {
        if inner.level > outer.level {
            return false;
        }
        let (q, _) = inner
            .block
            .divide(&self.bp(outer.level - inner.level))
            .unwrap();
        q == outer.block
    }

    pub fn relate(&self, a: &Interval, b: &Interval) -> IntervalRelation {
        if a == b {
            IntervalRelation::Equal
        } else if self.contains(a, b) {
            IntervalRelation::FirstContainsSecond
        } else if self.contains(b, a) {
            IntervalRelation::SecondContainsFirst
        } else {
            IntervalRelation::Disjoint
        }
    }

    pub fn meets(&self, a: &Interval, b: &Interval) -> bool {
        self.relate(a, b) != IntervalRelation::Disjoint
    }

    /// Offset of the start of `inner` within `outer`; requires containment.
    pub fn offset_within(&self, outer: &Interval, inner: &Interval) -> Result<Ordinal, IndexError> {
        if !self.contains(outer, inner) {
            return Err(IndexError::OutsideDomain {
                x: self.interval_start(inner),
            });
        }
        Ok(self
            .interval_start(outer)
            .left_subtract(&self.interval_start(inner))
            .expect("containment gives ordering"))
    }

    /// Sub-blocks of `iv` at a strictly lower level.
    pub fn refine(&self, iv: &Interval, level: u32) -> Result<Refinement, IndexError> {
        if level >= iv.level {
            return Err(IndexError::BadRefinement {
                target: level,
                level: iv.level,
            });
        }
        let delta = iv.level - level;
        Ok(Refinement {
            level,
            first: self.bp(delta).multiply(&iv.block),
            count: self.bp(delta),
        })
    }

    /// Natural value of a coordinate; at a finite base every coordinate
    /// below the extent is one.
    pub fn eval_abs(&self, x: &Ordinal) -> Result<u64, IndexError> {
        self.base
            .finite()
            .expect("dense evaluation needs a finite base");
        match x.nat() {
            Some(v) if x < &self.extent() => Ok(v),
            _ => Err(IndexError::OutsideDomain { x: x.clone() }),
        }
    }

    /// Natural value of a block index at a level.
    pub fn eval_block(&self, level: u32, block: &Ordinal) -> Result<u64, IndexError> {
        self.base
            .finite()
            .expect("dense evaluation needs a finite base");
        let range = self.block_range(level)?;
        match block.nat() {
            Some(v) if block < &range => Ok(v),
            _ => Err(IndexError::BlockOutOfRange {
                block: block.clone(),
                range,
                level,
            }),
        }
    }

    /// Side length of a level block as a natural, at a finite base.
    pub fn eval_len(&self, level: u32) -> u64 {
        let n = self
            .base
            .finite()
            .expect("dense evaluation needs a finite base");
        n.pow(level)
    }
}

/// The full atlas for one poset at one base: chain inventory, chain classes
/// per element, and the representative pairings.
#[derive(Debug, Clone)]
pub struct ChainAtlas {
    space: IndexSpace,
    poset: PolarizedPoset,
    chains: ChainSet,
    classes: Vec<Vec<ChainClass>>,
}

impl ChainAtlas {
    pub fn new(poset: PolarizedPoset, base: Base) -> Result<Self, IndexError> {
        let chains = poset.maximal_chains();
        let space = IndexSpace::new(base, poset.xi(), chains.len() as u64)?;
        let classes = (0..poset.n())
            .map(|i| poset.chain_classes(&chains, i))
            .collect();
        Ok(ChainAtlas {
            space,
            poset,
            chains,
            classes,
        })
    }

    pub fn space(&self) -> &IndexSpace {
        &self.space
    }

    pub fn poset(&self) -> &PolarizedPoset {
        &self.poset
    }

    pub fn chains(&self) -> &ChainSet {
        &self.chains
    }

    /// Canonical length of the element: the level its blocks live at.
    pub fn level_of(&self, i: usize) -> u32 {
        self.poset.lambda_canonical(i)
    }

    /// Exponent of the block-index range of the element.
    pub fn e_of(&self, i: usize) -> u32 {
        self.space.top_level() - self.level_of(i)
    }

    /// Block-index range of the element: `B^e * beth`.
    pub fn index_range(&self, i: usize) -> Ordinal {
        self.space
            .bp(self.e_of(i))
            .multiply(&Ordinal::from_nat(self.space.beth()))
    }

    pub fn classes(&self, i: usize) -> &[ChainClass] {
        &self.classes[i]
    }

    /// Representative class: the one holding the least-index chain through i.
    pub fn rep_class(&self, i: usize) -> &ChainClass {
        &self.classes[i][0]
    }

    fn rank_in(class: &ChainClass, chi: usize) -> Result<usize, IndexError> {
        class
            .chis
            .binary_search(&chi)
            .map_err(|_| IndexError::ChainNotInClass(chi))
    }

    /// Membership of a block index in the local family of a class: the top
    /// coefficient must be a member chain.
    pub fn in_lambda(&self, i: usize, class: &ChainClass, lam: &Ordinal) -> bool {
        let (chi, _) = self.space.split(lam, self.e_of(i));
        matches!(chi.nat(), Some(c) if class.chis.contains(&(c as usize)))
    }

    /// Chain-part transport of a local block index between two classes of
    /// the same element.
    pub fn k_between(
        &self,
        i: usize,
        from: &ChainClass,
        to: &ChainClass,
        lam: &Ordinal,
    ) -> Result<Ordinal, IndexError> {
        let e = self.e_of(i);
        let (chi, sigma) = self.space.split(lam, e);
        let chi =
            chi.nat()
                .ok_or_else(|| IndexError::OutsideDomain { x: lam.clone() })? as usize;
        let image = self.poset.class_transport(&self.chains, from, to, chi)?;
        Ok(self
            .space
            .bp(e)
            .multiply(&Ordinal::from_nat(image as u64))
            .add(&sigma))
    }

    /// The explicit pairing of the representative class: interleaves the
    /// member-chain rank with the digit under the top one. A bijection from
    /// the local family onto the block-index range at base omega, injective
    /// with image [`Self::in_index_range`] at a finite base. Every element
    /// sits strictly below the top level, so the digit to interleave always
    /// exists.
    pub fn k_rep(&self, i: usize, lam: &Ordinal) -> Result<Ordinal, IndexError> {
        let rep = self.rep_class(i);
        let e = self.e_of(i);
        let (chi, sigma) = self.space.split(lam, e);
        let chi =
            chi.nat()
                .ok_or_else(|| IndexError::OutsideDomain { x: lam.clone() })? as usize;
        let c = Self::rank_in(rep, chi)? as u64;
        let m = rep.chis.len() as u64;
        let (q, r) = self.space.split(&sigma, e - 1);
        let q = q
            .nat()
            .ok_or_else(|| IndexError::OutsideDomain { x: lam.clone() })?;
        let t = q * m + c;
        let beth = self.space.beth();
        let (q1, c1) = (t / beth, t % beth);
        Ok(self
            .space
            .bp(e)
            .multiply(&Ordinal::from_nat(c1))
            .add(&self.space.bp(e - 1).multiply(&Ordinal::from_nat(q1)))
            .add(&r))
    }

    /// Inverse of [`Self::k_rep`]. At a finite base this is exactly where the
    /// truncation bites: indices outside the image err with `NotAddressable`.
    pub fn k_rep_inv(&self, i: usize, y: &Ordinal) -> Result<Ordinal, IndexError> {
        let rep = self.rep_class(i);
        let e = self.e_of(i);
        if y >= &self.index_range(i) {
            return Err(IndexError::BlockOutOfRange {
                block: y.clone(),
                range: self.index_range(i),
                level: self.level_of(i),
            });
        }
        let (c1, sigma1) = self.space.split(y, e);
        let c1 = c1
            .nat()
            .ok_or_else(|| IndexError::OutsideDomain { x: y.clone() })?;
        let (q1, r) = self.space.split(&sigma1, e - 1);
        let q1 = q1
            .nat()
            .ok_or_else(|| IndexError::OutsideDomain { x: y.clone() })?;
        let m = rep.chis.len() as u64;
        let t = q1 * self.space.beth() + c1;
        if let Some(n) = self.space.base().finite() {
            if t >= n * m {
                return Err(IndexError::NotAddressable { index: y.clone() });
            }
        }
        let (q, c) = (t / m, t % m);
        let chi = rep.chis[c as usize] as u64;
        Ok(self
            .space
            .bp(e)
            .multiply(&Ordinal::from_nat(chi))
            .add(&self.space.bp(e - 1).multiply(&Ordinal::from_nat(q)))
            .add(&r))
    }

    /// Full pairing of an arbitrary class, via the representative.
    pub fn k_map(
        &self,
        i: usize,
        class: &ChainClass,
        lam: &Ordinal,
    ) -> Result<Ordinal, IndexError> {
        let local = self.k_between(i, class, self.rep_class(i), lam)?;
        self.k_rep(i, &local)
    }

    pub fn k_inv(&self, i: usize, class: &ChainClass, y: &Ordinal) -> Result<Ordinal, IndexError> {
        let local = self.k_rep_inv(i, y)?;
        self.k_between(i, self.rep_class(i), class, &local)
    }

    /// Whether a block index of element `i` is addressable at this base
    /// (always true at base omega for in-range indices).
    pub fn in_index_range(&self, i: usize, y: &Ordinal) -> bool {
        self.k_rep_inv(i, y).is_ok()
    }

    /// All addressable block indices of the element; `None` at base omega.
    pub fn index_members(&self, i: usize) -> Option<Vec<Ordinal>> {
        let n = self.space.base().finite()?;
        let rep = self.rep_class(i);
        let e = self.e_of(i);
        let mut sub: u64 = 1;
        for _ in 0..e {
            sub *= n;
        }
        let mut out = Vec::new();
        for &chi in &rep.chis {
            for s in 0..sub {
                let lam = self
                    .space
                    .bp(e)
                    .multiply(&Ordinal::from_nat(chi as u64))
                    .add(&Ordinal::from_nat(s));
                out.push(self.k_rep(i, &lam).expect("member of the local family"));
            }
        }
        out.sort();
        out.into()
    }

    /// Absolute coordinate transport between classes (chain-slice swap).
    pub fn t_transport(
        &self,
        from: &ChainClass,
        to: &ChainClass,
        x: &Ordinal,
    ) -> Result<Ordinal, IndexError> {
        let top = self.space.top_level();
        let (chi, rho) = self.space.split(x, top);
        let chi = chi
            .nat()
            .ok_or_else(|| IndexError::OutsideDomain { x: x.clone() })? as usize;
        let image = self.poset.class_transport(&self.chains, from, to, chi)?;
        Ok(self
            .space
            .bp(top)
            .multiply(&Ordinal::from_nat(image as u64))
            .add(&rho))
    }

    /// The class chart: maps the slice of the class onto an initial part of
    /// the coordinate space, block by block at the element's level.
    pub fn t_map(&self, i: usize, class: &ChainClass, x: &Ordinal) -> Result<Ordinal, IndexError> {
        let level = self.level_of(i);
        let (lam, rho) = self.space.split(x, level);
        if !self.in_lambda(i, class, &lam) {
            return Err(IndexError::OutsideDomain { x: x.clone() });
        }
        let y = self.k_map(i, class, &lam)?;
        Ok(self.space.bp(level).multiply(&y).add(&rho))
    }

    pub fn t_inv(&self, i: usize, class: &ChainClass, y: &Ordinal) -> Result<Ordinal, IndexError> {
        let level = self.level_of(i);
        let (blk, rho) = self.space.split(y, level);
        let lam = self.k_inv(i, class, &blk)?;
        Ok(self.space.bp(level).multiply(&lam).add(&rho))
    }

    /// The interval family of a diagonal block index: one level-of-`i`
    /// interval inside each class slice, pairwise disjoint.
    pub fn y_intervals(&self, i: usize, y: &Ordinal) -> Result<Vec<Interval>, IndexError> {
        self.classes(i)
            .iter()
            .map(|a| Ok(Interval::new(self.level_of(i), self.k_inv(i, a, y)?)))
            .collect()
    }

    /// Top-level intervals of the slice of one class.
    pub fn class_intervals(&self, class: &ChainClass) -> Vec<Interval> {
        class
            .chis
            .iter()
            .map(|&chi| Interval::new(self.space.top_level(), Ordinal::from_nat(chi as u64)))
            .collect()
    }

    /// Top-level intervals of the element's whole slice (chains through it).
    pub fn x_intervals(&self, i: usize) -> Vec<Interval> {
        self.chains
            .through(i)
            .into_iter()
            .map(|chi| Interval::new(self.space.top_level(), Ordinal::from_nat(chi as u64)))
            .collect()
    }

    /// A deterministic family of addressable block indices used by the
    /// exhaustive product sweeps: the full addressable set when it has at
    /// most `cap` members, otherwise a structured subfamily covering every
    /// alignment case (chain offsets, low digits, top digits and mixes).
    pub fn index_family(&self, i: usize, cap: usize) -> Vec<Ordinal> {
        if let Some(all) = self.index_members(i) {
            if all.len() <= cap {
                return all;
            }
        }
        let e = self.e_of(i);
        let beth = self.space.beth();
        let digit_max = self.space.base().finite().unwrap_or(3).min(3);
        let mut cands: Vec<Ordinal> = vec![Ordinal::zero()];
        for chi in 0..beth.min(3) {
            cands.push(self.space.bp(e).multiply(&Ordinal::from_nat(chi)));
        }
        let mut positions = vec![0];
        if e >= 2 {
            positions.push(e - 1);
        }
        if e >= 3 {
            positions.push(1);
        }
        for &p in &positions {
            for c in 1..digit_max {
                cands.push(self.space.bp(p).multiply(&Ordinal::from_nat(c)));
                cands.push(
                    self.space
                        .bp(e)
                        .multiply(&Ordinal::from_nat(beth.min(2) - 1))
                        .add(&self.space.bp(p).multiply(&Ordinal::from_nat(c))),
                );
            }
        }
        if e >= 2 {
            cands.push(
                self.space
                    .bp(e - 1)
                    .multiply(&Ordinal::from_nat(1))
                    .add(&Ordinal::from_nat(1)),
            );
        }
        let mut out: Vec<Ordinal> = Vec::new();
        for c in cands {
            if c < self.index_range(i) && self.in_index_range(i, &c) && !out.contains(&c) {
                out.push(c);
            }
        }
        out.sort();
        out.truncate(cap);
        out
    }
}
