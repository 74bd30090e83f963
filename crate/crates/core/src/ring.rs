//! The layered block ring: one family of aligned identity blocks per poset
//! element, glued along the chain atlas.
//!
//! An element of the ring carries one [`BlockSum`] per poset element, the
//! part supported on that element's slice of the coordinate space. Products
//! of parts sitting on comparable poset elements land on the smaller of the
//! two; products across incomparable elements vanish because their slices
//! are disjoint, and every multiplication checks this.
//!
//! On top of the arithmetic the module exposes the structural layer: ideals
//! cut out by upper subsets, quotient projections between nested upper
//! subsets, the socle filtration, essentiality witnesses, annihilator masks
//! of the simple modules and the poset they reconstruct, the lattice
//! correspondence between upper subsets and ideals, and the central
//! idempotents of the connected components.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::blockmatrix::{BlockSum, Fp, PlacedBlock};
use crate::indexing::{Base, ChainAtlas, IndexError};
use crate::ordinal::Ordinal;
use crate::poset::{PolarizedPoset, PosetError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error("element {element} is maximal; interval generators live on non-maximal elements")]
    MaximalElement { element: usize },
    #[error("element {element} is not maximal; scalar summands live on maximal elements")]
    NotMaximalElement { element: usize },
    #[error("modulus {0} is not a prime")]
    NotPrime(u64),
    #[error("subset {mask:#b} is not an upper set")]
    NotUpper { mask: u64 },
    #[error("subset {mask:#b} is not contained in the ambient subset {ambient:#b}")]
    NotNested { mask: u64, ambient: u64 },
    #[error("subset {mask:#b} is not finitely sheltered: no identity exists on it")]
    NotSheltered { mask: u64 },
    #[error("the zero element is excluded here")]
    ZeroElement,
    #[error("part {element} lies outside the ambient subset")]
    OutsideSubring { element: usize },
    #[error("part {element} is not a span of interval generators")]
    NotCoherent { element: usize },
    #[error(transparent)]
    Index(#[from] IndexError),
    #[error(transparent)]
    Poset(#[from] PosetError),
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Immutable ambient data for one ring: the poset, its chain atlas at a
/// fixed base, and the scalar prime.
#[derive(Debug, Clone)]
pub struct RingContext {
    atlas: ChainAtlas,
    prime: u64,
}

/// Identifies a single generator: an interval generator `(i, row, col)` on a
/// non-maximal element, or the scalar summand of a maximal element (row and
/// col both zero by convention).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GenKey {
    pub element: usize,
    pub row: Ordinal,
    pub col: Ordinal,
}

impl GenKey {
    pub fn interval(element: usize, row: Ordinal, col: Ordinal) -> Self {
        GenKey { element, row, col }
    }

    pub fn scalar(element: usize) -> Self {
        GenKey {
            element,
            row: Ordinal::zero(),
            col: Ordinal::zero(),
        }
    }
}

/// A ring element: one block family per poset element, zero parts omitted.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct RingElement {
    parts: BTreeMap<usize, BlockSum>,
}

impl RingElement {
    pub fn zero() -> Self {
        RingElement::default()
    }

    fn from_parts(parts: BTreeMap<usize, BlockSum>) -> Self {
        let parts = parts.into_iter().filter(|(_, s)| !s.is_zero()).collect();
        RingElement { parts }
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn part(&self, i: usize) -> Option<&BlockSum> {
        self.parts.get(&i)
    }

    pub fn parts(&self) -> impl Iterator<Item = (usize, &BlockSum)> {
        self.parts.iter().map(|(&i, s)| (i, s))
    }

    /// Poset elements with a nonzero part, as a bit mask.
    pub fn support_mask(&self) -> u64 {
        self.parts.keys().fold(0u64, |m, &i| m | 1 << i)
    }

    /// Drop every part outside `mask`. Plain truncation: only a ring map
    /// when the kept subset is upper (see `quotient_projection`).
    pub fn restrict(&self, mask: u64) -> RingElement {
        let parts = self
            .parts
            .iter()
            .filter(|(&i, _)| mask >> i & 1 == 1)
            .map(|(&i, s)| (i, s.clone()))
            .collect();
        RingElement { parts }
    }

    pub fn add(&self, other: &RingElement) -> RingElement {
        let mut parts = self.parts.clone();
        for (&i, s) in &other.parts {
            let merged = match parts.get(&i) {
                Some(t) => t.add(s),
                None => s.clone(),
            };
            if merged.is_zero() {
                parts.remove(&i);
            } else {
                parts.insert(i, merged);
            }
        }
        RingElement { parts }
    }

    pub fn neg(&self) -> RingElement {
        let parts = self.parts.iter().map(|(&i, s)| (i, s.neg())).collect();
        RingElement { parts }
    }

    pub fn sub(&self, other: &RingElement) -> RingElement {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &Fp) -> RingElement {
        if s.is_zero() {
            return RingElement::zero();
        }
        let parts = self.parts.iter().map(|(&i, p)| (i, p.scale(s))).collect();
        RingElement::from_parts(parts)
    }

    /// All blocks of all parts in one sum, for dense evaluation.
    pub fn flatten(&self) -> BlockSum {
        self.parts
            .values()
            .fold(BlockSum::zero(), |acc, s| acc.add(s))
    }
}

/// An ideal named by the upper subset it omits: the handle with upper part
/// `S` denotes the span of all parts on `I \ S`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdealHandle {
    upper: u64,
}

impl IdealHandle {
    pub fn upper(&self) -> u64 {
        self.upper
    }
}

/// One failed closure probe: multiplying `inside` (a generator of the
/// candidate ideal) by `outside` (an arbitrary generator) on the given side
/// produced a part on `escaped`, which the candidate does not contain.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosureBreak {
    pub inside: GenKey,
    pub outside: GenKey,
    pub side: Side,
    pub escaped: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
}

/// Outcome of sweeping all generator products against a candidate subset.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosureEvidence {
    pub closed: bool,
    pub witness: Option<ClosureBreak>,
}

/// An essentiality certificate: an idempotent on a minimal element of the
/// ambient subset whose right action keeps the probed element nonzero.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EssentialWitness {
    pub element: usize,
    pub key: GenKey,
    pub idempotent: RingElement,
}

/// Outcome of checking the correspondence between upper subsets and ideals.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeReport {
    pub upper_sets: usize,
    pub bijective: bool,
    pub inclusion_reversing: bool,
    pub phi_after_psi: bool,
    pub psi_after_phi: bool,
}

impl LatticeReport {
    pub fn passed(&self) -> bool {
        self.bijective && self.inclusion_reversing && self.phi_after_psi && self.psi_after_phi
    }
}

/// One row of the height cross-check: the canonical length of the element
/// against the first socle stage containing its chosen idempotent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeightRow {
    pub element: String,
    pub lambda: u32,
    pub socle_level: u32,
}

/// Height and component summary of the simple-module family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WellBehavedReport {
    pub rows: Vec<HeightRow>,
    pub heights_match: bool,
    pub components: usize,
    pub maximal_elements: usize,
    pub well_behaved: bool,
    pub very_well_behaved: bool,
}

impl RingContext {
    pub fn new(poset: PolarizedPoset, base: Base, prime: u64) -> Result<Self, RingError> {
        if !is_prime(prime) {
            return Err(RingError::NotPrime(prime));
        }
        let atlas = ChainAtlas::new(poset, base)?;
        Ok(RingContext { atlas, prime })
    }

    pub fn atlas(&self) -> &ChainAtlas {
        &self.atlas
    }

    pub fn poset(&self) -> &PolarizedPoset {
        self.atlas.poset()
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn fp(&self, v: u64) -> Fp {
        Fp::new(v, self.prime)
    }

    /// The interval generator on a non-maximal element: the same
    /// `(row, col)` identity block placed once in every chain class of `i`.
    pub fn gen_unit(
        &self,
        i: usize,
        row: &Ordinal,
        col: &Ordinal,
        d: u64,
    ) -> Result<RingElement, RingError> {
        if self.poset().is_maximal(i) {
            return Err(RingError::MaximalElement { element: i });
        }
        // Validate addressability of both indices before looking at the
        // scalar, so range errors fire even for a zero coefficient.
        self.atlas.k_rep_inv(i, row)?;
        self.atlas.k_rep_inv(i, col)?;
        let level = self.atlas.level_of(i);
        let scalar = self.fp(d);
        let mut blocks = Vec::new();
        for class in self.atlas.classes(i) {
            let r = self.atlas.k_inv(i, class, row)?;
            let c = self.atlas.k_inv(i, class, col)?;
            blocks.push(PlacedBlock::new(level, r, c, scalar));
        }
        let sum = BlockSum::new(blocks);
        let mut parts = BTreeMap::new();
        parts.insert(i, sum);
        Ok(RingElement::from_parts(parts))
    }

    /// The diagonal idempotent at one addressable block index.
    pub fn gen_eyi(&self, i: usize, y: &Ordinal) -> Result<RingElement, RingError> {
        self.gen_unit(i, y, y, 1)
    }

    /// The scalar summand of a maximal element: `d` times the identity on
    /// its slice, one top-level diagonal block per chain through it.
    pub fn gen_max(&self, m: usize, d: u64) -> Result<RingElement, RingError> {
        if !self.poset().is_maximal(m) {
            return Err(RingError::NotMaximalElement { element: m });
        }
        let top = self.atlas.space().top_level();
        let scalar = self.fp(d);
        let blocks = self
            .atlas
            .chains()
            .through(m)
            .into_iter()
            .map(|chi| {
                let ix = Ordinal::from_nat(chi as u64);
                PlacedBlock::new(top, ix.clone(), ix, scalar)
            })
            .collect();
        let mut parts = BTreeMap::new();
        parts.insert(m, BlockSum::new(blocks));
        Ok(RingElement::from_parts(parts))
    }

    /// The multiplicative identity: the chain slices of the maximal elements
    /// partition the space, so their scalar summands sum to the identity.
    pub fn one(&self) -> RingElement {
        let poset = self.poset();
        let mut acc = RingElement::zero();
        for m in poset.iter_mask(poset.maximal_mask()) {
            let g = self
                .gen_max(m, 1)
                .expect("maximal elements carry scalar summands");
            acc = acc.add(&g);
        }
        acc
    }

    /// Rebuild a single generator from its key.
    pub fn gen_from_key(&self, key: &GenKey, d: u64) -> Result<RingElement, RingError> {
        if self.poset().is_maximal(key.element) {
            return self.gen_max(key.element, d);
        }
        self.gen_unit(key.element, &key.row, &key.col, d)
    }

    /// Human-readable form of a generator key for witness output.
    pub fn describe_gen(&self, key: &GenKey) -> String {
        let name = self.poset().name(key.element);
        if self.poset().is_maximal(key.element) {
            format!("unit[{name}]")
        } else {
            format!("e[{name}; {}, {}]", key.row, key.col)
        }
    }

    /// Product of two ring elements. Parts multiply pairwise; a nonzero
    /// pairwise product is attributed to the smaller of the two elements.
    /// Incomparable pairs must multiply to zero (their slices are disjoint);
    /// this is a structural invariant, checked on every call.
    pub fn mul(&self, x: &RingElement, y: &RingElement) -> RingElement {
        let space = self.atlas.space();
        let poset = self.poset();
        let mut parts: BTreeMap<usize, BlockSum> = BTreeMap::new();
        for (i, p) in x.parts() {
            for (j, q) in y.parts() {
                let prod = p.mul(space, q);
                if prod.is_zero() {
                    continue;
                }
                assert!(
                    poset.comparable(i, j),
                    "nonzero product between incomparable parts {i} and {j}"
                );
                let k = if poset.leq(i, j) { i } else { j };
                // Scalar summands of maximal elements sit at the top level
                // (one diagonal block per chain); every other part sits at
                // its element's canonical level.
                let level = if poset.is_maximal(k) {
                    self.atlas.space().top_level()
                } else {
                    self.atlas.level_of(k)
                };
                for b in prod.blocks() {
                    assert!(
                        b.level == level,
                        "product of parts {i} and {j} produced a block at level {} instead of {}",
                        b.level,
                        level
                    );
                }
                let merged = match parts.get(&k) {
                    Some(t) => t.add(&prod),
                    None => prod,
                };
                if merged.is_zero() {
                    parts.remove(&k);
                } else {
                    parts.insert(k, merged);
                }
            }
        }
        RingElement { parts }
    }

    /// Scale by a natural number reduced mod the prime.
    pub fn scale(&self, x: &RingElement, d: u64) -> RingElement {
        x.scale(&self.fp(d))
    }

    /// Express one part as a combination of generators, or reject it.
    ///
    /// A valid part on a non-maximal element is determined by its blocks in
    /// the representative chain class: every other class carries the
    /// transported copy of exactly those blocks. The candidate monomials are
    /// read off the representative class and the part is rebuilt from them;
    /// any mismatch (stray blocks, missing classes, unaddressable indices,
    /// wrong level) rejects the part.
    pub fn decompose_part(&self, i: usize, sum: &BlockSum) -> Result<Vec<(GenKey, Fp)>, RingError> {
        let reject = || RingError::NotCoherent { element: i };
        if sum.is_zero() {
            return Ok(Vec::new());
        }
        if self.poset().is_maximal(i) {
            let top = self.atlas.space().top_level();
            let mut through = self.atlas.chains().through(i);
            through.sort_unstable();
            let blocks = sum.blocks();
            if blocks.len() != through.len() {
                return Err(reject());
            }
            let d = blocks[0].scalar;
            for (b, chi) in blocks.iter().zip(through) {
                let ix = Ordinal::from_nat(chi as u64);
                if b.level != top || b.row != ix || b.col != ix || b.scalar != d {
                    return Err(reject());
                }
            }
            return Ok(vec![(GenKey::scalar(i), d)]);
        }
        let level = self.atlas.level_of(i);
        let e = self.atlas.e_of(i);
        let space = self.atlas.space();
        let rep = self.atlas.rep_class(i);
        let mut monomials: Vec<(GenKey, Fp)> = Vec::new();
        for b in sum.blocks() {
            if b.level != level {
                return Err(reject());
            }
            let (row_chi, _) = space.split(&b.row, e);
            let (col_chi, _) = space.split(&b.col, e);
            let in_rep = |chi: &Ordinal| {
                chi.nat()
                    .map(|c| rep.chis.contains(&(c as usize)))
                    .unwrap_or(false)
            };
            if !in_rep(&row_chi) {
                continue;
            }
            if !in_rep(&col_chi) {
                return Err(reject());
            }
            let row = self.atlas.k_map(i, rep, &b.row).map_err(|_| reject())?;
            let col = self.atlas.k_map(i, rep, &b.col).map_err(|_| reject())?;
            monomials.push((GenKey::interval(i, row, col), b.scalar));
        }
        let mut rebuilt = RingElement::zero();
        for (key, d) in &monomials {
            let g = self
                .gen_unit(i, &key.row, &key.col, d.value())
                .map_err(|_| reject())?;
            rebuilt = rebuilt.add(&g);
        }
        match rebuilt.part(i) {
            Some(s) if s == sum && rebuilt.parts.len() == 1 => {}
            _ => return Err(reject()),
        }
        monomials.sort_by(|a, b| a.0.cmp(&b.0));
        Ok(monomials)
    }

    /// Express a whole element as a combination of generators.
    pub fn decompose(&self, x: &RingElement) -> Result<Vec<(GenKey, Fp)>, RingError> {
        let mut out = Vec::new();
        for (i, sum) in x.parts() {
            out.extend(self.decompose_part(i, sum)?);
        }
        Ok(out)
    }

    /// Rebuild an element from keyed coefficients.
    pub fn from_monomials(&self, monomials: &[(GenKey, u64)]) -> Result<RingElement, RingError> {
        let mut acc = RingElement::zero();
        for (key, d) in monomials {
            acc = acc.add(&self.gen_from_key(key, *d)?);
        }
        Ok(acc)
    }

    /// A generating family for the span of the given elements: all interval
    /// generators over the addressable family (capped per element) plus the
    /// scalar summand of each maximal element.
    pub fn generators(&self, mask: u64, cap: usize) -> Vec<(GenKey, RingElement)> {
        let poset = self.poset();
        let mut out = Vec::new();
        for i in poset.iter_mask(mask) {
            if poset.is_maximal(i) {
                let g = self.gen_max(i, 1).expect("maximal");
                out.push((GenKey::scalar(i), g));
                continue;
            }
            let family = self.atlas.index_family(i, cap);
            for row in &family {
                for col in &family {
                    let g = self
                        .gen_unit(i, row, col, 1)
                        .expect("addressable family members are valid indices");
                    out.push((GenKey::interval(i, row.clone(), col.clone()), g));
                }
            }
        }
        out
    }

    /// The identity element of the subring supported on a finitely
    /// sheltered subset: the scalar summands of the maximal elements above
    /// it. Subsets that are not finitely sheltered have no such identity.
    pub fn sheltered_unit(&self, mask: u64) -> Result<RingElement, RingError> {
        let poset = self.poset();
        if mask & !poset.full_mask() != 0 {
            return Err(RingError::NotNested {
                mask,
                ambient: poset.full_mask(),
            });
        }
        if !poset.is_finitely_sheltered(mask) {
            return Err(RingError::NotSheltered { mask });
        }
        let mut acc = RingElement::zero();
        for m in poset.iter_mask(poset.max_of(mask)) {
            acc = acc.add(&self.gen_max(m, 1).expect("maximal"));
        }
        Ok(acc)
    }

    /// The ideal whose parts avoid the given upper subset.
    pub fn ideal_of_upper(&self, upper: u64) -> Result<IdealHandle, RingError> {
        let poset = self.poset();
        if upper & !poset.full_mask() != 0 {
            return Err(RingError::NotNested {
                mask: upper,
                ambient: poset.full_mask(),
            });
        }
        if !poset.is_upper_set(upper) {
            return Err(RingError::NotUpper { mask: upper });
        }
        Ok(IdealHandle { upper })
    }

    /// Poset elements whose parts the ideal contains.
    pub fn ideal_members_mask(&self, h: &IdealHandle) -> u64 {
        self.poset().full_mask() & !h.upper
    }

    pub fn membership(&self, h: &IdealHandle, x: &RingElement) -> bool {
        x.support_mask() & h.upper == 0
    }

    /// Sweep generator products against a candidate member subset. For an
    /// ideal handle the subset is a lower set and every product stays
    /// inside; for anything else the sweep hunts for an escaping product.
    pub fn closure_evidence(&self, members: u64, cap: usize) -> ClosureEvidence {
        let all = self.generators(self.poset().full_mask(), cap);
        let inside = self.generators(members, cap);
        for (ik, ig) in &inside {
            for (ok, og) in &all {
                for (side, prod) in [
                    (Side::Left, self.mul(og, ig)),
                    (Side::Right, self.mul(ig, og)),
                ] {
                    let escaped = prod.support_mask() & !members;
                    if escaped != 0 {
                        return ClosureEvidence {
                            closed: false,
                            witness: Some(ClosureBreak {
                                inside: ik.clone(),
                                outside: ok.clone(),
                                side,
                                escaped: escaped.trailing_zeros() as usize,
                            }),
                        };
                    }
                }
            }
        }
        ClosureEvidence {
            closed: true,
            witness: None,
        }
    }

    pub fn ideal_closure_check(&self, h: &IdealHandle, cap: usize) -> bool {
        self.closure_evidence(self.ideal_members_mask(h), cap)
            .closed
    }

    /// Restriction from the subring on upper subset `outer` to the subring
    /// on upper subset `inner`: drop every part outside `inner`. This is a
    /// surjective ring homomorphism with kernel the parts on
    /// `outer \ inner`.
    pub fn quotient_projection(
        &self,
        inner: u64,
        outer: u64,
        x: &RingElement,
    ) -> Result<RingElement, RingError> {
        let poset = self.poset();
        for mask in [inner, outer] {
            if mask & !poset.full_mask() != 0 {
                return Err(RingError::NotNested {
                    mask,
                    ambient: poset.full_mask(),
                });
            }
            if !poset.is_upper_set(mask) {
                return Err(RingError::NotUpper { mask });
            }
        }
        if inner & !outer != 0 {
            return Err(RingError::NotNested {
                mask: inner,
                ambient: outer,
            });
        }
        if let Some(i) = poset.iter_mask(x.support_mask() & !outer).next() {
            return Err(RingError::OutsideSubring { element: i });
        }
        let parts = x
            .parts
            .iter()
            .filter(|(&i, _)| inner >> i & 1 == 1)
            .map(|(&i, s)| (i, s.clone()))
            .collect();
        Ok(RingElement { parts })
    }

    /// The socle filtration as ideal handles: stage `alpha` spans the parts
    /// on the first `alpha` layers. The final stage is the whole ring.
    pub fn socle_chain(&self) -> Vec<IdealHandle> {
        let poset = self.poset();
        (1..=poset.xi())
            .map(|alpha| {
                let members = poset.filtration_mask(alpha);
                IdealHandle {
                    upper: poset.full_mask() & !members,
                }
            })
            .collect()
    }

    /// Minimal elements of a subset, viewed as a poset in its own right.
    pub fn minimal_of(&self, mask: u64) -> u64 {
        let poset = self.poset();
        let mut out = 0u64;
        for i in poset.iter_mask(mask) {
            if poset.down_mask(i) & mask == 1 << i {
                out |= 1 << i;
            }
        }
        out
    }

    /// Search for an essentiality certificate: an idempotent on a minimal
    /// element of the ambient subset `ambient` whose right action keeps `a`
    /// nonzero. Minimal elements whose cone misses the support are skipped
    /// (products with them vanish outright); for the rest every addressable
    /// diagonal idempotent is tried. At an infinite base the addressable
    /// family is infinite and a capped subfamily is scanned instead, so a
    /// miss is reported as `None` rather than proven absent.
    pub fn essential_witness(
        &self,
        ambient: u64,
        a: &RingElement,
    ) -> Result<Option<EssentialWitness>, RingError> {
        let poset = self.poset();
        if a.is_zero() {
            return Err(RingError::ZeroElement);
        }
        if let Some(i) = poset.iter_mask(a.support_mask() & !ambient).next() {
            return Err(RingError::OutsideSubring { element: i });
        }
        let support = a.support_mask();
        for j in poset.iter_mask(self.minimal_of(ambient)) {
            if poset.up_mask(j) & support == 0 {
                continue;
            }
            if poset.is_maximal(j) {
                let e = self.gen_max(j, 1)?;
                if !self.mul(a, &e).is_zero() {
                    return Ok(Some(EssentialWitness {
                        element: j,
                        key: GenKey::scalar(j),
                        idempotent: e,
                    }));
                }
                continue;
            }
            let family = match self.atlas.index_members(j) {
                Some(all) => all,
                None => self.atlas.index_family(j, 64),
            };
            for z in family {
                let e = self.gen_eyi(j, &z)?;
                if !self.mul(a, &e).is_zero() {
                    return Ok(Some(EssentialWitness {
                        element: j,
                        key: GenKey::interval(j, z.clone(), z),
                        idempotent: e,
                    }));
                }
            }
        }
        Ok(None)
    }

    /// The annihilator of the simple module attached to `i`, as an ideal
    /// handle: parts on elements not above `i`.
    pub fn annihilator_handle(&self, i: usize) -> IdealHandle {
        IdealHandle {
            upper: self.poset().up_mask(i),
        }
    }

    pub fn annihilator_check(&self, i: usize, x: &RingElement) -> bool {
        self.membership(&self.annihilator_handle(i), x)
    }

    /// Rebuild the poset from the simple-module family alone: order the
    /// annihilator member masks by inclusion. The result must be order
    /// isomorphic to the underlying poset.
    pub fn simp_poset(&self) -> PolarizedPoset {
        let poset = self.poset();
        let n = poset.n();
        let ann: Vec<u64> = (0..n)
            .map(|i| poset.full_mask() & !poset.up_mask(i))
            .collect();
        let names: Vec<String> = (0..n).map(|i| poset.name(i).to_string()).collect();
        let name_refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        let mut relations = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i != j && ann[i] & !ann[j] == 0 {
                    relations.push((name_refs[i], name_refs[j]));
                }
            }
        }
        let polar: Vec<&str> = poset
            .iter_mask(poset.polar_mask())
            .map(|i| name_refs[i])
            .collect();
        PolarizedPoset::from_relations(&name_refs, &relations, &polar)
            .expect("annihilator inclusion order is a poset on the same names")
    }

    /// Whether the rebuilt poset agrees with the underlying one, element by
    /// element under the identity naming.
    pub fn simp_matches(&self) -> bool {
        let poset = self.poset();
        let simp = self.simp_poset();
        let n = poset.n();
        (0..n).all(|i| {
            let k = simp.idx(poset.name(i)).expect("same names");
            (0..n).all(|j| {
                let l = simp.idx(poset.name(j)).expect("same names");
                poset.leq(i, j) == simp.leq(k, l)
            })
        })
    }

    /// Check the correspondence between upper subsets and ideal handles:
    /// distinct upper subsets give distinct member masks, inclusion is
    /// reversed, and the two directions invert each other.
    pub fn lattice_anti_isomorphism_check(&self, bound: usize) -> Result<LatticeReport, RingError> {
        let poset = self.poset();
        let uppers = poset.upper_sets(bound)?;
        let full = poset.full_mask();
        let members: Vec<u64> = uppers.iter().map(|&s| full & !s).collect();
        let mut bijective = {
            let mut seen = members.clone();
            seen.sort_unstable();
            seen.windows(2).all(|w| w[0] != w[1])
        };
        bijective &= members.len() == uppers.len();
        let mut inclusion_reversing = true;
        for (a, &sa) in uppers.iter().enumerate() {
            for (b, &sb) in uppers.iter().enumerate() {
                let sub = sa & !sb == 0;
                let sup = members[b] & !members[a] == 0;
                if sub != sup {
                    inclusion_reversing = false;
                }
            }
        }
        // One direction reads the surviving simples off a member mask, the
        // other intersects the annihilator masks of a set of simples.
        let phi = |member_mask: u64| -> u64 {
            (0..poset.n())
                .filter(|&i| poset.up_mask(i) & member_mask == 0)
                .fold(0u64, |m, i| m | 1 << i)
        };
        let psi = |s: u64| -> u64 {
            poset
                .iter_mask(s)
                .fold(full, |m, i| m & (full & !poset.up_mask(i)))
        };
        let phi_after_psi = uppers.iter().all(|&s| phi(psi(s)) == s);
        let psi_after_phi = uppers
            .iter()
            .zip(&members)
            .all(|(&s, &m)| psi(phi(m)) == m && phi(m) == s);
        Ok(LatticeReport {
            upper_sets: uppers.len(),
            bijective,
            inclusion_reversing,
            phi_after_psi,
            psi_after_phi,
        })
    }

    /// One central idempotent per connected component: the scalar summands
    /// of the component's maximal elements.
    pub fn component_idempotents(&self) -> Vec<RingElement> {
        let poset = self.poset();
        poset
            .connected_components()
            .into_iter()
            .map(|comp| {
                let mut acc = RingElement::zero();
                for m in poset.iter_mask(comp & poset.maximal_mask()) {
                    acc = acc.add(&self.gen_max(m, 1).expect("maximal"));
                }
                acc
            })
            .collect()
    }

    /// The chosen idempotent representing the simple module of `i`: the
    /// first addressable diagonal block for non-maximal elements, the scalar
    /// summand for maximal ones.
    pub fn simple_idempotent(&self, i: usize) -> RingElement {
        if self.poset().is_maximal(i) {
            self.gen_max(i, 1).expect("maximal")
        } else {
            self.gen_eyi(i, &Ordinal::zero())
                .expect("block zero is always addressable")
        }
    }

    /// Cross-check the height of every simple module against the socle
    /// filtration, and summarize the component structure.
    pub fn well_behaved_report(&self) -> WellBehavedReport {
        let poset = self.poset();
        let chain = self.socle_chain();
        let rows: Vec<HeightRow> = (0..poset.n())
            .map(|i| {
                let u = self.simple_idempotent(i);
                let socle_level = chain
                    .iter()
                    .position(|h| self.membership(h, &u))
                    .map(|k| k as u32 + 1)
                    .unwrap_or(0);
                HeightRow {
                    element: poset.name(i).to_string(),
                    lambda: poset.lambda_canonical(i),
                    socle_level,
                }
            })
            .collect();
        let heights_match = rows.iter().all(|r| r.lambda == r.socle_level);
        let components = poset.connected_components().len();
        let maximal_elements = poset.maximal_mask().count_ones() as usize;
        WellBehavedReport {
            rows,
            heights_match,
            components,
            maximal_elements,
            // Every simple sits exactly at its layer, and the maximal
            // element count is finite, so both properties reduce to the
            // height cross-check here.
            well_behaved: heights_match,
            very_well_behaved: heights_match,
        }
    }
}
