//! Identity-shaped blocks and their calculus. A placed block of level `l` at
//! `(row, col)` stands for the scaled identity matrix on the aligned square
//! `[B^l*row, B^l*(row+1)) x [B^l*col, B^l*(col+1))`; sums of such blocks are
//! closed under matrix multiplication because aligned intervals never
//! partially overlap, and the product of two blocks is again a single block
//! (or zero).

use crate::indexing::{IndexError, IndexSpace, Interval};
use crate::ordinal::Ordinal;
use serde::{Deserialize, Serialize};

/// Prime-field scalar. Arithmetic stays canonical (values below the prime);
/// mixing primes is a programming error and panics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Fp {
    value: u64,
    prime: u64,
}

impl Fp {
    pub fn new(value: u64, prime: u64) -> Self {
        assert!(
            (2..1 << 31).contains(&prime),
            "prime out of supported range"
        );
        Fp {
            value: value % prime,
            prime,
        }
    }

    pub fn zero(prime: u64) -> Self {
        Fp::new(0, prime)
    }

    pub fn one(prime: u64) -> Self {
        Fp::new(1, prime)
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn same(&self, other: &Fp) {
        assert_eq!(self.prime, other.prime, "mixed prime fields");
    }

    pub fn add(&self, other: &Fp) -> Fp {
        self.same(other);
        Fp::new(self.value + other.value, self.prime)
    }

    pub fn sub(&self, other: &Fp) -> Fp {
        self.same(other);
        Fp::new(self.value + self.prime - other.value, self.prime)
    }

    pub fn mul(&self, other: &Fp) -> Fp {
        self.same(other);
        Fp::new(self.value * other.value, self.prime)
    }

    pub fn neg(&self) -> Fp {
        Fp::new(self.prime - self.value, self.prime)
    }

    pub fn pow(&self, mut k: u64) -> Fp {
        let mut base = *self;
        let mut acc = Fp::one(self.prime);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            k >>= 1;
        }
        acc
    }

    /// Multiplicative inverse of a nonzero scalar.
    pub fn inv(&self) -> Fp {
        assert!(!self.is_zero(), "zero has no inverse");
        self.pow(self.prime - 2)
    }
}

/// One scaled identity block.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlacedBlock {
    pub level: u32,
    pub row: Ordinal,
    pub col: Ordinal,
    pub scalar: Fp,
}

impl PlacedBlock {
    pub fn new(level: u32, row: Ordinal, col: Ordinal, scalar: Fp) -> Self {
        PlacedBlock {
            level,
            row,
            col,
            scalar,
        }
    }

    pub fn row_interval(&self) -> Interval {
        Interval::new(self.level, self.row.clone())
    }

    pub fn col_interval(&self) -> Interval {
        Interval::new(self.level, self.col.clone())
    }

    pub fn is_diagonal(&self) -> bool {
        self.row == self.col
    }

    fn key(&self) -> (u32, &Ordinal, &Ordinal) {
        (self.level, &self.row, &self.col)
    }
}

/// Product of two blocks: a single block or nothing. The longer block's
/// matching interval must contain the shorter one's; partial overlap cannot
/// happen for aligned intervals, so everything else multiplies to zero.
pub fn mul_blocks(space: &IndexSpace, a: &PlacedBlock, b: &PlacedBlock) -> Option<PlacedBlock> {
    let scalar = a.scalar.mul(&b.scalar);
    if scalar.is_zero() {
        return None;
    }
    if a.level >= b.level {
        // a's column interval is the longer side; b's rows must sit inside.
        if !space.contains(&a.col_interval(), &b.row_interval()) {
            return None;
        }
        let delta = space
            .interval_start(&a.col_interval())
            .left_subtract(&space.interval_start(&b.row_interval()))
            .expect("containment orders the starts");
        let (shift, rem) = delta.divide(&space.bp(b.level)).unwrap();
        debug_assert!(rem.is_zero(), "aligned starts differ by whole blocks");
        let row = a.row.multiply(&space.bp(a.level - b.level)).add(&shift);
        Some(PlacedBlock::new(b.level, row, b.col.clone(), scalar))
    } else {
        // b's row interval is the longer side; a's columns must sit inside.
        if !space.contains(&b.row_interval(), &a.col_interval()) {
            return None;
        }
        let delta = space
            .interval_start(&b.row_interval())
            .left_subtract(&space.interval_start(&a.col_interval()))
            .expect("containment orders the starts");
        let (shift, rem) = delta.divide(&space.bp(a.level)).unwrap();
        debug_assert!(rem.is_zero(), "aligned starts differ by whole blocks");
        let col = b.col.multiply(&space.bp(b.level - a.level)).add(&shift);
        Some(PlacedBlock::new(a.level, a.row.clone(), col, scalar))
    }
}

/// Normalized sum of placed blocks: sorted by position, coalesced, no zeros.
/// Blocks of different levels may coexist; coinciding positions merge.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockSum {
    blocks: Vec<PlacedBlock>,
}

impl BlockSum {
    pub fn zero() -> Self {
        BlockSum { blocks: Vec::new() }
    }

    pub fn new(mut blocks: Vec<PlacedBlock>) -> Self {
        blocks.sort_by(|x, y| x.key().cmp(&y.key()));
        let mut out: Vec<PlacedBlock> = Vec::with_capacity(blocks.len());
        for b in blocks {
            match out.last_mut() {
                Some(last) if last.key() == b.key() => last.scalar = last.scalar.add(&b.scalar),
                _ => out.push(b),
            }
        }
        out.retain(|b| !b.scalar.is_zero());
        BlockSum { blocks: out }
    }

    pub fn single(block: PlacedBlock) -> Self {
        BlockSum::new(vec![block])
    }

    pub fn blocks(&self) -> &[PlacedBlock] {
        &self.blocks
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn add(&self, other: &BlockSum) -> BlockSum {
        let mut blocks = self.blocks.clone();
        blocks.extend_from_slice(&other.blocks);
        BlockSum::new(blocks)
    }

    pub fn scale(&self, s: &Fp) -> BlockSum {
        BlockSum::new(
            self.blocks
                .iter()
                .map(|b| PlacedBlock::new(b.level, b.row.clone(), b.col.clone(), b.scalar.mul(s)))
                .collect(),
        )
    }

    pub fn neg(&self) -> BlockSum {
        BlockSum::new(
            self.blocks
                .iter()
                .map(|b| PlacedBlock::new(b.level, b.row.clone(), b.col.clone(), b.scalar.neg()))
                .collect(),
        )
    }

    pub fn sub(&self, other: &BlockSum) -> BlockSum {
        self.add(&other.neg())
    }

    pub fn mul(&self, space: &IndexSpace, other: &BlockSum) -> BlockSum {
        let mut blocks = Vec::new();
        for a in &self.blocks {
            for b in &other.blocks {
                if let Some(c) = mul_blocks(space, a, b) {
                    blocks.push(c);
                }
            }
        }
        BlockSum::new(blocks)
    }

    /// Checks each block's indices against the space.
    pub fn validate(&self, space: &IndexSpace) -> Result<(), IndexError> {
        for b in &self.blocks {
            space.check_interval(&b.row_interval())?;
            space.check_interval(&b.col_interval())?;
        }
        Ok(())
    }
}

/// A single checked block as a sum: the elementary building move.
pub fn phi(
    space: &IndexSpace,
    level: u32,
    row: Ordinal,
    col: Ordinal,
    scalar: Fp,
) -> Result<BlockSum, IndexError> {
    let block = PlacedBlock::new(level, row, col, scalar);
    space.check_interval(&block.row_interval())?;
    space.check_interval(&block.col_interval())?;
    Ok(BlockSum::single(block))
}
