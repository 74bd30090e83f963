//! Ground-truth machinery the structured code is checked against: literal
//! dense matrices over a prime field at a finite base, plus brute-force
//! searches that do not share code paths with the structured implementations.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::blockmatrix::BlockSum;
use crate::indexing::{IndexError, IndexSpace};
use crate::par;
use crate::poset::PosetError;
use crate::ring::{GenKey, RingContext, RingElement, RingError};

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("dense size {size} exceeds the bound {bound}")]
    TooLarge { size: u64, bound: u64 },
    #[error("dense evaluation needs a finite base")]
    InfiniteBase,
    #[error("formal dimension {dimension} exceeds the bound {bound}")]
    DimensionBound { dimension: usize, bound: usize },
    #[error("exhaustive search needs the two-element field, got {0}")]
    FieldBound(u64),
    #[error(transparent)]
    Index(#[from] IndexError),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Poset(#[from] PosetError),
}

/// Row-major matrix over the integers mod a prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DenseMatrix {
    size: usize,
    prime: u64,
    data: Vec<u64>,
}

impl DenseMatrix {
    pub fn zeros(size: usize, prime: u64) -> Self {
        DenseMatrix {
            size,
            prime,
            data: vec![0; size * size],
        }
    }

    pub fn identity(size: usize, prime: u64) -> Self {
        let mut m = Self::zeros(size, prime);
        for i in 0..size {
            m.data[i * size + i] = 1 % prime;
        }
        m
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.size + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        self.data[r * self.size + c] = v % self.prime;
    }

    pub fn add_entry(&mut self, r: usize, c: usize, v: u64) {
        let cell = &mut self.data[r * self.size + c];
        *cell = (*cell + v) % self.prime;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn add(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!((self.size, self.prime), (other.size, other.prime));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a + b) % self.prime)
            .collect();
        DenseMatrix {
            size: self.size,
            prime: self.prime,
            data,
        }
    }

    pub fn sub(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!((self.size, self.prime), (other.size, other.prime));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a + self.prime - b) % self.prime)
            .collect();
        DenseMatrix {
            size: self.size,
            prime: self.prime,
            data,
        }
    }

    fn mul_row_into(&self, other: &DenseMatrix, r: usize, out: &mut [u64]) {
        let n = self.size;
        for k in 0..n {
            let a = self.data[r * n + k];
            if a == 0 {
                continue;
            }
            let brow = &other.data[k * n..(k + 1) * n];
            for (o, &b) in out.iter_mut().zip(brow) {
                *o = (*o + a * b) % self.prime;
            }
        }
    }

    /// Matrix product, row-parallel when the `parallel` feature is on.
    pub fn mul(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!((self.size, self.prime), (other.size, other.prime));
        let mut out = DenseMatrix::zeros(self.size, self.prime);
        par::for_each_row(&mut out.data, self.size, |r, chunk| {
            self.mul_row_into(other, r, chunk);
        });
        out
    }

    /// The plain sequential product, always compiled; `mul` must match it.
    pub fn mul_seq(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!((self.size, self.prime), (other.size, other.prime));
        let mut out = DenseMatrix::zeros(self.size, self.prime);
        for r in 0..self.size {
            let (lo, hi) = (r * self.size, (r + 1) * self.size);
            let chunk = &mut out.data[lo..hi];
            self.mul_row_into(other, r, chunk);
        }
        out
    }

    pub fn first_difference(&self, other: &DenseMatrix) -> Option<(usize, usize, u64, u64)> {
        assert_eq!((self.size, self.prime), (other.size, other.prime));
        for r in 0..self.size {
            for c in 0..self.size {
                let (a, b) = (self.get(r, c), other.get(r, c));
                if a != b {
                    return Some((r, c, a, b));
                }
            }
        }
        None
    }
}

/// Default cap on dense evaluation sizes.
pub const DENSE_BOUND: u64 = 4096;

/// Spells out a block sum as the literal matrix it denotes.
pub fn to_dense(
    space: &IndexSpace,
    sum: &BlockSum,
    prime: u64,
    bound: u64,
) -> Result<DenseMatrix, OracleError> {
    if space.base().finite().is_none() {
        return Err(OracleError::InfiniteBase);
    }
    let size = space
        .extent()
        .nat()
        .expect("finite-base extent is a natural");
    if size > bound {
        return Err(OracleError::TooLarge { size, bound });
    }
    let size = size as usize;
    let mut m = DenseMatrix::zeros(size, prime);
    for b in sum.blocks() {
        let r0 = space.eval_block(b.level, &b.row)? as usize;
        let c0 = space.eval_block(b.level, &b.col)? as usize;
        let len = space.eval_len(b.level) as usize;
        let start_r = r0 * len;
        let start_c = c0 * len;
        for k in 0..len {
            m.add_entry(start_r + k, start_c + k, b.scalar.value());
        }
    }
    Ok(m)
}

/// Outcome of checking one structured product against the dense model.
#[derive(Debug, Clone)]
pub struct HomCheck {
    pub ok: bool,
    pub mismatch: Option<(usize, usize, u64, u64)>,
}

/// Multiplies two block sums both ways: through the block calculus and as
/// dense matrices. The two must agree entry for entry.
pub fn validate_product(
    space: &IndexSpace,
    a: &BlockSum,
    b: &BlockSum,
    prime: u64,
    bound: u64,
) -> Result<HomCheck, OracleError> {
    let structured = a.mul(space, b);
    let lhs = to_dense(space, &structured, prime, bound)?;
    let rhs = to_dense(space, a, prime, bound)?.mul(&to_dense(space, b, prime, bound)?);
    let mismatch = lhs.first_difference(&rhs);
    Ok(HomCheck {
        ok: mismatch.is_none(),
        mismatch,
    })
}

/// Dense bridge for whole ring elements: the structured product rendered
/// densely must equal the dense product of the factors.
pub fn validate_ring_product(
    ctx: &RingContext,
    x: &RingElement,
    y: &RingElement,
    bound: u64,
) -> Result<HomCheck, OracleError> {
    let space = ctx.atlas().space();
    let structured = ctx.mul(x, y);
    let lhs = to_dense(space, &structured.flatten(), ctx.prime(), bound)?;
    let dx = to_dense(space, &x.flatten(), ctx.prime(), bound)?;
    let dy = to_dense(space, &y.flatten(), ctx.prime(), bound)?;
    let rhs = dx.mul(&dy);
    let mismatch = lhs.first_difference(&rhs);
    Ok(HomCheck {
        ok: mismatch.is_none(),
        mismatch,
    })
}

impl DenseMatrix {
    /// Comma-separated dump, one row per line.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for r in 0..self.size {
            for c in 0..self.size {
                if c > 0 {
                    out.push(',');
                }
                let _ = write!(out, "{}", self.get(r, c));
            }
            out.push('\n');
        }
        out
    }
}

/// A sparse coordinate vector over the generator basis: strictly increasing
/// indices, nonzero coefficients.
pub type Coords = Vec<(usize, u64)>;

fn normalize_coords(mut acc: BTreeMap<usize, u64>, prime: u64) -> Coords {
    acc.retain(|_, v| *v % prime != 0);
    acc.into_iter().map(|(k, v)| (k, v % prime)).collect()
}

/// The ring at a finite base in coordinates: the finite generator basis and
/// the full multiplication table between basis elements, with every product
/// re-expressed over the basis. Closure of the table is part of
/// construction: a product that fails to decompose aborts it.
#[derive(Debug, Clone)]
pub struct FormalAlgebra {
    ctx: RingContext,
    keys: Vec<GenKey>,
    index: BTreeMap<GenKey, usize>,
    table: Vec<Vec<Coords>>,
}

impl FormalAlgebra {
    pub fn new(ctx: &RingContext, bound: usize) -> Result<Self, OracleError> {
        let poset = ctx.poset();
        let atlas = ctx.atlas();
        let mut keys: Vec<GenKey> = Vec::new();
        for i in 0..poset.n() {
            if poset.is_maximal(i) {
                keys.push(GenKey::scalar(i));
                continue;
            }
            let members = atlas.index_members(i).ok_or(OracleError::InfiniteBase)?;
            for row in &members {
                for col in &members {
                    keys.push(GenKey::interval(i, row.clone(), col.clone()));
                }
            }
        }
        let dimension = keys.len();
        if dimension > bound {
            return Err(OracleError::DimensionBound { dimension, bound });
        }
        let index: BTreeMap<GenKey, usize> = keys
            .iter()
            .cloned()
            .enumerate()
            .map(|(k, v)| (v, k))
            .collect();
        let gens: Vec<RingElement> = keys
            .iter()
            .map(|k| ctx.gen_from_key(k, 1))
            .collect::<Result<_, _>>()?;
        let mut table = vec![vec![Coords::new(); dimension]; dimension];
        for a in 0..dimension {
            for b in 0..dimension {
                let prod = ctx.mul(&gens[a], &gens[b]);
                if prod.is_zero() {
                    continue;
                }
                let monomials = ctx.decompose(&prod)?;
                table[a][b] = monomials
                    .into_iter()
                    .map(|(key, coeff)| {
                        let ix = *index.get(&key).expect("closed over the basis");
                        (ix, coeff.value())
                    })
                    .collect();
            }
        }
        Ok(FormalAlgebra {
            ctx: ctx.clone(),
            keys,
            index,
            table,
        })
    }

    pub fn dimension(&self) -> usize {
        self.keys.len()
    }

    pub fn prime(&self) -> u64 {
        self.ctx.prime()
    }

    pub fn context(&self) -> &RingContext {
        &self.ctx
    }

    pub fn keys(&self) -> &[GenKey] {
        &self.keys
    }

    pub fn key_index(&self, key: &GenKey) -> Option<usize> {
        self.index.get(key).copied()
    }

    pub fn coords_of(&self, x: &RingElement) -> Result<Coords, OracleError> {
        let prime = self.prime();
        let mut acc: BTreeMap<usize, u64> = BTreeMap::new();
        for (key, coeff) in self.ctx.decompose(x)? {
            let ix = *self
                .index
                .get(&key)
                .expect("decomposition stays in the basis");
            *acc.entry(ix).or_insert(0) += coeff.value();
        }
        Ok(normalize_coords(acc, prime))
    }

    pub fn element_of(&self, coords: &Coords) -> RingElement {
        let monomials: Vec<(GenKey, u64)> = coords
            .iter()
            .map(|&(ix, c)| (self.keys[ix].clone(), c))
            .collect();
        self.ctx
            .from_monomials(&monomials)
            .expect("basis keys rebuild valid generators")
    }

    pub fn add(&self, a: &Coords, b: &Coords) -> Coords {
        let prime = self.prime();
        let mut acc: BTreeMap<usize, u64> = BTreeMap::new();
        for &(ix, c) in a.iter().chain(b.iter()) {
            *acc.entry(ix).or_insert(0) += c;
        }
        normalize_coords(acc, prime)
    }

    pub fn mul(&self, a: &Coords, b: &Coords) -> Coords {
        let prime = self.prime();
        let mut acc: BTreeMap<usize, u64> = BTreeMap::new();
        for &(ia, ca) in a {
            for &(ib, cb) in b {
                for &(it, ct) in &self.table[ia][ib] {
                    *acc.entry(it).or_insert(0) += ca * cb % prime * ct;
                }
            }
        }
        normalize_coords(acc, prime)
    }

    pub fn one_coords(&self) -> Coords {
        self.coords_of(&self.ctx.one())
            .expect("the identity decomposes over the basis")
    }

    pub fn random_coords<R: Rng>(&self, rng: &mut R, max_terms: usize) -> Coords {
        let prime = self.prime();
        let mut acc: BTreeMap<usize, u64> = BTreeMap::new();
        let terms = rng.gen_range(1..=max_terms.max(1));
        for _ in 0..terms {
            let ix = rng.gen_range(0..self.dimension());
            let c = rng.gen_range(1..prime);
            *acc.entry(ix).or_insert(0) += c;
        }
        normalize_coords(acc, prime)
    }

    /// Full structure-constant table as JSON: basis descriptions plus all
    /// nonzero products.
    pub fn structure_constants_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Product<'a> {
            left: usize,
            right: usize,
            terms: &'a Coords,
        }
        let basis: Vec<String> = self.keys.iter().map(|k| self.ctx.describe_gen(k)).collect();
        let mut products = Vec::new();
        for a in 0..self.dimension() {
            for b in 0..self.dimension() {
                if !self.table[a][b].is_empty() {
                    products.push(Product {
                        left: a,
                        right: b,
                        terms: &self.table[a][b],
                    });
                }
            }
        }
        serde_json::json!({
            "dimension": self.dimension(),
            "prime": self.prime(),
            "basis": basis,
            "products": products,
        })
    }
}

/// Solve `m · x = rhs` over GF(p) by Gaussian elimination, free variables
/// pinned to zero. `m` is row-major, `rows == rhs.len()`, `cols` unknowns.
fn solve_mod_p(mut m: Vec<Vec<u64>>, mut rhs: Vec<u64>, prime: u64) -> Option<Vec<u64>> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let inv = |a: u64| -> u64 {
        // Fermat inverse; prime modulus.
        let mut result = 1u64;
        let mut base = a % prime;
        let mut e = prime - 2;
        while e > 0 {
            if e & 1 == 1 {
                result = result * base % prime;
            }
            base = base * base % prime;
            e >>= 1;
        }
        result
    };
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; cols];
    let mut r = 0;
    for c in 0..cols {
        let Some(p_row) = (r..rows).find(|&i| !m[i][c].is_multiple_of(prime)) else {
            continue;
        };
        m.swap(r, p_row);
        rhs.swap(r, p_row);
        let scale = inv(m[r][c]);
        for x in m[r].iter_mut() {
            *x = *x * scale % prime;
        }
        rhs[r] = rhs[r] * scale % prime;
        for i in 0..rows {
            if i != r && !m[i][c].is_multiple_of(prime) {
                let f = m[i][c] % prime;
                // The row operation reads row r while writing row i, so the
                // index loop stays.
                #[allow(clippy::needless_range_loop)]
                for k in 0..cols {
                    m[i][k] = (m[i][k] + (prime - f) * m[r][k]) % prime;
                }
                rhs[i] = (rhs[i] + (prime - f) * rhs[r]) % prime;
            }
        }
        pivot_of_col[c] = Some(r);
        r += 1;
        if r == rows {
            break;
        }
    }
    // Rows below the pivot block must have zero right-hand side.
    if rhs[r..rows].iter().any(|&v| !v.is_multiple_of(prime)) {
        return None;
    }
    let mut x = vec![0u64; cols];
    for c in 0..cols {
        if let Some(pr) = pivot_of_col[c] {
            x[c] = rhs[pr] % prime;
        }
    }
    Some(x)
}

/// Search for `x` with `a·x·a = a` by solving the linear system column by
/// column over the basis. `None` means the system is inconsistent, which
/// would exhibit a non-regular element.
pub fn quasi_inverse(alg: &FormalAlgebra, a: &Coords) -> Option<Coords> {
    let dim = alg.dimension();
    let prime = alg.prime();
    let mut m = vec![vec![0u64; dim]; dim];
    // c names the matrix column being filled, not a slice position.
    #[allow(clippy::needless_range_loop)]
    for c in 0..dim {
        let e_c: Coords = vec![(c, 1)];
        let axa = alg.mul(&alg.mul(a, &e_c), a);
        for (r, v) in axa {
            m[r][c] = v;
        }
    }
    let mut rhs = vec![0u64; dim];
    for &(r, v) in a {
        rhs[r] = v;
    }
    let x = solve_mod_p(m, rhs, prime)?;
    let coords: Coords = x.into_iter().enumerate().filter(|&(_, v)| v != 0).collect();
    // The solver answers the linear system; double-check the ring identity.
    let check = alg.mul(&alg.mul(a, &coords), a);
    let a_norm: Coords = a
        .iter()
        .filter(|&&(_, v)| v % prime != 0)
        .cloned()
        .collect();
    if check == a_norm {
        Some(coords)
    } else {
        None
    }
}

/// Outcome of the exhaustive unit-regularity search over GF(2).
#[derive(Debug, Clone, Serialize)]
pub struct UnitRegularReport {
    pub dimension: usize,
    pub elements: u64,
    pub units: u64,
    pub failures: Vec<u64>,
}

/// For every element `a` of the algebra over GF(2), search all units `u`
/// for `a·u·a = a`. Exponential in the dimension, hence the hard cap.
pub fn unit_regular_spot_check(alg: &FormalAlgebra) -> Result<UnitRegularReport, OracleError> {
    const UNIT_REGULAR_DIM_BOUND: usize = 12;
    let dim = alg.dimension();
    if dim > UNIT_REGULAR_DIM_BOUND {
        return Err(OracleError::DimensionBound {
            dimension: dim,
            bound: UNIT_REGULAR_DIM_BOUND,
        });
    }
    if alg.prime() != 2 {
        return Err(OracleError::FieldBound(alg.prime()));
    }
    let coords_of_mask = |mask: u64| -> Coords {
        (0..dim)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| (i, 1))
            .collect()
    };
    let mask_of_coords =
        |coords: &Coords| -> u64 { coords.iter().fold(0u64, |m, &(i, _)| m | 1 << i) };
    let one = mask_of_coords(&alg.one_coords());
    // Units: elements with a two-sided inverse, found by brute force.
    let total: u64 = 1 << dim;
    let mut units: Vec<(u64, Coords)> = Vec::new();
    for u in 0..total {
        let cu = coords_of_mask(u);
        let has_inverse = (0..total).any(|v| {
            let cv = coords_of_mask(v);
            mask_of_coords(&alg.mul(&cu, &cv)) == one && mask_of_coords(&alg.mul(&cv, &cu)) == one
        });
        if has_inverse {
            units.push((u, cu));
        }
    }
    let mut failures = Vec::new();
    for a in 0..total {
        let ca = coords_of_mask(a);
        let ok = units
            .iter()
            .any(|(_, cu)| alg.mul(&alg.mul(&ca, cu), &ca) == ca);
        if !ok {
            failures.push(a);
        }
    }
    Ok(UnitRegularReport {
        dimension: dim,
        elements: total,
        units: units.len() as u64,
        failures,
    })
}

/// Outcome of comparing the brute-force ideal family with the handle image.
#[derive(Debug, Clone, Serialize)]
pub struct IdealLatticeReport {
    pub dimension: usize,
    pub ideal_count: usize,
    pub upper_count: usize,
    pub matches: bool,
    pub witness: Option<String>,
}

/// Compute the two-sided ideal generated by each basis element (closure
/// under basis multiplication from both sides), close the family under
/// sums, and compare against the ideals named by upper subsets. Products of
/// basis elements are scalar multiples of basis elements, so every such
/// ideal is a span of basis elements and sets of basis indices are a
/// faithful representation.
pub fn ideal_lattice_bruteforce(
    alg: &FormalAlgebra,
    bound: usize,
) -> Result<IdealLatticeReport, OracleError> {
    let dim = alg.dimension();
    if dim > bound {
        return Err(OracleError::DimensionBound {
            dimension: dim,
            bound,
        });
    }
    let closure_of = |start: usize| -> Vec<bool> {
        let mut in_set = vec![false; dim];
        let mut stack = vec![start];
        in_set[start] = true;
        while let Some(s) = stack.pop() {
            for g in 0..dim {
                for &(t, _) in alg.table[g][s].iter().chain(alg.table[s][g].iter()) {
                    if !in_set[t] {
                        in_set[t] = true;
                        stack.push(t);
                    }
                }
            }
        }
        in_set
    };
    let mut family: Vec<Vec<bool>> = vec![vec![false; dim]];
    for g in 0..dim {
        let c = closure_of(g);
        if !family.contains(&c) {
            family.push(c);
        }
    }
    // Close under sums (unions of basis supports).
    loop {
        let mut grew = false;
        let snapshot = family.clone();
        for a in &snapshot {
            for b in &snapshot {
                let merged: Vec<bool> = a.iter().zip(b).map(|(x, y)| *x || *y).collect();
                if !family.contains(&merged) {
                    family.push(merged);
                    grew = true;
                }
            }
        }
        if !grew {
            break;
        }
    }
    family.sort();
    let poset = alg.context().poset();
    let full = poset.full_mask();
    let mut expected: Vec<Vec<bool>> = poset
        .upper_sets(64)?
        .into_iter()
        .map(|s| {
            let members = full & !s;
            alg.keys()
                .iter()
                .map(|k| members >> k.element & 1 == 1)
                .collect()
        })
        .collect();
    expected.sort();
    let matches = family == expected;
    let witness = if matches {
        None
    } else {
        let diff = family
            .iter()
            .find(|f| !expected.contains(f))
            .or_else(|| expected.iter().find(|e| !family.contains(e)));
        diff.map(|set| {
            let size = set.iter().filter(|&&b| b).count();
            format!("ideal on {size} basis elements outside the expected family")
        })
    };
    Ok(IdealLatticeReport {
        dimension: dim,
        ideal_count: family.len(),
        upper_count: expected.len(),
        matches,
        witness,
    })
}
