//! Ordinal arithmetic in Cantor normal form with natural-number exponents.
//!
//! Every value is a finite sum `w^e1*c1 + ... + w^ek*ck` with strictly
//! decreasing exponents and positive coefficients; the empty sum is 0. This
//! fragment (ordinals below w^w) is closed under everything the block
//! calculus needs: addition, left subtraction, multiplication, left division
//! with remainder, base-B digit extraction and the few powers that arise.
//!
//! Addition and multiplication are total; division, subtraction, powers and
//! parsing report failures through [`OrdinalError`].

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrdinalError {
    /// `left_subtract(a, b)` was called with `a > b`.
    #[error("left subtraction underflow: minuend exceeds the total")]
    Underflow,
    #[error("division by the zero ordinal")]
    DivisionByZero,
    /// The requested power has no representation in this fragment.
    #[error("unsupported power: base {base}, exponent {exp}")]
    UnsupportedPower { base: String, exp: String },
    #[error("out of supported range: {0}")]
    OutOfRange(String),
    #[error("parse error: {0}")]
    Parse(String),
}

/// Zero, successor or limit; limits are exactly the values whose last
/// normal-form term has a positive exponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Zero,
    Successor,
    Limit,
}

/// An ordinal below w^w in Cantor normal form.
///
/// Internal invariant: `terms` holds `(exponent, coefficient)` pairs with
/// exponents strictly decreasing and every coefficient nonzero.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Ordinal {
    terms: Vec<(u32, u64)>,
}

impl Ordinal {
    pub fn zero() -> Self {
        Ordinal { terms: Vec::new() }
    }

    pub fn from_nat(n: u64) -> Self {
        if n == 0 {
            Self::zero()
        } else {
            Ordinal {
                terms: vec![(0, n)],
            }
        }
    }

    pub fn omega() -> Self {
        Ordinal {
            terms: vec![(1, 1)],
        }
    }

    /// `w^exp * coeff`; a zero coefficient yields 0.
    pub fn term(exp: u32, coeff: u64) -> Self {
        if coeff == 0 {
            Self::zero()
        } else {
            Ordinal {
                terms: vec![(exp, coeff)],
            }
        }
    }

    /// Builds a value from normal-form terms in any order; coefficients at
    /// equal exponents are added, zero coefficients dropped.
    pub fn from_terms(terms: &[(u32, u64)]) -> Self {
        let mut sorted: Vec<(u32, u64)> = terms.iter().copied().filter(|t| t.1 != 0).collect();
        sorted.sort_by_key(|t| std::cmp::Reverse(t.0));
        let mut out: Vec<(u32, u64)> = Vec::with_capacity(sorted.len());
        for (e, c) in sorted {
            match out.last_mut() {
                Some(last) if last.0 == e => {
                    last.1 = last.1.checked_add(c).expect("coefficient overflow")
                }
                _ => out.push((e, c)),
            }
        }
        Ordinal { terms: out }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The normal-form terms, highest exponent first.
    pub fn terms(&self) -> &[(u32, u64)] {
        &self.terms
    }

    /// `Some(n)` when the value is the natural number `n`.
    pub fn nat(&self) -> Option<u64> {
        match self.terms.as_slice() {
            [] => Some(0),
            [(0, c)] => Some(*c),
            _ => None,
        }
    }

    pub fn is_nat(&self) -> bool {
        self.nat().is_some()
    }

    /// Leading `(exponent, coefficient)`; `None` for 0.
    pub fn leading(&self) -> Option<(u32, u64)> {
        self.terms.first().copied()
    }

    /// Coefficient of `w^exp` in the normal form.
    pub fn coefficient(&self, exp: u32) -> u64 {
        self.terms
            .iter()
            .find(|(e, _)| *e == exp)
            .map(|(_, c)| *c)
            .unwrap_or(0)
    }

    pub fn classify(&self) -> Kind {
        match self.terms.last() {
            None => Kind::Zero,
            Some((0, _)) => Kind::Successor,
            Some(_) => Kind::Limit,
        }
    }

    /// Ordinal sum. Terms of `self` below the leading exponent of `other`
    /// are absorbed.
    pub fn add(&self, other: &Ordinal) -> Ordinal {
        let Some((f, d)) = other.leading() else {
            return self.clone();
        };
        let mut out: Vec<(u32, u64)> = Vec::new();
        for &(e, c) in &self.terms {
            if e > f {
                out.push((e, c));
            } else if e == f {
                out.push((e, c.checked_add(d).expect("coefficient overflow")));
                out.extend_from_slice(&other.terms[1..]);
                return Ordinal { terms: out };
            } else {
                break;
            }
        }
        out.extend_from_slice(&other.terms);
        Ordinal { terms: out }
    }

    /// Successor.
    pub fn succ(&self) -> Ordinal {
        self.add(&Ordinal::from_nat(1))
    }

    /// Solves `self + x = total` for the unique `x`; errs when `self > total`.
    pub fn left_subtract(&self, total: &Ordinal) -> Result<Ordinal, OrdinalError> {
        let mut k = 0usize;
        loop {
            match (self.terms.get(k), total.terms.get(k)) {
                (None, _) => {
                    return Ok(Ordinal {
                        terms: total.terms[k..].to_vec(),
                    })
                }
                (Some(_), None) => return Err(OrdinalError::Underflow),
                (Some(&(e, ca)), Some(&(f, cb))) => {
                    if (e, ca) == (f, cb) {
                        k += 1;
                        continue;
                    }
                    // First divergence. The difference starts at total's
                    // current term and absorbs whatever is left of self.
                    return if f > e {
                        Ok(Ordinal {
                            terms: total.terms[k..].to_vec(),
                        })
                    } else if f == e && cb > ca {
                        let mut terms = vec![(e, cb - ca)];
                        terms.extend_from_slice(&total.terms[k + 1..]);
                        Ok(Ordinal { terms })
                    } else {
                        Err(OrdinalError::Underflow)
                    };
                }
            }
        }
    }

    /// Ordinal product, distributed over the right factor's normal form.
    pub fn multiply(&self, other: &Ordinal) -> Ordinal {
        let Some((e0, c0)) = self.leading() else {
            return Ordinal::zero();
        };
        let mut acc = Ordinal::zero();
        for &(f, d) in &other.terms {
            let chunk = if f > 0 {
                Ordinal::term(e0.checked_add(f).expect("exponent overflow"), d)
            } else {
                // Right factor chunk is the natural number d >= 1: the leading
                // coefficient scales, the tail survives once.
                let mut terms = vec![(e0, c0.checked_mul(d).expect("coefficient overflow"))];
                terms.extend_from_slice(&self.terms[1..]);
                Ordinal { terms }
            };
            acc = acc.add(&chunk);
        }
        acc
    }

    /// `base^exp` within the fragment.
    ///
    /// Supported: anything with a natural exponent; a finite base with any
    /// exponent below w^2 (so e.g. `2^w = w`). Everything else errs.
    pub fn power(base: &Ordinal, exp: &Ordinal) -> Result<Ordinal, OrdinalError> {
        if exp.is_zero() {
            return Ok(Ordinal::from_nat(1));
        }
        if base.is_zero() {
            return Ok(Ordinal::zero());
        }
        if base.nat() == Some(1) {
            return Ok(Ordinal::from_nat(1));
        }
        if let Some(k) = exp.nat() {
            if k > 64 && !base.is_nat() {
                return Err(OrdinalError::OutOfRange(format!(
                    "power exponent {k} too large"
                )));
            }
            if let Some(n) = base.nat() {
                let mut acc: u64 = 1;
                for _ in 0..k {
                    acc = acc
                        .checked_mul(n)
                        .ok_or_else(|| OrdinalError::OutOfRange(format!("{n}^{k} overflows")))?;
                }
                return Ok(Ordinal::from_nat(acc));
            }
            let mut acc = Ordinal::from_nat(1);
            for _ in 0..k {
                acc = acc.multiply(base);
            }
            return Ok(acc);
        }
        // Transfinite exponent.
        let n = base.nat().ok_or_else(|| OrdinalError::UnsupportedPower {
            base: base.to_string(),
            exp: exp.to_string(),
        })?;
        // n^(w*q + r) = w^q * n^r, for finite n >= 2; exponents >= w^2 would
        // need transfinite exponents in the result.
        if exp.terms.iter().any(|&(e, _)| e >= 2) {
            return Err(OrdinalError::UnsupportedPower {
                base: base.to_string(),
                exp: exp.to_string(),
            });
        }
        let q = exp.coefficient(1);
        let r = exp.coefficient(0);
        let mut fin: u64 = 1;
        for _ in 0..r {
            fin = fin
                .checked_mul(n)
                .ok_or_else(|| OrdinalError::OutOfRange(format!("{n}^{r} overflows")))?;
        }
        let q: u32 = q
            .try_into()
            .map_err(|_| OrdinalError::OutOfRange("power result exponent overflows".into()))?;
        Ok(Ordinal::term(q, 1).multiply(&Ordinal::from_nat(fin)))
    }

    /// Left division with remainder: returns the unique `(q, r)` with
    /// `self = divisor*q + r` and `r < divisor`.
    pub fn divide(&self, divisor: &Ordinal) -> Result<(Ordinal, Ordinal), OrdinalError> {
        let Some((f, d)) = divisor.leading() else {
            return Err(OrdinalError::DivisionByZero);
        };
        let mut q = Ordinal::zero();
        let mut rem = self.clone();
        loop {
            if rem < *divisor {
                return Ok((q, rem));
            }
            let (e, c) = rem.leading().expect("rem >= divisor > 0");
            if e > f {
                // divisor * (w^(e-f) * c) = w^e * c exactly.
                let head = Ordinal::term(e, c);
                rem = head.left_subtract(&rem).expect("head is a prefix");
                q = q.add(&Ordinal::term(e - f, c));
            } else {
                debug_assert_eq!(e, f);
                let mut k = c / d;
                if divisor.multiply(&Ordinal::from_nat(k)) > rem {
                    k -= 1;
                }
                debug_assert!(k >= 1);
                let prod = divisor.multiply(&Ordinal::from_nat(k));
                rem = prod.left_subtract(&rem).expect("prod <= rem");
                q = q.add(&Ordinal::from_nat(k));
                return Ok((q, rem));
            }
        }
    }

    /// Splits off `positions` base-`base` digits:
    /// `self = base^positions * head + sum base^(positions-k) * d_k` with
    /// every digit `d_k < base` (`k = 1..=positions`, returned in that order).
    pub fn digits(
        &self,
        base: &Ordinal,
        positions: u32,
    ) -> Result<(Ordinal, Vec<Ordinal>), OrdinalError> {
        if base.is_zero() || base.nat() == Some(1) {
            return Err(OrdinalError::OutOfRange(
                "digit extraction needs base >= 2".into(),
            ));
        }
        let mut digits = Vec::with_capacity(positions as usize);
        let (head, mut rest) = self.divide(&Self::pow_nat(base, positions)?)?;
        for k in 1..=positions {
            let (dk, r) = rest.divide(&Self::pow_nat(base, positions - k)?)?;
            digits.push(dk);
            rest = r;
        }
        debug_assert!(rest.is_zero());
        Ok((head, digits))
    }

    /// `base^k` for a natural `k`.
    pub fn pow_nat(base: &Ordinal, k: u32) -> Result<Ordinal, OrdinalError> {
        Ordinal::power(base, &Ordinal::from_nat(k as u64))
    }

    /// Strict positional evaluation at a finite base: `sum n^e * c` over the
    /// normal form, requiring every coefficient `< n`. This is the faithful
    /// reading of a symbolic index at base `n`.
    pub fn eval_at(&self, n: u64) -> Result<u64, OrdinalError> {
        let mut acc: u64 = 0;
        for &(e, c) in &self.terms {
            if c >= n {
                return Err(OrdinalError::OutOfRange(format!(
                    "digit {c} at position {e} exceeds base {n}"
                )));
            }
            let mut p: u64 = 1;
            for _ in 0..e {
                p = p
                    .checked_mul(n)
                    .ok_or_else(|| OrdinalError::OutOfRange("evaluation overflows".into()))?;
            }
            acc = acc
                .checked_add(p * c)
                .ok_or_else(|| OrdinalError::OutOfRange("evaluation overflows".into()))?;
        }
        Ok(acc)
    }
}

impl PartialOrd for Ordinal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ordinal {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.terms.iter().zip(other.terms.iter()) {
            match a.0.cmp(&b.0).then(a.1.cmp(&b.1)) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for &(e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (e, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => write!(f, "w")?,
                (1, c) => write!(f, "w*{c}")?,
                (e, 1) => write!(f, "w^{e}")?,
                (e, c) => write!(f, "w^{e}*{c}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Ordinal {
    type Err = OrdinalError;

    /// Strict parser for the canonical rendering: terms joined by `" + "`,
    /// each of the form `N`, `w`, `w*C`, `w^E` or `w^E*C`; exponents must
    /// strictly decrease and coefficients be positive.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "0" {
            return Ok(Ordinal::zero());
        }
        let mut terms: Vec<(u32, u64)> = Vec::new();
        for part in s.split(" + ") {
            let (e, c) = parse_term(part)?;
            if c == 0 {
                return Err(OrdinalError::Parse(format!("zero coefficient in `{part}`")));
            }
            if let Some(&(prev, _)) = terms.last() {
                if e >= prev {
                    return Err(OrdinalError::Parse(format!(
                        "exponents must strictly decrease (w^{prev} then w^{e})"
                    )));
                }
            }
            terms.push((e, c));
        }
        Ok(Ordinal { terms })
    }
}

fn parse_term(part: &str) -> Result<(u32, u64), OrdinalError> {
    let bad = |m: &str| OrdinalError::Parse(format!("bad term `{part}`: {m}"));
    if let Some(rest) = part.strip_prefix("w^") {
        let (e_str, c_str) = match rest.split_once('*') {
            Some((e, c)) => (e, Some(c)),
            None => (rest, None),
        };
        let e: u32 = e_str.parse().map_err(|_| bad("exponent"))?;
        if e < 2 {
            return Err(bad("exponents 0 and 1 use the plain forms"));
        }
        let c: u64 = match c_str {
            Some(c) => c.parse().map_err(|_| bad("coefficient"))?,
            None => 1,
        };
        Ok((e, c))
    } else if let Some(rest) = part.strip_prefix("w*") {
        Ok((1, rest.parse().map_err(|_| bad("coefficient"))?))
    } else if part == "w" {
        Ok((1, 1))
    } else {
        Ok((0, part.parse().map_err(|_| bad("natural"))?))
    }
}

impl Serialize for Ordinal {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Ordinal {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse()
            .map_err(|e: OrdinalError| D::Error::custom(e.to_string()))
    }
}
