//! Exact truncated arithmetic in `Z/2^K Z`, 2-adic valuations and
//! ball (clopen set) manipulation.
//!
//! Every value carries its precision `K` explicitly. Arithmetic between
//! operands of different precision truncates to the smaller one, so a
//! result is never claimed at more digits than both inputs support.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PadicError {
    #[error("precision {have} too low, need at least {need} digits")]
    PrecisionTooLow { have: u32, need: u32 },
}

/// 2-adic valuation, with the zero residue reported as `AtLeast(K)`:
/// a truncation to `K` digits cannot certify more than `K` factors of two.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Valuation {
    Finite(u32),
    AtLeast(u32),
}

impl Valuation {
    pub fn is_finite(self) -> bool {
        matches!(self, Valuation::Finite(_))
    }

    /// The finite value, if any.
    pub fn finite(self) -> Option<u32> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::AtLeast(_) => None,
        }
    }

    /// Lower bound on the valuation (the value itself when finite).
    pub fn lower_bound(self) -> u32 {
        match self {
            Valuation::Finite(v) | Valuation::AtLeast(v) => v,
        }
    }
}

/// An element of `Z/2^K Z`: a truncated 2-adic integer with `K`
/// significant digits. The canonical representative lives in `[0, 2^K)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Residue {
    value: BigUint,
    precision: u32,
}

fn mask(value: BigUint, precision: u32) -> BigUint {
    value % (BigUint::one() << precision)
}

impl Residue {
    pub fn new(value: BigUint, precision: u32) -> Self {
        assert!(precision > 0, "precision must be positive");
        Residue {
            value: mask(value, precision),
            precision,
        }
    }

    pub fn from_u64(value: u64, precision: u32) -> Self {
        Self::new(BigUint::from(value), precision)
    }

    /// Canonicalizes negative representatives: `-1` at `K=4` becomes 15.
    pub fn from_i64(value: i64, precision: u32) -> Self {
        if value >= 0 {
            Self::from_u64(value as u64, precision)
        } else {
            let modulus = BigUint::one() << precision;
            let neg = BigUint::from(value.unsigned_abs()) % &modulus;
            Residue {
                value: if neg.is_zero() { neg } else { modulus - neg },
                precision,
            }
        }
    }

    pub fn zero(precision: u32) -> Self {
        Residue {
            value: BigUint::zero(),
            precision,
        }
    }

    pub fn one(precision: u32) -> Self {
        Residue {
            value: BigUint::one(),
            precision,
        }
    }

    pub fn value(&self) -> &BigUint {
        &self.value
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    /// The low 64 bits of the canonical representative.
    pub fn low_u64(&self) -> u64 {
        let digits = self.value.to_u64_digits();
        digits.first().copied().unwrap_or(0)
    }

    /// Reinterprets the residue at a lower (or equal) precision.
    pub fn truncate(&self, precision: u32) -> Self {
        assert!(precision <= self.precision);
        Residue::new(self.value.clone(), precision)
    }

    fn joint_precision(&self, other: &Self) -> u32 {
        self.precision.min(other.precision)
    }

    pub fn add(&self, other: &Self) -> Self {
        let k = self.joint_precision(other);
        Residue::new(&self.value + &other.value, k)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let k = self.joint_precision(other);
        let modulus = BigUint::one() << k;
        let a = &self.value % &modulus;
        let b = &other.value % &modulus;
        let v = if a >= b { a - b } else { a + modulus - b };
        Residue { value: v, precision: k }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let k = self.joint_precision(other);
        Residue::new(&self.value * &other.value, k)
    }

    pub fn neg(&self) -> Self {
        if self.value.is_zero() {
            self.clone()
        } else {
            Residue {
                value: (BigUint::one() << self.precision) - &self.value,
                precision: self.precision,
            }
        }
    }

    pub fn mul_u64(&self, scalar: u64) -> Self {
        Residue::new(&self.value * BigUint::from(scalar), self.precision)
    }

    pub fn pow(&self, mut exp: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Residue::one(self.precision);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base);
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// 2-adic valuation; `AtLeast(K)` for the zero residue.
    pub fn nu2(&self) -> Valuation {
        if self.value.is_zero() {
            Valuation::AtLeast(self.precision)
        } else {
            Valuation::Finite(self.value.trailing_zeros().unwrap() as u32)
        }
    }

    /// Exact division by `2^e`; the quotient loses `e` digits of precision.
    pub fn shr_exact(&self, e: u32) -> Result<Self, PadicError> {
        if self.precision <= e {
            return Err(PadicError::PrecisionTooLow {
                have: self.precision,
                need: e + 1,
            });
        }
        match self.nu2() {
            Valuation::Finite(v) if v < e => panic!("shr_exact: value not divisible by 2^{e}"),
            _ => {}
        }
        Ok(Residue {
            value: &self.value >> e,
            precision: self.precision - e,
        })
    }
}

/// Inverse of an odd residue modulo `2^precision`, by Newton iteration.
pub fn inverse_mod_pow2(a: &BigUint, precision: u32) -> BigUint {
    assert!(a.bit(0), "only odd residues are invertible mod 2^K");
    let modulus = BigUint::one() << precision;
    let two = BigUint::from(2u32);
    let mut inv = BigUint::one();
    let mut bits = 1u32;
    while bits < precision {
        // each step doubles the number of correct low bits
        inv = (&inv * ((&two + &modulus - ((a * &inv) % &modulus)) % &modulus)) % &modulus;
        bits *= 2;
    }
    inv
}

/// A clopen ball `center + 2^level Z_2`, identified by its canonical
/// center in `[0, 2^level)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ball {
    center: BigUint,
    level: u32,
}

impl Ball {
    pub fn new(center: BigUint, level: u32) -> Self {
        assert!(level > 0, "ball level must be positive");
        Ball {
            center: mask(center, level),
            level,
        }
    }

    pub fn from_u64(center: u64, level: u32) -> Self {
        Ball::new(BigUint::from(center), level)
    }

    pub fn from_i64(center: i64, level: u32) -> Self {
        let r = Residue::from_i64(center, level);
        Ball {
            center: r.value().clone(),
            level,
        }
    }

    pub fn center(&self) -> &BigUint {
        &self.center
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    /// Membership test; errors when `x` carries fewer digits than the
    /// ball level needs.
    pub fn contains(&self, x: &Residue) -> Result<bool, PadicError> {
        if x.precision() < self.level {
            return Err(PadicError::PrecisionTooLow {
                have: x.precision(),
                need: self.level,
            });
        }
        Ok(mask(x.value().clone(), self.level) == self.center)
    }

    /// All residues mod `2^k` lying in the ball, for `k >= level`.
    pub fn residues_mod(&self, k: u32) -> impl Iterator<Item = u64> + '_ {
        assert!(k >= self.level && k <= 32, "residue enumeration needs level <= k <= 32");
        let center = self.center.to_u64_digits().first().copied().unwrap_or(0);
        let step = 1u64 << self.level;
        let count = 1u64 << (k - self.level);
        (0..count).map(move |i| center + i * step)
    }
}

/// Outcome of checking a claimed partition of residues mod `2^K`.
#[derive(Debug, Clone, Serialize)]
pub struct PartitionReport {
    pub level: u32,
    pub disjoint: bool,
    pub covers: bool,
    pub multiply_covered: Vec<u64>,
    pub uncovered: Vec<u64>,
}

impl PartitionReport {
    pub fn is_exact_partition(&self) -> bool {
        self.disjoint && self.covers
    }
}

/// Checks whether `balls` are pairwise disjoint and cover `target`
/// (all residues mod `2^k` when `target` is `None`) exactly.
pub fn ball_partition_check(balls: &[Ball], k: u32, target: Option<&[u64]>) -> PartitionReport {
    assert!(k <= 26, "partition check enumerates 2^k residues, k <= 26");
    for b in balls {
        assert!(b.level() <= k, "every ball must have level <= k");
    }
    let size = 1usize << k;
    let mut counts = vec![0u32; size];
    for b in balls {
        for r in b.residues_mod(k) {
            counts[r as usize] += 1;
        }
    }
    let in_target: Vec<bool> = match target {
        None => vec![true; size],
        Some(t) => {
            let mut v = vec![false; size];
            for &r in t {
                v[r as usize] = true;
            }
            v
        }
    };
    let mut multiply_covered = Vec::new();
    let mut uncovered = Vec::new();
    for r in 0..size {
        if counts[r] > 1 {
            multiply_covered.push(r as u64);
        }
        if in_target[r] && counts[r] == 0 {
            uncovered.push(r as u64);
        }
        // covered residues outside the target also break exactness
        if !in_target[r] && counts[r] > 0 {
            multiply_covered.push(r as u64);
        }
    }
    multiply_covered.dedup();
    PartitionReport {
        level: k,
        disjoint: multiply_covered.is_empty(),
        covers: uncovered.is_empty(),
        multiply_covered,
        uncovered,
    }
}
