//! Fibonacci polynomials `F_m(x)` over `Z/2^K Z`: three independent
//! evaluation routes (forward recurrence, index doubling, explicit
//! binomial sum), first three derivatives, the Gaussian-integer
//! auxiliary sequence `F_m(i)/i`, and a period finder for sequences
//! reduced mod `2^l`.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use once_cell::sync::Lazy;

use crate::padic::{inverse_mod_pow2, Residue};

/// `F_m(x)` together with its first three derivatives at `x`, all
/// reduced at `x`'s precision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FibJet {
    pub m: u64,
    pub value: Residue,
    pub d1: Residue,
    pub d2: Residue,
    pub d3: Residue,
}

impl FibJet {
    fn zero_at(m: u64, k: u32) -> Self {
        FibJet {
            m,
            value: Residue::zero(k),
            d1: Residue::zero(k),
            d2: Residue::zero(k),
            d3: Residue::zero(k),
        }
    }

    fn one_at(m: u64, k: u32) -> Self {
        FibJet {
            m,
            value: Residue::one(k),
            d1: Residue::zero(k),
            d2: Residue::zero(k),
            d3: Residue::zero(k),
        }
    }
}

/// One step of the defining recurrence with derivative carry:
/// `F_m = x F_{m-1} + F_{m-2}`, differentiated up to third order.
fn recurrence_step(x: &Residue, prev: &FibJet, prev2: &FibJet) -> FibJet {
    FibJet {
        m: prev.m + 1,
        value: x.mul(&prev.value).add(&prev2.value),
        d1: prev.value.add(&x.mul(&prev.d1)).add(&prev2.d1),
        d2: prev.d1.mul_u64(2).add(&x.mul(&prev.d2)).add(&prev2.d2),
        d3: prev.d2.mul_u64(3).add(&x.mul(&prev.d3)).add(&prev2.d3),
    }
}

/// `F_m(x)` and derivatives by the O(m) forward recurrence.
pub fn fib_eval_naive(m: u64, x: &Residue) -> FibJet {
    let k = x.precision();
    let mut prev2 = FibJet::zero_at(0, k);
    if m == 0 {
        return prev2;
    }
    let mut prev = FibJet::one_at(1, k);
    for _ in 1..m {
        let next = recurrence_step(x, &prev, &prev2);
        prev2 = prev;
        prev = next;
    }
    prev
}

/// Streaming jets `F_0, F_1, F_2, ...` at a fixed argument via the
/// forward recurrence; the cheap way to sweep an index range.
pub struct JetSequence {
    x: Residue,
    prev2: FibJet,
    prev: FibJet,
    emitted: u64,
}

pub fn jet_sequence(x: &Residue) -> JetSequence {
    let k = x.precision();
    JetSequence {
        x: x.clone(),
        prev2: FibJet::zero_at(0, k),
        prev: FibJet::one_at(1, k),
        emitted: 0,
    }
}

impl Iterator for JetSequence {
    type Item = FibJet;

    fn next(&mut self) -> Option<FibJet> {
        self.emitted += 1;
        match self.emitted {
            1 => Some(self.prev2.clone()),
            2 => Some(self.prev.clone()),
            _ => {
                let next = recurrence_step(&self.x, &self.prev, &self.prev2);
                self.prev2 = std::mem::replace(&mut self.prev, next);
                Some(self.prev.clone())
            }
        }
    }
}

/// Doubled-index step: from the pair `(F_m, F_{m+1})` with derivative
/// jets, produce `(F_{2m}, F_{2m+1})`. Uses
/// `F_{2m} = F_m (2 F_{m+1} - x F_m)` and `F_{2m+1} = F_{m+1}^2 + F_m^2`,
/// with both identities differentiated formally up to third order.
fn doubling_step(x: &Residue, a: &FibJet, b: &FibJet) -> (FibJet, FibJet) {
    debug_assert_eq!(a.m + 1, b.m);
    // S = F_{m+1} + F_{m-1} = 2 F_{m+1} - x F_m
    let s = b.value.mul_u64(2).sub(&x.mul(&a.value));
    let s1 = b.d1.mul_u64(2).sub(&a.value).sub(&x.mul(&a.d1));
    let s2 = b.d2.mul_u64(2).sub(&a.d1.mul_u64(2)).sub(&x.mul(&a.d2));
    let s3 = b.d3.mul_u64(2).sub(&a.d2.mul_u64(3)).sub(&x.mul(&a.d3));

    let even = FibJet {
        m: 2 * a.m,
        value: a.value.mul(&s),
        d1: a.d1.mul(&s).add(&a.value.mul(&s1)),
        d2: a
            .d2
            .mul(&s)
            .add(&a.d1.mul(&s1).mul_u64(2))
            .add(&a.value.mul(&s2)),
        d3: a
            .d3
            .mul(&s)
            .add(&a.d2.mul(&s1).mul_u64(3))
            .add(&a.d1.mul(&s2).mul_u64(3))
            .add(&a.value.mul(&s3)),
    };
    let odd = FibJet {
        m: 2 * a.m + 1,
        value: b.value.mul(&b.value).add(&a.value.mul(&a.value)),
        d1: b.value.mul(&b.d1).add(&a.value.mul(&a.d1)).mul_u64(2),
        d2: b
            .d1
            .mul(&b.d1)
            .add(&b.value.mul(&b.d2))
            .add(&a.d1.mul(&a.d1))
            .add(&a.value.mul(&a.d2))
            .mul_u64(2),
        d3: b
            .d1
            .mul(&b.d2)
            .mul_u64(3)
            .add(&b.value.mul(&b.d3))
            .add(&a.d1.mul(&a.d2).mul_u64(3))
            .add(&a.value.mul(&a.d3))
            .mul_u64(2),
    };
    (even, odd)
}

/// `F_m(x)` and derivatives in O(log m) ring operations.
pub fn fib_eval_fast(m: u64, x: &Residue) -> FibJet {
    let k = x.precision();
    if m == 0 {
        return FibJet::zero_at(0, k);
    }
    // walk the bits of m from the most significant down, maintaining
    // the pair (F_j, F_{j+1}) for the prefix j
    let mut a = FibJet::zero_at(0, k);
    let mut b = FibJet::one_at(1, k);
    let bits = 64 - m.leading_zeros();
    for i in (0..bits).rev() {
        let (even, odd) = doubling_step(x, &a, &b);
        if (m >> i) & 1 == 0 {
            a = even;
            b = odd;
        } else {
            let next = recurrence_step(x, &odd, &even);
            a = odd;
            b = next;
        }
    }
    a
}

/// Exact binomial tracked as `2^e * odd` with the odd part known
/// mod `2^width`. Multiplication/division by small integers splits
/// off their power of two and works on the odd parts, so integer
/// binomials never require a ring division.
struct TrackedBinomial {
    exp: i64,
    odd: BigUint,
    modulus: BigUint,
    width: u32,
}

impl TrackedBinomial {
    fn one(width: u32) -> Self {
        TrackedBinomial {
            exp: 0,
            odd: BigUint::one(),
            modulus: BigUint::one() << width,
            width,
        }
    }

    fn mul_int(&mut self, n: u64) {
        debug_assert!(n > 0);
        self.exp += n.trailing_zeros() as i64;
        self.odd = (&self.odd * BigUint::from(n >> n.trailing_zeros())) % &self.modulus;
    }

    fn div_int(&mut self, n: u64) {
        debug_assert!(n > 0);
        self.exp -= n.trailing_zeros() as i64;
        let inv = inverse_mod_pow2(&BigUint::from(n >> n.trailing_zeros()), self.width);
        self.odd = (&self.odd * inv) % &self.modulus;
    }

    /// The binomial reduced mod `2^width`.
    fn reduced(&self) -> BigUint {
        debug_assert!(self.exp >= 0, "binomial coefficients are integers");
        if self.exp as u32 >= self.width {
            BigUint::zero()
        } else {
            ((BigUint::one() << (self.exp as u32)) * &self.odd) % &self.modulus
        }
    }
}

/// Working width for the binomial sum: the requested precision plus a
/// 32-digit guard absorbing the denominators' powers of two.
const SUM_GUARD: u32 = 32;

/// `F_m(x)` via the explicit binomial summation formula; a third
/// evaluation route independent of both recurrences.
pub fn fib_eval_sum(m: u64, x: &Residue) -> Residue {
    let k = x.precision();
    if m == 0 {
        return Residue::zero(k);
    }
    let width = k + SUM_GUARD;
    let xw = Residue::new(x.value().clone(), width);
    let mut acc = Residue::zero(width);
    let mut binom = TrackedBinomial::one(width);
    if m % 2 == 0 {
        // F_m(x) = sum_{j=0}^{h-1} C(h+j, 1+2j) x^{1+2j}, h = m/2
        let h = m / 2;
        // j = 0: C(h, 1) = h
        binom.mul_int(h);
        let mut xpow = xw.clone();
        let xsq = xw.mul(&xw);
        for j in 0..h {
            acc = acc.add(&Residue::new(binom.reduced(), width).mul(&xpow));
            if j + 1 < h {
                // C(h+j+1, 3+2j) = C(h+j, 1+2j) * (h+j+1)(h-j-1) / ((2j+2)(2j+3))
                binom.mul_int(h + j + 1);
                binom.mul_int(h - j - 1);
                binom.div_int(2 * j + 2);
                binom.div_int(2 * j + 3);
                xpow = xpow.mul(&xsq);
                // every remaining term is a multiple of xpow
                if xpow.is_zero() {
                    break;
                }
            }
        }
    } else {
        // F_m(x) = sum_{j=0}^{h} C(h+j, 2j) x^{2j}, h = (m-1)/2
        let h = (m - 1) / 2;
        let mut xpow = Residue::one(width);
        let xsq = xw.mul(&xw);
        for j in 0..=h {
            acc = acc.add(&Residue::new(binom.reduced(), width).mul(&xpow));
            if j < h {
                // C(h+j+1, 2j+2) = C(h+j, 2j) * (h+j+1)(h-j) / ((2j+1)(2j+2))
                binom.mul_int(h + j + 1);
                binom.mul_int(h - j);
                binom.div_int(2 * j + 1);
                binom.div_int(2 * j + 2);
                xpow = xpow.mul(&xsq);
                // every remaining term is a multiple of xpow
                if xpow.is_zero() {
                    break;
                }
            }
        }
    }
    acc.truncate(k)
}

/// A Gaussian integer, used for the auxiliary sequence `F_m(i)/i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GaussianValue {
    pub re: i64,
    pub im: i64,
}

/// The period-12 table of `F_m(i)/i`, rederived at first use by running
/// the recurrence over `Z[i]` and asserting the period, rather than
/// hard-coding the constants.
static GAUSSIAN_TABLE: Lazy<[GaussianValue; 12]> = Lazy::new(|| {
    // F_m(i) via F_m = i*F_{m-1} + F_{m-2}
    let mut seq = Vec::with_capacity(36);
    seq.push((0i64, 0i64));
    seq.push((1i64, 0i64));
    for m in 2..36 {
        let (pr, pi): (i64, i64) = seq[m - 1];
        let (qr, qi) = seq[m - 2];
        // i * (pr + pi i) = -pi + pr i
        seq.push((qr - pi, qi + pr));
    }
    for m in 0..24 {
        assert_eq!(seq[m], seq[m + 12], "F_m(i) must have period 12");
    }
    let mut table = [GaussianValue { re: 0, im: 0 }; 12];
    for (m, slot) in table.iter_mut().enumerate() {
        // (a + b i) / i = b - a i, exact in Z[i]
        let (a, b) = seq[m];
        *slot = GaussianValue { re: b, im: -a };
    }
    table
});

/// `F_m(i)/i` from the period-12 table.
pub fn fib_gaussian(m: u64) -> GaussianValue {
    GAUSSIAN_TABLE[(m % 12) as usize]
}

/// Outcome of probing a sequence for its period.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PeriodResult {
    Period(u64),
    ExceedsBound,
}

/// Least period of `{gen(m) mod 2^l}_m`, probed over a window of four
/// times the bound so a sub-period cannot alias: a candidate is
/// accepted only if it matches over the whole window.
pub fn period_of(mut gen: impl FnMut(u64) -> BigUint, l: u32, bound: u64) -> PeriodResult {
    let modulus = BigUint::one() << l;
    let n = 4 * bound + 8;
    let seq: Vec<BigUint> = (0..n).map(|m| gen(m) % &modulus).collect();
    for d in 1..=bound {
        let d = d as usize;
        if (0..seq.len() - d).all(|j| seq[j + d] == seq[j]) {
            return PeriodResult::Period(d as u64);
        }
    }
    PeriodResult::ExceedsBound
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::Valuation;

    fn r(v: u64, k: u32) -> Residue {
        Residue::from_u64(v, k)
    }

    #[test]
    fn naive_initial_conditions_and_small_values() {
        let x = r(1, 3);
        let j = fib_eval_naive(6, &x);
        assert!(j.value.is_zero()); // F_6(1) = 8 == 0 mod 8
        let j1 = fib_eval_naive(1, &r(5, 4));
        assert_eq!(j1.value, r(1, 4));
        assert!(j1.d1.is_zero() && j1.d2.is_zero() && j1.d3.is_zero());
        assert_eq!(fib_eval_naive(16, &r(1, 4)).value, r(11, 4));
    }

    #[test]
    fn fast_matches_reference_values() {
        // F_6(1+2t), t=1: value 8*3*3*5 = 360, nu2 = 3
        let x = r(3, 6);
        let j = fib_eval_fast(6, &x);
        assert_eq!(j.value.nu2(), Valuation::Finite(3));
        assert_eq!(j.value, r(360 % 64, 6));
        // F_7(1) = 13 == 5 mod 8
        assert_eq!(fib_eval_fast(7, &r(1, 3)).value, r(5, 3));
    }

    #[test]
    fn fast_matches_naive_at_large_index() {
        let x = r(3, 12);
        let fast = fib_eval_fast(1_000_003, &x);
        let naive = fib_eval_naive(1_000_003, &x);
        assert_eq!(fast, naive);
    }

    #[test]
    fn fast_jets_match_naive_on_grid() {
        for m in 0..260u64 {
            for xv in [0u64, 1, 2, 3, 7, 12, 31] {
                let x = r(xv, 16);
                assert_eq!(fib_eval_fast(m, &x), fib_eval_naive(m, &x), "m={m} x={xv}");
            }
        }
    }

    #[test]
    fn sum_examples() {
        // F_5(x) = 1 + 3x^2 + x^4 at x=1 -> 5
        assert_eq!(fib_eval_sum(5, &r(1, 4)), r(5, 4));
        // F_2(x) = x
        assert_eq!(fib_eval_sum(2, &r(7, 4)), r(7, 4));
        assert_eq!(fib_eval_sum(12, &r(2, 6)), fib_eval_naive(12, &r(2, 6)).value);
    }

    #[test]
    fn sum_matches_naive_on_grid() {
        for m in 0..120u64 {
            for xv in 0..8u64 {
                let x = r(xv, 10);
                assert_eq!(
                    fib_eval_sum(m, &x),
                    fib_eval_naive(m, &x).value,
                    "m={m} x={xv}"
                );
            }
        }
    }

    #[test]
    fn gaussian_table_entries() {
        assert_eq!(fib_gaussian(4), GaussianValue { re: 1, im: 0 });
        assert_eq!(fib_gaussian(6), GaussianValue { re: 0, im: 0 });
        assert_eq!(fib_gaussian(10), GaussianValue { re: -1, im: 0 });
        // full table from the recurrence: {0,-i,1,0,1,i,0,i,-1,0,-1,-i}
        let expected = [
            (0, 0),
            (0, -1),
            (1, 0),
            (0, 0),
            (1, 0),
            (0, 1),
            (0, 0),
            (0, 1),
            (-1, 0),
            (0, 0),
            (-1, 0),
            (0, -1),
        ];
        for (m, &(re, im)) in expected.iter().enumerate() {
            assert_eq!(fib_gaussian(m as u64), GaussianValue { re, im }, "m={m}");
        }
    }

    #[test]
    fn period_examples() {
        // {F_m(1) mod 2} has period 3
        let p = period_of(|m| fib_eval_naive(m, &r(1, 1)).value.value().clone(), 1, 16);
        assert_eq!(p, PeriodResult::Period(3));
        // even s with l <= nu2(s): period 2
        let p = period_of(|m| fib_eval_naive(m, &r(4, 2)).value.value().clone(), 2, 16);
        assert_eq!(p, PeriodResult::Period(2));
        // {F'_m(1) mod 4} has period 12
        let p = period_of(|m| fib_eval_naive(m, &r(1, 2)).d1.value().clone(), 2, 32);
        assert_eq!(p, PeriodResult::Period(12));
        // bound too small
        let p = period_of(|m| fib_eval_naive(m, &r(1, 2)).value.value().clone(), 2, 3);
        assert_eq!(p, PeriodResult::ExceedsBound);
    }
}
