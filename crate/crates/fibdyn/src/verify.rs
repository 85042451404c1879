//! Named verification suites: each one re-checks a family of exact
//! statements (value periodicity, valuations, derivative congruences,
//! evaluator cross-checks, lift laws, digit-function parity, the
//! index-addition law, the Gaussian period) and reports pass/fail per
//! check with a counterexample payload on failure.

use serde::Serialize;

use crate::catalog::digit_parity_consistent;
use crate::engine::{verify_lift_laws, FibMap};
use crate::exec::par_map;
use crate::fibpoly::{
    fib_eval_fast, fib_eval_sum, fib_gaussian, jet_sequence, period_of, GaussianValue,
    PeriodResult,
};
use crate::padic::{Residue, Valuation};

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteResult {
    pub suite: String,
    pub checks: Vec<CheckResult>,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    fn push(&mut self, name: impl Into<String>, failure: Option<String>) {
        self.checks.push(CheckResult {
            name: name.into(),
            pass: failure.is_none(),
            counterexample: failure,
        });
    }
}

pub const SUITES: &[&str] = &[
    "periodicity",
    "valuation",
    "derivatives",
    "oracles",
    "lift-laws",
    "digit-parity",
    "addition-law",
    "gaussian",
];

#[derive(Debug, Clone, Copy)]
pub struct SuiteParams {
    pub max_l: u32,
    pub m: u64,
    pub level: u32,
}

impl Default for SuiteParams {
    fn default() -> Self {
        SuiteParams {
            max_l: 8,
            m: 28,
            level: 8,
        }
    }
}

pub fn run_suite(name: &str, params: SuiteParams) -> Option<SuiteResult> {
    Some(match name {
        "periodicity" => periodicity_suite(params.max_l),
        "valuation" => valuation_suite(params.max_l),
        "derivatives" => derivative_suite(params.max_l),
        "oracles" => oracle_suite(400, 16),
        "lift-laws" => lift_law_suite(params.m, params.level),
        "digit-parity" => digit_parity_suite(1 << 16),
        "addition-law" => addition_law_suite(),
        "gaussian" => gaussian_suite(),
        _ => return None,
    })
}

const ODD_PROBES: [u64; 4] = [1, 3, 5, 11];
const EVEN_PROBES: [u64; 4] = [2, 6, 12, 40];

fn value_at(m: u64, s: u64, precision: u32) -> Residue {
    fib_eval_fast(m, &Residue::from_u64(s, precision)).value
}

/// Period of m -> F_m(s) mod 2^l: 3 * 2^{l-1} for odd s, and for even
/// s either 2 (l <= nu(s)) or 2^{l + 1 - nu(s)}. Also the pinned
/// residues of F at the period indices 3 * 2^l and 3 * 2^l + 1.
pub fn periodicity_suite(max_l: u32) -> SuiteResult {
    let mut out = SuiteResult {
        suite: "periodicity".into(),
        checks: Vec::new(),
    };
    for &s in &ODD_PROBES {
        for l in 1..=max_l {
            let want = 3 * (1u64 << (l - 1));
            let got = period_of(|m| value_at(m, s, l).value().clone(), l, want);
            out.push(
                format!("period of F_.({s}) mod 2^{l} is {want}"),
                (got != PeriodResult::Period(want)).then(|| format!("{got:?}")),
            );
        }
    }
    for &s in &EVEN_PROBES {
        let nu = s.trailing_zeros();
        for l in 1..=max_l {
            let want = if l <= nu { 2 } else { 1u64 << (l + 1 - nu) };
            let got = period_of(|m| value_at(m, s, l).value().clone(), l, want);
            out.push(
                format!("period of F_.({s}) mod 2^{l} is {want}"),
                (got != PeriodResult::Period(want)).then(|| format!("{got:?}")),
            );
        }
    }
    for &s in &ODD_PROBES {
        for l in 1..=max_l {
            let p = l + 2;
            let idx = 3 * (1u64 << l);
            let v0 = value_at(idx, s, p);
            let v1 = value_at(idx + 1, s, p);
            let want1 = Residue::from_u64(1 + (1u64 << (l + 1)), p);
            out.push(
                format!("F_{idx}({s}) = 0 and F_{}({s}) = 1 + 2^{} mod 2^{p}", idx + 1, l + 1),
                (!v0.is_zero() || v1 != want1)
                    .then(|| format!("got ({}, {})", v0.low_u64(), v1.low_u64())),
            );
        }
    }
    out
}

/// nu_2(F_{3 * 2^l}(s)) = l + 2 exactly, for odd s.
pub fn valuation_suite(max_l: u32) -> SuiteResult {
    let mut out = SuiteResult {
        suite: "valuation".into(),
        checks: Vec::new(),
    };
    for &s in &ODD_PROBES {
        for l in 1..=max_l {
            let idx = 3 * (1u64 << l);
            let v = value_at(idx, s, l + 4).nu2();
            out.push(
                format!("nu_2(F_{idx}({s})) = {}", l + 2),
                (v != Valuation::Finite(l + 2)).then(|| format!("{v:?}")),
            );
        }
    }
    out
}

/// Derivative congruences and periods at odd arguments:
/// F'_{3*2^{l-1}} = 0 and F'_{3*2^{l-1}+1} = 2^{l-1} mod 2^l, with
/// m -> F'_m period 3*2^l; second and third derivatives vanish at
/// index 3*2^l mod 2^l, with period 3*2^{l+1}.
pub fn derivative_suite(max_l: u32) -> SuiteResult {
    let mut out = SuiteResult {
        suite: "derivatives".into(),
        checks: Vec::new(),
    };
    for &s in &ODD_PROBES {
        for l in 1..=max_l {
            let jet_at = |m: u64, p: u32| fib_eval_fast(m, &Residue::from_u64(s, p));
            let idx = 3 * (1u64 << (l - 1));
            let j0 = jet_at(idx, l);
            let j1 = jet_at(idx + 1, l);
            let want = Residue::from_u64(1u64 << (l - 1), l);
            out.push(
                format!("F'_{idx}({s}) = 0, F'_{}({s}) = 2^{} mod 2^{l}", idx + 1, l - 1),
                (!j0.d1.is_zero() || j1.d1 != want)
                    .then(|| format!("got ({}, {})", j0.d1.low_u64(), j1.d1.low_u64())),
            );
            let period = 3 * (1u64 << l);
            let got = period_of(|m| jet_at(m, l).d1.value().clone(), l, period);
            out.push(
                format!("period of F'_.({s}) mod 2^{l} is {period}"),
                (got != PeriodResult::Period(period)).then(|| format!("{got:?}")),
            );
        }
        for l in 1..=max_l.saturating_sub(1) {
            let jet_at = |m: u64, p: u32| fib_eval_fast(m, &Residue::from_u64(s, p));
            let idx = 3 * (1u64 << l);
            let j0 = jet_at(idx, l + 1);
            let j1 = jet_at(idx + 1, l + 1);
            let want2 = Residue::from_u64(1u64 << l, l + 1);
            out.push(
                format!("F''_{idx}({s}) = 0, F''_{}({s}) = 2^{l} mod 2^{}", idx + 1, l + 1),
                (!j0.d2.is_zero() || j1.d2 != want2)
                    .then(|| format!("got ({}, {})", j0.d2.low_u64(), j1.d2.low_u64())),
            );
            let j2 = jet_at(idx + 2, l + 1);
            out.push(
                format!(
                    "F'''_{idx}({s}) = F'''_{}({s}) = 0, F'''_{}({s}) = 2^{l} mod 2^{}",
                    idx + 1,
                    idx + 2,
                    l + 1
                ),
                (!j0.d3.is_zero() || !j1.d3.is_zero() || j2.d3 != want2)
                    .then(|| format!("got ({}, {}, {})", j0.d3.low_u64(), j1.d3.low_u64(), j2.d3.low_u64())),
            );
            let lp = l + 1;
            let period = 3 * (1u64 << lp);
            for (name, pick) in [("F''", 2u8), ("F'''", 3)] {
                let got = period_of(
                    |m| {
                        let j = jet_at(m, lp);
                        if pick == 2 { j.d2 } else { j.d3 }.value().clone()
                    },
                    lp,
                    period,
                );
                out.push(
                    format!("period of {name}_.({s}) mod 2^{lp} is {period}"),
                    (got != PeriodResult::Period(period)).then(|| format!("{got:?}")),
                );
            }
        }
    }
    out
}

/// The three evaluators agree: recurrence jets vs doubling jets on the
/// full jet, and the binomial-sum value against both.
pub fn oracle_suite(max_m: u64, k: u32) -> SuiteResult {
    let mut out = SuiteResult {
        suite: "oracles".into(),
        checks: Vec::new(),
    };
    let xs: Vec<u64> = (0..32).collect();
    let failures: Vec<Option<String>> = par_map(xs.into_iter(), |xv| {
        let x = Residue::from_u64(xv, k);
        for (m, naive) in jet_sequence(&x).take(max_m as usize + 1).enumerate() {
            let m = m as u64;
            let fast = fib_eval_fast(m, &x);
            if naive.value != fast.value
                || naive.d1 != fast.d1
                || naive.d2 != fast.d2
                || naive.d3 != fast.d3
            {
                return Some(format!("jet mismatch at m={m}, x={xv}"));
            }
            let sum = fib_eval_sum(m, &x);
            if sum != fast.value {
                return Some(format!(
                    "sum mismatch at m={m}, x={xv}: {} vs {}",
                    sum.low_u64(),
                    fast.value.low_u64()
                ));
            }
        }
        None
    });
    out.push(
        format!("recurrence, doubling and binomial-sum evaluators agree for m <= {max_m}, 32 arguments, mod 2^{k}"),
        failures.into_iter().flatten().next(),
    );
    out
}

pub fn lift_law_suite(m: u64, level: u32) -> SuiteResult {
    let mut out = SuiteResult {
        suite: "lift-laws".into(),
        checks: Vec::new(),
    };
    let report = verify_lift_laws(&FibMap { m }, level);
    out.push(
        format!(
            "lift laws for m={m} up to level {level} ({} cycles checked)",
            report.cycles_checked
        ),
        (!report.ok()).then(|| format!("{:?}", report.violations)),
    );
    out
}

pub fn digit_parity_suite(bound: u64) -> SuiteResult {
    let mut out = SuiteResult {
        suite: "digit-parity".into(),
        checks: Vec::new(),
    };
    let bad = (0..bound).find(|&q| !digit_parity_consistent(q));
    out.push(
        format!("digit pair at t(q) matches t's parity for q < {bound}"),
        bad.map(|q| format!("q = {q}")),
    );
    out
}

/// F_{a+b} = F_{a+1} F_b + F_a F_{b-1} on residues.
pub fn addition_law_suite() -> SuiteResult {
    let mut out = SuiteResult {
        suite: "addition-law".into(),
        checks: Vec::new(),
    };
    let k = 20;
    let mut failure = None;
    'outer: for xv in [0u64, 1, 2, 3, 7, 10, 255] {
        let x = Residue::from_u64(xv, k);
        for a in 1..40u64 {
            for b in 1..40u64 {
                let lhs = fib_eval_fast(a + b, &x).value;
                let rhs = fib_eval_fast(a + 1, &x)
                    .value
                    .mul(&fib_eval_fast(b, &x).value)
                    .add(
                        &fib_eval_fast(a, &x)
                            .value
                            .mul(&fib_eval_fast(b - 1, &x).value),
                    );
                if lhs != rhs {
                    failure = Some(format!("a={a}, b={b}, x={xv}"));
                    break 'outer;
                }
            }
        }
    }
    out.push("index addition law on residues mod 2^20", failure);
    out
}

/// The value of F_m at the imaginary unit, divided by i, runs through
/// a fixed period-12 sequence.
pub fn gaussian_suite() -> SuiteResult {
    let mut out = SuiteResult {
        suite: "gaussian".into(),
        checks: Vec::new(),
    };
    let want: [(i64, i64); 12] = [
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
    let bad = (0..48u64).find(|&m| {
        let g = fib_gaussian(m);
        let (re, im) = want[(m % 12) as usize];
        g != GaussianValue { re, im }
    });
    out.push(
        "F_m(i)/i runs through the period-12 table",
        bad.map(|m| format!("m = {m}: {:?}", fib_gaussian(m))),
    );
    out
}

/// Every suite with default parameters.
pub fn run_all(params: SuiteParams) -> Vec<SuiteResult> {
    SUITES
        .iter()
        .map(|s| run_suite(s, params).unwrap())
        .collect()
}
