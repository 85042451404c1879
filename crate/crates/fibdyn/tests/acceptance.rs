//! Acceptance gate: ten exact criteria, one test each, every test
//! printing a single pass/fail line (visible with `--nocapture`).
//! All checks are exact integer statements with zero tolerance.

use num_bigint::BigUint;

use fibdyn::catalog::{
    catalog_decompose, compare_with_engine, g_sequence, level10_cycle_table, FamilyKind, SeedCase,
    Truncation,
};
use fibdyn::engine::{analyze_cycle, decompose, verify_lift_laws, Behavior, Cycle, FibMap};
use fibdyn::fibpoly::{fib_eval_fast, period_of, PeriodResult};
use fibdyn::padic::{ball_partition_check, Ball, Residue, Valuation};
use fibdyn::verify::oracle_suite;

fn report(criterion: &str, pass: bool, detail: &str) {
    println!(
        "acceptance {criterion}: {}{}",
        if pass { "pass" } else { "FAIL" },
        if detail.is_empty() {
            String::new()
        } else {
            format!(" ({detail})")
        }
    );
    assert!(pass, "{criterion}: {detail}");
}

fn value_seq(s: u64, l: u32) -> impl FnMut(u64) -> BigUint {
    move |m| fib_eval_fast(m, &Residue::from_u64(s, l)).value.value().clone()
}

#[test]
fn criterion_01_periodicity() {
    let mut detail = String::new();
    let mut pass = true;
    for s in (1..64u64).step_by(2) {
        for l in 1..=8u32 {
            let want = 3 * (1u64 << (l - 1));
            if period_of(value_seq(s, l), l, want) != PeriodResult::Period(want) {
                pass = false;
                detail = format!("odd s={s}, l={l}");
            }
        }
    }
    for s in [2u64, 4, 6, 8, 12, 16] {
        let nu = s.trailing_zeros();
        for l in 1..=8u32 {
            let want = if l <= nu { 2 } else { 1u64 << (l + 1 - nu) };
            if period_of(value_seq(s, l), l, want) != PeriodResult::Period(want) {
                pass = false;
                detail = format!("even s={s}, l={l}");
            }
        }
    }
    report("criterion 1 (value periodicity)", pass, &detail);
}

#[test]
fn criterion_02_valuation() {
    let mut detail = String::new();
    let mut pass = true;
    for s in (1..32u64).step_by(2) {
        for l in 1..=10u32 {
            let v = fib_eval_fast(3 * (1u64 << l), &Residue::from_u64(s, l + 4))
                .value
                .nu2();
            if v != Valuation::Finite(l + 2) {
                pass = false;
                detail = format!("s={s}, l={l}: {v:?}");
            }
        }
    }
    report("criterion 2 (valuation of F at 3*2^l)", pass, &detail);
}

#[test]
fn criterion_03_derivative_congruences() {
    let mut detail = String::new();
    let mut pass = true;
    let mut check = |cond: bool, what: String| {
        if !cond {
            pass = false;
            detail = what;
        }
    };
    for s in (1..16u64).step_by(2) {
        for l in 1..=8u32 {
            let jet = |m: u64, p: u32| fib_eval_fast(m, &Residue::from_u64(s, p));
            // first derivative at 3*2^{l-1}, mod 2^l
            let idx = 3 * (1u64 << (l - 1));
            let j0 = jet(idx, l);
            let j1 = jet(idx + 1, l);
            check(j0.d1.is_zero(), format!("F' at {idx}, s={s}, l={l}"));
            check(
                j1.d1 == Residue::from_u64(1u64 << (l - 1), l),
                format!("F' at {}, s={s}, l={l}", idx + 1),
            );
            // second and third derivatives at 3*2^l, mod 2^{l+1}
            let idx = 3 * (1u64 << l);
            let j0 = jet(idx, l + 1);
            let j1 = jet(idx + 1, l + 1);
            let j2 = jet(idx + 2, l + 1);
            let half = Residue::from_u64(1u64 << l, l + 1);
            check(j0.d2.is_zero(), format!("F'' at {idx}, s={s}, l={l}"));
            check(j1.d2 == half, format!("F'' at {}, s={s}, l={l}", idx + 1));
            check(j0.d3.is_zero(), format!("F''' at {idx}, s={s}, l={l}"));
            check(j1.d3.is_zero(), format!("F''' at {}, s={s}, l={l}", idx + 1));
            check(j2.d3 == half, format!("F''' at {}, s={s}, l={l}", idx + 2));
        }
    }
    report("criterion 3 (derivative congruences)", pass, &detail);
}

#[test]
fn criterion_04_oracle_equivalence() {
    let suite = oracle_suite(2000, 16);
    let detail = suite
        .checks
        .iter()
        .find(|c| !c.pass)
        .and_then(|c| c.counterexample.clone())
        .unwrap_or_default();
    report("criterion 4 (evaluator equivalence)", suite.passed(), &detail);
}

/// Finite odd-part cases: the engine certifies every odd-part
/// component as strongly growing at exactly the stated level, and the
/// partitions agree at K = level + 2.
#[test]
fn criterion_05_finite_theorem_cases() {
    let cases: [(u64, u32); 13] = [
        (16, 4),
        (4, 5),
        (76, 6),
        (124, 7),
        (220, 8),
        (412, 9),
        (8, 4),
        (32, 4),
        (44, 5),
        (20, 6),
        (68, 7),
        (164, 8),
        (356, 9),
    ];
    let mut pass = true;
    let mut detail = String::new();
    for (m, stated_level) in cases {
        let k = stated_level + 2;
        let rep = decompose(&FibMap { m }, k, 1).expect("decomposition");
        let bad_level = rep
            .minimal_components
            .iter()
            .find(|c| c.level != stated_level);
        if let Some(c) = bad_level {
            pass = false;
            detail = format!("m={m}: component certified at level {} != {stated_level}", c.level);
            continue;
        }
        if !rep.unresolved.is_empty() {
            pass = false;
            detail = format!("m={m}: {} unresolved cycles", rep.unresolved.len());
            continue;
        }
        let agreement = compare_with_engine(m, k).expect("comparison");
        if !agreement.agree {
            pass = false;
            detail = format!("m={m}: partition mismatch {:?}", agreement.mismatches.first());
        }
    }
    report("criterion 5 (finite theorem cases)", pass, &detail);
}

/// Indexed shell families: partition agreement mod 2^10 plus the ball
/// output staying an exact partition, plus the odd-ball image claim
/// for the 6 mod 12 class.
#[test]
fn criterion_06_indexed_families() {
    let ms = [14u64, 26, 6, 18, 30, 10, 22, 34, 46];
    let mut pass = true;
    let mut detail = String::new();
    for m in ms {
        let agreement = compare_with_engine(m, 10).expect("comparison");
        if !agreement.agree {
            pass = false;
            detail = format!("m={m}: {:?}", agreement.mismatches.first());
            continue;
        }
        let dec = catalog_decompose(m, Truncation { k: 10, max_n: 7 }).expect("catalog");
        let balls: Vec<Ball> = dec
            .components
            .iter()
            .filter(|c| !matches!(c.kind, FamilyKind::FixedPoint | FamilyKind::PeriodicOrbit))
            .flat_map(|c| c.centers.iter().map(|z| Ball::new(z.clone(), c.level)))
            .collect();
        let max_level = balls.iter().map(|b| b.level()).max().unwrap();
        let part = ball_partition_check(&balls, max_level, None);
        if !(part.disjoint && part.covers) {
            pass = false;
            detail = format!("m={m}: ball output is not a partition at level {max_level}");
        }
    }
    // image of the odd ball for the 6 mod 12 class, exhaustively mod 2^4
    for m in [6u64, 18, 30] {
        for x in (1..16u64).step_by(2) {
            let y = fib_eval_fast(m, &Residue::from_u64(x, 4)).value.low_u64();
            if y != 8 {
                pass = false;
                detail = format!("m={m}: F({x}) = {y} != 8 mod 16");
            }
        }
    }
    report("criterion 6 (indexed families)", pass, &detail);
}

#[test]
fn criterion_07_odd_and_0_mod_12() {
    let mut pass = true;
    let mut detail = String::new();
    for m in [3u64, 5, 7, 9, 11, 13] {
        let rep = decompose(&FibMap { m }, 10, 1).expect("decomposition");
        let want_period = if m % 3 == 0 { 2 } else { 1 };
        let ok = rep.fixed_and_periodic.len() == 1
            && rep.fixed_and_periodic[0].period == want_period
            && rep.minimal_components.is_empty()
            && rep.unresolved.is_empty();
        if !ok {
            pass = false;
            detail = format!(
                "m={m}: {} orbits, {} components, {} unresolved",
                rep.fixed_and_periodic.len(),
                rep.minimal_components.len(),
                rep.unresolved.len()
            );
        }
    }
    for m in [12u64, 24] {
        let rep = decompose(&FibMap { m }, 10, 1).expect("decomposition");
        let ok = rep.fixed_and_periodic.len() == 1
            && rep.fixed_and_periodic[0].points == vec![BigUint::from(0u32)]
            && rep.minimal_components.is_empty()
            && rep.unresolved.is_empty();
        if !ok {
            pass = false;
            detail = format!("m={m}: structure mismatch");
        }
    }
    report("criterion 7 (odd and 0 mod 12 cases)", pass, &detail);
}

#[test]
fn criterion_08_level10_tables() {
    let cases = [
        (SeedCase::FourMod12, 0u64),
        (SeedCase::FourMod12, 1),
        (SeedCase::EightMod12, 0),
    ];
    let mut pass = true;
    let mut detail = String::new();
    for (case, d) in cases {
        let table = level10_cycle_table(case, d);
        let f = FibMap { m: table.m };
        let mut seen = vec![0u32; 1 << 10];
        for (pairs, want) in [
            (&table.strongly_growing, Behavior::StronglyGrows),
            (&table.strongly_splitting, Behavior::StronglySplits),
        ] {
            for (x, y) in pairs {
                seen[x.to_u64_digits()[0] as usize] += 1;
                seen[y.to_u64_digits()[0] as usize] += 1;
                let image = fib_eval_fast(
                    table.m,
                    &Residue::new(x.clone(), 10),
                )
                .value;
                if image.value() != y {
                    pass = false;
                    detail = format!("m={}: F({x}) != {y} mod 2^10", table.m);
                    continue;
                }
                let (a, bv) = if x < y {
                    (x.clone(), y.clone())
                } else {
                    (y.clone(), x.clone())
                };
                let cycle = Cycle {
                    level: 10,
                    elements: vec![a, bv],
                };
                let got = analyze_cycle(&f, &cycle).behavior;
                if got != want {
                    pass = false;
                    detail = format!("m={}: cycle {{{x},{y}}} is {got:?}, want {want:?}", table.m);
                }
            }
        }
        if !seen.iter().enumerate().all(|(r, &c)| c == (r % 2) as u32) {
            pass = false;
            detail = format!("m={}: table does not tile the odd residues", table.m);
        }
    }
    report("criterion 8 (level-10 tables)", pass, &detail);
}

/// The conjectural seed sequences: every level up to 16 must certify.
/// A failure here would be a genuine finding, not a test bug.
#[test]
fn criterion_09_seed_sequences_to_level_16() {
    let mut pass = true;
    let mut detail = String::new();
    for case in [SeedCase::FourMod12, SeedCase::EightMod12] {
        match g_sequence(case, 0, 16) {
            Ok(seq) => {
                if !seq.entries.iter().all(|e| e.certified) {
                    pass = false;
                    detail = format!("m={}: uncertified level", seq.m);
                }
            }
            Err(e) => {
                pass = false;
                detail = format!("case {case:?}: {e}");
            }
        }
    }
    report("criterion 9 (seed sequences to level 16)", pass, &detail);
}

#[test]
fn criterion_10_lift_laws() {
    let mut pass = true;
    let mut detail = String::new();
    for m in [8u64, 14, 16, 28] {
        let rep = verify_lift_laws(&FibMap { m }, 11);
        if !rep.ok() {
            pass = false;
            detail = format!("m={m}: {:?}", rep.violations.first());
        }
    }
    report("criterion 10 (lift laws)", pass, &detail);
}
