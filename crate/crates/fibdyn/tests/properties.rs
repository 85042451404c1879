//! Randomized invariants: ring laws for truncated residues,
//! valuation laws, evaluator agreement on random inputs, the
//! Fibonacci addition law, and structural facts about cycle
//! classification and decompositions.

use proptest::prelude::*;

use fibdyn::engine::{analyze_cycle, cycles_at_level, decompose, FibMap};
use fibdyn::fibpoly::{fib_eval_fast, fib_eval_naive};
use fibdyn::padic::{ball_partition_check, Ball, Residue, Valuation};

fn residue(k: u32) -> impl Strategy<Value = Residue> {
    (0u64..(1u64 << k)).prop_map(move |v| Residue::from_u64(v, k))
}

fn min_val(a: Valuation, b: Valuation) -> u32 {
    a.lower_bound().min(b.lower_bound())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // nu2(xy) = nu2(x) + nu2(y), with AtLeast saturating at precision
    #[test]
    fn valuation_multiplicative(x in residue(16), y in residue(16)) {
        let got = x.mul(&y).nu2();
        match (x.nu2(), y.nu2()) {
            (Valuation::Finite(a), Valuation::Finite(b)) if a + b < 16 => {
                prop_assert_eq!(got, Valuation::Finite(a + b));
            }
            (a, b) => {
                // product is only known to 16 bits
                prop_assert!(got.lower_bound() >= (a.lower_bound() + b.lower_bound()).min(16));
            }
        }
    }

    // nu2(x + y) >= min(nu2 x, nu2 y), with equality when they differ
    #[test]
    fn valuation_ultrametric(x in residue(16), y in residue(16)) {
        let (vx, vy) = (x.nu2(), y.nu2());
        let vsum = x.add(&y).nu2();
        prop_assert!(vsum.lower_bound() >= min_val(vx, vy));
        if let (Valuation::Finite(a), Valuation::Finite(b)) = (vx, vy) {
            if a != b {
                prop_assert_eq!(vsum, Valuation::Finite(a.min(b)));
            }
        }
    }

    #[test]
    fn residue_ring_laws(x in residue(12), y in residue(12), z in residue(12)) {
        prop_assert_eq!(x.add(&y), y.add(&x));
        prop_assert_eq!(x.mul(&y), y.mul(&x));
        prop_assert_eq!(x.add(&y).add(&z), x.add(&y.add(&z)));
        prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
        prop_assert_eq!(x.mul(&y.add(&z)), x.mul(&y).add(&x.mul(&z)));
        prop_assert_eq!(x.add(&x.neg()), Residue::zero(12));
        prop_assert_eq!(x.sub(&y), x.add(&y.neg()));
    }

    #[test]
    fn pow_matches_repeated_mul(x in residue(10), e in 0u64..12) {
        let mut acc = Residue::one(10);
        for _ in 0..e {
            acc = acc.mul(&x);
        }
        prop_assert_eq!(x.pow(e), acc);
    }

    #[test]
    fn fast_matches_naive(m in 0u64..3000, xv in any::<u64>(), k in 4u32..20) {
        let x = Residue::from_u64(xv & ((1 << k) - 1), k);
        let naive = fib_eval_naive(m, &x);
        let fast = fib_eval_fast(m, &x);
        prop_assert_eq!(&naive.value, &fast.value);
        prop_assert_eq!(&naive.d1, &fast.d1);
        prop_assert_eq!(&naive.d2, &fast.d2);
        prop_assert_eq!(&naive.d3, &fast.d3);
    }

    // F_{a+b}(x) = F_{a+1}(x) F_b(x) + F_a(x) F_{b-1}(x)
    #[test]
    fn addition_law(a in 0u64..200, b in 1u64..200, xv in 0u64..(1 << 12)) {
        let x = Residue::from_u64(xv, 12);
        let f = |i: u64| fib_eval_fast(i, &x).value;
        let lhs = f(a + b);
        let rhs = f(a + 1).mul(&f(b)).add(&f(a).mul(&f(b - 1)));
        prop_assert_eq!(lhs, rhs);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    // the multiplier a is a property of the cycle, not of where the
    // orbit walk starts; and per-point b values agree when a is odd
    #[test]
    fn cycle_analysis_rotation_invariant(half in 2u64..150, l in 3u32..6) {
        let f = FibMap { m: 2 * half };
        for cycle in cycles_at_level(&f, l) {
            let base = analyze_cycle(&f, &cycle);
            if base.a % 4 == 1 || base.a % 4 == 3 {
                prop_assert!(base.b_all.iter().all(|&b| b == base.b));
            }
            let n = cycle.elements.len();
            for r in 1..n {
                let mut rotated = cycle.clone();
                rotated.elements.rotate_left(r);
                let turned = analyze_cycle(&f, &rotated);
                prop_assert_eq!(turned.a, base.a);
                prop_assert_eq!(turned.behavior, base.behavior);
            }
        }
    }

    // decomposition regions are pairwise disjoint balls covering Z_2
    #[test]
    fn decomposition_partitions(half in 2u64..150) {
        let m = 2 * half;
        let rep = decompose(&FibMap { m }, 8, 1).expect("decomposition");
        let mut balls: Vec<Ball> = Vec::new();
        for c in &rep.minimal_components {
            balls.extend(c.balls.iter().cloned());
        }
        for b in &rep.basin_regions {
            balls.push(b.ball.clone());
        }
        for orbit in &rep.fixed_and_periodic {
            // periodic points not interior to any listed region
            for p in &orbit.points {
                if !balls.iter().any(|b| {
                    b.contains(&Residue::new(p.clone(), 8)).unwrap_or(false)
                }) {
                    balls.push(Ball::new(p.clone(), 8));
                }
            }
        }
        for c in &rep.unresolved {
            for e in &c.elements {
                balls.push(Ball::new(e.clone(), c.level));
            }
        }
        let report = ball_partition_check(&balls, 8, None);
        prop_assert!(report.disjoint, "m={}: overlapping regions", m);
        prop_assert!(report.covers, "m={}: regions miss residues", m);
    }
}

#[test]
fn zero_is_fixed_for_all_even_m() {
    for m in (2u64..400).step_by(2) {
        let img = fib_eval_fast(m, &Residue::zero(12)).value;
        assert!(img.is_zero(), "m={m}");
    }
}
