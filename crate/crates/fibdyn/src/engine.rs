//! Generic lift-based cycle analysis for a map on `Z/2^K Z` given as an
//! evaluatable jet function: enumerate cycles at a level, compute the
//! orbit derivative product `a_l` and normalized displacement `b_l`,
//! classify the five behaviors, follow lifts, and assemble a
//! decomposition up to a truncation level.

use num_bigint::BigUint;
use num_traits::One;
use serde::Serialize;
use thiserror::Error;

use crate::exec::par_map;
use crate::fibpoly::fib_eval_fast;
use crate::padic::{Ball, Residue, Valuation};

/// A map together with its first derivative, evaluatable at any
/// precision. Must be pure: the engine calls it from many workers.
pub trait JetMap: Sync {
    /// `(f(x), f'(x))` at `x`'s precision.
    fn eval(&self, x: &Residue) -> (Residue, Residue);
}

/// The Fibonacci polynomial `F_m` as a jet map, evaluated by index
/// doubling.
#[derive(Debug, Clone, Copy)]
pub struct FibMap {
    pub m: u64,
}

impl JetMap for FibMap {
    fn eval(&self, x: &Residue) -> (Residue, Residue) {
        let jet = fib_eval_fast(self.m, x);
        (jet.value, jet.d1)
    }
}

/// A k-cycle of the map reduced mod `2^level`, stored with the
/// canonical rotation (smallest element first).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cycle {
    pub level: u32,
    pub elements: Vec<BigUint>,
}

impl Cycle {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn smallest(&self) -> &BigUint {
        // canonical rotation puts the smallest element first
        &self.elements[0]
    }

    /// The invariant clopen set `X_sigma`: one ball per orbit element.
    pub fn support_balls(&self) -> Vec<Ball> {
        self.elements
            .iter()
            .map(|e| Ball::new(e.clone(), self.level))
            .collect()
    }

    fn canonicalize(mut elements: Vec<BigUint>, level: u32) -> Cycle {
        let min_pos = elements
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.cmp(b.1))
            .map(|(i, _)| i)
            .unwrap();
        elements.rotate_left(min_pos);
        Cycle { level, elements }
    }
}

/// The five-way classification of a cycle at a level, from
/// `(a_l mod 4, b_l mod 2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Behavior {
    StronglyGrows,
    StronglySplits,
    WeaklyGrows,
    WeaklySplits,
    GrowsTails,
}

#[derive(Debug, Clone)]
pub struct CycleAnalysis {
    /// Product of `f'` along the orbit, mod 4.
    pub a: u8,
    /// `(f^k(x) - x) / 2^l` mod 2 at the canonical element.
    pub b: u8,
    /// `b_l` mod 2 at every orbit element, in cycle order.
    pub b_all: Vec<u8>,
    pub behavior: Behavior,
    /// Valuation `s` of `b_l` (the splitting depth of Prop item 2);
    /// populated for strongly splitting cycles.
    pub b_valuation: Option<Valuation>,
}

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("fixed-point iteration failed to converge within {0} steps")]
    NoConvergence(usize),
    #[error("lift of a cycle left its invariant clopen set")]
    LiftEscaped,
}

const GUARD: u32 = 2;

/// Cap on the extra digits requested when measuring the valuation of
/// `f^k(x) - x` past the level; an exactly periodic point (identity
/// map) saturates here and reports `AtLeast`.
const VALUATION_GUARD_CAP: u32 = 40;

fn iterate(f: &dyn JetMap, x: &Residue, k: usize) -> Residue {
    let mut y = x.clone();
    for _ in 0..k {
        y = f.eval(&y).0;
    }
    y
}

/// All cycles of `f` on `Z/2^l Z` by full functional-graph traversal,
/// plus the tail residues (vertices not on any cycle).
pub fn functional_graph(f: &dyn JetMap, l: u32) -> (Vec<Cycle>, Vec<u64>) {
    assert!(l >= 1 && l <= 24, "full traversal is limited to level 24");
    let size = 1u64 << l;
    let next: Vec<u64> = par_map((0..size as usize).map(|x| x as u64), |x| {
        f.eval(&Residue::from_u64(x, l)).0.low_u64()
    });

    // state: 0 = unvisited, 1 = on current path, 2 = finished
    let mut state = vec![0u8; size as usize];
    let mut on_cycle = vec![false; size as usize];
    let mut cycles = Vec::new();
    for start in 0..size {
        if state[start as usize] != 0 {
            continue;
        }
        let mut path = Vec::new();
        let mut x = start;
        while state[x as usize] == 0 {
            state[x as usize] = 1;
            path.push(x);
            x = next[x as usize];
        }
        if state[x as usize] == 1 {
            // found a new cycle: the path tail from x onward
            let pos = path.iter().position(|&p| p == x).unwrap();
            let elems: Vec<BigUint> = path[pos..].iter().map(|&p| BigUint::from(p)).collect();
            for &p in &path[pos..] {
                on_cycle[p as usize] = true;
            }
            cycles.push(Cycle::canonicalize(elems, l));
        }
        for p in path {
            state[p as usize] = 2;
        }
    }
    let tails = (0..size).filter(|&x| !on_cycle[x as usize]).collect();
    cycles.sort_by(|a, b| a.smallest().cmp(b.smallest()));
    (cycles, tails)
}

/// The cycles of `f` on `Z/2^l Z` (tail vertices are not returned).
pub fn cycles_at_level(f: &dyn JetMap, l: u32) -> Vec<Cycle> {
    functional_graph(f, l).0
}

/// Computes `a_l`, `b_l` and the behavior class of a cycle.
pub fn analyze_cycle(f: &dyn JetMap, c: &Cycle) -> CycleAnalysis {
    let l = c.level;
    let k = c.len();
    let p = l + GUARD;

    // derivative product along the orbit, mod 4
    let x0 = Residue::new(c.elements[0].clone(), p);
    let mut a = Residue::one(2);
    let mut y = x0.clone();
    for _ in 0..k {
        let (fy, dfy) = f.eval(&y);
        a = a.mul(&dfy.truncate(2));
        y = fy;
    }
    let a = a.low_u64() as u8;

    let b_of = |start: &BigUint| -> u8 {
        let x = Residue::new(start.clone(), p);
        let diff = iterate(f, &x, k).sub(&x);
        debug_assert!(
            diff.nu2().lower_bound() >= l,
            "not a cycle at level {l}: displacement valuation too small"
        );
        ((diff.value() >> l) & BigUint::one() == BigUint::one()) as u8
    };
    let b_all: Vec<u8> = c.elements.iter().map(|e| b_of(e)).collect();
    let b = b_all[0];

    let behavior = match (a % 2, a % 4, b) {
        (0, _, _) => Behavior::GrowsTails,
        (_, 1, 1) => Behavior::StronglyGrows,
        (_, 1, 0) => Behavior::StronglySplits,
        (_, 3, 1) => Behavior::WeaklyGrows,
        (_, 3, 0) => Behavior::WeaklySplits,
        _ => unreachable!(),
    };

    let b_valuation = (behavior == Behavior::StronglySplits).then(|| {
        // grow precision until the displacement's valuation resolves
        let mut guard = GUARD;
        loop {
            let x = Residue::new(c.elements[0].clone(), l + guard);
            match iterate(f, &x, k).sub(&x).nu2() {
                Valuation::Finite(v) => break Valuation::Finite(v - l),
                Valuation::AtLeast(_) if guard >= VALUATION_GUARD_CAP => {
                    break Valuation::AtLeast(guard)
                }
                Valuation::AtLeast(_) => guard = (guard * 2).min(VALUATION_GUARD_CAP),
            }
        }
    });

    CycleAnalysis {
        a,
        b,
        b_all,
        behavior,
        b_valuation,
    }
}

/// Lifts of a cycle: the cycles of `f` mod `2^{l+1}` inside `X_sigma`.
/// For p = 2 each lift has length k or 2k and the lifts cover the
/// whole fiber whenever `a_l` is odd.
pub fn lifts_of(f: &dyn JetMap, c: &Cycle) -> Vec<Cycle> {
    let l = c.level;
    let lp = l + 1;
    let step = BigUint::one() << l;
    let modulus = BigUint::one() << lp;
    let mut support: Vec<BigUint> = Vec::with_capacity(2 * c.len());
    for e in &c.elements {
        support.push(e.clone());
        support.push((e + &step) % &modulus);
    }
    support.sort();

    let mut seen = vec![false; support.len()];
    let mut cycles = Vec::new();
    let idx_of = |v: &BigUint, support: &[BigUint]| support.binary_search(v).ok();
    for start in 0..support.len() {
        if seen[start] {
            continue;
        }
        // walk until revisiting a support vertex; the walk cannot leave
        // X_sigma because f maps X_i into X_{i+1}
        let mut path: Vec<usize> = Vec::new();
        let mut visited_this_walk = vec![false; support.len()];
        let mut i = start;
        while !visited_this_walk[i] && !seen[i] {
            visited_this_walk[i] = true;
            path.push(i);
            let y = f.eval(&Residue::new(support[i].clone(), lp)).0;
            i = match idx_of(y.value(), &support) {
                Some(j) => j,
                None => return vec![], // escaped; caller treats as violation
            };
        }
        if visited_this_walk[i] {
            let pos = path.iter().position(|&p| p == i).unwrap();
            let elems: Vec<BigUint> = path[pos..].iter().map(|&p| support[p].clone()).collect();
            cycles.push(Cycle::canonicalize(elems, lp));
        }
        for p in path {
            seen[p] = true;
        }
    }
    cycles.sort_by(|a, b| a.smallest().cmp(b.smallest()));
    cycles
}

/// A periodic orbit pinned to precision `K`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodicOrbit {
    pub points: Vec<BigUint>,
    pub period: usize,
}

/// A minimal component certified by strong growth at `level`.
#[derive(Debug, Clone)]
pub struct MinimalComponent {
    pub level: u32,
    pub cycle_len: usize,
    pub balls: Vec<Ball>,
}

/// A ball attributed to the attracting basin, with the attracting
/// orbit when the region came from a growing-tails cycle. Start-level
/// tail balls feed forward into other regions and carry no orbit.
#[derive(Debug, Clone)]
pub struct BasinRegion {
    pub ball: Ball,
    pub attractor: Option<PeriodicOrbit>,
}

#[derive(Debug, Clone)]
pub struct DecompositionReport {
    pub max_level: u32,
    pub fixed_and_periodic: Vec<PeriodicOrbit>,
    pub minimal_components: Vec<MinimalComponent>,
    pub basin_regions: Vec<BasinRegion>,
    pub unresolved: Vec<Cycle>,
}

/// Locates the periodic orbit inside a growing-tails region by
/// fixed-point iteration of `f^k`; the derivative product being even
/// makes `f^k` a contraction there.
fn locate_orbit(f: &dyn JetMap, c: &Cycle, max_level: u32) -> Result<PeriodicOrbit, EngineError> {
    attracting_orbit(f, c.elements[0].clone(), c.len(), max_level)
}

/// Pins the attracting k-periodic orbit near `start` to `precision`
/// digits by iterating `f^k` until it stabilizes.
pub fn attracting_orbit(
    f: &dyn JetMap,
    start: BigUint,
    k: usize,
    precision: u32,
) -> Result<PeriodicOrbit, EngineError> {
    let max_level = precision;
    let cap = 4 * max_level as usize + 8;
    let mut y = Residue::new(start, max_level);
    for _ in 0..cap {
        let next = iterate(f, &y, k);
        if next == y {
            let mut points = Vec::with_capacity(k);
            let mut z = y;
            for _ in 0..k {
                points.push(z.value().clone());
                z = f.eval(&z).0;
            }
            // the orbit visits each X_i once, so the period is exactly k
            return Ok(PeriodicOrbit { points, period: k });
        }
        y = next;
    }
    Err(EngineError::NoConvergence(cap))
}

/// Work-list decomposition of `Z/2^max_level Z` under `f`, starting
/// from the cycles at `start_level`.
///
/// Growing-tails cycles emit basin regions with their located orbit;
/// strongly growing cycles at level >= 2 emit minimal components;
/// everything else recurses into lifts. Strong-growth verdicts at
/// level 1 are not final and always lift once more.
pub fn decompose(
    f: &dyn JetMap,
    max_level: u32,
    start_level: u32,
) -> Result<DecompositionReport, EngineError> {
    assert!((1..=2).contains(&start_level));
    assert!(max_level >= start_level + 2);

    let (cycles, tails) = functional_graph(f, start_level);
    let mut report = DecompositionReport {
        max_level,
        fixed_and_periodic: Vec::new(),
        minimal_components: Vec::new(),
        basin_regions: Vec::new(),
        unresolved: Vec::new(),
    };
    for t in tails {
        report.basin_regions.push(BasinRegion {
            ball: Ball::from_u64(t, start_level),
            attractor: None,
        });
    }

    let mut queue = cycles;
    while !queue.is_empty() {
        // one generation of independent cycle subtrees, analyzed in parallel
        let analyzed: Vec<(Cycle, CycleAnalysis)> =
            par_map(queue.into_iter(), |c| {
                let a = analyze_cycle(f, &c);
                (c, a)
            });
        let mut next = Vec::new();
        for (c, analysis) in analyzed {
            match analysis.behavior {
                Behavior::GrowsTails => {
                    let orbit = locate_orbit(f, &c, max_level)?;
                    for ball in c.support_balls() {
                        report.basin_regions.push(BasinRegion {
                            ball,
                            attractor: Some(orbit.clone()),
                        });
                    }
                    if !report.fixed_and_periodic.contains(&orbit) {
                        report.fixed_and_periodic.push(orbit);
                    }
                }
                Behavior::StronglyGrows if c.level >= 2 => {
                    report.minimal_components.push(MinimalComponent {
                        level: c.level,
                        cycle_len: c.len(),
                        balls: c.support_balls(),
                    });
                }
                _ if c.level >= max_level => report.unresolved.push(c),
                _ => {
                    let lifts = lifts_of(f, &c);
                    if lifts.is_empty() {
                        return Err(EngineError::LiftEscaped);
                    }
                    next.extend(lifts);
                }
            }
        }
        queue = next;
    }

    sort_report(&mut report);
    Ok(report)
}

fn sort_report(report: &mut DecompositionReport) {
    report
        .minimal_components
        .sort_by(|a, b| (a.level, a.balls[0].center()).cmp(&(b.level, b.balls[0].center())));
    report
        .basin_regions
        .sort_by(|a, b| (a.ball.level(), a.ball.center()).cmp(&(b.ball.level(), b.ball.center())));
    report
        .unresolved
        .sort_by(|a, b| (a.level, a.smallest()).cmp(&(b.level, b.smallest())));
    report
        .fixed_and_periodic
        .sort_by(|a, b| a.points.iter().min().cmp(&b.points.iter().min()));
}

/// One lift-law prediction checked against observation.
#[derive(Debug, Clone, Serialize)]
pub struct LiftLawViolation {
    pub level: u32,
    pub cycle_smallest: u64,
    pub expected: String,
    pub observed: String,
}

#[derive(Debug, Clone, Serialize, Default)]
pub struct LiftLawReport {
    pub cycles_checked: usize,
    pub violations: Vec<LiftLawViolation>,
    /// Cycles whose displacement valuation saturated the precision cap
    /// (e.g. the identity map, which splits forever).
    pub saturated: usize,
}

impl LiftLawReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

fn violation(c: &Cycle, expected: &str, observed: String) -> LiftLawViolation {
    LiftLawViolation {
        level: c.level,
        cycle_smallest: c.smallest().to_u64_digits().first().copied().unwrap_or(0),
        expected: expected.to_string(),
        observed,
    }
}

/// Verifies the lift behavior laws over every cycle encountered up to
/// level `max_level - 1`:
/// weakly grows => the (single, doubled) lift strongly splits;
/// weakly splits => one lift behaves the same, the other weakly grows;
/// strongly splits with valuation s => descendants keep splitting and
/// all strongly grow at level l+s;
/// strongly grows => a single doubled lift.
pub fn verify_lift_laws(f: &dyn JetMap, max_level: u32) -> LiftLawReport {
    let mut report = LiftLawReport::default();
    // splitting deadlines from strongly-splitting ancestors: at levels
    // below the deadline a descendant must strongly split, at the
    // deadline it must strongly grow
    let mut queue: Vec<(Cycle, Option<u32>)> = cycles_at_level(f, 1)
        .into_iter()
        .map(|c| (c, None))
        .collect();

    while let Some((c, deadline)) = queue.pop() {
        let analysis = analyze_cycle(f, &c);
        report.cycles_checked += 1;

        if c.level >= 2 {
            if let Some(dl) = deadline {
                let expected = if c.level < dl {
                    Behavior::StronglySplits
                } else {
                    Behavior::StronglyGrows
                };
                if analysis.behavior != expected {
                    report.violations.push(violation(
                        &c,
                        &format!("{expected:?} (split chain, deadline level {dl})"),
                        format!("{:?}", analysis.behavior),
                    ));
                }
            }
        }

        if matches!(analysis.behavior, Behavior::GrowsTails) {
            continue;
        }
        if c.level >= max_level {
            continue;
        }

        let lifts = lifts_of(f, &c);
        let lift_analyses: Vec<CycleAnalysis> =
            lifts.iter().map(|lc| analyze_cycle(f, lc)).collect();

        if c.level >= 2 {
            match analysis.behavior {
                Behavior::StronglyGrows => {
                    if lifts.len() != 1 || lifts[0].len() != 2 * c.len() {
                        report.violations.push(violation(
                            &c,
                            "single doubled lift under strong growth",
                            format!("{} lifts", lifts.len()),
                        ));
                    }
                }
                Behavior::WeaklyGrows => {
                    let ok = lifts.len() == 1
                        && lifts[0].len() == 2 * c.len()
                        && lift_analyses[0].behavior == Behavior::StronglySplits;
                    if !ok {
                        report.violations.push(violation(
                            &c,
                            "weakly grows => single doubled lift that strongly splits",
                            format!(
                                "{} lifts: {:?}",
                                lifts.len(),
                                lift_analyses.iter().map(|a| a.behavior).collect::<Vec<_>>()
                            ),
                        ));
                    }
                }
                Behavior::WeaklySplits => {
                    let behaviors: Vec<Behavior> =
                        lift_analyses.iter().map(|a| a.behavior).collect();
                    let ok = lifts.len() == 2
                        && behaviors.contains(&Behavior::WeaklySplits)
                        && behaviors.contains(&Behavior::WeaklyGrows);
                    if !ok {
                        report.violations.push(violation(
                            &c,
                            "weakly splits => one same lift + one weakly growing lift",
                            format!("{behaviors:?}"),
                        ));
                    }
                }
                Behavior::StronglySplits => {}
                Behavior::GrowsTails => unreachable!(),
            }
        }

        // propagate or set splitting deadlines
        let child_deadline = if c.level >= 2 && analysis.behavior == Behavior::StronglySplits {
            match analysis.b_valuation {
                Some(Valuation::Finite(s)) => Some(c.level + s),
                _ => {
                    report.saturated += 1;
                    None
                }
            }
        } else if analysis.behavior == Behavior::StronglySplits {
            deadline
        } else {
            None
        };
        for lc in lifts {
            let dl = child_deadline.filter(|&dl| lc.level <= dl);
            queue.push((lc, dl));
        }
    }
    report
}

/// Region label of a residue mod `2^K` in a decomposition. `Deep`
/// marks residues the analysis could not settle at the truncation
/// (engine: unresolved cycles; catalog: families whose certification
/// level exceeds K).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Label {
    Periodic,
    Basin,
    Component(u32),
    Deep,
}

/// Labels every residue mod `2^K` from an engine decomposition.
/// Component ids follow the report's (level, smallest center) order.
pub fn label_map(report: &DecompositionReport, k: u32) -> Vec<Label> {
    assert!(k <= 26, "label map enumerates 2^k residues");
    assert!(report.max_level >= k);
    let size = 1usize << k;
    let mut labels = vec![None; size];
    let paint = |ball: &Ball, label: Label, labels: &mut Vec<Option<Label>>| {
        debug_assert!(ball.level() <= k);
        for r in ball.residues_mod(k) {
            labels[r as usize] = Some(label);
        }
    };
    for region in &report.basin_regions {
        paint(&region.ball, Label::Basin, &mut labels);
    }
    for (id, comp) in report.minimal_components.iter().enumerate() {
        for ball in &comp.balls {
            paint(ball, Label::Component(id as u32), &mut labels);
        }
    }
    for c in &report.unresolved {
        for ball in c.support_balls() {
            paint(&ball, Label::Deep, &mut labels);
        }
    }
    let mask = (BigUint::one() << k) - BigUint::one();
    for orbit in &report.fixed_and_periodic {
        for p in &orbit.points {
            let r = (p & &mask).to_u64_digits().first().copied().unwrap_or(0);
            labels[r as usize] = Some(Label::Periodic);
        }
    }
    labels
        .into_iter()
        .map(|l| l.expect("decomposition does not cover Z/2^K"))
        .collect()
}

/// The computable content of minimality: the permutation induced by
/// `f` on the component's residues mod `2^k` is a single cycle.
pub fn single_cycle_witness(f: &dyn JetMap, component: &MinimalComponent, k: u32) -> bool {
    let mut residues: Vec<u64> = component
        .balls
        .iter()
        .flat_map(|b| b.residues_mod(k))
        .collect();
    residues.sort_unstable();
    let start = residues[0];
    let mut x = Residue::from_u64(start, k);
    let mut steps = 0usize;
    loop {
        x = f.eval(&x).0;
        steps += 1;
        let v = x.low_u64();
        if residues.binary_search(&v).is_err() {
            return false; // left the component
        }
        if v == start {
            break;
        }
        if steps > residues.len() {
            return false;
        }
    }
    steps == residues.len()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_map_cycles() {
        // F_2(x) = x: eight 1-cycles at level 3
        let f = FibMap { m: 2 };
        let cycles = cycles_at_level(&f, 3);
        assert_eq!(cycles.len(), 8);
        assert!(cycles.iter().all(|c| c.len() == 1));
    }

    #[test]
    fn odd_multiple_of_three_has_01_cycle() {
        let f = FibMap { m: 9 };
        let cycles = cycles_at_level(&f, 1);
        assert!(cycles
            .iter()
            .any(|c| c.len() == 2 && c.elements == vec![BigUint::from(0u32), BigUint::from(1u32)]));
    }

    #[test]
    fn f14_level3_one_cycles() {
        let f = FibMap { m: 14 };
        let cycles = cycles_at_level(&f, 3);
        let fixed: Vec<u64> = cycles
            .iter()
            .filter(|c| c.len() == 1 && c.smallest().bit(0))
            .map(|c| c.smallest().to_u64_digits()[0])
            .collect();
        assert_eq!(fixed, vec![1, 3, 5, 7]);
        for v in [1u64, 3, 5, 7] {
            let c = Cycle {
                level: 3,
                elements: vec![BigUint::from(v)],
            };
            let a = analyze_cycle(&f, &c);
            assert_eq!(a.behavior, Behavior::StronglyGrows, "cycle {{{v}}}");
            assert_eq!(a.a % 4, 1);
            assert_eq!(a.b % 2, 1);
        }
    }

    #[test]
    fn odd_m_not_multiple_of_three_grows_tails() {
        for m in [5u64, 7, 11, 13] {
            let f = FibMap { m };
            let c = Cycle {
                level: 1,
                elements: vec![BigUint::from(1u32)],
            };
            let a = analyze_cycle(&f, &c);
            assert_eq!(a.behavior, Behavior::GrowsTails, "m={m}");
            assert_eq!(a.a % 2, 0);
        }
    }

    #[test]
    fn f28_cycle_13_strongly_splits_with_two_lifts() {
        let f = FibMap { m: 28 };
        let c = Cycle {
            level: 3,
            elements: vec![BigUint::from(1u32), BigUint::from(3u32)],
        };
        let a = analyze_cycle(&f, &c);
        assert_eq!(a.behavior, Behavior::StronglySplits);
        let lifts = lifts_of(&f, &c);
        assert_eq!(lifts.len(), 2);
        assert!(lifts.iter().all(|lc| lc.len() == 2 && lc.level == 4));
    }

    #[test]
    fn strongly_growing_cycle_has_one_doubled_lift() {
        let f = FibMap { m: 14 };
        let c = Cycle {
            level: 3,
            elements: vec![BigUint::from(1u32)],
        };
        let lifts = lifts_of(&f, &c);
        assert_eq!(lifts.len(), 1);
        assert_eq!(lifts[0].len(), 2);
    }

    #[test]
    fn decompose_m12_fixed_point_plus_basin() {
        let f = FibMap { m: 12 };
        let report = decompose(&f, 8, 1).unwrap();
        assert_eq!(report.fixed_and_periodic.len(), 1);
        assert_eq!(report.fixed_and_periodic[0].points, vec![BigUint::from(0u32)]);
        assert!(report.minimal_components.is_empty());
        assert!(report.unresolved.is_empty());
    }

    #[test]
    fn decompose_m16_components_at_level_4() {
        let f = FibMap { m: 16 };
        let report = decompose(&f, 6, 1).unwrap();
        assert_eq!(report.minimal_components.len(), 4);
        for comp in &report.minimal_components {
            assert_eq!(comp.level, 4);
            assert_eq!(comp.cycle_len, 2);
            assert!(single_cycle_witness(&f, comp, 6));
        }
        assert!(report.unresolved.is_empty());
    }

    #[test]
    fn f16_lift_laws_hold_to_level_6() {
        let f = FibMap { m: 16 };
        let report = verify_lift_laws(&f, 6);
        assert!(report.ok(), "{:?}", report.violations);
    }
}
