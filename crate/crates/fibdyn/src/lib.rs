//! Exact dynamics of Fibonacci polynomials on truncated 2-adic
//! integers: evaluation with derivative jets, cycle classification and
//! lift analysis, closed-form decomposition templates per index class,
//! and verification suites cross-checking the two.

pub mod catalog;
pub mod engine;
pub mod exec;
pub mod fibpoly;
pub mod padic;
pub mod report;
pub mod verify;

pub use catalog::{catalog_decompose, compare_with_engine, g_sequence, Truncation};
pub use engine::{analyze_cycle, cycles_at_level, decompose, Behavior, FibMap, JetMap};
pub use fibpoly::{fib_eval_fast, fib_eval_naive, fib_eval_sum};
pub use padic::{Ball, Residue, Valuation};
