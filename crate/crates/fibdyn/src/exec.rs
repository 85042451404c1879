//! Execution strategy: data-parallel via rayon when the `parallel`
//! feature is on, plain iteration otherwise. The runtime mode lets a
//! parallel build force sequential execution (used by the benches and
//! by `--workers 1`).

use std::sync::atomic::{AtomicU8, Ordering};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parallelism {
    Sequential,
    #[cfg(feature = "parallel")]
    Rayon,
}

static MODE: AtomicU8 = AtomicU8::new(default_mode());

const fn default_mode() -> u8 {
    if cfg!(feature = "parallel") {
        1
    } else {
        0
    }
}

pub fn set_parallelism(mode: Parallelism) {
    let v = match mode {
        Parallelism::Sequential => 0,
        #[cfg(feature = "parallel")]
        Parallelism::Rayon => 1,
    };
    MODE.store(v, Ordering::Relaxed);
}

pub fn parallelism() -> Parallelism {
    match MODE.load(Ordering::Relaxed) {
        0 => Parallelism::Sequential,
        #[cfg(feature = "parallel")]
        _ => Parallelism::Rayon,
        #[cfg(not(feature = "parallel"))]
        _ => Parallelism::Sequential,
    }
}

/// Maps `op` over `items`, in parallel when the mode allows it.
/// Output order matches input order either way.
#[cfg(feature = "parallel")]
pub fn par_map<I, T, U, F>(items: I, op: F) -> Vec<U>
where
    I: IntoIterator<Item = T>,
    I::IntoIter: ExactSizeIterator,
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    use rayon::prelude::*;
    match parallelism() {
        Parallelism::Sequential => items.into_iter().map(op).collect(),
        Parallelism::Rayon => {
            let items: Vec<T> = items.into_iter().collect();
            items.into_par_iter().map(op).collect()
        }
    }
}

#[cfg(not(feature = "parallel"))]
pub fn par_map<I, T, U, F>(items: I, op: F) -> Vec<U>
where
    I: IntoIterator<Item = T>,
    I::IntoIter: ExactSizeIterator,
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    items.into_iter().map(op).collect()
}

/// Builds a rayon pool with `n` workers and runs `body` inside it;
/// without the feature (or with `n == 1`) just runs `body`.
#[cfg(feature = "parallel")]
pub fn with_workers<R: Send>(n: Option<usize>, body: impl FnOnce() -> R + Send) -> R {
    match n {
        Some(1) => {
            set_parallelism(Parallelism::Sequential);
            body()
        }
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .expect("failed to build worker pool");
            pool.install(body)
        }
        None => body(),
    }
}

#[cfg(not(feature = "parallel"))]
pub fn with_workers<R: Send>(_n: Option<usize>, body: impl FnOnce() -> R + Send) -> R {
    body()
}
