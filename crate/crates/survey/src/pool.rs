//! Worker pool with ordered result assembly.

use rayon::prelude::*;

pub const WORKERS_ENV: &str = "DVDP_WORKERS";

/// Worker count: flag, else environment, else config, else all cores
/// (0 means "let the pool decide").
pub fn worker_count(flag: Option<usize>, config: usize) -> usize {
    flag.or_else(|| std::env::var(WORKERS_ENV).ok().and_then(|v| v.trim().parse().ok())).unwrap_or(config)
}

/// Map in parallel; output order equals input order regardless of the
/// number of workers.
pub fn par_map<T, R, F>(items: &[T], workers: usize, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    if workers == 1 {
        return items.iter().map(f).collect();
    }
    let mut b = rayon::ThreadPoolBuilder::new();
    if workers > 0 {
        b = b.num_threads(workers);
    }
    match b.build() {
        Ok(pool) => pool.install(|| items.par_iter().map(&f).collect()),
        Err(_) => items.iter().map(f).collect(),
    }
}
