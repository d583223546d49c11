//! Parallel dispatch over prime windows. The chunk grid depends only on the
//! requested range — never on the worker count — and results are merged in
//! grid order, so reports are identical for any `--jobs` value.

use rayon::prelude::*;

/// Fixed chunk width for prime-range scans.
pub const CHUNK: u64 = 1 << 18;

/// Split [lo, hi) into the canonical chunk list.
pub fn chunks(lo: u64, hi: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let mut c = lo;
    while c < hi {
        let end = c.saturating_add(CHUNK).min(hi);
        out.push((c, end));
        c = end;
    }
    out
}

/// Map `work` over the chunks of [lo, hi) on a pool of `jobs` threads,
/// preserving chunk order in the output.
pub fn parallel_windows<T, F>(jobs: usize, lo: u64, hi: u64, work: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64, u64) -> T + Sync,
{
    let grid = chunks(lo, hi);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .expect("thread pool construction");
    pool.install(|| grid.par_iter().map(|&(a, b)| work(a, b)).collect())
}

/// Effective job count: explicit flag, else RECURPRIMES_JOBS, else 1.
pub fn effective_jobs(flag: Option<usize>) -> usize {
    flag.or_else(|| {
        std::env::var("RECURPRIMES_JOBS").ok().and_then(|v| v.parse().ok())
    })
    .unwrap_or(1)
    .max(1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chunk_grid_is_canonical() {
        let grid = chunks(2, 1_000_001);
        assert_eq!(grid.first(), Some(&(2, 2 + CHUNK)));
        assert_eq!(grid.last().map(|&(_, b)| b), Some(1_000_001));
        for w in grid.windows(2) {
            assert_eq!(w[0].1, w[1].0);
        }
        assert!(chunks(10, 10).is_empty());
    }

    #[test]
    fn parallel_matches_serial() {
        let serial: Vec<u64> = chunks(0, 1000).iter().map(|&(a, b)| b - a).collect();
        let par = parallel_windows(4, 0, 1000, |a, b| b - a);
        assert_eq!(serial, par);
    }
}
