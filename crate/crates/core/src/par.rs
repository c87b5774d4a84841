//! Data-parallel helpers. With the `parallel` feature (on by default) work is
//! spread over the rayon pool; without it, or under [`Exec::Sequential`], the
//! same loops run on the calling thread. Results never depend on the choice.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// How independent work items are scheduled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

impl Exec {
    /// Whether work will actually fan out across threads.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }

    /// `f` applied to `0..len`, in index order.
    pub fn map<T, F>(self, len: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            return (0..len).into_par_iter().map(f).collect();
        }
        (0..len).map(f).collect()
    }

    /// The result for the smallest index in `0..len` where `f` returns
    /// `Some`. `init` builds per-worker scratch state.
    pub fn find_first<S, T, I, F>(self, len: u64, init: I, f: F) -> Option<T>
    where
        T: Send,
        I: Fn() -> S + Sync + Send,
        F: Fn(&mut S, u64) -> Option<T> + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            // Chunked so scratch state is reused; chunks keep index order, and
            // `find_map_first` returns the lowest-index hit.
            const CHUNK: u64 = 4096;
            let chunks = len.div_ceil(CHUNK);
            return (0..chunks).into_par_iter().find_map_first(|c| {
                let mut scratch = init();
                let end = ((c + 1) * CHUNK).min(len);
                (c * CHUNK..end).find_map(|i| f(&mut scratch, i))
            });
        }
        let mut scratch = init();
        (0..len).find_map(|i| f(&mut scratch, i))
    }
}

/// Runs `f` inside a pool of `jobs` threads (`jobs = 0` uses the default
/// pool). Without the `parallel` feature this simply calls `f`.
pub fn with_jobs<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> T {
    #[cfg(feature = "parallel")]
    if jobs > 0 {
        if let Ok(pool) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
            return pool.install(f);
        }
    }
    let _ = jobs;
    f()
}
