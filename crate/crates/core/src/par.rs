//! Ordered data-parallel map. With the `parallel` feature and `jobs != 1`
//! the work runs on a rayon pool; otherwise it runs sequentially. Output
//! order always follows input order.

/// `jobs == 0` means one worker per available core.
pub fn map_ordered<T, R, F>(items: &[T], jobs: usize, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if jobs != 1 && items.len() > 1 {
            use rayon::prelude::*;
            if jobs == 0 {
                return items.par_iter().map(&f).collect();
            }
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(jobs)
                .build()
                .expect("thread pool");
            return pool.install(|| items.par_iter().map(&f).collect());
        }
    }
    let _ = jobs;
    items.iter().map(f).collect()
}

/// Whether this build can run work in parallel at all.
pub const fn parallel_enabled() -> bool {
    cfg!(feature = "parallel")
}
