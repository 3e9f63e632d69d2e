use rayon::prelude::*;
use rayon::{ThreadPool, ThreadPoolBuildError, ThreadPoolBuilder};

use randflight_core::montecarlo::ChunkRunner;

/// Evaluates chunks on a rayon pool. Results come back in chunk order, so
/// estimates do not depend on the number of threads.
#[derive(Debug, Default)]
pub struct RayonRunner {
    pool: Option<ThreadPool>,
}

impl RayonRunner {
    /// Uses the global rayon pool.
    pub fn global() -> Self {
        RayonRunner { pool: None }
    }

    /// A dedicated pool with `threads` workers.
    pub fn with_threads(threads: usize) -> Result<Self, ThreadPoolBuildError> {
        let pool = ThreadPoolBuilder::new().num_threads(threads).build()?;
        Ok(RayonRunner { pool: Some(pool) })
    }
}

impl ChunkRunner for RayonRunner {
    fn map_chunks<T, F>(&self, n_chunks: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync,
    {
        let run = || (0..n_chunks).into_par_iter().map(&f).collect();
        match &self.pool {
            Some(pool) => pool.install(run),
            None => run(),
        }
    }
}
