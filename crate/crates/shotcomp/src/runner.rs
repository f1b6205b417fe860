use rayon::prelude::*;
use rayon::{ThreadPool, ThreadPoolBuilder};
use shotcomp_core::BlockRunner;

use crate::error::{Error, Result};

/// Evaluates blocks on a rayon pool. Output order is block order, so results
/// match [`shotcomp_core::Sequential`] bit for bit.
pub struct Parallel {
    pool: Option<ThreadPool>,
}

impl Parallel {
    /// `None` uses rayon's global pool; `Some(n)` builds a dedicated pool of
    /// `n` threads.
    pub fn new(threads: Option<usize>) -> Result<Self> {
        let pool = match threads {
            None => None,
            Some(0) => return Err(Error::Config("thread count must be at least 1".into())),
            Some(n) => Some(
                ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build()
                    .map_err(|e| Error::Config(format!("cannot build thread pool: {e}")))?,
            ),
        };
        Ok(Self { pool })
    }
}

impl BlockRunner for Parallel {
    fn map_blocks<F>(&self, count: usize, f: F) -> Vec<f64>
    where
        F: Fn(u64) -> f64 + Sync + Send,
    {
        let run = || (0..count as u64).into_par_iter().map(&f).collect();
        match &self.pool {
            Some(pool) => pool.install(run),
            None => run(),
        }
    }
}
