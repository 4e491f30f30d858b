//! Trial-parallel runner on a rayon pool.

use gridcode_core::mc::{trial_rng, TrialRng, TrialRunner};
use rayon::prelude::*;

/// Environment variable capping the number of worker threads.
pub const THREADS_VAR: &str = "GRIDCODE_THREADS";

/// Runs trials on a dedicated thread pool. Results come back in trial
/// order and each trial draws from its own stream, so output does not
/// depend on the thread count.
pub struct Parallel {
    pool: rayon::ThreadPool,
}

impl Parallel {
    /// `threads = None` lets rayon pick.
    pub fn new(threads: Option<usize>) -> anyhow::Result<Self> {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(t) = threads {
            anyhow::ensure!(t >= 1, "thread count must be positive");
            builder = builder.num_threads(t);
        }
        Ok(Parallel { pool: builder.build()? })
    }

    /// Honours `GRIDCODE_THREADS` when set.
    pub fn from_env() -> anyhow::Result<Self> {
        let threads = match std::env::var(THREADS_VAR) {
            Ok(v) => Some(
                v.trim()
                    .parse::<usize>()
                    .map_err(|_| anyhow::anyhow!("{THREADS_VAR} must be a positive integer, got `{v}`"))?,
            ),
            Err(_) => None,
        };
        Self::new(threads)
    }

    pub fn threads(&self) -> usize {
        self.pool.current_num_threads()
    }
}

impl TrialRunner for Parallel {
    fn run<T, F>(&self, trials: u64, master_seed: u64, trial: F) -> Vec<T>
    where
        T: Send,
        F: Fn(u64, &mut TrialRng) -> T + Sync + Send,
    {
        self.pool.install(|| {
            (0..trials)
                .into_par_iter()
                .map(|i| trial(i, &mut trial_rng(master_seed, i)))
                .collect()
        })
    }
}
