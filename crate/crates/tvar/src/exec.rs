use rayon::prelude::*;
use rayon::{ThreadPool, ThreadPoolBuilder};
use tvar_core::mc::Executor;

use crate::{Error, Result};

/// Environment variable that overrides the worker count.
pub const THREADS_ENV: &str = "TVAR_THREADS";

/// Runs jobs on a dedicated rayon pool. Results come back in index order, so
/// reports do not depend on the number of threads.
pub struct Parallel {
    pool: ThreadPool,
}

impl Parallel {
    /// `threads == 0` lets rayon pick.
    pub fn new(threads: usize) -> Result<Self> {
        let pool = ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::invalid(format!("cannot start thread pool: {e}")))?;
        Ok(Self { pool })
    }

    /// Reads [`THREADS_ENV`]; unset or empty means rayon's default.
    pub fn from_env() -> Result<Self> {
        Self::new(threads_from_env(
            std::env::var(THREADS_ENV).ok().as_deref(),
        )?)
    }

    pub fn threads(&self) -> usize {
        self.pool.current_num_threads()
    }
}

pub(crate) fn threads_from_env(value: Option<&str>) -> Result<usize> {
    match value.map(str::trim) {
        None | Some("") => Ok(0),
        Some(v) => v.parse().map_err(|_| {
            Error::invalid(format!(
                "{THREADS_ENV}: expected a non-negative integer (got `{v}`)"
            ))
        }),
    }
}

impl Executor for Parallel {
    fn map_indexed<T, F>(&self, len: usize, job: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        self.pool
            .install(|| (0..len).into_par_iter().map(job).collect())
    }
}
