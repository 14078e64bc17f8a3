use alloc::vec::Vec;

/// Runs independent indexed jobs and returns their results in index order.
///
/// Implementations may evaluate `job` concurrently and in any order, but the
/// returned vector must satisfy `out[i] == job(i)`.
pub trait Executor {
    fn map_indexed<T, F>(&self, len: usize, job: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send;
}

/// Runs every job on the calling thread.
#[derive(Clone, Copy, Debug, Default)]
pub struct Sequential;

impl Executor for Sequential {
    fn map_indexed<T, F>(&self, len: usize, job: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        (0..len).map(job).collect()
    }
}
