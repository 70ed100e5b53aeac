//! Deterministic parallel map. Work is split into an input-defined job
//! list; results come back in job order regardless of worker count, so
//! any fold over them is schedule-independent.

use crate::error::{Error, Result};
use rayon::prelude::*;

pub struct Pool {
    inner: Option<rayon::ThreadPool>,
}

impl Pool {
    /// `workers = 1` runs on the calling thread; more workers use a
    /// dedicated rayon pool of exactly that size.
    pub fn new(workers: usize) -> Result<Self> {
        if workers == 0 {
            return Err(Error::Domain("worker count must be >= 1".into()));
        }
        if workers == 1 {
            return Ok(Pool { inner: None });
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| Error::Capacity(format!("thread pool: {e}")))?;
        Ok(Pool { inner: Some(pool) })
    }

    pub fn workers(&self) -> usize {
        match &self.inner {
            None => 1,
            Some(p) => p.current_num_threads(),
        }
    }

    /// Ordered map over jobs; the output Vec index matches the job index.
    pub fn map<J, T, F>(&self, jobs: Vec<J>, f: F) -> Result<Vec<T>>
    where
        J: Send,
        T: Send,
        F: Fn(J) -> Result<T> + Sync + Send,
    {
        match &self.inner {
            None => jobs.into_iter().map(f).collect(),
            Some(pool) => pool.install(|| jobs.into_par_iter().map(f).collect()),
        }
    }
}

impl Default for Pool {
    fn default() -> Self {
        Pool { inner: None }
    }
}
