use bellmono_core::exec::{Executor, RowOperator};
use bellmono_core::linalg::{block_dot, DOT_CHUNK};
use rayon::prelude::*;
use rayon::{ThreadPool, ThreadPoolBuildError, ThreadPoolBuilder};

/// Output rows handed to one task by [`Pool::apply`].
pub const ROW_BLOCK: usize = 4096;

/// Rayon-backed executor with its own thread pool.
///
/// Row blocks and dot-product blocks are fixed sizes, and partial results are
/// combined in index order, so output does not depend on the thread count.
pub struct Pool {
    pool: ThreadPool,
}

impl Pool {
    /// `workers = None` uses rayon's default (one thread per CPU).
    pub fn new(workers: Option<usize>) -> Result<Self, ThreadPoolBuildError> {
        let mut builder = ThreadPoolBuilder::new();
        if let Some(k) = workers {
            builder = builder.num_threads(k);
        }
        Ok(Pool {
            pool: builder.build()?,
        })
    }

    pub fn workers(&self) -> usize {
        self.pool.current_num_threads()
    }
}

impl Executor for Pool {
    fn apply<O: RowOperator>(&self, op: &O, x: &[f64], y: &mut [f64]) {
        self.pool.install(|| {
            y.par_chunks_mut(ROW_BLOCK)
                .enumerate()
                .for_each(|(k, block)| op.apply_rows(x, k * ROW_BLOCK, block));
        });
    }

    fn dot(&self, a: &[f64], b: &[f64]) -> f64 {
        assert_eq!(a.len(), b.len());
        let partial: Vec<f64> = self.pool.install(|| {
            a.par_chunks(DOT_CHUNK)
                .zip(b.par_chunks(DOT_CHUNK))
                .map(|(x, y)| block_dot(x, y))
                .collect()
        });
        partial.into_iter().fold(0.0, |acc, s| acc + s)
    }

    fn map_indexed<T, F>(&self, count: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        self.pool
            .install(|| (0..count).into_par_iter().map(f).collect())
    }
}
