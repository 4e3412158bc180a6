//! Execution strategy for the two data-parallel kernels: row-blocked
//! matrix-vector products and independent work items.
//!
//! Implementations must return exactly what [`Serial`] returns: every output
//! row is written by one worker, dot products use the fixed blocking of
//! [`chunked_dot`], and mapped results come back in index order.

use alloc::vec::Vec;

use crate::linalg::chunked_dot;

/// A linear operator that can produce any contiguous block of output rows on
/// its own.
pub trait RowOperator: Sync {
    fn dim(&self) -> usize;

    /// Writes rows `first_row .. first_row + y.len()` of `A x` into `y`.
    fn apply_rows(&self, x: &[f64], first_row: usize, y: &mut [f64]);
}

pub trait Executor {
    /// `y = A x`.
    fn apply<O: RowOperator>(&self, op: &O, x: &[f64], y: &mut [f64]);

    /// Dot product, bit-identical to [`chunked_dot`].
    fn dot(&self, a: &[f64], b: &[f64]) -> f64;

    /// `(0..count).map(f).collect()`, possibly evaluated concurrently.
    fn map_indexed<T, F>(&self, count: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send;
}

/// Single-threaded reference executor.
#[derive(Debug, Clone, Copy, Default)]
pub struct Serial;

impl Executor for Serial {
    fn apply<O: RowOperator>(&self, op: &O, x: &[f64], y: &mut [f64]) {
        op.apply_rows(x, 0, y);
    }

    fn dot(&self, a: &[f64], b: &[f64]) -> f64 {
        chunked_dot(a, b)
    }

    fn map_indexed<T, F>(&self, count: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        (0..count).map(f).collect()
    }
}
