//! Standard-library side of the toolkit: a rayon [`Executor`] that matches
//! the serial one bit for bit, the JSON/CSV file formats, and the `bellmono`
//! command-line driver.
//!
//! [`Executor`]: bellmono_core::exec::Executor

pub mod cli;
pub mod io;
pub mod parallel;

pub use bellmono_core;
pub use parallel::Pool;
