//! Numerics for zeros of generalized Nevanlinna functions with one negative
//! square, their trajectories under Möbius perturbations, and the local
//! geometry where they reach the real axis.

pub mod builtins;
pub mod cauchy;
pub mod classifier;
pub mod config;
pub mod error;
pub mod export;
pub mod jet;
pub mod kernel;
pub mod levelset;
pub mod measures;
pub mod moebius;
pub mod n1;
pub mod nevanlinna;
pub mod quad;
pub mod tracker;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Caps the global worker pool at `threads`. Only the first call has effect.
pub fn init_thread_pool(threads: usize) -> bool {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build_global()
        .is_ok()
}
