//! Exact syzygy computations for point sets on curves over prime fields.
//!
//! The crate is organised bottom-up:
//!
//! * [`exactla`]: dense linear algebra over `F_p` (rank, kernels, row spaces).
//! * [`curves`]: rational and elliptic curve models, point samples and the
//!   section spaces they carry.
//! * [`koszul`]: graded Betti numbers as Koszul homology.
//! * [`mrc`]: closed-form Betti table predictions for general points on a
//!   curve and the trial logic that certifies them.
//! * [`charp`]: Hilbert–Kunz functions in positive characteristic.
//! * [`slopes`]: exact slope arithmetic, general bundle types and the
//!   degeneration planner.

pub mod charp;
pub mod curves;
mod error;
pub mod exactla;
pub mod koszul;
pub mod mrc;
pub mod rational;
pub mod rng;
pub mod slopes;

pub use error::{Error, Result};

/// Version string embedded in every result document.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Binomial coefficient as a `u64`; zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for t in 0..k {
        acc = acc * (n - t) as u64 / (t + 1) as u64;
    }
    acc
}

/// Binomial coefficient over signed upper index restricted to `n >= 0`.
pub(crate) fn binomial_i64(n: i64, k: i64) -> i64 {
    if n < 0 || k < 0 || k > n {
        0
    } else {
        binomial(n as usize, k as usize) as i64
    }
}
