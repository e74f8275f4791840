//! Exact linear algebra over a prime field `F_p` with `p < 2^31`.
//!
//! Matrices are dense and row-major. Elimination works on a widened `u64`
//! copy and defers modular reduction until an entry could overflow, which
//! keeps the inner update loop branch-free.

mod elim;
mod field;
mod matrix;
mod subspace;

pub use field::{default_prime, is_prime, next_prime, PrimeField};
pub use matrix::Matrix;
pub use subspace::Subspace;

/// `F_p`-rank of `m`.
pub fn rank(m: &Matrix) -> usize {
    m.rank()
}

/// Basis of `{v : m v = 0}` as a subspace of `F_p^{cols}`.
pub fn kernel_basis(m: &Matrix) -> Subspace {
    m.kernel()
}

/// Row space of `m` with a reduced row-echelon basis.
pub fn row_space(m: &Matrix) -> Subspace {
    Subspace::from_matrix(m)
}
