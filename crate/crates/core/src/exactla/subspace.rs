use super::field::PrimeField;
use super::matrix::Matrix;

/// A linear subspace of `F_p^n`, stored by its reduced row-echelon basis.
///
/// The RREF basis is unique, so structural equality is subspace equality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Matrix,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(field: PrimeField, ambient_dim: usize) -> Self {
        Subspace { ambient_dim, basis: Matrix::zeros(field, 0, ambient_dim), pivots: Vec::new() }
    }

    pub fn full(field: PrimeField, ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: Matrix::identity(field, ambient_dim),
            pivots: (0..ambient_dim).collect(),
        }
    }

    /// Row space of `m`.
    pub fn from_matrix(m: &Matrix) -> Self {
        let (basis, pivots) = m.rref();
        Subspace { ambient_dim: m.cols(), basis, pivots }
    }

    /// Span of the given vectors inside `F_p^ambient_dim`.
    pub fn span(field: PrimeField, ambient_dim: usize, vectors: &[Vec<u32>]) -> Self {
        if vectors.is_empty() {
            return Self::zero(field, ambient_dim);
        }
        Self::from_matrix(&Matrix::from_rows(field, vectors))
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    #[inline]
    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn field(&self) -> PrimeField {
        self.basis.field()
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient_dim
    }

    /// Coordinates of `v` in the RREF basis, or `None` when `v` is outside.
    ///
    /// For an RREF basis the coordinates are simply the entries of `v` at the
    /// pivot columns.
    pub fn coords(&self, v: &[u32]) -> Option<Vec<u32>> {
        assert_eq!(v.len(), self.ambient_dim, "ambient dimension mismatch");
        let c: Vec<u32> = self.pivots.iter().map(|&j| v[j]).collect();
        if self.is_full() {
            return Some(c);
        }
        let f = self.field();
        let mut acc = vec![0u32; self.ambient_dim];
        for (k, &ck) in c.iter().enumerate() {
            if ck == 0 {
                continue;
            }
            for (a, &b) in acc.iter_mut().zip(self.basis.row(k)) {
                *a = f.add(*a, f.mul(ck, b));
            }
        }
        (acc == v).then_some(c)
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        self.coords(v).is_some()
    }

    /// `self + other`.
    pub fn sum(&self, other: &Subspace) -> Subspace {
        Self::from_matrix(&self.basis.vstack(&other.basis))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coords_reconstruct_members() {
        let f = PrimeField::new(11).unwrap();
        let s = Subspace::span(f, 3, &[vec![1, 2, 3], vec![0, 1, 4]]);
        let v = vec![2, 7, 3]; // 2*(1,2,3) + 3*(0,1,4) = (2, 7, 18) = (2, 7, 7)
        assert!(!s.contains(&v));
        let w = vec![2, 7, 7];
        let c = s.coords(&w).unwrap();
        let back: Vec<u32> = (0..3)
            .map(|j| f.add(f.mul(c[0], s.basis().get(0, j)), f.mul(c[1], s.basis().get(1, j))))
            .collect();
        assert_eq!(back, w);
    }

    #[test]
    fn zero_and_full() {
        let f = PrimeField::new(3).unwrap();
        assert_eq!(Subspace::zero(f, 4).dim(), 0);
        assert!(Subspace::full(f, 4).is_full());
        assert_eq!(Subspace::full(f, 4), Subspace::from_matrix(&Matrix::identity(f, 4)));
        assert!(Subspace::zero(f, 2).contains(&[0, 0]));
    }
}
