use super::elim::eliminate;
use super::field::PrimeField;
use super::subspace::Subspace;

/// Dense row-major matrix over `F_p`. Entries are always reduced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<u32>,
    field: PrimeField,
}

impl Matrix {
    /// Builds a matrix from row-major data, reducing every entry mod `p`.
    ///
    /// Panics if `data.len() != rows * cols`.
    pub fn new(field: PrimeField, rows: usize, cols: usize, mut data: Vec<u32>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data has wrong length");
        let p = field.modulus();
        for x in data.iter_mut() {
            if *x >= p {
                *x %= p;
            }
        }
        Matrix { rows, cols, data, field }
    }

    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![0; rows * cols], field }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1 % field.modulus();
        }
        m
    }

    /// Panics on ragged input.
    pub fn from_rows(field: PrimeField, rows: &[Vec<u32>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged rows");
            data.extend_from_slice(row);
        }
        Self::new(field, rows.len(), cols, data)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn data(&self) -> &[u32] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v % self.field.modulus();
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[u32]> {
        // chunks_exact(0) panics, and a zero-column matrix still has rows.
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Self::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        t
    }

    /// Matrix product; panics on a shape or field mismatch.
    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        assert_eq!(self.field, other.field, "field mismatch");
        let f = self.field;
        let mut acc = vec![0u64; other.cols];
        let mut out = Vec::with_capacity(self.rows * other.cols);
        // (p-1)^2 < 2^62, so four products fit before a reduction is needed.
        for i in 0..self.rows {
            acc.iter_mut().for_each(|x| *x = 0);
            for (k, &a) in self.row(i).iter().enumerate() {
                if a == 0 {
                    continue;
                }
                for (x, &b) in acc.iter_mut().zip(other.row(k)) {
                    *x = f.reduce(*x + a as u64 * b as u64) as u64;
                }
            }
            out.extend(acc.iter().map(|&x| x as u32));
        }
        Matrix { rows: self.rows, cols: other.cols, data: out, field: f }
    }

    pub fn mul_vec(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.cols, "shape mismatch");
        self.row_iter()
            .map(|row| {
                row.iter()
                    .zip(v)
                    .fold(0u32, |s, (&a, &b)| self.field.add(s, self.field.mul(a, b)))
            })
            .collect()
    }

    /// Rows of `self` followed by rows of `other`.
    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols, "column mismatch");
        assert_eq!(self.field, other.field, "field mismatch");
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Matrix { rows: self.rows + other.rows, cols: self.cols, data, field: self.field }
    }

    fn widened(&self) -> Vec<u64> {
        self.data.iter().map(|&x| x as u64).collect()
    }

    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        // Elimination cost is linear in the row count per pivot; put the
        // shorter side on the rows.
        if self.rows > self.cols {
            let t = self.transpose();
            let mut buf = t.widened();
            return eliminate(t.field, t.rows, t.cols, &mut buf, false).len();
        }
        let mut buf = self.widened();
        eliminate(self.field, self.rows, self.cols, &mut buf, false).len()
    }

    /// Reduced row-echelon form with zero rows removed, and its pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut buf = self.widened();
        let pivots = eliminate(self.field, self.rows, self.cols, &mut buf, true);
        let data = buf[..pivots.len() * self.cols].iter().map(|&x| x as u32).collect();
        (Matrix { rows: pivots.len(), cols: self.cols, data, field: self.field }, pivots)
    }

    /// Null space `{v : self * v = 0}`.
    pub fn kernel(&self) -> Subspace {
        let (r, pivots) = self.rref();
        let f = self.field;
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let free: Vec<usize> = (0..self.cols).filter(|&c| !is_pivot[c]).collect();
        let mut data = vec![0u32; free.len() * self.cols];
        for (k, &fc) in free.iter().enumerate() {
            let v = &mut data[k * self.cols..(k + 1) * self.cols];
            v[fc] = 1 % f.modulus();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(r.get(row, fc));
            }
        }
        Subspace::from_matrix(&Matrix { rows: free.len(), cols: self.cols, data, field: f })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn arb_matrix() -> impl Strategy<Value = Matrix> {
        (prop::sample::select(vec![2u64, 3, 5, 7, 101, 65_521, 2_147_483_629]), 0usize..9, 0usize..9)
            .prop_flat_map(|(p, r, c)| {
                let field = PrimeField::new(p).unwrap();
                // Skew toward zero so that low rank shows up often.
                prop::collection::vec(prop_oneof![3 => Just(0u32), 2 => any::<u32>()], r * c)
                    .prop_map(move |d| Matrix::new(field, r, c, d))
            })
    }

    fn permuted_rows(m: &Matrix, perm: &[usize]) -> Matrix {
        let rows: Vec<Vec<u32>> = perm.iter().map(|&i| m.row(i).to_vec()).collect();
        if rows.is_empty() {
            return m.clone();
        }
        Matrix::from_rows(m.field(), &rows)
    }

    proptest! {
        #[test]
        fn rank_equals_rank_of_transpose(m in arb_matrix()) {
            prop_assert_eq!(m.rank(), m.transpose().rank());
        }

        #[test]
        fn rank_nullity(m in arb_matrix()) {
            prop_assert_eq!(m.kernel().dim() + m.rank(), m.cols());
        }

        #[test]
        fn kernel_vectors_are_annihilated(m in arb_matrix()) {
            let k = m.kernel();
            for v in k.basis().row_iter() {
                prop_assert!(m.mul_vec(v).iter().all(|&x| x == 0));
            }
        }

        #[test]
        fn rank_invariant_under_permutation_and_scaling(
            m in arb_matrix(),
            seed in any::<u64>(),
        ) {
            use rand::{seq::SliceRandom, Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut perm: Vec<usize> = (0..m.rows()).collect();
            perm.shuffle(&mut rng);
            let mut pm = permuted_rows(&m, &perm);
            let p = m.field().modulus();
            for i in 0..pm.rows() {
                let s = rng.gen_range(1..p);
                for j in 0..pm.cols() {
                    let v = m.field().mul(pm.get(i, j), s);
                    pm.set(i, j, v);
                }
            }
            let mut cperm: Vec<usize> = (0..m.cols()).collect();
            cperm.shuffle(&mut rng);
            let pt = permuted_rows(&pm.transpose(), &cperm);
            prop_assert_eq!(m.rank(), pt.rank());
        }

        #[test]
        fn rref_is_idempotent(m in arb_matrix()) {
            let (r, piv) = m.rref();
            let (r2, piv2) = r.rref();
            prop_assert_eq!(&r, &r2);
            prop_assert_eq!(piv, piv2);
        }
    }

    #[test]
    fn product_against_hand_computation() {
        let f = PrimeField::new(7).unwrap();
        let a = Matrix::from_rows(f, &[vec![1, 2], vec![3, 4]]);
        let b = Matrix::from_rows(f, &[vec![5, 6], vec![0, 1]]);
        // [[5, 8], [15, 22]] mod 7
        assert_eq!(a.mul(&b), Matrix::from_rows(f, &[vec![5, 1], vec![1, 1]]));
    }

    #[test]
    fn new_reduces_entries() {
        let f = PrimeField::new(5).unwrap();
        assert_eq!(Matrix::new(f, 1, 2, vec![7, 10]).row(0), &[2, 0]);
    }
}
