//! Minimal free resolution of a finite point set, built degree by degree.
//!
//! The ideal is read off as the kernel of evaluation; each syzygy module is
//! the kernel of the previous map, and its minimal generators in degree `t`
//! are the kernel vectors outside `S_1 · K_{t-1}`. Elements of a graded free
//! module are dense vectors over the monomial basis of each summand.

use std::collections::HashMap;

fn pow(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * a % p;
        }
        a = a * a % p;
        e >>= 1;
    }
    acc
}

fn inv(a: u64, p: u64) -> u64 {
    pow(a, p - 2, p)
}

/// Semi-echelon basis: stored rows are monic at their pivots and vanish at
/// the pivots of rows stored before them.
struct Echelon {
    p: u64,
    rows: Vec<(usize, Vec<u64>)>,
}

impl Echelon {
    fn new(p: u64) -> Self {
        Echelon { p, rows: Vec::new() }
    }

    /// Adds `v` if it is independent of the stored rows.
    fn insert(&mut self, mut v: Vec<u64>) -> bool {
        let p = self.p;
        for (piv, row) in &self.rows {
            let c = v[*piv];
            if c != 0 {
                for (x, &y) in v.iter_mut().zip(row) {
                    *x = (*x + p - c * y % p) % p;
                }
            }
        }
        match v.iter().position(|&x| x != 0) {
            None => false,
            Some(piv) => {
                let s = inv(v[piv], p);
                v.iter_mut().for_each(|x| *x = *x * s % p);
                self.rows.push((piv, v));
                true
            }
        }
    }
}

/// Basis of `{x : A x = 0}` for `A` given by rows over `ncols` columns.
fn kernel(rows: &[Vec<u64>], ncols: usize, p: u64) -> Vec<Vec<u64>> {
    let mut a: Vec<Vec<u64>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(k) = (r..a.len()).find(|&k| a[k][c] != 0) else { continue };
        a.swap(r, k);
        let s = inv(a[r][c], p);
        a[r].iter_mut().for_each(|x| *x = *x * s % p);
        let pivot_row = a[r].clone();
        for (k, row) in a.iter_mut().enumerate() {
            let f = row[c];
            if k != r && f != 0 {
                for (x, &y) in row.iter_mut().zip(&pivot_row) {
                    *x = (*x + p - f * y % p) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![0; ncols];
            v[fc] = 1;
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = (p - a[row][fc]) % p;
            }
            v
        })
        .collect()
}

/// Monomials of degree `deg` in `n` variables with an index lookup.
struct Monomials {
    list: Vec<Vec<u8>>,
    index: HashMap<Vec<u8>, usize>,
}

impl Monomials {
    fn new(n: usize, deg: usize) -> Self {
        let mut list = Vec::new();
        let mut cur = vec![0u8; n];
        fn rec(k: usize, left: usize, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
            if k + 1 == cur.len() {
                cur[k] = left as u8;
                out.push(cur.clone());
                return;
            }
            for e in (0..=left).rev() {
                cur[k] = e as u8;
                rec(k + 1, left - e, cur, out);
            }
        }
        rec(0, deg, &mut cur, &mut list);
        let index = list.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        Monomials { list, index }
    }
}

/// Graded free module `⊕ S(-a_k)`.
struct FreeModule {
    gens: Vec<usize>,
}

impl FreeModule {
    /// `(generator, offset)` blocks of the degree-`t` piece.
    fn blocks(&self, t: usize, mons: &[Monomials]) -> (Vec<(usize, usize)>, usize) {
        let mut out = Vec::new();
        let mut off = 0;
        for (k, &a) in self.gens.iter().enumerate() {
            if a <= t {
                out.push((k, off));
                off += mons[t - a].list.len();
            }
        }
        (out, off)
    }

    /// `m · v` for `v` in degree `t`, `m` a monomial of degree `s`.
    fn shift(&self, v: &[u64], t: usize, m: &[u8], s: usize, mons: &[Monomials]) -> Vec<u64> {
        let (src, _) = self.blocks(t, mons);
        let (dst, dim) = self.blocks(t + s, mons);
        let dst_off: HashMap<usize, usize> = dst.into_iter().collect();
        let mut out = vec![0; dim];
        for (k, off) in src {
            let a = self.gens[k];
            for (idx, mono) in mons[t - a].list.iter().enumerate() {
                let c = v[off + idx];
                if c == 0 {
                    continue;
                }
                let prod: Vec<u8> = mono.iter().zip(m).map(|(x, y)| x + y).collect();
                out[dst_off[&k] + mons[t + s - a].index[&prod]] = c;
            }
        }
        out
    }
}

/// Betti numbers `b[i][j]` (homological degree `i`, row `j`) of `S/I` for
/// the given points of `P^{n-1}`, exact for `i + j <= top`.
pub fn betti_numbers(points: &[Vec<u64>], p: u64, top: usize) -> Vec<Vec<u64>> {
    let n = points[0].len();
    let mons: Vec<Monomials> = (0..=top).map(|d| Monomials::new(n, d)).collect();
    let mut b = vec![vec![0u64; top + 1]; n + 2];
    b[0][0] = 1;

    // Level 0: kernel of evaluation S_t -> F_p^γ is the ideal in degree t.
    let ambient = FreeModule { gens: vec![0] };
    let mut kernels: Vec<Vec<Vec<u64>>> = (0..=top)
        .map(|t| {
            let cols = &mons[t].list;
            let rows: Vec<Vec<u64>> = points
                .iter()
                .map(|pt| cols.iter().map(|m| m.iter().zip(pt).fold(1, |acc, (&e, &x)| acc * pow(x, e as u64, p) % p)).collect())
                .collect();
            kernel(&rows, cols.len(), p)
        })
        .collect();
    let mut target = ambient;

    for level in 1..=n + 1 {
        // Minimal generators of the current kernel, degree by degree.
        let mut gens = Vec::new();
        let mut images: Vec<Vec<u64>> = Vec::new();
        for t in 0..=top {
            let mut span = Echelon::new(p);
            if t > 0 {
                for v in &kernels[t - 1] {
                    for l in 0..n {
                        let mut x = vec![0u8; n];
                        x[l] = 1;
                        span.insert(target.shift(v, t - 1, &x, 1, &mons));
                    }
                }
            }
            for w in &kernels[t] {
                if span.insert(w.clone()) {
                    gens.push(t);
                    images.push(w.clone());
                    b[level][t - level] += 1;
                }
            }
        }
        if gens.is_empty() {
            break;
        }
        // Kernel of F_level -> target in each degree.
        let source = FreeModule { gens: gens.clone() };
        kernels = (0..=top)
            .map(|t| {
                let (blocks, dim) = source.blocks(t, &mons);
                let (_, tdim) = target.blocks(t, &mons);
                let mut cols: Vec<Vec<u64>> = Vec::with_capacity(dim);
                for (k, _) in blocks {
                    let a = gens[k];
                    for m in &mons[t - a].list {
                        cols.push(target.shift(&images[k], a, m, t - a, &mons));
                    }
                }
                let rows: Vec<Vec<u64>> = (0..tdim).map(|r| cols.iter().map(|c| c[r]).collect()).collect();
                kernel(&rows, dim, p)
            })
            .collect();
        target = source;
    }
    b
}
