/// Hilbert–Kunz function of the rational normal curve of degree `d` at `q`,
/// by counting exponents: `S_j` is spanned by `t^0, ..., t^{dj}` and the
/// Frobenius power of the maximal ideal covers `[l q, l q + d (j - q)]` for
/// `l = 0..=d`. Returns the per-degree quotient dimensions up to the first zero.
pub fn rational_normal_hk(d: usize, q: usize) -> Vec<u64> {
    let mut out = Vec::new();
    for j in 0.. {
        let mut covered = vec![false; d * j + 1];
        if j >= q {
            for l in 0..=d {
                covered[l * q..=l * q + d * (j - q)].iter_mut().for_each(|c| *c = true);
            }
        }
        let free = covered.iter().filter(|&&c| !c).count() as u64;
        out.push(free);
        if free == 0 {
            return out;
        }
    }
    unreachable!()
}
