use super::field::PrimeField;

/// In-place Gaussian elimination on a row-major `rows x cols` buffer.
///
/// Entries are kept as unreduced `u64` residues. Each row counts the
/// pivot updates applied since its last reduction; a row is reduced before
/// the count would let an entry exceed `u64::MAX`. On return the first
/// `pivots.len()` rows are the pivot rows (normalized, pivot entry 1) and
/// every entry is reduced into `[0, p)`. With `jordan` set, pivot columns
/// are also cleared above the pivot, giving the reduced row-echelon form.
pub(crate) fn eliminate(
    field: PrimeField,
    rows: usize,
    cols: usize,
    buf: &mut [u64],
    jordan: bool,
) -> Vec<usize> {
    debug_assert_eq!(buf.len(), rows * cols);
    let p = field.modulus() as u64;
    let step = (p - 1) * (p - 1);
    let limit = (u64::MAX - p).checked_div(step).unwrap_or(u64::MAX);
    let mut pending = vec![0u64; rows];
    let mut piv_row = vec![0u32; cols];
    let mut pivots = Vec::new();
    let mut r = 0;

    for c in 0..cols {
        if r == rows {
            break;
        }
        let mut found = None;
        for i in r..rows {
            let v = field.reduce(buf[i * cols + c]);
            buf[i * cols + c] = v as u64;
            if v != 0 {
                found = Some(i);
                break;
            }
        }
        let Some(i) = found else { continue };
        if i != r {
            let (head, tail) = buf.split_at_mut(i * cols);
            head[r * cols..(r + 1) * cols].swap_with_slice(&mut tail[..cols]);
            pending.swap(i, r);
        }

        let inv = field.inv(buf[r * cols + c] as u32).expect("pivot is nonzero");
        for j in c..cols {
            let v = field.mul(field.reduce(buf[r * cols + j]), inv);
            piv_row[j] = v;
            buf[r * cols + j] = v as u64;
        }
        pending[r] = 0;

        let start = if jordan { 0 } else { r + 1 };
        for i in start..rows {
            if i == r {
                continue;
            }
            let row = &mut buf[i * cols..(i + 1) * cols];
            let v = field.reduce(row[c]);
            if v == 0 {
                row[c] = 0;
                continue;
            }
            if pending[i] >= limit {
                for x in row[c..].iter_mut() {
                    *x = field.reduce(*x) as u64;
                }
                pending[i] = 0;
            }
            let f = (p - v as u64) as u32;
            for (a, &b) in row[c..].iter_mut().zip(&piv_row[c..]) {
                *a += f as u64 * b as u64;
            }
            row[c] = 0;
            pending[i] += 1;
        }
        pivots.push(c);
        r += 1;
    }

    for x in buf.iter_mut() {
        *x = field.reduce(*x) as u64;
    }
    pivots
}
