//! Fraction selectors: the least rational above a given one among fractions
//! with bounded denominator.

use num_integer::Integer;
use num_rational::Ratio;

/// Smallest `m > mu` whose reduced denominator is `< rk`.
///
/// Walks the Stern–Brocot tree on the fractional part of `mu`, taking runs
/// of equal-direction moves in one step, so the cost is logarithmic in `rk`.
pub fn minimal_exceeding_slope(mu: Ratio<i64>, rk: u64) -> Ratio<i64> {
    assert!(rk >= 2, "denominator bound needs rk >= 2");
    let n = (rk - 1) as i128;
    let base = mu.floor();
    let frac = mu - base;
    let (a, b) = (*frac.numer() as i128, *frac.denom() as i128);

    // Invariant: lo <= frac < hi, both reduced with denominators <= n, and
    // lo, hi adjacent in the tree (hi.0 * lo.1 - lo.0 * hi.1 == 1).
    let (mut lo, mut hi) = ((0i128, 1i128), (1i128, 1i128));
    loop {
        let mut moved = false;

        // Right run: lo += k * hi while the result stays <= frac.
        let num = a * lo.1 - b * lo.0;
        let den = b * hi.0 - a * hi.1;
        let k = (num / den).min((n - lo.1) / hi.1);
        if k > 0 {
            lo = (lo.0 + k * hi.0, lo.1 + k * hi.1);
            moved = true;
        }

        // Left run: hi += k * lo while the result stays > frac.
        let num = b * hi.0 - a * hi.1;
        let den = a * lo.1 - b * lo.0;
        let by_den = (n - hi.1) / lo.1;
        let k = if den == 0 { by_den } else { ((num - 1) / den).min(by_den) };
        if k > 0 {
            hi = (hi.0 + k * lo.0, hi.1 + k * lo.1);
            moved = true;
        }

        if !moved {
            break;
        }
    }
    base + Ratio::new_raw(hi.0 as i64, hi.1 as i64)
}

/// Least `z/w > b/a` with `w < a`, as a reduced pair.
pub fn zw_pair(b: u64, a: u64) -> (u64, u64) {
    assert!(0 < b && b < a, "zw_pair needs 0 < b < a");
    let m = minimal_exceeding_slope(Ratio::new(b as i64, a as i64), a);
    let (z, w) = (*m.numer() as u64, *m.denom() as u64);
    debug_assert!(z <= b);
    (z, w)
}

/// The pair used to split the kernel bundle when `m + 1` points are fixed
/// on a curve in `P^r`.
///
/// When `gcd(m+1, r) = 1` this is the least `z/w > (m+1)/r` with `w < r`.
/// Otherwise, writing `m+1 = k a` and `r = k b` with `k` the gcd, it is the
/// unreduced `((k-1) a, (k-1) b)`.
pub fn xy_pair(m: u64, r: u64) -> (u64, u64) {
    assert!(m + 1 < r, "xy_pair needs 0 < m + 1 < r");
    let k = (m + 1).gcd(&r);
    if k == 1 {
        let q = minimal_exceeding_slope(Ratio::new((m + 1) as i64, r as i64), r);
        (*q.numer() as u64, *q.denom() as u64)
    } else {
        let (a, b) = ((m + 1) / k, r / k);
        ((k - 1) * a, (k - 1) * b)
    }
}

/// `⌈μ(S)⌉ <= ⌊μ(Q)⌋ + 1` and `⌈μ(Q)⌉ <= ⌊μ(S)⌋ + 1`: no integer lies
/// strictly between the two slopes' Raynaud thresholds.
pub fn close_slopes(mu_s: Ratio<i64>, mu_q: Ratio<i64>) -> bool {
    let one = Ratio::from_integer(1);
    mu_s.ceil() <= mu_q.floor() + one && mu_q.ceil() <= mu_s.floor() + one
}
