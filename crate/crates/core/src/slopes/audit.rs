//! Exhaustive audit of the two polynomial inequalities that close the
//! stability induction for `r < d <= 2r`.

use serde::Serialize;

use crate::{Error, Result};

/// A point `(d, r, s, t)` with `r < d <= 2r`, `1 <= s <= r-2`, `0 <= t <= s-1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct InequalityQuad {
    pub d: i64,
    pub r: i64,
    pub s: i64,
    pub t: i64,
}

impl InequalityQuad {
    pub fn new(d: i64, r: i64, s: i64, t: i64) -> Result<Self> {
        if !(r < d && d <= 2 * r && 1 <= s && s <= r - 2 && 0 <= t && t < s) {
            return Err(Error::InvalidParams(format!(
                "(d,r,s,t)=({d},{r},{s},{t}) violates r < d <= 2r, 1 <= s <= r-2, 0 <= t <= s-1"
            )));
        }
        Ok(InequalityQuad { d, r, s, t })
    }

    pub fn p1(&self) -> i64 {
        p1(self.d, self.r, self.s, self.t)
    }

    pub fn p0(&self) -> i64 {
        p0(self.d, self.r, self.s, self.t)
    }
}

/// `r(t+1)(r-1-s) + (d-2r)(rt - ts - 2s + r)`.
pub fn p1(d: i64, r: i64, s: i64, t: i64) -> i64 {
    r * (t + 1) * (r - 1 - s) + (d - 2 * r) * (r * t - t * s - 2 * s + r)
}

/// `r(t+1)(r-2-s) + (d-2r)(rt - ts - 2s)`.
pub fn p0(d: i64, r: i64, s: i64, t: i64) -> i64 {
    r * (t + 1) * (r - 2 - s) + (d - 2 * r) * (r * t - t * s - 2 * s)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AuditFailure {
    /// `P1 <= 0`.
    P1NotPositive,
    /// `P0 < 0`.
    P0Negative,
    /// `P0 = 0` away from `d = 2r, s = r-2`.
    P0ZeroOffLocus,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub quad: InequalityQuad,
    pub failure: AuditFailure,
    pub value: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub r_max: i64,
    pub checked: u64,
    /// Grid points with `P0 = 0`; all should sit on `d = 2r, s = r-2`.
    pub p0_zeros: u64,
    pub counterexamples: Vec<Counterexample>,
}

impl AuditReport {
    pub fn clean(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

/// Checks `P1 > 0` and `P0 >= 0` (zero only at `d = 2r, s = r-2`) on every
/// grid point with `4 <= r <= r_max`.
pub fn audit_inequalities(r_max: i64) -> Result<AuditReport> {
    if r_max < 4 {
        return Err(Error::InvalidParams(format!("audit needs r_max >= 4, got {r_max}")));
    }
    let mut report = AuditReport { r_max, checked: 0, p0_zeros: 0, counterexamples: Vec::new() };
    for r in 4..=r_max {
        for d in r + 1..=2 * r {
            for s in 1..=r - 2 {
                for t in 0..s {
                    let quad = InequalityQuad { d, r, s, t };
                    report.checked += 1;
                    let (v1, v0) = (quad.p1(), quad.p0());
                    let mut fail = |failure, value| report.counterexamples.push(Counterexample { quad, failure, value });
                    if v1 <= 0 {
                        fail(AuditFailure::P1NotPositive, v1);
                    }
                    if v0 < 0 {
                        fail(AuditFailure::P0Negative, v0);
                    } else if v0 == 0 && !(d == 2 * r && s == r - 2) {
                        fail(AuditFailure::P0ZeroOffLocus, v0);
                    }
                    if v0 == 0 {
                        report.p0_zeros += 1;
                    }
                }
            }
        }
    }
    Ok(report)
}
