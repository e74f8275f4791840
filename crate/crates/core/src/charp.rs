//! Hilbert–Kunz functions of curve coordinate rings in characteristic `p`.
//!
//! `HK(q) = dim_k S(C) / (x_0^q, ..., x_r^q)` for `q = p^e`. The graded
//! pieces are computed inside the complete section spaces `H^0(L^j)` in
//! coefficient form, which needs no rational points and so works for
//! `p = 2, 3`:
//!
//! ```text
//! S_j = Σ_l x_l · S_{j-1},    I_j = Σ_l x_l^q · S_{j-q}
//! ```
//!
//! The quotient is generated in degree 0, so the first zero piece ends the
//! computation.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::curves::CurveModel;
use crate::exactla::Subspace;
use crate::rational::Rational;
use crate::{Error, Result};

/// Largest `h^0(L^j)` the computation will allocate.
pub const HK_SECTION_BUDGET: usize = 8192;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HKRecord {
    pub q: u64,
    pub hk: u64,
    /// Quotient dimension in degrees `0, 1, ...`, ending with the first zero.
    pub per_degree: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HKEstimate {
    pub records: Vec<HKRecord>,
    pub e_hk_predicted: Rational,
    /// `HK(q) / q^2` per record.
    pub ratios: Vec<Rational>,
    /// `|HK(q) / q^2 - predicted|` per record.
    pub deviations: Vec<Rational>,
    /// Smallest `C` with `deviation <= C / q` on every record.
    pub fitted_c: Rational,
}

/// `e` with `q = p^e`, if any `e >= 1` works.
fn frobenius_exponent(p: u64, q: u64) -> Option<u32> {
    let mut acc = p;
    let mut e = 1;
    while acc < q {
        acc = acc.checked_mul(p)?;
        e += 1;
    }
    (acc == q).then_some(e)
}

fn check_budget(model: &CurveModel, j: usize) -> Result<()> {
    let dim = model.section_dim(j);
    if dim > HK_SECTION_BUDGET {
        return Err(Error::BudgetExceeded(format!("h^0(L^{j}) = {dim} exceeds {HK_SECTION_BUDGET}")));
    }
    Ok(())
}

pub fn hk_dimension(model: &CurveModel, q: u64) -> Result<HKRecord> {
    let p = model.field.modulus() as u64;
    if frobenius_exponent(p, q).is_none() {
        return Err(Error::InvalidParams(format!("q = {q} is not a positive power of p = {p}")));
    }
    let f = model.field;
    let q = q as usize;
    let cap = (model.r + 1) * q;
    check_budget(model, q)?;
    let coords = &model.section_basis;
    // x_l^q as sections of L^q.
    let frob: Vec<Vec<u32>> = coords
        .iter()
        .map(|x| {
            let mut acc = vec![1 % f.modulus()];
            for k in 0..q {
                acc = model.multiply_sections(&acc, k, x, 1);
            }
            acc
        })
        .collect();

    let mut pieces: Vec<Subspace> = vec![Subspace::span(f, 1, &[vec![1 % f.modulus()]])];
    let mut per_degree = vec![1u64];
    let mut j = 0;
    loop {
        j += 1;
        if j > cap {
            return Err(Error::BudgetExceeded(format!("no zero quotient piece up to degree {cap}")));
        }
        check_budget(model, j)?;
        let dim_j = model.section_dim(j);
        let prev = &pieces[j - 1];
        let gens: Vec<Vec<u32>> = coords
            .iter()
            .flat_map(|x| prev.basis().row_iter().map(move |s| model.multiply_sections(s, j - 1, x, 1)))
            .collect();
        let s_j = Subspace::span(f, dim_j, &gens);
        let i_dim = if j >= q {
            let src = &pieces[j - q];
            let gens: Vec<Vec<u32>> = frob
                .iter()
                .flat_map(|x| src.basis().row_iter().map(move |s| model.multiply_sections(s, j - q, x, q)))
                .collect();
            Subspace::span(f, dim_j, &gens).dim()
        } else {
            0
        };
        let quotient = (s_j.dim() - i_dim) as u64;
        per_degree.push(quotient);
        pieces.push(s_j);
        if quotient == 0 {
            break;
        }
    }
    Ok(HKRecord { q: q as u64, hk: per_degree.iter().sum(), per_degree })
}

/// `d (r + 1) / (2 r)`.
pub fn hk_predicted(d: usize, r: usize) -> Ratio<i64> {
    Ratio::new((d * (r + 1)) as i64, (2 * r) as i64)
}

pub fn hk_estimate(model: &CurveModel, e_max: u32) -> Result<HKEstimate> {
    if e_max < 1 {
        return Err(Error::InvalidParams("e_max must be at least 1".into()));
    }
    let p = model.field.modulus() as u64;
    let predicted = hk_predicted(model.d, model.r);
    let mut records = Vec::new();
    let mut ratios = Vec::new();
    let mut deviations = Vec::new();
    let mut fitted = Ratio::from_integer(0);
    for e in 1..=e_max {
        let q = p.checked_pow(e).filter(|&q| q <= i64::MAX as u64 / q).ok_or_else(|| Error::BudgetExceeded(format!("{p}^{e} overflows")))?;
        let rec = hk_dimension(model, q)?;
        let ratio = Ratio::new(rec.hk as i64, (q * q) as i64);
        let dev = if ratio > predicted { ratio - predicted } else { predicted - ratio };
        fitted = fitted.max(dev * q as i64);
        ratios.push(ratio.into());
        deviations.push(dev.into());
        records.push(rec);
    }
    Ok(HKEstimate { records, e_hk_predicted: predicted.into(), ratios, deviations, fitted_c: fitted.into() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::{make_curve, CurveKind};

    /// Independent count for the rational normal curve of degree `d`:
    /// `S_j` is spanned by `t^0..t^{dj}` and the ideal by the exponent
    /// intervals `[l q, l q + d (j - q)]`, `l = 0..=d`.
    fn monomial_oracle(d: usize, q: usize) -> Vec<u64> {
        let mut out = Vec::new();
        for j in 0.. {
            let mut covered = vec![false; d * j + 1];
            if j >= q {
                for l in 0..=d {
                    for e in l * q..=l * q + d * (j - q) {
                        covered[e] = true;
                    }
                }
            }
            let v = covered.iter().filter(|&&c| !c).count() as u64;
            out.push(v);
            if v == 0 {
                return out;
            }
        }
        unreachable!()
    }

    fn rnc(d: usize, p: u64) -> CurveModel {
        make_curve(CurveKind::RationalNormal, d, d, p, 1).unwrap()
    }

    #[test]
    fn twisted_cubic_values() {
        let r = hk_dimension(&rnc(3, 2), 2).unwrap();
        assert_eq!(r.per_degree, vec![1, 4, 3, 0]);
        assert_eq!(r.hk, 8);
        assert_eq!(hk_dimension(&rnc(3, 3), 3).unwrap().per_degree, vec![1, 4, 7, 6, 0]);
        let five = hk_dimension(&rnc(3, 5), 5).unwrap();
        assert_eq!(five.per_degree, vec![1, 4, 7, 10, 13, 12, 3, 0]);
        assert_eq!(five.hk, 50);
    }

    #[test]
    fn projective_line_is_q_squared() {
        for (p, q) in [(2, 2), (2, 4), (3, 9), (7, 7)] {
            assert_eq!(hk_dimension(&rnc(1, p), q).unwrap().hk, q * q);
        }
    }

    #[test]
    fn agrees_with_monomial_oracle() {
        for d in 1..=5 {
            for (p, q) in [(2u64, 2usize), (2, 4), (2, 8), (3, 3), (5, 5), (7, 7)] {
                let rec = hk_dimension(&rnc(d, p), q as u64).unwrap();
                assert_eq!(rec.per_degree, monomial_oracle(d, q), "d={d} q={q}");
            }
        }
    }

    #[test]
    fn low_degrees_are_untouched() {
        let model = make_curve(CurveKind::RationalGeneral, 3, 5, 5, 2).unwrap();
        let rec = hk_dimension(&model, 5).unwrap();
        for j in 0..5 {
            // Below q the quotient is all of S(C)_j; this curve is not
            // projectively normal, so S(C)_1 has dimension 4, not 6.
            assert!(rec.per_degree[j] <= model.section_dim(j) as u64);
        }
        assert_eq!(rec.per_degree[1], 4);
    }

    #[test]
    fn predicted_values() {
        assert_eq!(hk_predicted(3, 3), Ratio::from_integer(2));
        assert_eq!(hk_predicted(1, 1), Ratio::from_integer(1));
        assert_eq!(hk_predicted(4, 4), Ratio::new(5, 2));
    }

    #[test]
    fn estimates() {
        let est = hk_estimate(&rnc(3, 2), 1).unwrap();
        assert_eq!(est.ratios[0].0, Ratio::from_integer(2));
        assert_eq!(est.fitted_c.0, Ratio::from_integer(0));
        let est = hk_estimate(&rnc(4, 3), 2).unwrap();
        assert_eq!(est.records.iter().map(|r| r.hk).collect::<Vec<_>>(), vec![23, 201]);
        assert!(est.fitted_c.0 <= Ratio::from_integer(4));
        let json = serde_json::to_string(&est).unwrap();
        assert!(json.contains(r#""e_hk_predicted":{"num":5,"den":2}"#));
    }

    #[test]
    fn rejects_q_not_a_power_of_p() {
        assert!(matches!(hk_dimension(&rnc(3, 3), 6), Err(Error::InvalidParams(_))));
        assert!(matches!(hk_dimension(&rnc(3, 3), 1), Err(Error::InvalidParams(_))));
    }

    #[test]
    fn elliptic_quartic_in_characteristic_five() {
        // No closed form is asserted; the record must still be well formed.
        let model = make_curve(CurveKind::Elliptic, 3, 4, 5, 3).unwrap();
        let rec = hk_dimension(&model, 5).unwrap();
        assert_eq!(*rec.per_degree.last().unwrap(), 0);
        assert_eq!(rec.per_degree[..3], [1, 4, 8]);
    }
}
