//! Curve models over `F_p` and the point samples drawn from them.
//!
//! A model fixes a line bundle `L` of degree `d` on a rational or elliptic
//! curve together with `r + 1` sections spanning the linear system `V`.
//! Sections of `L^k` are stored as coefficient vectors in a fixed basis of
//! the complete space `H^0(L^k)`:
//!
//! * rational: binary forms of degree `d k` in the chart `s = 1`, basis
//!   `1, t, ..., t^{dk}`;
//! * elliptic: the pole-order basis at the origin `O`, ordered by pole order
//!   `0, 2, 3, ..., dk` (`x^i` has order `2i`, `x^i y` has order `2i + 3`).
//!
//! Points carry the values of the coordinate sections in that chart, so
//! multiplying by a coordinate is a pointwise product of value vectors.

use std::collections::HashSet;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::exactla::{Matrix, PrimeField, Subspace};
use crate::koszul::MAX_R;
use crate::rng::{stream_rng, STREAM_CURVE, STREAM_POINTS};
use crate::{Error, Result};

const CURVE_ATTEMPTS: usize = 64;
/// Affine base points are searched exhaustively only below this modulus.
const BASEPOINT_SCAN_LIMIT: u32 = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveKind {
    RationalNormal,
    RationalGeneral,
    Elliptic,
}

impl CurveKind {
    pub fn genus(self) -> usize {
        match self {
            CurveKind::Elliptic => 1,
            _ => 0,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            CurveKind::RationalNormal => "rational_normal",
            CurveKind::RationalGeneral => "rational_general",
            CurveKind::Elliptic => "elliptic",
        }
    }
}

impl std::str::FromStr for CurveKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rational_normal" => Ok(CurveKind::RationalNormal),
            "rational_general" => Ok(CurveKind::RationalGeneral),
            "elliptic" => Ok(CurveKind::Elliptic),
            other => Err(Error::InvalidParams(format!("unknown curve kind {other:?}"))),
        }
    }
}

/// Short Weierstrass coefficients of `y^2 = x^3 + a x + b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Weierstrass {
    pub a: u32,
    pub b: u32,
}

impl Weierstrass {
    fn is_nonsingular(&self, f: PrimeField) -> bool {
        let a3 = f.mul(f.mul(self.a, self.a), self.a);
        let b2 = f.mul(self.b, self.b);
        let disc = f.add(f.mul(4 % f.modulus(), a3), f.mul(27 % f.modulus(), b2));
        disc != 0
    }

    /// `x^3 + a x + b`.
    pub fn rhs(&self, f: PrimeField, x: u32) -> u32 {
        let x3 = f.mul(f.mul(x, x), x);
        f.add(f.add(x3, f.mul(self.a, x)), self.b)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveModel {
    pub kind: CurveKind,
    pub r: usize,
    pub d: usize,
    pub field: PrimeField,
    pub seed: u64,
    pub weierstrass: Option<Weierstrass>,
    /// `r + 1` coefficient vectors in the basis of `H^0(L)`.
    pub section_basis: Vec<Vec<u32>>,
}

/// Source parameter of a sampled point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Param {
    T(u32),
    Affine(u32, u32),
}

/// Points in `P^r` with fixed homogeneous representatives.
#[derive(Clone, Debug)]
pub struct PointSample {
    pub field: PrimeField,
    pub r: usize,
    pub points: Vec<Vec<u32>>,
    /// Present when the points come from a curve model; `params[i]` produced
    /// `points[i]` up to a nonzero scalar.
    pub params: Vec<Param>,
    pub model: Option<Arc<CurveModel>>,
}

/// `eta = L^m(-D)` with `D` a set of sample points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistSpec {
    pub m: usize,
    pub vanishing_indices: Vec<usize>,
}

pub fn make_curve(kind: CurveKind, r: usize, d: usize, p: u64, seed: u64) -> Result<CurveModel> {
    CurveModel::build(kind, r, d, PrimeField::new(p)?, seed, None)
}

impl CurveModel {
    /// Builds a model, drawing any unspecified data from `seed`.
    pub fn build(
        kind: CurveKind,
        r: usize,
        d: usize,
        field: PrimeField,
        seed: u64,
        weierstrass: Option<Weierstrass>,
    ) -> Result<CurveModel> {
        if r < 1 || d < r || r > MAX_R {
            return Err(Error::InvalidParams(format!("need d >= r >= 1 and r <= {MAX_R}, got r={r}, d={d}")));
        }
        if weierstrass.is_some() && kind != CurveKind::Elliptic {
            return Err(Error::InvalidParams("weierstrass coefficients given for a rational curve".into()));
        }
        let p = field.modulus();
        let mut rng = stream_rng(seed, STREAM_CURVE);
        match kind {
            CurveKind::RationalNormal => {
                if d != r {
                    return Err(Error::InvalidParams(format!("rational normal curve needs d = r, got r={r}, d={d}")));
                }
                let section_basis = (0..=r)
                    .map(|i| {
                        let mut v = vec![0; d + 1];
                        v[i] = 1 % p;
                        v
                    })
                    .collect();
                Ok(CurveModel { kind, r, d, field, seed, weierstrass: None, section_basis })
            }
            CurveKind::RationalGeneral => {
                for _ in 0..CURVE_ATTEMPTS {
                    let basis: Vec<Vec<u32>> =
                        (0..=r).map(|_| (0..=d).map(|_| rng.gen_range(0..p)).collect()).collect();
                    if Matrix::from_rows(field, &basis).rank() == r + 1 && rational_basepoint_free(field, &basis, d) {
                        return Ok(CurveModel { kind, r, d, field, seed, weierstrass: None, section_basis: basis });
                    }
                }
                Err(Error::CurveNotFound { prime: p, attempts: CURVE_ATTEMPTS })
            }
            CurveKind::Elliptic => {
                if p <= 3 {
                    return Err(Error::InvalidParams(format!("elliptic models need p > 3, got {p}")));
                }
                if d < 3 || r + 1 > d {
                    return Err(Error::InvalidParams(format!("elliptic model needs d >= 3 and r + 1 <= d, got r={r}, d={d}")));
                }
                let w = match weierstrass {
                    Some(w) => {
                        let w = Weierstrass { a: w.a % p, b: w.b % p };
                        if !w.is_nonsingular(field) {
                            return Err(Error::InvalidParams(format!("y^2 = x^3 + {}x + {} is singular mod {p}", w.a, w.b)));
                        }
                        w
                    }
                    None => (0..CURVE_ATTEMPTS)
                        .map(|_| Weierstrass { a: rng.gen_range(0..p), b: rng.gen_range(0..p) })
                        .find(|w| w.is_nonsingular(field))
                        .ok_or(Error::CurveNotFound { prime: p, attempts: CURVE_ATTEMPTS })?,
                };
                let mut model = CurveModel { kind, r, d, field, seed, weierstrass: Some(w), section_basis: Vec::new() };
                if r + 1 == d {
                    // The complete system: take the pole-order basis itself.
                    model.section_basis = (0..d)
                        .map(|i| {
                            let mut v = vec![0; d];
                            v[i] = 1;
                            v
                        })
                        .collect();
                    return Ok(model);
                }
                for _ in 0..CURVE_ATTEMPTS {
                    model.section_basis =
                        (0..=r).map(|_| (0..d).map(|_| rng.gen_range(0..p)).collect()).collect();
                    if Matrix::from_rows(field, &model.section_basis).rank() == r + 1 && model.elliptic_basepoint_free() {
                        return Ok(model);
                    }
                }
                Err(Error::CurveNotFound { prime: p, attempts: CURVE_ATTEMPTS })
            }
        }
    }

    pub fn genus(&self) -> usize {
        self.kind.genus()
    }

    /// `h^0(L^k)`.
    pub fn section_dim(&self, k: usize) -> usize {
        match self.kind {
            CurveKind::Elliptic if k == 0 => 1,
            CurveKind::Elliptic => self.d * k,
            _ => self.d * k + 1,
        }
    }

    /// Hilbert polynomial `P_C(k) = d k + 1 - g`.
    pub fn hilbert_polynomial(&self, k: usize) -> i64 {
        (self.d * k) as i64 + 1 - self.genus() as i64
    }

    fn curve(&self) -> Weierstrass {
        self.weierstrass.expect("elliptic model carries its equation")
    }

    /// Values at `param` of every basis section of `H^0(L^k)`.
    pub fn section_values(&self, k: usize, param: Param) -> Vec<u32> {
        let f = self.field;
        let n = self.section_dim(k);
        match (self.kind, param) {
            (CurveKind::Elliptic, Param::Affine(x, y)) => {
                let mut out = Vec::with_capacity(n);
                out.push(1 % f.modulus());
                // Orders 2, 3, 4, ...: x^i for even order 2i, x^i y for 2i + 3.
                let mut xpow = 1 % f.modulus();
                let mut xy = y;
                for order in 2..=(self.d * k) {
                    if order % 2 == 0 {
                        xpow = f.mul(xpow, x);
                        out.push(xpow);
                    } else {
                        if order > 3 {
                            xy = f.mul(xy, x);
                        }
                        out.push(xy);
                    }
                }
                out
            }
            (CurveKind::Elliptic, Param::T(_)) => panic!("elliptic sections need an affine point"),
            (_, Param::T(t)) => {
                let mut out = Vec::with_capacity(n);
                let mut acc = 1 % f.modulus();
                for _ in 0..n {
                    out.push(acc);
                    acc = f.mul(acc, t);
                }
                out
            }
            (_, Param::Affine(..)) => panic!("rational sections need a t parameter"),
        }
    }

    /// Value of a section of `L^k` given by coefficients.
    pub fn evaluate_section(&self, coeffs: &[u32], k: usize, param: Param) -> u32 {
        let f = self.field;
        self.section_values(k, param)
            .iter()
            .zip(coeffs)
            .fold(0, |s, (&v, &c)| f.add(s, f.mul(v, c)))
    }

    /// Homogeneous coordinates of the image of `param` under `V`.
    pub fn point_at(&self, param: Param) -> Vec<u32> {
        self.section_basis.iter().map(|s| self.evaluate_section(s, 1, param)).collect()
    }

    /// Product of a section of `L^ka` and one of `L^kb`, in the basis of
    /// `H^0(L^{ka+kb})`.
    pub fn multiply_sections(&self, a: &[u32], ka: usize, b: &[u32], kb: usize) -> Vec<u32> {
        let f = self.field;
        debug_assert_eq!(a.len(), self.section_dim(ka));
        debug_assert_eq!(b.len(), self.section_dim(kb));
        match self.kind {
            CurveKind::Elliptic => {
                let w = self.curve();
                let (a0, a1) = split_pole_basis(a);
                let (b0, b1) = split_pole_basis(b);
                // (A0 + y A1)(B0 + y B1) with y^2 = x^3 + a x + b.
                let cubic = [w.b, w.a, 0, 1 % f.modulus()];
                let even = poly_add(f, &poly_mul(f, &a0, &b0), &poly_mul(f, &poly_mul(f, &a1, &b1), &cubic));
                let odd = poly_add(f, &poly_mul(f, &a0, &b1), &poly_mul(f, &a1, &b0));
                join_pole_basis(&even, &odd, self.section_dim(ka + kb))
            }
            _ => {
                let mut out = poly_mul(f, a, b);
                out.resize(self.section_dim(ka + kb), 0);
                out
            }
        }
    }

    fn elliptic_basepoint_free(&self) -> bool {
        // At O only the top pole order survives.
        let top = self.d - 1;
        if self.section_basis.iter().all(|s| s[top] == 0) {
            return false;
        }
        let f = self.field;
        if f.modulus() > BASEPOINT_SCAN_LIMIT {
            return true;
        }
        affine_points(f, self.curve()).into_iter().all(|pt| self.point_at(pt).iter().any(|&c| c != 0))
    }

    /// `#C(F_p)` including the point at infinity (elliptic models only).
    pub fn point_count(&self) -> Option<u64> {
        let w = self.weierstrass?;
        let f = self.field;
        let affine: i64 = (0..f.modulus()).map(|x| 1 + f.legendre(w.rhs(f, x)) as i64).sum();
        Some(affine as u64 + 1)
    }

    /// Number of parameters a sample may be drawn from.
    fn usable_parameters(&self) -> u64 {
        match self.point_count() {
            Some(n) => n - 1,
            None => self.field.modulus() as u64,
        }
    }
}

fn split_pole_basis(c: &[u32]) -> (Vec<u32>, Vec<u32>) {
    let mut even = Vec::new();
    let mut odd = Vec::new();
    for (idx, &v) in c.iter().enumerate() {
        let order = if idx == 0 { 0 } else { idx + 1 };
        if order % 2 == 0 {
            let i = order / 2;
            if even.len() <= i {
                even.resize(i + 1, 0);
            }
            even[i] = v;
        } else {
            let i = (order - 3) / 2;
            if odd.len() <= i {
                odd.resize(i + 1, 0);
            }
            odd[i] = v;
        }
    }
    (even, odd)
}

fn join_pole_basis(even: &[u32], odd: &[u32], dim: usize) -> Vec<u32> {
    let mut out = vec![0; dim];
    for (i, &v) in even.iter().enumerate() {
        if v == 0 {
            continue;
        }
        let idx = if i == 0 { 0 } else { 2 * i - 1 };
        assert!(idx < dim, "product exceeds the pole-order bound");
        out[idx] = v;
    }
    for (i, &v) in odd.iter().enumerate() {
        if v == 0 {
            continue;
        }
        let idx = 2 * i + 2;
        assert!(idx < dim, "product exceeds the pole-order bound");
        out[idx] = v;
    }
    out
}

pub(crate) fn poly_mul(f: PrimeField, a: &[u32], b: &[u32]) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut acc = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            acc[i + j] = f.add(acc[i + j], f.mul(x, y));
        }
    }
    acc
}

fn poly_add(f: PrimeField, a: &[u32], b: &[u32]) -> Vec<u32> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| f.add(a.get(i).copied().unwrap_or(0), b.get(i).copied().unwrap_or(0)))
        .collect()
}

fn poly_trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn poly_rem(f: PrimeField, a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut a = poly_trim(a.to_vec());
    let b = poly_trim(b.to_vec());
    let lead_inv = f.inv(*b.last().expect("division by zero polynomial")).unwrap();
    while a.len() >= b.len() {
        let shift = a.len() - b.len();
        let c = f.mul(*a.last().unwrap(), lead_inv);
        for (i, &bv) in b.iter().enumerate() {
            a[shift + i] = f.sub(a[shift + i], f.mul(c, bv));
        }
        a = poly_trim(a);
    }
    a
}

fn poly_gcd(f: PrimeField, a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut a = poly_trim(a.to_vec());
    let mut b = poly_trim(b.to_vec());
    while !b.is_empty() {
        let r = poly_rem(f, &a, &b);
        a = b;
        b = r;
    }
    a
}

/// Degree-`d` binary forms without a common zero on `P^1`.
fn rational_basepoint_free(f: PrimeField, basis: &[Vec<u32>], d: usize) -> bool {
    // A common zero at t = infinity means every form drops degree.
    if basis.iter().all(|s| s[d] == 0) {
        return false;
    }
    let g = basis.iter().fold(Vec::new(), |g, s| poly_gcd(f, &g, s));
    g.len() == 1
}

/// Every affine point of `y^2 = x^3 + a x + b` over `F_p`, sorted by `x`.
pub fn affine_points(f: PrimeField, w: Weierstrass) -> Vec<Param> {
    let mut out = Vec::new();
    for x in 0..f.modulus() {
        let v = w.rhs(f, x);
        if let Some(y) = f.sqrt(v) {
            out.push(Param::Affine(x, y));
            if y != 0 {
                out.push(Param::Affine(x, f.neg(y)));
            }
        }
    }
    out
}

/// Normalized form of a projective point: first nonzero coordinate is 1.
fn projective_key(f: PrimeField, v: &[u32]) -> Option<Vec<u32>> {
    let lead = *v.iter().find(|&&c| c != 0)?;
    let inv = f.inv(lead).unwrap();
    Some(v.iter().map(|&c| f.mul(c, inv)).collect())
}

/// Draws `n` points with pairwise distinct images, deterministically from `seed`.
pub fn sample_points(model: &CurveModel, n: usize, seed: u64) -> Result<PointSample> {
    if n == 0 {
        return Err(Error::InvalidParams("a sample needs at least one point".into()));
    }
    let available = model.usable_parameters();
    if n as u64 > available {
        return Err(Error::NotEnoughPoints { requested: n, available: available as usize });
    }
    let f = model.field;
    let mut rng = stream_rng(seed, STREAM_POINTS);
    let mut params = Vec::with_capacity(n);
    let mut points = Vec::with_capacity(n);
    let mut seen_images = HashSet::new();
    let mut accept = |param: Param, params: &mut Vec<Param>, points: &mut Vec<Vec<u32>>| {
        let pt = model.point_at(param);
        if let Some(key) = projective_key(f, &pt) {
            if seen_images.insert(key) {
                params.push(param);
                points.push(pt);
            }
        }
    };

    if 2 * n as u64 > available {
        // Dense request: enumerate every parameter and shuffle.
        let mut all: Vec<Param> = match model.weierstrass {
            Some(w) => affine_points(f, w),
            None => (0..f.modulus()).map(Param::T).collect(),
        };
        all.shuffle(&mut rng);
        for param in all {
            if params.len() == n {
                break;
            }
            accept(param, &mut params, &mut points);
        }
    } else {
        let mut tried = HashSet::new();
        // Rejection sampling; the attempt cap only trips on maps that collapse
        // most of the curve, which the dense branch would also report.
        let cap = 64 * n + 1024;
        for _ in 0..cap {
            if params.len() == n {
                break;
            }
            let param = match model.weierstrass {
                Some(w) => {
                    let x = rng.gen_range(0..f.modulus());
                    let Some(y) = f.sqrt(w.rhs(f, x)) else { continue };
                    let y = if rng.gen::<bool>() { f.neg(y) } else { y };
                    Param::Affine(x, y)
                }
                None => Param::T(rng.gen_range(0..f.modulus())),
            };
            if tried.insert(param) {
                accept(param, &mut params, &mut points);
            }
        }
    }
    if params.len() < n {
        return Err(Error::NotEnoughPoints { requested: n, available: params.len() });
    }
    Ok(PointSample { field: f, r: model.r, points, params, model: Some(Arc::new(model.clone())) })
}

impl PointSample {
    /// Sample at explicitly chosen parameters.
    pub fn from_parameters(model: &CurveModel, params: Vec<Param>) -> Result<PointSample> {
        let f = model.field;
        let mut seen = HashSet::new();
        let mut points = Vec::with_capacity(params.len());
        for &param in &params {
            match (model.kind, param, model.weierstrass) {
                (CurveKind::Elliptic, Param::Affine(x, y), Some(w)) => {
                    if x >= f.modulus() || y >= f.modulus() || f.mul(y, y) != w.rhs(f, x) {
                        return Err(Error::InvalidParams(format!("({x}, {y}) is not on the curve")));
                    }
                }
                (CurveKind::Elliptic, _, _) | (_, Param::Affine(..), _) => {
                    return Err(Error::InvalidParams(format!("parameter {param:?} does not match a {} model", model.kind.as_str())));
                }
                (_, Param::T(t), _) if t >= f.modulus() => {
                    return Err(Error::InvalidParams(format!("parameter {t} is not reduced")));
                }
                _ => {}
            }
            let pt = model.point_at(param);
            let key = projective_key(f, &pt).ok_or_else(|| Error::InvalidParams(format!("{param:?} is a base point")))?;
            if !seen.insert(key) {
                return Err(Error::InvalidParams(format!("{param:?} repeats an image point")));
            }
            points.push(pt);
        }
        Ok(PointSample { field: f, r: model.r, points, params, model: Some(Arc::new(model.clone())) })
    }

    /// Points given directly by coordinates, without a curve.
    pub fn from_points(field: PrimeField, r: usize, points: Vec<Vec<u32>>) -> Result<PointSample> {
        if r > MAX_R {
            return Err(Error::InvalidParams(format!("r = {r} exceeds {MAX_R}")));
        }
        let mut seen = HashSet::new();
        let points: Vec<Vec<u32>> = points
            .into_iter()
            .map(|v| v.into_iter().map(|c| c % field.modulus()).collect::<Vec<u32>>())
            .collect();
        for v in &points {
            if v.len() != r + 1 {
                return Err(Error::InvalidParams(format!("point {v:?} is not in P^{r}")));
            }
            let key = projective_key(field, v).ok_or_else(|| Error::InvalidParams("zero vector is not a point".into()))?;
            if !seen.insert(key) {
                return Err(Error::InvalidParams(format!("repeated point {v:?}")));
            }
        }
        Ok(PointSample { field, r, points, params: Vec::new(), model: None })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Same points with representative `i` multiplied by `scalars[i]`.
    pub fn rescaled(&self, scalars: &[u32]) -> PointSample {
        let f = self.field;
        let points = self
            .points
            .iter()
            .zip(scalars)
            .map(|(v, &s)| {
                assert!(s % f.modulus() != 0, "rescaling by zero");
                v.iter().map(|&c| f.mul(c, s)).collect()
            })
            .collect();
        PointSample { points, ..self.clone() }
    }

    /// Points reordered so that new point `k` is old point `perm[k]`.
    pub fn permuted(&self, perm: &[usize]) -> PointSample {
        let points = perm.iter().map(|&i| self.points[i].clone()).collect();
        let params = if self.params.is_empty() { Vec::new() } else { perm.iter().map(|&i| self.params[i]).collect() };
        PointSample { points, params, ..self.clone() }
    }

    /// The first `n` points.
    pub fn prefix(&self, n: usize) -> PointSample {
        let params = self.params.iter().take(n).copied().collect();
        PointSample { points: self.points[..n].to_vec(), params, ..self.clone() }
    }

    /// Coordinate `k` of every point, as a diagonal multiplier on `k^γ`.
    pub fn coordinate(&self, k: usize) -> Vec<u32> {
        self.points.iter().map(|v| v[k]).collect()
    }

    /// Ratio between the stored representative and the chart value of the
    /// model's coordinate sections at point `i`.
    fn chart_scale(&self, model: &CurveModel, i: usize) -> u32 {
        let f = self.field;
        let chart = model.point_at(self.params[i]);
        let k = chart.iter().position(|&c| c != 0).expect("sample points are nonzero");
        f.mul(self.points[i][k], f.inv(chart[k]).unwrap())
    }
}

/// Exponent vectors of degree-`deg` monomials in `nvars` variables, in
/// descending lexicographic order (`x_0^deg` first, `x_{n-1}^deg` last).
pub fn monomials(nvars: usize, deg: usize) -> Vec<Vec<u32>> {
    fn rec(nvars: usize, deg: usize, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if nvars == 1 {
            prefix.push(deg as u32);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=deg).rev() {
            prefix.push(e as u32);
            rec(nvars - 1, deg - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if nvars > 0 {
        rec(nvars, deg, &mut Vec::new(), &mut out);
    }
    out
}

/// Rows are points, columns are degree-`j` monomials in the order of
/// [`monomials`]; entries are monomials evaluated at the stored
/// representatives.
pub fn evaluation_matrix(sample: &PointSample, j: usize) -> Matrix {
    let f = sample.field;
    let monos = monomials(sample.r + 1, j);
    let mut data = Vec::with_capacity(sample.len() * monos.len());
    for v in &sample.points {
        let powers: Vec<Vec<u32>> = v
            .iter()
            .map(|&c| {
                let mut p = Vec::with_capacity(j + 1);
                let mut acc = 1 % f.modulus();
                for _ in 0..=j {
                    p.push(acc);
                    acc = f.mul(acc, c);
                }
                p
            })
            .collect();
        for m in &monos {
            data.push(m.iter().enumerate().fold(1 % f.modulus(), |acc, (k, &e)| f.mul(acc, powers[k][e as usize])));
        }
    }
    Matrix::new(f, sample.len(), monos.len(), data)
}

/// Pointwise product `x ∘ w`.
pub(crate) fn hadamard(f: PrimeField, x: &[u32], w: &[u32]) -> Vec<u32> {
    x.iter().zip(w).map(|(&a, &b)| f.mul(a, b)).collect()
}

/// `W_0, ..., W_{j_max}` where `W_j ⊆ k^γ` is the image of degree-`j` forms.
///
/// Uses `W_{j+1} = Σ_k x_k ∘ W_j`, which is the span of the evaluated
/// monomials without enumerating them.
pub fn graded_pieces(sample: &PointSample, j_max: usize) -> Vec<Subspace> {
    let f = sample.field;
    let n = sample.len();
    let coords: Vec<Vec<u32>> = (0..=sample.r).map(|k| sample.coordinate(k)).collect();
    let mut out = Vec::with_capacity(j_max + 1);
    out.push(Subspace::span(f, n, &[vec![1 % f.modulus(); n]]));
    for _ in 0..j_max {
        let prev = out.last().unwrap();
        if prev.is_full() {
            out.push(prev.clone());
            continue;
        }
        let mut gens = Vec::with_capacity(coords.len() * prev.dim());
        for x in &coords {
            for w in prev.basis().row_iter() {
                gens.push(hadamard(f, x, w));
            }
        }
        out.push(Subspace::span(f, n, &gens));
    }
    out
}

/// `W_j`, the homogeneous piece of degree `j` of the coordinate ring of the
/// sample, realized inside `k^γ`.
pub fn graded_piece(sample: &PointSample, j: usize) -> Subspace {
    graded_pieces(sample, j).pop().unwrap()
}

/// `H^0(L^{m+j}(-D))` restricted to the sample points outside `D`.
///
/// Sections come from the complete space `H^0(L^{m+j})`, evaluated in the
/// same trivialization as the point representatives. Requires more than
/// `d (m + j)` points outside `D` so that restriction is injective.
pub fn vanishing_subspace(sample: &PointSample, j: usize, twist: &TwistSpec) -> Result<Subspace> {
    let model = sample
        .model
        .as_ref()
        .ok_or_else(|| Error::InvalidParams("vanishing subspaces need a curve model".into()))?;
    let f = sample.field;
    let n = sample.len();
    let mut in_d = vec![false; n];
    for &i in &twist.vanishing_indices {
        if i >= n {
            return Err(Error::InvalidParams(format!("vanishing index {i} outside a sample of {n} points")));
        }
        if std::mem::replace(&mut in_d[i], true) {
            return Err(Error::InvalidParams(format!("vanishing index {i} repeated")));
        }
    }
    let k = twist.m + j;
    let rest: Vec<usize> = (0..n).filter(|&i| !in_d[i]).collect();
    let needed = model.d * k;
    if rest.len() <= needed {
        return Err(Error::SampleTooSmall { needed, have: rest.len() });
    }
    let h = model.section_dim(k);
    let scale = |i: usize| f.pow(sample.chart_scale(model, i), k as u64);
    // values[i] lists every basis section of L^k at point i.
    let values: Vec<Vec<u32>> = (0..n)
        .map(|i| {
            let s = scale(i);
            model.section_values(k, sample.params[i]).into_iter().map(|v| f.mul(v, s)).collect()
        })
        .collect();
    let d_rows: Vec<Vec<u32>> = twist.vanishing_indices.iter().map(|&i| values[i].clone()).collect();
    let sections = if d_rows.is_empty() {
        Subspace::full(f, h)
    } else {
        Matrix::from_rows(f, &d_rows).kernel()
    };
    if sections.dim() == 0 {
        return Ok(Subspace::zero(f, rest.len()));
    }
    let restricted: Vec<Vec<u32>> = sections
        .basis()
        .row_iter()
        .map(|c| {
            rest.iter()
                .map(|&i| values[i].iter().zip(c).fold(0, |s, (&v, &ci)| f.add(s, f.mul(v, ci))))
                .collect()
        })
        .collect();
    Ok(Subspace::span(f, rest.len(), &restricted))
}

/// Curve document accepted by the command line.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveSpec {
    pub kind: CurveKind,
    pub r: usize,
    pub d: usize,
    pub prime: u64,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weierstrass: Option<Weierstrass>,
}

fn default_seed() -> u64 {
    crate::rng::DEFAULT_SEED
}

impl CurveSpec {
    pub fn from_json(s: &str) -> Result<CurveSpec> {
        let spec: CurveSpec = serde_json::from_str(s)?;
        spec.validate()?;
        Ok(spec)
    }

    /// Checks everything that does not require drawing randomness.
    pub fn validate(&self) -> Result<()> {
        let field = PrimeField::new(self.prime)?;
        if self.r < 1 || self.d < self.r || self.r > MAX_R {
            return Err(Error::InvalidParams(format!("need d >= r >= 1 and r <= {MAX_R}, got r={}, d={}", self.r, self.d)));
        }
        // Large instances are legal but keep stray documents from asking for
        // absurd section spaces.
        if self.d > 4096 {
            return Err(Error::InvalidParams(format!("degree {} is out of range", self.d)));
        }
        if let Some(w) = self.weierstrass {
            if self.kind != CurveKind::Elliptic {
                return Err(Error::InvalidParams("weierstrass coefficients given for a rational curve".into()));
            }
            if self.prime <= 3 || !(Weierstrass { a: w.a % field.modulus(), b: w.b % field.modulus() }).is_nonsingular(field) {
                return Err(Error::InvalidParams("singular or unsupported Weierstrass equation".into()));
            }
        }
        Ok(())
    }

    pub fn build(&self) -> Result<CurveModel> {
        self.validate()?;
        CurveModel::build(self.kind, self.r, self.d, PrimeField::new(self.prime)?, self.seed, self.weierstrass)
    }
}
