//! Graded Betti numbers as Koszul homology.
//!
//! For a graded module `W = ⊕ W_j` realized inside `k^n` with `V` acting by
//! diagonal multipliers, `b_{i,j}` is the homology at `∧^i V ⊗ W_j` of
//!
//! ```text
//! ∧^{i+1} V ⊗ W_{j-1} → ∧^i V ⊗ W_j → ∧^{i-1} V ⊗ W_{j+1}
//! ```
//!
//! with `d(e_K ⊗ w) = Σ_s (-1)^{s+1} e_{K \ k_s} ⊗ (x_{k_s} ∘ w)`.
//! Wedge bases are `i`-subsets of `0..n` in lexicographic order; the basis of
//! `∧^i V ⊗ W_j` is ordered wedge-major.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::curves::{graded_pieces, hadamard, sample_points, vanishing_subspace, CurveModel, PointSample, TwistSpec};
use crate::exactla::{Matrix, PrimeField, Subspace};
use crate::rng::{derive_seed, STREAM_CURVE_TABLE, STREAM_TWIST};
use crate::{binomial, Error, Result};

/// Largest `r` the engine accepts: the exterior algebra on `r + 1`
/// generators is indexed by `u32` masks with a dense lookup table.
pub const MAX_R: usize = 22;

/// Lexicographically ordered `i`-subsets of `0..n` as bitmasks.
struct WedgeBasis {
    by_degree: Vec<Vec<u32>>,
    index: Vec<usize>,
}

impl WedgeBasis {
    fn new(n: usize) -> Self {
        assert!(n < 24, "exterior algebra too large");
        let mut by_degree = vec![Vec::new(); n + 1];
        let mut index = vec![0; 1 << n];
        fn rec(n: usize, start: usize, mask: u32, left: usize, out: &mut Vec<u32>) {
            if left == 0 {
                out.push(mask);
                return;
            }
            for k in start..n {
                rec(n, k + 1, mask | (1 << k), left - 1, out);
            }
        }
        for (i, list) in by_degree.iter_mut().enumerate() {
            rec(n, 0, 0, i, list);
            for (pos, &m) in list.iter().enumerate() {
                index[m as usize] = pos;
            }
        }
        WedgeBasis { by_degree, index }
    }
}

#[derive(Clone, Debug)]
pub struct KoszulInstance {
    field: PrimeField,
    ambient: usize,
    pieces: BTreeMap<usize, Subspace>,
    multipliers: Vec<Vec<u32>>,
}

impl KoszulInstance {
    /// Checks that every multiplier maps `pieces[j]` into `pieces[j + 1]`
    /// whenever both are present.
    pub fn new(field: PrimeField, multipliers: Vec<Vec<u32>>, pieces: BTreeMap<usize, Subspace>) -> Result<Self> {
        let ambient = multipliers
            .first()
            .map(Vec::len)
            .ok_or_else(|| Error::InvalidParams("a Koszul instance needs at least one multiplier".into()))?;
        if multipliers.len() > MAX_R + 1 {
            return Err(Error::InvalidParams(format!("at most {} multipliers, got {}", MAX_R + 1, multipliers.len())));
        }
        if multipliers.iter().any(|x| x.len() != ambient) {
            return Err(Error::InvalidParams("multipliers have different lengths".into()));
        }
        for (&j, w) in &pieces {
            if w.ambient_dim() != ambient {
                return Err(Error::InvalidParams(format!("piece {j} lives in the wrong ambient space")));
            }
            let Some(next) = pieces.get(&(j + 1)) else { continue };
            if next.is_full() {
                continue;
            }
            for x in &multipliers {
                for v in w.basis().row_iter() {
                    if !next.contains(&hadamard(field, x, v)) {
                        return Err(Error::InvalidParams(format!("a multiplier maps piece {j} outside piece {}", j + 1)));
                    }
                }
            }
        }
        Ok(KoszulInstance { field, ambient, pieces, multipliers })
    }

    /// Coordinate ring of a point sample, pieces `0..=top`.
    pub fn from_sample(sample: &PointSample, top: usize) -> Self {
        let pieces = graded_pieces(sample, top).into_iter().enumerate().collect();
        let multipliers = (0..=sample.r).map(|k| sample.coordinate(k)).collect();
        // The pieces are built as spans of multiplier images, so the
        // compatibility check is redundant here.
        KoszulInstance { field: sample.field, ambient: sample.len(), pieces, multipliers }
    }

    pub fn v_dim(&self) -> usize {
        self.multipliers.len()
    }

    pub fn piece(&self, j: usize) -> Result<&Subspace> {
        self.pieces.get(&j).ok_or(Error::MissingPiece(j))
    }

    fn piece_dim(&self, j: isize) -> Result<usize> {
        if j < 0 {
            Ok(0)
        } else {
            Ok(self.piece(j as usize)?.dim())
        }
    }

    /// Rows are images of the source basis vectors.
    fn image_rows(&self, wedge: &WedgeBasis, i: usize, j: usize) -> Result<Matrix> {
        let n = self.v_dim();
        let src = self.piece(j)?;
        let tgt = self.piece(j + 1)?;
        let (a, b) = (src.dim(), tgt.dim());
        let src_count = wedge.by_degree.get(i).map_or(0, Vec::len);
        let tgt_count = if i == 0 || i > n { 0 } else { wedge.by_degree[i - 1].len() };
        let rows = src_count * a;
        let cols = tgt_count * b;
        let mut data = vec![0u32; rows * cols];
        if rows == 0 || cols == 0 {
            return Ok(Matrix::new(self.field, rows, cols, data));
        }
        let f = self.field;
        let piv = tgt.pivots();
        // products[k][t] = coordinates of x_k ∘ w_t in the target basis.
        let products: Vec<Vec<Vec<u32>>> = self
            .multipliers
            .iter()
            .map(|x| src.basis().row_iter().map(|w| piv.iter().map(|&c| f.mul(x[c], w[c])).collect()).collect())
            .collect();
        for (ki, &mask) in wedge.by_degree[i].iter().enumerate() {
            let mut s = 0;
            for k in 0..n {
                if mask & (1 << k) == 0 {
                    continue;
                }
                let negative = s % 2 == 1;
                s += 1;
                let target = wedge.index[(mask & !(1 << k)) as usize];
                for t in 0..a {
                    let row = ki * a + t;
                    let dst = &mut data[row * cols + target * b..row * cols + (target + 1) * b];
                    for (d, &v) in dst.iter_mut().zip(&products[k][t]) {
                        *d = if negative { f.neg(v) } else { v };
                    }
                }
            }
        }
        Ok(Matrix::new(f, rows, cols, data))
    }

    fn differential_rank(&self, wedge: &WedgeBasis, i: usize, j: isize) -> Result<usize> {
        let n = self.v_dim();
        if j < 0 || i == 0 || i > n {
            return Ok(0);
        }
        let j = j as usize;
        let (src, tgt) = (self.piece(j)?, self.piece(j + 1)?);
        if src.is_full() && tgt.is_full() {
            // Block-diagonal by coordinate: at each position the map is
            // contraction with the vector (x_0, ..., x_r), of rank C(n-1, i-1)
            // unless that vector vanishes.
            let live = (0..self.ambient).filter(|&c| self.multipliers.iter().any(|x| x[c] != 0)).count();
            return Ok(live * binomial(n - 1, i - 1) as usize);
        }
        Ok(self.image_rows(wedge, i, j)?.rank())
    }
}

/// Matrix of `d_{i,j}` acting on column vectors of source coordinates.
pub fn koszul_differential(inst: &KoszulInstance, i: usize, j: usize) -> Result<Matrix> {
    let wedge = WedgeBasis::new(inst.v_dim());
    Ok(inst.image_rows(&wedge, i, j)?.transpose())
}

/// `dim ker d_{i,j} - rank d_{i+1,j-1}`.
pub fn betti_number(inst: &KoszulInstance, i: usize, j: usize) -> Result<usize> {
    let wedge = WedgeBasis::new(inst.v_dim());
    let n = inst.v_dim();
    if i > n {
        return Ok(0);
    }
    let chain = binomial(n, i) as usize * inst.piece_dim(j as isize)?;
    let out = inst.differential_rank(&wedge, i, j as isize)?;
    let incoming = inst.differential_rank(&wedge, i + 1, j as isize - 1)?;
    Ok(chain - out - incoming)
}

/// Provenance of a Betti table.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BettiMeta {
    pub g: Option<usize>,
    pub d: Option<usize>,
    pub gamma: usize,
    pub prime: u32,
    pub seed: Option<u64>,
}

/// `b_{i,j}` for `0 <= i <= r + 1`, rows `0..=j_max`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BettiTable {
    pub r: usize,
    pub meta: BettiMeta,
    rows: BTreeMap<usize, Vec<u64>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BettiRowDoc {
    j: usize,
    b: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BettiTableDoc {
    r: usize,
    meta: BettiMeta,
    rows: Vec<BettiRowDoc>,
}

impl Serialize for BettiTable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        BettiTableDoc {
            r: self.r,
            meta: self.meta.clone(),
            rows: self.rows.iter().map(|(&j, b)| BettiRowDoc { j, b: b.clone() }).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for BettiTable {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let doc = BettiTableDoc::deserialize(d)?;
        if doc.r > MAX_R {
            return Err(serde::de::Error::custom(format!("r = {} exceeds {MAX_R}", doc.r)));
        }
        let mut t = BettiTable::new(doc.r, doc.meta);
        for row in doc.rows {
            t.set_row(row.j, row.b).map_err(serde::de::Error::custom)?;
        }
        t.validate().map_err(serde::de::Error::custom)?;
        Ok(t)
    }
}

impl BettiTable {
    pub fn new(r: usize, meta: BettiMeta) -> Self {
        BettiTable { r, meta, rows: BTreeMap::new() }
    }

    pub fn set_row(&mut self, j: usize, b: Vec<u64>) -> Result<()> {
        if b.len() != self.r + 2 {
            return Err(Error::Decode(format!("row {j} has {} entries, expected {}", b.len(), self.r + 2)));
        }
        if self.rows.insert(j, b).is_some() {
            return Err(Error::Decode(format!("row {j} appears twice")));
        }
        Ok(())
    }

    /// `b_{i,j}`, zero outside the stored range.
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.rows.get(&j).and_then(|b| b.get(i)).copied().unwrap_or(0)
    }

    pub fn row(&self, j: usize) -> Vec<u64> {
        self.rows.get(&j).cloned().unwrap_or_else(|| vec![0; self.r + 2])
    }

    pub fn rows(&self) -> impl Iterator<Item = (usize, &[u64])> {
        self.rows.iter().map(|(&j, b)| (j, b.as_slice()))
    }

    pub fn j_max(&self) -> Option<usize> {
        self.rows.keys().next_back().copied()
    }

    pub fn last_nonzero_row(&self) -> Option<usize> {
        self.rows.iter().rev().find(|(_, b)| b.iter().any(|&x| x != 0)).map(|(&j, _)| j)
    }

    /// Entrywise comparison on the union of stored rows.
    pub fn diff(&self, other: &BettiTable) -> Vec<(usize, usize, u64, u64)> {
        let js: std::collections::BTreeSet<usize> = self.rows.keys().chain(other.rows.keys()).copied().collect();
        let mut out = Vec::new();
        for j in js {
            for i in 0..self.r.max(other.r) + 2 {
                let (a, b) = (self.get(i, j), other.get(i, j));
                if a != b {
                    out.push((i, j, a, b));
                }
            }
        }
        out
    }

    /// Structural checks: row widths and the cyclic-module row 0.
    pub fn validate(&self) -> Result<()> {
        for (&j, b) in &self.rows {
            if b.len() != self.r + 2 {
                return Err(Error::Decode(format!("row {j} has the wrong width")));
            }
            let expected = u64::from(j == 0);
            if b[0] != expected {
                return Err(Error::Decode(format!("b_0,{j} must be {expected}")));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("tables always serialize")
    }

    pub fn from_json(s: &str) -> Result<BettiTable> {
        Ok(serde_json::from_str(s)?)
    }

    /// Row `j` down, column `i` across.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("j");
        for i in 0..self.r + 2 {
            write!(out, ",{i}").unwrap();
        }
        out.push('\n');
        for (&j, b) in &self.rows {
            write!(out, "{j}").unwrap();
            for x in b {
                write!(out, ",{x}").unwrap();
            }
            out.push('\n');
        }
        out
    }
}

/// All `b_{i,j}` with `j <= j_max`; the instance must hold pieces up to
/// `j_max + 1`.
pub fn instance_betti_table(inst: &KoszulInstance, j_max: usize, r: usize, meta: BettiMeta) -> Result<BettiTable> {
    let n = inst.v_dim();
    let wedge = WedgeBasis::new(n);
    // rank[i][j] = rank d_{i,j}
    let mut rank = vec![vec![0usize; j_max + 1]; n + 2];
    for (i, rank_i) in rank.iter_mut().enumerate().take(n + 1).skip(1) {
        for (j, slot) in rank_i.iter_mut().enumerate() {
            *slot = inst.differential_rank(&wedge, i, j as isize)?;
        }
    }
    let mut table = BettiTable::new(r, meta);
    for j in 0..=j_max {
        let dim = inst.piece(j)?.dim();
        let mut b = vec![0u64; r + 2];
        for (i, slot) in b.iter_mut().enumerate().take(n + 1) {
            let incoming = if j == 0 { 0 } else { rank[i + 1][j - 1] };
            *slot = (binomial(n, i) as usize * dim - rank[i][j] - incoming) as u64;
        }
        table.set_row(j, b)?;
    }
    Ok(table)
}

fn sample_meta(sample: &PointSample, seed: Option<u64>) -> BettiMeta {
    BettiMeta {
        g: sample.model.as_ref().map(|m| m.genus()),
        d: sample.model.as_ref().map(|m| m.d),
        gamma: sample.len(),
        prime: sample.field.modulus(),
        seed,
    }
}

/// Betti table of the points of `sample`, rows `0..=j_max`.
pub fn betti_table(sample: &PointSample, j_max: usize) -> Result<BettiTable> {
    if j_max < 2 {
        return Err(Error::InvalidParams(format!("j_max must be at least 2, got {j_max}")));
    }
    let inst = KoszulInstance::from_sample(sample, j_max + 1);
    instance_betti_table(&inst, j_max, sample.r, sample_meta(sample, None))
}

/// Betti table with `seed` recorded in the metadata.
pub(crate) fn betti_table_seeded(sample: &PointSample, j_max: usize, seed: u64) -> Result<BettiTable> {
    let mut t = betti_table(sample, j_max)?;
    t.meta.seed = Some(seed);
    Ok(t)
}

/// Points per sample needed so that degree-`j` pieces equal `S(C)_j` for
/// every `j <= j_max + 1`.
pub fn curve_sample_size(model: &CurveModel, j_max: usize) -> usize {
    model.d * (j_max + 1) + 1
}

/// Betti table of the homogeneous coordinate ring of the curve.
pub fn curve_betti_table(model: &CurveModel, j_max: usize) -> Result<BettiTable> {
    if j_max < 2 {
        return Err(Error::InvalidParams(format!("j_max must be at least 2, got {j_max}")));
    }
    let n = curve_sample_size(model, j_max);
    let sample = sample_points(model, n, derive_seed(model.seed, STREAM_CURVE_TABLE))?;
    let inst = KoszulInstance::from_sample(&sample, j_max + 1);
    let meta = BettiMeta { g: Some(model.genus()), d: Some(model.d), gamma: 0, prime: model.field.modulus(), seed: Some(model.seed) };
    instance_betti_table(&inst, j_max, model.r, meta)
}

/// Castelnuovo–Mumford regularity of the ideal of the curve.
///
/// `reg = min m` with `S(C)_{m-1} = H^0(L^{m-1})` and `H^1(L^{m-2}) = 0`;
/// the second condition means `m >= 2` for rational curves of degree at
/// least 2 and `m >= 3` for elliptic curves.
pub fn curve_regularity(model: &CurveModel) -> Result<usize> {
    let start = match (model.genus(), model.d) {
        (0, 1) => 1,
        (0, _) => 2,
        _ => 3,
    };
    // reg <= d - r + 2 for nondegenerate irreducible curves; keep a margin
    // so a violation is reported rather than truncated.
    let top = (model.d + 3).saturating_sub(model.r).max(start);
    let sample = sample_points(model, model.d * top + 1, derive_seed(model.seed, STREAM_CURVE_TABLE))?;
    let pieces = graded_pieces(&sample, top);
    (start..=top + 1)
        .find(|&m| pieces[m - 1].dim() == model.section_dim(m - 1))
        .ok_or_else(|| Error::InstanceOutOfRange(format!("no regularity found up to {}", top + 1)))
}

/// `dim K_{i,1}(C; η, V)` for `η = L^m(-D)`, computed on a fresh sample of
/// `sample_size` points whose first entries realize `D`.
pub fn twisted_koszul_dim(model: &CurveModel, twist: &TwistSpec, i: usize, sample_size: usize, seed: u64) -> Result<usize> {
    let needed = twist.vanishing_indices.len() + model.d * (twist.m + 2) + 1;
    if sample_size < needed {
        return Err(Error::SampleTooSmall { needed: needed - 1 - twist.vanishing_indices.len(), have: sample_size.saturating_sub(twist.vanishing_indices.len()) });
    }
    let sample = sample_points(model, sample_size, derive_seed(seed, STREAM_TWIST))?;
    let mut in_d = vec![false; sample_size];
    for &k in &twist.vanishing_indices {
        if k < sample_size {
            in_d[k] = true;
        }
    }
    let rest: Vec<usize> = (0..sample_size).filter(|&k| !in_d[k]).collect();
    let mut pieces = BTreeMap::new();
    for j in 0..3 {
        pieces.insert(j, vanishing_subspace(&sample, j, twist)?);
    }
    let multipliers = (0..=model.r).map(|k| rest.iter().map(|&c| sample.points[c][k]).collect()).collect();
    let inst = KoszulInstance::new(model.field, multipliers, pieces)?;
    betti_number(&inst, i, 1)
}
