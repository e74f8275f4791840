//! Predicted Betti tables of general points on a curve, and the trial logic
//! that compares them with computed tables.
//!
//! For `γ` general points on a curve of genus `g` and degree `d` in `P^r`,
//! with `u = 1 + ⌊(γ+g-1)/d⌋` and `ρ = (γ+g-1) mod d`, the table agrees with
//! the curve's table in rows `j <= u-2`, vanishes in rows `j >= u+1`, and
//! rows `u-1`, `u` are predicted by
//!
//! ```text
//! b_{i,u}   = 0                                   if i d <= r (d - ρ)
//!           = d C(r-1,i-1) + C(r,i) (ρ - d)       otherwise
//! b_{i+1,u-1} - b_{i,u} = C(r,i) (d u - γ + 1 - g) - d C(r-1,i-1)
//! ```
//!
//! Betti numbers are upper semicontinuous, so a single sample whose table
//! equals the prediction certifies the generic table; a sample can only
//! exceed it.

use std::collections::BTreeMap;
use std::ops::RangeInclusive;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::curves::{sample_points, CurveModel, TwistSpec};
use crate::exactla::{next_prime, PrimeField};
use crate::koszul::{betti_table_seeded, curve_betti_table, curve_regularity, twisted_koszul_dim, BettiMeta, BettiTable};
use crate::{binomial_i64, Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MrcInstance {
    pub g: usize,
    pub r: usize,
    pub d: usize,
    pub gamma: usize,
    pub u: usize,
    /// `{(γ+g-1)/d}`.
    pub phi: Ratio<i64>,
}

impl MrcInstance {
    /// Requires `γ + g - 1 >= d`, i.e. `u >= 2`.
    pub fn new(g: usize, r: usize, d: usize, gamma: usize) -> Result<Self> {
        if r < 1 || d < 1 {
            return Err(Error::InvalidParams(format!("need r, d >= 1, got r={r}, d={d}")));
        }
        let n = gamma + g;
        if n < 1 + d {
            return Err(Error::InstanceOutOfRange(format!("γ + g - 1 = {} is below d = {d}", n as i64 - 1)));
        }
        let u = 1 + (n - 1) / d;
        let phi = Ratio::new(((n - 1) % d) as i64, d as i64);
        Ok(MrcInstance { g, r, d, gamma, u, phi })
    }

    /// `d · phi = (γ+g-1) mod d`.
    pub fn rho(&self) -> i64 {
        ((self.gamma + self.g - 1) % self.d) as i64
    }

    /// `C(r,i)(-id/r + du - γ + 1 - g)`, always an integer.
    pub fn chi(&self, i: usize) -> i64 {
        let (r, d, i) = (self.r as i64, self.d as i64, i as i64);
        binomial_i64(r, i) * (d * self.u as i64 - self.gamma as i64 + 1 - self.g as i64) - d * binomial_i64(r - 1, i - 1)
    }
}

/// `b_{i,u}` for `i = 0..=r`.
pub fn predict_row_u(inst: &MrcInstance) -> Vec<u64> {
    let (r, d, rho) = (inst.r as i64, inst.d as i64, inst.rho());
    (0..=r)
        .map(|i| {
            if i * d <= r * (d - rho) {
                0
            } else {
                let v = d * binomial_i64(r - 1, i - 1) + binomial_i64(r, i) * (rho - d);
                debug_assert!(v > 0);
                v as u64
            }
        })
        .collect()
}

/// `b_{i+1,u-1}` for `i = 0..=r`.
pub fn predict_row_u_minus_1(inst: &MrcInstance) -> Result<Vec<u64>> {
    let row_u = predict_row_u(inst);
    (0..=inst.r)
        .map(|i| {
            let v = row_u[i] as i64 + inst.chi(i);
            if v < 0 {
                Err(Error::InstanceOutOfRange(format!(
                    "predicted b_{},{} = {v} < 0: γ = {} is below the regularity floor",
                    i + 1,
                    inst.u - 1,
                    inst.gamma
                )))
            } else {
                Ok(v as u64)
            }
        })
        .collect()
}

/// Predicted table on rows `0..=u+1`. Rows `j <= u-2` come from
/// `curve_rows`, which must either reach `u-2` or end in a zero row.
pub fn predict_table(inst: &MrcInstance, curve_rows: &BettiTable) -> Result<BettiTable> {
    if curve_rows.r != inst.r {
        return Err(Error::InvalidParams(format!("curve table is in P^{}, instance in P^{}", curve_rows.r, inst.r)));
    }
    let top = curve_rows.j_max().unwrap_or(0);
    let certified = curve_rows.last_nonzero_row().is_some_and(|j| j < top);
    if top + 2 < inst.u && !certified {
        return Err(Error::InvalidParams(format!("curve table stops at row {top} without reaching row {}", inst.u - 2)));
    }
    let row_u = predict_row_u(inst);
    let row_u1 = predict_row_u_minus_1(inst)?;
    let width = inst.r + 2;
    let mut t = BettiTable::new(
        inst.r,
        BettiMeta { g: Some(inst.g), d: Some(inst.d), gamma: inst.gamma, prime: curve_rows.meta.prime, seed: None },
    );
    for j in 0..=inst.u + 1 {
        let row = if j + 2 <= inst.u {
            curve_rows.row(j)
        } else if j + 1 == inst.u {
            let mut b = vec![0; width];
            b[1..].copy_from_slice(&row_u1);
            b[0] = u64::from(j == 0);
            b
        } else if j == inst.u {
            let mut b = row_u.clone();
            b.push(0);
            b
        } else {
            vec![0; width]
        };
        t.set_row(j, row)?;
    }
    Ok(t)
}

/// `b_{i,u} · b_{i+1,u-1} = 0` for every `i`.
pub fn product_condition(table: &BettiTable, u: usize) -> bool {
    (0..=table.r).all(|i| table.get(i, u) == 0 || table.get(i + 1, u - 1) == 0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Confirmed,
    Violated,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub seed: u64,
    pub prime: u32,
    #[serde(rename = "match")]
    pub matched: bool,
    /// Wedge index, for Raynaud trials.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub i: Option<usize>,
    /// Computed Koszul dimension, for Raynaud trials.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryDiff {
    pub i: usize,
    pub j: usize,
    pub predicted: u64,
    pub computed: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub status: Status,
    pub trials: Vec<TrialRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub predicted: Option<BettiTable>,
    /// The matching table when confirmed, otherwise the last one computed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub computed: Option<BettiTable>,
    /// Entry differences of the reported computed table.
    pub detail: Vec<EntryDiff>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub product_condition: Option<bool>,
}

/// How many samples to draw and where.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TrialPolicy {
    pub trials: usize,
    /// Trial `t` samples with seed `seed + t`.
    pub seed: u64,
    /// Trial `t > 0` rebuilds the model over `next_prime(2 p)`.
    pub escalate_prime: bool,
}

impl Default for TrialPolicy {
    fn default() -> Self {
        TrialPolicy { trials: 3, seed: crate::rng::DEFAULT_SEED, escalate_prime: true }
    }
}

/// Models used by successive trials, rebuilt lazily on prime escalation.
struct ModelLadder<'a> {
    base: &'a CurveModel,
    escalate: bool,
    models: Vec<CurveModel>,
}

impl<'a> ModelLadder<'a> {
    fn new(base: &'a CurveModel, escalate: bool) -> Self {
        ModelLadder { base, escalate, models: vec![base.clone()] }
    }

    fn index(&self, trial: usize) -> usize {
        if self.escalate {
            trial
        } else {
            0
        }
    }

    fn get(&mut self, trial: usize) -> Result<&CurveModel> {
        let idx = self.index(trial);
        while self.models.len() <= idx {
            let prev = self.models.last().unwrap();
            let p = next_prime(2 * prev.field.modulus() as u64);
            if p >= 1 << 31 {
                return Err(Error::InvalidParams("prime escalation left the word-size range".into()));
            }
            let field = PrimeField::new(p)?;
            let b = self.base;
            let next = CurveModel::build(b.kind, b.r, b.d, field, b.seed, b.weierstrass)
                .or_else(|_| CurveModel::build(b.kind, b.r, b.d, field, b.seed, None))?;
            self.models.push(next);
        }
        Ok(&self.models[idx])
    }
}

/// Outcome of comparing one computed table with its prediction.
pub struct Assessment {
    pub computed: BettiTable,
    pub diffs: Vec<EntryDiff>,
}

impl Assessment {
    pub fn matched(&self) -> bool {
        self.diffs.is_empty()
    }

    /// Some entry exceeds the prediction and none falls below it.
    pub fn exceeds(&self) -> bool {
        !self.diffs.is_empty() && self.diffs.iter().all(|e| e.computed > e.predicted)
    }
}

pub fn assess(predicted: &BettiTable, computed: BettiTable) -> Assessment {
    let diffs = predicted
        .diff(&computed)
        .into_iter()
        .map(|(i, j, p, c)| EntryDiff { i, j, predicted: p, computed: c })
        .collect();
    Assessment { computed, diffs }
}

/// Curve data shared by every trial over one model.
pub struct CurveContext {
    pub regularity: usize,
    pub table: BettiTable,
}

impl CurveContext {
    pub fn new(model: &CurveModel) -> Result<Self> {
        let reg = curve_regularity(model)?;
        let table = curve_betti_table(model, reg.max(2))?;
        let floor = table.last_nonzero_row().map_or(1, |j| j + 1);
        if floor != reg {
            return Err(Error::InstanceOutOfRange(format!(
                "curve table ends at row {} but the Hilbert function gives regularity {reg}",
                floor - 1
            )));
        }
        Ok(CurveContext { regularity: reg, table })
    }

    /// Checks `γ >= P_C(reg)` and builds the instance.
    pub fn instance(&self, model: &CurveModel, gamma: usize) -> Result<MrcInstance> {
        let floor = model.hilbert_polynomial(self.regularity);
        if (gamma as i64) < floor {
            return Err(Error::InstanceOutOfRange(format!("γ = {gamma} is below P_C(reg) = {floor}")));
        }
        MrcInstance::new(model.genus(), model.r, model.d, gamma)
    }
}

/// Computes the table of one sample and compares it with the prediction.
pub fn assess_sample(ctx: &CurveContext, model: &CurveModel, gamma: usize, seed: u64) -> Result<(MrcInstance, BettiTable, Assessment)> {
    let inst = ctx.instance(model, gamma)?;
    let mut predicted = predict_table(&inst, &ctx.table)?;
    predicted.meta.seed = Some(seed);
    let sample = sample_points(model, gamma, seed)?;
    let computed = betti_table_seeded(&sample, inst.u + 1, seed)?;
    let a = assess(&predicted, computed);
    Ok((inst, predicted, a))
}

/// Folds per-trial assessments into a verdict.
pub fn fold_verdict(u: usize, predicted: BettiTable, outcomes: Vec<(TrialRecord, Assessment)>) -> Verdict {
    let status = if outcomes.iter().any(|(_, a)| a.matched()) {
        Status::Confirmed
    } else if !outcomes.is_empty() && outcomes.iter().all(|(_, a)| a.exceeds()) {
        Status::Violated
    } else {
        Status::Inconclusive
    };
    let trials = outcomes.iter().map(|(t, _)| t.clone()).collect();
    let reported = outcomes.into_iter().rev().find(|(_, a)| a.matched() || status != Status::Confirmed).map(|(_, a)| a);
    let (computed, detail, product) = match reported {
        Some(a) => {
            let p = product_condition(&a.computed, u);
            (Some(a.computed), a.diffs, Some(p))
        }
        None => (None, Vec::new(), None),
    };
    Verdict { status, trials, predicted: Some(predicted), computed, detail, product_condition: product }
}

/// Samples `γ` points per trial until one reproduces the predicted table.
pub fn verify_mrc(model: &CurveModel, gamma: usize, policy: &TrialPolicy) -> Result<Verdict> {
    if model.genus() == 1 && model.r < 3 {
        return Err(Error::InvalidParams("genus-1 verification needs r >= 3".into()));
    }
    let mut ladder = ModelLadder::new(model, policy.escalate_prime);
    let mut contexts: BTreeMap<usize, CurveContext> = BTreeMap::new();
    let mut outcomes = Vec::new();
    let mut first_predicted = None;
    let mut u = 0;
    for t in 0..policy.trials.max(1) {
        let idx = ladder.index(t);
        let m = ladder.get(t)?.clone();
        if let std::collections::btree_map::Entry::Vacant(e) = contexts.entry(idx) {
            e.insert(CurveContext::new(&m)?);
        }
        let seed = policy.seed.wrapping_add(t as u64);
        let (inst, predicted, a) = assess_sample(&contexts[&idx], &m, gamma, seed)?;
        u = inst.u;
        first_predicted.get_or_insert(predicted);
        let done = a.matched();
        outcomes.push((TrialRecord { seed, prime: m.field.modulus(), matched: done, i: None, dim: None }, a));
        if done {
            break;
        }
    }
    Ok(fold_verdict(u, first_predicted.expect("at least one trial"), outcomes))
}

/// `g - 1 + ⌊i d / r⌋`.
pub fn raynaud_degree(g: usize, r: usize, d: usize, i: usize) -> i64 {
    g as i64 - 1 + (i * d / r) as i64
}

/// Twist `η = L^m(-D)` with `ξ = η ⊗ L` of degree `e`: `m + 1` is the least
/// positive multiple of `d` exceeding `e`, so `|D| >= 1` and `ξ` depends on a
/// random divisor. Returns the twist and the sample size it needs.
pub fn raynaud_twist(model: &CurveModel, e: i64) -> (TwistSpec, usize) {
    let d = model.d as i64;
    let m_xi = (e.div_euclid(d) + 1).max(1);
    let dsize = (m_xi * d - e) as usize;
    let m = (m_xi - 1) as usize;
    let twist = TwistSpec { m, vanishing_indices: (0..dsize).collect() };
    let size = dsize + model.d * (m + 2) + 1 + 2;
    (twist, size)
}

/// Checks `H^0(∧^i M_V ⊗ ξ) = 0` for general `ξ` of degree
/// `g - 1 + ⌊id/r⌋`, via `K_{i,1}(C; ξ ⊗ L^{-1}, V)`.
pub fn raynaud_check(model: &CurveModel, i_range: RangeInclusive<usize>, policy: &TrialPolicy) -> Result<Verdict> {
    if model.genus() > 1 {
        return Err(Error::InvalidParams("Raynaud checks need genus 0 or 1".into()));
    }
    if *i_range.end() > model.r {
        return Err(Error::InvalidParams(format!("i ranges over 0..={}", model.r)));
    }
    let mut ladder = ModelLadder::new(model, policy.escalate_prime);
    let mut trials = Vec::new();
    let mut detail = Vec::new();
    let mut all_confirmed = true;
    for i in i_range {
        let e = raynaud_degree(model.genus(), model.r, model.d, i);
        let mut confirmed = false;
        let mut min_dim = usize::MAX;
        for t in 0..policy.trials.max(1) {
            let m = ladder.get(t)?.clone();
            let (twist, size) = raynaud_twist(&m, e);
            let seed = policy.seed.wrapping_add(t as u64);
            let dim = twisted_koszul_dim(&m, &twist, i, size, seed)?;
            min_dim = min_dim.min(dim);
            trials.push(TrialRecord { seed, prime: m.field.modulus(), matched: dim == 0, i: Some(i), dim: Some(dim) });
            if dim == 0 {
                confirmed = true;
                break;
            }
        }
        if !confirmed {
            all_confirmed = false;
            detail.push(EntryDiff { i, j: 1, predicted: 0, computed: min_dim as u64 });
        }
    }
    let status = if all_confirmed { Status::Confirmed } else { Status::Violated };
    Ok(Verdict { status, trials, predicted: None, computed: None, detail, product_condition: None })
}

/// `(2r - d) g - r >= 0`.
pub fn failure_region(g: usize, r: usize, d: usize) -> bool {
    (2 * r as i64 - d as i64) * g as i64 - r as i64 >= 0
}

/// Least `i` in `0..=r` for which both dimension counts force every `ξ` into
/// the difference variety, if any.
pub fn failure_witness(g: usize, r: usize, d: usize) -> Option<usize> {
    let (g, r, d) = (g as i64, r as i64, d as i64);
    (0..=r)
        .find(|&i| {
            let a = g - 1 + (i * d).div_euclid(r) - d + r - i;
            a >= 0 && a + r - i >= g
        })
        .map(|i| i as usize)
}
