//! Exact slope arithmetic for bundles on curves.
//!
//! Nothing here constructs bundles. The module records degrees, ranks and
//! gluing data, and evaluates the numerical conditions that decide whether
//! a degeneration argument applies: adjusted slopes on nodal curves,
//! closeness of slopes in an extension, fraction selectors, balanced
//! splitting types, and the degeneration planner.

mod audit;
mod fractions;
mod planner;

pub use audit::{audit_inequalities, p0, p1, AuditFailure, AuditReport, Counterexample, InequalityQuad};
pub use fractions::{minimal_exceeding_slope, xy_pair, zw_pair};
pub use planner::{plan_degeneration, BaseKind, DegenerationPlan, PlanBase, PlanStep, PlanTarget};

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::rational::Rational;
use crate::{Error, Result};

/// Brill–Noether number `g - (r+1)(g - d + r)`.
pub fn rho(g: i64, r: i64, d: i64) -> i64 {
    g - (r + 1) * (g - d + r)
}

/// Degree and rank of a bundle. Serialized with its slope for readability;
/// a supplied slope must agree with `degree / rank`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SlopeDoc", into = "SlopeDoc")]
pub struct SlopeDatum {
    pub degree: i64,
    pub rank: u32,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SlopeDoc {
    degree: i64,
    rank: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    mu: Option<Rational>,
}

impl TryFrom<SlopeDoc> for SlopeDatum {
    type Error = String;

    fn try_from(doc: SlopeDoc) -> std::result::Result<Self, String> {
        let s = SlopeDatum::new(doc.degree, doc.rank).map_err(|e| e.to_string())?;
        match doc.mu {
            Some(mu) if mu.0 != s.mu() => Err(format!("slope {} disagrees with {}/{}", mu, doc.degree, doc.rank)),
            _ => Ok(s),
        }
    }
}

impl From<SlopeDatum> for SlopeDoc {
    fn from(s: SlopeDatum) -> Self {
        SlopeDoc { degree: s.degree, rank: s.rank, mu: Some(Rational(s.mu())) }
    }
}

impl SlopeDatum {
    pub fn new(degree: i64, rank: u32) -> Result<Self> {
        if rank == 0 {
            return Err(Error::InvalidParams("rank must be positive".into()));
        }
        Ok(SlopeDatum { degree, rank })
    }

    pub fn mu(&self) -> Ratio<i64> {
        Ratio::new(self.degree, self.rank as i64)
    }
}

/// Whether the weak Raynaud thresholds of `S` and `Q` leave no integer
/// strictly between them, so an extension of `Q` by `S` inherits the
/// condition from both.
pub fn check_close_slope(s: SlopeDatum, q: SlopeDatum) -> bool {
    fractions::close_slopes(s.mu(), q.mu())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SketchComponent {
    pub name: String,
    pub bundle: SlopeDatum,
}

/// A node joining two components (possibly a component to itself).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SketchNode {
    pub components: (usize, usize),
    #[serde(default)]
    pub label: String,
}

/// A subsheaf `F` given on the normalization: one piece per component (all
/// of the same rank) and, per node, `codim_F(F|p1 ∩ F|p2)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubsheafData {
    pub pieces: Vec<SlopeDatum>,
    pub codims: Vec<u32>,
}

impl SubsheafData {
    pub fn rank(&self) -> u32 {
        self.pieces.first().map_or(0, |p| p.rank)
    }

    /// Total degree, `None` on overflow.
    pub fn degree(&self) -> Option<i64> {
        self.pieces.iter().try_fold(0i64, |acc, p| acc.checked_add(p.degree))
    }

    /// `(deg F, deg F - Σ codims)`, rejecting sums that overflow.
    fn degree_and_adjusted(&self) -> Result<(i64, i64)> {
        let overflow = || Error::InvalidParams("subsheaf degree overflows".into());
        let deg = self.degree().ok_or_else(overflow)?;
        let codim = self.codims.iter().try_fold(0i64, |acc, &c| acc.checked_add(c as i64)).ok_or_else(overflow)?;
        Ok((deg, deg.checked_sub(codim).ok_or_else(overflow)?))
    }
}

/// A bundle on a connected nodal curve, recorded component by component.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodalBundleSketch {
    pub components: Vec<SketchComponent>,
    #[serde(default)]
    pub nodes: Vec<SketchNode>,
    #[serde(default)]
    pub subsheaves: Vec<SubsheafData>,
}

impl NodalBundleSketch {
    pub fn from_json(text: &str) -> Result<Self> {
        let sketch: NodalBundleSketch = serde_json::from_str(text)?;
        sketch.validate()?;
        Ok(sketch)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParams(m));
        let n = self.components.len();
        if n == 0 {
            return bad("sketch has no components".into());
        }
        let rank = self.components[0].bundle.rank;
        if self.components.iter().any(|c| c.bundle.rank != rank) {
            return bad("bundle rank differs between components".into());
        }
        let mut parent: Vec<usize> = (0..n).collect();
        fn root(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for node in &self.nodes {
            let (a, b) = node.components;
            if a >= n || b >= n {
                return bad(format!("node {:?} names a missing component", node.components));
            }
            let (ra, rb) = (root(&mut parent, a), root(&mut parent, b));
            parent[ra] = rb;
        }
        let r0 = root(&mut parent, 0);
        if (1..n).any(|c| root(&mut parent, c) != r0) {
            return bad("components are not connected through nodes".into());
        }
        for (k, f) in self.subsheaves.iter().enumerate() {
            if f.pieces.len() != n || f.codims.len() != self.nodes.len() {
                return bad(format!("subsheaf {k} needs {n} pieces and {} codims", self.nodes.len()));
            }
            let fr = f.rank();
            if f.pieces.iter().any(|p| p.rank != fr) || fr > rank {
                return bad(format!("subsheaf {k} has non-uniform rank or exceeds rank {rank}"));
            }
            if f.codims.iter().any(|&c| c > fr) {
                return bad(format!("subsheaf {k} has a gluing codimension above its rank {fr}"));
            }
            f.degree_and_adjusted()?;
        }
        Ok(())
    }

    /// `μ(F)` of the subsheaf on the normalization: total degree over rank.
    pub fn subsheaf_slope(&self, index: usize) -> Result<Ratio<i64>> {
        let f = self.subsheaf(index)?;
        Ok(Ratio::new(f.degree_and_adjusted()?.0, f.rank() as i64))
    }

    fn subsheaf(&self, index: usize) -> Result<&SubsheafData> {
        let f = self.subsheaves.get(index).ok_or(Error::MissingSubsheaf(index))?;
        if f.rank() == 0 {
            return Err(Error::InvalidParams(format!("subsheaf {index} has rank zero")));
        }
        Ok(f)
    }
}

/// `μ^adj(F) = μ(F) - (1/rk F) Σ_nodes codim_F(F|p1 ∩ F|p2)`.
pub fn adjusted_slope(sketch: &NodalBundleSketch, subsheaf_index: usize) -> Result<Ratio<i64>> {
    let f = sketch.subsheaf(subsheaf_index)?;
    Ok(Ratio::new(f.degree_and_adjusted()?.1, f.rank() as i64))
}

/// At most one component carries a non-integral slope, so the Raynaud
/// condition passes from the components to the whole curve.
pub fn ray_open_hypotheses(sketch: &NodalBundleSketch) -> bool {
    sketch.components.iter().filter(|c| !c.bundle.mu().is_integer()).count() <= 1
}

/// Splitting or Atiyah type of a general bundle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "curve", rename_all = "snake_case")]
pub enum DecompositionType {
    /// `⊕ O(twist)^multiplicity`, twists ascending and differing by at most one.
    P1 { rank: u32, degree: i64, summands: Vec<(i64, u32)> },
    /// `a` stable summands of rank `r1`; for a tangent bundle each has degree
    /// `factor_degree = (r+1) d1`.
    Elliptic { a: u32, r1: u32, d1: u32, factor_degree: u64 },
}

/// Balanced type on `P^1`: with `d = r a + b`, `O(a)^{r-b} ⊕ O(a+1)^b`.
pub fn general_type_p1(r: u32, d: i64) -> DecompositionType {
    assert!(r >= 1, "rank must be positive");
    let (a, b) = d.div_mod_floor(&(r as i64));
    let mut summands = vec![(a, r - b as u32)];
    if b > 0 {
        summands.push((a + 1, b as u32));
    }
    DecompositionType::P1 { rank: r, degree: d, summands }
}

/// Type of the restricted tangent bundle of a general elliptic curve of
/// degree `d` in `P^r`: `a = gcd(d, r)` stable summands of rank `r/a`.
pub fn general_type_elliptic(r: u32, d: u32) -> DecompositionType {
    assert!(r >= 1 && d >= 1, "rank and degree must be positive");
    let a = r.gcd(&d);
    let (r1, d1) = (r / a, d / a);
    DecompositionType::Elliptic { a, r1, d1, factor_degree: (r as u64 + 1) * d1 as u64 }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StabilityVerdict {
    Stable,
    StrictlySemistable,
    /// Genus at most one, or `ρ < 0`.
    OutOfScope,
}

/// Stability of the kernel bundle of a general Brill–Noether curve of genus
/// `g >= 2`: stable except for `g = 2, d = 2r, r >= 3`, where it is strictly
/// semistable.
pub fn stability_verdict(g: u32, r: u32, d: u32) -> StabilityVerdict {
    if g <= 1 || r < 1 || rho(g as i64, r as i64, d as i64) < 0 {
        StabilityVerdict::OutOfScope
    } else if g == 2 && d == 2 * r && r >= 3 {
        StabilityVerdict::StrictlySemistable
    } else {
        StabilityVerdict::Stable
    }
}

/// The destabilizing line bundle quotient `ω_C ⊗ L` of the restricted
/// tangent bundle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Corank1Quotient {
    pub description: String,
    pub degree: i64,
}

/// For `d <= 2r`, `g >= 2`, `r >= 2`: a corank one subbundle of slope at
/// least the tangent bundle's exists iff `g = 2` and `d = 2r`, with
/// quotient `ω_C ⊗ L` of degree `2g - 2 + d`.
pub fn corank1_witness(g: u32, r: u32, d: u32) -> Result<Option<Corank1Quotient>> {
    if d > 2 * r || g < 2 || r < 2 {
        return Err(Error::InvalidParams(format!("need d <= 2r, g >= 2, r >= 2; got (g,r,d)=({g},{r},{d})")));
    }
    Ok((g == 2 && d == 2 * r).then(|| Corank1Quotient {
        description: "omega_C tensor L".into(),
        degree: 2 * g as i64 - 2 + d as i64,
    }))
}

/// `deg T_{f→Λ} = (dim Λ + 1) deg L + |f^{-1}(Λ)|`.
pub fn pointing_det_degree(dim_lambda: u32, deg_l: i64, preimage_len: u32) -> i64 {
    (dim_lambda as i64 + 1) * deg_l + preimage_len as i64
}

/// The pointing bundle toward a center of dimension `dim_lambda`.
pub fn pointing_bundle(dim_lambda: u32, deg_l: i64, preimage_len: u32) -> SlopeDatum {
    SlopeDatum { degree: pointing_det_degree(dim_lambda, deg_l, preimage_len), rank: dim_lambda + 1 }
}

/// Degree of `E[D → F]` when `F` has corank `codim` along `D`.
pub fn elementary_modification_degree(deg_e: i64, codim: u32, deg_d: u32) -> i64 {
    deg_e - codim as i64 * deg_d as i64
}
