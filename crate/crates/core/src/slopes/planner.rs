//! Degeneration chains for Brill–Noether curves with `d >= 2r`.
//!
//! A curve of degree `d` and genus `g` in `P^r` is reached from one of degree
//! `d - r` and genus `g - ε` by attaching a rational normal curve at `ε + 1`
//! points, `0 <= ε <= r + 1`. Repeating this lands the degree in the window
//! `[2r, 3r-1]`. There the base is either an elliptic curve of degree
//! `d' - r` meeting a rational normal curve at `g'` points
//! (`2r < d'`, `1 <= g' <= d'-r+1`), or, for `d' = 2r`, a rational normal
//! curve meeting another at `g' + 1` points (`g' <= r+1`).

use serde::{Deserialize, Serialize};

use super::rho;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanTarget {
    pub g: u32,
    pub r: u32,
    pub d: u32,
}

/// One reduction `(d, g) -> (d - r, g - eps)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanStep {
    pub d: u32,
    pub g: u32,
    pub eps: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BaseKind {
    Elliptic,
    RationalNormal,
}

/// The curve the chain ends at: degree `d` in the base window, genus `attach`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanBase {
    pub kind: BaseKind,
    pub d: u32,
    pub attach: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DegenerationPlan {
    pub target: PlanTarget,
    pub steps: Vec<PlanStep>,
    pub base: PlanBase,
}

/// Bound on `g`, `r` and `d`; keeps `3r`, `ρ` and the step count far from overflow.
pub const MAX_PLAN_PARAM: u32 = 1 << 20;

impl DegenerationPlan {
    pub fn from_json(text: &str) -> Result<Self> {
        let plan: DegenerationPlan = serde_json::from_str(text)?;
        plan.validate()?;
        Ok(plan)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plan serializes")
    }

    /// Every `(d, g)` on the chain, target first, base last.
    pub fn nodes(&self) -> Vec<(u32, u32)> {
        let mut out: Vec<(u32, u32)> = self.steps.iter().map(|s| (s.d, s.g)).collect();
        out.push((self.base.d, self.base.attach));
        out
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Decode(m));
        let PlanTarget { g, r, d } = self.target;
        if g.max(r).max(d) > MAX_PLAN_PARAM {
            return bad(format!("target (g,r,d)=({g},{r},{d}) exceeds {MAX_PLAN_PARAM}"));
        }
        if r < 1 || g < 1 || d < 2 * r {
            return bad(format!("target (g,r,d)=({g},{r},{d}) needs r >= 1, g >= 1, d >= 2r"));
        }
        let (mut cd, mut cg) = (d, g);
        for s in &self.steps {
            if (s.d, s.g) != (cd, cg) {
                return bad(format!("step starts at ({},{}) but the chain is at ({cd},{cg})", s.d, s.g));
            }
            if s.eps > r + 1 || s.eps > s.g {
                return bad(format!("step at ({},{}) has eps={} outside [0, min(g, r+1)]", s.d, s.g, s.eps));
            }
            if s.d < 3 * r {
                return bad(format!("step at degree {} leaves the window [2r, 3r-1] downward", s.d));
            }
            if rho(s.g as i64, r as i64, s.d as i64) < 0 {
                return bad(format!("ρ < 0 at ({},{})", s.d, s.g));
            }
            cd = s.d - r;
            cg = s.g - s.eps;
        }
        let b = self.base;
        if (b.d, b.attach) != (cd, cg) {
            return bad(format!("base ({},{}) does not close the chain at ({cd},{cg})", b.d, b.attach));
        }
        check_base(r, b).map_err(Error::Decode)
    }
}

fn check_base(r: u32, b: PlanBase) -> std::result::Result<(), String> {
    if b.d < 2 * r || b.d > 3 * r - 1 {
        return Err(format!("base degree {} outside [2r, 3r-1] = [{}, {}]", b.d, 2 * r, 3 * r - 1));
    }
    if rho(b.attach as i64, r as i64, b.d as i64) < 0 {
        return Err(format!("ρ < 0 at base ({},{})", b.d, b.attach));
    }
    match b.kind {
        BaseKind::RationalNormal if b.d != 2 * r => Err(format!("rational normal base needs d = 2r, got {}", b.d)),
        BaseKind::RationalNormal if b.attach > r + 1 => Err(format!("rational normal base attaches {} > r+1 times", b.attach)),
        BaseKind::Elliptic if b.d == 2 * r => Err("elliptic base needs d > 2r".into()),
        BaseKind::Elliptic if b.attach < 1 || b.attach > b.d - r + 1 => {
            Err(format!("elliptic base attaches {} points outside [1, d-r+1]", b.attach))
        }
        _ => Ok(()),
    }
}

fn base_kind(r: u32, d: u32) -> BaseKind {
    if d == 2 * r {
        BaseKind::RationalNormal
    } else {
        BaseKind::Elliptic
    }
}

/// Least genus the base at degree `d` may carry.
fn base_floor(r: u32, d: u32) -> u32 {
    match base_kind(r, d) {
        BaseKind::RationalNormal => 0,
        BaseKind::Elliptic => 1,
    }
}

/// Plans a chain from `(g, r, d)` down to a base curve.
///
/// Each step takes `ε = min(g - floor, r + 1)`, which keeps `ρ` as large as
/// possible; if that ever fails validation a depth-first search over all
/// `ε` in `[0, r+1]` (largest first) takes over.
pub fn plan_degeneration(g: u32, r: u32, d: u32) -> Result<DegenerationPlan> {
    if g.max(r).max(d) > MAX_PLAN_PARAM {
        return Err(Error::InvalidParams(format!("(g,r,d)=({g},{r},{d}) exceeds {MAX_PLAN_PARAM}")));
    }
    if r < 1 || g < 1 || d < 2 * r {
        return Err(Error::InvalidParams(format!("planning needs r >= 1, g >= 1, d >= 2r; got (g,r,d)=({g},{r},{d})")));
    }
    if rho(g as i64, r as i64, d as i64) < 0 {
        return Err(Error::Infeasible(format!("ρ({g},{r},{d}) < 0")));
    }
    let target = PlanTarget { g, r, d };
    let n = d / r - 2;
    let base_d = d - n * r;
    let floor = base_floor(r, base_d);

    let mut steps = Vec::with_capacity(n as usize);
    let (mut cd, mut cg) = (d, g);
    for _ in 0..n {
        let eps = cg.saturating_sub(floor).min(r + 1);
        steps.push(PlanStep { d: cd, g: cg, eps });
        cd -= r;
        cg -= eps;
    }
    let plan = DegenerationPlan { target, steps, base: PlanBase { kind: base_kind(r, cd), d: cd, attach: cg } };
    if plan.validate().is_ok() {
        return Ok(plan);
    }

    let mut steps = Vec::new();
    match search(r, d, g, &mut steps) {
        Some(base) => {
            let plan = DegenerationPlan { target, steps, base };
            plan.validate()?;
            Ok(plan)
        }
        None => Err(Error::Infeasible(format!("no chain reaches a base from ({g},{r},{d})"))),
    }
}

fn search(r: u32, d: u32, g: u32, steps: &mut Vec<PlanStep>) -> Option<PlanBase> {
    if rho(g as i64, r as i64, d as i64) < 0 {
        return None;
    }
    if d < 3 * r {
        let base = PlanBase { kind: base_kind(r, d), d, attach: g };
        return check_base(r, base).ok().map(|_| base);
    }
    for eps in (0..=(r + 1).min(g)).rev() {
        steps.push(PlanStep { d, g, eps });
        if let Some(base) = search(r, d - r, g - eps, steps) {
            return Some(base);
        }
        steps.pop();
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn already_at_base() {
        let p = plan_degeneration(1, 3, 6).unwrap();
        assert!(p.steps.is_empty());
        assert_eq!(p.base, PlanBase { kind: BaseKind::RationalNormal, d: 6, attach: 1 });

        let p = plan_degeneration(4, 3, 8).unwrap();
        assert_eq!(p.base, PlanBase { kind: BaseKind::Elliptic, d: 8, attach: 4 });
    }

    #[test]
    fn genus_ten_space_curve_of_degree_twelve() {
        let p = plan_degeneration(10, 3, 12).unwrap();
        assert_eq!(p.steps, vec![PlanStep { d: 12, g: 10, eps: 4 }, PlanStep { d: 9, g: 6, eps: 4 }]);
        assert_eq!(p.base, PlanBase { kind: BaseKind::RationalNormal, d: 6, attach: 2 });
        assert_eq!(rho(10, 3, 12), 6);
        assert_eq!(rho(6, 3, 9), 6);
        assert_eq!(rho(2, 3, 6), 6);
    }

    #[test]
    fn json_round_trip_and_rejections() {
        let p = plan_degeneration(10, 3, 12).unwrap();
        let text = p.to_json();
        assert_eq!(DegenerationPlan::from_json(&text).unwrap(), p);

        // Chain ends at degree 9 = 3r, outside the base window.
        let short = r#"{"target":{"g":10,"r":3,"d":12},"steps":[{"d":12,"g":10,"eps":4}],"base":{"kind":"elliptic","d":9,"attach":6}}"#;
        assert!(DegenerationPlan::from_json(short).is_err());
        let big_eps = r#"{"target":{"g":6,"r":3,"d":9},"steps":[{"d":9,"g":6,"eps":5}],"base":{"kind":"rational_normal","d":6,"attach":1}}"#;
        assert!(DegenerationPlan::from_json(big_eps).is_err());
        let broken = r#"{"target":{"g":6,"r":3,"d":9},"steps":[{"d":9,"g":6,"eps":4}],"base":{"kind":"rational_normal","d":6,"attach":3}}"#;
        assert!(DegenerationPlan::from_json(broken).is_err());
        assert!(DegenerationPlan::from_json(r#"{"target":{"g":1,"r":3,"d":6}}"#).is_err());
        // Found by fuzzing: 2r overflowed u32.
        let huge = r#"{"base":{"attach":1,"d":6,"kind":"rational_normal"},"steps":[],"target":{"d":6,"g":1,"r":3000000000}}"#;
        assert!(DegenerationPlan::from_json(huge).is_err());
        assert!(plan_degeneration(1, u32::MAX, u32::MAX).is_err());
    }

    #[test]
    fn rejects_bad_targets() {
        assert!(matches!(plan_degeneration(0, 3, 6), Err(Error::InvalidParams(_))));
        assert!(matches!(plan_degeneration(2, 3, 5), Err(Error::InvalidParams(_))));
        assert!(matches!(plan_degeneration(20, 3, 9), Err(Error::Infeasible(_))));
    }

    #[test]
    fn search_agrees_with_greedy_on_feasibility() {
        for r in 1..=5u32 {
            for d in 2 * r..=5 * r {
                for g in 1..=25u32 {
                    let greedy = plan_degeneration(g, r, d);
                    let mut steps = Vec::new();
                    let dfs = search(r, d, g, &mut steps);
                    assert_eq!(greedy.is_ok(), dfs.is_some(), "(g,r,d)=({g},{r},{d})");
                    assert_eq!(greedy.is_ok(), rho(g as i64, r as i64, d as i64) >= 0);
                }
            }
        }
    }

    #[test]
    fn deterministic() {
        assert_eq!(plan_degeneration(17, 4, 19).unwrap(), plan_degeneration(17, 4, 19).unwrap());
    }
}
