//! The one-dimensional Lorenz expanding map and its interval dynamics.
//!
//! The concrete family is `f(x) = sign(x) (mu |x|^rho - 1)` on
//! `[-1-eps, 1+eps] \ {0}`. It has one-sided limits `-1` at `0+` and `+1`
//! at `0-`, its slope `mu rho |x|^(rho-1)` blows up at the discontinuity,
//! and it is odd.
//!
//! Anything that behaves like such a map (the base family, or the perturbed
//! maps of [`crate::connecting`]) implements [`QuotientMap`]; the interval
//! machinery below is written against that trait.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{LabError, Result};

pub const SQRT2: f64 = std::f64::consts::SQRT_2;

/// Default depth cap for eventually-onto searches.
pub const DEFAULT_DEPTH_CAP: usize = 64;
/// Branch lists longer than this abort a search.
pub const MAX_BRANCHES: usize = 1 << 20;

/// Constants of the concrete model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub mu: f64,
    pub rho: f64,
    pub c: f64,
    pub b: f64,
    pub nu: f64,
    pub lambda1: f64,
    pub lambda2: f64,
    pub lambda3: f64,
    pub r0: f64,
    pub eps_ext: f64,
}

impl Default for ModelParams {
    fn default() -> Self {
        ModelParams {
            mu: 1.95,
            rho: 0.75,
            c: 0.45,
            b: 0.25,
            nu: 2.0,
            lambda1: -4.0,
            lambda2: -1.5,
            lambda3: 2.0,
            r0: 1.0,
            eps_ext: 0.0,
        }
    }
}

impl ModelParams {
    fn fields(&self) -> [(&'static str, f64); 10] {
        [
            ("mu", self.mu),
            ("rho", self.rho),
            ("c", self.c),
            ("b", self.b),
            ("nu", self.nu),
            ("lambda1", self.lambda1),
            ("lambda2", self.lambda2),
            ("lambda3", self.lambda3),
            ("r0", self.r0),
            ("eps_ext", self.eps_ext),
        ]
    }

    pub fn ensure_finite(&self) -> Result<()> {
        for (name, v) in self.fields() {
            if !v.is_finite() {
                return Err(LabError::Input(format!("parameter {name} is not finite")));
            }
        }
        Ok(())
    }

    /// Half-width of the (possibly extended) section, `1 + eps_ext`.
    pub fn radius(&self) -> f64 {
        1.0 + self.eps_ext
    }

    /// Infimum of `f'` over the domain, attained at `|x| = 1 + eps`.
    pub fn lambda0(&self) -> f64 {
        self.mu * self.rho * self.radius().powf(self.rho - 1.0)
    }

    /// `y+`, the height of `z+ = (-1, y+)`, the limit of `P` at `0+`.
    pub fn y_plus(&self) -> f64 {
        -self.c
    }

    pub fn y_minus(&self) -> f64 {
        self.c
    }

    /// Roof function `r0 + ln(1/|x|)/lambda3`, given `ln |x|`.
    pub fn roof_from_ln(&self, ln_abs_x: f64) -> f64 {
        self.r0 - ln_abs_x / self.lambda3
    }

    pub fn roof(&self, x: f64) -> f64 {
        self.roof_from_ln(x.abs().ln())
    }

    /// Short stable digest of the parameter values, used to tag reports.
    pub fn params_hash(&self) -> String {
        let mut h = Sha256::new();
        for (name, v) in self.fields() {
            h.update(name.as_bytes());
            h.update(v.to_bits().to_le_bytes());
        }
        hex::encode(&h.finalize()[..8])
    }

    /// Largest extension margin with `mu (1+eps)^rho < 2`.
    pub fn max_eps_ext(&self) -> f64 {
        (2.0 / self.mu).powf(1.0 / self.rho) - 1.0
    }
}

/// Open interval `(lo, hi)` in section coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) || lo >= hi {
            return Err(LabError::Input(format!("degenerate interval ({lo}, {hi})")));
        }
        Ok(Interval { lo, hi })
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo < x && x < self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }
}

/// Which monotone branch of the map: `Left` is `x < 0`, `Right` is `x > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Branch {
    Left,
    Right,
}

impl Branch {
    pub fn of(x: f64) -> Option<Branch> {
        if x < 0.0 {
            Some(Branch::Left)
        } else if x > 0.0 {
            Some(Branch::Right)
        } else {
            None
        }
    }
}

/// A map of the class of Lorenz expanding maps, seen through its quotient
/// by the stable foliation.
///
/// `apply` and `slope` are unchecked: callers guarantee `x != 0`.
pub trait QuotientMap: Sync {
    fn params(&self) -> &ModelParams;

    fn apply(&self, x: f64) -> f64;

    fn slope(&self, x: f64) -> f64;

    /// Limit of the map at `0+`.
    fn limit_right(&self) -> f64 {
        -1.0
    }

    /// Limit of the map at `0-`.
    fn limit_left(&self) -> f64 {
        1.0
    }

    /// Value at `x`, using the one-sided limits when `x` is exactly zero and
    /// approached from the given side.
    fn apply_endpoint(&self, x: f64, from_above: bool) -> f64 {
        if x == 0.0 {
            if from_above {
                self.limit_right()
            } else {
                self.limit_left()
            }
        } else {
            self.apply(x)
        }
    }

    /// Branch domain inside `[-1, 1]`.
    fn branch_domain(&self, branch: Branch) -> (f64, f64) {
        match branch {
            Branch::Left => (-1.0, 0.0),
            Branch::Right => (0.0, 1.0),
        }
    }

    /// Image of the branch domain, as `(lim at left end, lim at right end)`.
    fn branch_range(&self, branch: Branch) -> (f64, f64) {
        match branch {
            Branch::Left => (self.apply(-1.0), self.limit_left()),
            Branch::Right => (self.limit_right(), self.apply(1.0)),
        }
    }

    /// Preimage of `u` on one branch, or `None` when `u` is outside the
    /// branch range.
    fn inverse(&self, branch: Branch, u: f64) -> Option<f64> {
        bisect_inverse(self, branch, u)
    }

    /// Iterate `n` times; `None` if an iterate lands exactly on zero.
    fn iterate(&self, mut x: f64, n: usize) -> Option<f64> {
        for _ in 0..n {
            if x == 0.0 {
                return None;
            }
            x = self.apply(x);
        }
        Some(x)
    }
}

/// Branch inverse by bisection; valid for every increasing branch.
pub fn bisect_inverse<M: QuotientMap + ?Sized>(map: &M, branch: Branch, u: f64) -> Option<f64> {
    let (lo_v, hi_v) = map.branch_range(branch);
    if !(u >= lo_v && u <= hi_v) {
        return None;
    }
    let (mut a, mut b) = map.branch_domain(branch);
    if u == lo_v {
        return Some(a);
    }
    if u == hi_v {
        return Some(b);
    }
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        if map.apply(m) < u {
            a = m;
        } else {
            b = m;
        }
    }
    Some(0.5 * (a + b))
}

impl QuotientMap for ModelParams {
    fn params(&self) -> &ModelParams {
        self
    }

    fn apply(&self, x: f64) -> f64 {
        let v = self.mu * x.abs().powf(self.rho) - 1.0;
        if x < 0.0 {
            -v
        } else {
            v
        }
    }

    fn slope(&self, x: f64) -> f64 {
        self.mu * self.rho * x.abs().powf(self.rho - 1.0)
    }

    fn inverse(&self, branch: Branch, u: f64) -> Option<f64> {
        let (lo_v, hi_v) = self.branch_range(branch);
        if !(u >= lo_v && u <= hi_v) {
            return None;
        }
        Some(match branch {
            Branch::Right => ((u + 1.0) / self.mu).powf(1.0 / self.rho),
            Branch::Left => -((1.0 - u) / self.mu).powf(1.0 / self.rho),
        })
    }
}

/// `f(x)` for the base family.
pub fn eval_f(params: &ModelParams, x: f64) -> Result<f64> {
    check_point(params, x)?;
    Ok(params.apply(x))
}

/// `f'(x)` for the base family.
pub fn eval_f_prime(params: &ModelParams, x: f64) -> Result<f64> {
    check_point(params, x)?;
    Ok(params.slope(x))
}

fn check_point(params: &ModelParams, x: f64) -> Result<()> {
    if !x.is_finite() {
        return Err(LabError::Input(format!("coordinate {x} is not finite")));
    }
    if x == 0.0 {
        return Err(LabError::Domain("f is undefined on the stable leaf x = 0".into()));
    }
    if x.abs() > params.radius() {
        return Err(LabError::Domain(format!(
            "x = {x} outside [-{r}, {r}]",
            r = params.radius()
        )));
    }
    Ok(())
}

/// One named check with its witnessing margin (positive means pass).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub margin: f64,
    pub detail: String,
}

impl Check {
    pub fn new(name: &str, margin: f64, detail: impl Into<String>) -> Self {
        Check {
            name: name.to_string(),
            pass: margin > 0.0,
            margin,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidityReport {
    pub valid: bool,
    pub min_slope: f64,
    pub sup_abs_f: f64,
    pub checks: Vec<Check>,
    pub params_hash: String,
}

const VALIDITY_GRID: usize = 10_000;

/// Verify that the base family with `params` is a Lorenz expanding map on
/// `[-1-eps, 1+eps] \ {0}`.
pub fn validate_map(params: &ModelParams) -> Result<ValidityReport> {
    params.ensure_finite()?;
    let r = params.radius();
    let mut checks = Vec::new();

    checks.push(Check::new(
        "limits_at_zero",
        params.rho.min(params.mu),
        "mu > 0 and rho > 0 give f(0-) = 1, f(0+) = -1",
    ));
    checks.push(Check::new(
        "slope_blowup_at_zero",
        1.0 - params.rho,
        "rho < 1 makes f' -> +inf at 0",
    ));
    let sup_f = params.mu * r.powf(params.rho) - 1.0;
    checks.push(Check::new(
        "image_in_open_interval",
        (1.0 - sup_f).min(params.mu),
        format!("sup |f| = {sup_f}"),
    ));
    let min_slope = params.lambda0();
    checks.push(Check::new(
        "min_slope_above_sqrt2",
        min_slope - SQRT2,
        format!("min f' = mu rho (1+eps)^(rho-1) = {min_slope}"),
    ));
    checks.push(Check::new(
        "c1_away_from_zero",
        if params.rho > 0.0 { 1.0 } else { -1.0 },
        "power law is smooth on each branch",
    ));

    // uniform grid, excluding zero
    let mut grid_min_slope = f64::INFINITY;
    let mut grid_sup = 0.0f64;
    for i in 0..VALIDITY_GRID {
        let x = -r + 2.0 * r * (i as f64 + 0.5) / VALIDITY_GRID as f64;
        if x == 0.0 {
            continue;
        }
        grid_min_slope = grid_min_slope.min(params.slope(x));
        grid_sup = grid_sup.max(params.apply(x).abs());
    }
    checks.push(Check::new(
        "grid_slope",
        grid_min_slope - SQRT2,
        format!("grid min f' = {grid_min_slope}"),
    ));
    checks.push(Check::new(
        "grid_image",
        1.0 - grid_sup,
        format!("grid sup |f| = {grid_sup}"),
    ));

    Ok(ValidityReport {
        valid: checks.iter().all(|c| c.pass),
        min_slope,
        sup_abs_f: sup_f,
        checks,
        params_hash: params.params_hash(),
    })
}

/// Return `params` with the section extended by `eps_ext`, after checking
/// that the extension is still a Lorenz expanding map.
pub fn extend_map(params: &ModelParams, eps_ext: f64) -> Result<ModelParams> {
    if !(eps_ext >= 0.0) || !eps_ext.is_finite() {
        return Err(LabError::Input(format!("extension margin {eps_ext} must be >= 0")));
    }
    let max_eps = params.max_eps_ext();
    if params.mu * (1.0 + eps_ext).powf(params.rho) - 1.0 >= 1.0 {
        return Err(LabError::Input(format!(
            "extension eps = {eps_ext} violates f(1+eps) < 1; maximal admissible eps = {max_eps}"
        )));
    }
    let extended = ModelParams { eps_ext, ..*params };
    let report = validate_map(&extended)?;
    if !report.valid {
        return Err(LabError::Input(format!(
            "extended map fails validation (max eps = {max_eps})"
        )));
    }
    Ok(extended)
}

/// A monotone branch of `f^n` on a component of `J \ D_n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonotoneBranch {
    pub domain: (f64, f64),
    pub image: (f64, f64),
    pub monotone: bool,
}

/// A discontinuity of `f^n`: `f^order(t) = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cut {
    pub t: f64,
    pub order: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BranchDecomposition {
    pub depth: usize,
    pub cuts: Vec<Cut>,
    pub branches: Vec<MonotoneBranch>,
}

impl BranchDecomposition {
    pub fn cut_points(&self) -> Vec<f64> {
        self.cuts.iter().map(|c| c.t).collect()
    }
}

/// Depth-by-depth branch bookkeeping for `f^n` on an interval.
pub struct BranchTracker<'a, M: QuotientMap + ?Sized> {
    map: &'a M,
    depth: usize,
    branches: Vec<MonotoneBranch>,
    cuts: Vec<Cut>,
}

impl<'a, M: QuotientMap + ?Sized> BranchTracker<'a, M> {
    pub fn new(map: &'a M, j: Interval) -> Self {
        BranchTracker {
            map,
            depth: 0,
            branches: vec![MonotoneBranch {
                domain: (j.lo, j.hi),
                image: (j.lo, j.hi),
                monotone: true,
            }],
            cuts: Vec::new(),
        }
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn branches(&self) -> &[MonotoneBranch] {
        &self.branches
    }

    /// Advance to depth + 1.
    pub fn step(&mut self) -> Result<()> {
        let map = self.map;
        let m = self.depth;
        let mut next = Vec::with_capacity(self.branches.len() + 4);
        for br in &self.branches {
            let (a, b) = br.domain;
            let (c, d) = br.image;
            if c < 0.0 && 0.0 < d {
                let t0 = bisect_zero(|t| map.iterate(t, m).unwrap_or(0.0), a, b);
                self.cuts.push(Cut { t: t0, order: m });
                next.push(MonotoneBranch {
                    domain: (a, t0),
                    image: (map.apply_endpoint(c, true), map.limit_left()),
                    monotone: true,
                });
                next.push(MonotoneBranch {
                    domain: (t0, b),
                    image: (map.limit_right(), map.apply_endpoint(d, false)),
                    monotone: true,
                });
            } else {
                next.push(MonotoneBranch {
                    domain: (a, b),
                    image: (map.apply_endpoint(c, true), map.apply_endpoint(d, false)),
                    monotone: true,
                });
            }
        }
        if next.len() > MAX_BRANCHES {
            return Err(LabError::DepthCap {
                cap: MAX_BRANCHES,
                detail: format!("branch count exceeded at depth {}", m + 1),
            });
        }
        self.branches = next;
        self.depth += 1;
        Ok(())
    }

    pub fn decomposition(&self) -> BranchDecomposition {
        let mut cuts = self.cuts.clone();
        cuts.sort_by(|x, y| x.t.total_cmp(&y.t));
        BranchDecomposition {
            depth: self.depth,
            cuts,
            branches: self.branches.clone(),
        }
    }
}

/// Root of an increasing function on `(a, b)` that changes sign there.
pub(crate) fn bisect_zero(g: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let v = g(m);
        if v == 0.0 {
            return m;
        }
        if v < 0.0 {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Exact branch decomposition of `J` under `f^n`.
pub fn iterate_interval<M: QuotientMap + ?Sized>(
    map: &M,
    j: Interval,
    n: usize,
) -> Result<BranchDecomposition> {
    if !(j.lo < j.hi) {
        return Err(LabError::Input("degenerate interval".into()));
    }
    let mut tracker = BranchTracker::new(map, j);
    for _ in 0..n {
        tracker.step()?;
    }
    Ok(tracker.decomposition())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverBranch {
    pub depth: usize,
    pub domain: [f64; 2],
    pub image: [f64; 2],
}

/// Witness that `f^0(J) u ... u f^N(J)` covers `(-1, 1)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[allow(non_snake_case)]
pub struct OntoCertificate {
    pub N: usize,
    pub branches: Vec<CoverBranch>,
    pub params_hash: String,
}

/// True if the union of the open intervals covers `(-1, 1)`.
pub(crate) fn covers_unit(intervals: &[(f64, f64)]) -> bool {
    let mut v: Vec<(f64, f64)> = intervals.to_vec();
    v.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut reach = f64::NEG_INFINITY;
    let mut started = false;
    for (lo, hi) in v {
        if !started {
            if lo <= -1.0 {
                started = true;
                reach = hi;
            }
            continue;
        }
        if lo < reach {
            reach = reach.max(hi);
        } else {
            break;
        }
    }
    started && reach >= 1.0
}

/// Greedy selection of intervals covering `(-1, 1)`; indices into `cands`.
fn greedy_cover(cands: &[CoverBranch]) -> Vec<usize> {
    let mut chosen = Vec::new();
    let mut reach = -1.0f64;
    let mut first = true;
    loop {
        let mut best: Option<usize> = None;
        for (i, c) in cands.iter().enumerate() {
            let ok = if first { c.image[0] <= -1.0 } else { c.image[0] < reach };
            if ok && c.image[1] > reach {
                match best {
                    Some(k) if cands[k].image[1] >= c.image[1] => {}
                    _ => best = Some(i),
                }
            }
        }
        match best {
            Some(i) => {
                chosen.push(i);
                reach = cands[i].image[1];
                first = false;
                if reach >= 1.0 {
                    return chosen;
                }
            }
            None => return chosen,
        }
    }
}

/// Smallest `N` with `f^0(J) u ... u f^N(J) = (-1, 1)`, found by exhaustive
/// branch tracking, together with a set of branches realizing the cover.
pub fn onto_certificate<M: QuotientMap + ?Sized>(
    map: &M,
    j: Interval,
    depth_cap: usize,
) -> Result<OntoCertificate> {
    if !(j.lo < j.hi) || j.lo < -1.0 - 1e-15 || j.hi > 1.0 + 1e-15 {
        return Err(LabError::Input(format!("interval ({}, {}) must lie in [-1, 1]", j.lo, j.hi)));
    }
    let hash = map.params().params_hash();
    if j.lo <= -1.0 && j.hi >= 1.0 {
        return Ok(OntoCertificate {
            N: 0,
            branches: vec![CoverBranch { depth: 0, domain: [j.lo, j.hi], image: [j.lo, j.hi] }],
            params_hash: hash,
        });
    }
    if j.lo < 0.0 && 0.0 < j.hi {
        let left = onto_certificate(map, Interval { lo: j.lo, hi: 0.0 }, depth_cap)?;
        let right = onto_certificate(map, Interval { lo: 0.0, hi: j.hi }, depth_cap)?;
        let (n, branches) = if left.N <= right.N {
            (left.N, left.branches)
        } else {
            (right.N, right.branches)
        };
        return Ok(OntoCertificate { N: n, branches, params_hash: hash });
    }

    let mut tracker = BranchTracker::new(map, j);
    let mut cands: Vec<CoverBranch> = vec![CoverBranch {
        depth: 0,
        domain: [j.lo, j.hi],
        image: [j.lo, j.hi],
    }];
    let mut union: Vec<(f64, f64)> = vec![(j.lo, j.hi)];
    for depth in 1..=depth_cap {
        tracker.step()?;
        for br in tracker.branches() {
            union.push(br.image);
            cands.push(CoverBranch {
                depth,
                domain: [br.domain.0, br.domain.1],
                image: [br.image.0, br.image.1],
            });
        }
        union = merge_open(&union);
        if covers_unit(&union) {
            let chosen = greedy_cover(&cands);
            return Ok(OntoCertificate {
                N: depth,
                branches: chosen.into_iter().map(|i| cands[i].clone()).collect(),
                params_hash: hash,
            });
        }
    }
    Err(LabError::DepthCap {
        cap: depth_cap,
        detail: format!("no cover of (-1, 1) from ({}, {})", j.lo, j.hi),
    })
}

/// Merge overlapping open intervals (touching endpoints stay separate).
fn merge_open(v: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut s = v.to_vec();
    s.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut out: Vec<(f64, f64)> = Vec::with_capacity(s.len());
    for (lo, hi) in s {
        if let Some(last) = out.last_mut() {
            if lo < last.1 {
                last.1 = last.1.max(hi);
                continue;
            }
        }
        out.push((lo, hi));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn eval_examples() {
        let p = ModelParams::default();
        // 1.95 * 0.5^0.75 - 1
        assert_abs_diff_eq!(eval_f(&p, 0.5).unwrap(), 1.95 * 0.5f64.powf(0.75) - 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(eval_f(&p, 0.5).unwrap(), 0.159_476_937_127_653, epsilon = 1e-14);
        assert_abs_diff_eq!(eval_f(&p, 1.0).unwrap(), 0.95, epsilon = 1e-15);
        for &x in &[0.1, 0.37, 0.999, 1e-9] {
            assert_eq!(eval_f(&p, -x).unwrap(), -eval_f(&p, x).unwrap());
        }
        assert!(matches!(eval_f(&p, 0.0), Err(LabError::Domain(_))));
    }

    #[test]
    fn slope_examples() {
        let p = ModelParams::default();
        assert_abs_diff_eq!(eval_f_prime(&p, 1.0).unwrap(), 1.4625, epsilon = 1e-15);
        assert_abs_diff_eq!(eval_f_prime(&p, 0.5).unwrap(), 1.4625 * 2f64.powf(0.25), epsilon = 1e-14);
        // high-precision value; the rounded figure 1.73925 is only good to 4e-5
        assert_abs_diff_eq!(eval_f_prime(&p, 0.5).unwrap(), 1.739_215_405_691_48, epsilon = 1e-13);
        assert!(eval_f_prime(&p, 1e-8).unwrap() > 1e2);
        assert!(eval_f_prime(&p, 0.0).is_err());
    }

    #[test]
    fn validity_examples() {
        let good = validate_map(&ModelParams::default()).unwrap();
        assert!(good.valid);
        assert_abs_diff_eq!(good.min_slope, 1.4625, epsilon = 1e-15);

        let slow = validate_map(&ModelParams { mu: 1.0, ..Default::default() }).unwrap();
        assert!(!slow.valid);
        assert_abs_diff_eq!(slow.min_slope, 0.75, epsilon = 1e-15);

        let big = validate_map(&ModelParams { mu: 2.1, ..Default::default() }).unwrap();
        assert!(!big.valid);
        assert_abs_diff_eq!(big.sup_abs_f, 1.1, epsilon = 1e-12);
        assert!(!big.checks.iter().find(|c| c.name == "image_in_open_interval").unwrap().pass);

        let nan = ModelParams { rho: f64::NAN, ..Default::default() };
        assert!(matches!(validate_map(&nan), Err(LabError::Input(_))));
    }

    #[test]
    fn extension_examples() {
        let p = ModelParams::default();
        let e = extend_map(&p, 0.02).unwrap();
        assert_abs_diff_eq!(e.apply(1.02), 0.979_177_477_607_408, epsilon = 1e-14);
        assert!(e.apply(1.02) < 1.0);
        let err = extend_map(&p, 0.05).unwrap_err();
        assert!(err.to_string().contains("0.034"));
        assert_abs_diff_eq!(p.max_eps_ext(), 0.0343, epsilon = 1e-4);
        assert_eq!(extend_map(&p, 0.0).unwrap(), p);
    }

    #[test]
    fn full_interval_depth_one() {
        let p = ModelParams::default();
        let d = iterate_interval(&p, Interval::new(-1.0, 1.0).unwrap(), 1).unwrap();
        assert_eq!(d.cut_points(), vec![0.0]);
        assert_eq!(d.branches.len(), 2);
        assert_abs_diff_eq!(d.branches[0].image.0, -0.95, epsilon = 1e-15);
        assert_eq!(d.branches[0].image.1, 1.0);
        assert_eq!(d.branches[1].image.0, -1.0);
        assert_abs_diff_eq!(d.branches[1].image.1, 0.95, epsilon = 1e-15);
    }

    #[test]
    fn small_interval_depth_one() {
        let p = ModelParams::default();
        let d = iterate_interval(&p, Interval::new(0.1, 0.2).unwrap(), 1).unwrap();
        assert!(d.cuts.is_empty());
        assert_abs_diff_eq!(d.branches[0].image.0, -0.653_235_515_042_410, epsilon = 1e-14);
        assert_abs_diff_eq!(d.branches[0].image.1, -0.416_813_975_323_724, epsilon = 1e-14);
    }

    #[test]
    fn degenerate_interval_rejected() {
        assert!(Interval::new(0.3, 0.3).is_err());
        let p = ModelParams::default();
        let bad = Interval { lo: 0.4, hi: 0.2 };
        assert!(iterate_interval(&p, bad, 2).is_err());
    }

    #[test]
    fn onto_trivial_and_small() {
        let p = ModelParams::default();
        let full = onto_certificate(&p, Interval::new(-1.0, 1.0).unwrap(), 64).unwrap();
        assert_eq!(full.N, 0);
        let c = onto_certificate(&p, Interval::new(0.10, 0.11).unwrap(), 64).unwrap();
        assert!(c.N <= 25, "N = {}", c.N);
        let imgs: Vec<(f64, f64)> = c.branches.iter().map(|b| (b.image[0], b.image[1])).collect();
        assert!(covers_unit(&imgs));
        let tiny = onto_certificate(&p, Interval::new(0.2699 - 1e-6, 0.2699 + 1e-6).unwrap(), 64).unwrap();
        assert!(tiny.N > c.N);
    }

    #[test]
    fn onto_depth_cap_reports() {
        let p = ModelParams::default();
        let e = onto_certificate(&p, Interval::new(0.10, 0.11).unwrap(), 3).unwrap_err();
        assert!(matches!(e, LabError::DepthCap { cap: 3, .. }));
    }

    #[test]
    fn onto_straddling_zero_splits() {
        let p = ModelParams::default();
        let c = onto_certificate(&p, Interval::new(-0.01, 0.02).unwrap(), 64).unwrap();
        assert!(c.N >= 1);
    }

    #[test]
    fn cover_check_open_intervals() {
        assert!(covers_unit(&[(-1.0, 0.95), (-0.95, 1.0)]));
        assert!(!covers_unit(&[(-1.0, 0.0), (0.0, 1.0)]));
        assert!(!covers_unit(&[(-0.99, 1.0)]));
    }
}
