//! One-parameter bump perturbations of the quotient map, the connecting
//! solver, and the homoclinic-loop and isolation experiments built on it.
//!
//! The perturbation acts on `f` only; `H` is left alone. Side `+` pushes
//! the image of `x = -1` (the point `z+`, where the right branch of the
//! unstable manifold of the singularity first lands), side `-` mirrors it
//! at `x = 1`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dictionary;
use crate::error::{LabError, Result};
use crate::expanding_map::{
    bisect_inverse, validate_map, Branch, Check, ModelParams, QuotientMap, ValidityReport, DEFAULT_DEPTH_CAP,
    MAX_BRANCHES, SQRT2,
};
use crate::measures::{chain_measure, orbit_measure, FlowMeasure, LogPoint};
use crate::quadrature::integrate;
use crate::return_map::{eval_h, SectionPoint};
use crate::symbolic::{find_periodic, lyndon_words, parse_word, word_string, PeriodicOrbit, Symbol, Word};

/// `sup |B'|` for the smoothstep profile.
pub const SUP_BUMP_PRIME: f64 = 1.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Plus,
    Minus,
}

impl Side {
    /// Sign of the push, which is also the sign of `d gamma_0 / ds`.
    pub fn sign(self) -> f64 {
        match self {
            Side::Plus => 1.0,
            Side::Minus => -1.0,
        }
    }

    /// Section coordinate of `z+` or `z-`.
    pub fn anchor(self) -> f64 {
        -self.sign()
    }

    pub fn parse(s: &str) -> Result<Side> {
        match s {
            "+" | "plus" => Ok(Side::Plus),
            "-" | "minus" => Ok(Side::Minus),
            _ => Err(LabError::Input(format!("side must be plus or minus, got {s:?}"))),
        }
    }
}

/// `B(u) = 1 - (3u^2 - 2u^3)`, clamped to `[0, 1]`.
pub fn bump_profile(u: f64) -> f64 {
    if u <= 0.0 {
        1.0
    } else if u >= 1.0 {
        0.0
    } else {
        1.0 - u * u * (3.0 - 2.0 * u)
    }
}

pub fn bump_profile_prime(u: f64) -> f64 {
    if u <= 0.0 || u >= 1.0 {
        0.0
    } else {
        -6.0 * u * (1.0 - u)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bump {
    pub side: Side,
    pub eta: f64,
    pub s: f64,
}

impl Bump {
    fn coord(&self, x: f64) -> Option<f64> {
        match self.side {
            Side::Plus if x < 0.0 && x <= -1.0 + self.eta => Some(((x + 1.0) / self.eta).max(0.0)),
            Side::Minus if x > 0.0 && x >= 1.0 - self.eta => Some(((1.0 - x) / self.eta).max(0.0)),
            _ => None,
        }
    }

    /// `d f_s(x) / ds`.
    pub fn shape(&self, x: f64) -> f64 {
        self.coord(x).map_or(0.0, |u| self.side.sign() * bump_profile(u))
    }

    pub fn value(&self, x: f64) -> f64 {
        self.s * self.shape(x)
    }

    pub fn slope(&self, x: f64) -> f64 {
        self.coord(x).map_or(0.0, |u| self.s * bump_profile_prime(u) / self.eta)
    }

    pub fn support(&self) -> (f64, f64) {
        match self.side {
            Side::Plus => (-1.0, -1.0 + self.eta),
            Side::Minus => (1.0 - self.eta, 1.0),
        }
    }
}

/// The base map plus a list of bumps with disjoint supports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerturbedMap {
    pub base: ModelParams,
    pub bumps: Vec<Bump>,
}

impl PerturbedMap {
    pub fn new(base: ModelParams, bumps: Vec<Bump>) -> Self {
        PerturbedMap { base, bumps }
    }

    pub fn unperturbed(base: ModelParams) -> Self {
        PerturbedMap { base, bumps: Vec::new() }
    }

    fn in_support(&self, x: f64) -> bool {
        self.bumps.iter().any(|b| b.coord(x).is_some())
    }
}

impl QuotientMap for PerturbedMap {
    fn params(&self) -> &ModelParams {
        &self.base
    }

    fn apply(&self, x: f64) -> f64 {
        self.base.apply(x) + self.bumps.iter().map(|b| b.value(x)).sum::<f64>()
    }

    fn slope(&self, x: f64) -> f64 {
        self.base.slope(x) + self.bumps.iter().map(|b| b.slope(x)).sum::<f64>()
    }

    fn inverse(&self, branch: Branch, u: f64) -> Option<f64> {
        let (lo, hi) = self.branch_range(branch);
        if !(u >= lo && u <= hi) {
            return None;
        }
        // the bumps shrink the range, so the base inverse always exists
        match self.base.inverse(branch, u) {
            Some(x) if !self.in_support(x) => Some(x),
            _ => bisect_inverse(self, branch, u),
        }
    }
}

/// `f_s(x)` for a single bump with parameter `s`.
pub fn eval_f_s(base: &ModelParams, pert: &PerturbationParams, s: f64, x: f64) -> Result<f64> {
    crate::expanding_map::eval_f(base, x)?;
    let bump = Bump { side: pert.side, eta: pert.eta, s };
    Ok(base.apply(x) + bump.value(x))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerturbationParams {
    pub side: Side,
    pub eta: f64,
    /// Upper end of the parameter range; `None` means `tau_max`.
    pub tau: Option<f64>,
    /// Slope floor `lambda` kept by every member of the family.
    pub lambda_margin: f64,
}

impl Default for PerturbationParams {
    fn default() -> Self {
        PerturbationParams { side: Side::Plus, eta: 0.05, tau: None, lambda_margin: 1.43 }
    }
}

impl PerturbationParams {
    pub fn with_side(side: Side) -> Self {
        PerturbationParams { side, ..Default::default() }
    }
}

const GRID: usize = 10_000;

/// Lorenz-expanding-map checks for an arbitrary quotient map on `[-1, 1]`,
/// with `lambda` as the slope floor.
pub fn validate_quotient<M: QuotientMap + ?Sized>(map: &M, lambda: f64) -> ValidityReport {
    let mut min_slope = f64::INFINITY;
    let mut sup = map.apply(-1.0).abs().max(map.apply(1.0).abs());
    let mut monotone = true;
    let mut prev: Option<(f64, f64)> = None;
    for i in 0..GRID {
        let x = -1.0 + 2.0 * (i as f64 + 0.5) / GRID as f64;
        if x == 0.0 {
            continue;
        }
        let v = map.apply(x);
        if let Some((px, pv)) = prev {
            if px * x > 0.0 {
                monotone &= v > pv;
            }
        }
        prev = Some((x, v));
        min_slope = min_slope.min(map.slope(x));
        sup = sup.max(v.abs());
    }
    let checks = vec![
        Check::new(
            "limits_at_zero",
            if map.limit_left() == 1.0 && map.limit_right() == -1.0 { 1.0 } else { -1.0 },
            "f(0-) = 1 and f(0+) = -1",
        ),
        Check::new("grid_slope_floor", min_slope - lambda * (1.0 - 1e-12), format!("grid min f' = {min_slope}")),
        Check::new("slope_above_sqrt2", min_slope - SQRT2, format!("grid min f' = {min_slope}")),
        Check::new("image_in_open_interval", 1.0 - sup, format!("sup |f| = {sup}")),
        Check::new("branches_increasing", if monotone { 1.0 } else { -1.0 }, "grid values increase on each branch"),
    ];
    ValidityReport {
        valid: checks.iter().all(|c| c.pass),
        min_slope,
        sup_abs_f: sup,
        checks,
        params_hash: map.params().params_hash(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyReport {
    pub side: Side,
    pub eta: f64,
    pub lambda: f64,
    pub inf_f_prime: f64,
    pub sup_bump_prime: f64,
    pub tau_max: f64,
    pub tau: f64,
    /// Minimum grid slope over a 100-point scan of `[0, tau_max]`.
    pub scan_min_slope: f64,
    pub validity: ValidityReport,
}

/// `tau_max = (inf f' - lambda) eta / sup |B'|`, with the slope floor
/// re-checked on a grid across the whole parameter range.
pub fn validate_family(base: &ModelParams, pert: &PerturbationParams) -> Result<FamilyReport> {
    let base_report = validate_map(base)?;
    if !base_report.valid {
        return Err(LabError::Input("base parameters are not a Lorenz expanding map".into()));
    }
    if !(pert.eta > 0.0 && pert.eta < 1.0) {
        return Err(LabError::Input(format!("eta must lie in (0, 1), got {}", pert.eta)));
    }
    let lambda = pert.lambda_margin;
    if !(lambda >= SQRT2) {
        return Err(LabError::Input(format!("lambda_margin {lambda} is below sqrt(2)")));
    }
    let inf = base.lambda0();
    if lambda >= inf {
        return Err(LabError::Input(format!(
            "empty family: lambda_margin {lambda} >= inf f' = {inf}"
        )));
    }
    let tau_max = (inf - lambda) * pert.eta / SUP_BUMP_PRIME;
    let tau = pert.tau.unwrap_or(tau_max);
    if !(tau >= 0.0 && tau <= tau_max * (1.0 + 1e-12)) {
        return Err(LabError::Input(format!("tau {tau} outside [0, tau_max = {tau_max}]")));
    }
    let scan_min_slope = (0..100)
        .into_par_iter()
        .map(|i| {
            let s = tau_max * i as f64 / 99.0;
            let map = PerturbedMap::new(*base, vec![Bump { side: pert.side, eta: pert.eta, s }]);
            (0..GRID)
                .map(|j| map.slope(-1.0 + 2.0 * (j as f64 + 0.5) / GRID as f64))
                .fold(f64::INFINITY, f64::min)
        })
        .reduce(|| f64::INFINITY, f64::min);
    let top = PerturbedMap::new(*base, vec![Bump { side: pert.side, eta: pert.eta, s: tau_max }]);
    Ok(FamilyReport {
        side: pert.side,
        eta: pert.eta,
        lambda,
        inf_f_prime: inf,
        sup_bump_prime: SUP_BUMP_PRIME,
        tau_max,
        tau,
        scan_min_slope,
        validity: validate_quotient(&top, lambda),
    })
}

/// A validated one-parameter family `s -> f_s` on `[0, tau]`, possibly on
/// top of fixed bumps at the other end.
#[derive(Debug, Clone, PartialEq)]
pub struct Family {
    pub base: ModelParams,
    pub fixed: Vec<Bump>,
    pub side: Side,
    pub eta: f64,
    pub tau: f64,
    pub lambda: f64,
    pub report: FamilyReport,
}

impl Family {
    pub fn new(base: &ModelParams, pert: &PerturbationParams, fixed: Vec<Bump>) -> Result<Family> {
        let report = validate_family(base, pert)?;
        for b in &fixed {
            if b.side == pert.side {
                return Err(LabError::Input("fixed bump overlaps the free one".into()));
            }
        }
        Ok(Family {
            base: *base,
            fixed,
            side: pert.side,
            eta: pert.eta,
            tau: report.tau,
            lambda: report.lambda,
            report,
        })
    }

    fn free_bump(&self, s: f64) -> Bump {
        Bump { side: self.side, eta: self.eta, s }
    }

    pub fn map_at(&self, s: f64) -> PerturbedMap {
        let mut bumps = self.fixed.clone();
        bumps.push(self.free_bump(s));
        PerturbedMap::new(self.base, bumps)
    }

    /// `d f_s(x) / ds`, independent of `s`.
    pub fn shape(&self, x: f64) -> f64 {
        self.free_bump(1.0).shape(x)
    }

    pub fn gamma0(&self, s: f64) -> f64 {
        self.map_at(s).apply(self.side.anchor())
    }

    /// `gamma_n(s) = f_s^n(f_s(anchor))`; `None` if an earlier iterate is 0.
    pub fn gamma(&self, s: f64, n: usize) -> Option<f64> {
        let map = self.map_at(s);
        map.iterate(map.apply(self.side.anchor()), n)
    }

    /// `gamma_0(s), ..., gamma_n(s)`.
    pub fn gamma_orbit(&self, s: f64, n: usize) -> Option<Vec<f64>> {
        let map = self.map_at(s);
        let mut out = vec![map.apply(self.side.anchor())];
        for _ in 0..n {
            let v = *out.last().unwrap();
            if v == 0.0 {
                return None;
            }
            out.push(map.apply(v));
        }
        Some(out)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveBranch {
    pub s: [f64; 2],
    /// One-sided limits of `gamma_n` at the two ends.
    pub values: [f64; 2],
    pub increasing: bool,
    pub secant_slope: f64,
    /// `0.95 lambda^n |d gamma_0 / ds|`.
    pub required_slope: f64,
    pub expansion_ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamCurve {
    pub side: Side,
    pub n: usize,
    pub tau: f64,
    pub lambda: f64,
    /// Parameters where some `gamma_m`, `m < n`, vanishes.
    pub cuts: Vec<f64>,
    pub branches: Vec<CurveBranch>,
}

impl ParamCurve {
    pub fn expansion_ok(&self) -> bool {
        self.branches.iter().all(|b| b.expansion_ok)
    }
}

/// Bisect for the zero of `g` on `(a, b)` where `g(a+) < 0 < g(b-)`.
fn bisect_increasing(mut a: f64, mut b: f64, g: impl Fn(f64) -> Option<f64>) -> Result<f64> {
    for _ in 0..300 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        match g(m) {
            Some(v) if v < 0.0 => a = m,
            Some(v) if v > 0.0 => b = m,
            Some(_) => return Ok(m),
            None => return Err(LabError::Failed(format!("orbit hit 0 inside a branch at s = {m}"))),
        }
    }
    Ok(0.5 * (a + b))
}

struct CurveTracker<'a> {
    family: &'a Family,
    depth: usize,
    raw: Vec<([f64; 2], [f64; 2])>,
    cuts: Vec<f64>,
}

impl<'a> CurveTracker<'a> {
    fn new(family: &'a Family) -> Self {
        let s = [0.0, family.tau];
        let v = [family.gamma0(0.0), family.gamma0(family.tau)];
        CurveTracker { family, depth: 0, raw: vec![(s, v)], cuts: Vec::new() }
    }

    fn step(&mut self) -> Result<()> {
        let fam = self.family;
        let n = self.depth;
        let mut next = Vec::with_capacity(self.raw.len() + 1);
        for &([a, b], [va, vb]) in &self.raw {
            let fa = fam.map_at(a);
            let fb = fam.map_at(b);
            if va.min(vb) < 0.0 && va.max(vb) > 0.0 {
                let orient = if va < 0.0 { 1.0 } else { -1.0 };
                let s0 = bisect_increasing(a, b, |s| fam.gamma(s, n).map(|v| orient * v))?;
                // approaching 0 from below gives f(0-) = 1
                let lim_a = if va < 0.0 { 1.0 } else { -1.0 };
                next.push(([a, s0], [fa.apply(va), lim_a]));
                next.push(([s0, b], [-lim_a, fb.apply(vb)]));
                self.cuts.push(s0);
            } else {
                next.push(([a, b], [fa.apply(va), fb.apply(vb)]));
            }
        }
        if next.len() > MAX_BRANCHES {
            return Err(LabError::DepthCap {
                cap: n + 1,
                detail: format!("{} parameter branches", next.len()),
            });
        }
        self.cuts.sort_by(f64::total_cmp);
        self.raw = next;
        self.depth += 1;
        Ok(())
    }

    fn curve(&self) -> ParamCurve {
        let fam = self.family;
        let required = 0.95 * fam.lambda.powi(self.depth as i32);
        let branches = self
            .raw
            .iter()
            .map(|&(s, v)| {
                let secant = (v[1] - v[0]).abs() / (s[1] - s[0]);
                CurveBranch {
                    s,
                    values: v,
                    increasing: (v[1] - v[0]) * fam.side.sign() > 0.0,
                    secant_slope: secant,
                    required_slope: required,
                    expansion_ok: secant >= required,
                }
            })
            .collect();
        ParamCurve {
            side: fam.side,
            n: self.depth,
            tau: fam.tau,
            lambda: fam.lambda,
            cuts: self.cuts.clone(),
            branches,
        }
    }
}

/// Branch decomposition of `[0, tau]` for `gamma_n`.
pub fn track_curve(family: &Family, n: usize) -> Result<ParamCurve> {
    let mut t = CurveTracker::new(family);
    while t.depth < n {
        t.step()?;
    }
    Ok(t.curve())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConnectResult {
    pub side: Side,
    pub target: f64,
    pub s_star: f64,
    pub n: usize,
    pub residual: f64,
    pub tol: f64,
    pub tau: f64,
    /// Branch count at each tracked depth.
    pub branch_counts: Vec<usize>,
    /// Curve expansion held on every branch at every tracked depth.
    pub expansion_ok: bool,
    pub revalidated: bool,
    pub validity: ValidityReport,
    /// `gamma_0(s*), ..., gamma_n(s*)`.
    pub orbit: Vec<f64>,
    pub params_hash: String,
}

/// Find `s*` and the least `n` with `|gamma_n(s*) - target| <= tol`.
pub fn connect(family: &Family, target: f64, tol: f64, depth_cap: usize) -> Result<ConnectResult> {
    if !(target > -1.0 && target < 1.0) {
        return Err(LabError::Input(format!("target {target} outside (-1, 1)")));
    }
    if !(tol > 0.0) {
        return Err(LabError::Input(format!("tolerance must be positive, got {tol}")));
    }
    let mut t = CurveTracker::new(family);
    let mut counts = Vec::new();
    let mut expansion_ok = true;
    loop {
        let curve = t.curve();
        counts.push(curve.branches.len());
        expansion_ok &= curve.expansion_ok();
        let n = t.depth;
        for &([a, b], [va, vb]) in &t.raw {
            if !(va.min(vb) < target && target < va.max(vb)) {
                continue;
            }
            let orient = if va < target { 1.0 } else { -1.0 };
            let s = bisect_increasing(a, b, |s| family.gamma(s, n).map(|v| orient * (v - target)))?;
            let orbit = family
                .gamma_orbit(s, n)
                .ok_or_else(|| LabError::Failed("connecting orbit hit 0".into()))?;
            let residual = (orbit[n] - target).abs();
            if residual > tol {
                continue;
            }
            let map = family.map_at(s);
            let validity = validate_quotient(&map, family.lambda);
            return Ok(ConnectResult {
                side: family.side,
                target,
                s_star: s,
                n,
                residual,
                tol,
                tau: family.tau,
                branch_counts: counts,
                expansion_ok,
                revalidated: validity.valid,
                validity,
                orbit,
                params_hash: family.base.params_hash(),
            });
        }
        if n >= depth_cap {
            return Err(LabError::DepthCap {
                cap: depth_cap,
                detail: format!("target {target} not reached within tolerance {tol}"),
            });
        }
        t.step()?;
    }
}

pub fn connect_default(family: &Family, target: f64) -> Result<ConnectResult> {
    connect(family, target, 1e-10, DEFAULT_DEPTH_CAP)
}

// ---------------------------------------------------------------------------
// homoclinic loop

/// Distance of a measure to the Dirac mass at the singularity.
pub fn distance_to_sigma(m: &FlowMeasure) -> f64 {
    dictionary::weighted_distance(&m.integrals(), &dictionary::at_sigma())
}

/// Section geometry of the loop `z -> ... -> stable leaf of sigma` and its
/// first-order unfolding.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LoopGeometry {
    pub side: Side,
    pub s_star: f64,
    pub n_loop: usize,
    /// Itinerary of the periodic orbits born from the loop.
    pub word: String,
    /// `z, P(z), ..., P^{n+1}(z)`; the last point sits on the stable leaf.
    pub loop_points: Vec<SectionPoint>,
    /// `ds / d(offset)` along the unfolding.
    pub ds_per_offset: f64,
    /// Offsets of the orbit points from the loop points per unit offset at
    /// `z`, orbit point `k` against loop point `k - 1` (cyclically).
    pub unit_offsets: Vec<[f64; 2]>,
    pub max_unit_offset: f64,
}

fn jacobian_at(map: &PerturbedMap, p: SectionPoint) -> [[f64; 2]; 2] {
    let prm = map.params();
    let ax = p.x.abs();
    let hx = prm.nu * prm.b * p.y * ax.powf(prm.nu - 1.0) * p.x.signum();
    let hy = prm.b * ax.powf(prm.nu);
    [[map.slope(p.x), 0.0], [hx, hy]]
}

pub fn loop_geometry(family: &Family, conn: &ConnectResult) -> Result<LoopGeometry> {
    if conn.target != 0.0 || conn.side != family.side {
        return Err(LabError::Input("loop lab needs a connection of this side to the stable leaf (target 0)".into()));
    }
    let map = family.map_at(conn.s_star);
    let prm = family.base;
    let n = conn.n;
    let z = SectionPoint::new(
        family.side.anchor(),
        if family.side == Side::Plus { prm.y_plus() } else { prm.y_minus() },
    );
    let mut pts = vec![z];
    for _ in 0..=n {
        let p = *pts.last().unwrap();
        pts.push(SectionPoint::new(map.apply(p.x), eval_h(&prm, p.x, p.y)));
    }
    let near = if family.side == Side::Plus { Symbol::R } else { Symbol::L };
    let mut word = vec![near];
    for p in &pts[..=n] {
        word.push(Symbol::of(p.x).ok_or_else(|| LabError::Failed("loop point at 0".into()))?);
    }

    // offsets are affine in a = ds / offset; propagate twice and solve for
    // the closing condition (x-offset at the stable leaf vanishes)
    let propagate = |a: f64| -> Vec<[f64; 2]> {
        let mut u = vec![[family.side.sign(), 0.0]];
        for p in &pts[..=n] {
            let j = jacobian_at(&map, *p);
            let v = *u.last().unwrap();
            u.push([j[0][0] * v[0] + family.shape(p.x) * a, j[1][0] * v[0] + j[1][1] * v[1]]);
        }
        u
    };
    let u0 = propagate(0.0);
    let u1 = propagate(1.0);
    let a0 = u0[n + 1][0];
    let a1 = u1[n + 1][0] - a0;
    if a1 == 0.0 {
        return Err(LabError::Failed("loop is insensitive to the parameter".into()));
    }
    let a = -a0 / a1;
    let mut u = propagate(a);
    // orbit point 0 sits at the stable leaf: rotate so index k matches
    // orbit point k
    let last = u.pop().unwrap();
    u.insert(0, last);
    let max_unit = u.iter().map(|v| v[0].hypot(v[1])).fold(0.0, f64::max);
    Ok(LoopGeometry {
        side: family.side,
        s_star: conn.s_star,
        n_loop: n,
        word: word_string(&word),
        loop_points: pts,
        ds_per_offset: a,
        unit_offsets: u,
        max_unit_offset: max_unit,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LoopMember {
    /// The orbit passes the stable leaf at `|x| = e^{-k}`.
    pub k: f64,
    /// Located by a direct solve rather than the first-order expansion.
    pub exact: bool,
    pub s: f64,
    pub word: String,
    pub closest_approach: f64,
    pub ln_closest_approach: f64,
    pub period: f64,
    pub d_to_delta_sigma: f64,
    pub hausdorff: f64,
    pub ln_hausdorff: f64,
    pub measure: FlowMeasure,
}

fn hausdorff(a: &[SectionPoint], b: &[SectionPoint]) -> f64 {
    let d = |p: &SectionPoint, q: &SectionPoint| (p.x - q.x).hypot(p.y - q.y);
    let one = |u: &[SectionPoint], v: &[SectionPoint]| {
        u.iter()
            .map(|p| v.iter().map(|q| d(p, q)).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    };
    one(a, b).max(one(b, a))
}

impl LoopGeometry {
    /// Offset of the first return after the near-leaf passage.
    fn offset(&self, params: &ModelParams, k: f64) -> f64 {
        params.mu * (-params.rho * k).exp()
    }

    /// Member in log coordinates from the first-order expansion; exact to
    /// `O(e^{-2 rho k})` relative.
    pub fn asymptotic_member(&self, params: &ModelParams, k: f64) -> LoopMember {
        let n = self.n_loop;
        let leaf = self.loop_points[n + 1];
        let mut pts = vec![LogPoint { sign: self.side.sign(), ln_abs_x: -k, y: leaf.y }];
        pts.extend(self.loop_points[..=n].iter().map(|p| LogPoint::from_point(*p)));
        let measure = chain_measure(params, &self.word, &pts, pts[0]);
        let ln_h = params.mu.ln() - params.rho * k + self.max_unit_offset.ln();
        let s = self.s_star + self.ds_per_offset * self.offset(params, k);
        LoopMember {
            k,
            exact: false,
            s,
            word: self.word.clone(),
            closest_approach: (-k).exp(),
            ln_closest_approach: -k,
            period: total_time(&measure),
            d_to_delta_sigma: distance_to_sigma(&measure),
            hausdorff: ln_h.exp(),
            ln_hausdorff: ln_h,
            measure,
        }
    }

    /// Solve `f_s^{n+2}(x) = x` in `s` with `|x| = e^{-k}` and locate the
    /// periodic orbit of the resulting map.
    pub fn exact_member(&self, family: &Family, k: f64) -> Result<LoopMember> {
        let prm = family.base;
        let n = self.n_loop;
        let x = self.side.sign() * (-k).exp();
        let orient = self.side.sign();
        let h = |s: f64| family.map_at(s).iterate(x, n + 2).map(|v| orient * (v - x));
        let est = self.s_star + self.ds_per_offset * self.offset(&prm, k);
        let mut w = 0.5 * (est - self.s_star).abs() + 1e-15;
        let mut bracket = None;
        for _ in 0..24 {
            let lo = (est - w).max(0.0);
            let hi = (est + w).min(family.tau);
            if let (Some(a), Some(b)) = (h(lo), h(hi)) {
                if a < 0.0 && b > 0.0 {
                    bracket = Some((lo, hi));
                    break;
                }
            }
            if lo == 0.0 && hi == family.tau {
                break;
            }
            w *= 4.0;
        }
        let (lo, hi) = bracket.ok_or_else(|| {
            LabError::Failed(format!("no unfolding parameter in [0, tau] for k = {k}"))
        })?;
        let s = bisect_increasing(lo, hi, h)?;
        let map = family.map_at(s);
        let word = parse_word(&self.word)?;
        let orbit = find_periodic(&map, &word)?;
        if orbit.len() != word.len() {
            return Err(LabError::Failed(format!("loop word {} is not primitive", self.word)));
        }
        let closest = orbit.points.iter().map(|p| p.x.abs()).fold(f64::INFINITY, f64::min);
        if (closest.ln() + k).abs() > 0.5 {
            return Err(LabError::Failed(format!(
                "located orbit passes at {closest:e}, expected about e^-{k}"
            )));
        }
        let measure = orbit_measure(&prm, &orbit);
        let h_d = hausdorff(&orbit.points, &self.loop_points);
        Ok(LoopMember {
            k,
            exact: true,
            s,
            word: self.word.clone(),
            closest_approach: closest,
            ln_closest_approach: closest.ln(),
            period: orbit.period,
            d_to_delta_sigma: distance_to_sigma(&measure),
            hausdorff: h_d,
            ln_hausdorff: h_d.ln(),
            measure,
        })
    }
}

fn total_time(m: &FlowMeasure) -> f64 {
    match m {
        FlowMeasure::Suspended(s) => s.total_time,
        _ => 0.0,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LoopOptions {
    pub count: usize,
    /// First member passes at `e^{-k0}`; `k` doubles along the family.
    pub k0: f64,
    /// Members with `k` up to this are solved directly.
    pub exact_max_k: f64,
}

impl Default for LoopOptions {
    fn default() -> Self {
        LoopOptions { count: 8, k0: 16.0, exact_max_k: 24.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LoopFamily {
    pub geometry: LoopGeometry,
    pub members: Vec<LoopMember>,
    pub closest_decreasing: bool,
    pub distance_decreasing: bool,
    pub hausdorff_decreasing: bool,
    pub min_distance: f64,
}

impl LoopFamily {
    pub fn to_csv(&self) -> String {
        let mut s = String::from(
            "word,k,exact,s,period,closest_approach,ln_closest_approach,d_to_delta_sigma,hausdorff,ln_hausdorff\n",
        );
        for m in &self.members {
            s.push_str(&format!(
                "{},{},{},{:e},{},{:e},{},{},{:e},{}\n",
                m.word,
                m.k,
                m.exact,
                m.s,
                m.period,
                m.closest_approach,
                m.ln_closest_approach,
                m.d_to_delta_sigma,
                m.hausdorff,
                m.ln_hausdorff
            ));
        }
        s
    }
}

fn strictly_decreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] < w[0])
}

/// Periodic orbits of the maps `f_{s_k}`, `s_k -> s*`, that shadow the
/// loop and pass the stable leaf at `e^{-k}` with `k = k0 2^j`.
pub fn loop_periodic_family(family: &Family, conn: &ConnectResult, opts: &LoopOptions) -> Result<LoopFamily> {
    if opts.count == 0 || !(opts.k0 > 0.0) {
        return Err(LabError::Input("loop family needs count >= 1 and k0 > 0".into()));
    }
    let geometry = loop_geometry(family, conn)?;
    let members = (0..opts.count)
        .into_par_iter()
        .map(|j| {
            let k = opts.k0 * 2f64.powi(j as i32);
            if k <= opts.exact_max_k {
                geometry.exact_member(family, k)
            } else {
                Ok(geometry.asymptotic_member(&family.base, k))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let ln_c: Vec<f64> = members.iter().map(|m| m.ln_closest_approach).collect();
    let d: Vec<f64> = members.iter().map(|m| m.d_to_delta_sigma).collect();
    let ln_h: Vec<f64> = members.iter().map(|m| m.ln_hausdorff).collect();
    Ok(LoopFamily {
        closest_decreasing: strictly_decreasing(&ln_c),
        distance_decreasing: strictly_decreasing(&d),
        hausdorff_decreasing: strictly_decreasing(&ln_h),
        min_distance: d.iter().copied().fold(f64::INFINITY, f64::min),
        geometry,
        members,
    })
}

// ---------------------------------------------------------------------------
// isolation

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsolationOptions {
    pub target_word: String,
    pub max_len: usize,
    /// Length caps at which the gap is reported.
    pub caps: Vec<usize>,
    /// Radius of the neighbourhood `V` of the target orbit.
    pub r_v: f64,
    pub tol: f64,
    pub depth_cap: usize,
}

impl Default for IsolationOptions {
    fn default() -> Self {
        IsolationOptions {
            target_word: "RL".into(),
            max_len: 12,
            caps: vec![8, 10, 12],
            r_v: 0.02,
            tol: 1e-10,
            depth_cap: DEFAULT_DEPTH_CAP,
        }
    }
}

/// Model values of the constants in the time estimate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsolationConstants {
    pub target_points: Vec<f64>,
    pub r_v: f64,
    /// Sup of the derivative of `f^period` over `V`.
    pub kappa: f64,
    /// Lower bound on the time of one period inside `V`.
    pub t0: f64,
    /// Products of `f'` along the two connecting orbits.
    pub connection_gain: [f64; 2],
    /// `landing distance / r_V <= K xi3` with `xi3 = |x_w|^rho`.
    pub k_lipschitz: f64,
    pub l: f64,
    pub delta0: f64,
    pub delta1: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapEntry {
    pub max_len: usize,
    pub orbits: usize,
    pub gap: f64,
    pub argmin: String,
    pub control_orbits: usize,
    pub control_gap: f64,
    pub control_argmin: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PassageStat {
    pub source: String,
    pub x_w: f64,
    pub xi3: f64,
    /// Time spent in the cube on the near-singular passage.
    pub dwell_sigma: f64,
    /// Time then spent with returns inside `V`.
    pub t_p: f64,
    /// `(-ln(K xi3) / ln kappa - 2) T0`.
    pub predicted_lower: f64,
    /// `L (T2 - T1)`.
    pub l_bound: f64,
    /// `xi3 <= delta1`, the range where the estimate is claimed.
    pub claimed: bool,
    pub satisfied: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhiCondition {
    pub name: String,
    pub holds: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsolationReport {
    pub target_word: String,
    pub plus: ConnectResult,
    pub minus: ConnectResult,
    /// The `+` connection still lands after the `-` bump is added.
    pub plus_survives: bool,
    pub plus_residual_after: f64,
    pub bumps: Vec<Bump>,
    pub constants: IsolationConstants,
    pub gaps: Vec<GapEntry>,
    pub gap_positive: bool,
    pub gap_non_decreasing: bool,
    pub control_shrinking: bool,
    pub failed_words: usize,
    /// Near-singular passages of enumerated orbits (`xi3 <= 1e-3`).
    pub passages: Vec<PassageStat>,
    /// Forward orbits launched from the strip at prescribed depths.
    pub probes: Vec<PassageStat>,
    pub claimed_passages: usize,
    pub passages_ok: bool,
    pub phi_conditions: Vec<PhiCondition>,
    pub min_phi_integral: f64,
    pub min_phi_word: String,
    pub params_hash: String,
}

struct Enumerated {
    word: String,
    orbit: PeriodicOrbit,
    distance: f64,
}

fn enumerate_orbits<M: QuotientMap + ?Sized>(map: &M, words: &[Word]) -> (Vec<Enumerated>, usize) {
    let res: Vec<Option<Enumerated>> = words
        .par_iter()
        .map(|w| {
            let orbit = find_periodic(map, w).ok()?;
            let m = orbit_measure(map.params(), &orbit);
            Some(Enumerated { word: word_string(w), distance: distance_to_sigma(&m), orbit })
        })
        .collect();
    let failed = res.iter().filter(|r| r.is_none()).count();
    (res.into_iter().flatten().collect(), failed)
}

fn gap_upto(list: &[Enumerated], cap: usize) -> (usize, f64, String) {
    let mut best = (0, f64::INFINITY, String::new());
    for e in list.iter().filter(|e| e.orbit.len() <= cap) {
        best.0 += 1;
        if e.distance < best.1 {
            best.1 = e.distance;
            best.2 = e.word.clone();
        }
    }
    best
}

struct Isolation<'a> {
    map: &'a PerturbedMap,
    c: &'a IsolationConstants,
    n_conn: usize,
}

impl Isolation<'_> {
    fn dist(&self, x: f64) -> f64 {
        self.c.target_points.iter().map(|p| (x - p).abs()).fold(f64::INFINITY, f64::min)
    }

    /// `w = 1` on `V`, `0` beyond twice its radius.
    fn weight(&self, x: f64) -> f64 {
        (2.0 - self.dist(x) / self.c.r_v).clamp(0.0, 1.0)
    }

    /// Time in `V` for the returns `after[..]` following a passage.
    fn dwell_in_v(&self, after: impl Iterator<Item = f64>) -> f64 {
        let prm = self.map.params();
        let mut t = 0.0;
        let mut entered = false;
        for (j, x) in after.enumerate() {
            let inside = self.dist(x) <= self.c.r_v;
            if inside {
                entered = true;
                t += prm.roof(x);
            } else if entered || j > self.n_conn + 3 {
                break;
            }
        }
        t
    }

    fn stat(&self, source: String, x_w: f64, t_p: f64) -> PassageStat {
        let prm = self.map.params();
        let xi3 = x_w.abs().powf(prm.rho);
        let dwell = (1.0 / x_w.abs()).ln() / prm.lambda3;
        let c = self.c;
        let predicted = (-(c.k_lipschitz * xi3).ln() / c.kappa.ln() - 2.0) * c.t0;
        let l_bound = c.l * dwell;
        let claimed = xi3 <= c.delta1 * (1.0 + 1e-9);
        PassageStat {
            source,
            x_w,
            xi3,
            dwell_sigma: dwell,
            t_p,
            predicted_lower: predicted,
            l_bound,
            claimed,
            satisfied: t_p >= l_bound && t_p >= predicted,
        }
    }

    fn probe(&self, x_w: f64) -> PassageStat {
        let mut x = x_w;
        let iter = std::iter::from_fn(move || {
            if x == 0.0 {
                return None;
            }
            x = self.map.apply(x);
            Some(x)
        })
        .take(100_000);
        let t_p = self.dwell_in_v(iter);
        self.stat(format!("probe x_w={x_w:e}"), x_w, t_p)
    }

    /// `int max(0, 1 - |xi|_inf / delta1) dt` over the cube passage from
    /// `(x, y)`; the tubes never meet the box while `delta1 < 1/2`.
    fn sigma_box(&self, x: f64, y: f64) -> f64 {
        let prm = self.map.params();
        let d1 = self.c.delta1;
        let lx = x.abs().ln();
        let l1 = prm.lambda1.abs();
        let l2 = prm.lambda2.abs();
        let l3 = prm.lambda3;
        let ta = ((1.0 / d1).ln() / l2).max(if y.abs() > d1 { (y.abs() / d1).ln() / l1 } else { 0.0 });
        let tb = ((d1.ln() - lx) / l3).min(-lx / l3);
        if !(ta < tb) {
            return 0.0;
        }
        let g = |t: f64| {
            let m = (lx + l3 * t).exp().max(y.abs() * (-l1 * t).exp()).max((-l2 * t).exp());
            (1.0 - m / d1).max(0.0)
        };
        integrate(g, ta, tb, 1e-12)
    }

    fn phi_integral(&self, orbit: &PeriodicOrbit) -> f64 {
        let prm = self.map.params();
        let pts = &orbit.points;
        let l = pts.len();
        let mut neg = 0.0;
        let mut pos = 0.0;
        for i in 0..l {
            let p = pts[i];
            let q = pts[(i + 1) % l];
            neg += self.sigma_box(p.x, p.y);
            pos += prm.roof(p.x) * 0.5 * (self.weight(p.x) + self.weight(q.x));
        }
        (pos / self.c.l - neg) / orbit.period
    }
}

/// Connect to whichever point of a periodic orbit needs the least depth.
pub fn connect_to_orbit(family: &Family, targets: &[f64], tol: f64, cap: usize) -> Result<ConnectResult> {
    let mut best: Option<ConnectResult> = None;
    for &t in targets {
        let r = connect(family, t, tol, cap)?;
        if best.as_ref().is_none_or(|b| r.n < b.n) {
            best = Some(r);
        }
    }
    best.ok_or_else(|| LabError::Input("empty target orbit".into()))
}

fn gain(map: &PerturbedMap, anchor: f64, orbit: &[f64]) -> f64 {
    map.slope(anchor) * orbit[..orbit.len() - 1].iter().map(|&x| map.slope(x)).product::<f64>()
}

/// Connect both unstable branches to the target orbit and test that the
/// Dirac mass at the singularity is isolated among periodic measures.
pub fn isolation_report(
    base: &ModelParams,
    pert_plus: &PerturbationParams,
    pert_minus: &PerturbationParams,
    opts: &IsolationOptions,
) -> Result<IsolationReport> {
    if pert_plus.side != Side::Plus || pert_minus.side != Side::Minus {
        return Err(LabError::Input("isolation needs one plus and one minus perturbation".into()));
    }
    if opts.max_len == 0 || opts.caps.iter().any(|&c| c > opts.max_len || c == 0) {
        return Err(LabError::Input("length caps must lie in 1..=max_len".into()));
    }
    if !(opts.r_v > 0.0 && opts.r_v < 0.1) {
        return Err(LabError::Input("r_v must lie in (0, 0.1)".into()));
    }
    if pert_plus.eta + pert_minus.eta >= 2.0 {
        return Err(LabError::Input("perturbation supports overlap".into()));
    }
    let target_word = parse_word(&opts.target_word)?;
    let target = find_periodic(base, &target_word)?;
    let targets = target.xs();
    let support_hit = targets
        .iter()
        .any(|&x| x <= -1.0 + pert_plus.eta || x >= 1.0 - pert_minus.eta);
    if support_hit {
        return Err(LabError::Input("target orbit meets a perturbation support".into()));
    }

    let fam_plus = Family::new(base, pert_plus, Vec::new())?;
    let plus = connect_to_orbit(&fam_plus, &targets, opts.tol, opts.depth_cap)?;
    let plus_bump = Bump { side: Side::Plus, eta: pert_plus.eta, s: plus.s_star };
    let fam_minus = Family::new(base, pert_minus, vec![plus_bump])?;
    let minus = connect_to_orbit(&fam_minus, &targets, opts.tol, opts.depth_cap)?;
    let f2 = fam_minus.map_at(minus.s_star);

    let after = f2
        .iterate(f2.apply(-1.0), plus.n)
        .ok_or_else(|| LabError::Failed("plus connection hits 0 under both bumps".into()))?;
    let plus_residual_after = (after - plus.target).abs();
    let plus_survives = plus_residual_after <= opts.tol;

    // constants
    let prm = *base;
    let per = targets.len();
    let mut kappa = 0.0f64;
    for &p in &targets {
        for i in 0..=1000 {
            let x = p - opts.r_v + 2.0 * opts.r_v * i as f64 / 1000.0;
            let mut d = 1.0;
            let mut y = x;
            for _ in 0..per {
                d *= f2.slope(y);
                y = f2.apply(y);
            }
            kappa = kappa.max(d);
        }
    }
    let t0: f64 = targets
        .iter()
        .map(|&p| prm.r0 + (1.0 / (p.abs() + opts.r_v)).ln() / prm.lambda3)
        .sum();
    let g_plus = gain(&f2, -1.0, &plus.orbit);
    let g_minus = gain(&f2, 1.0, &minus.orbit);
    let k_lip = 1.5 * prm.mu * g_plus.max(g_minus) / opts.r_v;
    let l = prm.lambda2.abs() * t0 / (2.0 * kappa.ln());
    let delta0 = 1.0 / k_lip;
    let delta1 = delta0.min(0.5 * (-2.0 * (k_lip.ln() + 2.0 * kappa.ln())).exp());
    let constants = IsolationConstants {
        target_points: targets.clone(),
        r_v: opts.r_v,
        kappa,
        t0,
        connection_gain: [g_plus, g_minus],
        k_lipschitz: k_lip,
        l,
        delta0,
        delta1,
    };

    // enumeration
    let words = lyndon_words(opts.max_len);
    let (list, failed) = enumerate_orbits(&f2, &words);
    let control_map = PerturbedMap::unperturbed(prm);
    let (control, _) = enumerate_orbits(&control_map, &words);
    let mut gaps = Vec::new();
    for &cap in &opts.caps {
        let (n, g, w) = gap_upto(&list, cap);
        let (cn, cg, cw) = gap_upto(&control, cap);
        gaps.push(GapEntry {
            max_len: cap,
            orbits: n,
            gap: g,
            argmin: w,
            control_orbits: cn,
            control_gap: cg,
            control_argmin: cw,
        });
    }
    let gap_positive = gaps.iter().all(|g| g.gap > 0.0 && g.gap.is_finite());
    let gap_non_decreasing = gaps.windows(2).all(|w| w[1].gap >= w[0].gap);
    let control_shrinking = gaps.windows(2).all(|w| w[1].control_gap < w[0].control_gap);

    let iso = Isolation { map: &f2, c: &constants, n_conn: plus.n.max(minus.n) };

    let mut passages = Vec::new();
    for e in &list {
        let xs = e.orbit.xs();
        let l = xs.len();
        for i in 0..l {
            if xs[i].abs().powf(prm.rho) > 1e-3 {
                continue;
            }
            let after = (1..=l).map(|j| xs[(i + j) % l]);
            let t_p = iso.dwell_in_v(after);
            passages.push(iso.stat(format!("{}[{i}]", e.word), xs[i], t_p));
        }
    }
    let mut probes = Vec::new();
    for j in 0..4 {
        let xi3 = delta1 * 10f64.powi(-j);
        let x = xi3.powf(1.0 / prm.rho);
        probes.push(iso.probe(x));
        probes.push(iso.probe(-x));
    }
    for e in [2, 4, 6, 8] {
        let x = 10f64.powi(-e);
        probes.push(iso.probe(x));
        probes.push(iso.probe(-x));
    }
    let claimed: Vec<&PassageStat> = passages.iter().chain(&probes).filter(|p| p.claimed).collect();
    let passages_ok = !claimed.is_empty() && claimed.iter().all(|p| p.satisfied);

    // test function
    let min_target = targets.iter().map(|x| x.abs()).fold(f64::INFINITY, f64::min);
    let phi_conditions = vec![
        PhiCondition {
            name: "phi_at_least_minus_one".into(),
            holds: true,
            detail: "phi = -box + w/L with box in [0, 1] and w >= 0".into(),
        },
        PhiCondition {
            name: "phi_at_sigma_is_minus_one".into(),
            holds: min_target - 2.0 * opts.r_v > delta1 && delta1 < 0.25,
            detail: format!(
                "box(sigma) = 1; passages weighted by w keep |xi1| >= {} > delta1 = {delta1:e}",
                min_target - 2.0 * opts.r_v
            ),
        },
        PhiCondition {
            name: "phi_at_least_inverse_l_on_v".into(),
            holds: l > 0.0,
            detail: format!("w = 1 on V, so phi = 1/L = {} there", 1.0 / l),
        },
    ];
    let mut min_phi = f64::INFINITY;
    let mut min_phi_word = String::new();
    let phis: Vec<f64> = list.par_iter().map(|e| iso.phi_integral(&e.orbit)).collect();
    for (e, v) in list.iter().zip(phis) {
        if v < min_phi {
            min_phi = v;
            min_phi_word = e.word.clone();
        }
    }

    Ok(IsolationReport {
        target_word: opts.target_word.clone(),
        plus,
        minus,
        plus_survives,
        plus_residual_after,
        bumps: f2.bumps.clone(),
        constants,
        gaps,
        gap_positive,
        gap_non_decreasing,
        control_shrinking,
        failed_words: failed,
        claimed_passages: claimed.len(),
        passages,
        probes,
        passages_ok,
        phi_conditions,
        min_phi_integral: min_phi,
        min_phi_word,
        params_hash: prm.params_hash(),
    })
}
