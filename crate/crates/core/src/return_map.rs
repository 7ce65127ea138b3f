//! The Poincaré return map `P(x, y) = (f(x), H(x, y))`, its cone field, the
//! axiom checks of a geometric Lorenz attractor, and the explicit
//! cube-and-tube flow whose first-return map is `P`.
//!
//! Inside the unit cube around the singularity the flow is linear,
//! `xi(t) = (x e^{lambda3 t}, y e^{lambda1 t}, e^{lambda2 t})`, entering on
//! the top face `xi3 = 1` (which is the cross section) and leaving through
//! `|xi1| = 1`. A tube then carries the exit point affinely back to the top
//! face in time `r0`.

use serde::{Deserialize, Serialize};

use crate::dictionary::{self, DICT_LEN, SIGMA_RADIUS};
use crate::error::{LabError, Result};
use crate::expanding_map::{validate_map, Check, ModelParams, QuotientMap, SQRT2};
use crate::quadrature::{integrate_vec, GaussLegendre};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SectionPoint {
    pub x: f64,
    pub y: f64,
}

impl SectionPoint {
    pub fn new(x: f64, y: f64) -> Self {
        SectionPoint { x, y }
    }

    /// Ambient position on the top face of the cube.
    pub fn ambient(&self) -> [f64; 3] {
        [self.x, self.y, 1.0]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TangentVector {
    pub base: SectionPoint,
    pub a: f64,
    pub b: f64,
}

/// Cone aperture used throughout, `1/(sqrt2 - 1)`.
pub fn default_alpha() -> f64 {
    1.0 / (SQRT2 - 1.0)
}

fn check_section_point(params: &ModelParams, p: SectionPoint) -> Result<()> {
    if !(p.x.is_finite() && p.y.is_finite()) {
        return Err(LabError::Input("section point is not finite".into()));
    }
    if p.x == 0.0 {
        return Err(LabError::StableLeaf);
    }
    let r = params.radius();
    if p.x.abs() > r || p.y.abs() > r {
        return Err(LabError::Domain(format!("({}, {}) lies outside the section", p.x, p.y)));
    }
    Ok(())
}

/// `H(x, y) = -sign(x) c + b y |x|^nu`.
pub fn eval_h(params: &ModelParams, x: f64, y: f64) -> f64 {
    -x.signum() * params.c + params.b * y * x.abs().powf(params.nu)
}

pub fn eval_p(params: &ModelParams, p: SectionPoint) -> Result<SectionPoint> {
    check_section_point(params, p)?;
    Ok(SectionPoint::new(params.apply(p.x), eval_h(params, p.x, p.y)))
}

/// Limit of `P` at `0+` (`from_above`) or `0-`: the points `z+` and `z-`.
pub fn z_limit(params: &ModelParams, from_above: bool) -> SectionPoint {
    if from_above {
        SectionPoint::new(-1.0, params.y_plus())
    } else {
        SectionPoint::new(1.0, params.y_minus())
    }
}

/// `DP(p)` as `[[f', 0], [dH/dx, dH/dy]]`.
pub fn jacobian_p(params: &ModelParams, p: SectionPoint) -> Result<[[f64; 2]; 2]> {
    check_section_point(params, p)?;
    let ax = p.x.abs();
    let hx = params.nu * params.b * p.y * ax.powf(params.nu - 1.0) * p.x.signum();
    let hy = params.b * ax.powf(params.nu);
    Ok([[params.slope(p.x), 0.0], [hx, hy]])
}

pub fn push_forward(params: &ModelParams, v: TangentVector) -> Result<TangentVector> {
    let j = jacobian_p(params, v.base)?;
    Ok(TangentVector {
        base: eval_p(params, v.base)?,
        a: j[0][0] * v.a + j[0][1] * v.b,
        b: j[1][0] * v.a + j[1][1] * v.b,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConeReport {
    pub pass: bool,
    pub alpha: f64,
    pub sharpened_alpha: f64,
    pub worst_ratio: f64,
    pub worst_point: SectionPoint,
    pub points_checked: usize,
    pub params_hash: String,
}

/// Check `DP(C_alpha) ⊆ C_alpha` on a `grid_size x grid_size` grid, and
/// record the worst slope `|b|/|a|` of the images of `(1, ±alpha)`.
pub fn check_cone_invariance(params: &ModelParams, alpha: f64, grid_size: usize) -> Result<ConeReport> {
    params.ensure_finite()?;
    if !(alpha >= default_alpha() * (1.0 - 1e-15)) {
        return Err(LabError::Input(format!(
            "cone aperture {alpha} is below 1/(sqrt2 - 1)"
        )));
    }
    if grid_size == 0 {
        return Err(LabError::Input("grid size must be positive".into()));
    }
    let r = params.radius();
    let mut worst = 0.0f64;
    let mut worst_point = SectionPoint::new(r, r);
    let mut count = 0;
    for i in 0..grid_size {
        let x = -r + 2.0 * r * (i as f64 + 0.5) / grid_size as f64;
        if x.abs() < 1e-6 {
            continue;
        }
        for j in 0..grid_size {
            let y = -r + 2.0 * r * (j as f64 + 0.5) / grid_size as f64;
            let p = SectionPoint::new(x, y);
            let jac = jacobian_p(params, p)?;
            for s in [alpha, -alpha] {
                let a = jac[0][0];
                let b = jac[1][0] + jac[1][1] * s;
                let ratio = b.abs() / a.abs();
                if ratio > worst {
                    worst = ratio;
                    worst_point = p;
                }
            }
            count += 1;
        }
    }
    let sharpened = SQRT2 * alpha / params.lambda0();
    Ok(ConeReport {
        pass: worst <= alpha && worst <= sharpened * (1.0 + 1e-9),
        alpha,
        sharpened_alpha: sharpened,
        worst_ratio: worst,
        worst_point,
        points_checked: count,
        params_hash: params.params_hash(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub valid: bool,
    pub sup_dh_dy: f64,
    pub sup_dh_dx: f64,
    pub checks: Vec<Check>,
    pub params_hash: String,
}

/// Verify the return-map axioms plus the eigenvalue relations of the model
/// and aggregate [`validate_map`].
pub fn check_lorenz_axioms(params: &ModelParams, grid_size: usize) -> Result<AxiomReport> {
    params.ensure_finite()?;
    let p = params;
    let r = p.radius();
    let mut checks = Vec::new();

    checks.push(Check::new(
        "eigenvalue_order",
        (p.lambda2 - p.lambda1).min(-p.lambda2).min(p.lambda3),
        format!("lambda = ({}, {}, {})", p.lambda1, p.lambda2, p.lambda3),
    ));
    checks.push(Check::new(
        "lambda1_plus_lambda3_negative",
        -(p.lambda1 + p.lambda3),
        format!("lambda1 + lambda3 = {}", p.lambda1 + p.lambda3),
    ));
    checks.push(Check::new(
        "lambda2_plus_lambda3_positive",
        p.lambda2 + p.lambda3,
        format!("lambda2 + lambda3 = {}", p.lambda2 + p.lambda3),
    ));
    let rho_gap = (p.rho + p.lambda2 / p.lambda3).abs();
    checks.push(Check::new(
        "rho_matches_eigenvalues",
        1e-12 - rho_gap,
        format!("|rho + lambda2/lambda3| = {rho_gap}"),
    ));
    let nu_gap = (p.nu + p.lambda1 / p.lambda3).abs();
    checks.push(Check::new(
        "nu_matches_eigenvalues",
        1e-12 - nu_gap,
        format!("|nu + lambda1/lambda3| = {nu_gap}"),
    ));
    checks.push(Check::new("r0_positive", p.r0, format!("r0 = {}", p.r0)));
    checks.push(Check::new(
        "b_below_c",
        (p.c - p.b).min(p.b),
        format!("b = {}, c = {}", p.b, p.c),
    ));
    checks.push(Check::new(
        "b_plus_c_below_one",
        1.0 - p.b - p.c,
        format!("b + c = {}", p.b + p.c),
    ));

    // closed-form suprema over |x|, |y| <= r
    let sup_y_xnu = r * r.powf(p.nu);
    let sign_margin = p.c - p.b * sup_y_xnu;
    checks.push(Check::new(
        "h_sign_pattern",
        sign_margin,
        format!("sup_(x>0) H = {}", -sign_margin),
    ));
    let sup_hy = p.b * r.powf(p.nu);
    checks.push(Check::new(
        "sup_dh_dy_below_one",
        1.0 - sup_hy,
        format!("sup |dH/dy| = {sup_hy}"),
    ));
    let sup_hx = p.nu * p.b * r * r.powf(p.nu - 1.0);
    checks.push(Check::new(
        "sup_dh_dx_bounded",
        if sup_hx.is_finite() && p.nu >= 1.0 { 1.0 } else { -1.0 },
        format!("K = sup |dH/dx| = {sup_hx}"),
    ));
    let sup_h = p.c + p.b * sup_y_xnu;
    checks.push(Check::new(
        "image_height_below_one",
        1.0 - sup_h,
        format!("sup |H| = {sup_h}"),
    ));

    let mut grid_sign = f64::INFINITY;
    let mut grid_height = 0.0f64;
    let n = grid_size.max(1);
    for i in 0..n {
        let x = -r + 2.0 * r * (i as f64 + 0.5) / n as f64;
        if x.abs() < 1e-6 {
            continue;
        }
        for j in 0..n {
            let y = -r + 2.0 * r * (j as f64 + 0.5) / n as f64;
            let h = eval_h(p, x, y);
            grid_sign = grid_sign.min(-x.signum() * h);
            grid_height = grid_height.max(h.abs());
        }
    }
    checks.push(Check::new(
        "grid_h_sign",
        grid_sign,
        format!("grid min of -sign(x) H = {grid_sign}"),
    ));
    checks.push(Check::new(
        "grid_image_height",
        1.0 - grid_height,
        format!("grid sup |H| = {grid_height}"),
    ));

    let map = validate_map(p)?;
    for mut c in map.checks {
        c.name = format!("map_{}", c.name);
        checks.push(c);
    }

    Ok(AxiomReport {
        valid: checks.iter().all(|c| c.pass),
        sup_dh_dy: sup_hy,
        sup_dh_dx: sup_hx,
        checks,
        params_hash: p.params_hash(),
    })
}

/// One piece of a flow orbit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Segment {
    /// Linear flow inside the cube from `(sign e^{ln_abs_x}, y, 1)`.
    Cube {
        sign: f64,
        ln_abs_x: f64,
        y: f64,
        dwell: f64,
    },
    /// Straight line from `start` to `end` in time `dwell`.
    Tube {
        start: [f64; 3],
        end: [f64; 3],
        dwell: f64,
    },
}

impl Segment {
    pub fn dwell(&self) -> f64 {
        match *self {
            Segment::Cube { dwell, .. } | Segment::Tube { dwell, .. } => dwell,
        }
    }

    /// Ambient position at local time `t` in `[0, dwell]`.
    pub fn position(&self, params: &ModelParams, t: f64) -> [f64; 3] {
        match *self {
            Segment::Cube { sign, ln_abs_x, y, .. } => [
                sign * (ln_abs_x + params.lambda3 * t).exp(),
                y * (params.lambda1 * t).exp(),
                (params.lambda2 * t).exp(),
            ],
            Segment::Tube { start, end, dwell } => {
                let u = if dwell > 0.0 { t / dwell } else { 0.0 };
                [
                    start[0] + u * (end[0] - start[0]),
                    start[1] + u * (end[1] - start[1]),
                    start[2] + u * (end[2] - start[2]),
                ]
            }
        }
    }

    pub fn start(&self, params: &ModelParams) -> [f64; 3] {
        self.position(params, 0.0)
    }

    pub fn end(&self, params: &ModelParams) -> [f64; 3] {
        match *self {
            Segment::Cube { sign, ln_abs_x, y, .. } => cube_exit(params, sign, ln_abs_x, y),
            Segment::Tube { end, .. } => end,
        }
    }
}

/// Exit point `(sign, y |x|^nu, |x|^rho)` of the cube passage.
pub fn cube_exit(params: &ModelParams, sign: f64, ln_abs_x: f64, y: f64) -> [f64; 3] {
    [sign, y * (params.nu * ln_abs_x).exp(), (params.rho * ln_abs_x).exp()]
}

/// Affine tube map from the exit face back to the top face.
pub fn tube_map(params: &ModelParams, exit: [f64; 3]) -> [f64; 3] {
    let s = exit[0].signum();
    [s * (params.mu * exit[2] - 1.0), -s * params.c + params.b * exit[1], 1.0]
}

/// The two segments of one return starting from `(sign e^{ln_abs_x}, y)`.
pub fn passage_segments(params: &ModelParams, sign: f64, ln_abs_x: f64, y: f64) -> [Segment; 2] {
    let exit = cube_exit(params, sign, ln_abs_x, y);
    passage_segments_to(params, sign, ln_abs_x, y, tube_map(params, exit))
}

/// Like [`passage_segments`] but with the tube ending at `landing`. A
/// perturbed quotient map changes only where the tube lands.
pub fn passage_segments_to(params: &ModelParams, sign: f64, ln_abs_x: f64, y: f64, landing: [f64; 3]) -> [Segment; 2] {
    let dwell = -ln_abs_x / params.lambda3;
    let exit = cube_exit(params, sign, ln_abs_x, y);
    [
        Segment::Cube { sign, ln_abs_x, y, dwell },
        Segment::Tube { start: exit, end: landing, dwell: params.r0 },
    ]
}

/// Trace of a periodic cycle: passage `k` starts at `points[k]` and its tube
/// lands on `points[k + 1]` (cyclically).
pub fn cycle_trace(params: &ModelParams, points: &[SectionPoint]) -> Result<OrbitTrace> {
    let l = points.len();
    let mut segments = Vec::with_capacity(2 * l);
    for k in 0..l {
        check_section_point(params, points[k])?;
        let next = points[(k + 1) % l];
        let p = points[k];
        segments.extend(passage_segments_to(params, p.x.signum(), p.x.abs().ln(), p.y, next.ambient()));
    }
    Ok(OrbitTrace { start: points[0], segments })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitTrace {
    pub start: SectionPoint,
    pub segments: Vec<Segment>,
}

impl OrbitTrace {
    pub fn duration(&self) -> f64 {
        self.segments.iter().map(|s| s.dwell()).sum()
    }

    /// Section points hit at the end of each tube.
    pub fn landings(&self) -> Vec<SectionPoint> {
        self.segments
            .iter()
            .filter_map(|s| match s {
                Segment::Tube { end, .. } => Some(SectionPoint::new(end[0], end[1])),
                _ => None,
            })
            .collect()
    }

    /// Sampled path as CSV rows `t,xi1,xi2,xi3`.
    pub fn to_csv(&self, params: &ModelParams, samples_per_segment: usize) -> String {
        let mut out = String::from("t,xi1,xi2,xi3\n");
        let mut t0 = 0.0;
        let k = samples_per_segment.max(1);
        for seg in &self.segments {
            let d = seg.dwell();
            for i in 0..=k {
                let t = d * i as f64 / k as f64;
                let q = seg.position(params, t);
                out.push_str(&format!("{},{},{},{}\n", t0 + t, q[0], q[1], q[2]));
            }
            t0 += d;
        }
        out
    }
}

pub fn one_return_trace(params: &ModelParams, p: SectionPoint) -> Result<OrbitTrace> {
    check_section_point(params, p)?;
    Ok(OrbitTrace {
        start: p,
        segments: passage_segments(params, p.x.signum(), p.x.abs().ln(), p.y).to_vec(),
    })
}

/// Trace of `n` consecutive returns. Stops early (with an error) if an
/// iterate lands on the stable leaf.
pub fn orbit_trace(params: &ModelParams, p: SectionPoint, n: usize) -> Result<OrbitTrace> {
    let mut segments = Vec::with_capacity(2 * n);
    let mut z = p;
    for _ in 0..n {
        let one = one_return_trace(params, z)?;
        z = one.landings()[0];
        segments.extend(one.segments);
    }
    Ok(OrbitTrace { start: p, segments })
}

/// Absolute tolerance for trace quadrature.
pub const TRACE_TOL: f64 = 1e-9;

/// All dictionary time integrals along a trace by adaptive quadrature.
pub fn integrate_trace(params: &ModelParams, trace: &OrbitTrace) -> [f64; DICT_LEN] {
    let mut total = [0.0; DICT_LEN];
    let n = trace.segments.len().max(1) as f64;
    for seg in &trace.segments {
        let v = integrate_vec(
            |t, out| dictionary::eval_all(seg.position(params, t), out),
            0.0,
            seg.dwell(),
            DICT_LEN,
            TRACE_TOL / n,
            48,
        );
        for k in 0..DICT_LEN {
            total[k] += v[k];
        }
    }
    total
}

/// `∫ g_index dt` along the trace.
pub fn integrate_test_function(params: &ModelParams, trace: &OrbitTrace, index: usize) -> Result<f64> {
    if index >= DICT_LEN {
        return Err(LabError::Input(format!(
            "test function {index} is not in the dictionary (0..{DICT_LEN})"
        )));
    }
    Ok(integrate_trace(params, trace)[index])
}

/// Dictionary integrals over one passage, computed independently of
/// [`integrate_trace`]: the Chebyshev members on the cube are finite sums
/// of exponentials with closed-form integrals, the tube members are
/// polynomials of degree at most 3 in time, and the singular bump is
/// integrated by Gauss–Legendre on the exact sub-interval where it is
/// positive. Works in `ln |x|` so that entries arbitrarily close to the
/// stable leaf are representable.
pub fn passage_integrals(params: &ModelParams, sign: f64, ln_abs_x: f64, y: f64) -> [f64; DICT_LEN] {
    let exit = cube_exit(params, sign, ln_abs_x, y);
    passage_integrals_to(params, sign, ln_abs_x, y, tube_map(params, exit))
}

/// [`passage_integrals`] with the tube ending at `landing`.
pub fn passage_integrals_to(params: &ModelParams, sign: f64, ln_abs_x: f64, y: f64, landing: [f64; 3]) -> [f64; DICT_LEN] {
    let [cube, tube] = passage_segments_to(params, sign, ln_abs_x, y, landing);
    let mut out = cube_closed_form(params, sign, ln_abs_x, y, cube.dwell());
    let tv = tube_integrals(&tube);
    for k in 0..DICT_LEN {
        out[k] += tv[k];
    }
    out
}

fn gl20() -> &'static GaussLegendre {
    static RULE: std::sync::OnceLock<GaussLegendre> = std::sync::OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(20))
}

fn gl4() -> &'static GaussLegendre {
    static RULE: std::sync::OnceLock<GaussLegendre> = std::sync::OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(4))
}

/// `∫_0^T e^{a + rate t} dt` with `a + rate T <= 0` guaranteed by callers.
fn exp_integral(a: f64, rate: f64, t_end: f64) -> f64 {
    if rate == 0.0 {
        return a.exp() * t_end;
    }
    let rt = rate * t_end;
    if rt > 1.0 {
        ((a + rt).exp() - a.exp()) / rate
    } else {
        a.exp() * rt.exp_m1() / rate
    }
}

fn cube_closed_form(params: &ModelParams, sign: f64, lx: f64, y: f64, dwell: f64) -> [f64; DICT_LEN] {
    let (l1, l2, l3) = (params.lambda1, params.lambda2, params.lambda3);
    let mut out = [0.0; DICT_LEN];
    for (m, [i, j, k]) in dictionary::chebyshev_triples().iter().enumerate() {
        let (ci, cj, ck) = (
            dictionary::chebyshev_coeffs(*i),
            dictionary::chebyshev_coeffs(*j),
            dictionary::chebyshev_coeffs(*k),
        );
        let mut s = 0.0;
        for p in 0..=*i {
            if ci[p] == 0.0 {
                continue;
            }
            for q in 0..=*j {
                if cj[q] == 0.0 {
                    continue;
                }
                for r in 0..=*k {
                    if ck[r] == 0.0 {
                        continue;
                    }
                    let coef = ci[p] * cj[q] * ck[r] * sign.powi(p as i32) * y.powi(q as i32);
                    if coef == 0.0 {
                        continue;
                    }
                    let rate = p as f64 * l3 + q as f64 * l1 + r as f64 * l2;
                    s += coef * exp_integral(p as f64 * lx, rate, dwell);
                }
            }
        }
        out[m + 1] = s;
    }
    out[0] = cube_sigma_bump(params, lx, y, dwell);
    out
}

/// `∫ max(0, 1 - |xi(t)|/R) dt` over the cube passage. `|xi|^2` is a sum of
/// exponentials in `t`, hence convex, so the positive set is an interval.
fn cube_sigma_bump(params: &ModelParams, lx: f64, y: f64, dwell: f64) -> f64 {
    let norm2 = |t: f64| {
        (2.0 * (lx + params.lambda3 * t)).exp()
            + y * y * (2.0 * params.lambda1 * t).exp()
            + (2.0 * params.lambda2 * t).exp()
    };
    let r2 = SIGMA_RADIUS * SIGMA_RADIUS;
    // golden-section search for the minimum of the convex function
    let (mut a, mut b) = (0.0, dwell);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (norm2(c), norm2(d));
    for _ in 0..200 {
        if b - a < 1e-13 * (1.0 + dwell) {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = norm2(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = norm2(d);
        }
    }
    let tmin = 0.5 * (a + b);
    if norm2(tmin) >= r2 {
        return 0.0;
    }
    let t1 = if norm2(0.0) < r2 { 0.0 } else { root_monotone(|t| r2 - norm2(t), 0.0, tmin) };
    let t2 = if norm2(dwell) < r2 { dwell } else { root_monotone(|t| norm2(t) - r2, tmin, dwell) };
    let panels = ((t2 - t1) / 0.25).ceil().max(1.0) as usize;
    gl20().integrate(|t| 1.0 - norm2(t).sqrt() / SIGMA_RADIUS, t1, t2, panels)
}

/// Root of an increasing function on `[a, b]` that changes sign.
fn root_monotone(g: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        if g(m) < 0.0 {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

fn tube_integrals(tube: &Segment) -> [f64; DICT_LEN] {
    let (start, end, dwell) = match *tube {
        Segment::Tube { start, end, dwell } => (start, end, dwell),
        _ => unreachable!(),
    };
    let mut out = [0.0; DICT_LEN];
    let mut buf = [0.0; DICT_LEN];
    let rule = gl4();
    for (u, w) in rule.nodes.iter().zip(&rule.weights) {
        let s = 0.5 * (u + 1.0);
        let q = [
            start[0] + s * (end[0] - start[0]),
            start[1] + s * (end[1] - start[1]),
            start[2] + s * (end[2] - start[2]),
        ];
        dictionary::eval_all(q, &mut buf);
        for k in 1..DICT_LEN {
            out[k] += 0.5 * w * buf[k] * dwell;
        }
    }
    // |start + s (end - start)|^2 = A s^2 + B s + C
    let dv = [end[0] - start[0], end[1] - start[1], end[2] - start[2]];
    let qa = dv.iter().map(|v| v * v).sum::<f64>();
    let qb = 2.0 * (0..3).map(|i| start[i] * dv[i]).sum::<f64>();
    let qc = start.iter().map(|v| v * v).sum::<f64>();
    let r2 = SIGMA_RADIUS * SIGMA_RADIUS;
    if qa > 0.0 {
        let disc = qb * qb - 4.0 * qa * (qc - r2);
        if disc > 0.0 {
            let sq = disc.sqrt();
            let s1 = ((-qb - sq) / (2.0 * qa)).max(0.0);
            let s2 = ((-qb + sq) / (2.0 * qa)).min(1.0);
            if s2 > s1 {
                let f = |s: f64| (1.0 - (qa * s * s + qb * s + qc).max(0.0).sqrt() / SIGMA_RADIUS).max(0.0);
                out[0] = dwell * gl20().integrate(f, s1, s2, 4);
            }
        }
    }
    out
}
