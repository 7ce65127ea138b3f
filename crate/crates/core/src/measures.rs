//! Flow-invariant measures of the suspension: periodic, empirical and
//! horseshoe Bernoulli measures, the dictionary weak* distance, entropy,
//! convex combinations and support coverage.
//!
//! A suspended measure is stored as section atoms with roof weights together
//! with its dictionary integrals `∫ g_k dμ`, which is all the distance needs.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dictionary::{self, DICT_LEN};
use crate::error::{LabError, Result};
use crate::expanding_map::{ModelParams, QuotientMap};
use crate::return_map::{cycle_trace, eval_h, integrate_trace, passage_integrals_to, SectionPoint};
use crate::symbolic::{
    build_horseshoe, find_periodic, lyndon_words, HorseshoeCert, PeriodicOrbit, Symbol, Word,
};

/// One section atom of a suspended measure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub x: f64,
    pub y: f64,
    /// `ln |x|`, kept separately so atoms beyond `f64` range stay usable.
    pub ln_abs_x: f64,
    pub roof: f64,
    /// Share of flow time spent on the passage starting at this atom.
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Suspended {
    pub label: String,
    pub atoms: Vec<Atom>,
    /// Mass carried by `δσ` after convex combination.
    pub singular_mass: f64,
    pub integrals: [f64; DICT_LEN],
    /// Total flow time of the underlying orbit segment.
    pub total_time: f64,
    pub truncated: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant")]
pub enum FlowMeasure {
    /// The Dirac measure at the singularity.
    Atomic,
    Suspended(Suspended),
    /// Bernoulli(t) measure on a horseshoe, through its integrals only.
    Bernoulli {
        t: f64,
        block_p: String,
        block_q: String,
        m: usize,
        integrals: [f64; DICT_LEN],
    },
}

impl FlowMeasure {
    pub fn integrals(&self) -> [f64; DICT_LEN] {
        match self {
            FlowMeasure::Atomic => dictionary::at_sigma(),
            FlowMeasure::Suspended(s) => s.integrals,
            FlowMeasure::Bernoulli { integrals, .. } => *integrals,
        }
    }

    pub fn variant(&self) -> &'static str {
        match self {
            FlowMeasure::Atomic => "atomic",
            FlowMeasure::Suspended(_) => "suspended",
            FlowMeasure::Bernoulli { .. } => "bernoulli",
        }
    }

    pub fn atoms(&self) -> &[Atom] {
        match self {
            FlowMeasure::Suspended(s) => &s.atoms,
            _ => &[],
        }
    }

    /// Atom table as CSV `x,y,weight` under a one-line JSON header.
    pub fn to_csv(&self, params_hash: &str, seed: Option<u64>) -> String {
        let header = serde_json::json!({
            "variant": self.variant(),
            "params_hash": params_hash,
            "seed": seed,
        });
        let mut out = format!("# {header}\nx,y,weight\n");
        match self {
            FlowMeasure::Atomic => out.push_str("0,0,1\n"),
            FlowMeasure::Suspended(s) => {
                for a in &s.atoms {
                    out.push_str(&format!("{},{},{}\n", a.x, a.y, a.weight));
                }
            }
            FlowMeasure::Bernoulli { .. } => {}
        }
        out
    }
}

pub fn weak_star_distance(m1: &FlowMeasure, m2: &FlowMeasure) -> f64 {
    dictionary::weighted_distance(&m1.integrals(), &m2.integrals())
}

/// A cycle point in log coordinates: `x = sign e^{ln_abs_x}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogPoint {
    pub sign: f64,
    pub ln_abs_x: f64,
    pub y: f64,
}

impl LogPoint {
    pub fn from_point(p: SectionPoint) -> Self {
        LogPoint { sign: p.x.signum(), ln_abs_x: p.x.abs().ln(), y: p.y }
    }

    pub fn x(&self) -> f64 {
        self.sign * self.ln_abs_x.exp()
    }

    fn landing(&self) -> [f64; 3] {
        [self.x(), self.y, 1.0]
    }
}

/// Per-passage integrals and roofs along a chain of section points, where
/// passage `k` runs from `pts[k]` to `pts[k + 1]`.
fn chain_integrals(params: &ModelParams, pts: &[LogPoint], next: &[LogPoint]) -> Vec<[f64; DICT_LEN]> {
    pts.par_iter()
        .zip(next.par_iter())
        .map(|(p, q)| passage_integrals_to(params, p.sign, p.ln_abs_x, p.y, q.landing()))
        .collect()
}

/// Deterministic pairwise sum of integral vectors.
fn pairwise_sum(v: &[[f64; DICT_LEN]]) -> [f64; DICT_LEN] {
    match v.len() {
        0 => [0.0; DICT_LEN],
        1 => v[0],
        n => {
            let (a, b) = v.split_at(n / 2);
            let sa = pairwise_sum(a);
            let sb = pairwise_sum(b);
            let mut out = [0.0; DICT_LEN];
            for k in 0..DICT_LEN {
                out[k] = sa[k] + sb[k];
            }
            out
        }
    }
}

/// Suspended measure of the finite chain `pts[0] -> pts[1] -> ...`, the last
/// passage landing on `last_landing` (the first point for a cycle).
pub fn chain_measure(params: &ModelParams, label: &str, pts: &[LogPoint], last_landing: LogPoint) -> FlowMeasure {
    let mut next: Vec<LogPoint> = pts[1..].to_vec();
    next.push(last_landing);
    let per = chain_integrals(params, pts, &next);
    let total = pairwise_sum(&per);
    let roofs: Vec<f64> = pts.iter().map(|p| params.roof_from_ln(p.ln_abs_x)).collect();
    let time: f64 = roofs.iter().sum();
    let mut integrals = [0.0; DICT_LEN];
    for k in 0..DICT_LEN {
        integrals[k] = total[k] / time;
    }
    let atoms = pts
        .iter()
        .zip(&roofs)
        .map(|(p, &r)| Atom { x: p.x(), y: p.y, ln_abs_x: p.ln_abs_x, roof: r, weight: r / time })
        .collect();
    FlowMeasure::Suspended(Suspended {
        label: label.to_string(),
        atoms,
        singular_mass: 0.0,
        integrals,
        total_time: time,
        truncated: false,
    })
}

pub fn orbit_measure(params: &ModelParams, orbit: &PeriodicOrbit) -> FlowMeasure {
    let pts: Vec<LogPoint> = orbit.points.iter().map(|p| LogPoint::from_point(*p)).collect();
    chain_measure(params, &orbit.word, &pts, pts[0])
}

/// Equidistributed measure on the periodic orbit of `word`.
pub fn periodic_flow_measure<M: QuotientMap + ?Sized>(map: &M, word: &[Symbol]) -> Result<FlowMeasure> {
    let orbit = find_periodic(map, word)?;
    Ok(orbit_measure(map.params(), &orbit))
}

/// Dictionary integrals of a periodic orbit by adaptive quadrature along the
/// full trace, divided by the period. Independent of [`orbit_measure`].
pub fn periodic_integrals_by_trace(params: &ModelParams, orbit: &PeriodicOrbit) -> Result<[f64; DICT_LEN]> {
    let trace = cycle_trace(params, &orbit.points)?;
    let total = integrate_trace(params, &trace);
    let time = trace.duration();
    let mut out = [0.0; DICT_LEN];
    for k in 0..DICT_LEN {
        out[k] = total[k] / time;
    }
    Ok(out)
}

/// Roof-weighted measure on the first `n_returns` section iterates of `x0`.
pub fn empirical_flow_measure<M: QuotientMap + ?Sized>(map: &M, x0: SectionPoint, n_returns: usize) -> Result<FlowMeasure> {
    if n_returns == 0 {
        return Err(LabError::Input("n_returns must be positive".into()));
    }
    let params = map.params();
    if x0.x == 0.0 {
        return Err(LabError::StableLeaf);
    }
    let mut pts = Vec::with_capacity(n_returns);
    let mut z = x0;
    let mut truncated = false;
    let mut landing = z;
    for _ in 0..n_returns {
        if z.x.abs() < crate::symbolic::GRAZING {
            truncated = true;
            break;
        }
        pts.push(LogPoint::from_point(z));
        z = SectionPoint::new(map.apply(z.x), eval_h(params, z.x, z.y));
        landing = z;
    }
    if pts.is_empty() {
        return Err(LabError::StableLeaf);
    }
    let last = if truncated { *pts.last().expect("nonempty") } else { LogPoint::from_point(landing) };
    let mut m = chain_measure(params, "empirical", &pts, last);
    if let FlowMeasure::Suspended(s) = &mut m {
        s.truncated = truncated;
    }
    Ok(m)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Approximation {
    pub word: String,
    pub word_len: usize,
    pub window: usize,
    pub distance: f64,
    pub closing_gap: f64,
}

/// Close up the orbit segment behind `target` into a periodic orbit whose
/// measure is within `tol` of the target.
pub fn approximate_by_periodic<M: QuotientMap + ?Sized>(map: &M, target: &FlowMeasure, tol: f64) -> Result<Approximation> {
    let atoms = match target {
        FlowMeasure::Suspended(s) if !s.atoms.is_empty() => &s.atoms,
        _ => return Err(LabError::Input("target must be built from a finite orbit".into())),
    };
    let n = atoms.len();
    let xs: Vec<f64> = atoms.iter().map(|a| a.x).collect();
    let syms: Vec<Symbol> = xs.iter().map(|&x| if x < 0.0 { Symbol::L } else { Symbol::R }).collect();
    let x_end = map.apply(xs[n - 1]);
    let x_at = |k: usize| if k < n { xs[k] } else { x_end };
    let mut cands: Vec<(f64, usize)> = Vec::new();
    for l in n.div_ceil(2).max(1)..=n {
        let look = 20.min(n - l);
        if (0..look).all(|i| syms[l + i] == syms[i]) {
            cands.push(((x_at(l) - xs[0]).abs(), l));
        }
    }
    cands.sort_by(|a, b| a.0.total_cmp(&b.0).then(b.1.cmp(&a.1)));
    let mut best: Option<Approximation> = None;
    for &(gap, l) in cands.iter().take(6) {
        let word: Word = syms[..l].to_vec();
        let Ok(orbit) = find_periodic(map, &word) else { continue };
        let mu = orbit_measure(map.params(), &orbit);
        let d = weak_star_distance(&mu, target);
        let cand = Approximation { word: orbit.word.clone(), word_len: orbit.len(), window: l, distance: d, closing_gap: gap };
        if best.as_ref().is_none_or(|b| d < b.distance) {
            best = Some(cand);
        }
        if d <= tol.min(1e-12) {
            break;
        }
    }
    match best {
        Some(b) if b.distance <= tol => Ok(b),
        Some(b) => Err(LabError::Failed(format!(
            "best closing word has length {} (window {}) at distance {:.3e} > tol {:e}",
            b.word_len, b.window, b.distance, tol
        ))),
        None => Err(LabError::Failed("no admissible closing word in the orbit segment".into())),
    }
}

/// One primitive necklace of block sequences, located as a periodic orbit.
#[derive(Debug, Clone, PartialEq)]
struct Necklace {
    /// Number of `q` blocks in the full length-`m` sequence.
    k: usize,
    /// Passes of the primitive orbit per necklace word.
    reps: f64,
    orbit: PeriodicOrbit,
    integrals: [f64; DICT_LEN],
}

/// Exact cylinder-weighted sums over all length-`m` block sequences,
/// aggregated by the number of `q` blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct BernoulliTables {
    pub m: usize,
    pub len_p: usize,
    pub len_q: usize,
    pub block_p: String,
    pub block_q: String,
    /// `Σ` of time integrals over sequences with `k` q-blocks.
    pub i_k: Vec<[f64; DICT_LEN]>,
    /// `Σ` of periods over sequences with `k` q-blocks.
    pub p_k: Vec<f64>,
    pub truncation_bound: f64,
    necklaces: Vec<Necklace>,
}

pub const MAX_BLOCK_DEPTH: usize = 16;
pub const PATH_TARGET_ERROR: f64 = 1e-6;

/// Sequence depth for the Bernoulli averages: the smallest `m` with
/// `λ0^{-l_min (m-1)} <= 1e-6`, capped at [`MAX_BLOCK_DEPTH`].
pub fn choose_depth(params: &ModelParams, cert: &HorseshoeCert) -> usize {
    let lmin = cert.block_p.len().min(cert.block_q.len()) as f64;
    let rate = params.lambda0().ln() * lmin;
    let m = 1.0 + (1.0 / PATH_TARGET_ERROR).ln() / rate;
    (m.ceil() as usize).clamp(1, MAX_BLOCK_DEPTH)
}

pub fn bernoulli_tables<M: QuotientMap + ?Sized>(map: &M, cert: &HorseshoeCert, m: usize) -> Result<BernoulliTables> {
    if m == 0 {
        return Err(LabError::Input("sequence depth must be positive".into()));
    }
    let params = map.params();
    let bp = crate::symbolic::parse_word(&cert.block_p)?;
    let bq = crate::symbolic::parse_word(&cert.block_q)?;
    let mut roots: Vec<(usize, Word)> = Vec::new();
    for d in (1..=m).filter(|d| m.is_multiple_of(*d)) {
        for lw in lyndon_words(d).into_iter().filter(|w| w.len() == d) {
            roots.push((m / d, lw));
        }
    }
    let necklaces: Result<Vec<Necklace>> = roots
        .par_iter()
        .map(|(mult, lw)| {
            let mut word: Word = Vec::new();
            let mut qs = 0;
            for s in lw {
                if *s == Symbol::R {
                    qs += 1;
                    word.extend(&bq);
                } else {
                    word.extend(&bp);
                }
            }
            let orbit = find_periodic(map, &word)?;
            let reps = word.len() as f64 / orbit.len() as f64;
            let pts: Vec<LogPoint> = orbit.points.iter().map(|p| LogPoint::from_point(*p)).collect();
            let mut next = pts[1..].to_vec();
            next.push(pts[0]);
            let sum = pairwise_sum(&chain_integrals(params, &pts, &next));
            Ok(Necklace { k: qs * mult, reps, orbit, integrals: sum })
        })
        .collect();
    let necklaces = necklaces?;
    let mut i_k = vec![[0.0; DICT_LEN]; m + 1];
    let mut p_k = vec![0.0; m + 1];
    for nk in &necklaces {
        // each necklace stands for d rotations, each (m/d) passes of the root word
        let f = m as f64 * nk.reps;
        for k in 0..DICT_LEN {
            i_k[nk.k][k] += f * nk.integrals[k];
        }
        p_k[nk.k] += f * nk.orbit.period;
    }
    let lmin = bp.len().min(bq.len()) as f64;
    Ok(BernoulliTables {
        m,
        len_p: bp.len(),
        len_q: bq.len(),
        block_p: cert.block_p.clone(),
        block_q: cert.block_q.clone(),
        i_k,
        p_k,
        truncation_bound: params.lambda0().powf(-lmin * (m as f64 - 1.0)),
        necklaces,
    })
}

impl BernoulliTables {
    fn weights(&self, t: f64) -> Vec<f64> {
        let m = self.m as i32;
        (0..=self.m).map(|k| t.powi(k as i32) * (1.0 - t).powi(m - k as i32)).collect()
    }

    pub fn integrals(&self, t: f64) -> [f64; DICT_LEN] {
        let w = self.weights(t);
        let time: f64 = w.iter().zip(&self.p_k).map(|(a, b)| a * b).sum();
        let mut out = [0.0; DICT_LEN];
        for k in 0..DICT_LEN {
            out[k] = w.iter().zip(&self.i_k).map(|(a, v)| a * v[k]).sum::<f64>() / time;
        }
        out
    }

    /// Expected flow time per block under Bernoulli(t).
    pub fn mean_block_roof(&self, t: f64) -> f64 {
        let w = self.weights(t);
        w.iter().zip(&self.p_k).map(|(a, b)| a * b).sum::<f64>() / self.m as f64
    }

    pub fn mean_block_len(&self, t: f64) -> f64 {
        (1.0 - t) * self.len_p as f64 + t * self.len_q as f64
    }

    pub fn measure(&self, t: f64) -> FlowMeasure {
        FlowMeasure::Bernoulli {
            t,
            block_p: self.block_p.clone(),
            block_q: self.block_q.clone(),
            m: self.m,
            integrals: self.integrals(t),
        }
    }

    /// The Bernoulli(t) measure as weighted section atoms of all the
    /// periodic orbits used in the averages.
    pub fn atoms(&self, params: &ModelParams, t: f64) -> Vec<Atom> {
        let w = self.weights(t);
        let time: f64 = w.iter().zip(&self.p_k).map(|(a, b)| a * b).sum();
        let mut out = Vec::new();
        for nk in &self.necklaces {
            let f = self.m as f64 * nk.reps * w[nk.k] / time;
            if f == 0.0 {
                continue;
            }
            for p in &nk.orbit.points {
                let lx = p.x.abs().ln();
                let roof = params.roof_from_ln(lx);
                out.push(Atom { x: p.x, y: p.y, ln_abs_x: lx, roof, weight: f * roof });
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathPoint {
    pub t: f64,
    pub integrals: [f64; DICT_LEN],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasurePath {
    pub horseshoe: HorseshoeCert,
    pub m: usize,
    pub truncation_bound: f64,
    pub steps: usize,
    pub points: Vec<PathPoint>,
    pub step_distances: Vec<f64>,
    pub max_step: f64,
    /// `max_step * steps`, the sampled modulus of continuity.
    pub modulus: f64,
    pub endpoint_error_p: f64,
    pub endpoint_error_q: f64,
}

/// Discrete path `t_j = j / steps` of Bernoulli measures on the horseshoe
/// of `word_p` and `word_q`.
pub fn measure_path<M: QuotientMap + ?Sized>(
    map: &M,
    word_p: &[Symbol],
    word_q: &[Symbol],
    steps: usize,
    depth: Option<usize>,
) -> Result<MeasurePath> {
    if steps == 0 {
        return Err(LabError::Input("steps must be positive".into()));
    }
    let cert = build_horseshoe(map, word_p, word_q)?;
    let m = depth.unwrap_or_else(|| choose_depth(map.params(), &cert));
    let tables = bernoulli_tables(map, &cert, m)?;
    path_from_tables(map, cert, &tables, steps)
}

pub fn path_from_tables<M: QuotientMap + ?Sized>(
    map: &M,
    cert: HorseshoeCert,
    tables: &BernoulliTables,
    steps: usize,
) -> Result<MeasurePath> {
    let points: Vec<PathPoint> = (0..=steps)
        .map(|j| {
            let t = j as f64 / steps as f64;
            PathPoint { t, integrals: tables.integrals(t) }
        })
        .collect();
    let step_distances: Vec<f64> = points
        .windows(2)
        .map(|w| dictionary::weighted_distance(&w[0].integrals, &w[1].integrals))
        .collect();
    let max_step = step_distances.iter().copied().fold(0.0, f64::max);
    let mu_p = periodic_flow_measure(map, &crate::symbolic::parse_word(&cert.word_p)?)?;
    let mu_q = periodic_flow_measure(map, &crate::symbolic::parse_word(&cert.word_q)?)?;
    let endpoint_error_p = dictionary::weighted_distance(&points[0].integrals, &mu_p.integrals());
    let endpoint_error_q = dictionary::weighted_distance(&points[steps].integrals, &mu_q.integrals());
    Ok(MeasurePath {
        horseshoe: cert,
        m: tables.m,
        truncation_bound: tables.truncation_bound,
        steps,
        points,
        step_distances,
        max_step,
        modulus: max_step * steps as f64,
        endpoint_error_p,
        endpoint_error_q,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum EntropySpec {
    Periodic { word: String },
    Bernoulli { word_p: String, word_q: String, t: f64, m: Option<usize> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyReport {
    /// Entropy of the section map per return.
    pub h_map: f64,
    /// Flow entropy, `h_map` renormalized by mean return time.
    pub h_flow: f64,
    pub mean_block_len: f64,
    pub mean_block_roof: f64,
}

/// `-t ln t - (1-t) ln(1-t)`.
pub fn binary_entropy(t: f64) -> f64 {
    let term = |p: f64| if p > 0.0 { -p * p.ln() } else { 0.0 };
    term(t) + term(1.0 - t)
}

/// Map-level entropy of Bernoulli(t) on blocks of section lengths `len_p`,
/// `len_q`.
pub fn bernoulli_map_entropy(t: f64, len_p: usize, len_q: usize) -> f64 {
    binary_entropy(t) / ((1.0 - t) * len_p as f64 + t * len_q as f64)
}

pub fn entropy_of<M: QuotientMap + ?Sized>(map: &M, spec: &EntropySpec) -> Result<EntropyReport> {
    match spec {
        EntropySpec::Periodic { word } => {
            let orbit = find_periodic(map, &crate::symbolic::parse_word(word)?)?;
            Ok(EntropyReport {
                h_map: 0.0,
                h_flow: 0.0,
                mean_block_len: orbit.len() as f64,
                mean_block_roof: orbit.period,
            })
        }
        EntropySpec::Bernoulli { word_p, word_q, t, m } => {
            if !(0.0..=1.0).contains(t) {
                return Err(LabError::Input(format!("t = {t} is outside [0, 1]")));
            }
            let wp = crate::symbolic::parse_word(word_p)?;
            let wq = crate::symbolic::parse_word(word_q)?;
            let cert = build_horseshoe(map, &wp, &wq)?;
            let depth = m.unwrap_or_else(|| choose_depth(map.params(), &cert).min(8));
            let tables = bernoulli_tables(map, &cert, depth)?;
            let h_map = bernoulli_map_entropy(*t, tables.len_p, tables.len_q);
            let roof = tables.mean_block_roof(*t);
            Ok(EntropyReport {
                h_map,
                h_flow: binary_entropy(*t) / roof,
                mean_block_len: tables.mean_block_len(*t),
                mean_block_roof: roof,
            })
        }
    }
}

/// Convex combination; `δσ` contributes through its dictionary values and
/// the singular mass.
pub fn convex_combine(measures: &[FlowMeasure], weights: &[f64]) -> Result<FlowMeasure> {
    if measures.is_empty() || measures.len() != weights.len() {
        return Err(LabError::Input("one weight per measure is required".into()));
    }
    if weights.iter().any(|w| !(*w > 0.0)) || (weights.iter().sum::<f64>() - 1.0).abs() > 1e-12 {
        return Err(LabError::Input("weights must be positive and sum to 1".into()));
    }
    if measures.len() == 1 {
        return Ok(measures[0].clone());
    }
    let mut integrals = [0.0; DICT_LEN];
    let mut atoms = Vec::new();
    let mut singular = 0.0;
    let mut time = 0.0;
    for (m, &w) in measures.iter().zip(weights) {
        let v = m.integrals();
        for k in 0..DICT_LEN {
            integrals[k] += w * v[k];
        }
        match m {
            FlowMeasure::Atomic => singular += w,
            FlowMeasure::Suspended(s) => {
                singular += w * s.singular_mass;
                time += w * s.total_time;
                atoms.extend(s.atoms.iter().map(|a| Atom { weight: a.weight * w, ..*a }));
            }
            FlowMeasure::Bernoulli { .. } => {}
        }
    }
    Ok(FlowMeasure::Suspended(Suspended {
        label: "combination".into(),
        atoms,
        singular_mass: singular,
        integrals,
        total_time: time,
        truncated: false,
    }))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageReport {
    pub eps: f64,
    pub cells: usize,
    pub covered: usize,
    pub coverage: f64,
}

/// Fraction of the `eps`-grid (cell centres) over `[-1, 1] x [-c-b, c+b]`
/// whose max-norm `eps`-ball contains an atom.
pub fn support_coverage(params: &ModelParams, atoms: &[Atom], eps: f64) -> Result<CoverageReport> {
    if !(eps > 0.0) {
        return Err(LabError::Input("eps must be positive".into()));
    }
    let h = params.c + params.b;
    let nx = (2.0 / eps).ceil().max(1.0) as usize;
    let ny = (2.0 * h / eps).ceil().max(1.0) as usize;
    let (dx, dy) = (2.0 / nx as f64, 2.0 * h / ny as f64);
    let mut occupied = vec![false; nx * ny];
    // bucket atoms by the grid cell they fall in, then dilate
    let mut hits: Vec<(usize, usize)> = Vec::new();
    for a in atoms {
        let i = (((a.x + 1.0) / dx).floor() as i64).clamp(0, nx as i64 - 1) as usize;
        let j = (((a.y + h) / dy).floor() as i64).clamp(0, ny as i64 - 1) as usize;
        hits.push((i, j));
    }
    hits.sort_unstable();
    hits.dedup();
    let rx = (eps / dx).ceil() as i64 + 1;
    let ry = (eps / dy).ceil() as i64 + 1;
    let mut by_cell: std::collections::HashMap<(usize, usize), Vec<(f64, f64)>> = std::collections::HashMap::new();
    for a in atoms {
        let i = (((a.x + 1.0) / dx).floor() as i64).clamp(0, nx as i64 - 1) as usize;
        let j = (((a.y + h) / dy).floor() as i64).clamp(0, ny as i64 - 1) as usize;
        by_cell.entry((i, j)).or_default().push((a.x, a.y));
    }
    for &(i, j) in &hits {
        let pts = &by_cell[&(i, j)];
        for di in -rx..=rx {
            for dj in -ry..=ry {
                let (ci, cj) = (i as i64 + di, j as i64 + dj);
                if ci < 0 || cj < 0 || ci >= nx as i64 || cj >= ny as i64 {
                    continue;
                }
                let idx = ci as usize * ny + cj as usize;
                if occupied[idx] {
                    continue;
                }
                let cx = -1.0 + (ci as f64 + 0.5) * dx;
                let cy = -h + (cj as f64 + 0.5) * dy;
                if pts.iter().any(|&(x, y)| (x - cx).abs() <= eps && (y - cy).abs() <= eps) {
                    occupied[idx] = true;
                }
            }
        }
    }
    let covered = occupied.iter().filter(|&&b| b).count();
    Ok(CoverageReport { eps, cells: nx * ny, covered, coverage: covered as f64 / (nx * ny) as f64 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::parse_word;
    use approx::assert_abs_diff_eq;

    fn w(s: &str) -> Word {
        parse_word(s).unwrap()
    }

    #[test]
    fn rl_measure_basics() {
        let p = ModelParams::default();
        let mu = periodic_flow_measure(&p, &w("RL")).unwrap();
        let FlowMeasure::Suspended(s) = &mu else { panic!() };
        assert_abs_diff_eq!(s.total_time, 3.309_815_688_228_126, epsilon = 1e-12);
        assert_abs_diff_eq!(s.integrals[1], 1.0, epsilon = 1e-12);
        // xi1 is member 4
        assert_abs_diff_eq!(s.integrals[4], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(s.atoms.iter().map(|a| a.weight).sum::<f64>(), 1.0, epsilon = 1e-15);
        assert_eq!(weak_star_distance(&mu, &mu), 0.0);
        assert_eq!(weak_star_distance(&FlowMeasure::Atomic, &FlowMeasure::Atomic), 0.0);
        assert!(weak_star_distance(&FlowMeasure::Atomic, &mu) > 0.1);
        assert_eq!(s.integrals[0], 0.0);
    }

    #[test]
    fn trace_and_atoms_agree() {
        let p = ModelParams::default();
        for word in ["RL", "RLL", "RLLRL", "RRLRLL"] {
            let o = find_periodic(&p, &w(word)).unwrap();
            let a = orbit_measure(&p, &o).integrals();
            let b = periodic_integrals_by_trace(&p, &o).unwrap();
            for k in 0..DICT_LEN {
                assert_abs_diff_eq!(a[k], b[k], epsilon = 1e-8);
            }
        }
    }

    #[test]
    fn combination_is_linear() {
        let p = ModelParams::default();
        let mu = periodic_flow_measure(&p, &w("RL")).unwrap();
        let half = convex_combine(&[mu.clone(), FlowMeasure::Atomic], &[0.5, 0.5]).unwrap();
        let d_half = weak_star_distance(&half, &FlowMeasure::Atomic);
        assert_abs_diff_eq!(d_half, 0.5 * weak_star_distance(&mu, &FlowMeasure::Atomic), epsilon = 1e-14);
        assert_eq!(convex_combine(&[mu.clone()], &[1.0]).unwrap(), mu);
        assert!(convex_combine(&[mu.clone()], &[0.4]).is_err());
    }

    #[test]
    fn entropy_examples() {
        let p = ModelParams::default();
        let per = entropy_of(&p, &EntropySpec::Periodic { word: "RLL".into() }).unwrap();
        assert_eq!(per.h_map, 0.0);
        assert_eq!(per.h_flow, 0.0);
        assert_abs_diff_eq!(bernoulli_map_entropy(0.5, 2, 3), 2f64.ln() / 2.5, epsilon = 1e-15);
        assert_eq!(bernoulli_map_entropy(0.0, 2, 3), 0.0);
        assert_eq!(bernoulli_map_entropy(1.0, 2, 3), 0.0);
        let spec = EntropySpec::Bernoulli { word_p: "RL".into(), word_q: "RLL".into(), t: 2.0, m: Some(4) };
        assert!(entropy_of(&p, &spec).is_err());
    }

    #[test]
    fn path_endpoints() {
        let p = ModelParams::default();
        let path = measure_path(&p, &w("RL"), &w("RLL"), 10, Some(6)).unwrap();
        assert!(path.endpoint_error_p <= 1e-8, "{}", path.endpoint_error_p);
        assert!(path.endpoint_error_q <= 1e-8, "{}", path.endpoint_error_q);
        assert_eq!(path.points.len(), 11);
    }

    #[test]
    fn empirical_on_periodic_point() {
        let p = ModelParams::default();
        let o = find_periodic(&p, &w("RL")).unwrap();
        let mu = orbit_measure(&p, &o);
        let e = empirical_flow_measure(&p, o.points[0], 10).unwrap();
        assert!(weak_star_distance(&mu, &e) <= 1e-12);
        let a = approximate_by_periodic(&p, &mu, 1e-10).unwrap();
        assert_eq!(a.word, "RL");
        assert!(a.distance <= 1e-10);
    }

    #[test]
    fn coverage_examples() {
        let p = ModelParams::default();
        let mu = periodic_flow_measure(&p, &w("RL")).unwrap();
        let low = support_coverage(&p, mu.atoms(), 0.1).unwrap();
        assert!(low.coverage < 0.05);
        let all = support_coverage(&p, mu.atoms(), 2.0).unwrap();
        assert_eq!(all.coverage, 1.0);
    }

    #[test]
    fn csv_has_header() {
        let p = ModelParams::default();
        let mu = periodic_flow_measure(&p, &w("RL")).unwrap();
        let csv = mu.to_csv(&p.params_hash(), Some(7));
        let mut lines = csv.lines();
        let head: serde_json::Value = serde_json::from_str(lines.next().unwrap().trim_start_matches("# ")).unwrap();
        assert_eq!(head["variant"], "suspended");
        assert_eq!(lines.next().unwrap(), "x,y,weight");
        assert_eq!(lines.count(), 2);
    }
}
