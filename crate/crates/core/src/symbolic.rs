//! Symbolic dynamics of the quotient map: itineraries, kneading sequences,
//! cylinders, periodic orbits, horseshoes and homoclinic witnesses.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::expanding_map::{
    bisect_zero, onto_certificate, Branch, BranchTracker, Interval, QuotientMap, DEFAULT_DEPTH_CAP,
};
use crate::return_map::{eval_h, SectionPoint};

/// Orbits closer than this to the stable leaf carry no reliable symbol.
pub const GRAZING: f64 = 1e-14;
/// Longest word located by cylinder bisection; longer words use backward
/// contraction along inverse branches.
pub const BISECTION_MAX_LEN: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Symbol {
    L,
    R,
}

impl Symbol {
    pub fn of(x: f64) -> Option<Symbol> {
        Branch::of(x).map(Symbol::from)
    }

    pub fn flip(self) -> Symbol {
        match self {
            Symbol::L => Symbol::R,
            Symbol::R => Symbol::L,
        }
    }

    pub fn branch(self) -> Branch {
        match self {
            Symbol::L => Branch::Left,
            Symbol::R => Branch::Right,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Symbol::L => 'L',
            Symbol::R => 'R',
        }
    }
}

impl From<Branch> for Symbol {
    fn from(b: Branch) -> Self {
        match b {
            Branch::Left => Symbol::L,
            Branch::Right => Symbol::R,
        }
    }
}

pub type Word = Vec<Symbol>;

pub fn parse_word(s: &str) -> Result<Word> {
    let w: Result<Word> = s
        .trim()
        .chars()
        .map(|c| match c {
            'L' | 'l' => Ok(Symbol::L),
            'R' | 'r' => Ok(Symbol::R),
            _ => Err(LabError::Input(format!("word {s:?} has a symbol outside {{L, R}}"))),
        })
        .collect();
    let w = w?;
    if w.is_empty() {
        return Err(LabError::Input("empty word".into()));
    }
    Ok(w)
}

pub fn word_string(w: &[Symbol]) -> String {
    w.iter().map(|s| s.as_char()).collect()
}

pub fn flip_word(w: &[Symbol]) -> Word {
    w.iter().map(|s| s.flip()).collect()
}

/// Shortest `u` with `w = u^k`.
pub fn primitive_root(w: &[Symbol]) -> Word {
    let n = w.len();
    for d in 1..=n {
        if n % d == 0 && (d..n).all(|i| w[i] == w[i - d]) {
            return w[..d].to_vec();
        }
    }
    w.to_vec()
}

/// Lexicographically least rotation.
pub fn canonical_rotation(w: &[Symbol]) -> Word {
    (0..w.len())
        .map(|r| w[r..].iter().chain(&w[..r]).copied().collect::<Word>())
        .min()
        .unwrap_or_default()
}

/// All Lyndon words (primitive necklace representatives) of length
/// `1..=max_len`, by Duval's algorithm.
pub fn lyndon_words(max_len: usize) -> Vec<Word> {
    let mut out = Vec::new();
    if max_len == 0 {
        return out;
    }
    let mut w: Vec<usize> = vec![0];
    while !w.is_empty() {
        out.push(w.iter().map(|&v| if v == 0 { Symbol::L } else { Symbol::R }).collect());
        let m = w.len();
        while w.len() < max_len {
            let v = w[w.len() - m];
            w.push(v);
        }
        while let Some(&last) = w.last() {
            if last == 1 {
                w.pop();
            } else {
                break;
            }
        }
        if let Some(last) = w.last_mut() {
            *last += 1;
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Itinerary {
    pub word: String,
    pub hit_zero: bool,
}

impl fmt::Display for Itinerary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.word)?;
        if self.hit_zero {
            write!(f, "*")?;
        }
        Ok(())
    }
}

/// Symbols of `x, f(x), ..., f^{n-1}(x)`.
pub fn itinerary_of<M: QuotientMap + ?Sized>(map: &M, x: f64, n: usize) -> Itinerary {
    let mut word = String::with_capacity(n);
    let mut z = x;
    for _ in 0..n {
        if z.abs() < GRAZING {
            return Itinerary { word, hit_zero: true };
        }
        word.push(if z < 0.0 { 'L' } else { 'R' });
        z = map.apply(z);
    }
    Itinerary { word, hit_zero: false }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KneadingData {
    pub k_plus: Itinerary,
    pub k_minus: Itinerary,
    pub depth: usize,
}

/// Itineraries of the critical values `-1 = f(0+)` and `+1 = f(0-)`.
pub fn kneading<M: QuotientMap + ?Sized>(map: &M, depth: usize) -> KneadingData {
    KneadingData {
        k_plus: itinerary_of(map, map.limit_right(), depth),
        k_minus: itinerary_of(map, map.limit_left(), depth),
        depth,
    }
}

/// Points of `target` whose first `|word|` iterates follow `word`.
pub fn pullback<M: QuotientMap + ?Sized>(map: &M, word: &[Symbol], target: Interval) -> Option<Interval> {
    let mut j = target;
    for &s in word.iter().rev() {
        let (rlo, rhi) = map.branch_range(s.branch());
        let lo = j.lo.max(rlo);
        let hi = j.hi.min(rhi);
        if !(lo < hi) {
            return None;
        }
        let a = map.inverse(s.branch(), lo)?;
        let b = map.inverse(s.branch(), hi)?;
        if !(a < b) {
            return None;
        }
        j = Interval { lo: a, hi: b };
    }
    Some(j)
}

/// The cylinder of `word`, or `None` when the word is inadmissible.
pub fn cylinder_of<M: QuotientMap + ?Sized>(map: &M, word: &[Symbol]) -> Option<Interval> {
    pullback(map, word, Interval { lo: -1.0, hi: 1.0 })
}

/// Image of the cylinder under `f^{|word|}`, with one-sided limits at 0.
fn cylinder_image<M: QuotientMap + ?Sized>(map: &M, word: &[Symbol]) -> Option<Interval> {
    let mut a = Interval { lo: -1.0, hi: 1.0 };
    for &s in word {
        let (dlo, dhi) = map.branch_domain(s.branch());
        let lo = a.lo.max(dlo);
        let hi = a.hi.min(dhi);
        if !(lo < hi) {
            return None;
        }
        a = Interval { lo: map.apply_endpoint(lo, true), hi: map.apply_endpoint(hi, false) };
    }
    Some(a)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodicOrbit {
    /// Primitive word, starting at `points[0]`.
    pub word: String,
    pub points: Vec<SectionPoint>,
    /// `(f^l)'(x_0)`.
    pub multiplier: f64,
    pub ln_multiplier: f64,
    /// Flow period, the sum of roof times.
    pub period: f64,
    /// `max_k |f(x_k) - x_{k+1}|` around the cycle.
    pub residual_x: f64,
    /// `|H-cycle(y_0) - y_0|`.
    pub residual_y: f64,
}

impl PeriodicOrbit {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn xs(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.x).collect()
    }
}

/// Locate the periodic orbit with itinerary `word^∞`.
pub fn find_periodic<M: QuotientMap + ?Sized>(map: &M, word: &[Symbol]) -> Result<PeriodicOrbit> {
    if word.is_empty() {
        return Err(LabError::Input("empty word".into()));
    }
    let w = primitive_root(word);
    let name = word_string(&w);
    let xs = if w.len() <= BISECTION_MAX_LEN {
        let x0 = bisect_on_cylinder(map, &w, &name)?;
        let mut xs = forward_cycle(map, &w, x0);
        for _ in 0..4 {
            backward_sweep(map, &w, &mut xs);
        }
        xs
    } else {
        backward_contraction(map, &w, &name)?
    };
    finish_orbit(map, &w, name, xs)
}

fn bisect_on_cylinder<M: QuotientMap + ?Sized>(map: &M, w: &[Symbol], name: &str) -> Result<f64> {
    let cyl = cylinder_of(map, w).ok_or_else(|| LabError::Inadmissible(name.to_string()))?;
    let img = cylinder_image(map, w).ok_or_else(|| LabError::Inadmissible(name.to_string()))?;
    // f^l - id at the two ends of the cylinder
    if !(img.lo < cyl.lo && img.hi > cyl.hi) {
        return Err(LabError::NoPeriodicPoint(name.to_string()));
    }
    let l = w.len();
    let g = |x: f64| match map.iterate(x, l) {
        Some(v) => v - x,
        None => 0.0,
    };
    Ok(bisect_zero(g, cyl.lo, cyl.hi))
}

fn forward_cycle<M: QuotientMap + ?Sized>(map: &M, w: &[Symbol], x0: f64) -> Vec<f64> {
    let mut xs = Vec::with_capacity(w.len());
    let mut z = x0;
    for _ in 0..w.len() {
        xs.push(z);
        z = if z == 0.0 { 0.0 } else { map.apply(z) };
    }
    xs
}

/// One pass `x_k = f_{w_k}^{-1}(x_{k+1})` around the cycle. Returns false
/// if some inverse had to be clamped to the branch range.
fn backward_sweep<M: QuotientMap + ?Sized>(map: &M, w: &[Symbol], xs: &mut [f64]) -> bool {
    let l = w.len();
    let mut ok = true;
    for k in (0..l).rev() {
        let next = xs[(k + 1) % l];
        let b = w[k].branch();
        let (rlo, rhi) = map.branch_range(b);
        let u = if next < rlo {
            ok = false;
            rlo
        } else if next > rhi {
            ok = false;
            rhi
        } else {
            next
        };
        if let Some(v) = map.inverse(b, u) {
            xs[k] = v;
        }
    }
    ok
}

fn backward_contraction<M: QuotientMap + ?Sized>(map: &M, w: &[Symbol], name: &str) -> Result<Vec<f64>> {
    let mut xs: Vec<f64> = w
        .iter()
        .map(|s| if *s == Symbol::L { -0.5 } else { 0.5 })
        .collect();
    // clamped sweeps drive the guess into the cylinder
    for _ in 0..64 {
        let before = xs.clone();
        backward_sweep(map, w, &mut xs);
        let change = xs.iter().zip(&before).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        if change == 0.0 {
            break;
        }
    }
    // strict sweeps must not clamp
    let mut strict = true;
    for _ in 0..4 {
        strict &= backward_sweep(map, w, &mut xs);
    }
    if !strict || xs.iter().zip(w).any(|(x, s)| Symbol::of(*x) != Some(*s)) {
        return Err(LabError::NoPeriodicPoint(name.to_string()));
    }
    let res = cycle_residual(map, &xs);
    if res > 1e-12 {
        return Err(LabError::NoPeriodicPoint(format!("{name} (per-step residual {res:e})")));
    }
    Ok(xs)
}

fn cycle_residual<M: QuotientMap + ?Sized>(map: &M, xs: &[f64]) -> f64 {
    let l = xs.len();
    (0..l)
        .map(|k| {
            if xs[k] == 0.0 {
                f64::INFINITY
            } else {
                (map.apply(xs[k]) - xs[(k + 1) % l]).abs()
            }
        })
        .fold(0.0, f64::max)
}

fn finish_orbit<M: QuotientMap + ?Sized>(map: &M, w: &[Symbol], name: String, xs: Vec<f64>) -> Result<PeriodicOrbit> {
    if xs.iter().zip(w).any(|(x, s)| Symbol::of(*x) != Some(*s)) {
        return Err(LabError::NoPeriodicPoint(name));
    }
    if xs.iter().any(|x| x.abs() < GRAZING) {
        return Err(LabError::Failed(format!("periodic orbit {name} grazes the stable leaf")));
    }
    let params = map.params();
    let l = xs.len();
    // y by iterating the H-cycle to its fixed point
    let mut y0 = 0.0;
    for _ in 0..50 {
        let mut y = y0;
        for &x in &xs {
            y = eval_h(params, x, y);
        }
        let done = (y - y0).abs() == 0.0;
        y0 = y;
        if done {
            break;
        }
    }
    let mut ys = Vec::with_capacity(l);
    let mut y = y0;
    for &x in &xs {
        ys.push(y);
        y = eval_h(params, x, y);
    }
    let residual_y = (y - y0).abs();
    let ln_mult: f64 = xs.iter().map(|&x| map.slope(x).ln()).sum();
    let period = xs.iter().map(|&x| params.roof(x)).sum();
    Ok(PeriodicOrbit {
        word: name,
        points: xs.iter().zip(&ys).map(|(&x, &y)| SectionPoint::new(x, y)).collect(),
        multiplier: ln_mult.exp(),
        ln_multiplier: ln_mult,
        period,
        residual_x: cycle_residual(map, &xs),
        residual_y,
    })
}

/// Certificate of an embedded full 2-shift on blocks `word_p^k_p` and
/// `word_q^k_q`: the block return maps send `I_p` and `I_q` monotonically
/// onto `hull`, which contains both intervals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HorseshoeCert {
    pub word_p: String,
    pub word_q: String,
    pub block_p: String,
    pub block_q: String,
    pub k_p: usize,
    pub k_q: usize,
    /// Longest block length.
    pub n: usize,
    pub x_p: f64,
    pub x_q: f64,
    pub hull: Interval,
    pub i_p: Interval,
    pub i_q: Interval,
    pub monotone_p: bool,
    pub monotone_q: bool,
    /// Eventually-onto depth of the two block cylinders.
    pub onto_n_p: usize,
    pub onto_n_q: usize,
}

impl HorseshoeCert {
    pub fn block(&self, second: bool) -> Word {
        parse_word(if second { &self.block_q } else { &self.block_p }).expect("valid block")
    }

    pub fn interval(&self, second: bool) -> Interval {
        if second {
            self.i_q
        } else {
            self.i_p
        }
    }
}

fn rotate(w: &[Symbol], r: usize) -> Word {
    w[r..].iter().chain(&w[..r]).copied().collect()
}

fn repeat(w: &[Symbol], k: usize) -> Word {
    w.iter().copied().cycle().take(w.len() * k).collect()
}

/// Build a horseshoe from the periodic orbits of `word_p` and `word_q`.
pub fn build_horseshoe<M: QuotientMap + ?Sized>(map: &M, word_p: &[Symbol], word_q: &[Symbol]) -> Result<HorseshoeCert> {
    let rp = primitive_root(word_p);
    let rq = primitive_root(word_q);
    if canonical_rotation(&rp) == canonical_rotation(&rq) {
        return Err(LabError::Input("horseshoe needs two distinct periodic orbits".into()));
    }
    let orbit_p = find_periodic(map, &rp)?;
    let orbit_q = find_periodic(map, &rq)?;
    for kmax in 1..=8usize {
        for kp in 1..=kmax {
            for kq in 1..=kmax {
                if kp.max(kq) != kmax {
                    continue;
                }
                for ip in 0..rp.len() {
                    for iq in 0..rq.len() {
                        let wp = rotate(&rp, ip);
                        let wq = rotate(&rq, iq);
                        if let Some(c) = try_horseshoe(map, &wp, &wq, kp, kq, orbit_p.points[ip].x, orbit_q.points[iq].x) {
                            let cp = cylinder_of(map, &repeat(&wp, kp)).expect("checked");
                            let cq = cylinder_of(map, &repeat(&wq, kq)).expect("checked");
                            let onto_p = onto_certificate(map, cp, DEFAULT_DEPTH_CAP)?;
                            let onto_q = onto_certificate(map, cq, DEFAULT_DEPTH_CAP)?;
                            return Ok(HorseshoeCert {
                                word_p: word_string(&rp),
                                word_q: word_string(&rq),
                                onto_n_p: onto_p.N,
                                onto_n_q: onto_q.N,
                                ..c
                            });
                        }
                    }
                }
            }
        }
    }
    Err(LabError::DepthCap {
        cap: 8,
        detail: format!(
            "no horseshoe for {} and {} with repeat counts up to 8",
            word_string(&rp),
            word_string(&rq)
        ),
    })
}

fn try_horseshoe<M: QuotientMap + ?Sized>(
    map: &M,
    wp: &[Symbol],
    wq: &[Symbol],
    kp: usize,
    kq: usize,
    xp: f64,
    xq: f64,
) -> Option<HorseshoeCert> {
    let bp = repeat(wp, kp);
    let bq = repeat(wq, kq);
    let ap = cylinder_image(map, &bp)?;
    let aq = cylinder_image(map, &bq)?;
    let lo0 = xp.min(xq);
    let hi0 = xp.max(xq);
    let room = (lo0 - ap.lo.max(aq.lo)).min(ap.hi.min(aq.hi) - hi0);
    if !(room > 0.0) {
        return None;
    }
    let delta = 0.5 * room;
    let hull = Interval { lo: lo0 - delta, hi: hi0 + delta };
    let ip = pullback(map, &bp, hull)?;
    let iq = pullback(map, &bq, hull)?;
    let inside = |i: &Interval| hull.lo < i.lo && i.hi < hull.hi;
    let disjoint = ip.hi < iq.lo || iq.hi < ip.lo;
    if !(inside(&ip) && inside(&iq) && disjoint && ip.lo < xp && xp < ip.hi && iq.lo < xq && xq < iq.hi) {
        return None;
    }
    Some(HorseshoeCert {
        word_p: String::new(),
        word_q: String::new(),
        block_p: word_string(&bp),
        block_q: word_string(&bq),
        k_p: kp,
        k_q: kq,
        n: bp.len().max(bq.len()),
        x_p: xp,
        x_q: xq,
        hull,
        i_p: ip,
        i_q: iq,
        monotone_p: true,
        monotone_q: true,
        onto_n_p: 0,
        onto_n_q: 0,
    })
}

/// A point whose successive block returns visit `I_{s_0}, I_{s_1}, ...`
/// (`false` is `I_p`, `true` is `I_q`).
pub fn horseshoe_point<M: QuotientMap + ?Sized>(map: &M, cert: &HorseshoeCert, seq: &[bool]) -> Option<f64> {
    let mut j = *seq.last().map(|&s| if s { &cert.i_q } else { &cert.i_p })?;
    for &s in seq[..seq.len() - 1].iter().rev() {
        let i = cert.interval(s);
        let pre = pullback(map, &cert.block(s), j)?;
        let lo = pre.lo.max(i.lo);
        let hi = pre.hi.min(i.hi);
        if !(lo < hi) {
            return None;
        }
        j = Interval { lo, hi };
    }
    Some(j.mid())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HomoclinicWitness {
    pub word_p: String,
    pub word_q: String,
    pub x_p: f64,
    pub x_q: f64,
    pub x_star: f64,
    pub n: usize,
    pub residual: f64,
}

/// A point `x*` of a one-sided local unstable interval of `x_p` with
/// `f^n(x*) = x_q`.
pub fn homoclinic_witness<M: QuotientMap + ?Sized>(map: &M, word_p: &[Symbol], word_q: &[Symbol]) -> Result<HomoclinicWitness> {
    let p = find_periodic(map, word_p)?;
    let q = find_periodic(map, word_q)?;
    let xp = p.points[0].x;
    let xq = q.points[0].x;
    let rp = parse_word(&p.word)?;
    let cyl = cylinder_of(map, &repeat(&rp, 2)).unwrap_or(Interval { lo: xp - 1e-3, hi: xp + 1e-3 });
    let width = 0.25 * (cyl.hi - xp).min(xp - cyl.lo).max(1e-12);
    let u = Interval { lo: xp, hi: xp + width };
    let mut tracker = BranchTracker::new(map, u);
    for depth in 1..=DEFAULT_DEPTH_CAP {
        tracker.step()?;
        for br in tracker.branches() {
            if br.image.0 < xq && xq < br.image.1 {
                let x_star = bisect_zero(
                    |t| map.iterate(t, depth).map(|v| v - xq).unwrap_or(0.0),
                    br.domain.0,
                    br.domain.1,
                );
                let residual = (map.iterate(x_star, depth).unwrap_or(f64::NAN) - xq).abs();
                return Ok(HomoclinicWitness {
                    word_p: p.word.clone(),
                    word_q: q.word.clone(),
                    x_p: xp,
                    x_q: xq,
                    x_star,
                    n: depth,
                    residual,
                });
            }
        }
    }
    Err(LabError::DepthCap {
        cap: DEFAULT_DEPTH_CAP,
        detail: format!("no transverse connection from {} to {}", p.word, q.word),
    })
}

/// Check a witness by re-iteration; the degenerate `x* = x_p = x_q` case
/// passes with `n` a multiple of the period.
pub fn verify_witness<M: QuotientMap + ?Sized>(map: &M, w: &HomoclinicWitness, tol: f64) -> bool {
    match map.iterate(w.x_star, w.n) {
        Some(v) => (v - w.x_q).abs() <= tol,
        None => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expanding_map::ModelParams;
    use approx::assert_abs_diff_eq;

    fn w(s: &str) -> Word {
        parse_word(s).unwrap()
    }

    #[test]
    fn itinerary_examples() {
        let p = ModelParams::default();
        assert_eq!(itinerary_of(&p, 0.5, 4).word, "RRLL");
        assert_eq!(itinerary_of(&p, -0.5, 4).word, "LLRR");
        assert_eq!(itinerary_of(&p, 0.269_869_791_980_653, 2).word, "RL");
        assert!(itinerary_of(&p, 0.0, 3).hit_zero);
    }

    #[test]
    fn kneading_symmetry() {
        let p = ModelParams::default();
        let k = kneading(&p, 30);
        let flipped: String = k.k_plus.word.chars().map(|c| if c == 'L' { 'R' } else { 'L' }).collect();
        assert_eq!(k.k_minus.word, flipped);
        assert!(k.k_plus.word.starts_with('L'));
    }

    #[test]
    fn cylinder_examples() {
        let p = ModelParams::default();
        assert_eq!(cylinder_of(&p, &w("R")).unwrap(), Interval { lo: 0.0, hi: 1.0 });
        let rl = cylinder_of(&p, &w("RL")).unwrap();
        assert_eq!(rl.lo, 0.0);
        assert_abs_diff_eq!(rl.hi, 0.410_475_447_356_356, epsilon = 1e-14);
        let k = (1..40).find(|&k| cylinder_of(&p, &vec![Symbol::R; k]).is_none());
        assert!(k.is_some());
    }

    #[test]
    fn periodic_rl() {
        let p = ModelParams::default();
        let o = find_periodic(&p, &w("RL")).unwrap();
        assert_abs_diff_eq!(o.points[0].x, 0.269_869_791_980_653, epsilon = 1e-13);
        assert_abs_diff_eq!(o.points[0].y, 0.441_953_170_287_613, epsilon = 1e-13);
        assert_eq!(o.points[1].x, -o.points[0].x);
        assert!(o.residual_x <= 1e-12 && o.residual_y <= 1e-12);
        let o2 = find_periodic(&p, &w("RLRL")).unwrap();
        assert_eq!(o2.word, "RL");
        assert_eq!(o2.points, o.points);
        assert!(matches!(find_periodic(&p, &w("R")), Err(LabError::NoPeriodicPoint(_))));
    }

    #[test]
    fn periodic_long_word_contraction() {
        let p = ModelParams::default();
        let short = find_periodic(&p, &w("RLL")).unwrap();
        let long_word = repeat(&w("RLLRL"), 6);
        let mut lw = long_word.clone();
        lw.push(Symbol::L);
        let o = find_periodic(&p, &lw).unwrap();
        assert_eq!(o.len(), 31);
        assert!(o.residual_x <= 1e-12);
        assert!(short.residual_x <= 1e-12);
    }

    #[test]
    fn lyndon_counts() {
        // necklace counts of primitive binary words: 2, 1, 2, 3, 6, 9, 18, 30
        let ws = lyndon_words(8);
        let mut counts = [0usize; 9];
        for x in &ws {
            counts[x.len()] += 1;
        }
        assert_eq!(&counts[1..], &[2, 1, 2, 3, 6, 9, 18, 30]);
    }

    #[test]
    fn horseshoe_rl_rll() {
        let p = ModelParams::default();
        let c = build_horseshoe(&p, &w("RL"), &w("RLL")).unwrap();
        assert!(c.i_p.hi < c.i_q.lo || c.i_q.hi < c.i_p.lo);
        assert!(build_horseshoe(&p, &w("RL"), &w("LR")).is_err());
    }

    #[test]
    fn homoclinic_examples() {
        let p = ModelParams::default();
        let h = homoclinic_witness(&p, &w("RL"), &w("RLL")).unwrap();
        assert!(h.n >= 1 && h.residual <= 1e-10);
        assert!(verify_witness(&p, &h, 1e-10));
        let self_w = homoclinic_witness(&p, &w("RL"), &w("RL")).unwrap();
        assert!(self_w.x_star != self_w.x_p);
        let trivial = HomoclinicWitness { x_star: self_w.x_p, n: 2, ..self_w.clone() };
        assert!(verify_witness(&p, &trivial, 1e-10));
    }
}
