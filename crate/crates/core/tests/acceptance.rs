//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use lorenz_lab::cli::random_start;
use lorenz_lab::connecting::{connect, isolation_report, loop_periodic_family, Family, IsolationOptions, LoopOptions, PerturbationParams, Side};
use lorenz_lab::expanding_map::{onto_certificate, validate_map, BranchTracker};
use lorenz_lab::measures::{
    approximate_by_periodic, empirical_flow_measure, entropy_of, measure_path, orbit_measure, periodic_integrals_by_trace,
    EntropySpec,
};
use lorenz_lab::return_map::{check_cone_invariance, check_lorenz_axioms};
use lorenz_lab::symbolic::{find_periodic, lyndon_words, parse_word, word_string};
use lorenz_lab::{Interval, ModelParams, QuotientMap};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Verdict = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(elapsed: Duration, limit_s: f64) -> Result<(), String> {
    ensure(elapsed.as_secs_f64() < limit_s, format!("runtime {:.2} s over {limit_s} s", elapsed.as_secs_f64()))
}

fn model_validity() -> Verdict {
    let t = Instant::now();
    let p = ModelParams::default();
    let map = validate_map(&p).map_err(|e| e.to_string())?;
    let ax = check_lorenz_axioms(&p, 100).map_err(|e| e.to_string())?;
    ensure(map.valid && ax.valid, "a model axiom failed")?;
    ensure(map.min_slope == 1.95 * 0.75 && map.min_slope > 2f64.sqrt(), format!("min f' = {}", map.min_slope))?;
    ensure(ax.sup_dh_dy == 0.25, format!("sup dH/dy = {}", ax.sup_dh_dy))?;
    ensure(ax.sup_dh_dx == 0.5, format!("sup dH/dx = {}", ax.sup_dh_dx))?;
    ensure(p.lambda1 + p.lambda3 == -2.0 && p.lambda2 + p.lambda3 == 0.5, "eigenvalue sums")?;
    within(t.elapsed(), 1.0)?;
    Ok(format!("min f' = {}, sup dH/dy = {}, sup dH/dx = {}", map.min_slope, ax.sup_dh_dy, ax.sup_dh_dx))
}

/// Union of open images covers (-1, 1).
fn covers(images: &[[f64; 2]]) -> bool {
    let mut v = images.to_vec();
    v.sort_by(|a, b| a[0].total_cmp(&b[0]));
    let mut reach = f64::NAN;
    for [lo, hi] in v {
        if reach.is_nan() {
            if lo > -1.0 {
                return false;
            }
            reach = hi;
        } else if lo < reach {
            reach = reach.max(hi);
        }
    }
    reach >= 1.0
}

fn eventually_onto() -> Verdict {
    let t = Instant::now();
    let p = ModelParams::default();
    let j = Interval::new(0.10, 0.11).unwrap();
    let cert = onto_certificate(&p, j, 64).map_err(|e| e.to_string())?;
    ensure(cert.N <= 25, format!("N = {}", cert.N))?;
    let images: Vec<[f64; 2]> = cert.branches.iter().map(|b| b.image).collect();
    ensure(covers(&images), "certificate images do not cover (-1, 1)")?;
    for b in &cert.branches {
        let mid = 0.5 * (b.domain[0] + b.domain[1]);
        let y = p.iterate(mid, b.depth).ok_or("branch midpoint hits 0")?;
        ensure(b.image[0] < y && y < b.image[1], "branch image does not contain f^n(mid)")?;
    }
    let mut tr = BranchTracker::new(&p, j);
    while tr.depth() < 2 * (cert.N / 2 + 1) {
        tr.step().map_err(|e| e.to_string())?;
        let d = tr.depth();
        if d % 2 == 0 {
            let cuts = tr.decomposition().cuts.len() as u64;
            ensure(cuts < 1u64 << (d / 2), format!("#D_{d} = {cuts}"))?;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = 0;
    for _ in 0..100 {
        let w = rng.gen_range(1e-3..0.05);
        let lo = rng.gen_range(-1.0..1.0 - w);
        let c = onto_certificate(&p, Interval::new(lo, lo + w).unwrap(), 64)
            .map_err(|e| format!("({lo}, {}) did not certify: {e}", lo + w))?;
        worst = worst.max(c.N);
    }
    within(t.elapsed(), 10.0)?;
    Ok(format!("N = {} for (0.10, 0.11); 100 random intervals certify, max N = {worst}", cert.N))
}

fn cone_invariance() -> Verdict {
    let p = ModelParams::default();
    let alpha = 1.0 / (2f64.sqrt() - 1.0);
    let r = check_cone_invariance(&p, alpha, 100).map_err(|e| e.to_string())?;
    let bound = 2f64.sqrt() * alpha / p.lambda0() * (1.0 + 1e-9);
    ensure(r.pass && r.worst_ratio <= bound, format!("worst ratio {} vs {bound}", r.worst_ratio))?;
    Ok(format!("{} points, worst ratio {:.6} <= {:.6}", r.points_checked, r.worst_ratio, bound))
}

fn periodic_orbits() -> Verdict {
    let p = ModelParams::default();
    // mu x^rho + x = 1 by plain bisection
    let (mut a, mut b) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if p.mu * m.powf(p.rho) + m < 1.0 {
            a = m;
        } else {
            b = m;
        }
    }
    let x = 0.5 * (a + b);
    // y0 = c + b x^nu y1, y1 = -c + b x^nu y0 for the cycle (x, -x)
    let k = p.b * x.powf(p.nu);
    let y_pos = (p.c - k * p.c) / (1.0 - k * k);
    let y_neg = -y_pos;
    let o = find_periodic(&p, &parse_word("RL").unwrap()).map_err(|e| e.to_string())?;
    let mut err_x: f64 = 0.0;
    let mut err_y: f64 = 0.0;
    for q in &o.points {
        let (ex, ey) = if q.x > 0.0 { (x, y_pos) } else { (-x, y_neg) };
        err_x = err_x.max((q.x - ex).abs());
        err_y = err_y.max((q.y - ey).abs());
    }
    let period = 2.0 * p.r0 + 2.0 / p.lambda3 * (1.0 / x).ln();
    let err_t = (o.period - period).abs();
    ensure(err_x <= 1e-10 && err_y <= 1e-10 && err_t <= 1e-10, format!("errors x {err_x:e}, y {err_y:e}, T {err_t:e}"))?;
    Ok(format!("x_RL = {x:.10}, y = {y_pos:.10}, T = {period:.10}; errors {err_x:.1e}, {err_y:.1e}, {err_t:.1e}"))
}

fn suspension_consistency() -> Verdict {
    let p = ModelParams::default();
    let mut words = lyndon_words(8);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst: f64 = 0.0;
    let mut done = Vec::new();
    while done.len() < 10 && !words.is_empty() {
        let w = words.swap_remove(rng.gen_range(0..words.len()));
        let Ok(o) = find_periodic(&p, &w) else { continue };
        let atoms = orbit_measure(&p, &o).integrals();
        let trace = periodic_integrals_by_trace(&p, &o).map_err(|e| e.to_string())?;
        for (a, b) in atoms.iter().zip(trace.iter()) {
            worst = worst.max((a - b).abs());
        }
        done.push(word_string(&w));
    }
    ensure(done.len() == 10, "fewer than 10 admissible words")?;
    ensure(worst <= 1e-8, format!("max deviation {worst:e}"))?;
    Ok(format!("words {}; max deviation {worst:.1e}", done.join(" ")))
}

fn entropy() -> Verdict {
    let p = ModelParams::default();
    for w in ["RL", "RLL", "RRL", "RLRLL", "RRLLRLL"] {
        let r = entropy_of(&p, &EntropySpec::Periodic { word: w.into() }).map_err(|e| e.to_string())?;
        ensure(r.h_map == 0.0 && r.h_flow == 0.0, format!("{w} has entropy {}", r.h_map))?;
    }
    let spec = EntropySpec::Bernoulli { word_p: "RL".into(), word_q: "RLL".into(), t: 0.5, m: None };
    let r = entropy_of(&p, &spec).map_err(|e| e.to_string())?;
    let exact = 2f64.ln() / 2.5;
    ensure((r.h_map - exact).abs() <= 1e-12, format!("h = {} vs {exact}", r.h_map))?;
    Ok(format!("periodic entropies 0; Bernoulli(1/2) h = {:.15} (ln2/2.5 = {exact:.15})", r.h_map))
}

fn measure_paths() -> Verdict {
    let p = ModelParams::default();
    let (wp, wq) = (parse_word("RL").unwrap(), parse_word("RLL").unwrap());
    let a = measure_path(&p, &wp, &wq, 101, None).map_err(|e| e.to_string())?;
    let b = measure_path(&p, &wp, &wq, 201, Some(a.m)).map_err(|e| e.to_string())?;
    for path in [&a, &b] {
        ensure(
            path.endpoint_error_p <= 1e-8 && path.endpoint_error_q <= 1e-8,
            format!("endpoint errors {:e}, {:e}", path.endpoint_error_p, path.endpoint_error_q),
        )?;
    }
    let ratio = b.max_step / a.max_step;
    ensure(ratio <= 0.5 * 1.2, format!("step ratio {ratio}"))?;
    Ok(format!("max step {:.3e} -> {:.3e} (ratio {ratio:.4}); endpoints within {:.1e}", a.max_step, b.max_step, a.endpoint_error_p.max(a.endpoint_error_q)))
}

fn connecting() -> Verdict {
    let t = Instant::now();
    let p = ModelParams::default();
    let fam = Family::new(&p, &PerturbationParams::default(), Vec::new()).map_err(|e| e.to_string())?;
    let x_rl = find_periodic(&p, &parse_word("RL").unwrap()).map_err(|e| e.to_string())?.points[0].x.abs();
    let mut parts = Vec::new();
    for (name, target) in [("0", 0.0), ("x_RL", x_rl)] {
        let r = connect(&fam, target, 1e-10, 64).map_err(|e| format!("target {name}: {e}"))?;
        ensure(r.residual <= 1e-10 && r.n <= 64, format!("target {name}: residual {:e}", r.residual))?;
        ensure(r.revalidated, format!("target {name}: f_s* fails validation"))?;
        ensure(r.expansion_ok, format!("target {name}: curve expansion violated"))?;
        parts.push(format!("{name}: s* = {:.6e}, n = {}, residual {:.1e}", r.s_star, r.n, r.residual));
    }
    within(t.elapsed(), 60.0)?;
    Ok(parts.join("; "))
}

fn loop_lab() -> Verdict {
    let t = Instant::now();
    let p = ModelParams::default();
    let fam = Family::new(&p, &PerturbationParams::default(), Vec::new()).map_err(|e| e.to_string())?;
    let conn = connect(&fam, 0.0, 1e-10, 64).map_err(|e| e.to_string())?;
    let lf = loop_periodic_family(&fam, &conn, &LoopOptions::default()).map_err(|e| e.to_string())?;
    ensure(lf.members.len() >= 5, format!("{} members", lf.members.len()))?;
    ensure(lf.closest_decreasing, "closest approach not strictly decreasing")?;
    ensure(lf.distance_decreasing, "d(mu_k, delta_sigma) not strictly decreasing")?;
    ensure(lf.hausdorff_decreasing, "Hausdorff distance not strictly decreasing")?;
    ensure(lf.min_distance < 0.05, format!("min distance {}", lf.min_distance))?;
    within(t.elapsed(), 120.0)?;
    let d: Vec<String> = lf.members.iter().map(|m| format!("{:.4}", m.d_to_delta_sigma)).collect();
    Ok(format!("{} members, d = {}", lf.members.len(), d.join(" > ")))
}

fn isolation_lab() -> Verdict {
    let t = Instant::now();
    let p = ModelParams::default();
    let plus = PerturbationParams::default();
    let minus = PerturbationParams::with_side(Side::Minus);
    let r = isolation_report(&p, &plus, &minus, &IsolationOptions::default()).map_err(|e| e.to_string())?;
    let gaps: Vec<String> = r.gaps.iter().map(|g| format!("{:.4}", g.gap)).collect();
    let control: Vec<String> = r.gaps.iter().map(|g| format!("{:.4}", g.control_gap)).collect();
    let summary = format!(
        "gap {} (control {}), min int phi = {}, claimed passages {}",
        gaps.join(" -> "),
        control.join(" -> "),
        r.min_phi_integral,
        r.claimed_passages
    );
    ensure(r.plus_survives, "+ connection lost under both bumps")?;
    ensure(r.gap_positive, format!("gap not positive: {summary}"))?;
    ensure(r.passages_ok && r.claimed_passages > 0, format!("time estimate violated: {summary}"))?;
    ensure(r.min_phi_integral >= 0.0, format!("negative phi integral: {summary}"))?;
    ensure(r.control_shrinking, format!("control gap not shrinking: {summary}"))?;
    ensure(r.gap_non_decreasing, format!("gap decreases with the length cap: {summary}"))?;
    within(t.elapsed(), 300.0)?;
    Ok(summary)
}

fn periodic_approximation() -> Verdict {
    let t = Instant::now();
    let p = ModelParams::default();
    let x0 = random_start(&p, 1);
    let emp = empirical_flow_measure(&p, x0, 100_000).map_err(|e| e.to_string())?;
    let a = approximate_by_periodic(&p, &emp, 0.05).map_err(|e| e.to_string())?;
    ensure(a.distance <= 0.05, format!("distance {}", a.distance))?;
    within(t.elapsed(), 120.0)?;
    Ok(format!("word length {}, distance {:.3e}", a.word_len, a.distance))
}

const SUITE: &[&str] = &[
    "validate", "onto", "cone", "kneading", "periodic", "horseshoe", "measure-dist", "path", "entropy", "approx", "connect",
    "loop-lab", "isolation-lab", "support", "plot",
];

fn run_suite(dir: &Path) -> Result<(), String> {
    for cmd in SUITE {
        let st = Command::new(env!("CARGO_BIN_EXE_lorenz-lab"))
            .args(["--quiet", "--out"])
            .arg(dir)
            .arg(cmd)
            .status()
            .map_err(|e| e.to_string())?;
        ensure(matches!(st.code(), Some(0 | 1)), format!("{cmd} exited with {st}"))?;
    }
    Ok(())
}

fn determinism() -> Verdict {
    let a = tempfile::tempdir().map_err(|e| e.to_string())?;
    let b = tempfile::tempdir().map_err(|e| e.to_string())?;
    run_suite(a.path())?;
    run_suite(b.path())?;
    let mut names: Vec<_> = std::fs::read_dir(a.path()).map_err(|e| e.to_string())?.map(|e| e.unwrap().file_name()).collect();
    names.sort();
    let mut bytes = 0;
    for n in &names {
        let x = std::fs::read(a.path().join(n)).map_err(|e| e.to_string())?;
        let y = std::fs::read(b.path().join(n)).map_err(|e| format!("{n:?} missing in second run: {e}"))?;
        ensure(x == y, format!("{n:?} differs between runs"))?;
        bytes += x.len();
    }
    let count_b = std::fs::read_dir(b.path()).map_err(|e| e.to_string())?.count();
    ensure(count_b == names.len(), "runs wrote different file sets")?;
    Ok(format!("{} report files ({bytes} bytes) byte-identical", names.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Verdict); 12] = [
        ("model validity", model_validity),
        ("eventually onto", eventually_onto),
        ("cone invariance", cone_invariance),
        ("periodic orbits", periodic_orbits),
        ("suspension consistency", suspension_consistency),
        ("entropy", entropy),
        ("measure path", measure_paths),
        ("connecting solver", connecting),
        ("loop lab", loop_lab),
        ("isolation lab", isolation_lab),
        ("periodic approximation", periodic_approximation),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let v = f();
        let secs = t.elapsed().as_secs_f64();
        match v {
            Ok(msg) => println!("criterion {:>2} {name}: PASS [{secs:.2} s] {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {:>2} {name}: FAIL [{secs:.2} s] {msg}", i + 1);
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
