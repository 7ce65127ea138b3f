//! Command-line experiment drivers. Every subcommand reads one flat
//! configuration, writes `<out>/<command>.json` plus optional CSV and SVG
//! artifacts, and maps its outcome to an exit code: 0 when all checks pass,
//! 1 when a mathematical check fails, 2 for bad input.

pub mod config;
pub mod plot;

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

pub use config::{RunConfig, KEYS};

use crate::connecting::{
    connect, connect_to_orbit, distance_to_sigma, isolation_report, loop_periodic_family, Family, IsolationOptions,
    LoopOptions, PerturbationParams, Side,
};
use crate::error::{LabError, Result};
use crate::expanding_map::{onto_certificate, validate_map, Interval, ModelParams};
use crate::measures::{
    approximate_by_periodic, bernoulli_tables, choose_depth, empirical_flow_measure, entropy_of, measure_path,
    orbit_measure, support_coverage, weak_star_distance, Atom, EntropySpec, FlowMeasure,
};
use crate::return_map::{check_cone_invariance, check_lorenz_axioms, cycle_trace, default_alpha, SectionPoint};
use crate::symbolic::{
    build_horseshoe, find_periodic, homoclinic_witness, kneading, parse_word, verify_witness, Word,
};

#[derive(Debug, Parser)]
#[command(name = "lorenz-lab", version, about = "Geometric Lorenz attractor laboratory")]
pub struct Cli {
    /// Config file of `key = value` lines
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Output directory for reports
    #[arg(long, global = true, value_name = "DIR", default_value = "out")]
    pub out: PathBuf,
    /// Seed for random starting points (overrides the config)
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Print nothing on success
    #[arg(long, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Settings {
    /// Overrides of config keys
    #[arg(value_name = "KEY=VALUE")]
    pub settings: Vec<String>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Check the map and return-map axioms
    Validate(Settings),
    /// Eventually-onto certificate for the interval J
    Onto(Settings),
    /// Cone-field invariance on a grid
    Cone(Settings),
    /// Kneading sequences of the critical values
    Kneading(Settings),
    /// Locate the periodic orbit of a word
    Periodic(Settings),
    /// Horseshoe and homoclinic witness for two words
    Horseshoe(Settings),
    /// Weak* distance between two measures
    MeasureDist(Settings),
    /// Bernoulli measure path between two periodic measures
    Path(Settings),
    /// Entropy of a periodic or Bernoulli measure
    Entropy(Settings),
    /// Periodic approximation of an empirical measure
    Approx(Settings),
    /// Connect an unstable branch to a target leaf
    Connect(Settings),
    /// Periodic measures accumulating on the singularity
    LoopLab(Settings),
    /// Isolation of the singular Dirac mass
    IsolationLab(Settings),
    /// Support coverage of a measure
    Support(Settings),
    /// Render an SVG figure
    Plot(Settings),
    /// Print every config key with its default
    Keys,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Validate(_) => "validate",
            Command::Onto(_) => "onto",
            Command::Cone(_) => "cone",
            Command::Kneading(_) => "kneading",
            Command::Periodic(_) => "periodic",
            Command::Horseshoe(_) => "horseshoe",
            Command::MeasureDist(_) => "measure-dist",
            Command::Path(_) => "path",
            Command::Entropy(_) => "entropy",
            Command::Approx(_) => "approx",
            Command::Connect(_) => "connect",
            Command::LoopLab(_) => "loop-lab",
            Command::IsolationLab(_) => "isolation-lab",
            Command::Support(_) => "support",
            Command::Plot(_) => "plot",
            Command::Keys => "keys",
        }
    }

    fn settings(&self) -> &[String] {
        match self {
            Command::Validate(s)
            | Command::Onto(s)
            | Command::Cone(s)
            | Command::Kneading(s)
            | Command::Periodic(s)
            | Command::Horseshoe(s)
            | Command::MeasureDist(s)
            | Command::Path(s)
            | Command::Entropy(s)
            | Command::Approx(s)
            | Command::Connect(s)
            | Command::LoopLab(s)
            | Command::IsolationLab(s)
            | Command::Support(s)
            | Command::Plot(s) => &s.settings,
            Command::Keys => &[],
        }
    }
}

/// Result of one experiment before it is written out.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub pass: bool,
    pub summary: String,
    pub report: Value,
    pub csv: Option<String>,
    pub svg: Option<String>,
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

/// RFC 4180 field quoting.
pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn csv_row(fields: &[String]) -> String {
    let mut s = fields.iter().map(|f| csv_field(f)).collect::<Vec<_>>().join(",");
    s.push('\n');
    s
}

fn word(cfg: &RunConfig, key: &str) -> Result<Word> {
    parse_word(cfg.str(key))
}

fn side(cfg: &RunConfig) -> Result<Side> {
    Side::parse(cfg.str("side"))
}

fn perturbation(cfg: &RunConfig, side: Side) -> Result<PerturbationParams> {
    Ok(PerturbationParams {
        side,
        eta: cfg.f64("eta")?,
        tau: cfg.opt_f64("tau")?,
        lambda_margin: cfg.f64("lambda_margin")?,
    })
}

/// Lebesgue-random section point from the configured seed.
pub fn random_start(params: &ModelParams, seed: u64) -> SectionPoint {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h = params.c + params.b;
    loop {
        let x: f64 = rng.gen_range(-1.0..1.0);
        let y: f64 = rng.gen_range(-h..h);
        if x != 0.0 {
            return SectionPoint::new(x, y);
        }
    }
}

fn named_measure(params: &ModelParams, s: &str) -> Result<FlowMeasure> {
    if s == "sigma" {
        Ok(FlowMeasure::Atomic)
    } else {
        let orbit = find_periodic(params, &parse_word(s)?)?;
        Ok(orbit_measure(params, &orbit))
    }
}

fn loop_lab(params: &ModelParams, cfg: &RunConfig) -> Result<crate::connecting::LoopFamily> {
    let fam = Family::new(params, &perturbation(cfg, side(cfg)?)?, Vec::new())?;
    let conn = connect(&fam, 0.0, cfg.f64("connect_tol")?, cfg.usize("depth_cap")?)?;
    let opts = LoopOptions {
        count: cfg.usize("count")?,
        k0: cfg.f64("k0")?,
        exact_max_k: cfg.f64("exact_max_k")?,
    };
    loop_periodic_family(&fam, &conn, &opts)
}

fn checks_value(checks: &[(&str, bool)]) -> Value {
    Value::Array(checks.iter().map(|(n, p)| json!({"name": n, "pass": p})).collect())
}

/// Run one experiment.
pub fn execute(command: &str, cfg: &RunConfig) -> Result<Outcome> {
    let params = cfg.model()?;
    match command {
        "validate" => {
            let map = validate_map(&params)?;
            let axioms = check_lorenz_axioms(&params, cfg.usize("grid")?)?;
            let pass = map.valid && axioms.valid;
            Ok(Outcome {
                pass,
                summary: format!("min f' = {}, axioms valid = {}", map.min_slope, axioms.valid),
                report: json!({"map": to_value(&map), "axioms": to_value(&axioms)}),
                csv: None,
                svg: None,
            })
        }
        "onto" => {
            let j = cfg.f64_list("J")?;
            if j.len() != 2 {
                return Err(LabError::Input("J needs two endpoints a,b".into()));
            }
            let cert = onto_certificate(&params, Interval::new(j[0], j[1])?, cfg.usize("depth_cap")?)?;
            let mut csv = String::from("depth,a,b,c,d\n");
            for b in &cert.branches {
                csv.push_str(&csv_row(&[
                    b.depth.to_string(),
                    b.domain[0].to_string(),
                    b.domain[1].to_string(),
                    b.image[0].to_string(),
                    b.image[1].to_string(),
                ]));
            }
            Ok(Outcome {
                pass: true,
                summary: format!("N = {} with {} covering branches", cert.N, cert.branches.len()),
                report: to_value(&cert),
                csv: Some(csv),
                svg: None,
            })
        }
        "cone" => {
            let alpha = cfg.opt_f64("alpha")?.unwrap_or_else(default_alpha);
            let r = check_cone_invariance(&params, alpha, cfg.usize("grid")?)?;
            Ok(Outcome {
                pass: r.pass,
                summary: format!("worst ratio {} vs aperture {}", r.worst_ratio, r.alpha),
                report: to_value(&r),
                csv: None,
                svg: None,
            })
        }
        "kneading" => {
            let k = kneading(&params, cfg.usize("depth")?);
            Ok(Outcome {
                pass: true,
                summary: format!("K+ = {}, K- = {}", k.k_plus.word, k.k_minus.word),
                report: to_value(&k),
                csv: None,
                svg: None,
            })
        }
        "periodic" => {
            let orbit = find_periodic(&params, &word(cfg, "word")?)?;
            let mu = orbit_measure(&params, &orbit);
            let trace = cycle_trace(&params, &orbit.points)?;
            let pass = orbit.residual_x <= 1e-10 && orbit.residual_y <= 1e-10;
            Ok(Outcome {
                pass,
                summary: format!("x0 = {}, period = {}", orbit.points[0].x, orbit.period),
                report: json!({
                    "orbit": to_value(&orbit),
                    "integrals": to_value(&mu.integrals()),
                    "d_to_delta_sigma": distance_to_sigma(&mu),
                }),
                csv: Some(trace.to_csv(&params, 20)),
                svg: None,
            })
        }
        "horseshoe" => {
            let (wp, wq) = (word(cfg, "word_p")?, word(cfg, "word_q")?);
            let cert = build_horseshoe(&params, &wp, &wq)?;
            let witness = homoclinic_witness(&params, &wp, &wq)?;
            let verified = verify_witness(&params, &witness, 1e-9);
            let pass = cert.monotone_p && cert.monotone_q && verified;
            Ok(Outcome {
                pass,
                summary: format!("blocks {} / {}, witness verified = {verified}", cert.block_p, cert.block_q),
                report: json!({"horseshoe": to_value(&cert), "witness": to_value(&witness), "witness_verified": verified}),
                csv: None,
                svg: None,
            })
        }
        "measure-dist" => {
            let m1 = named_measure(&params, cfg.str("word"))?;
            let m2 = named_measure(&params, cfg.str("word2"))?;
            let d = weak_star_distance(&m1, &m2);
            let symmetric = d == weak_star_distance(&m2, &m1);
            Ok(Outcome {
                pass: symmetric && d >= 0.0,
                summary: format!("d({}, {}) = {d}", cfg.str("word"), cfg.str("word2")),
                report: json!({
                    "first": cfg.str("word"),
                    "second": cfg.str("word2"),
                    "distance": d,
                    "integrals_first": to_value(&m1.integrals()),
                    "integrals_second": to_value(&m2.integrals()),
                }),
                csv: Some(m1.to_csv(&params.params_hash(), None)),
                svg: None,
            })
        }
        "path" => {
            let path = measure_path(
                &params,
                &word(cfg, "word_p")?,
                &word(cfg, "word_q")?,
                cfg.usize("steps")?,
                cfg.opt_usize("block_depth")?,
            )?;
            let pass = path.endpoint_error_p <= 1e-8 && path.endpoint_error_q <= 1e-8;
            let mut csv = String::from("j,t,step_distance\n");
            for (j, d) in path.step_distances.iter().enumerate() {
                csv.push_str(&csv_row(&[j.to_string(), path.points[j].t.to_string(), d.to_string()]));
            }
            Ok(Outcome {
                pass,
                summary: format!("max step {} over {} steps (m = {})", path.max_step, path.steps, path.m),
                report: to_value(&path),
                csv: Some(csv),
                svg: Some(plot::path_profile(&path).render()),
            })
        }
        "entropy" => {
            let spec = match cfg.str("measure") {
                "word" => EntropySpec::Periodic { word: cfg.str("word").to_string() },
                "bernoulli" => EntropySpec::Bernoulli {
                    word_p: cfg.str("word_p").to_string(),
                    word_q: cfg.str("word_q").to_string(),
                    t: cfg.f64("t")?,
                    m: cfg.opt_usize("block_depth")?,
                },
                other => return Err(LabError::Input(format!("entropy needs measure = word or bernoulli, got {other}"))),
            };
            let r = entropy_of(&params, &spec)?;
            Ok(Outcome {
                pass: r.h_map.is_finite() && r.h_map >= 0.0 && r.h_flow >= 0.0,
                summary: format!("h_map = {}, h_flow = {}", r.h_map, r.h_flow),
                report: json!({"spec": to_value(&spec), "entropy": to_value(&r)}),
                csv: None,
                svg: None,
            })
        }
        "approx" => {
            let seed = cfg.u64("seed")?;
            let x0 = random_start(&params, seed);
            let emp = empirical_flow_measure(&params, x0, cfg.usize("returns")?)?;
            let tol = cfg.f64("approx_tol")?;
            let a = approximate_by_periodic(&params, &emp, tol)?;
            Ok(Outcome {
                pass: a.distance <= tol,
                summary: format!("word length {} at distance {}", a.word_len, a.distance),
                report: json!({"start": to_value(&x0), "approximation": to_value(&a)}),
                csv: None,
                svg: None,
            })
        }
        "connect" => {
            let fam = Family::new(&params, &perturbation(cfg, side(cfg)?)?, Vec::new())?;
            let tol = cfg.f64("connect_tol")?;
            let cap = cfg.usize("depth_cap")?;
            let t = cfg.str("target");
            let r = match t.parse::<f64>() {
                Ok(x) => connect(&fam, x, tol, cap)?,
                Err(_) => connect_to_orbit(&fam, &find_periodic(&params, &parse_word(t)?)?.xs(), tol, cap)?,
            };
            let mut csv = String::from("k,gamma_k\n");
            for (k, g) in r.orbit.iter().enumerate() {
                csv.push_str(&csv_row(&[k.to_string(), g.to_string()]));
            }
            Ok(Outcome {
                pass: r.residual <= tol && r.revalidated && r.expansion_ok,
                summary: format!("s* = {} at depth {} (residual {:e})", r.s_star, r.n, r.residual),
                report: json!({"family": to_value(&fam.report), "connection": to_value(&r)}),
                csv: Some(csv),
                svg: None,
            })
        }
        "loop-lab" => {
            let lf = loop_lab(&params, cfg)?;
            let pass = lf.closest_decreasing && lf.distance_decreasing && lf.hausdorff_decreasing;
            Ok(Outcome {
                pass,
                summary: format!("{} members, min d to delta_sigma = {}", lf.members.len(), lf.min_distance),
                csv: Some(lf.to_csv()),
                svg: Some(plot::loop_family(&lf).render()),
                report: to_value(&lf),
            })
        }
        "isolation-lab" => {
            let opts = IsolationOptions {
                target_word: cfg.str("target_word").to_string(),
                max_len: cfg.usize("max_len")?,
                caps: cfg.usize_list("caps")?,
                r_v: cfg.f64("r_v")?,
                tol: cfg.f64("connect_tol")?,
                depth_cap: cfg.usize("depth_cap")?,
            };
            let r = isolation_report(
                &params,
                &perturbation(cfg, Side::Plus)?,
                &perturbation(cfg, Side::Minus)?,
                &opts,
            )?;
            let checks = [
                ("gap_positive", r.gap_positive),
                ("gap_non_decreasing", r.gap_non_decreasing),
                ("claimed_passages_satisfy_time_estimate", r.passages_ok),
                ("min_phi_integral_nonnegative", r.min_phi_integral >= 0.0),
                ("control_gap_shrinking", r.control_shrinking),
                ("plus_connection_survives", r.plus_survives),
            ];
            let gaps: Vec<String> = r.gaps.iter().map(|g| format!("{:.4}", g.gap)).collect();
            let mut csv = String::from("max_len,orbits,gap,argmin,control_orbits,control_gap,control_argmin\n");
            for g in &r.gaps {
                csv.push_str(&csv_row(&[
                    g.max_len.to_string(),
                    g.orbits.to_string(),
                    g.gap.to_string(),
                    g.argmin.clone(),
                    g.control_orbits.to_string(),
                    g.control_gap.to_string(),
                    g.control_argmin.clone(),
                ]));
            }
            Ok(Outcome {
                pass: checks.iter().all(|c| c.1),
                summary: format!("gaps {} ; min int phi = {}", gaps.join(" -> "), r.min_phi_integral),
                report: json!({"checks": checks_value(&checks), "isolation": to_value(&r)}),
                csv: Some(csv),
                svg: None,
            })
        }
        "support" => {
            let (label, atoms): (String, Vec<Atom>) = match cfg.str("measure") {
                "word" => {
                    let m = named_measure(&params, cfg.str("word"))?;
                    (cfg.str("word").to_string(), m.atoms().to_vec())
                }
                "bernoulli" => {
                    let cert = build_horseshoe(&params, &word(cfg, "word_p")?, &word(cfg, "word_q")?)?;
                    let m = cfg.opt_usize("block_depth")?.unwrap_or_else(|| choose_depth(&params, &cert).min(8));
                    let tables = bernoulli_tables(&params, &cert, m)?;
                    (format!("bernoulli m={m}"), tables.atoms(&params, cfg.f64("t")?))
                }
                "empirical" => {
                    let x0 = random_start(&params, cfg.u64("seed")?);
                    let m = empirical_flow_measure(&params, x0, cfg.usize("returns")?)?;
                    ("empirical".to_string(), m.atoms().to_vec())
                }
                other => return Err(LabError::Input(format!("unknown measure {other}"))),
            };
            let r = support_coverage(&params, &atoms, cfg.f64("eps")?)?;
            Ok(Outcome {
                pass: (0.0..=1.0).contains(&r.coverage),
                summary: format!("{label}: coverage {} at eps {}", r.coverage, r.eps),
                report: json!({"measure": label, "atoms": atoms.len(), "coverage": to_value(&r)}),
                csv: None,
                svg: None,
            })
        }
        "plot" => {
            let kind = cfg.str("kind");
            let (fig, info) = match kind {
                "map-graph" => (plot::map_graph(&params), json!({})),
                "orbit-trace" => {
                    let orbit = find_periodic(&params, &word(cfg, "word")?)?;
                    let trace = cycle_trace(&params, &orbit.points)?;
                    (plot::orbit_trace(&params, &trace, &orbit.word), json!({"word": orbit.word}))
                }
                "path-profile" => {
                    let path = measure_path(
                        &params,
                        &word(cfg, "word_p")?,
                        &word(cfg, "word_q")?,
                        cfg.usize("steps")?,
                        cfg.opt_usize("block_depth")?,
                    )?;
                    (plot::path_profile(&path), json!({"max_step": path.max_step}))
                }
                "loop-family" => {
                    let lf = loop_lab(&params, cfg)?;
                    (plot::loop_family(&lf), json!({"min_distance": lf.min_distance}))
                }
                other => return Err(LabError::Input(format!("unsupported plot kind {other:?}"))),
            };
            Ok(Outcome {
                pass: true,
                summary: format!("{kind} rendered"),
                report: json!({"kind": kind, "info": info}),
                csv: None,
                svg: Some(fig.render()),
            })
        }
        other => Err(LabError::Input(format!("unknown command {other:?}"))),
    }
}

/// Full JSON document for a finished run.
pub fn envelope(command: &str, cfg: &RunConfig, outcome: &Outcome) -> Value {
    json!({
        "command": command,
        "pass": outcome.pass,
        "summary": outcome.summary,
        "params_hash": cfg.model().map(|p| p.params_hash()).unwrap_or_default(),
        "seed": cfg.str("seed"),
        "config": to_value(cfg.values()),
        "report": outcome.report,
    })
}

pub fn render_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json renders");
    s.push('\n');
    s
}

/// Re-parse a written report, re-run its command from the embedded config
/// and check that the same report comes out.
pub fn revalidate(json_text: &str) -> Result<bool> {
    let v: Value = serde_json::from_str(json_text).map_err(|e| LabError::Input(format!("bad report: {e}")))?;
    let command = v["command"].as_str().ok_or_else(|| LabError::Input("report has no command".into()))?;
    let values: std::collections::BTreeMap<String, String> = serde_json::from_value(v["config"].clone())
        .map_err(|e| LabError::Input(format!("bad config in report: {e}")))?;
    let cfg = RunConfig::from_values(&values)?;
    let out = execute(command, &cfg)?;
    Ok(envelope(command, &cfg, &out) == v)
}

/// Merge defaults, the config file, `--seed` and positional overrides.
pub fn build_config(path: Option<&Path>, settings: &[String], seed: Option<u64>) -> Result<RunConfig> {
    let mut cfg = RunConfig::default();
    if let Some(p) = path {
        let text = std::fs::read_to_string(p)
            .map_err(|e| LabError::Input(format!("cannot read {}: {e}", p.display())))?;
        cfg.apply_text(&text)?;
    }
    for s in settings {
        cfg.apply_setting(s)?;
    }
    if let Some(s) = seed {
        cfg.set("seed", &s.to_string())?;
    }
    Ok(cfg)
}

fn write_artifacts(out: &Path, name: &str, doc: &Value, outcome: Option<&Outcome>) -> std::io::Result<Vec<PathBuf>> {
    std::fs::create_dir_all(out)?;
    let mut written = vec![out.join(format!("{name}.json"))];
    std::fs::write(&written[0], render_json(doc))?;
    if let Some(o) = outcome {
        if let Some(csv) = &o.csv {
            let p = out.join(format!("{name}.csv"));
            std::fs::write(&p, csv)?;
            written.push(p);
        }
        if let Some(svg) = &o.svg {
            let p = out.join(format!("{name}.svg"));
            std::fs::write(&p, svg)?;
            written.push(p);
        }
    }
    Ok(written)
}

/// Run a parsed command line and return the process exit code.
pub fn run(cli: &Cli) -> i32 {
    if let Command::Keys = cli.command {
        print!("{}", RunConfig::default().to_text());
        return 0;
    }
    let name = cli.command.name();
    let cfg = match build_config(cli.config.as_deref(), cli.command.settings(), cli.seed) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{name}: {e}");
            return 2;
        }
    };
    let (doc, outcome, code) = match execute(name, &cfg) {
        Ok(o) => {
            let code = if o.pass { 0 } else { 1 };
            (envelope(name, &cfg, &o), Some(o), code)
        }
        Err(e) if e.is_input_error() => {
            eprintln!("{name}: {e}");
            return 2;
        }
        Err(e) => {
            eprintln!("{name}: {e}");
            let doc = json!({
                "command": name,
                "pass": false,
                "error": e.to_string(),
                "config": to_value(cfg.values()),
            });
            (doc, None, 1)
        }
    };
    match write_artifacts(&cli.out, name, &doc, outcome.as_ref()) {
        Ok(paths) => {
            if !cli.quiet {
                if let Some(o) = &outcome {
                    println!("{name}: {} ({})", if o.pass { "PASS" } else { "FAIL" }, o.summary);
                }
                for p in paths {
                    println!("  wrote {}", p.display());
                }
            }
            code
        }
        Err(e) => {
            eprintln!("{name}: cannot write to {}: {e}", cli.out.display());
            2
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_quoting() {
        assert_eq!(csv_field("RL"), "RL");
        assert_eq!(csv_field("a,b"), "\"a,b\"");
        assert_eq!(csv_field("say \"x\""), "\"say \"\"x\"\"\"");
    }

    #[test]
    fn validate_defaults() {
        let out = execute("validate", &RunConfig::default()).unwrap();
        assert!(out.pass);
        assert_eq!(out.report["map"]["min_slope"], 1.4625);
    }

    #[test]
    fn periodic_right_fixed_point_is_math_failure() {
        let mut cfg = RunConfig::default();
        cfg.set("word", "R").unwrap();
        let e = execute("periodic", &cfg).unwrap_err();
        assert!(!e.is_input_error());
        cfg.set("word", "RX").unwrap();
        assert!(execute("periodic", &cfg).unwrap_err().is_input_error());
    }
}
