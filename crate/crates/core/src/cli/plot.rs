//! Small deterministic SVG figures: fixed layout, fixed number formatting,
//! no timestamps, so equal inputs give equal bytes.

use std::fmt::Write;

use crate::connecting::LoopFamily;
use crate::expanding_map::QuotientMap;
use crate::measures::MeasurePath;
use crate::return_map::OrbitTrace;
use crate::ModelParams;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Style {
    Line,
    Dots,
    Dashed,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    pub color: &'static str,
    pub style: Style,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Figure {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
    pub log_y: bool,
}

const W: f64 = 640.0;
const H: f64 = 420.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 50.0;

fn esc(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Round step for about `n` ticks over `span`.
fn nice_step(span: f64, n: f64) -> f64 {
    let raw = span / n;
    let mag = 10f64.powf(raw.log10().floor());
    let r = raw / mag;
    let m = if r < 1.5 {
        1.0
    } else if r < 3.5 {
        2.0
    } else if r < 7.5 {
        5.0
    } else {
        10.0
    };
    m * mag
}

fn fmt_tick(v: f64, step: f64) -> String {
    let digits = (-step.log10().floor()).max(0.0) as usize;
    let s = format!("{v:.digits$}");
    if s == "-0" || s.starts_with("-0.") && s.trim_start_matches("-0.").chars().all(|c| c == '0') {
        s[1..].to_string()
    } else {
        s
    }
}

impl Figure {
    fn y_of(&self, y: f64) -> Option<f64> {
        if self.log_y {
            (y > 0.0 && y.is_finite()).then(|| y.log10())
        } else {
            y.is_finite().then_some(y)
        }
    }

    fn bounds(&self) -> (f64, f64, f64, f64) {
        let mut b = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for s in &self.series {
            for &(x, y) in &s.points {
                if let (true, Some(y)) = (x.is_finite(), self.y_of(y)) {
                    b = (b.0.min(x), b.1.max(x), b.2.min(y), b.3.max(y));
                }
            }
        }
        if !b.0.is_finite() {
            return (0.0, 1.0, 0.0, 1.0);
        }
        if b.1 - b.0 < 1e-300 {
            b.0 -= 0.5;
            b.1 += 0.5;
        }
        if b.3 - b.2 < 1e-300 {
            b.2 -= 0.5;
            b.3 += 0.5;
        }
        let pad = 0.04 * (b.3 - b.2);
        (b.0, b.1, b.2 - pad, b.3 + pad)
    }

    pub fn render(&self) -> String {
        let (x0, x1, y0, y1) = self.bounds();
        let pw = W - LEFT - RIGHT;
        let ph = H - TOP - BOTTOM;
        let sx = |x: f64| LEFT + (x - x0) / (x1 - x0) * pw;
        let sy = |y: f64| TOP + (y1 - y) / (y1 - y0) * ph;
        let mut o = String::new();
        let _ = writeln!(o, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
        let _ = writeln!(
            o,
            r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(o, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
        let _ = writeln!(
            o,
            r#"<text x="{:.1}" y="24" text-anchor="middle" font-size="15">{}</text>"#,
            W / 2.0,
            esc(&self.title)
        );
        let _ = writeln!(
            o,
            r#"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
        );

        let xs = nice_step(x1 - x0, 6.0);
        let mut t = (x0 / xs).ceil() * xs;
        while t <= x1 + 1e-9 * xs {
            let px = sx(t);
            let _ = writeln!(
                o,
                r##"<line x1="{px:.2}" y1="{:.2}" x2="{px:.2}" y2="{:.2}" stroke="#ddd"/><text x="{px:.2}" y="{:.2}" text-anchor="middle">{}</text>"##,
                TOP,
                TOP + ph,
                TOP + ph + 16.0,
                fmt_tick(t, xs)
            );
            t += xs;
        }
        let ys = if self.log_y { nice_step(y1 - y0, 6.0).max(1.0) } else { nice_step(y1 - y0, 6.0) };
        let mut t = (y0 / ys).ceil() * ys;
        while t <= y1 + 1e-9 * ys {
            let py = sy(t);
            let label = if self.log_y { format!("1e{}", t.round()) } else { fmt_tick(t, ys) };
            let _ = writeln!(
                o,
                r##"<line x1="{LEFT}" y1="{py:.2}" x2="{:.2}" y2="{py:.2}" stroke="#ddd"/><text x="{:.2}" y="{:.2}" text-anchor="end">{label}</text>"##,
                LEFT + pw,
                LEFT - 6.0,
                py + 4.0
            );
            t += ys;
        }
        let _ = writeln!(
            o,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
            LEFT + pw / 2.0,
            H - 12.0,
            esc(&self.x_label)
        );
        let _ = writeln!(
            o,
            r#"<text x="16" y="{:.1}" text-anchor="middle" transform="rotate(-90 16 {:.1})">{}</text>"#,
            TOP + ph / 2.0,
            TOP + ph / 2.0,
            esc(&self.y_label)
        );

        for (i, s) in self.series.iter().enumerate() {
            let pts: Vec<(f64, f64)> = s
                .points
                .iter()
                .filter_map(|&(x, y)| self.y_of(y).filter(|_| x.is_finite()).map(|y| (sx(x), sy(y))))
                .collect();
            match s.style {
                Style::Dots => {
                    for (px, py) in &pts {
                        let _ = writeln!(o, r#"<circle cx="{px:.2}" cy="{py:.2}" r="2.5" fill="{}"/>"#, s.color);
                    }
                }
                Style::Line | Style::Dashed => {
                    let path: Vec<String> = pts.iter().map(|(px, py)| format!("{px:.2},{py:.2}")).collect();
                    let dash = if s.style == Style::Dashed { r#" stroke-dasharray="5,4""# } else { "" };
                    let _ = writeln!(
                        o,
                        r#"<polyline points="{}" fill="none" stroke="{}" stroke-width="1.5"{dash}/>"#,
                        path.join(" "),
                        s.color
                    );
                }
            }
            if !s.label.is_empty() {
                let ly = TOP + 16.0 + 16.0 * i as f64;
                let _ = writeln!(
                    o,
                    r#"<text x="{:.1}" y="{ly:.1}" fill="{}">{}</text>"#,
                    LEFT + 10.0,
                    s.color,
                    esc(&s.label)
                );
            }
        }
        o.push_str("</svg>\n");
        o
    }
}

/// Graph of the quotient map: two increasing branches with the jump at 0.
pub fn map_graph<M: QuotientMap + ?Sized>(map: &M) -> Figure {
    let n = 400;
    let branch = |lo: f64, hi: f64| -> Vec<(f64, f64)> {
        (0..=n)
            .map(|i| lo + (hi - lo) * i as f64 / n as f64)
            .filter(|&x| x != 0.0)
            .map(|x| (x, map.apply(x)))
            .collect()
    };
    Figure {
        title: "Lorenz expanding map".into(),
        x_label: "x".into(),
        y_label: "f(x)".into(),
        series: vec![
            Series { label: "f".into(), points: branch(-1.0, -1e-9), color: "#1f4e9c", style: Style::Line },
            Series { label: String::new(), points: branch(1e-9, 1.0), color: "#1f4e9c", style: Style::Line },
            Series {
                label: "diagonal".into(),
                points: vec![(-1.0, -1.0), (1.0, 1.0)],
                color: "#999",
                style: Style::Dashed,
            },
        ],
        log_y: false,
    }
}

/// Projection of a flow trace on the `(xi1, xi3)` plane.
pub fn orbit_trace(params: &ModelParams, trace: &OrbitTrace, label: &str) -> Figure {
    let mut pts = Vec::new();
    for seg in &trace.segments {
        let d = seg.dwell();
        for i in 0..=40 {
            let q = seg.position(params, d * i as f64 / 40.0);
            pts.push((q[0], q[2]));
        }
    }
    Figure {
        title: format!("Flow trace of {label}"),
        x_label: "xi1".into(),
        y_label: "xi3".into(),
        series: vec![Series { label: label.into(), points: pts, color: "#b03a2e", style: Style::Line }],
        log_y: false,
    }
}

/// Successive weak* steps along a measure path.
pub fn path_profile(path: &MeasurePath) -> Figure {
    let pts = path.step_distances.iter().enumerate().map(|(j, &d)| (j as f64, d)).collect();
    Figure {
        title: format!("Measure path {} to {}", path.horseshoe.word_p, path.horseshoe.word_q),
        x_label: "j".into(),
        y_label: "d(mu_j, mu_j+1)".into(),
        series: vec![Series { label: "step".into(), points: pts, color: "#1e8449", style: Style::Line }],
        log_y: false,
    }
}

/// Distance to the singular Dirac mass along the loop family, log scale.
pub fn loop_family(lf: &LoopFamily) -> Figure {
    let pts: Vec<(f64, f64)> = lf.members.iter().map(|m| (m.k, m.d_to_delta_sigma)).collect();
    Figure {
        title: "Periodic measures near the homoclinic loop".into(),
        x_label: "k, closest approach e^-k".into(),
        y_label: "d(mu_k, delta_sigma)".into(),
        series: vec![
            Series { label: String::new(), points: pts.clone(), color: "#6c3483", style: Style::Line },
            Series { label: "d to delta_sigma".into(), points: pts, color: "#6c3483", style: Style::Dots },
        ],
        log_y: true,
    }
}
