//! Gauss–Legendre rules and adaptive Gauss–Kronrod integration of
//! vector-valued integrands.

/// Gauss–Legendre nodes and weights on `[-1, 1]`, by Newton iteration on
/// the Legendre recurrence.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, z);
                dp = d;
                let dz = p / d;
                z -= dz;
                if dz.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, z);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - z * z) * dp * dp);
            nodes[i] = -z;
            nodes[n - 1 - i] = z;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        GaussLegendre { nodes, weights }
    }

    /// Integral over `[a, b]` split into `panels` equal pieces.
    pub fn integrate(&self, f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
        let h = (b - a) / panels as f64;
        let mut total = 0.0;
        for k in 0..panels {
            let lo = a + h * k as f64;
            let c = lo + 0.5 * h;
            let mut s = 0.0;
            for (x, w) in self.nodes.iter().zip(&self.weights) {
                s += w * f(c + 0.5 * h * x);
            }
            total += 0.5 * h * s;
        }
        total
    }
}

/// `(P_n(z), P_n'(z))`.
fn legendre(n: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, d)
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Adaptive 7–15 Gauss–Kronrod for `f: R -> R^dim`.
///
/// `f(t, out)` fills `out`. Intervals are bisected until the Kronrod/Gauss
/// difference is below the share of `abs_tol` proportional to their length,
/// or `max_depth` halvings have been made.
pub fn integrate_vec<F>(f: F, a: f64, b: f64, dim: usize, abs_tol: f64, max_depth: usize) -> Vec<f64>
where
    F: Fn(f64, &mut [f64]),
{
    let mut total = vec![0.0; dim];
    if b <= a {
        return total;
    }
    let len = b - a;
    let mut stack = vec![(a, b, 0usize)];
    let mut buf = vec![0.0; dim];
    let mut kr = vec![0.0; dim];
    let mut ga = vec![0.0; dim];
    while let Some((lo, hi, depth)) = stack.pop() {
        let c = 0.5 * (lo + hi);
        let h = 0.5 * (hi - lo);
        kr.iter_mut().for_each(|v| *v = 0.0);
        ga.iter_mut().for_each(|v| *v = 0.0);
        for (i, (&x, &wk)) in XGK.iter().zip(&WGK).enumerate() {
            let pts: &[f64] = if x == 0.0 { &[0.0] } else { &[-1.0, 1.0] };
            for &sgn in pts {
                f(c + sgn * h * x, &mut buf);
                for d in 0..dim {
                    kr[d] += wk * buf[d];
                    if i % 2 == 1 {
                        ga[d] += WG[i / 2] * buf[d];
                    }
                }
            }
        }
        let err = kr
            .iter()
            .zip(&ga)
            .map(|(k, g)| (h * (k - g)).abs())
            .fold(0.0, f64::max);
        if err <= abs_tol * (hi - lo) / len || depth >= max_depth {
            for d in 0..dim {
                total[d] += h * kr[d];
            }
        } else {
            stack.push((c, hi, depth + 1));
            stack.push((lo, c, depth + 1));
        }
    }
    total
}

/// Scalar convenience wrapper around [`integrate_vec`].
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, abs_tol: f64) -> f64 {
    integrate_vec(|t, out| out[0] = f(t), a, b, 1, abs_tol, 40)[0]
}
