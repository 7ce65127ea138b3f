//! The fixed test-function dictionary that metrizes weak* convergence.
//!
//! Member 0 is the cone bump `max(0, 1 - |Xi| / 0.5)` centred at the
//! singularity; members 1..=20 are Chebyshev products
//! `T_i(xi1) T_j(xi2) T_k(xi3)` with `i + j + k <= 3`, listed by total
//! degree and then lexicographically. Member `k` carries weight `2^-k`.

pub const DICT_LEN: usize = 21;

/// Radius of the bump around the singularity.
pub const SIGMA_RADIUS: f64 = 0.5;

/// Chebyshev exponents `(i, j, k)` of members 1..=20.
pub fn chebyshev_triples() -> [[usize; 3]; DICT_LEN - 1] {
    let mut out = [[0usize; 3]; DICT_LEN - 1];
    let mut n = 0;
    for deg in 0..=3usize {
        for i in 0..=deg {
            for j in 0..=(deg - i) {
                let k = deg - i - j;
                out[n] = [i, j, k];
                n += 1;
            }
        }
    }
    out
}

/// Monomial coefficients of `T_n`, lowest degree first.
pub fn chebyshev_coeffs(n: usize) -> [f64; 4] {
    match n {
        0 => [1.0, 0.0, 0.0, 0.0],
        1 => [0.0, 1.0, 0.0, 0.0],
        2 => [-1.0, 0.0, 2.0, 0.0],
        3 => [0.0, -3.0, 0.0, 4.0],
        _ => panic!("dictionary degree is at most 3"),
    }
}

pub fn chebyshev(n: usize, t: f64) -> f64 {
    match n {
        0 => 1.0,
        1 => t,
        2 => 2.0 * t * t - 1.0,
        3 => t * (4.0 * t * t - 3.0),
        _ => panic!("dictionary degree is at most 3"),
    }
}

/// `max(0, 1 - |xi| / 0.5)`.
pub fn sigma_bump(xi: [f64; 3]) -> f64 {
    let r = (xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]).sqrt();
    (1.0 - r / SIGMA_RADIUS).max(0.0)
}

/// Evaluate every member at the ambient point `xi`.
pub fn eval_all(xi: [f64; 3], out: &mut [f64]) {
    let mut t = [[0.0f64; 4]; 3];
    for c in 0..3 {
        for n in 0..4 {
            t[c][n] = chebyshev(n, xi[c]);
        }
    }
    out[0] = sigma_bump(xi);
    for (m, [i, j, k]) in chebyshev_triples().iter().enumerate() {
        out[m + 1] = t[0][*i] * t[1][*j] * t[2][*k];
    }
}

pub fn eval(index: usize, xi: [f64; 3]) -> f64 {
    let mut out = [0.0; DICT_LEN];
    eval_all(xi, &mut out);
    out[index]
}

pub fn weights() -> [f64; DICT_LEN] {
    let mut w = [0.0; DICT_LEN];
    for (k, v) in w.iter_mut().enumerate() {
        *v = 0.5f64.powi(k as i32);
    }
    w
}

/// Values of every member at the singularity `sigma = (0, 0, 0)`.
pub fn at_sigma() -> [f64; DICT_LEN] {
    let mut out = [0.0; DICT_LEN];
    eval_all([0.0; 3], &mut out);
    out
}

/// Lipschitz constants (sup-norm of the gradient, l1 over coordinates) on
/// the cube `[-1, 1]^3`.
pub fn lipschitz_constants() -> [f64; DICT_LEN] {
    let mut out = [0.0; DICT_LEN];
    out[0] = 1.0 / SIGMA_RADIUS;
    for (m, tri) in chebyshev_triples().iter().enumerate() {
        out[m + 1] = tri.iter().map(|&n| (n * n) as f64).sum();
    }
    out
}

pub fn names() -> Vec<String> {
    let mut v = vec!["g0_sigma_bump".to_string()];
    for [i, j, k] in chebyshev_triples() {
        v.push(format!("T{i}{j}{k}"));
    }
    v
}

/// Weighted l1 distance between two vectors of dictionary integrals.
pub fn weighted_distance(a: &[f64; DICT_LEN], b: &[f64; DICT_LEN]) -> f64 {
    let w = weights();
    (0..DICT_LEN).map(|k| w[k] * (a[k] - b[k]).abs()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout() {
        let t = chebyshev_triples();
        assert_eq!(t[0], [0, 0, 0]);
        assert_eq!(t[1], [0, 0, 1]);
        assert_eq!(t[19], [3, 0, 0]);
        let mut seen = std::collections::HashSet::new();
        for tri in t {
            assert!(tri.iter().sum::<usize>() <= 3);
            assert!(seen.insert(tri));
        }
        assert_eq!(names().len(), DICT_LEN);
    }

    #[test]
    fn bounded_and_sigma_values() {
        let s = at_sigma();
        assert_eq!(s[0], 1.0);
        assert_eq!(s[1], 1.0);
        let mut out = [0.0; DICT_LEN];
        for a in [-1.0, -0.3, 0.0, 0.7, 1.0] {
            for b in [-1.0, 0.2, 1.0] {
                for c in [0.0, 0.5, 1.0] {
                    eval_all([a, b, c], &mut out);
                    assert!(out.iter().all(|v| v.abs() <= 1.0 + 1e-15));
                }
            }
        }
    }

    #[test]
    fn coeffs_match_recurrence() {
        for n in 0..4 {
            let c = chebyshev_coeffs(n);
            for t in [-0.9, -0.2, 0.4, 1.0] {
                let p = c[0] + c[1] * t + c[2] * t * t + c[3] * t * t * t;
                assert!((p - (n as f64 * t.acos()).cos()).abs() < 1e-14);
            }
        }
    }
}
