use lorenz_lab::connecting::{connect, eval_f_s, loop_periodic_family, track_curve, Family, LoopOptions, PerturbationParams, Side};
use lorenz_lab::expanding_map::eval_f;
use lorenz_lab::{ModelParams, QuotientMap};
use proptest::prelude::*;

fn family(side: Side) -> Family {
    Family::new(&ModelParams::default(), &PerturbationParams::with_side(side), Vec::new()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn zero_parameter_is_the_base_map(x in -1.0f64..1.0, minus in any::<bool>()) {
        prop_assume!(x != 0.0);
        let base = ModelParams::default();
        let side = if minus { Side::Minus } else { Side::Plus };
        let pert = PerturbationParams::with_side(side);
        prop_assert_eq!(eval_f_s(&base, &pert, 0.0, x).unwrap(), eval_f(&base, x).unwrap());
    }

    #[test]
    fn connect_is_sound(target in -0.9f64..0.9, minus in any::<bool>()) {
        let fam = family(if minus { Side::Minus } else { Side::Plus });
        let r = connect(&fam, target, 1e-10, 64).unwrap();
        let map = fam.map_at(r.s_star);
        let again = map.iterate(map.apply(fam.side.anchor()), r.n).unwrap();
        prop_assert!((again - target).abs() <= 1e-10);
        prop_assert!(r.revalidated && r.expansion_ok);
    }
}

#[test]
fn slope_floor_over_parameter_scan() {
    for side in [Side::Plus, Side::Minus] {
        let fam = family(side);
        for i in 0..100 {
            let s = fam.report.tau_max * i as f64 / 99.0;
            let map = fam.map_at(s);
            let mut min = f64::INFINITY;
            for k in 0..10_000 {
                let x = -1.0 + (k as f64 + 0.5) * 2.0 / 10_000.0;
                min = min.min(map.slope(x));
            }
            assert!(min >= fam.lambda, "s = {s}: min slope {min} < {}", fam.lambda);
        }
    }
}

#[test]
fn curve_expansion_and_branch_count() {
    let fam = family(Side::Plus);
    let g0 = |s: f64| fam.gamma0(s);
    for n in 1..=12usize {
        let curve = track_curve(&fam, n).unwrap();
        if n % 2 == 0 {
            assert!(curve.branches.len() <= 1 << (n / 2), "depth {n}: {} branches", curve.branches.len());
        }
        for b in &curve.branches {
            let [a, c] = b.s;
            let h = (c - a) * 1e-3;
            let (lo, hi) = (a + h, c - h);
            if hi <= lo {
                continue;
            }
            let slope_n = ((fam.gamma(hi, n).unwrap() - fam.gamma(lo, n).unwrap()) / (hi - lo)).abs();
            let slope_0 = ((g0(hi) - g0(lo)) / (hi - lo)).abs();
            assert!(slope_n >= fam.lambda.powi(n as i32) * slope_0 * 0.95, "depth {n}, branch {:?}", b.s);
        }
    }
}

#[test]
fn loop_family_monotone() {
    let fam = family(Side::Plus);
    let conn = connect(&fam, 0.0, 1e-10, 64).unwrap();
    let lf = loop_periodic_family(&fam, &conn, &LoopOptions::default()).unwrap();
    for w in lf.members.windows(2) {
        assert!(w[1].ln_closest_approach < w[0].ln_closest_approach);
        assert!(w[1].d_to_delta_sigma < w[0].d_to_delta_sigma);
    }
}
