use lorenz_lab::measures::{approximate_by_periodic, convex_combine, entropy_of, periodic_flow_measure, weak_star_distance, EntropySpec, FlowMeasure};
use lorenz_lab::symbolic::{lyndon_words, word_string, Word};
use lorenz_lab::ModelParams;
use proptest::prelude::*;

fn measure() -> impl Strategy<Value = FlowMeasure> {
    let p = ModelParams::default();
    let mut pool: Vec<FlowMeasure> = vec![FlowMeasure::Atomic];
    pool.extend(lyndon_words(7).iter().filter_map(|w: &Word| periodic_flow_measure(&p, w).ok()));
    let n = pool.len();
    (0..n, 0..n, 0.0f64..1.0).prop_map(move |(i, j, t)| {
        if t < 0.3 {
            pool[i].clone()
        } else {
            convex_combine(&[pool[i].clone(), pool[j].clone()], &[t, 1.0 - t]).unwrap()
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn metric_axioms(a in measure(), b in measure(), c in measure()) {
        let ab = weak_star_distance(&a, &b);
        prop_assert_eq!(ab, weak_star_distance(&b, &a));
        prop_assert!(ab >= 0.0);
        prop_assert_eq!(weak_star_distance(&a, &a), 0.0);
        prop_assert!(weak_star_distance(&a, &c) <= ab + weak_star_distance(&b, &c) + 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn periodic_measures_have_zero_entropy_and_approximate_themselves(i in 0usize..40) {
        let p = ModelParams::default();
        let words = lyndon_words(8);
        let w = &words[i % words.len()];
        let Ok(mu) = periodic_flow_measure(&p, w) else { return Ok(()) };
        let h = entropy_of(&p, &EntropySpec::Periodic { word: word_string(w) }).unwrap();
        prop_assert_eq!(h.h_map, 0.0);
        prop_assert_eq!(h.h_flow, 0.0);
        let a = approximate_by_periodic(&p, &mu, 1e-10).unwrap();
        prop_assert!(a.distance <= 1e-10);
    }
}
