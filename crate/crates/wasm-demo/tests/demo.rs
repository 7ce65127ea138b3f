use lorenz_lab_wasm::{connect_json, map_graph_json, periodic_json};

#[test]
fn default_map_is_valid() {
    let g = map_graph_json(1.95, 0.75, 50).unwrap();
    assert_eq!(g["valid"], true);
    assert_eq!(g["left"].as_array().unwrap().len(), 50);
    assert!(g["failed"].as_array().unwrap().is_empty());
    let bad = map_graph_json(1.3, 0.75, 50).unwrap();
    assert_eq!(bad["valid"], false);
    assert!(!bad["failed"].as_array().unwrap().is_empty());
}

#[test]
fn rl_cobweb_closes() {
    let o = periodic_json("RL", 1.95, 0.75).unwrap();
    let xs: Vec<f64> = o["xs"].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect();
    assert_eq!(xs.len(), 2);
    assert!((xs[0] + xs[1]).abs() < 1e-12);
    let cob = o["cobweb"].as_array().unwrap();
    assert_eq!(cob.first(), cob.last());
    assert!(periodic_json("R", 1.95, 0.75).is_err());
    assert!(periodic_json("RQ", 1.95, 0.75).is_err());
}

#[test]
fn connect_hits_zero() {
    let r = connect_json(0.0, "+").unwrap();
    assert_eq!(r["n"], 11);
    assert!(r["residual"].as_f64().unwrap() <= 1e-10);
    assert_eq!(r["revalidated"], true);
    assert!(connect_json(2.0, "+").is_err());
}
