use super::*;
use crate::statezoo::{ghz, w};

fn quick() -> OptimizerOptions {
    OptimizerOptions { restarts: 4, max_iters: 600, ..OptimizerOptions::default() }
}

#[test]
fn ghz_monogamy() {
    let p = RenyiParameter::traditional(2.0).unwrap();
    let r = monogamy(&ghz().density(), p, &quick()).unwrap();
    assert!((r.e_1_23.nats - std::f64::consts::LN_2).abs() < 1e-3, "{}", r.e_1_23.nats);
    assert!(r.e_1_2.nats.abs() < 1e-3 && r.e_1_3.nats.abs() < 1e-3);
    assert!((r.m - (r.e_1_23.nats - r.e_1_2.nats - r.e_1_3.nats)).abs() < 1e-15);
    assert!(r.m > 0.6);
}

#[test]
fn w_is_monogamous_at_alpha_one() {
    let p = RenyiParameter::new(1.0, crate::renyi::Variant::Traditional).unwrap();
    let r = monogamy(&w().density(), p, &quick()).unwrap();
    assert!(r.m > 0.0, "{}", r.m);
    assert!((r.e_1_2.nats - r.e_1_3.nats).abs() < 1e-3);
    let s = r.summary();
    assert_eq!(s.m, r.m);
}

#[test]
fn monogamy_rejects_wrong_dimension() {
    let p = RenyiParameter::traditional(2.0).unwrap();
    let rho = DensityMatrix::maximally_mixed(4);
    assert!(matches!(monogamy(&rho, p, &quick()), Err(Error::DimensionMismatch(_))));
}

#[test]
fn critical_temperature_none_and_errors() {
    let p = RenyiParameter::traditional(2.0).unwrap();
    let params = ModelParams::Xyz { jx: 0.8, jy: 0.5, jz: 1.0 };
    // Entanglement above threshold −1 everywhere: nothing is ever below it.
    let t = critical_temperature(&params, p, &quick(), -1.0, (0.5, 1.0), 4).unwrap();
    assert_eq!(t, CriticalTemperature::NoneInRange);
    assert_eq!(t.to_string(), "none-in-range");
    assert!(critical_temperature(&params, p, &quick(), 0.01, (1.0, 0.5), 4).is_err());
    assert!(critical_temperature(&params, p, &quick(), 0.01, (0.0, 1.0), 4).is_err());
    assert!(critical_temperature(&params, p, &quick(), 0.01, (0.5, 1.0), 2).is_err());
}

#[test]
fn critical_temperature_found_at_low_edge() {
    let p = RenyiParameter::traditional(2.0).unwrap();
    let params = ModelParams::Xyz { jx: 0.8, jy: 0.5, jz: 1.0 };
    let t = critical_temperature(&params, p, &quick(), 10.0, (0.5, 1.0), 4).unwrap();
    assert_eq!(t, CriticalTemperature::Found(0.5));
}

const CONFIG: &str = "\
model = xxz
j = 1
delta = 2
axis = temp
grid = 0.5, 2.0
alphas = 1, 2:trad
restarts = 2
max_iters = 300
seed = 3
";

#[test]
fn sweep_is_deterministic_and_cached() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out.csv");
    let mut cfg = SweepConfig::parse(CONFIG).unwrap();
    cfg.output = Some(out.clone());
    cfg.cache_dir = Some(dir.path().join("cache"));
    cfg.workers = Some(2);

    let first = sweep(&cfg).unwrap();
    assert_eq!(first.rows.len(), 4);
    assert_eq!((first.computed, first.cache_hits), (4, 0));
    let text1 = std::fs::read_to_string(&out).unwrap();
    assert_eq!(parse_csv(&text1).unwrap(), first.rows);
    let order: Vec<(f64, f64)> = first.rows.iter().map(|r| (r.temp, r.alpha)).collect();
    assert_eq!(order, vec![(0.5, 1.0), (0.5, 2.0), (2.0, 1.0), (2.0, 2.0)]);

    let second = sweep(&cfg).unwrap();
    assert_eq!((second.computed, second.cache_hits), (0, 4));
    assert_eq!(std::fs::read_to_string(&out).unwrap(), text1);

    // Without the cache the physics columns repeat exactly.
    cfg.cache_dir = None;
    cfg.output = None;
    cfg.workers = Some(1);
    let third = sweep(&cfg).unwrap();
    for (a, b) in first.rows.iter().zip(&third.rows) {
        assert_eq!((a.e_1_23, a.e_1_2, a.e_1_3, a.m, a.seed), (b.e_1_23, b.e_1_2, b.e_1_3, b.m, b.seed));
    }
    assert!(third.check(0.5).is_ok() || third.unconverged_fraction() > 0.5);
}

#[test]
fn unconverged_fraction_check() {
    let row = |converged| SweepRow {
        model: "xxz".into(),
        param_name: "temp".into(),
        param_value: 1.0,
        temp: 1.0,
        alpha: 2.0,
        variant: crate::renyi::Variant::Traditional,
        e_1_23: 0.0,
        e_1_2: 0.0,
        e_1_3: 0.0,
        m: 0.0,
        converged,
        restarts_used: 1,
        seed: 0,
        walltime_ms: 0,
    };
    let o = SweepOutcome { rows: vec![row(true), row(false), row(false)], cache_hits: 0, computed: 3 };
    assert!(o.check(0.5).is_err());
    assert!(o.check(0.7).is_ok());
}

#[test]
fn empty_alphas_is_a_config_error() {
    let text = CONFIG.replace("alphas = 1, 2:trad", "alphas =");
    assert!(matches!(SweepConfig::parse(&text), Err(Error::Config { .. })));
}

mod props {
    use super::*;
    use proptest::prelude::*;

    fn finite() -> impl Strategy<Value = f64> {
        prop_oneof![-1e12..1e12f64, -1e-3..1e-3f64, Just(f64::INFINITY), Just(0.0)]
    }

    proptest! {
        #[test]
        fn csv_round_trip(vals in proptest::collection::vec(finite(), 7), seed: u64, ms: u64, conv: bool, n in 1usize..64) {
            let row = SweepRow {
                model: "tfi".into(),
                param_name: "lambda".into(),
                param_value: vals[0],
                temp: vals[1],
                alpha: vals[2],
                variant: crate::renyi::Variant::Sandwiched,
                e_1_23: vals[3],
                e_1_2: vals[4],
                e_1_3: vals[5],
                m: vals[6],
                converged: conv,
                restarts_used: n,
                seed,
                walltime_ms: ms,
            }.quantized();
            let back = parse_csv(&to_csv(std::slice::from_ref(&row))).unwrap();
            prop_assert_eq!(back, vec![row]);
        }
    }
}
