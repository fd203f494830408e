use rxnpack::analysis::{ensemble_stats, initial_rate_ensemble};
use rxnpack::dsl::{apply_directives, parse_model};
use rxnpack::sim::{run_ensemble_with, simulate_ode, simulate_ssa, Execution, OdeConfig, SsaConfig};
use rxnpack::templates::unpack_mm;

const DECAY: &str = "model decay\nspecies S = 100\nreaction d: S -> 0 @ ma(0.5)\n";

#[test]
fn pure_decay_moments_match_binomial() {
    let net = apply_directives(&parse_model(DECAY).unwrap()).unwrap();
    let ens = run_ensemble_with(&net, &SsaConfig::new(4.0, 0).with_dt(1.0), 2000, Execution::default()).unwrap();
    let stats = ensemble_stats(&ens).unwrap();
    let (mean, std) = (stats.mean_series("S").unwrap(), stats.std_series("S").unwrap());
    for (k, t) in stats.times.iter().enumerate() {
        let p = (-0.5 * t).exp();
        let (m, v) = (100.0 * p, 100.0 * p * (1.0 - p));
        let sem = (v / 2000.0).sqrt();
        assert!((mean[k] - m).abs() <= 4.0 * sem + 1e-12, "t={t}: mean {} vs {m}", mean[k]);
        if v > 0.0 {
            assert!((std[k].powi(2) / v - 1.0).abs() < 0.15, "t={t}: var {} vs {v}", std[k].powi(2));
        }
    }
}

#[test]
fn serial_and_parallel_ensembles_are_identical() {
    let net = apply_directives(&parse_model(DECAY).unwrap()).unwrap();
    let cfg = SsaConfig::new(3.0, 11).with_dt(0.25);
    let a = run_ensemble_with(&net, &cfg, 64, Execution::Serial).unwrap();
    let b = run_ensemble_with(&net, &cfg, 64, Execution::Parallel).unwrap();
    assert_eq!(a, b);
}

#[test]
fn same_seed_same_trajectory() {
    let net = apply_directives(&parse_model(DECAY).unwrap()).unwrap();
    let cfg = SsaConfig::new(10.0, 3).every_event();
    assert_eq!(simulate_ssa(&net, &cfg).unwrap(), simulate_ssa(&net, &cfg).unwrap());
    let other = simulate_ssa(&net, &SsaConfig::new(10.0, 4).every_event()).unwrap();
    assert_ne!(simulate_ssa(&net, &cfg).unwrap(), other);
}

#[test]
fn unpacked_enzyme_conserves_and_tracks_ode() {
    let doc = "model mm\nspecies S = 599\nspecies P = 0\nreaction r1: S -> P @ mm(60, 300)\n";
    let packed = apply_directives(&parse_model(doc).unwrap()).unwrap();
    let (unpacked, expansion) = unpack_mm(&packed, "r1", 60, 100.0, None).unwrap();
    assert!(expansion.all_assumptions_hold());
    let ens = run_ensemble_with(&unpacked, &SsaConfig::new(20.0, 5).with_dt(0.5), 100, Execution::default()).unwrap();
    let e = ens.species_index("E").unwrap();
    let es = ens.species_index("ES").unwrap();
    for rep in &ens.replicates {
        assert!(rep.rows.iter().all(|row| row[e] + row[es] == 60));
    }
    // ensemble mean product stays close to the deterministic elementary solution
    let ode = simulate_ode(&unpacked, &OdeConfig::new(20.0).with_output_dt(Some(0.5))).unwrap();
    let mean = ensemble_stats(&ens).unwrap().mean_series("P").unwrap();
    let det = ode.series("P").unwrap();
    for (m, d) in mean.iter().zip(&det) {
        assert!((m - d).abs() < 0.03 * 599.0, "{m} vs {d}");
    }
    let rate = initial_rate_ensemble(&ens, "P", 599.0, 0.1).unwrap();
    assert!(rate.rate > 30.0 && rate.rate < 45.0, "{rate:?}");
}
