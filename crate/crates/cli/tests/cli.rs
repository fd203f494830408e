use std::path::Path;
use std::process::{Command, Output};

fn rxnpack(args: &[&str], env_out: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_rxnpack"));
    cmd.args(args).current_dir(env!("CARGO_MANIFEST_DIR"));
    match env_out {
        Some(dir) => cmd.env("RXNPACK_OUT_DIR", dir),
        None => cmd.env_remove("RXNPACK_OUT_DIR"),
    };
    cmd.output().expect("binary runs")
}

fn corpus(name: &str) -> String {
    format!("../../models/{name}")
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

#[test]
fn simulate_writes_summary_and_metadata() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("run");
    let model = corpus("mm_unpacked.rxn");
    let o = rxnpack(&["simulate", &model, "--runs", "20", "--t-end", "30", "--seed", "7", "--out", out.to_str().unwrap()], None);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let summary = read(&out.join("summary.csv"));
    let header: Vec<&str> = summary.lines().next().unwrap().split(',').collect();
    let (e, es) = (header.iter().position(|h| *h == "E_mean").unwrap(), header.iter().position(|h| *h == "ES_mean").unwrap());
    for line in summary.lines().skip(1) {
        let v: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
        assert!((v[e] + v[es] - 60.0).abs() < 1e-9, "{line}");
    }
    let meta: serde_json::Value = serde_json::from_str(&read(&out.join("metadata.json"))).unwrap();
    assert_eq!(meta["seed"], 7);
    assert_eq!(meta["result"]["conservation_violations"], 0);
    let command = meta["command"].as_str().unwrap();
    assert!(command.contains("--seed 7") && command.contains("--runs 20") && command.contains("--dt"), "{command}");
}

#[test]
fn metadata_command_reproduces_the_run() {
    let tmp = tempfile::tempdir().unwrap();
    let first = tmp.path().join("first");
    let model = corpus("hill_unpacked.rxn");
    let o =
        rxnpack(&["simulate", &model, "--runs", "3", "--t-end", "50", "--trajectories", "--out", first.to_str().unwrap()], None);
    assert!(o.status.success());
    let meta: serde_json::Value = serde_json::from_str(&read(&first.join("metadata.json"))).unwrap();
    let command = meta["command"].as_str().unwrap().replace(first.to_str().unwrap(), tmp.path().join("second").to_str().unwrap());
    let args: Vec<&str> = command.split(' ').skip(1).collect();
    assert!(rxnpack(&args, None).status.success());
    for name in ["summary.csv", "replicate_0000.csv", "replicate_0002.csv"] {
        assert_eq!(read(&first.join(name)), read(&tmp.path().join("second").join(name)), "{name}");
    }
}

#[test]
fn default_seed_is_zero_and_runs_are_repeatable() {
    let tmp = tempfile::tempdir().unwrap();
    let run = |dir: &str| {
        let out = tmp.path().join(dir);
        assert!(rxnpack(&["simulate", "mm_packed", "--runs", "5", "--t-end", "5", "--out", out.to_str().unwrap()], None)
            .status
            .success());
        (read(&out.join("summary.csv")), read(&out.join("metadata.json")))
    };
    let (a, meta) = run("a");
    let (b, _) = run("b");
    assert_eq!(a, b);
    assert!(meta.contains("\"seed\": 0"));
}

#[test]
fn output_directory_defaults_to_the_environment_override() {
    let tmp = tempfile::tempdir().unwrap();
    let o = rxnpack(&["reproduce", "table3"], Some(tmp.path()));
    assert!(o.status.success());
    assert!(tmp.path().join("reproduce/table3/table3.csv").is_file());
    assert!(tmp.path().join("reproduce/table3/metadata.json").is_file());
}

#[test]
fn input_errors_exit_with_one() {
    let o = rxnpack(&["simulate", "no/such/model.rxn", "--t-end", "1"], None);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("no/such/model.rxn"));

    assert_eq!(rxnpack(&["simulate", "--bogus"], None).status.code(), Some(1));
    assert_eq!(rxnpack(&["reproduce", "table9"], None).status.code(), Some(1));

    let tmp = tempfile::tempdir().unwrap();
    let bad = tmp.path().join("bad.rxn");
    std::fs::write(&bad, "model m\nspecies S = 1\nreaction r: S -> Q @ ma(1)\n").unwrap();
    let o = rxnpack(&["validate", bad.to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn unpacking_failures_exit_with_two() {
    let tmp = tempfile::tempdir().unwrap();
    let h3 = tmp.path().join("h3.rxn");
    std::fs::write(&h3, "model h\nspecies TF = 10\nspecies M = 0\nreaction tx: TF -> TF + M @ hill(1, 5, 3)\n").unwrap();
    let o = rxnpack(&["unpack", h3.to_str().unwrap(), "--hill", "tx:500:1:1"], None);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("n = 3"));

    let o = rxnpack(&["unpack", &corpus("mm_packed.rxn"), "--mm", "r1:60:1"], None);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn unpack_emits_elementary_network_and_report() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("mm.rxn");
    let o = rxnpack(&["unpack", &corpus("mm_packed.rxn"), "--mm", "r1:60:100", "--out", out.to_str().unwrap()], None);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = read(&out);
    assert_eq!(text.lines().filter(|l| l.starts_with("reaction")).count(), 3);
    let report: serde_json::Value = serde_json::from_str(&read(&tmp.path().join("mm.report.json"))).unwrap();
    assert_eq!(report["all_assumptions_hold"], true);
    let checks = report["expansions"][0]["assumptions"].as_array().unwrap();
    assert!(checks.iter().any(|c| c["detail"].as_str().unwrap().contains("Km = 300")));

    // the unpacked file feeds straight back into the simulator
    let sim = tmp.path().join("sim");
    let o = rxnpack(&["simulate", out.to_str().unwrap(), "--runs", "2", "--t-end", "1", "--out", sim.to_str().unwrap()], None);
    assert!(o.status.success());

    let clock = tmp.path().join("clock.rxn");
    assert!(rxnpack(&["unpack", "clock_unpacked", "--out", clock.to_str().unwrap()], None).status.success());
    let report: serde_json::Value = serde_json::from_str(&read(&tmp.path().join("clock.report.json"))).unwrap();
    assert_eq!(report["expansions"].as_array().unwrap().len(), 4);
}

#[test]
fn analyze_and_ode_run_on_builtins() {
    let tmp = tempfile::tempdir().unwrap();
    let a = tmp.path().join("a");
    let o = rxnpack(
        &[
            "analyze",
            "mm_packed",
            "--runs",
            "20",
            "--t-end",
            "5",
            "--dt",
            "0.01",
            "--out",
            a.to_str().unwrap(),
            "rate",
            "--product",
            "P",
            "--s0",
            "599",
        ],
        None,
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let res: serde_json::Value = serde_json::from_str(&read(&a.join("analysis.json"))).unwrap();
    let rate = res["rate"].as_f64().unwrap();
    assert!((rate - 40.0).abs() < 5.0, "{rate}");

    let d = tmp.path().join("ode");
    assert!(rxnpack(&["ode", "clock_packed", "--t-end", "2880", "--dt", "10", "--out", d.to_str().unwrap()], None)
        .status
        .success());
    assert!(read(&d.join("ode.csv")).lines().next().unwrap().starts_with("time,"));
}

#[test]
fn reproduce_table3_reports_exact_constants() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("t3");
    let o = rxnpack(&["reproduce", "table3", "--out", out.to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(0));
    let csv = read(&out.join("table3.csv"));
    assert!(csv.lines().any(|l| l.starts_with("k2,99,99,true")), "{csv}");
    assert!(csv.lines().any(|l| l.starts_with("k3,1,1,true")), "{csv}");
}
