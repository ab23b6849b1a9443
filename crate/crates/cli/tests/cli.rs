use std::path::Path;
use std::process::{Command, Output};

fn hyperdyn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperdyn"))
        .args(args)
        .env_remove("HYPERDYN_THREADS")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited")
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("JSON report")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn density_report_embeds_config_and_ladder() {
    let o = hyperdyn(&["density", "--set", "dyadic:l=1,m=1", "--ladder", "1e3,1e4", "--kinds", "lower,log"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    assert_eq!(v["command"], "density");
    assert_eq!(v["config"]["set"], "dyadic:l=1,m=1");
    assert_eq!(v["rows"].as_array().unwrap().len(), 4);
    assert!(v["versions"]["hyperdyn-core"].is_string());
}

#[test]
fn csv_output_has_comment_preamble_then_header() {
    let o = hyperdyn(&["--format", "csv", "family", "--L", "2", "--rcap", "6"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines().skip_while(|l| l.starts_with('#'));
    let header = lines.next().expect("header row");
    assert!(header.split(',').count() > 1, "{header}");
    assert!(lines.next().is_some());
    assert!(text.starts_with("# hyperdyn-cli "));
    assert!(text.contains("# command: family"));
}

#[test]
fn repeat_runs_are_byte_identical() {
    let args = ["nogo", "--op", "rolewicz", "--random", "8", "--seed", "11", "--horizon", "2000"];
    let (a, b) = (hyperdyn(&args), hyperdyn(&args));
    assert_eq!(code(&a), 0, "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    let alg = ["algebra", "--task", "associativity", "--trials", "10", "--seed", "4"];
    assert_eq!(hyperdyn(&alg).stdout, hyperdyn(&alg).stdout);
}

#[test]
fn thread_count_does_not_change_results() {
    let args = ["nogo", "--op", "maclane", "--random", "6", "--seed", "2", "--horizon", "500"];
    let one = Command::new(env!("CARGO_BIN_EXE_hyperdyn")).args(args).env("HYPERDYN_THREADS", "1").output().unwrap();
    let many = Command::new(env!("CARGO_BIN_EXE_hyperdyn")).args(args).env("HYPERDYN_THREADS", "4").output().unwrap();
    assert_eq!(code(&one), 0);
    assert_eq!(one.stdout, many.stdout);
}

#[test]
fn randomized_tasks_demand_a_seed() {
    let o = hyperdyn(&["algebra", "--task", "associativity"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("--seed"));
    assert_eq!(code(&hyperdyn(&["nogo", "--op", "rolewicz", "--random", "3"])), 1);
}

#[test]
fn invalid_configs_exit_1() {
    assert_eq!(code(&hyperdyn(&["family", "--L", "0"])), 1);
    assert_eq!(code(&hyperdyn(&["density", "--set", "bogus"])), 1);
    assert_eq!(code(&hyperdyn(&["construct", "--lambda", "0.5"])), 1);
    assert_eq!(code(&hyperdyn(&["nogo", "--op", "weights", "--p", "1/2"])), 1);
    let bad = hyperdyn(&["nogo", "--op", "rolewicz", "--vector", "/nonexistent.json"]);
    assert_eq!(code(&bad), 1);
    assert!(bad.stdout.is_empty());
}

#[test]
fn unmet_premise_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let zero = write(dir.path(), "zero.json", r#"{"base":1,"entries":[["1",0.0,0.0]]}"#);
    let o = hyperdyn(&["nogo", "--op", "rolewicz", "--vector", &zero]);
    assert_eq!(code(&o), 2);
    assert_eq!(json(&o)["status"], "degenerate");
    // x₂² vanishes on the first three columns, so the search runs dry
    let o = hyperdyn(&["algebra", "--task", "witness", "--poly", "[[[0,2],1,0]]", "--budget", "3"]);
    assert_eq!(code(&o), 2);
    assert_eq!(json(&o)["status"], "not-found-at-budget");
    // x₁² − x₁² merges to the zero polynomial, which is no relation at all
    assert_eq!(code(&hyperdyn(&["algebra", "--task", "witness", "--poly", "[[[2],1,0],[[2],-1,0]]"])), 1);
}

#[test]
fn witness_search_reports_a_sound_witness() {
    let o = hyperdyn(&["algebra", "--task", "witness", "--poly", "[[[2],1,0],[[1,1],-1,0]]"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let w = &json(&o)["summary"]["outcome"];
    assert_eq!(w["kind"], "found");
    assert_eq!(w["j"], 2);
    assert!(w["gamma_scaled"][0].as_f64().unwrap().hypot(w["gamma_scaled"][1].as_f64().unwrap()) >= 0.5 * w["p_j"].as_f64().unwrap());
}

#[test]
fn weights_classification_flags_the_boundary_example() {
    let o = hyperdyn(&["nogo", "--op", "weights", "--alpha", "4/5", "--p", "2", "--m", "2"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("\"power_obstructed\": true"), "{text}");
    assert!(text.contains("\"fhc\": true"));
}

#[test]
fn construct_certifies_orbit_errors() {
    let o = hyperdyn(&["construct", "--L", "2", "--depth", "4"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    assert_eq!(v["summary"]["failed"], 0);
    assert!(v["summary"]["checked"].as_u64().unwrap() > 0);
}

#[test]
fn output_flag_writes_the_report_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let o = hyperdyn(&["--output", out.to_str().unwrap(), "family", "--L", "1"]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(v["command"], "family");
}
