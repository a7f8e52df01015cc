use std::path::Path;
use std::process::{Command, Output};

fn klimm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_klimm"))
        .args(args)
        .env_remove("KLIMM_CACHE")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

#[test]
fn kl_prints_polynomial_and_value_at_one() {
    let first_line = |args: &[&str]| stdout(&klimm(args)).lines().next().unwrap().to_string();
    assert_eq!(first_line(&["kl", "1234", "1234"]), "1");
    assert_eq!(first_line(&["kl", "4321", "1234"]), "0");
    assert_eq!(first_line(&["kl", "1324", "3412"]), "1 + q");
    assert!(stdout(&klimm(&["kl", "1324", "3412"])).contains("P(1) = 2"));
    assert_eq!(first_line(&["kl", "1324", "3412", "--algorithm", "r-inversion"]), "1 + q");
    let j = json(&klimm(&["kl", "1324", "3412", "--format", "json"]));
    assert_eq!(j["display"], "1 + q");
    assert_eq!(j["at_one"], "2");
}

#[test]
fn kl_rejects_bad_input() {
    assert_eq!(klimm(&["kl", "1234", "123"]).status.code(), Some(2));
    assert_eq!(klimm(&["kl", "1224", "1234"]).status.code(), Some(2));
    assert_eq!(klimm(&["kl", "12", "21", "--algorithm", "nope"]).status.code(), Some(2));
}

#[test]
fn imm_on_the_example_matrix() {
    let o = klimm(&["imm", "2413", "--R", "1,2,3,4", "--C", "1,2,3,4", "-m", "example"]);
    assert!(o.status.success());
    let j = json(&o);
    assert_eq!(j["value"], "39");
    assert_eq!(j["admissible"], true);
    assert_eq!(j["largest_square"], 2);
    assert_eq!(j["length_v"], 3);
    assert_eq!(j["method"], "determinantal");

    let o = klimm(&["imm", "2413", "--R", "1,2,2,3", "--C", "1,2,2,3", "-m", "example", "--method", "both"]);
    assert!(o.status.success());
    let j = json(&o);
    assert_eq!(j["value"], "0");
    assert_eq!(j["admissible"], false);

    let o = klimm(&["imm", "2413", "-m", "example", "--method", "definition", "--format", "text"]);
    assert_eq!(stdout(&o), "Imm_2413 = 39 (admissible, largest square 2)\n");
}

#[test]
fn imm_of_identity_is_a_determinant() {
    let o = klimm(&["imm", "1234", "-m", "example", "--method", "both"]);
    assert!(o.status.success());
    // Determinant of the example matrix, computed independently.
    assert_eq!(json(&o)["value"], "-3");
}

#[test]
fn imm_reads_matrix_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.json");
    std::fs::write(&path, r#"{"rows": 2, "cols": 2, "entries": [["1/2", 3], [4, 5]]}"#).unwrap();
    let o = klimm(&["imm", "21", "-m", path.to_str().unwrap(), "--method", "both"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(json(&o)["value"], "12");
    let o = klimm(&["imm", "12", "-m", path.to_str().unwrap()]);
    assert_eq!(json(&o)["value"], "-19/2");
    assert_eq!(klimm(&["imm", "12", "-m", "/no/such/file"]).status.code(), Some(2));
}

#[test]
fn determinantal_method_refuses_forbidden_patterns() {
    let o = klimm(&["imm", "1324", "-m", "example"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("1324"));
    let o = klimm(&["imm", "1324", "-m", "example", "--method", "definition"]);
    assert!(o.status.success());
}

#[test]
fn graph_ascii_and_json() {
    let o = klimm(&["graph", "2413"]);
    let text = stdout(&o);
    assert!(text.starts_with(". x o o\n. o o x\nx o o .\no o x .\n"), "{text}");
    assert!(text.contains("cells: 12"));

    let j = json(&klimm(&["graph", "2413", "--format", "json"]));
    assert_eq!(j["cells"].as_array().unwrap().len(), 12);
    assert_eq!(j["graph_of_v"], serde_json::json!([[1, 2], [2, 4], [3, 1], [4, 3]]));

    let j = json(&klimm(&["graph", "6 10 4 7 8 9 5 3 1 2", "--format", "json"]));
    assert_eq!(
        j["spanning_corners"],
        serde_json::json!([[1, 6], [3, 4], [6, 9], [8, 3], [9, 1], [10, 2]])
    );
    let colors: Vec<_> = j["boxes"].as_array().unwrap().iter().map(|b| b["color"].clone()).collect();
    assert_eq!(colors, ["blue", "red", "blue", "green", "purple"]);

    let j = json(&klimm(&["graph", "4321", "--format", "json"]));
    assert_eq!(j["cells"], serde_json::json!([[1, 4], [2, 3], [3, 2], [4, 1]]));
}

fn gen_order(args: &[&str]) -> (serde_json::Value, String) {
    let o = klimm(args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    (json(&o), String::from_utf8(o.stderr).unwrap())
}

#[test]
fn gen_writes_verified_matrices() {
    let (m, err) = gen_order(&["gen", "4", "4", "--seed", "1"]);
    assert_eq!(m["rows"], 4);
    assert!(err.contains("max_positivity_order: 4"));
    let (_, err) = gen_order(&["gen", "4", "2"]);
    assert!(err.contains("max_positivity_order: 2"));
    let (m, err) = gen_order(&["gen", "1", "1"]);
    assert_eq!(m["entries"].as_array().unwrap().len(), 1);
    assert!(err.contains("max_positivity_order: 1"));
    let (_, err) = gen_order(&["gen", "4", "3", "--generator", "perturbation", "--budget", "10000"]);
    assert!(err.contains("max_positivity_order: 3"));
}

#[test]
fn gen_fallback_and_errors() {
    let o = klimm(&["gen", "4", "2", "--budget", "0"]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("built-in"));
    assert_eq!(json(&o)["entries"][0], "22");
    assert_eq!(klimm(&["gen", "5", "2", "--budget", "0"]).status.code(), Some(1));
    assert_eq!(klimm(&["gen", "4", "5"]).status.code(), Some(2));
    assert_eq!(klimm(&["gen", "4", "0"]).status.code(), Some(2));
}

#[test]
fn gen_to_file_round_trips_through_imm() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("tp.json");
    let o = klimm(&["gen", "3", "3", "--out", path.to_str().unwrap()]);
    assert!(stdout(&o).contains("max_positivity_order: 3"));
    let o = klimm(&["imm", "321", "-m", path.to_str().unwrap(), "--method", "both"]);
    assert!(o.status.success());
}

#[test]
fn check_runs_suites_by_id() {
    let o = klimm(&["check", "lemma-2.12", "--max-n", "5"]);
    assert!(o.status.success());
    let j = json(&o);
    assert_eq!(j["suite"], "squares");
    assert_eq!(j["cases_run"], j["cases_passed"]);
    assert_eq!(j["counterexamples"], serde_json::json!([]));
    assert!(klimm(&["check", "main-sq", "--max-n", "3", "--max-m", "3", "--samples", "2"]).status.success());
    assert!(klimm(&["check", "prop-3.2", "--samples", "10"]).status.success());
}

#[test]
fn check_rejects_bad_requests() {
    assert_eq!(klimm(&["check", "no-such-suite"]).status.code(), Some(2));
    assert_eq!(klimm(&["check", "squares", "--max-n", "8"]).status.code(), Some(2));
    assert_eq!(klimm(&["check"]).status.code(), Some(2));
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let args = ["check", "young", "--max-n", "3", "--seed", "5"];
    assert_eq!(klimm(&args).stdout, klimm(&args).stdout);
    let args = ["search", "5.2", "--max-n", "3", "--samples", "50", "--seed", "5"];
    assert_eq!(klimm(&args).stdout, klimm(&args).stdout);
}

#[test]
fn csv_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.csv");
    let o = klimm(&["check", "box-cover", "--max-n", "4", "--format", "csv", "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("suite,"));
    assert!(lines.next().unwrap().starts_with("box-cover,4,"));
}

#[test]
fn searches() {
    let o = klimm(&["search", "5.1", "--max-n", "4", "--k", "2", "--samples", "200"]);
    assert!(o.status.success());
    let j = json(&o);
    assert_eq!(j["counterexamples_total"], 0);
    assert!(j["notes"].to_string().contains("no counterexample found in 200 trials"));
    assert!(klimm(&["search", "5.3", "--max-n", "3", "--samples", "200"]).status.success());
    assert_eq!(klimm(&["search", "6.1"]).status.code(), Some(2));
}

#[test]
fn cache_directory_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_klimm"))
        .args(["check", "prop-3.1", "--max-n", "4", "--samples", "1"])
        .env("KLIMM_CACHE", dir.path())
        .output()
        .unwrap();
    assert!(o.status.success());
    assert!(Path::new(&dir.path().join("kl_S4.json")).exists());
    let o = Command::new(env!("CARGO_BIN_EXE_klimm"))
        .args(["kl", "1324", "3412"])
        .env("KLIMM_CACHE", dir.path())
        .output()
        .unwrap();
    assert!(String::from_utf8_lossy(&o.stdout).starts_with("1 + q"));
}

#[test]
fn list_names_everything() {
    let text = stdout(&klimm(&["list"]));
    for name in ["main-sq", "lemma-2.11", "5.3", "corner-shift", "r-inversion", "definition"] {
        assert!(text.contains(name), "{name}");
    }
}
