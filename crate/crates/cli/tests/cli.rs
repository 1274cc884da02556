use std::path::PathBuf;
use std::process::{Command, Output};

fn subspace(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_subspace"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn conic() -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("scenarios/conic.json")
        .display()
        .to_string()
}

#[test]
fn check_conic_succeeds() {
    let out = subspace(&["check", &conic()]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("lhs = 6/1  rhs_main = 10/1"));
    assert!(text.contains("refuted, witnesses [0, 1]"));
}

#[test]
fn check_json_report_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let out = subspace(&["check", &conic(), "--format", "json", "--report", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let written = std::fs::read_to_string(&path).unwrap();
    assert_eq!(written, stdout(&out));
    let v: serde_json::Value = serde_json::from_str(&written).unwrap();
    assert_eq!(v["points"][0]["lhs"], "6/1");
    assert_eq!(v["constants"]["m"], 643);
}

#[test]
fn bad_inputs_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"ambient_dim": 2}"#).unwrap();
    let out = subspace(&["check", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("/variety"));
    assert_eq!(subspace(&["check", "/nonexistent/file.json"]).status.code(), Some(2));
    assert_eq!(subspace(&["bounds", "a-eps", "--n", "1"]).status.code(), Some(2));
}

#[test]
fn violation_exits_1() {
    // x = [t^2 : 1] on P^1 with S covering every zero of the four divisors:
    // lhs = 2 + 2 + 1 + 1 + 2 = 8 while (N(n+1) + eps) h(x) = 21/10 * 2.
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("v.json");
    std::fs::write(
        &path,
        r#"{
  "ambient_dim": 1,
  "variety": {"kind": "projective_space"},
  "divisors": [{"poly": "X0", "degree": 1}, {"poly": "X1", "degree": 1},
               {"poly": "X0 - X1", "degree": 1}, {"poly": "X0 + X1", "degree": 1}],
  "N": 1,
  "places": ["t", "t-1", "t+1", "t^2+1", "inf"],
  "epsilon": "1/10",
  "points": [["t^2", "1"]]
}"#,
    )
    .unwrap();
    let out = subspace(&["check", path.to_str().unwrap(), "--format", "json"]);
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["points"][0]["verdict"], "Violation");
    assert_eq!(v["points"][0]["lhs"], "8/1");
    assert_eq!(v["points"][0]["rhs_full"], "21/5");
}

#[test]
fn bounds_a_eps() {
    let out = subspace(&["bounds", "a-eps", "--n", "1", "--delta", "2", "--d", "1", "--eps", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("a_eps = 386"));
    assert!(text.contains("passes for m in [386, 486]"));
}

#[test]
fn hilbert_and_filtration() {
    let out = subspace(&["hilbert", "--gens", "X0*X2 - X1^2", "--m", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("H(3) = 7"));

    let out = subspace(&["filtration", "--m", "4", "--q-poly", "X0", "--ambient-dim", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("sum of i_j = 10 (level sum 10), S(m/d-1) = 9, difference 1"));
}

#[test]
fn chow_and_constants_and_position() {
    let dir = tempfile::tempdir().unwrap();
    let chow = dir.path().join("chow.json");
    std::fs::write(&chow, r#"{"kind": "hypersurface", "F": "X0*X2 - X1^2"}"#).unwrap();
    let out = subspace(&["chow", "--input", chow.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("block degrees: [2, 2]"));
    assert!(text.contains("closed form 25, skew monomials 36"));

    let inputs = dir.path().join("inputs.json");
    std::fs::write(
        &inputs,
        r#"{"n": 1, "delta": 2, "ambient_dim": 2, "N": 2, "q": 4, "degrees": [1, 1, 1, 1],
            "epsilon": "1", "s_card": 2, "s_degree": 2, "h_fx": "0", "h_q_family": "0",
            "h_q": ["0", "0", "0", "0"], "e_s_term": "0", "c1": "0", "c1_prime": "0", "m": 4}"#,
    )
    .unwrap();
    let out = subspace(&["constants", "--inputs", inputs.to_str().unwrap(), "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["constants"]["b"], "10240000000256");
    assert_eq!(v["constants"]["s_sum"], "15");

    let out = subspace(&["position", "--file", &conic()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("N = 2: in subgeneral position"));
}
