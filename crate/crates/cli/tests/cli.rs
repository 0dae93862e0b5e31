use std::process::{Command, Output};

use serde_json::Value;

fn subgauss(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_subgauss"))
        .args(args)
        .env_remove("SUBGAUSS_SEED")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

#[test]
fn proxy_json_keys() {
    let out = subgauss(&["proxy", "exponential", "--lambda", "1", "--a", "1", "--b", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let mut keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    keys.sort_unstable();
    assert_eq!(keys, ["case_tag", "family", "is_strict", "mean", "params", "variance", "variance_proxy"]);
    assert!((v["variance_proxy"].as_f64().unwrap() - 0.657_186).abs() < 1e-5);
    assert_eq!(v["family"], "exponential");
    assert_eq!(v["case_tag"], "exponential-finite");
}

#[test]
fn proxy_untruncated_gaussian() {
    let v = json(&subgauss(&["proxy", "gaussian", "--mu", "0", "--sigma", "1", "--a", "-inf", "--b", "+inf"]));
    assert_eq!(v["variance_proxy"].as_f64(), Some(1.0));
    assert_eq!(v["is_strict"], true);
    assert_eq!(v["case_tag"], "untruncated");
}

#[test]
fn proxy_scaled_gaussian_with_negative_mean() {
    let v = json(&subgauss(&["proxy", "gaussian", "--mu", "-1", "--sigma", "2", "--a", "-5", "--b", "0"]));
    assert_eq!(v["params"]["mu"].as_f64(), Some(-1.0));
    assert_eq!(v["case_tag"], "asymmetric-finite");
    assert!(v["variance_proxy"].as_f64().unwrap() > v["variance"].as_f64().unwrap());
}

#[test]
fn unbounded_exponential_is_a_domain_error() {
    let out = subgauss(&["proxy", "exponential", "--lambda", "1", "--a", "0", "--b", "+inf"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not sub-Gaussian"));
    let out = subgauss(&["certify", "exponential", "--a", "0", "--b", "+inf"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(subgauss(&[]).status.code(), Some(1));
    assert_eq!(subgauss(&["proxy", "poisson"]).status.code(), Some(1));
    assert_eq!(subgauss(&["proxy", "gaussian", "--a", "0"]).status.code(), Some(1));
    assert_eq!(subgauss(&["lemmas", "--suite", "everything"]).status.code(), Some(1));
    assert_eq!(subgauss(&["figure", "7"]).status.code(), Some(1));
    assert_eq!(subgauss(&["figure", "1", "--out", "/nonexistent-dir/f.csv"]).status.code(), Some(1));
    assert_eq!(subgauss(&["certify", "--tol", "0", "gaussian", "--a", "0", "--b", "1"]).status.code(), Some(1));
}

#[test]
fn certify_examples() {
    let out = subgauss(&["certify", "gaussian", "--a", "-2", "--b", "0.5"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let mut keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    keys.sort_unstable();
    assert_eq!(keys, ["abs_diff", "certified", "closed_form", "evaluations", "theta_star"]);
    assert!(v["abs_diff"].as_f64().unwrap() <= 1e-4);

    let v = json(&subgauss(&["certify", "exponential", "--lambda", "1", "--a", "1", "--b", "4"]));
    assert!((v["certified"].as_f64().unwrap() - 0.657_186).abs() <= 1e-4);

    let v = json(&subgauss(&["certify", "gaussian", "--a", "-2", "--b", "2"]));
    let variance = json(&subgauss(&["proxy", "gaussian", "--a", "-2", "--b", "2"]))["variance"].as_f64().unwrap();
    assert!((v["certified"].as_f64().unwrap() - variance).abs() <= 1e-5);
}

#[test]
fn certify_with_a_too_small_window_fails_verification() {
    // the tangency at theta = 2 lies outside [-1, 1]
    let out = subgauss(&["certify", "--theta-max", "1", "exponential", "--a", "1", "--b", "4"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(json(&out)["abs_diff"].as_f64().unwrap() > 1e-4);
}

#[test]
fn monte_carlo_is_seeded() {
    let args = ["certify", "--monte-carlo", "--grid", "1001", "exponential", "--a", "1", "--b", "4"];
    let first = json(&subgauss(&args));
    let again = json(&subgauss(&args));
    assert_eq!(first["monte_carlo"], again["monte_carlo"]);
    let mc = &first["monte_carlo"];
    let (est, se, exact) = (
        mc["estimate"].as_f64().unwrap(),
        mc["std_error"].as_f64().unwrap(),
        mc["exact"].as_f64().unwrap(),
    );
    assert!((est - exact).abs() <= 4.0 * se);
    let reseeded = Command::new(env!("CARGO_BIN_EXE_subgauss"))
        .args(args)
        .env("SUBGAUSS_SEED", "7")
        .output()
        .unwrap();
    let reseeded = json(&reseeded);
    assert_eq!(reseeded["monte_carlo"]["seed"].as_u64(), Some(7));
    assert_ne!(reseeded["monte_carlo"]["estimate"], mc["estimate"]);
}

#[test]
fn lemma_suites() {
    let out = subgauss(&["lemmas", "--suite", "appendix"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    for name in ["K", "P", "R", "B0"] {
        assert!(text.contains(&format!("PASS appendix/{name}-positive")), "{text}");
    }
    let out = subgauss(&["lemmas", "--suite", "exponential", "--grid", "50"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("PASS exponential/bracketing"));
    assert!(!text.contains("FAIL"));
    let out = subgauss(&["lemmas", "--suite", "gaussian"]);
    let text = String::from_utf8(out.stdout).unwrap();
    for name in ["concavity", "tangency", "symmetry"] {
        assert!(text.lines().any(|l| l.starts_with("PASS gaussian/") && l.contains(name)), "{text}");
    }
}

#[test]
fn figures_are_deterministic_and_sized() {
    let dir = tempfile::tempdir().unwrap();
    for id in ["1", "2", "3", "4"] {
        let a = dir.path().join(format!("a{id}.csv"));
        let b = dir.path().join(format!("b{id}.csv"));
        for p in [&a, &b] {
            let out = subgauss(&["figure", id, "--grid-points", "50", "--out", p.to_str().unwrap()]);
            assert_eq!(out.status.code(), Some(0));
        }
        let text = std::fs::read_to_string(&a).unwrap();
        assert_eq!(text, std::fs::read_to_string(&b).unwrap());
        let rows = text.lines().count() - 1;
        assert!((50..=52).contains(&rows), "figure {id}: {rows} rows");
    }
    let out = subgauss(&["figure", "4", "--grid-points", "5"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("theta,g_at_0.8095,g_at_0.8107,g_at_0.812\n"));
}
