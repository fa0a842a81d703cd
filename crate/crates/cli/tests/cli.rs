use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn meanelem(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_meanelem"))
        .args(args)
        .env_remove("MEANELEM_CACHE")
        .output()
        .expect("spawn meanelem")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn derived(order: &str) -> (TempDir, String) {
    let dir = TempDir::new().unwrap();
    let cache = dir.path().join("cache").display().to_string();
    let o = meanelem(&["derive", "--order", order, "--cache", &cache]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    (dir, cache)
}

fn copy_tree(from: &Path, to: &Path) {
    fs::create_dir_all(to).unwrap();
    for entry in fs::read_dir(from).unwrap() {
        let entry = entry.unwrap();
        let target = to.join(entry.file_name());
        if entry.file_type().unwrap().is_dir() {
            copy_tree(&entry.path(), &target);
        } else {
            fs::copy(entry.path(), target).unwrap();
        }
    }
}

fn read_tree(dir: &Path) -> Vec<(PathBuf, Vec<u8>)> {
    let mut out = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for entry in fs::read_dir(&d).unwrap() {
            let p = entry.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                out.push((
                    p.strip_prefix(dir).unwrap().to_path_buf(),
                    fs::read(&p).unwrap(),
                ));
            }
        }
    }
    out.sort();
    out
}

const SHORT: &str = r#"
name = "short"
duration_s = 21600.0
sample_dt_s = 600.0

[elements]
a_km = 9500.0
e = 0.2
i_deg = 20.0
raan_deg = 0.0
argp_deg = 0.0
mean_anomaly_deg = 0.0

[theory]
theories = [1, 2]
order = 1
"#;

#[test]
fn derive_then_verify_passes() {
    let (_dir, cache) = derived("2");
    let o = meanelem(&["verify", "--order", "2", "--cache", &cache]);
    let text = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{text}");
    assert!(text.contains("PASS  theory 1: Phi_a,0,2"));
    assert!(text.contains("0 failed"));
    assert!(!text.contains("FAIL"));
}

#[test]
fn theory_two_has_no_mean_a_rate() {
    let (_dir, cache) = derived("3");
    for m in 1..=3 {
        let phi = Path::new(&cache).join(format!("theory2/order{m}/phi_a.series"));
        let body: Vec<_> = fs::read_to_string(&phi)
            .unwrap()
            .lines()
            .filter(|l| !l.starts_with('#'))
            .map(String::from)
            .collect();
        assert!(
            body.iter().all(|l| l.trim().is_empty()),
            "order {m}: {body:?}"
        );
    }
}

#[test]
fn derivation_output_is_byte_identical() {
    let (a, _) = derived("2");
    let (b, _) = derived("2");
    assert_eq!(
        read_tree(&a.path().join("cache")),
        read_tree(&b.path().join("cache"))
    );
}

#[test]
fn corrupted_fixture_fails_and_names_term() {
    let (dir, cache) = derived("2");
    let fixtures = dir.path().join("fixtures");
    copy_tree(
        &Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures"),
        &fixtures,
    );
    let target = fixtures.join("printed/phi02_a.series");
    let mut text = fs::read_to_string(&target).unwrap();
    text.push_str("0 | 0 | 1 | 2 | cos | 0 | 0 | 3/2 | 1\n");
    fs::write(&target, text).unwrap();

    let o = meanelem(&[
        "verify",
        "--order",
        "2",
        "--cache",
        &cache,
        "--fixtures",
        fixtures.to_str().unwrap(),
    ]);
    let text = stdout(&o);
    assert_eq!(o.status.code(), Some(1), "{text}");
    assert!(
        text.lines()
            .any(|l| l.starts_with("FAIL") && l.contains("Phi_a,0,2") && l.contains("term")),
        "{text}"
    );
}

#[test]
fn missing_cache_and_bad_arguments_exit_3() {
    let dir = TempDir::new().unwrap();
    let cache = dir.path().join("none").display().to_string();
    assert_eq!(
        meanelem(&["verify", "--cache", &cache]).status.code(),
        Some(3)
    );
    assert_eq!(meanelem(&["derive", "--order", "5"]).status.code(), Some(3));
    assert_eq!(
        meanelem(&["derive", "--theory", "3"]).status.code(),
        Some(3)
    );
    assert_eq!(
        meanelem(&[
            "propagate",
            "--scenario",
            "no_such_scenario",
            "--cache",
            &cache
        ])
        .status
        .code(),
        Some(3)
    );
    assert_eq!(meanelem(&["frobnicate"]).status.code(), Some(3));
    assert_eq!(meanelem(&["--help"]).status.code(), Some(0));
}

#[test]
fn propagation_writes_deterministic_csv() {
    let (dir, cache) = derived("2");
    let scenario = dir.path().join("short.toml");
    fs::write(&scenario, SHORT).unwrap();
    let scenario = scenario.to_str().unwrap();
    let mut trees = Vec::new();
    for run in ["out1", "out2"] {
        let out = dir.path().join(run);
        let o = meanelem(&[
            "propagate",
            "--scenario",
            scenario,
            "--cache",
            &cache,
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(
            o.status.code(),
            Some(0),
            "{}",
            String::from_utf8_lossy(&o.stderr)
        );
        assert!(stdout(&o).contains("theory1_order1: max RSS"));
        trees.push(read_tree(&out.join("short")));
    }
    let names: Vec<_> = trees[0]
        .iter()
        .map(|(p, _)| p.display().to_string())
        .collect();
    assert_eq!(
        names,
        [
            "reference.csv",
            "theory1_order1.csv",
            "theory1_order1_errors.csv",
            "theory2_order1.csv",
            "theory2_order1_errors.csv"
        ]
    );
    assert_eq!(trees[0], trees[1]);
    let errors = String::from_utf8(trees[0][2].1.clone()).unwrap();
    assert!(errors.starts_with("t_s,rss_km,along_km"));
    assert_eq!(errors.lines().count(), 1 + 37);
}

#[test]
fn propagation_needs_higher_order_artifacts() {
    let (dir, cache) = derived("2");
    let out = dir.path().join("out");
    let o = meanelem(&[
        "propagate",
        "--scenario",
        "second_order",
        "--cache",
        &cache,
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("meanelem derive"));
}

#[test]
fn cache_location_from_environment() {
    let dir = TempDir::new().unwrap();
    let cache = dir.path().join("env-cache");
    let o = Command::new(env!("CARGO_BIN_EXE_meanelem"))
        .args(["derive", "--theory", "2", "--order", "1"])
        .env("MEANELEM_CACHE", &cache)
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(cache.join("theory2/order1/phi_a.series").exists());
    assert!(!dir.path().join("theory-cache").exists());
}
