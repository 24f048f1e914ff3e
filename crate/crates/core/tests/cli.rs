use std::fs;
use std::path::PathBuf;

use ochroma::cli::run;

fn golden_dir() -> PathBuf {
    std::env::var_os("OCHROMA_GOLDEN_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden"))
}

fn exec(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("ochroma").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

/// Compares stdout with the stored file, writing it when absent.
fn golden(name: &str, args: &[&str]) {
    let (code, out, err) = exec(args);
    assert_eq!(code, 0, "{name}: {err}");
    let path = golden_dir().join(name);
    match fs::read_to_string(&path) {
        Ok(expected) => assert_eq!(out, expected, "{name} differs from {}", path.display()),
        Err(_) => {
            fs::create_dir_all(golden_dir()).unwrap();
            fs::write(&path, &out).unwrap();
        }
    }
}

fn data(file: &str) -> String {
    format!("{}/tests/data/{file}", env!("CARGO_MANIFEST_DIR"))
}

fn scratch_file(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("ochroma-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn star6_orbit_tables() {
    for k in 1..=7 {
        let orbit = format!("orbit{k}");
        golden(&format!("analyze_star6_{orbit}.txt"), &["analyze", "--builtin", "star6", "--orientation", &orbit]);
    }
    golden(
        "analyze_star6_orbit7.tsv",
        &["analyze", "--builtin", "star6", "--orientation", "orbit7", "--format", "tsv"],
    );
}

#[test]
fn other_catalog_tables() {
    golden("analyze_star8.txt", &["analyze", "--builtin", "star8"]);
    golden("analyze_whitehead.txt", &["analyze", "--builtin", "whitehead"]);
    golden("analyze_fig7c.txt", &["analyze", "--builtin", "fig7c"]);
}

#[test]
fn orbit_reports() {
    golden("orbits_star6.txt", &["orbits", "--builtin", "star6"]);
    golden("orbits_star6.tsv", &["orbits", "--builtin", "star6", "--format", "tsv"]);
    golden("orbits_whitehead.txt", &["orbits", "--builtin", "whitehead"]);
}

#[test]
fn tait_reports() {
    golden("tait_expand_star6.txt", &["tait", "--builtin", "star6", "--orientation", "orbit1"]);
    golden("tait_contract_petersen.txt", &["tait", "--file", &data("petersen.vog"), "--direction", "contract"]);
}

#[test]
fn engine_traces() {
    golden("engine_star6_orbit5.txt", &["engine", "--builtin", "star6", "--orientation", "orbit5"]);
    golden("engine_whitehead.txt", &["engine", "--builtin", "whitehead"]);
    golden("engine_fig16.txt", &["engine", "--builtin", "fig16"]);
}

#[test]
fn snark_scan_is_stable() {
    let petersen = data("petersen.vog");
    golden("snark_scan_petersen.txt", &["snark-scan", "--file", &petersen]);
    let (_, one, _) = exec(&["snark-scan", "--file", &petersen, "--jobs", "1"]);
    let (_, four, _) = exec(&["snark-scan", "--file", &petersen, "--jobs", "4"]);
    assert_eq!(one, four);
    assert!(one.contains("perfect matchings 6"));
    assert!(one.contains("proper 3-edge-colourings 0"));
}

#[test]
fn pd_input_matches_builtin_counts() {
    let (code, out, _) = exec(&["analyze", "--pd", "X[6,1,7,2],X[10,7,5,8],X[4,5,1,6],X[2,10,3,9],X[8,4,9,3]"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("vertices 5  edges 10"));
}

#[test]
fn witnesses_validate() {
    for (cmd, name, orientation) in [
        ("analyze", "star6", "orbit3"),
        ("engine", "star6", "orbit6"),
        ("engine", "star8", "ex42"),
        ("analyze", "whitehead", "ex41"),
    ] {
        let path = scratch_file(&format!("{cmd}-{name}-{orientation}.txt"));
        let p = path.to_str().unwrap();
        let (code, _, err) = exec(&[cmd, "--builtin", name, "--orientation", orientation, "--witness", p]);
        assert_eq!(code, 0, "{err}");
        let (code, out, err) = exec(&["validate", "--builtin", name, "--orientation", orientation, "--colouring", p]);
        assert_eq!(code, 0, "{cmd} {name}: {err}");
        assert!(out.starts_with("valid o-colouring"));
    }
}

#[test]
fn rejected_inputs_exit_with_two() {
    let (code, _, err) = exec(&["analyze", "--builtin", "nosuch"]);
    assert_eq!(code, 2);
    assert!(err.contains("nosuch"));
    let (code, _, _) = exec(&["analyze", "--builtin", "star6", "--orientation", "999"]);
    assert_eq!(code, 2);
    let bad = scratch_file("mono.txt");
    fs::write(&bad, "0 0 0 0 0 0 0 0 0 0 0 0\n").unwrap();
    let (code, out, err) = exec(&["validate", "--builtin", "star6", "--colouring", bad.to_str().unwrap()]);
    assert_eq!(code, 2, "{out}");
    assert!(err.contains("invalid o-colouring"));
    let broken = scratch_file("broken.vog");
    fs::write(&broken, "V 1\nE 2\ne 0 0 0\n").unwrap();
    let (code, _, _) = exec(&["analyze", "--file", broken.to_str().unwrap()]);
    assert_eq!(code, 2);
}

#[test]
fn usage_errors_and_help() {
    let (code, _, _) = exec(&["analyze"]);
    assert_eq!(code, 2);
    let (code, out, _) = exec(&["--help"]);
    assert_eq!(code, 0);
    for sub in ["analyze", "orbits", "tait", "engine", "snark-scan", "validate"] {
        assert!(out.contains(sub), "{sub}");
    }
}
