use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use semihard::finite::{read_mechanism_table, write_mechanism_table};
use semihard::instances::{college, college_mechanism};
use semihard::model::FiniteInstance;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_semihard")).args(args).output().expect("binary runs")
}

fn write_config(dir: &Path, inst: &FiniteInstance, extra: &[(&str, toml::Value)]) -> String {
    let mut table = toml::Table::new();
    for (k, v) in extra {
        table.insert(k.to_string(), v.clone());
    }
    table.insert("instance".into(), toml::Value::try_from(inst).unwrap());
    let path = dir.join("config.toml");
    fs::write(&path, toml::to_string(&table).unwrap()).unwrap();
    path.to_string_lossy().into_owned()
}

fn read_dir(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), fs::read(e.path()).unwrap())
        })
        .collect();
    files.sort();
    files
}

#[test]
fn solve_finite_is_deterministic_and_its_table_reads_back() {
    let tmp = tempfile::tempdir().unwrap();
    let inst = college(true);
    let cfg = write_config(tmp.path(), &inst, &[("mode", "exact".into())]);
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    for out in [&a, &b] {
        let o = run(&["solve-finite", "--config", &cfg, "--out", out.to_str().unwrap()]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        assert!(String::from_utf8_lossy(&o.stdout).contains("value_exact = 53/24"));
    }
    assert_eq!(read_dir(&a), read_dir(&b));

    let table = fs::read_to_string(a.join("mechanism.csv")).unwrap();
    let mech = read_mechanism_table(&inst.space, &table).unwrap();
    assert!(mech.violations(&inst.space).is_empty());
    let audit: toml::Table = fs::read_to_string(a.join("audit.toml")).unwrap().parse().unwrap();
    assert_eq!(audit["passes"].as_bool(), Some(true));
}

#[test]
fn audit_and_canonicalize_the_stochastic_menu() {
    let tmp = tempfile::tempdir().unwrap();
    let inst = college(true);
    let cfg = write_config(tmp.path(), &inst, &[]);
    let mech_path = tmp.path().join("menu.csv");
    fs::write(&mech_path, write_mechanism_table(&inst.space, &college_mechanism()).unwrap()).unwrap();

    let o = run(&["audit", "--config", &cfg, "--mechanism", mech_path.to_str().unwrap()]);
    assert!(o.status.success());
    let report: toml::Table = String::from_utf8(o.stdout).unwrap().parse().unwrap();
    assert_eq!(report["passes"].as_bool(), Some(true));

    let out = tmp.path().join("canon");
    let o = run(&["canonicalize", "--config", &cfg, "--mechanism", mech_path.to_str().unwrap(), "--rebalance", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8_lossy(&o.stdout).contains("designer_value = 69/32"));
    let mech = read_mechanism_table(&inst.space, &fs::read_to_string(out.join("mechanism.csv")).unwrap()).unwrap();
    assert!(mech.violations(&inst.space).is_empty());

    // t1 is sent to two scores, so the score-based reduction must refuse
    let o = run(&["canonicalize", "--config", &cfg, "--mechanism", mech_path.to_str().unwrap(), "--score-based"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn solve_continuous_writes_the_figure_table() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("c");
    let o = run(&[
        "solve-continuous", "--cost", "quadratic", "--gamma", "4", "--dist", "uniform:-2,1", "--samples", "31", "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let summary = fs::read_to_string(out.join("summary.txt")).unwrap();
    assert!(summary.contains("regime = interior"));
    assert!(summary.contains("t_dagger = -0.333333333333"));
    let table = fs::read_to_string(out.join("solution.csv")).unwrap();
    let mut lines = table.lines();
    assert_eq!(lines.next(), Some("t,a_star,Q_star,C,U,cost"));
    assert_eq!(lines.count(), 31);
}

#[test]
fn discretized_cross_check_and_density_grid() {
    let tmp = tempfile::tempdir().unwrap();
    let grid = tmp.path().join("density.csv");
    fs::write(&grid, "t,f\n-2,0.333333333333\n1,0.333333333333\n").unwrap();
    let spec = format!("grid:{}", grid.display());
    let o = run(&["solve-continuous", "--cost", "linear", "--gamma", "4", "--dist", &spec, "--grid-types", "7"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("p_star = 0.5"));
    assert!(text.contains("grid_lp_value = 0.0688"));
}

#[test]
fn errors_are_json_with_documented_exit_codes() {
    let tmp = tempfile::tempdir().unwrap();
    let valley = tmp.path().join("valley.csv");
    fs::write(&valley, "-2,1\n-1.5,1\n-1,0.01\n-0.5,1\n0,0.2\n1,0.2\n").unwrap();
    let valley = format!("grid:{}", valley.display());
    let cases: [(&[&str], i32, &str); 4] = [
        (&["solve-continuous", "--gamma=-2"], 2, "config"),
        (&["solve-continuous", "--cost", "linear", "--gamma", "4", "--dist", "uniform:-1,2"], 3, "input_assumption"),
        (&["solve-continuous", "--cost", "quadratic", "--gamma", "4", "--dist", &valley], 3, "monotonicity_unverified"),
        (&["solve-finite"], 2, "config"),
    ];
    for (args, code, category) in cases {
        let o = run(args);
        assert_eq!(o.status.code(), Some(code), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        let v: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
        assert_eq!(v["error"], category, "{args:?}");
        assert_eq!(v["exit_code"], code);
    }
}
