use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const BASE: &str = r#"
[model]
u = 0
c = 1

[claims]
dist = "exponential"
rate = 1

[premium_jumps]
dist = "exponential"
rate = 1

[mixing]
type = "degenerate"
gamma = 1
delta = 0.5
"#;

fn write_config(dir: &TempDir, text: &str) -> PathBuf {
    let path = dir.path().join("run.toml");
    fs::write(&path, text).unwrap();
    path
}

fn mixruin(args: &[&str], config: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mixruin"))
        .args(args)
        .arg("--config")
        .arg(config)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn column(csv: &str, name: &str) -> Vec<f64> {
    let mut lines = csv.lines();
    let idx = lines.next().unwrap().split(',').position(|h| h == name).unwrap();
    lines.map(|l| l.split(',').nth(idx).unwrap().parse().unwrap()).collect()
}

#[test]
fn closed_form_config_a() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(&dir, BASE);
    let out = stdout(&mixruin(&["closed-form", "--u-grid", "0:2:1"], &cfg));
    assert_eq!(
        out,
        "u,psi_closed\n0,0.719223593596\n1,0.543155625254\n2,0.410189593155\n"
    );
}

#[test]
fn closed_form_single_point_grid() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(&dir, BASE);
    let out = stdout(&mixruin(&["closed-form", "--u-grid", "1.5:1.5:1"], &cfg));
    assert_eq!(out.lines().count(), 2);
    assert!(out.starts_with("u,psi_closed\n1.5,"));
}

#[test]
fn net_profit_failure_gives_ones() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(&dir, &BASE.replace("gamma = 1\n", "gamma = 2\n"));
    let out = stdout(&mixruin(&["closed-form", "--u-grid", "0:3:1"], &cfg));
    assert_eq!(column(&out, "psi_closed"), vec![1.0; 4]);
    let out = stdout(&mixruin(&["solve", "--u-grid", "0:3:1"], &cfg));
    assert_eq!(column(&out, "psi_solver"), vec![1.0; 4]);
}

#[test]
fn moments_row_at_t2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(&dir, &BASE.replace("u = 0", "u = 1"));
    let out = stdout(&mixruin(&["moments", "--u-grid", "0:2:2"], &cfg));
    assert_eq!(out, "t,mean,variance\n0,1,0\n2,2,6\n");
}

#[test]
fn discrete_mixing_closed_column() {
    let dir = tempfile::tempdir().unwrap();
    let text = BASE.replace(
        "type = \"degenerate\"\ngamma = 1\ndelta = 0.5",
        "type = \"discrete\"\natoms = [\n  { gamma = 1, delta = 0.5, prob = 0.5 },\n  { gamma = 1.5, delta = 0.5, prob = 0.5 },\n]",
    );
    let cfg = write_config(&dir, &text);
    let o = mixruin(&["compare", "--u-grid", "1:1:1"], &cfg);
    let out = stdout(&o);
    assert_eq!(out.lines().next().unwrap(), "u,psi_closed,psi_solver");
    // atom 2 fails net profit: 0.5 * 0.543156 + 0.5 * 1
    let closed = column(&out, "psi_closed")[0];
    assert!((closed - 0.771578).abs() < 1e-6, "{closed}");
    assert!((closed - column(&out, "psi_solver")[0]).abs() < 1e-3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("max |closed - solver|"));
}

#[test]
fn compare_reports_summary_and_coverage() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(&dir, &format!("{BASE}\n[mc]\npaths = 20000\nseed = 5\n"));
    let o = mixruin(&["compare", "--u-grid", "0:2:1"], &cfg);
    let out = stdout(&o);
    assert_eq!(out.lines().next().unwrap(), "u,psi_closed,psi_solver,psi_mc,ci_low,ci_high");
    let summary = String::from_utf8_lossy(&o.stderr);
    assert!(summary.contains("max |closed - solver|") && summary.contains("/3 nodes"), "{summary}");
}

#[test]
fn simulate_schema_and_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("mc.csv");
    let text = format!(
        "{BASE}\n[mc]\npaths = 5000\nseed = 3\n\n[output]\npath = \"{}\"\n",
        out_path.display()
    );
    let cfg = write_config(&dir, &text);
    let o = mixruin(&["simulate", "--u-grid", "0:1:1"], &cfg);
    assert!(o.status.success() && o.stdout.is_empty());
    let csv = fs::read_to_string(&out_path).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "u,psi_mc,ci_low,ci_high,n_paths,seed");
    for line in lines {
        let f: Vec<&str> = line.split(',').collect();
        assert_eq!(&f[4..], ["5000", "3"]);
        let (lo, est, hi): (f64, f64, f64) = (f[2].parse().unwrap(), f[1].parse().unwrap(), f[3].parse().unwrap());
        assert!(lo <= est && est <= hi);
    }
}

#[test]
fn empirical_sample_from_file() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("claims.txt"), "0.5\n1.5\n1.0, 1.0\n").unwrap();
    let text = BASE.replace(
        "[claims]\ndist = \"exponential\"\nrate = 1",
        "[claims]\ndist = \"empirical\"\npath = \"claims.txt\"",
    );
    let cfg = write_config(&dir, &text);
    let out = stdout(&mixruin(&["solve", "--u-grid", "0:2:1"], &cfg));
    let psi = column(&out, "psi_solver");
    assert!(psi.windows(2).all(|w| w[1] < w[0]) && psi[0] < 1.0, "{psi:?}");
    // no closed form for empirical claims
    assert_eq!(mixruin(&["closed-form"], &cfg).status.code(), Some(2));
}

#[test]
fn missing_config_exits_1_without_output() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("out.csv");
    let o = Command::new(env!("CARGO_BIN_EXE_mixruin"))
        .args(["compare", "--config"])
        .arg(dir.path().join("absent.toml"))
        .arg("--out")
        .arg(&out_path)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(!out_path.exists());
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let code = |text: &str, args: &[&str]| mixruin(args, &write_config(&dir, text)).status.code();

    let pareto = BASE.replace(
        "[claims]\ndist = \"exponential\"\nrate = 1",
        "[claims]\ndist = \"pareto\"\nscale = 0.5\ntail_index = 3",
    );
    assert_eq!(code(&pareto, &["closed-form"]), Some(2));

    let c0 = BASE.replace("c = 1", "c = 0");
    assert_eq!(code(&c0, &["solve"]), Some(4));
    let o = mixruin(&["solve"], &write_config(&dir, &c0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("closed-form"));

    let gamma_mix = BASE.replace(
        "type = \"degenerate\"\ngamma = 1\ndelta = 0.5",
        "type = \"gamma\"\ngamma_shape = 2\ngamma_rate = 2\ndelta_shape = 2\ndelta_rate = 4",
    );
    assert_eq!(code(&gamma_mix, &["solve"]), Some(4));
    assert_eq!(code(&gamma_mix, &["closed-form", "--u-grid", "0:1:1"]), Some(0));

    let stiff = format!("{BASE}\n[solver]\nmax_iterations = 2\n");
    assert_eq!(code(&stiff, &["solve"]), Some(3));

    let no_seed = format!("{BASE}\n[mc]\npaths = 1000\n");
    assert_eq!(code(&no_seed, &["simulate"]), Some(1));
    assert_eq!(code(BASE, &["simulate"]), Some(1));

    assert_eq!(code("[model]\nc = 1\n", &["closed-form"]), Some(1));
    assert_eq!(code(BASE, &["closed-form", "--u-grid", "2:1:1"]), Some(1));
    assert_eq!(code(BASE, &["no-such-command"]), Some(1));
}
