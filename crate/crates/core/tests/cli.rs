use std::path::Path;
use std::process::{Command, Output};

use cdss::cli::{manifest_path_for, RunManifest};

fn cdss(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cdss")).args(args).output().unwrap()
}

/// Splits `line` on whitespace and appends `extra` verbatim.
fn cdss_line(line: &str, extra: &[&str]) -> Output {
    let mut args: Vec<&str> = line.split_whitespace().collect();
    args.extend_from_slice(extra);
    cdss(&args)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn capacity_prints_fraction_and_decimal() {
    let o = cdss_line("capacity --n 4 --k 3 --L 2 --alpha 2 --beta-i 1 --beta-c 0.5", &[]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "4/1 (4.0)\n");

    let o = cdss_line("capacity --n 100 --k 85 --L 10 --alpha 1 --gamma 1 --kappa 1", &[]);
    assert_eq!(stdout(&o), "1615/33 (48.9393939394)\n");
}

#[test]
fn usage_errors_exit_2() {
    let o = cdss_line("capacity --n 7 --k 3 --L 2 --alpha 1 --beta-i 1 --beta-c 1", &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("does not divide"));

    let o = cdss_line("capacity --n 4 --k 3 --L 2 --alpha 1 --beta-i 1/2 --beta-c 1", &[]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(cdss(&["capacity", "--n", "4"]).status.code(), Some(2));
    assert_eq!(
        cdss_line("sweep --curve kappa --n 4 --k 2 --L 2 --alpha 1 --gamma 1 --grid 1,0 --out /nonexistent/x.csv", &[])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn verify_passes_and_perturbation_fails() {
    let o = cdss(&["verify", "--max-n", "5", "--trials", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).starts_with("ok "));

    let o = cdss(&["verify", "--max-n", "4", "--trials", "3", "--perturb"]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.starts_with("FAIL "));
    assert!(text.contains("oracle-equivalence failed"));
}

#[test]
fn dot_export_writes_graph_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let dot = dir.path().join("g.dot");
    let o = cdss_line("capacity --n 4 --k 3 --L 2 --alpha 2 --beta-i 1 --beta-c 1/2 --dot", &[path(&dot)]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&dot).unwrap();
    assert!(text.starts_with("digraph"));
    assert!(text.contains("DC"));
    let manifest = RunManifest::read(&manifest_path_for(&dot)).unwrap();
    assert_eq!(manifest.subcommand, "capacity");
    assert_eq!(manifest.parameters["beta_c"], "1/2");
}

#[test]
fn presets_write_expected_series() {
    let dir = tempfile::tempdir().unwrap();

    let fig6 = dir.path().join("fig6.csv");
    let o = cdss(&["sweep", "--preset", "fig6", "--out", path(&fig6)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("21 rows"));
    let csv = std::fs::read_to_string(&fig6).unwrap();
    assert!(csv.starts_with("kappa,capacity\n0,43.8888888889\n"));
    assert!(csv.ends_with("1,48.9393939394\n"));

    let fig7 = dir.path().join("fig7.csv");
    assert_eq!(cdss(&["sweep", "--preset", "fig7", "--out", path(&fig7)]).status.code(), Some(0));
    let baseline = std::fs::read_to_string(dir.path().join("fig7.baseline.csv")).unwrap();
    let zero_cross = std::fs::read_to_string(dir.path().join("fig7.zero_cross.csv")).unwrap();
    assert!(baseline.starts_with("alpha,gamma\n1,6.6\n"));
    assert!(zero_cross.ends_with("2,1.93670886076\n"));
    assert!(dir.path().join("fig7.json").exists());
    assert!(dir.path().join("fig7.manifest.json").exists());

    let fig8 = dir.path().join("fig8.csv");
    let o = cdss(&["sweep", "--preset", "fig8", "--out", path(&fig8)]);
    assert!(stdout(&o).contains("cross_cluster_irreducible"));
    let json = std::fs::read_to_string(dir.path().join("fig8.json")).unwrap();
    assert!(json.contains("\"gaps\""));
}

#[test]
fn explicit_sweep_matches_preset() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    cdss(&["sweep", "--preset", "fig6", "--out", path(&a)]);
    let o = cdss_line("sweep --curve kappa --n 100 --k 85 --L 10 --alpha 1 --gamma 1 --out", &[path(&b)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn replay_reproduces_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run.csv");
    let line = "sweep --curve gammaI-gammaC --n 12 --k 8 --L 3 --M 8 --alpha 3/2 \
        --grid-from 0 --grid-to 6 --grid-points 13 --out";
    cdss_line(line, &[path(&out)]);
    let first = std::fs::read(&out).unwrap();
    let manifest_path = manifest_path_for(&out);
    let manifest = RunManifest::read(&manifest_path).unwrap();
    assert_eq!(manifest.exit_status, 0);
    assert_eq!(manifest.outputs.len(), 2);

    std::fs::remove_file(&out).unwrap();
    let o = cdss(&["replay", "--from", path(&manifest_path)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(std::fs::read(&out).unwrap(), first);
}
