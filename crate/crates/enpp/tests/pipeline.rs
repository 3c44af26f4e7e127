//! End-to-end runs of the `enpp` binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use enpp::snapshot::Snapshot;
use enpp_core::littlewood_paley::besov_norm;
use enpp_core::{BesovSpec, DyadicPartition, VectorField};

fn enpp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_enpp")).args(args).output().unwrap()
}

fn write_config(dir: &Path, body: &str) -> String {
    let path = dir.join("run.toml");
    let text = body.replace("OUT", &dir.join("out").display().to_string());
    fs::write(&path, text).unwrap();
    path.display().to_string()
}

fn column(csv_text: &str, name: &str) -> Vec<f64> {
    let mut lines = csv_text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let k = header.iter().position(|h| *h == name).unwrap();
    lines.map(|l| l.split(',').nth(k).unwrap().parse().unwrap()).collect()
}

const TAYLOR_GREEN: &str = r#"
[grid]
n = 64
[initial]
preset = "taylor-green"
[run]
final_time = 1.0
output_every = 2
output_dir = "OUT"
"#;

#[test]
fn inviscid_taylor_green_stays_divergence_free() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), TAYLOR_GREEN);
    let out = enpp(&["simulate", "--config", &cfg, "--strict"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report = fs::read_to_string(dir.path().join("out/report.csv")).unwrap();
    let div = column(&report, "div_u_norm");
    assert!(div.len() > 2);
    assert!(div.iter().all(|d| *d <= 1e-8));
    let t = column(&report, "t");
    assert!((t.last().unwrap() - 1.0).abs() < 1e-12);
    let violations = fs::read_to_string(dir.path().join("out/violations.csv")).unwrap();
    assert_eq!(violations.lines().count(), 1);
}

#[test]
fn reruns_are_bit_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [&a, &b] {
        let cfg = write_config(dir.path(), &TAYLOR_GREEN.replace("taylor-green", "charged-taylor-green"));
        assert_eq!(enpp(&["simulate", "--config", &cfg]).status.code(), Some(0));
    }
    let read = |d: &tempfile::TempDir| fs::read(d.path().join("out/report.csv")).unwrap();
    assert_eq!(read(&a), read(&b));
}

#[test]
fn non_neutral_charges_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let body = "[grid]\nn = 16\n[initial]\npreset = \"charged-blob\"\ncharge_imbalance = 0.1\n[run]\nfinal_time = 0.1\noutput_dir = \"OUT\"\n";
    let out = enpp(&["simulate", "--config", &write_config(dir.path(), body)]);
    assert_eq!(out.status.code(), Some(2));
    let renormalized = body.replace("charge_imbalance = 0.1", "charge_imbalance = 0.1\nrenormalize_charge = true");
    let out = enpp(&["simulate", "--config", &write_config(dir.path(), &renormalized)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let out = enpp(&["simulate", "--config", &write_config(dir.path(), body), "--renormalize-charge"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn config_errors_exit_2_with_line_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("[grid]\nn = 16\n[initial]\npreset = \"taylor-green\"\n[run]\nfinal_time = 1\noutput_every = 0\n", "line 7"),
        ("[grid]\nn = 16\n[initial]\npreset = \"taylor-green\"\n[run]\nfinal_time = 1\nviscocity = 0.1\n", "viscosity"),
        ("[grid]\nn = 12\n[initial]\npreset = \"taylor-green\"\n[run]\nfinal_time = 1\n", "line 2"),
        ("[grid]\nn = 16\n[initial]\npreset = \"taylor-green\"\n[run]\nfinal_time = 1\nmode = \"iterate\"\n", "subcommand"),
    ];
    for (body, needle) in cases {
        let out = enpp(&["simulate", "--config", &write_config(dir.path(), body)]);
        let stderr = String::from_utf8_lossy(&out.stderr);
        assert_eq!(out.status.code(), Some(2), "{body}: {stderr}");
        assert!(stderr.contains(needle), "{body}: {stderr}");
    }
    let out = enpp(&["simulate", "--config", "/nonexistent/run.toml"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn zero_viscosity_sweep_is_degenerate_and_cached() {
    let dir = tempfile::tempdir().unwrap();
    let body = "[grid]\nn = 16\n[initial]\npreset = \"charged-taylor-green\"\n[run]\nmode = \"invlimit\"\nfinal_time = 0.2\noutput_every = 2\noutput_dir = \"OUT\"\n[invlimit]\nviscosities = [0, 0, 0]\n";
    let cfg = write_config(dir.path(), body);
    let first = enpp(&["invlimit", "--config", &cfg]);
    assert_eq!(first.status.code(), Some(0), "{}", String::from_utf8_lossy(&first.stderr));
    let stdout = String::from_utf8_lossy(&first.stdout);
    assert!(stdout.contains("slope = nan"));
    assert!(stdout.contains("degenerate = zero viscosity"));
    let rates = fs::read_to_string(dir.path().join("out/rates.csv")).unwrap();
    assert_eq!(rates.lines().next(), Some("nu,err_u,err_n,err_p"));
    for name in ["err_u", "err_n", "err_p"] {
        assert!(column(&rates, name).iter().all(|e| *e == 0.0));
    }

    let second = enpp(&["invlimit", "--config", &cfg]);
    assert_eq!(second.stdout, first.stdout);
    assert_eq!(fs::read_to_string(dir.path().join("out/rates.csv")).unwrap(), rates);
    assert_eq!(fs::read_dir(dir.path().join("out/cache")).unwrap().count(), 1);
}

#[test]
fn viscous_sweep_is_identical_with_cached_reference() {
    let dir = tempfile::tempdir().unwrap();
    let body = "[grid]\nn = 16\n[initial]\npreset = \"charged-taylor-green\"\n[run]\nmode = \"invlimit\"\nfinal_time = 0.2\noutput_every = 2\noutput_dir = \"OUT\"\n[invlimit]\nviscosities = [0.1, 0.01, 0.001]\n";
    let cfg = write_config(dir.path(), body);
    let first = enpp(&["invlimit", "--config", &cfg]);
    let rates = fs::read(dir.path().join("out/rates.csv")).unwrap();
    let second = enpp(&["invlimit", "--config", &cfg]);
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(fs::read(dir.path().join("out/rates.csv")).unwrap(), rates);
}

#[test]
fn besov_norm_matches_library_and_check_flags_tampering() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &TAYLOR_GREEN.replace("taylor-green", "charged-taylor-green"));
    assert_eq!(enpp(&["simulate", "--config", &cfg]).status.code(), Some(0));
    let snaps = dir.path().join("out/snapshots");
    let file = snaps.join("t_3.bin");

    let out = enpp(&["besov-norm", "--field", file.to_str().unwrap(), "--s", "-0.5", "--p", "2", "--r", "inf"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let printed: f64 = String::from_utf8_lossy(&out.stdout).trim().parse().unwrap();
    let snap = Snapshot::load(&file).unwrap();
    let u = VectorField::new(snap.fields[..2].to_vec()).unwrap();
    let spec = BesovSpec::new(-0.5, 2.0, f64::INFINITY).unwrap();
    assert_eq!(printed, besov_norm(&DyadicPartition::new(&snap.grid), &u, spec).unwrap());

    let clean = enpp(&["check", "--trajectory", snaps.to_str().unwrap()]);
    assert_eq!(clean.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&clean.stdout).contains("0 violations"));

    // overwrite one n value with a negative number
    let mut bytes = fs::read(&file).unwrap();
    let n_start = 28 + 2 * 64 * 64 * 8;
    bytes[n_start + 100 * 8..n_start + 101 * 8].copy_from_slice(&(-0.5f64).to_le_bytes());
    fs::write(&file, bytes).unwrap();
    let tampered = enpp(&["check", "--trajectory", snaps.to_str().unwrap()]);
    assert_eq!(tampered.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&tampered.stdout).contains("positivity_n"));

    fs::write(&file, b"ENPP").unwrap();
    assert_eq!(enpp(&["check", "--trajectory", snaps.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn iterate_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let body = "[grid]\nn = 16\n[initial]\npreset = \"charged-taylor-green\"\n[run]\nmode = \"iterate\"\nformulation = \"modified\"\nfinal_time = 0.05\noutput_every = 10\noutput_dir = \"OUT\"\n[iterate]\nsteps = 20\ntolerance = 1e-7\n";
    let out = enpp(&["iterate", "--config", &write_config(dir.path(), body), "--strict"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let lifespan = fs::read_to_string(dir.path().join("out/lifespan.txt")).unwrap();
    assert!(lifespan.contains("converged = true"));
    let iterations = fs::read_to_string(dir.path().join("out/iterations.csv")).unwrap();
    assert!(iterations.starts_with("iteration,energy,difference,ratio"));
    assert_eq!(fs::read_dir(dir.path().join("out/snapshots")).unwrap().count(), 4);
}
