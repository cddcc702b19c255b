use std::process::{Command, Output};

fn afmimo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_afmimo")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn table(text: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines.map(|l| l.split(',').map(|c| c.parse().unwrap()).collect()).collect();
    (header, rows)
}

#[test]
fn outage_sweep_has_three_curves() {
    let o = afmimo(&[
        "sweep", "--dims", "3,1,2", "--k", "0.5", "--metric", "outage", "--flavor", "exact,highsnr,montecarlo",
        "--snr-db", "0:20:10", "--samples", "20000",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let (header, rows) = table(&stdout(&o));
    assert_eq!(header, ["snr_db", "exact", "highsnr", "montecarlo", "montecarlo_stderr"]);
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[2][0], 20.0);
    // exact, 17 significant digits
    let cell = stdout(&o).lines().nth(2).unwrap().split(',').nth(1).unwrap().to_string();
    assert_eq!(cell.split('e').next().unwrap().replace('.', "").len(), 17);
    assert!((rows[1][1] - rows[1][3]).abs() < 4.0 * rows[1][4]);
}

#[test]
fn output_is_byte_stable() {
    let args = ["sweep", "--dims", "2,2,2", "--metric", "capacity", "--flavor", "exact,montecarlo", "--snr-db", "0:10:5", "--samples", "10000"];
    let a = afmimo(&args);
    let b = afmimo(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn ostbc_curve_is_shifted() {
    let o = afmimo(&["sweep", "--dims", "2,1,3", "--flavor", "highsnr,ostbc_highsnr", "--snr-db", "10:30:10"]);
    assert!(o.status.success());
    let (_, rows) = table(&stdout(&o));
    for r in rows {
        assert!((r[2] / r[1] - 4.0).abs() < 1e-12);
    }
}

#[test]
fn violated_preconditions_exit_with_2() {
    let o = afmimo(&["sweep", "--dims", "2,2,2", "--metric", "capacity", "--flavor", "highsnr"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("min(nr, nd) = 1"));

    let o = afmimo(&["sweep", "--dims", "2,2,2", "--flavor", "closed"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("ns = 1 or min(nr, nd) = 1"));

    for args in [
        &["sweep", "--snr-db", "10:0:1"][..],
        &["sweep", "--flavor", "montecarlo", "--samples", "10"],
        &["sweep", "--mod", "qam"],
        &["sweep", "--metric", "cdf", "--snr-db", "0:10:5"],
        &["figure", "7"],
    ] {
        assert_eq!(afmimo(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn config_file_sits_below_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# ser sweep\ndims = 2,1,3\nk = 0.5\nsnr-db = 0:10:10\n").unwrap();
    let from_file = afmimo(&["sweep", "--config", cfg.to_str().unwrap(), "--k", "1"]);
    let from_flags = afmimo(&["sweep", "--dims", "2,1,3", "--k", "1", "--snr-db", "0:10:10"]);
    assert!(from_file.status.success());
    assert_eq!(from_file.stdout, from_flags.stdout);

    std::fs::write(&cfg, "colour = blue\n").unwrap();
    assert_eq!(afmimo(&["sweep", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn sweep_writes_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.csv");
    let o = afmimo(&["sweep", "--dims", "1,2,2", "--flavor", "exact,closed", "--snr-db", "5", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let (_, rows) = table(&std::fs::read_to_string(out).unwrap());
    assert!(((rows[0][1] - rows[0][2]) / rows[0][1]).abs() < 1e-6);
}

#[test]
fn cdf_figure_has_eight_configurations() {
    let dir = tempfile::tempdir().unwrap();
    let o = afmimo(&["figure", "1", "--out", dir.path().to_str().unwrap(), "--samples", "2000"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 8);
    let f = std::fs::read_to_string(dir.path().join("fig1_cdf_2-3-2_k0p5.csv")).unwrap();
    let (header, rows) = table(&f);
    assert_eq!(header, ["x", "exact", "montecarlo", "montecarlo_band"]);
    assert_eq!(rows.len(), 40);
    assert!(rows.iter().all(|r| (r[1] - r[2]).abs() <= r[3]));
}

#[test]
fn validate_prints_a_line_per_criterion() {
    let o = afmimo(&["validate", "--criteria", "3,4,6"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().filter(|l| l.contains("[PASS]")).count(), 3);
    assert_eq!(afmimo(&["validate", "--criteria", "11"]).status.code(), Some(2));
}
