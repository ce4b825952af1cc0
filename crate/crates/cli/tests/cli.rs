//! End-to-end tests of the command-line interface: outputs, exit codes,
//! file formats and config-file merging.

use std::process::{Command, Output};

fn mdsense(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mdsense"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn grab(text: &str, key: &str) -> f64 {
    let prefix = format!("{key} = ");
    for line in text.lines() {
        if let Some(rest) = line.strip_prefix(&prefix) {
            return rest.trim().parse().unwrap();
        }
    }
    panic!("no `{key}` line in:\n{text}");
}

#[test]
fn threshold_reference_points() {
    let out = mdsense(&["threshold", "--v", "1", "--pf", "0.5"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(grab(&text, "lambda_star"), 0.0);
    assert!((grab(&text, "t_h0") - -3.5).abs() < 1e-12);

    let out = mdsense(&["threshold", "--v", "1e9", "--pf", "0.1"]);
    let text = stdout(&out);
    assert!((grab(&text, "lambda_star") - 2.5631).abs() < 1e-3);

    let out = mdsense(&["threshold", "--v", "1", "--pf", "0.1"]);
    let text = stdout(&out);
    assert!((grab(&text, "lambda_star") - 154.75f64.sqrt() * 1.2815515655446004).abs() < 1e-9);
}

#[test]
fn exit_codes_follow_the_contract() {
    // domain/validation errors -> 2
    let out = mdsense(&["threshold", "--v", "1", "--pf", "1.5"]);
    assert_eq!(out.status.code(), Some(2));
    let out = mdsense(&["threshold", "--pf", "0.1"]);
    assert_eq!(out.status.code(), Some(2), "missing --v");
    // clap usage errors -> 2
    let out = mdsense(&["threshold", "--v", "abc", "--pf", "0.1"]);
    assert_eq!(out.status.code(), Some(2));
    // I/O and format errors -> 3
    let out = mdsense(&["fit-noise", "--in", "/nonexistent/file.iq"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn gen_fit_round_trip_binary() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("laplacian.iq");
    let out = mdsense(&[
        "gen-noise",
        "--v",
        "1",
        "--sigma2",
        "1",
        "--n",
        "10000000",
        "--seed",
        "42",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert_eq!(std::fs::metadata(&path).unwrap().len(), 10_000_000 * 8);

    let out = mdsense(&["fit-noise", "--in", path.to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout(&out);
    let variance = grab(&text, "variance");
    let v = grab(&text, "v");
    assert!((variance - 1.0).abs() < 0.02, "variance {variance}");
    assert!((v - 1.0).abs() < 0.1, "v {v}");
}

#[test]
fn gen_fit_round_trip_text_mode() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("noise.csv");
    let out = mdsense(&[
        "gen-noise",
        "--v",
        "0.5",
        "--sigma2",
        "2",
        "--n",
        "500000",
        "--seed",
        "9",
        "--out",
        path.to_str().unwrap(),
        "--text",
    ]);
    assert!(out.status.success());
    let first = std::fs::read_to_string(&path).unwrap();
    assert!(first.lines().next().unwrap().contains(','));

    let out = mdsense(&["fit-noise", "--in", path.to_str().unwrap(), "--text"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!((grab(&text, "variance") - 2.0).abs() < 0.1);
    assert!((grab(&text, "v") - 0.5).abs() < 0.1);
}

#[test]
fn fit_reports_gaussian_sentinel_and_rejects_truncated_files() {
    let dir = tempfile::tempdir().unwrap();

    // constant-modulus quadratures: kurtosis 1 -> gaussian-or-lighter
    let path = dir.path().join("cw.iq");
    let mut bytes = Vec::new();
    for i in 0..64 {
        let s: f32 = if i % 2 == 0 { 1.0 } else { -1.0 };
        bytes.extend_from_slice(&s.to_le_bytes());
        bytes.extend_from_slice(&(-s).to_le_bytes());
    }
    std::fs::write(&path, &bytes).unwrap();
    let out = mdsense(&["fit-noise", "--in", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("gaussian-or-lighter"));

    // odd length -> format error -> 3
    let truncated = dir.path().join("bad.iq");
    std::fs::write(&truncated, &bytes[..bytes.len() - 3]).unwrap();
    let out = mdsense(&["fit-noise", "--in", truncated.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn config_file_supplies_defaults_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "v = 1\npf = 0.5\n# comment line\nn = 123\n").unwrap();

    let out = mdsense(&["threshold", "--config", cfg.to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(grab(&text, "lambda_star"), 0.0);
    assert_eq!(grab(&text, "n"), 123.0);

    // the flag wins over the file
    let out = mdsense(&["threshold", "--config", cfg.to_str().unwrap(), "--v", "1e9"]);
    let text = stdout(&out);
    assert!((grab(&text, "t_h0") - -2.0).abs() < 1e-6);

    // malformed config -> format error -> 3
    let bad = dir.path().join("bad.cfg");
    std::fs::write(&bad, "v 1\n").unwrap();
    let out = mdsense(&["threshold", "--config", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn analytic_emits_identity_rows() {
    let out = mdsense(&[
        "analytic", "--v", "1", "--mod", "qam16", "--snr-db", "-5,0,5", "--n", "1000", "--pf",
        "0.1",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut rows = 0;
    for line in text.lines().filter(|l| !l.starts_with('#')).skip(1) {
        let cols: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
        assert_eq!(cols.len(), 8);
        let (pf_target, md_pf, ed_pf) = (cols[1], cols[3], cols[6]);
        assert!((md_pf - pf_target).abs() < 1e-10, "md identity row: {line}");
        assert!((ed_pf - pf_target).abs() < 1e-10, "ed identity row: {line}");
        rows += 1;
    }
    assert_eq!(rows, 3);
}

#[test]
fn roc_stdout_matches_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("roc.csv");
    let args = [
        "roc", "--v", "1", "--mod", "bpsk", "--snr-db", "0", "--n", "200", "--trials", "200",
        "--pf", "0.1,0.3", "--seed", "5",
    ];
    let on_stdout = mdsense(&args);
    assert!(on_stdout.status.success());
    let mut file_args = args.to_vec();
    file_args.extend_from_slice(&["--out", path.to_str().unwrap()]);
    assert!(mdsense(&file_args).status.success());
    assert_eq!(stdout(&on_stdout), std::fs::read_to_string(&path).unwrap());
}

#[test]
fn sp_and_snr_are_mutually_exclusive() {
    let out = mdsense(&[
        "roc", "--v", "1", "--mod", "bpsk", "--snr-db", "0", "--sp", "1", "--n", "100", "--trials",
        "10", "--pf", "0.1",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn per_dimension_amplitude_from_sp_matches_snr_form() {
    // sp = sqrt(sigma2) is SNR 0 dB
    let a = mdsense(&[
        "pd-snr", "--v", "1", "--mod", "qam16", "--snr-db", "0", "--n", "300", "--trials", "300",
        "--pf", "0.1", "--seed", "3",
    ]);
    assert!(a.status.success());
    let text = stdout(&a);
    let row = text.lines().find(|l| l.starts_with("0,")).unwrap();
    let pd: f64 = row.split(',').nth(1).unwrap().parse().unwrap();
    assert!(pd > 0.0 && pd <= 1.0);
}
