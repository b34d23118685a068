use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use qrayleigh::states::coherence_bounds;
use qrayleigh::thermo::steady_temperature;
use qrayleigh::{BathParams, ProjectileKind, QubitSpec, Scenario};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qrayleigh"))
}

fn write_config(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn run(args: &[&str], cfg: &Path, threads: Option<&str>) -> Output {
    let mut cmd = bin();
    cmd.args(args).arg("--config").arg(cfg);
    cmd.env_remove("QRAYLEIGH_THREADS");
    if let Some(t) = threads {
        cmd.env("QRAYLEIGH_THREADS", t);
    }
    cmd.output().unwrap()
}

/// `(header, rows)` of a CSV output.
fn parse(out: &Output) -> (Vec<String>, Vec<Vec<String>>) {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let mut r = csv::Reader::from_reader(out.stdout.as_slice());
    let header = r.headers().unwrap().iter().map(str::to_string).collect();
    let rows = r
        .records()
        .map(|rec| rec.unwrap().iter().map(str::to_string).collect())
        .collect();
    (header, rows)
}

fn col(header: &[String], name: &str) -> usize {
    header.iter().position(|h| h == name).unwrap()
}

fn f(s: &str) -> f64 {
    s.parse().unwrap()
}

const SMALL_FIG4: &str = "experiment = \"fig4\"\n[grid]\nt_points = 11\nchi_points = 11\nj_tau_points = 8\n";

#[test]
fn output_is_byte_identical_across_runs_and_threads() {
    let dir = tempfile::tempdir().unwrap();
    for (name, body) in [
        ("fig4.toml", SMALL_FIG4),
        (
            "fig5.toml",
            "experiment = \"fig5\"\n[grid]\nt_points = 11\nchi_points = 11\nj_tau_points = 8\n",
        ),
        ("fig6.toml", "experiment = \"fig6\"\n[grid]\nsnapshot_points = 21\n"),
        (
            "fig7.toml",
            "experiment = \"fig7\"\n[grid]\nt_points = 5\nchi_points = 6\n",
        ),
        ("fig3.toml", "experiment = \"fig3\"\n[grid]\nchi_points = 9\n"),
    ] {
        let cfg = write_config(dir.path(), name, body);
        let a = run(&["figure"], &cfg, Some("1"));
        let b = run(&["figure"], &cfg, Some("3"));
        let c = run(&["figure"], &cfg, None);
        assert!(a.status.success(), "{name}: {}", String::from_utf8_lossy(&a.stderr));
        assert!(!a.stdout.is_empty());
        assert_eq!(a.stdout, b.stdout, "{name} differs across thread counts");
        assert_eq!(a.stdout, c.stdout, "{name} differs across runs");
    }
}

#[test]
fn out_flag_writes_the_same_bytes_as_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "fig4.toml", SMALL_FIG4);
    let target = dir.path().join("out.csv");
    let to_file = bin()
        .args(["figure", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&target)
        .output()
        .unwrap();
    assert!(to_file.status.success());
    assert!(to_file.stdout.is_empty());
    let to_stdout = run(&["figure"], &cfg, None);
    assert_eq!(std::fs::read(&target).unwrap(), to_stdout.stdout);
}

#[test]
fn config_errors_exit_with_code_two() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("bad_lambda.toml", "experiment = \"fig4\"\n[bath]\ncoherence = 0.2\n"),
        ("bad_chi.toml", "experiment = \"fig4\"\n[bath]\nchi = 1.5\n"),
        ("unknown_key.toml", "experiment = \"fig4\"\nbogus = 1\n"),
        ("unknown_section_key.toml", "experiment = \"fig4\"\n[grid]\nt_pts = 3\n"),
        ("malformed.toml", "experiment = \"fig4\n"),
        ("bad_experiment.toml", "experiment = \"fig9\"\n"),
        ("empty_grid.toml", "experiment = \"fig5\"\n[grid]\nchi_points = 0\n"),
        ("negative_beta.toml", "experiment = \"fig4\"\n[bath]\nbeta_b = -1.0\n"),
    ];
    for (name, body) in cases {
        let cfg = write_config(dir.path(), name, body);
        let out = run(&["figure"], &cfg, None);
        assert_eq!(
            out.status.code(),
            Some(2),
            "{name}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        assert!(out.stdout.is_empty(), "{name} wrote output");
    }
    let missing = run(&["figure"], &dir.path().join("absent.toml"), None);
    assert_eq!(missing.status.code(), Some(2));

    let wrong_command = write_config(dir.path(), "sweep.toml", "experiment = \"sweep\"\n");
    assert_eq!(run(&["figure"], &wrong_command, None).status.code(), Some(2));

    let ok = write_config(dir.path(), "ok.toml", SMALL_FIG4);
    assert_eq!(run(&["figure"], &ok, Some("0")).status.code(), Some(2));
    assert_eq!(
        run(&["figure", "--units", "furlongs"], &ok, None).status.code(),
        Some(2)
    );
}

#[test]
fn checks_pass_with_shipped_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "checks.toml", "experiment = \"checks\"\n");
    let out = run(&["checks", "--seed", "7"], &cfg, None);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["passed"], true);
    assert_eq!(report["seed"], 7);
    let checks = report["checks"].as_array().unwrap();
    assert!(checks.len() >= 16);
    let rejection = checks.iter().find(|c| c["name"] == "config_rejection").unwrap();
    assert_eq!(rejection["passed"], true);
    let stoch = checks.iter().find(|c| c["name"] == "stochastic_vs_analytic").unwrap();
    assert!(stoch["residual"].as_f64().unwrap() <= 4.0);
}

#[test]
fn fig4_temperature_constant_without_coherence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "fig4.toml", SMALL_FIG4);
    let (h, rows) = parse(&run(&["figure"], &cfg, None));
    let (chi, temp, panel) = (col(&h, "chi"), col(&h, "T_S"), col(&h, "panel"));
    let flat: Vec<&Vec<String>> = rows.iter().filter(|r| f(&r[chi]) == 0.0).collect();
    assert!(flat.iter().any(|r| r[panel] == "time"));
    assert!(flat.iter().any(|r| r[panel] == "steady"));
    for r in flat {
        assert!((f(&r[temp]) - 0.5).abs() < 1e-12, "T_S = {}", r[temp]);
    }
    // collective collisions (alpha = 1) heat for chi > 0 and cool for chi < 0
    let sc = col(&h, "scenario");
    let late: Vec<&Vec<String>> = rows
        .iter()
        .filter(|r| r[panel] == "steady" && r[sc] == "collective")
        .collect();
    for r in late {
        let (c, t) = (f(&r[chi]), f(&r[temp]));
        if c > 0.0 {
            assert!(t > 0.5);
        } else if c < 0.0 {
            assert!(t < 0.5);
        }
    }
}

#[test]
fn fig5_current_reverses_at_inhibition_locus() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "fig5.toml",
        "experiment = \"fig5\"\n[bath]\nscenario = \"collective\"\n[grid]\nt_points = 5\nchi_points = 41\nj_tau_points = 4\n",
    );
    let (h, rows) = parse(&run(&["figure"], &cfg, None));
    let (chi, t, j, panel) = (col(&h, "chi"), col(&h, "t"), col(&h, "j_net"), col(&h, "panel"));
    assert!(rows.iter().any(|r| r[panel] == "probe" && f(&r[t]) == 0.1));

    // chi at which the steady temperature equals the initial 0.6
    let spec = QubitSpec::default();
    let (_, hi) = coherence_bounds(ProjectileKind::Discordant, 2.0, &spec).unwrap();
    let t_inf =
        |x: f64| steady_temperature(&BathParams::discordant(2.0, x * hi, Scenario::Collective, 0.05).unwrap()).unwrap();
    let (mut lo, mut up) = (0.0, 1.0);
    for _ in 0..60 {
        let mid = 0.5 * (lo + up);
        if t_inf(mid) < 0.6 {
            lo = mid;
        } else {
            up = mid;
        }
    }
    let locus = 0.5 * (lo + up);
    assert!(locus > 0.0 && locus < 1.0);

    let time_rows = rows.iter().filter(|r| r[panel] == "time" && f(&r[t]) == 0.0);
    let mut seen = (false, false);
    for r in time_rows {
        let (c, jn) = (f(&r[chi]), f(&r[j]));
        if c < locus - 1e-9 {
            assert!(jn < 0.0, "chi {c}: J = {jn}");
            seen.0 = true;
        } else if c > locus + 1e-9 {
            assert!(jn > 0.0, "chi {c}: J = {jn}");
            seen.1 = true;
        }
    }
    assert!(seen.0 && seen.1);
}

#[test]
fn fig7_steady_temperature_shift_quadratic_in_mu() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "fig7.toml",
        "experiment = \"fig7\"\n[grid]\nt_points = 3\nchi_points = 31\n",
    );
    let (h, rows) = parse(&run(&["figure"], &cfg, None));
    let (mu, t, temp) = (col(&h, "mu"), col(&h, "t"), col(&h, "T_S"));
    let steady: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r[t] == "inf")
        .map(|r| (f(&r[mu]), f(&r[temp])))
        .collect();
    assert_eq!(steady.len(), 31);
    let base = steady[0].1;
    let slopes: Vec<f64> = steady[1..=9].iter().map(|(m, tt)| (tt - base) / (m * m)).collect();
    let first = slopes[0];
    for s in &slopes {
        assert!(((s - first) / first).abs() < 0.02, "slope {s} vs {first}");
    }
    // entangled pairs cool the qubit relative to mu = 0
    assert!(first < 0.0);
}

#[test]
fn fig3_units_flag_rescales_entropic_measures() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "fig3.toml",
        "experiment = \"fig3\"\n[grid]\nchi_points = 5\n",
    );
    let (h, nats) = parse(&run(&["figure", "--units", "nats"], &cfg, None));
    let (_, bits) = parse(&run(&["figure", "--units", "bits"], &cfg, None));
    let d = col(&h, "quantum_discord");
    let l1 = col(&h, "l1_coherence");
    for (a, b) in nats.iter().zip(&bits) {
        assert_eq!(a[l1], b[l1]);
        assert!((f(&b[d]) - f(&a[d]) / std::f64::consts::LN_2).abs() < 1e-12);
    }
}

#[test]
fn sweep_reports_scaling_properties() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "sweep.toml",
        "experiment = \"sweep\"\n[grid]\nj_tau_min = 0.01\nj_tau_max = 1.1107207345395915\nj_tau_points = 50\n",
    );
    let out = run(&["sweep"], &cfg, None);
    let stderr = String::from_utf8_lossy(&out.stderr).to_string();
    assert_eq!(stderr.matches("[PASS]").count(), 3, "{stderr}");
    let (h, rows) = parse(&out);
    let (sc, jt, l, l2) = (
        col(&h, "scenario"),
        col(&h, "j_tau"),
        col(&h, "l_tilde"),
        col(&h, "l_two_bath"),
    );
    let coll: Vec<&Vec<String>> = rows.iter().filter(|r| r[sc] == "collective").collect();
    let seq: Vec<&Vec<String>> = rows.iter().filter(|r| r[sc] == "sequential").collect();
    assert_eq!(coll.len(), 50);
    // small J tau: L ~ 8 (J tau)^2 / 4 and sequential four times smaller
    let x = f(&coll[0][jt]);
    assert!((f(&coll[0][l]) / (2.0 * x * x) - 1.0).abs() < 1e-3);
    assert!((f(&seq[0][l]) / f(&coll[0][l]) - 0.25).abs() < 1e-3);
    // collective coefficient vanishes at the last grid point 2 sqrt 2 J tau = pi
    let peak = coll.iter().map(|r| f(&r[l])).fold(0.0, f64::max);
    assert!(f(&coll[49][l]).abs() < 1e-12 * peak);
    for r in &rows {
        assert!((f(&r[l2]) - 0.5 * f(&r[l])).abs() <= 1e-15 * f(&r[l]).abs());
    }
}

#[test]
fn onsager_flags_nonlinearity_at_low_temperature() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "onsager.toml",
        "experiment = \"onsager\"\n[grid]\nonsager_betas = [0.05, 1.0]\n",
    );
    let (h, rows) = parse(&run(&["figure"], &cfg, None));
    let (b, w, res) = (col(&h, "beta_b"), col(&h, "warning"), col(&h, "residual"));
    for r in &rows {
        if f(&r[b]) == 1.0 {
            assert_eq!(r[w], "true");
            assert!(f(&r[res]) > 0.05);
        } else {
            assert_eq!(r[w], "false");
            assert!(f(&r[res]) < 0.02);
        }
    }
}

#[test]
fn fig6_currents_vanish_at_collective_zero() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "fig6.toml",
        "experiment = \"fig6\"\n[grid]\nsnapshot_points = 41\n",
    );
    let (h, rows) = parse(&run(&["figure"], &cfg, None));
    assert_eq!(rows.len(), 4 * 41);
    let (jh, jc, single, t) = (
        col(&h, "jh_macro"),
        col(&h, "jc_macro"),
        col(&h, "single_qubit_offdiag"),
        col(&h, "t"),
    );
    let peak = rows.iter().map(|r| f(&r[jc]).abs()).fold(0.0, f64::max);
    assert!(peak > 0.0);
    for r in &rows {
        assert!(f(&r[single]) < 1e-12);
    }
    let t_end = f(&rows[40][t]);
    assert!((t_end - std::f64::consts::PI / (2.0 * 2f64.sqrt() * 0.05)).abs() < 1e-9);
    for block in rows.chunks(41) {
        assert!(f(&block[40][jc]).abs() < 1e-12 * peak.max(1.0));
        assert!(f(&block[40][jh]).abs() < 1e-12);
    }
}
