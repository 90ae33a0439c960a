use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use ringpair_cli::config::{parse, RunConfig};
use serde_json::Value;
use tempfile::TempDir;

fn ringpair(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ringpair"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn run_ok(args: &[&str]) {
    let out = ringpair(args);
    assert_eq!(code(&out), 0, "{args:?}: {}", stderr(&out));
}

fn results(dir: &Path) -> Value {
    let text = fs::read_to_string(dir.join("summary.json")).unwrap();
    serde_json::from_str::<Value>(&text).unwrap()["results"].clone()
}

/// CSV body without the `#` provenance header.
fn data_lines(path: &Path) -> Vec<String> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(str::to_string)
        .collect()
}

fn write_config(dir: &TempDir, text: &str) -> PathBuf {
    let path = dir.path().join("run.toml");
    fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn emitted_config_parses_back_identically() {
    let tmp = TempDir::new().unwrap();
    let first = ringpair(&[
        "config", "--tau-p", "10 ps", "--phi", "0.9 pi", "--eta", "0.4",
    ]);
    assert_eq!(code(&first), 0, "{}", stderr(&first));
    let text = String::from_utf8(first.stdout).unwrap();
    let parsed: RunConfig = parse(&text, "emitted").unwrap();
    assert_eq!(parsed.pump.eta, 0.4);
    assert_eq!(parsed.pump.tau_p.to_string(), "10 ps");

    let path = write_config(&tmp, &text);
    let second = ringpair(&["config", "--config", s(&path)]);
    assert_eq!(String::from_utf8(second.stdout).unwrap(), text);
}

#[test]
fn unknown_unit_is_reported_with_its_line() {
    let tmp = TempDir::new().unwrap();
    let path = write_config(
        &tmp,
        "[pump]\nshape = \"single_gaussian\"\ntau_p = \"0.1 parsecs\"\n",
    );
    let out = ringpair(&[
        "jsi",
        "--config",
        s(&path),
        "--out",
        s(&tmp.path().join("o")),
    ]);
    assert_eq!(code(&out), 2);
    let err = stderr(&out);
    assert!(
        err.contains("line 3") && err.contains("unknown unit 'parsecs'"),
        "{err}"
    );
    assert!(!tmp.path().join("o").exists());
}

#[test]
fn out_of_range_values_point_at_file_line_or_flag() {
    let tmp = TempDir::new().unwrap();
    let path = write_config(
        &tmp,
        "# dual pulse\n[pump]\nshape = \"dual_pulse\"\n\neta = 1.5\n",
    );
    let out = ringpair(&[
        "spectrum",
        "--config",
        s(&path),
        "--out",
        s(&tmp.path().join("o")),
    ]);
    assert_eq!(code(&out), 2);
    let err = stderr(&out);
    assert!(err.contains("run.toml:5:7: pump.eta:"), "{err}");

    let out = ringpair(&[
        "spectrum",
        "--eta",
        "-0.1",
        "--out",
        s(&tmp.path().join("o")),
    ]);
    assert_eq!(code(&out), 2);
    assert!(
        stderr(&out).contains("command line --eta: pump.eta"),
        "{}",
        stderr(&out)
    );

    let out = ringpair(&["spectrum", "--tau-p", "10 linewidths"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("is not a time"), "{}", stderr(&out));
    assert!(!tmp.path().join("o").exists());
}

#[test]
fn physical_units_need_a_physical_resonator() {
    let tmp = TempDir::new().unwrap();
    let path = write_config(&tmp, "[resonator]\n\n[pump]\ntau_p = \"10 ps\"\n");
    // defaults fill in wavelength and Q, so this resolves
    run_ok(&["config", "--config", s(&path)]);
    let path = write_config(&tmp, "[resonator]\nq_loaded = 50000\n");
    let out = ringpair(&["config", "--config", s(&path), "--wavelength", "1.55 um"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
}

#[test]
fn spectrum_of_design_pump_is_broad_with_a_dip() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path().join("spectrum");
    run_ok(&["spectrum", "--out", s(&dir)]);
    let r = results(&dir);
    assert!(r["fwhm_ratio"].as_f64().unwrap() > 2.0, "{r}");
    assert_eq!(r["dip_at_resonance"], Value::Bool(true));
    for name in [
        "spectrum.csv",
        "spectrum_reference.csv",
        "temporal.csv",
        "temporal_reference.csv",
    ] {
        let text = fs::read_to_string(dir.join(name)).unwrap();
        assert!(text.starts_with("# ringpair "), "{name}");
        assert!(
            text.contains("# [pump]\n# shape = \"dual_pulse\"\n"),
            "{name}"
        );
    }
    assert_eq!(
        data_lines(&dir.join("spectrum.csv"))[0],
        "omega,abs_alpha,arg_alpha,abs_l,abs_Ap_sq"
    );
    assert_eq!(data_lines(&dir.join("temporal.csv"))[0], "t,abs_Ap_t_sq");

    let target = tmp.path().join("target");
    run_ok(&[
        "spectrum",
        "--shape",
        "target",
        "--sigma",
        "1 /tau_p",
        "--out",
        s(&target),
    ]);
    assert_eq!(results(&target)["dip_at_resonance"], Value::Bool(true));
}

#[test]
fn unit_eta_spectrum_equals_the_reference() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path().join("o");
    run_ok(&["spectrum", "--eta", "1", "--out", s(&dir)]);
    assert_eq!(
        data_lines(&dir.join("spectrum.csv")),
        data_lines(&dir.join("spectrum_reference.csv"))
    );
    assert_eq!(
        data_lines(&dir.join("temporal.csv")),
        data_lines(&dir.join("temporal_reference.csv"))
    );
}

#[test]
fn jsi_purity_and_axes() {
    let tmp = TempDir::new().unwrap();
    let single = tmp.path().join("single");
    run_ok(&[
        "jsi",
        "--shape",
        "single_gaussian",
        "--tau-p",
        "0.1 /linewidth",
        "--jsa-points",
        "128",
        "--out",
        s(&single),
    ]);
    let p = results(&single)["purity"].as_f64().unwrap();
    assert!((0.90..=0.93).contains(&p), "single-pulse purity {p}");

    let dual = tmp.path().join("dual");
    run_ok(&[
        "jsi",
        "--jsa-points",
        "128",
        "--window",
        "4 linewidths",
        "--out",
        s(&dual),
    ]);
    let p = results(&dual)["purity"].as_f64().unwrap();
    assert!(p > 0.99, "dual-pulse purity {p}");

    let lines = data_lines(&dual.join("jsi.csv"));
    let signal: Vec<f64> = lines[0]
        .split(',')
        .skip(1)
        .map(|v| v.parse().unwrap())
        .collect();
    let idler: Vec<f64> = lines[1..]
        .iter()
        .map(|l| l.split(',').next().unwrap().parse().unwrap())
        .collect();
    assert_eq!((signal.len(), idler.len()), (128, 128));
    for axis in [&signal, &idler] {
        let max = axis.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        assert!((max - 4.0).abs() < 1e-12, "axis max {max}");
    }
    let peak = lines[1..]
        .iter()
        .flat_map(|l| {
            l.split(',')
                .skip(1)
                .map(|v| v.parse::<f64>().unwrap())
                .collect::<Vec<_>>()
        })
        .fold(0.0, f64::max);
    assert_eq!(peak, 1.0);
    assert_eq!(data_lines(&dual.join("schmidt.csv"))[0], "k,lambda,weight");
}

#[test]
fn sweep_is_byte_identical_and_marks_the_null_point() {
    let tmp = TempDir::new().unwrap();
    let args = |dir: &Path| {
        vec![
            "sweep".to_string(),
            "--eta-points".into(),
            "11".into(),
            "--delta-tau-points".into(),
            "21".into(),
            "--out".into(),
            s(dir).to_string(),
        ]
    };
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    for dir in [&a, &b] {
        let argv = args(dir);
        run_ok(&argv.iter().map(String::as_str).collect::<Vec<_>>());
    }
    for name in ["sweep.csv", "summary.json", "config.toml"] {
        assert_eq!(
            fs::read(a.join(name)).unwrap(),
            fs::read(b.join(name)).unwrap(),
            "{name}"
        );
    }

    let lines = data_lines(&a.join("sweep.csv"));
    assert_eq!(lines[0], "eta,delta_tau,purity,rate_ratio,status");
    let rows: Vec<Vec<&str>> = lines[1..].iter().map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 11 * 21);
    let best = rows
        .iter()
        .filter_map(|r| r[2].parse::<f64>().ok())
        .fold(0.0, f64::max);
    assert!(best > 0.99, "best {best}");
    let null = rows
        .iter()
        .find(|r| r[0] == "0.5" && r[1] == "0")
        .expect("grid holds (0.5, 0)");
    assert_eq!(null[4], "rate_zero");
    assert_eq!(null[2], "");
    assert!(null[3].parse::<f64>().unwrap() < 1e-6);
}

#[test]
fn optimize_reports_feasible_optimum_and_exits_3_on_infeasible_floor() {
    let tmp = TempDir::new().unwrap();
    let config = write_config(
        &tmp,
        "[optimize]\neta_points = 21\ndelta_tau_points = 21\ntau_p_values = [\"0.05 /linewidth\"]\n",
    );
    let dir = tmp.path().join("o");
    let out = ringpair(&[
        "optimize",
        "--config",
        s(&config),
        "--rate-floor",
        "0.2",
        "--rate-floor",
        "1.5",
        "--out",
        s(&dir),
    ]);
    assert_eq!(code(&out), 3, "{}", stderr(&out));
    assert!(stderr(&out).contains("no feasible point"));

    let r = results(&dir);
    let floors = &r["taus"][0]["floors"];
    assert_eq!(floors[0]["status"], "ok");
    let report = &floors[0]["report"];
    assert!(report["best_purity"].as_f64().unwrap() > 0.99, "{report}");
    assert!(report["achieved_rate_ratio"].as_f64().unwrap() >= 0.2 - 1e-6);
    assert_eq!(floors[1]["status"], "infeasible");
    assert_eq!(r["infeasible"], 1);

    let lines = data_lines(&dir.join("optima.csv"));
    assert_eq!(lines.len(), 3);
    assert!(
        lines[2].starts_with("0.05,20,") && lines[2].contains(",1.5,infeasible,"),
        "{}",
        lines[2]
    );
}

#[test]
fn zero_shift_sensitivity_equals_the_baseline() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path().join("o");
    run_ok(&[
        "sensitivity",
        "--min",
        "-20 pm",
        "--max",
        "20 pm",
        "--points",
        "5",
        "--out",
        s(&dir),
    ]);
    let r = results(&dir);
    let base = r["base_purity"].as_f64().unwrap();
    let lines = data_lines(&dir.join("sensitivity.csv"));
    assert_eq!(lines[0], "delta_lambda_m,detuning,phi,purity,rate_ratio");
    let middle: Vec<&str> = lines[3].split(',').collect();
    assert_eq!(middle[0].parse::<f64>().unwrap(), 0.0);
    assert_eq!(middle[3].parse::<f64>().unwrap(), base);

    let phase = tmp.path().join("phase");
    run_ok(&[
        "sensitivity",
        "--axis",
        "phase",
        "--min",
        "-0.1 rad",
        "--max",
        "0.1 rad",
        "--points",
        "3",
        "--out",
        s(&phase),
    ]);
    let lines = data_lines(&phase.join("sensitivity.csv"));
    assert_eq!(
        lines[2].split(',').nth(3).unwrap().parse::<f64>().unwrap(),
        results(&phase)["base_purity"].as_f64().unwrap()
    );

    let out = ringpair(&[
        "sensitivity",
        "--axis",
        "phase",
        "--shape",
        "single_gaussian",
        "--min",
        "-1 rad",
        "--max",
        "1 rad",
    ]);
    assert_eq!(code(&out), 2);
    assert!(
        stderr(&out).contains("sensitivity.axis"),
        "{}",
        stderr(&out)
    );
}

#[test]
fn strict_turns_truncation_warnings_into_exit_4() {
    let tmp = TempDir::new().unwrap();
    let config = write_config(
        &tmp,
        "[pump]\nshape = \"single_gaussian\"\ntau_p = \"0.1 /linewidth\"\n\n[numerics]\njsa_points = 64\n\
         window = \"1 linewidths\"\npump_min_half_width = \"1 linewidths\"\npump_pulse_widths = 0.5\npump_min_points = 64\n",
    );
    for command in ["spectrum", "jsi"] {
        let dir = tmp.path().join(command);
        let lenient = ringpair(&[command, "--config", s(&config), "--out", s(&dir)]);
        assert_eq!(code(&lenient), 0, "{}", stderr(&lenient));
        assert!(stderr(&lenient).contains("truncat"), "{}", stderr(&lenient));

        let strict_dir = tmp.path().join(format!("{command}-strict"));
        let strict = ringpair(&[
            command,
            "--config",
            s(&config),
            "--strict",
            "--out",
            s(&strict_dir),
        ]);
        assert_eq!(code(&strict), 4, "{}", stderr(&strict));
        assert!(
            stderr(&strict).contains("spectral truncation"),
            "{}",
            stderr(&strict)
        );
        assert!(!strict_dir.exists());
    }
}

#[test]
fn unreadable_config_is_an_io_error() {
    let out = ringpair(&["jsi", "--config", "/nonexistent/run.toml"]);
    assert_eq!(code(&out), 1);
}
