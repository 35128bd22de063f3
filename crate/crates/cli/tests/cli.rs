use std::path::Path;
use std::process::{Command, Output};

use collision_cli::config::{config_text, figure_preset, OutputKind, Param, FIGURE_PRESETS};
use collision_cli::{
    emit, parse_config, parse_csv, resolve_config, run_experiment, CliError, Format, ModelPreset, Overrides,
    Propagator,
};

const MINIMAL: &str = "[model]\npreset = \"example2\"\nbeta = 1.0\n\n[run]\ndt = 0.1\nn_collisions = 2000\n";

fn simulate(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_simulate")).args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

fn short(extra: &str) -> String {
    format!("[run]\nn_collisions = 5\n{extra}")
}

#[test]
fn minimal_document_gets_reference_defaults() {
    let cfg = parse_config(MINIMAL).unwrap();
    let m = &cfg.model;
    assert_eq!(m.preset, ModelPreset::Example2);
    assert_eq!((m.omega_s, m.omega1, m.omega2, m.kappa12, m.alpha), (1.0, 0.5, 1.5, 0.3, 0.1));
    assert_eq!((m.beta, m.beta_sys, m.alpha2), (1.0, 1.0, None));
    assert_eq!(cfg.run.dt, 0.1);
    assert_eq!(cfg.run.n_collisions, 2000);
    assert_eq!(cfg.run.propagator, Propagator::Exact);
    assert_eq!(cfg.run.outputs, vec![OutputKind::Trajectory]);
    assert!(cfg.sweep.is_empty());
    assert_eq!(cfg.output.format, Format::Csv);
}

#[test]
fn zero_step_is_rejected_with_key_and_line() {
    let src = MINIMAL.replace("dt = 0.1", "dt = 0.0");
    let err = parse_config(&src).unwrap_err();
    assert_eq!(err.exit_code(), 1);
    let msg = err.to_string();
    assert!(msg.contains("dt") && msg.contains("line 6"), "{msg}");
}

#[test]
fn unknown_key_is_named_with_its_line() {
    let src = format!("{MINIMAL}temperature = 3.0\n");
    let msg = parse_config(&src).unwrap_err().to_string();
    assert!(msg.contains("temperature") && msg.contains("line 8"), "{msg}");
}

#[test]
fn invalid_combinations_are_configuration_errors() {
    for src in [
        "[model]\npreset = \"example1\"\n[run]\npropagator = \"analytic\"\n",
        "[run]\npropagator = \"second-order\"\noutputs = [\"thermo\"]\n",
        "[model]\nalpha2 = 0.3\n",
        "[model]\nbeta = -1.0\n",
        "[run]\noutputs = []\n",
        "[sweep]\nparam = \"kappa12\"\nvalues = []\n",
        "[sweep]\nparam = \"warmth\"\nvalues = [1.0]\n",
        "[model\n",
    ] {
        let err = parse_config(src).unwrap_err();
        assert!(matches!(err, CliError::Config(_)), "{src}: {err}");
    }
}

#[test]
fn kappa_sweep_of_thirty_values_gives_thirty_points() {
    let values: Vec<String> = (1..=30).map(|i| format!("{}", i as f64 * 0.1)).collect();
    let src = format!(
        "[run]\noutputs = [\"steady_state\"]\n[sweep]\nparam = \"kappa12\"\nvalues = [{}]\n",
        values.join(", ")
    );
    let cfg = parse_config(&src).unwrap();
    assert_eq!(cfg.sweep.len(), 1);
    assert_eq!(cfg.sweep[0].len(), 30);
    let tables = run_experiment(&cfg).unwrap();
    assert_eq!(tables.len(), 1);
    let t = &tables[0];
    assert_eq!(t.rows.len(), 30);
    let kappas = t.column("kappa12").unwrap();
    for (k, v) in kappas.iter().zip(&values) {
        assert_eq!(*k, v.parse::<f64>().unwrap());
    }
}

#[test]
fn series_sweeps_nest_outer_axis_first() {
    let src = "[run]\noutputs = [\"steady_state\"]\n[sweep]\nparam = \"kappa12\"\nvalues = [0.3, 1.0]\n\
               series = \"beta\"\nseries_values = [0.5, 2.0, 5.0]\n";
    let tables = run_experiment(&parse_config(src).unwrap()).unwrap();
    assert_eq!(tables[0].header[..2], ["beta".to_string(), "kappa12".to_string()]);
    assert_eq!(tables[0].column("beta").unwrap(), vec![0.5, 0.5, 2.0, 2.0, 5.0, 5.0]);
    assert_eq!(tables[0].column("kappa12").unwrap(), vec![0.3, 1.0, 0.3, 1.0, 0.3, 1.0]);
}

#[test]
fn empty_table_writes_header_only() {
    let cfg = parse_config(MINIMAL).unwrap();
    let t = collision_cli::ResultTable::new("empty".into(), "trajectory", &["step", "sz"], &cfg, vec![]);
    let csv = t.to_csv();
    let (header, rows) = parse_csv(&csv).unwrap();
    assert_eq!(header, ["step", "sz"]);
    assert!(rows.is_empty());
    assert!(csv.ends_with("step,sz\n"));
    let json: serde_json::Value = serde_json::from_str(&t.to_json()).unwrap();
    assert_eq!(json["columns"]["sz"], serde_json::json!([]));
}

#[test]
fn csv_round_trips_bitwise() {
    let cfg = parse_config(&short("outputs = [\"trajectory\", \"thermo\"]\n")).unwrap();
    for t in run_experiment(&cfg).unwrap() {
        let (header, rows) = parse_csv(&t.to_csv()).unwrap();
        assert_eq!(header, t.header);
        assert_eq!(rows.len(), t.rows.len());
        for (a, b) in rows.iter().zip(&t.rows) {
            for (x, y) in a.iter().zip(b) {
                assert_eq!(x.to_bits(), y.to_bits(), "{}: {x} vs {y}", t.name);
            }
        }
    }
}

#[test]
fn json_columns_mirror_csv() {
    let cfg = parse_config(&short("outputs = [\"thermo\"]\n")).unwrap();
    let t = &run_experiment(&cfg).unwrap()[0];
    let json: serde_json::Value = serde_json::from_str(&t.to_json()).unwrap();
    assert_eq!(json["metadata"]["table"], "thermo");
    let cols = json["columns"].as_object().unwrap();
    assert_eq!(cols.keys().cloned().collect::<Vec<_>>(), t.header);
    let (_, rows) = parse_csv(&t.to_csv()).unwrap();
    for (k, h) in t.header.iter().enumerate() {
        let col: Vec<f64> = cols[h].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect();
        let csv: Vec<f64> = rows.iter().map(|r| r[k]).collect();
        assert_eq!(col, csv, "{h}");
    }
    let echoed: collision_cli::ExperimentConfig =
        serde_json::from_value(json["metadata"]["config"].clone()).unwrap();
    assert_eq!(echoed, cfg);
}

#[test]
fn emitted_table_regenerates_itself() {
    let cfg = parse_config(&short("outputs = [\"trajectory\"]\n[model]\nkappa12 = 1.7\nbeta = 0.4\n")).unwrap();
    let first = run_experiment(&cfg).unwrap()[0].to_csv();
    let again = parse_config(&first).unwrap();
    assert_eq!(again, cfg);
    assert!(config_text(&first).contains("kappa12 = 1.7"));
    assert_eq!(run_experiment(&again).unwrap()[0].to_csv(), first);
}

#[test]
fn sweep_results_do_not_depend_on_value_order() {
    let mk = |vals: &str| {
        parse_config(&format!(
            "[run]\nn_collisions = 20\noutputs = [\"trajectory\", \"steady_state\"]\n\
             [sweep]\nparam = \"kappa12\"\nvalues = [{vals}]\n"
        ))
        .unwrap()
    };
    let fwd = run_experiment(&mk("0.3, 1.0, 3.0")).unwrap();
    let rev = run_experiment(&mk("3.0, 1.0, 0.3")).unwrap();
    for t in fwd.iter().filter(|t| t.kind == "trajectory") {
        let u = rev.iter().find(|u| u.name == t.name).unwrap();
        assert_eq!(t.rows, u.rows);
    }
    let (a, b) = (fwd.last().unwrap(), rev.last().unwrap());
    let mut ra = a.rows.clone();
    let mut rb = b.rows.clone();
    ra.sort_by(|x, y| x[0].total_cmp(&y[0]));
    rb.sort_by(|x, y| x[0].total_cmp(&y[0]));
    assert_eq!(ra, rb);
}

#[test]
fn overrides_replace_configuration_keys() {
    let o = Overrides {
        preset: Some(ModelPreset::Example1),
        steps: Some(7),
        beta: Some(2.5),
        kappa: Some(1.1),
        dt: Some(0.05),
        propagator: Some(Propagator::SecondOrder),
        format: Some(Format::Json),
        out: Some("results".into()),
    };
    let cfg = resolve_config(MINIMAL, &o).unwrap();
    assert_eq!(cfg.model.preset, ModelPreset::Example1);
    assert_eq!((cfg.run.n_collisions, cfg.run.dt), (7, 0.05));
    assert_eq!((cfg.model.beta, cfg.model.kappa12), (2.5, 1.1));
    assert_eq!(cfg.run.propagator, Propagator::SecondOrder);
    assert_eq!(cfg.output.format, Format::Json);
    assert_eq!(cfg.output.dir.as_deref(), Some("results"));
    let bad = Overrides { dt: Some(-1.0), ..Default::default() };
    assert!(resolve_config(MINIMAL, &bad).unwrap_err().to_string().contains("dt"));
}

#[test]
fn figure_presets_parse() {
    assert_eq!(FIGURE_PRESETS.len(), 5);
    for (name, text) in FIGURE_PRESETS {
        let cfg = parse_config(text).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(cfg.model.preset, ModelPreset::Example2, "{name}");
    }
    assert!(figure_preset("fig9").is_none());
    let fig5 = parse_config(figure_preset("fig5").unwrap()).unwrap();
    assert_eq!(fig5.sweep[0].param, Param::Kappa12);
    assert_eq!(fig5.sweep[0].len(), 200);
}

#[test]
fn stdout_matches_file_output() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "one.toml", &short(""));
    let out = simulate(&[&cfg]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let files = dir.path().join("files");
    let out2 = simulate(&[&cfg, "--out", files.to_str().unwrap()]);
    assert!(out2.status.success());
    assert!(out2.stdout.is_empty());
    let written = std::fs::read(files.join("trajectory.csv")).unwrap();
    assert_eq!(out.stdout, written);
}

#[test]
fn repeated_runs_are_byte_identical() {
    let src = "[run]\nn_collisions = 50\noutputs = [\"trajectory\", \"steady_state\"]\n\
               [sweep]\nparam = \"beta\"\nvalues = [0.5, 1.0, 2.0, 4.0]\n";
    let cfg = parse_config(src).unwrap();
    let encode = || {
        let mut buf = Vec::new();
        emit(&run_experiment(&cfg).unwrap(), Format::Json, None, &mut buf).unwrap();
        buf
    };
    assert_eq!(encode(), encode());
}

#[test]
fn exit_codes_follow_error_kind() {
    let dir = tempfile::tempdir().unwrap();

    let bad = write(dir.path(), "bad.toml", "[run]\ndt = 0.0\n");
    let out = simulate(&[&bad]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("dt"));
    assert_eq!(simulate(&["no-such-preset"]).status.code(), Some(1));
    assert_eq!(simulate(&["--steps", "many"]).status.code(), Some(1));

    let good = write(dir.path(), "good.toml", &short(""));
    let blocker = write(dir.path(), "blocker", "not a directory");
    let out = simulate(&[&good, "--out", &format!("{blocker}/sub")]);
    assert_eq!(out.status.code(), Some(2));

    let strong = write(
        dir.path(),
        "strong.toml",
        "[model]\nalpha = 3.0\nkappa12 = 0.3\n[run]\ndt = 0.7\nn_collisions = 50\npropagator = \"second-order\"\n",
    );
    let out = simulate(&[&strong]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty());
}

#[test]
fn sweep_point_failures_name_the_point() {
    let src = "[model]\nalpha = 3.0\n[run]\ndt = 0.7\nn_collisions = 50\npropagator = \"second-order\"\n\
               [sweep]\nparam = \"kappa12\"\nvalues = [0.3]\n";
    let err = run_experiment(&parse_config(src).unwrap()).unwrap_err();
    assert_eq!(err.exit_code(), 3);
    assert!(err.to_string().contains("kappa12=0.3"), "{err}");
}
