use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_8, PI, TAU};

use spinboost::output::{parse_csv, read_sweep, render, to_csv, write_sweep, LoadedSweep, OutputFormat, CSV_HEADER};
use spinboost::sweep::run_sweep_serial;
use spinboost::{run_sweep, BoostSpec, CanonicalPartition, GridSpec, SpinFamily, Surface, SweepConfig};

fn small_config(family: SpinFamily, partition: CanonicalPartition, boost: BoostSpec) -> SweepConfig {
    let mut c = SweepConfig::new(family, FRAC_PI_4, boost, partition);
    c.theta_grid = GridSpec::new(0.0, PI, 19).unwrap();
    c.phi_grid = GridSpec::new(0.0, TAU, 37).unwrap();
    c
}

#[test]
fn parallel_and_serial_sweeps_agree_exactly() {
    for partition in CanonicalPartition::ALL {
        let c = small_config(SpinFamily::S2, partition, BoostSpec::angle(FRAC_PI_8).unwrap());
        let a = run_sweep(&c).unwrap();
        let b = run_sweep_serial(&c).unwrap();
        assert_eq!(a.surface.values.len(), 19 * 37);
        let bits = |v: &[f64]| v.iter().map(|x| x.to_bits()).collect::<Vec<_>>();
        assert_eq!(bits(&a.surface.values), bits(&b.surface.values));
    }
}

#[test]
fn repeated_sweeps_render_identical_bytes() {
    let c = small_config(
        SpinFamily::S1,
        CanonicalPartition::OneVsThree,
        BoostSpec::rapidities(1.0, 2.0).unwrap(),
    );
    for format in [OutputFormat::Csv, OutputFormat::Json] {
        let a = render(&run_sweep(&c).unwrap(), format).unwrap();
        let b = render(&run_sweep(&c).unwrap(), format).unwrap();
        assert_eq!(a, b);
    }
}

#[test]
fn csv_round_trip_is_exact() {
    let c = small_config(
        SpinFamily::S1,
        CanonicalPartition::SvsP,
        BoostSpec::angle(FRAC_PI_2).unwrap(),
    );
    let r = run_sweep(&c).unwrap();
    let text = to_csv(&r.surface);
    assert!(text.starts_with(&format!("{CSV_HEADER}\n")));
    assert_eq!(text.lines().count(), 1 + 19 * 37);
    assert_eq!(parse_csv(&text).unwrap(), r.surface);
}

#[test]
fn csv_round_trip_of_awkward_values() {
    let values = vec![
        0.1,
        -0.0,
        1e-300,
        -2.5e-17,
        1.0 / 3.0,
        f64::MAX,
        f64::MIN_POSITIVE,
        5e-324,
        7.0,
    ];
    let s = Surface::new(vec![0.0, 1.0 / 7.0, 3.0], vec![-1e-9, 0.2, TAU], values).unwrap();
    let back = parse_csv(&to_csv(&s)).unwrap();
    let bits = |v: &[f64]| v.iter().map(|x| x.to_bits()).collect::<Vec<_>>();
    assert_eq!(bits(&back.values), bits(&s.values));
    assert_eq!(back.thetas, s.thetas);
    assert_eq!(back.phis, s.phis);
}

#[test]
fn files_round_trip_through_disk() {
    let dir = tempfile::tempdir().unwrap();
    let c = small_config(
        SpinFamily::S2,
        CanonicalPartition::OneVsThree,
        BoostSpec::angle(0.3).unwrap(),
    );
    let r = run_sweep(&c).unwrap();

    let csv = dir.path().join("s.csv");
    write_sweep(&r, &csv, OutputFormat::Csv).unwrap();
    match read_sweep(&csv).unwrap() {
        LoadedSweep::Csv(s) => assert_eq!(s, r.surface),
        other => panic!("expected CSV, got {other:?}"),
    }

    let json = dir.path().join("s.json");
    write_sweep(&r, &json, OutputFormat::Json).unwrap();
    match read_sweep(&json).unwrap() {
        LoadedSweep::Json(back) => assert_eq!(back, r),
        other => panic!("expected JSON, got {other:?}"),
    }
}

#[test]
fn json_envelope_carries_config_and_shape() {
    let c = small_config(
        SpinFamily::S1,
        CanonicalPartition::Mixed,
        BoostSpec::rapidities(0.5, 0.7).unwrap(),
    );
    let r = run_sweep(&c).unwrap();
    let v: serde_json::Value = serde_json::from_str(&render(&r, OutputFormat::Json).unwrap()).unwrap();
    assert_eq!(v["format"], "spinboost-sweep");
    assert_eq!(v["version"], 1);
    assert_eq!(v["shape"], serde_json::json!([19, 37]));
    assert_eq!(v["config"]["family"], "s1");
    assert_eq!(v["config"]["partition"], "mixed");
    assert_eq!(v["config"]["boost"]["kind"], "rapidities");
    assert_eq!(v["values"].as_array().unwrap().len(), 19 * 37);
    assert_eq!(v["omega"].as_f64().unwrap(), r.omega);
}

#[test]
fn unwritable_path_is_an_error() {
    let c = small_config(
        SpinFamily::S1,
        CanonicalPartition::Mixed,
        BoostSpec::angle(0.1).unwrap(),
    );
    let r = run_sweep(&c).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("missing").join("out.csv");
    assert!(write_sweep(&r, &path, OutputFormat::Csv).is_err());
}

#[test]
fn rejected_json_documents() {
    let dir = tempfile::tempdir().unwrap();
    let c = small_config(
        SpinFamily::S1,
        CanonicalPartition::Mixed,
        BoostSpec::angle(0.1).unwrap(),
    );
    let text = render(&run_sweep(&c).unwrap(), OutputFormat::Json).unwrap();
    for (from, to) in [
        ("spinboost-sweep", "other"),
        ("\"shape\": [\n    19", "\"shape\": [\n    18"),
    ] {
        let path = dir.path().join("bad.json");
        std::fs::write(&path, text.replacen(from, to, 1)).unwrap();
        assert!(read_sweep(&path).is_err(), "{from}");
    }
}
