use std::process::{Command, Output};

use relay_rates::cli::{
    self, Experiment, ExperimentConfig, ONEWAY_HEADER, TWRC_REGION_HEADER, TWRC_SUM_HEADER,
};

fn relay_rates(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_relay-rates"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn rows(csv: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = csv.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let body = lines
        .map(|l| l.split(',').map(String::from).collect())
        .collect();
    (header, body)
}

fn num(s: &str) -> f64 {
    s.parse().unwrap_or_else(|_| panic!("not a number: {s}"))
}

#[test]
fn oneway_sweep_to_stdout() {
    let out = relay_rates(&["--experiment", "oneway-sweep", "--d-steps", "3"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = String::from_utf8(out.stdout).unwrap();
    assert!(csv.ends_with('\n'));
    let (header, body) = rows(&csv);
    assert_eq!(header, ONEWAY_HEADER);
    assert_eq!(body.len(), 3);
    let d: Vec<f64> = body.iter().map(|r| num(&r[0])).collect();
    assert_eq!(d, vec![0.05, 0.5, 0.95]);
    // Six significant digits: allow for rounding in the comparisons.
    for r in &body {
        assert_eq!(r.len(), 5);
        let [df, nnc, combined, cutset] = [1, 2, 3, 4].map(|k| num(&r[k]));
        assert!(combined >= df.max(nnc) - 1e-5);
        assert!(df.max(nnc).max(combined) <= cutset + 1e-5);
    }
    assert_eq!(body[1][1], "3.16993");
}

#[test]
fn twrc_sum_sweep_columns() {
    let out = relay_rates(&[
        "--experiment",
        "twrc-sum-sweep",
        "--d-steps",
        "2",
        "--coarse-steps",
        "3",
        "--refine-rounds",
        "1",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let (header, body) = rows(&String::from_utf8(out.stdout).unwrap());
    assert_eq!(header, TWRC_SUM_HEADER);
    assert_eq!(body.len(), 2);
    for r in &body {
        let combined = num(&r[4]);
        for k in 1..4 {
            assert!(combined >= num(&r[k]) - 1e-5, "{r:?}");
        }
    }
}

#[test]
fn twrc_region_from_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("region.cfg");
    let out = dir.path().join("region.csv");
    std::fs::write(
        &config,
        "# small symmetric channel\nexperiment = twrc-region\np = 2\ng12 = 0.5\ng21 = 0.5\n\
         g1r = 1.5\ngr1 = 1.5\ng2r = 1.5\ngr2 = 1.5\ncoarse_steps = 3\nrefine_rounds = 1\nweights = 3\n",
    )
    .unwrap();
    let res = relay_rates(&[
        "--config",
        config.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(
        res.status.success(),
        "{}",
        String::from_utf8_lossy(&res.stderr)
    );
    assert!(res.stdout.is_empty());

    let (header, body) = rows(&std::fs::read_to_string(&out).unwrap());
    assert_eq!(header, TWRC_REGION_HEADER);
    for scheme in ["combined", "rankov_df", "xie_df", "lnnc"] {
        let mine: Vec<_> = body.iter().filter(|r| r[0] == scheme).collect();
        assert!(!mine.is_empty(), "{scheme}");
        for (k, r) in mine.iter().enumerate() {
            assert_eq!(r[1], k.to_string());
        }
        assert!(mine.iter().any(|r| num(&r[2]) == 0.0 && num(&r[3]) == 0.0));
    }
}

#[test]
fn flags_override_the_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("sweep.cfg");
    std::fs::write(&config, "experiment = oneway-sweep\nd_steps = 4\np = 1\n").unwrap();
    let res = relay_rates(&["--config", config.to_str().unwrap(), "--d-steps", "2"]);
    assert!(res.status.success());
    let (_, body) = rows(&String::from_utf8(res.stdout).unwrap());
    assert_eq!(body.len(), 2);
    // The file's P = 1 survives: at d = 0.05 the cut-set is about 1.2 bits,
    // against 2.73 at the default P = 10.
    assert!((num(&body[0][4]) - 1.2).abs() < 0.05);
}

#[test]
fn configuration_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad_key = dir.path().join("bad.cfg");
    std::fs::write(&bad_key, "experiment = oneway-sweep\nwidth = 3\n").unwrap();
    let cases: Vec<Vec<&str>> = vec![
        vec![],
        vec!["--experiment", "fig-4"],
        vec!["--experiment", "oneway-sweep", "--d-min", "0"],
        vec!["--experiment", "oneway-sweep", "--d-steps", "1"],
        vec!["--experiment", "oneway-sweep", "--p", "-1"],
        vec!["--experiment", "oneway-sweep", "--jobs", "0"],
        vec!["--config", bad_key.to_str().unwrap()],
        vec!["--config", "/nonexistent/relay.cfg"],
    ];
    for args in cases {
        let res = relay_rates(&args);
        assert_eq!(
            res.status.code(),
            Some(2),
            "{args:?}: {}",
            String::from_utf8_lossy(&res.stderr)
        );
        assert!(!res.stderr.is_empty());
    }
}

#[test]
fn unwritable_output_exits_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("missing").join("out.csv");
    let res = relay_rates(&[
        "--experiment",
        "oneway-sweep",
        "--d-steps",
        "2",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(res.status.code(), Some(3));
}

#[test]
fn library_runs_are_identical() {
    let mut cfg = ExperimentConfig::new(Experiment::OnewaySweep);
    cfg.d_steps = Some(4);
    let a = cli::run(&cfg).unwrap().to_csv();
    let b = cli::run(&cfg).unwrap().to_csv();
    assert_eq!(a, b);

    let mut cfg = ExperimentConfig::new(Experiment::TwrcRegion);
    cfg.coarse_steps = Some(3);
    cfg.refine_rounds = Some(1);
    cfg.weights = 3;
    assert_eq!(
        cli::run(&cfg).unwrap().to_csv(),
        cli::run(&cfg).unwrap().to_csv()
    );
}

#[test]
fn thread_count_does_not_change_output() {
    let args = |jobs| {
        [
            "--experiment",
            "oneway-sweep",
            "--d-steps",
            "5",
            "--jobs",
            jobs,
        ]
    };
    let one = relay_rates(&args("1"));
    let four = relay_rates(&args("4"));
    assert!(one.status.success() && four.status.success());
    assert_eq!(one.stdout, four.stdout);
}
