use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn xlev(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_xlev"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str], dir: &Path) -> String {
    let out = xlev(args, dir);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

/// Table rows without the comment header.
fn body(text: &str) -> Vec<&str> {
    text.lines().filter(|l| !l.starts_with('#')).collect()
}

fn simulated(dir: &Path, n: &str, p: &str) -> PathBuf {
    let path = dir.join(format!("sim_{n}_{p}.csv"));
    ok(
        &["simulate", "--scenario", "3", "--n", n, "--p", p, "--seed", "7", "--output", path.to_str().unwrap()],
        dir,
    );
    path
}

#[test]
fn simulate_is_byte_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for f in [&a, &b] {
        ok(
            &["simulate", "--scenario", "3", "--n", "60", "--p", "1000", "--seed", "7", "--output", f.to_str().unwrap()],
            dir.path(),
        );
    }
    let bytes = std::fs::read(&a).unwrap();
    assert_eq!(bytes, std::fs::read(&b).unwrap());
    let text = String::from_utf8(bytes).unwrap();
    assert!(text.starts_with("# tool = xlev "));
    assert!(text.contains("# seed = 7\n"));
    let rows = body(&text);
    assert_eq!(rows.len(), 61);
    assert_eq!(rows[0].split(',').count(), 1001);
    let other = ok(&["simulate", "--scenario", "3", "--n", "60", "--p", "1000", "--seed", "8"], dir.path());
    assert_ne!(body(&other), rows);
}

#[test]
fn scores_format_contract() {
    let dir = tempfile::tempdir().unwrap();
    let data = simulated(dir.path(), "30", "50");
    let out = dir.path().join("s.tsv");
    ok(&["scores", "--input", data.to_str().unwrap(), "--response", "y", "--output", out.to_str().unwrap()], dir.path());
    let text = std::fs::read_to_string(out).unwrap();
    assert!(text.contains("# command = scores\n"));
    let rows = body(&text);
    assert_eq!(rows[0], "index\tname\tleverage\tcross_leverage");
    assert_eq!(rows.len(), 51);
    let first: Vec<&str> = rows[1].split('\t').collect();
    assert_eq!(&first[..2], ["1", "X1"]);
    let l: f64 = first[2].parse().unwrap();
    assert!((0.0..=1.0).contains(&l));
}

#[test]
fn select_auto_k_uses_n_log_n() {
    let dir = tempfile::tempdir().unwrap();
    let data = simulated(dir.path(), "60", "1000");
    let text = ok(&["select", "--input", data.to_str().unwrap(), "--criterion", "cls", "--k", "auto"], dir.path());
    assert!(text.contains("# k = 246\n"));
    let rows = body(&text);
    assert_eq!(rows[0], "rank\tindex\tname\tscore");
    assert_eq!(rows.len(), 247);
    let explicit = ok(&["select", "--input", data.to_str().unwrap(), "--criterion", "cls", "--k", "10"], dir.path());
    assert_eq!(body(&explicit)[..], rows[..11]);
}

#[test]
fn config_file_fills_options_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let data = simulated(dir.path(), "40", "60");
    let cfg = dir.path().join("run.conf");
    std::fs::write(&cfg, "# select settings\ncriterion = combined\npct_cls = 0.1\npct_ls = 0.1\n").unwrap();
    let d = data.to_str().unwrap();
    let c = cfg.to_str().unwrap();
    let from_file = ok(&["select", "--input", d, "--config", c], dir.path());
    assert!(from_file.contains("# criterion = combined\n# k = "));
    assert!(from_file.contains("# pct_ls = 0.1\n"));
    let overridden = ok(&["select", "--input", d, "--config", c, "--pct-ls", "0.5"], dir.path());
    assert!(overridden.contains("# pct_ls = 0.5\n"));
    assert!(body(&overridden).len() >= 31);

    std::fs::write(&cfg, "no_such_option = 1\n").unwrap();
    let out = xlev(&["select", "--input", d, "--config", c], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn usage_and_runtime_errors() {
    let dir = tempfile::tempdir().unwrap();
    let data = simulated(dir.path(), "20", "30");
    let d = data.to_str().unwrap();
    for args in [
        vec!["select", "--input", d, "--criterion", "combined"],
        vec!["select", "--input", d, "--pct-cls", "0.2"],
        vec!["select", "--bogus"],
        vec!["select", "--input", d, "--k", "0"],
        vec!["raster", "--input", d, "--output", "r.ppm"],
        vec!["experiment", "success", "--replicates", "3", "--full-scale"],
    ] {
        let out = xlev(&args, dir.path());
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
    for args in [
        vec!["scores", "--input", "missing.csv"],
        vec!["select", "--input", d, "--response", "nope"],
        vec!["fit-logic", "--input", d, "--cooling", "2"],
    ] {
        let out = xlev(&args, dir.path());
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        let err = String::from_utf8(out.stderr).unwrap();
        assert_eq!(err.lines().count(), 1, "{err}");
        assert!(err.starts_with("xlev: error: "));
    }
}

#[test]
fn preprocess_output_feeds_other_commands() {
    let dir = tempfile::tempdir().unwrap();
    let raw = dir.path().join("raw.csv");
    std::fs::write(&raw, "g,a,b,c,d\n1,0,1,NA,1\n0,0,0,1,1\n1,0,NA,1,0\n0,0,1,0,1\n1,0,0,1,NA\n").unwrap();
    let clean = dir.path().join("clean.csv");
    let report = dir.path().join("report.tsv");
    let args = [
        "preprocess", "--input", "raw.csv", "--response", "1", "--output", "clean.csv", "--report", "report.tsv", "--seed", "3",
    ];
    ok(&args, dir.path());
    let first = std::fs::read(&clean).unwrap();
    ok(&args, dir.path());
    assert_eq!(std::fs::read(&clean).unwrap(), first);
    let rep = std::fs::read_to_string(report).unwrap();
    assert!(rep.contains("dropped\ta\t"));
    assert!(rep.contains("imputed\tb\t1\n"));
    let text = ok(&["scores", "--input", "clean.csv", "--response", "g"], dir.path());
    let rows = body(&text);
    assert_eq!(rows.len(), 4);
    assert!(rows[1].starts_with("1\tb\t"));
}

#[test]
fn raster_has_header_and_pixels() {
    let dir = tempfile::tempdir().unwrap();
    let data = simulated(dir.path(), "20", "30");
    ok(&["raster", "--input", data.to_str().unwrap(), "--columns", "1,2,3", "--output", "r.ppm"], dir.path());
    let bytes = std::fs::read(dir.path().join("r.ppm")).unwrap();
    assert!(bytes.starts_with(b"P6\n# tool = xlev "));
    let dims = b"\n3 20\n255\n";
    let at = bytes.windows(dims.len()).position(|w| w == dims).expect("dimension line");
    assert_eq!(bytes.len() - (at + dims.len()), 3 * 20 * 3);
}

#[test]
fn fit_logic_single_and_ensemble() {
    let dir = tempfile::tempdir().unwrap();
    let data = simulated(dir.path(), "80", "20");
    let d = data.to_str().unwrap();
    let single = ok(&["fit-logic", "--input", d, "--iterations", "3000", "--seed", "1"], dir.path());
    let rows = body(&single);
    assert_eq!(rows[0], "field\tvalue");
    assert!(rows.iter().any(|r| r.starts_with("case_dnf\t")));
    assert_eq!(single, ok(&["fit-logic", "--input", d, "--iterations", "3000", "--seed", "1"], dir.path()));
    let ens = ok(
        &["fit-logic", "--input", d, "--iterations", "2000", "--bootstraps", "4", "--reduce", "ls", "--k", "12"],
        dir.path(),
    );
    assert!(ens.contains("# reduce = ls\n# k = 12\n"));
    assert_eq!(body(&ens)[0], "kind\titem\tfrequency");
}

#[test]
fn experiments_write_tables_independent_of_jobs() {
    let dir = tempfile::tempdir().unwrap();
    let base = ["--scenario", "2", "--n", "30", "--p", "80", "--replicates", "12", "--k", "20", "--seed", "5"];
    let mut outputs = Vec::new();
    for jobs in ["1", "3"] {
        let out_dir = format!("s{jobs}");
        let mut args = vec!["experiment", "success", "--jobs", jobs, "--out-dir", out_dir.as_str()];
        args.extend(base);
        let listed = ok(&args, dir.path());
        assert_eq!(listed.lines().count(), 2);
        outputs.push(std::fs::read(dir.path().join(&out_dir).join("success_summary.tsv")).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    let summary = String::from_utf8(outputs.pop().unwrap()).unwrap();
    assert!(summary.contains("# replicates = 12\n"));
    assert_eq!(body(&summary).len(), 5);

    let mut dens = vec!["experiment", "density", "--out-dir", "d", "--points", "32", "--samples"];
    dens.extend(base);
    ok(&dens, dir.path());
    for f in ["density_summary.tsv", "density_curves.tsv", "density_samples.tsv"] {
        let text = std::fs::read_to_string(dir.path().join("d").join(f)).unwrap();
        assert!(text.contains("# command = experiment density\n"), "{f}");
    }

    let mut pipe = vec![
        "experiment", "pipeline", "--out-dir", "p", "--bootstraps", "2", "--iterations", "500", "--combined-ls", "5",
    ];
    pipe.extend(base);
    ok(&pipe, dir.path());
    let rows = std::fs::read_to_string(dir.path().join("p/pipeline_rows.tsv")).unwrap();
    assert!(rows.contains("combined_5ls_15cls"));
    assert_eq!(body(&rows).len(), 1 + 12 * 6);
}
