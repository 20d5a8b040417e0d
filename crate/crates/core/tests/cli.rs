use std::fs;
use std::path::Path;
use std::process::Command;

use thinfilm::cli::{main_with_args, replay, run, Manifest, Record, RunConfig, MANIFEST, OUT_ENV};

fn run_cli(args: &[&str]) -> i32 {
    main_with_args(std::iter::once("thinfilm").chain(args.iter().copied()))
}

fn assert_same_tree(a: &Path, b: &Path) {
    let m = Manifest::load(&a.join(MANIFEST)).unwrap();
    assert!(!m.files.is_empty());
    for f in m.files.iter().map(String::as_str).chain([MANIFEST]) {
        let (x, y) = (fs::read(a.join(f)).unwrap(), fs::read(b.join(f)).unwrap());
        assert!(x == y, "{f} differs");
    }
}

#[test]
fn replay_reproduces_every_command() {
    let dir = tempfile::tempdir().unwrap();
    let evolve_cfg = dir.path().join("evolve.toml");
    fs::write(&evolve_cfg, "nodes = 101\nt_end_factor = 10.0\nsnapshots = 2\n").unwrap();
    let runs: Vec<Vec<String>> = vec![
        vec!["profile".into(), "--gamma".into(), "-0.5".into()],
        vec!["shoot".into(), "--levels".into(), "6".into(), "--theta".into(), "0,0.5,1".into(), "--threads".into(), "3".into()],
        vec!["tw".into(), "--lambda".into(), "1.5".into()],
        vec!["evolve".into(), "--config".into(), evolve_cfg.display().to_string()],
    ];
    for (i, args) in runs.iter().enumerate() {
        let first = dir.path().join(format!("run{i}"));
        let second = dir.path().join(format!("replay{i}"));
        let mut full: Vec<&str> = args.iter().map(String::as_str).collect();
        let out = first.display().to_string();
        full.extend(["--out", out.as_str()]);
        assert_eq!(run_cli(&full), 0, "{args:?}");
        replay(&first.join(MANIFEST), &second).unwrap();
        assert_same_tree(&first, &second);
    }
}

#[test]
fn thread_count_does_not_change_outputs() {
    let dir = tempfile::tempdir().unwrap();
    for t in ["1", "4"] {
        let out = dir.path().join(t).display().to_string();
        assert_eq!(run_cli(&["shoot", "--levels", "5", "--theta", "0.25,0.75", "--threads", t, "--out", &out]), 0);
    }
    for f in ["shoot_results.rec", "shoot_levels.dat", "shoot_profile_1.dat"] {
        assert_eq!(fs::read(dir.path().join("1").join(f)).unwrap(), fs::read(dir.path().join("4").join(f)).unwrap());
    }
}

#[test]
fn profile_record_contents() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().display().to_string();
    assert_eq!(run_cli(&["profile", "--lambda", "2", "--gamma", "7", "--out", &out]), 0);
    let text = fs::read_to_string(dir.path().join("profile_outcome.rec")).unwrap();
    let rec = Record::parse(text.lines().next().unwrap());
    assert_eq!(rec.get("outcome"), Some("MinimumTurn"));
    let trace = fs::read_to_string(dir.path().join("profile_trace.dat")).unwrap();
    assert_eq!(trace.lines().next(), Some("x z dz d2z curv"));
    assert!(trace.lines().skip(1).all(|l| l.split_whitespace().count() == 5));
}

#[test]
fn config_file_and_flags_merge() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("p.toml");
    fs::write(&cfg, "lambda = 3.0\ngamma = 0.2\ngeometry = \"radial\"\n").unwrap();
    let out = dir.path().join("o");
    let code = run_cli(&["profile", "--config", cfg.to_str().unwrap(), "--gamma", "0.1", "--out", out.to_str().unwrap()]);
    assert_eq!(code, 0);
    match Manifest::load(&out.join(MANIFEST)).unwrap().run_config().unwrap() {
        RunConfig::Profile(p) => {
            assert_eq!((p.lambda, p.gamma), (3.0, 0.1));
            assert_eq!(p.geometry.to_string(), "radial");
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn exit_codes_for_bad_input() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().display().to_string();
    let bad = dir.path().join("bad.toml");
    fs::write(&bad, "lambda = 2.0\nnot_a_key = 1\n").unwrap();
    assert_eq!(run_cli(&["profile", "--config", bad.to_str().unwrap(), "--out", &out]), 3);
    assert_eq!(run_cli(&["profile", "--delta", "0", "--out", &out]), 3);
    assert_eq!(run_cli(&["tw", "--lambda", "0.8", "--out", &out]), 3);
    assert_eq!(run_cli(&["evolve", "--scheme", "leapfrog", "--out", &out]), 3);
    assert_eq!(run_cli(&["profile", "--no-such-flag"]), 3);
    assert_eq!(run_cli(&["--help"]), 0);
}

#[test]
fn binary_uses_the_environment_output_dir() {
    let dir = tempfile::tempdir().unwrap();
    let status = Command::new(env!("CARGO_BIN_EXE_thinfilm"))
        .args(["profile", "--gamma", "0.3"])
        .env(OUT_ENV, dir.path())
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert!(status.status.success());
    assert!(dir.path().join("profile_outcome.rec").exists());
    assert!(dir.path().join(MANIFEST).exists());

    let status = Command::new(env!("CARGO_BIN_EXE_thinfilm"))
        .args(["tw", "--lambda", "1"])
        .env(OUT_ENV, dir.path())
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(3));
}

#[test]
fn run_accepts_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let files = run(&RunConfig::Profile(Default::default()), dir.path()).unwrap();
    assert!(files.iter().all(|f| f.exists()));
}
