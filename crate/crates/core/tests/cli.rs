use std::path::PathBuf;

use manin::cli::main_with_args;
use serde_json::Value;

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("manin-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

/// Run `manin <args> --output <file>` and return the status and file text.
fn run(args: &[&str], out: &str) -> (i32, String) {
    let path = scratch(out);
    let _ = std::fs::remove_file(&path);
    let mut argv = vec!["manin"];
    argv.extend_from_slice(args);
    argv.extend(["--output", path.to_str().unwrap()]);
    let code = main_with_args(argv);
    (code, std::fs::read_to_string(&path).unwrap_or_default())
}

fn json(text: &str) -> Value {
    serde_json::from_str(text).unwrap()
}

#[test]
fn picard_and_segre_shapes() {
    let (code, text) = run(&["picard", "--a", "1,1,1,2"], "picard.json");
    assert_eq!(code, 0);
    let v = json(&text);
    assert_eq!(v["rank"], 1);
    assert_eq!(v["config"]["command"]["name"], "picard");

    let (code, text) = run(&["segre", "--surface", "dp4_i"], "segre.json");
    assert_eq!(code, 0);
    let v = json(&text);
    assert_eq!(v["symbol"], "(2,1,1,1)");
    assert_eq!(v["type"], "A1");
}

#[test]
fn segre_from_matrices_file() {
    let m = scratch("pencil.json");
    // x1x2 - x3x4 and x1x4 - x2x3 + x3x5 + x4x5, doubled to keep entries integral.
    std::fs::write(
        &m,
        r#"{"A": [[0,1,0,0,0],[1,0,0,0,0],[0,0,0,-1,0],[0,0,-1,0,0],[0,0,0,0,0]],
            "B": [[0,0,0,1,0],[0,0,-1,0,0],[0,-1,0,0,1],[1,0,0,0,1],[0,0,1,1,0]]}"#,
    )
    .unwrap();
    let (code, text) = run(
        &["segre", "--matrices", m.to_str().unwrap()],
        "segre_m.json",
    );
    assert_eq!(code, 0, "{text}");
    assert_eq!(json(&text)["symbol"], "(2,1,1,1)");
}

#[test]
fn count_record() {
    let (code, text) = run(
        &[
            "count",
            "--surface",
            "fermat_cubic",
            "--B",
            "100",
            "--subset",
            "open_U",
        ],
        "count.json",
    );
    assert_eq!(code, 0);
    let v = json(&text);
    for key in ["surface", "B", "subset", "count", "elapsed_ms"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["subset"], "open_U");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["picard", "--a", "1,1,1"], "e1.json").0, 2);
    assert_eq!(
        run(&["count", "--surface", "nope", "--B", "10"], "e2.json").0,
        2
    );
    assert_eq!(
        run(
            &["count", "--surface", "fermat_cubic", "--B", "0"],
            "e3.json"
        )
        .0,
        2
    );
    assert_eq!(
        run(&["local", "--a", "1,1,1,1", "--p", "8"], "e4.json").0,
        2
    );
    assert_eq!(
        run(
            &["constants", "--which", "sigma_a1", "--tolerance", "1"],
            "e5.json"
        )
        .0,
        2
    );
    assert_eq!(run(&["frobnicate"], "e6.json").0, 2);
    // Lines of the quartic types are not listed, so open_U is refused.
    assert_eq!(
        run(
            &[
                "count",
                "--surface",
                "dp4_iii",
                "--B",
                "5",
                "--subset",
                "open_U"
            ],
            "e7.json"
        )
        .0,
        2
    );
    assert_eq!(
        run(&["picard", "--a", "1,1,1,1", "--workers", "0"], "e8.json").0,
        2
    );
}

#[test]
fn runtime_failure_exits_1() {
    let (code, _) = run(
        &[
            "count",
            "--surface",
            "fermat_cubic",
            "--B",
            "100",
            "--budget",
            "10",
        ],
        "budget.json",
    );
    assert_eq!(code, 1);
    let (code, _) = run(
        &["torsor", "verify", "--surface", "d4", "--B", "20"],
        "v.json",
    );
    assert_eq!(code, 0);
}

#[test]
fn identical_config_gives_identical_output_and_replays() {
    let args = [
        "gon",
        "sweep",
        "--lemma",
        "line",
        "--seed",
        "5",
        "--instances",
        "50",
    ];
    let (c1, a) = run(&args, "sweep_a.json");
    let (c2, b) = run(&args, "sweep_b.json");
    assert_eq!((c1, c2), (0, 0));
    let strip = |t: &str| {
        let mut v = json(t);
        v["config"]["output"] = Value::Null;
        v
    };
    assert_eq!(strip(&a), strip(&b));

    let cfg = scratch("sweep_a.json");
    let (c3, replay) = run(&["run", cfg.to_str().unwrap()], "sweep_c.json");
    assert_eq!(c3, 0);
    assert_eq!(strip(&replay), strip(&a));
}

#[test]
fn worker_count_does_not_change_results() {
    let mut seen = Vec::new();
    for w in ["1", "3", "8"] {
        let (code, text) = run(
            &[
                "gon",
                "sweep",
                "--lemma",
                "conic",
                "--seed",
                "9",
                "--instances",
                "200",
                "--workers",
                w,
            ],
            "w.json",
        );
        assert_eq!(code, 0);
        let v = json(&text);
        seen.push((v["rows"].clone(), v["max_ratio"].clone()));
        let (_, text) = run(
            &["count", "--surface", "dp3_d4", "--B", "40", "--workers", w],
            "wc.json",
        );
        seen.push((json(&text)["count"].clone(), Value::Null));
    }
    assert_eq!(seen[0], seen[2]);
    assert_eq!(seen[0], seen[4]);
    assert_eq!(seen[1], seen[3]);
    assert_eq!(seen[1], seen[5]);
}

#[test]
fn unknown_config_keys_are_rejected() {
    let cfg = scratch("bad.json");
    std::fs::write(
        &cfg,
        r#"{"command": {"name": "picard", "a": [1,1,1,2], "colour": "red"}, "workers": 1}"#,
    )
    .unwrap();
    assert_eq!(run(&["run", cfg.to_str().unwrap()], "bad_out.json").0, 2);
    std::fs::write(
        &cfg,
        r#"{"command": {"name": "picard", "a": [1,1,1,2]}, "workers": 1, "extra": 0}"#,
    )
    .unwrap();
    assert_eq!(run(&["run", cfg.to_str().unwrap()], "bad_out.json").0, 2);
    std::fs::write(
        &cfg,
        r#"{"command": {"name": "picard", "a": [1,1,1,2]}, "workers": 1}"#,
    )
    .unwrap();
    let (code, text) = run(&["run", cfg.to_str().unwrap()], "good_out.json");
    assert_eq!(code, 0);
    assert_eq!(json(&text)["rank"], 1);
}

#[test]
fn csv_has_config_comment_and_header() {
    let (code, text) = run(
        &[
            "gon",
            "sweep",
            "--lemma",
            "rho",
            "--seed",
            "1",
            "--instances",
            "5",
            "--format",
            "csv",
        ],
        "rho.csv",
    );
    assert_eq!(code, 0);
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# config: {"));
    assert_eq!(lines.next().unwrap(), "instance,count,bound,ratio");
    assert_eq!(lines.count(), 5);
}
