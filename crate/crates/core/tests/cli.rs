use std::path::PathBuf;
use std::process::{Command, Output};

fn treedist(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_treedist"))
        .args(args)
        .output()
        .expect("run treedist")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Writes `text` to a fresh file under the target temp dir.
fn file(name: &str, text: &str) -> PathBuf {
    let dir =
        PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(format!("cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn identical_files_give_zero_matrix() {
    let a = file("a.nwk", "((1,2),(3,4));\n");
    let b = file("b.nwk", "((3,4),(2,1));\n");
    let o = treedist(&[
        "dist",
        "--metric=rf",
        a.to_str().unwrap(),
        b.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), ",a.nwk:0,b.nwk:0\na.nwk:0,0,0\nb.nwk:0,0,0\n");
}

#[test]
fn triplet_on_unrooted_input_fails_with_status_two() {
    let f = file("unrooted.nwk", "((1,2),3);\n(1,2,3);\n");
    let o = treedist(&["dist", "--metric=triplet", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(
        err.contains("unrooted.nwk:1") && err.contains("E_UNROOTED"),
        "{err}"
    );
}

#[test]
fn geodesic_json_matrix() {
    let f = file(
        "weighted.nwk",
        "((1:1,2:1):1,(3:1,4:1):1,5:1);\n((1:1,3:1):1,(2:1,4:1):1,5:1);\n((1:2,2:1):0.5,(3:1,5:1):1,4:1);\n",
    );
    let o = treedist(&[
        "dist",
        "--metric",
        "geodesic",
        "--format",
        "json",
        f.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["metric"], "geodesic");
    let m = v["matrix"].as_array().unwrap();
    assert_eq!(m.len(), 3);
    for i in 0..3 {
        assert_eq!(m[i][i].as_f64(), Some(0.0));
        for j in 0..3 {
            assert_eq!(m[i][j], m[j][i]);
        }
    }
    // every split of the first tree conflicts with both of the second
    let cone = 2.0 * 2f64.sqrt();
    assert!((m[0][1].as_f64().unwrap() - cone).abs() < 1e-12);
}

#[test]
fn random_output_is_reproducible_and_valid() {
    let args = [
        "random",
        "--n=9",
        "--count=5",
        "--seed=11",
        "--weighted",
        "--rooted",
    ];
    let (x, y) = (treedist(&args), treedist(&args));
    assert_eq!(x.stdout, y.stdout);
    let f = file("random.nwk", &stdout(&x));
    let v = treedist(&["validate", f.to_str().unwrap()]);
    assert!(v.status.success());
    let report = stdout(&v);
    assert_eq!(report.lines().count(), 5);
    assert!(report
        .lines()
        .all(|l| l.contains("ok, rooted, 9 leaves, binary, weighted")));
}

#[test]
fn consensus_of_a_file() {
    let f = file("cons.nwk", "(((1,2),3),4);\n((1,2),(3,4));\n");
    let o = treedist(&["consensus", f.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "[&R]((1,2),3,4);");
}

#[test]
fn syntax_errors_carry_the_position() {
    let f = file("broken.nwk", "((1,2),3;\n");
    let o = treedist(&["validate", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(
        err.contains("broken.nwk") && err.contains("E_SYNTAX") && err.contains("line 1"),
        "{err}"
    );
}

#[test]
fn thread_cap_does_not_change_output() {
    let text = stdout(&treedist(&[
        "random",
        "--n=7",
        "--count=6",
        "--seed=2",
        "--rooted",
    ]));
    let f = file("threads.nwk", &text);
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_treedist"))
            .env("TREEDIST_THREADS", threads)
            .args(["dist", "--metric=spr", f.to_str().unwrap()])
            .output()
            .unwrap()
    };
    let (one, four) = (run("1"), run("4"));
    assert!(one.status.success());
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn bench_prints_a_row_per_size() {
    let o = treedist(&[
        "bench",
        "--metric=quartet",
        "--sizes=8,16",
        "--repetitions=1",
    ]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 3);
}
