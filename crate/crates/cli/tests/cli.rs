use assert_cmd::Command;

fn hurwitz() -> Command {
    Command::cargo_bin("hurwitz").unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = hurwitz()
        .args(args)
        .assert()
        .success()
        .get_output()
        .stdout
        .clone();
    String::from_utf8(out).unwrap()
}

fn code(args: &[&str]) -> i32 {
    hurwitz()
        .args(args)
        .assert()
        .get_output()
        .status
        .code()
        .unwrap()
}

#[test]
fn class_number() {
    assert_eq!(stdout(&["class-number", "23"]), "3\n");
    assert_eq!(stdout(&["class-number", "0"]), "-1/12\n");
    assert_eq!(stdout(&["class-number", "12"]), "4/3\n");
    assert_eq!(code(&["class-number", "5"]), 2);
    assert_eq!(code(&["class-number", "-4"]), 2);
}

#[test]
fn relation_records() {
    let v: serde_json::Value = serde_json::from_str(&stdout(&["relation", "1"])).unwrap();
    assert_eq!(v["lhs"], "1");
    assert_eq!(v["rhs"], "1");
    assert_eq!(v["ok"], true);
    let v: serde_json::Value = serde_json::from_str(&stdout(&["relation", "1", "--eq0"])).unwrap();
    assert_eq!(v["lhs"], "7/6");
    let v: serde_json::Value = serde_json::from_str(&stdout(&["relation", "2"])).unwrap();
    assert_eq!(v["rhs"], "4");
    assert_eq!(code(&["relation", "0"]), 2);
}

#[test]
fn coset_table() {
    let out = stdout(&["cosets", "2"]);
    let rows: Vec<Vec<&str>> = out
        .lines()
        .skip(1)
        .map(|l| l.split('\t').collect())
        .collect();
    assert_eq!(rows.len(), 3);
    let sums: Vec<&str> = rows.iter().map(|r| r[4]).collect();
    assert_eq!(sums, ["2", "2", "0"]);
    assert!(rows.iter().all(|r| r[6] == "true"));
    assert_eq!(
        stdout(&["cosets", "1"]).lines().nth(1).unwrap(),
        "1\t1\t0\t1\t7/6\t7/6\ttrue"
    );
    assert_eq!(stdout(&["cosets", "6"]).lines().count(), 13);
}

#[test]
fn locate_labels() {
    let labels: Vec<String> = serde_json::from_str(&stdout(&["locate", "0", "1"])).unwrap();
    let mut sorted = labels.clone();
    sorted.sort();
    assert_eq!(sorted, ["S", "U", "U2"]);
    assert_eq!(stdout(&["locate", "1/3", "3/2"]), "[\"U\"]\n");
    assert_eq!(stdout(&["locate", "-1/2", "2"]), "[\"S\"]\n");
    assert_eq!(code(&["locate", "0", "1/2"]), 2);
    assert_eq!(code(&["locate", "1/0", "2"]), 2);
    assert_eq!(code(&["locate", "0.5", "2"]), 2);
}

#[test]
fn depth_exhaustion_exits_with_3() {
    assert_eq!(code(&["locate", "4947", "5000", "--max-depth", "10"]), 3);
    let env_code = hurwitz()
        .env("HURWITZ_MAX_DEPTH", "10")
        .args(["locate", "4947", "5000"])
        .assert()
        .get_output()
        .status
        .code();
    assert_eq!(env_code, Some(3));
    hurwitz()
        .args(["locate", "4947", "5000"])
        .assert()
        .success();
}

#[test]
fn alpha_sum() {
    for (x, y, sum) in [
        ("0", "1", "1/2"),
        ("1/2", "1", "1/2"),
        ("2/3", "3", "1"),
        ("1/3", "1/2", "0"),
    ] {
        let v: serde_json::Value = serde_json::from_str(&stdout(&["alpha-sum", x, y])).unwrap();
        assert_eq!(v["sum"], sum);
        assert_eq!(v["predicted"], sum);
        assert_eq!(v["ok"], true);
    }
    assert_eq!(code(&["alpha-sum", "0", "0"]), 2);
    assert_eq!(code(&["alpha-sum", "0", "-1"]), 2);
}

#[test]
fn figure() {
    let svg = stdout(&["figure"]);
    assert!(svg.contains("<svg") && svg.contains(r#"data-word="U·S""#));
    let strips = stdout(&["figure", "--depth", "0", "--viewport=-4,5,0,6"]);
    assert_eq!(strips.matches("<path").count(), 1);
    assert_eq!(code(&["figure", "--viewport", "1,1,0,1"]), 2);
    assert_eq!(code(&["figure", "--viewport", "1,2,3"]), 2);

    let dir = std::env::temp_dir().join(format!("hurwitz-figure-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("f.svg");
    hurwitz()
        .args(["figure", "--out", path.to_str().unwrap()])
        .assert()
        .success();
    assert_eq!(std::fs::read_to_string(&path).unwrap(), svg);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn verify_is_deterministic() {
    let args = [
        "verify",
        "--suite",
        "all",
        "--n-max",
        "20",
        "--samples",
        "40",
        "--seed",
        "9",
        "--stable",
    ];
    let a = stdout(&args);
    assert_eq!(a, stdout(&args));
    let reports: Vec<serde_json::Value> = serde_json::from_str(&a).unwrap();
    assert_eq!(reports.len(), 6);
    assert!(reports
        .iter()
        .all(|r| r["failures"].as_array().unwrap().is_empty()));
    assert!(reports.iter().all(|r| r.get("wall_time_ms").is_none()));
    assert_eq!(code(&["verify", "--suite", "nope"]), 2);
}

#[test]
fn verify_thm1_default_range() {
    let reports: Vec<serde_json::Value> =
        serde_json::from_str(&stdout(&["verify", "--suite", "thm1", "--n-max", "500"])).unwrap();
    assert_eq!(reports[0]["cases"], 500);
    assert!(reports[0]["wall_time_ms"].is_u64());
}
