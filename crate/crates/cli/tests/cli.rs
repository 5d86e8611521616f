use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn bhd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bhd"))
        .args(args)
        .env_remove("BHD_SIC_DATA")
        .output()
        .expect("failed to run bhd")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("terminated by signal")
}

fn path(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_string_lossy().into_owned()
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p = path(dir, name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn gen_prints_parameters() {
    let dir = TempDir::new().unwrap();
    let out = path(&dir, "s.txt");
    let o = bhd(&["sidon", "gen", "--family", "singer", "--q", "2", "-o", &out]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "(7, 3)");
    assert!(std::fs::read_to_string(&out)
        .unwrap()
        .starts_with("group: 7; family: singer; q: 2; removed: 0"));

    let o = bhd(&["sidon", "gen", "--family", "hughes", "--q", "5", "--remove", "1", "-o", &out]);
    assert_eq!(stdout(&o).trim(), "(16, 2)");
}

#[test]
fn gen_rejects_invalid_input() {
    let o = bhd(&["sidon", "gen", "--family", "erdos-turan", "--q", "2"]);
    assert_eq!(code(&o), 2);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("char(q)>2 required"), "{err}");
    assert_eq!(code(&bhd(&["sidon", "gen", "--family", "bose", "--q", "12"])), 2);
    assert_eq!(code(&bhd(&["sidon", "gen", "--family", "nope", "--q", "3"])), 2);
    assert_eq!(code(&bhd(&["sidon", "gen", "--family", "hughes", "--q", "5", "--remove", "9"])), 2);
    // GF(64^3) exceeds a small field cap.
    assert_eq!(
        code(&bhd(&["sidon", "gen", "--family", "singer", "--q", "64", "--field-cap", "4096"])),
        3
    );
}

#[test]
fn verify_sidon_files() {
    let dir = TempDir::new().unwrap();
    let good = write(&dir, "good.txt", "group: 7; family: custom; q: none; removed: 0\n1\n2\n4\n");
    let o = bhd(&["sidon", "verify", "-i", &good]);
    assert_eq!((code(&o), stdout(&o).trim().to_string()), (0, "SIDON".to_string()));

    let bad = write(&dir, "bad.txt", "group: 9; family: custom; q: none; removed: 0\n0\n1\n2\n");
    let o = bhd(&["sidon", "verify", "-i", &bad]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).starts_with("NOT SIDON: "), "{}", stdout(&o));

    let empty = write(&dir, "empty.txt", "group: 5; family: custom; q: none; removed: 0\n");
    assert_eq!(code(&bhd(&["sidon", "verify", "-i", &empty])), 0);

    let junk = write(&dir, "junk.txt", "hello\n");
    assert_eq!(code(&bhd(&["sidon", "verify", "-i", &junk])), 2);
}

fn gen_build(dir: &TempDir, family: &str, q: &str) -> String {
    let set = path(dir, &format!("{family}{q}.sidon"));
    let design = path(dir, &format!("{family}{q}.design"));
    assert_eq!(code(&bhd(&["sidon", "gen", "--family", family, "--q", q, "-o", &set])), 0);
    assert_eq!(code(&bhd(&["sidon", "verify", "-i", &set])), 0);
    assert_eq!(code(&bhd(&["design", "build", "-i", &set, "-o", &design])), 0);
    design
}

#[test]
fn round_trip_every_family() {
    let dir = TempDir::new().unwrap();
    for (family, q) in [("erdos-turan", "3"), ("singer", "2"), ("bose", "2"), ("spence", "2"), ("hughes", "3")] {
        let design = gen_build(&dir, family, q);
        let o = bhd(&["design", "verify", "-i", &design, "--method", "both"]);
        assert_eq!(code(&o), 0, "{family}: {}", stdout(&o));
        assert_eq!(stdout(&o).matches("CERTIFIED").count(), 2);
    }
}

#[test]
fn corrupted_design_is_rejected() {
    let dir = TempDir::new().unwrap();
    let design = gen_build(&dir, "singer", "2");
    let text = std::fs::read_to_string(&design).unwrap();
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    let (_, rest) = lines[1].split_once(';').unwrap();
    lines[1] = format!("0.0;{rest}");
    let corrupted = write(&dir, "bad.design", &(lines.join("\n") + "\n"));
    for method in ["direct", "potential", "both"] {
        let o = bhd(&["design", "verify", "-i", &corrupted, "--method", method]);
        assert_eq!(code(&o), 1, "{method}: {}", stdout(&o));
    }
}

#[test]
fn one_dimensional_design() {
    let dir = TempDir::new().unwrap();
    let set = write(&dir, "one.sidon", "group: 1; family: custom; q: none; removed: 0\n0\n");
    let design = path(&dir, "one.design");
    assert_eq!(code(&bhd(&["design", "build", "-i", &set, "-o", &design])), 0);
    assert_eq!(code(&bhd(&["design", "verify", "-i", &design])), 0);
}

#[test]
fn direct_method_respects_dense_cap() {
    let dir = TempDir::new().unwrap();
    let design = gen_build(&dir, "singer", "2");
    let o = bhd(&["design", "verify", "-i", &design, "--method", "direct", "--dense-cap", "2"]);
    assert_eq!(code(&o), 3);
    let o = bhd(&["design", "verify", "-i", &design, "--method", "potential", "--dense-cap", "2"]);
    assert_eq!(code(&o), 0);
}

#[test]
fn bounds_commands() {
    let o = bhd(&["bounds", "mdim", "--d", "3"]);
    assert_eq!(stdout(&o).trim(), "7 via Singer(2)");
    let o = bhd(&["bounds", "mdim", "--d", "3", "--exact"]);
    assert_eq!(stdout(&o).trim(), "7 (exact)");
    assert_eq!(code(&bhd(&["bounds", "mdim", "--d", "9", "--exact"])), 3);

    let o = bhd(&["bounds", "table", "--dmax", "20", "--format", "csv"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    let data_rows = out
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .count();
    assert_eq!(data_rows, 19);

    let o = bhd(&["bounds", "asymptotic", "--dmax", "200"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("violations: []"));
}

#[test]
fn custom_sic_data() {
    let dir = TempDir::new().unwrap();
    let data = write(&dir, "sic.txt", "# minimal\n23\n52\n67\n103\n");
    let o = bhd(&["bounds", "table", "--dmax", "5", "--format", "md", "--sic-data", &data]);
    assert_eq!(code(&o), 0);
    // Without d = 3 in the data, row 3 falls back to a tie at d² + 1.
    assert!(stdout(&o).contains("| 3 | 9 | **10** | c | **10** | Singer(2) |"), "{}", stdout(&o));
    assert!(!stdout(&o).contains("| **9** |"));

    let missing = write(&dir, "bad.txt", "2\n3\n");
    assert_eq!(
        code(&bhd(&["bounds", "table", "--sic-data", &missing])),
        2
    );
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let dir = TempDir::new().unwrap();
    let a = gen_build(&dir, "hughes", "7");
    let first = std::fs::read(&a).unwrap();
    let b = gen_build(&dir, "hughes", "7");
    assert_eq!(first, std::fs::read(&b).unwrap());

    let run = |threads: &str| {
        stdout(&bhd(&["--threads", threads, "design", "verify", "-i", &a, "--method", "potential"]))
    };
    assert_eq!(run("1"), run("4"));

    let t1 = stdout(&bhd(&["bounds", "table", "--dmax", "60", "--format", "csv"]));
    let t2 = stdout(&bhd(&["bounds", "table", "--dmax", "60", "--format", "csv"]));
    assert_eq!(t1, t2);
    assert!(Path::new(&a).exists());
}

#[test]
fn literal_trace_zero_bose_is_not_sidon() {
    let dir = TempDir::new().unwrap();
    let set = path(&dir, "lit.sidon");
    let o = bhd(&["sidon", "gen", "--family", "bose", "--q", "4", "--literal-paper", "-o", &set]);
    assert_eq!(stdout(&o).trim(), "(15, 3)");
    assert_eq!(code(&bhd(&["sidon", "verify", "-i", &set])), 1);
    let design = path(&dir, "lit.design");
    assert_eq!(code(&bhd(&["design", "build", "-i", &set, "-o", &design])), 0);
    assert_eq!(code(&bhd(&["design", "verify", "-i", &design])), 1);
}

#[test]
fn verbose_version_lists_defaults() {
    let o = bhd(&["--version", "--verbose"]);
    let out = stdout(&o);
    assert!(out.starts_with("bhd "));
    for key in ["field cap", "dense cap", "direct tolerance", "potential tolerance", "sic data sha256"] {
        assert!(out.contains(key), "{key}");
    }
}
