use std::process::{Command, Output};

use tetrapet_cli::render::polygon_count;

fn tetrapet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tetrapet"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn partition_at_zero_is_one_cell() {
    let o = tetrapet(&["partition", "--s", "0", "--format", "json"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 2);
    assert!(out.lines().next().unwrap().contains("\"pieces\":1"));
}

#[test]
fn partition_json_and_svg_agree() {
    for s in ["5/13", "4/13", "1/5", "2/3"] {
        let json = stdout(&tetrapet(&["partition", "--s", s, "--format", "json"]));
        let svg = stdout(&tetrapet(&["partition", "--s", s]));
        let pieces = json
            .lines()
            .filter(|l| l.contains("\"kind\":\"piece\""))
            .count();
        // each piece appears once per panel, plus one outline per panel
        assert_eq!(polygon_count(&svg), 2 * pieces + 2, "s = {s}");
    }
}

#[test]
fn renders_are_byte_identical() {
    let args = ["tiling", "--s", "5/13", "--budget", "300"];
    assert_eq!(tetrapet(&args).stdout, tetrapet(&args).stdout);
    let args = ["partition", "--s", "68/157"];
    assert_eq!(tetrapet(&args).stdout, tetrapet(&args).stdout);
}

#[test]
fn surd_tiling_is_marked_approximate() {
    let o = tetrapet(&[
        "tiling", "--surd", "sqrt2-1", "--depth", "4", "--budget", "200", "--format", "json",
    ]);
    assert!(o.status.success());
    assert!(stdout(&o)
        .lines()
        .next()
        .unwrap()
        .contains("\"approximate\":true"));
}

#[test]
fn renorm_commands() {
    assert_eq!(
        stdout(&tetrapet(&["renorm", "code", "5/23"])).trim(),
        "(2,0,1) (2,1,1) (0,1,-1) (2,1,1)"
    );
    assert_eq!(
        stdout(&tetrapet(&["renorm", "split", "45/178"])).trim(),
        "(0; 2,0,0,1,-2,-21,-2)"
    );
    assert_eq!(
        stdout(&tetrapet(&["renorm", "eval", "2,0,2,1,0,1,-2,-1"])).trim(),
        "5/23"
    );
    assert_eq!(
        stdout(&tetrapet(&["renorm", "split", "sqrt2-1", "--pairs", "3"])).trim(),
        "(0; 2,2,2,2,2,2)..."
    );
}

#[test]
fn domains_count_on_upper_half() {
    let o = tetrapet(&["domains", "--space", "X", "--interval", "1/2:1"]);
    assert!(o.status.success());
    assert_eq!(
        stdout(&o)
            .lines()
            .filter(|l| l.contains("\"kind\":\"domain\""))
            .count(),
        22
    );
}

#[test]
fn exit_codes() {
    assert_eq!(tetrapet(&["verify", "at:4/5"]).status.code(), Some(0));
    assert_eq!(tetrapet(&["verify", "at:1/3"]).status.code(), Some(1));
    assert_eq!(tetrapet(&["verify", "at:3/2"]).status.code(), Some(2));
    assert_eq!(
        tetrapet(&["partition", "--s", "1/0"]).status.code(),
        Some(2)
    );
    assert_eq!(
        tetrapet(&["renorm", "eval", "7,7,7"]).status.code(),
        Some(2)
    );
    assert_eq!(
        tetrapet(&["tiling", "--surd", "sqrt2-1"]).status.code(),
        Some(2)
    );
    assert_eq!(tetrapet(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn output_file_matches_stdout() {
    let dir = std::env::temp_dir().join(format!("tetrapet-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("p.svg");
    let o = tetrapet(&["partition", "--s", "3/7", "--out", path.to_str().unwrap()]);
    assert!(o.status.success() && o.stdout.is_empty());
    assert_eq!(
        std::fs::read(&path).unwrap(),
        tetrapet(&["partition", "--s", "3/7"]).stdout
    );
    std::fs::remove_dir_all(&dir).unwrap();
}
