use std::path::Path;
use std::process::{Command, Output};

use kloos::cache::{census_path, read_census, read_kloosterman, write_census, write_kloosterman};
use kloos_core::expsum::kloosterman_table;
use kloos_core::ogroup::{enumerate_so_plus_4, GroupKind};
use kloos_core::FieldCtx;
use serde_json::Value;

fn kloos(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kloos")).args(args).env_remove("KLOOS_CACHE_DIR").output().unwrap()
}

fn kloos_cached(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kloos")).args(args).env("KLOOS_CACHE_DIR", dir).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let o = kloos(&full);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

fn row_value(v: &Value, index: usize) -> &Value {
    &v["results"]["rows"][index][1]
}

#[test]
fn tables_match_reference_values() {
    let i = kloos(&["tables", "--which", "I"]);
    assert!(i.status.success());
    let text = stdout(&i);
    assert_eq!(text.lines().count(), 17);
    assert_eq!(text.lines().last(), Some("15\t1"));
    assert_eq!(row_value(&json(&["tables", "--which", "IV"]), 9), 613044481);
    assert_eq!(row_value(&json(&["tables", "--which", "II"]), 0), 15);
    assert!(kloos(&["tables", "--format", "md"]).status.success());
}

#[test]
fn every_subcommand_has_the_json_schema() {
    let runs: &[&[&str]] = &[
        &["field", "--r", "4"],
        &["ksum", "--r", "4"],
        &["ksum", "--r", "4", "--a", "0x3", "--m", "2"],
        &["ksum", "--r", "3", "--a", "1", "--gl", "3"],
        &["ksum", "--r", "5", "--value-set"],
        &["group", "--r", "2", "--which", "so4", "--histogram", "--gauss", "1"],
        &["code", "--r", "3", "--which", "2", "--method", "macwilliams"],
        &["moments", "--r", "3", "--variant", "b", "--hmax", "6"],
        &["verify", "--r", "1"],
        &["tables"],
    ];
    for args in runs {
        let v = json(args);
        let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
        assert_eq!(keys, ["field", "parameters", "provenance", "results"], "{args:?}");
    }
}

#[test]
fn reported_values() {
    let f = json(&["field", "--r", "4"]);
    assert_eq!(f["results"]["trace_zero_count"], 8);
    assert_eq!(f["field"]["modulus"], "0x13");
    let g = json(&["group", "--r", "2", "--which", "so4", "--gauss", "1"]);
    assert_eq!(g["results"]["order"], 3600);
    assert_eq!(g["results"]["gauss_enumerated"], 1104);
    assert_eq!(g["results"]["gauss_formula"], 1104);
    let m = json(&["moments", "--r", "5", "--variant", "a", "--hmax", "5"]);
    assert_eq!(row_value(&m, 3), -959);
    assert_eq!(row_value(&m, 5), -63359);
    let k = json(&["ksum", "--r", "2", "--a", "1"]);
    assert_eq!(k["results"]["value"], 3);
}

#[test]
fn verify_routes_by_r() {
    let o = kloos(&["verify", "--r", "2"]);
    assert!(o.status.success(), "{}", stdout(&o));
    let text = stdout(&o);
    assert!(text.contains("recursion a\tSKIPPED"));
    assert!(text.contains("recursion c2\tPASS"));
    assert!(text.contains("# failed\t0"));
}

#[test]
fn verify_with_explicit_default_modulus() {
    let o = kloos(&["verify", "--r", "4", "--modulus", "0x13"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).contains("modulus independence\tPASS\t0x13 and 0x1f agree"));
}

#[test]
fn output_is_independent_of_thread_count() {
    let one = kloos(&["verify", "--r", "3", "--format", "json", "--threads", "1"]);
    let two = kloos(&["verify", "--r", "3", "--format", "json", "--threads", "2"]);
    assert!(one.status.success());
    assert_eq!(one.stdout, two.stdout);
    let a = kloos(&["ksum", "--r", "9", "--table", "--threads", "1"]);
    let b = kloos(&["ksum", "--r", "9", "--table", "--threads", "3"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn exit_codes() {
    assert_eq!(kloos(&["field", "--r", "17"]).status.code(), Some(2));
    assert_eq!(kloos(&["field", "--r", "4", "--modulus", "0x15"]).status.code(), Some(2));
    assert_eq!(kloos(&["moments", "--r", "2", "--variant", "a"]).status.code(), Some(2));
    assert_eq!(kloos(&["group", "--r", "5", "--which", "so4"]).status.code(), Some(3));
    assert_eq!(kloos(&["verify", "--r", "6"]).status.code(), Some(2));
}

#[test]
fn output_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.md");
    let o = kloos(&["tables", "--which", "III", "--format", "md", "--output", path.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(path).unwrap();
    assert!(text.contains("| 15 | 9392163 |"));
}

#[test]
fn census_export_is_sorted_hex() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("so4.hex");
    let o = kloos(&["group", "--r", "2", "--which", "so4", "--export", path.to_str().unwrap()]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3600);
    assert!(lines.iter().all(|l| l.len() == 16));
    assert!(lines.windows(2).all(|w| w[0] < w[1]));
    assert!(lines.contains(&"1000010000100001"));
}

#[test]
fn cache_files_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let ctx = FieldCtx::new(3).unwrap();
    let table = kloosterman_table(&ctx);
    let kpath = dir.path().join("k.bin");
    write_kloosterman(&kpath, &ctx, &table).unwrap();
    assert_eq!(read_kloosterman(&kpath, &ctx).unwrap().unwrap().values(), table.values());
    let other = FieldCtx::with_modulus(3, 0xd).unwrap();
    assert!(read_kloosterman(&kpath, &other).is_err());

    let census = enumerate_so_plus_4(&ctx, true).unwrap();
    let cpath = census_path(dir.path(), &ctx, GroupKind::So4);
    write_census(&cpath, &ctx, &census).unwrap();
    let back = read_census(&cpath, &ctx, GroupKind::So4).unwrap().unwrap();
    assert_eq!(back, census);
    assert!(read_census(&dir.path().join("absent.bin"), &ctx, GroupKind::So4).unwrap().is_none());
}

#[test]
fn cli_uses_cache_directory() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["group", "--r", "2", "--which", "so4", "--histogram"];
    let first = kloos_cached(dir.path(), &args);
    assert!(first.status.success());
    let ctx = FieldCtx::new(2).unwrap();
    let cpath = census_path(dir.path(), &ctx, GroupKind::So4);
    assert!(cpath.exists());
    let second = kloos_cached(dir.path(), &args);
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(first.stdout, kloos(&args).stdout);

    let mut bytes = std::fs::read(&cpath).unwrap();
    bytes[0] = b'X';
    std::fs::write(&cpath, bytes).unwrap();
    assert_eq!(kloos_cached(dir.path(), &args).status.code(), Some(1));
}
