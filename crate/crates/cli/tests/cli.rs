//! End-to-end CLI tests: the documented command surface, exit codes, cache
//! round trips, and JSON schema conformance.

use assert_cmd::Command;
use predicates::prelude::*;
use serde_json::Value;

fn gtab(cache: &tempfile::TempDir) -> Command {
    let mut cmd = Command::cargo_bin("gtab").unwrap();
    cmd.env("GLOBAL_TABLES_CACHE", cache.path());
    cmd
}

// ------------------------------------------------------------ mini validator

/// Minimal JSON Schema checker covering the subset the shipped schemas use:
/// `type` (including union types), `required`, `properties`, `items`.
fn validate(schema: &Value, value: &Value) -> Result<(), String> {
    if let Some(ty) = schema.get("type") {
        let allowed: Vec<&str> = match ty {
            Value::String(s) => vec![s.as_str()],
            Value::Array(a) => a.iter().filter_map(|v| v.as_str()).collect(),
            _ => return Err("bad schema type".into()),
        };
        let actual = match value {
            Value::Null => "null",
            Value::Bool(_) => "boolean",
            Value::Number(n) if n.is_i64() || n.is_u64() => "integer",
            Value::Number(_) => "number",
            Value::String(_) => "string",
            Value::Array(_) => "array",
            Value::Object(_) => "object",
        };
        let ok = allowed.iter().any(|a| {
            *a == actual || (*a == "number" && actual == "integer")
        });
        if !ok {
            return Err(format!("expected type {:?}, got {}", allowed, actual));
        }
    }
    if let (Some(req), Value::Object(map)) = (schema.get("required"), value) {
        for key in req.as_array().unwrap() {
            let key = key.as_str().unwrap();
            if !map.contains_key(key) {
                return Err(format!("missing required key '{}'", key));
            }
        }
    }
    if let (Some(props), Value::Object(map)) = (schema.get("properties"), value) {
        for (key, sub) in props.as_object().unwrap() {
            if let Some(v) = map.get(key) {
                validate(sub, v).map_err(|e| format!("{}: {}", key, e))?;
            }
        }
    }
    if let (Some(items), Value::Array(arr)) = (schema.get("items"), value) {
        for (i, v) in arr.iter().enumerate() {
            validate(items, v).map_err(|e| format!("[{}]: {}", i, e))?;
        }
    }
    Ok(())
}

fn assert_schema(name: &str, output: &[u8]) {
    let schema_path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../schemas/");
    let schema: Value = serde_json::from_str(
        &std::fs::read_to_string(format!("{}{}.schema.json", schema_path, name)).unwrap(),
    )
    .unwrap();
    let value: Value = serde_json::from_slice(output).unwrap();
    validate(&schema, &value).unwrap_or_else(|e| panic!("{} schema: {}", name, e));
}

// ------------------------------------------------------------ tables

#[test]
fn marks_c1_is_the_one_by_one_table() {
    let cache = tempfile::tempdir().unwrap();
    gtab(&cache)
        .args(["marks", "C1", "--format", "csv"])
        .assert()
        .success()
        .stdout("1a\n1\n");
}

#[test]
fn chartab_s3_csv_is_the_reference_table() {
    let cache = tempfile::tempdir().unwrap();
    gtab(&cache)
        .args(["chartab", "S3", "--format", "csv"])
        .assert()
        .success()
        .stdout("row,1a,2a,3a\nchi0,1,1,1\nchi1,1,-1,1\nchi2,2,0,-1\n");
}

#[test]
fn globaltab_d8_center_is_sixteen_by_sixteen() {
    let cache = tempfile::tempdir().unwrap();
    let out = gtab(&cache)
        .args(["globaltab", "D8", "--normal", "r^2", "--format", "json"])
        .assert()
        .success()
        .get_output()
        .stdout
        .clone();
    assert_schema("globaltab", &out);
    let v: Value = serde_json::from_slice(&out).unwrap();
    assert_eq!(v["row_names"].as_array().unwrap().len(), 16);
    assert_eq!(v["col_names"].as_array().unwrap().len(), 16);
}

#[test]
fn globaltab_accepts_keyword_normal_specs() {
    let cache = tempfile::tempdir().unwrap();
    for spec in ["center", "derived", "trivial"] {
        gtab(&cache)
            .args(["globaltab", "D8", "--normal", spec])
            .assert()
            .success();
    }
}

#[test]
fn json_outputs_validate_against_schemas() {
    let cache = tempfile::tempdir().unwrap();
    let cases: &[(&str, &[&str])] = &[
        ("marks", &["marks", "D8"]),
        ("chartab", &["chartab", "D8"]),
        ("globaltab", &["globaltab", "S3"]),
        ("knutson", &["knutson", "char", "S3"]),
        ("split-report", &["split-check", "S3", "--normal", "(1,2,3)"]),
        ("verify", &["verify-all", "--max-order", "4"]),
        ("twins", &["twins", "builtin", "--invariant", "marks", "--max-scan-order", "8"]),
    ];
    for (schema, args) in cases {
        let mut full = args.to_vec();
        full.extend(["--format", "json"]);
        let out = gtab(&cache).args(&full).assert().success().get_output().stdout.clone();
        assert_schema(schema, &out);
    }
}

// ------------------------------------------------------------ knutson

#[test]
fn knutson_char_c2_rows_are_one() {
    let cache = tempfile::tempdir().unwrap();
    gtab(&cache)
        .args(["knutson", "char", "C2", "--all-rows"])
        .assert()
        .success()
        .stdout("chi0: 1\nchi1: 1\nlcm: 1\n");
}

#[test]
fn knutson_burnside_q8_center_subindex_is_four() {
    let cache = tempfile::tempdir().unwrap();
    gtab(&cache)
        .args(["knutson", "burnside", "Q8", "--element", "G/Z", "--subindex", "rows"])
        .assert()
        .success()
        .stdout("G/Z: 4\n");
}

#[test]
fn knutson_char_sl25_lcm_is_above_one() {
    let cache = tempfile::tempdir().unwrap();
    gtab(&cache)
        .args(["knutson", "char", "SL(2,5)", "--all-rows"])
        .assert()
        .success()
        .stdout(predicate::str::contains("lcm: 2"));
}

#[test]
fn knutson_witness_multiplies_out() {
    let cache = tempfile::tempdir().unwrap();
    gtab(&cache)
        .args(["knutson", "char", "S3", "--element", "0,0,1", "--witness"])
        .assert()
        .success()
        .stdout(predicate::str::contains("witness"));
}

#[test]
fn zero_dimensional_element_is_an_input_error() {
    let cache = tempfile::tempdir().unwrap();
    gtab(&cache)
        .args(["knutson", "char", "C4", "--element", "1,-1,0,0"])
        .assert()
        .code(2)
        .stderr(predicate::str::contains("zero-dimensional"));
}

// ------------------------------------------------------------ split-check

#[test]
fn split_check_sg48_33_reports_the_counterexample() {
    let cache = tempfile::tempdir().unwrap();
    let out = gtab(&cache)
        .args(["split-check", "SmallGroup-48-33", "--normal", "Q8", "--format", "json"])
        .assert()
        .success()
        .get_output()
        .stdout
        .clone();
    assert_schema("split-report", &out);
    let v: Value = serde_json::from_slice(&out).unwrap();
    assert_eq!(v["subindex"], "1");
    assert_eq!(v["extension_split"], false);
    assert_eq!(v["theorem_consistent"], true);
    assert_eq!(v["shemetkov_holds"], true);
}

#[test]
fn non_normal_spec_is_an_input_error() {
    let cache = tempfile::tempdir().unwrap();
    gtab(&cache)
        .args(["split-check", "S3", "--normal", "(1,2)"])
        .assert()
        .code(2)
        .stderr(predicate::str::contains("not normal"));
}

#[test]
fn unknown_group_is_an_input_error() {
    let cache = tempfile::tempdir().unwrap();
    gtab(&cache)
        .args(["marks", "NoSuchGroup"])
        .assert()
        .code(2);
}

// ------------------------------------------------------------ verify / twins

#[test]
fn verify_all_small_orders_passes() {
    let cache = tempfile::tempdir().unwrap();
    gtab(&cache)
        .args(["verify-all", "--max-order", "8", "--jobs", "2"])
        .assert()
        .success()
        .stdout(predicate::str::contains("D8 (order 8): PASS"));
}

#[test]
fn twins_finds_d8_q8_in_a_grp_directory() {
    let cache = tempfile::tempdir().unwrap();
    let dir = tempfile::tempdir().unwrap();
    for name in ["C8", "D8", "Q8", "C2xC4"] {
        let g = gtab_core::named::named_group(name).unwrap();
        let mut text = format!("degree {}\n", g.degree());
        for gen in g.generators() {
            text.push_str(&format!("gen {}\n", gen.cycle_string()));
        }
        text.push_str(&format!("name {}\nexpect-order {}\n", name, g.order_u64()));
        std::fs::write(dir.path().join(format!("{}.grp", name)), text).unwrap();
    }
    let out = gtab(&cache)
        .args(["twins", dir.path().to_str().unwrap(), "--invariant", "char", "--format", "json"])
        .assert()
        .success()
        .get_output()
        .stdout
        .clone();
    assert_schema("twins", &out);
    let v: Value = serde_json::from_slice(&out).unwrap();
    let classes = v["classes"].as_array().unwrap();
    let d8q8 = classes
        .iter()
        .find(|c| {
            let members: Vec<&str> = c["members"]
                .as_array()
                .unwrap()
                .iter()
                .map(|m| m.as_str().unwrap())
                .collect();
            members.contains(&"D8") && members.contains(&"Q8")
        })
        .expect("D8/Q8 twin class");
    assert_eq!(d8q8["same_table_of_marks"], false);
    assert_eq!(d8q8["same_global_table"], false);
}

// ------------------------------------------------------------ cache & config

#[test]
fn cache_round_trip_is_bit_identical() {
    let cache = tempfile::tempdir().unwrap();
    let first = gtab(&cache)
        .args(["chartab", "D8", "--format", "json"])
        .assert()
        .success()
        .get_output()
        .stdout
        .clone();
    let files: Vec<_> = std::fs::read_dir(cache.path()).unwrap().collect();
    assert_eq!(files.len(), 1, "one cache entry written");
    let second = gtab(&cache)
        .args(["chartab", "D8", "--format", "json"])
        .assert()
        .success()
        .get_output()
        .stdout
        .clone();
    assert_eq!(first, second);
}

#[test]
fn corrupted_cache_is_an_internal_error() {
    let cache = tempfile::tempdir().unwrap();
    gtab(&cache).args(["chartab", "D8"]).assert().success();
    let entry = std::fs::read_dir(cache.path())
        .unwrap()
        .next()
        .unwrap()
        .unwrap()
        .path();
    std::fs::write(&entry, "{}").unwrap();
    gtab(&cache).args(["chartab", "D8"]).assert().code(4);
}

#[test]
fn no_cache_skips_the_cache() {
    let cache = tempfile::tempdir().unwrap();
    gtab(&cache)
        .args(["chartab", "D8", "--no-cache"])
        .assert()
        .success();
    assert_eq!(std::fs::read_dir(cache.path()).unwrap().count(), 0);
}

#[test]
fn config_file_sets_cache_dir_and_flags_override() {
    let cfg_cache = tempfile::tempdir().unwrap();
    let cfgfile = tempfile::NamedTempFile::new().unwrap();
    std::fs::write(
        cfgfile.path(),
        format!("# caps\ncache-dir = {}\njobs = 1\n", cfg_cache.path().display()),
    )
    .unwrap();
    let mut cmd = Command::cargo_bin("gtab").unwrap();
    cmd.env_remove("GLOBAL_TABLES_CACHE");
    cmd.args(["chartab", "S3", "--config"])
        .arg(cfgfile.path())
        .assert()
        .success();
    assert_eq!(std::fs::read_dir(cfg_cache.path()).unwrap().count(), 1);
}

#[test]
fn bad_config_is_an_input_error() {
    let cfgfile = tempfile::NamedTempFile::new().unwrap();
    std::fs::write(cfgfile.path(), "nonsense-key = 1\n").unwrap();
    let mut cmd = Command::cargo_bin("gtab").unwrap();
    cmd.args(["chartab", "S3", "--config"])
        .arg(cfgfile.path())
        .assert()
        .code(2);
}
