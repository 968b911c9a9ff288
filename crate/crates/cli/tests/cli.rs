use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn excov(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_excov")).args(args).env_remove("EXCOV_CAP").output().expect("spawn excov")
}

fn json_of(args: &[&str]) -> Value {
    let out = excov(args);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn schema(name: &str) -> Value {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "schemas", &format!("{name}.schema.json")].iter().collect();
    serde_json::from_str(&std::fs::read_to_string(&path).expect("schema file")).expect("schema JSON")
}

fn type_matches(ty: &str, v: &Value) -> bool {
    match ty {
        "object" => v.is_object(),
        "array" => v.is_array(),
        "string" => v.is_string(),
        "boolean" => v.is_boolean(),
        "integer" => v.is_i64() || v.is_u64(),
        "number" => v.is_number(),
        "null" => v.is_null(),
        other => panic!("unknown schema type {other}"),
    }
}

/// Enough of JSON Schema for our files: type, enum, required, properties, items.
fn validate(schema: &Value, v: &Value, path: &str) -> Result<(), String> {
    match schema.get("type") {
        Some(Value::String(t)) if !type_matches(t, v) => return Err(format!("{path}: expected {t}, got {v}")),
        Some(Value::Array(ts)) if !ts.iter().any(|t| type_matches(t.as_str().unwrap(), v)) => {
            return Err(format!("{path}: expected one of {ts:?}, got {v}"))
        }
        _ => {}
    }
    if let Some(Value::Array(allowed)) = schema.get("enum") {
        if !allowed.contains(v) {
            return Err(format!("{path}: {v} not in enum"));
        }
    }
    if let Some(obj) = v.as_object() {
        for key in schema.get("required").and_then(Value::as_array).into_iter().flatten() {
            let key = key.as_str().unwrap();
            if !obj.contains_key(key) {
                return Err(format!("{path}: missing {key}"));
            }
        }
        if let Some(Value::Object(props)) = schema.get("properties") {
            for (k, sub) in props {
                if let Some(x) = obj.get(k) {
                    validate(sub, x, &format!("{path}.{k}"))?;
                }
            }
        }
    }
    if let (Some(items), Some(arr)) = (schema.get("items"), v.as_array()) {
        for (i, x) in arr.iter().enumerate() {
            validate(items, x, &format!("{path}[{i}]"))?;
        }
    }
    Ok(())
}

#[test]
fn validator_rejects_bad_documents() {
    let s = schema("frobset");
    assert!(validate(&s, &serde_json::json!({"modulus": 2, "residues": [1]}), "$").is_ok());
    assert!(validate(&s, &serde_json::json!({"modulus": 2}), "$").is_err());
    assert!(validate(&s, &serde_json::json!({"modulus": "2", "residues": []}), "$").is_err());
    assert!(validate(&s, &serde_json::json!({"modulus": 2, "residues": [true]}), "$").is_err());
}

const CASES: &[(&str, &[&str])] = &[
    ("field", &["field", "--field", "3^2", "--elements"]),
    ("field", &["field", "--field", "7^5"]),
    ("map", &["map", "--field", "5", "--map", "dickson:6,2", "--t", "2", "--decompose"]),
    ("map", &["map", "--field", "7", "--map", "rat:1,0,1/0,1"]),
    ("scan", &["scan", "--field", "3^1", "--map", "dickson:5,1", "--tmax", "12"]),
    ("scan", &["scan", "--field", "2^2", "--map", "cyclic:3", "--tmax", "6", "--sequential"]),
    ("frobset", &["frobset", "--mod", "12", "--residues", "2"]),
    ("frobset", &["frobset", "--samples", "1,0,1,0,1,0,1,0"]),
    ("dp", &["dp", "--field", "5", "--f", "poly:0,0,1", "--g", "poly:0,0,2", "--tmax", "3"]),
    ("group", &["group", "--gen", "(1 2 3 4 5)", "--gen", "(2 5)(3 4)", "--tau", "(2 3 5 4)"]),
    ("group", &["group", "--gen", "(1 2 3)", "--gen", "(1 2)"]),
    ("nielsen-dickson", &["nielsen", "dickson", "--n", "7"]),
    ("nielsen-tower", &["nielsen", "tower", "--n", "3", "--labels", "1,2"]),
    ("nielsen-modular", &["nielsen", "modular", "--p", "5"]),
    ("nielsen-tuple", &["nielsen", "tuple", "--perm", "(1 2 3)", "--perm", "(1 3 2)", "--orbit"]),
    ("nielsen-diffsets", &["nielsen", "diffsets", "--n", "13", "--k", "4"]),
    ("oit", &["oit", "--curve", "ogg", "--p", "5", "--lmax", "60", "--tmax", "2", "--json"]),
    ("oit", &["oit", "--curve", "[0,0,0,-1,0]", "--p", "5", "--lmax", "30", "--median", "2"]),
    ("pencil", &["pencil", "--p", "31", "--f", "poly:0,0,0,1"]),
    ("pencil", &["pencil", "--p", "11", "--f", "poly:0,0,0,0,0,1", "--model", "cyclic:5"]),
    ("selftest", &["selftest", "--only", "8,9"]),
];

#[test]
fn outputs_match_schemas() {
    for (name, args) in CASES {
        let v = json_of(args);
        if let Err(e) = validate(&schema(name), &v, "$") {
            panic!("{args:?}: {e}");
        }
    }
}

#[test]
fn output_is_byte_identical_across_runs() {
    for (_, args) in CASES {
        let (a, b) = (excov(args), excov(args));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
    let seq = excov(&["--sequential", "scan", "--field", "5", "--map", "dickson:7,1", "--tmax", "6"]);
    let par = excov(&["scan", "--field", "5", "--map", "dickson:7,1", "--tmax", "6"]);
    assert_eq!(seq.stdout, par.stdout);
}

#[test]
fn documented_examples() {
    assert_eq!(json_of(&["frobset", "--mod", "12", "--residues", "2"]), serde_json::json!({"modulus": 12, "residues": [2, 10]}));

    let scan = json_of(&["scan", "--field", "3^1", "--map", "dickson:5,1", "--tmax", "12"]);
    assert_eq!(scan["fitted"], serde_json::json!({"modulus": 2, "residues": [1]}));
    let bij: Vec<bool> = scan["records"].as_array().unwrap().iter().map(|r| r["bijective"].as_bool().unwrap()).collect();
    assert_eq!(bij, (1..=12).map(|t| t % 2 == 1).collect::<Vec<_>>());

    let oit = json_of(&["oit", "--curve", "ogg", "--p", "5", "--lmax", "60", "--tmax", "2", "--json"]);
    assert_eq!(oit["mismatches"], 0);
    assert_eq!(oit["curve"]["j"], "2048/3");
    let bad: Vec<u64> = oit["entries"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|e| e["t"] == 1 && e["bijective"] == false)
        .map(|e| e["l"].as_u64().unwrap())
        .collect();
    assert_eq!(bad, [17, 31, 43]);

    let pencil = json_of(&["pencil", "--p", "31", "--f", "poly:0,0,0,1"]);
    // x³ over F_31: each nonzero cube has three cube roots
    assert_eq!(pencil["n_f"], 60);
    assert_eq!(pencil["w"], 31 * 60);
    assert_eq!(pencil["identity_ok"], true);

    let tower = json_of(&["nielsen", "tower", "--n", "3", "--labels", "1,2"]);
    assert_eq!((tower["degree"].as_u64(), tower["genus"].as_i64()), (Some(9), Some(1)));
}

#[test]
fn tsv_tables() {
    let out = excov(&["--tsv", "dp", "--field", "5", "--f", "poly:0,0,1", "--g", "poly:0,0,2", "--tmax", "2"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines.contains(&"dp\tidp\tt"), "{text}");
    assert_eq!(lines.iter().filter(|l| l.split('\t').count() == 3 && !l.starts_with("dp")).count(), 2);
}

fn error_of(args: &[&str], env_cap: Option<&str>) -> (i32, Value) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_excov"));
    cmd.args(args).env_remove("EXCOV_CAP");
    if let Some(c) = env_cap {
        cmd.env("EXCOV_CAP", c);
    }
    let out = cmd.output().unwrap();
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_slice(&out.stderr).expect("stderr is JSON");
    validate(&schema("error"), &v, "$").unwrap();
    (out.status.code().unwrap(), v)
}

#[test]
fn exit_codes() {
    let (code, v) = error_of(&["field", "--field", "6"], None);
    assert_eq!((code, v["error"]["kind"].as_str()), (2, Some("invalid")));

    let (code, v) = error_of(&["map", "--field", "5", "--map", "poly:1,x"], None);
    assert_eq!((code, v["error"]["kind"].as_str()), (2, Some("parse")));
    assert_eq!((v["error"]["line"].as_u64(), v["error"]["col"].as_u64()), (Some(1), Some(8)));

    let (code, _) = error_of(&["field", "--field", "3^30"], None);
    assert_eq!(code, 3);
    let (code, _) = error_of(&["field", "--field", "3^3"], Some("10"));
    assert_eq!(code, 3);
    // the flag wins over the environment
    assert!(excov(&["--cap", "100", "field", "--field", "3^4"]).status.success());
    let (code, _) = error_of(&["--cap", "50", "field", "--field", "3^4"], None);
    assert_eq!(code, 3);
    let (code, _) = error_of(&["field", "--field", "5"], Some("zero"));
    assert_eq!(code, 2);

    let (code, _) = error_of(&["pencil", "--p", "3", "--f", "poly:0,1", "--model", "cyclic:2"], None);
    assert_eq!(code, 2);
    let (code, _) = error_of(&["pencil", "--p", "503", "--f", "poly:0,0,1"], None);
    assert_eq!(code, 3);

    let usage = excov(&["scan", "--bogus"]);
    assert_eq!(usage.status.code(), Some(2));
}
