use std::process::Command;

use serde_json::Value;

fn iwasawa(args: &[&str]) -> (i32, Value, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_iwasawa")).args(args).output().expect("binary runs");
    let stdout = String::from_utf8(out.stdout).unwrap();
    let value = if stdout.trim().is_empty() { Value::Null } else { serde_json::from_str(&stdout).unwrap() };
    (out.status.code().unwrap(), value, String::from_utf8(out.stderr).unwrap())
}

const RING: [&str; 6] = ["--p", "5", "--prec", "8", "--trunc", "12"];

fn with_ring<'a>(cmd: &'a str, rest: &[&'a str]) -> Vec<&'a str> {
    let mut v = vec![cmd];
    v.extend_from_slice(&RING);
    v.extend_from_slice(rest);
    v
}

#[test]
fn prop29_simple_pair() {
    let (code, v, _) = iwasawa(&with_ring("prop29", &["--f1", "t", "--f2", "5"]));
    assert_eq!(code, 0);
    assert_eq!(v["result"]["equal"], true);
    assert_eq!(v["result"]["lhs"]["entries"][0]["prime"], "(p, t)");
    assert_eq!(v["result"]["lhs"]["entries"][0]["mult"], 1);
    assert_eq!(v["schema_version"], "1");
}

#[test]
fn bernoulli_mod_four() {
    let (code, v, _) = iwasawa(&["bernoulli", "--modulus", "4", "--order", "2"]);
    assert_eq!(code, 0);
    let chars = v["result"]["characters"].as_array().unwrap();
    assert_eq!(chars.len(), 1);
    assert_eq!(chars[0]["value"]["text"], "-1/2");
}

#[test]
fn bernoulli_at_37_has_one_divisible_value() {
    let (code, v, _) = iwasawa(&["bernoulli", "--modulus", "37", "--order", "36", "--p", "37"]);
    assert_eq!(code, 0);
    let hits = v["result"]["characters"].as_array().unwrap().iter().filter(|c| c["divisible"] == true).count();
    assert_eq!(hits, 1);
}

#[test]
fn chern_classes() {
    let (code, v, _) = iwasawa(&with_ring("chern1", &["--f", "5*(t^2+5)"]));
    assert_eq!(code, 0);
    assert_eq!(v["result"]["mu"], 1);
    assert_eq!(v["result"]["lambda"], 2);
    assert_eq!(v["result"]["cycle"]["entries"][1]["prime"], "t^2 + 5");

    let (code, v, _) = iwasawa(&with_ring("chern2", &["--f1", "t^2-5", "--f2", "t-5"]));
    assert_eq!(code, 0);
    assert_eq!(v["result"]["routes"]["smith"], 1);
    assert_eq!(v["result"]["routes"]["resultant"], 1);
    assert_eq!(v["result"]["routes"]["symbol"], 1);

    let (code, v, _) =
        iwasawa(&with_ring("chern2", &["--vars", "2", "--f1", "t2 - t1^2", "--f2", "t2", "--primes", "t"]));
    assert_eq!(code, 0);
    assert_eq!(v["result"]["cycle"]["entries"][0]["mult"], 2);

    // t1^2 is not a certified prime, so the default support is refused
    let (code, _, err) = iwasawa(&with_ring("chern2", &["--vars", "2", "--f1", "t2 - t1^2", "--f2", "t2"]));
    assert_eq!(code, 2);
    assert!(err.contains("--primes"));
}

#[test]
fn symbols_and_reciprocity() {
    let (code, v, _) = iwasawa(&with_ring("tame", &["--symbol", "{t ; 5}", "--at", "t"]));
    assert_eq!(code, 0);
    assert_eq!(v["result"]["ord"], -1);

    let (code, v, _) = iwasawa(&with_ring("reciprocity", &["--f", "t", "--g", "5", "--primes", "t; p"]));
    assert_eq!(code, 0);
    assert_eq!(v["result"]["vanishes"], true);
}

#[test]
fn koszul_ext() {
    let (code, v, _) = iwasawa(&["ext-koszul", "--p", "5", "--vars", "2", "--f", "x^2, y^3"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["dims"], serde_json::json!([0, 0, 6]));
    assert_eq!(v["result"]["biduality"], true);
    let (code, _, _) = iwasawa(&["ext-koszul", "--p", "5", "--vars", "2", "--f", "x, x"]);
    assert_eq!(code, 2);
}

#[test]
fn growth_fit() {
    let (code, v, _) = iwasawa(&["growth", "--p", "5", "--prec", "10", "--trunc", "30", "--f", "t^2+5", "--n-max", "4"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["orders"], serde_json::json!([1, 3, 5, 7, 9]));
    assert_eq!(v["result"]["fit"]["lambda"], 2);
}

#[test]
fn exit_codes() {
    let (code, _, err) = iwasawa(&with_ring("chern1", &["--f", "t^2 +"]));
    assert_eq!(code, 1);
    assert!(err.contains("column 6"));
    let (code, _, _) = iwasawa(&["chern1", "--f", "t"]);
    assert_eq!(code, 1);
    let (code, _, _) = iwasawa(&["chern1", "--p", "6", "--prec", "8", "--trunc", "12", "--f", "t"]);
    assert_eq!(code, 2);
    let (code, _, _) = iwasawa(&["nonsense"]);
    assert_eq!(code, 1);
}

#[test]
fn output_is_deterministic() {
    let args = with_ring("prop29", &["--f1", "t-5", "--f2", "(1+t)^5-1"]);
    let a = Command::new(env!("CARGO_BIN_EXE_iwasawa")).args(&args).output().unwrap();
    let b = Command::new(env!("CARGO_BIN_EXE_iwasawa")).args(&args).output().unwrap();
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("iwasawa-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("r.json");
    let (code, v, _) = iwasawa(&["bernoulli", "--modulus", "4", "--order", "2", "--out", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v, Value::Null);
    let written: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(written["command"], "bernoulli");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn batch_runs_in_order() {
    let dir = std::env::temp_dir().join(format!("iwasawa-batch-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("jobs.txt");
    std::fs::write(
        &path,
        "# jobs\n\
         prop29 --p 5 --prec 8 --trunc 12 --f1 t --f2 5\n\
         \n\
         bernoulli --modulus 4 --order 2\n\
         chern1 --p 6 --prec 8 --trunc 12 --f t\n",
    )
    .unwrap();
    let (code, v, _) = iwasawa(&["--batch", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    let jobs = v["jobs"].as_array().unwrap();
    let lines: Vec<u64> = jobs.iter().map(|j| j["line"].as_u64().unwrap()).collect();
    assert_eq!(lines, [2, 4, 5]);
    assert_eq!(jobs[0]["exit_code"], 0);
    assert_eq!(jobs[2]["exit_code"], 2);

    std::fs::write(&path, "bernoulli --modulus 4 --order 2\nchern1 --p 5 --prec 8 --trunc 12 --f \"t^2 +\"\n").unwrap();
    let (code, _, err) = iwasawa(&["--batch", path.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(err.contains("line 2"), "{err}");
    std::fs::remove_dir_all(&dir).unwrap();
}

fn schema(name: &str) -> Value {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../schemas/").to_string() + name + ".v1.json";
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn assert_required(schema: &Value, v: &Value) {
    for key in schema["required"].as_array().unwrap() {
        assert!(v.get(key.as_str().unwrap()).is_some(), "missing {key} in {v}");
    }
}

#[test]
fn outputs_carry_schema_keys() {
    let (_, v, _) = iwasawa(&with_ring("prop29", &["--f1", "t", "--f2", "5"]));
    assert_required(&schema("envelope"), &v);
    assert_required(&schema("prop29"), &v["result"]);
    assert_required(&schema("cycle"), &v["result"]["lhs"]);
    let (_, v, _) = iwasawa(&["ext-koszul", "--p", "3", "--vars", "3", "--f", "x, y^2, z"]);
    assert_required(&schema("ext_report"), &v["result"]);
    let (_, v, _) = iwasawa(&["bernoulli", "--modulus", "5", "--order", "4", "--p", "13"]);
    assert_required(&schema("bernoulli"), &v["result"]);
    let (_, v, _) = iwasawa(&["lsearch", "--p", "37", "--conductor", "28", "--order", "6", "--kappa-discs", "-3,-4"]);
    assert_required(&schema("search_report"), &v["result"]);
    assert_required(&schema("search_report")["properties"]["rows"]["items"], &v["result"]["rows"][0]);
}
