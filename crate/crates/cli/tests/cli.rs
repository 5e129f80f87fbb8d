use std::path::PathBuf;
use std::process::Command as Process;

use apolar_cli::{run, Command, JobRequest};
use proptest::prelude::*;
use serde_json::Value;

const WORKED_FORM: &str =
    "4*x^2*z^2+6*x^2*z*w+2*x^2*w^2+8*x*y*z^2+7*x*y*z*w+5*x*y*w^2+3*y^2*z^2+7*y^2*z*w+2*y^2*w^2";

fn apolar(args: &[&str]) -> (i32, String) {
    let out = Process::new(env!("CARGO_BIN_EXE_apolar")).args(args).output().expect("spawn");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).expect("utf-8"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("apolar-cli-tests-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn job(cmd: Command, input: &str) -> JobRequest {
    JobRequest::new(cmd).expr(input)
}

#[test]
fn bergqvist_diagonal_example() {
    let pencil = r#"{"T1":[[1,0,0],[0,1,0],[0,0,1]],"T2":[[1,0,0],[0,2,0],[0,0,3]]}"#;
    let (code, stdout) = apolar(&["bergqvist", "--expr", pencil]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["result"]["verdict"], "RANK_N");
    assert_eq!(v["result"]["real_rank"], 3);
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
}

#[test]
fn non_symmetric_signature_is_a_precondition_error() {
    let (code, stdout) = apolar(&["signature", "--expr", "[[1,2],[3,4]]"]);
    assert_eq!(code, 2);
    let v: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["status"], "error");
    assert!(v["error"]["message"].as_str().unwrap().contains("symmetric"));
}

#[test]
fn file_input_and_output() {
    let input = scratch("form.txt");
    let out = scratch("antipolar.json");
    std::fs::write(&input, format!("{WORKED_FORM}\n")).unwrap();
    let (code, stdout) = apolar(&[
        "antipolar",
        "--input",
        input.to_str().unwrap(),
        "--B",
        "1,1",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["result"]["det_phi"], "-4751");
    assert_eq!(v["input"]["B"], "1,1");
    let (code, _) = apolar(&["antipolar", "--input", "/nonexistent/form.txt"]);
    assert_eq!(code, 1);
}

#[test]
fn full_output_file_holds_every_term() {
    let path = scratch("scan.json");
    let mut req = job(Command::ForbiddenScan, "(x+y)^4 + (x^3+y^3)*z");
    req.term_limit = Some(0);
    req.full_out = Some(path.clone());
    let out = run(&req);
    assert_eq!(out.exit_code, 0);
    let delta = &out.document["result"]["delta_poly"];
    assert_eq!(delta["truncated"], true);
    assert_eq!(delta["terms"].as_array().unwrap().len(), 0);
    let full: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(full["terms"].as_array().unwrap().len(), delta["term_count"].as_u64().unwrap() as usize);
}

#[test]
fn every_subcommand_is_byte_deterministic() {
    let pencil = r#"{"T1":[[1,0],[0,1]],"T2":[[0,1],[-1,0]]}"#;
    let tensor = "[1,0,0,2,0,1,0,0,3,0,0,1,0,0,1,1]";
    let biform = "-2*x^2*z*w - 2*x*y*z^2 - x*y*z*w + 2*x*y*w^2 + y^2*z*w + y^2*w^2";
    let cases: Vec<Vec<&str>> = vec![
        vec!["catalecticant", "--expr", WORKED_FORM],
        vec!["antipolar", "--expr", WORKED_FORM, "--B", "1,1"],
        vec!["rs-membership", "--expr", WORKED_FORM, "--point", "1,-2,3,1/2"],
        vec!["forbidden-scan", "--expr", "(x+y)^4 + (x^3+y^3)*z"],
        vec!["signature", "--expr", "[[2,1,0],[1,2,1],[0,1,-3]]"],
        vec!["rank-certify", "--expr", biform],
        vec!["boundary-side", "--expr", biform],
        vec!["sample-typical", "--d", "1", "--samples", "40", "--seed", "7"],
        vec!["pencil-form", "--expr", pencil],
        vec!["hyperdet", "--expr", pencil],
        vec!["bergqvist", "--expr", pencil],
        vec!["hyperdet2222", "--expr", tensor],
        vec!["binary-rank", "--expr", "x^3*y + y^4", "--point", "1,1"],
    ];
    assert_eq!(cases.len(), Command::ALL.len());
    for args in cases {
        let (c1, a) = apolar(&args);
        let (c2, b) = apolar(&args);
        assert_eq!(c1, 0, "{args:?}: {a}");
        assert_eq!((c1, &a), (c2, &b), "{args:?}");
    }
}

#[test]
fn sampler_output_is_independent_of_worker_count() {
    let base = ["sample-typical", "--d", "2", "--samples", "30", "--seed", "3"];
    let (_, one) = apolar(&[&base[..], &["--threads", "1"]].concat());
    let (_, four) = apolar(&[&base[..], &["--threads", "4"]].concat());
    let (_, default) = apolar(&base);
    assert_eq!(one, four);
    assert_eq!(one, default);
}

#[test]
fn documented_error_shapes() {
    let out = run(&job(Command::Catalecticant, "x^2 + * y"));
    assert_eq!(out.exit_code, 1);
    assert_eq!(out.document["error"]["offset"], 6);
    let out = run(&job(Command::Catalecticant, "x^2*z + y"));
    assert_eq!(out.exit_code, 1);
    assert_eq!(out.document["error"]["kind"], "inhomogeneous");
    let out = run(&job(Command::Hyperdet2222, "[1,2,3]"));
    assert_eq!(out.exit_code, 1);
    // a single point square has a singular catalecticant
    let out = run(&job(Command::Antipolar, "(x+y)^2*(z+w)^2"));
    assert_eq!(out.exit_code, 2);
    assert_eq!(out.document["error"]["kind"], "singular_catalecticant");
}

/// Requests drawn from each class of the error taxonomy, with the exit code they must produce.
fn classified_request() -> impl Strategy<Value = (JobRequest, i32)> {
    let coeff = -9i64..=9;
    let valid = proptest::collection::vec(coeff.clone(), 9).prop_map(|c| {
        let monos = ["x^2*z^2", "x^2*z*w", "x^2*w^2", "x*y*z^2", "x*y*z*w", "x*y*w^2", "y^2*z^2", "y^2*z*w", "y^2*w^2"];
        let text = c
            .iter()
            .zip(monos)
            .map(|(k, m)| format!("({k})*{m}"))
            .collect::<Vec<_>>()
            .join(" + ");
        (job(Command::Catalecticant, &text), 0)
    });
    let garbage = "[a-z0-9+*^() ]{0,12}[$#@!]".prop_map(|t| (job(Command::Antipolar, &t), 1));
    let inhomogeneous = (1u32..5, 1u32..5).prop_map(|(a, b)| {
        (job(Command::Catalecticant, &format!("x^{a} + y^{}", a + b)), 1)
    });
    let bad_schema = (0usize..16).prop_filter("not 16", |n| *n != 16).prop_map(|n| {
        let entries = vec!["1"; n].join(",");
        (job(Command::Hyperdet2222, &format!("[{entries}]")), 1)
    });
    let non_symmetric = (-9i64..=9, 1i64..=9).prop_map(|(a, off)| {
        (job(Command::Signature, &format!("[[{a},{off}],[{},{a}]]", off + 1)), 2)
    });
    let singular = (1i64..=5, 1i64..=5).prop_map(|(p, q)| {
        (job(Command::RankCertify, &format!("(x+{p}*y)^2*(z-{q}*w)^2")), 2)
    });
    let ok_pencil = (1i64..=9, -9i64..=9).prop_map(|(a, b)| {
        (job(Command::Bergqvist, &format!(r#"{{"T1":[[{a},0],[0,1]],"T2":[[{b},1],[1,0]]}}"#)), 0)
    });
    prop_oneof![valid, garbage, inhomogeneous, bad_schema, non_symmetric, singular, ok_pencil]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exit_codes_follow_the_error_taxonomy((req, code) in classified_request()) {
        let out = run(&req);
        prop_assert_eq!(out.exit_code, code, "{}", out.to_pretty());
        prop_assert_eq!(out.document["status"] == "ok", code == 0);
        prop_assert_eq!(&out, &run(&req));
    }
}
