use std::process::Command;

use ppcurve::cli::{main_with_args, Record, EXIT_CAP, EXIT_MISMATCH, EXIT_PASS, EXIT_USAGE};
use ppcurve::families::{data::BUILTIN, Outcome};
use ppcurve::permcheck::Witness;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("ppcurve").chain(args.iter().copied());
    let code = main_with_args(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn records(args: &[&str]) -> (i32, Vec<Record>) {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let (code, out, _) = run(&full);
    let recs = out.lines().map(|l| Record::from_json(l).unwrap()).collect();
    (code, recs)
}

/// Every record with elapsed time zeroed.
fn without_timing(recs: Vec<Record>) -> Vec<Record> {
    recs.into_iter()
        .map(|r| match r {
            Record::Family(mut f) => {
                f.elapsed_ms = 0;
                Record::Family(f)
            }
            Record::Audit(mut a) => {
                a.elapsed_ms = 0;
                Record::Audit(a)
            }
            other => other,
        })
        .collect()
}

#[test]
fn verify_conj1_even() {
    let (code, recs) = records(&["verify", "conj1", "--k", "2,4"]);
    assert_eq!(code, EXIT_PASS);
    assert_eq!(recs.len(), 2);
    for r in recs {
        let Record::Family(f) = r else {
            panic!("{r:?}")
        };
        assert!(f.verdict);
        assert_eq!(f.outcome, Outcome::Pass);
    }
}

#[test]
fn verify_gs1_pattern() {
    let (code, recs) = records(&["verify", "gs1", "--m", "1,2,3,4,5,6"]);
    assert_eq!(code, EXIT_PASS);
    let permuting: Vec<u32> = recs
        .iter()
        .filter_map(|r| match r {
            Record::Family(f) if f.verdict => Some(f.k),
            _ => None,
        })
        .collect();
    assert_eq!(permuting, vec![2, 6]);
}

#[test]
fn unknown_family_is_a_usage_error() {
    let (code, _, err) = run(&["verify", "bogus"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("bogus"));
}

#[test]
fn usage_errors() {
    assert_eq!(run(&[]).0, EXIT_USAGE);
    assert_eq!(run(&["frobnicate"]).0, EXIT_USAGE);
    assert_eq!(run(&["check", "--field", "5"]).0, EXIT_USAGE);
    assert_eq!(
        run(&["check", "--poly", "x^^2", "--field", "5"]).0,
        EXIT_USAGE
    );
    assert_eq!(run(&["check", "--poly", "x", "--field", "6"]).0, EXIT_USAGE);
    assert_eq!(
        run(&["--workers", "2", "verify-all", "--max-cost", "-1"]).0,
        EXIT_USAGE
    );
    assert_eq!(
        run(&["--brute-cap", "0", "verify", "conj1", "--k", "2"]).0,
        EXIT_USAGE
    );
    assert_eq!(run(&["--help"]).0, EXIT_PASS);
}

#[test]
fn caps_have_their_own_exit_code() {
    let (code, _, err) = run(&["check", "--poly", "x^3", "--field", "2^30"]);
    assert_eq!(code, EXIT_CAP);
    assert!(err.contains("cap"));
    assert_eq!(
        run(&["--brute-cap", "100", "verify", "gs1", "--m", "4"]).0,
        EXIT_CAP
    );
    assert_eq!(
        run(&["--field-cap", "1000", "verify", "bin1", "--n", "10"]).0,
        EXIT_CAP
    );
    let (code, recs) = records(&["search-table1", "--k", "12"]);
    assert_eq!(code, EXIT_CAP);
    assert!(matches!(&recs[0], Record::Error { exit_code: 3, .. }));
}

#[test]
fn check_examples() {
    let (code, recs) = records(&[
        "check",
        "--frac",
        "(-x^7+x^6+x)/(x^6+x-1)",
        "--field",
        "3^2",
        "--mu",
    ]);
    assert_eq!(code, EXIT_PASS);
    let Record::Check(c) = &recs[0] else { panic!() };
    assert!(c.report.verdict);
    assert_eq!(c.report.domain_size, 10);

    let (_, recs) = records(&["check", "--poly", "x^2", "--field", "5^1"]);
    let Record::Check(c) = &recs[0] else { panic!() };
    assert!(!c.report.verdict);
    assert_eq!(
        c.report.witness,
        Some(Witness::Collision {
            a: 1,
            b: 4,
            image: 1
        })
    );

    let (_, recs) = records(&["check", "--poly", "x^5+x^8+x^9", "--field", "2^2"]);
    let Record::Check(c) = &recs[0] else { panic!() };
    assert!(!c.report.verdict);

    assert_eq!(
        run(&["check", "--poly", "x^2", "--field", "5", "--expect", "permutes"]).0,
        EXIT_MISMATCH
    );
    assert_eq!(
        run(&["check", "--poly", "x^3", "--field", "5", "--expect", "permutes"]).0,
        EXIT_PASS
    );
}

#[test]
fn empty_budget() {
    let (code, recs) = records(&["verify-all", "--max-cost", "0"]);
    assert_eq!(code, EXIT_PASS);
    assert_eq!(recs.len(), 1);
    let Record::Summary(s) = &recs[0] else {
        panic!()
    };
    assert_eq!(s.instances, 0);
    assert!(s.families.is_empty());
}

#[test]
fn small_budget_claims_pass() {
    let only =
        "conj1,conj2,conj3,bin1,bin2,gs1,gs2,gsfrac1,gsfrac2,gsfrac3,f5even,f5odd,table1,table2";
    let (code, recs) = records(&[
        "verify-all",
        "--max-cost",
        "5000",
        "--only",
        only,
        "--audits",
    ]);
    assert_eq!(code, EXIT_PASS);
    let Some(Record::Summary(s)) = recs.last() else {
        panic!()
    };
    assert_eq!(s.fail, 0);
    assert!(s.pass > 50);
    assert_eq!(s.audits_failed, 0);
    assert_eq!(s.audits_ok, 24 + 14);
}

#[test]
fn finale_counterexamples_make_the_run_fail() {
    let (code, recs) = records(&["verify", "finale", "--p", "5", "--k", "1"]);
    assert_eq!(code, EXIT_MISMATCH);
    let failed: Vec<Vec<u64>> = recs
        .into_iter()
        .filter_map(|r| match r {
            Record::Family(f) if f.outcome == Outcome::Fail => Some(f.params),
            _ => None,
        })
        .collect();
    assert_eq!(failed, vec![vec![1, 1, 1], vec![4, 1, 4]]);
}

#[test]
fn json_round_trip() {
    let (_, out, _) = run(&["--format", "json", "verify", "bin2", "--n", "6,7"]);
    for line in out.lines() {
        let rec = Record::from_json(line).unwrap();
        assert_eq!(rec.to_json(), line);
    }
    let (_, recs) = records(&["verify", "bin2", "--n", "7"]);
    let Record::Family(f) = &recs[0] else {
        panic!()
    };
    assert!(matches!(f.witness, Some(Witness::Collision { .. })));
    // Fixed field order.
    assert!(out.starts_with("{\"record\":\"family\",\"family\":\"bin2\",\"p\":2,\"k\":6,"));
}

#[test]
fn worker_count_does_not_change_reports() {
    let args = ["verify-all", "--max-cost", "3000", "--audits"];
    let one = without_timing(records(&[&["--workers", "1"][..], &args].concat()).1);
    let four = without_timing(records(&[&["--workers", "4"][..], &args].concat()).1);
    assert_eq!(one, four);
    let a = without_timing(records(&["--workers", "1", "verify", "bin1", "--n", "7,14"]).1);
    let b = without_timing(records(&["--workers", "3", "verify", "bin1", "--n", "7,14"]).1);
    assert_eq!(a, b);
}

#[test]
fn data_override() {
    let dir = std::env::temp_dir().join(format!("ppcurve-data-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();

    // Dropping a listed row changes the prediction for that row.
    let edited = BUILTIN.replace("table1 4 2 1 2\n", "");
    assert_ne!(edited, BUILTIN);
    let path = dir.join("catalog.txt");
    std::fs::write(&path, edited).unwrap();
    let p = path.to_str().unwrap();
    let (code, recs) = records(&["--data", p, "verify", "table1", "--k", "1"]);
    assert_eq!(code, EXIT_PASS);
    assert_eq!(recs.len(), 9);

    // A corrupted factor makes the audit fail.
    let broken = BUILTIN.replacen("factor x - y", "factor x + y", 1);
    let path2 = dir.join("broken.txt");
    std::fs::write(&path2, broken).unwrap();
    let (code, recs) = records(&["--data", path2.to_str().unwrap(), "audit", "--id", "conj1"]);
    assert_eq!(code, EXIT_MISMATCH);
    let Record::Audit(a) = &recs[0] else { panic!() };
    assert!(!a.ok);

    let path3 = dir.join("bad.txt");
    std::fs::write(&path3, "version 1\ntable1 1 2\n").unwrap();
    let (code, _, err) = run(&[
        "--data",
        path3.to_str().unwrap(),
        "verify",
        "table1",
        "--k",
        "1",
    ]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("line 2"));

    assert_eq!(
        run(&["--data", dir.join("missing").to_str().unwrap(), "audit"]).0,
        EXIT_USAGE
    );
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn search_table1_command() {
    let (code, recs) = records(&["search-table1", "--k", "1"]);
    assert_eq!(code, EXIT_PASS);
    let Record::Search(s) = &recs[0] else {
        panic!()
    };
    assert!(s.missing.is_empty());
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_ppcurve");
    let status = |args: &[&str]| Command::new(bin).args(args).output().unwrap().status.code();
    assert_eq!(status(&["verify", "conj2", "--k", "1,2"]), Some(0));
    assert_eq!(status(&["verify", "bogus"]), Some(2));
    assert_eq!(
        status(&["check", "--poly", "x", "--field", "2^40"]),
        Some(3)
    );
    assert_eq!(
        status(&["verify", "finale", "--p", "7", "--k", "1"]),
        Some(1)
    );
    let out = Command::new(bin).args(["families"]).output().unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 16);
}
