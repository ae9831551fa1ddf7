use std::collections::BTreeSet;
use std::process::{Command, Output};

use obzcp::oracle::{brute_force_pairs, naive_rho};
use obzcp::{BinarySequence, SequencePair};
use obzcp_cli::record::OutputRecord;

fn obzcp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_obzcp")).args(args).env_remove("OBZCP_WORKERS").output().expect("run obzcp")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn golden(name: &str) -> String {
    std::fs::read_to_string(format!("{}/tests/golden/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

fn pairs_of(tsv: &str) -> BTreeSet<(String, String)> {
    tsv.lines()
        .map(|l| {
            let r = OutputRecord::from_tsv(l).unwrap();
            (r.a_hex, r.b_hex)
        })
        .collect()
}

#[test]
fn verify_matches_golden() {
    let o = obzcp(&["verify", "6AC2984", "42265F0", "27"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), golden("verify_27.txt"));
}

#[test]
fn verify_examples() {
    let o = obzcp(&["verify", "7905A9444", "710C1A3B2", "35", "--format", "tsv"]);
    let r = OutputRecord::from_tsv(stdout(&o).trim()).unwrap();
    assert_eq!((r.category.as_str(), r.zcz_width, r.max_out_of_zone), ("z-optimal", 18, 6));

    let o = obzcp(&["verify", "7", "7", "3"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("category: sub-optimal"));

    let o = obzcp(&["verify", "7", "7", "3", "--expect", "optimal"]);
    assert_eq!(o.status.code(), Some(1));
    let o = obzcp(&["verify", "6AC2984", "42265F0", "27", "--expect", "optimal"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn demerit_rows() {
    let o = obzcp(&["demerit", "7", "5", "3"]);
    assert_eq!(stdout(&o), golden("demerit_3.txt"));
    assert!(stdout(&obzcp(&["demerit", "159FB70", "11DA0CA", "25"])).starts_with("PSC     1.0740"));
    assert!(stdout(&obzcp(&["demerit", "1D29F4D110", "11273940E8", "37"])).starts_with("PSC     1.0515"));
}

#[test]
fn acf_dump_agrees_with_naive_correlation() {
    let o = obzcp(&["acf-dump", "7905A9444", "710C1A3B2", "35"]);
    let text = stdout(&o);
    assert_eq!(text, golden("acf_35.csv"));
    let a = naive_rho(&BinarySequence::from_hex("7905A9444", 35).unwrap());
    let b = naive_rho(&BinarySequence::from_hex("710C1A3B2", 35).unwrap());
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("tau,rho_a,rho_b,sum,abs_sum"));
    for (t, line) in lines.enumerate() {
        let s = a[t] + b[t];
        assert_eq!(line, format!("{t},{},{},{s},{}", a[t], b[t], s.abs()));
    }
}

#[test]
fn canon_invariances() {
    let canon = |a: &str, b: &str| stdout(&obzcp(&["canon", a, b, "27", "--format", "tsv"]));
    let base = canon("6AC2984", "42265F0");
    assert_eq!(base, "27\t10CA1AB\t7D3221\t32\n");
    assert_eq!(canon("42265F0", "6AC2984"), base);
    let neg = BinarySequence::from_hex("6AC2984", 27).unwrap().negate().to_hex();
    assert_eq!(canon(&neg, "42265F0"), base);
    assert_eq!(canon("10CA1AB", "7D3221"), base);
    assert!(stdout(&obzcp(&["canon", "6AC2984", "42265F0", "27"])).contains("orbit size: 32"));
}

#[test]
fn decode_failures_are_usage_errors() {
    assert_eq!(obzcp(&["verify", "XYZ", "1", "5"]).status.code(), Some(2));
    assert_eq!(obzcp(&["demerit", "FFFF", "1", "5"]).status.code(), Some(2));
    assert_eq!(obzcp(&["acf-dump", "1", "1", "4"]).status.code(), Some(2));
    assert_eq!(obzcp(&["search", "12"]).status.code(), Some(2));
    assert_eq!(obzcp(&["search", "9", "--max-acc", "3"]).status.code(), Some(2));
    assert_eq!(obzcp(&["search", "9", "--chunks", "3..99"]).status.code(), Some(2));
    assert_eq!(obzcp(&["search", "9", "--chunks", "3"]).status.code(), Some(2));
    assert_eq!(obzcp(&["search", "9", "--cases", "8"]).status.code(), Some(2));
    assert_eq!(obzcp(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn search_matches_golden_and_oracle() {
    let o = obzcp(&["search", "9", "--format", "tsv"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text, golden("search_9.tsv"));
    let oracle: BTreeSet<(String, String)> =
        brute_force_pairs(9, 2).unwrap().iter().map(|p| (p.a.to_hex(), p.b.to_hex())).collect();
    assert_eq!(pairs_of(&text), oracle);
    assert_eq!(stdout(&obzcp(&["search", "9"])), golden("search_9.txt"));
}

#[test]
fn search_progress_goes_to_stderr() {
    let o = obzcp(&["search", "7", "--format", "tsv", "--progress-secs", "0"]);
    let err = String::from_utf8(o.stderr.clone()).unwrap();
    assert!(err.contains("progress") && err.contains("checkpoint: resume with --chunks"));
    assert!(stdout(&o).lines().all(|l| OutputRecord::from_tsv(l).is_ok()));
}

#[test]
fn empty_result_is_success() {
    let o = obzcp(&["search", "9", "--cases", "7", "--chunks", "0..1", "--format", "tsv"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "");
}

#[test]
fn workers_give_identical_bytes() {
    let one = obzcp(&["search", "15", "--format", "tsv"]);
    for w in ["2", "3", "8"] {
        let many = obzcp(&["search", "15", "--format", "tsv", "--workers", w]);
        assert_eq!(one.stdout, many.stdout, "workers {w}");
    }
    let env = Command::new(env!("CARGO_BIN_EXE_obzcp"))
        .args(["search", "15", "--format", "tsv"])
        .env("OBZCP_WORKERS", "4")
        .output()
        .unwrap();
    assert_eq!(one.stdout, env.stdout);
    assert!(String::from_utf8(env.stderr).unwrap().contains("workers=4"));
}

#[test]
fn sharded_union_equals_full_run() {
    let full = pairs_of(&stdout(&obzcp(&["search", "15", "--format", "tsv"])));
    assert!(!full.is_empty());
    let mut union = BTreeSet::new();
    for range in ["..5", "5..20", "20..21", "21.."] {
        let o = obzcp(&["search", "15", "--format", "tsv", "--chunks", range]);
        assert!(o.status.success(), "{range}");
        union.extend(pairs_of(&stdout(&o)));
    }
    assert_eq!(union, full);
}

#[test]
fn map_budget_exit_code() {
    let o = obzcp(&["search", "15", "--max-map-bytes", "64", "--chunks", "7.."]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8(o.stderr).unwrap().contains("resume with --chunks 7..64"));
}

#[test]
fn catalog_check_bundled_reports_tables() {
    let o = obzcp(&["catalog-check"]);
    let text = stdout(&o);
    for line in ["table I         15/15  pass", "table XII       16/16  pass", "table DEMERIT   24/24  pass"] {
        assert!(text.contains(line), "{line}\n{text}");
    }
    let mismatches = text.lines().filter(|l| l.starts_with("MISMATCH")).count();
    assert_eq!(o.status.code(), Some(if mismatches == 0 { 0 } else { 1 }));
}

#[test]
fn catalog_check_external_files() {
    let dir = std::env::temp_dir().join(format!("obzcp-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();

    let clean = dir.join("clean.txt");
    std::fs::write(&clean, "# two pairs\nI 27 6AC2984 42265F0 optimal\nV 35 7905A9444 710C1A3B2 z-optimal\n").unwrap();
    let o = obzcp(&["catalog-check", clean.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("2 records checked, 0 mismatches"));

    // last digit 4 -> 5 flips a_0
    let corrupt = dir.join("corrupt.txt");
    std::fs::write(&corrupt, "I 27 6AC2985 42265F0 optimal\nV 35 7905A9444 710C1A3B2 z-optimal\n").unwrap();
    let o = obzcp(&["catalog-check", corrupt.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o).lines().filter(|l| l.starts_with("MISMATCH")).count(), 1);

    let malformed = dir.join("malformed.txt");
    std::fs::write(&malformed, "I 27 6AC2984\n").unwrap();
    assert_eq!(obzcp(&["catalog-check", malformed.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(obzcp(&["catalog-check", dir.join("missing.txt").to_str().unwrap()]).status.code(), Some(2));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn search_records_round_trip() {
    let text = stdout(&obzcp(&["search", "11", "--format", "tsv"]));
    for line in text.lines() {
        let r = OutputRecord::from_tsv(line).unwrap();
        assert_eq!(r.to_tsv(), line);
        let p = SequencePair::from_hex(&r.a_hex, &r.b_hex, r.n).unwrap();
        assert_eq!(OutputRecord::from_pair(&p, true, r.chunk), r);
    }
}
