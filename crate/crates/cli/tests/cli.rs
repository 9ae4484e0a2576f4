use std::path::Path;
use std::process::{Command, Output};

fn legendre(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_legendre"))
        .args(args)
        .env("LEGENDRE_CACHE_DIR", cache)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn help_and_version_exit_zero() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(legendre(dir.path(), &["--help"]).status.code(), Some(0));
    assert_eq!(legendre(dir.path(), &["--version"]).status.code(), Some(0));
}

#[test]
fn usage_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(legendre(dir.path(), &["frobnicate"]).status.code(), Some(1));
    assert_eq!(legendre(dir.path(), &["table1", "--limit", "1"]).status.code(), Some(1));
    assert_eq!(
        legendre(dir.path(), &["table1", "--b-list", "1.08,abc"]).status.code(),
        Some(1)
    );
    assert_eq!(legendre(dir.path(), &["fit", "--tol", "0"]).status.code(), Some(1));
}

#[test]
fn out_of_range_query_asks_for_a_resieve() {
    let dir = tempfile::tempdir().unwrap();
    let o = legendre(dir.path(), &["table1", "--limit", "1000"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("re-sieve"));
}

#[test]
fn bad_bracket_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let o = legendre(
        dir.path(),
        &["fit", "--end", "10000", "--bracket-lo", "1.09", "--bracket-hi", "1.095"],
    );
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("bracketing failure"));
}

#[test]
fn io_failures_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("no/such/dir/out.csv");
    let o = legendre(
        dir.path(),
        &["table1", "--end", "1000", "--out", missing.to_str().unwrap()],
    );
    assert_eq!(o.status.code(), Some(2));

    std::fs::write(dir.path().join("pi-table.txt"), "garbage\n").unwrap();
    assert_eq!(
        legendre(dir.path(), &["table1", "--end", "1000"]).status.code(),
        Some(2)
    );
}

#[test]
fn empty_b_list_prints_only_the_header() {
    let dir = tempfile::tempdir().unwrap();
    let o = legendre(dir.path(), &["table1", "--b-list", ""]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "B,average_error\n");
}

#[test]
fn cached_table_gives_identical_output() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["table1", "--end", "100000", "--b-list", "1.07,1.0825,1.09"];
    let fresh = legendre(dir.path(), &args);
    assert!(fresh.status.success());

    let sieve = legendre(dir.path(), &["sieve", "--limit", "100000"]);
    assert_eq!(stdout(&sieve), "limit=100000 primes=9592\n");
    assert!(dir.path().join("pi-table.txt").exists());

    let cached = legendre(dir.path(), &args);
    assert!(cached.status.success());
    assert_eq!(fresh.stdout, cached.stdout);
}

#[test]
fn output_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("tracks.csv");
    let args = ["tracks", "--end", "200", "--b-list", "1.08366"];
    let direct = legendre(dir.path(), &args);
    let mut with_out = args.to_vec();
    with_out.extend(["--out", path.to_str().unwrap()]);
    assert!(legendre(dir.path(), &with_out).status.success());
    assert_eq!(std::fs::read(&path).unwrap(), direct.stdout);
    assert!(stdout(&direct).starts_with("x,B=1.08366,li\n3,"));
}

#[test]
fn inversion_check_reports_half_counts_at_primes() {
    let dir = tempfile::tempdir().unwrap();
    let o = legendre(dir.path(), &["riemann", "--check-inversion", "--x", "100,101"]);
    assert_eq!(
        stdout(&o),
        "x=100 inversion=25 pi=25 exact\nx=101 inversion=25.5 pi=26 half-count\n"
    );
}

#[test]
fn partial_sums_rejects_more_zeros_than_bundled() {
    let dir = tempfile::tempdir().unwrap();
    let o = legendre(dir.path(), &["riemann", "--partial-sums", "--x", "1000", "--k", "101"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn custom_zeros_file_is_used() {
    let dir = tempfile::tempdir().unwrap();
    let zeros = dir.path().join("zeros.txt");
    std::fs::write(&zeros, "# two zeros\n14.134725142\n21.022039639\n").unwrap();
    let z = zeros.to_str().unwrap();
    let ok = legendre(
        dir.path(),
        &[
            "riemann",
            "--partial-sums",
            "--x",
            "1000",
            "--k",
            "2",
            "--zeros-file",
            z,
        ],
    );
    assert!(ok.status.success());
    let too_many = legendre(
        dir.path(),
        &[
            "riemann",
            "--partial-sums",
            "--x",
            "1000",
            "--k",
            "3",
            "--zeros-file",
            z,
        ],
    );
    assert_eq!(too_many.status.code(), Some(1));
}
