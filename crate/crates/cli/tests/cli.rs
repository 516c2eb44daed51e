mod common;

use crate2bib_testkit::StubServer;

use common::*;

#[test]
fn no_arguments_is_a_usage_error() {
    let out = crate2bib(&[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));
    assert!(out.stdout.is_empty());
}

#[test]
fn help_exits_zero() {
    let out = crate2bib(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("--offline"));
}

#[test]
fn offline_output_is_stable_and_silent_on_the_network() {
    let stub = StubServer::start();
    let cache = tempfile::tempdir().unwrap();
    populate_cache(cache.path(), &stub.url());
    let dir = cache.path().to_str().unwrap();
    let args = ["bibforge", "--offline", "--cache-dir", dir, "--registry", &stub.url()];

    let first = crate2bib(&args);
    let second = crate2bib(&args);
    assert_eq!(first.status.code(), Some(0), "{}", String::from_utf8_lossy(&first.stderr));
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(stub.hits(), 0);

    // Same bytes as the library golden file, apart from the registry origin.
    let stdout = String::from_utf8(first.stdout).unwrap().replace(&stub.url(), "https://crates.io");
    assert_eq!(stdout, fixture("pipeline/expected.bib"));
}

#[test]
fn stdout_has_only_entries_and_comments() {
    let stub = StubServer::start();
    let cache = tempfile::tempdir().unwrap();
    populate_cache(cache.path(), &stub.url());
    let out = crate2bib(&[
        "bibforge", "0.5.0", "--offline", "--cache-dir", cache.path().to_str().unwrap(),
        "--registry", &stub.url(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    for line in stdout.lines() {
        assert!(
            line.is_empty() || line.starts_with('%') || line.starts_with('@') || line.starts_with("  ") || line == "}",
            "{line:?}"
        );
    }
    // yanked warning goes to stderr
    assert!(String::from_utf8_lossy(&out.stderr).contains("yanked"));
}

#[test]
fn offline_miss_exits_3() {
    let cache = tempfile::tempdir().unwrap();
    let out = crate2bib(&["bibforge", "--offline", "--cache-dir", cache.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn not_found_and_no_match_exit_1() {
    let stub = StubServer::start();
    stub.route("/api/v1/crates/bibforge", 200, fixture("registry/bibforge.json"));
    stub.route("/api/v1/crates/bibforge/versions", 200, fixture("registry/bibforge_versions.json"));
    let cache = tempfile::tempdir().unwrap();
    let run = |args: &[&str]| {
        let mut all = args.to_vec();
        let url = stub.url();
        let dir = cache.path().to_str().unwrap();
        all.extend(["--no-cff", "--registry", &url, "--cache-dir", dir]);
        crate2bib(&all).status.code()
    };
    assert_eq!(run(&["missing"]), Some(1));
    assert_eq!(run(&["bibforge", "9"]), Some(1));
    assert_eq!(run(&["bibforge", "not-a-version"]), Some(2));
    assert_eq!(run(&["Bad Name"]), Some(2));
    assert_eq!(run(&["bibforge"]), Some(0));
}

#[test]
fn out_flag_writes_file() {
    let stub = StubServer::start();
    stub.route("/api/v1/crates/bibforge", 200, fixture("registry/bibforge.json"));
    stub.route("/api/v1/crates/bibforge/versions", 200, fixture("registry/bibforge_versions.json"));
    let tmp = tempfile::tempdir().unwrap();
    let target = tmp.path().join("refs.bib");
    let out = crate2bib(&[
        "bibforge", "--no-cff", "--registry", &stub.url(),
        "--cache-dir", tmp.path().join("cache").to_str().unwrap(),
        "--out", target.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let written = std::fs::read_to_string(target).unwrap();
    assert!(written.starts_with("% origin: registry "));
    assert!(written.contains("url = {https://crates.io/crates/bibforge}"));
    let ua = stub.requests()[0].header("user-agent").unwrap().to_string();
    assert_eq!(ua, "crate2bib-cli (contact: <none>)");
}
