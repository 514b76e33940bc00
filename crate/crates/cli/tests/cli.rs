use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn setup(dir: &Path, records: &str) {
    fs::write(dir.join("adjectives.txt"), "local\nsymmetric\n").unwrap();
    fs::write(dir.join("terms.txt"), "manifold\n").unwrap();
    fs::write(dir.join("names.txt"), "finsler\n").unwrap();
    fs::write(dir.join("records.tsv"), records).unwrap();
    fs::write(
        dir.join("lexseq.toml"),
        r#"[input]
path = "records.tsv"
format = "records"

[output]
dir = "out"

[wordsearcher]
[[wordsearcher.dictionary]]
path = "adjectives.txt"
class = "A"
priority = 1
[[wordsearcher.dictionary]]
path = "terms.txt"
class = "E"
priority = 2
[[wordsearcher.dictionary]]
path = "names.txt"
class = "N"
priority = 3
"#,
    )
    .unwrap();
}

fn lexseq(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lexseq")).args(args).current_dir(dir).output().unwrap()
}

#[test]
fn index_writes_protocol() {
    let dir = tempfile::tempdir().unwrap();
    setup(dir.path(), "r1\tlocally symmetrical Finsler manifolds\n");
    let out = lexseq(&["index", "lexseq.toml"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let protocol = fs::read_to_string(dir.path().join("out/protocol.txt")).unwrap();
    assert_eq!(
        protocol.lines().collect::<Vec<_>>(),
        [
            "lex:) <locally = [(local/a)]>",
            "lex:) <symmetrical = [(symmetric/a)]>",
            "lex:) <Finsler = [(finsler/n)]>",
            "lex:) <manifolds = [(manifold/e)]>",
            "lex:) <finsler manifold|SEQ = [(finsler manifold/q)]>",
            "lex:) <symmetric finsler manifold|SEQ = [(symmetric finsler manifold/q)]>",
            "lex:) <local symmetric finsler manifold|SEQ = [(local symmetric finsler manifold/q)]>",
        ]
    );
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("1 documents, 4 tokens"));
}

#[test]
fn analyze_with_overrides() {
    let dir = tempfile::tempdir().unwrap();
    setup(dir.path(), "");
    fs::write(dir.path().join("other.tsv"), "a\tsymmetric Finsler manifolds\nb\tlocal manifolds\n").unwrap();
    let out = lexseq(
        &["analyze", "lexseq.toml", "--input", "other.tsv", "--output", "report", "--workers", "3", "--max-pattern-len", "2"],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let sequences = fs::read_to_string(dir.path().join("report/sequences.tsv")).unwrap();
    assert!(sequences.contains("finsler manifold\t1\t2\ttrue"), "{sequences}");
    assert!(!sequences.contains("symmetric finsler manifold"), "{sequences}");
}

#[test]
fn empty_record_file_succeeds() {
    let dir = tempfile::tempdir().unwrap();
    setup(dir.path(), "");
    let out = lexseq(&["index", "lexseq.toml"], dir.path());
    assert!(out.status.success());
    assert_eq!(fs::read_to_string(dir.path().join("out/protocol.txt")).unwrap(), "");
}

#[test]
fn missing_dictionary_fails() {
    let dir = tempfile::tempdir().unwrap();
    setup(dir.path(), "r1\tx\n");
    fs::remove_file(dir.path().join("terms.txt")).unwrap();
    let out = lexseq(&["index", "lexseq.toml"], dir.path());
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("terms.txt"));
}

#[test]
fn invalid_override_fails() {
    let dir = tempfile::tempdir().unwrap();
    setup(dir.path(), "r1\tx\n");
    let out = lexseq(&["index", "lexseq.toml", "--max-pattern-len", "9"], dir.path());
    assert!(!out.status.success());
}
