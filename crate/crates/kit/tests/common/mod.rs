#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

pub fn kit(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tabfact-kit"))
        .args(args)
        .current_dir(dir)
        .env("TABFACT_KIT_LOG", "error")
        .output()
        .expect("binary runs")
}

/// Runs `args` in `dir`, panicking with stderr on a nonzero exit.
pub fn kit_ok(dir: &Path, args: &[&str]) -> Output {
    let out = kit(dir, args);
    assert!(
        out.status.success(),
        "tabfact-kit {}: {}",
        args.join(" "),
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

/// The full pipeline over the bundled corpus; every output lands in `dir`.
pub fn run_pipeline(dir: &Path) {
    let corpus = fixtures().join("corpus");
    let corpus = corpus.to_str().unwrap();
    let steps: &[&[&str]] = &[
        &["parse", corpus, "-o", "corpus.jsonl"],
        &[
            "stats",
            "corpus.jsonl",
            "-o",
            "stats.json",
            "--text",
            "stats.txt",
        ],
        &[
            "augment",
            "corpus.jsonl",
            "-o",
            "aug.jsonl",
            "--seed",
            "7",
            "--warnings",
            "warn.jsonl",
        ],
        &["snapshot", "aug.jsonl", "-o", "snap.jsonl"],
        &[
            "baseline",
            "aug.jsonl",
            "--snapshots",
            "snap.jsonl",
            "-o",
            "lex12.jsonl",
            "--model",
            "lexical-12",
        ],
        &[
            "baseline",
            "aug.jsonl",
            "--snapshots",
            "snap.jsonl",
            "-o",
            "lex1.jsonl",
            "--model",
            "lexical-1",
            "--ngrams",
            "1",
        ],
        &[
            "ensemble-train",
            "aug.jsonl",
            "--scores",
            "lex12.jsonl",
            "--scores",
            "lex1.jsonl",
            "-o",
            "model.json",
        ],
        &[
            "predict",
            "aug.jsonl",
            "--model",
            "model.json",
            "--scores",
            "lex12.jsonl",
            "--scores",
            "lex1.jsonl",
            "-o",
            "pred.jsonl",
        ],
        &[
            "evidence",
            "aug.jsonl",
            "--predictions",
            "pred.jsonl",
            "-o",
            "evid.jsonl",
        ],
        &[
            "score",
            "aug.jsonl",
            "--predictions",
            "pred.jsonl",
            "--evidence",
            "evid.jsonl",
            "-o",
            "report.json",
            "--text",
            "report.txt",
        ],
    ];
    for args in steps {
        kit_ok(dir, args);
    }
}

/// Reports compared byte-for-byte against `fixtures/expected`.
pub const REPORTS: [&str; 4] = ["stats.json", "stats.txt", "report.json", "report.txt"];
