use std::path::{Path, PathBuf};
use std::process::Command;

fn header() -> String {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/balword.h");
    std::fs::read_to_string(path).expect("build script writes the header")
}

#[test]
fn header_declares_the_abi() {
    let h = header();
    for decl in [
        "typedef struct BalwordWord BalwordWord;",
        "BALWORD_STATUS_OK = 0",
        "BALWORD_STATUS_PANIC = 7",
        "balword_word_new(const char *density, struct BalwordWord **out)",
        "void balword_word_free(struct BalwordWord *word)",
        "balword_word_bit(",
        "balword_word_patch(",
        "balword_rect_count(",
        "balword_balance_bound(",
        "balword_sturmian_bits(",
        "const char *balword_status_message(int32_t status)",
        "const char *balword_last_error(void)",
        "const char *balword_version(void)",
    ] {
        assert!(h.contains(decl), "missing `{decl}`");
    }
}

/// Directory holding the static library built alongside this test.
fn artifact_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

const PROGRAM: &str = r#"
#include <stdio.h>
#include <string.h>
#include "balword.h"

int main(void) {
    BalwordWord *w = NULL;
    if (balword_word_new("1/2", &w) != BALWORD_STATUS_OK) return 10;
    uint8_t row[12];
    if (balword_word_patch(w, 1, 0, 12, 1, row, sizeof row) != BALWORD_STATUS_OK) return 11;
    const uint8_t want[12] = {0, 0, 1, 1, 1, 0, 1, 0, 1, 0, 1, 0};
    if (memcmp(row, want, 12) != 0) return 12;
    uint64_t k = 0;
    if (balword_balance_bound(w, &k) != BALWORD_STATUS_OK || k != 32) return 13;
    balword_word_free(w);
    if (balword_word_new("nope", &w) != BALWORD_STATUS_PARSE) return 14;
    printf("%s\n", balword_last_error());
    return 0;
}
"#;

#[test]
fn c_program_links_against_staticlib() {
    let lib = artifact_dir().join("libbalword_ffi.a");
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    if !lib.exists() || Command::new(&cc).arg("--version").output().is_err() {
        eprintln!("skipping: no C compiler or {} missing", lib.display());
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("smoke.c");
    let exe = dir.path().join("smoke");
    std::fs::write(&src, PROGRAM).unwrap();
    let status = Command::new(&cc)
        .arg(&src)
        .arg("-I")
        .arg(Path::new(env!("CARGO_MANIFEST_DIR")).join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success(), "C compile failed");
    let out = Command::new(&exe).output().unwrap();
    assert!(
        out.status.success(),
        "smoke exited with {:?}",
        out.status.code()
    );
    assert!(String::from_utf8_lossy(&out.stdout).contains("malformed"));
}
