//! Compiles a small C program against the generated header and the static
//! library. Skipped when no C compiler is available.

use std::path::PathBuf;
use std::process::Command;

const PROGRAM: &str = r#"
#include <stdio.h>
#include <stdlib.h>
#include "ipldpc.h"

int main(void) {
    IpldpcProductCode *code = NULL;
    if (ipldpc_product_code_new("spc:3", "spc:3", NULL, &code) != IPLDPC_STATUS_OK) return 10;
    size_t n = ipldpc_product_code_n(code), k = ipldpc_product_code_k(code);
    uint8_t info[9] = {1, 0, 1, 1, 0, 0, 0, 1, 1};
    uint8_t x[16], y[16];
    double llr[16];
    if (ipldpc_product_code_encode(code, info, k, x, n) != IPLDPC_STATUS_OK) return 11;
    for (size_t i = 0; i < n; i++) llr[i] = x[i] ? -5.0 : 5.0;
    size_t it = 0;
    bool ok = false;
    if (ipldpc_product_code_decode(code, llr, n, 10, y, &it, &ok) != IPLDPC_STATUS_OK) return 12;
    for (size_t i = 0; i < n; i++) if (x[i] != y[i]) return 13;
    if (ipldpc_product_code_new("bogus", "spc:3", NULL, &code) == IPLDPC_STATUS_OK) return 14;
    printf("%s\n", ipldpc_last_error_message());
    return ok && it == 1 ? 0 : 15;
}
"#;

fn have_cc() -> bool {
    Command::new("cc")
        .arg("--version")
        .output()
        .is_ok_and(|o| o.status.success())
}

#[test]
fn c_program_links_and_runs() {
    if !have_cc() {
        eprintln!("no C compiler, skipping");
        return;
    }
    // Integration tests only get the rlib, so build the static library into
    // a separate target directory to avoid contending for the outer lock.
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let target = manifest.join("../../target/c-smoke");
    let status = Command::new(env!("CARGO"))
        .args([
            "build",
            "--quiet",
            "-p",
            "ipldpc-ffi",
            "--lib",
            "--manifest-path",
        ])
        .arg(manifest.join("Cargo.toml"))
        .arg("--target-dir")
        .arg(&target)
        .status()
        .unwrap();
    assert!(status.success(), "building the static library failed");
    let lib = target.join("debug/libipldpc_ffi.a");
    assert!(lib.exists(), "{} missing", lib.display());
    let dir = tempfile_dir();
    let src = dir.join("smoke.c");
    std::fs::write(&src, PROGRAM).unwrap();
    let bin = dir.join("smoke");
    let include = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include");
    let status = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(&include)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success(), "C compile failed");
    let out = Command::new(&bin).output().unwrap();
    assert!(
        out.status.success(),
        "smoke exited with {:?}",
        out.status.code()
    );
    assert!(!String::from_utf8_lossy(&out.stdout).trim().is_empty());
}

fn tempfile_dir() -> PathBuf {
    let d = std::env::temp_dir().join(format!("ipldpc-ffi-smoke-{}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d
}
