//! Compiles and runs a small C program against the static library when a C
//! compiler is on PATH.

use std::path::PathBuf;
use std::process::Command;

const PROGRAM: &str = r#"
#include <stdio.h>
#include <math.h>
#include "pinsync.h"

int main(void) {
    PinsyncGraph *g = NULL;
    if (pinsync_graph_from_edge_list("0 1\n0 2\n0 3\n0 4\n", &g) != PINSYNC_STATUS_OK) return 1;
    size_t pins[1];
    double lambda[1];
    if (pinsync_select(g, PINSYNC_STRATEGY_PBO, 1, pins, lambda, 1) != PINSYNC_STATUS_OK) return 2;
    if (pins[0] != 0 || fabs(lambda[0] - 1.0) > 1e-8) return 3;
    if (pinsync_select(g, PINSYNC_STRATEGY_PBO, 9, pins, lambda, 1) != PINSYNC_STATUS_BUFFER_TOO_SMALL) return 4;
    if (pinsync_last_error_message() == NULL) return 5;
    pinsync_graph_free(g);
    printf("ok %s\n", pinsync_version());
    return 0;
}
"#;

#[test]
fn c_program_links_and_runs() {
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    if Command::new(&cc).arg("--version").output().is_err() {
        eprintln!("skipping: no C compiler");
        return;
    }
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    // tests/<exe> lives in target/<profile>/deps
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().unwrap().parent().unwrap();
    let lib = profile_dir.join("libpinsync_ffi.a");
    if !lib.exists() {
        eprintln!("skipping: {} not built", lib.display());
        return;
    }
    let dir = tempfile_dir();
    let src = dir.join("smoke.c");
    let bin = dir.join("smoke");
    std::fs::write(&src, PROGRAM).unwrap();
    let status = Command::new(&cc)
        .arg(&src)
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success(), "C compile failed");
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "exit {:?}", out.status.code());
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("ok "));
}

fn tempfile_dir() -> PathBuf {
    let dir = std::env::temp_dir().join(format!("pinsync-c-smoke-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}
