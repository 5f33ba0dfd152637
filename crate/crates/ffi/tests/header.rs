//! The generated header compiles as C and a C program linked against the static library
//! behaves like the Rust API.

use std::path::{Path, PathBuf};
use std::process::Command;

fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn have_cc() -> bool {
    Command::new("cc").arg("--version").output().is_ok_and(|o| o.status.success())
}

fn static_lib() -> Option<PathBuf> {
    // CARGO_TARGET_TMPDIR is <target>/tmp; the library sits in <target>/<profile>.
    let target = Path::new(env!("CARGO_TARGET_TMPDIR")).parent()?.to_path_buf();
    ["debug", "release"].iter().map(|p| target.join(p).join("libalmost_invariant_ffi.a")).find(|p| p.exists())
}

#[test]
fn header_is_valid_c() {
    if !have_cc() {
        eprintln!("cc not found; skipping");
        return;
    }
    let dir = crate_dir();
    let out = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Wextra", "-Werror", "-fsyntax-only", "-I"])
        .arg(dir.join("include"))
        .arg(dir.join("tests/c/smoke.c"))
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn c_program_links_and_runs() {
    let Some(lib) = static_lib().filter(|_| have_cc()) else {
        eprintln!("cc or static library not available; skipping");
        return;
    };
    let dir = crate_dir();
    let exe = Path::new(env!("CARGO_TARGET_TMPDIR")).join("ffi_smoke");
    let out = Command::new("cc")
        .args(["-std=c99", "-I"])
        .arg(dir.join("include"))
        .arg(dir.join("tests/c/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let run = Command::new(&exe).output().unwrap();
    assert!(run.status.success(), "exit {:?}", run.status.code());
    assert_eq!(String::from_utf8_lossy(&run.stdout).trim(), "ok");
}
