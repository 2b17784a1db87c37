use std::path::{Path, PathBuf};
use std::process::Command;

fn manifest_dir() -> &'static Path {
    Path::new(env!("CARGO_MANIFEST_DIR"))
}

fn static_lib() -> Option<PathBuf> {
    let exe = std::env::current_exe().ok()?;
    let profile_dir = exe.parent()?.parent()?;
    let lib = profile_dir.join("libcnsqkd_ffi.a");
    lib.exists().then_some(lib)
}

fn have_cc() -> bool {
    Command::new("cc").arg("--version").output().is_ok_and(|o| o.status.success())
}

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(manifest_dir().join("include/cnsqkd.h")).unwrap();
    for name in [
        "cnsqkd_last_error",
        "cnsqkd_codec_new",
        "cnsqkd_run_session",
        "cnsqkd_run_experiment",
        "cnsqkd_toeplitz_extract",
        "cnsqkd_export_fixture_json",
        "CNSQKD_STATUS_PANIC",
        "CNSQKD_PROCESS_WCNS_INTERCEPTED",
        "typedef struct CnsqkdCodec CnsqkdCodec;",
    ] {
        assert!(header.contains(name), "{name} missing from header");
    }
}

#[test]
fn header_compiles_as_c() {
    if !have_cc() {
        eprintln!("no C compiler, skipped");
        return;
    }
    let out = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-x", "c"])
        .arg(manifest_dir().join("include/cnsqkd.h"))
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn c_program_links_against_static_library() {
    let Some(lib) = static_lib().filter(|_| have_cc()) else {
        eprintln!("no C compiler or static library, skipped");
        return;
    };
    let dir = tempfile_dir();
    let exe = dir.join("smoke");
    let out = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror"])
        .arg("-I")
        .arg(manifest_dir().join("include"))
        .arg(manifest_dir().join("tests/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let run = Command::new(&exe).output().unwrap();
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    assert!(String::from_utf8_lossy(&run.stdout).starts_with("rounds "));
    std::fs::remove_dir_all(dir).ok();
}

fn tempfile_dir() -> PathBuf {
    let dir = std::env::temp_dir().join(format!("cnsqkd-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}
