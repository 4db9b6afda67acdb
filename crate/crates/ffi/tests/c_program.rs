//! Builds the shared library, compiles a C program against the generated
//! header and runs it.

use std::path::{Path, PathBuf};
use std::process::Command;

fn run(cmd: &mut Command) -> std::process::Output {
    let out = cmd.output().unwrap_or_else(|e| panic!("{cmd:?}: {e}"));
    assert!(
        out.status.success(),
        "{cmd:?} failed\nstdout:\n{}\nstderr:\n{}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

#[test]
fn c_program_links_and_runs() {
    let crate_dir = Path::new(env!("CARGO_MANIFEST_DIR"));
    let workspace = crate_dir.parent().and_then(Path::parent).unwrap();
    // A separate target directory keeps this build clear of the lock held by the outer cargo.
    let target = workspace.join("target").join("capi-check");
    run(Command::new(env!("CARGO"))
        .args(["build", "--quiet", "-p", "isolab-ffi"])
        // The smoke program needs no optimization; this keeps a cold build short.
        .args(["--config", "profile.dev.package.\"*\".opt-level=0", "--config", "profile.dev.debug=0"])
        .arg("--target-dir")
        .arg(&target)
        .current_dir(workspace));
    let lib_dir = target.join("debug");

    let exe: PathBuf = target.join("smoke");
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    run(Command::new(cc)
        .args(["-std=c11", "-Wall", "-Wextra", "-Werror", "-pedantic"])
        .arg("-I")
        .arg(crate_dir.join("include"))
        .arg(crate_dir.join("tests/c/smoke.c"))
        .arg("-L")
        .arg(&lib_dir)
        .args(["-lisolab_ffi", "-o"])
        .arg(&exe));

    let out = run(Command::new(&exe).env("LD_LIBRARY_PATH", &lib_dir));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.starts_with("ok "), "{stdout}");
}
