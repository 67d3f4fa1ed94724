// Shared by multiple test binaries; not every binary uses every helper.
#![allow(dead_code)]

use std::ffi::OsStr;
use std::path::Path;
use std::process::{Command, Output};

/// Runs the `mubkit` binary with the given arguments in `dir`.
pub fn mubkit<I, S>(dir: &Path, args: I) -> Output
where
    I: IntoIterator<Item = S>,
    S: AsRef<OsStr>,
{
    Command::new(env!("CARGO_BIN_EXE_mubkit"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("failed to spawn mubkit")
}

pub fn exit_code(output: &Output) -> i32 {
    output.status.code().expect("process was killed by a signal")
}

pub fn stdout_text(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

pub fn stderr_text(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}
