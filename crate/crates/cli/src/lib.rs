//! Command-line front end for the operadkit verification suites.
//!
//! Exit status is 0 when every check passes, 1 when some check fails (a
//! JSON failure record goes to standard error), and 2 when the command line,
//! an input file, or the output path is rejected.

pub mod config;
pub mod report;
pub mod run;

use std::ffi::OsString;
use std::path::PathBuf;

use config::{parse_args, ConfigError, RunConfig};
use report::{failure_record, Report};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

/// Runs the command line `args` (including the program name) and returns the
/// exit status. `output_dir` is the default report directory.
pub fn main_with<I, T>(args: I, output_dir: Option<PathBuf>) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cfg = match parse_args(args) {
        Ok(cfg) => cfg,
        Err(ConfigError::Usage(e)) => {
            let _ = e.print();
            return if e.use_stderr() {
                EXIT_INVALID
            } else {
                EXIT_PASS
            };
        }
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INVALID;
        }
    };
    let out = match run::execute(&cfg) {
        Ok(out) => out,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INVALID;
        }
    };
    let timing = cfg.timing.then(|| run::timing_json(&out));
    emit(&cfg, &Report::new(&cfg, out.results, timing), output_dir)
}

/// Writes the report to its destination and returns the exit status it
/// implies, printing the first failure to standard error.
pub fn emit(cfg: &RunConfig, report: &Report, output_dir: Option<PathBuf>) -> i32 {
    let text = report.render(cfg.format);
    match cfg.destination(output_dir) {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                if let Err(e) = std::fs::create_dir_all(dir) {
                    eprintln!("error: --output: cannot create {}: {e}", dir.display());
                    return EXIT_INVALID;
                }
            }
            if let Err(e) = std::fs::write(&path, &text) {
                eprintln!("error: --output: cannot write {}: {e}", path.display());
                return EXIT_INVALID;
            }
        }
        None => print!("{text}"),
    }
    match failure_record(report) {
        Some(record) => {
            eprintln!("{record}");
            EXIT_FAIL
        }
        None => EXIT_PASS,
    }
}
