use std::process::ExitCode;

use operadkit_cli::config::OUTPUT_DIR_ENV;

fn main() -> ExitCode {
    let output_dir = std::env::var_os(OUTPUT_DIR_ENV)
        .filter(|v| !v.is_empty())
        .map(Into::into);
    let code = operadkit_cli::main_with(std::env::args_os(), output_dir);
    ExitCode::from(code as u8)
}
