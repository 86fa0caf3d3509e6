use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let cwd = match std::env::current_dir() {
        Ok(dir) => dir,
        Err(e) => {
            eprintln!("error: cannot determine the working directory: {e}");
            return ExitCode::from(1);
        }
    };
    let mut out = std::io::stdout().lock();
    let mut err = std::io::stderr().lock();
    let code = nova::cli::run(std::env::args_os(), &cwd, &mut out, &mut err);
    let _ = out.flush();
    ExitCode::from(code as u8)
}
