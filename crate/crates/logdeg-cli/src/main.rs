use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    if let Err(e) = logdeg_cli::configure_threads() {
        eprintln!("logdeg: {e}");
        return ExitCode::from(1);
    }
    let argv: Vec<String> = std::env::args().collect();
    let (code, text) = logdeg_cli::run(&argv);
    let mut out = std::io::stdout().lock();
    if out.write_all(text.as_bytes()).and_then(|_| out.flush()).is_err() {
        return ExitCode::from(2);
    }
    ExitCode::from(code as u8)
}
