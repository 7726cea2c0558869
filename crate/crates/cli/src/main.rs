use std::io;
use std::process::ExitCode;

fn main() -> ExitCode {
    let code = hartigan_lab::run_cli(
        std::env::args_os(),
        &mut io::stdout().lock(),
        &mut io::stderr(),
    );
    ExitCode::from(code)
}
