use std::process::ExitCode;

fn main() -> ExitCode {
    let (code, out) = cantor_ramsey::cli::run(std::env::args_os());
    if code == 2 {
        eprint!("{out}");
    } else {
        print!("{out}");
    }
    ExitCode::from(code as u8)
}
