use std::io;

fn main() {
    let code = secant_dyn::cli::run(std::env::args_os(), &mut io::stdout(), &mut io::stderr());
    std::process::exit(code);
}
