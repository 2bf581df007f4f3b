use std::io;

fn main() {
    frogbound::cli::configure_threads();
    let code = frogbound::cli::run(std::env::args_os(), &mut io::stdout(), &mut io::stderr());
    std::process::exit(code);
}
