use std::process::exit;

fn main() {
    exit(gfrac::cli::run(std::env::args_os()));
}
