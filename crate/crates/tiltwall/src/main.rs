use std::process::exit;

fn main() {
    exit(tiltwall::cli::run());
}
