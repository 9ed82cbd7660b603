//! Thin binary wrapper: all behavior lives in `arboreal::cli`.

fn main() {
    let mut stdout = std::io::stdout().lock();
    let code = arboreal::cli::run(std::env::args_os(), &mut stdout);
    drop(stdout);
    std::process::exit(code);
}
